"""Feature + classifier pipelines, validation grid search and single runs."""

from __future__ import annotations

import itertools
import logging
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping, NamedTuple, Sequence

from topicconf.corpus.model import Corpus
from topicconf.features.ngrams import (
    NgramVocab,
    counts_matrix,
    gram_counts,
    normalize_whitespace,
    vocab_from_counts,
    word_units,
)
from topicconf.features.space import FeatureMatrix, combine_matrices, fit_scaler
from topicconf.features.stylometric import StyloConfig, default_config, stylometric_matrix
from topicconf.harness.metrics import EvalReport, balanced_accuracy, evaluate
from topicconf.harness.splits import ScenarioSplit
from topicconf.models.nb import predict_nb, train_nb
from topicconf.models.svm import SVMConfig, predict, train_svm
from topicconf.textprep.masking import FrequencyList, MaskingRule, derive_frequency_list, mask_text
from topicconf.textprep.postag import pos_tags

log = logging.getLogger(__name__)

BLOCKS = ("stylo", "pos", "char", "word", "content")
PARAM_ORDER = ("k", "n_ch", "n_w", "f_t")


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Hyperparameter grids; each pipeline uses the subset that applies to it."""

    k: tuple[int, ...] = (100, 200, 300, 400, 500, 1000, 2000, 3000, 4000, 5000)
    f_t: tuple[int, ...] = tuple(range(5, 55, 5))
    n_ch: tuple[int, ...] = (3, 4, 5, 6, 7, 8)
    n_w: tuple[int, ...] = (1, 2, 3)

    @classmethod
    def from_dict(cls, data: Mapping | None) -> "GridSpec":
        data = dict(data or {})
        unknown = set(data) - set(PARAM_ORDER)
        if unknown:
            raise PipelineError(f"unknown grid parameters {sorted(unknown)}")
        return cls(**{k: tuple(int(x) for x in v) for k, v in data.items()})

    def as_dict(self) -> dict:
        return {p: list(getattr(self, p)) for p in PARAM_ORDER}


@dataclass(frozen=True)
class PipelineSpec:
    """A named feature/classifier combination.

    ``blocks`` are concatenated in order. ``masking`` selects which n-gram
    block (``char`` or ``word``) is computed on masked text; stylometric and
    POS blocks always see the original text. The ``content`` block is word
    n-grams with function words removed.
    """

    name: str
    blocks: tuple[str, ...] = ()
    masking: Literal["char", "word"] | None = None
    model: Literal["svm", "nb"] = "svm"
    svm: SVMConfig = field(default_factory=SVMConfig)
    nb_alpha: float = 1.0
    pos_provider: str = "auto"
    stylo: StyloConfig | None = None

    def __post_init__(self):
        bad = [b for b in self.blocks if b not in BLOCKS]
        if bad:
            raise PipelineError(f"unknown feature blocks {bad}")
        if self.model == "svm" and not self.blocks:
            raise PipelineError(f"pipeline {self.name!r} has no feature blocks")
        if self.masking is not None and self.masking not in self.blocks:
            raise PipelineError(f"masking level {self.masking!r} needs a {self.masking!r} block")

    def params(self) -> tuple[str, ...]:
        """Hyperparameters this pipeline is tuned over, in grid order."""
        if self.model == "nb":
            return ()
        used = set()
        if self.masking:
            used.add("k")
        if "char" in self.blocks:
            used |= {"n_ch", "f_t"}
        if {"word", "pos", "content"} & set(self.blocks):
            used |= {"n_w", "f_t"}
        return tuple(p for p in PARAM_ORDER if p in used)

    def grid_points(self, grid: GridSpec) -> list[dict[str, int]]:
        names = self.params()
        values = [getattr(grid, p) for p in names]
        for p, v in zip(names, values):
            if not v:
                raise PipelineError(f"grid for {p!r} is empty")
        return [dict(zip(names, combo)) for combo in itertools.product(*values)]


def _presets() -> dict[str, PipelineSpec]:
    p = PipelineSpec
    return {
        s.name: s
        for s in [
            p("stylo", ("stylo",)),
            p("pos", ("pos",)),
            p("pos+stylo", ("stylo", "pos")),
            p("char", ("char",)),
            p("char+stylo", ("stylo", "char")),
            p("char+stylo+pos", ("stylo", "pos", "char")),
            p("word", ("word",)),
            p("word+stylo", ("stylo", "word")),
            p("word+stylo+pos", ("stylo", "pos", "word")),
            p("mask-ch", ("char",), masking="char"),
            p("mask-ch+stylo+pos", ("stylo", "pos", "char"), masking="char"),
            p("mask-w", ("word",), masking="word"),
            p("mask-w+stylo+pos", ("stylo", "pos", "word"), masking="word"),
            p("content-word", ("content",)),
            p("nb-baseline", (), model="nb"),
        ]
    }


PRESETS: dict[str, PipelineSpec] = _presets()


def get_pipeline(name: str, **overrides) -> PipelineSpec:
    try:
        spec = PRESETS[name]
    except KeyError:
        raise PipelineError(f"unknown pipeline {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(spec, **overrides) if overrides else spec


class Sample(NamedTuple):
    """What a pipeline may see of a document: no topic, no author."""

    id: str
    text: str
    pos_tags: tuple[str, ...] | None


def _samples(corpus: Corpus, ids: Sequence[str]) -> tuple[list[Sample], list[str]]:
    docs = corpus.get(ids)
    return [Sample(d.id, d.text, d.pos_tags) for d in docs], [d.author for d in docs]


@dataclass
class SplitData:
    train: list[Sample]
    val: list[Sample]
    test: list[Sample]
    y_train: list[str]
    y_val: list[str]
    y_test: list[str]

    @classmethod
    def from_split(cls, split: ScenarioSplit, corpus: Corpus) -> "SplitData":
        split.check_against(corpus)
        tr, ytr = _samples(corpus, split.train)
        va, yva = _samples(corpus, split.val)
        te, yte = _samples(corpus, split.test)
        return cls(tr, va, te, ytr, yva, yte)

    def parts(self) -> tuple[list[Sample], list[Sample], list[Sample]]:
        return self.train, self.val, self.test


class FeatureBuilder:
    """Builds train/val/test matrices for grid points, caching shared work.

    Vocabularies and scalers are fitted on the training part only. For a
    given block and gram order the vocabulary at threshold ``f_t`` is a
    prefix of the lowest-threshold vocabulary, so counts are computed once
    and thresholds just select leading columns.
    """

    def __init__(self, pipeline: PipelineSpec, data: SplitData,
                 freqlist: FrequencyList | None = None, min_f_t: int = 1):
        self.pipeline = pipeline
        self.data = data
        self.freqlist = freqlist
        self.min_f_t = min_f_t
        self._stylo = None
        self._units: dict[tuple, list] = {}
        self._full: dict[tuple, tuple[NgramVocab, list[FeatureMatrix]]] = {}
        self._masked: dict[int, tuple[list[str], ...]] = {}
        stylo = pipeline.stylo or default_config()
        self._function_words = frozenset(stylo.function_words)

    def _texts(self, level: str, k: int | None) -> tuple[list[str], ...]:
        if k is None or self.pipeline.masking != level:
            return tuple([s.text for s in part] for part in self.data.parts())
        if k not in self._masked:
            if self.freqlist is None:
                raise PipelineError(f"pipeline {self.pipeline.name!r} needs a frequency list for masking")
            rule = MaskingRule(k, self.freqlist, self.pipeline.masking)
            self._masked[k] = tuple([mask_text(s.text, rule) for s in part] for part in self.data.parts())
        return self._masked[k]

    def _unit_seqs(self, block: str, k: int | None) -> tuple[list, ...]:
        key = (block, k if self.pipeline.masking == block else None)
        if key in self._units:
            return self._units[key]
        if block == "pos":
            seqs = tuple([pos_tags(s, self.pipeline.pos_provider) for s in part] for part in self.data.parts())
        elif block == "char":
            seqs = tuple([normalize_whitespace(t) for t in part] for part in self._texts("char", k))
        elif block == "word":
            seqs = tuple([word_units(t) for t in part] for part in self._texts("word", k))
        else:
            fw = self._function_words
            seqs = tuple([[u for u in word_units(s.text) if u not in fw] for s in part]
                         for part in self.data.parts())
        self._units[key] = seqs
        return seqs

    def _full_block(self, block: str, n: int, k: int | None) -> tuple[NgramVocab, list[FeatureMatrix]]:
        key = (block, n, k if self.pipeline.masking == block else None)
        if key not in self._full:
            level = "pos" if block == "pos" else "char" if block == "char" else "word"
            per_part = [[gram_counts(seq, n) for seq in part] for part in self._unit_seqs(block, k)]
            total = Counter()
            for c in per_part[0]:
                total.update(c)
            vocab = vocab_from_counts(total, level, n, self.min_f_t, "train",
                                      self.pipeline.pos_provider, name=block)
            self._full[key] = (vocab, [counts_matrix(p, vocab) for p in per_part])
        return self._full[key]

    def _stylo_block(self) -> list[FeatureMatrix]:
        if self._stylo is None:
            config = self.pipeline.stylo or default_config()
            self._stylo = [stylometric_matrix([s.text for s in part], config) for part in self.data.parts()]
        return self._stylo

    def build(self, params: Mapping[str, int]) -> tuple[FeatureMatrix, FeatureMatrix, FeatureMatrix]:
        """Scaled (train, val, test) matrices at one grid point."""
        parts: list[list[FeatureMatrix]] = [[], [], []]
        for block in self.pipeline.blocks:
            if block == "stylo":
                mats = self._stylo_block()
            else:
                n = params["n_ch"] if block == "char" else params["n_w"]
                vocab, full = self._full_block(block, n, params.get("k"))
                keep = sum(c >= params["f_t"] for c in vocab.counts)
                if keep == 0:
                    raise PipelineError(
                        f"{block} {n}-grams: no gram reaches f_t={params['f_t']} in training data"
                    )
                mats = [m.columns(slice(0, keep)) for m in full]
            for i in range(3):
                parts[i].append(mats[i])
        train, val, test = (combine_matrices(p) for p in parts)
        scaler = fit_scaler(train)
        return scaler.transform(train), scaler.transform(val), scaler.transform(test)


@dataclass(frozen=True)
class GridResult:
    params: dict[str, int]
    val_score: float
    n_features: int
    scores: tuple[tuple[dict, float, int], ...] = ()


def _fit_predict(pipeline: PipelineSpec, X_train: FeatureMatrix, y_train: Sequence[str],
                 *others: FeatureMatrix) -> list[list[str]]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        model = train_svm(X_train, y_train, pipeline.svm)
    return [predict(model, X.values) for X in others]


def grid_search(
    grid: GridSpec,
    data: SplitData,
    pipeline: PipelineSpec,
    freqlist: FrequencyList | None = None,
    builder: FeatureBuilder | None = None,
) -> GridResult:
    """Evaluate every applicable grid point on the validation set.

    The best point maximises validation balanced accuracy; ties go to the
    smaller feature count, then to the earlier grid point. Test data is
    never scored here.
    """
    freqlist = resolve_freqlist(pipeline, data, freqlist)
    points = pipeline.grid_points(grid)
    points = _usable_points(points, freqlist)
    if pipeline.model == "nb":
        model = train_nb([s.text for s in data.train], data.y_train, pipeline.nb_alpha)
        score = balanced_accuracy(data.y_val, [predict_nb(model, s.text) for s in data.val])
        return GridResult({}, score, len(model.vocabulary), (({}, score, len(model.vocabulary)),))
    builder = builder or FeatureBuilder(pipeline, data, freqlist, min(grid.f_t) if grid.f_t else 1)
    results = []
    for params in points:
        try:
            X_tr, X_va, _ = builder.build(params)
        except PipelineError as exc:
            log.debug("skipping %s: %s", params, exc)
            continue
        (pred_val,) = _fit_predict(pipeline, X_tr, data.y_train, X_va)
        results.append((params, balanced_accuracy(data.y_val, pred_val), len(X_tr.space)))
    if not results:
        raise PipelineError(f"no usable grid point for pipeline {pipeline.name!r}")
    best_i = min(range(len(results)), key=lambda i: (-results[i][1], results[i][2], i))
    params, score, n_feat = results[best_i]
    return GridResult(dict(params), score, n_feat, tuple(results))


def resolve_freqlist(pipeline: PipelineSpec, data: SplitData,
                     freqlist: FrequencyList | None) -> FrequencyList | None:
    """The masking wordlist; without one, rank the training texts' words."""
    if freqlist is not None or not pipeline.masking:
        return freqlist
    log.info("no wordlist given for %r; deriving one from the training texts", pipeline.name)
    return derive_frequency_list(s.text for s in data.train)


def _usable_points(points: list[dict], freqlist: FrequencyList | None) -> list[dict]:
    if not points or "k" not in points[0]:
        return points
    if freqlist is None:
        raise PipelineError("masking pipelines need a frequency list")
    usable = [p for p in points if p["k"] <= len(freqlist)]
    if len(usable) < len(points):
        warnings.warn(f"dropping masking thresholds above the wordlist size {len(freqlist)}",
                      stacklevel=3)
    if not usable:
        raise PipelineError(f"every masking threshold exceeds the wordlist size {len(freqlist)}")
    return usable


def run_experiment(
    split: ScenarioSplit,
    pipeline: PipelineSpec,
    corpus: Corpus,
    *,
    group_of: Mapping[str, int] | None = None,
    grid: GridSpec | None = None,
    freqlist: FrequencyList | None = None,
    seed: int | None = None,
) -> EvalReport:
    """Tune on validation, train on train, report on test.

    ``group_of`` (author -> group) is used only to score the test
    predictions; neither it nor topic labels reach the classifier.
    """
    grid = grid or GridSpec()
    if seed is not None:
        pipeline = replace(pipeline, svm=replace(pipeline.svm, seed=seed))
    data = SplitData.from_split(split, corpus)
    if not data.train or not data.test:
        raise PipelineError(f"split {split.label!r} has an empty train or test part")
    if pipeline.model == "nb":
        model = train_nb([s.text for s in data.train], data.y_train, pipeline.nb_alpha)
        preds = [predict_nb(model, s.text) for s in data.test]
        return evaluate(data.y_test, preds, group_of, split.label, {}, len(model.vocabulary))
    freqlist = resolve_freqlist(pipeline, data, freqlist)
    builder = FeatureBuilder(pipeline, data, freqlist, min(grid.f_t) if grid.f_t else 1)
    if data.val:
        best = grid_search(grid, data, pipeline, freqlist, builder)
        params = best.params
    else:
        params = _usable_points(pipeline.grid_points(grid), freqlist)[0]
    X_tr, _, X_te = builder.build(params)
    (preds,) = _fit_predict(pipeline, X_tr, data.y_train, X_te)
    return evaluate(data.y_test, preds, group_of, split.label, params, len(X_tr.space))
