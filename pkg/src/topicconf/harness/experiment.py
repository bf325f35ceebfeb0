"""Experiment definitions, parallel execution and report files.

An experiment file (YAML or JSON) names the corpus, the scenario, the
pipelines and the grids. Each unit of work is one (pipeline, configuration,
repeat) triple; its random stream is derived from the master seed and its
indices only, so results do not depend on scheduling or ``jobs``.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Literal, Mapping

import numpy as np
import yaml

import topicconf
from topicconf.corpus.model import Corpus, load_corpus
from topicconf.harness.metrics import METRICS, EvalReport, aggregate
from topicconf.harness.pipeline import GridSpec, PipelineSpec, get_pipeline, run_experiment
from topicconf.harness.splits import (
    build_confusion_split,
    build_cross_topic_splits,
    build_same_topic_split,
    make_confusion_config,
)
from topicconf.harness.stats import welch_ttest
from topicconf.models.svm import SVMConfig
from topicconf.textprep.masking import FrequencyList, load_frequency_list

log = logging.getLogger(__name__)

Scenario = Literal["confusion", "cross-topic", "same-topic"]
SCENARIOS = ("confusion", "cross-topic", "same-topic")
DEFAULT_CONFIGS = {"confusion": 100, "same-topic": 12}
DEFAULT_REPEATS = {"confusion": 10, "cross-topic": 1, "same-topic": 1}

CSV_COLUMNS = (
    "scenario", "pipeline", "config", "repeat", "split", "seed",
    "topic_order", "group_1", "group_2",
    "accuracy", "balanced_accuracy", "correct_pct", "same_group_err_pct", "cross_group_err_pct",
    "n_predictions", "n_features", "params", "error",
)


@dataclass(frozen=True)
class ExperimentConfig:
    corpus: str
    scenario: Scenario = "confusion"
    pipelines: tuple[str, ...] = ("stylo",)
    grid: GridSpec = field(default_factory=GridSpec)
    n_configs: int | None = None
    repeats: int | None = None
    seed: int = 0
    jobs: int = 1
    out: str = "results"
    freqlist: str | None = None
    pos_provider: str = "auto"
    svm: SVMConfig = field(default_factory=SVMConfig)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if not self.pipelines:
            raise ValueError("no pipelines requested")
        for name in self.pipelines:
            get_pipeline(name)

    @property
    def resolved_configs(self) -> int:
        if self.n_configs is not None:
            return self.n_configs
        return DEFAULT_CONFIGS.get(self.scenario, 0)

    @property
    def resolved_repeats(self) -> int:
        return self.repeats if self.repeats is not None else DEFAULT_REPEATS[self.scenario]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pipelines"] = list(self.pipelines)
        d["grid"] = self.grid.as_dict()
        d["n_configs"] = self.resolved_configs
        d["repeats"] = self.resolved_repeats
        return d

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        data = dict(data)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown experiment fields {sorted(unknown)}")
        if "corpus" not in data:
            raise ValueError("experiment config needs a 'corpus' path")
        if isinstance(data.get("pipelines"), str):
            data["pipelines"] = [data["pipelines"]]
        data["pipelines"] = tuple(data.get("pipelines", ("stylo",)))
        if isinstance(data.get("grid"), Mapping) or data.get("grid") is None:
            data["grid"] = GridSpec.from_dict(data.get("grid"))
        if isinstance(data.get("svm"), Mapping):
            data["svm"] = SVMConfig(**data["svm"])
        return cls(**data)


def load_experiment_config(path: str | Path, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    """Read an experiment file; non-None ``overrides`` replace file values."""
    path = Path(path)
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    if not isinstance(data, Mapping):
        raise ValueError(f"{path}: experiment config must be a mapping")
    # paths in the file are relative to the file; paths from flags to the cwd
    data = dict(data)
    for key in ("corpus", "freqlist"):
        if data.get(key) and not Path(data[key]).is_absolute():
            data[key] = str(path.parent / data[key])
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return ExperimentConfig.from_mapping(data)


def unit_seed(master: int, config: int, repeat: int) -> int:
    return int(np.random.SeedSequence([master, config, repeat]).generate_state(1)[0])


@dataclass(frozen=True)
class Task:
    pipeline: str
    config: int
    repeat: int


_WORKER: dict[str, Any] = {}


def _init_worker(exp: ExperimentConfig, corpus: Corpus | None = None) -> None:
    _WORKER["exp"] = exp
    _WORKER["corpus"] = corpus if corpus is not None else load_corpus(exp.corpus)
    _WORKER["freqlist"] = load_frequency_list(exp.freqlist) if exp.freqlist else None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _run_task(task: Task) -> dict[str, str]:
    exp: ExperimentConfig = _WORKER["exp"]
    corpus: Corpus = _WORKER["corpus"]
    freqlist: FrequencyList | None = _WORKER["freqlist"]
    seed = unit_seed(exp.seed, task.config, task.repeat)
    row = {c: "" for c in CSV_COLUMNS}
    row.update(scenario=exp.scenario, pipeline=task.pipeline, config=str(task.config),
               repeat=str(task.repeat), seed=str(seed))
    try:
        pipeline: PipelineSpec = get_pipeline(task.pipeline, svm=exp.svm, pos_provider=exp.pos_provider)
        group_of = None
        if exp.scenario == "confusion":
            cfg = make_confusion_config(corpus, exp.seed + task.config)
            split = build_confusion_split(cfg, corpus)
            group_of = cfg.group_of
            row.update(topic_order=" ".join(cfg.topic_order), group_1=" ".join(cfg.group(1)),
                       group_2=" ".join(cfg.group(2)))
        elif exp.scenario == "cross-topic":
            split = build_cross_topic_splits(corpus)[task.config]
        else:
            split = build_same_topic_split(corpus, exp.seed + task.config)
        row["split"] = split.label
        report = run_experiment(split, pipeline, corpus, group_of=group_of, grid=exp.grid,
                                freqlist=freqlist, seed=seed)
        row.update({m: _fmt(getattr(report, m)) for m in METRICS})
        row.update(n_predictions=str(report.n_predictions), n_features=str(report.n_features),
                   params=json.dumps(report.params, sort_keys=True))
    except Exception as exc:  # recorded per row; the run continues
        log.error("%s config %d repeat %d failed: %s", task.pipeline, task.config, task.repeat, exc)
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def plan_tasks(exp: ExperimentConfig, corpus: Corpus) -> list[Task]:
    n_configs = exp.resolved_configs
    if exp.scenario == "cross-topic":
        n_configs = len(corpus.topics) * (len(corpus.topics) - 1)
    return [Task(p, c, r) for p, c, r in itertools.product(
        exp.pipelines, range(n_configs), range(exp.resolved_repeats))]


def run_tasks(exp: ExperimentConfig, corpus: Corpus, tasks: list[Task], progress=None) -> list[dict]:
    if exp.jobs <= 1:
        _init_worker(exp, corpus)
        rows = []
        for task in tasks:
            rows.append(_run_task(task))
            if progress:
                progress(len(rows), len(tasks))
        return rows
    rows = []
    with ProcessPoolExecutor(max_workers=exp.jobs, initializer=_init_worker, initargs=(exp, corpus)) as pool:
        for row in pool.map(_run_task, tasks, chunksize=1):
            rows.append(row)
            if progress:
                progress(len(rows), len(tasks))
    return rows


def _report_from_row(row: Mapping[str, str]) -> EvalReport:
    def num(key):
        return float(row[key]) if row.get(key) else None

    return EvalReport(
        accuracy=num("accuracy"),
        balanced_accuracy=num("balanced_accuracy"),
        n_predictions=int(row["n_predictions"] or 0),
        correct_pct=num("correct_pct"),
        same_group_err_pct=num("same_group_err_pct"),
        cross_group_err_pct=num("cross_group_err_pct"),
        config_ref=row.get("split", ""),
    )


def summarize(rows: list[Mapping[str, str]], scenario: str) -> dict:
    pipelines = list(dict.fromkeys(r["pipeline"] for r in rows))
    summary: dict[str, Any] = {"scenario": scenario, "pipelines": {}, "ttests": []}
    values: dict[str, list[float]] = {}
    for name in pipelines:
        ok = [r for r in rows if r["pipeline"] == name and not r["error"]]
        entry: dict[str, Any] = {"rows": sum(r["pipeline"] == name for r in rows), "errors": 0}
        entry["errors"] = entry["rows"] - len(ok)
        if ok:
            agg = aggregate([_report_from_row(r) for r in ok])
            entry["metrics"] = {m: asdict(s) for m, s in agg.items()}
            entry["table_row"] = table_row(agg, scenario)
            values[name] = [float(r["accuracy"]) for r in ok]
        summary["pipelines"][name] = entry
    for a, b in itertools.combinations(values, 2):
        if len(values[a]) >= 2 and len(values[b]) >= 2:
            res = welch_ttest(values[a], values[b])
            summary["ttests"].append({"metric": "accuracy", "a": a, "b": b, **asdict(res)})
    return summary


def table_row(agg, scenario: str) -> str:
    def cell(metric, scale=1.0):
        s = agg[metric]
        return f"{s.mean * scale:.1f} ({s.sd * scale:.1f})"

    if scenario == "confusion" and "correct_pct" in agg:
        return (f"Correct {cell('correct_pct')} | Same-group {cell('same_group_err_pct')} | "
                f"Cross-group {cell('cross_group_err_pct')}")
    s = agg["accuracy"]
    return f"Accuracy {s.mean * 100:.1f} ± ({s.sd * 100:.1f})"


def write_rows(rows: list[Mapping[str, str]], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def read_rows(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def write_manifest(out_dir: Path, config: Mapping, seed: int, corpus_hash: str | None,
                   timings: Mapping[str, float], outputs: list[str]) -> Path:
    manifest = {
        "tool": "topicconf",
        "version": topicconf.__version__,
        "config": config,
        "master_seed": seed,
        "corpus_sha256": corpus_hash,
        "timings_s": dict(timings),
        "outputs": sorted(outputs),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


@dataclass
class ExperimentResult:
    rows: list[dict]
    summary: dict
    out_dir: Path

    @property
    def n_errors(self) -> int:
        return sum(bool(r["error"]) for r in self.rows)


def run_experiment_file(exp: ExperimentConfig, progress=None) -> ExperimentResult:
    """Run every task of ``exp`` and write results.csv, summary.json, manifest.json."""
    t0 = time.perf_counter()
    corpus = load_corpus(exp.corpus)
    t_load = time.perf_counter() - t0
    tasks = plan_tasks(exp, corpus)
    rows = run_tasks(exp, corpus, tasks, progress)
    t_run = time.perf_counter() - t0 - t_load
    summary = summarize(rows, exp.scenario)
    out = Path(exp.out)
    out.mkdir(parents=True, exist_ok=True)
    write_rows(rows, out / "results.csv")
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    write_manifest(out, exp.as_dict(), exp.seed, corpus.content_hash(),
                   {"load": t_load, "run": t_run, "total": time.perf_counter() - t0},
                   ["results.csv", "summary.json", "manifest.json"])
    return ExperimentResult(rows, summary, out)


def compare_reports(path_a: str | Path, path_b: str | Path,
                    pipeline_a: str | None = None, pipeline_b: str | None = None) -> dict:
    """Welch t-test per metric between two results.csv files.

    ``pipeline_a``/``pipeline_b`` restrict each file to one pipeline's rows.
    """
    def rows(path, pipeline):
        return [r for r in read_rows(path)
                if not r.get("error") and (pipeline is None or r.get("pipeline") == pipeline)]

    rows_a, rows_b = rows(path_a, pipeline_a), rows(path_b, pipeline_b)
    if len(rows_a) != len(rows_b):
        raise ValueError(f"reports have different numbers of rows ({len(rows_a)} vs {len(rows_b)})")
    if len(rows_a) < 2:
        raise ValueError("each report needs at least two rows")
    out = {"a": str(path_a), "b": str(path_b), "n": len(rows_a), "tests": {}}
    for metric in METRICS:
        va = [r.get(metric, "") for r in rows_a]
        vb = [r.get(metric, "") for r in rows_b]
        if any(v == "" for v in va + vb):
            continue
        res = welch_ttest([float(v) for v in va], [float(v) for v in vb])
        out["tests"][metric] = asdict(res)
    if not out["tests"]:
        raise ValueError("no metric column is complete in both reports")
    return out


def with_overrides(exp: ExperimentConfig, **kwargs) -> ExperimentConfig:
    return replace(exp, **{k: v for k, v in kwargs.items() if v is not None})
