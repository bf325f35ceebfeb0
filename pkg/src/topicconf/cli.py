"""Command-line entry point: ``topicconf <command> ...``.

Option precedence for experiment commands: command-line flags, then the
``--config`` file, then built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import threading
import time
from pathlib import Path

from topicconf import __version__
from topicconf.corpus.fetch import API_KEY_ENV, FetchAuthError, assemble_corpus, fetch_articles, planned_requests
from topicconf.corpus.model import CorpusError, corpus_stats, load_corpus, save_corpus, Corpus, Document
from topicconf.harness import experiment as exp_mod
from topicconf.harness.pipeline import GridSpec, PipelineError, PRESETS, SplitData, get_pipeline, grid_search
from topicconf.harness.splits import SplitError, build_confusion_split, make_confusion_config
from topicconf.textprep.masking import MaskingRule, derive_frequency_list, load_frequency_list, mask_text

log = logging.getLogger("topicconf")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's unset flag from clobbering one given before it
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="parallel workers")
    p.add_argument("--out", default=argparse.SUPPRESS, help="output directory or file")
    p.add_argument("--config", default=argparse.SUPPRESS, help="experiment config (YAML or JSON)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="topicconf", parents=[common],
                                     description="Authorship attribution and topic-confusion experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", parents=[common], help="download articles listed in a URL file")
    p.add_argument("url_list")
    p.add_argument("--api-key", help=f"API key (default: ${API_KEY_ENV})")
    p.add_argument("--dry-run", action="store_true", help="print planned requests and exit")
    p.add_argument("--corpus", help="also write a corpus file built from the fetched articles")

    p = sub.add_parser("stats", parents=[common], help="descriptive corpus statistics")
    p.add_argument("corpus")
    p.add_argument("--csv", help="write per-author/per-topic counts here")

    p = sub.add_parser("validate", parents=[common], help="check corpus records and cell balance")
    p.add_argument("corpus")
    p.add_argument("--min-per-cell", type=int, default=1)

    p = sub.add_parser("mask", parents=[common], help="mask a text file or corpus")
    p.add_argument("input")
    p.add_argument("-k", type=int, required=True, help="number of top-ranked words to keep")
    p.add_argument("--freqlist", help="ranked wordlist, one word per line (default: derived from input)")

    for name, helptext in (("confusion", "topic confusion task"),
                           ("cross-topic", "cross-topic scenario"),
                           ("same-topic", "same-topic scenario")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _experiment_flags(p)

    p = sub.add_parser("grid", parents=[common], help="grid search on one confusion configuration")
    _experiment_flags(p)

    p = sub.add_parser("compare", parents=[common], help="Welch t-tests between two results.csv files")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--pipeline-a", help="only rows of this pipeline from report A")
    p.add_argument("--pipeline-b", help="only rows of this pipeline from report B")
    return parser


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus")
    p.add_argument("--pipelines", nargs="+", metavar="NAME", help=f"any of: {', '.join(PRESETS)}")
    p.add_argument("--n-configs", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--freqlist")
    p.add_argument("--pos-provider", choices=("auto", "embedded", "precomputed"))
    p.add_argument("--grid", help='JSON object overriding grids, e.g. \'{"f_t": [5]}\'')


def _opt(args, name, default=None):
    return getattr(args, name, default)


def _experiment_config(args, scenario: str) -> exp_mod.ExperimentConfig:
    grid = json.loads(args.grid) if args.grid else None
    overrides = {
        "scenario": scenario,
        "corpus": args.corpus,
        "pipelines": args.pipelines,
        "n_configs": args.n_configs,
        "repeats": args.repeats,
        "freqlist": args.freqlist,
        "pos_provider": args.pos_provider,
        "seed": _opt(args, "seed"),
        "jobs": _opt(args, "jobs"),
        "out": _opt(args, "out"),
    }
    config = _opt(args, "config")
    if config:
        data = exp_mod.load_experiment_config(config, overrides)
        if grid is not None:
            data = exp_mod.with_overrides(data, grid=GridSpec.from_dict({**data.grid.as_dict(), **grid}))
        return data
    if not args.corpus:
        raise UsageError("give --corpus or --config")
    overrides["grid"] = grid
    return exp_mod.ExperimentConfig.from_mapping({k: v for k, v in overrides.items() if v is not None})


class _Progress:
    """Single-line progress on stderr; serialized across callers."""

    def __init__(self, label: str, enabled: bool):
        self.label, self.enabled = label, enabled
        self._lock = threading.Lock()

    def __call__(self, done: int, total: int) -> None:
        if not self.enabled:
            return
        with self._lock:
            end = "\n" if done == total else ""
            print(f"\r{self.label}: {done}/{total}", end=end, file=sys.stderr, flush=True)


def cmd_fetch(args) -> int:
    if args.dry_run:
        for url in planned_requests(args.url_list):
            print(f"GET {url}")
        return EXIT_OK
    key = args.api_key or os.environ.get(API_KEY_ENV)
    if not key:
        raise UsageError(f"no API key: pass --api-key or set {API_KEY_ENV}")
    out = Path(_opt(args, "out", "articles"))
    t0 = time.perf_counter()
    try:
        report = fetch_articles(args.url_list, key, out, jobs=_opt(args, "jobs", 4))
    except FetchAuthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    outputs = [str(p.relative_to(out)) for p in sorted(out.glob("*.txt"))]
    if args.corpus:
        save_corpus(assemble_corpus(args.url_list, out), args.corpus)
    (out / "fetch_report.json").write_text(json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8")
    exp_mod.write_manifest(out, {"command": "fetch", "url_list": args.url_list}, 0, None,
                           {"fetch": time.perf_counter() - t0}, outputs + ["fetch_report.json"])
    print(f"fetched {report.fetched}, skipped {report.skipped}, failed {report.failed}")
    for item in report.failures():
        print(f"  {item.article_id}: {item.reason}", file=sys.stderr)
    return EXIT_OK if report.failed == 0 else EXIT_FAILED


def cmd_stats(args) -> int:
    t0 = time.perf_counter()
    corpus = load_corpus(args.corpus)
    stats = corpus_stats(corpus)
    print(stats.format_table())
    csv_path = args.csv
    out = _opt(args, "out")
    if out and not csv_path:
        Path(out).mkdir(parents=True, exist_ok=True)
        csv_path = str(Path(out) / "stats.csv")
    if csv_path:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=["kind", "name", "documents", "words"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(stats.rows())
        exp_mod.write_manifest(Path(csv_path).parent, {"command": "stats", "corpus": args.corpus}, 0,
                               corpus.content_hash(), {"stats": time.perf_counter() - t0},
                               [Path(csv_path).name])
    return EXIT_OK


def cmd_validate(args) -> int:
    from topicconf.corpus.model import validate_balance

    corpus = load_corpus(args.corpus)
    report = validate_balance(corpus, args.min_per_cell)
    print(f"{len(corpus)} documents, {len(corpus.authors)} authors, {len(corpus.topics)} topics")
    for author, topic, n in report.deficient:
        print(f"  cell ({author}, {topic}) has {n} < {args.min_per_cell} documents")
    print("balance: ok" if report.passed else f"balance: {len(report.deficient)} deficient cells")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_mask(args) -> int:
    path = Path(args.input)
    is_corpus = path.suffix in (".jsonl", ".csv")
    corpus = load_corpus(path) if is_corpus else None
    texts = [d.text for d in corpus] if corpus else [path.read_text(encoding="utf-8")]
    freqlist = load_frequency_list(args.freqlist) if args.freqlist else derive_frequency_list(texts)
    rule = MaskingRule(args.k, freqlist)
    out = _opt(args, "out")
    if corpus:
        # POS tags stay aligned: masking keeps word boundaries
        masked = Corpus(tuple(Document(d.id, d.author, d.topic, mask_text(d.text, rule), d.pos_tags)
                              for d in corpus))
        if not out:
            raise UsageError("masking a corpus needs --out")
        save_corpus(masked, out)
    else:
        result = mask_text(texts[0], rule)
        if out:
            Path(out).write_text(result, encoding="utf-8")
        else:
            sys.stdout.write(result)
    return EXIT_OK


def cmd_experiment(args) -> int:
    exp = _experiment_config(args, args.command)
    progress = _Progress(args.command, sys.stderr.isatty() or args.verbose > 0)
    result = exp_mod.run_experiment_file(exp, progress)
    for name, entry in result.summary["pipelines"].items():
        row = entry.get("table_row", "no successful runs")
        print(f"{name:<20} {row}   [{entry['rows']} rows, {entry['errors']} errors]")
    for t in result.summary["ttests"]:
        print(f"  {t['a']} vs {t['b']}: t={t['t']:.3f} p={t['p']:.4f}")
    print(f"wrote {result.out_dir}/results.csv, summary.json, manifest.json")
    return EXIT_OK if result.n_errors == 0 else EXIT_FAILED


def cmd_grid(args) -> int:
    exp = _experiment_config(args, "confusion")
    t0 = time.perf_counter()
    corpus = load_corpus(exp.corpus)
    freqlist = load_frequency_list(exp.freqlist) if exp.freqlist else None
    cfg = make_confusion_config(corpus, exp.seed)
    data = SplitData.from_split(build_confusion_split(cfg, corpus), corpus)
    report = {"confusion_config": cfg.as_dict(), "pipelines": {}}
    for name in exp.pipelines:
        pipeline = get_pipeline(name, svm=exp.svm, pos_provider=exp.pos_provider)
        best = grid_search(exp.grid, data, pipeline, freqlist)
        report["pipelines"][name] = {
            "best": {"params": best.params, "val_balanced_accuracy": best.val_score, "n_features": best.n_features},
            "points": [{"params": p, "val_balanced_accuracy": s, "n_features": n} for p, s, n in best.scores],
        }
        print(f"{name:<20} best {best.params} val balanced accuracy {best.val_score:.4f} "
              f"({best.n_features} features, {len(best.scores)} points)")
    out = Path(exp.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "grid.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    exp_mod.write_manifest(out, exp.as_dict(), exp.seed, corpus.content_hash(),
                           {"grid": time.perf_counter() - t0}, ["grid.json"])
    return EXIT_OK


def cmd_compare(args) -> int:
    result = exp_mod.compare_reports(args.report_a, args.report_b, args.pipeline_a, args.pipeline_b)
    for metric, t in result["tests"].items():
        print(f"{metric:<20} A {t['mean_a']:.4f} (SD {t['sd_a']:.4f})  B {t['mean_b']:.4f} (SD {t['sd_b']:.4f})"
              f"  t={t['t']:.3f} df={t['df']:.1f} p={t['p']:.4f}")
    out = _opt(args, "out")
    if out:
        Path(out).write_text(json.dumps(result, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


COMMANDS = {
    "fetch": cmd_fetch,
    "stats": cmd_stats,
    "validate": cmd_validate,
    "mask": cmd_mask,
    "confusion": cmd_experiment,
    "cross-topic": cmd_experiment,
    "same-topic": cmd_experiment,
    "grid": cmd_grid,
    "compare": cmd_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, SplitError, PipelineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
