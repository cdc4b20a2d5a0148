"""Command-line experiment runner.

Verbs: ``generate`` (variant corpora), ``train`` (one cell),
``experiment`` (the full grid from a config file), ``bench-decode``
(partial vs full decode timing), ``report`` (re-emit report files).
Exit code is 0 only when every requested cell completed.
"""

import argparse
import json
import os
import sys
from dataclasses import fields

from ..data import load_corpus
from .config import (
    ExperimentConfig,
    ConfigInvalid,
    load_config,
    validate,
    write_resolved,
)
from .report import RunReport, emit_report, text_table
from .run import (
    EmptyCorpus,
    benchmark_decode,
    compute_run_stats,
    environment_note,
    prepare_corpora,
    run_cell,
    run_experiment,
)


def _add_config_overrides(parser):
    """Flags mirroring ExperimentConfig fields (dashes for underscores)."""
    for f in fields(ExperimentConfig):
        flag = "--" + f.name.replace("_", "-")
        parser.add_argument(flag, dest=f.name, default=None)


def _config_from_args(args, base=None) -> ExperimentConfig:
    from .config import config_from_mapping

    raw = {}
    if base is not None:
        for f in fields(ExperimentConfig):
            value = getattr(base, f.name)
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            elif isinstance(value, bool):
                value = "on" if value else "off"
            raw[f.name] = str(value)
    for f in fields(ExperimentConfig):
        override = getattr(args, f.name, None)
        if override is not None:
            raw[f.name] = override
    return config_from_mapping(raw)


def _log(message):
    print(message, flush=True)


def cmd_generate(args) -> int:
    cfg = validate(_config_from_args(args))
    corpora = prepare_corpora(cfg, _log)
    for variant, splits in corpora.items():
        for split, corpus in splits.items():
            _log(f"{variant}/{split}: {len(corpus)} files in "
                 f"{corpus.directory}")
    return 0


def cmd_train(args) -> int:
    cfg = validate(_config_from_args(args))
    variant = args.variant
    mode = args.mode
    if variant not in cfg.variants:
        cfg.variants = (variant,)
    cfg.modes = (mode,)
    corpora = prepare_corpora(cfg, _log)
    stats = compute_run_stats(cfg, corpora, _log)
    _log(f"cell {variant}/{mode}")
    cell = run_cell(cfg, corpora, stats, variant, mode, _log)
    report = RunReport(
        cells=[cell],
        config_echo={
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in vars(cfg).items()
        },
        environment=environment_note(),
    )
    emit_report(report, cfg.out_dir)
    _log(text_table(report))
    _log(f"checkpoint: {cell.checkpoint}")
    return 0


def cmd_experiment(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        cfg = _config_from_args(args, base=cfg)
    else:
        cfg = _config_from_args(args)
    report = run_experiment(cfg, _log)
    _log("")
    _log(text_table(report))
    _log(f"report files in {cfg.out_dir}")
    return 0 if not any(c.failed for c in report.cells) else 1


def cmd_bench_decode(args) -> int:
    corpus = load_corpus(args.corpus)
    result = benchmark_decode(
        corpus,
        repetitions=args.repetitions,
        limit=args.limit,
        compare_backends=args.compare_backends,
    )
    _log(
        f"{result['files']} files x {result['repetitions']} repetitions"
    )
    _log(
        f"partial decode: {result['partial_mean'] * 1e3:.3f} ms/image   "
        f"full decode: {result['full_mean'] * 1e3:.3f} ms/image   "
        f"speedup: {result['speedup']:.2f}x"
    )
    if "backends" in result:
        b = result["backends"]
        _log(
            f"entropy backends (partial decode): compiled "
            f"{b['compiled'] * 1e3:.3f} ms, pure {b['pure'] * 1e3:.3f} ms "
            f"({b['pure_over_compiled']:.1f}x slower)"
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=2)
        _log(f"wrote {args.out}")
    return 0


def cmd_report(args) -> int:
    path = os.path.join(args.run, "report.json")
    with open(path, encoding="utf-8") as fh:
        report = RunReport.from_json(fh.read())
    emit_report(report, args.run, formats=tuple(args.formats.split(",")))
    _log(text_table(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jpegdct",
        description="Compressed-domain classification experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate variant corpora")
    _add_config_overrides(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train one (variant, mode) cell")
    p.add_argument("--variant", required=True,
                   choices=("quantized", "unquantized"))
    p.add_argument("--mode", required=True,
                   choices=("downsample", "upsample"))
    _add_config_overrides(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("experiment", help="run the full cell grid")
    p.add_argument("--config", help="key = value config file")
    _add_config_overrides(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bench-decode",
                       help="time partial vs full decode on a corpus")
    p.add_argument("--corpus", required=True,
                   help="corpus directory (with manifest.tsv)")
    p.add_argument("--repetitions", type=int, default=9)
    p.add_argument("--limit", type=int, default=32,
                   help="max files to time (0 = all)")
    p.add_argument("--compare-backends", action="store_true",
                   help="also compare compiled vs pure entropy kernels")
    p.add_argument("--out", help="write JSON results here")
    p.set_defaults(func=cmd_bench_decode)

    p = sub.add_parser("report", help="re-emit report files from a run dir")
    p.add_argument("--run", required=True)
    p.add_argument("--formats", default="txt,csv,json")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, EmptyCorpus, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
