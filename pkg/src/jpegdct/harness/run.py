"""Experiment orchestration: corpora, normalization, cells, benchmarks.

Cells run sequentially (never in parallel) so the per-epoch timing columns
stay comparable, and every cell shares the same seed-derivation scheme and
normalization statistics.
"""

import json
import os
import platform
import time

import numpy as np

from ..codec import backend_name, compiled_available, decode_coefficients, parse_jpeg
from ..data import (
    StreamingDataset,
    compute_channel_stats,
    generate_variants,
    load_corpus,
    make_labeled_images,
    load_cifar10,
    load_jpeg_folder,
)
from ..data.cifar10 import LabeledImage
from ..dctdomain import full_decode
from ..nn import Hyperparams, build_dct_cnn, save_checkpoint, train
from .config import ExperimentConfig, validate, write_resolved
from .report import CellResult, RunReport, emit_report, mean_std


class EmptyCorpus(Exception):
    """Benchmark was pointed at a corpus with no files."""


def environment_note() -> str:
    return (
        f"python {platform.python_version()}, numpy {np.__version__}, "
        f"{platform.machine()}/{platform.system()}, "
        f"cpus={os.cpu_count()}, entropy-backend={backend_name()}"
    )


def subset_images(images, classes, limit, seed):
    """Balanced seeded subset; remaps labels to 0..k-1 when filtering."""
    if classes:
        classes = tuple(sorted(classes))
        remap = {c: i for i, c in enumerate(classes)}
        images = [
            LabeledImage(remap[im.label], im.pixels, im.source_id)
            for im in images
            if im.label in remap
        ]
    if not limit:
        return images
    by_class = {}
    for im in images:
        by_class.setdefault(im.label, []).append(im)
    rng = np.random.Generator(np.random.PCG64(seed))
    n_classes = max(1, len(by_class))
    per_class = max(1, limit // n_classes)
    subset = []
    for label in sorted(by_class):
        group = by_class[label]
        order = rng.permutation(len(group))[:per_class]
        subset.extend(group[i] for i in sorted(order))
    return subset


def prepare_source(cfg: ExperimentConfig):
    """(train_images, test_images) per the configured dataset kind."""
    if cfg.dataset_kind == "cifar10":
        train_images, test_images = load_cifar10(cfg.dataset_dir)
    elif cfg.dataset_kind == "folder":
        images, _, _ = load_jpeg_folder(cfg.dataset_dir, cfg.target_size)
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        order = rng.permutation(len(images))
        n_test = max(1, int(len(images) * cfg.folder_test_fraction))
        test_idx = set(order[:n_test].tolist())
        train_images = [im for i, im in enumerate(images) if i not in test_idx]
        test_images = [im for i, im in enumerate(images) if i in test_idx]
    elif cfg.dataset_kind == "synthetic":
        per_class = cfg.synthetic_per_class
        train_images = make_labeled_images(
            per_class, cfg.synthetic_classes, seed=cfg.seed
        )
        test_images = make_labeled_images(
            max(1, per_class // 5), cfg.synthetic_classes, seed=cfg.seed + 1
        )
    else:
        raise ValueError(cfg.dataset_kind)
    train_images = subset_images(
        train_images, cfg.classes, cfg.train_limit, cfg.seed
    )
    test_images = subset_images(
        test_images, cfg.classes, cfg.test_limit, cfg.seed + 1
    )
    return train_images, test_images


def _corpus_dir(cfg, variant, split):
    return os.path.join(cfg.out_dir, "corpora", variant, split)


def _reusable(directory, variant, cfg, expected_count):
    meta_path = os.path.join(directory, "meta.json")
    manifest = os.path.join(directory, "manifest.tsv")
    if not (os.path.exists(meta_path) and os.path.exists(manifest)):
        return False
    with open(meta_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    if meta.get("tag") != variant or meta.get("subsampling") != cfg.subsampling:
        return False
    if variant == "quantized" and meta.get("quality") != cfg.quality:
        return False
    corpus = load_corpus(directory)
    return len(corpus) == expected_count and all(
        os.path.exists(p) for p in corpus.paths()
    )


def prepare_corpora(cfg: ExperimentConfig, log=None):
    """Generate (or reuse) the variant corpora under out_dir/corpora."""
    train_images, test_images = prepare_source(cfg)
    corpora = {}
    for variant in cfg.variants:
        corpora[variant] = {}
        for split, images in (("train", train_images), ("test", test_images)):
            directory = _corpus_dir(cfg, variant, split)
            if _reusable(directory, variant, cfg, len(images)):
                corpora[variant][split] = load_corpus(directory)
                continue
            if log:
                log(f"generating {variant}/{split} corpus "
                    f"({len(images)} images) in {directory}")
            corpora[variant][split] = generate_variants(
                images, variant, cfg.quality, directory, cfg.subsampling
            )
    return corpora


def compute_run_stats(cfg: ExperimentConfig, corpora, log=None):
    """Shared normalization statistics (or None when disabled)."""
    if not cfg.normalize:
        return None
    source_variant = (
        "quantized" if "quantized" in corpora else cfg.variants[0]
    )
    corpus = corpora[source_variant]["train"]
    if log:
        log(f"computing channel statistics on {source_variant}/train")
    stats = compute_channel_stats(
        corpus,
        mode="upsample",
        dequant=source_variant == "quantized",
        resample_order=cfg.resample_order,
    )
    path = os.path.join(cfg.out_dir, "stats.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {"source_variant": source_variant, **stats.to_json()}, fh,
            indent=2,
        )
    return stats


def hyperparams_from(cfg: ExperimentConfig) -> Hyperparams:
    return Hyperparams(
        base_lr=cfg.base_lr,
        lr_decay=cfg.lr_decay,
        lr_decay_every=cfg.lr_decay_every,
        batch_size=cfg.batch_size,
        epochs=cfg.epochs,
        seed=cfg.seed,
    )


def run_cell(cfg: ExperimentConfig, corpora, stats, variant, mode,
             log=None) -> CellResult:
    """Train and evaluate one (variant, mode) cell."""
    dequant = variant == "quantized"
    train_ds = StreamingDataset(
        corpora[variant]["train"], mode, dequant, stats, cfg.resample_order
    )
    test_ds = StreamingDataset(
        corpora[variant]["test"], mode, dequant, stats, cfg.resample_order
    )
    num_classes = 1 + max(
        max(train_ds.corpus.labels(), default=0),
        max(test_ds.corpus.labels(), default=0),
    )
    input_shape = train_ds.tensor(0).shape
    net = build_dct_cnn(
        input_shape,
        num_classes,
        arch=cfg.arch or None,
        seed=cfg.seed,
    )
    h = hyperparams_from(cfg)

    def epoch_log(em):
        if log:
            log(
                f"  epoch {em.epoch:3d}  loss {em.mean_loss:.4f}  "
                f"train {em.train_acc:.4f}  eval {em.eval_acc:.4f}  "
                f"{em.seconds:.2f}s"
            )

    metrics = train(net, train_ds, h, eval_dataset=test_ds, log=epoch_log)

    epoch_mean, epoch_std = mean_std([m.seconds for m in metrics])
    fwd_mean, fwd_std = mean_std([m.eval_seconds for m in metrics])
    ckpt_dir = os.path.join(cfg.out_dir, "checkpoints")
    os.makedirs(ckpt_dir, exist_ok=True)
    ckpt = os.path.join(ckpt_dir, f"{variant}_{mode}.ckpt")
    save_checkpoint(net, ckpt)
    return CellResult(
        variant=variant,
        mode=mode,
        accuracy_pct=metrics[-1].eval_acc * 100.0,
        epoch_time_mean=epoch_mean,
        epoch_time_std=epoch_std,
        forward_time_mean=fwd_mean,
        forward_time_std=fwd_std,
        epochs=metrics,
        checkpoint=ckpt,
    )


def run_experiment(cfg: ExperimentConfig, log=None) -> RunReport:
    """Run every selected cell sequentially; failures don't stop the grid."""
    validate(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    write_resolved(cfg, os.path.join(cfg.out_dir, "resolved.cfg"))
    corpora = prepare_corpora(cfg, log)
    stats = compute_run_stats(cfg, corpora, log)

    cells = []
    for variant, mode in cfg.cells():
        if log:
            log(f"cell {variant}/{mode}")
        try:
            cells.append(run_cell(cfg, corpora, stats, variant, mode, log))
        except Exception as exc:  # noqa: BLE001 - cell isolation
            if log:
                log(f"  cell failed: {exc}")
            cells.append(
                CellResult(
                    variant=variant,
                    mode=mode,
                    accuracy_pct=float("nan"),
                    epoch_time_mean=float("nan"),
                    epoch_time_std=0.0,
                    forward_time_mean=float("nan"),
                    forward_time_std=0.0,
                    epochs=[],
                    error=f"{type(exc).__name__}: {exc}",
                )
            )

    report = RunReport(
        cells=cells,
        config_echo={
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in vars(cfg).items()
        },
        environment=environment_note(),
    )
    emit_report(report, cfg.out_dir)
    return report


def benchmark_decode(corpus, repetitions, limit=32,
                     compare_backends=False) -> dict:
    """Time partial decode vs full decode over corpus files.

    Per file, both paths run ``repetitions`` times on the already-parsed
    stream; aggregates are means over files of per-file means.
    """
    if repetitions < 5:
        raise ValueError(f"repetitions must be >= 5, got {repetitions}")
    paths = corpus.paths()[:limit] if limit else corpus.paths()
    if not paths:
        raise EmptyCorpus(f"no files in {corpus.directory}")

    rows = []
    for path in paths:
        with open(path, "rb") as fh:
            img = parse_jpeg(fh.read())
        partial, full = [], []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            decode_coefficients(img)
            partial.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            full_decode(img)
            full.append(time.perf_counter() - t0)
        pm, ps = mean_std(partial)
        fm, fs = mean_std(full)
        rows.append({
            "file": os.path.basename(path),
            "partial_mean": pm, "partial_std": ps,
            "full_mean": fm, "full_std": fs,
        })

    partial_mean = sum(r["partial_mean"] for r in rows) / len(rows)
    full_mean = sum(r["full_mean"] for r in rows) / len(rows)
    result = {
        "files": len(rows),
        "repetitions": repetitions,
        "rows": rows,
        "partial_mean": partial_mean,
        "full_mean": full_mean,
        "speedup": full_mean / partial_mean if partial_mean else float("inf"),
    }

    if compare_backends and compiled_available():
        backends = {}
        for backend in ("compiled", "pure"):
            times = []
            for path in paths:
                with open(path, "rb") as fh:
                    img = parse_jpeg(fh.read())
                per = []
                for _ in range(repetitions):
                    t0 = time.perf_counter()
                    decode_coefficients(img, backend=backend)
                    per.append(time.perf_counter() - t0)
                times.append(mean_std(per)[0])
            backends[backend] = sum(times) / len(times)
        backends["pure_over_compiled"] = (
            backends["pure"] / backends["compiled"]
            if backends["compiled"]
            else float("inf")
        )
        result["backends"] = backends
    return result
