"""Run reports: per-cell accuracy and timing in the three-column layout.

The text table uses exactly the columns "Type of Operation", "Accuracy(%)",
and "Inference Speed" (per-epoch seconds, mean +- sample std); CSV and JSON
carry the full epoch-by-epoch detail.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from ..nn.training import EpochMetrics

TEXT_HEADERS = ("Type of Operation", "Accuracy(%)", "Inference Speed")


def operation_label(variant: str, mode: str) -> str:
    mode_word = "Downsampling" if mode == "downsample" else "Upsampling"
    return f"{variant.capitalize()} ({mode_word})"


def mean_std(values):
    """(mean, sample std); std is 0 for fewer than two samples."""
    n = len(values)
    if n == 0:
        return float("nan"), 0.0
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


@dataclass
class CellResult:
    variant: str
    mode: str
    accuracy_pct: float  # final eval accuracy, percent
    epoch_time_mean: float
    epoch_time_std: float
    forward_time_mean: float  # pure-forward (evaluation) pass seconds
    forward_time_std: float
    epochs: list  # of EpochMetrics
    checkpoint: str = ""
    error: str = ""

    @property
    def operation(self) -> str:
        return operation_label(self.variant, self.mode)

    @property
    def failed(self) -> bool:
        return bool(self.error)


@dataclass
class RunReport:
    cells: list  # of CellResult
    config_echo: dict = field(default_factory=dict)
    environment: str = ""

    def to_json(self) -> str:
        payload = {
            "environment": self.environment,
            "config": self.config_echo,
            "cells": [asdict(c) for c in self.cells],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text) -> "RunReport":
        payload = json.loads(text)
        cells = []
        for c in payload["cells"]:
            epochs = [EpochMetrics(**e) for e in c.pop("epochs")]
            cells.append(CellResult(epochs=epochs, **c))
        return cls(
            cells=cells,
            config_echo=payload.get("config", {}),
            environment=payload.get("environment", ""),
        )


def text_table(report: RunReport) -> str:
    rows = []
    for cell in report.cells:
        if cell.failed:
            rows.append((cell.operation, "FAILED", cell.error))
        else:
            rows.append(
                (
                    cell.operation,
                    f"{cell.accuracy_pct:.2f}",
                    f"{cell.epoch_time_mean:.2f} ± "
                    f"{cell.epoch_time_std:.2f}",
                )
            )
    widths = [
        max(len(TEXT_HEADERS[i]), *(len(r[i]) for r in rows)) if rows else
        len(TEXT_HEADERS[i])
        for i in range(3)
    ]
    def fmt(row):
        return " | ".join(str(v).ljust(w) for v, w in zip(row, widths))
    lines = [fmt(TEXT_HEADERS)]
    lines.append("-+-".join("-" * w for w in widths))
    lines.extend(fmt(r) for r in rows)
    if report.environment:
        lines.append("")
        lines.append(f"# {report.environment}")
    return "\n".join(lines) + "\n"


CSV_FIELDS = (
    "operation", "variant", "mode", "epoch", "mean_loss", "train_acc",
    "eval_acc", "seconds", "eval_seconds", "steps",
    "final_accuracy_pct", "epoch_time_mean", "epoch_time_std",
)


def csv_text(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS)
    writer.writeheader()
    for cell in report.cells:
        for em in cell.epochs:
            writer.writerow({
                "operation": cell.operation,
                "variant": cell.variant,
                "mode": cell.mode,
                "epoch": em.epoch,
                "mean_loss": repr(em.mean_loss),
                "train_acc": repr(em.train_acc),
                "eval_acc": repr(em.eval_acc),
                "seconds": repr(em.seconds),
                "eval_seconds": repr(em.eval_seconds),
                "steps": em.steps,
                "final_accuracy_pct": repr(cell.accuracy_pct),
                "epoch_time_mean": repr(cell.epoch_time_mean),
                "epoch_time_std": repr(cell.epoch_time_std),
            })
    return buf.getvalue()


def parse_csv_text(text) -> list:
    """Rows back as dicts with floats restored (round-trip of csv_text)."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed = dict(row)
        for key in ("mean_loss", "train_acc", "eval_acc", "seconds",
                    "eval_seconds", "final_accuracy_pct",
                    "epoch_time_mean", "epoch_time_std"):
            parsed[key] = float(row[key])
        for key in ("epoch", "steps"):
            parsed[key] = int(row[key])
        rows.append(parsed)
    return rows


def emit_report(report: RunReport, out_dir, formats=("txt", "csv", "json")):
    """Write report files; returns the paths written."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if "txt" in formats:
        path = os.path.join(out_dir, "report.txt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text_table(report))
        paths.append(path)
    if "csv" in formats:
        path = os.path.join(out_dir, "report.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(csv_text(report))
        paths.append(path)
    if "json" in formats:
        path = os.path.join(out_dir, "report.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
        paths.append(path)
    return paths
