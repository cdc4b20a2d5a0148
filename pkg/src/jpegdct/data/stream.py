"""Decode-on-the-fly tensor streams over variant corpora.

Every tensor is produced through the coefficient path: parse -> entropy
decode -> (de-quantize) -> spatial planes -> dimension matching ->
(normalize).  Decode failures during streaming abort with the offending
file named; silent sample loss would corrupt cross-cell comparisons.
"""

import os
from dataclasses import dataclass

import numpy as np

from .. import dctdomain as dd
from ..codec import JpegError, decode_coefficients, parse_jpeg
from .errors import UndecodableFile
from .variants import VariantCorpus


@dataclass
class Normalization:
    """Per-channel standardization; computed once and frozen for a run."""

    mean: np.ndarray  # (3,)
    std: np.ndarray  # (3,)

    def to_json(self):
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_json(cls, obj):
        return cls(
            np.asarray(obj["mean"], dtype=np.float64),
            np.asarray(obj["std"], dtype=np.float64),
        )


def _planes_from_image(img, dequant, resample_order):
    """Per-channel CoefficientPlanes (plus step planes when deferred)."""
    frame = img.frame
    grids = decode_coefficients(img)
    planes = []
    step_planes = []
    for grid in grids:
        comp = next(
            c for c in frame.components
            if c.component_id == grid.component_id
        )
        cw, ch = frame.component_size(comp)
        table = img.quant_table_for(comp)
        if dequant and resample_order == "after":
            grid = dd.dequantize(grid, table)
        planes.append(dd.assemble_plane(grid, cw, ch))
        if dequant and resample_order == "before":
            steps = np.tile(
                table.steps_natural.astype(np.float64),
                (grid.blocks_high, grid.blocks_wide),
            )
            crop_h = -(-ch // 8) * 8
            crop_w = -(-cw // 8) * 8
            step_planes.append(
                dd.CoefficientPlane(
                    grid.component_id, steps[:crop_h, :crop_w]
                )
            )
    return planes, step_planes


def tensor_from_bytes(data, mode, dequant=True, resample_order="after",
                      normalization=None) -> np.ndarray:
    """One JPEG byte stream -> (H, W, 3) float32 coefficient tensor."""
    img = parse_jpeg(data)
    if len(img.frame.components) != 3:
        raise UndecodableFile("coefficient tensors need 3 components")
    planes, step_planes = _planes_from_image(img, dequant, resample_order)
    tensor = dd.assemble_input(planes[0], planes[1], planes[2], mode)
    values = tensor.values
    if step_planes:
        # resample-before-dequant: scale resampled coefficients by the
        # identically resampled step pattern
        steps = dd.assemble_input(
            step_planes[0], step_planes[1], step_planes[2], mode
        )
        values = values * steps.values
    if normalization is not None:
        values = (values - normalization.mean) / normalization.std
    return values.astype(np.float32)


def tensor_from_file(path, mode, dequant=True, resample_order="after",
                     normalization=None) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
        return tensor_from_bytes(
            data, mode, dequant, resample_order, normalization
        )
    except (JpegError, dd.DctDomainError, OSError) as exc:
        raise UndecodableFile(f"{path}: {exc}") from exc


def batch_stream(corpus: VariantCorpus, mode, dequant, batch_size, seed,
                 normalization=None, resample_order="after"):
    """One seeded-shuffle pass over a corpus, yielding (tensor4, labels)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    dataset = StreamingDataset(
        corpus, mode, dequant, normalization, resample_order
    )
    yield from dataset.batches(batch_size, rng)


class StreamingDataset:
    """Batch protocol over a corpus; decodes per epoch, order by caller rng."""

    def __init__(self, corpus: VariantCorpus, mode, dequant,
                 normalization=None, resample_order="after"):
        self.corpus = corpus
        self.mode = mode
        self.dequant = dequant
        self.normalization = normalization
        self.resample_order = resample_order
        self._paths = [
            os.path.join(corpus.directory, rel) for rel, _ in corpus.entries
        ]
        self._labels = np.array(
            [label for _, label in corpus.entries], dtype=np.int64
        )

    def __len__(self):
        return len(self._paths)

    def tensor(self, index) -> np.ndarray:
        return tensor_from_file(
            self._paths[index],
            self.mode,
            self.dequant,
            self.resample_order,
            self.normalization,
        )

    def batches(self, batch_size, rng=None):
        n = len(self)
        order = rng.permutation(n) if rng is not None else np.arange(n)
        for i in range(0, n, batch_size):
            sel = order[i : i + batch_size]
            x = np.stack([self.tensor(j) for j in sel])
            yield x, self._labels[sel]


def compute_channel_stats(corpus: VariantCorpus, mode="upsample",
                          dequant=True, resample_order="after",
                          limit=None) -> Normalization:
    """Per-channel mean/std over a corpus pass (population statistics)."""
    total = np.zeros(3)
    total_sq = np.zeros(3)
    count = 0
    paths = corpus.paths()
    if limit:
        paths = paths[:limit]
    for path in paths:
        t = tensor_from_file(path, mode, dequant, resample_order).astype(
            np.float64
        )
        total += t.sum(axis=(0, 1))
        total_sq += (t * t).sum(axis=(0, 1))
        count += t.shape[0] * t.shape[1]
    if count == 0:
        raise UndecodableFile("no files in corpus for statistics")
    mean = total / count
    var = np.maximum(total_sq / count - mean * mean, 1e-12)
    return Normalization(mean, np.sqrt(var))
