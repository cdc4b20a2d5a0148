"""Compressed-variant corpus generation and manifest handling.

A corpus is a directory of baseline JFIF files plus a ``manifest.tsv``
(one ``relative/path<TAB>label`` line per image) and a ``meta.json``
describing how it was produced.  The "quantized" variant uses the annex
tables scaled to a quality level; the "unquantized" variant uses all-ones
tables so de-quantization is the identity.
"""

import json
import os
from dataclasses import dataclass

from .. import color
from ..codec import encode_jpeg, standard_tables, unit_tables
from .errors import IoFailure

MANIFEST_NAME = "manifest.tsv"
META_NAME = "meta.json"

VARIANT_TAGS = ("quantized", "unquantized")


@dataclass
class VariantCorpus:
    tag: str  # "quantized" | "unquantized"
    quality: int  # only meaningful for "quantized"
    subsampling: str  # "420" | "444"
    directory: str
    entries: list  # of (relative_path, label)

    def __len__(self):
        return len(self.entries)

    def paths(self):
        return [os.path.join(self.directory, rel) for rel, _ in self.entries]

    def labels(self):
        return [label for _, label in self.entries]


def tables_for_variant(tag, quality):
    if tag == "quantized":
        return standard_tables(quality)
    if tag == "unquantized":
        return unit_tables()
    raise ValueError(f"variant tag must be one of {VARIANT_TAGS}, got {tag!r}")


def generate_variants(images, tag, quality, out_dir,
                      subsampling="420") -> VariantCorpus:
    """Encode every image into the requested variant; returns the corpus.

    Deterministic and idempotent: identical inputs produce byte-identical
    files and manifest.
    """
    tables = tables_for_variant(tag, quality)
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create {out_dir}: {exc}") from exc

    entries = []
    for i, img in enumerate(images):
        planes = color.ycbcr_planes_from_rgb(img.pixels, subsampling)
        data = encode_jpeg(planes, tables, subsampling=subsampling)
        rel = f"{i:06d}_{img.label}.jpg"
        try:
            with open(os.path.join(out_dir, rel), "wb") as fh:
                fh.write(data)
        except OSError as exc:
            raise IoFailure(f"cannot write {rel}: {exc}") from exc
        entries.append((rel, img.label))

    corpus = VariantCorpus(tag, quality, subsampling, out_dir, entries)
    write_manifest(corpus)
    return corpus


def write_manifest(corpus: VariantCorpus):
    manifest = os.path.join(corpus.directory, MANIFEST_NAME)
    try:
        with open(manifest, "w", encoding="utf-8") as fh:
            for rel, label in corpus.entries:
                fh.write(f"{rel}\t{label}\n")
        with open(os.path.join(corpus.directory, META_NAME), "w",
                  encoding="utf-8") as fh:
            json.dump(
                {
                    "tag": corpus.tag,
                    "quality": corpus.quality,
                    "subsampling": corpus.subsampling,
                },
                fh,
                indent=2,
            )
    except OSError as exc:
        raise IoFailure(f"cannot write manifest: {exc}") from exc


def load_corpus(directory) -> VariantCorpus:
    """Read back a generated corpus from its manifest and metadata."""
    manifest = os.path.join(directory, MANIFEST_NAME)
    entries = []
    with open(manifest, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            rel, label = line.split("\t")
            entries.append((rel, int(label)))
    meta_path = os.path.join(directory, META_NAME)
    meta = {"tag": "quantized", "quality": 0, "subsampling": "420"}
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            meta.update(json.load(fh))
    return VariantCorpus(
        meta["tag"], meta["quality"], meta["subsampling"], directory, entries
    )
