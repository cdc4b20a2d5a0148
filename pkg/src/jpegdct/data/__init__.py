"""Dataset ingestion, variant corpus generation, and tensor streaming."""

from .cifar10 import (
    LabeledImage,
    load_cifar10,
    read_batch_file,
    write_batch_file,
)
from .errors import (
    BadRecordSize,
    DataError,
    IoFailure,
    LabelOutOfRange,
    UndecodableFile,
)
from .folder import bilinear_resize, load_jpeg_folder
from .stream import (
    Normalization,
    StreamingDataset,
    batch_stream,
    compute_channel_stats,
    tensor_from_bytes,
    tensor_from_file,
)
from .synthetic import make_labeled_images
from .variants import (
    VariantCorpus,
    generate_variants,
    load_corpus,
    tables_for_variant,
)

__all__ = [
    "BadRecordSize",
    "DataError",
    "IoFailure",
    "LabelOutOfRange",
    "LabeledImage",
    "Normalization",
    "StreamingDataset",
    "UndecodableFile",
    "VariantCorpus",
    "batch_stream",
    "bilinear_resize",
    "compute_channel_stats",
    "generate_variants",
    "load_cifar10",
    "load_corpus",
    "make_labeled_images",
    "read_batch_file",
    "tables_for_variant",
    "tensor_from_bytes",
    "tensor_from_file",
    "write_batch_file",
]
