"""Typed errors for dataset ingestion and corpus generation."""


class DataError(Exception):
    """Base class for dataset errors."""


class BadRecordSize(DataError):
    """Binary batch file length is not a whole number of records."""


class LabelOutOfRange(DataError):
    """A record's label byte exceeds the class count."""


class UndecodableFile(DataError):
    """A corpus file could not be decoded."""


class IoFailure(DataError):
    """Filesystem operation failed while writing a corpus."""
