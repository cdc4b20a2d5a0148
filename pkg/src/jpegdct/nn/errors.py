"""Typed errors for the network engine."""


class NnError(Exception):
    """Base class for network engine errors."""


class ShapeMismatch(NnError):
    """Input tensor does not match the network's expected geometry."""


class LabelOutOfRange(NnError):
    """A class label falls outside [0, num_classes)."""


class BadArchConfig(NnError):
    """Architecture token list is malformed or inconsistent."""


class EmptyDataset(NnError):
    """Training or evaluation was asked to run over zero examples."""
