"""Exception types raised by the mflscan pipeline."""


class MflError(Exception):
    """Base class for all mflscan errors."""


class RecordTooShort(MflError):
    """Record has fewer axial samples than an operation requires."""


class NonPositiveInput(MflError):
    """A quantity that must be strictly positive was zero or negative."""


class ImageTooSmall(MflError):
    """Image dimensions are too small to build a pyramid."""


class LayerSmallerThanKernel(MflError):
    """A pyramid layer is smaller than the matching kernel."""


class DimensionMismatch(MflError):
    """Pyramid layer dimensions are not successive halvings of the base."""


class SpecInvalid(MflError):
    """A synthetic-record specification violates its invariants."""


class FormatError(MflError):
    """A record, config, or ground-truth file could not be parsed."""
