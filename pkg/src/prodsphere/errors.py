"""Exception types shared across the package."""


class ProdsphereError(Exception):
    """Base class for package errors."""


class ResolutionError(ProdsphereError):
    """A grid or table is too coarse for the requested bandwidth."""


class UnderResolvedTimeError(ResolutionError):
    """Time sampling below the documented exactness threshold."""


class NonContractionError(ProdsphereError):
    """Fixed-point iteration stopped contracting (data too large or horizon too long)."""


class UsageError(ProdsphereError):
    """Invalid arguments reached a computation entry point."""
