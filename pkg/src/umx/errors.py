"""Exception hierarchy shared by every module."""


class UmxError(Exception):
    """Base class for all errors raised by umx."""


class CapExceeded(UmxError):
    """A desk-scale size limit was hit (ground set, lattice, or enumeration)."""


class PosetError(UmxError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class LatticeError(UmxError, ValueError):
    """Set family is not an accessible distributive lattice, or misuse of one."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotALinearExtension(UmxError, ValueError):
    pass


class InvalidRankFunction(UmxError, ValueError):
    """Raised when a U-matroid is built from values that fail the axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class LoadError(UmxError, ValueError):
    """Malformed or inconsistent input document."""


class GenericityError(UmxError):
    """Random sampling kept producing degenerate (non-generic) configurations."""
