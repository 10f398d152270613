"""Exception types shared across the toolkit."""


class SteerkitError(ValueError):
    """Base class for all domain errors raised by steerkit."""


class NonHermitianError(SteerkitError):
    """Input matrix is not Hermitian within tolerance."""


class NonPsdError(SteerkitError):
    """Input matrix has an eigenvalue below the negativity tolerance."""


class InvalidStateError(SteerkitError):
    """Bloch parameters do not describe a positive, unit-trace state."""


class DegenerateSpanError(SteerkitError):
    """Measurement vectors are (anti)parallel; their span is degenerate."""


class DegenerateFamilyError(SteerkitError):
    """Family parameters hit an excluded degenerate point (sin 2theta = 0)."""


class DegenerateCorrelationError(SteerkitError):
    """Correlation matrix has rank < 2; optimal axes are not defined."""


class InconsistentAssemblageError(SteerkitError):
    """Assemblage ensembles do not share a common reduced state."""


class SizeOverflowError(SteerkitError):
    """Requested strategy enumeration exceeds the supported size."""
