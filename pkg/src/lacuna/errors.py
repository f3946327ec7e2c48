"""Exception hierarchy shared across the package."""


class LacunaError(Exception):
    """Base class for all package-specific failures."""


class RangeError(LacunaError, ValueError):
    """An argument fell outside the validated evaluation box."""


class EvaluationError(LacunaError, ArithmeticError):
    """A numerical routine lost its accuracy guarantee (e.g. a
    normalization sum underflowed or went non-finite)."""


class ZeroFindingError(LacunaError, ArithmeticError):
    """Root bracketing or refinement failed for a requested zero."""


class QuadratureError(LacunaError, ArithmeticError):
    """An integral did not converge to the requested tolerance."""


class SpectrumError(LacunaError, ValueError):
    """A candidate spectrum violates the lacunarity contract."""


class StructureViolation(LacunaError, RuntimeError):
    """Classification found a sum pattern that cannot occur for a
    valid spectrum (e.g. three essentially distinct representations).
    Either the input bypassed validation or there is a bug upstream."""


class CertificateError(LacunaError, RuntimeError):
    """A certificate computation produced an internally inconsistent
    result (e.g. a purportedly real sum with a large imaginary part)."""
