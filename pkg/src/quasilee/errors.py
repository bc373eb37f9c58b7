"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class QuasiLeeError(Exception):
    """Base class for all library errors."""


class FieldError(QuasiLeeError, ValueError):
    """Invalid field parameters (non-prime p, reducible modulus, bad primitive, ...)."""


class UnsupportedCharacteristic(FieldError):
    """The requested operation needs a larger characteristic (e.g. p >= 5)."""


class GeneratorSetError(QuasiLeeError, ValueError):
    """A generator set violates its structural invariants."""


class FormError(QuasiLeeError, ValueError):
    """Degenerate quadratic form or a classification mismatch."""


class SpanningError(QuasiLeeError, ValueError):
    """The generator set does not span the ambient space."""


class CapExceeded(QuasiLeeError, RuntimeError):
    """A configured resource cap would be exceeded."""


class DegenerateSpectrum(QuasiLeeError, ValueError):
    """lambda_max >= d, so the Chung diameter bound is undefined."""
