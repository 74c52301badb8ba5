"""Exception hierarchy shared by every layer of the library."""


class SpectralAffineError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""


class InvalidInput(SpectralAffineError, ValueError):
    pass


class InvalidDigitSet(InvalidInput):
    pass


class CollinearDigits(InvalidDigitSet):
    pass


class DigitsNotPrimitive(InvalidDigitSet):
    pass


class NotExpansive(InvalidInput):
    pass


class SingularMatrix(InvalidInput):
    pass


class ZeroFrequency(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class NonIntegerFrequency(InvalidInput):
    pass


class InvalidPick(InvalidInput):
    pass


class ChoiceOutOfRange(InvalidInput):
    pass


class NotSpectral(SpectralAffineError):
    pass


class NotAdmissible(SpectralAffineError):
    pass


class ResourceCap(SpectralAffineError):
    """A size limit guarding exhaustive enumeration was exceeded."""


class LevelTooLarge(ResourceCap):
    pass
