"""Exception hierarchy shared by every stage of the pipeline."""


class CrossLayerError(ValueError):
    """Base class for domain errors (bad keys, out-of-range data, decode failures)."""

    def __init__(self, message: str, stage: str | None = None):
        self.stage = stage
        super().__init__(f"[{stage}] {message}" if stage else message)


class InvalidModulusError(CrossLayerError):
    pass


class NoInverseError(CrossLayerError):
    pass


class NotPrimeError(CrossLayerError):
    pass


class InvalidExponentError(CrossLayerError):
    pass


class MessageTooLargeError(CrossLayerError):
    pass


class CoprimalityError(CrossLayerError):
    pass


class DynamicRangeError(CrossLayerError):
    pass


class MalformedResidueError(CrossLayerError):
    pass


class LengthError(CrossLayerError):
    pass


class StructureError(CrossLayerError):
    pass


class KeyValidationError(CrossLayerError):
    pass


class TableValidationError(KeyValidationError):
    pass


class WidthError(CrossLayerError):
    pass


class RequiresViterbiError(CrossLayerError):
    """Raised when algebraic decryption is asked of a redundant (n > k) stage."""


class DecodeFailure(CrossLayerError):
    pass


class RangeError(CrossLayerError):
    pass


class SizeCapError(CrossLayerError):
    pass


class ParameterError(CrossLayerError):
    pass


class ProfileError(CrossLayerError):
    pass


class SweepError(CrossLayerError):
    pass


class BundleParseError(CrossLayerError):
    pass


class BundleVersionError(BundleParseError):
    pass


class FrameError(CrossLayerError):
    pass
