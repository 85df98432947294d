"""Exception hierarchy shared by every module.

All domain errors derive from :class:`ForecastError` so the CLI can map them
to exit code 1 in one place.
"""


class ForecastError(Exception):
    """Base class for domain errors."""


# series_core
class EmptyWindowSet(ForecastError):
    pass


class BorderOutOfRange(ForecastError):
    pass


class ChannelMismatch(ForecastError):
    pass


# closed-form constructors / models
class InvalidK(ForecastError):
    pass


class PeriodTooLong(ForecastError):
    pass


class HorizonTooShort(ForecastError):
    pass


class LcmOverflow(ForecastError):
    pass


class WeightsNotNormalized(ForecastError):
    pass


class ShapeMismatch(ForecastError):
    pass


# normalization
class DegenerateGamma(ForecastError):
    pass


class KernelTooLarge(ForecastError):
    pass


# training
class NonFiniteGradient(ForecastError):
    pass


class NonFiniteLoss(ForecastError):
    def __init__(self, epoch: int, message: str = ""):
        self.epoch = epoch
        super().__init__(message or f"non-finite loss at epoch {epoch}")


# evaluation
class EmptyInput(ForecastError):
    pass


# data_io
class MissingFile(ForecastError):
    pass


class ParseError(ForecastError):
    def __init__(self, row: int, col: int, message: str = ""):
        self.row, self.col = row, col
        super().__init__(message or f"cannot parse value at row {row}, column {col}")


class NonFiniteValue(ForecastError):
    def __init__(self, row: int, col: int):
        self.row, self.col = row, col
        super().__init__(f"non-finite value at row {row}, column {col}")


class ChannelCountMismatch(ForecastError):
    pass


class VersionMismatch(ForecastError):
    pass


class ShapeCorruption(ForecastError):
    pass
