from typing import Any, Optional, Tuple


class GolaySetError(ValueError):
    """Base class for every error raised by the library."""


class CyclotomicError(GolaySetError):
    pass


class HadamardError(GolaySetError):
    pass


class BadShapeError(HadamardError):
    pass


class ExponentOutOfRangeError(HadamardError):
    pass


class NotUnitaryError(HadamardError):
    """Raised when two rows of a candidate Butson matrix are not orthogonal."""

    def __init__(self, rows: Tuple[int, int], inner_product: Any):
        self.rows = rows
        self.inner_product = inner_product
        super().__init__(
            f"rows {rows[0]} and {rows[1]} are not orthogonal "
            f"(inner product {inner_product})"
        )


class UnsupportedError(HadamardError):
    pass


class NotEquivalentError(HadamardError):

    def __init__(self, message: str, candidates_checked: int = 0):
        self.candidates_checked = candidates_checked
        super().__init__(message)


class SearchSpaceTooLargeError(HadamardError):
    pass


class ConstructionError(GolaySetError):
    pass


class SpecInvariantError(ConstructionError):
    pass


class NonUnitCoefficientError(ConstructionError):
    """A product coefficient is not a single q-th root of unity."""

    def __init__(self, entry: Tuple[int, int], power: int, value: Any):
        self.entry = entry
        self.power = power
        self.value = value
        super().__init__(
            f"coefficient of z^{power} in entry {entry} is {value}, "
            f"not a single root of unity"
        )


class UnsupportedAlphabetError(ConstructionError):
    pass


class AnalysisError(GolaySetError):
    pass


class NotComplementaryError(AnalysisError):
    """Raised by golay_check with the first nonzero out-of-phase shift."""

    def __init__(self, shift: int, value: Any, message: Optional[str] = None):
        self.shift = shift
        self.value = value
        super().__init__(
            message or f"autocorrelation sum at shift {shift} is {value}, not zero"
        )


class InvalidParameterError(AnalysisError):
    pass


class DataFormatError(GolaySetError):
    pass
