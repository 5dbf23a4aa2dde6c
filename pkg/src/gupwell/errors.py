"""Exception hierarchy.

Three branches matter to callers: ConfigError (bad run configuration,
CLI exit code 2), DomainError (input violates a model precondition, exit
code 3) and NumericalError (a solver or quadrature failed to meet its
tolerance, exit code 4).
"""


class GupwellError(Exception):
    category = "error"


class ConfigError(GupwellError):
    category = "config"


class DomainError(GupwellError):
    category = "domain"


class NumericalError(GupwellError):
    category = "numerical"


class NonPositive(DomainError):
    """A strictly positive quantity (mass, well width, price, ...) was not."""

    def __init__(self, field: str, value) -> None:
        self.field = field
        self.value = value
        super().__init__(f"{field} must be > 0, got {value!r}")


class NegativeValue(DomainError):
    """A nonnegative quantity (coupling, frequency, tick, ...) was negative."""

    def __init__(self, field: str, value) -> None:
        self.field = field
        self.value = value
        super().__init__(f"{field} must be >= 0, got {value!r}")


class OutOfRange(DomainError):
    def __init__(self, field: str, value, lo, hi) -> None:
        self.field = field
        self.value = value
        super().__init__(f"{field} must lie in ({lo}, {hi}), got {value!r}")


class NegativeBeta(DomainError):
    def __init__(self, value) -> None:
        self.value = value
        super().__init__(f"deformation strength beta must be >= 0, got {value!r}")


class NonPositiveBeta0(DomainError):
    def __init__(self, value) -> None:
        self.value = value
        super().__init__(f"trend deformation beta0 must be > 0, got {value!r}")


class BasisTooSmall(DomainError):
    def __init__(self, value) -> None:
        self.value = value
        super().__init__(f"n_basis must be >= 2, got {value!r}")


class LevelOutOfRange(DomainError):
    def __init__(self, n, n_basis=None) -> None:
        self.n = n
        hint = "" if n_basis is None else f" (basis holds levels 1..{n_basis})"
        super().__init__(f"level index {n!r} out of range{hint}")


class OutOfWell(DomainError):
    """A price coordinate fell outside the limit band [-d/2, d/2]."""

    def __init__(self, r, d) -> None:
        self.r = r
        self.d = d
        super().__init__(f"coordinate {r!r} outside the band [{-d / 2}, {d / 2}]")


class GridTooSmall(DomainError):
    def __init__(self, value) -> None:
        self.value = value
        super().__init__(f"grid_size must be >= 16, got {value!r}")


class NegativeVolatility(DomainError):
    def __init__(self, value) -> None:
        self.value = value
        super().__init__(f"volatility must be >= 0, got {value!r}")


class ZeroVolatility(DomainError):
    def __init__(self) -> None:
        super().__init__("volatility is zero; the implied mass is infinite")


class SeriesTooShort(DomainError):
    def __init__(self, length) -> None:
        self.length = length
        super().__init__(f"need at least 2 closes to form a return, got {length}")


class NonPositivePrice(DomainError):
    def __init__(self, value, index=None, line=None) -> None:
        self.value = value
        where = f" at row {index}" if index is not None else ""
        where += f" (line {line})" if line is not None else ""
        super().__init__(f"close {value!r}{where} must be > 0 to take a log return")


class SeriesFormatError(DomainError):
    def __init__(self, line: int, reason: str) -> None:
        self.line = line
        super().__init__(f"malformed price series at line {line}: {reason}")


class StepFailure(NumericalError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class QuadratureFailure(NumericalError):
    def __init__(self, message: str) -> None:
        super().__init__(message)
