"""Parameter and state types shared by the spectrum, operator and dynamics layers.

The model lives in log-return coordinates: prices are confined to a band of
total width ``d`` (twice the daily limit fraction), the effective mass ``m``
is the inverse squared daily volatility, and ``beta`` is the squared minimal
relative price step. Time is measured in trading days unless tagged
otherwise; conversions to seconds happen only at I/O boundaries.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .errors import BasisTooSmall, NegativeBeta, NegativeValue, NonPositive

#: Seconds in one continuous trading session (4 h). Used only when converting
#: day-based rates and times to per-second figures at the CLI boundary.
TRADING_DAY_SECONDS = 14400.0

#: Above this value of beta * pi^2 * n_basis^2 / d^2 the first-order quartic
#: correction at the top retained level is no longer small and results carry
#: a warning flag (never an error).
FIRST_ORDER_WARN_THRESHOLD = 0.1


class TimeUnit(str, enum.Enum):
    SECOND = "second"
    TRADING_DAY = "trading_day"


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """Inputs of the band-limited well model.

    m            effective mass, 1/sigma_daily^2
    beta         minimal-step deformation strength (squared relative tick)
    d            full band width in log-return units (2 * limit fraction)
    lam          amplitude of the periodic news drive (0 = free evolution)
    omega        angular frequency of the drive
    n_basis      number of retained levels
    time_unit    unit in which rates/times are expressed
    """

    m: float = 2800.0
    beta: float = 1e-6
    d: float = 0.2
    lam: float = 0.0
    omega: float = 0.0
    n_basis: int = 64
    time_unit: TimeUnit = TimeUnit.TRADING_DAY


@dataclasses.dataclass(frozen=True)
class ValidatedParams(ModelParams):
    """ModelParams that passed validate_params, plus the validity flag."""

    first_order_warning: bool = False

    def validity_scale(self) -> float:
        """Dimensionless size of the quartic term at the top retained level."""
        return self.beta * math.pi**2 * self.n_basis**2 / self.d**2


def validate_params(p: ModelParams) -> ValidatedParams:
    """Check model invariants and attach the first-order validity flag.

    Idempotent: validating a ValidatedParams returns it unchanged.
    """
    if isinstance(p, ValidatedParams):
        return p
    if not p.m > 0:
        raise NonPositive("m", p.m)
    if not p.d > 0:
        raise NonPositive("d", p.d)
    if p.beta < 0:
        raise NegativeBeta(p.beta)
    if int(p.n_basis) != p.n_basis or p.n_basis < 2:
        raise BasisTooSmall(p.n_basis)
    if p.lam < 0:
        raise NegativeValue("lam", p.lam)
    if p.omega < 0:
        raise NegativeValue("omega", p.omega)
    fields = dataclasses.asdict(p)
    fields["n_basis"] = int(p.n_basis)
    fields["time_unit"] = TimeUnit(p.time_unit)
    scale = p.beta * math.pi**2 * fields["n_basis"] ** 2 / p.d**2
    return ValidatedParams(**fields, first_order_warning=scale > FIRST_ORDER_WARN_THRESHOLD)


@dataclasses.dataclass(frozen=True)
class WaveState:
    """Level coefficients c_n (index 0 holds level n=1) at one instant.

    Coefficients are slowly varying: the stationary phases exp(-i E_n t) are
    applied only when reconstructing the position-space density.
    """

    coeffs: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 2:
            raise BasisTooSmall(arr.size if arr.ndim == 1 else arr.shape)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def n_basis(self) -> int:
        return self.coeffs.size

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def ground_state(n_basis: int) -> WaveState:
    """All weight in the lowest level: c_1 = 1, everything else 0, at t = 0."""
    if int(n_basis) != n_basis or n_basis < 2:
        raise BasisTooSmall(n_basis)
    c = np.zeros(int(n_basis), dtype=np.complex128)
    c[0] = 1.0
    return WaveState(c, 0.0)
