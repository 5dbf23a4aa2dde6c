"""Quantum model of a price-limited market with a minimal-tick correction.

Prices confined to the daily limit band behave like a particle in a box in
log-return coordinates; the finite tick deforms the trend-price commutator
and shifts the level spacing. This package exposes the closed-form spectrum,
the driven dynamics (perturbative and numerically propagated), grid-operator
checks of the deformed commutator, and the market calibration chain.
"""

from .backend import active_backend
from .calibration import (
    MarketCalibration,
    calibrate,
    daily_volatility,
    mass_from_volatility,
    read_price_csv,
    volatility_from_series,
)
from .errors import (
    BasisTooSmall,
    ConfigError,
    DomainError,
    GridTooSmall,
    GupwellError,
    LevelOutOfRange,
    NegativeBeta,
    NegativeValue,
    NegativeVolatility,
    NonPositive,
    NonPositiveBeta0,
    NonPositivePrice,
    NumericalError,
    OutOfRange,
    OutOfWell,
    QuadratureFailure,
    SeriesFormatError,
    SeriesTooShort,
    StepFailure,
    ZeroVolatility,
)
from .dynamics import (
    AmplitudeTrajectory,
    DensityTable,
    LocatedPeak,
    ResonanceScanResult,
    density_evolution,
    dyson_first_order_numeric,
    first_order_amplitude,
    first_order_trajectory,
    interval_probability,
    propagate,
    resonance_scan,
)
from .model import (
    TRADING_DAY_SECONDS,
    ModelParams,
    TimeUnit,
    ValidatedParams,
    WaveState,
    ground_state,
    validate_params,
)
from .operators import (
    DipoleMatrix,
    GridOperatorPair,
    UncertaintyPoint,
    build_trend_operator,
    commutator_residual,
    dipole_element,
    dipole_matrix,
    minimal_price_uncertainty,
    uncertainty_boundary,
)
from .spectrum import (
    Spectrum,
    characteristic_frequency,
    characteristic_frequency_shift_form,
    continuum_frequency,
    eigenfunction_value,
    energy_level,
    energy_terms,
    spectrum_table,
    well_overlap_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrajectory",
    "BasisTooSmall",
    "ConfigError",
    "DomainError",
    "GridTooSmall",
    "GupwellError",
    "LevelOutOfRange",
    "NegativeBeta",
    "NegativeValue",
    "NegativeVolatility",
    "NonPositive",
    "NonPositiveBeta0",
    "NonPositivePrice",
    "NumericalError",
    "OutOfRange",
    "OutOfWell",
    "QuadratureFailure",
    "SeriesFormatError",
    "SeriesTooShort",
    "StepFailure",
    "ZeroVolatility",
    "DensityTable",
    "DipoleMatrix",
    "GridOperatorPair",
    "LocatedPeak",
    "MarketCalibration",
    "ModelParams",
    "ResonanceScanResult",
    "Spectrum",
    "TimeUnit",
    "TRADING_DAY_SECONDS",
    "UncertaintyPoint",
    "ValidatedParams",
    "WaveState",
    "active_backend",
    "build_trend_operator",
    "calibrate",
    "characteristic_frequency",
    "characteristic_frequency_shift_form",
    "commutator_residual",
    "continuum_frequency",
    "daily_volatility",
    "density_evolution",
    "dipole_element",
    "dipole_matrix",
    "dyson_first_order_numeric",
    "eigenfunction_value",
    "energy_level",
    "energy_terms",
    "first_order_amplitude",
    "first_order_trajectory",
    "ground_state",
    "interval_probability",
    "mass_from_volatility",
    "minimal_price_uncertainty",
    "propagate",
    "read_price_csv",
    "resonance_scan",
    "spectrum_table",
    "uncertainty_boundary",
    "validate_params",
    "volatility_from_series",
    "well_overlap_matrix",
]
