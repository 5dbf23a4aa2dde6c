"""Mapping market figures onto model parameters.

The chain runs: annualized volatility -> daily volatility -> effective mass
m = 1/sigma_daily^2; minimal relative tick -> deformation strengths
beta0 = tick^2 (price units) and beta = beta0 / mean_price^2 (return units);
daily limit fraction -> band width d = 2 * limit_fraction. Everything is
expressed per trading day; second-based figures are a CLI output concern.
"""

from __future__ import annotations

import csv
import dataclasses
import math

from .errors import (
    ConfigError,
    NegativeValue,
    NegativeVolatility,
    NonPositive,
    NonPositivePrice,
    OutOfRange,
    SeriesFormatError,
    SeriesTooShort,
    ZeroVolatility,
)
from .model import ModelParams, ValidatedParams, validate_params

TRADING_DAYS_PER_YEAR = 252


def daily_volatility(sigma_annual: float, periods_per_year: int = TRADING_DAYS_PER_YEAR) -> float:
    """De-annualize by sqrt(periods): sigma_daily = sigma_annual / sqrt(252)."""
    if sigma_annual < 0:
        raise NegativeVolatility(sigma_annual)
    if not periods_per_year > 0:
        raise NonPositive("periods_per_year", periods_per_year)
    return sigma_annual / math.sqrt(periods_per_year)


def mass_from_volatility(sigma_daily: float) -> float:
    """Effective mass m = 1 / sigma_daily^2 (trading-day units)."""
    if sigma_daily < 0:
        raise NegativeVolatility(sigma_daily)
    if sigma_daily == 0:
        raise ZeroVolatility()
    return sigma_daily**-2


@dataclasses.dataclass(frozen=True)
class MarketCalibration:
    """Inputs and every intermediate of the calibration chain.

    m0 is the mass in price coordinates, 1/(sigma_daily * mean_price)^2, so
    that m = m0 * mean_price^2 holds (to rounding) alongside
    beta = beta0 / mean_price^2.
    """

    sigma_annual: float
    sigma_daily: float
    mean_price: float
    tick: float
    limit_fraction: float
    m0: float
    m: float
    beta0: float
    beta: float
    d: float
    minimal_spread: float


def calibrate(
    sigma_annual: float,
    mean_price: float,
    tick: float,
    limit_fraction: float,
    percent_reading: bool = False,
    n_basis: int = 64,
    lam: float = 0.0,
    omega: float = 0.0,
) -> tuple[MarketCalibration, ValidatedParams]:
    """Run the full chain and return both the record and ready-to-use params.

    percent_reading divides sigma_annual by 100 for sources that quote
    "0.3%" meaning the literal percentage rather than the decimal 0.3.
    """
    if not mean_price > 0:
        raise NonPositive("mean_price", mean_price)
    if tick < 0:
        raise NegativeValue("tick", tick)
    if not 0 < limit_fraction < 1:
        raise OutOfRange("limit_fraction", limit_fraction, 0, 1)
    sigma = sigma_annual / 100.0 if percent_reading else sigma_annual
    sigma_daily = daily_volatility(sigma)
    m = mass_from_volatility(sigma_daily)
    m0 = 1.0 / (sigma_daily * mean_price) ** 2
    beta0 = tick**2
    beta = beta0 / mean_price**2
    d = 2.0 * limit_fraction
    record = MarketCalibration(
        sigma_annual=sigma,
        sigma_daily=sigma_daily,
        mean_price=mean_price,
        tick=tick,
        limit_fraction=limit_fraction,
        m0=m0,
        m=m,
        beta0=beta0,
        beta=beta,
        d=d,
        minimal_spread=math.sqrt(beta0) if beta0 > 0 else 0.0,
    )
    params = validate_params(
        ModelParams(m=m, beta=beta, d=d, lam=lam, omega=omega, n_basis=n_basis)
    )
    return record, params


def volatility_from_series(closes, periods_per_year: int = TRADING_DAYS_PER_YEAR) -> float:
    """Annualized close-to-close volatility of a price series.

    Sample standard deviation (ddof=1) of log returns, scaled by
    sqrt(periods_per_year). A two-point series has a single return; its
    absolute value is used since no spread can be formed.
    """
    prices = list(closes)
    if len(prices) < 2:
        raise SeriesTooShort(len(prices))
    for i, price in enumerate(prices):
        if not price > 0:
            raise NonPositivePrice(price, index=i)
    returns = [math.log(prices[i + 1] / prices[i]) for i in range(len(prices) - 1)]
    if len(returns) == 1:
        per_period = abs(returns[0])
    else:
        mean = sum(returns) / len(returns)
        var = sum((r - mean) ** 2 for r in returns) / (len(returns) - 1)
        per_period = math.sqrt(var)
    if not periods_per_year > 0:
        raise NonPositive("periods_per_year", periods_per_year)
    return per_period * math.sqrt(periods_per_year)


def read_price_csv(path) -> list[float]:
    """Parse a date,close CSV into the close column.

    The header row must read exactly ``date,close`` (case-insensitive).
    Malformed rows are hard errors carrying the 1-based line number.
    """
    closes: list[float] = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ConfigError(f"cannot read series {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesFormatError(1, "empty file") from None
        if [cell.strip().lower() for cell in header] != ["date", "close"]:
            raise SeriesFormatError(1, f"expected header 'date,close', got {','.join(header)!r}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise SeriesFormatError(line_no, f"expected 2 columns, got {len(row)}")
            try:
                value = float(row[1])
            except ValueError:
                raise SeriesFormatError(line_no, f"close {row[1]!r} is not a number") from None
            if not value > 0:
                raise NonPositivePrice(value, line=line_no)
            closes.append(value)
    return closes
