"""Dipole matrix elements, grid operators and the deformed uncertainty bound.

Two views of the deformation live here. In the level basis, the drive couples
states through the position (log-price) matrix elements, which vanish unless
the level parities differ. On a position grid, the deformed trend operator
T = T0 + (beta0/3) T0^3 is built from the centered first difference so that
the commutator with the price coordinate can be checked against its target
i (1 + beta0 T^2) numerically.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy import sparse

from .errors import (
    DomainError,
    GridTooSmall,
    LevelOutOfRange,
    NegativeBeta,
    NegativeValue,
    NonPositive,
    NonPositiveBeta0,
)
from .model import ModelParams, validate_params

#: Rows dropped at each end of the grid before measuring commutator residuals;
#: the T^2 stencil reaches 6 neighbors, so boundary rows never satisfy the
#: interior difference identity.
EDGE_MARGIN = 8


def dipole_element(n: int, k: int, d: float) -> float:
    """<n| r |k> = -8 n k d / (pi^2 (n^2 - k^2)^2) for n+k odd, else 0."""
    if int(n) != n or n < 1:
        raise LevelOutOfRange(n)
    if int(k) != k or k < 1:
        raise LevelOutOfRange(k)
    if (n + k) % 2 == 0:
        return 0.0
    return -8.0 * n * k * d / (math.pi**2 * (n * n - k * k) ** 2)


@dataclasses.dataclass(frozen=True)
class DipoleMatrix:
    """Symmetric coupling matrix over levels 1..dim with checkerboard support."""

    dim: int
    d: float
    entries: np.ndarray

    def __post_init__(self) -> None:
        self.entries.setflags(write=False)


def dipole_matrix(p: ModelParams) -> DipoleMatrix:
    """All pairwise couplings for the retained levels, vectorized."""
    v = validate_params(p)
    idx = np.arange(1, v.n_basis + 1, dtype=float)
    n = idx[:, None]
    k = idx[None, :]
    odd = ((idx[:, None] + idx[None, :]) % 2).astype(bool)
    gap = np.where(odd, (n * n - k * k) ** 2, 1.0)
    entries = np.where(odd, -8.0 * n * k * v.d / (math.pi**2 * gap), 0.0)
    return DipoleMatrix(dim=v.n_basis, d=v.d, entries=entries)


@dataclasses.dataclass(frozen=True)
class GridOperatorPair:
    """Price and deformed-trend operators discretized on a uniform grid."""

    grid: np.ndarray
    price: sparse.spmatrix
    trend: sparse.spmatrix
    beta0: float
    spacing: float


def build_trend_operator(grid_size: int, beta0: float, d: float) -> GridOperatorPair:
    """Sparse P and T = T0 + (beta0/3) T0^3 on grid_size points spanning [-d/2, d/2].

    T0 = -i D1 with D1 the centered first difference; D1 is exactly
    skew-symmetric, so T0 and T are exactly Hermitian up to rounding.
    """
    if int(grid_size) != grid_size or grid_size < 16:
        raise GridTooSmall(grid_size)
    if beta0 < 0:
        raise NegativeBeta(beta0)
    if not d > 0:
        raise NegativeValue("d", d)
    grid = np.linspace(-d / 2.0, d / 2.0, int(grid_size))
    h = grid[1] - grid[0]
    ones = np.ones(grid_size - 1)
    d1 = sparse.diags([ones, -ones], [1, -1], format="csr") / (2.0 * h)
    t0 = (-1j) * d1.astype(np.complex128)
    trend = (t0 + (beta0 / 3.0) * (t0 @ t0 @ t0)).tocsr()
    price = sparse.diags(grid, format="csr")
    return GridOperatorPair(grid=grid, price=price, trend=trend, beta0=beta0, spacing=float(h))


def commutator_residual(pair: GridOperatorPair, test_state: np.ndarray) -> float:
    """|| ([P, T] - i(1 + beta0 T^2)) psi ||_interior / || psi ||.

    The residual is measured away from the walls (EDGE_MARGIN rows per side)
    where the difference identities behind the construction hold. For smooth
    interior-supported states it scales as O(beta0^2) plus an O(h^2)
    discretization floor.
    """
    psi = np.asarray(test_state, dtype=np.complex128)
    if psi.shape != pair.grid.shape:
        raise DomainError(f"test_state shape {psi.shape} does not match grid {pair.grid.shape}")
    t_psi = pair.trend @ psi
    comm = pair.price @ t_psi - pair.trend @ (pair.price @ psi)
    target = 1j * (psi + pair.beta0 * (pair.trend @ t_psi))
    resid = comm - target
    margin = min(EDGE_MARGIN, psi.size // 4)
    interior = resid[margin : psi.size - margin]
    denom = float(np.linalg.norm(psi))
    if denom == 0.0:
        raise DomainError("test_state has zero norm")
    return float(np.linalg.norm(interior)) / denom


@dataclasses.dataclass(frozen=True)
class UncertaintyPoint:
    """One (price spread, trend spread) pair with its deformation inputs."""

    dp: float
    dt: float
    beta0: float
    zeta: float

    def bound_gap(self) -> float:
        """dp * dt - (1 + beta0 dt^2 + zeta) / 2; admissible when >= 0."""
        return self.dp * self.dt - 0.5 * (1.0 + self.beta0 * self.dt**2 + self.zeta)


def minimal_price_uncertainty(beta0: float, mean_trend: float = 0.0) -> float:
    """Smallest admissible price spread sqrt((1 + zeta) beta0), zeta = beta0 <T>^2."""
    if beta0 < 0:
        raise NegativeBeta(beta0)
    zeta = beta0 * mean_trend**2
    return math.sqrt((1.0 + zeta) * beta0)


def uncertainty_boundary(dp: float, beta0: float, zeta: float = 0.0):
    """Trend spreads saturating the deformed bound at a given price spread.

    Returns (dt_minus, dt_plus) = dp/beta0 -+ sqrt(dp^2 - (1+zeta) beta0)/beta0,
    or None when dp lies below the minimal uncertainty and no real branch
    exists. The two branches coincide exactly at dp = sqrt((1+zeta) beta0).
    """
    if not beta0 > 0:
        raise NonPositiveBeta0(beta0)
    if zeta < 0:
        raise NegativeValue("zeta", zeta)
    if not dp > 0:
        raise NonPositive("dp", dp)
    disc = dp * dp - (1.0 + zeta) * beta0
    if disc < 0:
        return None
    root = math.sqrt(disc) / beta0
    center = dp / beta0
    return (center - root, center + root)
