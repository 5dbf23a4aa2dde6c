"""Closed-form eigenpairs of the band-limited well and derived frequencies.

Hard walls at r = +-d/2 keep the sine eigenfunctions of the undeformed well;
the minimal-step deformation adds a quartic momentum term whose first-order
energy shift is evaluated exactly on those states. Diagonalization is never
used here; a finite-difference eigensolver serves as an independent oracle in
the test suite only.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import LevelOutOfRange, OutOfWell
from .model import ModelParams, ValidatedParams, validate_params

#: Relative slack when deciding whether a coordinate sits inside the band;
#: keeps the exact endpoints +-d/2 admissible in floating point.
_EDGE_SLACK = 1e-12


def eigenfunction_value(n: int, r, d: float):
    """phi_n(r) = sqrt(2/d) sin(n pi (r + d/2) / d) on [-d/2, d/2].

    Accepts a scalar or array ``r``; scalar in, float out.
    """
    if int(n) != n or n < 1:
        raise LevelOutOfRange(n)
    r_arr = np.asarray(r, dtype=float)
    bad = np.abs(r_arr) > d / 2 * (1 + _EDGE_SLACK)
    if np.any(bad):
        offender = float(np.atleast_1d(r_arr)[np.atleast_1d(bad)][0])
        raise OutOfWell(offender, d)
    out = math.sqrt(2.0 / d) * np.sin(n * math.pi * (r_arr + d / 2) / d)
    return float(out) if out.ndim == 0 else out


def energy_terms(n: int, p: ModelParams) -> tuple[float, float]:
    """(undeformed term, quartic correction) for level n."""
    v = validate_params(p)
    if int(n) != n or not 1 <= n <= v.n_basis:
        raise LevelOutOfRange(n, v.n_basis)
    e0 = n**2 * math.pi**2 / (2.0 * v.m * v.d**2)
    e1 = v.beta * n**4 * math.pi**4 / (3.0 * v.m * v.d**4)
    return e0, e1


def energy_level(n: int, p: ModelParams) -> float:
    """E_n = n^2 pi^2 / (2 m d^2) + beta n^4 pi^4 / (3 m d^4)."""
    e0, e1 = energy_terms(n, p)
    return e0 + e1


def continuum_frequency(n: int, p: ModelParams) -> float:
    """Undeformed transition frequency omega0_n = pi^2 (n^2 - 1) / (2 m d^2)."""
    v = validate_params(p)
    if int(n) != n or not 2 <= n <= v.n_basis:
        raise LevelOutOfRange(n, v.n_basis)
    return math.pi**2 * (n**2 - 1) / (2.0 * v.m * v.d**2)


def characteristic_frequency(n: int, p: ModelParams) -> float:
    """Transition frequency omega_n = E_n - E_1 out of the ground level."""
    v = validate_params(p)
    if int(n) != n or not 2 <= n <= v.n_basis:
        raise LevelOutOfRange(n, v.n_basis)
    return energy_level(n, v) - energy_level(1, v)


def characteristic_frequency_shift_form(n: int, p: ModelParams) -> float:
    """omega_n written as omega0_n (1 + (4/3) beta m (n^2+1)/(n^2-1) omega0_n).

    Algebraically identical to the energy-difference form; kept public so the
    agreement of the two routes can be checked directly.
    """
    v = validate_params(p)
    w0 = continuum_frequency(n, v)
    return w0 * (1.0 + (4.0 / 3.0) * v.beta * v.m * ((n**2 + 1) / (n**2 - 1)) * w0)


@dataclasses.dataclass(frozen=True)
class Spectrum:
    """Levels 1..n_basis with the energy split into its two terms."""

    params: ValidatedParams
    energies: np.ndarray
    e0: np.ndarray
    e1: np.ndarray

    @property
    def levels(self) -> np.ndarray:
        return np.arange(1, self.energies.size + 1)

    @property
    def omega(self) -> np.ndarray:
        """Transition frequencies E_n - E_1 (zero for n = 1)."""
        return self.energies - self.energies[0]

    @property
    def omega0(self) -> np.ndarray:
        """Undeformed transition frequencies, as the same difference of terms.

        Computed as e0_n - e0_1 so that the omega and omega0 columns coincide
        bit for bit when beta = 0.
        """
        return self.e0 - self.e0[0]


def spectrum_table(p: ModelParams) -> Spectrum:
    """Energies and frequencies for every retained level."""
    v = validate_params(p)
    n = np.arange(1, v.n_basis + 1, dtype=float)
    e0 = n**2 * math.pi**2 / (2.0 * v.m * v.d**2)
    e1 = v.beta * n**4 * math.pi**4 / (3.0 * v.m * v.d**4)
    return Spectrum(params=v, energies=e0 + e1, e0=e0, e1=e1)


def well_overlap_matrix(a: float, b: float, d: float, n_basis: int) -> np.ndarray:
    """O[n, k] = integral_a^b phi_n(r) phi_k(r) dr in closed form.

    a and b must satisfy -d/2 <= a < b <= d/2. With x = r + d/2:

        n != k:  [sin((n-k) pi x / d)/((n-k) pi) - sin((n+k) pi x / d)/((n+k) pi)]
        n == k:  [x/d - sin(2 n pi x / d)/(2 n pi)]

    evaluated between the endpoints. Over the full band this is the identity.
    """
    if not -d / 2 * (1 + _EDGE_SLACK) <= a < b <= d / 2 * (1 + _EDGE_SLACK):
        raise OutOfWell((a, b), d)
    idx = np.arange(1, n_basis + 1)
    dif = idx[:, None] - idx[None, :]
    tot = idx[:, None] + idx[None, :]

    def antiderivative(x: float) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            first = np.where(
                dif == 0,
                x / d,
                np.sin(dif * math.pi * x / d) / (dif * math.pi),
            )
        return first - np.sin(tot * math.pi * x / d) / (tot * math.pi)

    xa, xb = a + d / 2, b + d / 2
    return antiderivative(xb) - antiderivative(xa)
