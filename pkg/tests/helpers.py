"""Shared oracles for the test suite.

Two independent checks live here so the unit tests never grade the library
with its own formulas: a composite Gauss-Legendre rule for well integrals,
and a finite-difference eigensolver for the quartic-corrected Hamiltonian.
"""

import numpy as np
from scipy import sparse
from scipy.linalg import eig_banded


def gauss_panels(f, a: float, b: float, panels: int = 4096, order: int = 4) -> float:
    """Composite Gauss-Legendre quadrature of f over [a, b].

    With 4096 panels of order 4 the rule is exact far beyond the resolution
    of any integrand appearing in these tests (trig polynomials with a few
    hundred oscillations at most).
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    # (panels, order) grid of abscissae, then one vectorized evaluation
    x = mid[:, None] + half[:, None] * nodes[None, :]
    vals = f(x.ravel()).reshape(panels, order)
    return float(np.sum(half[:, None] * weights[None, :] * vals))


def fd_levels(m: float, d: float, beta: float, n_levels: int, grid: int = 3000) -> np.ndarray:
    """Lowest eigenvalues of -(1/2m) u'' + (beta/3m) u'''' on a grid.

    Builds the discrete operator as the literal matrix polynomial in the
    second-difference matrix D2: H = -(1/2m) D2 + (beta/3m) D2 @ D2, with
    Dirichlet walls. Discrete sine waves diagonalize D2 exactly, so they
    diagonalize H too and the only error left is the O(h^2) dispersion of
    D2 itself.
    """
    h = d / (grid + 1)
    ones = np.ones(grid)
    d2 = sparse.diags([ones[:-1], -2.0 * ones, ones[:-1]], [-1, 0, 1]) / h**2
    h_op = ((-0.5 / m) * d2 + (beta / (3.0 * m)) * (d2 @ d2)).tocsc()
    bands = np.zeros((3, grid))
    bands[0] = h_op.diagonal(0)
    bands[1, :-1] = h_op.diagonal(-1)
    bands[2, :-2] = h_op.diagonal(-2)
    return eig_banded(bands, lower=True, eigvals_only=True,
                      select="i", select_range=(0, n_levels - 1))
