import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gupwell import (
    DomainError,
    GridTooSmall,
    LevelOutOfRange,
    ModelParams,
    NegativeBeta,
    NonPositive,
    NonPositiveBeta0,
    UncertaintyPoint,
    build_trend_operator,
    commutator_residual,
    dipole_element,
    dipole_matrix,
    eigenfunction_value,
    minimal_price_uncertainty,
    uncertainty_boundary,
)

from helpers import gauss_panels


# ------------------------------------------------------------- dipole basis


def test_dipole_ground_to_second():
    # <2| r |1> = -8*2*1*d / (pi^2 * 9)
    d = 0.2
    assert dipole_element(2, 1, d) == pytest.approx(-16.0 * d / (9.0 * math.pi**2), rel=1e-15)


def test_dipole_unit_width_example():
    assert dipole_element(1, 2, 1.0) == pytest.approx(-16.0 / (9.0 * math.pi**2), rel=1e-15)


def test_dipole_even_pairs_vanish():
    for n, k in [(1, 3), (2, 4), (3, 3), (5, 1), (2, 2)]:
        assert dipole_element(n, k, 0.7) == 0.0


def test_dipole_symmetry():
    for n, k in [(1, 2), (2, 5), (3, 8)]:
        assert dipole_element(n, k, 0.31) == dipole_element(k, n, 0.31)


def test_dipole_scales_linearly_with_width():
    assert dipole_element(2, 1, 0.4) == pytest.approx(2.0 * dipole_element(2, 1, 0.2), rel=1e-15)


def test_dipole_rejects_bad_levels():
    with pytest.raises(LevelOutOfRange):
        dipole_element(0, 1, 1.0)
    with pytest.raises(LevelOutOfRange):
        dipole_element(1, -2, 1.0)


def test_dipole_against_quadrature():
    # <n| r |k> = int phi_n(r) r phi_k(r) dr, independent rule
    d = 0.2
    for n in range(1, 13):
        for k in range(1, 13):
            want = gauss_panels(
                lambda x, n=n, k=k: eigenfunction_value(n, x, d) * x * eigenfunction_value(k, x, d),
                -d / 2, d / 2,
            )
            assert dipole_element(n, k, d) == pytest.approx(want, abs=1e-10)


def test_dipole_matrix_matches_elements():
    p = ModelParams(m=1.0, beta=0.0, d=0.3, n_basis=10)
    mat = dipole_matrix(p)
    assert mat.dim == 10 and mat.d == 0.3
    for n in range(1, 11):
        for k in range(1, 11):
            assert mat.entries[n - 1, k - 1] == dipole_element(n, k, 0.3)


def test_dipole_matrix_symmetric_checkerboard_readonly():
    mat = dipole_matrix(ModelParams(n_basis=12))
    assert np.array_equal(mat.entries, mat.entries.T)
    idx = np.arange(1, 13)
    even_gap = (idx[:, None] + idx[None, :]) % 2 == 0
    assert np.all(mat.entries[even_gap] == 0.0)
    assert np.all(mat.entries[~even_gap] != 0.0)
    with pytest.raises(ValueError):
        mat.entries[0, 1] = 9.9


# ----------------------------------------------------------- grid operators


def test_trend_operator_shapes_and_hermiticity():
    pair = build_trend_operator(128, 1e-4, 0.2)
    assert pair.grid.shape == (128,)
    assert pair.grid[0] == -0.1 and pair.grid[-1] == 0.1
    t = pair.trend.toarray()
    assert np.allclose(t, t.conj().T, atol=1e-15)
    p_op = pair.price.toarray()
    assert np.allclose(p_op, np.diag(pair.grid))


def test_trend_operator_plane_wave_eigenvalue():
    # exp(iqx) is an eigenvector of the periodic stencil; in the interior
    # rows T acts as sin(qh)/h + (beta0/3)(sin(qh)/h)^3, which tends to
    # q (1 + beta0 q^2 / 3) as h -> 0
    beta0, d, nn = 1e-3, 2.0 * math.pi, 4096
    pair = build_trend_operator(nn, beta0, d)
    q = 3.0
    psi = np.exp(1j * q * pair.grid)
    out = pair.trend @ psi
    inner = slice(8, nn - 8)
    ratio = out[inner] / psi[inner]
    s = math.sin(q * pair.spacing) / pair.spacing
    assert np.allclose(ratio, s + beta0 / 3.0 * s**3, atol=1e-12)
    # continuum limit with an O(q^2 h^2) dispersion error (~1e-5 here)
    assert abs(np.mean(ratio).real - q * (1.0 + beta0 * q**2 / 3.0)) < 5e-5


def test_trend_operator_rejects():
    with pytest.raises(GridTooSmall):
        build_trend_operator(8, 1e-4, 0.2)
    with pytest.raises(NegativeBeta):
        build_trend_operator(64, -1e-4, 0.2)


def test_commutator_residual_at_zero_beta0_is_discretization_floor():
    # with beta0 = 0 the only residual left is the O(h^2) stencil error,
    # bounded by ~h^2/(2 sigma^2) for a Gaussian of width sigma, and it
    # quarters when the grid is doubled
    sigma = 0.08
    res = []
    for n in (512, 1024):
        pair = build_trend_operator(n, 0.0, 1.0)
        psi = np.exp(-0.5 * (pair.grid / sigma) ** 2)
        r = commutator_residual(pair, psi)
        assert r < pair.spacing**2 / sigma**2
        res.append(r)
    assert res[0] / res[1] == pytest.approx(4.0, rel=0.15)


def test_commutator_residual_quadratic_in_beta0():
    # doubling beta0 quadruples the residual once it dominates the h^2 floor
    # (wide state keeps beta0 q^2 small, so higher orders stay negligible)
    residuals = []
    for beta0 in (1e-3, 2e-3):
        pair = build_trend_operator(4096, beta0, 3.0)
        psi = np.exp(-0.5 * (pair.grid / 0.25) ** 2)
        residuals.append(commutator_residual(pair, psi))
    ratio = residuals[1] / residuals[0]
    assert 3.5 < ratio < 4.5


def test_commutator_residual_grid_refinement_plateaus():
    # once beta0^2 dominates the h^2 floor, refining the grid stops helping
    vals = [
        commutator_residual(
            build_trend_operator(n, 1e-2, 1.0),
            np.exp(-0.5 * (np.linspace(-0.5, 0.5, n) / 0.05) ** 2),
        )
        for n in (1024, 2048, 4096)
    ]
    assert vals[2] == pytest.approx(vals[1], rel=0.2)


def test_commutator_residual_input_checks():
    pair = build_trend_operator(64, 1e-4, 0.2)
    with pytest.raises(DomainError):
        commutator_residual(pair, np.zeros(32))
    with pytest.raises(DomainError):
        commutator_residual(pair, np.zeros(64))


# ------------------------------------------------------- uncertainty region


def test_minimal_uncertainty_values():
    assert minimal_price_uncertainty(1e-4) == pytest.approx(0.01, rel=1e-15)
    assert minimal_price_uncertainty(0.04) == pytest.approx(0.2, rel=1e-15)
    # zeta = beta0 <T>^2 enters under the root
    assert minimal_price_uncertainty(1e-4, mean_trend=2.0) == pytest.approx(
        math.sqrt((1.0 + 4e-4) * 1e-4), rel=1e-15
    )
    with pytest.raises(NegativeBeta):
        minimal_price_uncertainty(-1.0)


def test_boundary_branches_unit_beta0():
    # dp = 2, beta0 = 1, zeta = 0: dt = 2 -+ sqrt(3)
    lo, hi = uncertainty_boundary(2.0, 1.0)
    assert lo == pytest.approx(2.0 - math.sqrt(3.0), rel=1e-14)
    assert hi == pytest.approx(2.0 + math.sqrt(3.0), rel=1e-14)


def test_boundary_coincides_at_minimum():
    beta0 = 1e-4
    dp_min = minimal_price_uncertainty(beta0)
    lo, hi = uncertainty_boundary(dp_min, beta0)
    assert lo == pytest.approx(hi, rel=1e-9)
    assert lo == pytest.approx(dp_min / beta0, rel=1e-9)


def test_boundary_below_minimum_has_no_real_branch():
    assert uncertainty_boundary(0.009, 1e-4) is None


def test_boundary_rejects():
    with pytest.raises(NonPositiveBeta0):
        uncertainty_boundary(1.0, 0.0)
    with pytest.raises(NonPositive):
        uncertainty_boundary(0.0, 1e-4)
    with pytest.raises(DomainError):
        uncertainty_boundary(1.0, 1e-4, zeta=-0.5)


def test_boundary_points_saturate_the_bound():
    for dp in (0.02, 0.05, 0.5):
        lo, hi = uncertainty_boundary(dp, 1e-4, zeta=1e-3)
        for dt in (lo, hi):
            pt = UncertaintyPoint(dp=dp, dt=dt, beta0=1e-4, zeta=1e-3)
            assert pt.bound_gap() == pytest.approx(0.0, abs=1e-12)


def test_interior_points_have_positive_gap():
    lo, hi = uncertainty_boundary(0.05, 1e-4)
    mid = 0.5 * (lo + hi)
    assert UncertaintyPoint(dp=0.05, dt=mid, beta0=1e-4, zeta=0.0).bound_gap() > 0.0
    assert UncertaintyPoint(dp=0.05, dt=lo * 0.5, beta0=1e-4, zeta=0.0).bound_gap() < 0.0


@given(
    dp=st.floats(0.011, 10.0),
    beta0=st.floats(1e-6, 1e-2),
)
def test_boundary_saturation_property(dp, beta0):
    out = uncertainty_boundary(dp, beta0)
    if out is None:
        assert dp < minimal_price_uncertainty(beta0)
        return
    lo, hi = out
    assert lo <= hi
    for dt in (lo, hi):
        gap = UncertaintyPoint(dp=dp, dt=dt, beta0=beta0, zeta=0.0).bound_gap()
        assert abs(gap) < 1e-7 * max(1.0, dp * max(abs(lo), abs(hi)))


def test_boundary_widens_with_dp():
    spans = []
    for dp in (0.02, 0.04, 0.08):
        lo, hi = uncertainty_boundary(dp, 1e-4)
        spans.append(hi - lo)
    assert spans[0] < spans[1] < spans[2]
