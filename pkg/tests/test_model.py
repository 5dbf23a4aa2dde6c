import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gupwell import (
    BasisTooSmall,
    ModelParams,
    NegativeBeta,
    NegativeValue,
    NonPositive,
    TimeUnit,
    ValidatedParams,
    WaveState,
    ground_state,
    validate_params,
)
from gupwell.model import FIRST_ORDER_WARN_THRESHOLD, TRADING_DAY_SECONDS


def test_defaults_are_the_calibrated_market():
    p = ModelParams()
    assert p.m == 2800.0
    assert p.beta == 1e-6
    assert p.d == 0.2
    assert p.n_basis == 64
    assert p.time_unit is TimeUnit.TRADING_DAY


def test_validate_passes_through_fields():
    p = ModelParams(m=1.0, beta=0.01, d=1.0, lam=0.5, omega=2.0, n_basis=8)
    v = validate_params(p)
    assert isinstance(v, ValidatedParams)
    assert (v.m, v.beta, v.d, v.lam, v.omega, v.n_basis) == (1.0, 0.01, 1.0, 0.5, 2.0, 8)


def test_validate_is_idempotent():
    v = validate_params(ModelParams())
    assert validate_params(v) is v


def test_validate_normalizes_unit_tag_and_basis():
    v = validate_params(ModelParams(n_basis=np.int64(16), time_unit="second"))
    assert v.n_basis == 16 and type(v.n_basis) is int
    assert v.time_unit is TimeUnit.SECOND


@pytest.mark.parametrize(
    "kwargs,exc",
    [
        ({"m": 0.0}, NonPositive),
        ({"m": -4.0}, NonPositive),
        ({"d": 0.0}, NonPositive),
        ({"d": -1.0}, NonPositive),
        ({"beta": -1e-9}, NegativeBeta),
        ({"n_basis": 1}, BasisTooSmall),
        ({"n_basis": 0}, BasisTooSmall),
        ({"lam": -0.1}, NegativeValue),
        ({"omega": -1.0}, NegativeValue),
    ],
)
def test_validate_rejects(kwargs, exc):
    with pytest.raises(exc):
        validate_params(ModelParams(**kwargs))


def test_rejection_message_names_the_field():
    with pytest.raises(NonPositive, match="m"):
        validate_params(ModelParams(m=-4.0))


def test_validity_flag_threshold():
    # 1e-6 * pi^2 * 64^2 / 0.2^2 ~ 1.01 > 0.1: the calibrated default with a
    # 64-level basis is flagged, because the quartic term at n=64 is not small
    v = validate_params(ModelParams(m=2800.0, beta=1e-6, d=0.2, n_basis=64))
    assert v.first_order_warning
    assert v.validity_scale() == pytest.approx(1.01, rel=1e-2)
    assert v.validity_scale() > FIRST_ORDER_WARN_THRESHOLD
    ok = validate_params(ModelParams(m=2800.0, beta=1e-6, d=0.2, n_basis=16))
    assert not ok.first_order_warning
    assert ok.validity_scale() == 1e-6 * math.pi**2 * 16**2 / 0.2**2


def test_warning_is_not_an_error():
    v = validate_params(ModelParams(beta=1.0, n_basis=512))
    assert v.first_order_warning  # large deformation validates, just flagged


@given(
    m=st.floats(1e-6, 1e6),
    beta=st.floats(0.0, 10.0),
    d=st.floats(1e-3, 1e3),
    n_basis=st.integers(2, 256),
)
def test_validate_idempotence_property(m, beta, d, n_basis):
    v = validate_params(ModelParams(m=m, beta=beta, d=d, n_basis=n_basis))
    again = validate_params(v)
    assert again is v
    assert dataclasses.asdict(again) == dataclasses.asdict(v)


def test_ground_state_shape_and_norm():
    s = ground_state(8)
    assert s.n_basis == 8
    assert s.t == 0.0
    assert s.coeffs[0] == 1.0 + 0.0j
    assert np.all(s.coeffs[1:] == 0.0)
    assert s.norm_sq() == 1.0


def test_ground_state_rejects_tiny_basis():
    with pytest.raises(BasisTooSmall):
        ground_state(1)


def test_wave_state_is_frozen_and_readonly():
    s = WaveState(np.array([1.0, 0.0, 0.0]), 0.5)
    assert s.coeffs.dtype == np.complex128
    with pytest.raises(ValueError):
        s.coeffs[0] = 2.0
    with pytest.raises(dataclasses.FrozenInstanceError):
        s.t = 1.0


def test_wave_state_norm():
    s = WaveState(np.array([0.6, 0.8j]))
    assert math.isclose(s.norm_sq(), 1.0, rel_tol=1e-15)


def test_trading_day_constant():
    # 4 h continuous session
    assert TRADING_DAY_SECONDS == 4 * 3600.0
