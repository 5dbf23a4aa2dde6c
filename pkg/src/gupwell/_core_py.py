"""NumPy Dormand-Prince 5(4) stepper for the driven level system.

Integrates the slowly varying coefficients c of

    i dc_n/dt = lam cos(omega t) sum_k R[n, k] exp(i (E_n - E_k) t) c_k

with an embedded adaptive step, FSAL and a clipped PI-style controller.
The compiled backend (gupwell._core) implements the same tableau and
controller constants step for step; keep the two in sync.
"""

from __future__ import annotations

import math

import numpy as np

_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
# Difference between the 5th- and embedded 4th-order weights.
_E = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_MAX_FACTOR = 5.0
_MIN_FACTOR = 0.2
_SAFETY = 0.9

STATUS_OK = 0
STATUS_STEP_LIMIT = 1
STATUS_UNDERFLOW = 2


def _rhs(t, y, energies, dipole, lam, omega):
    w = np.exp(-1j * energies * t) * y
    # dipole is real; two real matvecs beat one promoted complex product.
    v = dipole @ w.real + 1j * (dipole @ w.imag)
    return (-1j * (lam * math.cos(omega * t))) * (np.exp(1j * energies * t) * v)


def propagate_coeffs(energies, dipole, lam, omega, c0, t_samples, rtol, atol, max_steps=10_000_000):
    """Integrate from t = 0, recording the state at each sample time.

    t_samples must be nondecreasing with t_samples[0] >= 0. Returns
    (out, (accepted, rejected, nfev, status)) with out[i] the coefficient
    vector at t_samples[i]; status is one of the STATUS_* constants and
    nonzero means out is only valid up to the sample being integrated.
    """
    e_arr = np.ascontiguousarray(energies, dtype=np.float64)
    r_arr = np.ascontiguousarray(dipole, dtype=np.float64)
    ts = np.ascontiguousarray(t_samples, dtype=np.float64)
    y = np.array(c0, dtype=np.complex128)
    n = y.size
    out = np.empty((ts.size, n), dtype=np.complex128)

    t = 0.0
    accepted = rejected = 0
    k = [np.zeros(n, dtype=np.complex128) for _ in range(7)]
    k[0] = _rhs(t, y, e_arr, r_arr, lam, omega)
    nfev = 1

    span = float(ts[-1]) if ts.size and ts[-1] > 0 else 1.0
    scale = atol + rtol * np.abs(y)
    d0 = math.sqrt(float(np.mean(np.abs(y / scale) ** 2)))
    d1 = math.sqrt(float(np.mean(np.abs(k[0] / scale) ** 2)))
    h_free = min(span, 0.01 * d0 / d1) if d1 > 1e-300 else span

    for i in range(ts.size):
        target = float(ts[i])
        while t < target:
            if accepted + rejected >= max_steps:
                return out, (accepted, rejected, nfev, STATUS_STEP_LIMIT)
            hit = h_free >= target - t
            h = target - t if hit else h_free
            if h < 1e-14 * max(1.0, abs(t)):
                return out, (accepted, rejected, nfev, STATUS_UNDERFLOW)

            y_stage = y
            for s in range(1, 7):
                acc = _A[s][0] * k[0]
                for j in range(1, s):
                    if _A[s][j] != 0.0:
                        acc = acc + _A[s][j] * k[j]
                y_stage = y + h * acc
                k[s] = _rhs(t + _C[s] * h, y_stage, e_arr, r_arr, lam, omega)
            nfev += 6
            y_new = y_stage  # stage 7 argument is the 5th-order solution (c7 = 1)
            err_vec = h * (
                _E[0] * k[0]
                + _E[2] * k[2]
                + _E[3] * k[3]
                + _E[4] * k[4]
                + _E[5] * k[5]
                + _E[6] * k[6]
            )
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = math.sqrt(float(np.mean(np.abs(err_vec / sc) ** 2)))

            if err <= 1.0:
                accepted += 1
                t = target if hit else t + h
                y = y_new
                k[0] = k[6]
                fac = _MAX_FACTOR if err == 0.0 else min(
                    _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err**-0.2)
                )
                h_free = max(h_free, h * fac) if hit else h * fac
            else:
                rejected += 1
                h_free = h * min(1.0, max(_MIN_FACTOR, _SAFETY * err**-0.2))
        out[i] = y
    return out, (accepted, rejected, nfev, STATUS_OK)
