# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Dormand-Prince 5(4) stepper for the driven level system.

Mirrors gupwell._core_py stage for stage (same tableau, same controller
clips), so both backends follow the same accepted-step sequence up to
rounding. Keep the two files in sync when touching either.
"""

import numpy as np

from libc.math cimport cos, fmax, fmin, pow, sin, sqrt


cdef double C2 = 1.0 / 5.0
cdef double C3 = 3.0 / 10.0
cdef double C4 = 4.0 / 5.0
cdef double C5 = 8.0 / 9.0

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0

cdef double MAX_FACTOR = 5.0
cdef double MIN_FACTOR = 0.2
cdef double SAFETY = 0.9

cdef int _OK = 0
cdef int _STEP_LIMIT = 1
cdef int _UNDERFLOW = 2

STATUS_OK = 0
STATUS_STEP_LIMIT = 1
STATUS_UNDERFLOW = 2


cdef inline double _cabs(double complex z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef void _rhs(double t, double complex[::1] y, const double[::1] e, const double[:, ::1] r,
               double lam, double omega, double complex[::1] out,
               double[::1] wre, double[::1] wim,
               double[::1] cosv, double[::1] sinv) noexcept nogil:
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i, j
    cdef double co, si, a, b, sre, sim, g
    for j in range(n):
        co = cos(e[j] * t)
        si = sin(e[j] * t)
        cosv[j] = co
        sinv[j] = si
        a = y[j].real
        b = y[j].imag
        # w = exp(-i e t) y
        wre[j] = co * a + si * b
        wim[j] = co * b - si * a
    g = lam * cos(omega * t)
    for i in range(n):
        sre = 0.0
        sim = 0.0
        for j in range(n):
            sre += r[i, j] * wre[j]
            sim += r[i, j] * wim[j]
        # rotate back by exp(+i e t), then multiply by -i g
        a = cosv[i] * sre - sinv[i] * sim
        b = sinv[i] * sre + cosv[i] * sim
        out[i] = g * b - 1j * (g * a)


def propagate_coeffs(energies, dipole, double lam, double omega, c0, t_samples,
                     double rtol, double atol, long max_steps=10000000):
    """Integrate from t = 0, recording the state at each sample time.

    Same contract as gupwell._core_py.propagate_coeffs.
    """
    e_arr = np.ascontiguousarray(energies, dtype=np.float64)
    r_arr = np.ascontiguousarray(dipole, dtype=np.float64)
    ts_arr = np.ascontiguousarray(t_samples, dtype=np.float64)
    y_arr = np.array(c0, dtype=np.complex128)

    cdef const double[::1] e = e_arr
    cdef const double[:, ::1] r = r_arr
    cdef const double[::1] ts = ts_arr
    cdef double complex[::1] y = y_arr
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t m = ts.shape[0]

    out_arr = np.empty((m, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr

    k_arr = np.zeros((7, n), dtype=np.complex128)
    cdef double complex[:, ::1] k = k_arr
    ytmp_arr = np.empty(n, dtype=np.complex128)
    ynew_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ytmp = ytmp_arr
    cdef double complex[::1] ynew = ynew_arr
    scratch = np.empty((4, n), dtype=np.float64)
    cdef double[::1] wre = scratch[0]
    cdef double[::1] wim = scratch[1]
    cdef double[::1] cosv = scratch[2]
    cdef double[::1] sinv = scratch[3]

    cdef double t = 0.0
    cdef long accepted = 0, rejected = 0, nfev = 0
    cdef int status = _OK
    cdef double span, d0, d1, h_free, h, target, sc, errval, fac, acc
    cdef double complex ev
    cdef Py_ssize_t i, j, si_idx
    cdef bint hit

    with nogil:
        _rhs(t, y, e, r, lam, omega, k[0], wre, wim, cosv, sinv)
    nfev = 1

    span = ts[m - 1] if (m > 0 and ts[m - 1] > 0.0) else 1.0
    d0 = 0.0
    d1 = 0.0
    for j in range(n):
        sc = atol + rtol * _cabs(y[j])
        d0 += (_cabs(y[j]) / sc) ** 2
        d1 += (_cabs(k[0, j]) / sc) ** 2
    d0 = sqrt(d0 / n)
    d1 = sqrt(d1 / n)
    h_free = fmin(span, 0.01 * d0 / d1) if d1 > 1e-300 else span

    with nogil:
        for si_idx in range(m):
            target = ts[si_idx]
            while t < target:
                if accepted + rejected >= max_steps:
                    status = _STEP_LIMIT
                    break
                hit = h_free >= target - t
                h = target - t if hit else h_free
                if h < 1e-14 * fmax(1.0, t if t >= 0 else -t):
                    status = _UNDERFLOW
                    break

                for j in range(n):
                    ytmp[j] = y[j] + h * (A21 * k[0, j])
                _rhs(t + C2 * h, ytmp, e, r, lam, omega, k[1], wre, wim, cosv, sinv)
                for j in range(n):
                    ytmp[j] = y[j] + h * (A31 * k[0, j] + A32 * k[1, j])
                _rhs(t + C3 * h, ytmp, e, r, lam, omega, k[2], wre, wim, cosv, sinv)
                for j in range(n):
                    ytmp[j] = y[j] + h * (A41 * k[0, j] + A42 * k[1, j] + A43 * k[2, j])
                _rhs(t + C4 * h, ytmp, e, r, lam, omega, k[3], wre, wim, cosv, sinv)
                for j in range(n):
                    ytmp[j] = y[j] + h * (A51 * k[0, j] + A52 * k[1, j]
                                          + A53 * k[2, j] + A54 * k[3, j])
                _rhs(t + C5 * h, ytmp, e, r, lam, omega, k[4], wre, wim, cosv, sinv)
                for j in range(n):
                    ytmp[j] = y[j] + h * (A61 * k[0, j] + A62 * k[1, j] + A63 * k[2, j]
                                          + A64 * k[3, j] + A65 * k[4, j])
                _rhs(t + h, ytmp, e, r, lam, omega, k[5], wre, wim, cosv, sinv)
                for j in range(n):
                    ynew[j] = y[j] + h * (B1 * k[0, j] + B3 * k[2, j] + B4 * k[3, j]
                                          + B5 * k[4, j] + B6 * k[5, j])
                _rhs(t + h, ynew, e, r, lam, omega, k[6], wre, wim, cosv, sinv)
                nfev += 6

                errval = 0.0
                for j in range(n):
                    ev = h * (E1 * k[0, j] + E3 * k[2, j] + E4 * k[3, j]
                              + E5 * k[4, j] + E6 * k[5, j] + E7 * k[6, j])
                    sc = atol + rtol * fmax(_cabs(y[j]), _cabs(ynew[j]))
                    errval += (_cabs(ev) / sc) ** 2
                errval = sqrt(errval / n)

                if errval <= 1.0:
                    accepted += 1
                    t = target if hit else t + h
                    for j in range(n):
                        y[j] = ynew[j]
                        k[0, j] = k[6, j]
                    fac = MAX_FACTOR if errval == 0.0 else fmin(
                        MAX_FACTOR, fmax(MIN_FACTOR, SAFETY * pow(errval, -0.2)))
                    h_free = fmax(h_free, h * fac) if hit else h * fac
                else:
                    rejected += 1
                    h_free = h * fmin(1.0, fmax(MIN_FACTOR, SAFETY * pow(errval, -0.2)))
            if status != _OK:
                break
            for j in range(n):
                out[si_idx, j] = y[j]

    return out_arr, (accepted, rejected, nfev, status)
