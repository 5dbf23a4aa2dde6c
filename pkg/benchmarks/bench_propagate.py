"""Time the compiled propagation kernel against the NumPy fallback.

Both kernels take identical step sequences, so the comparison isolates
dispatch and loop overhead. Run from the repo root:

    python3 benchmarks/bench_propagate.py
    python3 benchmarks/bench_propagate.py --days 2375 --repeats 5
"""

import argparse
import time

import numpy as np

from gupwell import ModelParams, dipole_matrix, spectrum_table, validate_params
from gupwell.backend import active_backend, get_kernel


def build_workload(n_basis, days, samples):
    p = validate_params(ModelParams(lam=0.02, omega=0.132, n_basis=n_basis))
    energies = spectrum_table(p).energies
    coupling = dipole_matrix(p).entries
    c0 = np.zeros(n_basis, dtype=np.complex128)
    c0[0] = 1.0
    times = np.linspace(0.0, float(days), samples)
    return energies, coupling, p.lam, p.omega, c0, times, 1e-12, 1e-12


def best_of(kernel, args, repeats):
    timings = []
    stats = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        _, stats = kernel(*args)
        timings.append(time.perf_counter() - t0)
    accepted, rejected, nfev, status = stats
    if status != 0:
        raise RuntimeError(f"kernel returned status {status}")
    return min(timings), nfev


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--days", type=float, default=600.0, help="integration span")
    ap.add_argument("--samples", type=int, default=257, help="sample times")
    ap.add_argument("--n-basis", type=int, default=64, help="basis size")
    ap.add_argument("--repeats", type=int, default=3, help="runs per kernel, best kept")
    cfg = ap.parse_args(argv)

    args = build_workload(cfg.n_basis, cfg.days, cfg.samples)
    print(f"workload: n_basis={cfg.n_basis} days={cfg.days:g} "
          f"samples={cfg.samples} repeats={cfg.repeats}")
    print(f"default backend at import: {active_backend()}")

    rows = []
    for name in ("python", "compiled"):
        try:
            kernel = get_kernel(name)
        except ImportError:
            print(f"{name:>9}: unavailable (extension not built), skipping")
            continue
        secs, nfev = best_of(kernel, args, cfg.repeats)
        rows.append((name, secs, nfev))
        print(f"{name:>9}: {secs:8.3f} s   {nfev} rhs evals   "
              f"{nfev / secs / 1e3:8.1f} k evals/s")

    if len(rows) == 2:
        (py_name, py_s, py_n), (c_name, c_s, c_n) = rows
        if py_n != c_n:
            print(f"warning: eval counts differ ({py_n} vs {c_n})")
        print(f"speedup: {py_s / c_s:.2f}x ({c_name} over {py_name})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
