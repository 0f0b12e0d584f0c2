"""Time the compiled flow kernel against the numpy fallback.

    python3 benchmarks/bench_flow.py [--grid 1024] [--repeat 3]

Both kernels integrate the same batch of seeds, so the outputs are also
compared; they should agree to rounding.
"""

import argparse
import time

import numpy as np

from conormal import _backend, _flowkernel_py
from conormal import hamiltonian as hm

CASES = {
    "lifted cosine, 10 iterates": lambda: hm.iterate(hm.lifted(hm.TrigPoly.cosine(), 10), 10),
    "bump after lift": lambda: hm.compose(hm.lifted(hm.TrigPoly.cosine() * 0.3),
                                          hm.Bump(0.3, 0.0, 0.3, 0.8, 0.05)),
}


def _time(H, q0, step, repeat):
    best, res = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = hm.flow_batch(H, q0, 0.0, [1.0], step=step)
        best = min(best, time.perf_counter() - t0)
    return best, res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=1024)
    ap.add_argument("--step", type=float, default=1e-2)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    q0 = np.arange(args.grid) / args.grid
    compiled = _backend.integrate
    print(f"active backend: {_backend.BACKEND}; grid {args.grid}, step {args.step:g}")
    print(f"{'case':32s} {'compiled':>10s} {'python':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, make in CASES.items():
        H = make()
        try:
            _backend.integrate = compiled
            t_c, r_c = _time(H, q0, args.step, args.repeat)
            _backend.integrate = _flowkernel_py.integrate
            t_p, r_p = _time(H, q0, args.step, args.repeat)
        finally:
            _backend.integrate = compiled
        diff = max(np.max(np.abs(r_c.q - r_p.q)), np.max(np.abs(r_c.p - r_p.p)),
                   np.max(np.abs(r_c.action - r_p.action)))
        print(f"{name:32s} {t_c:9.3f}s {t_p:9.3f}s {t_p / t_c:7.1f}x {diff:10.2e}")


if __name__ == "__main__":
    main()
