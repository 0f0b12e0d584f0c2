"""Homogenizing by iteration versus homogenizing by rescaling the base.

For a lifted Morse function f with minimum at x1, iterating gives
l^{x1}(phi^n)/n = f(x1) for every n, while rescaling the base gives
l^{x1}(phi_{H_n}) = f(n x1). When x1 is irrational the orbit n x1 is dense,
so the running supremum of the rescaled values climbs to max f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hamiltonian as hm
from . import spectral as sp
from .errors import DomainError, OracleMismatchError
from .geometry import BasePoint, ClassLabel, Point, as_angle

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MATCH_TOL = 1e-6
STEP = 1e-2


def _grid_for(f: hm.TrigPoly, n: int) -> int:
    return max(256, 64 * n * max(f.degree, 1))


def rescaled_spectral(f: hm.TrigPoly, x1, n: int, grid: int | None = None,
                      step: float = STEP) -> float:
    """l^{x1} of the rescaled lift, cross-checked against f(n x1 mod 1)."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    x = float(as_angle(x1))
    H = hm.viterbo_rescale(hm.Lifted(f, hm.safe_cutoff(n * f.deriv_bound())), n)
    prof = sp.action_profile(H, grid or _grid_for(f, n), step)
    value = sp.ell_plus(prof, Point(x), ClassLabel.FUNDAMENTAL, witness=False).value
    closed = float(f((n * x) % 1.0))
    if abs(value - closed) > MATCH_TOL:
        raise OracleMismatchError(f"n={n}: oracle {value!r} vs closed form {closed!r}")
    return value


@dataclass
class OrbitExperiment:
    f: hm.TrigPoly
    x1: BasePoint
    n_max: int
    lhs: float
    rhs_sequence: np.ndarray  # f(n x1 mod 1), n = 1..n_max
    rhs_sup: np.ndarray  # running supremum
    spot_checks: list  # [(n, oracle value)]

    @property
    def gap(self) -> float:
        """max f minus the final running supremum."""
        return self.f.extrema()[2] - float(self.rhs_sup[-1])

    @property
    def separation(self) -> float:
        return abs(float(self.rhs_sup[-1]) - self.lhs)


def orbit_values(f: hm.TrigPoly, x1, n_max: int) -> np.ndarray:
    x = as_angle(x1)
    n = np.arange(1, n_max + 1)
    # fractional parts computed exactly when x is a Fraction
    if hasattr(x, "denominator") and not isinstance(x, float):
        orbit = np.array([float((k * x) % 1) for k in n])
    else:
        orbit = np.mod(n * float(x), 1.0)
    return f(orbit)


def orbit_experiment(f: hm.TrigPoly, x1, n_max: int, spot_checks: int = 10,
                     seed: int = 0, spot_max: int = 50) -> OrbitExperiment:
    """Compare f(x1) with the running supremum of f(n x1) up to ``n_max``.

    The rescaled values come from the closed form; ``spot_checks`` of them, at
    random n <= min(n_max, spot_max), are recomputed by the flow oracle.
    """
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max!r}")
    n_max = int(n_max)
    x = BasePoint(x1)
    rhs = orbit_values(f, x.q, n_max)
    checks = []
    if spot_checks:
        rng = np.random.default_rng(seed)
        top = min(n_max, spot_max)
        ns = sorted(set(int(k) for k in rng.integers(1, top + 1, size=spot_checks)))
        checks = [(k, rescaled_spectral(f, x.q, k)) for k in ns]
    return OrbitExperiment(f, x, n_max, float(f(float(x.q))), rhs, np.maximum.accumulate(rhs), checks)


__all__ = ["GOLDEN", "OrbitExperiment", "orbit_experiment", "orbit_values", "rescaled_spectral"]
