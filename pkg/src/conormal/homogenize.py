"""Iterated spectral sequences, their structural properties and homogenization.

For phi = phi_H and a target N the two sequences are

    a_n = n l^M(phi^-1) + l^N(phi^n),     b_n = n l^M(phi^-1) + l^M(phi^n),

where l^N is the fundamental-class spectral number on N and l^M the one on
the whole circle. The homogenized invariant is a limsup of l^N(phi^n)/n,
which is estimated from a tail window and reported together with the
accumulation clusters of the ratio sequence, since the plain limit may fail
to exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import hamiltonian as hm
from . import spectral as sp
from .errors import (
    BlowUpError,
    DomainError,
    NotSubadditiveError,
    OracleUnavailableError,
    PartialSequenceError,
)
from .geometry import ClassLabel, Whole

CLUSTER_TOL = 1.0 / 24.0
PROPERTY_TOL = 1e-6


@dataclass
class PropertyResult:
    name: str
    passed: bool
    trials: int
    worst_margin: float
    witness: tuple | None = None  # indices realizing the worst margin


@dataclass
class PropertyReport:
    results: dict
    tol: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def __getitem__(self, name):
        return self.results[name]


@dataclass
class LimsupEstimate:
    value: float
    tail_window: int
    accumulation_points: list  # [(center, count)], ascending
    converged: bool
    tail_min: float
    tol: float


@dataclass
class FeketeEstimate:
    inf_ratio: float
    argmin: int
    final_ratio: float
    pairs_checked: int

    def __float__(self):
        return self.inf_ratio


@dataclass
class SequencePair:
    n_max: int
    a: np.ndarray
    b: np.ndarray
    C: float
    ell_N: np.ndarray | None = None  # l^N(phi^n), n = 1..n_max
    ell_M: np.ndarray | None = None
    ell_M_inv: float | None = None
    target: object = None
    error_bound: float = 0.0
    step: float | None = None
    properties: PropertyReport | None = None
    limsup: LimsupEstimate | None = None
    phase_starts: list = field(default_factory=list)

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, self.n_max + 1)

    @property
    def a_ratio(self) -> np.ndarray:
        return self.a / self.n

    @property
    def b_ratio(self) -> np.ndarray:
        return self.b / self.n


# --- oracle-built sequences -----------------------------------------------------


def _check_n_max(n_max):
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max!r}")
    return int(n_max)


def iterate_values(H, N, n_max, grid=sp.DEFAULT_GRID, step=hm.DEFAULT_STEP,
                   class_label=ClassLabel.FUNDAMENTAL, with_whole=False):
    """l^N(phi^n) for n = 1..n_max (and l^M(phi^n) if ``with_whole``)."""
    n_max = _check_n_max(n_max)
    try:
        profiles = sp.iterate_profiles(H, n_max, grid, step)
    except BlowUpError as e:
        raise PartialSequenceError(n_max, e) from e
    ell_N, ell_M, err = [], [], 0.0
    for n, prof in enumerate(profiles, start=1):
        try:
            ell_N.append(sp.ell_plus(prof, N, class_label, witness=False).value)
            if with_whole:
                ell_M.append(sp.ell_plus(prof, Whole(), ClassLabel.FUNDAMENTAL, witness=False).value)
        except OracleUnavailableError as e:
            raise PartialSequenceError(n, e) from e
        err = max(err, prof.error_bound)
    return np.array(ell_N), (np.array(ell_M) if with_whole else None), err


def build_sequences(H, N, n_max: int, grid: int = sp.DEFAULT_GRID,
                    step: float = hm.DEFAULT_STEP) -> SequencePair:
    n_max = _check_n_max(n_max)
    ell_N, ell_M, err = iterate_values(H, N, n_max, grid, step, with_whole=True)
    try:
        inv = sp.action_profile(hm.inverse(H), grid, step)
        ell_inv = sp.ell_plus(inv, Whole(), ClassLabel.FUNDAMENTAL, witness=False).value
    except (OracleUnavailableError, BlowUpError) as e:
        raise PartialSequenceError(-1, e) from e
    err = max(err, inv.error_bound)
    n = np.arange(1, n_max + 1)
    increments = np.abs(np.diff(np.append(0.0, ell_N)))
    return SequencePair(
        n_max=n_max,
        a=n * ell_inv + ell_N,
        b=n * ell_inv + ell_M,
        C=abs(ell_inv) + float(increments.max()),
        ell_N=ell_N,
        ell_M=ell_M,
        ell_M_inv=ell_inv,
        target=N,
        error_bound=err,
        step=step,
    )


# --- structural properties ------------------------------------------------------


def _worst(name, margins, tol, index_fn):
    if len(margins) == 0:
        return PropertyResult(name, True, 0, math.inf, None)
    i = int(np.argmin(margins))
    m = float(margins[i])
    return PropertyResult(name, m >= -tol, len(margins), m, index_fn(i))


def check_properties(s: SequencePair, sample_pairs: int = 10_000, seed: int = 0,
                     tol: float = PROPERTY_TOL) -> PropertyReport:
    """Check the five sequence properties and record worst margins.

    P1  a_{m+n} <= a_n + b_m        (sampled pairs with m + n <= n_max)
    P2  a_n >= 0 and b_n >= 0
    P3  a_n <= b_n
    P4  a_{n+1} >= a_n
    P5  a_{n+1} - a_n <= C
    """
    a, b, N = np.asarray(s.a, float), np.asarray(s.b, float), s.n_max
    res = {}
    if N >= 2:
        rng = np.random.default_rng(seed)
        n = rng.integers(1, N, size=sample_pairs)
        m = rng.integers(1, N - n + 1)
        margin = a[n - 1] + b[m - 1] - a[m + n - 1]
        res["P1"] = _worst("P1", margin, tol, lambda i: (int(m[i]), int(n[i])))
    else:
        res["P1"] = _worst("P1", np.array([]), tol, None)
    res["P2"] = _worst("P2", np.minimum(a, b), tol, lambda i: (i + 1,))
    res["P3"] = _worst("P3", b - a, tol, lambda i: (i + 1,))
    d = np.diff(a)
    res["P4"] = _worst("P4", d, tol, lambda i: (i + 1,))
    res["P5"] = _worst("P5", s.C - d, tol, lambda i: (i + 1,))
    return PropertyReport(res, tol)


# --- limits -----------------------------------------------------------------------


def _clusters(values, tol):
    v = np.sort(np.asarray(values, float))
    if len(v) == 0:
        return []
    cuts = np.flatnonzero(np.diff(v) > tol) + 1
    return [(float(g.mean()), len(g)) for g in np.split(v, cuts)]


def limsup_estimate(ratios, tol: float = CLUSTER_TOL) -> LimsupEstimate:
    """Tail-window supremum of ``ratios`` with accumulation clusters.

    The value is the sup over the last ceil(n/10) terms. Cluster candidates are
    the turning points (local extrema) over the last three quarters of the
    sequence, so long monotone phases contribute their endpoints only. A
    sequence without turning points contributes its final term.
    """
    r = np.asarray(ratios, float)
    n = len(r)
    if n < 10:
        raise DomainError("limsup estimation needs at least 10 terms")
    w = math.ceil(n / 10)
    tail = r[-w:]
    span = r[n // 4:]
    mid = span[1:-1]
    turn = np.flatnonzero(((mid > span[:-2]) & (mid >= span[2:])) | ((mid < span[:-2]) & (mid <= span[2:]))) + 1
    cands = span[turn] if len(turn) else span[-1:]
    clusters = _clusters(cands, tol)
    return LimsupEstimate(float(tail.max()), w, clusters, len(clusters) == 1, float(tail.min()), tol)


def limsup_ratio(s: SequencePair, which: str = "a", tol: float = CLUSTER_TOL) -> LimsupEstimate:
    if which not in ("a", "b"):
        raise DomainError("which must be 'a' or 'b'")
    return limsup_estimate(s.a_ratio if which == "a" else s.b_ratio, tol)


def fekete_limit(b, sample_pairs: int = 10_000, seed: int = 0, tol: float = PROPERTY_TOL) -> FeketeEstimate:
    """inf b_n / n over the available prefix, after checking subadditivity."""
    b = np.asarray(b, float)
    N = len(b)
    if N == 0:
        raise DomainError("empty sequence")
    if N >= 2:
        if N * (N - 1) // 2 <= sample_pairs:
            m, n = np.meshgrid(np.arange(1, N), np.arange(1, N), indexing="ij")
            keep = m + n <= N
            m, n = m[keep], n[keep]
        else:
            rng = np.random.default_rng(seed)
            n = rng.integers(1, N, size=sample_pairs)
            m = rng.integers(1, N - n + 1)
        margin = b[m - 1] + b[n - 1] - b[m + n - 1]
        if len(margin):
            i = int(np.argmin(margin))
            if margin[i] < -tol:
                raise NotSubadditiveError(int(m[i]), int(n[i]), float(margin[i]))
        checked = len(margin)
    else:
        checked = 0
    ratios = b / np.arange(1, N + 1)
    j = int(np.argmin(ratios))
    return FeketeEstimate(float(ratios[j]), j + 1, float(ratios[-1]), checked)


def sigma(H, N, n_max: int, grid: int = sp.DEFAULT_GRID, step: float = hm.DEFAULT_STEP,
          tol: float = CLUSTER_TOL) -> LimsupEstimate:
    """limsup_n l^N(phi^n) / n, estimated from the first ``n_max`` iterates."""
    ell, _, _ = iterate_values(H, N, n_max, grid, step)
    return limsup_estimate(ell / np.arange(1, len(ell) + 1), tol)


def zeta(H, N, n_max: int, grid: int = sp.DEFAULT_GRID, step: float = hm.DEFAULT_STEP,
         tol: float = CLUSTER_TOL) -> LimsupEstimate:
    """The quasi-state of a Hamiltonian: sigma of its time-one map."""
    return sigma(H, N, n_max, grid, step, tol)


# --- non-convergent example -------------------------------------------------------


def counterexample(n_max: int, theta_low=Fraction(1, 3), theta_high=Fraction(1, 2),
                   sample_pairs: int = 10_000, seed: int = 0) -> SequencePair:
    """Hold/increment sequence whose ratio a_n/n oscillates across two thresholds.

    a_1 = 1. The sequence holds (a_{n+1} = a_n) until a_n/n < theta_low, then
    increments by one until a_n/n > theta_high, and so on. Both comparisons are
    strict; equality continues the current phase. The companion sequence is
    b_n = n and the increment bound is C = 1.
    """
    n_max = _check_n_max(n_max)
    lo, hi = Fraction(theta_low), Fraction(theta_high)
    if not 0 < lo < hi < 1:
        raise DomainError("need 0 < theta_low < theta_high < 1")
    lp, lq, hp, hq = lo.numerator, lo.denominator, hi.numerator, hi.denominator
    a = np.empty(n_max, dtype=np.int64)
    cur, holding = 1, True
    starts = [(1, "hold")]
    for n in range(1, n_max + 1):
        a[n - 1] = cur
        # decide the step from a_n to a_{n+1}
        if holding and cur * lq < lp * n:
            holding = False
            starts.append((n, "increment"))
        elif not holding and cur * hq > hp * n:
            holding = True
            starts.append((n, "hold"))
        if not holding:
            cur += 1
    s = SequencePair(
        n_max=n_max,
        a=a.astype(float),
        b=np.arange(1, n_max + 1, dtype=float),
        C=1.0,
        phase_starts=starts,
    )
    s.properties = check_properties(s, sample_pairs, seed, tol=0.0)
    if n_max >= 10:
        s.limsup = limsup_ratio(s, "a", CLUSTER_TOL)
    return s


__all__ = [
    "FeketeEstimate",
    "LimsupEstimate",
    "PropertyReport",
    "PropertyResult",
    "SequencePair",
    "build_sequences",
    "check_properties",
    "counterexample",
    "fekete_limit",
    "iterate_values",
    "limsup_estimate",
    "limsup_ratio",
    "sigma",
    "zeta",
]
