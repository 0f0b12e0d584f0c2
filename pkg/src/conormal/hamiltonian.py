"""Compactly supported Hamiltonians on T*S^1 and their flows.

Every catalog spec compiles to a *program*: an ordered list of autonomous
segments, each flowed for a native duration. The time-one map of the spec is
the composite of the segments in order. The unit-time generator of a program
with total duration D runs each segment at speed D, so for example
``compose(H, K)`` is generated by ``2K`` on [0, 1/2] and ``2H`` on [1/2, 1].
Reparametrizing time leaves both the time-one map and the action unchanged,
so segments are integrated at native speed.

The integrator is classical RK4 on (q, p, action) with

    q' = dH/dp,   p' = -dH/dq,   action' = -p q' + H,

which accumulates ``-int p dq + int H dt`` along the path. Each run is
repeated at half step and the difference (divided by 15) is reported as the
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Sequence, Union

import numpy as np

from . import _backend
from ._layout import (
    AMP,
    BUMP,
    COS0,
    DEG,
    FREQ,
    KIND,
    LIFTED,
    MAX_DEGREE,
    P0,
    Q0,
    R0,
    R1,
    RP,
    RQ,
    SCALE,
    SIN1,
    WIDTH,
)
from .errors import BlowUpError, DomainError
from .geometry import BasePoint, PhasePoint, as_angle, wrap

DEFAULT_STEP = 1e-3
TWO_PI = 2.0 * math.pi


# --- building blocks ----------------------------------------------------------


@dataclass(frozen=True)
class TrigPoly:
    """f(q) = c0 + sum_k c_k cos(2 pi k q) + s_k sin(2 pi k q)."""

    cos: tuple = (0.0,)
    sin: tuple = ()

    def __post_init__(self):
        c = tuple(float(v) for v in self.cos) or (0.0,)
        s = tuple(float(v) for v in self.sin)
        if len(s) > len(c) - 1:
            c = c + (0.0,) * (len(s) - len(c) + 1)
        s = s + (0.0,) * (len(c) - 1 - len(s))
        if len(c) - 1 > MAX_DEGREE:
            raise DomainError(f"degree {len(c) - 1} exceeds the cap of {MAX_DEGREE}")
        if not all(map(math.isfinite, c + s)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "cos", c)
        object.__setattr__(self, "sin", s)

    @classmethod
    def cosine(cls, amplitude=1.0):
        return cls((0.0, amplitude), (0.0,))

    @classmethod
    def shifted_cosine(cls, x1):
        """cos(2 pi (q - x1 + 1/2)): a Morse function with its minimum -1 at x1."""
        th = TWO_PI * float(as_angle(x1))
        return cls((0.0, -math.cos(th)), (-math.sin(th),))

    @property
    def degree(self) -> int:
        return len(self.cos) - 1

    def _harmonics(self, q):
        q = np.asarray(q, dtype=float)
        k = np.arange(1, self.degree + 1)
        th = TWO_PI * np.multiply.outer(q, k)
        return k, np.cos(th), np.sin(th)

    def __call__(self, q):
        k, ck, sk = self._harmonics(q)
        out = self.cos[0] + ck @ np.array(self.cos[1:]) + sk @ np.array(self.sin)
        return float(out) if np.ndim(out) == 0 else out

    def deriv(self, q, order=1):
        k, ck, sk = self._harmonics(q)
        a, b = np.array(self.cos[1:]), np.array(self.sin)
        w = (TWO_PI * k) ** order
        # d^m/dq^m of cos/sin cycles with period 4
        m = order % 4
        if m == 0:
            out = ck @ (a * w) + sk @ (b * w)
        elif m == 1:
            out = ck @ (b * w) - sk @ (a * w)
        elif m == 2:
            out = -(ck @ (a * w)) - sk @ (b * w)
        else:
            out = sk @ (a * w) - ck @ (b * w)
        return float(out) if np.ndim(out) == 0 else out

    def deriv_bound(self, order=1) -> float:
        """Coefficient-sum bound on max |f^(order)|."""
        return float(sum((TWO_PI * k) ** order * (abs(a) + abs(b))
                         for k, (a, b) in enumerate(zip(self.cos[1:], self.sin), start=1)))

    def _polish(self, x):
        for _ in range(8):
            d2 = self.deriv(x, 2)
            if d2 == 0.0:
                break
            x = x - self.deriv(x) / d2
        return x % 1.0

    def extrema(self, samples=4096):
        """(min, argmin, max, argmax) by dense sampling plus Newton polish."""
        q = np.arange(samples) / samples
        v = self(q)
        i, j = int(np.argmin(v)), int(np.argmax(v))
        xmin, xmax = self._polish(q[i]), self._polish(q[j])
        if self(xmin) > v[i]:
            xmin = q[i]
        if self(xmax) < v[j]:
            xmax = q[j]
        return float(self(xmin)), float(xmin), float(self(xmax)), float(xmax)

    def _combine(self, other, sign):
        n = max(len(self.cos), len(other.cos))
        c = np.zeros(n)
        s = np.zeros(n - 1)
        c[: len(self.cos)] += self.cos
        s[: len(self.sin)] += self.sin
        c[: len(other.cos)] += sign * np.array(other.cos)
        s[: len(other.sin)] += sign * np.array(other.sin)
        return TrigPoly(tuple(c), tuple(s))

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return TrigPoly(tuple(-v for v in self.cos), tuple(-v for v in self.sin))

    def __mul__(self, s):
        return TrigPoly(tuple(s * v for v in self.cos), tuple(s * v for v in self.sin))

    __rmul__ = __mul__


@dataclass(frozen=True)
class CutoffSpec:
    """chi(|p|) = 1 on |p| <= r0, 0 on |p| >= r1, smooth and monotone between."""

    r0: float
    r1: float

    def __post_init__(self):
        if not (self.r0 > 0 and self.r1 > self.r0 and math.isfinite(self.r1)):
            raise DomainError(f"need 0 < r0 < r1 < inf, got {self.r0}, {self.r1}")


def safe_cutoff(slope_bound: float, n_max: int = 1, margin: float = 1.0) -> CutoffSpec:
    """Cutoff whose flat region contains every iterate up to ``n_max``."""
    r0 = 1.0 + n_max * slope_bound
    return CutoffSpec(r0, r0 + margin)


# --- catalog ------------------------------------------------------------------


@dataclass(frozen=True)
class Lifted:
    f: TrigPoly
    cut: CutoffSpec


@dataclass(frozen=True)
class Bump:
    q0: BasePoint
    p0: float
    r_q: float
    r_p: float
    A: float

    def __post_init__(self):
        if not isinstance(self.q0, BasePoint):
            object.__setattr__(self, "q0", BasePoint(self.q0))
        if not (0 < self.r_q <= 0.5):
            raise DomainError("bump angular radius must lie in (0, 1/2]")
        if not self.r_p > 0:
            raise DomainError("bump fibre radius must be positive")


@dataclass(frozen=True)
class Scale:
    s: float
    inner: "HamiltonianSpec"


@dataclass(frozen=True)
class Sum:
    members: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class Compose:
    """Generates phi_left o phi_right (``right`` acts first)."""

    left: "HamiltonianSpec"
    right: "HamiltonianSpec"


@dataclass(frozen=True)
class Inverse:
    inner: "HamiltonianSpec"


@dataclass(frozen=True)
class Iterate:
    inner: "HamiltonianSpec"
    n: int


@dataclass(frozen=True)
class ViterboRescale:
    inner: "HamiltonianSpec"
    n: int


HamiltonianSpec = Union[Lifted, Bump, Scale, Sum, Compose, Inverse, Iterate, ViterboRescale]


def zero() -> Sum:
    return Sum(())


def lifted(f: TrigPoly, n_max: int = 1, scale: float = 1.0) -> Lifted:
    """Lift ``f`` with a cutoff sized so ``n_max`` iterates of ``scale * f`` stay flat."""
    return Lifted(f, safe_cutoff(abs(scale) * f.deriv_bound(), n_max))


def compose(H, K) -> Compose:
    return Compose(H, K)


def inverse(H):
    return Inverse(H)


def iterate(H, n: int):
    if int(n) != n or n < 1:
        raise DomainError(f"iterate needs a positive integer, got {n!r}")
    return H if n == 1 else Iterate(H, int(n))


def viterbo_rescale(H, n: int):
    if int(n) != n or n < 1:
        raise DomainError(f"rescaling needs a positive integer, got {n!r}")
    if not is_autonomous(H):
        raise DomainError("Viterbo rescaling needs an autonomous Hamiltonian")
    return H if n == 1 else ViterboRescale(H, int(n))


def scale(s: float, H) -> Scale:
    return Scale(float(s), H)


def hsum(*members) -> Sum:
    S = Sum(members)
    compile_spec(S)  # legality check
    return S


# --- compilation ----------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    duration: float
    terms: np.ndarray = field(compare=False)


def _lifted_row(spec: Lifted) -> np.ndarray:
    row = np.zeros(WIDTH)
    row[KIND] = LIFTED
    row[SCALE] = 1.0
    row[FREQ] = 1.0
    row[R0], row[R1] = spec.cut.r0, spec.cut.r1
    row[DEG] = spec.f.degree
    row[COS0 : COS0 + spec.f.degree + 1] = spec.f.cos
    row[SIN1 : SIN1 + spec.f.degree] = spec.f.sin
    return row


def _bump_row(spec: Bump) -> np.ndarray:
    row = np.zeros(WIDTH)
    row[KIND] = BUMP
    row[SCALE] = 1.0
    row[FREQ] = 1.0
    row[Q0], row[P0] = float(spec.q0.q), spec.p0
    row[RQ], row[RP], row[AMP] = spec.r_q, spec.r_p, spec.A
    return row


def _scaled(seg: Segment, s: float) -> Segment:
    if s == 0.0 or len(seg.terms) == 0:
        return Segment(seg.duration, np.zeros((0, WIDTH)))
    t = seg.terms.copy()
    t[:, SCALE] *= s
    return Segment(seg.duration, t)


def _p_hull(rows):
    lo, hi = math.inf, -math.inf
    for r in rows:
        if r[KIND] == LIFTED:
            lo, hi = min(lo, -r[R1]), max(hi, r[R1])
        else:
            lo, hi = min(lo, r[P0] - r[RP]), max(hi, r[P0] + r[RP])
    return lo, hi


def _q_disjoint(rows1, rows2):
    if any(r[KIND] == LIFTED or r[FREQ] != 1.0 for r in np.vstack([rows1, rows2])):
        return False
    for r1 in rows1:
        for r2 in rows2:
            if abs(wrap(r1[Q0] - r2[Q0])) < r1[RQ] + r2[RQ]:
                return False
    return True


def _commuting(rows1, rows2) -> bool:
    if len(rows1) == 0 or len(rows2) == 0:
        return True
    if all(r[KIND] == LIFTED for r in rows1) and all(r[KIND] == LIFTED for r in rows2):
        # functions of q alone Poisson-commute wherever the cutoffs are flat
        return True
    lo1, hi1 = _p_hull(rows1)
    lo2, hi2 = _p_hull(rows2)
    if hi1 <= lo2 or hi2 <= lo1:
        return True
    return _q_disjoint(rows1, rows2)


def compile_spec(H) -> list[Segment]:
    """Lower a catalog spec to its ordered list of autonomous segments."""
    if isinstance(H, Lifted):
        return [Segment(1.0, _lifted_row(H)[None, :])]
    if isinstance(H, Bump):
        rows = _bump_row(H)[None, :] if H.A != 0.0 else np.zeros((0, WIDTH))
        return [Segment(1.0, rows)]
    if isinstance(H, Scale):
        return [_scaled(seg, H.s) for seg in compile_spec(H.inner)]
    if isinstance(H, Sum):
        parts = []
        for m in H.members:
            segs = compile_spec(m)
            if len(segs) != 1:
                raise DomainError("Sum members must be autonomous")
            parts.append(_scaled(segs[0], segs[0].duration).terms)
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if not _commuting(parts[i], parts[j]):
                    raise DomainError(
                        f"Sum members {i} and {j} neither Poisson-commute nor have disjoint supports"
                    )
        rows = np.vstack(parts) if parts else np.zeros((0, WIDTH))
        return [Segment(1.0, rows)]
    if isinstance(H, Compose):
        return compile_spec(H.right) + compile_spec(H.left)
    if isinstance(H, Inverse):
        return [_scaled(seg, -1.0) for seg in reversed(compile_spec(H.inner))]
    if isinstance(H, Iterate):
        segs = compile_spec(H.inner)
        if len(segs) == 1:
            return [Segment(segs[0].duration * H.n, segs[0].terms)]
        return segs * H.n
    if isinstance(H, ViterboRescale):
        segs = compile_spec(H.inner)
        if len(segs) != 1:
            raise DomainError("Viterbo rescaling needs an autonomous Hamiltonian")
        t = segs[0].terms.copy()
        t[:, FREQ] *= H.n
        return [Segment(segs[0].duration, t)]
    raise TypeError(f"not a catalog Hamiltonian: {H!r}")


def is_autonomous(H) -> bool:
    return len(compile_spec(H)) == 1


def period(H) -> float:
    """Native duration of one application of phi_H."""
    return float(sum(seg.duration for seg in compile_spec(H)))


def support_radius(H) -> float:
    """R with H = 0 outside {|p| <= R}."""
    if isinstance(H, Lifted):
        return H.cut.r1
    if isinstance(H, Bump):
        return abs(H.p0) + H.r_p
    if isinstance(H, (Scale, Inverse, Iterate, ViterboRescale)):
        return support_radius(H.inner)
    if isinstance(H, Sum):
        return max((support_radius(m) for m in H.members), default=0.0)
    if isinstance(H, Compose):
        return max(support_radius(H.left), support_radius(H.right))
    raise TypeError(f"not a catalog Hamiltonian: {H!r}")


def evaluate(H, z: PhasePoint, t: float = 0.0) -> float:
    """Value of the unit-time generator of ``H`` at ``z`` and time ``t``."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    segs = compile_spec(H)
    D = sum(s.duration for s in segs)
    tau = t * D
    acc = 0.0
    seg = segs[-1]
    for s in segs:
        if tau < acc + s.duration:
            seg = s
            break
        acc += s.duration
    val, _, _ = _backend.eval_terms(seg.terms, float(z.q.q), z.p)
    return float(D * val)


# --- integration ------------------------------------------------------------------


@dataclass
class BatchFlow:
    """States of a batch of seeds at a list of snapshot times.

    Arrays are shaped (snapshots, seeds). ``q`` is unwrapped (not reduced).
    """

    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    action: np.ndarray
    error: np.ndarray
    step: float


def _program(segs):
    rows, lo, hi = [], [], []
    n = 0
    for s in segs:
        lo.append(n)
        rows.append(s.terms)
        n += len(s.terms)
        hi.append(n)
    terms = np.ascontiguousarray(np.vstack(rows) if rows else np.zeros((0, WIDTH)))
    return terms, lo, hi


def _chunks(segs, lo, hi, total, snapshot_times, step):
    """Split the periodic segment schedule on [0, total] at snapshot times."""
    eps = 1e-12 * max(1.0, total)
    snaps = list(snapshot_times)
    out = []  # (lo, hi, length, snapshot row)
    t, k, j = 0.0, 0, 0
    S = len(segs)
    while t < total - eps:
        i = k % S
        seg_end = t + segs[i].duration
        end = min(seg_end, total)
        while j < len(snaps) and snaps[j] <= t + eps:
            j += 1
        row = -1
        if j < len(snaps) and snaps[j] < end - eps:
            end = snaps[j]
        if j < len(snaps) and abs(snaps[j] - end) <= eps:
            row = j
        out.append((lo[i], hi[i], end - t, row))
        if end >= seg_end - eps:
            k += 1
            t = seg_end
        else:
            t = end
    return out


def _run_kernel(terms, chunks, q0, p0, nsnap, step, refine, blowup):
    lo = np.array([c[0] for c in chunks], dtype=np.intp)
    hi = np.array([c[1] for c in chunks], dtype=np.intp)
    nsteps = np.array([max(1, math.ceil(c[2] / step - 1e-9)) * refine for c in chunks], dtype=np.intp)
    h = np.array([c[2] for c in chunks], dtype=float) / nsteps
    row = np.array([c[3] for c in chunks], dtype=np.intp)
    G = len(q0)
    q = np.ascontiguousarray(q0, dtype=float).copy()
    p = np.ascontiguousarray(p0, dtype=float).copy()
    a = np.zeros(G)
    sq, sp, sa = (np.zeros((nsnap, G)) for _ in range(3))
    bad = _backend.integrate(q, p, a, terms, lo, hi, nsteps, h, row, sq, sp, sa, blowup)
    if bad >= 0:
        raise BlowUpError(f"seed {bad} left |p| <= {blowup:g}", seed_index=bad)
    return sq, sp, sa


def flow_batch(H, q0, p0, snapshots: Sequence[float], step: float = DEFAULT_STEP) -> BatchFlow:
    """Flow many seeds, recording states at ``snapshots`` (unit-time; may exceed 1).

    A snapshot at time n is the image under phi_H^n.
    """
    if not step > 0:
        raise DomainError("step must be positive")
    segs = compile_spec(H)
    D = sum(s.duration for s in segs)
    snaps = sorted(float(t) for t in snapshots)
    if not snaps or snaps[0] <= 0:
        raise DomainError("snapshot times must be positive")
    terms, lo, hi = _program(segs)
    native = [t * D for t in snaps]
    chunks = _chunks(segs, lo, hi, native[-1], native, step)
    blowup = 10.0 * max(support_radius(H), 1.0)
    q0 = np.atleast_1d(np.asarray(q0, dtype=float))
    p0 = np.broadcast_to(np.asarray(p0, dtype=float), q0.shape)
    coarse = _run_kernel(terms, chunks, q0, p0, len(snaps), step, 1, blowup)
    fine = _run_kernel(terms, chunks, q0, p0, len(snaps), step, 2, blowup)
    err = np.max(np.abs(np.stack(coarse) - np.stack(fine)), axis=0) / 15.0
    return BatchFlow(np.array(snaps), fine[0], fine[1], fine[2], err, step)


def time_one_map(H, q, p, step: float = DEFAULT_STEP):
    """Image of the points (q, p) under phi_H; q is returned unwrapped."""
    res = flow_batch(H, q, p, [1.0], step)
    return res.q[0], res.p[0]


@dataclass
class FlowTrajectory:
    start: PhasePoint
    samples: list  # [(t, PhasePoint)]
    action: float
    error_estimate: float
    step: float

    @property
    def end(self) -> PhasePoint:
        return self.samples[-1][1]


def flow(H, z: PhasePoint, T: float = 1.0, step: float = DEFAULT_STEP,
         sample_dt: float | None = None) -> FlowTrajectory:
    """Integrate ``H`` from ``z`` for unit-time ``T``, sampling every ``sample_dt``."""
    if not T > 0:
        raise DomainError("T must be positive")
    dt = step if sample_dt is None else sample_dt
    n = max(1, int(round(T / dt)))
    times = np.linspace(T / n, T, n)
    res = flow_batch(H, [float(z.q.q)], [z.p], times, step)
    samples = [(0.0, z)] + [(float(t), PhasePoint(float(qq), float(pp)))
                            for t, qq, pp in zip(times, res.q[:, 0], res.p[:, 0])]
    return FlowTrajectory(z, samples, float(res.action[-1, 0]), float(res.error[:, 0].max()), step)
