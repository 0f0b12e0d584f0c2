"""Spectral numbers of graphical Lagrangians in T*S^1.

Seeds (q0, 0) on the zero section are flowed by phi_H. When the endpoint base
b(q0) is a degree-one circle diffeomorphism, phi_H(o_M) is the graph of an exact
form and the accumulated action, read as a function of b, is its primitive S
(with fibre p1 = -S'(b)). Hamiltonian chords from o_M to a conormal are then
points of the graph over the conormal, and their actions are values of S:

* fibre over x:                 one chord, value S(x)
* zero section (N = S^1):       critical points; [N] at max S, point class at min S
* arc, relative class ("-"):    max of S over the closed arc
* arc, point class ("+"):       min of S over the closed arc
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import minimize_scalar

from . import hamiltonian as hm
from .errors import DomainError, OracleUnavailableError, UnsupportedCombinationError
from .geometry import Arc, ClassLabel, Point, Whole, as_angle, wrap
from .persistence import PersistenceDiagram, graph_persistence

DEFAULT_GRID = 4096
MONOTONE_MARGIN = 1e-9
SPECTRALITY_TOL = 1e-5


@dataclass
class ActionProfile:
    """Endpoint map and action of the flowed zero section, sampled at seeds."""

    spec: object
    seeds: np.ndarray
    base: np.ndarray  # unwrapped endpoint base points
    fiber: np.ndarray
    action: np.ndarray
    integrator_error: float
    step: float
    graphical: bool
    reason: str = ""
    error_bound: float = math.inf
    xs: np.ndarray | None = field(default=None, repr=False)
    ys: np.ndarray | None = field(default=None, repr=False)
    _spline: object = field(default=None, repr=False)

    def S(self, x):
        """Primitive of the graph, evaluated at base points ``x``."""
        if self._spline is None:
            raise OracleUnavailableError(f"profile is not graphical: {self.reason}")
        x = np.asarray(x, dtype=float)
        u = self.xs[0] + np.mod(x - self.xs[0], 1.0)
        out = self._spline(u)
        return float(out) if out.ndim == 0 else out


def _hermite(xs, ys, slopes):
    return CubicHermiteSpline(
        np.append(xs, xs[0] + 1.0), np.append(ys, ys[0]), np.append(slopes, slopes[0])
    )


def _make_profile(spec, seeds, q, p, a, err, step) -> ActionProfile:
    prof = ActionProfile(spec, seeds, q, p, a, float(np.max(err)), step, graphical=False)
    gaps = np.append(np.diff(q), q[0] + 1.0 - q[-1])
    if not np.all(gaps > MONOTONE_MARGIN):
        i = int(np.argmin(gaps))
        prof.reason = f"endpoint bases not strictly increasing near seed {i} (gap {gaps[i]:.3e})"
        return prof
    prof.graphical = True
    start = int(np.argmin(np.mod(q, 1.0)))
    order = np.roll(np.arange(len(q)), -start)
    xs = np.mod(q[order], 1.0)
    # rolled samples may pick up a unit jump at the seam; unwrap relative to xs[0]
    xs = xs[0] + np.mod(xs - xs[0], 1.0)
    ys, slopes = a[order], -p[order]
    prof.xs, prof.ys = xs, ys
    prof._spline = _hermite(xs, ys, slopes)
    prof.error_bound = prof.integrator_error + _interp_error(xs, ys, slopes) + _resolution(xs, slopes)
    return prof


def _interp_error(xs, ys, slopes):
    """Estimate from the interpolant on every other sample (error ratio 16 for cubics)."""
    if len(xs) < 8:
        return math.inf
    even = slice(0, len(xs) - len(xs) % 2, 2)
    coarse = _hermite(xs[even], ys[even], slopes[even])
    odd = slice(1, len(xs) - len(xs) % 2, 2)
    return float(np.max(np.abs(coarse(xs[odd]) - ys[odd]))) / 16.0


def _resolution(xs, slopes):
    """Bound on how far a sample extremum can sit from the true extremum."""
    h = np.diff(np.append(xs, xs[0] + 1.0))
    curv = np.abs(np.diff(np.append(slopes, slopes[0]))) / h
    return float(np.max(h * h * curv / 8.0))


def _seeds(grid):
    if int(grid) != grid or grid < 8:
        raise DomainError(f"grid must be an integer >= 8, got {grid!r}")
    return np.arange(int(grid)) / int(grid)


def action_profile(H, grid: int = DEFAULT_GRID, step: float = hm.DEFAULT_STEP) -> ActionProfile:
    seeds = _seeds(grid)
    res = hm.flow_batch(H, seeds, 0.0, [1.0], step)
    return _make_profile(H, seeds, res.q[0], res.p[0], res.action[0], res.error[0], step)


def iterate_profiles(H, n_max: int, grid: int = DEFAULT_GRID, step: float = hm.DEFAULT_STEP):
    """Profiles of phi^1, ..., phi^n_max from a single run with snapshots."""
    seeds = _seeds(grid)
    res = hm.flow_batch(H, seeds, 0.0, np.arange(1, n_max + 1), step)
    return [
        _make_profile(hm.iterate(H, n), seeds, res.q[n - 1], res.p[n - 1], res.action[n - 1],
                      res.error[n - 1], step)
        for n in range(1, n_max + 1)
    ]


# --- spectral numbers -----------------------------------------------------------


@dataclass
class SpectralWitness:
    """An actual chord, re-integrated from its seed, whose action matches the value."""

    seed: float
    base: float
    fiber: float
    action: float
    distance: float
    base_error: float


@dataclass
class SpectralReport:
    value: float
    target: object
    class_label: ClassLabel
    location: float
    witness: SpectralWitness | None
    error_bound: float
    graphical: bool = True
    method: str = "direct-extremum"

    @property
    def spectral(self) -> bool:
        return self.witness is not None and self.witness.distance <= SPECTRALITY_TOL


def _require_graphical(profile):
    if not profile.graphical:
        raise OracleUnavailableError(f"profile is not graphical: {profile.reason}")


def _window(profile, a, length):
    """Samples of S with offsets in [0, length] counterclockwise from ``a``."""
    off = np.mod(profile.xs - a, 1.0)
    keep = off <= length if length < 1.0 else np.ones(len(off), bool)
    idx = np.flatnonzero(keep)
    idx = idx[np.argsort(off[idx], kind="stable")]
    return off[idx], profile.ys[idx]


def _extremum(profile, a, length, sign, candidates=3):
    """max (sign=+1) or min (sign=-1) of S on the arc [a, a + length]."""
    closed = length < 1.0
    u, v = _window(profile, a, length)
    g = lambda t: -sign * profile.S(a + t)  # noqa: E731
    best_u, best_v = None, -math.inf
    if closed:
        for t in (0.0, length):
            val = sign * profile.S(a + t)
            if val > best_v:
                best_u, best_v = t, val
    if len(u) == 0:
        return sign * best_v, float(np.mod(a + best_u, 1.0))
    sv = sign * v
    n = len(u)
    if closed:
        left = np.append(-math.inf, sv[:-1])
        right = np.append(sv[1:], -math.inf)
    else:
        left, right = np.roll(sv, 1), np.roll(sv, -1)
    peaks = np.flatnonzero((sv >= left) & (sv >= right))
    peaks = peaks[np.argsort(-sv[peaks], kind="stable")][:candidates]
    for i in peaks:
        lo = u[i - 1] if i > 0 else (0.0 if closed else u[-1] - 1.0)
        hi = u[i + 1] if i < n - 1 else (length if closed else u[0] + 1.0)
        r = minimize_scalar(g, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        t, val = (float(r.x), -float(r.fun)) if -r.fun >= sv[i] else (float(u[i]), float(sv[i]))
        if val > best_v:
            best_u, best_v = t, val
    return sign * best_v, float(np.mod(a + best_u, 1.0))


def _witness(profile, x, value, iters=4):
    """Re-integrate the chord ending over ``x`` by Newton iteration on its seed."""
    b, s = profile.base, profile.seeds
    b_ext, s_ext = np.append(b, b[0] + 1.0), np.append(s, s[0] + 1.0)
    target = b[0] + np.mod(x - b[0], 1.0)
    q0 = float(np.interp(target, b_ext, s_ext))
    slope = np.gradient(b_ext, s_ext)
    for _ in range(iters):
        res = hm.flow_batch(profile.spec, [q0], 0.0, [1.0], profile.step)
        bq, bp, ba = float(res.q[0, 0]), float(res.p[0, 0]), float(res.action[0, 0])
        resid = wrap(bq - x)
        if abs(resid) < 1e-12:
            break
        q0 -= resid / float(np.interp(q0 % 1.0 + s[0], s_ext, slope))
    return SpectralWitness(
        seed=q0 % 1.0, base=bq % 1.0, fiber=bp, action=ba,
        distance=abs(value - ba), base_error=abs(resid),
    )


def ell_plus(profile: ActionProfile, N, class_label: ClassLabel = ClassLabel.FUNDAMENTAL,
             witness: bool = True) -> SpectralReport:
    """Spectral number l(class; o_M, conormal of N : H) from a graphical profile."""
    _require_graphical(profile)
    if isinstance(N, Point):
        x = float(N.x.q)
        value = profile.S(x)
    elif isinstance(N, Whole):
        sign = 1 if class_label is ClassLabel.FUNDAMENTAL else -1
        value, x = _extremum(profile, float(profile.xs[0]), 1.0, sign)
    elif isinstance(N, Arc):
        if (N.sign, class_label) == ("-", ClassLabel.FUNDAMENTAL):
            sign = 1
        elif (N.sign, class_label) == ("+", ClassLabel.POINT):
            sign = -1
        else:
            raise UnsupportedCombinationError(
                f"arc with sign {N.sign!r} does not carry the {class_label.value} class"
            )
        value, x = _extremum(profile, float(N.a.q), N.length, sign)
    else:
        raise TypeError(f"not a conormal target: {N!r}")
    w = _witness(profile, x, value) if witness else None
    return SpectralReport(float(value), N, class_label, x, w, profile.error_bound)


def supported_classes(N):
    if isinstance(N, Point):
        return [ClassLabel.FUNDAMENTAL]
    if isinstance(N, Whole):
        return [ClassLabel.FUNDAMENTAL, ClassLabel.POINT]
    if isinstance(N, Arc):
        return [ClassLabel.FUNDAMENTAL if N.sign == "-" else ClassLabel.POINT]
    raise TypeError(f"not a conormal target: {N!r}")


def persistence(profile: ActionProfile, N) -> PersistenceDiagram:
    """Sublevel persistence of the sampled primitive over N.

    An arc is filtered as the circle N/dN (endpoints glued), so its essential
    1-class is the relative fundamental class and its essential 0-class the
    point class.
    """
    _require_graphical(profile)
    if isinstance(N, Whole):
        vals = profile.ys
        idx = np.arange(len(vals))
        edges = np.column_stack([idx, (idx + 1) % len(vals)])
    elif isinstance(N, Arc):
        a = float(N.a.q)
        u, v = _window(profile, a, N.length)
        vals = np.concatenate([[profile.S(a)], v, [profile.S(a + N.length)]])
        idx = np.arange(len(vals) - 1)
        edges = np.vstack([np.column_stack([idx, idx + 1]), [[0, len(vals) - 1]]])
    else:
        raise UnsupportedCombinationError("persistence needs a whole-circle or arc target")
    return graph_persistence(vals, edges)


@dataclass
class CrossCheck:
    target: object
    class_label: ClassLabel
    direct: float
    persistent: float
    tolerance: float

    @property
    def agrees(self) -> bool:
        return abs(self.direct - self.persistent) <= self.tolerance


def cross_check(profile: ActionProfile, N) -> list[CrossCheck]:
    """Compare direct extrema with persistence births for every class on N."""
    dgm = persistence(profile, N)
    out = []
    for label in supported_classes(N):
        direct = ell_plus(profile, N, label, witness=False).value
        births = dgm.essential1 if label is ClassLabel.FUNDAMENTAL else dgm.essential0
        out.append(CrossCheck(N, label, direct, births, 2.0 * profile.error_bound))
    return out


# --- inequalities ---------------------------------------------------------------


def _fundamental_label(N):
    if isinstance(N, Arc) and N.sign == "+":
        raise UnsupportedCombinationError("the fundamental class of an arc needs the '-' boundary condition")
    return ClassLabel.FUNDAMENTAL


@dataclass
class TriangleReport:
    target: object
    composite: float  # l^N(phi psi)
    ell_M_phi: float
    ell_N_psi: float
    tol: float

    @property
    def margin(self) -> float:
        return self.ell_M_phi + self.ell_N_psi - self.composite

    @property
    def holds(self) -> bool:
        return self.margin >= -self.tol


def check_triangle(H, K, N, tol: float = 1e-6, grid: int = DEFAULT_GRID,
                   step: float = hm.DEFAULT_STEP, witness: bool = False,
                   profiles: tuple | None = None) -> TriangleReport:
    """l^N(phi psi) <= l^M(phi) + l^N(psi) with phi = phi_H, psi = phi_K.

    ``profiles`` may supply precomputed (composite, H, K) profiles.
    """
    label = _fundamental_label(N)
    if profiles is None:
        profiles = tuple(action_profile(X, grid, step) for X in (hm.compose(H, K), H, K))
    prof_c, prof_h, prof_k = profiles
    return TriangleReport(
        N,
        ell_plus(prof_c, N, label, witness).value,
        ell_plus(prof_h, Whole(), ClassLabel.FUNDAMENTAL, witness).value,
        ell_plus(prof_k, N, label, witness).value,
        tol,
    )


@dataclass
class ClassBoundReport:
    target: object
    bound: float  # l([M]; o_M, o_M : H)
    entries: list  # (ClassLabel, value, margin)
    tol: float

    @property
    def holds(self) -> bool:
        return all(m >= -self.tol for _, _, m in self.entries)


def check_class_bound(H, N, tol: float = 1e-6, grid: int = DEFAULT_GRID,
                      step: float = hm.DEFAULT_STEP, profile: ActionProfile | None = None) -> ClassBoundReport:
    """l(beta; o_M, conormal of N : H) <= l([M]; o_M, o_M : H) for every class beta on N."""
    prof = profile if profile is not None else action_profile(H, grid, step)
    bound = ell_plus(prof, Whole(), ClassLabel.FUNDAMENTAL, witness=False).value
    entries = []
    for label in supported_classes(N):
        v = ell_plus(prof, N, label, witness=False).value
        entries.append((label, v, bound - v))
    return ClassBoundReport(N, bound, entries, tol)


def spectral_value(H, N, class_label: ClassLabel = ClassLabel.FUNDAMENTAL,
                   grid: int = DEFAULT_GRID, step: float = hm.DEFAULT_STEP) -> float:
    return ell_plus(action_profile(H, grid, step), N, class_label, witness=False).value


__all__ = [
    "ActionProfile",
    "ClassBoundReport",
    "CrossCheck",
    "SpectralReport",
    "SpectralWitness",
    "TriangleReport",
    "action_profile",
    "as_angle",
    "check_class_bound",
    "check_triangle",
    "cross_check",
    "ell_plus",
    "iterate_profiles",
    "persistence",
    "spectral_value",
    "supported_classes",
]
