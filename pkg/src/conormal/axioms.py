"""Randomized campaigns for the quasi-morphism and quasi-state properties.

Each clause is an inequality or equality between homogenized spectral
invariants. A trial draws random lifted trigonometric polynomials, a random
target and, where needed, a bump supported far from the zero section; every
invariant is computed through the flow oracle. The slack of an inequality is
``rhs - lhs`` and the slack of an equality is ``-|lhs - rhs|``, so a clause
holds when its worst slack is at least ``-tol``.

Trials are seeded independently from ``(seed, trial)`` and merged in trial
order, so reports do not depend on how the work is scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import _backend
from . import hamiltonian as hm
from . import homogenize as hz
from .errors import BlowUpError, OracleUnavailableError
from .geometry import Arc, Point, Whole

N_MAX = 40
GRID = 256
# inside the flat region a lifted flow keeps q fixed and moves p at constant
# speed, so RK4 is exact at any step; the Richardson estimate certifies this
STEP = 0.5
DEGREE = 4
TOL = 1e-5
REDUCTION_TOL = 1e-6
MAX_WITNESSES = 5
L_CHOICES = (1, 2, 3, 5)
S_MAX = 4.0

CLAUSES = (
    ("Thm2.1(i)", "homogeneity: sigma(phi^l) = l sigma(phi)"),
    ("Thm2.1(iii)", "stability: min(f - g) <= sigma(f) - sigma(g) <= max(f - g)"),
    ("Thm2.1(iv)", "vanishing for a flow supported away from the zero section"),
    ("Thm2.1(vi)", "sigma^N(phi psi) <= sigma^M(phi) + sigma^N(psi) for commuting pairs"),
    ("Thm2.2(i)", "normalization: zeta(0) = 0"),
    ("Thm2.2(ii)", "stability against phase-space min/max of H - K"),
    ("Thm2.2(iii)", "monotonicity: H <= K implies zeta(H) <= zeta(K)"),
    ("Thm2.2(iv)", "homogeneity: zeta(sH) = s zeta(H), s >= 0"),
    ("Thm2.2(vi)", "vanishing for a bump away from the zero section"),
    ("Thm2.2(vii)", "zeta(H + K) = zeta(H) for K a commuting bump away from the zero section"),
    ("reduction", "phase-space extremum of H - K equals the extremum of f - g"),
)
SKIPPED = (
    ("Thm2.1(ii)", "conjugation by a generic flow leaves the graphical regime; see the smoke test"),
    ("Thm2.1(v)", "needs fragmentation norms and displacement energy"),
    ("Thm2.2(v)", "invariance under all of Ham needs generic conjugations"),
)


@dataclass
class AxiomReport:
    axiom: str
    description: str = ""
    trials: int = 0
    worst_margin: float = math.inf
    witnesses: list = field(default_factory=list)
    skipped: bool = False
    reason: str = ""
    refused: int = 0
    tol: float = TOL

    @property
    def passed(self) -> bool:
        return not self.skipped and self.refused == 0 and self.trials > 0 and self.worst_margin >= -self.tol

    def record(self, margin, config):
        self.trials += 1
        if margin < self.worst_margin:
            self.worst_margin = margin
        if margin < -self.tol and len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"margin": margin, **config})


# --- random draws -------------------------------------------------------------


def random_trigpoly(rng, degree=DEGREE) -> hm.TrigPoly:
    d = int(rng.integers(1, degree + 1))
    return hm.TrigPoly(tuple(rng.uniform(-1, 1, d + 1)), tuple(rng.uniform(-1, 1, d)))


def nonnegative_trigpoly(rng, degree=DEGREE) -> hm.TrigPoly:
    h = random_trigpoly(rng, degree)
    floor = sum(abs(c) for c in h.cos[1:]) + sum(abs(c) for c in h.sin)
    return hm.TrigPoly((floor + rng.uniform(0, 1),) + h.cos[1:], h.sin)


def random_target(rng):
    kind = int(rng.integers(3))
    if kind == 0:
        return Point(float(rng.uniform(0, 1)))
    if kind == 1:
        return Whole()
    a = float(rng.uniform(0, 1))
    return Arc(a, (a + float(rng.uniform(0.05, 0.95))) % 1.0, "-")


def far_bump(rng, r1) -> hm.Bump:
    """A bump whose support lies in r1 + 1 < p < r1 + 2."""
    r_p = float(rng.uniform(0.05, 0.45))
    p0 = r1 + 1.5 + float(rng.uniform(-(0.5 - r_p), 0.5 - r_p))
    if rng.integers(2):
        p0 = -p0
    return hm.Bump(float(rng.uniform(0, 1)), p0, float(rng.uniform(0.05, 0.5)), r_p,
                   float(rng.uniform(-2, 2)))


def _poly(f):
    return {"cos": list(f.cos), "sin": list(f.sin)}


def _target(N):
    if isinstance(N, Point):
        return {"point": float(N.x.q)}
    if isinstance(N, Arc):
        return {"arc": [float(N.a.q), float(N.b.q), N.sign]}
    return {"whole": True}


# --- oracle helpers -------------------------------------------------------------


class _Sigma:
    """sigma^N and sigma^M from one run of the iterates."""

    def __init__(self, n_max, grid, step):
        self.n_max, self.grid, self.step = n_max, grid, step

    def __call__(self, H, N, whole=False):
        ell_N, ell_M, _ = hz.iterate_values(H, N, self.n_max, self.grid, self.step, with_whole=whole)
        n = np.arange(1, self.n_max + 1)
        sM = hz.limsup_estimate(ell_M / n).value if whole else None
        return hz.limsup_estimate(ell_N / n).value, sM


def phase_space_extrema(H, K, box: float, size: int = 256):
    """(min, max) of H - K over S^1 x [-box, box] by grid search plus local refinement."""
    th = hm.compile_spec(H)[0].terms
    tk = hm.compile_spec(K)[0].terms

    def diff(q, p):
        return _backend.eval_terms(th, q, p)[0] - _backend.eval_terms(tk, q, p)[0]

    q, p = np.meshgrid(np.arange(size) / size, np.linspace(-box, box, size), indexing="ij")
    v = diff(q.ravel(), p.ravel())
    out = []
    hq, hp = 1.0 / size, 2.0 * box / (size - 1)
    for sign in (1.0, -1.0):
        i = int(np.argmin(sign * v))
        q0, p0 = float(q.ravel()[i]), float(p.ravel()[i])
        r = minimize(
            lambda z: sign * float(diff(np.array([z[0]]), np.array([z[1]]))[0]),
            [q0, p0],
            method="L-BFGS-B",
            bounds=[(q0 - hq, q0 + hq), (max(-box, p0 - hp), min(box, p0 + hp))],
            options={"ftol": 1e-15, "gtol": 1e-12},
        )
        out.append(sign * min(float(r.fun), sign * float(v[i])))
    return out[0], out[1]


# --- one trial ------------------------------------------------------------------


def _trial(args):
    seed, t, n_max, grid, step = args
    rng = np.random.default_rng([seed, t])
    sig = _Sigma(n_max, grid, step)
    f, g = random_trigpoly(rng), random_trigpoly(rng)
    h = nonnegative_trigpoly(rng)
    N = random_target(rng)
    s = float(rng.uniform(0, S_MAX))
    l = int(rng.choice(L_CHOICES))
    bound = max(f.deriv_bound(), g.deriv_bound(), (f + h).deriv_bound())
    # one cutoff for every lift in the trial, flat over all iterates used
    cut = hm.safe_cutoff(bound, n_max * max(max(L_CHOICES), S_MAX))
    F, G, K = hm.Lifted(f, cut), hm.Lifted(g, cut), hm.Lifted(f + h, cut)
    B = far_bump(rng, cut.r1)
    base = {"trial": t, "f": _poly(f), "target": _target(N)}
    out = {}

    def run(clause, fn, **extra):
        try:
            out[clause] = ("ok", fn(), {**base, **extra})
        except (OracleUnavailableError, BlowUpError) as e:
            out[clause] = ("refused", str(e), {**base, **extra})

    try:
        sf = sig(F, N, whole=True)
        sg = sig(G, N)
        sb = sig(B, N, whole=True)
    except (OracleUnavailableError, BlowUpError) as e:
        return {cid: ("refused", str(e), base) for cid, _ in CLAUSES}

    run("Thm2.1(i)", lambda: -abs(sig(hm.iterate(F, l), N)[0] - l * sf[0]), l=l)

    fmin, _, fmax, _ = (f - g).extrema()
    d = sf[0] - sg[0]
    run("Thm2.1(iii)", lambda: min(d - fmin, fmax - d), g=_poly(g))

    run("Thm2.1(iv)", lambda: -abs(sb[0]), bump=repr(B))

    if rng.integers(2):
        phi, psi, kind = F, G, "lifted-lifted"
        sM_phi, sN_psi = sf[1], sg[0]
    else:
        phi, psi, kind = (F, B, "lifted-bump") if rng.integers(2) else (B, F, "bump-lifted")
        sM_phi = sf[1] if phi is F else sb[1]
        sN_psi = sf[0] if psi is F else sb[0]
    run("Thm2.1(vi)", lambda: sM_phi + sN_psi - sig(hm.compose(phi, psi), N)[0], pair=kind, g=_poly(g))

    run("Thm2.2(i)", lambda: -abs(sig(hm.zero(), N)[0]))

    pmin, pmax = phase_space_extrema(F, G, cut.r0)
    run("Thm2.2(ii)", lambda: min(d - pmin, pmax - d), g=_poly(g))
    run("reduction", lambda: -max(abs(pmin - fmin), abs(pmax - fmax)), g=_poly(g))

    run("Thm2.2(iii)", lambda: sig(K, N)[0] - sf[0], h=_poly(h))
    run("Thm2.2(iv)", lambda: -abs(sig(hm.scale(s, F), N)[0] - s * sf[0]), s=s)
    run("Thm2.2(vi)", lambda: -abs(sig(hm.scale(s, B), N)[0]), bump=repr(B), s=s)
    run("Thm2.2(vii)", lambda: -abs(sig(hm.hsum(F, B), N)[0] - sf[0]), bump=repr(B))
    return out


def axiom_suite(seed: int = 0, trials: int = 200, n_max: int = N_MAX, grid: int = GRID,
                step: float = STEP, tol: float = TOL, workers: int = 1) -> list[AxiomReport]:
    """Run every checkable clause for ``trials`` random draws."""
    reports = {cid: AxiomReport(cid, desc, tol=tol) for cid, desc in CLAUSES}
    reports["reduction"].tol = REDUCTION_TOL
    jobs = [(seed, t, n_max, grid, step) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results = map(_trial, jobs)
    for res in results:
        for cid, (status, val, cfg) in res.items():
            rep = reports[cid]
            if status == "ok":
                rep.record(float(val), cfg)
            else:
                rep.refused += 1
                rep.reason = val
    out = list(reports.values())
    for cid, why in SKIPPED:
        out.append(AxiomReport(cid, why, skipped=True, reason=why, tol=tol))
    return out


# --- conjugation ----------------------------------------------------------------


def conjugation_smoke(seed: int = 0, trials: int = 10, n_max: int = N_MAX, grid: int = GRID,
                      step: float = STEP) -> list[AxiomReport]:
    """sigma(psi phi psi^-1) = sigma(phi) for identity, a power of phi, and a far bump."""
    cases = {
        "identity": AxiomReport("Thm2.1(ii)-identity", "psi = id", tol=0.0),
        "power": AxiomReport("Thm2.1(ii)-power", "psi = phi^2", tol=1e-8),
        "disjoint": AxiomReport("Thm2.1(ii)-disjoint", "psi a bump away from the zero section", tol=1e-6),
    }
    sig = _Sigma(n_max, grid, step)
    for t in range(trials):
        rng = np.random.default_rng([seed, t, 2])
        f = random_trigpoly(rng)
        N = random_target(rng)
        cut = hm.safe_cutoff(f.deriv_bound(), 4 * n_max)
        F = hm.Lifted(f, cut)
        B = far_bump(rng, cut.r1)
        ref = sig(F, N)[0]
        cfg = {"trial": t, "f": _poly(f), "target": _target(N)}
        for key, psi in (("identity", hm.zero()), ("power", hm.iterate(F, 2)), ("disjoint", B)):
            conj = hm.compose(psi, hm.compose(F, hm.inverse(psi)))
            try:
                cases[key].record(-abs(sig(conj, N)[0] - ref), cfg)
            except (OracleUnavailableError, BlowUpError) as e:
                cases[key].refused += 1
                cases[key].reason = str(e)
    general = AxiomReport("Thm2.1(ii)-general", skipped=True, reason=SKIPPED[0][1])
    return list(cases.values()) + [general]


__all__ = [
    "AxiomReport",
    "CLAUSES",
    "axiom_suite",
    "conjugation_smoke",
    "far_bump",
    "nonnegative_trigpoly",
    "phase_space_extrema",
    "random_target",
    "random_trigpoly",
]
