"""Pure numpy implementation of the flow kernel.

Same contract as the compiled ``_flowkernel.integrate``; vectorized over seeds
instead of looping per seed.
"""

import numpy as np

from ._layout import (
    AMP,
    COS0,
    DEG,
    FREQ,
    KIND,
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

TERM_WIDTH = WIDTH


def _cutoff(r, r0, r1):
    chi = np.where(r <= r0, 1.0, 0.0)
    dchi = np.zeros_like(r)
    band = (r > r0) & (r < r1)
    if np.any(band):
        u = (r[band] - r0) / (r1 - r0)
        A = np.exp(-1.0 / (1.0 - u))
        B = np.exp(-1.0 / u)
        s = A + B
        chi[band] = A / s
        dchi[band] = -A * B * (1.0 / (1.0 - u) ** 2 + 1.0 / u**2) / s**2 / (r1 - r0)
    return chi, dchi


def _bump(x):
    b = np.zeros_like(x)
    db = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    if np.any(inside):
        xi = x[inside]
        w = 1.0 - xi * xi
        bi = np.exp(1.0 - 1.0 / w)
        b[inside] = bi
        db[inside] = bi * (-2.0 * xi / (w * w))
    return b, db


def eval_terms(terms, q, p):
    """Return ``(H, dH/dq, dH/dp)`` summed over term rows at arrays ``q, p``."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    H = np.zeros(np.broadcast(q, p).shape)
    Hq = np.zeros_like(H)
    Hp = np.zeros_like(H)
    for row in terms:
        s, n = row[SCALE], row[FREQ]
        if row[KIND] == 0.0:
            chi, dchi = _cutoff(np.abs(p) + 0.0 * H, row[R0], row[R1])
            deg = int(row[DEG])
            k = np.arange(1, deg + 1)
            th = 2.0 * np.pi * np.multiply.outer(n * q, k)
            ck, sk = np.cos(th), np.sin(th)
            a, b = row[COS0 + 1 : COS0 + 1 + deg], row[SIN1 : SIN1 + deg]
            f = row[COS0] + ck @ a + sk @ b
            df = (sk * (-a) + ck * b) @ (2.0 * np.pi * k)
            sg = np.where(p >= 0.0, 1.0, -1.0)
            H = H + s * f * chi
            Hq = Hq + s * n * df * chi
            Hp = Hp + s * f * dchi * sg
        else:
            bp, dbp = _bump((p - row[P0]) / row[RP] + 0.0 * H)
            d = n * q - row[Q0]
            d = d - np.floor(d + 0.5)
            bq, dbq = _bump(d / row[RQ] + 0.0 * H)
            amp = s * row[AMP]
            H = H + amp * bq * bp
            Hq = Hq + amp * n * dbq / row[RQ] * bp
            Hp = Hp + amp * bq * dbp / row[RP]
    return H, Hq, Hp


def integrate(q, p, a, terms, lo, hi, nsteps, h, snap_row, snap_q, snap_p, snap_a, blowup):
    """Advance every seed in place; return the first blown-up seed or -1."""
    qi, pi, ai = np.array(q), np.array(p), np.array(a)
    for c in range(len(lo)):
        rows = terms[lo[c] : hi[c]]
        dt = h[c]
        if len(rows):
            for _ in range(nsteps[c]):
                H1, Hq1, Hp1 = eval_terms(rows, qi, pi)
                p2 = pi - 0.5 * dt * Hq1
                H2, Hq2, Hp2 = eval_terms(rows, qi + 0.5 * dt * Hp1, p2)
                p3 = pi - 0.5 * dt * Hq2
                H3, Hq3, Hp3 = eval_terms(rows, qi + 0.5 * dt * Hp2, p3)
                p4 = pi - dt * Hq3
                H4, Hq4, Hp4 = eval_terms(rows, qi + dt * Hp3, p4)
                ka = (-pi * Hp1 + H1) + 2.0 * (-p2 * Hp2 + H2) + 2.0 * (-p3 * Hp3 + H3) + (-p4 * Hp4 + H4)
                qi = qi + dt / 6.0 * (Hp1 + 2.0 * Hp2 + 2.0 * Hp3 + Hp4)
                pi = pi - dt / 6.0 * (Hq1 + 2.0 * Hq2 + 2.0 * Hq3 + Hq4)
                ai = ai + dt / 6.0 * ka
                bad = np.flatnonzero(~(np.abs(pi) <= blowup))
                if bad.size:
                    return int(bad[0])
        row = snap_row[c]
        if row >= 0:
            snap_q[row, :] = qi
            snap_p[row, :] = pi
            snap_a[row, :] = ai
    q[:] = qi
    p[:] = pi
    a[:] = ai
    return -1
