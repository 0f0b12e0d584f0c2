# cython: language_level=3
"""Compiled RK4 flow kernel.

Integrates q' = dH/dp, p' = -dH/dq, a' = -p q' + H for a batch of seeds through
a schedule of chunks. Each chunk flows an autonomous sum of term rows (see
``conormal._layout``) for ``nsteps`` steps of size ``h``.
"""

from libc.math cimport cos, sin, exp, fabs, floor, M_PI

cdef enum:
    KIND = 0
    SCALE = 1
    FREQ = 2
    R0 = 3
    R1 = 4
    Q0 = 5
    P0 = 6
    RQ = 7
    RP = 8
    AMP = 9
    DEG = 10
    COS0 = 11
    SIN1 = 44
    WIDTH = 76

TERM_WIDTH = WIDTH


cdef inline void _cutoff(double r, double r0, double r1, double* chi, double* dchi) noexcept nogil:
    cdef double u, A, B, s
    if r <= r0:
        chi[0] = 1.0
        dchi[0] = 0.0
        return
    if r >= r1:
        chi[0] = 0.0
        dchi[0] = 0.0
        return
    u = (r - r0) / (r1 - r0)
    A = exp(-1.0 / (1.0 - u))
    B = exp(-1.0 / u)
    s = A + B
    chi[0] = A / s
    dchi[0] = -A * B * (1.0 / ((1.0 - u) * (1.0 - u)) + 1.0 / (u * u)) / (s * s) / (r1 - r0)


cdef inline void _bump(double x, double* b, double* db) noexcept nogil:
    cdef double w
    if x <= -1.0 or x >= 1.0:
        b[0] = 0.0
        db[0] = 0.0
        return
    w = 1.0 - x * x
    b[0] = exp(1.0 - 1.0 / w)
    db[0] = b[0] * (-2.0 * x / (w * w))


cdef inline void _trig(const double* row, double u, double* f, double* df) noexcept nogil:
    cdef Py_ssize_t k, deg = <Py_ssize_t> row[DEG]
    cdef double th = 2.0 * M_PI * u
    cdef double c1 = cos(th), s1 = sin(th)
    cdef double ck = 1.0, sk = 0.0, tmp, ak, bk
    f[0] = row[COS0]
    df[0] = 0.0
    for k in range(1, deg + 1):
        tmp = ck * c1 - sk * s1
        sk = sk * c1 + ck * s1
        ck = tmp
        ak = row[COS0 + k]
        bk = row[SIN1 + k - 1]
        f[0] += ak * ck + bk * sk
        df[0] += 2.0 * M_PI * k * (bk * ck - ak * sk)


cdef inline void _field(const double* terms, Py_ssize_t lo, Py_ssize_t hi,
                        double q, double p,
                        double* H, double* Hq, double* Hp) noexcept nogil:
    cdef Py_ssize_t t
    cdef double s, n, f, df, chi, dchi, r, sg, d, bq, dbq, bp, dbp
    cdef const double* row
    H[0] = 0.0
    Hq[0] = 0.0
    Hp[0] = 0.0
    for t in range(lo, hi):
        row = terms + t * WIDTH
        s = row[SCALE]
        n = row[FREQ]
        if row[KIND] == 0.0:
            r = fabs(p)
            _cutoff(r, row[R0], row[R1], &chi, &dchi)
            if chi == 0.0:
                continue
            _trig(row, n * q, &f, &df)
            sg = 1.0 if p >= 0.0 else -1.0
            H[0] += s * f * chi
            Hq[0] += s * n * df * chi
            Hp[0] += s * f * dchi * sg
        else:
            _bump((p - row[P0]) / row[RP], &bp, &dbp)
            if bp == 0.0:
                continue
            d = n * q - row[Q0]
            d = d - floor(d + 0.5)
            _bump(d / row[RQ], &bq, &dbq)
            if bq == 0.0:
                continue
            s = s * row[AMP]
            H[0] += s * bq * bp
            Hq[0] += s * n * dbq / row[RQ] * bp
            Hp[0] += s * bq * dbp / row[RP]


def integrate(double[::1] q, double[::1] p, double[::1] a,
              const double[:, ::1] terms,
              const Py_ssize_t[::1] lo, const Py_ssize_t[::1] hi,
              const Py_ssize_t[::1] nsteps, const double[::1] h,
              const Py_ssize_t[::1] snap_row,
              double[:, ::1] snap_q, double[:, ::1] snap_p, double[:, ::1] snap_a,
              double blowup):
    """Advance every seed in place; return the first blown-up seed or -1."""
    cdef Py_ssize_t G = q.shape[0], nchunk = lo.shape[0]
    cdef Py_ssize_t i, c, k, row, l, u
    cdef double qi, pi, ai, dt
    cdef double H1, Hq1, Hp1, H2, Hq2, Hp2, H3, Hq3, Hp3, H4, Hq4, Hp4
    cdef double kq1, kp1, ka1, kq2, kp2, ka2, kq3, kp3, ka3, kq4, kp4, ka4
    cdef const double* T = &terms[0, 0] if terms.shape[0] > 0 else NULL
    with nogil:
        for i in range(G):
            qi = q[i]
            pi = p[i]
            ai = a[i]
            for c in range(nchunk):
                l = lo[c]
                u = hi[c]
                dt = h[c]
                if u > l:
                    for k in range(nsteps[c]):
                        _field(T, l, u, qi, pi, &H1, &Hq1, &Hp1)
                        kq1 = Hp1
                        kp1 = -Hq1
                        ka1 = -pi * Hp1 + H1
                        _field(T, l, u, qi + 0.5 * dt * kq1, pi + 0.5 * dt * kp1, &H2, &Hq2, &Hp2)
                        kq2 = Hp2
                        kp2 = -Hq2
                        ka2 = -(pi + 0.5 * dt * kp1) * Hp2 + H2
                        _field(T, l, u, qi + 0.5 * dt * kq2, pi + 0.5 * dt * kp2, &H3, &Hq3, &Hp3)
                        kq3 = Hp3
                        kp3 = -Hq3
                        ka3 = -(pi + 0.5 * dt * kp2) * Hp3 + H3
                        _field(T, l, u, qi + dt * kq3, pi + dt * kp3, &H4, &Hq4, &Hp4)
                        kq4 = Hp4
                        kp4 = -Hq4
                        ka4 = -(pi + dt * kp3) * Hp4 + H4
                        qi = qi + dt / 6.0 * (kq1 + 2.0 * kq2 + 2.0 * kq3 + kq4)
                        pi = pi + dt / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4)
                        ai = ai + dt / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4)
                        if not (fabs(pi) <= blowup):
                            with gil:
                                return i
                row = snap_row[c]
                if row >= 0:
                    snap_q[row, i] = qi
                    snap_p[row, i] = pi
                    snap_a[row, i] = ai
            q[i] = qi
            p[i] = pi
            a[i] = ai
    return -1
