"""Exact dimension bookkeeping for Floer moduli spaces with conormal ends.

Gradings are half-integers, so everything is done over ``Fraction`` and no
tolerance is ever used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DomainError

HALF = Fraction(1, 2)
INCOMING = "incoming"
OUTGOING = "outgoing"


def _mu(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (Rational, str)):
        raise DomainError(f"grading must be an exact rational, got {x!r}")
    v = x if isinstance(x, Fraction) else Fraction(x)
    if v.denominator > 2:
        raise DomainError(f"grading must be a half-integer, got {v}")
    return v


def _dims(dim_M=None, dim_N=None):
    for name, d in (("dim_M", dim_M), ("dim_N", dim_N)):
        if d is not None and (isinstance(d, bool) or int(d) != d or d < 0):
            raise DomainError(f"{name} must be a non-negative integer, got {d!r}")
    if dim_M is not None and dim_N is not None and dim_N > dim_M:
        raise DomainError("dim_N cannot exceed dim_M")


@dataclass(frozen=True)
class IndexData:
    mu: Fraction
    dim_M: int
    dim_N: int

    def __post_init__(self):
        object.__setattr__(self, "mu", _mu(self.mu))
        _dims(self.dim_M, self.dim_N)


# unchecked formulas; the public wrappers validate their arguments


def _pants(m1, m2, mo, dim_M, dim_N):
    return m1 + m2 - mo + HALF * dim_N - dim_M


def _half(m, dim_N, side):
    if side == INCOMING:
        return HALF * dim_N - m
    if side == OUTGOING:
        return HALF * dim_N + m
    raise DomainError(f"side must be {INCOMING!r} or {OUTGOING!r}, got {side!r}")


def _whole(mx, my, dim_M, dim_N):
    return mx - my - dim_M + dim_N


def dim_pants(mu1, mu2, mu_out, dim_M: int, dim_N: int) -> Fraction:
    """Dimension of the pair-of-pants moduli space with two inputs and one output."""
    _dims(dim_M, dim_N)
    return _pants(_mu(mu1), _mu(mu2), _mu(mu_out), dim_M, dim_N)


def dim_half_strip(mu, dim_N: int, side: str) -> Fraction:
    """Dimension of half strips asymptotic to a chord of grading ``mu``."""
    _dims(dim_N=dim_N)
    return _half(_mu(mu), dim_N, side)


def dim_whole_strip(mu_x, mu_y, dim_M: int, dim_N: int) -> Fraction:
    """Dimension of strips with one jump on each boundary line."""
    _dims(dim_M, dim_N)
    return _whole(_mu(mu_x), _mu(mu_y), dim_M, dim_N)


def gluing_sides(mu1, mu2, mu_out, mu_x, mu_y, dim_M: int, dim_N: int):
    """Both sides of the index gluing relation (capped pants vs. capped strip)."""
    _dims(dim_M, dim_N)
    m1, m2, mo, mx, my = map(_mu, (mu1, mu2, mu_out, mu_x, mu_y))
    lhs = (
        _half(m1, dim_N, INCOMING)
        + _half(m2, dim_N, INCOMING)
        + _pants(m1, m2, mo, dim_M, dim_N)
        + _half(mo, dim_N, OUTGOING)
    )
    rhs = _half(mx, dim_N, INCOMING) + _whole(mx, my, dim_M, dim_N) + _half(my, dim_N, OUTGOING)
    return lhs, rhs


def verify_gluing(mu1, mu2, mu_out, mu_x, mu_y, dim_M: int, dim_N: int) -> bool:
    lhs, rhs = gluing_sides(mu1, mu2, mu_out, mu_x, mu_y, dim_M, dim_N)
    return lhs == rhs


def product_degree(r: int, s: int, dim_M: int) -> int:
    """Degree of the Floer product of classes in degrees r and s."""
    _dims(dim_M)
    return int(r) + int(s) - int(dim_M)


def intersection_degree(r: int, s: int, dim_N: int) -> int:
    """Degree of the intersection product on H_*(N)."""
    _dims(dim_N=dim_N)
    return int(r) + int(s) - int(dim_N)


def product_intertwines(dim_M: int, dim_N: int) -> bool:
    """Whether the two degree shifts agree, which happens only when dim_N == dim_M."""
    _dims(dim_M, dim_N)
    return product_degree(0, 0, dim_M) == intersection_degree(0, 0, dim_N)


def output_grading(mu1, mu2, dim_M: int, dim_N: int) -> Fraction:
    """Output grading for which the pants moduli space is zero dimensional."""
    _dims(dim_M, dim_N)
    return _mu(mu1) + _mu(mu2) + HALF * dim_N - dim_M


__all__ = [
    "INCOMING",
    "OUTGOING",
    "IndexData",
    "dim_half_strip",
    "dim_pants",
    "dim_whole_strip",
    "gluing_sides",
    "intersection_degree",
    "output_grading",
    "product_degree",
    "product_intertwines",
    "verify_gluing",
]
