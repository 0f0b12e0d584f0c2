"""Circle arithmetic, phase-space points and conormal targets on T*S^1.

The circle is [0, 1) with mod-1 arithmetic. Angles may be floats or exact
``Fraction`` values; reduction keeps the type.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Union

from .errors import DomainError


def circle_reduce(x: Real) -> BasePoint:
    """Reduce ``x`` modulo 1 into ``[0, 1)``."""
    return BasePoint(x)


def _reduce(x):
    if isinstance(x, Fraction):
        return x % 1
    if isinstance(x, bool) or not isinstance(x, Real):
        raise DomainError(f"angle must be a real number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"angle must be finite, got {x!r}")
    r = x % 1.0
    # x % 1.0 rounds up to 1.0 for tiny negative x
    return 0.0 if r >= 1.0 else r


def wrap(d: float) -> float:
    """Signed representative of an angle difference in ``[-1/2, 1/2)``."""
    return d - math.floor(d + 0.5)


@dataclass(frozen=True)
class BasePoint:
    q: Real

    def __post_init__(self):
        object.__setattr__(self, "q", _reduce(self.q))

    def __float__(self):
        return float(self.q)


def as_angle(x) -> Real:
    return x.q if isinstance(x, BasePoint) else _reduce(x)


def distance(x, y) -> float:
    """Wraparound distance on the circle, at most 1/2."""
    d = abs(float(as_angle(x)) - float(as_angle(y)))
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class PhasePoint:
    q: BasePoint
    p: float

    def __post_init__(self):
        if not isinstance(self.q, BasePoint):
            object.__setattr__(self, "q", BasePoint(self.q))
        object.__setattr__(self, "p", float(self.p))


# --- conormal targets -------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """N = {x}; its conormal is the cotangent fibre over x."""

    x: BasePoint

    def __post_init__(self):
        if not isinstance(self.x, BasePoint):
            object.__setattr__(self, "x", BasePoint(self.x))


@dataclass(frozen=True)
class Whole:
    """N = S^1; the conormal is the zero section itself."""


@dataclass(frozen=True)
class Arc:
    """Closed arc traversed counterclockwise from ``a`` to ``b``.

    ``sign`` selects the boundary condition at the endpoints: ``"-"`` realizes
    homology relative to the boundary, ``"+"`` absolute homology.
    """

    a: BasePoint
    b: BasePoint
    sign: str = "-"

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if not isinstance(v, BasePoint):
                object.__setattr__(self, name, BasePoint(v))
        if self.sign not in ("+", "-"):
            raise DomainError(f"arc sign must be '+' or '-', got {self.sign!r}")
        if self.a.q == self.b.q:
            raise DomainError("degenerate arc: a == b")

    @property
    def length(self) -> float:
        return float(_reduce(self.b.q - self.a.q))

    def offset(self, x) -> float:
        """Counterclockwise distance from ``a`` to ``x``."""
        return float(_reduce(as_angle(x) - self.a.q))


ConormalTarget = Union[Point, Whole, Arc]


class ClassLabel(enum.Enum):
    FUNDAMENTAL = "fundamental"
    POINT = "point"


def contains(N: ConormalTarget, x, tol: float = 0.0) -> bool:
    """Whether ``x`` lies in ``N`` (points within ``tol``, arcs extended by ``tol``)."""
    if tol < 0:
        raise DomainError("tol must be non-negative")
    if isinstance(N, Whole):
        return True
    if isinstance(N, Point):
        return distance(N.x, x) <= tol
    if isinstance(N, Arc):
        off = N.offset(x)
        return off <= N.length + tol or (1.0 - off) <= tol
    raise TypeError(f"not a conormal target: {N!r}")
