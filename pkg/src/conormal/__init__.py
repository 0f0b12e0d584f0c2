"""Spectral invariants with conormal boundary conditions on T*S^1."""

from ._backend import BACKEND
from .errors import (
    BlowUpError,
    ConfigError,
    ConormalError,
    DomainError,
    NotSubadditiveError,
    OracleMismatchError,
    OracleUnavailableError,
    PartialSequenceError,
    UnsupportedCombinationError,
)
from .geometry import Arc, BasePoint, ClassLabel, PhasePoint, Point, Whole, circle_reduce, contains
from .hamiltonian import (
    Bump,
    CutoffSpec,
    Lifted,
    TrigPoly,
    compose,
    evaluate,
    flow,
    hsum,
    inverse,
    iterate,
    lifted,
    scale,
    support_radius,
    viterbo_rescale,
    zero,
)
from .homogenize import build_sequences, check_properties, counterexample, fekete_limit, limsup_ratio, sigma, zeta
from .indexcalc import dim_half_strip, dim_pants, dim_whole_strip, product_degree, verify_gluing
from .spectral import action_profile, check_class_bound, check_triangle, ell_plus, persistence
from .viterbo import orbit_experiment, rescaled_spectral

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Arc",
    "BasePoint",
    "BlowUpError",
    "Bump",
    "ClassLabel",
    "ConfigError",
    "ConormalError",
    "CutoffSpec",
    "DomainError",
    "Lifted",
    "NotSubadditiveError",
    "OracleMismatchError",
    "OracleUnavailableError",
    "PartialSequenceError",
    "PhasePoint",
    "Point",
    "TrigPoly",
    "UnsupportedCombinationError",
    "Whole",
    "action_profile",
    "build_sequences",
    "check_class_bound",
    "check_properties",
    "check_triangle",
    "circle_reduce",
    "compose",
    "contains",
    "counterexample",
    "dim_half_strip",
    "dim_pants",
    "dim_whole_strip",
    "ell_plus",
    "evaluate",
    "fekete_limit",
    "flow",
    "hsum",
    "inverse",
    "iterate",
    "lifted",
    "limsup_ratio",
    "orbit_experiment",
    "persistence",
    "product_degree",
    "rescaled_spectral",
    "scale",
    "sigma",
    "support_radius",
    "verify_gluing",
    "viterbo_rescale",
    "zero",
    "zeta",
]
