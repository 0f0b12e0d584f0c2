"""JSON-friendly round trips for Hamiltonians, targets and polynomials."""

from __future__ import annotations

from . import hamiltonian as hm
from .errors import ConfigError
from .geometry import Arc, ClassLabel, Point, Whole


def _keys(d, required, optional=()):
    if not isinstance(d, dict):
        raise ConfigError(f"expected an object, got {d!r}")
    unknown = set(d) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in d]
    if missing:
        raise ConfigError(f"missing keys {missing}")


def _num(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name} must be a number, got {v!r}")
    return float(v)


def poly_to_dict(f: hm.TrigPoly) -> dict:
    return {"cos": list(f.cos), "sin": list(f.sin)}


def poly_from_dict(d) -> hm.TrigPoly:
    if isinstance(d, str) and d == "cosine":
        return hm.TrigPoly.cosine()
    if isinstance(d, dict) and "shifted_cosine" in d:
        _keys(d, ["shifted_cosine"])
        return hm.TrigPoly.shifted_cosine(_num(d["shifted_cosine"], "shifted_cosine"))
    _keys(d, ["cos"], ["sin"])
    try:
        return hm.TrigPoly(tuple(_num(v, "cos") for v in d["cos"]),
                           tuple(_num(v, "sin") for v in d.get("sin", [])))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad polynomial: {e}") from e


def spec_to_dict(H) -> dict:
    if isinstance(H, hm.Lifted):
        return {"type": "lifted", "f": poly_to_dict(H.f), "cut": {"r0": H.cut.r0, "r1": H.cut.r1}}
    if isinstance(H, hm.Bump):
        return {"type": "bump", "q0": float(H.q0.q), "p0": H.p0, "r_q": H.r_q, "r_p": H.r_p, "A": H.A}
    if isinstance(H, hm.Scale):
        return {"type": "scale", "s": H.s, "inner": spec_to_dict(H.inner)}
    if isinstance(H, hm.Sum):
        return {"type": "sum", "members": [spec_to_dict(m) for m in H.members]}
    if isinstance(H, hm.Compose):
        return {"type": "compose", "left": spec_to_dict(H.left), "right": spec_to_dict(H.right)}
    if isinstance(H, hm.Inverse):
        return {"type": "inverse", "inner": spec_to_dict(H.inner)}
    if isinstance(H, hm.Iterate):
        return {"type": "iterate", "n": H.n, "inner": spec_to_dict(H.inner)}
    if isinstance(H, hm.ViterboRescale):
        return {"type": "viterbo_rescale", "n": H.n, "inner": spec_to_dict(H.inner)}
    raise TypeError(f"not a catalog Hamiltonian: {H!r}")


def _int(v, name):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    return v


def spec_from_dict(d, n_max: int = 1):
    """Build a spec; a lifted term without ``cut`` is sized for ``n_max`` iterates."""
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError(f"hamiltonian needs a 'type', got {d!r}")
    kind = d["type"]
    try:
        if kind == "zero":
            _keys(d, ["type"])
            return hm.zero()
        if kind == "lifted":
            _keys(d, ["type", "f"], ["cut"])
            f = poly_from_dict(d["f"])
            if "cut" in d:
                _keys(d["cut"], ["r0", "r1"])
                return hm.Lifted(f, hm.CutoffSpec(_num(d["cut"]["r0"], "r0"), _num(d["cut"]["r1"], "r1")))
            return hm.lifted(f, n_max)
        if kind == "bump":
            _keys(d, ["type", "q0", "p0", "r_q", "r_p", "A"])
            return hm.Bump(*(_num(d[k], k) for k in ("q0", "p0", "r_q", "r_p", "A")))
        if kind == "scale":
            _keys(d, ["type", "s", "inner"])
            return hm.scale(_num(d["s"], "s"), spec_from_dict(d["inner"], n_max))
        if kind == "sum":
            _keys(d, ["type", "members"])
            return hm.hsum(*(spec_from_dict(m, n_max) for m in d["members"]))
        if kind == "compose":
            _keys(d, ["type", "left", "right"])
            return hm.compose(spec_from_dict(d["left"], n_max), spec_from_dict(d["right"], n_max))
        if kind == "inverse":
            _keys(d, ["type", "inner"])
            return hm.inverse(spec_from_dict(d["inner"], n_max))
        if kind in ("iterate", "viterbo_rescale"):
            _keys(d, ["type", "n", "inner"])
            n = _int(d["n"], "n")
            inner = spec_from_dict(d["inner"], n_max * n if kind == "iterate" else n_max)
            return hm.iterate(inner, n) if kind == "iterate" else hm.viterbo_rescale(inner, n)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from e
    raise ConfigError(f"unknown hamiltonian type {kind!r}")


def target_to_dict(N) -> dict:
    if isinstance(N, Point):
        return {"point": float(N.x.q)}
    if isinstance(N, Whole):
        return {"whole": True}
    if isinstance(N, Arc):
        return {"arc": [float(N.a.q), float(N.b.q), N.sign]}
    raise TypeError(f"not a target: {N!r}")


def target_from_dict(d):
    if not isinstance(d, dict) or len(d) != 1:
        raise ConfigError(f"target must have exactly one of point/whole/arc, got {d!r}")
    (kind, v), = d.items()
    try:
        if kind == "point":
            return Point(_num(v, "point"))
        if kind == "whole":
            if v is not True:
                raise ConfigError("whole target must be {'whole': true}")
            return Whole()
        if kind == "arc":
            if not isinstance(v, list) or len(v) != 3:
                raise ConfigError("arc target must be [a, b, sign]")
            return Arc(_num(v[0], "a"), _num(v[1], "b"), v[2])
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from e
    raise ConfigError(f"unknown target kind {kind!r}")


def label_from_str(s) -> ClassLabel:
    try:
        return ClassLabel(s)
    except ValueError as e:
        raise ConfigError(f"class must be 'fundamental' or 'point', got {s!r}") from e
