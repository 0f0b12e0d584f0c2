"""Command-line front end.

Every subcommand reads an optional JSON config, applies flag overrides,
writes its artifacts (CSV tables, SVG figures and the resolved config) to the
output directory and returns an exit code:

    0  success, every checked property holds
    1  a property violation was found
    2  the oracle is unavailable (non-graphical image or integrator blow-up)
    3  configuration error
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _serialize as ser
from . import acceptance as acc
from . import axioms as ax
from . import hamiltonian as hm
from . import homogenize as hz
from . import indexcalc as ic
from . import spectral as sp
from . import viterbo as vb
from .errors import BlowUpError, ConfigError, DomainError, OracleMismatchError, OracleUnavailableError
from .geometry import Arc, Whole

EXIT_OK, EXIT_VIOLATION, EXIT_ORACLE, EXIT_CONFIG = 0, 1, 2, 3

DEFAULTS = {
    "spectral": {
        "hamiltonian": {"type": "lifted", "f": "cosine"},
        "target": {"point": 0.5},
        "class": "fundamental",
        "grid": sp.DEFAULT_GRID,
        "step": hm.DEFAULT_STEP,
        "tol": sp.SPECTRALITY_TOL,
        "out": "results",
    },
    "homogenize": {
        "hamiltonian": {"type": "lifted", "f": "cosine"},
        "target": {"point": 0.5},
        "n_max": 50,
        "grid": 1024,
        "step": hm.DEFAULT_STEP,
        "tol": hz.PROPERTY_TOL,
        "seed": 0,
        "sample_pairs": 10_000,
        "out": "results",
    },
    "counterexample": {
        "n_max": 1_000_000,
        "theta_low": "1/3",
        "theta_high": "1/2",
        "seed": 0,
        "sample_pairs": 10_000,
        "out": "results",
    },
    "axioms": {
        "seed": 0,
        "trials": 200,
        "n_max": ax.N_MAX,
        "grid": ax.GRID,
        "step": ax.STEP,
        "tol": ax.TOL,
        "smoke_trials": 10,
        "workers": 1,
        "out": "results",
    },
    "dimension": {"seed": 0, "trials": 10_000, "out": "results"},
    "viterbo": {
        "f": {"shifted_cosine": vb.GOLDEN},
        "x1": vb.GOLDEN,
        "n_max": 10_000,
        "seed": 0,
        "spot_checks": 10,
        "out": "results",
    },
    "report": {
        "seed": 0,
        "criteria": [1, 2, 3, 4, 5, 6, 7],
        "trials": 200,
        "pairs": 200,
        "profiles": 50,
        "out": "results",
    },
}

FLAG_KEYS = {"seed": "seed", "n_max": "n_max", "grid": "grid", "tol": "tol", "out": "out", "trials": "trials"}


# --- configuration ----------------------------------------------------------------


def _int(cfg, key, lo=None):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {v}")
    return v


def _pos(cfg, key):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0 or not math.isfinite(v):
        raise ConfigError(f"{key} must be a positive number, got {v!r}")
    return float(v)


def _fraction(v, key):
    try:
        return Fraction(v) if isinstance(v, (str, int)) else Fraction(float(v))
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"{key} must be a rational number, got {v!r}") from e


def load_config(command, path=None, overrides=None) -> dict:
    """Defaults, then the JSON file, then flag overrides; unknown keys are rejected."""
    cfg = copy.deepcopy(DEFAULTS[command])
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = sorted(set(data) - set(cfg))
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {unknown}")
        cfg.update(data)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key not in cfg:
            raise ConfigError(f"--{key.replace('_', '-')} does not apply to {command}")
        cfg[key] = val
    _validate(command, cfg)
    return cfg


def _validate(command, cfg):
    for key in ("seed",):
        if key in cfg:
            _int(cfg, key, 0)
    for key in ("n_max", "trials", "sample_pairs", "pairs", "profiles", "workers"):
        if key in cfg:
            _int(cfg, key, 1)
    for key in ("spot_checks", "smoke_trials"):
        if key in cfg:
            _int(cfg, key, 0)
    if "grid" in cfg:
        _int(cfg, "grid", 8)
    for key in ("step", "tol"):
        if key in cfg:
            _pos(cfg, key)
    if not isinstance(cfg["out"], str) or not cfg["out"]:
        raise ConfigError("out must be a directory path")
    if "criteria" in cfg:
        c = cfg["criteria"]
        if not isinstance(c, list) or not c or any(k not in acc.CRITERIA for k in c):
            raise ConfigError(f"criteria must be a non-empty list drawn from {sorted(acc.CRITERIA)}")
    # structured values are parsed here so errors surface as configuration errors
    if "hamiltonian" in cfg:
        ser.spec_from_dict(cfg["hamiltonian"], cfg.get("n_max", 1))
    if "target" in cfg:
        ser.target_from_dict(cfg["target"])
    if "class" in cfg:
        ser.label_from_str(cfg["class"])
    if "f" in cfg:
        ser.poly_from_dict(cfg["f"])
    if "x1" in cfg and (isinstance(cfg["x1"], bool) or not isinstance(cfg["x1"], (int, float))):
        raise ConfigError("x1 must be a number")
    for key in ("theta_low", "theta_high"):
        if key in cfg:
            _fraction(cfg[key], key)


# --- output helpers -----------------------------------------------------------------


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(v) for v in r])


def _outdir(cfg) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(cfg, sort_keys=True, indent=2) + "\n")
    return out


def _plots():
    from . import _plots

    return _plots


def _say(msg):
    print(msg)


# --- commands -----------------------------------------------------------------------


def cmd_spectral(cfg) -> int:
    H = ser.spec_from_dict(cfg["hamiltonian"])
    N = ser.target_from_dict(cfg["target"])
    label = ser.label_from_str(cfg["class"])
    prof = sp.action_profile(H, cfg["grid"], cfg["step"])
    if not prof.graphical:
        raise OracleUnavailableError(prof.reason)
    rep = sp.ell_plus(prof, N, label)
    out = _outdir(cfg)
    dist = rep.witness.distance
    write_csv(
        out / "spectral.csv",
        ["target", "class", "value", "location", "witness_seed", "witness_action", "witness_distance",
         "error_bound", "step", "grid"],
        [[json.dumps(ser.target_to_dict(N)), label.value, rep.value, rep.location, rep.witness.seed,
          rep.witness.action, dist, prof.error_bound, cfg["step"], cfg["grid"]]],
    )
    plots = _plots()
    plots.action_profile(prof, out / "profile.svg", "action profile of the flowed zero section")
    if isinstance(N, (Whole, Arc)):
        plots.persistence_bars(sp.persistence(prof, N), out / "persistence.svg", "sublevel persistence")
    _say(f"value {rep.value!r} (error bound {prof.error_bound:.3e}, witness distance {dist:.3e})")
    return EXIT_OK if dist <= cfg["tol"] else EXIT_VIOLATION


def cmd_homogenize(cfg) -> int:
    H = ser.spec_from_dict(cfg["hamiltonian"], cfg["n_max"])
    N = ser.target_from_dict(cfg["target"])
    s = hz.build_sequences(H, N, cfg["n_max"], cfg["grid"], cfg["step"])
    s.properties = hz.check_properties(s, cfg["sample_pairs"], cfg["seed"], cfg["tol"])
    out = _outdir(cfg)
    rows = zip(s.n, s.ell_N, s.ell_M, s.a, s.b, s.a_ratio, s.b_ratio,
               [s.error_bound] * s.n_max, [cfg["step"]] * s.n_max)
    write_csv(out / "homogenize.csv",
              ["n", "ell_N", "ell_M", "a_n", "b_n", "a_ratio", "b_ratio", "error_bound", "step"], rows)
    summary = [[r.name, r.passed, r.trials, r.worst_margin, json.dumps(r.witness)]
               for r in s.properties.results.values()]
    extra = []
    if s.n_max >= 10:
        for which in ("a", "b"):
            est = hz.limsup_ratio(s, which)
            extra.append([f"limsup_{which}", est.converged, est.tail_window, est.value,
                          json.dumps(est.accumulation_points)])
        sig = hz.limsup_estimate(s.ell_N / s.n)
        extra.append(["sigma", sig.converged, sig.tail_window, sig.value, json.dumps(sig.accumulation_points)])
    extra.append(["C", True, 0, s.C, "null"])
    extra.append(["error_bound", True, 0, s.error_bound, json.dumps({"step": cfg["step"]})])
    write_csv(out / "homogenize_summary.csv", ["item", "ok", "count", "value", "detail"], summary + extra)
    _plots().ratios(s.n, {"a_n / n": s.a_ratio, "b_n / n": s.b_ratio, "l^N / n": s.ell_N / s.n},
                    out / "ratios.svg", "ratio sequences")
    ok = s.properties.all_passed
    _say(f"properties {'hold' if ok else 'violated'}; C = {s.C!r}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_counterexample(cfg) -> int:
    lo, hi = _fraction(cfg["theta_low"], "theta_low"), _fraction(cfg["theta_high"], "theta_high")
    s = hz.counterexample(cfg["n_max"], lo, hi, cfg["sample_pairs"], cfg["seed"])
    out = _outdir(cfg)
    rows = [[r.name, r.passed, r.trials, r.worst_margin, json.dumps(r.witness)]
            for r in s.properties.results.values()]
    if s.limsup is not None:
        for c, k in s.limsup.accumulation_points:
            rows.append(["cluster", True, k, c, "null"])
        rows.append(["limsup_tail", s.limsup.converged, s.limsup.tail_window, s.limsup.value, "null"])
    rows.append(["phases", True, len(s.phase_starts), float(len(s.phase_starts)), "null"])
    write_csv(out / "counterexample_summary.csv", ["item", "ok", "count", "value", "detail"], rows)
    write_csv(out / "counterexample_phases.csv", ["start_n", "phase", "a_n", "ratio"],
              [[n, kind, int(s.a[n - 1]), float(s.a[n - 1] / n)] for n, kind in s.phase_starts])
    idx = np.unique(np.geomspace(1, s.n_max, 2000).astype(int)) - 1
    _plots().ratios(idx + 1, {"a_n / n": s.a_ratio[idx]}, out / "ratios.svg", "hold/increment sequence",
                    hlines=(float(lo), float(hi)))
    n_cl = len(s.limsup.accumulation_points) if s.limsup else 0
    _say(f"{n_cl} accumulation clusters, {len(s.phase_starts)} phases")
    return EXIT_OK if s.properties.all_passed else EXIT_VIOLATION


def _axiom_rows(reports):
    return [[r.axiom, r.passed, r.skipped, r.trials, r.worst_margin, r.tol, r.refused, r.reason,
             json.dumps(r.witnesses, sort_keys=True)] for r in reports]


AXIOM_HEADER = ["axiom", "passed", "skipped", "trials", "worst_margin", "tol", "refused", "reason", "witnesses"]


def cmd_axioms(cfg) -> int:
    reports = ax.axiom_suite(cfg["seed"], cfg["trials"], cfg["n_max"], cfg["grid"], cfg["step"], cfg["tol"],
                             cfg["workers"])
    reports += ax.conjugation_smoke(cfg["seed"], cfg["smoke_trials"], cfg["n_max"], cfg["grid"], cfg["step"])
    out = _outdir(cfg)
    write_csv(out / "axioms.csv", AXIOM_HEADER + ["step", "grid"],
              [row + [cfg["step"], cfg["grid"]] for row in _axiom_rows(reports)])
    bad = [r.axiom for r in reports if not r.skipped and not r.passed]
    skipped = [r.axiom for r in reports if r.skipped]
    _say(f"failed: {bad or 'none'}; skipped: {skipped}")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_dimension(cfg) -> int:
    res = acc._index(cfg["trials"], cfg["seed"])
    passed, metrics, _ = res
    out = _outdir(cfg)
    rows = []
    for fn, args, want in acc.INDEX_TABLE:
        got = getattr(ic, fn)(*args)
        rows.append([fn, json.dumps([str(a) for a in args]), str(got), str(want), got == want])
    rows.append(["verify_gluing", json.dumps({"tuples": cfg["trials"]}), str(metrics["gluing_failures"]), "0",
                 metrics["gluing_failures"] == 0])
    write_csv(out / "dimension.csv", ["function", "arguments", "value", "expected", "ok"], rows)
    _say(f"gluing identity failures: {metrics['gluing_failures']} of {cfg['trials']}")
    return EXIT_OK if passed else EXIT_VIOLATION


def cmd_viterbo(cfg) -> int:
    f = ser.poly_from_dict(cfg["f"])
    exp = vb.orbit_experiment(f, float(cfg["x1"]), cfg["n_max"], cfg["spot_checks"], cfg["seed"])
    out = _outdir(cfg)
    n = np.arange(1, exp.n_max + 1)
    write_csv(out / "viterbo.csv", ["n", "rhs", "rhs_sup"], zip(n, exp.rhs_sequence, exp.rhs_sup))
    rows = [["lhs", exp.lhs], ["rhs_sup", float(exp.rhs_sup[-1])], ["gap_to_max", exp.gap],
            ["separation", exp.separation], ["step", vb.STEP]]
    rows += [[f"oracle_n={k}", v] for k, v in exp.spot_checks]
    write_csv(out / "viterbo_summary.csv", ["item", "value"], rows)
    _plots().ratios(n, {"f(n x1)": exp.rhs_sequence, "running sup": exp.rhs_sup,
                        "l(phi^n)/n": np.full(exp.n_max, exp.lhs)}, out / "viterbo.svg", "iterating vs rescaling")
    _say(f"lhs {exp.lhs!r}, running sup {float(exp.rhs_sup[-1])!r}, separation {exp.separation!r}")
    return EXIT_OK


def run_report(cfg, echo=True):
    """Run the selected criteria; return (results, {filename: bytes})."""
    kwargs = {
        1: {},
        2: {"seed": cfg["seed"]},
        3: {"seed": cfg["seed"]},
        4: {"seed": cfg["seed"], "pairs": cfg["pairs"]},
        5: {"seed": cfg["seed"], "trials": cfg["trials"]},
        6: {"seed": cfg["seed"]},
        7: {"seed": cfg["seed"], "profiles": cfg["profiles"]},
    }
    results = []
    for k in cfg["criteria"]:
        r = acc.CRITERIA[k](**kwargs[k])
        results.append(r)
        if echo:
            _say(r.line())
    out = _outdir(cfg)
    write_csv(out / "acceptance.csv", ["criterion", "name", "passed", "metrics"],
              [[r.number, r.name, r.passed, r.metrics] for r in results])
    files = ["acceptance.csv"]
    for r in results:
        if r.number == 5:
            write_csv(out / "axioms.csv", AXIOM_HEADER, _axiom_rows(r.details["reports"]))
            files.append("axioms.csv")
    return results, {name: (out / name).read_bytes() for name in files}


def cmd_report(cfg) -> int:
    results, _ = run_report(cfg)
    return EXIT_OK if all(r.ok for r in results) else EXIT_VIOLATION


COMMANDS = {
    "spectral": (cmd_spectral, "spectral number of a catalog Hamiltonian on a target"),
    "homogenize": (cmd_homogenize, "sequences a_n, b_n, their properties and limsup estimates"),
    "counterexample": (cmd_counterexample, "hold/increment sequence with oscillating ratios"),
    "axioms": (cmd_axioms, "randomized campaigns for quasi-morphism and quasi-state clauses"),
    "dimension": (cmd_dimension, "exact dimension formulas and the gluing identity"),
    "viterbo": (cmd_viterbo, "iterating versus rescaling the base"),
    "report": (cmd_report, "run the acceptance criteria"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conormal", description="Conormal spectral invariants on the cotangent bundle of the circle.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_, description=help_)
        s.add_argument("--config", metavar="PATH", help="JSON config; keys as in the command defaults")
        s.add_argument("--seed", type=int)
        s.add_argument("--n-max", dest="n_max", type=int)
        s.add_argument("--grid", type=int)
        s.add_argument("--tol", type=float)
        s.add_argument("--trials", type=int)
        s.add_argument("--out", metavar="DIR")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        overrides = {k: getattr(args, k) for k in FLAG_KEYS}
        cfg = load_config(args.command, args.config, overrides)
    except (ConfigError, DomainError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    fn = COMMANDS[args.command][0]
    try:
        return fn(cfg)
    except (OracleUnavailableError, BlowUpError) as e:
        print(f"oracle unavailable: {e}", file=sys.stderr)
        return EXIT_ORACLE
    except OracleMismatchError as e:
        print(f"oracle mismatch: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ConfigError, DomainError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
