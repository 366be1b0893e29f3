"""Command-line sweeps: algebra residuals, resolution of unity, tables, q -> 1 scans.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or
configuration errors. Reports are deterministic for a fixed configuration.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .algebra import (
    SU11_REALIZATIONS,
    SU2_REALIZATIONS,
    SYMMETRIC_REALIZATIONS,
    RealizationSpec,
    build,
    classical_limit_scan,
    norm_exact,
    verify_algebra,
)
from .coherent import (
    FAMILIES,
    CoherentFamily,
    MeasureSpec,
    adjudicate_glauber,
    adjudicate_k0_one,
    resolve_unity,
)
from .exceptions import ConfigError, QDeformError, QParameterError
from .laurent import LaurentPoly
from .qcore import _bracket, half_integer, q_brace, q_brace_poly, q_bracket, q_bracket_poly, q_power_poly

__all__ = ["main", "build_parser", "load_config", "run"]

DEFAULT_GRID = "0.99,1.01,0.999,1.001,0.9999,1.0001"
DEFAULTS = {
    "verify-algebra": {"q": "0.5,0.9,1.1", "k0": "1/2,1,3/2", "J": "1..8", "nmax": "30",
                       "realization": ",".join(SU11_REALIZATIONS)},
    "verify-unity": {"q": "0.5,0.9,1.1", "k0": "1,3/2,2", "J": "1..6", "nmax": "10",
                     "family": "Perelomov11,GlauberE,Perelomov2,FiniteGlauber2"},
    "limit-scan": {"grid": DEFAULT_GRID, "k0": "3/2", "J": "2", "nmax": "20",
                   "realization": ",".join(SU11_REALIZATIONS + SU2_REALIZATIONS)},
    "table": {"q": "0.9", "k0": "1", "J": "2", "nmax": "5", "realization": "D-B"},
}
COMMON = {"tol_algebra": "1e-11", "tol_unity": "1e-6", "format": "json", "out": "", "jobs": "1",
          "convention": "auto", "measure_variant": "general", "su2_base_power": "2",
          "basis": "unit", "min_order": "1.9", "measure": "H", "x": "0,0.5,1"}


# ----------------------------------------------------------------- parsing

def _split(text):
    return [t.strip() for t in str(text).replace(";", ",").split(",") if t.strip()]


def parse_floats(text):
    try:
        return [float(t) for t in _split(text)]
    except ValueError as e:
        raise ConfigError(f"not a list of numbers: {text!r}") from e


def parse_ints(text):
    out = []
    for t in _split(text):
        try:
            if ".." in t:
                lo, hi = (int(v) for v in t.split(".."))
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(t))
        except ValueError as e:
            raise ConfigError(f"not an integer or range: {t!r}") from e
    return out


def parse_halves(text):
    out = []
    for t in _split(text):
        try:
            out.append(half_integer(Fraction(t), "k0"))
        except (ValueError, ZeroDivisionError, QParameterError) as e:
            raise ConfigError(f"k0 must be a half-integer, got {t!r} ({e})") from e
    return out


def load_config(path):
    """Flat ``key = value`` file; '#' starts a comment."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_string("[run]\n" + fh.read())
    except (OSError, configparser.Error) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return {k.replace("-", "_"): v for k, v in cp["run"].items()}


def build_parser():
    p = argparse.ArgumentParser(prog="qdeform", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qdeform {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat key = value file; flags override it")
        sp.add_argument("--format", choices=("json", "csv", "md"))
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--nmax", help="truncation (Fock space size or highest moment)")
        sp.add_argument("--k0", help="comma list of half-integers, e.g. 1/2,1,3/2")
        sp.add_argument("--J", help="comma list or range of integers, e.g. 1..6")

    sp = sub.add_parser("verify-algebra", help="residuals of the deformed algebra relations")
    common(sp)
    sp.add_argument("--q", help="comma list of q values (q = 1 belongs to limit-scan)")
    sp.add_argument("--realization", help="comma list of realization names")
    sp.add_argument("--tol-algebra", dest="tol_algebra")
    sp.add_argument("--su2-base-power", dest="su2_base_power", help="base q^p of the su2 commutator bracket (default 2)")
    sp.add_argument("--jobs", help="worker processes")

    sp = sub.add_parser("verify-unity", help="diagonal moments of the coherent-state measures")
    common(sp)
    sp.add_argument("--q")
    sp.add_argument("--family", help=f"comma list from {', '.join(FAMILIES)}")
    sp.add_argument("--convention", help="auto, operator or printed")
    sp.add_argument("--measure-variant", dest="measure_variant", help="general or printed (G at k0 = 1)")
    sp.add_argument("--tol-unity", dest="tol_unity")
    sp.add_argument("--jobs")

    sp = sub.add_parser("table", help="exact and numeric tables")
    common(sp)
    sp.add_argument("kind", choices=("qnumbers", "norms", "measures"))
    sp.add_argument("--q")
    sp.add_argument("--realization")
    sp.add_argument("--measure", help="G, g, h or H")
    sp.add_argument("--x", help="comma list of x = |z|^2 values")

    sp = sub.add_parser("limit-scan", help="distance to the classical matrices as q -> 1")
    common(sp)
    sp.add_argument("--grid", help="comma list of q values near 1")
    sp.add_argument("--realization")
    sp.add_argument("--basis", choices=("unit", "raw"))
    sp.add_argument("--min-order", dest="min_order")
    return p


def resolve_config(args):
    cmd = args.command
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[cmd])
    if getattr(args, "config", None):
        cfg.update(load_config(args.config))
    for k, v in vars(args).items():
        if k not in ("command", "config") and v is not None:
            cfg[k] = v
    cfg["command"] = cmd
    return cfg


# ------------------------------------------------------------------ points

def _check_q_grid(qs):
    if not qs:
        raise ConfigError("the q grid is empty")
    for q in qs:
        if q == 1.0:
            raise ConfigError("q = 1 is the undeformed algebra; use the limit-scan command for the classical limit")
        if not (q > 0 and math.isfinite(q)):
            raise ConfigError(f"q must be positive and finite, got {q}")


def _positive(cfg, key):
    try:
        v = float(cfg[key])
    except ValueError as e:
        raise ConfigError(f"{key} must be a number") from e
    if not v > 0:
        raise ConfigError(f"{key} must be positive")
    return v


def _nmax(cfg):
    try:
        n = int(cfg["nmax"])
    except ValueError as e:
        raise ConfigError("nmax must be an integer") from e
    if n < 2:
        raise ConfigError("nmax must be at least 2")
    return n


def _names(cfg, key, allowed):
    names = _split(cfg.get(key, ""))
    if not names:
        raise ConfigError(f"the {key} list is empty")
    bad = [n for n in names if n not in allowed]
    if bad:
        raise ConfigError(f"unknown {key} {bad}; choose from {list(allowed)}")
    return names


def algebra_points(cfg):
    qs = parse_floats(cfg["q"])
    _check_q_grid(qs)
    names = _names(cfg, "realization", SU11_REALIZATIONS + SU2_REALIZATIONS)
    nmax = _nmax(cfg)
    k0s, Js = parse_halves(cfg["k0"]), parse_ints(cfg["J"])
    tol = _positive(cfg, "tol_algebra")
    power = int(cfg["su2_base_power"])
    pts = []
    for name in names:
        su2 = name in SU2_REALIZATIONS
        for q in qs:
            for v in (Js if su2 else k0s):
                spec = RealizationSpec.from_name(name, q, J=v) if su2 else RealizationSpec.from_name(name, q, k0=v)
                pts.append(("algebra", spec, None if su2 else nmax, tol, power))
    if not pts:
        raise ConfigError("no points to evaluate")
    return pts


def unity_points(cfg):
    qs = parse_floats(cfg["q"])
    _check_q_grid(qs)
    fams = _names(cfg, "family", FAMILIES)
    nmax = _nmax(cfg)
    k0s, Js = parse_halves(cfg["k0"]), parse_ints(cfg["J"])
    tol = _positive(cfg, "tol_unity")
    conv = cfg["convention"]
    if conv not in ("auto", "operator", "printed"):
        raise ConfigError("convention must be auto, operator or printed")
    pts = []
    for fam in fams:
        for q in qs:
            if fam == "Perelomov11":
                for k0 in k0s:
                    f = CoherentFamily(fam, q, k0=k0, measure_variant=cfg["measure_variant"])
                    f.measure()  # rejects k0 = 1/2 and bad variants up front
                    pts.append(("unity", f, nmax, tol))
            elif fam in ("Perelomov2", "FiniteGlauber2"):
                for J in Js:
                    c = "printed" if conv == "auto" else conv
                    pts.append(("unity", CoherentFamily(fam, q, J=J, convention=c), J, tol))
            else:
                c = "operator" if conv == "auto" else conv
                pts.append(("unity", CoherentFamily(fam, q, convention=c), nmax, tol))
    return pts


def scan_points(cfg):
    grid = parse_floats(cfg["grid"])
    if len(set(grid)) < 2:
        raise ConfigError("the q grid needs at least two distinct values")
    names = _names(cfg, "realization", SU11_REALIZATIONS + SU2_REALIZATIONS + ("su11-classical", "su2-classical"))
    if cfg["basis"] not in ("unit", "raw"):
        raise ConfigError("basis must be unit or raw")
    k0s, Js = parse_halves(cfg["k0"]), parse_ints(cfg["J"])
    min_order = _positive(cfg, "min_order")
    pts = []
    for name in names:
        su2 = name.startswith("su2")
        for v in (Js if su2 else k0s):
            pts.append(("scan", name, tuple(grid), None if su2 else v, v if su2 else None, _nmax(cfg), cfg["basis"], min_order))
    return pts


def _clean(x):
    """JSON-safe values: non-finite floats become strings."""
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def evaluate(point):
    kind = point[0]
    if kind == "algebra":
        _, spec, nmax, tol, power = point
        try:
            rep = verify_algebra(build(spec, nmax), tol=tol, su2_base_power=power)
        except QDeformError as e:
            return {"params": spec.params(), "residuals": {}, "moments": [], "error": str(e), "pass": False}
        return {"params": rep.params, "residuals": rep.residuals, "diagnostics": rep.diagnostics,
                "moments": [], "pass": rep.passed}
    if kind == "unity":
        _, fam, nmax, tol = point
        rep = resolve_unity(fam, nmax, tol)
        return {"params": fam.params(), "residuals": {"max_deviation": rep.max_deviation},
                "moments": list(rep.moments), "measure": rep.measure,
                "errors": {str(k): v for k, v in rep.errors.items()}, "pass": rep.passed}
    _, name, grid, k0, J, nmax, basis, min_order = point
    scan = classical_limit_scan(name, grid, k0=k0, J=J, n_max=nmax, basis=basis)
    params = {"realization": name, "basis": basis}
    if k0 is not None:
        params["k0"] = str(k0)
    if J is not None:
        params["J"] = J
    if name.endswith("classical"):
        ok, checked = all(d == 0 for d in scan.distances), True
    elif name in SYMMETRIC_REALIZATIONS or basis == "unit":
        ok, checked = scan.order >= min_order, True
    else:
        ok, checked = True, False  # raw asymmetric forms are first order; reported only
    return {"params": params, "residuals": {"order": scan.order}, "q_grid": list(grid),
            "distances": list(scan.distances), "moments": [], "checked": checked, "pass": bool(ok)}


def _sort_key(pt):
    p = pt["params"]
    return tuple(str(p.get(k, "")) for k in ("realization", "family", "convention", "basis")) + tuple(
        float(Fraction(str(p.get(k, 0)))) for k in ("q", "k0", "J"))


def run(cfg):
    cmd = cfg["command"]
    if cmd == "table":
        return run_table(cfg)
    pts = {"verify-algebra": algebra_points, "verify-unity": unity_points, "limit-scan": scan_points}[cmd](cfg)
    jobs = max(1, int(cfg.get("jobs", 1)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(evaluate, pts))
    else:
        results = [evaluate(p) for p in pts]
    results.sort(key=_sort_key)
    report = {"config": _public_config(cfg), "points": results}
    if cmd == "verify-unity":
        report["adjudications"] = adjudications(cfg)
    n_pass = sum(r["pass"] for r in results)
    report["summary"] = {"points": len(results), "passed": n_pass, "failed": len(results) - n_pass,
                         "pass": n_pass == len(results)}
    report["provenance"] = {"version": __version__, "config_sha256": config_hash(report["config"])}
    return _clean(report), (0 if report["summary"]["pass"] else 1)


def adjudications(cfg):
    """Both discrepancy flags at every q < 1 of the grid (informational)."""
    out = []
    for q in sorted(set(parse_floats(cfg["q"]))):
        for kind in ("E", "EE"):
            if kind == "EE" and q > 1:
                continue
            a = adjudicate_glauber(kind, q, tol=_positive(cfg, "tol_unity"))
            out.append({"question": a.question, "verdict": a.verdict,
                        "max_deviation": {k: r.max_deviation for k, r in a.reports.items()}})
        a = adjudicate_k0_one(q, tol=_positive(cfg, "tol_unity"))
        out.append({"question": a.question, "verdict": a.verdict,
                    "max_deviation": {k: r.max_deviation for k, r in a.reports.items()}})
    return out


def _public_config(cfg):
    drop = {"out", "format", "jobs"}
    return {k: str(v) for k, v in sorted(cfg.items()) if k not in drop}


def config_hash(config):
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()


# ------------------------------------------------------------------ tables

def _exact_str(x):
    return str(x)


def _product_poly(n, x, sign):
    """(1 -+ x)^n_q at rational x as an exact Laurent polynomial."""
    out = LaurentPoly.constant(1)
    for j in range(n):
        out = out * (LaurentPoly.constant(1) + sign * x * q_power_poly(n - 1 - 2 * j))
    return out


def run_table(cfg):
    qs = parse_floats(cfg["q"])
    _check_q_grid(qs)
    kind = cfg["kind"]
    rows = []
    if kind == "qnumbers":
        for n in range(1, _nmax(cfg) + 1):
            row = {"n": n, "bracket": str(q_bracket_poly(n)), "brace": str(q_brace_poly(n))}
            for q in qs:
                row[f"bracket(q={q})"] = float(q_bracket(n, q))
                row[f"brace(q={q})"] = float(q_brace(n, q))
            rows.append(row)
    elif kind == "norms":
        name = _names(cfg, "realization", SU11_REALIZATIONS + SU2_REALIZATIONS)[0]
        su2 = name in SU2_REALIZATIONS
        J = parse_ints(cfg["J"])[0] if su2 else None
        k0 = None if su2 else parse_halves(cfg["k0"])[0]
        nmax = J if su2 else _nmax(cfg)
        tables = {q: build(RealizationSpec.from_name(name, q, k0=k0, J=J), nmax).norms.values for q in qs}
        for n in range(nmax + 1):
            row = {"n": n, "norm": str(norm_exact(name, n, k0=k0, J=J))}
            for q in qs:
                row[f"norm(q={q})"] = float(tables[q][n])
            rows.append(row)
    else:
        meas = cfg["measure"]
        k0 = parse_halves(cfg["k0"])[0] if meas == "G" else None
        J = parse_ints(cfg["J"])[0] if meas == "H" else None
        specs = {q: MeasureSpec(meas, q, k0=k0, J=J, variant=cfg["measure_variant"]) for q in qs}
        for xs in _split(cfg["x"]):
            try:
                x = Fraction(xs)
            except ValueError as e:
                raise ConfigError(f"x must be a number, got {xs!r}") from e
            row = {"x": xs, "W*pi": _measure_exact(meas, x, k0, J, cfg["measure_variant"])}
            for q, spec in specs.items():
                try:
                    row[f"W(q={q})"] = float(spec(float(x)))
                except QDeformError as e:
                    raise ConfigError(str(e)) from e
            rows.append(row)
    report = {"config": _public_config(cfg), "rows": rows,
              "provenance": {"version": __version__}}
    report["provenance"]["config_sha256"] = config_hash(report["config"])
    return _clean(report), 0


def _measure_exact(meas, x, k0, J, variant):
    """pi * W(x) as an exact string where a closed form exists."""
    if meas == "G":
        m = int(2 * k0) - 2
        if variant == "printed":
            return str(x)
        return str(q_bracket_poly(m + 1) * _product_poly(m, x, -1))
    if meas == "H":
        return str(q_bracket_poly(J + 1) / _product_poly(J + 2, x, 1))
    return "e_q^{-x}" if meas == "g" else "E_q^{-x}"


# ------------------------------------------------------------------ output

def _flat_rows(report):
    if "rows" in report:
        return report["rows"]
    rows = []
    for pt in report["points"]:
        row = dict(pt["params"])
        for k, v in pt.get("residuals", {}).items():
            row[k] = v
        if pt.get("moments"):
            row["moments"] = " ".join(f"{m:.12g}" if isinstance(m, float) else str(m) for m in pt["moments"])
        row["pass"] = pt["pass"]
        rows.append(row)
    return rows


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = _flat_rows(report)
    cols = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in rows:
        lines.append("| " + " | ".join(_md_cell(r.get(c, "")) for c in cols) + " |")
    if "summary" in report:
        s = report["summary"]
        lines.append("")
        lines.append(f"{s['passed']}/{s['points']} points pass")
    return "\n".join(lines) + "\n"


def _md_cell(v):
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        fmt = cfg["format"]
        if fmt not in ("json", "csv", "md"):
            raise ConfigError(f"format must be json, csv or md, got {fmt!r}")
        report, code = run(cfg)
    except (ConfigError, QParameterError) as e:
        print(f"qdeform: error: {e}", file=sys.stderr)
        return 2
    text = render(report, fmt)
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "summary" in report:
        s = report["summary"]
        print(f"qdeform {cfg['command']}: {s['passed']}/{s['points']} points pass", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
