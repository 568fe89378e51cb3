"""The ``bendlab`` command line.

Subcommands: units, forms, bend, projgeom, certify, pipeline, selftest.
Exit codes: 0 when every hard check passes, 1 on a hard-check failure, 2 on
a configuration error.  Errors are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bending import BendingInstance, bend, verify_relators, verify_su_containment
from .certify import thinness_report
from .errors import (
    BendlabError,
    CentralizerViolation,
    CoincidentPoints,
    ConfigError,
    DegenerateBasis,
    DimensionTooSmall,
    EntriesOutsideBaseField,
    NegativeDiscriminant,
    NotAUnit,
    NotCollinear,
    NotTotallyReal,
    NotUnitary,
    PlaceCountMismatch,
    PointOnBoundary,
    PointOutside,
    RankZeroField,
    SignatureError,
    Singular,
    SquareDiscriminant,
    UnknownGenerator,
)
from .forms import so_membership, su_membership
from .io import (
    dumps,
    load_config,
    load_json,
    matrix_json,
    parse_base,
    parse_extension,
    parse_field,
    parse_form,
    parse_group,
    parse_instance,
    parse_matrix,
    parse_rational,
    sha256_file,
    write_atomic,
)
from .projgeom import (
    KleinBall,
    Omega0,
    Omega1,
    Segment,
    cusp_section_svg,
    hilbert_distance,
    orbit_openness,
)
from .units import (
    UnitSearchProblem,
    build_extension,
    find_special_unit,
    quadratic_fundamental_unit,
    unit_rank_report,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# errors that mean the input describes nothing the tool can work on
CONFIG_ERRORS = (
    ConfigError,
    SignatureError,
    SquareDiscriminant,
    NegativeDiscriminant,
    NotAUnit,
    NotTotallyReal,
    RankZeroField,
    DegenerateBasis,
    UnknownGenerator,
    EntriesOutsideBaseField,
    NotUnitary,
    NotCollinear,
    CoincidentPoints,
    PointOnBoundary,
    PointOutside,
    DimensionTooSmall,
    Singular,
)
HARD_FAILURES = (CentralizerViolation, PlaceCountMismatch)

RANK_ZERO_NOTE = (
    "base field has unit rank 0: the rational integer u > 2 stands in for a special unit; "
    "s is unitary because s tau(s) = 1 regardless"
)


def _emit(obj, out: str | None):
    text = dumps(obj)
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _input_record(path: Path, base: Path | None = None) -> dict:
    shown = os.path.relpath(path, base) if base is not None else str(path)
    return {"path": shown, "sha256": sha256_file(path)}


def _verdicts(checks: dict) -> dict:
    return {name: c["verdict"] for name, c in sorted(checks.items())}


def _fundamental_units(ff) -> list:
    F = ff.field
    if ff.units:
        return ff.units
    if F.degree == 2:
        return [quadratic_fundamental_unit(F)]
    if F.degree == 1:
        return []
    raise ConfigError("fields of degree >= 3 need their fundamental units listed under 'units'")


# -- units ---------------------------------------------------------------------------

def cmd_units_find(args) -> int:
    ff = parse_field(load_json(args.field))
    prob = UnitSearchProblem(ff.field, _fundamental_units(ff), parse_rational(args.threshold))
    su = find_special_unit(prob)
    _emit({
        "input": _input_record(Path(args.field)),
        "field": {"poly": list(ff.field.poly)},
        "fundamental_units": [u.to_json() for u in prob.fundamental_units],
        "special_unit": su.to_json(),
    }, args.out)
    return EXIT_OK


def cmd_units_rank(args) -> int:
    ff = parse_field(load_json(args.field))
    ext = build_extension(ff.field, parse_base(ff.field, json.loads(args.trace)))
    rep = unit_rank_report(ext)
    _emit({"input": _input_record(Path(args.field)), "trace": ext.u.to_json(),
           "unit_rank": rep.to_json()}, args.out)
    return EXIT_OK


# -- forms -----------------------------------------------------------------------------

def cmd_forms_check(args) -> int:
    data = load_json(args.form)
    if "field" not in data:
        raise ConfigError("form file needs a 'field' entry")
    F = parse_field(data["field"]).field
    form = parse_form(data, F)
    L = parse_extension(data.get("trace"), F) if "trace" in data else None
    A = parse_matrix(load_json(args.matrix), F, L)
    if args.mode == "su" and L is None:
        raise ConfigError("--mode su needs a 'trace' entry in the form file")
    member = so_membership(A, form) if args.mode == "so" else su_membership(A, form)
    _emit({"mode": args.mode, "member": member,
           "inputs": [_input_record(Path(args.form)), _input_record(Path(args.matrix))]}, args.out)
    return EXIT_OK if member else EXIT_FAIL


# -- bend ------------------------------------------------------------------------------

def cmd_bend_run(args) -> int:
    data = load_json(args.instance)
    inst = parse_instance(data)
    rep = bend(inst)
    _emit({
        "input": _input_record(Path(args.instance)),
        "field": data["field"],
        "trace": inst.ext.u.to_json(),
        "unit": inst.unit.to_json(),
        "centralizer": "pass",
        "generators": {g: matrix_json(A) for g, A in sorted(rep.items())},
    }, args.out)
    return EXIT_OK


def cmd_bend_verify(args) -> int:
    rep_data = load_json(args.rep)
    form_data = load_json(args.form)
    for key in ("field", "trace", "generators"):
        if key not in rep_data:
            raise ConfigError(f"representation file is missing '{key}'")
    F = parse_field(rep_data["field"]).field
    L = parse_extension({"trace": rep_data["trace"]}, F)
    form = parse_form(form_data, F)
    rep = {g: parse_matrix(rows, F, L) for g, rows in rep_data["generators"].items()}
    rel_data = load_json(args.relators)
    relators = rel_data.get("relators", []) if isinstance(rel_data, dict) else rel_data
    checks = {
        "relators": verify_relators(rep, relators).to_json(),
        "su_containment": verify_su_containment(rep, form).to_json(),
    }
    ok = all(c["verdict"] == "pass" for c in checks.values())
    _emit({"inputs": [_input_record(Path(p)) for p in (args.rep, args.form, args.relators)],
           "checks": checks, "verdicts": _verdicts(checks)}, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- projgeom ----------------------------------------------------------------------------

def _domain(name: str, data: dict, dim: int):
    if name == "segment":
        lo, hi = data.get("interval", ["0", "1"])
        return Segment(parse_rational(lo), parse_rational(hi))
    if name == "klein":
        diag = data.get("diagonal") or ["1"] * (dim - 1) + ["-1"]
        return KleinBall(tuple(parse_rational(c) for c in diag))
    if name == "omega0":
        return Omega0(dim - 1)
    return Omega1(dim - 1)


def _point(x):
    if isinstance(x, list):
        return [parse_rational(c) for c in x]
    return parse_rational(x)


def cmd_projgeom_dist(args) -> int:
    data = load_json(args.points)
    pairs = data.get("pairs") if isinstance(data, dict) else None
    if not pairs:
        raise ConfigError("points file needs a nonempty 'pairs' list")
    first = pairs[0][0]
    dim = len(first) if isinstance(first, list) else 1
    dom = _domain(args.domain, data, dim)
    out = []
    for x, y in pairs:
        d = hilbert_distance(dom, _point(x), _point(y), args.precision)
        out.append({"x": x, "y": y, "distance": d.to_json(), "approx": f"{float(d.mid):.17g}"})
    if args.emit_svg:
        if args.domain not in ("omega0", "omega1"):
            raise ConfigError("--emit-svg draws sections of omega0 or omega1 only")
        write_atomic(args.emit_svg, cusp_section_svg(0 if args.domain == "omega0" else 1))
    _emit({"domain": args.domain, "precision": args.precision,
           "input": _input_record(Path(args.points)), "distances": out}, args.out)
    return EXIT_OK


def cmd_projgeom_orbit(args) -> int:
    try:
        x = [Fraction(c.strip()) for c in args.point.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad point {args.point!r}") from exc
    r = orbit_openness(x, args.n)
    if args.emit_svg:
        write_atomic(args.emit_svg, cusp_section_svg(args.cusp_type))
    _emit({"n": args.n, "point": [str(c) for c in x], "rank": r.rank, "open": r.open}, args.out)
    return EXIT_OK


# -- certify ------------------------------------------------------------------------------

def cmd_certify_run(args) -> int:
    inst = parse_instance(load_json(args.instance))
    rep = thinness_report(inst, word_cap=args.word_cap, prime=args.prime)
    report = {
        "bendlab_version": __version__,
        "input": _input_record(Path(args.instance)),
        "parameters": {"word_cap": args.word_cap, "prime": args.prime},
        **rep,
        "verdicts": _verdicts(rep["checks"]),
    }
    write_atomic(args.report, dumps(report))
    return EXIT_OK if rep["hard_checks_pass"] else EXIT_FAIL


# -- pipeline -------------------------------------------------------------------------------

def build_pipeline_report(cfg) -> dict:
    """Run units -> extension -> bend -> verify -> certify for a loaded config."""
    base = cfg.source.parent if cfg.source else None
    ff = parse_field(load_json(cfg.field_path))
    F = ff.field
    form = parse_form({"alphas": cfg.alphas}, F)
    notes = []

    if cfg.unit_override is not None:
        u = parse_base(F, cfg.unit_override)
        unit_info = {"source": "override", "u": u.to_json()}
        if F.degree == 1:
            # building L first lets a degenerate trace report its own error
            build_extension(F, u)
            if not (u.den == 1 and u.num[0] > 2):
                raise ConfigError("over Q the override must be a rational integer u > 2")
            notes.append(RANK_ZERO_NOTE)
    else:
        if F.degree == 1:
            raise ConfigError("F = Q has unit rank 0; set unit_override to a rational integer u > 2")
        prob = UnitSearchProblem(F, _fundamental_units(ff), cfg.threshold)
        su = find_special_unit(prob)
        u = su.u
        unit_info = {"source": "search", **su.to_json()}

    L = build_extension(F, u)
    rank = unit_rank_report(L)
    gens, dec = parse_group(load_json(cfg.group_path), F)
    if len(gens) and next(iter(gens.values())).n != form.size:
        raise ConfigError(f"generators are not {form.size}x{form.size}; alpha list length must be n")
    unit = L.s ** cfg.unit_power * cfg.unit_sign
    inst = BendingInstance(form, gens, dec, L, unit)
    rep = thinness_report(inst, word_cap=cfg.word_cap, prime=cfg.prime,
                          proximal_search=cfg.proximal_search)
    bent = bend(inst)

    inputs = {"field": _input_record(cfg.field_path, base), "group": _input_record(cfg.group_path, base)}
    if cfg.source:
        inputs["config"] = _input_record(cfg.source, base)
    return {
        "bendlab_version": __version__,
        "inputs": inputs,
        "parameters": {
            "alphas": [a.to_json() for a in form.alphas],
            "threshold": str(cfg.threshold),
            "unit_override": cfg.unit_override,
            "unit_power": cfg.unit_power,
            "unit_sign": cfg.unit_sign,
            "word_cap": cfg.word_cap,
            "prime": cfg.prime,
            "proximal_search": cfg.proximal_search,
        },
        "special_unit": unit_info,
        "extension": {"trace": L.u.to_json(), "unit_rank": rank.to_json()},
        "bending_unit": unit.to_json(),
        "bent_generators": {g: matrix_json(A) for g, A in sorted(bent.items())},
        "checks": rep["checks"],
        "verdicts": _verdicts(rep["checks"]),
        "hard_checks_pass": rep["hard_checks_pass"],
        "summary": rep["summary"],
        "not_machine_checked": rep["not_machine_checked"],
        "notes": notes,
    }


def run_pipeline(cfg, report_path=None) -> int:
    """Build the report, write it atomically, and return the exit code."""
    report = build_pipeline_report(cfg)
    out = report_path or cfg.report_path
    if out:
        write_atomic(out, dumps(report))
    else:
        sys.stdout.write(dumps(report))
    return EXIT_OK if report["hard_checks_pass"] else EXIT_FAIL


def cmd_pipeline(args) -> int:
    return run_pipeline(load_config(args.config), args.report)


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return run_selftest(args.filter, Path(args.data_dir) if args.data_dir else None)


# -- entry point --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bendlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"bendlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    units = sub.add_parser("units", help="special units and unit ranks").add_subparsers(dest="action", required=True)
    q = units.add_parser("find", help="find a special unit above a threshold")
    q.add_argument("--field", required=True)
    q.add_argument("--threshold", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_units_find)
    q = units.add_parser("rank", help="unit rank of L = F(s) by place counting")
    q.add_argument("--field", required=True)
    q.add_argument("--trace", required=True, help='JSON element of F, e.g. "3" or ["1", "1"]')
    q.add_argument("--out")
    q.set_defaults(func=cmd_units_rank)

    forms = sub.add_parser("forms", help="isometry group membership").add_subparsers(dest="action", required=True)
    q = forms.add_parser("check")
    q.add_argument("--form", required=True)
    q.add_argument("--matrix", required=True)
    q.add_argument("--mode", choices=["so", "su"], default="so")
    q.add_argument("--out")
    q.set_defaults(func=cmd_forms_check)

    bendp = sub.add_parser("bend", help="bend and verify representations").add_subparsers(dest="action", required=True)
    q = bendp.add_parser("run")
    q.add_argument("--instance", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_bend_run)
    q = bendp.add_parser("verify")
    q.add_argument("--rep", required=True)
    q.add_argument("--form", required=True)
    q.add_argument("--relators", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_bend_verify)

    pg = sub.add_parser("projgeom", help="Hilbert metric and cusp geometry").add_subparsers(dest="action", required=True)
    q = pg.add_parser("dist")
    q.add_argument("--domain", choices=["klein", "omega0", "omega1", "segment"], required=True)
    q.add_argument("--points", required=True)
    q.add_argument("--precision", type=int, default=53)
    q.add_argument("--emit-svg")
    q.add_argument("--out")
    q.set_defaults(func=cmd_projgeom_dist)
    q = pg.add_parser("orbit")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--point", required=True, help="comma separated rationals")
    q.add_argument("--emit-svg")
    q.add_argument("--cusp-type", type=int, choices=[0, 1], default=1)
    q.add_argument("--out")
    q.set_defaults(func=cmd_projgeom_orbit)

    cert = sub.add_parser("certify", help="thinness certificates").add_subparsers(dest="action", required=True)
    q = cert.add_parser("run")
    q.add_argument("--instance", required=True)
    q.add_argument("--prime", type=int)
    q.add_argument("--word-cap", type=int, default=6)
    q.add_argument("--report", required=True)
    q.set_defaults(func=cmd_certify_run)

    q = sub.add_parser("pipeline", help="run the full pipeline from a config file")
    q.add_argument("--config", required=True)
    q.add_argument("--report")
    q.set_defaults(func=cmd_pipeline)

    q = sub.add_parser("selftest", help="run the acceptance checks and golden comparisons")
    q.add_argument("--filter")
    q.add_argument("--data-dir", help="directory holding the golden files (default: bundled)")
    q.set_defaults(func=cmd_selftest)
    return p


def _fail(code: int, exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code},
                                sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        return _fail(EXIT_CONFIG, exc)
    except HARD_FAILURES as exc:
        return _fail(EXIT_FAIL, exc)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        # malformed input that slipped past the parsers
        return _fail(EXIT_CONFIG, exc)
    except BendlabError as exc:
        return _fail(EXIT_FAIL, exc)


if __name__ == "__main__":
    sys.exit(main())
