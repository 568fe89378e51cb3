"""Reading and writing fields, forms, matrices, instances and pipeline configs.

Rationals are written as strings ``"p/q"`` (or ``"p"``).  A base-field
element is a list of power-basis coefficients; an element a + b s of L is a
pair of such lists.  JSON output is always key-sorted so that identical
inputs give byte-identical reports.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .bending import BendingInstance, Decomposition
from .errors import ConfigError
from .forms import Form
from .matrix import Matrix
from .numfield import AlgebraicNumber, ExtElement, NumberField, QuadExtension


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_atomic(path, text: str):
    """Write via a temporary file in the same directory and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


# -- scalars and elements -------------------------------------------------------

def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise ConfigError("boolean where a rational was expected")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ConfigError(f"not a rational: {x!r}") from exc
    raise ConfigError(f"not a rational: {x!r}")


def parse_base(F: NumberField, x) -> AlgebraicNumber:
    if isinstance(x, list):
        return F.element([parse_rational(c) for c in x])
    return F.element(parse_rational(x))


def parse_ext(L: QuadExtension, x) -> ExtElement:
    """``[[a...], [b...]]`` is a + b s; anything else is read in F."""
    if isinstance(x, list) and len(x) == 2 and all(isinstance(c, list) for c in x):
        return L.element(parse_base(L.base, x[0]), parse_base(L.base, x[1]))
    return L.element(parse_base(L.base, x))


def parse_entry(x, F: NumberField, L: QuadExtension | None):
    if isinstance(x, list) and len(x) == 2 and all(isinstance(c, list) for c in x):
        if L is None:
            raise ConfigError("matrix entry has an s-component but no extension is defined")
        return parse_ext(L, x)
    if isinstance(x, list):
        return parse_base(F, x)
    return parse_rational(x)


def parse_matrix(rows, F: NumberField, L: QuadExtension | None = None) -> Matrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ConfigError("a matrix is a nonempty list of rows")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ConfigError("matrix must be square")
    return Matrix([[parse_entry(x, F, L) for x in r] for r in rows])


def entry_json(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


def matrix_json(A: Matrix):
    return [[entry_json(x) for x in row] for row in A.rows]


# -- fields, forms, extensions ---------------------------------------------------

@dataclass
class FieldFile:
    field: NumberField
    units: list[AlgebraicNumber]


def parse_field(data) -> FieldFile:
    if not isinstance(data, dict) or "poly" not in data:
        raise ConfigError("field description needs a 'poly' list")
    try:
        F = NumberField([int(c) for c in data["poly"]], data.get("identity"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad field description: {exc}") from exc
    units = [parse_base(F, u) for u in data.get("units", [])]
    return FieldFile(F, units)


def field_json(F: NumberField, units=()) -> dict:
    out = {"poly": list(F.poly), "identity": F.identity_index}
    if units:
        out["units"] = [u.to_json() for u in units]
    return out


def parse_form(data, F: NumberField) -> Form:
    alphas = data.get("alphas") if isinstance(data, dict) else data
    if not isinstance(alphas, list) or not alphas:
        raise ConfigError("form needs a nonempty 'alphas' list")
    return Form(F, [parse_base(F, a) for a in alphas])


def parse_extension(data, F: NumberField) -> QuadExtension | None:
    if data is None:
        return None
    trace = data.get("trace") if isinstance(data, dict) else data
    return QuadExtension(F, parse_base(F, trace))


# -- instances -------------------------------------------------------------------

def parse_decomposition(data) -> Decomposition:
    if not isinstance(data, dict):
        raise ConfigError("decomposition must be an object")
    try:
        return Decomposition(
            kind=data["kind"],
            generators=list(data["generators"]),
            edge_words=list(data.get("edge_words", [])),
            relators=list(data.get("relators", [])),
            sides={k: int(v) for k, v in data.get("sides", {}).items()},
            stable=data.get("stable"),
        )
    except KeyError as exc:
        raise ConfigError(f"decomposition is missing {exc}") from exc


def parse_instance(data) -> BendingInstance:
    """Instance file: field, alphas, trace, unit, generators, decomposition."""
    for key in ("field", "alphas", "trace", "generators", "decomposition"):
        if key not in data:
            raise ConfigError(f"instance is missing '{key}'")
    ff = parse_field(data["field"])
    F = ff.field
    form = parse_form({"alphas": data["alphas"]}, F)
    L = parse_extension({"trace": data["trace"]}, F)
    unit = parse_ext(L, data.get("unit", [["0"], ["1"]]))
    gens = {name: parse_matrix(rows, F, L) for name, rows in data["generators"].items()}
    return BendingInstance(form, gens, parse_decomposition(data["decomposition"]), L, unit)


def parse_group(data, F: NumberField, L: QuadExtension | None = None) -> tuple[dict, Decomposition]:
    """Group file: generator matrices and the decomposition."""
    for key in ("generators", "decomposition"):
        if key not in data:
            raise ConfigError(f"group file is missing '{key}'")
    gens = {name: parse_matrix(rows, F, L) for name, rows in data["generators"].items()}
    return gens, parse_decomposition(data["decomposition"])


def instance_json(inst: BendingInstance) -> dict:
    return {
        "field": field_json(inst.form.field),
        "alphas": [a.to_json() for a in inst.form.alphas],
        "trace": inst.ext.u.to_json(),
        "unit": inst.unit.to_json(),
        "generators": {g: matrix_json(A) for g, A in sorted(inst.base_rep.items())},
        "decomposition": inst.decomposition.to_json(),
    }


# -- pipeline configuration -------------------------------------------------------

@dataclass
class PipelineConfig:
    """INI config, paths relative to the config file.

    [pipeline]  field, alphas (JSON list), group, threshold, unit_override,
                unit_power, unit_sign
    [certify]   word_cap, prime, proximal_search
    [output]    report
    """

    field_path: Path
    alphas: list
    group_path: Path
    threshold: Fraction = Fraction(10)
    unit_override: object = None
    unit_power: int = 1
    unit_sign: int = 1
    word_cap: int = 6
    prime: int | None = None
    proximal_search: int = 4
    report_path: Path | None = None
    source: Path | None = None
    extra: dict = field(default_factory=dict)


def load_config(path) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if "pipeline" not in cp:
        raise ConfigError("config needs a [pipeline] section")
    base = path.parent
    sec = cp["pipeline"]

    def need(key):
        if key not in sec:
            raise ConfigError(f"[pipeline] is missing '{key}'")
        return sec[key]

    def rel(p):
        q = Path(p)
        return q if q.is_absolute() else base / q

    try:
        alphas = json.loads(need("alphas"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"alphas is not valid JSON: {exc}") from exc
    if not isinstance(alphas, list):
        raise ConfigError("alphas must be a JSON list")
    override = sec.get("unit_override")
    if override is not None:
        try:
            override = json.loads(override)
        except json.JSONDecodeError:
            override = override.strip()
    cert = cp["certify"] if "certify" in cp else {}
    out = cp["output"] if "output" in cp else {}
    try:
        cfg = PipelineConfig(
            field_path=rel(need("field")),
            alphas=alphas,
            group_path=rel(need("group")),
            threshold=parse_rational(sec.get("threshold", "10")),
            unit_override=override,
            unit_power=int(sec.get("unit_power", "1")),
            unit_sign=int(sec.get("unit_sign", "1")),
            word_cap=int(cert.get("word_cap", "6")),
            prime=int(cert["prime"]) if cert.get("prime") else None,
            proximal_search=int(cert.get("proximal_search", "4")),
            report_path=rel(out["report"]) if out.get("report") else None,
            source=path,
        )
    except ValueError as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    if cfg.unit_sign not in (1, -1):
        raise ConfigError("unit_sign must be 1 or -1")
    for p in (cfg.field_path, cfg.group_path):
        if not p.exists():
            raise ConfigError(f"referenced file not found: {p}")
    return cfg
