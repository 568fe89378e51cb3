"""Built-in acceptance checks and golden-file comparisons.

``run_selftest`` prints one line per check and returns 0 when all pass.
Each check carries a time limit; exceeding it counts as a failure.
"""

from __future__ import annotations

import json
import math
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .bending import bend
from .certify import (
    burnside_irreducibility,
    congruence_image_order,
    form_in_span,
    invariant_form_space,
    proximality,
)
from .desk import DATA, desk_instance
from .errors import RankZeroField
from .forms import Form, bending_matrix, centralizes_block, random_alpha, su_membership
from .io import dumps, load_config
from .matrix import Matrix
from .numfield import NumberField
from .projgeom import (
    CuspModel,
    KleinBall,
    ProjPoint,
    Segment,
    apply,
    cusp_translation,
    hilbert_distance,
    horosphere_check,
    orbit_openness,
)
from .units import UnitSearchProblem, build_extension, find_special_unit, unit_rank_report

GOLDEN = "golden"

# a hyperbolic element of SO(diag(1, 1, -1); Z)
KLEIN_ISOMETRY = [[2, 1, 2], [1, 2, 2], [2, 2, 3]]
ROTATION = [[Fraction(3, 5), Fraction(-4, 5), 0], [Fraction(4, 5), Fraction(3, 5), 0], [0, 0, 1]]


class CheckFailed(Exception):
    pass


def _require(cond, msg):
    if not cond:
        raise CheckFailed(msg)


@dataclass
class Check:
    name: str
    tags: tuple
    limit: float
    func: Callable[[Path], str]

    def matches(self, pattern: str | None) -> bool:
        if not pattern:
            return True
        pattern = pattern.lower()
        return pattern in self.name or any(pattern in t for t in self.tags)


def _sqrt2():
    return NumberField([-2, 0, 1])


def _sqrt2_special(threshold=10):
    F = _sqrt2()
    return find_special_unit(UnitSearchProblem(F, [F.element([1, 1])], threshold))


# -- acceptance checks --------------------------------------------------------------

def check_bisunitary(_data) -> str:
    rng = random.Random(20240611)
    fields = [(NumberField.rationals(), 3)]
    F2 = _sqrt2()
    fields.append((F2, _sqrt2_special().u))
    count = 0
    for F, trace in fields:
        L = build_extension(F, trace)
        s = L.s
        for n in (2, 3, 4):
            for _ in range(5):
                J = Form(F, [random_alpha(F, rng) for _ in range(n)])
                for u in (s, s * s, -s):
                    _require(su_membership(bending_matrix(u, n), J), f"B_u not in SU for n={n}, u={u!r}")
                    count += 1
    return f"{count} exact memberships"


def check_special_unit(_data) -> str:
    su = _sqrt2_special(10)
    top, other = su.embedding_evidence[0], su.embedding_evidence[1]
    _require(top.lo > 10, "identity embedding not certified above 10")
    _require(other.lo > 0 and other.hi < 1, "other embedding not certified in (0, 1)")
    _require(top.width <= Fraction(1, 1 << 40) and other.width <= Fraction(1, 1 << 40),
             "evidence wider than 2^-40")
    try:
        find_special_unit(UnitSearchProblem(NumberField.rationals(), [], 10))
    except RankZeroField:
        pass
    else:
        raise CheckFailed("no RankZeroField over Q")
    return f"u = {su.u!r}, witness {su.power_witness}"


def check_desk(_data) -> str:
    inst = desk_instance()
    rep = bend(inst)
    for g, A in rep.items():
        _require(su_membership(A, inst.form), f"bent image of {g} not in SU")
    B = bending_matrix(inst.unit, inst.form.n)
    a = rep["a"]
    _require(centralizes_block(B, a), "B_s does not commute with a")
    return "a, b in SU(J, O_L); B_s centralizes a"


def check_hilbert(_data) -> str:
    rng = random.Random(7)
    d = hilbert_distance(Segment(-1, 1), Fraction(0), Fraction(1, 2))
    _require(abs(float(d.mid) - 0.5 * math.log(3)) < 1e-12, "segment distance is not log(3)/2")
    K = KleinBall((1, 1, -1))
    g = Matrix(KLEIN_ISOMETRY)

    def rand_point():
        while True:
            x, y = Fraction(rng.randint(-90, 90), 100), Fraction(rng.randint(-90, 90), 100)
            if x * x + y * y < Fraction(81, 100):
                return ProjPoint([x, y, 1])

    worst = 0.0
    for _ in range(100):
        p, q = rand_point(), rand_point()
        if p == q:
            continue
        d1 = hilbert_distance(K, p, q)
        d2 = hilbert_distance(K, apply(g, p), apply(g, q))
        worst = max(worst, abs(float(d1.mid) - float(d2.mid)))
    _require(worst < 1e-10, f"isometry defect {worst}")
    for _ in range(200):
        p, q, r = rand_point(), rand_point(), rand_point()
        dpq = float(hilbert_distance(K, p, q).mid) if p != q else 0.0
        dqp = float(hilbert_distance(K, q, p).mid) if p != q else 0.0
        dqr = float(hilbert_distance(K, q, r).mid) if q != r else 0.0
        dpr = float(hilbert_distance(K, p, r).mid) if p != r else 0.0
        _require(abs(dpq - dqp) < 1e-12, "asymmetric distance")
        _require(dpr <= dpq + dqr + 1e-12, "triangle inequality fails")
    return f"max isometry defect {worst:.2e}"


def check_cusps(_data) -> str:
    rng = random.Random(11)
    for n in (3, 4):
        m0 = CuspModel(0, n)
        for _ in range(100):
            v = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n - 1)]
            x_mid = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n - 1)]
            c = Fraction(rng.randint(1, 20), rng.randint(1, 5))
            x = [c + sum((t * t for t in x_mid), Fraction(0)) / 2] + x_mid + [Fraction(1)]
            g = cusp_translation(m0, v).matrix
            _require(horosphere_check(m0, c, ProjPoint(x), g), "P_0 moved a horosphere")
    m1 = CuspModel(1, 3)
    for _ in range(50):
        v = [Fraction(rng.randint(-9, 9), rng.randint(1, 5))]
        u = Fraction(rng.randint(1, 9), rng.randint(1, 5)) * rng.choice((1, -1))
        x3 = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        c = Fraction(rng.randint(1, 20), rng.randint(1, 5))
        x = ProjPoint([c + x3 * x3 / 2, 1, x3, 1])
        _require(horosphere_check(m1, c, x, cusp_translation(m1, v).matrix), "parabolic moved a leaf")
        _require(not horosphere_check(m1, c, x, cusp_translation(m1, v, u).matrix),
                 "non-parabolic element kept a leaf")
    return "P_0 exact on 200 points; type 1 parabolic/non-parabolic on 50 points"


def sampled_orbit_rank(x, n: int, samples: int = 24, seed: int = 0, eps: float = 1e-6) -> int:
    """Numerical rank of the orbit map at x from random one-parameter subgroups.

    Independent of the tangent-basis computation: it builds random group
    elements near the identity from the explicit parametrization and measures
    how many chart directions their images of x span.
    """
    rng = np.random.default_rng(seed)
    x = np.array([float(c) for c in x])
    m = n + 1

    def element(lam, w, v):
        g = np.eye(m)
        g[1, 1] = lam
        g[0, 2:n] = v
        g[2:n, n] = v
        g[0, n] = w
        return g

    def chart(y):
        k = int(np.argmax(np.abs(x)))
        return np.delete(y / y[k], k)

    base = chart(x)
    diffs = []
    for _ in range(samples):
        dv = rng.standard_normal(n - 2)
        dw, du = rng.standard_normal(2)
        g = element(math.exp(eps * du), eps * dw, eps * dv)
        diffs.append((chart(g @ x) - base) / eps)
    sv = np.linalg.svd(np.array(diffs), compute_uv=False)
    return int(np.sum(sv > 1e-4 * max(1.0, sv[0])))


def check_orbits(_data) -> str:
    rng = random.Random(3)
    vals = [Fraction(k, 2) for k in range(-2, 3)]
    seen = set()
    while len(seen) < 200:
        p = tuple(rng.choice(vals) for _ in range(4))
        if any(p):
            seen.add(p)
    pts = sorted(seen)
    for p in pts:
        r = orbit_openness(list(p), 3)
        expected = p[1] != 0 and p[3] != 0
        _require(r.open == expected, f"openness wrong at {p}")
    spots = pts[:: max(1, len(pts) // 10)][:10]
    for p in spots:
        _require(orbit_openness(list(p), 3).rank == sampled_orbit_rank(p, 3), f"rank mismatch at {p}")
    return f"{len(pts)} grid points, {len(spots)} sampler spot checks"


def check_certify(_data) -> str:
    a = Matrix([[1, 0, 0], [0, 2, 1], [0, 3, 2]])
    c = proximality(a)
    top = c.evidence["top_modulus"]
    lo, hi = Fraction(top[0]), Fraction(top[1])
    _require(c.passed and lo * 1 > 0, "block element not proximal")
    # 2 + sqrt(3) lies in [lo, hi]  <=>  lo - 2 <= sqrt 3 <= hi - 2
    _require((lo - 2) ** 2 <= 3 <= (hi - 2) ** 2 and lo >= 2, "top modulus is not 2 + sqrt 3")
    _require(proximality(Matrix.identity(3)).verdict == "fail", "identity proximal")
    _require(proximality(Matrix(ROTATION)).verdict == "fail", "rotation proximal")
    bent = bend(desk_instance())
    gens = [bent["a"], bent["b"]]
    span = burnside_irreducibility(gens, 6).evidence["span_dimension"]
    _require(span == 9, f"bent desk span {span}")
    span_a = burnside_irreducibility([a], 6).evidence["span_dimension"]
    _require(span_a == 3, f"single generator span {span_a}")
    unbent = desk_instance(power=0)
    ug = [unbent.base_rep["a"], unbent.base_rep["b"]]
    sym_u = invariant_form_space(ug, "symmetric")
    _require(form_in_span(unbent.form.matrix(), sym_u, ug), "J not found for the unbent pair")
    sym_b = invariant_form_space(gens, "symmetric")
    _require(sym_b.evidence["dimension"] == 0,
             f"finding: bent pair preserves {sym_b.evidence['dimension']} symmetric forms")
    return "proximality, span 9/3, invariant forms 1/0"


def _elementary(i, j, m=3):
    rows = [[int(r == c) for c in range(m)] for r in range(m)]
    rows[i][j] = 1
    return Matrix(rows)


def check_congruence(_data) -> str:
    gens = [_elementary(0, 1), _elementary(1, 2), _elementary(2, 0)]
    c1 = congruence_image_order(gens, 2)
    c2 = congruence_image_order(gens, 2)
    _require(c1.evidence["order"] == 168, f"order {c1.evidence['order']}")
    _require(c1.evidence["lagrange_divides"], "Lagrange divisibility fails")
    _require(dumps(c1.to_json()) == dumps(c2.to_json()), "nondeterministic BFS")
    diag = congruence_image_order([Matrix([[2, 0, 0], [0, 4, 0], [0, 0, 4]])], 7)
    _require(diag.evidence["lagrange_divides"] and diag.verdict == "fail", "diagonal image check")
    return "SL(3, 2) has order 168"


def check_unit_rank(_data) -> str:
    out = []
    for F, trace in ((NumberField.rationals(), 3), (_sqrt2(), _sqrt2_special().u)):
        L = build_extension(F, trace)
        rep = unit_rank_report(L)
        d = F.degree
        _require(rep.real_places == 2 and rep.complex_places == d - 1, "place count")
        _require(2 + (2 * d - 2) // 2 - 1 == rep.rank_L == d, "rank identity")
        for m in rep.salem_moduli:
            _require(m.lo <= 1 <= m.hi and m.width <= Fraction(1, 1 << 40), "complex conjugate off the circle")
        out.append(f"[F:Q]={d}: rank {rep.rank_L}")
    return ", ".join(out)


# -- golden files ----------------------------------------------------------------------

def golden_desk_report() -> str:
    from .cli import build_pipeline_report

    return dumps(build_pipeline_report(load_config(DATA / "desk.ini")))


def golden_sqrt2_unit() -> str:
    return dumps(_sqrt2_special(10).to_json())


def golden_sl3_f2() -> str:
    gens = [_elementary(0, 1), _elementary(1, 2), _elementary(2, 0)]
    return dumps(congruence_image_order(gens, 2).to_json())


GOLDEN_FILES = {
    "desk_report.json": golden_desk_report,
    "sqrt2_special_unit.json": golden_sqrt2_unit,
    "sl3_f2.json": golden_sl3_f2,
}


def _golden_check(fname: str, produce):
    def run(data: Path) -> str:
        path = data / GOLDEN / fname
        try:
            expected = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CheckFailed(f"golden file {path} unreadable: {exc}")
        if json.loads(produce()) != expected:
            raise CheckFailed(f"golden file {path} does not match the computed output")
        return str(path.name)

    return run


def regenerate_golden(data: Path = DATA):
    """Rewrite the golden files from the current code (maintenance only)."""
    (data / GOLDEN).mkdir(exist_ok=True)
    for fname, produce in GOLDEN_FILES.items():
        (data / GOLDEN / fname).write_text(produce())


CHECKS = [
    Check("bisunitary", ("forms", "bending"), 1.0, check_bisunitary),
    Check("special_unit", ("units",), 1.0, check_special_unit),
    Check("desk_su_containment", ("bending", "desk"), 1.0, check_desk),
    Check("hilbert_metric", ("projgeom", "metric"), 5.0, check_hilbert),
    Check("cusp_models", ("projgeom", "cusps"), 2.0, check_cusps),
    Check("orbit_openness", ("projgeom", "orbits"), 2.0, check_orbits),
    Check("certification", ("certify",), 10.0, check_certify),
    Check("congruence", ("certify", "bfs"), 5.0, check_congruence),
    Check("unit_rank", ("units",), 1.0, check_unit_rank),
] + [
    Check(f"golden:{f}", ("golden",), 30.0, _golden_check(f, p)) for f, p in GOLDEN_FILES.items()
]


def run_selftest(pattern: str | None = None, data: Path | None = None, out=None) -> int:
    out = out or sys.stdout
    data = data or DATA
    selected = [c for c in CHECKS if c.matches(pattern)]
    if not selected:
        out.write(f"no checks match {pattern!r}\n")
        return 1
    failures = 0
    for c in selected:
        t0 = time.perf_counter()
        try:
            detail = c.func(data)
            ok = True
        except CheckFailed as exc:
            detail, ok = str(exc), False
        dt = time.perf_counter() - t0
        if ok and dt > c.limit:
            ok, detail = False, f"took {dt:.2f} s, limit {c.limit} s"
        failures += not ok
        out.write(f"{'PASS' if ok else 'FAIL'}  {c.name:<32} {dt:7.3f}s  {detail}\n")
    out.write(f"{len(selected) - failures}/{len(selected)} checks passed\n")
    return 0 if failures == 0 else 1
