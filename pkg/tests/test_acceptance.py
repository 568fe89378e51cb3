"""Acceptance criteria, one test and one PASS/FAIL line each.

Tolerances and time limits are pinned here; every value is recomputed rather
than read from the selftest module.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np

from bendlab.bending import bend
from bendlab.certify import burnside_irreducibility, congruence_image_order, invariant_form_space, proximality
from bendlab.desk import desk_instance
from bendlab.errors import RankZeroField
from bendlab.forms import Form, bending_matrix, centralizes_block, random_alpha, su_membership
from bendlab.io import dumps
from bendlab.matrix import Matrix
from bendlab.numfield import NumberField
from bendlab.projgeom import (
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
from bendlab.units import UnitSearchProblem, build_extension, find_special_unit, unit_rank_report

TWO_M40 = Fraction(1, 2**40)


def sqrt2_field():
    return NumberField([-2, 0, 1])


def sqrt2_trace():
    F = sqrt2_field()
    return F, find_special_unit(UnitSearchProblem(F, [F.element([1, 1])], 10)).u


def finish(report_criterion, number, failures, dt, limit, detail):
    ok = not failures and dt < limit
    report_criterion(number, ok, f"{detail}; {dt:.3f} s (limit {limit} s)"
                     + ("" if not failures else f"; {failures[0]}"))
    assert not failures, failures
    assert dt < limit, f"took {dt:.3f} s"


def test_criterion_1_bisunitary(report_criterion):
    t0 = time.perf_counter()
    failures, count = [], 0
    rng = random.Random(1)
    F2, u2 = sqrt2_trace()
    for F, trace in ((NumberField.rationals(), 3), (F2, u2)):
        s = build_extension(F, trace).s
        for n in (2, 3, 4):
            for _ in range(5):
                J = Form(F, [random_alpha(F, rng) for _ in range(n)])
                for u in (s, s * s, -s):
                    count += 1
                    if not su_membership(bending_matrix(u, n), J):
                        failures.append(f"n={n}, u={u!r}")
    finish(report_criterion, 1, failures, time.perf_counter() - t0, 1.0,
           f"{count - len(failures)}/{count} bending matrices in SU exactly")


def test_criterion_2_special_unit(report_criterion):
    t0 = time.perf_counter()
    F = sqrt2_field()
    su = find_special_unit(UnitSearchProblem(F, [F.element([1, 1])], 10))
    failures = []
    # certify the embeddings independently of the search's own evidence
    top, other = su.u.embed(0, 40), su.u.embed(1, 40)
    if not top.lo > 10:
        failures.append("identity embedding not above 10")
    if not (other.lo > 0 and other.hi < 1):
        failures.append("other embedding not in (0, 1)")
    if top.width > TWO_M40 or other.width > TWO_M40:
        failures.append("enclosures wider than 2^-40")
    if su.u.norm() not in (1, -1):
        failures.append("not a unit")
    try:
        find_special_unit(UnitSearchProblem(NumberField.rationals(), [], 10))
        failures.append("no RankZeroField over Q")
    except RankZeroField:
        pass
    finish(report_criterion, 2, failures, time.perf_counter() - t0, 1.0,
           f"u = {su.u!r}, sigma_0 in [{float(top.lo):.6f}, ...], sigma_1 in (0, 1), width <= 2^-40")


def test_criterion_3_desk_instance(report_criterion):
    t0 = time.perf_counter()
    inst = desk_instance()
    rep = bend(inst)
    failures = [g for g, A in rep.items() if not su_membership(A, inst.form)]
    B = bending_matrix(inst.ext.s, 2)
    a = rep["a"]
    if not (B * a == a * B and centralizes_block(B, a)):
        failures.append("B_s does not centralize the edge generator")
    finish(report_criterion, 3, failures, time.perf_counter() - t0, 1.0,
           "bent a, b in SU(J) exactly; B_s a = a B_s")


def test_criterion_4_hilbert_metric(report_criterion):
    t0 = time.perf_counter()
    failures = []
    d = hilbert_distance(Segment(-1, 1), 0, Fraction(1, 2))
    if abs(float(d.mid) - 0.5 * math.log(3)) >= 1e-12:
        failures.append("segment distance")
    rng = random.Random(4)

    def point():
        while True:
            x, y = Fraction(rng.randint(-95, 95), 100), Fraction(rng.randint(-95, 95), 100)
            if x * x + y * y < 1:
                return ProjPoint([x, y, 1])

    K = KleinBall((1, 1, -1))
    g = Matrix([[2, 1, 2], [1, 2, 2], [2, 2, 3]])
    worst = 0.0
    for _ in range(100):
        p, q = point(), point()
        if p == q:
            continue
        diff = abs(float(hilbert_distance(K, p, q).mid) - float(hilbert_distance(K, apply(g, p), apply(g, q)).mid))
        worst = max(worst, diff)
    if worst >= 1e-10:
        failures.append(f"isometry defect {worst}")

    def dist(p, q):
        return 0.0 if p == q else float(hilbert_distance(K, p, q).mid)

    for _ in range(200):
        p, q, r = point(), point(), point()
        if abs(dist(p, q) - dist(q, p)) > 1e-12:
            failures.append("asymmetry")
        if dist(p, r) > dist(p, q) + dist(q, r) + 1e-12:
            failures.append("triangle inequality")
    finish(report_criterion, 4, failures, time.perf_counter() - t0, 5.0,
           f"segment within 1e-12; isometry defect {worst:.1e} < 1e-10; 200 triples")


def test_criterion_5_cusps(report_criterion):
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(5)

    def r():
        return Fraction(rng.randint(-12, 12), rng.randint(1, 6))

    for n in (3, 4):
        m = CuspModel(0, n)
        for _ in range(100):
            mid = [r() for _ in range(n - 1)]
            c = Fraction(rng.randint(1, 30), rng.randint(1, 6))
            x = ProjPoint([c + sum(t * t for t in mid) / 2] + mid + [1])
            if not horosphere_check(m, c, x, cusp_translation(m, [r() for _ in range(n - 1)]).matrix):
                failures.append(f"P_0 moved a point for n={n}")
    m1 = CuspModel(1, 3)
    for _ in range(50):
        x3, c, v = r(), Fraction(rng.randint(1, 30), rng.randint(1, 6)), [r()]
        x = ProjPoint([c + x3 * x3 / 2, 1, x3, 1])
        if not horosphere_check(m1, c, x, cusp_translation(m1, v).matrix):
            failures.append("parabolic element moved a leaf")
        u = r() or Fraction(1)
        if horosphere_check(m1, c, x, cusp_translation(m1, v, u).matrix):
            failures.append("non-parabolic element kept a leaf")
    finish(report_criterion, 5, failures, time.perf_counter() - t0, 2.0,
           "P_0 exact on 200 points (n = 3, 4); type 1 parabolic kept / non-parabolic left 50 leaves")


def dense_orbit_rank(x, n, eps=1e-6):
    """Central-difference Jacobian of (lam, w, v) -> [g x] in the chart of the largest coordinate."""
    x = np.array([float(c) for c in x])
    k = int(np.argmax(np.abs(x)))

    def image(params):
        lam, w, *v = params
        g = np.eye(n + 1)
        g[1, 1] = np.exp(lam)
        g[0, n] = w
        for i, c in enumerate(v):
            g[0, 2 + i] = c
            g[2 + i, n] = c
        y = g @ x
        return np.delete(y / y[k], k)

    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = eps
        cols.append((image(e) - image(-e)) / (2 * eps))
    return int(np.linalg.matrix_rank(np.array(cols).T, tol=1e-6))


def test_criterion_6_orbit_openness(report_criterion):
    t0 = time.perf_counter()
    failures = []
    vals = [Fraction(k, 2) for k in range(-2, 3)]
    points = [tuple(vals[i] for i in idx) for idx in np.ndindex(5, 5, 5, 5)]
    grid = random.Random(6).sample([p for p in points if any(p)], 200)
    for p in grid:
        got = orbit_openness(list(p), 3)
        if got.open != (p[1] != 0 and p[3] != 0):
            failures.append(f"openness at {p}")
    spots = grid[::20]
    for p in spots:
        if orbit_openness(list(p), 3).rank != dense_orbit_rank(p, 3):
            failures.append(f"rank at {p}")
    finish(report_criterion, 6, failures, time.perf_counter() - t0, 2.0,
           f"{len(grid)} grid points; {len(spots)} ranks match a finite-difference sampler")


def test_criterion_7_certification(report_criterion):
    t0 = time.perf_counter()
    failures = []
    a = Matrix([[1, 0, 0], [0, 2, 1], [0, 3, 2]])
    c = proximality(a)
    lo, hi = (Fraction(x) for x in c.evidence["top_modulus"])
    second = Fraction(c.evidence["sym2_second_root_upper"])
    if not c.passed:
        failures.append("block element not proximal")
    if not (lo >= 2 and (lo - 2) ** 2 <= 3 <= (hi - 2) ** 2):
        failures.append("top modulus is not 2 + sqrt 3")
    if not second < lo * lo:
        failures.append("separation not certified")
    rotation = Matrix([[Fraction(3, 5), Fraction(-4, 5), 0], [Fraction(4, 5), Fraction(3, 5), 0], [0, 0, 1]])
    for name, A in (("identity", Matrix.identity(3)), ("rotation", rotation)):
        if proximality(A).verdict != "fail":
            failures.append(f"{name} reported proximal")
    rep = bend(desk_instance())
    bent = [rep["a"], rep["b"]]
    span = burnside_irreducibility(bent, 6).evidence["span_dimension"]
    if span != 9:
        failures.append(f"bent span {span}")
    span_a = burnside_irreducibility([a], 6).evidence["span_dimension"]
    if span_a != 3:
        failures.append(f"single generator span {span_a}")
    unbent = desk_instance(power=0)
    ug = [unbent.base_rep["a"], unbent.base_rep["b"]]
    sym_u = invariant_form_space(ug, "symmetric")
    J = unbent.form.matrix()
    if sym_u.evidence["dimension"] < 1 or not all(A.transpose() * J * A == J for A in ug):
        failures.append("J not preserved by the unbent pair")
    dim_b = invariant_form_space(bent, "symmetric").evidence["dimension"]
    if dim_b != 0:
        failures.append(f"finding: bent pair preserves a {dim_b}-dimensional space of symmetric forms")
    finish(report_criterion, 7, failures, time.perf_counter() - t0, 10.0,
           f"2+sqrt3 in [{float(lo):.12f}, {float(hi):.12f}]; spans {span}/{span_a}; "
           f"forms {sym_u.evidence['dimension']}/{dim_b}")


def test_criterion_8_congruence(report_criterion):
    t0 = time.perf_counter()
    failures = []

    def e(i, j):
        rows = [[int(r == c) for c in range(3)] for r in range(3)]
        rows[i][j] = 1
        return Matrix(rows)

    gens = [e(0, 1), e(1, 2), e(2, 0)]
    runs = [congruence_image_order(gens, 2) for _ in range(2)]
    if runs[0].evidence["order"] != 168:
        failures.append(f"order {runs[0].evidence['order']}")
    if dumps(runs[0].to_json()) != dumps(runs[1].to_json()):
        failures.append("runs differ")
    others = [congruence_image_order([Matrix([[1, 1], [0, 1]]), Matrix([[1, 0], [1, 1]])], 5),
              congruence_image_order([Matrix([[2, 0, 0], [0, 4, 0], [0, 0, 4]])], 7)]
    for cert in runs + others:
        amb, order = cert.evidence["ambient_order"], cert.evidence["order"]
        if amb % order or not cert.evidence["lagrange_divides"]:
            failures.append(f"Lagrange fails for order {order}")
    finish(report_criterion, 8, failures, time.perf_counter() - t0, 5.0,
           "SL(3, 2) order 168; Lagrange on all runs; two runs byte-identical")


def test_criterion_9_unit_rank(report_criterion):
    t0 = time.perf_counter()
    failures = []
    F2, u2 = sqrt2_trace()
    parts = []
    for F, trace in ((NumberField.rationals(), 3), (F2, u2)):
        d = F.degree
        rep = unit_rank_report(build_extension(F, trace))
        # Dirichlet: r1 + r2 - 1 with r1 = 2 real places and r2 = (2d - 2)/2 complex pairs
        expected = 2 + (2 * d - 2) // 2 - 1
        if not (rep.real_places == 2 and rep.complex_places == d - 1 and rep.rank_L == expected == d):
            failures.append(f"rank identity at degree {d}")
        for m in rep.salem_moduli:
            if not (m.lo <= 1 <= m.hi and m.width <= TWO_M40):
                failures.append("complex conjugate of s off the unit circle")
        parts.append(f"[F:Q]={d}: rank {rep.rank_L}")
    finish(report_criterion, 9, failures, time.perf_counter() - t0, 1.0,
           ", ".join(parts) + "; |s| = 1 at complex places within 2^-40")
