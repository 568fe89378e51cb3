"""Proximality, algebra span, invariant forms, congruence images and the bundle."""

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from bendlab.bending import bend
from bendlab.certify import (
    PrimeData,
    bfs_group_order,
    burnside_irreducibility,
    congruence_image_order,
    degree_one_primes,
    invariant_form_space,
    proximality,
    sl_order,
    sym2,
    thinness_report,
)
from bendlab.desk import A_ROWS, B_ROWS, desk_instance
from bendlab.errors import BadReduction, BudgetExceeded, EmptyGenerators, Singular
from bendlab.matrix import Matrix

ROTATION = [[Fraction(3, 5), Fraction(-4, 5), 0], [Fraction(4, 5), Fraction(3, 5), 0], [0, 0, 1]]
ints = st.integers(min_value=-4, max_value=4)
square3 = st.lists(st.lists(ints, min_size=3, max_size=3), min_size=3, max_size=3)


def numpy_proximal(rows):
    """None when the floating point answer is too close to call."""
    ev = np.linalg.eigvals(np.array(rows, dtype=float))
    order = np.argsort(-np.abs(ev))
    top, second = ev[order[0]], ev[order[1]]
    gap = abs(top) - abs(second)
    if gap > 1e-6 * abs(top):
        return abs(top.imag) < 1e-9
    if gap < 1e-12 * abs(top):
        return False
    return None


def numpy_span_dim(gens, word_cap):
    mats = [np.array(g, dtype=float) for g in gens]
    letters = mats + [np.linalg.inv(m) for m in mats]
    words, frontier = [np.eye(mats[0].shape[0])], [np.eye(mats[0].shape[0])]
    for _ in range(word_cap):
        frontier = [w @ g for w in frontier for g in letters]
        words.extend(frontier)
    return np.linalg.matrix_rank(np.array([w.ravel() for w in words]), tol=1e-8)


def numpy_form_dim(gens, symmetric=True):
    m = len(gens[0])
    basis = []
    for i in range(m):
        for j in range(i if symmetric else i + 1, m):
            E = np.zeros((m, m))
            E[i, j] = 1
            E[j, i] = 1 if symmetric else -1
            basis.append(E)
    if not basis:
        return 0
    cols = []
    for E in basis:
        cols.append(np.concatenate([(np.array(A, float).T @ E @ np.array(A, float) - E).ravel() for A in gens]))
    M = np.array(cols).T
    return len(basis) - np.linalg.matrix_rank(M, tol=1e-9)


# -- proximality -------------------------------------------------------------------

def test_block_hyperbolic_element():
    c = proximality(Matrix(A_ROWS))
    assert c.passed
    lo, hi = (Fraction(x) for x in c.evidence["top_modulus"])
    assert lo >= 2 and (lo - 2) ** 2 <= 3 <= (hi - 2) ** 2
    assert hi - lo <= Fraction(1, 2**60)


def test_non_proximal_examples():
    assert proximality(Matrix.identity(3)).verdict == "fail"
    assert proximality(Matrix(ROTATION)).verdict == "fail"
    # -1 and 1 share the top modulus
    assert proximality(Matrix([[-1, 0], [0, 1]])).verdict == "fail"
    with pytest.raises(Singular):
        proximality(Matrix([[1, 2], [2, 4]]))


def test_sym2_matches_kronecker_on_symmetric_tensors():
    rng = np.random.default_rng(1)
    A = rng.integers(-3, 4, size=(3, 3))
    S = np.array(sym2(Matrix(A.tolist())).rows, dtype=float)
    # eigenvalues of Sym^2 A are the products lambda_i lambda_j, i <= j
    ev = np.linalg.eigvals(A.astype(float))
    prods = sorted((ev[i] * ev[j] for i in range(3) for j in range(i, 3)), key=lambda z: (z.real, z.imag))
    got = sorted(np.linalg.eigvals(S), key=lambda z: (z.real, z.imag))
    assert np.allclose(prods, got, atol=1e-6)


@given(square3)
def test_proximality_matches_numpy(rows):
    assume(round(np.linalg.det(np.array(rows, float))) != 0)
    expected = numpy_proximal(rows)
    assume(expected is not None)
    assert proximality(Matrix(rows)).passed == expected


def test_bent_desk_word_is_proximal():
    rep = bend(desk_instance())
    c = proximality(rep["b"])
    rows = [[complex(float(x.embed((0, 1), 60).mid)) for x in r] for r in rep["b"].rows]
    assert c.passed == bool(numpy_proximal([[z.real for z in r] for r in rows]))


def test_precision_refines_the_modulus():
    prev = None
    for bits in (16, 32, 64, 128):
        lo, hi = (Fraction(x) for x in proximality(Matrix(A_ROWS), bits).evidence["top_modulus"])
        if prev:
            assert prev[0] <= hi and lo <= prev[1]
            assert hi - lo <= prev[1] - prev[0]
        prev = (lo, hi)


# -- Burnside span -------------------------------------------------------------------

def test_single_block_generator_span():
    c = burnside_irreducibility([Matrix(A_ROWS)], 6)
    assert c.evidence["span_dimension"] == 3
    assert c.verdict == "inconclusive"
    assert "invariant_subspace" in c.evidence


def test_elementary_pair_is_irreducible():
    E12 = Matrix([[1, 1], [0, 1]])
    E21 = Matrix([[1, 0], [1, 1]])
    c = burnside_irreducibility([E12, E21], 4)
    assert c.passed and c.evidence["span_dimension"] == 4
    # a single unipotent preserves the line spanned by e1
    c1 = burnside_irreducibility([E12], 4)
    assert c1.evidence["span_dimension"] == 2
    assert c1.evidence["invariant_subspace"] == [["1", "0"]]


def test_bent_desk_spans_everything():
    rep = bend(desk_instance())
    c = burnside_irreducibility([rep["a"], rep["b"]], 6)
    assert c.passed and c.evidence["span_dimension"] == 9


@given(square3, square3)
def test_span_matches_numpy(a, b):
    A, B = Matrix(a), Matrix(b)
    assume(A.det() != 0 and B.det() != 0)
    got = burnside_irreducibility([A, B], 3).evidence["span_dimension"]
    assert got == numpy_span_dim([a, b], 3)


def test_span_is_monotone_in_word_cap():
    gens = [Matrix(A_ROWS), Matrix(B_ROWS)]
    dims = [burnside_irreducibility(gens, k).evidence["span_dimension"] for k in range(1, 5)]
    assert dims == sorted(dims)


def test_span_is_conjugation_invariant():
    P = Matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    Pi = P.inverse()
    for gens in ([Matrix(A_ROWS)], [Matrix(A_ROWS), Matrix(B_ROWS)]):
        conj = [P * g * Pi for g in gens]
        assert (burnside_irreducibility(gens, 4).evidence["span_dimension"]
                == burnside_irreducibility(conj, 4).evidence["span_dimension"])


def test_span_argument_checks():
    with pytest.raises(EmptyGenerators):
        burnside_irreducibility([], 3)
    with pytest.raises(ValueError):
        burnside_irreducibility([Matrix(A_ROWS)], 0)


# -- invariant forms -------------------------------------------------------------------

def test_unbent_pair_preserves_j():
    inst = desk_instance(power=0)
    gens = [inst.base_rep["a"], inst.base_rep["b"]]
    c = invariant_form_space(gens, "symmetric")
    assert c.verdict == "fail" and c.evidence["dimension"] == 1
    X = Matrix([[Fraction(x) for x in r] for r in c.evidence["basis"][0]])
    J = inst.form.matrix()
    ratio = J[0, 0] / X[0, 0]
    assert X.map(lambda x: x * ratio) == J


def test_bent_pair_has_no_invariant_form():
    rep = bend(desk_instance())
    gens = [rep["a"], rep["b"]]
    assert invariant_form_space(gens, "symmetric").evidence["dimension"] == 0
    assert invariant_form_space(gens, "antisymmetric").evidence["dimension"] == 0


def test_small_examples():
    minus = Matrix([[-1, 0], [0, -1]])
    assert invariant_form_space([minus], "antisymmetric").evidence["dimension"] == 1
    assert invariant_form_space([minus], "symmetric").evidence["dimension"] == 3
    swap = Matrix([[0, 1], [1, 0]])
    E = Matrix([[1, 1], [0, 1]])
    assert invariant_form_space([swap, E], "symmetric").evidence["dimension"] == 0
    with pytest.raises(ValueError):
        invariant_form_space([swap], "hermitian")


@given(square3, square3)
def test_form_dimension_matches_numpy(a, b):
    assume(Matrix(a).det() != 0 and Matrix(b).det() != 0)
    for sym in (True, False):
        got = invariant_form_space([Matrix(a), Matrix(b)], "symmetric" if sym else "antisymmetric")
        assert got.evidence["dimension"] == numpy_form_dim([a, b], sym)


def test_forms_depend_only_on_the_group():
    a, b = Matrix(A_ROWS), Matrix(B_ROWS)
    one = invariant_form_space([a, b], "symmetric").evidence["dimension"]
    other = invariant_form_space([a * b, b.inverse(), a * a * b], "symmetric").evidence["dimension"]
    assert one == other == 1


# -- congruence images --------------------------------------------------------------------

def _elementary(i, j, m):
    rows = [[int(r == c) for c in range(m)] for r in range(m)]
    rows[i][j] = 1
    return Matrix(rows)


def test_sl_order_formula():
    assert [sl_order(2, q) for q in (2, 3, 5)] == [6, 24, 120]
    assert sl_order(3, 2) == 168


@pytest.mark.parametrize("m,p", [(2, 2), (2, 3), (2, 5), (2, 7), (3, 2), (3, 3)])
def test_elementary_generators_give_sl(m, p):
    gens = [_elementary(i, (i + 1) % m, m) for i in range(m)]
    if m == 2:
        gens = [_elementary(0, 1, 2), _elementary(1, 0, 2)]
    c = congruence_image_order(gens, p)
    assert c.passed and c.evidence["order"] == sl_order(m, p)
    assert c.evidence["lagrange_divides"]


def _cyclic_order(A, p):
    M = np.array(A) % p
    X = M.copy()
    k = 1
    while not np.array_equal(X, np.eye(len(A), dtype=int)):
        X = X @ M % p
        k += 1
    return k


@given(st.lists(st.lists(st.integers(0, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_cyclic_groups_match_direct_powers(rows):
    A = Matrix(rows)
    assume(A.det() % 7 != 0)
    c = congruence_image_order([A], 7)
    assert c.evidence["order"] == _cyclic_order(rows, 7)
    assert c.evidence["lagrange_divides"]


def test_diagonal_image():
    c = congruence_image_order([Matrix([[2, 0, 0], [0, 4, 0], [0, 0, 4]])], 7)
    assert c.verdict == "fail" and c.evidence["order"] == 3
    assert c.evidence["lagrange_divides"]


def test_bfs_is_deterministic_and_bounded():
    gens = [_elementary(0, 1, 3), _elementary(1, 2, 3), _elementary(2, 0, 3)]
    one = json.dumps(congruence_image_order(gens, 2).to_json(), sort_keys=True)
    two = json.dumps(congruence_image_order(gens, 2).to_json(), sort_keys=True)
    assert one == two
    with pytest.raises(BudgetExceeded):
        bfs_group_order([np.array(g.rows) for g in gens], 2, budget=100)
    with pytest.raises(BudgetExceeded):
        congruence_image_order([Matrix.identity(5)], 2)


def test_bad_reductions():
    with pytest.raises(BadReduction):
        congruence_image_order([Matrix([[Fraction(1, 2), 0], [0, 2]])], 2)
    with pytest.raises(BadReduction):
        congruence_image_order([Matrix([[2, 0], [0, 1]])], 2)
    with pytest.raises(BadReduction):
        congruence_image_order([Matrix.identity(2)], 4)


def _split_primes_oracle(ext, max_p):
    """(p, theta root) pairs where x^2 - u x + 1 has two roots, by brute force."""
    F = ext.base
    out = []
    for p in (2, 3, 5, 7, 11, 13)[: sum(1 for q in (2, 3, 5, 7, 11, 13) if q <= max_p)]:
        thetas = [r for r in range(p) if sum(int(c) * r**k for k, c in enumerate(F.poly)) % p == 0] \
            if F.degree > 1 else [0]
        for r in thetas:
            u = ext.u
            coeffs = u.coeffs if hasattr(u, "coeffs") else [Fraction(u)]
            if any(Fraction(c).denominator % p == 0 for c in coeffs):
                continue
            ubar = sum(Fraction(c).numerator * pow(Fraction(c).denominator, -1, p) * r**k
                       for k, c in enumerate(coeffs)) % p
            roots = [t for t in range(p) if (t * t - ubar * t + 1) % p == 0]
            if len(roots) == 2:
                out.append(p)
    return out


def test_degree_one_primes(L3, L_sqrt2):
    assert degree_one_primes(L3, 7) == []
    assert [pd.p for pd in degree_one_primes(L3, 13)] == _split_primes_oracle(L3, 13) == [11]
    got = [pd.p for pd in degree_one_primes(L_sqrt2, 13)]
    assert got == _split_primes_oracle(L_sqrt2, 13)
    for pd in degree_one_primes(L_sqrt2, 13):
        assert (pd.theta_root ** 2 - 2) % pd.p == 0


def test_bent_image_mod_a_split_prime(L3):
    rep = bend(desk_instance())
    pd = degree_one_primes(L3, 13)[0]
    assert pd.p == 11
    # |SL(3, 11)| is far beyond the BFS budget
    with pytest.raises(BudgetExceeded):
        congruence_image_order([rep["a"], rep["b"]], pd)


def test_wrong_root_rejected(L3):
    rep = bend(desk_instance())
    with pytest.raises(BadReduction):
        congruence_image_order([rep["a"], rep["b"]], PrimeData(5, None, 1))


# -- the bundle ---------------------------------------------------------------------------

def test_thinness_report_unbent():
    r = thinness_report(desk_instance(power=0), word_cap=4, proximal_search=2)
    assert r["summary"].startswith("not bent")
    assert r["hard_checks_pass"]
    assert r["checks"]["invariant_forms_symmetric"]["evidence"]["dimension"] == 1


def test_thinness_report_bent():
    r = thinness_report(desk_instance(), word_cap=6, proximal_search=3)
    assert r["hard_checks_pass"]
    checks = r["checks"]
    for name in ("su_containment", "relators", "proximality", "burnside_irreducibility",
                 "invariant_forms_symmetric", "invariant_forms_antisymmetric"):
        assert checks[name]["verdict"] == "pass", name
    assert checks["congruence_image"]["verdict"] == "inconclusive"
    assert r["summary"].startswith("bent; irreducible")
    assert r["not_machine_checked"]


def test_thinness_report_with_explicit_prime():
    r = thinness_report(desk_instance(), word_cap=3, prime=PrimeData(11, None, 9), proximal_search=2)
    # 9^2 - 3 * 9 + 1 = 55
    assert r["checks"]["congruence_image"]["verdict"] == "inconclusive"


def test_other_unit_powers_lose_the_form():
    for k in (2, -1, 3):
        r = thinness_report(desk_instance(power=k), word_cap=6, proximal_search=2)
        assert r["hard_checks_pass"]
        assert r["checks"]["invariant_forms_symmetric"]["evidence"]["dimension"] == 0
