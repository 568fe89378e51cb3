"""Computable thinness evidence for a bent group.

* ``proximality``: exact test for a unique, simple eigenvalue of maximal modulus.
* ``burnside_irreducibility``: dimension of the matrix algebra spanned by words.
* ``invariant_form_space``: all X = +-X^t with A^t X A = X for every generator.
* ``congruence_image_order``: order of the image in SL(n+1, p) by BFS.
* ``thinness_report``: everything above for a BendingInstance.

Proximality avoids numerical eigenvalues.  If M is the largest modulus of an
eigenvalue of A, then M^2 is the largest real eigenvalue of Sym^2(A): every
eigenvalue of Sym^2(A) is a product lambda_i lambda_j, and the real ones are
bounded by M^2, which is attained by lambda lambda-bar.  A is proximal exactly
when M^2 is a simple root of det(x - Sym^2 A) and M^2 is also the square of a
real eigenvalue of A.  Both conditions are decided with squarefree
decomposition and Sturm sequences over the ground field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import polys
from .bending import (
    BendingInstance,
    bend,
    evaluate_word,
    format_word,
    verify_relators,
    verify_su_containment,
)
from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate
from .errors import BadReduction, BudgetExceeded, EmptyGenerators, PrecisionBudgetExceeded, Singular
from .intervals import Interval, sqrt_ceil, sqrt_floor
from .matrix import Matrix, det_rows, nullspace_rows
from .numfield import AlgebraicNumber, ExtElement

BFS_BUDGET = 10**7


def _entry_json(x):
    return x.to_json() if hasattr(x, "to_json") else str(x)


def _poly_json(p):
    return [_entry_json(c) for c in p]


def _mat_json(A: Matrix):
    return [[_entry_json(x) for x in row] for row in A.rows]


# -- proximality --------------------------------------------------------------

def sym2(A: Matrix) -> Matrix:
    """Matrix of A acting on symmetric tensors, basis e_k e_l with k <= l."""
    m = A.n
    pairs = [(k, l) for k in range(m) for l in range(k, m)]
    a = A.rows
    rows = []
    for k, l in pairs:
        row = []
        for i, j in pairs:
            if k == l:
                row.append(a[k][i] * a[k][j])
            else:
                row.append(a[k][i] * a[l][j] + a[l][i] * a[k][j])
        rows.append(row)
    return Matrix(rows)


def _even_part(p: list) -> list:
    """Q with P(x) P(-x) = Q(x^2) (up to the sign convention of P(-x))."""
    pm = [c if k % 2 == 0 else -c for k, c in enumerate(p)]
    prod = polys.mul(p, pm)
    return polys.strip(prod[0::2])


def proximality(A: Matrix, precision: int = 64) -> Certificate:
    params = {"precision_bits": precision}
    if A.det() == 0:
        raise Singular("proximality needs an invertible matrix")
    P = A.charpoly()
    try:
        S = sym2(A).charpoly()
        sqf = polys.squarefree_part(S)
        roots = polys.isolate_real_roots(sqf)
        if not roots:
            raise PrecisionBudgetExceeded("Sym^2 has no real eigenvalue")
        top = roots[-1]
        mult = None
        for g, k in polys.squarefree_decomposition(S):
            if polys.count_in(g, top) > 0:
                mult = k
                break
        Q = _even_part(P)
        top_is_square_of_real = polys.count_in(polys.gcd(sqf, Q), top) > 0
        width = Fraction(1, 1 << precision)
        top_ref = polys.refine_root(sqf, top, width)
        lo = sqrt_floor(max(top_ref.lo, Fraction(0)), precision + 2)
        hi = sqrt_ceil(top_ref.hi, precision + 2)
        modulus = Interval(lo, hi)
        second = roots[-2] if len(roots) > 1 else None
    except PrecisionBudgetExceeded as exc:
        return Certificate("proximality", INCONCLUSIVE, {"reason": str(exc)}, params)
    evidence = {
        "charpoly": _poly_json(P),
        "top_modulus": modulus.to_json(),
        "top_modulus_float": float(modulus.mid),
        "sym2_top_multiplicity": mult,
        "top_is_real_eigenvalue": top_is_square_of_real,
    }
    if second is not None:
        evidence["sym2_second_root_upper"] = str(polys.refine_root(sqf, second, width).hi)
    ok = mult == 1 and top_is_square_of_real
    if not ok:
        evidence["reason"] = (
            "eigenvalue of maximal modulus is repeated" if mult != 1
            else "maximal modulus is attained by a complex pair"
        )
    return Certificate("proximality", PASS if ok else FAIL, evidence, params)


# -- Burnside span --------------------------------------------------------------

class EchelonBasis:
    """Incrementally maintained row-echelon basis of a subspace of K^N."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list] = []
        self.pivots: list[int] = []

    def reduce(self, v: list) -> list:
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != 0:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v: list) -> bool:
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if x != 0), None)
        if p is None:
            return False
        c = v[p]
        v = [x / c for x in v]
        # keep the basis fully reduced so that reduce() is a single pass
        self.rows = [
            [x - r[p] * y for x, y in zip(r, v)] if r[p] != 0 else r for r in self.rows
        ]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def _inverses(gens: list[Matrix]) -> list[Matrix]:
    return [g.inverse() for g in gens]


def algebra_span(gens: list[Matrix], word_cap: int) -> tuple[EchelonBasis, list[Matrix], list[int], bool]:
    """Span of all words of length <= word_cap in gens and their inverses.

    Returns (basis, spanning words as matrices, dimension after each length,
    stabilized flag).  Only words that enlarged the span are extended, which
    gives the same span as extending every word.
    """
    m = gens[0].n
    letters = list(gens) + _inverses(gens)
    basis = EchelonBasis(m * m)
    ident = Matrix.identity(m)
    basis.add(ident.flat())
    spanning = [ident]
    frontier = [ident]
    dims = [basis.dim]
    stabilized = False
    for _ in range(word_cap):
        nxt = []
        for w in frontier:
            for g in letters:
                x = w * g
                if basis.add(x.flat()):
                    nxt.append(x)
                    spanning.append(x)
        dims.append(basis.dim)
        frontier = nxt
        if not nxt:
            stabilized = True
            break
        if basis.dim == m * m:
            break
    return basis, spanning, dims, stabilized


def invariant_subspace_witness(spanning: list[Matrix]) -> list[list] | None:
    """A proper nonzero subspace invariant under the algebra, if an easy one exists.

    Tries the cyclic subspaces A e_i, then annihilators of the cyclic
    subspaces of the transposed algebra.  Returns a basis, smallest found.
    """
    m = spanning[0].n
    best = None
    for i in range(m):
        e = [Fraction(int(k == i)) for k in range(m)]
        eb = EchelonBasis(m)
        for A in spanning:
            eb.add(A.apply(e))
        if 0 < eb.dim < m and (best is None or eb.dim < len(best)):
            best = eb.rows
    for i in range(m):
        e = [Fraction(int(k == i)) for k in range(m)]
        eb = EchelonBasis(m)
        for A in spanning:
            eb.add(A.transpose().apply(e))
        if 0 < eb.dim < m:
            ann = nullspace_rows(eb.rows, m)
            if best is None or len(ann) < len(best):
                best = ann
    return best


def _span_certificate(name: str, gens: list[Matrix], word_cap: int) -> Certificate:
    m = gens[0].n
    basis, spanning, dims, stabilized = algebra_span(gens, word_cap)
    full = basis.dim == m * m
    evidence = {"span_dimension": basis.dim, "full_dimension": m * m, "dimension_by_length": dims,
                "stabilized": stabilized}
    if not full:
        witness = invariant_subspace_witness(spanning)
        if witness is not None:
            evidence["invariant_subspace"] = [[_entry_json(x) for x in v] for v in witness]
    return Certificate(name, PASS if full else INCONCLUSIVE, evidence, {"word_cap": word_cap})


def strong_irreducibility_family(gens: list[Matrix]) -> list[Matrix]:
    """Squares g^2, (g h)^2 and h g^2 h^-1; all lie in every subgroup of index <= 2."""
    fam = []
    for g in gens:
        fam.append(g * g)
    for g, h in product(gens, repeat=2):
        if g is h:
            continue
        gh = g * h
        fam.append(gh * gh)
        fam.append(h * g * g * h.inverse())
    return fam


def burnside_irreducibility(gens: list[Matrix], word_cap: int = 6) -> Certificate:
    if not gens:
        raise EmptyGenerators("no generators")
    if word_cap < 1:
        raise ValueError("word_cap must be >= 1")
    cert = _span_certificate("burnside_irreducibility", gens, word_cap)
    strong = _span_certificate("strong_irreducibility_evidence", strong_irreducibility_family(gens), word_cap)
    cert.evidence["strong_irreducibility_evidence"] = {
        "verdict": strong.verdict,
        "scope": "irreducible on every subgroup of index <= 2",
        **strong.evidence,
    }
    return cert


# -- invariant forms --------------------------------------------------------------

def _form_basis(m: int, symmetric: bool) -> list[Matrix]:
    out = []
    for i in range(m):
        for j in range(i if symmetric else i + 1, m):
            rows = [[0] * m for _ in range(m)]
            rows[i][j] = 1
            rows[j][i] = 1 if symmetric else -1
            out.append(Matrix(rows))
    return out


def invariant_form_space(gens: list[Matrix], symmetry: str = "symmetric") -> Certificate:
    """Solve A^t X A = X over the ground field for X symmetric or antisymmetric.

    The verdict is ``pass`` when the space is zero (no invariant form of this
    symmetry, which is what thinness needs) and ``fail`` otherwise.
    """
    if not gens:
        raise EmptyGenerators("no generators")
    if symmetry not in ("symmetric", "antisymmetric"):
        raise ValueError("symmetry must be symmetric or antisymmetric")
    m = gens[0].n
    basis = _form_basis(m, symmetry == "symmetric")
    # columns: image of each basis form under X -> A^t X A - X, stacked over generators
    cols = []
    for E in basis:
        col = []
        for A in gens:
            col.extend((A.transpose() * E * A - E).flat())
        cols.append(col)
    rows = [list(r) for r in zip(*cols)] if cols else []
    kernel = nullspace_rows(rows, len(basis)) if basis else []
    forms = []
    for vec in kernel:
        X = None
        for c, E in zip(vec, basis):
            if c != 0:
                X = E * c if X is None else X + E * c
        forms.append(X)
    return Certificate(
        "invariant_forms_" + symmetry,
        PASS if not forms else FAIL,
        {"dimension": len(forms), "basis": [_mat_json(X) for X in forms]},
        {"symmetry": symmetry},
    )


def form_in_span(J: Matrix, cert: Certificate, gens: list[Matrix]) -> bool:
    """Is J in the solution space of ``cert`` (recomputed exactly)?"""
    return all(A.transpose() * J * A == J for A in gens) and cert.evidence["dimension"] >= 1


# -- congruence images --------------------------------------------------------------

def sl_order(m: int, q: int) -> int:
    """|SL(m, q)| = q^(m(m-1)/2) prod_{k=2}^{m} (q^k - 1)."""
    out = q ** (m * (m - 1) // 2)
    for k in range(2, m + 1):
        out *= q**k - 1
    return out


def gl_order(m: int, q: int) -> int:
    return sl_order(m, q) * (q - 1)


@dataclass
class PrimeData:
    """A degree-one prime: theta -> theta_root and s -> s_root modulo p."""

    p: int
    theta_root: int | None = None
    s_root: int | None = None

    def to_json(self) -> dict:
        return {"p": self.p, "theta_root": self.theta_root, "s_root": self.s_root}


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _reduce_rational(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise BadReduction(f"denominator of {x} is divisible by {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def _reduce_base(x, pd: PrimeData) -> int:
    if isinstance(x, AlgebraicNumber):
        F = x.field
        r = pd.theta_root if F.degree > 1 else 0
        acc = 0
        for c in reversed(x.coeffs):
            acc = (acc * r + _reduce_rational(c, pd.p)) % pd.p
        return acc
    return _reduce_rational(x, pd.p)


def reduce_entry(x, pd: PrimeData) -> int:
    if isinstance(x, ExtElement):
        if x.b.is_zero():
            return _reduce_base(x.a, pd)
        if pd.s_root is None:
            raise BadReduction("no root of x^2 - u x + 1 supplied")
        return (_reduce_base(x.a, pd) + _reduce_base(x.b, pd) * pd.s_root) % pd.p
    return _reduce_base(x, pd)


def _roots_mod(coeffs: list[int], p: int) -> list[int]:
    return [r for r in range(p) if sum(c * pow(r, k, p) for k, c in enumerate(coeffs)) % p == 0]


def degree_one_primes(ext, max_p: int = 7, split_only: bool = True) -> list[PrimeData]:
    """Primes p <= max_p with theta and s both reducing to F_p.

    With ``split_only`` the polynomial x^2 - u x + 1 must have two distinct
    roots mod p, i.e. the prime of F splits in L.
    """
    F = ext.base
    out = []
    for p in range(2, max_p + 1):
        if not _is_prime(p):
            continue
        thetas = _roots_mod(list(F.poly), p) if F.degree > 1 else [0]
        for r in thetas:
            pd = PrimeData(p, r if F.degree > 1 else None)
            try:
                ubar = _reduce_base(ext.u, pd)
            except BadReduction:
                continue
            ss = _roots_mod([1, -ubar, 1], p)
            if split_only and len(ss) != 2:
                continue
            for sr in ss[:1]:
                out.append(PrimeData(p, pd.theta_root, sr))
    return out


def _check_prime_data(pd: PrimeData, gens: list[Matrix]):
    if not _is_prime(pd.p):
        raise BadReduction(f"{pd.p} is not prime")
    fields, exts = {}, {}
    for A in gens:
        for x in A.flat():
            if isinstance(x, ExtElement):
                exts[id(x.ext)] = x.ext
                fields[id(x.ext.base)] = x.ext.base
            elif isinstance(x, AlgebraicNumber):
                fields[id(x.field)] = x.field
    for F in fields.values():
        if F.degree > 1 and (
            pd.theta_root is None
            or sum(c * pow(pd.theta_root, k, pd.p) for k, c in enumerate(F.poly)) % pd.p
        ):
            raise BadReduction(f"{pd.theta_root} is not a root of the field polynomial mod {pd.p}")
    for ext in exts.values():
        if pd.s_root is None:
            continue
        ubar = _reduce_base(ext.u, pd)
        if (pd.s_root * pd.s_root - ubar * pd.s_root + 1) % pd.p:
            raise BadReduction(f"{pd.s_root} is not a root of x^2 - u x + 1 mod {pd.p}")


def _encode(mats: np.ndarray, p: int) -> np.ndarray:
    flat = mats.reshape(mats.shape[0], -1)
    weights = p ** np.arange(flat.shape[1], dtype=np.int64)
    return flat @ weights


def bfs_group_order(gens: list[np.ndarray], p: int, budget: int = BFS_BUDGET) -> int:
    """Order of the group generated by invertible integer matrices mod p."""
    m = gens[0].shape[0]
    G = np.stack([g % p for g in gens]).astype(np.int64)
    frontier = np.eye(m, dtype=np.int64)[None, :, :]
    seen = np.sort(_encode(frontier, p))
    while frontier.shape[0]:
        cand = np.einsum("aij,bjk->abik", frontier, G).reshape(-1, m, m) % p
        codes = _encode(cand, p)
        codes, idx = np.unique(codes, return_index=True)
        fresh = ~np.isin(codes, seen, assume_unique=True)
        frontier = cand[idx[fresh]]
        seen = np.union1d(seen, codes[fresh])
        if seen.shape[0] > budget:
            raise BudgetExceeded(f"group exceeds the BFS budget of {budget} elements")
    return int(seen.shape[0])


def congruence_image_order(gens: list[Matrix], prime: PrimeData | int, budget: int = BFS_BUDGET) -> Certificate:
    if not gens:
        raise EmptyGenerators("no generators")
    pd = prime if isinstance(prime, PrimeData) else PrimeData(int(prime))
    m = gens[0].n
    if m > 4 or pd.p > 9:
        raise BudgetExceeded(f"congruence BFS limited to size <= 4 and q <= 9 (got size {m}, q = {pd.p})")
    _check_prime_data(pd, gens)
    reduced = [np.array([[reduce_entry(x, pd) for x in row] for row in A.rows], dtype=np.int64) for A in gens]
    dets = [int(det_rows(r.tolist())) % pd.p for r in reduced]
    if any(d == 0 for d in dets):
        raise BadReduction(f"a generator is singular mod {pd.p}")
    order = bfs_group_order(reduced, pd.p, budget)
    target = sl_order(m, pd.p)
    ambient = target if all(d == 1 for d in dets) else gl_order(m, pd.p)
    lagrange = ambient % order == 0
    return Certificate(
        "congruence_image",
        PASS if order == target else FAIL,
        {
            "order": order,
            "sl_order": target,
            "ambient_order": ambient,
            "lagrange_divides": lagrange,
            "determinants_mod_p": dets,
        },
        {"prime": pd.to_json(), "budget": budget},
    )


# -- bundle ------------------------------------------------------------------------

def _words_up_to(names: list[str], length: int):
    letters = [(g, 1) for g in names] + [(g, -1) for g in names]
    for k in range(1, length + 1):
        for w in product(letters, repeat=k):
            if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(w, w[1:])):
                continue
            yield list(w)


def thinness_report(
    inst: BendingInstance,
    word_cap: int = 6,
    prime: PrimeData | int | None = None,
    proximal_search: int = 4,
) -> dict:
    """Aggregate every computable check for a bending instance."""
    rep = bend(inst)
    names = sorted(rep)
    gens = [rep[g] for g in names]
    checks: dict[str, dict] = {}

    su = verify_su_containment(rep, inst.form)
    checks["su_containment"] = su.to_json()
    rel = verify_relators(rep, inst.decomposition.relators)
    checks["relators"] = rel.to_json()

    prox = None
    inverses: dict = {}
    for w in _words_up_to(names, proximal_search):
        img = evaluate_word(rep, w, inverses)
        c = proximality(img)
        if c.passed:
            prox = c
            prox.evidence["word"] = format_word(w)
            break
    if prox is None:
        prox = Certificate("proximality", INCONCLUSIVE, {"reason": "no proximal word found"},
                           {"max_word_length": proximal_search})
    prox.parameters["max_word_length"] = proximal_search
    checks["proximality"] = prox.to_json()

    checks["burnside_irreducibility"] = burnside_irreducibility(gens, word_cap).to_json()
    sym = invariant_form_space(gens, "symmetric")
    checks["invariant_forms_symmetric"] = sym.to_json()
    checks["invariant_forms_antisymmetric"] = invariant_form_space(gens, "antisymmetric").to_json()

    if prime is not None:
        try:
            checks["congruence_image"] = congruence_image_order(gens, prime).to_json()
        except BudgetExceeded as exc:
            checks["congruence_image"] = Certificate(
                "congruence_image", INCONCLUSIVE, {"reason": str(exc)}, {"budget": BFS_BUDGET}).to_json()
    else:
        primes = degree_one_primes(inst.ext, max_p=7)
        if primes:
            try:
                checks["congruence_image"] = congruence_image_order(gens, primes[0]).to_json()
            except BudgetExceeded as exc:
                checks["congruence_image"] = Certificate(
                    "congruence_image", INCONCLUSIVE, {"reason": str(exc)},
                    {"budget": BFS_BUDGET, "prime": primes[0].to_json()}).to_json()
        else:
            checks["congruence_image"] = Certificate(
                "congruence_image", INCONCLUSIVE,
                {"reason": "no split degree-one prime p <= 7; larger residue fields exceed the BFS budget"},
                {"budget": BFS_BUDGET, "max_prime": 7}).to_json()

    J = inst.form.matrix()
    bent = not inst.unit == 1
    if not bent or (sym.evidence["dimension"] >= 1 and all(A.transpose() * J * A == J for A in gens)):
        summary = "not bent: invariant symmetric form J present"
    else:
        computable = ["su_containment", "relators", "proximality", "burnside_irreducibility",
                      "invariant_forms_symmetric", "invariant_forms_antisymmetric"]
        failing = [k for k in computable if checks[k]["verdict"] != PASS]
        if failing:
            summary = "bent; checks not passing: " + ", ".join(failing)
        else:
            summary = ("bent; irreducible, proximal, no invariant bilinear form; "
                       "strong irreducibility only as evidence at index <= 2")
    hard_ok = su.passed and rel.passed
    return {
        "checks": checks,
        "hard_checks_pass": hard_ok,
        "summary": summary,
        "not_machine_checked": [
            "infinite index in the lattice (follows from a property (T) argument, not computed)",
            "Zariski density (follows from a density argument; the checks here are supporting evidence)",
        ],
    }
