"""Special units of a totally real field and the Salem extension they define.

A unit u of F is *special* for a threshold N when u > N at the identity place
and 0 < sigma(u) < 1 at every other real place.  The search follows the
log-embedding argument: square the fundamental units so they are totally
positive, write the direction (1, -1/k, ..., -1/k) in the basis of their log
vectors, round, and take powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import mpmath
import sympy

from . import polys
from .errors import (
    DegenerateBasis,
    NotAUnit,
    PlaceCountMismatch,
    PrecisionBudgetExceeded,
    RankZeroField,
)
from .intervals import Interval, to_iv
from .numfield import AlgebraicNumber, NumberField, QuadExtension

CERT_BITS = 40
MAX_SCALE = 64


@dataclass
class UnitSearchProblem:
    field: NumberField
    fundamental_units: list[AlgebraicNumber]
    threshold: Fraction

    def __post_init__(self):
        self.threshold = Fraction(self.threshold)
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")
        self.fundamental_units = [self.field.element(v) for v in self.fundamental_units]
        if self.field.degree == 1:
            return
        for v in self.fundamental_units:
            if not v.is_unit():
                raise NotAUnit(f"{v!r} is not a unit of the ring of integers")
        if len(self.fundamental_units) != self.field.degree - 1:
            raise ValueError(
                f"expected {self.field.degree - 1} fundamental units, got {len(self.fundamental_units)}"
            )


@dataclass
class SpecialUnit:
    u: AlgebraicNumber
    power_witness: list[int]
    embedding_evidence: list[Interval] = field(default_factory=list)
    threshold: Fraction = Fraction(0)

    def to_json(self) -> dict:
        return {
            "u": self.u.to_json(),
            "power_witness": list(self.power_witness),
            "threshold": str(self.threshold),
            "embedding_evidence": [iv.to_json() for iv in self.embedding_evidence],
        }


def target_vector(k: int) -> list[Fraction]:
    """The direction (1, -1/k, ..., -1/k) in R^(k+1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return [Fraction(1)] + [Fraction(-1, k)] * k


def is_special(u: AlgebraicNumber, threshold, bits: int = CERT_BITS) -> tuple[bool, list[Interval]]:
    """Certified check of both conditions; returns (verdict, per-place intervals).

    A condition that cannot be separated at ``bits`` is treated as failing.
    """
    F = u.field
    ivs = [u.embed(i, bits) for i in range(F.degree)]
    ok = ivs[0].lo > threshold and all(iv.lo > 0 and iv.hi < 1 for iv in ivs[1:])
    return ok, ivs


def _log_matrix(units: list[AlgebraicNumber], bits: int):
    """Certified enclosures of log|sigma_i(v_j)| as mpmath intervals (rows = places)."""
    F = units[0].field
    ctx = mpmath.iv
    ctx.prec = bits + 20
    rows = []
    for i in range(F.degree):
        row = []
        for v in units:
            enc = v.embed(i, bits).abs()
            if enc.lo <= 0:
                raise PrecisionBudgetExceeded("embedding of a unit not separated from 0")
            row.append(ctx.log(to_iv(enc, ctx)))
        rows.append(row)
    return rows


def _interval_det(m):
    """Determinant of a small square matrix of mpmath intervals (Laplace expansion)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = mpmath.iv.mpf(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _interval_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def find_special_unit(prob: UnitSearchProblem) -> SpecialUnit:
    F = prob.field
    k = F.degree - 1
    if k == 0:
        raise RankZeroField("the unit group of Z is {+1, -1}; no unit exceeds a threshold")
    squares = [v * v for v in prob.fundamental_units]

    # log vectors of the squared units; drop the identity row (sum of a column is 0)
    logs = _log_matrix(squares, 64)
    sub = logs[1:]
    det = _interval_det(sub)
    if det.a <= 0 <= det.b:
        raise DegenerateBasis("log vectors of the supplied units are linearly dependent")

    # rational coordinates of the target in the basis of log vectors
    mp = mpmath.mp
    mp.prec = 200
    A = mpmath.matrix([[mpmath.mpf(x.mid) for x in row] for row in sub])
    rhs = mpmath.matrix([mpmath.mpf(-1) / k] * k)
    coords = mpmath.lu_solve(A, rhs)

    for scale in range(1, MAX_SCALE + 1):
        exps = [int(mpmath.nint(scale * c)) for c in coords]
        if not any(exps):
            continue
        u = F.one()
        for v, e in zip(squares, exps):
            u = u * v ** e
        if not all(iv.hi < 1 and iv.lo > 0 for iv in (u.embed(i, CERT_BITS) for i in range(1, F.degree))):
            continue
        power = 1
        base = u
        while True:
            ok, ivs = is_special(u, prob.threshold)
            if ok:
                return SpecialUnit(
                    u=u,
                    power_witness=[2 * e * power for e in exps],
                    embedding_evidence=ivs,
                    threshold=prob.threshold,
                )
            if ivs[0].hi <= 1:
                break
            u = u * base
            power += 1
    raise PrecisionBudgetExceeded(f"no special unit found with scale factors up to {MAX_SCALE}")


# -- real quadratic fields --------------------------------------------------

def _squarefree_split(D: int) -> tuple[int, int]:
    """D = m^2 * d with d squarefree; returns (m, d)."""
    m, d = 1, 1
    for p, e in sympy.factorint(D).items():
        m *= p ** (e // 2)
        d *= p ** (e % 2)
    return m, d


def _pell_solution(d: int) -> tuple[int, int, int]:
    """Fundamental unit (A + B sqrt d)/k of the maximal order of Q(sqrt d).

    The generator omega of the maximal order is sqrt(d), or (1 + sqrt d)/2 when
    d = 1 mod 4.  Walking the continued-fraction convergents p/q of omega, the
    first p - q omega of norm +-1 is the fundamental unit up to sign and
    conjugation; its conjugate p - q omega' is the one > 1.
    """
    r = isqrt(d)
    half = d % 4 == 1
    P, Q = (1, 2) if half else (0, 1)
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (P + r) // Q if Q > 0 else -((P + r) // -Q + 1)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if half:
            # N(p - q omega) = p^2 - p q - q^2 (d - 1)/4
            if p * p - p * q - q * q * ((d - 1) // 4) in (1, -1):
                return 2 * p - q, q, 2
        elif p * p - d * q * q in (1, -1):
            return p, q, 1
        P = a * Q - P
        Q = (d - P * P) // Q


def quadratic_fundamental_unit(F: NumberField) -> AlgebraicNumber:
    """Fundamental unit (> 1 at the identity place) of the maximal order of a real quadratic field."""
    if F.degree != 2:
        raise ValueError("field is not quadratic")
    c0, c1, _ = F.poly
    D = c1 * c1 - 4 * c0
    m, d = _squarefree_split(D)
    theta = F.gen()
    # sqrt(d) = +-(2 theta + c1)/m, sign chosen positive at the identity place
    root = (2 * theta + c1) / m
    if root.sign(0) < 0:
        root = -root
    p, q, k = _pell_solution(d)
    eps = (root * q + p) / k
    if not eps.is_unit():
        raise NotAUnit("continued-fraction unit failed verification")
    return eps


# -- the extension ------------------------------------------------------------

def build_extension(F: NumberField, u) -> QuadExtension:
    """L = F(s), s^2 - u s + 1 = 0, s > 1 at the identity place."""
    return QuadExtension(F, F.element(u) if not isinstance(u, AlgebraicNumber) else u)


@dataclass
class UnitRankReport:
    rank_L: int
    rank_F: int
    real_places: int
    complex_places: int
    salem_moduli: list[Interval]

    def to_json(self) -> dict:
        return {
            "rank_L": self.rank_L,
            "rank_F": self.rank_F,
            "real_places": self.real_places,
            "complex_places": self.complex_places,
            "salem_moduli_squared": [iv.to_json() for iv in self.salem_moduli],
        }


def _primitive_charpoly(ext: QuadExtension) -> list[Fraction]:
    """Squarefree absolute characteristic polynomial of s + c theta for a small c."""
    theta = ext.base.gen()
    for c in range(0, 64):
        cp = (ext.s + theta * c).charpoly()
        if polys.degree(polys.gcd(cp, polys.derivative(cp))) == 0:
            return cp
    raise PrecisionBudgetExceeded("no primitive element of the form s + c theta found")


def unit_rank_report(ext: QuadExtension, bits: int = CERT_BITS) -> UnitRankReport:
    """Dirichlet rank of O_L^x from place counting, checked against the Salem pattern.

    The real-place count coming from the tower is cross-checked against root
    isolation of the absolute minimal polynomial of s over Q.
    """
    d = ext.base.degree
    r1 = len(ext.real_places)
    r2 = len(ext.complex_places)
    absolute = _primitive_charpoly(ext)
    r1_abs = len(polys.isolate_real_roots(absolute))
    if r1_abs != r1:
        raise PlaceCountMismatch(f"tower has {r1} real places, absolute polynomial {r1_abs}")
    if r1 != 2 or r2 != d - 1:
        raise PlaceCountMismatch(
            f"expected 2 real places and {d - 1} complex places, found {r1} and {r2}"
        )
    rank_L = r1 + r2 - 1
    rank_F = d - 1
    if rank_L != rank_F + 1 or rank_L != d:
        raise PlaceCountMismatch(f"rank identity fails: rank_L={rank_L}, [F:Q]={d}")
    moduli = [ext.s.modulus_squared(i, bits) for i in ext.complex_places]
    return UnitRankReport(rank_L, rank_F, r1, r2, moduli)
