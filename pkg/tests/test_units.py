"""Special units, fundamental units of real quadratic fields, and unit ranks."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bendlab.errors import DegenerateBasis, NotAUnit, PlaceCountMismatch, RankZeroField
from bendlab.numfield import NumberField
from bendlab.units import (
    UnitSearchProblem,
    build_extension,
    find_special_unit,
    is_special,
    quadratic_fundamental_unit,
    target_vector,
    unit_rank_report,
)


def brute_force_special_power(eps_float, conj_float, threshold):
    """Smallest k with eps^k > N and 0 < conj^k < 1, by floating point scan."""
    for k in range(1, 200):
        if eps_float ** k > threshold and 0 < conj_float ** k < 1:
            return k
    return None


def brute_force_pell(d, limit=300_000):
    """Smallest y >= 1 with x^2 - d y^2 = +-1 (or the half-integer analogue for d = 1 mod 4)."""
    for y in range(1, limit):
        # for a given y the norm -1 solution is the smaller one
        for sign in (-1, 1):
            if d % 4 == 1:
                # (x + y sqrt d)/2 with x^2 - d y^2 = +-4
                x2 = d * y * y + 4 * sign
            else:
                x2 = d * y * y + sign
            if x2 > 0 and math.isqrt(x2) ** 2 == x2:
                return math.isqrt(x2), y
    return None


def test_special_unit_sqrt2():
    F = NumberField([-2, 0, 1])
    su = find_special_unit(UnitSearchProblem(F, [F.element([1, 1])], 10))
    assert su.u == F.element([17, 12])
    # oracle: powers of 1 + sqrt 2 scanned in floating point
    k = brute_force_special_power(1 + math.sqrt(2), 1 - math.sqrt(2), 10)
    assert su.u == F.element([1, 1]) ** k
    assert su.power_witness == [k]
    top, other = su.embedding_evidence
    assert top.lo > 10 and 0 < other.lo and other.hi < 1
    assert float(top.mid) == pytest.approx(33.97, abs=0.01)
    assert float(other.mid) == pytest.approx(0.0294, abs=1e-4)


def test_rank_zero_field():
    with pytest.raises(RankZeroField):
        find_special_unit(UnitSearchProblem(NumberField.rationals(), [], 10))


def test_target_vector():
    assert target_vector(2) == [Fraction(1), Fraction(-1, 2), Fraction(-1, 2)]


def test_cubic_field_search():
    F = NumberField([1, -3, 0, 1])
    t = F.gen()
    su = find_special_unit(UnitSearchProblem(F, [t, t - 1], 5))
    assert su.u.is_unit()
    ok, ivs = is_special(su.u, 5)
    assert ok
    assert ivs[0].lo > 5 and all(0 < iv.lo and iv.hi < 1 for iv in ivs[1:])


def test_degenerate_basis():
    F = NumberField([1, -3, 0, 1])
    t = F.gen()
    with pytest.raises(DegenerateBasis):
        find_special_unit(UnitSearchProblem(F, [t, t ** 2], 5))


def test_not_a_unit_rejected():
    F = NumberField([-2, 0, 1])
    with pytest.raises(NotAUnit):
        UnitSearchProblem(F, [F.element([1, 2])], 10)
    with pytest.raises(ValueError):
        UnitSearchProblem(F, [], 10)


@pytest.mark.parametrize("D", [2, 3, 5, 6, 7, 10, 13, 19, 21, 29, 46, 61, 94])
def test_quadratic_fundamental_unit_matches_brute_force(D):
    F = NumberField([-D, 0, 1])
    eps = quadratic_fundamental_unit(F)
    assert eps.is_unit()
    x, y = brute_force_pell(D)
    value = (x + y * math.sqrt(D)) / (2 if D % 4 == 1 else 1)
    assert float(eps.embed(0, 60).mid) == pytest.approx(value, rel=1e-12)


@given(st.integers(min_value=11, max_value=500))
def test_powers_closure(N):
    F = NumberField([-3, 0, 1])
    su = find_special_unit(UnitSearchProblem(F, [quadratic_fundamental_unit(F)], N))
    assert su.u.is_unit()
    assert is_special(su.u, N)[0]
    assert is_special(su.u * su.u, N)[0]


def test_build_extension_over_q():
    L = build_extension(NumberField.rationals(), 3)
    assert L.s * L.s == 3 * L.s - 1
    assert abs(float(L.s.embed((0, 1), 40).mid) - (3 + math.sqrt(5)) / 2) < 1e-10


def test_unit_rank_report():
    Q = NumberField.rationals()
    rep = unit_rank_report(build_extension(Q, 3))
    assert (rep.rank_L, rep.rank_F) == (1, 0)
    F = NumberField([-2, 0, 1])
    L = build_extension(F, F.element([17, 12]))
    rep = unit_rank_report(L)
    assert (rep.rank_L, rep.rank_F) == (2, 1)
    assert (rep.real_places, rep.complex_places) == (2, 1)
    assert L.s.is_unitary()
    for m in rep.salem_moduli:
        assert m.lo <= 1 <= m.hi


def test_place_count_mismatch():
    # trace 3 is not special over Q(sqrt 2): the conjugate place is real as well
    F = NumberField([-2, 0, 1])
    with pytest.raises(PlaceCountMismatch):
        unit_rank_report(build_extension(F, F.element(3)))
