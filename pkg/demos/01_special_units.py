"""Special units and the quadratic extension L = F(s).

Over F = Q(sqrt 2) the fundamental unit is 1 + sqrt 2.  A special unit is a
power that is large at the identity place and lies in (0, 1) at the other
place.  It becomes the trace of s, and s is then a Salem-type unit: real at
the identity place and on the unit circle elsewhere.
"""

from bendlab import NumberField, UnitSearchProblem, build_extension, find_special_unit
from bendlab.units import quadratic_fundamental_unit, unit_rank_report

F = NumberField([-2, 0, 1])
eps = quadratic_fundamental_unit(F)
print("fundamental unit:", eps)

su = find_special_unit(UnitSearchProblem(F, [eps], 10))
top, other = su.embedding_evidence
print("special unit u =", su.u, "= eps^%d" % su.power_witness[0])
print("  identity place in [%.12f, %.12f]" % (top.lo, top.hi))
print("  other place    in [%.12f, %.12f]" % (other.lo, other.hi))

L = build_extension(F, su.u)
s = L.s
print("s * tau(s) == 1:", s * s.tau() == L.one())

rep = unit_rank_report(L)
print("real places of L:", rep.real_places, " complex pairs:", rep.complex_places)
print("unit rank of L:", rep.rank_L, " unit rank of F:", rep.rank_F)
for m in rep.salem_moduli:
    print("|s|^2 at the complex place in [%.15f, %.15f]" % (m.lo, m.hi))
