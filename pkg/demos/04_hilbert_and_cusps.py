"""Hilbert distances and generalized cusp models.

Writes cusp_type0.svg and cusp_type1.svg (sections with horosphere leaves)
next to this script.
"""

from fractions import Fraction
from pathlib import Path

from bendlab.matrix import Matrix
from bendlab.projgeom import (
    CuspModel,
    KleinBall,
    Omega1,
    ProjPoint,
    Segment,
    apply,
    cusp_section_svg,
    cusp_translation,
    hilbert_distance,
    horosphere_check,
    orbit_openness,
    p1_element,
)

d = hilbert_distance(Segment(-1, 1), 0, Fraction(1, 2))
print("segment (-1, 1): d(0, 1/2) =", float(d.mid), " (log 3 / 2)")

K = KleinBall((1, 1, -1))
g = Matrix([[2, 1, 2], [1, 2, 2], [2, 2, 3]])
x, y = ProjPoint([0, 0, 1]), ProjPoint([Fraction(1, 3), Fraction(1, 4), 1])
print("Klein disk: d(x, y) =", float(hilbert_distance(K, x, y).mid),
      " d(gx, gy) =", float(hilbert_distance(K, apply(g, x), apply(g, y)).mid))

print("Omega_1: d =", float(hilbert_distance(Omega1(2), ProjPoint([1, 1, 1]), ProjPoint([2, 3, 1])).mid))

m1 = CuspModel(1, 3)
p = ProjPoint([Fraction(3, 2), 1, 1, 1])        # on the leaf H_1
print("parabolic keeps H_1:", horosphere_check(m1, 1, p, cusp_translation(m1, [2]).matrix))
print("e^u element keeps H_1:", horosphere_check(m1, 1, p, p1_element(Fraction(1, 2), [2])))
print("closure element with u = 1/2 keeps H_1:",
      horosphere_check(m1, 1, p, cusp_translation(m1, [2], Fraction(1, 2)).matrix))

for pt in ([1, 1, 0, 1], [1, 0, 1, 1], [1, 1, 1, 0]):
    r = orbit_openness(pt, 3)
    print("orbit at", pt, "rank", r.rank, "open" if r.open else "not open")

here = Path(__file__).resolve().parent
for t in (0, 1):
    (here / f"cusp_type{t}.svg").write_text(cusp_section_svg(t))
print("wrote cusp_type0.svg and cusp_type1.svg")
