"""Bending the desk example.

J = diag(1, 3, -1) over Q.  The edge generator a acts on the last two
coordinates and commutes with B_s = diag(s^-2, s, s); the stable letter b is
an integral isometry that mixes the first coordinate with the block.  Bending
replaces b by B_s b.  The result stays inside SU(J) over the integers of
L = Q(s), s^2 = 3 s - 1, yet no longer preserves any rational quadratic form.
"""

from bendlab import bend, bending_matrix, su_membership
from bendlab.certify import invariant_form_space
from bendlab.desk import desk_instance, find_partner

b_rows, bound = find_partner()
print("stable letter b =", b_rows, "(smallest entries: %d)" % bound)

inst = desk_instance()
rep = bend(inst)
B = bending_matrix(inst.unit, 2)
print("B_s =", B)
for g in sorted(rep):
    print(f"rho({g}) =", rep[g], " in SU(J):", su_membership(rep[g], inst.form))
print("B_s commutes with rho(a):", B * rep["a"] == rep["a"] * B)

base = desk_instance(power=0)
gens = [base.base_rep["a"], base.base_rep["b"]]
print("symmetric invariant forms before bending:",
      invariant_form_space(gens, "symmetric").evidence["dimension"])
print("symmetric invariant forms after bending: ",
      invariant_form_space([rep["a"], rep["b"]], "symmetric").evidence["dimension"])
