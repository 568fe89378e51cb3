"""Exact arithmetic for thin subgroups of Hermitian lattices obtained by bending.

The pipeline runs: find a special unit in a totally real field F, build the
quadratic extension L = F(s), bend a lattice representation by the unitary
s, verify that the bent group lies in SU(J, O_L, tau), and certify the
computable thinness criteria.  ``projgeom`` adds the Hilbert metric and
generalized cusp models.
"""

from .bending import BendingInstance, Decomposition, bend, verify_relators, verify_su_containment
from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate
from .forms import Form, bending_matrix, so_membership, su_membership
from .matrix import Matrix
from .numfield import AlgebraicNumber, ExtElement, NumberField, QuadExtension
from .units import UnitSearchProblem, build_extension, find_special_unit, unit_rank_report

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber",
    "BendingInstance",
    "Certificate",
    "Decomposition",
    "ExtElement",
    "FAIL",
    "Form",
    "INCONCLUSIVE",
    "Matrix",
    "NumberField",
    "PASS",
    "QuadExtension",
    "UnitSearchProblem",
    "bend",
    "bending_matrix",
    "build_extension",
    "find_special_unit",
    "so_membership",
    "su_membership",
    "unit_rank_report",
    "verify_relators",
    "verify_su_containment",
]
