"""The bundled desk example: n = 2, J = diag(1, 3, -1) over Q, bent at u = s.

The hypersurface block SO(diag(3, -1)) contains a = [[1,0,0],[0,2,1],[0,3,2]].
The partner b is the integral isometry found by ``find_partner``: the first
column is entrywise positive, the time-like corner is positive, and the
first row and column reach outside the block.  No such matrix exists with
entries in [-6, 6]; the first ones appear at bound 7.
"""

from __future__ import annotations

from itertools import product
from pathlib import Path

from .bending import BendingInstance, Decomposition
from .forms import Form
from .matrix import Matrix
from .numfield import NumberField
from .units import build_extension

DATA = Path(__file__).parent / "data"

J_DIAGONAL = (1, 3, -1)
A_ROWS = [[1, 0, 0], [0, 2, 1], [0, 3, 2]]
B_ROWS = [[5, -6, 6], [2, -1, 2], [6, -6, 7]]
TRACE = 3


def _det3(A) -> int:
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


def integral_isometries(diagonal, bound: int) -> list[list[list[int]]]:
    """All integer 3x3 A with A^t J A = J, det A = 1 and entries in [-bound, bound].

    Columns are enumerated as vectors of the right J-norm, then glued under
    J-orthogonality.
    """
    J = list(diagonal)
    if len(J) != 3:
        raise ValueError("only 3x3 forms are supported")

    def q(u, v):
        return sum(J[i] * u[i] * v[i] for i in range(3))

    vecs = list(product(range(-bound, bound + 1), repeat=3))
    cols = [[v for v in vecs if q(v, v) == J[k]] for k in range(3)]
    out = []
    for c0 in cols[0]:
        for c1 in cols[1]:
            if q(c0, c1):
                continue
            for c2 in cols[2]:
                if q(c0, c2) or q(c1, c2):
                    continue
                A = [[c0[i], c1[i], c2[i]] for i in range(3)]
                if _det3(A) == 1:
                    out.append(A)
    return out


def find_partner(diagonal=J_DIAGONAL, max_bound: int = 10) -> tuple[list[list[int]], int]:
    """Smallest-bound integral isometry leaving the block, with a canonical choice.

    Returns (matrix, bound).  Among candidates at the first bound that has any,
    keep those with positive first column and positive corner, and take the
    lexicographically smallest.
    """
    for bound in range(1, max_bound + 1):
        cands = [
            A for A in integral_isometries(diagonal, bound)
            if (A[0][1] or A[0][2]) and (A[1][0] or A[2][0])
            and all(A[i][0] > 0 for i in range(3)) and A[2][2] > 0
        ]
        if cands:
            return min(cands), bound
    raise ValueError(f"no partner with entries bounded by {max_bound}")


def desk_field() -> NumberField:
    return NumberField.rationals()


def desk_form(F: NumberField | None = None) -> Form:
    F = F or desk_field()
    return Form(F, list(J_DIAGONAL[:2]))


def desk_generators() -> dict[str, Matrix]:
    return {"a": Matrix(A_ROWS), "b": Matrix(B_ROWS)}


def desk_decomposition() -> Decomposition:
    # free group on a, b read as an HNN extension with stable letter b over <a>
    return Decomposition(kind="hnn", generators=["a", "b"], edge_words=["a"], relators=[], stable="b")


def desk_instance(power: int = 1, sign: int = 1) -> BendingInstance:
    """The desk instance bent at u = sign * s^power (power 0 gives the unbent group)."""
    F = desk_field()
    L = build_extension(F, TRACE)
    unit = L.s ** power * sign
    return BendingInstance(desk_form(F), desk_generators(), desk_decomposition(), L, unit)
