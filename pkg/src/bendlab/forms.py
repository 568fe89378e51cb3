"""Diagonal forms J = diag(alpha_1, ..., alpha_n, -1) and their isometry groups.

``so_membership`` tests A^t J A = J over F, ``su_membership`` tests
A* J A = J over L where A* applies the Galois involution entrywise before
transposing.  Both insist on det A = 1.
"""

from __future__ import annotations

from .errors import EntriesOutsideBaseField, NotUnitary, SignatureError
from .matrix import Matrix
from .numfield import AlgebraicNumber, ExtElement, NumberField


class Form:
    """The form J^alpha over a totally real field F.

    Each alpha_i must be positive at the identity place and negative at every
    other real place; this is what makes the integral isometry group a
    lattice in SO(n, 1).
    """

    def __init__(self, field: NumberField, alphas):
        if len(alphas) < 1:
            raise SignatureError("need at least one alpha")
        self.field = field
        self.alphas = tuple(field.element(a) for a in alphas)
        self.n = len(self.alphas)
        self.sign_evidence = []
        for i, a in enumerate(self.alphas):
            signs = a.signs()
            self.sign_evidence.append(signs)
            if signs[0] <= 0:
                raise SignatureError(f"alpha_{i + 1} = {a!r} is not positive at the identity place")
            if any(s >= 0 for s in signs[1:]):
                raise SignatureError(f"alpha_{i + 1} = {a!r} is not negative at every other place")

    @property
    def size(self) -> int:
        return self.n + 1

    def diagonal(self) -> list:
        return list(self.alphas) + [self.field.element(-1)]

    def matrix(self) -> Matrix:
        return Matrix.diag(self.diagonal())

    def restricted(self) -> "Form":
        """The form on the last n coordinates, diag(alpha_2, ..., alpha_n, -1)."""
        return Form(self.field, self.alphas[1:])

    def __eq__(self, other):
        return isinstance(other, Form) and self.field == other.field and self.alphas == other.alphas

    def __hash__(self):
        return hash((self.field, self.alphas))

    def __repr__(self):
        return f"Form(n={self.n}, alphas={list(self.alphas)!r})"

    def to_json(self) -> dict:
        return {"alphas": [a.to_json() for a in self.alphas]}


def _check_size(A: Matrix, J: Form):
    if A.shape != (J.size, J.size):
        raise ValueError(f"matrix of shape {A.shape} does not match form of size {J.size}")


def in_base_field(x) -> bool:
    return not isinstance(x, ExtElement) or x.in_base()


def base_part(A: Matrix) -> Matrix:
    """Entries as elements of F; raises if any entry has an s-component."""
    if not all(in_base_field(x) for x in A.flat()):
        raise EntriesOutsideBaseField("matrix has entries outside the base field")
    return A.map(lambda x: x.a if isinstance(x, ExtElement) else x)


def so_membership(A: Matrix, J: Form) -> bool:
    _check_size(A, J)
    B = base_part(A)
    return B.transpose() * J.matrix() * B == J.matrix() and B.det() == 1


def su_membership(A: Matrix, J: Form) -> bool:
    _check_size(A, J)
    return A.conj_transpose() * J.matrix() * A == J.matrix() and A.det() == 1


def bending_matrix(u: ExtElement, n: int) -> Matrix:
    """diag(u^-n, u, ..., u), the bending element attached to a unitary u."""
    if not u.is_unitary():
        raise NotUnitary(f"{u!r} is not unitary")
    # u^-1 = tau(u) for unitary u
    first = u.tau() ** n
    return Matrix.diag([first] + [u] * n)


def centralizes_block(B: Matrix, A: Matrix) -> bool:
    if B.shape != A.shape:
        raise ValueError("shape mismatch")
    return B * A == A * B


def is_reciprocal_charpoly(A: Matrix) -> bool:
    """True when det(xI - A) is (up to sign) its own reciprocal polynomial."""
    cp = A.charpoly()
    rev = list(reversed(cp))
    c = cp[0]
    if c == 0:
        return False
    return all(r == x * c for r, x in zip(rev, cp)) or all(r == -x * c for r, x in zip(rev, cp))


def random_alpha(field: NumberField, rng, bound: int = 5) -> AlgebraicNumber:
    """A random valid alpha: positive at identity, negative elsewhere.

    Rejection sampling over integer coefficient vectors; for F = Q any
    positive integer qualifies.
    """
    while True:
        a = field.element([rng.randint(-bound, bound) for _ in range(field.degree)])
        if a.is_zero():
            continue
        s = a.signs()
        if s[0] > 0 and all(x < 0 for x in s[1:]):
            return a

