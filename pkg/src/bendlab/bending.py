"""Bending a representation along an amalgam or HNN splitting.

For an amalgam G1 *_Lambda G2 the generators of G2 are conjugated by B_u;
for an HNN extension G' *_s the stable letter is left-multiplied by B_u.
Either way the construction is well defined exactly when B_u commutes with
the images of the edge-group words, and that is checked before anything is
bent.

Words are strings like ``"a b^-1 a^2"`` (``*`` also separates letters).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .certificate import FAIL, PASS, Certificate
from .errors import CentralizerViolation, Singular, UnknownGenerator
from .forms import Form, bending_matrix, centralizes_block, so_membership, su_membership
from .matrix import Matrix
from .numfield import ExtElement, QuadExtension

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(word) -> list[tuple[str, int]]:
    """``"a b^-1"`` -> [("a", 1), ("b", -1)]; lists of pairs pass through."""
    if not isinstance(word, str):
        return [(str(g), int(e)) for g, e in word]
    out = []
    for tok in word.replace("*", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"malformed letter {tok!r} in word {word!r}")
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp:
            out.append((m.group(1), exp))
    return out


def format_word(word: list[tuple[str, int]]) -> str:
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in word)


def word_generators(word) -> set[str]:
    return {g for g, _ in parse_word(word)}


def evaluate_word(rep: dict[str, Matrix], word, _inverses: dict | None = None) -> Matrix:
    letters = parse_word(word)
    if not rep:
        raise UnknownGenerator("empty representation")
    size = next(iter(rep.values())).n
    inverses = {} if _inverses is None else _inverses
    acc = Matrix.identity(size)
    for g, e in letters:
        if g not in rep:
            raise UnknownGenerator(g)
        if e > 0:
            m = rep[g]
        else:
            if g not in inverses:
                inverses[g] = rep[g].inverse()
            m = inverses[g]
        for _ in range(abs(e)):
            acc = acc * m
    return acc


@dataclass
class Decomposition:
    """Splitting data.

    ``kind`` is ``"amalgam"`` or ``"hnn"``.  For amalgams ``sides`` maps each
    generator to 1 or 2 and ``edge_words`` are the Lambda-words.  For HNN
    extensions ``stable`` names the stable letter and ``edge_words`` are the
    words whose images the bending element must centralize.
    """

    kind: str
    generators: list[str]
    edge_words: list = field(default_factory=list)
    relators: list = field(default_factory=list)
    sides: dict[str, int] = field(default_factory=dict)
    stable: str | None = None

    def __post_init__(self):
        if self.kind not in ("amalgam", "hnn"):
            raise ValueError(f"unknown decomposition kind {self.kind!r}")
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValueError("duplicate generator names")
        for w in list(self.edge_words) + list(self.relators):
            missing = word_generators(w) - gens
            if missing:
                raise UnknownGenerator(f"word {w!r} uses unknown generators {sorted(missing)}")
        if self.kind == "amalgam":
            if set(self.sides) != gens or not set(self.sides.values()) <= {1, 2}:
                raise ValueError("amalgam needs a side (1 or 2) for every generator")
        else:
            if self.stable not in gens:
                raise ValueError("HNN extension needs a stable letter among the generators")
            for w in self.edge_words:
                if self.stable in word_generators(w):
                    raise ValueError("edge words must not involve the stable letter")

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "generators": list(self.generators),
            "edge_words": [w if isinstance(w, str) else format_word(w) for w in self.edge_words],
            "relators": [w if isinstance(w, str) else format_word(w) for w in self.relators],
        }
        if self.kind == "amalgam":
            out["sides"] = dict(self.sides)
        else:
            out["stable"] = self.stable
        return out


@dataclass
class BendingInstance:
    form: Form
    base_rep: dict[str, Matrix]
    decomposition: Decomposition
    ext: QuadExtension
    unit: ExtElement

    def __post_init__(self):
        missing = set(self.decomposition.generators) - set(self.base_rep)
        if missing:
            raise UnknownGenerator(f"no image for generators {sorted(missing)}")
        for g in self.decomposition.generators:
            if self.base_rep[g].det() == 0:
                raise Singular(f"base image of {g!r} is singular")
            if not so_membership(self.base_rep[g], self.form):
                raise ValueError(f"base image of {g!r} is not in SO(J) over F")
        if not isinstance(self.unit, ExtElement):
            self.unit = self.ext.element(self.unit)

    def with_unit(self, unit) -> "BendingInstance":
        return BendingInstance(self.form, self.base_rep, self.decomposition, self.ext, unit)


def lift(A: Matrix, ext: QuadExtension) -> Matrix:
    """Entries as elements of L."""
    return A.map(lambda x: x if isinstance(x, ExtElement) else ext.element(x))


def bend(inst: BendingInstance) -> dict[str, Matrix]:
    dec = inst.decomposition
    B = bending_matrix(inst.unit, inst.form.n)
    base = {g: lift(inst.base_rep[g], inst.ext) for g in dec.generators}
    for w in dec.edge_words:
        img = evaluate_word(base, w)
        if not centralizes_block(B, img):
            raise CentralizerViolation(f"B_u does not commute with the image of {w!r}")
    if B.is_identity():
        return base
    out = {}
    if dec.kind == "amalgam":
        Binv = B.inverse()
        for g in dec.generators:
            out[g] = base[g] if dec.sides[g] == 1 else B * base[g] * Binv
    else:
        for g in dec.generators:
            out[g] = B * base[g] if g == dec.stable else base[g]
    return out


def matrix_to_json(A: Matrix):
    def entry(x):
        if hasattr(x, "to_json"):
            return x.to_json()
        return str(x)

    return [[entry(x) for x in row] for row in A.rows]


def verify_relators(rep: dict[str, Matrix], relators) -> Certificate:
    failures = []
    inverses: dict = {}
    for i, w in enumerate(relators):
        img = evaluate_word(rep, w, inverses)
        if not img.is_identity():
            failures.append({"index": i, "word": w if isinstance(w, str) else format_word(w),
                             "image": matrix_to_json(img)})
    return Certificate(
        check="relators",
        verdict=FAIL if failures else PASS,
        evidence={"checked": len(relators), "failures": failures},
    )


def _integral(A: Matrix) -> bool:
    for x in A.flat():
        if hasattr(x, "is_integral"):
            if not x.is_integral():
                return False
        elif x.denominator != 1:
            return False
    return True


def verify_su_containment(rep: dict[str, Matrix], J: Form) -> Certificate:
    """Every generator image lies in SU(J, O_L, tau); SU is a group, so the image does."""
    per = {}
    ok = True
    for g in sorted(rep):
        A = rep[g]
        member = su_membership(A, J)
        integral = _integral(A)
        per[g] = {"su_membership": member, "integral": integral}
        ok = ok and member and integral
    return Certificate(check="su_containment", verdict=PASS if ok else FAIL, evidence={"generators": per})
