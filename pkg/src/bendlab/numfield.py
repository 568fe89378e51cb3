"""Exact arithmetic in a totally real field F = Q[x]/(f) and in L = F(s), s^2 = u s - 1.

Elements of F are stored as integer numerators over a common positive
denominator in the power basis 1, theta, ..., theta^(d-1).  Because f is
monic with integer coefficients, reduction modulo f never introduces new
denominators, so products stay cheap.

L is kept as a degree-2 tower over F.  The Galois involution tau sends s to
u - s (= 1/s), so it acts on the pair of F-coordinates directly.

Real embeddings are certified: each real root of f carries an isolating
interval that is refined by bisection, and element values are enclosed by
exact rational interval arithmetic.  Enclosures at a deeper refinement level
are contained in shallower ones, so asking for more precision always returns a
nested interval.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt

import sympy

from . import polys
from .errors import (
    DivisionByZero,
    NegativeDiscriminant,
    NotTotallyReal,
    PrecisionBudgetExceeded,
    SquareDiscriminant,
    ZeroElement,
)
from .intervals import Interval, sqrt_ceil, sqrt_floor
from .matrix import charpoly_rows, det_rows

MAX_DEPTH = 8192


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class NumberField:
    """Totally real field Q[x]/(f) with a designated identity embedding.

    ``identity`` indexes the real roots of f in ascending order; by default the
    largest root is taken.  Internally place 0 is always the identity and the
    other places follow in ascending order of the root.
    """

    def __init__(self, min_poly, identity: int | None = None):
        coeffs = [int(c) for c in min_poly]
        if any(Fraction(c) != Fraction(m) for c, m in zip(coeffs, min_poly)):
            raise ValueError("minimal polynomial must have integer coefficients")
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        self.poly = tuple(coeffs)
        self.degree = d = len(coeffs) - 1
        if d >= 2:
            x = sympy.Symbol("x")
            if not sympy.Poly(list(reversed(coeffs)), x).is_irreducible:
                raise ValueError(f"{self.poly} is reducible over Q")
        roots = polys.isolate_real_roots([Fraction(c) for c in coeffs])
        if len(roots) != d:
            raise NotTotallyReal(f"{self.poly} has {len(roots)} real roots, expected {d}")
        if identity is None:
            identity = d - 1
        if not 0 <= identity < d:
            raise ValueError("identity embedding index out of range")
        self.identity_index = identity
        ordered = [roots[identity]] + [r for i, r in enumerate(roots) if i != identity]
        self._roots = [[iv] for iv in ordered]
        # theta^k mod f for k = d .. 2d-2, as integer vectors
        red = []
        cur = [-c for c in coeffs[:d]]
        for _ in range(max(d - 1, 0)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [a - top * c for a, c in zip(cur, coeffs[:d])]
        self._red = red
        self._disc = None

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls([0, 1])

    @property
    def places(self) -> int:
        return self.degree

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.poly == other.poly
            and self.identity_index == other.identity_index
        )

    def __hash__(self):
        return hash((self.poly, self.identity_index))

    def __repr__(self):
        return f"NumberField({list(self.poly)}, identity={self.identity_index})"

    # -- elements --------------------------------------------------------
    def __call__(self, coeffs) -> "AlgebraicNumber":
        return self.element(coeffs)

    def element(self, coeffs) -> "AlgebraicNumber":
        if isinstance(coeffs, AlgebraicNumber):
            return coeffs
        if isinstance(coeffs, (int, Fraction, str)):
            coeffs = [coeffs]
        fr = [_as_fraction(Fraction(c) if isinstance(c, str) else c) for c in coeffs]
        if len(fr) > self.degree:
            return self._from_poly(fr)
        fr = fr + [Fraction(0)] * (self.degree - len(fr))
        den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in fr), 1)
        return AlgebraicNumber(self, tuple(int(c * den) for c in fr), den)

    def _from_poly(self, fr: list[Fraction]) -> "AlgebraicNumber":
        r = polys.rem(fr, [Fraction(c) for c in self.poly])
        return self.element(r or [0])

    def zero(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, (0,) * self.degree, 1)

    def one(self) -> "AlgebraicNumber":
        return self.element([1])

    def gen(self) -> "AlgebraicNumber":
        if self.degree == 1:
            return self.element([-self.poly[0]])
        return self.element([0, 1])

    def _reduce(self, conv: list[int]) -> list[int]:
        d = self.degree
        out = conv[:d] + [0] * max(0, d - len(conv))
        for k in range(d, len(conv)):
            c = conv[k]
            if c:
                vec = self._red[k - d]
                for i in range(d):
                    out[i] += c * vec[i]
        return out

    # -- embeddings ------------------------------------------------------
    def root_interval(self, place: int, depth: int) -> Interval:
        """Isolating interval of the root at ``place`` after ``depth`` bisections."""
        if depth > MAX_DEPTH:
            raise PrecisionBudgetExceeded(f"root refinement depth {depth}")
        seq = self._roots[place]
        f = self.poly
        while len(seq) <= depth:
            iv = seq[-1]
            if iv.lo == iv.hi:
                seq.append(iv)
                continue
            m = iv.mid
            fm = polys.evaluate(f, m)
            if fm == 0:
                seq.append(Interval(m))
                continue
            flo = polys.evaluate(f, iv.lo)
            seq.append(Interval(iv.lo, m) if (fm > 0) != (flo > 0) else Interval(m, iv.hi))
        return seq[depth]

    def discriminant(self) -> int:
        """Discriminant of the defining polynomial."""
        if self._disc is None:
            d = self.degree
            if d == 1:
                self._disc = 1
            else:
                fp = self.element(polys.derivative([Fraction(c) for c in self.poly]))
                sign = -1 if (d * (d - 1) // 2) % 2 else 1
                self._disc = int(sign * fp.norm())
        return self._disc

    def to_json(self) -> dict:
        return {"poly": list(self.poly), "identity": self.identity_index}


class AlgebraicNumber:
    """Element of a NumberField, immutable."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, num: tuple, den: int = 1):
        if den < 0:
            num = tuple(-a for a in num)
            den = -den
        g = reduce(gcd, num, den)
        if g > 1:
            num = tuple(a // g for a in num)
            den //= g
        self.field = field
        self.num = num
        self.den = den

    # -- coercion --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return AlgebraicNumber(
                self.field, (other.numerator,) + (0,) * (self.field.degree - 1), other.denominator
            )
        return None

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return AlgebraicNumber(self.field, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        return AlgebraicNumber(
            self.field,
            tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return AlgebraicNumber(
                self.field, tuple(a * other.numerator for a in self.num), self.den * other.denominator
            )
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.field.degree == 1:
            return AlgebraicNumber(self.field, (self.num[0] * o.num[0],), self.den * o.den)
        a, b = self.num, o.num
        conv = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return AlgebraicNumber(self.field, tuple(self.field._reduce(conv)), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.field.degree == 1:
            return AlgebraicNumber(self.field, (self.den,), self.num[0])
        # extended Euclid in Q[x] against the minimal polynomial
        f = [Fraction(c) for c in self.field.poly]
        r0, r1 = f, polys.strip(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while polys.degree(r1) > 0:
            q, r = polys.divmod_poly(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, polys.sub(s0, polys.mul(q, s1))
        c = r1[0]
        return self.field.element([x / c for x in s1] or [0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        acc = self.field.one()
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, ExtElement):
            return NotImplemented
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.field.poly, self.num, self.den))

    def tau(self) -> "AlgebraicNumber":
        return self

    # -- linear-algebra views -------------------------------------------
    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of multiplication by self on the power basis (columns = images)."""
        d = self.field.degree
        cols = []
        basis = self.field.one()
        theta = self.field.gen() if d > 1 else None
        for j in range(d):
            cols.append((self * basis).coeffs)
            if theta is not None:
                basis = basis * theta
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def norm(self) -> Fraction:
        return det_rows(self.mult_matrix())

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def charpoly(self) -> list[Fraction]:
        return charpoly_rows(self.mult_matrix())

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.charpoly())

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    # -- embeddings ------------------------------------------------------
    def enclosure(self, place: int, depth: int) -> Interval:
        if self.field.degree == 1:
            return Interval(Fraction(self.num[0], self.den))
        theta = self.field.root_interval(place, depth)
        acc = Interval(0)
        for c in reversed(self.num):
            acc = acc * theta + c
        return acc / self.den

    def embed(self, place: int = 0, precision: int = 53) -> Interval:
        """Certified enclosure of sigma_place(self), width <= 2^-precision."""
        target = Fraction(1, 1 << precision)
        depth = 0
        while True:
            iv = self.enclosure(place, depth)
            if iv.width <= target:
                return iv
            depth += 4

    def sign(self, place: int = 0) -> int:
        if self.is_zero():
            return 0
        depth = 8
        while True:
            s = self.enclosure(place, depth).sign()
            if s is not None:
                return s
            depth *= 2
            if depth > MAX_DEPTH:
                raise PrecisionBudgetExceeded("sign determination")

    def signs(self) -> list[int]:
        return [self.sign(i) for i in range(self.field.degree)]

    def __float__(self):
        return float(self.embed(0, 60).mid)

    # -- square roots ----------------------------------------------------
    def sqrt(self) -> "AlgebraicNumber | None":
        """The square root in F with positive identity embedding, or None."""
        F = self.field
        if self.is_zero():
            return self
        if F.degree == 1:
            q = Fraction(self.num[0], self.den)
            if q < 0:
                return None
            a, b = isqrt(q.numerator), isqrt(q.denominator)
            if a * a == q.numerator and b * b == q.denominator:
                return F.element([Fraction(a, b)])
            return None
        if any(s < 0 for s in self.signs()):
            return None
        k = self.den
        target = self * (k * k)  # integral coordinates
        D = abs(F.discriminant())
        d = F.degree
        # trace-dual basis: coordinates c_j = sum_i sigma_i(y) sigma_i(beta_j)
        theta = F.gen()
        fprime = F.element(polys.derivative([Fraction(c) for c in F.poly]))
        b = [None] * d
        b[d - 1] = F.one()
        for j in range(d - 1, 0, -1):
            b[j - 1] = F.poly[j] + theta * b[j]
        betas = [bj / fprime for bj in b]
        bits = 32
        while bits <= 4096:
            vals = [target.embed(i, bits) for i in range(d)]
            roots = [Interval(sqrt_floor(v.lo, bits), sqrt_ceil(v.hi, bits)) for v in vals]
            beta_iv = [[bj.embed(i, bits) for i in range(d)] for bj in betas]
            undecided = False
            for mask in range(1 << (d - 1)):
                signs = [1] + [(-1 if (mask >> i) & 1 else 1) for i in range(d - 1)]
                coords = []
                ok = True
                for j in range(d):
                    cj = Interval(0)
                    for i in range(d):
                        cj = cj + roots[i] * signs[i] * beta_iv[j][i]
                    scaled = cj * D
                    lo, hi = scaled.lo.__ceil__(), scaled.hi.__floor__()
                    if lo > hi:
                        ok = False
                        break
                    if lo != hi:
                        undecided = True
                        ok = False
                        break
                    coords.append(Fraction(lo, D))
                if ok:
                    y = F.element(coords)
                    if y * y == target:
                        return y / k if y.sign() > 0 else -y / k
            if not undecided:
                return None
            bits *= 2
        raise PrecisionBudgetExceeded("square root extraction")

    # -- display / io ----------------------------------------------------
    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if i == 0 else (f"{c}*t" if i == 1 else f"{c}*t^{i}"))
        return "(" + (" + ".join(terms) if terms else "0") + ")"


class QuadExtension:
    """L = F(s) with s^2 - u s + 1 = 0 and s the root > 1 at the identity place.

    Real places of L are pairs (F-place, +1/-1) choosing the larger/smaller real
    root of x^2 - sigma(u) x + 1; complex places are the F-places where
    sigma(u)^2 - 4 < 0, with s taken in the upper half plane.
    """

    def __init__(self, base: NumberField, u):
        u = base.element(u) if not isinstance(u, AlgebraicNumber) else u
        self.base = base
        self.u = u
        self.disc = u * u - 4
        ds = self.disc.sign(0)
        if ds == 0:
            raise SquareDiscriminant("u^2 - 4 = 0: x^2 - u x + 1 has a double root")
        if ds < 0:
            raise NegativeDiscriminant("u^2 - 4 < 0 at the identity place")
        if self.disc.sqrt() is not None:
            raise SquareDiscriminant("u^2 - 4 is a square in F; x^2 - u x + 1 is reducible")
        disc_signs = self.disc.signs()
        self.real_places: list[tuple[int, int]] = [(0, 1), (0, -1)]
        self.complex_places: list[int] = []
        for i in range(1, base.degree):
            if disc_signs[i] > 0:
                self.real_places += [(i, 1), (i, -1)]
            else:
                self.complex_places.append(i)
        self._s_cache: dict[tuple[int, int], list[Interval]] = {}

    @property
    def degree(self) -> int:
        return 2 * self.base.degree

    def __eq__(self, other):
        return isinstance(other, QuadExtension) and self.base == other.base and self.u == other.u

    def __hash__(self):
        return hash((self.base, self.u))

    def __repr__(self):
        return f"QuadExtension({self.base!r}, u={self.u!r})"

    def __call__(self, a, b=0) -> "ExtElement":
        return self.element(a, b)

    def element(self, a, b=0) -> "ExtElement":
        if isinstance(a, ExtElement):
            return a
        return ExtElement(self, self.base.element(a), self.base.element(b))

    def zero(self) -> "ExtElement":
        return self.element(0)

    def one(self) -> "ExtElement":
        return self.element(1)

    @property
    def s(self) -> "ExtElement":
        return self.element(0, 1)

    def s_enclosure(self, place: tuple[int, int], depth: int) -> Interval:
        """Nested enclosures of the real embedding of s at a real place."""
        seq = self._s_cache.setdefault(place, [])
        i, e = place
        while len(seq) <= depth:
            k = len(seq)
            U = self.u.enclosure(i, k)
            D = self.disc.enclosure(i, k)
            bits = k + 16
            root = Interval(sqrt_floor(max(D.lo, Fraction(0)), bits), sqrt_ceil(max(D.hi, Fraction(0)), bits))
            raw = (U + root) / 2 if e > 0 else (U - root) / 2
            seq.append(raw if not seq else raw.intersect(seq[-1]))
        return seq[depth]

    def complex_s(self, place: int, bits: int) -> tuple[Interval, Interval]:
        """(Re, Im) enclosures of s at a complex place (Im > 0)."""
        U = self.u.embed(place, bits)
        D = (-self.disc).embed(place, bits)
        im = Interval(sqrt_floor(max(D.lo, Fraction(0)), bits), sqrt_ceil(D.hi, bits)) / 2
        return U / 2, im

    def to_json(self) -> dict:
        return {"trace": self.u.to_json()}


class ExtElement:
    """a + b s in L = F(s)."""

    __slots__ = ("ext", "a", "b")

    def __init__(self, ext: QuadExtension, a: AlgebraicNumber, b: AlgebraicNumber):
        self.ext = ext
        self.a = a
        self.b = b

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            return other
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return ExtElement(self.ext, self.ext.base.element(other) if not isinstance(other, AlgebraicNumber) else other, self.ext.base.zero())
        return None

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def in_base(self) -> bool:
        return self.b.is_zero()

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElement(self.ext, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.ext, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElement(self.ext, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return ExtElement(self.ext, self.a * other, self.b * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, o.a, o.b
        if b.is_zero():
            return ExtElement(self.ext, a * c, a * d)
        if d.is_zero():
            return ExtElement(self.ext, a * c, b * c)
        bd = b * d
        # s^2 = u s - 1
        return ExtElement(self.ext, a * c - bd, a * d + b * c + bd * self.ext.u)

    __rmul__ = __mul__

    def tau(self) -> "ExtElement":
        return ExtElement(self.ext, self.a + self.b * self.ext.u, -self.b)

    def norm(self) -> AlgebraicNumber:
        """Relative norm x tau(x) in F."""
        a, b = self.a, self.b
        return a * a + a * b * self.ext.u + b * b

    def inverse(self) -> "ExtElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        n_inv = self.norm().inverse()
        t = self.tau()
        return ExtElement(self.ext, t.a * n_inv, t.b * n_inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            if other == 0:
                raise DivisionByZero("division by zero")
            inv = (1 / Fraction(other)) if not isinstance(other, AlgebraicNumber) else other.inverse()
            return self * inv
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        acc = self.ext.one()
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if self.b.is_zero() else hash((self.a, self.b))

    def is_unitary(self) -> bool:
        if self.is_zero():
            raise ZeroElement("zero is not unitary")
        return self.norm() == 1

    # -- rational views --------------------------------------------------
    def mult_matrix(self) -> list[list[Fraction]]:
        """Multiplication by self on the Q-basis theta^j, theta^j s."""
        F = self.ext.base
        d = F.degree
        basis = []
        p = F.one()
        theta = F.gen() if d > 1 else None
        for _ in range(d):
            basis.append(ExtElement(self.ext, p, F.zero()))
            if theta is not None:
                p = p * theta
        basis += [ExtElement(self.ext, F.zero(), e.a) for e in list(basis)]
        cols = []
        for e in basis:
            img = self * e
            cols.append(list(img.a.coeffs) + list(img.b.coeffs))
        n = 2 * d
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial over Q (degree [L:Q])."""
        return charpoly_rows(self.mult_matrix())

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.charpoly())

    # -- embeddings ------------------------------------------------------
    def enclosure(self, place: int | tuple[int, int], depth: int) -> Interval:
        pl = self.ext.real_places[place] if isinstance(place, int) else place
        i = pl[0]
        A = self.a.enclosure(i, depth)
        if self.b.is_zero():
            return A
        return A + self.b.enclosure(i, depth) * self.ext.s_enclosure(pl, depth)

    def embed(self, place: int | tuple[int, int] = 0, precision: int = 53) -> Interval:
        """Certified enclosure at a real place of L, width <= 2^-precision.

        ``place`` indexes ``ext.real_places``; 0 is the identity (s > 1).
        """
        target = Fraction(1, 1 << precision)
        depth = 0
        while True:
            iv = self.enclosure(place, depth)
            if iv.width <= target:
                return iv
            depth += 4
            if depth > MAX_DEPTH:
                raise PrecisionBudgetExceeded("embedding refinement")

    def complex_embed(self, place: int, precision: int = 53) -> tuple[Interval, Interval]:
        """(Re, Im) enclosures at the complex place over F-place ``place``."""
        bits = precision + 8
        while True:
            re_s, im_s = self.ext.complex_s(place, bits)
            A = self.a.embed(place, bits)
            B = self.b.embed(place, bits)
            re, im = A + B * re_s, B * im_s
            if re.width <= Fraction(1, 1 << precision) and im.width <= Fraction(1, 1 << precision):
                return re, im
            bits += 16
            if bits > MAX_DEPTH:
                raise PrecisionBudgetExceeded("complex embedding")

    def modulus_squared(self, place: int, precision: int = 53) -> Interval:
        re, im = self.complex_embed(place, precision + 4)
        return re.square() + im.square()

    def sign(self, place: int | tuple[int, int] = 0) -> int:
        if self.is_zero():
            return 0
        if self.b.is_zero():
            pl = self.ext.real_places[place] if isinstance(place, int) else place
            return self.a.sign(pl[0])
        depth = 8
        while True:
            s = self.enclosure(place, depth).sign()
            if s is not None:
                return s
            depth *= 2
            if depth > MAX_DEPTH:
                raise PrecisionBudgetExceeded("sign determination")

    def __float__(self):
        return float(self.embed(0, 60).mid)

    def to_json(self) -> list[list[str]]:
        return [self.a.to_json(), self.b.to_json()]

    def __repr__(self):
        if self.b.is_zero():
            return repr(self.a)
        return f"({self.a!r} + {self.b!r}*s)"


# -- module-level operations ---------------------------------------------

def field_arith(x, y, op: str):
    """add/sub/mul/div of two field elements, exact."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if y == 0:
            raise DivisionByZero("division by zero")
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def embed(x, place=0, precision: int = 53) -> Interval:
    if precision < 8:
        raise ValueError("precision must be >= 8 bits")
    if isinstance(x, (int, Fraction)):
        return Interval(x)
    return x.embed(place, precision)


def tau(x):
    return x.tau() if hasattr(x, "tau") else x


def is_unitary(x: ExtElement) -> bool:
    return x.is_unitary()
