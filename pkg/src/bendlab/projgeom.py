"""Convex projective geometry: cross ratios, Hilbert distances and cusp models.

Points are homogeneous coordinate vectors.  Distances come back as certified
intervals: quadric domains (Klein balls, Omega_0) have chord endpoints given
by a quadratic equation and the distance reduces to
log((|B| + sqrt(B^2 - Q(x)Q(y))) / sqrt(Q(x)Q(y))), evaluated in interval
arithmetic; for Omega_1 the chord endpoints are bracketed by bisection on the
concave defining function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath.libmp import to_rational

from .errors import (
    CoincidentPoints,
    DimensionTooSmall,
    NotCollinear,
    NotOnLeaf,
    PointOnBoundary,
    PointOutside,
    PrecisionBudgetExceeded,
    ZeroVector,
)
from .intervals import Interval, to_iv
from .matrix import Matrix, rank_rows

MAX_PREC = 4096


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class ProjPoint:
    """Homogeneous coordinates of a point of P^n (or S^n when ``sphere``)."""

    __slots__ = ("coords", "sphere")

    def __init__(self, coords: Sequence, sphere: bool = False):
        self.coords = tuple(c if isinstance(c, Interval) else _q(c) for c in coords)
        if all(c == 0 for c in self.coords):
            raise ZeroVector("all coordinates are zero")
        self.sphere = sphere

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def in_chart(self) -> bool:
        return self.coords[-1] != 0

    def normalized(self) -> "ProjPoint":
        """Scale so that the last coordinate is 1 (projective model only)."""
        last = self.coords[-1]
        if last == 0 or last == 1:
            return self
        if self.sphere and last < 0:
            raise ValueError("sphere-model point with negative last coordinate has no positive rescaling to 1")
        return ProjPoint([c / last for c in self.coords], self.sphere)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint) or len(other.coords) != len(self.coords):
            return False
        return rank_rows([list(self.coords), list(other.coords)]) == 1 and (
            not self.sphere or _same_ray(self.coords, other.coords)
        )

    def __hash__(self):
        return hash(self.normalized().coords) if self.in_chart() else hash(len(self.coords))

    def __repr__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"


def _same_ray(a, b) -> bool:
    i = next(k for k, x in enumerate(a) if x != 0)
    return (a[i] > 0) == (b[i] > 0)


def _as_point(p) -> ProjPoint:
    if isinstance(p, ProjPoint):
        return p
    if isinstance(p, (int, Fraction, float)):
        return ProjPoint([p, 1])
    return ProjPoint(p)


def apply(g: Matrix, p: ProjPoint) -> ProjPoint:
    return ProjPoint(g.apply(p.coords), p.sphere)


# -- cross ratio -----------------------------------------------------------------

def _line_coords(a: ProjPoint, b: ProjPoint, pts: list[ProjPoint]) -> list[tuple[Fraction, Fraction]]:
    """Coordinates (lam, mu) with p = lam a + mu b for each p."""
    m = len(a.coords)
    for i in range(m):
        for j in range(i + 1, m):
            det = a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i]
            if det != 0:
                break
        else:
            continue
        break
    out = []
    for p in pts:
        lam = (p.coords[i] * b.coords[j] - p.coords[j] * b.coords[i]) / det
        mu = (a.coords[i] * p.coords[j] - a.coords[j] * p.coords[i]) / det
        out.append((lam, mu))
    return out


def _det2(p, q):
    return p[0] * q[1] - p[1] * q[0]


def cross_ratio(a, x, y, b) -> Fraction:
    """[a:x:y:b] = |b-x||y-a| / (|x-a||b-y|), computed from 2x2 determinants.

    Scalars are read as points [t:1] of the projective line.
    """
    a, x, y, b = (_as_point(p) for p in (a, x, y, b))
    if len({len(p.coords) for p in (a, x, y, b)}) != 1:
        raise NotCollinear("points live in different dimensions")
    if rank_rows([list(p.coords) for p in (a, x, y, b)]) > 2:
        raise NotCollinear("points do not lie on one projective line")
    for p, q in ((a, x), (a, y), (a, b), (x, b), (y, b)):
        if p == q:
            raise CoincidentPoints(f"{p!r} and {q!r} coincide")
    if x == y:
        return Fraction(1)
    A, X, Y, Bc = _line_coords(a, b, [a, x, y, b])
    return (_det2(Bc, X) * _det2(Y, A)) / (_det2(X, A) * _det2(Bc, Y))


# -- domains -----------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """The open interval (lo, hi) of the real line, points given as scalars."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _q(self.lo))
        object.__setattr__(self, "hi", _q(self.hi))
        if not self.lo < self.hi:
            raise ValueError("empty segment")


@dataclass(frozen=True)
class KleinBall:
    """{x : x^t J x < 0} for a diagonal rational form of signature (n, 1)."""

    diagonal: tuple

    def __post_init__(self):
        d = tuple(_q(c) for c in self.diagonal)
        object.__setattr__(self, "diagonal", d)
        if sum(1 for c in d if c < 0) != 1 or any(c == 0 for c in d):
            raise ValueError("Klein ball needs a nondegenerate form of signature (n, 1)")

    def quad(self, x) -> Fraction:
        return sum((c * v * v for c, v in zip(self.diagonal, x)), Fraction(0))

    def bilinear(self, x, y) -> Fraction:
        return sum((c * v * w for c, v, w in zip(self.diagonal, x, y)), Fraction(0))

    def sheet(self, x) -> int:
        # the negative direction decides the nappe
        k = next(i for i, c in enumerate(self.diagonal) if c < 0)
        return 1 if x[k] > 0 else -1


@dataclass(frozen=True)
class Omega0:
    """x_1 x_{n+1} > (x_2^2 + ... + x_n^2)/2, projectively a Klein ball."""

    n: int

    def quad(self, x) -> Fraction:
        return sum((v * v for v in x[1:-1]), Fraction(0)) / 2 - x[0] * x[-1]

    def bilinear(self, x, y) -> Fraction:
        return (sum((v * w for v, w in zip(x[1:-1], y[1:-1])), Fraction(0))
                - x[0] * y[-1] - x[-1] * y[0]) / 2

    def sheet(self, x) -> int:
        return 1 if x[0] + x[-1] > 0 else -1


@dataclass(frozen=True)
class Omega1:
    """x_1 x_{n+1} > -log|x_2| + (x_3^2 + ... + x_n^2)/2 and x_2 x_{n+1} > 0.

    The defining inequality is not homogeneous, so membership is evaluated in
    the affine chart x_{n+1} = 1.
    """

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DimensionTooSmall("Omega_1 needs n >= 2")


def in_omega0(p: ProjPoint) -> bool:
    x = p.coords
    return x[0] * x[-1] > sum((v * v for v in x[1:-1]), Fraction(0)) / 2


def _phi1(ctx, x):
    """x_1 + log x_2 - (x_3^2 + ... + x_n^2)/2 at a chart point (interval valued)."""
    acc = x[0] + ctx.log(x[1])
    for v in x[2:-1]:
        acc = acc - v * v / 2
    return acc


def omega1_membership(p: ProjPoint, prec: int = 80) -> int:
    """+1 inside, -1 outside, 0 on the boundary (exact when decidable)."""
    if p.coords[-1] == 0:
        return -1
    x = p.normalized().coords
    if x[1] <= 0:
        return -1
    rest = x[0] - sum((v * v for v in x[2:-1]), Fraction(0)) / 2
    if x[1] == 1:
        return (rest > 0) - (rest < 0)
    # log of a rational other than 1 is irrational, so the sign is never 0
    while prec <= MAX_PREC:
        ctx = mpmath.iv
        ctx.prec = prec
        val = to_iv(Interval(rest), ctx) + ctx.log(to_iv(Interval(x[1]), ctx))
        if val.a > 0:
            return 1
        if val.b < 0:
            return -1
        prec *= 2
    raise PrecisionBudgetExceeded("Omega_1 membership")


def _raw_to_fraction(raw) -> Fraction:
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def _iv_to_interval(v) -> Interval:
    # read the raw endpoints; going through mpmath.mpf would round to 53 bits
    lo, hi = v._mpi_
    return Interval(_raw_to_fraction(lo), _raw_to_fraction(hi))


def _quadric_distance(domain, x: ProjPoint, y: ProjPoint, precision: int) -> Interval:
    xs, ys = list(x.coords), list(y.coords)
    for p in (xs, ys):
        q = domain.quad(p)
        if q == 0:
            raise PointOnBoundary(f"{p} lies on the boundary")
        if q > 0:
            raise PointOutside(f"{p} lies outside the domain")
    if domain.sheet(xs) < 0:
        xs = [-c for c in xs]
    if domain.sheet(ys) < 0:
        ys = [-c for c in ys]
    Qx, Qy = domain.quad(xs), domain.quad(ys)
    B = domain.bilinear(xs, ys)
    P = Qx * Qy
    D = B * B - P
    if D <= 0:
        return Interval(0)
    prec = precision + 32
    while prec <= MAX_PREC:
        ctx = mpmath.iv
        ctx.prec = prec
        Bi = to_iv(Interval(abs(B)), ctx)
        val = ctx.log((Bi + ctx.sqrt(to_iv(Interval(D), ctx))) / ctx.sqrt(to_iv(Interval(P), ctx)))
        iv = _iv_to_interval(val)
        if iv.width <= Fraction(1, 1 << precision):
            return Interval(max(iv.lo, Fraction(0)), iv.hi)
        prec *= 2
    raise PrecisionBudgetExceeded("Hilbert distance")


def _segment_distance(seg: Segment, x, y, precision: int) -> Interval:
    x, y = _q(x), _q(y)
    for p in (x, y):
        if p == seg.lo or p == seg.hi:
            raise PointOnBoundary(f"{p} is an endpoint")
        if not seg.lo < p < seg.hi:
            raise PointOutside(f"{p} is outside ({seg.lo}, {seg.hi})")
    if x == y:
        return Interval(0)
    if x > y:
        x, y = y, x
    cr = cross_ratio(seg.lo, x, y, seg.hi)
    return _half_log(cr, precision)


def _half_log(cr: Fraction, precision: int) -> Interval:
    prec = precision + 32
    while prec <= MAX_PREC:
        ctx = mpmath.iv
        ctx.prec = prec
        iv = _iv_to_interval(ctx.log(to_iv(Interval(cr), ctx)) / 2)
        if iv.width <= Fraction(1, 1 << precision):
            return iv
        prec *= 2
    raise PrecisionBudgetExceeded("Hilbert distance")


def _omega1_root(x, d, t_in: Fraction, direction: int, prec: int, width: Fraction):
    """Bracket the boundary crossing of the chord x + t d beyond t_in.

    Returns (lo, hi) rationals with the point inside at lo and outside at hi
    (ordered along ``direction``), or None when the chord stays inside up to
    the point at infinity.
    """
    n_rest = len(x) - 3

    def point(t):
        return [a + t * b for a, b in zip(x, d)]

    def sign(t):
        return omega1_membership(ProjPoint(point(t)), prec)

    # unbounded cases, decided exactly: with no quadratic term and x_1, x_2
    # nondecreasing along the ray the defining function never drops
    e = [direction * c for c in d]
    if all(e[2 + i] == 0 for i in range(n_rest)) and e[0] >= 0 and e[1] >= 0:
        return None
    inside = t_in
    step = Fraction(direction)
    outside = inside + step
    while sign(outside) > 0:
        inside = outside
        step *= 2
        outside = inside + step
    # x_2 must stay positive: never step past the zero of x_2
    while abs(outside - inside) > width:
        mid = (inside + outside) / 2
        if sign(mid) > 0:
            inside = mid
        else:
            outside = mid
    return inside, outside


def _omega1_distance(x: ProjPoint, y: ProjPoint, precision: int) -> Interval:
    for p in (x, y):
        s = omega1_membership(p)
        if s == 0:
            raise PointOnBoundary(f"{p!r} lies on the boundary of Omega_1")
        if s < 0:
            raise PointOutside(f"{p!r} lies outside Omega_1")
    xs = list(x.normalized().coords)
    ys = list(y.normalized().coords)
    if xs == ys:
        return Interval(0)
    d = [b - a for a, b in zip(xs, ys)]
    width = Fraction(1, 1 << (precision + 8))
    prec = precision + 32
    while prec <= MAX_PREC:
        # parameter t: x at 0, y at 1; a at t_a < 0, b at t_b > 1
        ra = _omega1_root(xs, d, Fraction(0), -1, prec, width)
        rb = _omega1_root(xs, d, Fraction(1), 1, prec, width)
        ta = None if ra is None else Interval(ra[1], ra[0])
        tb = None if rb is None else Interval(rb[0], rb[1])
        if ta is None and tb is None:
            raise PointOutside("chord is not bounded: domain is not properly convex along it")
        if tb is None:
            cr = (1 - ta) / (-ta)
        elif ta is None:
            cr = tb / (tb - 1)
        else:
            cr = (tb * (1 - ta)) / ((-ta) * (tb - 1))
        ctx = mpmath.iv
        ctx.prec = prec
        iv = _iv_to_interval(ctx.log(to_iv(cr, ctx)) / 2)
        if iv.width <= Fraction(1, 1 << precision):
            return Interval(max(iv.lo, Fraction(0)), iv.hi)
        width /= 1 << 16
        prec *= 2
    raise PrecisionBudgetExceeded("Hilbert distance in Omega_1")


def hilbert_distance(domain, x, y, precision: int = 53) -> Interval:
    """Certified enclosure of d(x, y) = log([a:x:y:b]) / 2, width <= 2^-precision."""
    if isinstance(domain, Segment):
        return _segment_distance(domain, x, y, precision)
    x, y = _as_point(x), _as_point(y)
    if isinstance(domain, (KleinBall, Omega0)):
        return _quadric_distance(domain, x, y, precision)
    if isinstance(domain, Omega1):
        return _omega1_distance(x, y, precision)
    raise TypeError(f"unsupported domain {domain!r}")


# -- generalized cusps -----------------------------------------------------------

@dataclass(frozen=True)
class CuspModel:
    type: int
    n: int

    def __post_init__(self):
        if self.type not in (0, 1):
            raise ValueError("cusp type must be 0 or 1")
        if self.type == 1 and self.n < 2:
            raise DimensionTooSmall("type 1 cusps need n >= 2")
        if self.type == 0 and self.n < 1:
            raise DimensionTooSmall("type 0 cusps need n >= 1")


@dataclass
class CuspElement:
    matrix: Matrix
    parabolic: bool
    in_group: bool


def cusp_translation(model: CuspModel, v: Sequence, u=0) -> CuspElement:
    """Exact matrix of the block form for P_0 (type 0) or P_1 (type 1).

    For type 1 the diagonal entry e^u is only rational at u = 0.  For u != 0
    the entry is replaced by the exact parameter u itself, as in the Zariski
    closure of P_1; such a matrix lies in that closure but not in P_1, and
    ``in_group`` is False.  ``p1_element`` gives the genuine element with a
    certified enclosure of e^u.
    """
    n = model.n
    v = [_q(c) for c in v]
    half = sum((c * c for c in v), Fraction(0)) / 2
    if model.type == 0:
        if len(v) != n - 1:
            raise ValueError(f"type 0 needs v of length {n - 1}")
        rows = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        for i in range(n + 1):
            rows[i][i] = Fraction(1)
        for i, c in enumerate(v):
            rows[0][1 + i] = c
            rows[1 + i][n] = c
        rows[0][n] = half
        return CuspElement(Matrix(rows), parabolic=True, in_group=True)
    if len(v) != n - 2:
        raise ValueError(f"type 1 needs v of length {n - 2}")
    u = _q(u)
    diag = Fraction(1) if u == 0 else u
    return CuspElement(
        p1bar_element(diag, -u + half, v),
        parabolic=(u == 0),
        in_group=(u == 0),
    )


def p1bar_element(lam, w, v: Sequence) -> Matrix:
    """Element of the Zariski closure of P_1 with diagonal lam, corner w, translation v."""
    lam = lam if isinstance(lam, Interval) else _q(lam)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    v = [_q(c) for c in v]
    m = len(v) + 3
    rows = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        rows[i][i] = Fraction(1)
    rows[1][1] = lam
    for i, c in enumerate(v):
        rows[0][2 + i] = c
        rows[2 + i][m - 1] = c
    rows[0][m - 1] = w if isinstance(w, Interval) else _q(w)
    return Matrix(rows)


def p1_element(u, v: Sequence, bits: int = 80) -> Matrix:
    """Element of P_1 with e^u enclosed in a rational interval of width <= 2^-bits."""
    u = _q(u)
    v = [_q(c) for c in v]
    half = sum((c * c for c in v), Fraction(0)) / 2
    if u == 0:
        lam = Fraction(1)
    else:
        ctx = mpmath.iv
        ctx.prec = bits + 16
        lam = _iv_to_interval(ctx.exp(to_iv(Interval(u), ctx)))
    return p1bar_element(lam, -u + half, v)


def _leaf_value_exact(model: CuspModel, x) -> Fraction | None:
    """Leaf parameter of a chart point when it is rational, else None."""
    if model.type == 0:
        return x[0] - sum((c * c for c in x[1:-1]), Fraction(0)) / 2
    if x[1] == 1:
        return x[0] - sum((c * c for c in x[2:-1]), Fraction(0)) / 2
    return None


def _leaf_value_interval(model: CuspModel, x, prec: int):
    ctx = mpmath.iv
    ctx.prec = prec
    xi = [to_iv(c if isinstance(c, Interval) else Interval(c), ctx) for c in x]
    if model.type == 0:
        acc = xi[0]
        for c in xi[1:-1]:
            acc = acc - c * c / 2
        return acc
    return _phi1(ctx, xi)


def horosphere_check(model: CuspModel, c, p: ProjPoint, g: Matrix, bits: int = 40) -> bool:
    """Does g map the point p of the leaf H_c back into H_c?

    Exact whenever the image has rational coordinates; for interval entries
    the answer is True when the image's leaf parameter is enclosed within
    2^-bits of c.
    """
    c = _q(c)
    if c <= 0:
        raise ValueError("leaf parameter must be positive")
    if p.coords[-1] == 0:
        raise NotOnLeaf("point is not in the affine chart")
    x = p.normalized().coords
    if len(x) != model.n + 1:
        raise ValueError("point has the wrong dimension")
    if model.type == 1 and x[1] <= 0:
        raise NotOnLeaf("leaves of Omega_1 have x_2 > 0")
    val = _leaf_value_exact(model, x)
    if val is not None:
        if val != c:
            raise NotOnLeaf(f"point is on H_{val}, not H_{c}")
    else:
        iv = _leaf_value_interval(model, x, bits + 40)
        if not (iv.a <= mpmath.mpf(c.numerator) / c.denominator <= iv.b) or iv.delta > mpmath.mpf(2) ** -bits:
            raise NotOnLeaf(f"point is not on H_{c}")

    img = g.apply(x)
    last = img[-1]
    if isinstance(last, Interval):
        if last.contains_zero():
            return False
    elif last == 0:
        return False
    y = [e / last for e in img]
    exact = not any(isinstance(e, Interval) for e in y)
    if model.type == 1:
        x2 = y[1]
        if (x2.hi if isinstance(x2, Interval) else x2) <= 0:
            return False
    if exact:
        if model.type == 0:
            return _leaf_value_exact(model, y) == c
        if y[1] == 1:
            return _leaf_value_exact(model, y) == c
        # c - (rational part) would have to equal log x_2 with x_2 rational and != 1,
        # which is irrational by Lindemann-Weierstrass
        return False
    iv = _leaf_value_interval(model, y, bits + 40)
    cm = mpmath.mpf(c.numerator) / c.denominator
    return bool(iv.a <= cm <= iv.b and iv.delta <= mpmath.mpf(2) ** -bits)


# -- orbits and duality -----------------------------------------------------------

def p1bar_tangent_basis(n: int) -> list[Matrix]:
    """Tangent directions at the identity: v-translations, the corner w, the diagonal u."""
    if n < 2:
        raise DimensionTooSmall("n must be >= 2")
    m = n + 1

    def E(i, j):
        rows = [[0] * m for _ in range(m)]
        rows[i][j] = 1
        return rows

    out = []
    for i in range(n - 2):
        a, b = E(0, 2 + i), E(2 + i, n)
        out.append(Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]))
    out.append(Matrix(E(0, n)))
    out.append(Matrix(E(1, 1)))
    return out


@dataclass
class OrbitRank:
    rank: int
    open: bool


def orbit_openness(x, n: int) -> OrbitRank:
    """Rank of the orbit map of the closure of P_1 at [x], as a map into T_[x] P^n."""
    p = x if isinstance(x, ProjPoint) else ProjPoint(x)
    if len(p.coords) != n + 1:
        raise ValueError("point dimension does not match n")
    vecs = [X.apply(p.coords) for X in p1bar_tangent_basis(n)]
    r = rank_rows(vecs + [list(p.coords)]) - 1
    return OrbitRank(rank=r, open=(r == n))


def dual_element(g: Matrix) -> Matrix:
    """(g^-1)^t, the action on the dual projective space."""
    return g.inverse().transpose()


# -- pictures --------------------------------------------------------------------

def _svg_polyline(points, stroke: str, width: float = 1.0) -> str:
    pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
    return f'<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width}"/>'


def cusp_section_svg(cusp_type: int, leaves: Sequence = (0.5, 1, 2, 3), size: int = 400) -> str:
    """SVG of the n = 2 section (chart x_3 = 1) of Omega_0 or Omega_1 with horosphere leaves.

    Omega_0: x_1 > x_2^2/2, leaves x_1 = x_2^2/2 + c.
    Omega_1: x_2 > 0 and x_1 > -log x_2, leaves x_1 = c - log x_2.
    """
    if cusp_type not in (0, 1):
        raise ValueError("cusp type must be 0 or 1")
    xmin, xmax, ymin, ymax = (-3.0, 3.0, -1.0, 6.0) if cusp_type == 0 else (0.0, 4.0, -2.0, 6.0)

    def to_px(h, v):
        # horizontal axis x_2, vertical axis x_1
        return ((h - xmin) / (xmax - xmin) * size, size - (v - ymin) / (ymax - ymin) * size)

    def curve(f, lo, hi, steps=200):
        out = []
        for k in range(steps + 1):
            h = lo + (hi - lo) * k / steps
            v = f(h)
            if ymin - 1 <= v <= ymax + 1:
                out.append(to_px(h, v))
        return out

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    if cusp_type == 0:
        parts.append(_svg_polyline(curve(lambda h: h * h / 2, xmin, xmax), "black", 2))
        for c in leaves:
            parts.append(_svg_polyline(curve(lambda h, c=c: h * h / 2 + c, xmin, xmax), "steelblue"))
    else:
        lo = 1e-3
        parts.append(_svg_polyline(curve(lambda h: -math.log(h), lo, xmax), "black", 2))
        for c in leaves:
            parts.append(_svg_polyline(curve(lambda h, c=c: c - math.log(h), lo, xmax), "darkorange"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
