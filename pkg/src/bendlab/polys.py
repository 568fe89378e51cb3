"""Dense univariate polynomials over an exact field, plus real root isolation.

Polynomials are plain lists of coefficients in ascending order of degree.
Coefficients may be ``Fraction`` or any of the number-field element types;
the only requirements are field arithmetic and exact comparison with 0.

Real roots are always those of the image under the distinguished (identity)
real embedding.  Signs of coefficients are decided exactly: zero is tested
symbolically, nonzero values by refining an interval until it excludes 0.
"""

from __future__ import annotations

from fractions import Fraction

from .intervals import Interval


def is_zero(x) -> bool:
    return x == 0


def strip(p: list) -> list:
    # plain ints would turn into floats at the first division
    p = [Fraction(c) if isinstance(c, int) else c for c in p]
    while p and is_zero(p[-1]):
        p.pop()
    return p


def degree(p: list) -> int:
    return len(strip(p)) - 1


def add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        if i < len(p) and i < len(q):
            out.append(p[i] + q[i])
        elif i < len(p):
            out.append(p[i])
        else:
            out.append(q[i])
    return strip(out)


def neg(p: list) -> list:
    return [-c for c in p]


def sub(p: list, q: list) -> list:
    return add(p, neg(q))


def scale(p: list, c) -> list:
    return strip([c * x for x in p])


def mul(p: list, q: list) -> list:
    p, q = strip(p), strip(q)
    if not p or not q:
        return []
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if is_zero(a):
            continue
        for j, b in enumerate(q):
            t = a * b
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return strip([0 if c is None else c for c in out])


def divmod_poly(p: list, q: list) -> tuple[list, list]:
    p, q = strip(p), strip(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    if len(r) - 1 < dq:
        return [], r
    quo = [0] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lead
        quo[k] = c
        if is_zero(c):
            continue
        for j in range(dq + 1):
            r[k + j] = r[k + j] - c * q[j]
    return strip(quo), strip(r[:dq])


def rem(p: list, q: list) -> list:
    return divmod_poly(p, q)[1]


def monic(p: list) -> list:
    p = strip(p)
    if not p:
        return p
    lead = p[-1]
    return [c / lead for c in p]


def gcd(p: list, q: list) -> list:
    p, q = strip(p), strip(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def derivative(p: list) -> list:
    return strip([c * k for k, c in enumerate(p)][1:])


def evaluate(p: list, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree_decomposition(p: list) -> list[tuple[list, int]]:
    """Yun's algorithm: returns [(g_k, k)] with p = lc * prod g_k^k, g_k monic squarefree coprime."""
    p = strip(p)
    if len(p) <= 1:
        return []
    out = []
    dp = derivative(p)
    a = gcd(p, dp)
    b = divmod_poly(p, a)[0]
    c = divmod_poly(dp, a)[0]
    d = sub(c, derivative(b))
    k = 1
    while degree(b) > 0:
        a = gcd(b, d)
        if degree(a) > 0:
            out.append((monic(a), k))
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = sub(c, derivative(b))
        k += 1
    return out


def squarefree_part(p: list) -> list:
    p = strip(p)
    if len(p) <= 1:
        return monic(p)
    return monic(divmod_poly(p, gcd(p, derivative(p)))[0])


# --- signs under the identity embedding -------------------------------------

def real_sign(x) -> int:
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    return x.sign()


def real_enclosure(x, bits: int) -> Interval:
    if isinstance(x, (int, Fraction)):
        return Interval(x)
    return x.embed(0, bits)


def sturm_sequence(p: list) -> list[list]:
    p = squarefree_part(p)
    seq = [p, derivative(p)]
    while seq[-1] and degree(seq[-1]) > 0:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(neg(r))
    return [s for s in seq if s]


def sign_variations(seq: list[list], x: Fraction) -> int:
    signs = [real_sign(evaluate(s, x)) for s in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(p: list) -> Fraction:
    """Rational B with every real root of the embedded polynomial in (-B, B)."""
    p = strip(p)
    lead = real_enclosure(p[-1], 64).abs()
    if lead.lo == 0:
        lead = real_enclosure(p[-1], 256).abs()
    m = Fraction(0)
    for c in p[:-1]:
        m = max(m, real_enclosure(c, 64).abs().hi)
    bound = 1 + m / lead.lo
    return Fraction(bound.__ceil__()) + 1


def count_roots(seq: list[list], a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b] of the first polynomial of a Sturm sequence."""
    return sign_variations(seq, a) - sign_variations(seq, b)


def _split_point(p: list, a: Fraction, b: Fraction) -> Fraction:
    # midpoint, nudged off exact roots
    m = (a + b) / 2
    step = 3
    while is_zero(evaluate(p, m)):
        m = a + (b - a) * Fraction(step - 1, 2 * step)
        step += 1
    return m


def isolate_real_roots(p: list) -> list[Interval]:
    """Disjoint isolating intervals (ascending) for the distinct real roots of p.

    Each interval [a, b] has p(a) != 0, p(b) != 0 and exactly one root in (a, b),
    except for exactly rational roots, which are returned as points [r, r].
    """
    p = squarefree_part(p)
    if degree(p) < 1:
        return []
    if degree(p) == 1:
        r = -p[0] / p[1]
        if isinstance(r, (int, Fraction)):
            return [Interval(r)]
    seq = sturm_sequence(p)
    B = root_bound(p)
    out: list[Interval] = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append(Interval(a, b))
            continue
        m = _split_point(p, a, b)
        stack.append((m, b))
        stack.append((a, m))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine_root(p: list, iv: Interval, width: Fraction) -> Interval:
    """Bisect an isolating interval of a squarefree polynomial down to ``width``."""
    a, b = iv.lo, iv.hi
    if a == b:
        return iv
    sa = real_sign(evaluate(p, a))
    while b - a > width:
        m = (a + b) / 2
        sm = real_sign(evaluate(p, m))
        if sm == 0:
            return Interval(m)
        if sm == sa:
            a = m
        else:
            b = m
    return Interval(a, b)


def count_in(p: list, iv: Interval) -> int:
    """Number of distinct real roots of p in the closed interval iv."""
    p = squarefree_part(p)
    if degree(p) < 1:
        return 0
    extra = 0
    if is_zero(evaluate(p, iv.lo)):
        extra = 1
    if iv.lo == iv.hi:
        return extra
    return count_roots(sturm_sequence(p), iv.lo, iv.hi) + extra
