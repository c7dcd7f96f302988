"""Dense univariate polynomials over a FiniteField.

A polynomial is a list of FieldElements, lowest coefficient first.
This backs root extraction (Cantor-Zassenhaus equal-degree splitting),
which the rest of the library uses for modular-polynomial neighbours,
torsion x-coordinates, subfield embeddings and class-polynomial seeds.
"""

from __future__ import annotations

from typing import Sequence

from .fields import FieldElement, FiniteField, stream

Poly = list[FieldElement]


def trim(f: Poly) -> Poly:
    while f and not f[-1]:
        f.pop()
    return f


def add(f: Poly, g: Poly, K: FiniteField) -> Poly:
    n = max(len(f), len(g))
    f = f + [K.zero()] * (n - len(f))
    g = g + [K.zero()] * (n - len(g))
    return trim([a + b for a, b in zip(f, g)])


def sub(f: Poly, g: Poly, K: FiniteField) -> Poly:
    n = max(len(f), len(g))
    f = f + [K.zero()] * (n - len(f))
    g = g + [K.zero()] * (n - len(g))
    return trim([a - b for a, b in zip(f, g)])


def mul(f: Poly, g: Poly, K: FiniteField) -> Poly:
    if not f or not g:
        return []
    res = [K.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    res[i + j] = res[i + j] + a * b
    return trim(res)


def divmod_(f: Poly, g: Poly, K: FiniteField) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    q = [K.zero()] * max(1, len(f) - len(g) + 1)
    inv_lead = g[-1].inverse()
    while len(r) >= len(g):
        c = r[-1] * inv_lead
        off = len(r) - len(g)
        q[off] = c
        if c:
            for i, b in enumerate(g):
                r[off + i] = r[off + i] - c * b
        r.pop()
        trim(r)
        if not r:
            break
    return trim(q), trim(r)


def mod(f: Poly, g: Poly, K: FiniteField) -> Poly:
    return divmod_(f, g, K)[1]


def mulmod(f: Poly, g: Poly, m: Poly, K: FiniteField) -> Poly:
    return mod(mul(f, g, K), m, K)


def powmod(f: Poly, e: int, m: Poly, K: FiniteField) -> Poly:
    result = [K.one()]
    f = mod(list(f), m, K)
    while e:
        if e & 1:
            result = mulmod(result, f, m, K)
        f = mulmod(f, f, m, K)
        e >>= 1
    return result


def compose_mod(f: Poly, g: Poly, m: Poly, K: FiniteField) -> Poly:
    """f(g(x)) mod m by Horner; cheap for the small degrees used here."""
    acc: Poly = []
    for c in reversed(f):
        acc = mulmod(acc, g, m, K)
        acc = add(acc, [c], K)
    return acc


def gcd(f: Poly, g: Poly, K: FiniteField) -> Poly:
    f, g = list(f), list(g)
    while g:
        f, g = g, mod(f, g, K)
    if f:
        inv = f[-1].inverse()
        f = [c * inv for c in f]
    return f


def evaluate(f: Poly, x: FieldElement) -> FieldElement:
    acc = x.field.zero()
    for c in reversed(f):
        acc = acc * x + c
    return acc


def x_power_q_mod(m: Poly, K: FiniteField) -> Poly:
    """x^|K| mod m via iterated p-power maps: x^(p^(k+1)) is the coefficient
    Frobenius of x^(p^k) composed with x^p (valid since m | m^p)."""
    xp = powmod([K.zero(), K.one()], K.p, m, K)
    acc = xp
    for _ in range(K.degree - 1):
        acc = compose_mod([c.frobenius() for c in acc], xp, m, K)
    return acc


def roots(f: Sequence[FieldElement], K: FiniteField, multiplicities: bool = False):
    """All roots of f in K (each once, sorted by label), found by splitting
    the product of linear factors.  With multiplicities=True returns
    (root, multiplicity) pairs instead."""
    f = trim([K.coerce(c) for c in f])
    if not f:
        raise ValueError("zero polynomial")
    found: list[FieldElement] = []
    if len(f) == 1:
        return []
    # isolate the product of the distinct linear factors
    xq = x_power_q_mod(f, K)
    lin = gcd(sub(xq, [K.zero(), K.one()], K), f, K)
    _split_all_linear(lin, K, found)
    found.sort(key=lambda r: r.to_int())
    if not multiplicities:
        return found
    out = []
    for r in found:
        m = 0
        g = list(f)
        while True:
            q, rem = divmod_(g, [-r, K.one()], K)
            if rem:
                break
            m += 1
            g = q
        out.append((r, m))
    return out


def _split_all_linear(f: Poly, K: FiniteField, out: list[FieldElement]) -> None:
    """f = product of distinct linear factors; append its roots to out."""
    f = trim(list(f))
    deg = len(f) - 1
    if deg <= 0:
        return
    if deg == 1:
        out.append(-f[0] / f[1])
        return
    if deg == 2:
        # quadratic formula (odd characteristic)
        from .fields import sqrt as fsqrt

        a, b, c = f[2], f[1], f[0]
        disc = b * b - 4 * a * c
        s = fsqrt(disc)
        assert s is not None, "split-field quadratic must have square discriminant"
        inv2a = (2 * a).inverse()
        out.append((-b + s) * inv2a)
        out.append((-b - s) * inv2a)
        return
    rng = stream("cz-split", K.p, K.degree, deg, f[0].to_int())
    e = (K.order - 1) // 2
    while True:
        r = [K.random_element(rng) for _ in range(deg)] + [K.one()]
        h = powmod(r, e, f, K)
        g = gcd(sub(h, [K.one()], K), f, K)
        if 0 < len(g) - 1 < deg:
            _split_all_linear(g, K, out)
            _split_all_linear(divmod_(f, g, K)[0], K, out)
            return


def squarefree_part(f: Poly, K: FiniteField) -> Poly:
    d = [c * (i + 1) for i, c in enumerate(f[1:])]
    g = gcd(f, trim(d), K)
    return divmod_(list(f), g, K)[0]
