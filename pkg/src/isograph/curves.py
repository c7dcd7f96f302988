"""Short Weierstrass curves y^2 = x^3 + ax + b over finite fields.

Provides the group law, j-invariants, exact point counts, supersingularity
tests, the distinguished model on which the p^2-power Frobenius acts as
the scalar -p, automorphisms, torsion bases and isomorphism search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
import sympy

from .errors import InvariantBreach, UsageError
from .fields import GF, FieldElement, FiniteField, embedding, sqrt, stream


class Curve:
    __slots__ = ("field", "a", "b")

    def __init__(self, a: FieldElement, b: FieldElement):
        if a.field != b.field:
            raise UsageError("curve coefficients from different fields")
        self.field = a.field
        self.a = a
        self.b = b
        if not (4 * a**3 + 27 * b**2):
            raise UsageError("singular curve: 4a^3 + 27b^2 = 0")

    def __repr__(self):
        return f"Curve(y^2 = x^3 + {self.a.to_int()}x + {self.b.to_int()} over {self.field})"

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and self.field == other.field
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.field, self.a.c, self.b.c))

    def infinity(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def point(self, x, y) -> "CurvePoint":
        x = self.field.coerce(x)
        y = self.field.coerce(y)
        if y * y != x**3 + self.a * x + self.b:
            raise UsageError("point not on curve")
        return CurvePoint(self, x, y)

    def j_invariant(self) -> FieldElement:
        a3 = 4 * self.a**3
        return 1728 * a3 / (a3 + 27 * self.b**2)

    def base_change(self, K: FiniteField) -> "Curve":
        emb = embedding(self.field, K)
        return Curve(emb(self.a), emb(self.b))

    def frobenius_conjugate(self) -> "Curve":
        """Coefficient-wise p-th power conjugate curve."""
        return Curve(self.a.frobenius(), self.b.frobenius())


class CurvePoint:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: Curve, x: Optional[FieldElement], y: Optional[FieldElement]):
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        return (
            isinstance(other, CurvePoint)
            and self.curve == other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        key = None if self.is_infinity else (self.x.c, self.y.c)
        return hash((self.curve, key))

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x.to_int()}, {self.y.to_int()})"

    def __neg__(self):
        if self.is_infinity:
            return self
        return CurvePoint(self.curve, self.x, -self.y)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.curve != other.curve:
            raise UsageError("points on different curves")
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        if self.x == other.x:
            if self.y != other.y or not self.y:
                return self.curve.infinity()
            lam = (3 * self.x * self.x + self.curve.a) / (2 * self.y)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return CurvePoint(self.curve, x3, y3)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int) -> "CurvePoint":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (-self) * (-n)
        result = self.curve.infinity()
        base = self
        while n:
            if n & 1:
                result = result + base
            base = base + base
            n >>= 1
        return result

    __rmul__ = __mul__

    def frobenius(self) -> "CurvePoint":
        """Coordinate-wise p-th power; lands on the conjugate curve."""
        if self.is_infinity:
            return CurvePoint(self.curve.frobenius_conjugate(), None, None)
        return CurvePoint(self.curve.frobenius_conjugate(), self.x.frobenius(), self.y.frobenius())

    def order(self, bound: int) -> int:
        """Exact order, given a multiple `bound` of it."""
        n = bound
        for r in sympy.primefactors(bound):
            while n % r == 0 and (n // r) * self == self.curve.infinity():
                n //= r
        return n


def group_law(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return P + Q


def scalar_mul(n: int, P: CurvePoint) -> CurvePoint:
    return n * P


def curve_from_j(j: FieldElement) -> Curve:
    """Fixed representative curve with the given j-invariant."""
    K = j.field
    if not j:
        return Curve(K.zero(), K.one())
    if j == 1728:
        return Curve(K.one(), K.zero())
    # y^2 = x^3 + 3j(1728-j) x + 2j(1728-j)^2
    k = K.element(1728) - j
    c = j * k
    return Curve(3 * c, 2 * c * k)


def random_point(E: Curve, rng: random.Random) -> CurvePoint:
    K = E.field
    while True:
        x = K.random_element(rng)
        rhs = x**3 + E.a * x + E.b
        y = sqrt(rhs)
        if y is None:
            continue
        if y and rng.getrandbits(1):
            y = -y
        return CurvePoint(E, x, y)


# ---------------------------------------------------------------------------
# point counting


def _count_naive(E: Curve) -> int:
    K = E.field
    half = (K.order - 1) // 2
    total = K.order + 1
    one = K.one()
    for x in K.elements():
        rhs = x**3 + E.a * x + E.b
        if not rhs:
            continue
        total += 1 if rhs**half == one else -1
    return total


def _count_vectorized_fp2(E: Curve) -> int:
    """Exact count over GF(p^2) via a quadratic-character table (numpy)."""
    K = E.field
    p = K.p
    v, u = K.modulus  # x^2 + u x + v
    q = p * p
    idx = np.arange(q, dtype=np.int64)
    a0, a1 = idx % p, idx // p

    def _mul(x0, x1, y0, y1):
        t = (x1 * y1) % p
        return (x0 * y0 - v * t) % p, (x0 * y1 + x1 * y0 - u * t) % p

    s0, s1 = _mul(a0, a1, a0, a1)
    is_sq = np.zeros(q, dtype=bool)
    is_sq[s0 + p * s1] = True
    # f(x) = x^3 + a x + b over all x
    c0, c1 = _mul(a0, a1, a0, a1)
    c0, c1 = _mul(c0, c1, a0, a1)
    ea0, ea1 = E.a.c[0], E.a.c[1]
    f0 = (c0 + ea0 * a0 - v * ((ea1 * a1) % p) + E.b.c[0]) % p
    f1 = (c1 + ea0 * a1 + ea1 * a0 - u * ((ea1 * a1) % p) + E.b.c[1]) % p
    fidx = f0 + p * f1
    nonzero = fidx != 0
    chi = np.where(is_sq[fidx], 1, -1)
    return int(q + 1 + chi[nonzero].sum())


def _order_multiples_in_interval(E: Curve, R: CurvePoint, n0: int, width: int) -> set[int]:
    """All n in [n0, n0+width) with n*R = O (baby-step giant-step)."""
    O = E.infinity()
    m = 1
    while m * m < width:
        m += 1
    baby: dict = {}
    T = O
    small_order = None
    for j in range(m):
        if j and T == O and small_order is None:
            small_order = j
            break
        baby[T] = j
        T = T + R
    if small_order is not None:
        first = n0 + (-n0) % small_order
        return set(range(first, n0 + width, small_order))
    G = m * R
    S = -(n0 * R)
    out = set()
    i = 0
    while i * m < width + m:
        j = baby.get(S)
        if j is not None:
            k = i * m + j
            if k < width:
                out.add(n0 + k)
        S = S - G
        i += 1
    return out


def _count_bsgs(E: Curve, tries: int = 8) -> Optional[int]:
    K = E.field
    q = K.order
    s = sympy.integer_nthroot(4 * q, 2)[0] + 2  # ceil(2 sqrt q) padding
    n0 = q + 1 - s
    width = 2 * s + 1
    rng = stream("count", K.p, K.degree, E.a.to_int(), E.b.to_int())
    cands: Optional[set[int]] = None
    for _ in range(tries):
        R = random_point(E, rng)
        c = _order_multiples_in_interval(E, R, n0, width)
        cands = c if cands is None else cands & c
        if not cands:
            raise InvariantBreach("point-order candidates inconsistent")
        if len(cands) == 1:
            return cands.pop()
    # quadratic-twist disambiguation: #E + #E^d = 2(q+1)
    d = K.first_nonsquare()
    Et = Curve(d * d * E.a, d * d * d * E.b)
    tw: Optional[set[int]] = None
    for _ in range(tries):
        R = random_point(Et, rng)
        c = _order_multiples_in_interval(Et, R, n0, width)
        tw = c if tw is None else tw & c
        if len(tw) == 1:
            break
    cands &= {2 * (q + 1) - t for t in tw}
    if len(cands) == 1:
        return cands.pop()
    return None


def point_count(E: Curve) -> int:
    """Exact #E(K) for the curve's own field of definition."""
    K = E.field
    if K.degree == 2 and K.p <= 3000:
        return _count_vectorized_fp2(E)
    if K.order <= 30000:
        return _count_naive(E)
    n = _count_bsgs(E)
    if n is not None:
        return n
    if K.degree == 2 and K.p <= 20000:
        return _count_vectorized_fp2(E)
    raise InvariantBreach("point count ambiguous beyond exhaustive range")


def is_supersingular(E: Curve) -> bool:
    """Trace divisible by p, tested over GF(p^2)."""
    K = E.field
    if K.degree == 1:
        E = E.base_change(GF(K.p, 2))
    elif K.degree != 2:
        raise UsageError("supersingularity test expects a curve over GF(p^2)")
    return point_count(E) % E.field.p == 1


# ---------------------------------------------------------------------------
# the distinguished pi = -p model


def canonical_model(j, p: int) -> Curve:
    """Twist of curve_from_j(j) over GF(p^2) on which Frob_{p^2} = [-p].

    Twists are tried in the deterministic enumeration order of the scalar;
    the winner is confirmed by Frob_{p^2}(R) = -p*R on points sampled over
    GF(p^4), where the p^2-power map is not the identity.
    """
    K2 = GF(p, 2)
    if isinstance(j, int):
        j = K2.element(j)
    elif j.field != K2:
        raise UsageError("j must live in GF(p^2)")
    E0 = curve_from_j(j)
    rng = stream("canonical", p, j.to_int())
    # one representative per twist class: quadratic for generic j, quartic
    # for j = 1728, sextic for j = 0
    if not j:
        g = K2.multiplicative_generator()
        candidates = [Curve(K2.zero(), g**i * E0.b) for i in range(6)]
    elif j == 1728:
        g = K2.multiplicative_generator()
        candidates = [Curve(g**i * E0.a, K2.zero()) for i in range(4)]
    else:
        z = K2.first_nonsquare()
        candidates = [E0, Curve(z * z * E0.a, z * z * z * E0.b)]
    for cand in candidates:
        if _rational_points_killed_by(cand, p + 1, rng, samples=3) and _frobenius_is_minus_p(
            cand, p, rng
        ):
            return cand
    raise InvariantBreach(f"no trace -2p twist found for j = {j.to_int()} (p = {p})")


def _rational_points_killed_by(E: Curve, n: int, rng: random.Random, samples: int) -> bool:
    O = E.infinity()
    return all(n * random_point(E, rng) == O for _ in range(samples))


def _frobenius_is_minus_p(E: Curve, p: int, rng: random.Random, samples: int = 1) -> bool:
    K4 = GF(p, 4)
    E4 = E.base_change(K4)
    for _ in range(samples):
        R = random_point(E4, rng)
        F = CurvePoint(E4, R.x.frobenius().frobenius(), R.y.frobenius().frobenius())
        if F != (-p) * R:
            return False
    return True


# ---------------------------------------------------------------------------
# automorphisms and isomorphisms


@dataclass(frozen=True)
class Isomorphism:
    """(x, y) -> (u^2 x, u^3 y) from domain onto codomain."""

    domain: Curve
    codomain: Curve
    u: FieldElement

    def __call__(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return self.codomain.infinity()
        u2 = self.u * self.u
        return CurvePoint(self.codomain, u2 * P.x, u2 * self.u * P.y)


@dataclass
class AutGroup:
    curve: Curve
    scalars: list[FieldElement] = dc_field(default_factory=list)

    def __len__(self):
        return len(self.scalars)

    def __iter__(self):
        return (Isomorphism(self.curve, self.curve, u) for u in self.scalars)


def _nth_roots(w: FieldElement, n: int) -> list[FieldElement]:
    from .polys import roots

    K = w.field
    f = [-w] + [K.zero()] * (n - 1) + [K.one()]
    return roots(f, K)


def automorphism_group(E: Curve) -> AutGroup:
    """All automorphisms of E over the algebraic closure; they are already
    rational over GF(p^2) (and hence over E's field) for p >= 5."""
    j = E.j_invariant()
    if not j:
        us = _nth_roots(E.field.one(), 6)
    elif j == 1728:
        us = _nth_roots(E.field.one(), 4)
    else:
        us = [E.field.one(), -E.field.one()]
    us = sorted(us, key=lambda u: u.to_int())
    expected = 6 if not j else (4 if j == 1728 else 2)
    if len(us) != expected:
        raise InvariantBreach("automorphism scalars not rational in the working field")
    return AutGroup(E, us)


def isomorphisms_between(E1: Curve, E2: Curve) -> list[Isomorphism]:
    """All isomorphisms E1 -> E2 over the (possibly enlarged) working field."""
    if E1.field != E2.field:
        raise UsageError("curves must share a field; base_change first")
    if E1.j_invariant() != E2.j_invariant():
        return []
    for degree_factor in (1, 2, 3, 6):
        if degree_factor == 1:
            F1, F2 = E1, E2
        else:
            K = GF(E1.field.p, E1.field.degree * degree_factor)
            F1, F2 = E1.base_change(K), E2.base_change(K)
        isos = _isomorphisms_same_field(F1, F2)
        if isos:
            return isos
    return []


def _isomorphisms_same_field(E1: Curve, E2: Curve) -> list[Isomorphism]:
    K = E1.field
    if not E1.b:  # j = 1728
        us = _nth_roots(E2.a / E1.a, 4)
    elif not E1.a:  # j = 0
        us = _nth_roots(E2.b / E1.b, 6)
    else:
        u2 = (E2.b * E1.a) / (E1.b * E2.a)
        r = sqrt(u2)
        us = [] if r is None else ([r, -r] if r else [r])
        us = [u for u in us if u**4 == E2.a / E1.a]
    us = sorted(set(us), key=lambda u: u.to_int())
    return [Isomorphism(E1, E2, u) for u in us if u]


# ---------------------------------------------------------------------------
# torsion bases


@dataclass
class TorsionBasis:
    curve: Curve
    n: int
    P: CurvePoint
    Q: CurvePoint
    zeta: FieldElement  # e_n(P, Q), of exact order n

    def __iter__(self):
        return iter((self.P, self.Q))


def rational_exponent(field: FiniteField, p: int) -> int:
    """Exponent of E(field) for a pi = -p curve: |(-p)^m - 1| with 2m the
    field degree."""
    if field.degree % 2:
        raise UsageError("working field must have even degree")
    m = field.degree // 2
    return p**m - 1 if m % 2 == 0 else p**m + 1


def _has_exact_order(P: CurvePoint, n: int) -> bool:
    O = P.curve.infinity()
    if n * P != O:
        return False
    return all((n // r) * P != O for r in sympy.primefactors(n))


def torsion_basis(E: Curve, n: int, rng: random.Random, max_draws: int = 512) -> TorsionBasis:
    """Basis (P, Q) of E[n] with e_n(P, Q) of exact order n.

    E must be a pi = -p model base-changed to a field where E[n] is
    rational (degree 2m with (-p)^m = 1 mod n)."""
    from .isogenies import weil_pairing

    K = E.field
    p = K.p
    M = rational_exponent(K, p)
    if M % n:
        raise UsageError(f"E[{n}] is not rational over {K}")
    cof = M // n
    O = E.infinity()

    def draw() -> CurvePoint:
        for _ in range(max_draws):
            P = cof * random_point(E, rng)
            if _has_exact_order(P, n):
                return P
        raise InvariantBreach(f"failed to sample a point of exact order {n} on {E}")

    P = draw()
    for _ in range(max_draws):
        Q = draw()
        z = weil_pairing(P, Q, n)
        if all(z ** (n // r) != K.one() for r in sympy.primefactors(n)):
            return TorsionBasis(E, n, P, Q, z)
    raise InvariantBreach(f"failed to complete a torsion basis of level {n} on {E}")
