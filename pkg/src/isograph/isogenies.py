"""Prime-degree isogenies via Velu's formulas and the Weil pairing.

The pairing is computed by Miller's algorithm evaluated on shifted
divisors: e_n(P,Q) = f_P((Q+S)-(S)) / f_Q((P-S)-(-S)) for a random shift
S, redrawn whenever an evaluation hits a zero or pole of a line function.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import sympy

from .curves import Curve, CurvePoint, TorsionBasis, random_point
from .errors import InvariantBreach, UsageError
from .fields import FieldElement, dlog_in_mu_n, stream


class _PairingRetry(Exception):
    pass


def _slope(U: CurvePoint, V: CurvePoint, a: FieldElement) -> FieldElement:
    if U == V:
        return (3 * U.x * U.x + a) / (2 * U.y)
    return (V.y - U.y) / (V.x - U.x)


def _line_over_vertical(U, V, W, X, a):
    """(l / v)(X) as a (numerator, denominator) pair, where l is the line
    through U and V and v the vertical through W = U + V."""
    one = X.curve.field.one()
    if U.is_infinity or V.is_infinity:
        # the divisor (U)+(V)-(W)-(O) is principal with constant function
        return one, one
    if W.is_infinity:
        return X.x - U.x, one
    lam = _slope(U, V, a)
    num = X.y - U.y - lam * (X.x - U.x)
    den = X.x - W.x
    return num, den


def _miller(P: CurvePoint, n: int, X: CurvePoint) -> FieldElement:
    """f_{n,P}(X) for n*P = O; raises _PairingRetry on zero/pole hits."""
    if X.is_infinity:
        raise _PairingRetry
    a = P.curve.a
    num = P.curve.field.one()
    den = P.curve.field.one()
    T = P
    for bit in bin(n)[3:]:
        W = T + T
        ln, lv = _line_over_vertical(T, T, W, X, a)
        num = num * num * ln
        den = den * den * lv
        T = W
        if bit == "1":
            W = T + P
            ln, lv = _line_over_vertical(T, P, W, X, a)
            num = num * ln
            den = den * lv
            T = W
    if not T.is_infinity:
        raise UsageError("miller loop expects an n-torsion point")
    if not num or not den:
        raise _PairingRetry
    return num / den


def weil_pairing(P: CurvePoint, Q: CurvePoint, n: int) -> FieldElement:
    """e_n(P, Q) in mu_n of the base field."""
    if P.curve != Q.curve:
        raise UsageError("pairing arguments on different curves")
    E = P.curve
    K = E.field
    O = E.infinity()
    if n * P != O or n * Q != O:
        raise UsageError("pairing arguments must be n-torsion")
    if P.is_infinity or Q.is_infinity:
        return K.one()
    rng = stream("weil-shift", K.p, K.degree, n, P.x.to_int(), P.y.to_int(), Q.x.to_int(), Q.y.to_int())
    for _ in range(128):
        S = random_point(E, rng)
        if S.is_infinity:
            continue
        try:
            a = _miller(P, n, Q + S)
            b = _miller(P, n, S)
            c = _miller(Q, n, P - S)
            d = _miller(Q, n, -S)
            return (a * d) / (b * c)
        except (_PairingRetry, ZeroDivisionError):
            continue
    raise InvariantBreach("weil pairing failed to find a usable shift point")


def coordinates_in_basis(X: CurvePoint, basis: TorsionBasis) -> tuple[int, int]:
    """(a, b) with X = a*P + b*Q, via pairing discrete logs."""
    n = basis.n
    a = dlog_in_mu_n(weil_pairing(X, basis.Q, n), basis.zeta, n)
    b = dlog_in_mu_n(weil_pairing(basis.P, X, n), basis.zeta, n)
    if a * basis.P + b * basis.Q != X:
        raise InvariantBreach("basis decomposition failed")
    return a, b


# ---------------------------------------------------------------------------


@dataclass
class Isogeny:
    """Separable degree-ell isogeny with cyclic kernel <kernel_gen>."""

    domain: Curve
    codomain: Curve
    kernel_gen: CurvePoint
    degree: int

    @cached_property
    def _kernel_points(self) -> list[CurvePoint]:
        pts = []
        T = self.kernel_gen
        for _ in range(self.degree - 1):
            pts.append(T)
            T = T + self.kernel_gen
        if not T.is_infinity:
            raise InvariantBreach("kernel generator has wrong order")
        return pts

    @cached_property
    def _kernel_xs(self) -> set:
        return {T.x.c for T in self._kernel_points}

    def __call__(self, P: CurvePoint) -> CurvePoint:
        if P.curve != self.domain:
            raise UsageError("point not on the isogeny's domain")
        if P.is_infinity or P in self._kernel_points:
            return self.codomain.infinity()
        x = P.x
        y = P.y
        for T in self._kernel_points:
            S = P + T
            if S.is_infinity:
                return self.codomain.infinity()
            x = x + (S.x - T.x)
            y = y + (S.y - T.y)
        img = CurvePoint(self.codomain, x, y)
        if y * y != x**3 + self.codomain.a * x + self.codomain.b:
            raise InvariantBreach("isogeny image left the codomain")
        return img


def velu(E: Curve, K: CurvePoint, ell: int | None = None) -> Isogeny:
    """The quotient isogeny E -> E/<K> for K of prime order ell."""
    if K.is_infinity:
        raise UsageError("kernel generator must be a finite point")
    if ell is None:
        ell = 2 if not K.y else _infer_prime_order(K)
    if not sympy.isprime(ell):
        raise UsageError("kernel order must be prime")
    if ell * K != E.infinity() or (ell == 2 and K.y):
        raise UsageError(f"kernel generator must have exact order {ell}")
    a, b = E.a, E.b
    v = E.field.zero()
    w = E.field.zero()
    if ell == 2:
        reps = [K]
    else:
        reps = []
        T = K
        for _ in range((ell - 1) // 2):
            reps.append(T)
            T = T + K
    for T in reps:
        gx = 3 * T.x * T.x + a
        if not T.y:  # 2-torsion
            vt = gx
            ut = E.field.zero()
        else:
            vt = 2 * gx
            ut = 4 * T.y * T.y
        v = v + vt
        w = w + ut + T.x * vt
    codomain = Curve(a - 5 * v, b - 7 * w)
    return Isogeny(E, codomain, K, ell)


def _infer_prime_order(K: CurvePoint) -> int:
    O = K.curve.infinity()
    T = K + K
    for n in range(2, 200):
        if T == O:
            if sympy.isprime(n):
                return n
            break
        T = T + K
    raise UsageError("kernel generator does not have small prime order")


def kernel_subgroups(E: Curve, ell: int, basis: TorsionBasis) -> list[CurvePoint]:
    """Generators of the ell+1 cyclic order-ell subgroups of E[ell]:
    Q, then P + t*Q for t = 0..ell-1."""
    if basis.n != ell or basis.curve != E:
        raise UsageError("basis is not an ell-torsion basis for this curve")
    if not sympy.isprime(ell):
        raise UsageError("ell must be prime")
    gens = [basis.Q]
    T = basis.P
    for _ in range(ell):
        gens.append(T)
        T = T + basis.Q
    return gens


def aut_matrices(scalars: list[FieldElement], basis: TorsionBasis) -> list[tuple[int, int, int, int]]:
    """Matrix of each automorphism (x,y) -> (u^2 x, u^3 y) on the basis,
    as (a, b, c, d) with u(P) = a*P + c*Q and u(Q) = b*P + d*Q."""
    out = []
    for u in scalars:
        u2 = u * u
        u3 = u2 * u
        iP = CurvePoint(basis.curve, u2 * basis.P.x, u3 * basis.P.y)
        iQ = CurvePoint(basis.curve, u2 * basis.Q.x, u3 * basis.Q.y)
        a, c = coordinates_in_basis(iP, basis)
        b, d = coordinates_in_basis(iQ, basis)
        out.append((a, b, c, d))
    return out


def push_level_structure(
    iso,
    matrix: tuple[int, int, int, int],
    basis_dom: TorsionBasis,
    basis_cod: TorsionBasis,
) -> tuple[int, int, int, int]:
    """Matrix (w.r.t. basis_cod) of the structure obtained by composing the
    structure `matrix` (w.r.t. basis_dom) with the isogeny/isomorphism."""
    n = basis_dom.n
    if basis_cod.n != n:
        raise UsageError("torsion levels differ")
    iP = iso(basis_dom.P)
    iQ = iso(basis_dom.Q)
    a, c = coordinates_in_basis(iP, basis_cod)
    b, d = coordinates_in_basis(iQ, basis_cod)
    t = (a, b, c, d)
    if n > 1 and sympy.gcd((t[0] * t[3] - t[1] * t[2]) % n, n) != 1:
        raise InvariantBreach("degenerate image of a torsion basis")
    m = matrix
    return (
        (t[0] * m[0] + t[1] * m[2]) % n,
        (t[0] * m[1] + t[1] * m[3]) % n,
        (t[2] * m[0] + t[3] * m[2]) % n,
        (t[2] * m[1] + t[3] * m[3]) % n,
    )
