"""Exact arithmetic in GF(p) and its extensions GF(p^d).

Extensions are realized as GF(p)[x]/(f) for a deterministically chosen
monic irreducible f: candidates x^d + c_{d-1}x^{d-1} + ... + c_0 are
enumerated in increasing order of the integer c_0 + c_1*p + ... and the
first irreducible one wins.  This makes every derived label (curve
coefficients, vertex names) reproducible across runs.

Only odd characteristic p >= 5 is supported.
"""

from __future__ import annotations

import hashlib
import random
from typing import Iterator, Optional

import sympy


class FieldError(ValueError):
    pass


def stream(*tags) -> random.Random:
    """Deterministic RNG derived from a tag tuple (all randomness flows
    from explicit seeds so that artifacts are bit-reproducible)."""
    digest = hashlib.sha256("|".join(str(t) for t in tags).encode()).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients as plain int lists (low first)


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _poly_rem(res, mod, p)


def _poly_rem(a: list[int], mod: list[int], p: int) -> list[int]:
    a = list(a)
    d = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) > d:
        c = a[-1] * inv_lead % p
        if c:
            off = len(a) - 1 - d
            for i, mi in enumerate(mod):
                a[off + i] = (a[off + i] - c * mi) % p
        a.pop()
    return _poly_trim(a)


def _poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_rem(list(base), mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_rem(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Monic f over GF(p): irreducible iff x^(p^d) == x mod f and
    gcd(x^(p^(d/r)) - x, f) = 1 for every prime r | d."""
    d = len(f) - 1
    if d < 1:
        return False
    x = [0, 1]
    xq = _poly_powmod(x, p**d, f, p)
    if _poly_sub(xq, x, p):
        return False
    for r in sympy.primefactors(d):
        xe = _poly_powmod(x, p ** (d // r), f, p)
        g = _poly_gcd(f, _poly_sub(xe, x, p), p)
        if len(g) != 1:
            return False
    return True


def _first_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lower coefficients (c_0..c_{d-1}) of the first monic irreducible of
    degree d, in the fixed enumeration order."""
    if d == 1:
        return (0,)
    for n in range(p**d):
        coeffs = []
        m = n
        for _ in range(d):
            coeffs.append(m % p)
            m //= p
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible of degree {d} over GF({p})")  # unreachable


# ---------------------------------------------------------------------------


class FieldElement:
    """Element of a FiniteField, stored as a reduced coefficient tuple."""

    __slots__ = ("field", "c")

    def __init__(self, field: "FiniteField", c: tuple[int, ...]):
        self.field = field
        self.c = c

    def __add__(self, other):
        f = self.field
        if type(other) is not FieldElement or other.field is not f:
            other = f.coerce(other)
        p = f.p
        return FieldElement(f, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __sub__(self, other):
        f = self.field
        if type(other) is not FieldElement or other.field is not f:
            other = f.coerce(other)
        p = f.p
        return FieldElement(f, tuple((a - b) % p for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __mul__(self, other):
        f = self.field
        if type(other) is not FieldElement or other.field is not f:
            other = f.coerce(other)
        return FieldElement(f, f._mul(self.c, other.c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.c))

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.coerce(other)
        return isinstance(other, FieldElement) and self.field is other.field and self.c == other.c

    def __hash__(self):
        return hash((id(self.field), self.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"FieldElement({list(self.c)} over GF({self.field.p}^{self.field.degree}))"

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        p = self.field.p
        if self.field.degree == 1:
            return FieldElement(self.field, (pow(self.c[0], p - 2, p),))
        # extended Euclid in GF(p)[x] against the field modulus
        a = list(self.field._modpoly)
        b = _poly_trim(list(self.c))
        s0: list[int] = []
        s1: list[int] = [1]
        while b:
            q, r = _poly_divmod(a, b, p)
            a, b = b, r
            s0, s1 = s1, _poly_sub(s0, _polymul_plain(q, s1, p), p)
        inv_const = pow(a[0], p - 2, p)  # a = gcd, a nonzero constant
        inv = [c * inv_const % p for c in s0]
        inv = inv[: self.field.degree] + [0] * (self.field.degree - len(inv))
        return FieldElement(self.field, tuple(inv))

    def frobenius(self) -> "FieldElement":
        """a^p via the precomputed linear map (Frobenius is F_p-linear)."""
        f = self.field
        if f.degree == 1:
            return self
        images = f._frobenius_images()
        p = f.p
        acc = [0] * f.degree
        for coeff, img in zip(self.c, images):
            if coeff:
                for i, gi in enumerate(img):
                    if gi:
                        acc[i] = (acc[i] + coeff * gi) % p
        return FieldElement(f, tuple(acc))

    def to_int(self) -> int:
        """Enumeration label c_0 + c_1*p + ... (used for ordering and output)."""
        v = 0
        for c in reversed(self.c):
            v = v * self.field.p + c
        return v

    def lift(self, big: "FiniteField") -> "FieldElement":
        """Image under the canonical embedding into a compatible larger field."""
        return embedding(self.field, big)(self)


def _polymul_plain(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return res


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        c = r[-1] * inv_lead % p
        off = len(r) - len(b)
        q[off] = c
        if c:
            for i, bi in enumerate(b):
                r[off + i] = (r[off + i] - c * bi) % p
        r.pop()
        _poly_trim(r)
        if not r:
            break
    return _poly_trim(q), _poly_trim(r)


class FiniteField:
    """GF(p^degree) with the deterministic modulus.  Use GF(p, d) to get the
    cached canonical instance."""

    def __init__(self, p: int, degree: int = 1, modulus: Optional[tuple[int, ...]] = None):
        if p < 5 or not sympy.isprime(p):
            raise FieldError(f"characteristic must be a prime >= 5, got {p}")
        if degree < 1:
            raise FieldError("degree must be positive")
        self.p = p
        self.degree = degree
        self.order = p**degree
        if modulus is None:
            modulus = _first_irreducible(p, degree)
        if len(modulus) != degree:
            raise FieldError("modulus must list the lower coefficients only")
        self.modulus = tuple(m % p for m in modulus)
        self._modpoly = list(self.modulus) + [1]
        if degree > 1 and not _is_irreducible(self._modpoly, p):
            raise FieldError("modulus is reducible")
        # x^(degree+k) mod f for k = 0..degree-2, used by _mul reduction
        self._red: list[tuple[int, ...]] = []
        if degree > 1:
            cur = [(-m) % p for m in self.modulus]
            self._red.append(tuple(cur))
            for _ in range(degree - 2):
                cur = [0] + cur
                lead = cur.pop()
                if lead:
                    cur = [(c - lead * m) % p for c, m in zip(cur, self.modulus)]
                self._red.append(tuple(cur))
        self._gen_cache: Optional[FieldElement] = None
        self._factor_cache: Optional[dict[int, int]] = None
        self._frob_cache: Optional[list[tuple[int, ...]]] = None

    def _frobenius_images(self) -> list[tuple[int, ...]]:
        """(x^p)^i mod f for i < degree: the matrix of the p-power map."""
        if self._frob_cache is None:
            xp = _poly_powmod([0, 1], self.p, self._modpoly, self.p)
            images = [(1,) + (0,) * (self.degree - 1)]
            cur = self.element(xp)
            gen_img = cur
            for _ in range(self.degree - 1):
                images.append(cur.c)
                cur = cur * gen_img
            self._frob_cache = images
        return self._frob_cache

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.degree, self.modulus) == (other.p, other.degree, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.degree, self.modulus))

    # -- construction -------------------------------------------------------

    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is not self and value.field != self:
                raise FieldError("element from a different field")
            return FieldElement(self, value.c)
        if isinstance(value, int):
            c = [0] * self.degree
            c[0] = value % self.p
            return FieldElement(self, tuple(c))
        c = [int(v) % self.p for v in value]
        if len(c) > self.degree:
            raise FieldError("too many coefficients")
        c += [0] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def coerce(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if value.field == self:
                return FieldElement(self, value.c)
            raise FieldError("mixed fields in arithmetic")
        if isinstance(value, int):
            return self.element(value)
        raise FieldError(f"cannot coerce {value!r}")

    def zero(self) -> FieldElement:
        return self.element(0)

    def one(self) -> FieldElement:
        return self.element(1)

    def gen(self) -> FieldElement:
        """The class of x (degree > 1), or 1 in the prime field."""
        if self.degree == 1:
            return self.one()
        c = [0] * self.degree
        c[1] = 1
        return FieldElement(self, tuple(c))

    def from_int(self, n: int) -> FieldElement:
        """Inverse of FieldElement.to_int (the enumeration order)."""
        c = []
        for _ in range(self.degree):
            c.append(n % self.p)
            n //= self.p
        return FieldElement(self, tuple(c))

    def elements(self) -> Iterator[FieldElement]:
        for n in range(self.order):
            yield self.from_int(n)

    def random_element(self, rng: random.Random) -> FieldElement:
        return self.from_int(rng.randrange(self.order))

    # -- arithmetic kernel ---------------------------------------------------

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        d = self.degree
        if d == 1:
            return (a[0] * b[0] % p,)
        if d == 2:
            t = a[1] * b[1]
            v, u = self.modulus
            return ((a[0] * b[0] - v * t) % p, (a[0] * b[1] + a[1] * b[0] - u * t) % p)
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [c % p for c in conv[:d]]
        for k in range(d, 2 * d - 1):
            c = conv[k] % p
            if c:
                row = self._red[k - d]
                for i, ri in enumerate(row):
                    if ri:
                        out[i] = (out[i] + c * ri) % p
        return tuple(out)

    # -- multiplicative structure ---------------------------------------------

    def _order_factors(self) -> dict[int, int]:
        if self._factor_cache is None:
            self._factor_cache = sympy.factorint(self.order - 1)
        return self._factor_cache

    def multiplicative_generator(self) -> FieldElement:
        """Smallest generator of the cyclic group, in enumeration order."""
        if self._gen_cache is not None:
            return self._gen_cache
        q1 = self.order - 1
        primes = list(self._order_factors())
        n = 2
        while True:
            g = self.from_int(n)
            if g and all(g ** (q1 // r) != self.one() for r in primes):
                self._gen_cache = g
                return g
            n += 1

    def is_square(self, a: FieldElement) -> bool:
        if not a:
            return True
        return a ** ((self.order - 1) // 2) == self.one()

    def first_nonsquare(self) -> FieldElement:
        """First non-square in enumeration order (label order)."""
        if not hasattr(self, "_nonsquare"):
            n = 2
            while True:
                z = self.from_int(n)
                if z and not self.is_square(z):
                    self._nonsquare = z
                    break
                n += 1
        return self._nonsquare


# canonical instances, so `is` comparisons are meaningful and hashing cheap
_FIELD_CACHE: dict[tuple[int, int], FiniteField] = {}


def GF(p: int, degree: int = 1) -> FiniteField:
    key = (p, degree)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(p, degree)
    return _FIELD_CACHE[key]


def ext_field_build(p: int, m: int) -> FiniteField:
    """GF(p^(2m)), the working field for curves whose N-torsion must be
    rational; m is typically the order of -p modulo N."""
    if m < 1:
        raise FieldError("m must be positive")
    return GF(p, 2 * m)


def frobenius_map(a: FieldElement) -> FieldElement:
    return a.frobenius()


def sqrt(a: FieldElement) -> Optional[FieldElement]:
    """Deterministic square root: returns the root with the lexicographically
    smaller coefficient vector, or None for non-squares."""
    f = a.field
    if not a:
        return a
    q = f.order
    if a ** ((q - 1) // 2) != f.one():
        return None
    # Tonelli-Shanks (q = 1 mod 4 always holds for even-degree extensions,
    # and the generic loop covers q = 3 mod 4 too)
    s, t = 0, q - 1
    while t % 2 == 0:
        s += 1
        t //= 2
    z = f.first_nonsquare()
    c = z**t
    r = a ** ((t + 1) // 2)
    u = a**t
    while u != f.one():
        # order of u is 2^i
        i = 0
        v = u
        while v != f.one():
            v = v * v
            i += 1
        b = c ** (2 ** (s - i - 1))
        r = r * b
        c = b * b
        u = u * c
        s = i
    assert r * r == a
    return min(r, -r, key=lambda e: e.c)


def primitive_nth_root(field: FiniteField, n: int) -> FieldElement:
    """zeta of exact multiplicative order n, derived from the smallest
    generator of the multiplicative group."""
    if n < 1:
        raise FieldError("n must be positive")
    if (field.order - 1) % n:
        raise FieldError(f"{n} does not divide |field|-1 = {field.order - 1}")
    if n == 1:
        return field.one()
    g = field.multiplicative_generator()
    return g ** ((field.order - 1) // n)


def dlog_in_mu_n(x: FieldElement, zeta: FieldElement, n: int) -> int:
    """e with zeta^e = x, for x in the order-n cyclic group <zeta>.
    Baby-step/giant-step; n is small (<= ~64) throughout this project."""
    f = x.field
    if x**n != f.one():
        raise FieldError("element is not an n-th root of unity")
    m = 1
    while m * m < n:
        m += 1
    baby = {}
    e = f.one()
    for j in range(m):
        baby.setdefault(e.c, j)
        e = e * zeta
    giant = zeta ** (-m)
    y = x
    for i in range(m + 1):
        j = baby.get(y.c)
        if j is not None:
            return (i * m + j) % n
        y = y * giant
    raise FieldError("discrete log not found (zeta has wrong order?)")


# ---------------------------------------------------------------------------
# embeddings between compatible fields


_EMBED_CACHE: dict[tuple, "_Embedding"] = {}


class _Embedding:
    def __init__(self, small: FiniteField, big: FiniteField, image_of_gen: FieldElement):
        self.small = small
        self.big = big
        self.image_of_gen = image_of_gen
        # powers of the generator image
        self._pows = [big.one()]
        for _ in range(small.degree - 1):
            self._pows.append(self._pows[-1] * image_of_gen)

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.field != self.small:
            raise FieldError("element not in the embedding's domain")
        acc = self.big.zero()
        for coef, pw in zip(a.c, self._pows):
            if coef:
                acc = acc + pw * coef
        return acc


def embedding(small: FiniteField, big: FiniteField):
    """Canonical embedding GF(p^a) -> GF(p^b) for a | b: sends the small
    generator to the lexicographically smallest root of the small modulus."""
    if small == big:
        return lambda a: big.coerce(a)
    if small.p != big.p or big.degree % small.degree:
        raise FieldError("no embedding between these fields")
    key = (small.p, small.degree, small.modulus, big.degree, big.modulus)
    if key not in _EMBED_CACHE:
        if small.degree == 1:
            root = big.element(0)  # unused; constants embed directly
            emb = _Embedding(small, big, big.one())
        else:
            from .polys import roots as poly_roots

            f = [big.element(c) for c in small.modulus] + [big.one()]
            cands = poly_roots(f, big)
            if not cands:
                raise FieldError("modulus has no root in the big field (bug)")
            root = min(cands, key=lambda e: e.c)
            emb = _Embedding(small, big, root)
        _EMBED_CACHE[key] = emb
    return _EMBED_CACHE[key]
