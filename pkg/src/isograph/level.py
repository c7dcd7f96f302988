"""Subgroups H of GL_2(Z/NZ) and classes of level structures.

A level structure on a curve is recorded as the 2x2 matrix expressing the
images of the standard basis in a fixed torsion basis (columns are the
image coordinates).  Its class is the double coset Aut(E) * M * H, stored
as the lexicographically minimal member.

Matrices are row-major tuples (a, b, c, d) for ((a, b), (c, d)); N = 1 is
the degenerate level where the single matrix (0, 0, 0, 0) represents the
identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod

import sympy

from .errors import UsageError

Mat = tuple[int, int, int, int]


class GL2:
    """Namespace of 2x2 matrix helpers mod N."""

    @staticmethod
    def identity(N: int) -> Mat:
        return (1 % N, 0, 0, 1 % N)

    @staticmethod
    def scalar(s: int, N: int) -> Mat:
        return (s % N, 0, 0, s % N)

    @staticmethod
    def mul(m: Mat, n: Mat, N: int) -> Mat:
        a, b, c, d = m
        e, f_, g, h = n
        return (
            (a * e + b * g) % N,
            (a * f_ + b * h) % N,
            (c * e + d * g) % N,
            (c * f_ + d * h) % N,
        )

    @staticmethod
    def det(m: Mat, N: int) -> int:
        return (m[0] * m[3] - m[1] * m[2]) % N

    @staticmethod
    def is_invertible(m: Mat, N: int) -> bool:
        if N == 1:
            return True
        return gcd(GL2.det(m, N), N) == 1

    @staticmethod
    def inv(m: Mat, N: int) -> Mat:
        if N == 1:
            return (0, 0, 0, 0)
        d = GL2.det(m, N)
        if gcd(d, N) != 1:
            raise UsageError(f"matrix {m} not invertible mod {N}")
        di = pow(d, -1, N)
        a, b, c, d_ = m
        return ((d_ * di) % N, (-b * di) % N, (-c * di) % N, (a * di) % N)

    @staticmethod
    def group_order(N: int) -> int:
        if N == 1:
            return 1
        order = N**4
        for q in sympy.primefactors(N):
            order = order // q**3 * (q - 1) * (q - 1) * (q + 1)  # (1-1/q)(1-1/q^2)
        return order

    @staticmethod
    @lru_cache(maxsize=None)
    def all_elements(N: int) -> tuple[Mat, ...]:
        if N == 1:
            return ((0, 0, 0, 0),)
        out = []
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    for d in range(N):
                        if gcd((a * d - b * c) % N, N) == 1:
                            out.append((a, b, c, d))
        assert len(out) == GL2.group_order(N)
        return tuple(out)


def units(N: int) -> tuple[int, ...]:
    if N == 1:
        return (0,)
    return tuple(u for u in range(N) if gcd(u, N) == 1)


def _closure(N: int, gens: list[Mat], seed: set[Mat] | None = None) -> set[Mat]:
    elems = set(seed) if seed else {GL2.identity(N)}
    frontier = list(elems)
    while frontier:
        m = frontier.pop()
        for g in gens:
            t = GL2.mul(m, g, N)
            if t not in elems:
                elems.add(t)
                frontier.append(t)
    return elems


class LevelSubgroup:
    """H < GL2(Z/NZ) stored as an explicit hash-indexed element set."""

    def __init__(self, N: int, elements: frozenset[Mat], generators: list[Mat], name: str = ""):
        self.N = N
        self.elements = elements
        self.generators = generators
        self.name = name
        self._normalizer: LevelSubgroup | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return GL2.group_order(self.N) // self.order

    def __contains__(self, m: Mat) -> bool:
        return tuple(x % self.N for x in m) in self.elements

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        tag = self.name or "custom"
        return f"LevelSubgroup({tag}, N={self.N}, order={self.order})"

    def det_set(self) -> frozenset[int]:
        if not hasattr(self, "_dets"):
            self._dets = frozenset(GL2.det(m, self.N) for m in self.elements)
        return self._dets

    @property
    def contains_minus_id(self) -> bool:
        return GL2.scalar(-1, self.N) in self.elements

    @property
    def contains_all_scalars(self) -> bool:
        return all(GL2.scalar(u, self.N) in self.elements for u in units(self.N))

    def normalizer(self) -> "LevelSubgroup":
        if self._normalizer is None:
            N = self.N
            gens = self.generators or sorted(self.elements)
            norm = []
            for g in GL2.all_elements(N):
                gi = GL2.inv(g, N)
                if all(GL2.mul(GL2.mul(g, h, N), gi, N) in self.elements for h in gens):
                    norm.append(g)
            self._normalizer = LevelSubgroup(
                N, frozenset(norm), _small_generating_set(N, norm), name=f"N({self.name})"
            )
        return self._normalizer

    def weil_class(self, exponent: int) -> int:
        """Minimal representative of the det(H)-orbit of the exponent."""
        if self.N == 1:
            return 0
        return min(exponent * d % self.N for d in self.det_set())

    def weil_classes(self) -> list[int]:
        """Representatives of R_H = (primitive residues mod N) / det H."""
        if self.N == 1:
            return [0]
        return sorted({self.weil_class(u) for u in units(self.N)})


def _small_generating_set(N: int, elements) -> list[Mat]:
    gens: list[Mat] = []
    have = {GL2.identity(N)}
    for el in sorted(elements):
        if el not in have:
            gens.append(el)
            have = _closure(N, gens)
            if len(have) == len(elements):
                break
    return gens


def subgroup_from_generators(N: int, gens: list[Mat], name: str = "") -> LevelSubgroup:
    if N < 1:
        raise UsageError("level must be >= 1")
    norm_gens = []
    for g in gens:
        g = tuple(int(x) % N for x in g)
        if len(g) != 4:
            raise UsageError(f"generator {g} is not a 2x2 matrix")
        if not GL2.is_invertible(g, N):
            raise UsageError(f"generator {g} is not invertible mod {N}")
        norm_gens.append(g)
    elements = _closure(N, norm_gens)
    return LevelSubgroup(N, frozenset(elements), norm_gens, name=name)


# ---------------------------------------------------------------------------
# named families


def _nonsplit_cartan_prime_power(q: int, r: int) -> list[Mat]:
    """Multiplicative group of a quadratic ring acting on (Z/q)^2, q = r^e."""
    if r == 2:
        f0, f1 = 1, 1  # x^2 + x + 1
    else:
        delta = next(d for d in range(2, r) if sympy.legendre_symbol(d, r) == -1)
        f0, f1 = (-delta) % q, 0  # x^2 - delta
    out = []
    for s in range(q):
        for t in range(q):
            if (s % r, t % r) == (0, 0):
                continue
            out.append((s, (-t * f0) % q, t, (s - t * f1) % q))
    return out


def _crt_combine(N: int, parts: dict[int, list[Mat]]) -> list[Mat]:
    """Subgroup of GL2(Z/N) whose reduction mod each prime power q is the
    given part (CRT on entries)."""
    mods = list(parts)
    elems = [(0, 0, 0, 0)] if not mods else None
    combos: list[Mat] = [(0, 0, 0, 0)]
    cur = 1
    for q in mods:
        new = []
        inv_cur = pow(cur, -1, q) if cur > 1 else 1
        for base in combos:
            for m in parts[q]:
                # x = base (mod cur), x = m (mod q)
                merged = tuple(
                    (b + cur * ((x - b) * inv_cur % q)) % (cur * q) for b, x in zip(base, m)
                )
                new.append(merged)
        combos = new
        cur *= q
    assert cur == N
    return combos


FAMILY_NAMES = ("trivial", "borel", "full", "split_cartan", "nonsplit_cartan", "torsion_point")


def named_family(kind: str, N: int) -> LevelSubgroup:
    """The standard subgroups: trivial (all of GL2), borel (lower
    triangular), full ({Id}), split/nonsplit Cartan, torsion_point."""
    if kind not in FAMILY_NAMES:
        raise UsageError(f"unknown family {kind!r}; choose from {FAMILY_NAMES}")
    if N < 1 or (N == 1 and kind != "trivial"):
        raise UsageError(f"family {kind} needs a level N >= 2 (got {N})")
    if kind == "trivial":
        elems = GL2.all_elements(N)
        return LevelSubgroup(N, frozenset(elems), _small_generating_set(N, elems), name="trivial")
    if kind == "full":
        return LevelSubgroup(N, frozenset([GL2.identity(N)]), [], name="full")
    if kind == "borel":
        elems = [
            (a, 0, c, d) for a in units(N) for d in units(N) for c in range(N)
        ]
        return LevelSubgroup(N, frozenset(elems), _small_generating_set(N, elems), name="borel")
    if kind == "split_cartan":
        elems = [(a, 0, 0, d) for a in units(N) for d in units(N)]
        return LevelSubgroup(
            N, frozenset(elems), _small_generating_set(N, elems), name="split_cartan"
        )
    if kind == "torsion_point":
        elems = [(a, 0, c, 1) for a in units(N) for c in range(N)]
        return LevelSubgroup(
            N, frozenset(elems), _small_generating_set(N, elems), name="torsion_point"
        )
    # nonsplit cartan, glued over the prime-power factorization
    parts = {}
    for r, e in sympy.factorint(N).items():
        parts[r**e] = _nonsplit_cartan_prime_power(r**e, r)
    elems = _crt_combine(N, parts)
    expected = prod(q * q - q * q // (r * r) for r, e in sympy.factorint(N).items() for q in [r**e])
    assert len(elems) == expected, "nonsplit Cartan order mismatch"
    return LevelSubgroup(
        N, frozenset(elems), _small_generating_set(N, elems), name="nonsplit_cartan"
    )


# ---------------------------------------------------------------------------
# invariants of a subgroup


def k_and_kprime(H: LevelSubgroup, ell: int) -> tuple[int, int, int]:
    """(k, k', k'_pm): the order of ell in units/det(H); the least t with
    ell^t * Id in H; the least t with +-ell^t * Id in H."""
    N = H.N
    if N == 1:
        return 1, 1, 1
    if gcd(ell, N) != 1:
        raise UsageError("ell must be invertible mod N")
    dets = H.det_set()
    k = kp = kpm = None
    t = 1
    e = ell % N
    bound = 4 * N * N
    while (k is None or kp is None or kpm is None) and t <= bound:
        if k is None and e in dets:
            k = t
        if kp is None and GL2.scalar(e, N) in H.elements:
            kp = t
        if kpm is None and (
            GL2.scalar(e, N) in H.elements or GL2.scalar(-e, N) in H.elements
        ):
            kpm = t
        e = e * ell % N
        t += 1
    if k is None or kp is None or kpm is None:
        raise UsageError("ell powers never reach H (is ell a unit mod N?)")
    return k, kp, kpm


# ---------------------------------------------------------------------------
# double cosets Aut(E) \ GL2 / H


def double_coset_tables(
    H: LevelSubgroup, aut_mats: list[Mat]
) -> tuple[dict[Mat, Mat], dict[Mat, int]]:
    """canon[M] = lexicographic minimum of Aut * M * H, for every M in GL2;
    weight[Mmin] = #{u in Aut : M^-1 u M in H} (size of Aut(E, phi))."""
    N = H.N
    all_m = GL2.all_elements(N)
    hgens = H.generators or sorted(H.elements)
    canon: dict[Mat, Mat] = {}
    weight: dict[Mat, int] = {}
    for start in all_m:
        if start in canon:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            m = frontier.pop()
            for g in hgens:
                t = GL2.mul(m, g, N)
                if t not in orbit:
                    orbit.add(t)
                    frontier.append(t)
            for u in aut_mats:
                t = GL2.mul(u, m, N)
                if t not in orbit:
                    orbit.add(t)
                    frontier.append(t)
        rep = min(orbit)
        for m in orbit:
            canon[m] = rep
        rep_inv = GL2.inv(rep, N)
        weight[rep] = sum(
            1 for u in aut_mats if GL2.mul(GL2.mul(rep_inv, u, N), rep, N) in H.elements
        )
    return canon, weight


def canonical_class(matrix: Mat, H: LevelSubgroup, aut_mats: list[Mat]) -> Mat:
    """Lexicographically minimal element of Aut * matrix * H."""
    N = H.N
    matrix = tuple(x % N for x in matrix)
    if not GL2.is_invertible(matrix, N):
        raise UsageError("structure matrix must be invertible")
    orbit = {matrix}
    frontier = [matrix]
    hgens = H.generators or sorted(H.elements)
    while frontier:
        m = frontier.pop()
        for g in hgens:
            t = GL2.mul(m, g, N)
            if t not in orbit:
                orbit.add(t)
                frontier.append(t)
        for u in aut_mats:
            t = GL2.mul(u, m, N)
            if t not in orbit:
                orbit.add(t)
                frontier.append(t)
    return min(orbit)


def aut_of_pair(matrix: Mat, H: LevelSubgroup, aut_mats: list[Mat]) -> int:
    """|Aut(E, phi)| = #{u in Aut(E) : matrix^-1 u matrix in H}."""
    N = H.N
    mi = GL2.inv(matrix, N)
    return sum(1 for u in aut_mats if GL2.mul(GL2.mul(mi, u, N), matrix, N) in H.elements)


@dataclass(frozen=True)
class WeilInvariant:
    """Class of the pairing value of a structure in R_H = mu_N^x / det H,
    stored as the minimal exponent representative."""

    N: int
    exponent: int

    def acted_by(self, a: int, H: LevelSubgroup) -> "WeilInvariant":
        return WeilInvariant(self.N, H.weil_class(self.exponent * a))


def weil_invariant(matrix: Mat, H: LevelSubgroup, basis_exponent: int) -> WeilInvariant:
    """Weil invariant of the structure `matrix` when the reference basis
    pairs to zeta_N^basis_exponent: the class of det(matrix)*basis_exponent."""
    N = H.N
    if N == 1:
        return WeilInvariant(1, 0)
    e = GL2.det(matrix, N) * basis_exponent % N
    if gcd(e, N) != 1:
        raise UsageError("pairing exponent must be primitive")
    return WeilInvariant(N, H.weil_class(e))


@dataclass(frozen=True)
class LevelStructureClass:
    """A vertex-defining datum: curve label plus canonical coset matrix."""

    j_label: int
    matrix: Mat
    N: int
