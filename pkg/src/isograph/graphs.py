"""Construction of the isogeny graphs G(p, ell, H) and their structure.

Vertices are pairs (supersingular curve, level-H structure class); for
each vertex and each of the ell+1 order-ell kernels, the quotient curve
and pushed structure determine one outgoing edge.  A[i][j] counts edges
from vertex j to vertex i, so every column sums to ell+1.

All curves are taken in the model where the p^2-power Frobenius acts as
-p, which makes N-torsion rational over a predictable extension and the
Frobenius symmetry of the graph checkable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

import numpy as np
import sympy

from . import modpoly
from .curves import (
    Curve,
    CurvePoint,
    TorsionBasis,
    canonical_model,
    curve_from_j,
    is_supersingular,
    isomorphisms_between,
    torsion_basis,
)
from .errors import InvariantBreach, UsageError
from .fields import GF, FieldElement, dlog_in_mu_n, embedding, primitive_nth_root, stream
from .isogenies import Isogeny, aut_matrices, coordinates_in_basis, kernel_subgroups, velu
from .level import (
    GL2,
    LevelSubgroup,
    Mat,
    double_coset_tables,
    named_family,
    units,
)
from .polys import roots as poly_roots


def _validate_params(p: int, ell: Optional[int], N: int) -> None:
    if p < 5 or not sympy.isprime(p):
        raise UsageError(f"p must be a prime >= 5 (got {p})")
    if ell is not None:
        if not sympy.isprime(ell):
            raise UsageError(f"ell must be prime (got {ell})")
        if ell == p:
            raise UsageError("p and ell must be distinct primes")
        if N % ell == 0:
            raise UsageError("ell must not divide the level N")
    if N % p == 0:
        raise UsageError("p must not divide the level N")


# ---------------------------------------------------------------------------
# supersingular enumeration

# Hilbert class polynomials for small discriminants (monic, integer
# coefficients, leading first); roots mod inert p are supersingular seeds.
_CLASS_POLYS: dict[int, list[int]] = {
    3: [1, 0],
    4: [1, -1728],
    7: [1, 3375],
    8: [1, -8000],
    11: [1, 32768],
    19: [1, 884736],
    43: [1, 884736000],
    67: [1, 147197952000],
    163: [1, 262537412640768000],
    15: [1, 191025, -121287375],
    20: [1, -1264000, -681472000],
    24: [1, -4834944, 14670139392],
    35: [1, 117964800, -134217728000],
    40: [1, -425692800, 9103145472000],
    51: [1, 5541101568, 6262062317568],
    52: [1, -6896880000, -567663552000000],
}


def _supersingular_seed(p: int) -> FieldElement:
    K2 = GF(p, 2)
    if p % 4 == 3:
        return K2.element(1728)
    if p % 3 == 2:
        return K2.element(0)
    for D, coeffs in _CLASS_POLYS.items():
        if sympy.jacobi_symbol(-D, p) == -1:
            f = [K2.element(c) for c in reversed(coeffs)]
            rts = poly_roots(f, K2)
            for r in rts:
                if is_supersingular(curve_from_j(r)):
                    return r
    if p < 5000:
        for j in range(p):
            if is_supersingular(curve_from_j(K2.element(j))):
                return K2.element(j)
    raise InvariantBreach(f"no supersingular seed found for p = {p}")


def enumerate_supersingular(p: int, avoid_ell: Optional[int] = None) -> list[FieldElement]:
    """All supersingular j-invariants over GF(p^2), sorted by label.

    Walks the 2-isogeny relation (roots of the classical modular
    polynomial) from a CM seed; steps via 3-isogenies instead when the
    2-isogeny graph itself is under test (avoid_ell == 2)."""
    _validate_params(p, None, 1)
    step = 3 if avoid_ell == 2 else 2
    seed = _supersingular_seed(p)
    K2 = seed.field
    seen = {seed.to_int(): seed}
    queue = [seed]
    while queue:
        j = queue.pop()
        for r in modpoly.isogenous_j_invariants(step, j, multiplicities=False):
            if r.to_int() not in seen:
                seen[r.to_int()] = r
                queue.append(r)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# per-curve data shared by vertex and edge construction


class _CurveData:
    def __init__(self, ws: "_Workspace", j2: FieldElement):
        self.ws = ws
        self.j_label = j2.to_int()
        self.E2 = canonical_model(j2, ws.p)  # over GF(p, 2)
        self.E = self.E2.base_change(ws.F)
        self.aut_scalars = _aut_scalars(self.E)
        self.basisN: Optional[TorsionBasis] = None
        self.e0 = 0
        if ws.N > 1:
            rng = stream(ws.seed, "basis", ws.p, ws.F.degree, ws.N, self.j_label)
            self.basisN = torsion_basis(self.E, ws.N, rng)
            self.e0 = dlog_in_mu_n(self.basisN.zeta, ws.zeta_N, ws.N)
            self.aut_mats = aut_matrices(self.aut_scalars, self.basisN)
        else:
            self.aut_mats = [GL2.identity(1)] * len(self.aut_scalars)
        self.canon, self.weight = double_coset_tables(ws.H, self.aut_mats)
        self._edges: Optional[list[tuple[int, Mat]]] = None
        self._frob: Optional[tuple[int, Mat]] = None

    def classes(self) -> list[Mat]:
        return sorted(self.weight)

    def edges(self) -> list[tuple[int, Mat]]:
        """(target j_label, basis-transition matrix) per order-ell kernel."""
        if self._edges is None:
            ws = self.ws
            rng = stream(ws.seed, "ell-basis", ws.p, ws.F.degree, ws.ell, self.j_label)
            basis_ell = torsion_basis(self.E, ws.ell, rng)
            out = []
            for ker in kernel_subgroups(self.E, ws.ell, basis_ell):
                phi = velu(self.E, ker, ws.ell)
                out.append(ws.transition(phi, self))
            self._edges = out
        return self._edges

    def frobenius_edge(self) -> tuple[int, Mat]:
        """(conjugate j_label, transition matrix of sigma on structures)."""
        if self._frob is None:
            ws = self.ws
            jp = self.E2.j_invariant().frobenius()
            target = ws.curve(jp.to_int())
            Esig = self.E.frobenius_conjugate()
            iso = _first_iso(Esig, target.E)
            if ws.N == 1:
                self._frob = (target.j_label, GL2.identity(1))
            else:
                P = self.basisN.P.frobenius()
                Q = self.basisN.Q.frobenius()
                a, c = coordinates_in_basis(iso(P), target.basisN)
                b, d = coordinates_in_basis(iso(Q), target.basisN)
                self._frob = (target.j_label, (a, b, c, d))
        return self._frob


def _aut_scalars(E: Curve) -> list[FieldElement]:
    from .curves import automorphism_group

    return automorphism_group(E).scalars


def _first_iso(src: Curve, dst: Curve):
    isos = isomorphisms_between(src, dst)
    if not isos:
        raise InvariantBreach("expected isomorphic pi=-p models")
    if isos[0].domain.field != src.field:
        raise InvariantBreach("isomorphism needed a field extension unexpectedly")
    return isos[0]


class _Workspace:
    def __init__(self, p: int, ell: Optional[int], H: LevelSubgroup, seed: int):
        _validate_params(p, ell, H.N)
        self.p = p
        self.ell = ell
        self.H = H
        self.N = H.N
        self.seed = seed
        torsion_mod = self.N * (ell if ell else 1)
        m = 1
        if torsion_mod > 1:
            m = sympy.n_order(-p % torsion_mod, torsion_mod) if torsion_mod > 2 else 1
        self.F = GF(p, 2 * m)
        self.zeta_N = primitive_nth_root(self.F, self.N) if self.N > 1 else self.F.one()
        self.js = enumerate_supersingular(p, avoid_ell=ell)
        emb = embedding(GF(p, 2), self.F)
        self._label_by_embedded = {emb(j).c: j.to_int() for j in self.js}
        self._curves: dict[int, _CurveData] = {}

    def curve(self, j_label: int) -> _CurveData:
        if j_label not in self._curves:
            K2 = GF(self.p, 2)
            self._curves[j_label] = _CurveData(self, K2.from_int(j_label))
        return self._curves[j_label]

    def down_label(self, j_big: FieldElement) -> int:
        """GF(p^2)-label of a j-invariant computed in the working field."""
        label = self._label_by_embedded.get(j_big.c)
        if label is None:
            raise InvariantBreach("codomain j-invariant is not supersingular")
        return label

    def transition(self, phi: Isogeny, src: _CurveData) -> tuple[int, Mat]:
        """Identify phi's codomain with its canonical curve and express the
        pushed reference basis there."""
        jt = self.down_label(phi.codomain.j_invariant())
        target = self.curve(jt)
        if self.N == 1:
            return jt, GL2.identity(1)
        iso = _first_iso(phi.codomain, target.E)
        P = iso(phi(src.basisN.P))
        Q = iso(phi(src.basisN.Q))
        a, c = coordinates_in_basis(P, target.basisN)
        b, d = coordinates_in_basis(Q, target.basisN)
        t = (a, b, c, d)
        det = GL2.det(t, self.N)
        deg = phi.degree % self.N if isinstance(phi, Isogeny) else 1
        # pairing compatibility: det * e0(target) = deg * e0(src) mod N
        if (det * target.e0 - deg * src.e0) % self.N:
            raise InvariantBreach("basis transition violates pairing compatibility")
        return jt, t


# ---------------------------------------------------------------------------
# public graph objects


@dataclass(frozen=True)
class Vertex:
    index: int
    j_label: int
    matrix: Mat
    aut: int        # |Aut(E, phi)|
    weil_exp: int   # minimal exponent representative in R_H


class IsogenyGraph:
    def __init__(self, p, ell, H, seed, vertices, A, ws=None):
        self.p = p
        self.ell = ell
        self.H = H
        self.N = H.N
        self.seed = seed
        self.vertices: list[Vertex] = vertices
        self.A: np.ndarray = A
        self._ws: Optional[_Workspace] = ws
        self._index = {(v.j_label, v.matrix): v.index for v in vertices}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def vertex_index(self, j_label: int, matrix: Mat) -> int:
        return self._index[(j_label, matrix)]

    def __repr__(self):
        return (
            f"IsogenyGraph(p={self.p}, ell={self.ell}, N={self.N}, "
            f"H={self.H.name or 'custom'}, |V|={self.n_vertices})"
        )

    def check_column_sums(self) -> None:
        sums = self.A.sum(axis=0)
        if not (sums == self.ell + 1).all():
            raise InvariantBreach(f"column sums {sorted(set(sums.tolist()))} != ell+1")

    def mass(self):
        """Sum of 1/|Aut(E, phi)| over vertices, exactly."""
        from fractions import Fraction

        return sum(Fraction(1, v.aut) for v in self.vertices)

    def expected_mass(self):
        from fractions import Fraction

        return Fraction(self.p - 1, 24) * self.H.index

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "l": self.ell,
            "N": self.N,
            "H_generators": [list(g) for g in (self.H.generators or sorted(self.H.elements))],
            "vertices": [
                {
                    "index": v.index,
                    "j": hex(v.j_label),
                    "matrix": list(v.matrix),
                    "aut": v.aut,
                    "weil_exp": v.weil_exp,
                }
                for v in self.vertices
            ],
            "adjacency": self.A.tolist(),
        }

    def to_dot(self) -> str:
        lines = [f'digraph G_{self.p}_{self.ell}_{self.N} {{']
        for v in self.vertices:
            label = f"j={hex(v.j_label)}\\nM={list(v.matrix)}\\nw={v.weil_exp}"
            lines.append(f'  v{v.index} [label="{label}"];')
        n = self.n_vertices
        for j in range(n):
            for i in range(n):
                for _ in range(int(self.A[i, j])):
                    lines.append(f"  v{j} -> v{i};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_adjacency_csv(self) -> str:
        return "\n".join(",".join(str(int(x)) for x in row) for row in self.A) + "\n"


def build_vertices(p: int, N: int, H: LevelSubgroup, seed: int = 0) -> list[Vertex]:
    """The vertex set of G(p, *, H): one vertex per double coset per curve."""
    if H.N != N:
        raise UsageError("H and N disagree")
    ws = _Workspace(p, None, H, seed)
    return _vertices_of(ws)


def _vertices_of(ws: _Workspace) -> list[Vertex]:
    verts: list[Vertex] = []
    for j in ws.js:
        cd = ws.curve(j.to_int())
        for mat in cd.classes():
            e = GL2.det(mat, ws.N) * cd.e0 % ws.N if ws.N > 1 else 0
            verts.append(
                Vertex(
                    index=-1,
                    j_label=cd.j_label,
                    matrix=mat,
                    aut=cd.weight[mat],
                    weil_exp=ws.H.weil_class(e) if ws.N > 1 else 0,
                )
            )
    verts.sort(key=lambda v: (v.j_label, v.matrix))
    return [
        Vertex(i, v.j_label, v.matrix, v.aut, v.weil_exp) for i, v in enumerate(verts)
    ]


def build_graph(p: int, ell: int, H: LevelSubgroup, seed: int = 0) -> IsogenyGraph:
    """G(p, ell, H) with its integer adjacency matrix."""
    ws = _Workspace(p, ell, H, seed)
    vertices = _vertices_of(ws)
    index = {(v.j_label, v.matrix): v.index for v in vertices}
    n = len(vertices)
    A = np.zeros((n, n), dtype=np.int64)
    for v in vertices:
        cd = ws.curve(v.j_label)
        for jt, t in cd.edges():
            target_mat = ws.curve(jt).canon[GL2.mul(t, v.matrix, ws.N)] if ws.N > 1 else (0, 0, 0, 0)
            w = index.get((jt, target_mat))
            if w is None:
                raise InvariantBreach("edge landed on an unknown vertex")
            A[w, v.index] += 1
    g = IsogenyGraph(p, ell, H, seed, vertices, A, ws)
    g.check_column_sums()
    return g


def adjoint_matrix(G: IsogenyGraph) -> np.ndarray:
    """A* for the weighted Hermitian form: A*[j][i] = a_i/a_j * A[i][j],
    with integrality enforced."""
    n = G.n_vertices
    A = G.A
    out = np.zeros_like(A)
    for i in range(n):
        ai = G.vertices[i].aut
        for j in range(n):
            if A[i, j]:
                num = ai * int(A[i, j])
                aj = G.vertices[j].aut
                if num % aj:
                    raise InvariantBreach("adjoint entry is not an integer")
                out[j, i] = num // aj
    return out


# ---------------------------------------------------------------------------
# the Cayley shadow and components


@dataclass
class CayleyGraph:
    """Orbits of multiplication by ell on R_H = mu_N^x / det(H)."""

    N: int
    ell: int
    reps: list[int]
    successor: dict[int, int]
    cycles: list[list[int]]
    k: int
    n: int


def cayley_graph(N: int, H: LevelSubgroup, ell: int) -> CayleyGraph:
    if H.N != N:
        raise UsageError("H and N disagree")
    if N > 1 and gcd(ell, N) != 1:
        raise UsageError("ell must be a unit mod N")
    reps = H.weil_classes()
    succ = {r: H.weil_class(r * ell) for r in reps}
    cycles = []
    seen = set()
    for r in reps:
        if r in seen:
            continue
        cyc = [r]
        seen.add(r)
        x = succ[r]
        while x != r:
            cyc.append(x)
            seen.add(x)
            x = succ[x]
        cycles.append(cyc)
    k = len(cycles[0])
    if any(len(c) != k for c in cycles):
        raise InvariantBreach("Cayley cycles of unequal length")
    n = len(cycles)
    if N > 1:
        phiN = len(units(N))
        if n * k * len(H.det_set()) != phiN:
            raise InvariantBreach("Cayley cycle count violates phi(N)/(k |det H|)")
    return CayleyGraph(N, ell, reps, succ, cycles, k, n)


@dataclass
class ComponentReport:
    cayley: CayleyGraph
    components: list[list[int]]          # vertex indices per component
    strongly_connected: list[bool]
    multipartition_ok: bool
    partitions: list[dict[int, list[int]]]   # weil class -> vertices, per component
    isomorphic_checked: bool
    isomorphic_ok: Optional[bool]


def _strongly_connected(A: np.ndarray, verts: list[int]) -> bool:
    if len(verts) <= 1:
        return True
    sub = A[np.ix_(verts, verts)]
    n = len(verts)

    def reach(M) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in np.nonzero(M[:, u])[0]:
                if int(v) not in seen:
                    seen.add(int(v))
                    stack.append(int(v))
        return len(seen) == n

    return reach(sub) and reach(sub.T)


def component_split(G: IsogenyGraph) -> ComponentReport:
    """Split G along the Weil-invariant orbits and verify the claimed
    structure: each piece strongly connected, edges stepping the partition
    forward, and (when p, ell, det N(H) generate the units) all pieces
    isomorphic via graph symmetries."""
    cay = cayley_graph(G.N, G.H, G.ell)
    class_of = {v.index: v.weil_exp for v in G.vertices}
    comp_of_class = {}
    for ci, cyc in enumerate(cay.cycles):
        for x in cyc:
            comp_of_class[x] = ci
    comps: list[list[int]] = [[] for _ in cay.cycles]
    for v in G.vertices:
        comps[comp_of_class[v.weil_exp]].append(v.index)

    # every edge u -> v must satisfy w(v) = w(u)^ell
    ok_partition = True
    rows, cols = np.nonzero(G.A)
    for i, j in zip(rows.tolist(), cols.tolist()):
        if class_of[i] != cay.successor[class_of[j]]:
            ok_partition = False
            break

    connected = [_strongly_connected(G.A, c) for c in comps]
    partitions = []
    for ci, cyc in enumerate(cay.cycles):
        partitions.append({x: [v for v in comps[ci] if class_of[v] == x] for x in cyc})

    iso_checked = False
    iso_ok: Optional[bool] = None
    if len(comps) > 1:
        iso_checked, iso_ok = _check_components_isomorphic(G, cay, comps)
    return ComponentReport(cay, comps, connected, ok_partition, partitions, iso_checked, iso_ok)


def _check_components_isomorphic(G, cay, comps):
    """If <p, det N(H)> moves every Cayley cycle to every other, exhibit
    graph automorphisms doing it and compare the components."""
    N = G.N
    if N == 1:
        return False, None
    H = G.H
    dets = sorted(H.normalizer().det_set())
    # group generated by p and det N(H) acting on cycle indices
    comp_of_class = {}
    for ci, cyc in enumerate(cay.cycles):
        for x in cyc:
            comp_of_class[x] = ci
    movers: dict[int, tuple] = {0: ()}
    frontier = [(0, ())]
    gens = [("frob", G.p)] + [("diamond-det", d) for d in dets]
    while frontier:
        ci, word = frontier.pop()
        base = cay.cycles[ci][0]
        for kind, a in gens:
            cj = comp_of_class[H.weil_class(base * a)]
            if cj not in movers:
                movers[cj] = word + ((kind, a),)
                frontier.append((cj, movers[cj]))
    if len(movers) != len(cay.cycles):
        return False, None  # hypothesis of the isomorphism statement fails
    # build the automorphisms and compare component images
    ok = True
    for cj, word in movers.items():
        if not word:
            continue
        perm = np.arange(G.n_vertices)
        for kind, a in word:
            if kind == "frob":
                op = graph_operator(G, "frobenius")
            else:
                g = _normalizer_element_with_det(H, a)
                op = graph_operator(G, "matricial", g)
            perm = op.perm[perm]
        image = {int(perm[v]) for v in comps[0]}
        if image != set(comps[cj]):
            ok = False
    return True, ok


def _normalizer_element_with_det(H: LevelSubgroup, d: int) -> Mat:
    for g in sorted(H.normalizer().elements):
        if GL2.det(g, H.N) == d % H.N:
            return g
    raise InvariantBreach("no normalizer element with requested determinant")


# ---------------------------------------------------------------------------
# graph symmetries


@dataclass
class GraphOperator:
    kind: str
    parameter: object
    perm: np.ndarray

    def is_automorphism(self, G: IsogenyGraph) -> bool:
        P = self.perm
        return bool((G.A[np.ix_(P, P)] == G.A).all())


def graph_operator(G: IsogenyGraph, kind: str, parameter=None) -> GraphOperator:
    """Vertex permutations: diamond <d>, matricial <g> for g in N(H),
    frobenius <sigma>, and the level-quotient involution for a distinguished
    Borel factor (atkin_lehner with a prime q)."""
    ws = G._ws
    if ws is None:
        raise UsageError("graph was not built by build_graph (no workspace)")
    n = G.n_vertices
    perm = np.zeros(n, dtype=np.int64)
    if kind == "diamond":
        d = int(parameter)
        if gcd(d, G.N) != 1 and G.N > 1:
            raise UsageError("diamond parameter must be a unit")
        g = GL2.scalar(d, G.N)
        kind = "matricial"
        parameter = g
    if kind == "matricial":
        g = tuple(int(x) % G.N for x in parameter)
        if g not in G.H.normalizer().elements:
            raise UsageError("matricial operator needs g in the normalizer of H")
        for v in G.vertices:
            cd = ws.curve(v.j_label)
            mat = cd.canon[GL2.mul(v.matrix, g, G.N)]
            perm[v.index] = G.vertex_index(v.j_label, mat)
        return GraphOperator("matricial", g, perm)
    if kind == "frobenius":
        for v in G.vertices:
            cd = ws.curve(v.j_label)
            jt, t = cd.frobenius_edge()
            mat = ws.curve(jt).canon[GL2.mul(t, v.matrix, G.N)] if G.N > 1 else (0, 0, 0, 0)
            perm[v.index] = G.vertex_index(jt, mat)
        return GraphOperator("frobenius", None, perm)
    if kind == "atkin_lehner":
        return _atkin_lehner_operator(G, int(parameter))
    raise UsageError(f"unknown operator kind {kind!r}")


def _is_borel_product(H: LevelSubgroup, q: int) -> bool:
    """H = H' x B0(q) under CRT, with q a prime exactly dividing N."""
    N = H.N
    M = N // q
    if N % q or (M > 1 and M % q == 0):
        return False
    bq = {(m[0] % q, m[1] % q, m[2] % q, m[3] % q) for m in H.elements}
    borel_q = {(a, 0, c, d) for a in units(q) for d in units(q) for c in range(q)}
    if bq != borel_q:
        return False
    hm = {tuple(x % M for x in m) for m in H.elements} if M > 1 else {(0, 0, 0, 0)}
    return len(H) == len(hm) * len(borel_q)


def _atkin_lehner_operator(G: IsogenyGraph, q: int) -> GraphOperator:
    ws = G._ws
    N = G.N
    if not sympy.isprime(q):
        raise UsageError("atkin_lehner supports prime q only")
    if not _is_borel_product(G.H, q):
        raise UsageError("H is not of the product form (level-M part) x Borel(q)")
    M = N // q
    uq = M * pow(M, -1, q) % N  # CRT idempotent: 1 mod q, 0 mod M
    perm = np.zeros(G.n_vertices, dtype=np.int64)
    cache: dict[tuple[int, Mat], tuple[int, Mat]] = {}
    for v in G.vertices:
        cd = ws.curve(v.j_label)
        key = (v.j_label, v.matrix)
        if key not in cache:
            mat = v.matrix
            B = cd.basisN
            phi_e1 = mat[0] * B.P + mat[2] * B.Q
            phi_e2 = mat[1] * B.P + mat[3] * B.Q
            Gq = M * phi_e2
            if Gq.is_infinity:
                raise InvariantBreach("distinguished subgroup degenerate")
            alpha = velu(cd.E, Gq, q)
            jt = ws.down_label(alpha.codomain.j_invariant())
            target = ws.curve(jt)
            iso = _first_iso(alpha.codomain, target.E)
            A1m = iso(alpha(((1 - uq) % N) * phi_e1))  # level-M part images
            A2m = iso(alpha(((1 - uq) % N) * phi_e2))
            R2 = iso(alpha(uq * phi_e1))  # generates the image of E[q]
            new_e2 = A2m + R2
            r2 = coordinates_in_basis(R2, target.basisN)
            delta = (r2[1] // M) % q
            # q-part completion of e1: independent reference q-torsion point
            S = M * (target.basisN.P if delta % q else target.basisN.Q)
            new_e1 = A1m + S
            a, c = coordinates_in_basis(new_e1, target.basisN)
            b, d = coordinates_in_basis(new_e2, target.basisN)
            t = (a, b, c, d)
            if gcd(GL2.det(t, N), N) != 1:
                raise InvariantBreach("atkin-lehner image structure degenerate")
            cache[key] = (jt, target.canon[t])
        jt, mat = cache[key]
        perm[v.index] = G.vertex_index(jt, mat)
    return GraphOperator("atkin_lehner", q, perm)


# ---------------------------------------------------------------------------
# quotients and the Borel/split-Cartan comparison


def quotient_graph(G_full: IsogenyGraph, H: LevelSubgroup) -> IsogenyGraph:
    """Quotient of the full-level graph by the right H-action; by the
    moduli description this must coincide with build_graph(p, ell, H)."""
    if G_full.H.order != 1:
        raise UsageError("quotient_graph expects a full-level graph")
    if H.N != G_full.N:
        raise UsageError("level mismatch")
    ws = G_full._ws
    N = H.N
    class_map: dict[int, tuple[int, Mat]] = {}
    weights: dict[tuple[int, Mat], int] = {}
    weil: dict[tuple[int, Mat], int] = {}
    tables: dict[int, tuple[dict, dict]] = {}
    for v in G_full.vertices:
        cd = ws.curve(v.j_label)
        if v.j_label not in tables:
            tables[v.j_label] = double_coset_tables(H, cd.aut_mats)
        canon, weight = tables[v.j_label]
        mat = canon[v.matrix]
        class_map[v.index] = (v.j_label, mat)
        weights[(v.j_label, mat)] = weight[mat]
        weil[(v.j_label, mat)] = H.weil_class(GL2.det(mat, N) * cd.e0 % N) if N > 1 else 0
    keys = sorted(weights)
    qindex = {k: i for i, k in enumerate(keys)}
    nq = len(keys)
    A = np.zeros((nq, nq), dtype=np.int64)
    rep_for: dict[tuple[int, Mat], int] = {}
    for v in G_full.vertices:          # smallest full-level index as class rep
        k = class_map[v.index]
        rep_for.setdefault(k, v.index)
    for k, rep in rep_for.items():
        col = np.zeros(nq, dtype=np.int64)
        for i in np.nonzero(G_full.A[:, rep])[0]:
            col[qindex[class_map[int(i)]]] += int(G_full.A[int(i), rep])
        A[:, qindex[k]] = col
    # representative independence
    for v in G_full.vertices:
        k = class_map[v.index]
        col = np.zeros(nq, dtype=np.int64)
        for i in np.nonzero(G_full.A[:, v.index])[0]:
            col[qindex[class_map[int(i)]]] += int(G_full.A[int(i), v.index])
        if not (col == A[:, qindex[k]]).all():
            raise InvariantBreach("quotient edge counts depend on the representative")
    vertices = [
        Vertex(i, k[0], k[1], weights[k], weil[k]) for i, k in enumerate(keys)
    ]
    g = IsogenyGraph(G_full.p, G_full.ell, H, G_full.seed, vertices, A, ws=None)
    g.check_column_sums()
    return g


def graphs_equal(G1: IsogenyGraph, G2: IsogenyGraph) -> bool:
    """Vertex-for-vertex and edge-for-edge equality (shared labels)."""
    if (G1.p, G1.ell, G1.N) != (G2.p, G2.ell, G2.N):
        return False
    k1 = [(v.j_label, v.matrix) for v in G1.vertices]
    k2 = [(v.j_label, v.matrix) for v in G2.vertices]
    if k1 != k2:
        return False
    return bool((G1.A == G2.A).all())


@dataclass
class BorelCartanReport:
    borel: IsogenyGraph
    cartan: IsogenyGraph
    vertex_map: list[int]
    adjacency_match: bool


def borel_cartan_iso(p: int, ell: int, N: int, seed: int = 0) -> BorelCartanReport:
    """The explicit isomorphism G(p, ell, B0(N^2)) -> G(p, ell, T(N)):
    quotient by the order-N part of the distinguished cyclic subgroup and
    carry the pair (image of the subgroup, image of the N-torsion)."""
    if not sympy.isprime(N):
        raise UsageError("this comparison is implemented for prime N")
    _validate_params(p, ell, N * N)
    GB = build_graph(p, ell, named_family("borel", N * N), seed=seed)
    GC = build_graph(p, ell, named_family("split_cartan", N), seed=seed)
    wsB, wsC = GB._ws, GC._ws
    emb = embedding(wsC.F, wsB.F)

    cart_basis_big: dict[int, TorsionBasis] = {}
    for j in wsC.js:
        cdC = wsC.curve(j.to_int())
        EB = cdC.E2.base_change(wsB.F)
        P = CurvePoint(EB, emb(cdC.basisN.P.x), emb(cdC.basisN.P.y))
        Q = CurvePoint(EB, emb(cdC.basisN.Q.x), emb(cdC.basisN.Q.y))
        cart_basis_big[j.to_int()] = TorsionBasis(EB, N, P, Q, emb(cdC.basisN.zeta))

    vmap = [-1] * GB.n_vertices
    for v in GB.vertices:
        cd = wsB.curve(v.j_label)
        B = cd.basisN
        mat = v.matrix
        phi_e1 = mat[0] * B.P + mat[2] * B.Q
        phi_e2 = mat[1] * B.P + mat[3] * B.Q
        ker = N * phi_e2
        alpha = velu(cd.E, ker, N)
        jt = wsB.down_label(alpha.codomain.j_invariant())
        targetC = wsC.curve(jt)
        targetE_big = cart_basis_big[jt].curve
        isos = isomorphisms_between(alpha.codomain, targetE_big)
        if not isos:
            raise InvariantBreach("Cartan-side model not isomorphic")
        iso = isos[0]
        c1 = iso(alpha(phi_e2))            # generator of C/NC
        c2 = N * iso(alpha(phi_e1))        # generator of E[N]/NC
        a, c = coordinates_in_basis(c1, cart_basis_big[jt])
        b, d = coordinates_in_basis(c2, cart_basis_big[jt])
        t = (a, b, c, d)
        if gcd(GL2.det(t, N), N) != 1:
            raise InvariantBreach("image pair does not span the N-torsion")
        mat_c = targetC.canon[t]
        vmap[v.index] = GC.vertex_index(jt, mat_c)
    if sorted(vmap) != list(range(GC.n_vertices)):
        raise InvariantBreach("Borel->Cartan map is not a vertex bijection")
    P = np.array(vmap)
    match = bool((GC.A[np.ix_(P, P)] == GB.A).all())
    return BorelCartanReport(GB, GC, vmap, match)
