"""Classical genus and dimension formulas for modular curves.

These provide the independent 'modular side' of the vertex-count and
kernel-dimension identities: the number of supersingular curves, and the
dimension of the space the adjacency matrix acts on after removing the
trivial eigenvectors, both match dimensions of spaces of weight-2 cusp
forms computable from genus formulas alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import sympy

from .errors import UsageError


def genus_X0(M: int) -> int:
    """Genus of X_0(M): 1 + mu/12 - nu2/4 - nu3/3 - nuinf/2."""
    if M < 1:
        raise UsageError("level must be positive")
    if M == 1:
        return 0
    factors = sympy.factorint(M)
    mu = M * prod(1 + sympy.Rational(1, q) for q in factors)

    # (-1|q) and (-3|q) in the elliptic-point-count sense: the factors
    # 1 + sym count the roots of x^2+1 and x^2+x+1 modulo q
    def sym_m1(q: int) -> int:
        return 0 if q == 2 else int(sympy.jacobi_symbol(-1, q))

    def sym_m3(q: int) -> int:
        return -1 if q == 2 else int(sympy.jacobi_symbol(-3, q))

    if M % 4 == 0:
        nu2 = 0
    else:
        nu2 = prod(1 + sym_m1(q) for q in factors)
    if M % 9 == 0:
        nu3 = 0
    else:
        nu3 = prod(1 + sym_m3(q) for q in factors)
    nuinf = sum(sympy.totient(gcd(d, M // d)) for d in sympy.divisors(M))
    g = 1 + sympy.Rational(mu, 12) - sympy.Rational(nu2, 4) - sympy.Rational(nu3, 3) - sympy.Rational(nuinf, 2)
    assert g.is_integer and g >= 0
    return int(g)


def dim_pnew_gamma0(p: int, N: int) -> int:
    """dim of the p-new subspace of weight-2 cusp forms for Gamma_0(pN):
    g(X0(pN)) - 2 g(X0(N)), via the two degeneracy maps."""
    if not sympy.isprime(p) or N % p == 0:
        raise UsageError("need p prime with p not dividing N")
    return genus_X0(p * N) - 2 * genus_X0(N)


def _beta(n: int) -> int:
    """Multiplicative inversion kernel: beta(q) = -2, beta(q^2) = 1,
    beta(q^e) = 0 for e >= 3."""
    out = 1
    for _, e in sympy.factorint(n).items():
        if e == 1:
            out *= -2
        elif e == 2:
            out *= 1
        else:
            return 0
    return out


def dim_new_gamma0(M: int) -> int:
    """dim of the new subspace of weight-2 cusp forms for Gamma_0(M)."""
    if M < 1:
        raise UsageError("level must be positive")
    return sum(_beta(M // d) * genus_X0(d) for d in sympy.divisors(M))


@dataclass
class DimensionReport:
    p: int
    N: int
    family: str
    graph_side: int      # |V| - n*k
    modular_side: int
    match: bool
    supported: bool = True


def check_dimensions(G) -> DimensionReport:
    """Compare |V| - n*k with the matching cusp-form dimension.

    Supported families: trivial level, Borel(N), nonsplit Cartan(N); other
    subgroups would need character-decomposed dimension formulas and are
    reported as unsupported."""
    from .graphs import cayley_graph

    H = G.H
    name = H.name
    p = G.p
    N = G.N
    cay = cayley_graph(N, H, G.ell)
    graph_side = G.n_vertices - cay.n * cay.k
    if name == "trivial" or N == 1:
        modular = genus_X0(p)
        fam = "trivial"
    elif name == "borel":
        modular = dim_pnew_gamma0(p, N)
        fam = "borel"
    elif name == "nonsplit_cartan":
        modular = sum(dim_new_gamma0(p * d * d) for d in sympy.divisors(N))
        fam = "nonsplit_cartan"
    else:
        return DimensionReport(p, N, name or "custom", graph_side, -1, False, supported=False)
    return DimensionReport(p, N, fam, graph_side, modular, graph_side == modular)
