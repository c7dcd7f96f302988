from math import gcd

import pytest
import sympy

from isograph.graphs import build_graph
from isograph.level import named_family
from isograph.modular import check_dimensions, dim_new_gamma0, dim_pnew_gamma0, genus_X0


def _brute_genus(M: int) -> int:
    """Independent re-derivation: count elliptic points by solving the
    quadratics mod M and cusps as Borel orbits on P^1(Z/M)."""
    if M == 1:
        return 0
    mu = M * sympy.prod(sympy.Rational(q + 1, q) for q in sympy.factorint(M))
    nu2 = 0 if M % 4 == 0 else sum(1 for x in range(M) if (x * x + 1) % M == 0)
    nu3 = 0 if M % 9 == 0 else sum(1 for x in range(M) if (x * x + x + 1) % M == 0)

    # cusps = Gamma_0(M) \ SL2(Z) / <T>; cosets are P^1(Z/M) via the bottom
    # row, and right multiplication by T sends the class (c:d) to (c:c+d)
    def norm(c, d):
        best = None
        for u in range(1, M):
            if gcd(u, M) == 1:
                cand = (c * u % M, d * u % M)
                if best is None or cand < best:
                    best = cand
        return best

    pts = sorted(
        {norm(c, d) for c in range(M) for d in range(M) if gcd(gcd(c, d), M) == 1}
    )
    seen = set()
    nuinf = 0
    for start in pts:
        if start in seen:
            continue
        nuinf += 1
        cur = start
        while cur not in seen:
            seen.add(cur)
            cur = norm(cur[0], cur[0] + cur[1])
    g = 1 + sympy.Rational(mu, 12) - sympy.Rational(nu2, 4) - sympy.Rational(nu3, 3) - sympy.Rational(nuinf, 2)
    assert g.is_integer
    return int(g)


def test_genus_small_table():
    assert genus_X0(1) == 0
    assert genus_X0(11) == 1
    assert genus_X0(23) == 2
    assert genus_X0(14) == 1
    assert genus_X0(15) == 1
    assert genus_X0(37) == 2


def test_genus_against_brute_force():
    for M in list(range(1, 61)) + [64, 72, 81, 90, 96, 100]:
        assert genus_X0(M) == _brute_genus(M), M


def test_dim_pnew():
    assert dim_pnew_gamma0(23, 1) == 2
    assert dim_pnew_gamma0(11, 1) == 1
    # subtracting a genus-0 old part
    assert dim_pnew_gamma0(23, 2) == genus_X0(46)
    with pytest.raises(Exception):
        dim_pnew_gamma0(10, 1)


def test_dim_new():
    assert dim_new_gamma0(1) == 0
    assert dim_new_gamma0(11) == 1
    assert dim_new_gamma0(22) == 0
    # consistency: old+new decomposition recovers the genus
    for M in (30, 45, 50, 98):
        total = sum(
            len(sympy.divisors(M // d)) * dim_new_gamma0(d) for d in sympy.divisors(M)
        )
        assert total == genus_X0(M), M


def test_supersingular_count_equals_dim_plus_one():
    from isograph.graphs import enumerate_supersingular

    for p in (5, 13, 23, 31, 47, 101):
        assert len(enumerate_supersingular(p)) == dim_pnew_gamma0(p, 1) + 1


def test_check_dimensions_cases():
    G = build_graph(23, 2, named_family("trivial", 1))
    r = check_dimensions(G)
    assert r.supported and r.match and r.graph_side == 2 == genus_X0(23)
    G = build_graph(23, 2, named_family("borel", 5))
    r = check_dimensions(G)
    assert r.supported and r.match
    assert r.modular_side == genus_X0(115) - 2 * genus_X0(5)
    G = build_graph(23, 2, named_family("nonsplit_cartan", 5))
    r = check_dimensions(G)
    assert r.supported and r.match
    assert r.modular_side == dim_new_gamma0(23) + dim_new_gamma0(23 * 25)
    G = build_graph(23, 2, named_family("split_cartan", 5))
    r = check_dimensions(G)
    assert not r.supported


def test_check_dimensions_sampled_matrix():
    # borel and nonsplit Cartan across a sample of (p, N) pairs
    for p in (23, 41, 97):
        for N in (2, 3, 7):
            if p % N == 0:
                continue
            ell = 2 if N != 2 else 3
            for fam in ("borel", "nonsplit_cartan"):
                G = build_graph(p, ell, named_family(fam, N))
                r = check_dimensions(G)
                assert r.supported and r.match, (p, N, fam, r)
