import random

import pytest
import sympy

from isograph.curves import canonical_model, torsion_basis, random_point
from isograph.errors import UsageError
from isograph.fields import GF
from isograph.isogenies import (
    coordinates_in_basis,
    kernel_subgroups,
    push_level_structure,
    velu,
    weil_pairing,
)
from isograph.modpoly import isogenous_j_invariants


def _working_curve(p, jint, n):
    """Canonical model base-changed so E[n] is rational."""
    m = sympy.n_order(-p % n, n) if n > 2 else 1
    E = canonical_model(GF(p, 2).element(jint), p)
    return E.base_change(GF(p, 2 * m))


def test_kernel_subgroup_counts(rng):
    E = _working_curve(23, 19, 6)
    for ell in (2, 3):
        tb = torsion_basis(E, ell, rng)
        gens = kernel_subgroups(E, ell, tb)
        assert len(gens) == ell + 1
        # pairwise intersections trivial: distinct subgroups of prime order
        subs = [frozenset((t * g).x.c for t in range(1, ell)) for g in gens]
        assert len(set(subs)) == ell + 1


@pytest.mark.parametrize("p,jint", [(23, 1728), (23, 0), (23, 19), (31, 4)])
@pytest.mark.parametrize("ell", [2, 3])
def test_velu_matches_modular_polynomial(p, jint, ell, rng):
    E = _working_curve(p, jint, ell)
    tb = torsion_basis(E, ell, rng)
    got = []
    for K in kernel_subgroups(E, ell, tb):
        phi = velu(E, K)
        assert phi(K).is_infinity
        got.append(phi.codomain.j_invariant().to_int())
    want = []
    for r, mult in isogenous_j_invariants(ell, E.j_invariant()):
        want += [r.to_int()] * mult
    assert sorted(got) == sorted(want)


def test_velu_degrees_5_7(rng):
    E = _working_curve(23, 19, 35)
    for ell in (5, 7):
        tb = torsion_basis(E, ell, rng)
        gens = kernel_subgroups(E, ell, tb)
        assert len(gens) == ell + 1
        js = set()
        for K in gens:
            phi = velu(E, K, ell)
            assert phi(K).is_infinity
            js.add(phi.codomain.j_invariant().to_int())
        assert js  # codomains computed without breaching the curve equation


def test_velu_dual_composition_is_multiplication_by_ell(rng):
    from isograph.curves import isomorphisms_between

    E = _working_curve(23, 19, 3)
    ell = 3
    tb = torsion_basis(E, ell, rng)
    K = tb.P
    phi = velu(E, K, ell)
    D = phi(tb.Q)  # generates the dual kernel
    psi = velu(phi.codomain, D, ell)
    assert psi.codomain.j_invariant() == E.j_invariant()
    isos = isomorphisms_between(psi.codomain, E)
    assert isos
    for _ in range(5):
        P = random_point(E, rng)
        assert any(i(psi(phi(P))) == ell * P for i in isos)


def test_velu_rejects_wrong_order(rng):
    E = _working_curve(23, 19, 3)
    tb = torsion_basis(E, 3, rng)
    with pytest.raises(UsageError):
        velu(E, 3 * tb.P, 3)


def test_weil_pairing_properties(rng):
    E = _working_curve(23, 19, 8)
    K = E.field
    n = 8
    tb = torsion_basis(E, n, rng)
    P, Q = tb.P, tb.Q
    z = weil_pairing(P, Q, n)
    assert z**n == K.one() and z ** (n // 2) != K.one()
    assert weil_pairing(P, P, n) == K.one()
    assert z * weil_pairing(Q, P, n) == K.one()
    # bilinearity on random combinations
    for _ in range(40):
        a, b, c, d = (rng.randrange(n) for _ in range(4))
        X = a * P + b * Q
        Y = c * P + d * Q
        assert weil_pairing(X, Y, n) == z ** ((a * d - b * c) % n)


def test_pairing_compatible_with_isogeny(rng):
    # e(alpha P, alpha Q) = e(P, Q)^deg alpha
    ell, n = 3, 8
    E = _working_curve(23, 19, n * ell)
    tbn = torsion_basis(E, n, rng)
    tbl = torsion_basis(E, ell, rng)
    phi = velu(E, tbl.P, ell)
    lhs = weil_pairing(phi(tbn.P), phi(tbn.Q), n)
    assert lhs == tbn.zeta**ell


def test_push_level_structure(rng):
    ell, n = 3, 8
    E = _working_curve(23, 19, n * ell)
    tb = torsion_basis(E, n, rng)
    tbl = torsion_basis(E, ell, rng)
    phi = velu(E, tbl.P, ell)
    cod_basis = torsion_basis(phi.codomain, n, random.Random(99))
    mat = (1, 2, 1, 3)  # some invertible structure matrix mod 8
    pushed = push_level_structure(phi, mat, tb, cod_basis)
    det_m = (mat[0] * mat[3] - mat[1] * mat[2]) % n
    det_p = (pushed[0] * pushed[3] - pushed[1] * pushed[2]) % n
    # Weil exponent of pushed structure is the old one times ell
    from isograph.fields import dlog_in_mu_n, primitive_nth_root

    zeta = primitive_nth_root(E.field, n)
    e_src = dlog_in_mu_n(tb.zeta, zeta, n) * det_m % n
    e_dst = dlog_in_mu_n(cod_basis.zeta, zeta, n) * det_p % n
    assert e_dst == e_src * ell % n


def test_coordinates_in_basis(rng):
    E = _working_curve(23, 19, 8)
    tb = torsion_basis(E, 8, rng)
    for _ in range(20):
        a, b = rng.randrange(8), rng.randrange(8)
        assert coordinates_in_basis(a * tb.P + b * tb.Q, tb) == (a, b)
