import pytest
import sympy

from isograph.errors import UsageError
from isograph.level import (
    GL2,
    canonical_class,
    k_and_kprime,
    named_family,
    subgroup_from_generators,
    units,
    weil_invariant,
)

FIG1_GENS = [(5, 6, 2, 1), (1, 2, 0, 1), (7, 0, 2, 7), (5, 0, 0, 5),
             (2, 7, 7, 1), (1, 4, 0, 1), (1, 0, 4, 1)]


def fig1_subgroup():
    return subgroup_from_generators(8, FIG1_GENS, name="fig1")


def test_gl2_order_formula():
    for N in (2, 3, 4, 5, 6, 8, 9, 12):
        order = N**4
        for q in sympy.primefactors(N):
            order = order * (q - 1) * (q - 1) * (q + 1) // q**3
        assert GL2.group_order(N) == order
        assert len(GL2.all_elements(N)) == order


def test_subgroup_closure_empty_gens():
    H = subgroup_from_generators(8, [])
    assert H.order == 1 and GL2.identity(8) in H


def test_fig1_subgroup_structure():
    H = fig1_subgroup()
    assert H.index == 8
    assert H.order == 192
    assert sorted(H.det_set()) == [1]
    assert H.contains_minus_id
    assert H.weil_classes() == [1, 3, 5, 7]


def test_subgroup_rejects_noninvertible():
    with pytest.raises(UsageError):
        subgroup_from_generators(8, [(2, 0, 0, 1)])


def test_named_family_orders():
    assert named_family("borel", 5).order == 80  # phi(5)^2 * 5
    assert named_family("torsion_point", 5).order == 20
    assert named_family("split_cartan", 5).order == 16
    assert named_family("nonsplit_cartan", 5).order == 24
    assert named_family("full", 7).order == 1
    assert named_family("trivial", 3).order == GL2.group_order(3)
    for N in (3, 4, 5, 8, 9, 16):
        for fam in ("borel", "split_cartan", "torsion_point", "full",
                    "nonsplit_cartan", "trivial"):
            H = named_family(fam, N)
            assert H.order * H.index == GL2.group_order(N), (fam, N)


def test_torsion_point_family_shape():
    H = named_family("torsion_point", 6)
    assert all(m[1] == 0 and m[3] == 1 for m in H.elements)
    assert len(H) == len(units(6)) * 6


def test_nonsplit_cartan_is_a_group_with_full_det():
    for N in (3, 5, 7, 8, 9):
        C = named_family("nonsplit_cartan", N)
        for a in list(C.elements)[:20]:
            assert GL2.inv(a, N) in C
            for b in list(C.elements)[:10]:
                assert GL2.mul(a, b, N) in C
        assert sorted(C.det_set()) == list(units(N))


def test_k_and_kprime_examples():
    # full level N=8, ell=3: 3^2 = 9 = 1 mod 8
    assert k_and_kprime(named_family("full", 8), 3) == (2, 2, 2)
    # Borel contains the scalars
    assert k_and_kprime(named_family("borel", 5), 2) == (1, 1, 1)
    # trivial: det H is everything
    assert k_and_kprime(named_family("trivial", 8), 3)[0] == 1
    # torsion point: scalar ell^t in H iff ell^t = 1 mod N; 2^2 = -1 mod 5
    assert k_and_kprime(named_family("torsion_point", 5), 2) == (1, 4, 2)
    assert k_and_kprime(named_family("torsion_point", 5), 3)[1] == 4
    # fig1: det H = 1 so k = ord of 3 mod 8 = 2; 3*Id has det 9 = 1, and is in H
    assert k_and_kprime(fig1_subgroup(), 3) == (2, 1, 1)


def test_normalizer_closure():
    for N, fam in ((5, "borel"), (5, "split_cartan"), (8, "full")):
        H = named_family(fam, N)
        NH = H.normalizer()
        for g in list(NH.elements)[:40]:
            gi = GL2.inv(g, N)
            assert all(
                GL2.mul(GL2.mul(g, h, N), gi, N) in H for h in list(H.elements)[:25]
            )
        assert H.det_set() <= NH.det_set()


def test_canonical_class_constant_on_orbits(rng):
    H = fig1_subgroup()
    aut = [GL2.identity(8), GL2.scalar(-1, 8)]
    mats = list(GL2.all_elements(8))
    for _ in range(100):
        m = mats[rng.randrange(len(mats))]
        rep = canonical_class(m, H, aut)
        h = list(H.elements)[rng.randrange(len(H))]
        u = aut[rng.randrange(2)]
        m2 = GL2.mul(u, GL2.mul(m, h, 8), 8)
        assert canonical_class(m2, H, aut) == rep
        assert canonical_class(rep, H, aut) == rep  # idempotent


def test_minus_phi_same_class():
    H = named_family("full", 5)
    aut = [GL2.identity(5), GL2.scalar(-1, 5)]
    m = (1, 2, 0, 1)
    minus = GL2.mul(GL2.scalar(-1, 5), m, 5)
    assert canonical_class(m, H, aut) == canonical_class(minus, H, aut)


def test_weil_invariant_classes():
    H = named_family("trivial", 8)  # det H = everything: R_H is a point
    assert len(H.weil_classes()) == 1
    Hf = fig1_subgroup()
    w = weil_invariant((1, 0, 0, 1), Hf, 1)
    assert w.exponent == 1
    # right H-action leaves the class fixed
    for h in list(Hf.elements)[:25]:
        m = GL2.mul(GL2.identity(8), h, 8)
        assert weil_invariant(m, Hf, 1) == w
    # the trivial-level quotient absorbs every det
    Ht = named_family("trivial", 8)
    vals = {weil_invariant((u, 0, 0, 1), Ht, 1).exponent for u in units(8)}
    assert len(vals) == 1
