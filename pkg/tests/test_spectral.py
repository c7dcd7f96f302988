import math

import numpy as np
import sympy
from scipy.integrate import quad

from isograph.graphs import build_graph
from isograph.level import named_family, subgroup_from_generators
from isograph.spectral import (
    charpoly_exact,
    classify_angles,
    eigenvalues,
    eta_scan,
    eta_scan_csv,
    gap_report,
    km_cdf,
    km_density,
    km_report,
    minimal_polynomial_squarefree,
    verify_adjointness,
)

FIG1_GENS = [(5, 6, 2, 1), (1, 2, 0, 1), (7, 0, 2, 7), (5, 0, 0, 5),
             (2, 7, 7, 1), (1, 4, 0, 1), (1, 0, 4, 1)]


def test_charpoly_exact_matches_sympy(rng):
    for n in (1, 2, 5, 9):
        A = np.array([[rng.randrange(5) for _ in range(n)] for _ in range(n)], dtype=np.int64)
        got = charpoly_exact(A)
        want = [int(c) for c in sympy.Matrix(A.tolist()).charpoly().all_coeffs()]
        assert got == want


def test_eigenvalues_singleton():
    S = eigenvalues(np.array([[3]]))
    assert S.values == [3 + 0j]
    assert S.method == "exact_charpoly"


def test_cycle_matrix_spectrum():
    # scaled cyclic permutation: spectrum (ell+1) * mu_k
    ell, k = 3, 4
    A = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        A[(i + 1) % k, i] = ell + 1
    S = eigenvalues(A)
    want = sorted(
        ((ell + 1) * complex(math.cos(2 * math.pi * t / k), math.sin(2 * math.pi * t / k))
         for t in range(k)),
        key=lambda z: (round(z.real, 10), round(z.imag, 10)),
    )
    assert all(abs(a - b) < 1e-9 for a, b in zip(S.values, want))


def test_trivial_level_p23_spectrum():
    G = build_graph(23, 3, named_family("trivial", 1))
    S = eigenvalues(G.A)
    assert S.method == "exact_charpoly"
    vals = sorted(S.values, key=lambda z: z.real)
    assert abs(vals[-1] - 4) < 1e-12
    assert all(abs(v) < 2 * math.sqrt(3) for v in vals[:-1])
    gr = gap_report(G)
    # eta exceeds the proved bound (4 sqrt(3))^(-2*2*1+1) = (4 sqrt 3)^-3
    assert gr.eta > (4 * math.sqrt(3)) ** (-3)
    assert gr.ok


def test_minimal_polynomial_squarefree():
    G = build_graph(23, 3, named_family("trivial", 1))
    assert minimal_polynomial_squarefree(G.A)
    # a nilpotent Jordan block is not diagonalizable
    J = np.array([[0, 1], [0, 0]], dtype=np.int64)
    assert not minimal_polynomial_squarefree(J)
    # identity-like with repeated eigenvalues but diagonalizable
    D = np.diag([2, 2, 3]).astype(np.int64)
    assert minimal_polynomial_squarefree(D)


def test_adjointness_reports():
    # fig1: ell*Id in H, so A = A*; p = 23 != 1 mod 12 so symmetry not required
    G = build_graph(23, 3, subgroup_from_generators(8, FIG1_GENS, name="fig1"))
    rep = verify_adjointness(G)
    assert rep.ok and rep.self_adjoint and rep.self_adjoint_expected
    # p = 37 = 1 mod 12, trivial level: symmetric expected and found
    G = build_graph(37, 2, named_family("trivial", 1))
    rep = verify_adjointness(G)
    assert rep.symmetric_expected and rep.symmetric and rep.ok
    # torsion_point(5) with ell=2: ell*Id not in H, A != A* in general
    G = build_graph(23, 2, named_family("torsion_point", 5))
    rep = verify_adjointness(G)
    assert not rep.self_adjoint_expected
    assert rep.adjoint_is_diamond_times_A and rep.commute and rep.spectra_match


def test_angle_classification():
    G = build_graph(23, 3, named_family("trivial", 1))
    S = eigenvalues(G.A)
    rep = classify_angles(S, 1)
    assert rep.ok and rep.max_residual == 0.0
    # torsion_point(5), ell=2: kprime = 4, angles on Z*pi/4
    G = build_graph(23, 2, named_family("torsion_point", 5))
    S = eigenvalues(G.A)
    rep4 = classify_angles(S, 4)
    assert rep4.ok
    # some eigenvalue should be non-real here (kprime > 1 with p large enough)
    assert any(abs(v.imag) > 1e-9 for v in S.values)


def test_gap_report_fig1():
    G = build_graph(23, 3, subgroup_from_generators(8, FIG1_GENS, name="fig1"))
    gr = gap_report(G)
    for c in gr.components:
        assert c.k == 2
        assert c.trivial_multiplicity_one
        assert {round(t.real) for t in c.trivial} == {4, -4}
        assert c.satisfies_bound and c.ramanujan
    assert abs(gr.eta - (2 * math.sqrt(3) - 3)) < 1e-9


def test_km_density_properties():
    for ell in (2, 3, 5, 7):
        total, err = quad(lambda x: km_density(ell, x), -2 * math.sqrt(ell), 2 * math.sqrt(ell))
        assert abs(total - 1) < 1e-9
        b = 2 * math.sqrt(ell)
        assert km_density(ell, b) == 0.0 and km_density(ell, -b) == 0.0
        for x in (0.3, 1.1, 2.0):
            assert abs(km_density(ell, x) - km_density(ell, -x)) < 1e-15
    assert km_cdf(2, -10) == 0.0 and km_cdf(2, 10) == 1.0


def test_km_report_buckets():
    G = build_graph(101, 2, named_family("borel", 3))
    S = eigenvalues(G.A, exact_limit=0)
    rep = km_report(S, 2, 1)
    assert len(rep.buckets) == 1
    assert 0 < rep.max_ks < 1
    assert rep.buckets[0].count == G.n_vertices


def test_eta_scan_small():
    rows = eta_scan(2, 60)
    assert [r.p for r in rows] == [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    for r in rows:
        if r.n_vertices == 1:
            assert math.isinf(r.eta)
        else:
            assert r.thm_bound <= r.eta <= 2 * math.sqrt(2)
            # eta = 2 sqrt(2) exactly iff every nontrivial eigenvalue is 0,
            # which happens at p = 19 (the level-19 newform has a_2 = 0)
            assert (r.eta < 2 * math.sqrt(2)) == (r.p != 19)
        assert abs(r.ref_2loglogp - 2 * math.log(math.log(r.p))) < 1e-12
    text = eta_scan_csv(rows)
    assert text.splitlines()[0] == "p,l,n_vertices,eta,log_inv_eta,thm_bound,ref_2loglogp"
    assert len(text.strip().splitlines()) == len(rows) + 1


def test_eta_scan_parallel_matches_serial():
    serial = eta_scan(2, 40)
    parallel = eta_scan(2, 40, processes=2)
    assert eta_scan_csv(serial) == eta_scan_csv(parallel)
