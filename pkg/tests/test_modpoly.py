"""The hardcoded modular polynomials checked against the analytic
j-function: Phi_ell(j(tau), j(ell*tau)) must vanish identically."""

import mpmath as mp
import pytest

from isograph.fields import GF
from isograph.modpoly import isogenous_j_invariants, modular_poly_eval


def _j(tau, terms=60):
    q = mp.e ** (2j * mp.pi * tau)
    e4 = mp.mpf(1) + 240 * sum(
        sum(d**3 for d in range(1, n + 1) if n % d == 0) * q**n for n in range(1, terms)
    )
    delta = q
    for n in range(1, terms + 40):
        delta *= (1 - q**n) ** 24
    return e4**3 / delta


@pytest.mark.parametrize("ell", [2, 3])
@pytest.mark.parametrize("tau", [0.23 + 1.3j, -0.41 + 1.11j, 0.05 + 0.95j])
def test_phi_vanishes_on_isogenous_pairs(ell, tau):
    with mp.workdps(60):
        tau = mp.mpc(tau)
        j1 = _j(tau)
        j2 = _j(ell * tau)
        val = modular_poly_eval(ell, j1, j2)
        scale = max(abs(j1), abs(j2)) ** (ell + 1)
        assert abs(val) / scale < mp.mpf(10) ** -40


@pytest.mark.parametrize("ell", [2, 3])
def test_phi_symmetric(ell):
    F = GF(23, 2)
    a, b = F.element([5, 7]), F.element([9, 2])
    assert modular_poly_eval(ell, a, b) == modular_poly_eval(ell, b, a)


def test_phi2_fixed_points():
    # CM j-invariants with a rational 2-isogeny to themselves
    for jv in (1728, 8000, -3375):
        assert modular_poly_eval(2, jv, jv) == 0


def test_root_multiplicities_sum():
    F = GF(23, 2)
    for ell in (2, 3):
        for jint in (0, 3, 19):
            rts = isogenous_j_invariants(ell, F.element(jint))
            assert sum(m for _, m in rts) == ell + 1
