"""Classical modular polynomials Phi_2 and Phi_3.

Phi_ell(j(E), Y) = prod over the ell+1 cyclic ell-isogenies E -> E' of
(Y - j(E')), so its roots (with multiplicity) are the isogenous
j-invariants.  Used as the independent oracle for Velu's formulas and as
the step relation when enumerating supersingular j-invariants.
"""

from __future__ import annotations

from .fields import FieldElement, FiniteField
from .polys import roots as poly_roots

# (i, j, c) with i >= j; the (j, i) mirror is implied.
_PHI2_TERMS = [
    (3, 0, 1),
    (2, 2, -1),
    (2, 1, 1488),
    (2, 0, -162000),
    (1, 1, 40773375),
    (1, 0, 8748000000),
    (0, 0, -157464000000000),
]

_PHI3_TERMS = [
    (4, 0, 1),
    (3, 3, -1),
    (3, 2, 2232),
    (3, 1, -1069956),
    (3, 0, 36864000),
    (2, 2, 2587918086),
    (2, 1, 8900222976000),
    (2, 0, 452984832000000),
    (1, 1, -770845966336000000),
    (1, 0, 1855425871872000000000),
]

TERMS = {2: _PHI2_TERMS, 3: _PHI3_TERMS}
SUPPORTED = tuple(TERMS)


def modular_poly_eval(ell: int, x, y):
    """Phi_ell(x, y) for any ring elements supporting + and * with ints."""
    terms = TERMS[ell]
    acc = 0
    for i, j, c in terms:
        acc = acc + c * (x**i * y**j)
        if i != j:
            acc = acc + c * (x**j * y**i)
    return acc


def modular_poly_in_y(ell: int, jval: FieldElement) -> list[FieldElement]:
    """Phi_ell(jval, Y) as a univariate polynomial over jval's field."""
    K = jval.field
    coeffs = [K.zero()] * (ell + 2)
    jpow = [K.one()]
    for _ in range(ell + 1):
        jpow.append(jpow[-1] * jval)
    for i, j, c in TERMS[ell]:
        coeffs[j] = coeffs[j] + c * jpow[i]
        if i != j:
            coeffs[i] = coeffs[i] + c * jpow[j]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def isogenous_j_invariants(ell: int, jval: FieldElement, multiplicities: bool = True):
    """Roots of Phi_ell(j, Y) in j's field; with multiplicity by default."""
    K: FiniteField = jval.field
    f = modular_poly_in_y(ell, jval)
    return poly_roots(f, K, multiplicities=multiplicities)
