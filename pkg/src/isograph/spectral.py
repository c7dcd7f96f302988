"""Spectra of the adjacency matrices and the verification battery.

Two routes to every spectrum: LAPACK's balanced Hessenberg double-shift QR
(float), and for matrices up to `exact_limit` the exact integer
characteristic polynomial (division-free Berkowitz, computed modulo a CRT
prime set with a rigorous coefficient bound) whose roots are refined with
mpmath.  The spectral-gap bounds are then checked on the exact roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp
import numpy as np
import sympy
from scipy.integrate import quad

from .errors import InvariantBreach, UsageError
from .graphs import IsogenyGraph, adjoint_matrix, cayley_graph, component_split, graph_operator
from .level import GL2, k_and_kprime

_CRT_PRIMES: list[int] = []


def _crt_primes(bits_needed: int) -> list[int]:
    """Fixed primes just under 2^28 (so n * q^2 stays inside int64)."""
    total = 0
    q = 2**28
    out = []
    i = 0
    while total < bits_needed + 2:
        if i < len(_CRT_PRIMES):
            q = _CRT_PRIMES[i]
        else:
            q = sympy.prevprime(q)
            _CRT_PRIMES.append(q)
        out.append(q)
        total += math.log2(q)
        i += 1
    return out


def _charpoly_mod(A: np.ndarray, q: int) -> np.ndarray:
    """Berkowitz: monic char poly of A mod q, coefficients descending."""
    n = A.shape[0]
    Am = (A % q).astype(np.int64)
    c = np.array([1], dtype=np.int64)
    for r in range(1, n + 1):
        sub = Am[: r - 1, : r - 1]
        R = Am[r - 1, : r - 1]
        S = Am[: r - 1, r - 1].copy()
        qvec = np.zeros(r + 1, dtype=np.int64)
        qvec[0] = 1
        qvec[1] = (-int(Am[r - 1, r - 1])) % q
        v = S
        for i in range(2, r + 1):
            qvec[i] = (-int(R @ v)) % q
            if i < r:
                v = (sub @ v) % q
        c = np.convolve(qvec, c)[: r + 1] % q
    return c


def charpoly_exact(A: np.ndarray) -> list[int]:
    """Exact integer characteristic polynomial (monic, descending),
    reconstructed by CRT; the nonnegative matrix's column sums bound the
    spectral radius, hence every coefficient."""
    n = A.shape[0]
    if n == 0:
        return [1]
    if (A < 0).any():
        raise UsageError("exact charpoly expects a nonnegative matrix")
    colmax = max(1, int(A.sum(axis=0).max()))
    bits = n * math.log2(1 + colmax) + n + 8
    primes = _crt_primes(bits)
    residues = [_charpoly_mod(A, q) for q in primes]
    modulus = math.prod(primes)
    out = []
    for k in range(n + 1):
        x = 0
        m_acc = 1
        for q, res in zip(primes, residues):
            r = int(res[k]) if k < len(res) else 0
            # incremental CRT
            t = (r - x) * pow(m_acc, -1, q) % q
            x = x + m_acc * t
            m_acc *= q
        if x > modulus // 2:
            x -= modulus
        out.append(x)
    return out


def _matrix_poly_is_zero(A: np.ndarray, coeffs_desc: list[int]) -> bool:
    """Whether s(A) = 0 for integer s, via evaluation modulo CRT primes."""
    n = A.shape[0]
    deg = len(coeffs_desc) - 1
    colmax = max(1, int(np.abs(A).sum(axis=0).max()))
    bits = (
        max(abs(c) for c in coeffs_desc).bit_length()
        + deg * math.log2(max(2, n * colmax))
        + math.log2(deg + 1)
        + 4
    )
    for q in _crt_primes(bits):
        Am = (A % q).astype(np.int64)
        X = np.full((n, n), coeffs_desc[0] % q, dtype=np.int64) * np.eye(n, dtype=np.int64)
        for c in coeffs_desc[1:]:
            X = (X @ Am + (c % q) * np.eye(n, dtype=np.int64)) % q
        if X.any():
            return False
    return True


def minimal_polynomial_squarefree(A: np.ndarray, charpoly: Optional[list[int]] = None) -> bool:
    """Diagonalizability over C, asserted exactly: the squarefree part of
    the characteristic polynomial must annihilate A."""
    cp = charpoly if charpoly is not None else charpoly_exact(A)
    x = sympy.symbols("x")
    poly = sympy.Poly(cp, x)
    sqf = sympy.prod(f for f, _ in poly.sqf_list()[1]) * poly.sqf_list()[0]
    sqf = sympy.Poly(sqf, x)
    coeffs = [int(c) for c in sqf.all_coeffs()]
    lead = coeffs[0]
    if lead < 0:
        coeffs = [-c for c in coeffs]
    return _matrix_poly_is_zero(A, coeffs)


@dataclass
class Spectrum:
    n: int
    values: list[complex]               # all eigenvalues, with multiplicity
    method: str                         # "exact_charpoly" or "qr_double_shift"
    residual: float                     # max |Av - lambda v| over QR eigenpairs
    charpoly: Optional[list[int]] = None  # monic, descending, when exact

    def moduli(self) -> list[float]:
        return [abs(v) for v in self.values]


def _sorted_vals(vals) -> list[complex]:
    return sorted((complex(v) for v in vals), key=lambda z: (round(z.real, 10), round(z.imag, 10)))


def _exact_roots(cp: list[int], dps: int = 50) -> list[complex]:
    """Roots of an integer polynomial with multiplicity, each squarefree
    factor solved separately at high precision."""
    x = sympy.symbols("x")
    poly = sympy.Poly(cp, x)
    roots: list[complex] = []
    with mp.workdps(dps):
        for factor, mult in poly.sqf_list()[1]:
            cs = [int(c) for c in sympy.Poly(factor, x).all_coeffs()]
            if len(cs) == 1:
                continue
            rts = mp.polyroots(cs, maxsteps=200, extraprec=200)
            for r in rts:
                roots.extend([complex(r)] * mult)
    return roots


def eigenvalues(A: np.ndarray, exact_limit: int = 64) -> Spectrum:
    """Spectrum of an integer matrix; exact charpoly cross-check up to
    exact_limit, QR beyond."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if n == 0:
        return Spectrum(0, [], "exact_charpoly", 0.0, [1])
    vals, vecs = np.linalg.eig(A.astype(float))
    residual = 0.0
    Af = A.astype(float)
    for i in range(n):
        v = vecs[:, i]
        residual = max(residual, float(np.max(np.abs(Af @ v - vals[i] * v))))
    qr_vals = _sorted_vals(vals)
    if n > exact_limit:
        return Spectrum(n, qr_vals, "qr_double_shift", residual)
    cp = charpoly_exact(A)
    exact = _sorted_vals(_exact_roots(cp))
    scale = max(1.0, max(abs(v) for v in exact))
    remaining = list(qr_vals)
    for e in exact:
        near = min(remaining, key=lambda f: abs(e - f))
        if abs(e - near) > 1e-8 * scale * n:
            raise InvariantBreach(
                f"QR eigenvalue near {e} disagrees with the exact root beyond tolerance"
            )
        remaining.remove(near)
    return Spectrum(n, exact, "exact_charpoly", residual, cp)


# ---------------------------------------------------------------------------
# adjointness (the weighted Hermitian structure)


@dataclass
class AdjointReport:
    adjoint_is_diamond_times_A: bool
    commute: bool
    spectra_match: bool
    self_adjoint: bool
    self_adjoint_expected: bool
    symmetric: bool
    symmetric_expected: bool
    hermitian_identity_ok: bool

    @property
    def ok(self) -> bool:
        checks = [
            self.adjoint_is_diamond_times_A,
            self.commute,
            self.spectra_match,
            self.hermitian_identity_ok,
        ]
        if self.self_adjoint_expected:
            checks.append(self.self_adjoint)
        if self.symmetric_expected:
            checks.append(self.symmetric)
        return all(checks)


def verify_adjointness(G: IsogenyGraph) -> AdjointReport:
    A = G.A
    Astar = adjoint_matrix(G)
    n = G.n_vertices
    # <A e_j, e_i> = <e_j, A* e_i> with <e_i, e_j> = delta_ij a_i, exactly
    weights = [v.aut for v in G.vertices]
    herm_ok = all(
        Fraction(weights[i]) * int(A[i, j]) == Fraction(weights[j]) * int(Astar[j, i])
        for i in range(n)
        for j in range(n)
    )
    ell_inv = pow(G.ell, -1, G.N) if G.N > 1 else 1
    P = graph_operator(G, "diamond", ell_inv).perm
    expected = np.zeros_like(A)
    expected[P, :] = A
    adjoint_match = bool((Astar == expected).all())
    commute = bool((A @ Astar == Astar @ A).all())
    sa = bool((A == Astar).all())
    sa_expected = GL2.scalar(G.ell, G.N) in G.H.elements if G.N > 1 else True
    sym = bool((A == A.T).all())
    sym_expected = sa_expected and G.p % 12 == 1
    s1 = eigenvalues(A)
    s2 = eigenvalues(Astar)
    scale = max(1.0, G.ell + 1.0)
    spectra_match = all(abs(a - b) <= 1e-8 * scale for a, b in zip(s1.values, s2.values))
    return AdjointReport(
        adjoint_match, commute, spectra_match, sa, sa_expected, sym, sym_expected, herm_ok
    )


# ---------------------------------------------------------------------------
# angles and the spectral gap


@dataclass
class AngleReport:
    kprime: int
    tolerance: float
    max_residual: float
    violations: list[complex]
    residuals: list[float]

    @property
    def ok(self) -> bool:
        return not self.violations


def classify_angles(S: Spectrum, kprime: int, tol: float = 1e-6, zero_tol: float = 1e-8) -> AngleReport:
    """Distance of each nonzero eigenvalue's phase from the lattice
    Z*pi/kprime."""
    step = math.pi / kprime
    residuals = []
    violations = []
    maxres = 0.0
    for v in S.values:
        if abs(v) <= zero_tol:
            continue
        theta = math.atan2(v.imag, v.real)
        res = abs(theta - round(theta / step) * step)
        residuals.append(res)
        maxres = max(maxres, res)
        if res > tol:
            violations.append(v)
    return AngleReport(kprime, tol, maxres, violations, residuals)


@dataclass
class ComponentGap:
    vertices: list[int]
    k: int
    d: int
    trivial: list[complex]
    trivial_multiplicity_one: bool
    eta: float
    theorem_bound_log10: float
    satisfies_bound: bool
    ramanujan: bool
    spectrum: Spectrum


@dataclass
class GapReport:
    ell: int
    kprime: int
    kprime_pm: int
    components: list[ComponentGap]
    eta: float
    ramanujan: bool
    angle_report: AngleReport
    angle_report_pm: AngleReport

    @property
    def ok(self) -> bool:
        return (
            all(c.trivial_multiplicity_one and c.satisfies_bound for c in self.components)
            and self.ramanujan
        )


def _component_gap(G: IsogenyGraph, verts: list[int], k: int, kprime: int) -> ComponentGap:
    ell = G.ell
    sub = G.A[np.ix_(verts, verts)]
    S = eigenvalues(sub)
    trivial = [(ell + 1) * complex(math.cos(2 * math.pi * t / k), math.sin(2 * math.pi * t / k))
               for t in range(k)]
    vals = list(S.values)
    mult_ok = True
    rest = vals.copy()
    for tv in trivial:
        close = [v for v in rest if abs(v - tv) <= 1e-6 * (ell + 1)]
        if len(close) != 1:
            mult_ok = False
        if close:
            rest.remove(min(close, key=lambda v: abs(v - tv)))
    d = len(verts) - k
    if rest:
        eta = 2 * math.sqrt(ell) - max(abs(v) for v in rest)
    else:
        eta = math.inf
    bound_log10 = (1 - 2 * d * kprime) * math.log10(4 * math.sqrt(ell))
    if d <= 0 or not rest:
        satisfies = True
    else:
        # eta > (4 sqrt(ell))^(1 - 2 d k'): compare in logs, robust to underflow
        satisfies = eta > 0 and math.log10(eta) > bound_log10
    ramanujan = (not rest) or all(abs(v) <= 2 * math.sqrt(ell) + 1e-9 for v in rest)
    return ComponentGap(verts, k, d, trivial, mult_ok, eta, bound_log10, satisfies, ramanujan, S)


def gap_report(G: IsogenyGraph, comp_report=None) -> GapReport:
    """Per-component trivial eigenvalues, gap eta, the proved lower bound,
    and the Ramanujan verdict; angles are classified against both scalar
    conventions (H and H*{+-1})."""
    if comp_report is None:
        comp_report = component_split(G)
    k, kp, kpm = k_and_kprime(G.H, G.ell)
    comps = [
        _component_gap(G, verts, comp_report.cayley.k, kp)
        for verts in comp_report.components
    ]
    eta = min((c.eta for c in comps), default=math.inf)
    whole = eigenvalues(G.A, exact_limit=0) if G.n_vertices > 64 else eigenvalues(G.A)
    angle = classify_angles(whole, kp)
    angle_pm = classify_angles(whole, kpm)
    return GapReport(
        G.ell, kp, kpm, comps, eta, all(c.ramanujan for c in comps), angle, angle_pm
    )


# ---------------------------------------------------------------------------
# Kesten-McKay comparison


def km_density(ell: int, x: float) -> float:
    """Limiting spectral density of large (ell+1)-regular graphs."""
    bound = 2 * math.sqrt(ell)
    if abs(x) >= bound:
        return 0.0
    return (ell + 1) / math.pi * math.sqrt(max(0.0, ell - x * x / 4)) / ((ell + 1) ** 2 - x * x)


def km_cdf(ell: int, x: float) -> float:
    bound = 2 * math.sqrt(ell)
    if x <= -bound:
        return 0.0
    if x >= bound:
        return 1.0
    val, _ = quad(lambda t: km_density(ell, t), -bound, x, limit=200)
    return min(1.0, max(0.0, val))


@dataclass
class KMBucket:
    theta: float
    count: int
    ks_distance: float


@dataclass
class KMReport:
    ell: int
    kprime: int
    buckets: list[KMBucket]

    @property
    def max_ks(self) -> float:
        return max((b.ks_distance for b in self.buckets), default=math.nan)


def km_report(S: Spectrum, ell: int, kprime: int) -> KMReport:
    """Bucket eigenvalues by phase theta in Z*pi/kprime (mod pi) and
    compare each bucket's signed moduli with the Kesten-McKay law."""
    step = math.pi / kprime
    buckets: dict[int, list[float]] = {}
    for v in S.values:
        r = abs(v)
        if r <= 1e-12:
            # zero belongs to every phase class
            for t in range(kprime):
                buckets.setdefault(t, []).append(0.0)
            continue
        theta = math.atan2(v.imag, v.real)
        idx = round(theta / step) % (2 * kprime)
        t = idx % kprime
        buckets.setdefault(t, []).append(r if idx < kprime else -r)
    out = []
    for t in sorted(buckets):
        sample = sorted(buckets[t])
        n = len(sample)
        ks = 0.0
        for i, xval in enumerate(sample):
            F = km_cdf(ell, xval)
            ks = max(ks, abs(F - i / n), abs(F - (i + 1) / n))
        out.append(KMBucket(t * step, n, ks))
    return KMReport(ell, kprime, out)


# ---------------------------------------------------------------------------
# the eta scan


ETA_SCAN_HEADER = "p,l,n_vertices,eta,log_inv_eta,thm_bound,ref_2loglogp"


@dataclass
class EtaRow:
    p: int
    ell: int
    n_vertices: int
    eta: float
    log_inv_eta: float
    thm_bound: float
    ref_2loglogp: float

    def csv(self) -> str:
        def fmt(x: float) -> str:
            if math.isinf(x):
                return "inf" if x > 0 else "-inf"
            return repr(x)

        return (
            f"{self.p},{self.ell},{self.n_vertices},{fmt(self.eta)},"
            f"{fmt(self.log_inv_eta)},{fmt(self.thm_bound)},{fmt(self.ref_2loglogp)}"
        )


def _eta_scan_one(args) -> Optional[EtaRow]:
    p, ell, family, N, seed = args
    from .level import named_family

    try:
        G = _build_for_scan(p, ell, family, N, seed)
        S = eigenvalues(G.A, exact_limit=64)
        vals = list(S.values)
        # remove one trivial eigenvalue per component (largest real ones)
        cay = cayley_graph(G.N, G.H, ell)
        ncomp = cay.n
        k = cay.k
        for t in range(k):
            tv = (ell + 1) * complex(math.cos(2 * math.pi * t / k), math.sin(2 * math.pi * t / k))
            for _ in range(ncomp):
                vals.remove(min(vals, key=lambda v: abs(v - tv)))
        eta = 2 * math.sqrt(ell) - max(abs(v) for v in vals) if vals else math.inf
        bound = (4 * math.sqrt(ell)) ** (-2 * G.n_vertices - 1)
        return EtaRow(
            p,
            ell,
            G.n_vertices,
            eta,
            -math.log(eta) if (eta > 0 and not math.isinf(eta)) else -math.inf,
            bound,
            2 * math.log(math.log(p)),
        )
    except Exception:
        return None


def _build_for_scan(p, ell, family, N, seed):
    from .graphs import build_graph
    from .level import named_family

    return build_graph(p, ell, named_family(family, N), seed=seed)


def eta_scan(
    ell: int,
    p_max: int,
    family: str = "trivial",
    N: int = 1,
    seed: int = 0,
    p_min: int = 5,
    processes: int = 1,
) -> list[EtaRow]:
    """One row per prime p in [p_min, p_max): the gap eta, its proved lower
    bound, and the Alon-Boppana-shaped reference curve."""
    ps = [p for p in sympy.primerange(p_min, p_max) if p != ell and N % p]
    jobs = [(p, ell, family, N, seed) for p in ps]
    if processes > 1:
        import multiprocessing as mp_proc

        with mp_proc.Pool(processes) as pool:
            rows = pool.map(_eta_scan_one, jobs)
    else:
        rows = [_eta_scan_one(j) for j in jobs]
    return [r for r in rows if r is not None]


def eta_scan_csv(rows: list[EtaRow]) -> str:
    return ETA_SCAN_HEADER + "\n" + "\n".join(r.csv() for r in rows) + "\n"
