"""
Filename: polyalg.py
Project: TD Clock Stability (TDCS)
Description: Dense small-matrix numerics: characteristic polynomials, roots, Hurwitz determinants,
             complex solves, stationary distributions and eigenvectors
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import math
import warnings
from typing import Callable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import mpmath
import numpy as np
from scipy.linalg import LinAlgWarning
from scipy.linalg import lu_factor
from scipy.linalg import lu_solve

from td_clock_stability._exceptions import ConvergenceError
from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import NumericalInconsistencyError
from td_clock_stability._exceptions import SingularityError
from td_clock_stability._exceptions import StructureError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.core.config import Tolerances
from td_clock_stability.models.base_model import as_complex_array
from td_clock_stability.models.base_model import as_real_matrix
from td_clock_stability.models.instance_models import check_row_stochastic
from td_clock_stability.models.polynomial_models import RealPolynomial
from td_clock_stability.utils.method_logger import method_logger

log = logging.getLogger(__name__)


def power_of_two(x: float) -> float:
    """nearest power of two, so that scaling by it is exact in binary floating point"""
    if not x > 0 or not math.isfinite(x):
        return 1.0
    return 2.0 ** round(math.log2(x))


def matrix_scale(M: np.ndarray) -> float:
    """spectral-size estimate used to normalise a matrix before tie and rank thresholds"""
    n = M.shape[0]
    size = max(abs(np.trace(M)) / n, np.linalg.norm(M, ord="fro") / math.sqrt(n))
    return power_of_two(size)


def working_digits(M: np.ndarray, tolerances: Optional[Tolerances] = None) -> int:
    """
    Decimal digits for coefficient and Hurwitz-minor work on M: a base allowance plus twice the
    decades lost to non-normality (||M||_2 against the spectral radius, per degree) and to the
    spread between the largest and the smaller eigenvalue moduli.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    n = M.shape[0]
    moduli = np.abs(np.linalg.eigvals(M))
    radius = float(moduli.max())
    if not radius > 0:
        return tolerances.EXTRA_DIGITS
    norm = float(np.linalg.norm(M, 2))
    spread = float(np.sum(np.log10(radius / np.maximum(moduli, np.finfo(float).eps * radius))))
    departure = n * math.log10(max(1.0, norm / radius))
    return int(min(tolerances.MAX_DIGITS, tolerances.EXTRA_DIGITS + 2 * math.ceil(spread + departure)))


def _check_square(rows: Sequence[Sequence], what: str) -> int:
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        exception = DimensionError(what, (n, len(rows[0]) if n else 0))
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return n


def extended_char_poly(M, digits: int) -> List[mpmath.mpf]:
    """
    [1, a_1, ..., a_n] of det(zI - M) at `digits` decimal digits. M (floats or mpf entries) is
    brought to upper Hessenberg form by pivoted Gaussian similarity; the coefficients then follow
    from the Hessenberg determinant recurrence
    p_k(z) = (z - h_kk) p_{k-1}(z) - sum_{i<k} h_ik h_{i+1,i} ... h_{k,k-1} p_{i-1}(z).
    """
    n = _check_square(M, "extended_char_poly input")
    with mpmath.workdps(digits):
        H = [[mpmath.mpf(x) for x in row] for row in M]
        for k in range(n - 2):
            p = max(range(k + 1, n), key=lambda i: abs(H[i][k]))
            if H[p][k] == 0:
                continue
            if p != k + 1:
                H[k + 1], H[p] = H[p], H[k + 1]
                for row in H:
                    row[k + 1], row[p] = row[p], row[k + 1]
            pivot_row = H[k + 1]
            for i in range(k + 2, n):
                factor = H[i][k] / pivot_row[k]
                if factor == 0:
                    continue
                target = H[i]
                for j in range(k, n):
                    target[j] -= factor * pivot_row[j]
                for row in H:
                    row[k + 1] += factor * row[i]

        # ascending coefficient lists of p_0 .. p_n
        zero, one = mpmath.mpf(0), mpmath.mpf(1)
        polys = [[one]]
        for k in range(n):
            current = [zero] + polys[-1]
            for d, c in enumerate(polys[-1]):
                current[d] -= H[k][k] * c
            product = one
            for i in range(k - 1, -1, -1):
                product *= H[i + 1][i]
                weight = H[i][k] * product
                if weight == 0:
                    continue
                for d, c in enumerate(polys[i]):
                    current[d] -= weight * c
            polys.append(current)
        return polys[-1][::-1]


def char_poly(M, digits: Optional[int] = None) -> RealPolynomial:
    """det(zI - M), accumulated at extended precision (estimated from M when digits is omitted) and rounded once"""
    A = as_real_matrix(M, "char_poly input")
    digits = working_digits(A) if digits is None else digits
    return RealPolynomial(coeffs=[float(c) for c in extended_char_poly(A, digits)])


def _initial_circle(coeffs: np.ndarray, seed: int) -> np.ndarray:
    n = coeffs.size - 1
    center = -coeffs[1].real / n
    # twice the Fujiwara bound
    j = np.arange(1, n + 1, dtype=float)
    radius = 2.0 * float(np.max(np.abs(coeffs[1:]) ** (1.0 / j)))
    radius = max(radius, 1e-3)
    rng = np.random.default_rng(seed)
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4 + rng.uniform(0.0, np.pi / n, size=n)
    radii = radius * (1.0 + 0.1 * rng.uniform(-1.0, 1.0, size=n))
    return center + radii * np.exp(1j * angles)


def _pair_conjugates(roots: np.ndarray, cluster: float) -> np.ndarray:
    roots = roots.copy()
    for idx, z in enumerate(roots):
        if abs(z.imag) <= cluster * (1.0 + abs(z)):
            roots[idx] = complex(z.real, 0.0)

    upper = [i for i, z in enumerate(roots) if z.imag > 0]
    lower = [i for i, z in enumerate(roots) if z.imag < 0]
    for i in upper:
        if not lower:
            break
        k = min(lower, key=lambda j: abs(roots[j] - np.conj(roots[i])))
        lower.remove(k)
        mean = 0.5 * (roots[i] + np.conj(roots[k]))
        roots[i], roots[k] = mean, np.conj(mean)
    return roots


def _cluster_labels(values: np.ndarray, radius: float) -> np.ndarray:
    """union-find labels of values whose chains of pairwise distances stay within radius"""
    parent = list(range(values.size))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(values.size):
        for j in range(i + 1, values.size):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    return np.array([find(i) for i in range(values.size)], dtype=int)


def cluster_roots(values, radius: float = DEFAULT_TOLERANCES.ROOT_CLUSTER) -> List[Tuple[complex, int]]:
    """
    Groups values whose chains of pairwise distances stay within radius.
    Returns (cluster mean, multiplicity) ordered by real part then imaginary part.
    """
    values = np.asarray(values, dtype=complex)
    labels = _cluster_labels(values, radius)
    clusters = [(complex(np.mean(values[labels == label])), int(np.sum(labels == label))) for label in np.unique(labels)]
    return sorted(clusters, key=lambda c: (c[0].real, c[0].imag))


def _is_multiple_root(coeffs: np.ndarray, z: complex, k: int, tolerances: Tolerances) -> bool:
    """p, p', ..., p^(k-1) all vanish at z, the j-th derivative to tol^((k-j)/k) of the size of its terms"""
    for j in range(k):
        derivative = np.polyder(coeffs, j)
        size = max(float(np.polyval(np.abs(derivative), abs(z))), np.finfo(float).tiny)
        if abs(np.polyval(derivative, z)) > tolerances.ROOT_RESIDUAL ** ((k - j) / k) * size:
            return False
    return True


def _refine_multiple_root(coeffs: np.ndarray, z: complex, k: int) -> complex:
    """Newton on p^(k-1), for which a k-fold root of p is simple"""
    q = np.polyder(coeffs, k - 1)
    dq = np.polyder(q)
    for _ in range(8):
        slope = np.polyval(dq, z)
        if slope == 0:
            break
        candidate = z - np.polyval(q, z) / slope
        if abs(np.polyval(q, candidate)) >= abs(np.polyval(q, z)):
            break
        z = candidate
    return complex(z)


def _resolve_multiple_roots(coeffs: np.ndarray, roots: np.ndarray, tolerances: Tolerances) -> np.ndarray:
    """
    A k-fold root comes out of simultaneous iteration as k approximations spread by about
    tol^(1/k). The centre of each group within ROOT_MULTIPLE of each other is refined as a root
    of p^(k-1); groups whose refined centre passes the derivative test are replaced by k copies
    of it, other groups are left as distinct roots.
    """
    scale = max(1.0, float(np.abs(roots).max()))
    labels = _cluster_labels(roots, tolerances.ROOT_MULTIPLE * scale)
    resolved = roots.copy()
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        if members.size == 1:
            continue
        centre = _refine_multiple_root(coeffs, complex(np.mean(roots[members])), members.size)
        if _is_multiple_root(coeffs, centre, members.size, tolerances):
            resolved[members] = centre
    return resolved


@method_logger("debug")
def poly_roots(p: RealPolynomial, tol: Optional[float] = None, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """
    All n roots of p with multiplicity, by Aberth-Ehrlich simultaneous iteration from a seeded
    perturbed circle, followed by a Newton polish, multiple-root resolution, conjugate pairing and
    clustering.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    tol = tolerances.ROOT_RESIDUAL if tol is None else tol
    n = p.degree
    if n < 1:
        exception = DomainError("degree", n, "degree >= 1")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    coeffs = p.coeffs.astype(complex)
    dcoeffs = np.polyder(coeffs)
    threshold = tol * (1.0 + float(np.max(np.abs(p.coeffs))))

    if n == 1:
        return np.array([complex(-p.coeffs[1], 0.0)])

    z = _initial_circle(coeffs, tolerances.ROOT_SEED)
    residuals = np.abs(np.polyval(coeffs, z))
    for _ in range(tolerances.ROOT_MAX_ITER):
        active = residuals > threshold
        if not np.any(active):
            break
        pz = np.polyval(coeffs, z)
        dpz = np.polyval(dcoeffs, z)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        ratio = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = np.sum(1.0 / diff, axis=1)
            step = np.nan_to_num(ratio / (1.0 - ratio * repulsion))
        z = np.where(active, z - step, z)
        residuals = np.abs(np.polyval(coeffs, z))
    else:
        if np.any(residuals > threshold):
            exception = ConvergenceError("poly_roots", tolerances.ROOT_MAX_ITER, residuals)
            log.error(exception.message, extra={"failure_reason": exception.failure_reason, "degree": n})
            raise exception

    # Newton polish, kept only where it lowers the residual
    for _ in range(3):
        pz = np.polyval(coeffs, z)
        dpz = np.polyval(dcoeffs, z)
        candidate = np.where(np.abs(dpz) > 0, z - pz / np.where(dpz == 0, 1.0, dpz), z)
        better = np.abs(np.polyval(coeffs, candidate)) < np.abs(pz)
        z = np.where(better, candidate, z)

    z = _resolve_multiple_roots(coeffs, z, tolerances)
    z = _pair_conjugates(z, tolerances.ROOT_CLUSTER)
    roots = []
    for value, multiplicity in cluster_roots(z, tolerances.ROOT_CLUSTER):
        roots.extend([value] * multiplicity)
    return np.array(roots, dtype=complex)


def hurwitz_matrix(p: RealPolynomial) -> np.ndarray:
    """H[i, j] = a_{2j-i} for i, j = 1..n, with a_0 = 1 and a_j = 0 outside 0..n"""
    n = p.degree
    H = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            H[i - 1, j - 1] = p.coefficient(2 * j - i)
    return H


def hurwitz_determinants(p: RealPolynomial) -> np.ndarray:
    """[Delta_1, ..., Delta_n] in float64, each an explicit determinant of a leading k x k block"""
    if p.degree < 1:
        exception = DomainError("degree", p.degree, "degree >= 1")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    H = hurwitz_matrix(p)
    return np.array([np.linalg.det(H[:k, :k]) for k in range(1, p.degree + 1)])


def hurwitz_minors(coeffs: Sequence, digits: int) -> List[mpmath.mpf]:
    """
    [Delta_1, ..., Delta_n] of z^n + a_1 z^(n-1) + ... + a_n from [1, a_1, ..., a_n] (floats or mpf)
    at `digits` decimal digits. One elimination of the Hurwitz matrix without row exchanges gives
    every leading minor as a running product of pivots. From the first negligible pivot on, the
    remaining minors are explicit determinants of the leading blocks.
    """
    n = len(coeffs) - 1
    if n < 1:
        exception = DomainError("degree", n, "degree >= 1")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    with mpmath.workdps(digits):
        a = [mpmath.mpf(c) for c in coeffs]
        zero = mpmath.mpf(0)
        original = [[a[2 * j - i] if 0 <= 2 * j - i <= n else zero for j in range(1, n + 1)] for i in range(1, n + 1)]
        H = [row[:] for row in original]
        negligible = mpmath.mpf(10) ** (-(digits // 2))

        minors: List[mpmath.mpf] = []
        running = mpmath.mpf(1)
        for k in range(n):
            pivot = H[k][k]
            if abs(pivot) <= negligible * max(abs(x) for x in original[k]):
                minors.extend(mpmath.det(mpmath.matrix([row[: m + 1] for row in original[: m + 1]])) for m in range(k, n))
                break
            running *= pivot
            minors.append(running)
            # column k of the Hurwitz matrix is zero below row 2k + 1, and elimination keeps it so
            for i in range(k + 1, min(n, 2 * k + 2)):
                factor = H[i][k] / pivot
                if factor == 0:
                    continue
                target, source = H[i], H[k]
                for j in range(k + 1, n):
                    target[j] -= factor * source[j]
        return minors


def is_hurwitz(p: RealPolynomial, digits: Optional[int] = None, tolerances: Optional[Tolerances] = None) -> bool:
    """every Hurwitz determinant strictly positive, decided on extended-precision minors"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    digits = tolerances.EXTRA_DIGITS + p.degree if digits is None else digits
    return all(minor > 0 for minor in hurwitz_minors(p.coeffs, digits))


def _disagreement(coarse: Sequence[mpmath.mpf], fine: Sequence[mpmath.mpf]) -> float:
    worst = 0.0
    for a, b in zip(coarse, fine):
        if a == b:
            continue
        worst = max(worst, math.inf if b == 0 else float(abs(a - b) / abs(b)))
    return worst


def certified(compute: Callable[[int], Sequence[mpmath.mpf]], digits: int, what: str, tolerances: Optional[Tolerances] = None) -> Tuple[int, List[mpmath.mpf]]:
    """
    Runs compute at `digits` and at twice as many, doubling until the two agree to AGREEMENT
    relative. Returns the lower precision of the agreeing pair with its values.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    digits = min(digits, tolerances.MAX_DIGITS // 2)
    values = list(compute(digits))
    worst = math.inf
    while 2 * digits <= tolerances.MAX_DIGITS:
        finer = list(compute(2 * digits))
        worst = _disagreement(values, finer)
        if worst <= tolerances.AGREEMENT:
            return digits, values
        log.debug(f"{what}: {digits} digits disagree with {2 * digits} by {worst:.3e}")
        digits, values = 2 * digits, finer
    exception = NumericalInconsistencyError(f"{what} at {digits // 2} against {digits} digits", worst, tolerances.AGREEMENT)
    log.error(exception.message, extra={"failure_reason": exception.failure_reason})
    raise exception


def matrix_eigenvalues(M) -> np.ndarray:
    """dense QR eigenvalues sorted by real part then imaginary part"""
    A = as_real_matrix(M, "matrix_eigenvalues input")
    return np.sort_complex(np.linalg.eigvals(A))


def solve_complex(A, b, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """partial-pivoted LU solve of A x = b"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    A = as_complex_array(A, "solve_complex matrix", 2)
    b = as_complex_array(b, "solve_complex right-hand side", 1)
    if A.shape[0] != A.shape[1] or A.shape[0] != b.size:
        exception = DimensionError("solve_complex system", (A.shape, b.shape))
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(A, check_finite=False)
    pivot = float(np.min(np.abs(np.diag(lu))))
    threshold = tolerances.PIVOT * float(np.max(np.abs(A)))
    if pivot <= threshold:
        exception = SingularityError(pivot, threshold)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return lu_solve((lu, piv), b, check_finite=False)


def numerical_rank_deficiency(M: np.ndarray, tolerances: Optional[Tolerances] = None) -> int:
    tolerances = tolerances or DEFAULT_TOLERANCES
    singular_values = np.linalg.svd(M, compute_uv=False)
    cutoff = tolerances.RANK_TOL * max(float(singular_values[0]), 1.0)
    return int(np.sum(singular_values <= cutoff))


@method_logger("debug")
def stationary_distribution(P, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """d with d^T P = d^T and d^T e = 1, by a direct solve with one balance equation replaced by normalisation"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    P = as_real_matrix(P, "P")
    check_row_stochastic(P, "P", tolerances.STOCHASTIC_ROWS)
    n = P.shape[0]

    system = P.T - np.eye(n)
    deficiency = numerical_rank_deficiency(system, tolerances)
    if deficiency > 1:
        exception = StructureError(f"I - P has a {deficiency}-dimensional kernel: the chain is reducible")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    system[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    d = np.linalg.solve(system, rhs)
    if np.any(d <= 0):
        exception = StructureError(f"stationary solve produced a non-positive weight {d.min():.3e}: the chain is not irreducible")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    d = d / d.sum()

    residual = float(np.max(np.abs(d @ P - d)))
    if residual > tolerances.STATIONARY_RESIDUAL:
        exception = NumericalInconsistencyError("stationary distribution fixed point", residual, tolerances.STATIONARY_RESIDUAL)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return d


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """rotate so the largest-modulus coordinate (first on ties) is real and positive"""
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


@method_logger("debug")
def eigvec_for_eigenvalue(M, lam: complex, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """unit eigenvector for lam by shifted inverse iteration on M - lam I"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    A = as_real_matrix(M, "eigvec_for_eigenvalue matrix")
    n = A.shape[0]
    lam = complex(lam)
    scale = max(1.0, float(np.linalg.norm(A, ord="fro")), abs(lam))
    shift = lam + 1e-10 * scale * (1.0 + 0.5j)
    shifted = A.astype(complex) - shift * np.eye(n)
    target = tolerances.EIGVEC_RESIDUAL * max(1.0, float(np.linalg.norm(A, ord="fro")))

    rng = np.random.default_rng(tolerances.ROOT_SEED)
    v = np.ones(n, dtype=complex) + 0.1 * rng.standard_normal(n)
    v /= np.linalg.norm(v)

    residuals = []
    for _ in range(tolerances.EIGVEC_MAX_ITER):
        w = solve_complex(shifted, v, tolerances)
        v = canonical_phase(w / np.linalg.norm(w))
        residual = float(np.linalg.norm(A @ v - lam * v))
        residuals.append(residual)
        if residual <= target:
            return v

    exception = ConvergenceError("eigvec_for_eigenvalue", tolerances.EIGVEC_MAX_ITER, residuals[-3:])
    log.error(exception.message, extra={"failure_reason": exception.failure_reason, "eigenvalue": lam})
    raise exception
