"""
Filename: stability.py
Project: TD Clock Stability (TDCS)
Description: L, A_eta and positive stability: spectrum checks, the eta* threshold, the exact
             stability region, the small-eta derivative and eigenvalue trajectories
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import math
from math import comb
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import mpmath
import numpy as np
from numpy.polynomial import Chebyshev
from scipy.optimize import brentq

from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import LemmaViolationError
from td_clock_stability._exceptions import NearSingularityError
from td_clock_stability._exceptions import NumericalInconsistencyError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.core.config import Tolerances
from td_clock_stability.models.base_model import as_real_matrix
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.schemas.stability_schemas import EigenTrajectory
from td_clock_stability.schemas.stability_schemas import EtaStarResult
from td_clock_stability.schemas.stability_schemas import Interval
from td_clock_stability.schemas.stability_schemas import SpectrumReport
from td_clock_stability.schemas.stability_schemas import StabilityRegion
from td_clock_stability.schemas.stability_schemas import Witness
from td_clock_stability.services.polyalg import certified
from td_clock_stability.services.polyalg import char_poly
from td_clock_stability.services.polyalg import cluster_roots
from td_clock_stability.services.polyalg import extended_char_poly
from td_clock_stability.services.polyalg import hurwitz_minors
from td_clock_stability.services.polyalg import matrix_eigenvalues
from td_clock_stability.services.polyalg import power_of_two
from td_clock_stability.services.polyalg import solve_complex
from td_clock_stability.services.polyalg import stationary_distribution
from td_clock_stability.services.polyalg import working_digits
from td_clock_stability.utils.method_logger import method_logger

log = logging.getLogger(__name__)

# omega scan batch size for stacked solves
_SCAN_BATCH = 512
# the region extension past eta_cap never looks further than this many multiples of eta_cap
_MAX_EXTENSION = 1e6


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not eta >= 0 or not math.isfinite(eta):
        exception = DomainError("eta", eta, "0 <= eta < inf")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return eta


# matrix builders


def build_L(inst: StabilityInstance) -> np.ndarray:
    """L = D_mu (I - P_pi)"""
    return inst.d_mu[:, None] * (np.eye(inst.n) - inst.P_pi)


def build_A(inst: StabilityInstance, eta: float) -> np.ndarray:
    """A_eta = L + eta d_mu e^T; eta = 0 gives L"""
    eta = _check_eta(eta)
    return build_L(inst) + eta * np.outer(inst.d_mu, np.ones(inst.n))


def build_local_clock_matrix(inst: StabilityInstance, eta: float) -> np.ndarray:
    """I - P_pi + eta e e^T, the local-clock counterpart of A_eta"""
    eta = _check_eta(eta)
    return np.eye(inst.n) - inst.P_pi + eta * np.ones((inst.n, inst.n))


def build_discounted_matrix(inst: StabilityInstance, gamma: float, clock: str = "global") -> np.ndarray:
    """D_mu (I - gamma P_pi) for the global clock, I - gamma P_pi for the local clock"""
    if not 0.0 <= gamma < 1.0:
        exception = DomainError("gamma", gamma, "0 <= gamma < 1")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    M = np.eye(inst.n) - gamma * inst.P_pi
    return inst.d_mu[:, None] * M if clock == "global" else M


def default_eta_cap(inst: StabilityInstance) -> float:
    """four times the eta at which the rank-one term matches the trace of L"""
    trace = float(np.trace(build_L(inst)))
    return 4.0 * trace / float(inst.d_mu.sum()) if trace > 0 else 1.0


def default_omega_max(inst: StabilityInstance) -> float:
    return 4.0 * float(inst.d_mu.max()) * inst.n


# spectrum of L


@method_logger("debug")
def lemma_spectrum_check(inst: StabilityInstance, tol: float = DEFAULT_TOLERANCES.LEMMA) -> SpectrumReport:
    """
    Every eigenvalue of L has Re >= 0, lies in the disk 2 max(d_mu) Re(lambda) >= |lambda|^2, and
    the only eigenvalue near zero is simple with eigenvector along e.
    """
    L = build_L(inst)
    eigenvalues = matrix_eigenvalues(L)
    max_d = float(inst.d_mu.max())

    def violation(eigenvalue, check: str) -> LemmaViolationError:
        exception = LemmaViolationError(eigenvalue, check)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason, "instance": inst.name})
        return exception

    for eigenvalue in eigenvalues:
        if eigenvalue.real < -tol:
            raise violation(eigenvalue, "Re(lambda) >= 0")
        if 2.0 * max_d * eigenvalue.real < abs(eigenvalue) ** 2 - tol:
            raise violation(eigenvalue, "2 max(d_mu) Re(lambda) >= |lambda|^2")

    near_zero = eigenvalues[np.abs(eigenvalues) <= tol]
    if near_zero.size != 1:
        raise violation(near_zero[0] if near_zero.size else eigenvalues[np.argmin(np.abs(eigenvalues))], f"exactly one kernel eigenvalue (found {near_zero.size})")

    # right singular vector of the smallest singular value spans the kernel
    _, _, vh = np.linalg.svd(L)
    kernel = vh[-1]
    alignment = float(abs(kernel.sum()) / (np.linalg.norm(kernel) * math.sqrt(inst.n)))
    if alignment < 1.0 - tol:
        raise violation(near_zero[0], "kernel eigenvector parallel to e")

    return SpectrumReport(
        eigenvalues=eigenvalues,
        min_real_part=float(eigenvalues.real.min()),
        max_d_mu=max_d,
        worst_disk_margin=float(np.min(2.0 * max_d * eigenvalues.real - np.abs(eigenvalues) ** 2)),
        kernel_modulus=float(abs(near_zero[0])),
        kernel_vector_alignment=alignment,
        tol=tol,
    )


# the eta* threshold


def g_eval(inst: StabilityInstance, z: complex, tolerances: Optional[Tolerances] = None) -> complex:
    """g(z) = e^T (zI - L)^{-1} d_mu"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    z = complex(z)
    L = build_L(inst)
    distance = float(np.min(np.abs(matrix_eigenvalues(L) - z)))
    if distance <= tolerances.SPECTRUM:
        exception = NearSingularityError(z, distance, tolerances.SPECTRUM)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    x = solve_complex(z * np.eye(inst.n) - L, inst.d_mu.astype(complex), tolerances)
    return complex(x.sum())


def _g_on_axis(L: np.ndarray, d_mu: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """g(i omega) for a whole grid through stacked solves"""
    n = L.shape[0]
    values = np.empty(omegas.size, dtype=complex)
    identity = np.eye(n)
    for start in range(0, omegas.size, _SCAN_BATCH):
        chunk = omegas[start : start + _SCAN_BATCH]
        systems = 1j * chunk[:, None, None] * identity[None, :, :] - L[None, :, :]
        rhs = np.broadcast_to(d_mu.astype(complex), (chunk.size, n))[..., None]
        values[start : start + chunk.size] = np.linalg.solve(systems, rhs)[..., 0].sum(axis=1)
    return values


@method_logger("debug")
def eta_star(
    inst: StabilityInstance,
    omega_max: Optional[float] = None,
    grid: int = 4000,
    tolerances: Optional[Tolerances] = None,
) -> EtaStarResult:
    """
    inf{eta > 0 : 1 - eta g(i omega) = 0 for some omega > 0}, searched on a log-uniform omega grid
    over [1e-6 omega_max, omega_max]; inf of the empty set is +inf.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    omega_max = default_omega_max(inst) if omega_max is None else float(omega_max)
    if not omega_max > 0 or grid < 2:
        exception = DomainError("omega_max/grid", (omega_max, grid), "omega_max > 0 and grid >= 2")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    omega_min = 1e-6 * omega_max
    L = build_L(inst)

    omegas = np.geomspace(omega_min, omega_max, grid)
    imag_g = _g_on_axis(L, inst.d_mu, omegas).imag

    def imag_part(omega: float) -> float:
        return g_eval(inst, 1j * omega, tolerances).imag

    crossings: List[float] = [float(w) for w, value in zip(omegas, imag_g) if value == 0.0]
    for k in np.flatnonzero(np.sign(imag_g[:-1]) * np.sign(imag_g[1:]) < 0):
        lo, hi = float(omegas[k]), float(omegas[k + 1])
        crossings.append(brentq(imag_part, lo, hi, xtol=tolerances.ETA_BISECTION * lo, rtol=max(tolerances.ETA_BISECTION, 4 * np.finfo(float).eps)))

    witnesses: List[Witness] = []
    for omega in sorted(crossings):
        g = g_eval(inst, 1j * omega, tolerances)
        if g.real <= 0:
            continue
        eta = 1.0 / g.real
        residual = abs(1.0 - eta * g)
        if residual > tolerances.WITNESS_RESIDUAL:
            log.warning(f"dropping crossing at omega={omega:.6e}: residual {residual:.3e}", extra={"eta": eta})
            continue
        witnesses.append(Witness(omega=omega, eta=eta, residual=residual))

    witnesses.sort(key=lambda w: w.eta)
    value = witnesses[0].eta if witnesses else math.inf
    log.info(f"eta* = {value:.17g} from {len(witnesses)} witnesses", extra={"omega_min": omega_min, "omega_max": omega_max, "grid": grid})
    return EtaStarResult(eta_star=value, witnesses=witnesses, omega_min=omega_min, omega_max=omega_max, grid=grid)


# positive stability


def _hurwitz_minors_of(A: np.ndarray, tolerances: Tolerances) -> List[mpmath.mpf]:
    """Hurwitz minors of char_poly(-A), both stages at a precision confirmed by recomputation"""

    def minors(digits: int) -> List[mpmath.mpf]:
        return hurwitz_minors(extended_char_poly(-A, digits), digits)

    _, values = certified(minors, working_digits(A, tolerances), "Hurwitz minors", tolerances)
    return values


def is_positive_stable(A, tolerances: Optional[Tolerances] = None) -> bool:
    """
    All eigenvalues in the open right half plane, decided by the Hurwitz test on char_poly(-A).
    When the eigenvalue real parts stay clear of the imaginary axis they must give the same verdict.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    A = as_real_matrix(A, "is_positive_stable input")
    stable = all(minor > 0 for minor in _hurwitz_minors_of(A, tolerances))

    eigenvalues = matrix_eigenvalues(A)
    margin = float(eigenvalues.real.min())
    size = max(float(np.abs(eigenvalues).max()), np.finfo(float).tiny)
    if abs(margin) > tolerances.HURWITZ_CROSSCHECK * size and stable != (margin > 0):
        exception = NumericalInconsistencyError("Hurwitz verdict against eigenvalue real parts", abs(margin) / size, tolerances.HURWITZ_CROSSCHECK)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason, "hurwitz_stable": stable})
        raise exception
    return stable


@method_logger("debug")
def nonsingularity_check(inst: StabilityInstance, eta: float, tolerances: Optional[Tolerances] = None) -> bool:
    """|det A_eta| > tol * scale^n, plus the identity l^T L = 0 with l = D_mu^{-1} d_pi"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    A = build_A(inst, eta)
    L = build_L(inst)

    ell = stationary_distribution(inst.P_pi, tolerances) / inst.d_mu
    identity_residual = float(np.max(np.abs(ell @ L)))
    identity_tolerance = tolerances.LEMMA * max(1.0, float(np.abs(ell).max() * np.abs(L).max()))
    if identity_residual > identity_tolerance:
        exception = NumericalInconsistencyError("l^T L = 0", identity_residual, identity_tolerance)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    scale = float(np.abs(A).max())
    determinant = float(np.linalg.det(A / scale))
    nonsingular = abs(determinant) > tolerances.NONSINGULAR
    if not nonsingular and eta > 0:
        log.warning(f"A_eta looks singular at eta={eta:.6e}: scaled determinant {determinant:.3e}", extra={"failure_reason": "POSSIBLE_DEGENERACY"})
    return nonsingular


def coefficient_lines(inst: StabilityInstance, tolerances: Optional[Tolerances] = None) -> List[Tuple[float, float]]:
    """
    (intercept, slope) of a_j(eta) for j = 1..n, where char_poly(-A_eta) = z^n + a_1(eta) z^(n-1) + ...
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    intercepts = char_poly(-build_A(inst, 0.0)).coeffs[1:]
    slopes = char_poly(-build_A(inst, 1.0)).coeffs[1:] - intercepts

    midpoint = char_poly(-build_A(inst, 0.5)).coeffs[1:]
    rho = max(np.linalg.norm(build_A(inst, 1.0), 2), np.linalg.norm(build_L(inst), 2))
    floor = np.array([np.finfo(float).eps * comb(inst.n, j) * rho**j for j in range(1, inst.n + 1)])
    relative = np.abs(midpoint - (intercepts + 0.5 * slopes)) / (np.abs(intercepts) + 0.5 * np.abs(slopes) + floor)
    worst = float(relative.max())
    if worst > tolerances.LINEARITY:
        exception = NumericalInconsistencyError("coefficient lines at eta = 1/2", worst, tolerances.LINEARITY)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return [(float(a), float(b)) for a, b in zip(intercepts, slopes)]


# stability region


def hurwitz_signs_at(inst: StabilityInstance, eta: float, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """signs of the Hurwitz determinants of char_poly(-A_eta)"""
    minors = _hurwitz_minors_of(build_A(inst, eta), tolerances or DEFAULT_TOLERANCES)
    return np.array([float(mpmath.sign(minor)) for minor in minors])


class HurwitzFamily:
    """
    Delta_1(eta), ..., Delta_n(eta) of q_eta(z) = det(zI + A_eta / sigma) as polynomials in eta.

    The coefficients of q_eta are affine in eta, so every Delta_k has degree <= k. Each one is
    interpolated from its values at n + 1 Chebyshev nodes of [0, eta_cap] and kept as a Chebyshev
    series, all at `digits` decimal digits. Scans, root polishing and cell classification read
    the same series, so their signs cannot disagree.
    """

    def __init__(self, intercepts: Sequence, slopes: Sequence, eta_cap: float, digits: int):
        self.n = len(intercepts) - 1
        self.eta_cap = float(eta_cap)
        self.digits = digits
        count = self.n + 1
        with mpmath.workdps(digits):
            self.intercepts = [mpmath.mpf(c) for c in intercepts]
            self.slopes = [mpmath.mpf(c) for c in slopes]
            self._negligible = mpmath.mpf(10) ** (-(digits // 2))
            angles = [mpmath.pi * (i + mpmath.mpf(0.5)) / count for i in range(count)]
            nodes = [self.eta_cap * (1 + mpmath.cos(angle)) / 2 for angle in angles]
            self.node_coefficients = [self.coefficients_at(eta) for eta in nodes]
            self.node_values = [hurwitz_minors(coefficients, digits) for coefficients in self.node_coefficients]
            cosines = [[mpmath.cos(j * angle) for angle in angles] for j in range(count + 1)]

            self.series: List[List[mpmath.mpf]] = []
            self.norms: List[mpmath.mpf] = []
            for k in range(self.n):
                series = []
                for j in range(k + 2):
                    total = mpmath.fsum(values[k] * cosine for values, cosine in zip(self.node_values, cosines[j]))
                    series.append(total * (1 if j == 0 else 2) / count)
                norm = max(abs(c) for c in series)
                # trailing coefficients at the rounding level would dominate far past eta_cap
                while len(series) > 1 and abs(series[-1]) <= self._negligible * norm:
                    series.pop()
                self.series.append(series)
                self.norms.append(norm)

    def coefficients_at(self, eta) -> List[mpmath.mpf]:
        with mpmath.workdps(self.digits):
            return [c + eta * s for c, s in zip(self.intercepts, self.slopes)]

    def value(self, k: int, eta: float) -> mpmath.mpf:
        """Delta_{k+1}(eta) by Clenshaw summation"""
        with mpmath.workdps(self.digits):
            x = 2 * mpmath.mpf(eta) / self.eta_cap - 1
            b1 = b2 = mpmath.mpf(0)
            for c in reversed(self.series[k][1:]):
                b1, b2 = 2 * x * b1 - b2 + c, b1
            return self.series[k][0] + x * b1 - b2

    def normalized(self, k: int, eta: float) -> float:
        """Delta_{k+1}(eta) over the largest Chebyshev coefficient of Delta_{k+1}"""
        if self.norms[k] == 0:
            return 0.0
        with mpmath.workdps(self.digits):
            return float(self.value(k, eta) / self.norms[k])

    def signs(self, eta: float) -> np.ndarray:
        return np.sign([self.normalized(k, eta) for k in range(self.n)])

    def is_stable(self, eta: float) -> bool:
        return all(self.value(k, eta) > 0 for k in range(self.n))

    def row_size(self, node: int, k: int) -> mpmath.mpf:
        """largest entry of Hurwitz row k + 1 at a node"""
        a = self.node_coefficients[node]
        return max(abs(a[2 * j - k - 1]) for j in range(1, self.n + 1) if 0 <= 2 * j - k - 1 <= self.n)

    def vanishing(self) -> Optional[int]:
        """
        First k whose elimination pivot Delta_{k+1} / Delta_k is negligible against its Hurwitz row
        at every node; a polynomial of degree <= n that small at n + 1 nodes is the zero polynomial.
        """
        with mpmath.workdps(self.digits):
            for k in range(self.n):
                if all(
                    abs(values[k]) <= self._negligible * (abs(values[k - 1]) if k > 0 else 1) * self.row_size(node, k)
                    for node, values in enumerate(self.node_values)
                ):
                    return k
        return None

    def chebyshev(self, k: int) -> Chebyshev:
        """float copy of the normalised series, for locating roots"""
        with mpmath.workdps(self.digits):
            coef = [float(c / self.norms[k]) for c in self.series[k]] if self.norms[k] != 0 else [0.0]
        return Chebyshev(coef, domain=[0.0, self.eta_cap])

    def eventual_sign(self, k: int) -> float:
        """sign of Delta_{k+1}(eta) as eta -> inf: T_j has a positive leading coefficient"""
        if self.norms[k] == 0:
            return 0.0
        return float(mpmath.sign(self.series[k][-1]))


def _region_digits(inst: StabilityInstance, eta_cap: float, tolerances: Tolerances) -> int:
    return max(working_digits(build_L(inst), tolerances), working_digits(build_A(inst, eta_cap), tolerances))


def hurwitz_family(inst: StabilityInstance, eta_cap: Optional[float] = None, tolerances: Optional[Tolerances] = None) -> HurwitzFamily:
    """
    The determinant family of inst on [0, eta_cap]. The coefficient lines come from two
    characteristic polynomials, of -L and of -(L + eta_cap d_mu e^T), with the rank-one term
    formed at extended precision so the lines are exact. The working precision is the one at
    which the minors at a third, two thirds and all of eta_cap survive recomputation.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    eta_cap = default_eta_cap(inst) if eta_cap is None else float(eta_cap)
    if not eta_cap > 0 or not math.isfinite(eta_cap):
        exception = DomainError("eta_cap", eta_cap, "0 < eta_cap < inf")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    L = build_L(inst)
    sigma = power_of_two(float(np.abs(matrix_eigenvalues(build_A(inst, eta_cap))).max()))

    def lines(digits: int) -> Tuple[List[mpmath.mpf], List[mpmath.mpf]]:
        with mpmath.workdps(digits):
            cap = mpmath.mpf(eta_cap)
            shifted = [[-(mpmath.mpf(L[i, j]) + cap * mpmath.mpf(inst.d_mu[i])) for j in range(inst.n)] for i in range(inst.n)]
            at_zero = extended_char_poly(-L, digits)
            at_cap = extended_char_poly(shifted, digits)
            # z -> sigma z divides a_j by sigma^j, exactly for a power of two
            scale = [mpmath.mpf(sigma) ** j for j in range(inst.n + 1)]
            intercepts = [a / s for a, s in zip(at_zero, scale)]
            slopes = [(b - a) / cap / s for a, b, s in zip(at_zero, at_cap, scale)]
        return intercepts, slopes

    def check_minors(digits: int) -> List[mpmath.mpf]:
        intercepts, slopes = lines(digits)
        values = []
        with mpmath.workdps(digits):
            for fraction in (mpmath.mpf(1) / 3, mpmath.mpf(2) / 3, mpmath.mpf(1)):
                eta = fraction * mpmath.mpf(eta_cap)
                values.extend(hurwitz_minors([c + eta * s for c, s in zip(intercepts, slopes)], digits))
        return values

    digits, _ = certified(check_minors, _region_digits(inst, eta_cap, tolerances), f"Hurwitz family of {inst.name}", tolerances)
    intercepts, slopes = lines(digits)
    log.debug(f"Hurwitz family of {inst.name} at {digits} digits", extra={"eta_cap": eta_cap, "sigma": sigma})
    return HurwitzFamily(intercepts, slopes, eta_cap, digits)


def _polish(family: HurwitzFamily, k: int, lo: float, hi: float) -> float:
    """root of Delta_{k+1} in [lo, hi]; the bracket must change sign"""

    def delta(eta: float) -> float:
        return family.normalized(k, eta)

    f_lo, f_hi = delta(lo), delta(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        exception = NumericalInconsistencyError(f"sign change of Delta_{k + 1} on [{lo:.6e}, {hi:.6e}]", min(abs(f_lo), abs(f_hi)), 0.0)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return brentq(delta, lo, hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps)


def _bracket_and_polish(family: HurwitzFamily, k: int, root: float, lower: float, upper: float) -> Optional[float]:
    """widening bracket around an interpolated root; None when Delta_{k+1} does not change sign there"""
    for width in (1e-9, 1e-7, 1e-5, 1e-3):
        lo = max(root * (1.0 - width), lower)
        hi = min(root * (1.0 + width), upper)
        if not lo < hi:
            continue
        f_lo, f_hi = family.normalized(k, lo), family.normalized(k, hi)
        if f_lo == 0.0:
            return lo
        if f_hi == 0.0:
            return hi
        if np.sign(f_lo) != np.sign(f_hi):
            return _polish(family, k, lo, hi)
    return None


def _scan_sign_changes(family: HurwitzFamily, etas: np.ndarray) -> List[float]:
    roots = []
    signs = np.array([family.signs(eta) for eta in etas])
    for i in range(etas.size - 1):
        for k in np.flatnonzero(signs[i] * signs[i + 1] < 0):
            roots.append(_polish(family, int(k), float(etas[i]), float(etas[i + 1])))
    return roots


def _merge_roots(roots: Sequence[float], spacing: float) -> List[float]:
    merged: List[float] = []
    for root in sorted(roots):
        if merged and root - merged[-1] <= spacing:
            continue
        merged.append(root)
    return merged


def _root_bound(family: HurwitzFamily) -> float:
    """largest real root of any Delta_k past eta_cap, in units of eta_cap (at least 1)"""
    bound = 1.0
    for k in range(family.n):
        fit = family.chebyshev(k)
        for root in fit.roots() if fit.degree() > 0 else []:
            if root.real > family.eta_cap and abs(root.imag) <= 1e-3 * abs(root):
                bound = max(bound, float(root.real) / family.eta_cap)
    return bound


def empty_region(reason: str, eta_cap: float) -> StabilityRegion:
    return StabilityRegion(intervals=[], boundary_roots=[], critical_roots=[], empty_reason=reason, eta_cap=eta_cap)


@method_logger("debug")
def region_from_family(family: HurwitzFamily, tolerances: Optional[Tolerances] = None, name: Optional[str] = None) -> StabilityRegion:
    """
    Set of eta > 0 where every Delta_k(eta) of the family is positive, as sorted open intervals.

    Real roots of each interpolated Delta_k in (0, eta_cap] are polished on its extended-precision
    series, and a sign scan over the same range backs them up. Past eta_cap, real roots of the
    series bound a second scan. The cells between roots are classified at their midpoints.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    eta_cap = family.eta_cap

    k = family.vanishing()
    if k is not None:
        reason = f"Delta_{k + 1}(eta) vanishes identically: the stability region is empty"
        log.info(reason, extra={"instance": name})
        return empty_region(reason, eta_cap)

    candidates: List[float] = []
    for k in range(family.n):
        fit = family.chebyshev(k)
        for root in fit.roots() if fit.degree() > 0 else []:
            if abs(root.imag) > 1e-8 * eta_cap or not 0.0 < root.real <= eta_cap:
                continue
            # a fitted root without a sign change of the series is a touching root or float noise
            polished = _bracket_and_polish(family, k, float(root.real), 0.0, eta_cap)
            if polished is not None:
                candidates.append(polished)

    half = tolerances.REGION_SCAN_POINTS // 2
    scan = np.union1d(np.geomspace(1e-6 * eta_cap, eta_cap, half), np.linspace(eta_cap / half, eta_cap, half))
    candidates.extend(_scan_sign_changes(family, scan))

    bound = _root_bound(family)
    if bound > 1.0:
        far = min(bound * 1.01, _MAX_EXTENSION)
        if bound > _MAX_EXTENSION:
            log.warning(f"root bound {bound:.3e} x eta_cap exceeds the extension limit; scanning up to {far:.0e} x eta_cap")
        extension = np.geomspace(eta_cap, far * eta_cap, max(16, int(24 * math.log10(far)) + 1))
        candidates.extend(_scan_sign_changes(family, extension))

    # roots at the rounding level of eta = 0 come from the kernel of L
    floor = tolerances.ROOT_MERGE * eta_cap
    roots = [r for r in _merge_roots(candidates, floor) if r > floor]
    edges = [0.0] + roots
    tail_stable = all(family.eventual_sign(k) > 0 for k in range(family.n))

    cells: List[Tuple[float, float, bool]] = []
    for lo, hi in zip(edges, edges[1:]):
        cells.append((lo, hi, family.is_stable(0.5 * (lo + hi))))
    last = edges[-1]
    mid = 0.5 * (last + eta_cap) if last < eta_cap else 2.0 * last
    last_stable = family.is_stable(mid)
    if last_stable != tail_stable:
        log.warning(f"cell past eta={last:.6e} classified {last_stable} at its midpoint but {tail_stable} asymptotically; using midpoint")
    cells.append((last, math.inf, last_stable))

    intervals: List[Interval] = []
    for lo, hi, stable in cells:
        if not stable:
            continue
        if intervals and intervals[-1].hi == lo and family.is_stable(lo):
            intervals[-1] = Interval(lo=intervals[-1].lo, hi=hi)
            continue
        intervals.append(Interval(lo=lo, hi=hi))

    boundary = sorted({edge for interval in intervals for edge in (interval.lo, interval.hi) if 0.0 < edge < math.inf})
    region = StabilityRegion(
        intervals=intervals,
        boundary_roots=boundary,
        critical_roots=roots,
        empty_reason=None if intervals else "no stable cell",
        eta_cap=eta_cap,
    )
    log.info(
        f"stability region with {len(intervals)} intervals, boundary roots {[f'{r:.17g}' for r in boundary]}",
        extra={"instance": name, "eta_cap": eta_cap, "critical_roots": len(roots)},
    )
    return region


@method_logger("debug")
def stability_region(inst: StabilityInstance, eta_cap: Optional[float] = None, tolerances: Optional[Tolerances] = None) -> StabilityRegion:
    """Set of eta > 0 where A_eta is positive stable, as sorted open intervals"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    family = hurwitz_family(inst, eta_cap, tolerances)
    return region_from_family(family, tolerances, name=inst.name)


def local_clock_check(inst: StabilityInstance, etas: Sequence[float]) -> bool:
    """positive stability of I - P_pi + eta e e^T at every sampled eta"""
    return all(is_positive_stable(build_local_clock_matrix(inst, eta)) for eta in etas)


# small-eta derivative


def zero_eig_derivative(inst: StabilityInstance, tolerances: Optional[Tolerances] = None) -> float:
    """lambda'(0) = n / (d_pi^T D_mu^{-1} e) for the eigenvalue of A_eta leaving zero"""
    d_pi = stationary_distribution(inst.P_pi, tolerances)
    return inst.n / float(np.sum(d_pi / inst.d_mu))


def finite_difference_derivative(inst: StabilityInstance, epsilon: float = 1e-6, extrapolate: bool = True) -> float:
    """
    Re of the eigenvalue of A_epsilon closest to zero, over epsilon. The plain quotient is biased by
    O(epsilon / spectral gap of L); extrapolate combines epsilon and epsilon / 2 to cancel that term.
    """

    def quotient(h: float) -> float:
        eigenvalues = matrix_eigenvalues(build_A(inst, h))
        return float(eigenvalues[np.argmin(np.abs(eigenvalues))].real / h)

    if not extrapolate:
        return quotient(epsilon)
    return 2.0 * quotient(0.5 * epsilon) - quotient(epsilon)


# eigenvalue trajectories


def _greedy_pairing(previous: np.ndarray, current: np.ndarray) -> Tuple[np.ndarray, bool]:
    """reorders current so current[i] continues previous[i]; flags ties between distinguishable assignments"""
    cost = np.abs(previous[:, None] - current[None, :])
    order = np.empty(previous.size, dtype=int)
    ambiguous = False
    free_rows = np.ones(previous.size, dtype=bool)
    free_cols = np.ones(current.size, dtype=bool)
    for _ in range(previous.size):
        masked = np.where(free_rows[:, None] & free_cols[None, :], cost, np.inf)
        ties = np.argwhere(masked <= masked.min() + 1e-12)
        # ties inside a cluster of equal eigenvalues swap identical values
        if np.ptp(np.abs(previous[ties[:, 0]] - previous[ties[0, 0]])) > 1e-12 or np.ptp(np.abs(current[ties[:, 1]] - current[ties[0, 1]])) > 1e-12:
            ambiguous = True
        i, j = (int(v) for v in ties[0])
        order[i] = j
        free_rows[i] = False
        free_cols[j] = False
    return current[order], ambiguous


@method_logger("debug")
def eigen_trajectory(inst: StabilityInstance, eta_grid: Sequence[float], tolerances: Optional[Tolerances] = None) -> EigenTrajectory:
    """
    Eigenvalues of A_eta over an increasing eta grid, continued branch by branch. Dense QR
    eigenvalues are used because a repeated eigenvalue cannot be resolved from polynomial roots.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    etas = np.asarray(eta_grid, dtype=float)
    if etas.ndim != 1 or etas.size == 0 or np.any(etas <= 0) or np.any(np.diff(etas) <= 0):
        exception = DomainError("eta_grid", f"{etas.size} points", "nonempty, positive, strictly increasing")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    rows, trivial, ambiguous = [], [], []
    for k, eta in enumerate(etas):
        eigenvalues = matrix_eigenvalues(build_A(inst, eta))
        flagged = False
        if rows:
            eigenvalues, flagged = _greedy_pairing(rows[-1], eigenvalues)
        radius = tolerances.ROOT_CLUSTER * max(float(np.abs(eigenvalues).max()), np.finfo(float).tiny)
        repeated = [value for value, multiplicity in cluster_roots(eigenvalues, radius) if multiplicity > 1]
        trivial.append(np.array([any(abs(z - value) <= radius for value in repeated) for z in eigenvalues]))
        rows.append(eigenvalues)
        ambiguous.append(flagged)

    if any(ambiguous):
        log.warning(f"{sum(ambiguous)} grid steps had tied eigenvalue pairings; ties broken by index order")
    return EigenTrajectory(etas=etas, eigenvalues=np.array(rows), trivial=np.array(trivial), ambiguous=np.array(ambiguous))
