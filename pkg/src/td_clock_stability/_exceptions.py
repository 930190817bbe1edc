"""
Filename: _exceptions.py
Project: TD Clock Stability (TDCS)
Description: Maintain Custom Exceptions
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class BaseStabilityException(Exception):
    exit_code: int = EXIT_VALIDATION
    failure_reason: str = "STABILITY_ERROR"

    def __str__(self):
        return self.message


class DimensionError(BaseStabilityException):
    """exception when a matrix or vector has the wrong shape"""

    failure_reason = "DIMENSION_ERROR"

    def __init__(self, what: str, shape):
        self.shape = tuple(shape)
        self.message = f"{what} has invalid shape {self.shape}"


class DomainError(BaseStabilityException):
    """exception when a scalar parameter is outside its admissible range"""

    failure_reason = "DOMAIN_ERROR"

    def __init__(self, name: str, value, requirement: str):
        self.name = name
        self.value = value
        self.message = f"{name}={value} violates {requirement}"


class StructureError(BaseStabilityException):
    """exception when a stochastic matrix or distribution lacks the required structure"""

    failure_reason = "STRUCTURE_ERROR"

    def __init__(self, message: str):
        self.message = message


class ConstructionError(BaseStabilityException):
    """exception when a constructed object fails its own invariants"""

    failure_reason = "CONSTRUCTION_ERROR"

    def __init__(self, what: str, detail: str):
        self.message = f"construction of {what} failed: {detail}"


class KappaBoundError(DomainError):
    """exception when the behavior mixing weight breaks the nonnegativity bound of the auxiliary action"""

    failure_reason = "KAPPA_BOUND_ERROR"

    def __init__(self, kappa: float, kappa_max: float, entry):
        self.name = "kappa"
        self.value = kappa
        self.kappa = kappa
        self.kappa_max = kappa_max
        self.entry = tuple(int(i) for i in entry)
        self.message = f"kappa={kappa} exceeds kappa_max={kappa_max}, bound attained at P_pi entry {self.entry}"


class InstanceFormatError(BaseStabilityException):
    """exception when an instance file cannot be parsed"""

    failure_reason = "INSTANCE_FORMAT_ERROR"

    def __init__(self, path, line_no: int, detail: str):
        self.path = str(path)
        self.line_no = int(line_no)
        self.message = f"{path}:{line_no}: {detail}"


class ResultFormatError(BaseStabilityException):
    """exception when a result file lacks its metadata header or columns"""

    failure_reason = "RESULT_FORMAT_ERROR"

    def __init__(self, path, detail: str):
        self.message = f"{path}: {detail}"


class NotFound(BaseStabilityException):
    """exception when a requested file does not exist"""

    failure_reason = "NOT_FOUND"

    def __init__(self, dao, path):
        self.path = str(path)
        self.message = f"{type(dao).__name__}: {self.path} not found"


class ConvergenceError(BaseStabilityException):
    """exception when an iterative routine exhausts its budget"""

    exit_code = EXIT_NUMERICAL
    failure_reason = "CONVERGENCE_ERROR"

    def __init__(self, routine: str, iterations: int, residuals=None):
        self.residuals = [] if residuals is None else [float(r) for r in residuals]
        worst = max(self.residuals) if self.residuals else float("nan")
        self.message = f"{routine} did not converge after {iterations} iterations (worst residual {worst:.3e})"


class SingularityError(BaseStabilityException):
    """exception when elimination meets a pivot below tolerance"""

    exit_code = EXIT_NUMERICAL
    failure_reason = "SINGULAR_MATRIX"

    def __init__(self, pivot: float, threshold: float):
        self.pivot = float(pivot)
        self.threshold = float(threshold)
        self.message = f"matrix is singular to tolerance: pivot magnitude {self.pivot:.3e} <= {self.threshold:.3e}"


class NearSingularityError(SingularityError):
    """exception when a resolvent is requested too close to the spectrum"""

    failure_reason = "NEAR_SPECTRUM"

    def __init__(self, z, distance: float, threshold: float):
        super().__init__(distance, threshold)
        self.z = complex(z)
        self.message = f"z={self.z} lies within {distance:.3e} of spec(L) (threshold {threshold:.3e})"


class LemmaViolationError(BaseStabilityException):
    """exception when an eigenvalue of L breaks the spectrum lemma (input or numerical bug)"""

    exit_code = EXIT_NUMERICAL
    failure_reason = "LEMMA_VIOLATION"

    def __init__(self, eigenvalue, check: str):
        self.eigenvalue = complex(eigenvalue)
        self.check = check
        self.message = f"eigenvalue {self.eigenvalue} of L fails check '{check}'"


class NumericalInconsistencyError(BaseStabilityException):
    """exception when two computations of the same quantity disagree"""

    exit_code = EXIT_NUMERICAL
    failure_reason = "NUMERICAL_INCONSISTENCY"

    def __init__(self, what: str, residual: float, tolerance: float):
        self.residual = float(residual)
        self.message = f"{what}: residual {self.residual:.3e} exceeds {tolerance:.3e}"
