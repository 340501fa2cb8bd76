"""Phase-boundary tracing by bisection on a boolean phase detector.

A detector maps a point of a 2-D parameter plane to True (ordered /
superradiant) or False.  For every value on the first axis the boundary is
bracketed between the axis-2 endpoints and bisected; slices without a sign
change yield a no-boundary marker instead of an error, and detector failures
flag the point and let the sweep continue.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import meanfield
from .response import dicke_critical_coupling

FLAG_OK = "ok"
FLAG_NO_BOUNDARY = "no-boundary"
FLAG_DETECTOR_FAILURE = "detector-failure"


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a boundary sweep (echoed into manifests)."""

    plane: str                      # e.g. "J_vs_lambda", "B_vs_T", "omega_z_vs_T"
    axis1_values: tuple
    axis2_min: float
    axis2_max: float
    detector: str
    bisection_tol: float = 1e-3
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        a = np.asarray(self.axis1_values, dtype=float)
        if a.size and not (np.all(np.diff(a) > 0) or np.all(np.diff(a) < 0)):
            raise ValueError("axis1 grid must be strictly monotone")
        if not self.axis2_min < self.axis2_max:
            raise ValueError("axis2 range must be increasing")
        if not 0.0 < self.bisection_tol <= 1e-2:
            raise ValueError("bisection_tol must lie in (0, 1e-2]")


@dataclass(frozen=True)
class BoundaryPoint:
    axis1: float
    critical: float          # None when flag != "ok"
    bracket_width: float
    detector: str
    flag: str = FLAG_OK


@dataclass(frozen=True)
class PhaseBoundary:
    points: tuple
    spec: SweepSpec = None

    def critical_values(self):
        """(axis1, critical) arrays for the points that found a boundary."""
        ok = [p for p in self.points if p.flag == FLAG_OK]
        return (np.array([p.axis1 for p in ok]),
                np.array([p.critical for p in ok]))


def _bisect_slice(axis1, detector, lo, hi, tol, label):
    try:
        d_lo = bool(detector(axis1, lo))
        d_hi = bool(detector(axis1, hi))
        if d_lo == d_hi:
            return BoundaryPoint(axis1, None, hi - lo, label, FLAG_NO_BOUNDARY)
        floor = 1e-9 * (hi - lo)  # guards against boundaries at axis2 ~ 0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if (hi - lo) <= tol * max(abs(mid), floor):
                break
            if bool(detector(axis1, mid)) == d_lo:
                lo = mid
            else:
                hi = mid
        return BoundaryPoint(axis1, 0.5 * (lo + hi), hi - lo, label, FLAG_OK)
    except Exception:
        return BoundaryPoint(axis1, None, hi - lo, label, FLAG_DETECTOR_FAILURE)


def trace_boundary(spec, detector, threads=1):
    """Trace the boundary described by `spec` using `detector(axis1, axis2)`.

    Slices are independent; with threads > 1 they run concurrently and are
    merged back in axis-1 order.
    """
    args = [(a1, detector, spec.axis2_min, spec.axis2_max,
             spec.bisection_tol, spec.detector) for a1 in spec.axis1_values]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(lambda t: _bisect_slice(*t), args))
    else:
        points = [_bisect_slice(*t) for t in args]
    return PhaseBoundary(points=tuple(points), spec=spec)


def closed_form_detector(Omega, S, T):
    """Detector on the (omega_z, lambda_bar) plane from the Dicke closed form."""

    def detector(omega_z, lambda_bar):
        return lambda_bar >= dicke_critical_coupling(omega_z, Omega, S, T)

    return detector


def mean_field_detector(problem_factory, threshold=None, quantity="any"):
    """Detector driven by the self-consistent order parameter.

    `problem_factory(axis1, axis2)` builds the MeanFieldProblem for the probe
    point.  `quantity` selects which order parameter counts: "uniform",
    "staggered" or "any".  The default threshold is 1e-4 * S.
    """

    def detector(axis1, axis2):
        problem = problem_factory(axis1, axis2)
        thr = threshold if threshold is not None else 1e-4 * problem.spin
        sol = meanfield.solve_selfconsistent(problem)
        values = {"uniform": abs(sol.m_uniform),
                  "staggered": abs(sol.m_stag),
                  "any": max(abs(sol.m_uniform), abs(sol.m_stag))}
        return values[quantity] > thr

    return detector


def response_criterion_detector(response_per_unit_coupling, Omega):
    """Detector on a (axis1, lambda_bar) plane from the superradiance criterion.

    `response_per_unit_coupling(axis1)` returns |R| evaluated at lambda_bar = 1
    for the bare spin model of the slice; since R scales as lambda_bar^2 for a
    uniform coupling, the verdict at any lambda_bar follows.  Callers should
    memoize the expensive per-slice computation inside the closure.
    """

    def detector(axis1, lambda_bar):
        r_unit = response_per_unit_coupling(axis1)
        return lambda_bar ** 2 * r_unit >= Omega / 2

    return detector
