"""Curvature diagnostics and class-membership checks.

The central quantity is the analytic curvature term ``1 + z h''/h'`` whose
real part bounds (below by ``alpha``, above by ``beta``) define the two
mapping classes this package verifies against.  Checks evaluate on polar
grids that refine toward the boundary, where the extrema live.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, ParameterError, SingularityError
from .mappings import (
    AnalyticFunction,
    ClassParams,
    HarmonicMapping,
    PBetaParams,
)
from .reports import BoundReport, complex_pair

#: largest radius a default grid pushes toward the boundary
DEFAULT_RMAX = 1.0 - 1e-4
#: derivative magnitudes below this are treated as singular
_SINGULAR_FLOOR = 1e-300


@dataclass(frozen=True)
class DiskGrid:
    """Concentric-circle sample grid: strictly increasing radii in (0, 1)."""

    radii: tuple
    angles_per_circle: int = 512

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii:
            raise ParameterError("grid needs at least one radius")
        if any(not 0.0 < r < 1.0 for r in radii):
            raise ParameterError("grid radii must lie in (0, 1)")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ParameterError("grid radii must be strictly increasing")
        if self.angles_per_circle < 8:
            raise ParameterError("grid needs at least 8 angles per circle")
        object.__setattr__(self, "radii", radii)

    @classmethod
    def default(cls, r_max: float = DEFAULT_RMAX, angles: int = 512) -> "DiskGrid":
        """Coarse interior coverage plus geometric refinement toward ``r_max``."""
        low = np.linspace(0.1, 0.85, 8)
        high = 1.0 - np.geomspace(0.1, 1.0 - r_max, 16)
        return cls(tuple(np.concatenate((low, high))), angles)

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles_per_circle) / self.angles_per_circle

    def to_dict(self) -> dict:
        return {
            "radii": [float(r) for r in self.radii],
            "angles_per_circle": int(self.angles_per_circle),
        }


@dataclass
class CurvatureReport:
    """Grid extrema of ``Re(1 + z h''/h')`` with their witnesses."""

    inf_est: float
    sup_est: float
    argmin_z: complex
    argmax_z: complex
    grid: DiskGrid


def _analytic_part(f) -> AnalyticFunction:
    if isinstance(f, HarmonicMapping):
        return f.h
    if isinstance(f, AnalyticFunction):
        return f
    raise ParameterError(f"expected a mapping or analytic function, got {type(f).__name__}")


def curvature(f, z):
    """``1 + z h''(z) / h'(z)`` for the analytic part of ``f``."""
    h = _analytic_part(f)
    hp = h.deriv(z)
    if np.min(np.abs(hp)) < _SINGULAR_FLOOR:
        raise SingularityError("curvature undefined where h' vanishes")
    return 1.0 + z * h.second(z) / hp


def curvature_extrema(f, grid: DiskGrid | None = None) -> CurvatureReport:
    """Extrema of the curvature real part over a concentric-circle grid.

    Ties resolve to the first grid point in (radius, angle-index) order, so
    refining the grid can only widen the reported range.
    """
    grid = grid or DiskGrid.default()
    h = _analytic_part(f)
    phase = np.exp(1j * grid.angles())
    best_min = math.inf
    best_max = -math.inf
    argmin = argmax = 0j
    for r in grid.radii:
        z = r * phase
        vals = np.real(curvature(h, z))
        i = int(np.argmin(vals))
        j = int(np.argmax(vals))
        if vals[i] < best_min:
            best_min = float(vals[i])
            argmin = complex(z[i])
        if vals[j] > best_max:
            best_max = float(vals[j])
            argmax = complex(z[j])
    return CurvatureReport(best_min, best_max, argmin, argmax, grid)


def _dilatation_residual(f: HarmonicMapping, zeta: complex, n: int,
                         grid: DiskGrid) -> tuple[float, complex]:
    """Max of ``|g' - zeta z^n h'|`` over the grid, with its witness."""
    phase = np.exp(1j * grid.angles())
    worst = -1.0
    arg = 0j
    for r in grid.radii:
        z = r * phase
        res = np.abs(f.g.deriv(z) - zeta * z**n * f.h.deriv(z))
        i = int(np.argmax(res))
        if res[i] > worst:
            worst = float(res[i])
            arg = complex(z[i])
    return worst, arg


def check_membership(f: HarmonicMapping, params: ClassParams,
                     grid: DiskGrid | None = None, tol: float = 1e-8) -> BoundReport:
    """Test the two class conditions on a grid.

    Passes iff the grid infimum of the curvature real part stays above
    ``alpha - tol`` *and* the dilatation identity ``g' = zeta z^n h'`` holds
    to ``tol``.  The report carries both margins; the headline margin and
    witness come from whichever condition is tighter.
    """
    grid = grid or DiskGrid.default()
    rep = curvature_extrema(f, grid)
    resid, resid_arg = _dilatation_residual(f, params.zeta, params.n, grid)
    margin_curv = rep.inf_est - params.alpha
    margin_resid = tol - resid
    passed = (rep.inf_est >= params.alpha - tol) and (resid <= tol)
    if margin_curv <= margin_resid:
        witness = {"z": complex_pair(rep.argmin_z), "value": rep.inf_est}
        margin = margin_curv
    else:
        witness = {"z": complex_pair(resid_arg), "value": resid}
        margin = margin_resid
    return BoundReport(
        check="membership",
        passed=passed,
        margin=float(margin),
        grid=grid.to_dict(),
        witness=witness,
        details={
            "alpha": params.alpha,
            "zeta": complex_pair(params.zeta),
            "n": params.n,
            "tol": tol,
            "curvature_inf": rep.inf_est,
            "curvature_margin": margin_curv,
            "dilatation_residual": resid,
            "residual_margin": margin_resid,
            "family": f.label,
        },
    )


def check_pbeta(f: HarmonicMapping, p: PBetaParams,
                grid: DiskGrid | None = None, tol: float = 1e-8) -> BoundReport:
    """Test the curvature-above class: ``Re`` curvature below ``beta`` and
    dilatation exactly ``z`` (i.e. ``g' = z h'``)."""
    grid = grid or DiskGrid.default()
    rep = curvature_extrema(f, grid)
    resid, resid_arg = _dilatation_residual(f, 1.0, 1, grid)
    margin_curv = p.beta - rep.sup_est
    margin_resid = tol - resid
    passed = (rep.sup_est <= p.beta + tol) and (resid <= tol)
    if margin_curv <= margin_resid:
        witness = {"z": complex_pair(rep.argmax_z), "value": rep.sup_est}
        margin = margin_curv
    else:
        witness = {"z": complex_pair(resid_arg), "value": resid}
        margin = margin_resid
    return BoundReport(
        check="pbeta",
        passed=passed,
        margin=float(margin),
        grid=grid.to_dict(),
        witness=witness,
        details={
            "beta": p.beta,
            "tol": tol,
            "curvature_sup": rep.sup_est,
            "curvature_margin": margin_curv,
            "dilatation_residual": resid,
            "residual_margin": margin_resid,
            "family": f.label,
        },
    )


def check_theorem_b_condition(f: HarmonicMapping, lam: complex, k: float, n: int,
                              grid: DiskGrid | None = None,
                              tol: float = 1e-8) -> BoundReport:
    """Univalence-criterion membership: dilatation ``lam * k * z^n`` with
    ``|lam| = 1``, ``0 < k <= 1/(2n-1)``, and curvature real part > -1/2."""
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise ParameterError(f"|lam| must equal 1, got {abs(lam)}")
    if not 0.0 < k <= 1.0 / (2 * n - 1) + 1e-12:
        raise AdmissibilityError(f"k={k} outside (0, 1/(2n-1)] for n={n}")
    report = check_membership(f, ClassParams(-0.5, lam * k, n), grid=grid, tol=tol)
    report.check = "theorem-b"
    report.details["lam"] = complex_pair(lam)
    report.details["k"] = float(k)
    return report


def shear_function(h: AnalyticFunction, n: int, lam: complex) -> AnalyticFunction:
    """Analytic test function ``F = h - lam*g`` for the shear ``g' = z^n h'``.

    Only the derivatives are populated (that is all the arc-integral test
    needs); ``F' = h' (1 - lam z^n)``.
    """
    lam = complex(lam)

    def Fp(z):
        return h.deriv(z) * (1.0 - lam * z**n)

    def Fpp(z):
        return h.second(z) * (1.0 - lam * z**n) - lam * n * z ** (n - 1) * h.deriv(z)

    return AnalyticFunction(value=None, deriv=Fp, deriv2=Fpp)


def kaplan_min_arc_integral(F: AnalyticFunction, r: float, M: int = 512) -> float:
    """Minimum over boundary arcs of the curvature integral at radius ``r``.

    Samples ``u = Re(1 + z F''/F')`` at ``M`` uniform angles and minimises the
    trapezoidal integral over all arcs spanning at least one grid step and
    less than a full turn.  Values above ``-pi`` for every shear direction
    certify close-to-convexity at this radius.
    """
    if M < 64:
        raise ParameterError(f"need at least 64 angular samples, got {M}")
    if not 0.0 < r < 1.0:
        raise ParameterError(f"radius must lie in (0, 1), got {r}")
    theta = 2.0 * np.pi * np.arange(M) / M
    z = r * np.exp(1j * theta)
    Fp = F.deriv(z)
    if np.min(np.abs(Fp)) < 1e-12:
        raise SingularityError("F' vanishes (numerically) on the sample circle")
    u = np.real(1.0 + z * F.deriv2(z) / Fp)

    # Trapezoid over the arc [theta_j1, theta_j2] equals dtheta*(P[j2]-P[j1])
    # with P = (prefix sum) + u/2, so the arc minimum is a windowed minimum
    # of P differences over the doubled circle.
    u2 = np.concatenate((u, u))
    prefix = np.concatenate(([0.0], np.cumsum(u2)))[:-1]
    P = prefix + 0.5 * u2
    dtheta = 2.0 * np.pi / M

    best = math.inf
    dq: deque[int] = deque()  # candidate arc starts with decreasing P (front = max)
    for j2 in range(1, 2 * M):
        j1_new = j2 - 1
        if j1_new < M:
            while dq and P[dq[-1]] <= P[j1_new]:
                dq.pop()
            dq.append(j1_new)
        while dq and dq[0] < j2 - (M - 1):
            dq.popleft()
        if dq:
            best = min(best, P[j2] - P[dq[0]])
    return float(best * dtheta)


def cc_radius(alpha: float, n: int) -> float:
    """Close-to-convexity radius ``((1+2a)/(1+2n+2a))**(1/n)``.

    Defined for ``-1/2 < alpha < 0`` and integer ``n >= 2`` (the shear
    ``g' = z^n h'`` with unit coefficient).
    """
    if not -0.5 < alpha < 0.0:
        raise ParameterError(f"alpha must lie in (-1/2, 0), got {alpha}")
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    return ((1.0 + 2.0 * alpha) / (1.0 + 2.0 * n + 2.0 * alpha)) ** (1.0 / n)
