"""Sharp coefficient, growth, covering and area bounds for the shear class.

Every bound has two computation routes wherever the underlying statement
does: closed forms built on the hypergeometric function on one side, direct
quadrature of the defining integrals on the other.  The dual routes are kept
deliberately separate so they can certify each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MissingSeriesError, ParameterError
from .mappings import ClassParams, ExtremalSpec, HarmonicMapping, make_extremal
from .quadrature import disk_integral, integrate_real
from .reports import BoundReport, complex_pair
from .special import hyp2f1

#: closeness to alpha = 1/2 that selects the logarithmic branch
_HALF_EPS = 1e-9


def _rising_product(k: int, alpha: float) -> float:
    """``prod_{j=2..k} (j - 2*alpha)`` (empty product for k < 2)."""
    out = 1.0
    for j in range(2, k + 1):
        out *= j - 2.0 * alpha
    return out


def coeff_bound_a(k: int, alpha: float) -> float:
    """Sharp bound on the k-th analytic-part coefficient, ``k >= 2``."""
    if k < 2:
        raise ParameterError(f"coefficient index must be >= 2, got {k}")
    if not -0.5 <= alpha < 1.0:
        raise ParameterError(f"alpha must lie in [-1/2, 1), got {alpha}")
    return _rising_product(k, alpha) / math.factorial(k)


def coeff_bound_b(k: int, n: int, alpha: float, zeta) -> float:
    """Sharp bound on the (k+n)-th co-analytic coefficient, ``k >= 1``."""
    if k < 1:
        raise ParameterError(f"coefficient index must be >= 1, got {k}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not -0.5 <= alpha < 1.0:
        raise ParameterError(f"alpha must lie in [-1/2, 1), got {alpha}")
    az = abs(complex(zeta))
    if k == 1:
        return az / (n + 1.0)
    return az * _rising_product(k, alpha) / ((k + n) * math.factorial(k - 1))


def verify_coeff_relation(f: HarmonicMapping, n: int, zeta, K: int,
                          tol: float = 1e-12) -> BoundReport:
    """Check the coefficient recursion ``(k+n) b_{k+n} = zeta k a_k``.

    Needs Taylor arrays through order ``K`` (analytic part) and ``K + n``
    (co-analytic part).
    """
    if f.taylor_h is None or f.taylor_g is None:
        raise MissingSeriesError("mapping carries no Taylor arrays")
    if f.taylor_h.order < K or f.taylor_g.order < K + n:
        raise MissingSeriesError(
            f"need Taylor orders >= ({K}, {K + n}), have "
            f"({f.taylor_h.order}, {f.taylor_g.order})"
        )
    zeta = complex(zeta)
    worst = -1.0
    worst_k = 0
    for k in range(1, K + 1):
        a_k = f.taylor_h.coeff(k)
        b_kn = f.taylor_g.coeff(k + n)
        res = abs((k + n) * b_kn - zeta * k * a_k)
        if res > worst:
            worst = res
            worst_k = k
    return BoundReport(
        check="coefficient-relation",
        passed=worst <= tol,
        margin=float(tol - worst),
        witness={"z": [float(worst_k), 0.0], "value": worst},
        details={"K": K, "n": n, "zeta": complex_pair(zeta),
                 "max_residual": worst, "tol": tol, "family": f.label},
    )


@dataclass(frozen=True)
class GrowthBounds:
    """Sharp modulus envelope ``phi <= |f| <= psi`` on ``|z| = r``."""

    phi: float
    psi: float
    r: float
    params: ClassParams
    mode: str
    notes: tuple = ()


def _growth_params(params: ClassParams) -> tuple[float, float, int, tuple]:
    """Validate growth/covering hypotheses; project complex zeta to |zeta|."""
    alpha = params.alpha
    if not 0.0 <= alpha < 1.0:
        raise ParameterError(
            f"growth/covering bounds require 0 <= alpha < 1, got {alpha}"
        )
    zeta = complex(params.zeta)
    notes = ()
    if zeta.imag != 0.0 or zeta.real < 0.0:
        notes = ("zeta replaced by |zeta| for the envelope",)
    return alpha, abs(zeta), params.n, notes


def _phi_closed(r: float, alpha: float, zeta: float, n: int) -> float:
    correction = zeta * r ** (n + 1) / (n + 1.0)
    if abs(2.0 * alpha - 1.0) < _HALF_EPS:
        return math.log1p(r) - correction * hyp2f1(1.0, n + 1.0, n + 2.0, -r).real
    lead = ((1.0 + r) ** (2.0 * alpha - 1.0) - 1.0) / (2.0 * alpha - 1.0)
    return lead - correction * hyp2f1(n + 1.0, 2.0 - 2.0 * alpha, n + 2.0, -r).real


def _psi_closed(r: float, alpha: float, zeta: float, n: int) -> float:
    correction = zeta * r ** (n + 1) / (n + 1.0)
    if abs(2.0 * alpha - 1.0) < _HALF_EPS:
        return -math.log1p(-r) + correction * hyp2f1(1.0, n + 1.0, n + 2.0, r).real
    lead = (1.0 - (1.0 - r) ** (2.0 * alpha - 1.0)) / (2.0 * alpha - 1.0)
    return lead + correction * hyp2f1(n + 1.0, 2.0 - 2.0 * alpha, n + 2.0, r).real


def growth_bounds(r: float, params: ClassParams, mode: str = "closed-form",
                  quad_tol: float = 1e-12) -> GrowthBounds:
    """Sharp growth envelope at radius ``r``.

    ``mode="closed-form"`` uses the hypergeometric expressions;
    ``mode="quadrature"`` integrates ``(1 -+ |zeta| rho^n)/(1 +- rho)^(2-2alpha)``
    directly.  The hypotheses require ``0 <= alpha < 1``.
    """
    if not 0.0 < r < 1.0:
        raise ParameterError(f"radius must lie in (0, 1), got {r}")
    alpha, zeta, n, notes = _growth_params(params)
    if mode == "closed-form":
        phi = _phi_closed(r, alpha, zeta, n)
        psi = _psi_closed(r, alpha, zeta, n)
    elif mode == "quadrature":
        expo = 2.0 * (1.0 - alpha)
        phi = integrate_real(
            lambda rho: (1.0 - zeta * rho**n) / (1.0 + rho) ** expo, 0.0, r, tol=quad_tol)
        psi = integrate_real(
            lambda rho: (1.0 + zeta * rho**n) / (1.0 - rho) ** expo, 0.0, r, tol=quad_tol)
    else:
        raise ParameterError(f"unknown growth mode {mode!r}")
    return GrowthBounds(phi=float(phi), psi=float(psi), r=r, params=params,
                        mode=mode, notes=notes)


def covering_radius(params: ClassParams) -> float:
    """Radius of the disk guaranteed inside the image: the ``r -> 1`` limit
    of the lower growth envelope."""
    alpha, zeta, n, _ = _growth_params(params)
    if abs(2.0 * alpha - 1.0) < _HALF_EPS:
        return math.log(2.0) - zeta / (n + 1.0) * hyp2f1(1.0, n + 1.0, n + 2.0, -1.0).real
    lead = (2.0 ** (2.0 * alpha - 1.0) - 1.0) / (2.0 * alpha - 1.0)
    return lead - zeta / (n + 1.0) * hyp2f1(n + 1.0, 2.0 - 2.0 * alpha, n + 2.0, -1.0).real


def area(f: HarmonicMapping, r: float, tol: float = 1e-9) -> float:
    """Unsigned image area ``integral of (|h'|^2 - |g'|^2)`` over ``|z| < r``."""
    if not 0.0 < r < 1.0:
        raise ParameterError(f"radius must lie in (0, 1), got {r}")
    return disk_integral(f.jacobian, r, tol=tol)


@dataclass(frozen=True)
class AreaBounds:
    """Quadrature sandwich for the image area at radius ``r``."""

    lower: float
    upper: float
    r: float
    params: ClassParams
    notes: tuple = ()


def area_bounds(params: ClassParams, r: float, quad_tol: float = 1e-12) -> AreaBounds:
    """Sharp area sandwich ``2 pi int rho (1 - |zeta|^2 rho^(2n)) / (1 +- rho)^(4-4alpha)``."""
    if not 0.0 < r < 1.0:
        raise ParameterError(f"radius must lie in (0, 1), got {r}")
    alpha, zeta, n, notes = _growth_params(params)
    expo = 4.0 * (1.0 - alpha)
    zz = zeta * zeta

    lower = 2.0 * math.pi * integrate_real(
        lambda rho: rho * (1.0 - zz * rho ** (2 * n)) / (1.0 + rho) ** expo,
        0.0, r, tol=quad_tol)
    upper = 2.0 * math.pi * integrate_real(
        lambda rho: rho * (1.0 - zz * rho ** (2 * n)) / (1.0 - rho) ** expo,
        0.0, r, tol=quad_tol)
    return AreaBounds(lower=float(lower), upper=float(upper), r=r,
                      params=params, notes=notes)


def verify_sharpness(params: ClassParams, r_list, tol: float = 1e-8) -> BoundReport:
    """Confirm the growth envelope is attained by the extremal family.

    The upper envelope is met by the ``delta = 1`` extremal at ``+r``; the
    lower one at ``-r`` after flipping the sign of ``zeta`` when ``n`` is
    even (the rotation that realises the minimising direction).  Mapping
    values come from the elementary closed forms, the envelope from
    quadrature, so the two sides are independent code paths.
    """
    alpha, zeta, n, _ = _growth_params(params)
    base = ClassParams(alpha, zeta, n)
    f_psi = make_extremal(ExtremalSpec(base, 1.0))
    zeta_phi = zeta if n % 2 == 1 else -zeta
    f_phi = make_extremal(ExtremalSpec(ClassParams(alpha, zeta_phi, n), 1.0))

    worst = -1.0
    worst_detail = None
    for r in r_list:
        gb = growth_bounds(r, base, mode="quadrature")
        dev_psi = abs(abs(complex(f_psi(r + 0j))) - gb.psi)
        dev_phi = abs(abs(complex(f_phi(-r + 0j))) - gb.phi)
        for name, dev, z in (("psi", dev_psi, r), ("phi", dev_phi, -r)):
            if dev > worst:
                worst = dev
                worst_detail = {"z": [float(z), 0.0], "value": dev, "side": name}
    return BoundReport(
        check="growth-sharpness",
        passed=worst <= tol,
        margin=float(tol - worst),
        witness={"z": worst_detail["z"], "value": worst_detail["value"]},
        details={"alpha": alpha, "zeta": zeta, "n": n, "tol": tol,
                 "radii": [float(r) for r in r_list],
                 "worst_side": worst_detail["side"]},
    )


def verify_coeff_sharpness(spec: ExtremalSpec, K: int = 12,
                           tol: float = 1e-10) -> BoundReport:
    """Check the extremal family attains the coefficient bounds exactly.

    Compares ``|a_k|`` for ``2 <= k <= K`` and ``|b_(k+n)|`` for
    ``1 <= k <= K`` against the closed-form bounds; the worst absolute
    deviation drives the verdict.
    """
    p = spec.params
    f = make_extremal(spec, order=max(K + p.n + 2, 16))
    worst = -1.0
    witness = None
    for k in range(2, K + 1):
        dev = abs(abs(complex(f.taylor_h.coeff(k))) - coeff_bound_a(k, p.alpha))
        if dev > worst:
            worst, witness = dev, {"z": [float(k), 0.0], "value": dev}
    for k in range(1, K + 1):
        dev = abs(abs(complex(f.taylor_g.coeff(k + p.n)))
                  - coeff_bound_b(k, p.n, p.alpha, p.zeta))
        if dev > worst:
            worst, witness = dev, {"z": [float(k + p.n), 0.0], "value": dev}
    return BoundReport(
        check="coefficient-sharpness",
        passed=worst <= tol,
        margin=float(tol - worst),
        witness=witness,
        details={"alpha": p.alpha, "zeta": complex_pair(p.zeta), "n": p.n,
                 "delta": complex_pair(spec.delta), "K": K, "tol": tol},
    )


def verify_growth_consistency(params: ClassParams, r_list,
                              tol: float = 1e-9) -> BoundReport:
    """Closed-form vs adaptive-quadrature agreement of the growth envelope."""
    worst = -1.0
    witness = None
    for r in r_list:
        closed = growth_bounds(r, params, mode="closed-form")
        quad = growth_bounds(r, params, mode="quadrature")
        for side, dev in (("phi", abs(closed.phi - quad.phi)),
                          ("psi", abs(closed.psi - quad.psi))):
            if dev > worst:
                worst = dev
                witness = {"z": [float(r), 0.0], "value": dev, "side": side}
    return BoundReport(
        check="growth-consistency",
        passed=worst <= tol,
        margin=float(tol - worst),
        witness={"z": witness["z"], "value": witness["value"]},
        details={"alpha": params.alpha, "zeta": complex_pair(params.zeta),
                 "n": params.n, "tol": tol, "worst_side": witness["side"],
                 "radii": [float(r) for r in r_list]},
    )


def verify_covering_consistency(params: ClassParams, r: float = 1.0 - 1e-6,
                                tol: float = 1e-4) -> BoundReport:
    """The covering radius should match the lower envelope as ``r -> 1``."""
    rad = covering_radius(params)
    phi = growth_bounds(r, params).phi
    dev = abs(rad - phi)
    return BoundReport(
        check="covering-consistency",
        passed=dev <= tol,
        margin=float(tol - dev),
        witness={"z": [float(r), 0.0], "value": dev},
        details={"alpha": params.alpha, "zeta": complex_pair(params.zeta),
                 "n": params.n, "covering_radius": rad, "phi_at_r": phi,
                 "tol": tol},
    )


def verify_area_sandwich(params: ClassParams, r_list,
                         quad_tol: float = 1e-9) -> BoundReport:
    """Computed image area of the extremal member must sit inside the
    two-sided envelope at every radius (small quadrature slack allowed)."""
    f = make_extremal(ExtremalSpec(params, 1.0))
    slack = 10.0 * quad_tol
    worst = None
    witness = None
    for r in r_list:
        a = area(f, r, tol=quad_tol)
        ab = area_bounds(params, r)
        margin = min(a - ab.lower, ab.upper - a) + slack
        if worst is None or margin < worst:
            worst = margin
            witness = {"z": [float(r), 0.0], "value": a,
                       "lower": ab.lower, "upper": ab.upper}
    return BoundReport(
        check="area-sandwich",
        passed=worst >= 0.0,
        margin=float(worst),
        witness={"z": witness["z"], "value": witness["value"]},
        details={"alpha": params.alpha, "zeta": complex_pair(params.zeta),
                 "n": params.n, "radii": [float(r) for r in r_list],
                 "lower": witness["lower"], "upper": witness["upper"],
                 "quad_tol": quad_tol},
    )


def default_lattice(alphas=(0.0, 0.25, 0.5, 0.75), zetas=(0.0, 0.3),
                    zeta_rel=(0.99,), ns=(1, 2, 3)) -> list[ClassParams]:
    """Admissible (alpha, zeta, n) combinations used by the verification
    sweeps; absolute zeta values that exceed ``1/(2n-1)`` are skipped."""
    out = []
    for n in ns:
        cap = 1.0 / (2 * n - 1)
        vals = [z for z in zetas if z <= cap + 1e-12]
        vals += [rel * cap for rel in zeta_rel]
        for alpha in alphas:
            for z in vals:
                out.append(ClassParams(alpha, z, n))
    return out
