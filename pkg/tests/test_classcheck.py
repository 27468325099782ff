"""Curvature-condition checks, arc-integral criterion, convexity-type radii.

The branched-exponent family has curvature 1 + z h''/h' = gamma + (1-gamma)/(1-z),
whose real part on the radius (-r, r) ranges over ((1-gamma*r)/(1-r), (1+gamma*r)/(1+r)).
Both endpoints are used below as analytic oracles: the infimum diverges to
-infinity as r -> 1, the supremum tends to (1+gamma)/2.
"""

import math

import numpy as np
import pytest

from harmap.classcheck import (
    DEFAULT_RMAX,
    DiskGrid,
    cc_radius,
    check_membership,
    check_pbeta,
    check_theorem_b_condition,
    curvature,
    curvature_extrema,
    kaplan_min_arc_integral,
    shear_function,
)
from harmap.errors import AdmissibilityError, ParameterError
from harmap.mappings import (
    ClassParams,
    ExtremalSpec,
    PBetaParams,
    make_bshouty_lyzzaik,
    make_counterexample,
    make_extremal,
    make_identity,
)


# -- curvature and its extrema ------------------------------------------------


def test_curvature_of_identity_is_one():
    f = make_identity()
    rep = curvature_extrema(f)
    assert rep.inf_est == pytest.approx(1.0, abs=1e-10)
    assert rep.sup_est == pytest.approx(1.0, abs=1e-10)


def test_curvature_pointwise_formula_for_branched_family():
    gamma = 1.25
    f = make_counterexample(gamma)
    rng = np.random.default_rng(61)
    for _ in range(25):
        z = 0.9 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        want = gamma + (1.0 - gamma) / (1.0 - z)
        assert abs(curvature(f, z) - want) < 1e-10


def test_quadratic_shear_sup_matches_limit():
    # sup over the disk of Re(1 + z h''/h') for h = z - 0.3 z^2 is 11/8
    f = make_bshouty_lyzzaik(0.3)
    rep = curvature_extrema(f)
    assert rep.sup_est == pytest.approx(11.0 / 8.0, abs=1e-3)


def test_branched_family_curvature_extrema():
    gamma = 1.25
    f = make_counterexample(gamma)
    rep = curvature_extrema(f)
    r = DEFAULT_RMAX
    assert rep.sup_est == pytest.approx((1.0 + gamma * r) / (1.0 + r), abs=1e-6)
    assert rep.inf_est == pytest.approx((1.0 - gamma * r) / (1.0 - r), abs=1e-4)
    assert rep.inf_est < -1000.0  # diverges near the boundary


def test_grid_refinement_never_loosens_extrema():
    f = make_bshouty_lyzzaik(0.3)
    radii = np.linspace(0.1, 0.9, 9)
    coarse = curvature_extrema(f, DiskGrid(radii, angles_per_circle=128))
    finer = curvature_extrema(
        f, DiskGrid(np.append(radii, [0.95, 0.99]), angles_per_circle=256))
    assert finer.inf_est <= coarse.inf_est + 1e-15
    assert finer.sup_est >= coarse.sup_est - 1e-15


def test_conjugate_grid_symmetry_of_argmin():
    # real-coefficient family: curvature at conj(z) equals curvature at z
    f = make_counterexample(1.25)
    rep = curvature_extrema(f)
    z = rep.argmin_z
    assert abs(curvature(f, z).real - curvature(f, np.conj(z)).real) < 1e-12


def test_disk_grid_validation():
    with pytest.raises(ParameterError):
        DiskGrid([0.5, 0.4], angles_per_circle=64)  # not increasing
    with pytest.raises(ParameterError):
        DiskGrid([0.5, 1.0], angles_per_circle=64)  # touches the boundary
    grid = DiskGrid.default()
    assert max(grid.radii) == pytest.approx(DEFAULT_RMAX)


# -- class membership ---------------------------------------------------------


def test_extremal_member_passes_its_own_class():
    params = ClassParams(0.5, 0.5, 1)
    f = make_extremal(ExtremalSpec(params, 1.0))
    report = check_membership(f, params)
    assert report.passed, report.summary()
    assert report.details["curvature_inf"] > 0.5


def test_branched_family_fails_near_boundary():
    # curvature infimum (1 - gamma*r)/(1 - r) falls below -1/2 once r > 6/7,
    # so on the default near-boundary grid membership at alpha = -1/2 fails
    f = make_counterexample(1.25)
    report = check_membership(f, ClassParams(-0.5, 1.0, 1))
    assert not report.passed
    assert report.details["curvature_inf"] < -0.5


def test_branched_family_passes_on_inner_subdisk():
    # same mapping, same class, but estimated only up to r = 0.85 < 6/7
    f = make_counterexample(1.25)
    grid = DiskGrid(np.linspace(0.05, 0.85, 17), angles_per_circle=256)
    report = check_membership(f, ClassParams(-0.5, 1.0, 1), grid=grid)
    assert report.passed, report.summary()
    # analytic crossover check: infimum at r is (1 - gamma*r)/(1 - r)
    assert (1.0 - 1.25 * 0.85) / (1.0 - 0.85) > -0.5
    assert (1.0 - 1.25 * 0.875) / (1.0 - 0.875) < -0.5


def test_membership_checks_dilatation_residual():
    # bl has dilatation z, so it fails the class with zeta = 0.9 ... n = 1
    f = make_bshouty_lyzzaik(0.3)
    report = check_membership(f, ClassParams(0.9, 1.0, 1))
    assert not report.passed


def test_pbeta_acceptance_and_rejection():
    f = make_counterexample(1.25)
    ok = check_pbeta(f, PBetaParams(1.125))
    assert ok.passed, ok.summary()
    bad = check_pbeta(f, PBetaParams(1.01))
    assert not bad.passed
    # supremum tends to (1 + gamma)/2 = 9/8 from below
    assert ok.details["curvature_sup"] == pytest.approx(1.125, abs=1e-4)


def test_theorem_b_variant_delegates_to_membership():
    f = make_counterexample(1.25)
    report = check_theorem_b_condition(f, 1.0, 1.0, 1)
    # same curvature blow-up as the alpha = -1/2 membership check
    assert not report.passed
    assert report.check == "theorem-b"
    assert report.details["k"] == 1.0


def test_theorem_b_parameter_validation():
    f = make_counterexample(1.25)
    with pytest.raises(ParameterError):
        check_theorem_b_condition(f, 0.5, 1.0, 1)  # |lam| != 1
    with pytest.raises(AdmissibilityError):
        check_theorem_b_condition(f, 1.0, 0.6, 2)  # k above 1/(2n-1) = 1/3


# -- arc-integral criterion ---------------------------------------------------


def _arc_integrand(F, r, M):
    theta = np.linspace(0.0, 2.0 * math.pi, M, endpoint=False)
    z = r * np.exp(1j * theta)
    return (1.0 + z * F.deriv2(z) / F.deriv(z)).real


def _brute_min_arc(F, r, M):
    """O(M^2) reference: trapezoid integral over every proper arc."""
    u = _arc_integrand(F, r, M)
    u2 = np.concatenate([u, u])
    dtheta = 2.0 * math.pi / M
    csum = np.concatenate([[0.0], np.cumsum(u2)])
    best = math.inf
    for j1 in range(M):
        j2 = np.arange(j1 + 1, j1 + M)
        interior = csum[j2] - csum[j1 + 1]
        vals = dtheta * (0.5 * u2[j1] + interior + 0.5 * u2[j2])
        best = min(best, float(vals.min()))
    return best


def test_kaplan_matches_brute_force():
    rng = np.random.default_rng(67)
    f = make_extremal(ExtremalSpec(ClassParams(-0.25, 1.0 / 3.0, 2), 1.0))
    for _ in range(6):
        lam = np.exp(2j * math.pi * rng.uniform())
        r = rng.uniform(0.3, 0.9)
        F = shear_function(f.h, 2, lam)
        fast = kaplan_min_arc_integral(F, r, M=128)
        brute = _brute_min_arc(F, r, 128)
        assert abs(fast - brute) < 1e-12, (lam, r)


def test_full_circle_integral_is_two_pi():
    # argument principle: F' zero-free in |z| <= r makes the closed integral 2*pi
    f = make_bshouty_lyzzaik(0.3)
    for lam in (1.0, np.exp(0.7j), -1.0):
        F = shear_function(f.h, 1, lam)
        u = _arc_integrand(F, 0.9, 4096)
        full = u.sum() * 2.0 * math.pi / 4096
        assert full == pytest.approx(2.0 * math.pi, abs=1e-9)


def test_kaplan_min_at_most_full_circle():
    f = make_bshouty_lyzzaik(0.3)
    F = shear_function(f.h, 1, 1.0)
    assert kaplan_min_arc_integral(F, 0.9) <= 2.0 * math.pi + 1e-12


def test_kaplan_validates_sampling():
    f = make_identity()
    F = shear_function(f.h, 1, 1.0)
    with pytest.raises(ParameterError):
        kaplan_min_arc_integral(F, 0.5, M=32)


def test_shear_function_derivatives():
    f = make_bshouty_lyzzaik(0.2)
    lam = np.exp(0.3j)
    F = shear_function(f.h, 2, lam)
    rng = np.random.default_rng(71)
    for _ in range(10):
        z = 0.7 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        want = f.h_prime_eval(z) * (1.0 - lam * z**2)
        assert abs(F.deriv(z) - want) < 1e-12
        # second derivative consistent with a central difference of F'
        step = 1e-6
        fd = (F.deriv(z + step) - F.deriv(z - step)) / (2 * step)
        assert abs(F.deriv2(z) - fd) < 1e-5


# -- close-to-convexity radius ------------------------------------------------


def test_cc_radius_closed_form():
    assert cc_radius(-0.25, 2) == pytest.approx(1.0 / 3.0, abs=1e-15)
    alpha, n = -0.1, 3
    want = ((1.0 + 2 * alpha) / (1.0 + 2 * n + 2 * alpha)) ** (1.0 / n)
    assert cc_radius(alpha, n) == pytest.approx(want, abs=1e-15)
    assert cc_radius(-0.1, 3) == pytest.approx(0.4899, abs=5e-4)


def test_cc_radius_monotone():
    alphas = np.linspace(-0.45, -0.05, 9)
    vals = [cc_radius(a, 2) for a in alphas]
    assert all(x < y for x, y in zip(vals, vals[1:]))  # increasing in alpha
    # in n the closed form ((1+2a)/(1+2n+2a))^(1/n) is strictly increasing
    # (base ~ c/n shrinks but the n-th root wins; the limit is 1):
    ns = [2, 3, 4, 5, 8]
    vals_n = [cc_radius(-0.25, n) for n in ns]
    assert all(x < y for x, y in zip(vals_n, vals_n[1:]))
    assert vals_n[0] == pytest.approx(1.0 / 3.0)


def test_cc_radius_domain():
    for alpha, n in ((0.0, 2), (-0.5, 2), (0.2, 3), (-0.25, 1)):
        with pytest.raises(ParameterError):
            cc_radius(alpha, n)
