"""Injectivity diagnostics: collision construction, grid scans, winding.

Three levels of rigour: an exact symmetric-collision solver for the
counterexample family (root finding on the boundary-argument equation), a
general polar-grid scan with spatial hashing and damped Gauss-Newton
refinement, and a discrete winding-number check for image multiplicity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    InfeasibilityError,
    OnCurveError,
    ParameterError,
)
from .mappings import HarmonicMapping, is_conjugate_symmetric, make_counterexample
from .reports import UnivalenceReport

#: default scan radius for near-boundary collision hunting
DEFAULT_SCAN_RADIUS = 0.999
#: refined pairs closer than this in image space count as collisions
DEFAULT_COLLISION_TOL = 1e-8
#: preimage pairs closer than this are treated as trivially equal
DEFAULT_SEPARATION_FLOOR = 0.05


def feasibility_threshold(gamma: float) -> float:
    """Smallest radius on which the symmetric collision equation is solvable.

    The boundary argument ``arg(1 - r e^(i theta))`` sweeps ``(-arcsin r, 0)``
    as ``theta`` runs over ``(0, pi)``; the collision needs it to reach
    ``-pi/(gamma+1)``, hence ``r > sin(pi/(gamma+1))``.
    """
    gamma = float(gamma)
    if not 1.0 < gamma <= 1.75:
        raise ParameterError(f"gamma must lie in (1, 7/4], got {gamma}")
    return math.sin(math.pi / (gamma + 1.0))


@dataclass(frozen=True)
class CollisionSearchParams:
    """Inputs for the symmetric-collision construction."""

    gamma: float
    r0: float | None = None  # None selects the midpoint of the feasible range
    tol: float = 1e-12
    max_iter: int = 200


@dataclass(frozen=True)
class SymmetricCollision:
    """A conjugate pair identified under the counterexample mapping."""

    gamma: float
    r0: float
    theta0: float
    z1: complex
    z2: complex
    image_gap: float
    im_f: float
    threshold: float


def find_symmetric_collision(p: CollisionSearchParams) -> SymmetricCollision:
    """Locate ``z1 = r0 e^(i theta0)`` with ``f(z1) = f(conj z1)``.

    Solves ``arg(1 - r0 e^(i theta)) = -pi/(gamma+1)`` by bisection on the
    monotone stretch ``theta in (0, arccos r0)``; there the imaginary part of
    the mapping vanishes, so the conjugate pair collides.
    """
    thr = feasibility_threshold(p.gamma)
    r0 = 0.5 * (thr + 1.0) if p.r0 is None else float(p.r0)
    if not thr < r0 < 1.0:
        raise InfeasibilityError(
            f"r0={r0} infeasible: need {thr:.6f} < r0 < 1 for gamma={p.gamma}"
        )
    target = -math.pi / (p.gamma + 1.0)

    def g(theta: float) -> float:
        w = 1.0 - r0 * cmath.exp(1j * theta)
        return cmath.phase(w) - target

    lo = 1e-15
    hi = math.acos(r0)
    if g(lo) <= 0.0 or g(hi) >= 0.0:
        raise InfeasibilityError(
            f"no sign change on (0, arccos r0) for gamma={p.gamma}, r0={r0}"
        )
    for _ in range(p.max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    theta0 = 0.5 * (lo + hi)

    f = make_counterexample(p.gamma)
    z1 = r0 * cmath.exp(1j * theta0)
    z2 = z1.conjugate()
    w1 = complex(f(z1))
    gap = abs(w1 - complex(f(z2)))
    if abs(w1.imag) > p.tol:
        raise ConvergenceError(
            f"bisection stalled: residual imaginary part {w1.imag:.3e} exceeds {p.tol}"
        )
    return SymmetricCollision(gamma=p.gamma, r0=r0, theta0=theta0, z1=z1, z2=z2,
                              image_gap=gap, im_f=w1.imag, threshold=thr)


# -- grid scan ----------------------------------------------------------------


def _pair_jacobian(f: HarmonicMapping, za: complex, zb: complex) -> np.ndarray:
    """Real 2x4 Jacobian of ``f(za) - f(zb)`` w.r.t. (xa, ya, xb, yb)."""
    out = np.empty((2, 4))
    for col, (z, sign) in enumerate(((za, 1.0), (za, 1.0), (zb, -1.0), (zb, -1.0))):
        hp = complex(f.h.deriv(z))
        gp = complex(f.g.deriv(z))
        if col % 2 == 0:  # d/dx: dz = 1
            d = hp + gp.conjugate()
        else:  # d/dy: dz = i
            d = 1j * hp - 1j * gp.conjugate()
        out[0, col] = sign * d.real
        out[1, col] = sign * d.imag
    return out


def _clamp_disk(z: complex, r: float) -> complex:
    a = abs(z)
    return z if a <= r else z * (r / a)


def _refine_pair(f: HarmonicMapping, z1: complex, z2: complex, r: float,
                 floor: float, tol: float, max_steps: int = 100):
    """Damped least-norm Gauss-Newton on ``f(z1) - f(z2) = 0``.

    Iterates are clamped to ``|z| <= r``; candidates whose points merge below
    the separation floor are abandoned (``None``).  Otherwise returns
    ``(z1, z2, gap, ok)`` where ``ok`` marks a confirmed collision.
    """
    x = np.array([z1.real, z1.imag, z2.real, z2.imag])

    def split(vec):
        return complex(vec[0], vec[1]), complex(vec[2], vec[3])

    def resid(vec):
        za, zb = split(vec)
        d = complex(f(za)) - complex(f(zb))
        return np.array([d.real, d.imag])

    best = float(np.hypot(*resid(x)))
    for _ in range(max_steps):
        if best <= 0.1 * tol:
            break
        za, zb = split(x)
        step = -np.linalg.pinv(_pair_jacobian(f, za, zb)) @ resid(x)
        t = 1.0
        improved = False
        for _ in range(60):
            trial = x + t * step
            ta = _clamp_disk(complex(trial[0], trial[1]), r)
            tb = _clamp_disk(complex(trial[2], trial[3]), r)
            trial = np.array([ta.real, ta.imag, tb.real, tb.imag])
            val = float(np.hypot(*resid(trial)))
            if val < best:
                x = trial
                best = val
                improved = True
                break
            t *= 0.5
        if not improved:
            break
        za, zb = split(x)
        if abs(za - zb) < 0.5 * floor:
            return None
    za, zb = split(x)
    ok = best <= tol and abs(za - zb) >= floor
    return za, zb, best, ok


def _batch_refine(f: HarmonicMapping, z1: np.ndarray, z2: np.ndarray, r: float,
                  floor: float, tol: float, iters: int = 14,
                  block: int = 1_500_000):
    """Vectorised damped Gauss-Newton on many candidate pairs at once.

    Works block-wise (the solver's transient arrays are a small multiple of
    the block length) and returns ``(z1, z2, gap, alive)`` where ``alive`` is
    False for pairs that merged below half the separation floor (trivial
    near-diagonal minima).
    """
    if len(z1) > block:
        parts = [
            _batch_refine_block(f, z1[i : i + block], z2[i : i + block], r,
                                floor, tol, iters)
            for i in range(0, len(z1), block)
        ]
        return tuple(np.concatenate(cols) for cols in zip(*parts))
    return _batch_refine_block(f, z1, z2, r, floor, tol, iters)


def _batch_refine_block(f: HarmonicMapping, z1: np.ndarray, z2: np.ndarray,
                        r: float, floor: float, tol: float, iters: int):
    z1 = z1.astype(np.complex128).copy()
    z2 = z2.astype(np.complex128).copy()

    def clamp(zz):
        a = np.abs(zz)
        over = a > r
        if np.any(over):
            zz = np.where(over, zz * (r / np.maximum(a, 1e-300)), zz)
        return zz

    def gap_of(za, zb):
        return np.abs(f(za) - np.asarray(f(zb)))

    gap = gap_of(z1, z2)
    alive = np.ones(len(z1), dtype=bool)
    progress = np.ones(len(z1), dtype=bool)
    for _ in range(iters):
        active = alive & progress & (gap > 0.1 * tol)
        if not np.any(active):
            break
        a1, a2 = z1[active], z2[active]
        R = np.asarray(f(a1)) - np.asarray(f(a2))
        # complex columns of the 2x4 real Jacobian
        c = np.empty((4, len(a1)), dtype=np.complex128)
        for base, (zz, sgn) in enumerate(((a1, 1.0), (a2, -1.0))):
            hp = np.asarray(f.h.deriv(zz))
            gpc = np.conjugate(np.asarray(f.g.deriv(zz)))
            c[2 * base] = sgn * (hp + gpc)
            c[2 * base + 1] = sgn * 1j * (hp - gpc)
        A = np.sum(c.real * c.real, axis=0)
        B = np.sum(c.real * c.imag, axis=0)
        D = np.sum(c.imag * c.imag, axis=0)
        det = A * D - B * B
        det = np.where(np.abs(det) < 1e-300, np.inf, det)
        u1 = (-R.real * D + R.imag * B) / det
        u2 = (R.real * B - R.imag * A) / det
        # least-norm step components J^T u, packed back into complex points
        dx = np.empty((4, len(a1)))
        for k in range(4):
            dx[k] = c[k].real * u1 + c[k].imag * u2
        step1 = dx[0] + 1j * dx[1]
        step2 = dx[2] + 1j * dx[3]
        t = np.ones(len(a1))
        cur_gap = gap[active]
        best1, best2 = a1.copy(), a2.copy()
        improved = np.zeros(len(a1), dtype=bool)
        for _ in range(6):
            todo = ~improved
            if not np.any(todo):
                break
            t1 = clamp(a1[todo] + t[todo] * step1[todo])
            t2 = clamp(a2[todo] + t[todo] * step2[todo])
            g = gap_of(t1, t2)
            better = g < cur_gap[todo]
            idx = np.nonzero(todo)[0][better]
            best1[idx], best2[idx] = t1[better], t2[better]
            cur_gap[idx] = g[better]
            improved[idx] = True
            t[np.nonzero(todo)[0][~better]] *= 0.5
        z1[active], z2[active] = best1, best2
        gap[active] = cur_gap
        # The step and line search are deterministic, so a candidate that
        # failed to improve once can never improve later; retire it.
        progress[np.nonzero(active)[0][~improved]] = False
        merged = np.abs(z1 - z2) < 0.5 * floor
        alive &= ~merged
    return z1, z2, gap, alive


def _polish_symmetric(f: HarmonicMapping, z1: complex, r: float, floor: float,
                      tol: float):
    """Canonicalise a conjugate-pair collision to the minimal-radius tangency.

    For mappings with real coefficients the symmetric collisions form the
    curve ``Im f(rho e^(i theta)) = 0``; its smallest-radius point satisfies
    additionally ``d/dtheta Im f = 0``.  Solving that 2x2 system by damped
    Newton gives a collision witness independent of the scan resolution.
    """

    def imf_and_derivs(rho: float, th: float):
        z = rho * cmath.exp(1j * th)
        hp = complex(f.h.deriv(z))
        gp = complex(f.g.deriv(z))
        hpp = complex(f.h.second(z))
        gpp = complex(f.g.second(z))
        phi = hp - gp
        dphi = hpp - gpp
        imf = complex(f(z)).imag
        d_th = (1j * z * phi).imag
        d_rho = ((z / rho) * phi).imag
        d_thth = (-(z * phi + z * z * dphi)).imag
        d_rhoth = ((1j / rho) * (z * phi + z * z * dphi)).imag
        return imf, d_th, d_rho, d_thth, d_rhoth

    rho = abs(z1)
    th = abs(cmath.phase(z1))
    if not 0.0 < th < math.pi:
        return None
    scale0 = None
    for _ in range(80):
        imf, d_th, d_rho, d_thth, d_rhoth = imf_and_derivs(rho, th)
        G = np.array([imf, d_th])
        size = float(np.hypot(*G))
        if scale0 is None:
            scale0 = max(size, 1.0)
        if size <= 1e-14 * scale0 or size <= 1e-15:
            break
        J = np.array([[d_rho, d_th], [d_rhoth, d_thth]])
        try:
            step = np.linalg.solve(J, -G)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        moved = False
        for _ in range(50):
            nr = min(max(rho + t * step[0], 1e-6), r)
            nt = min(max(th + t * step[1], 1e-9), math.pi - 1e-9)
            n_imf, n_dth, *_ = imf_and_derivs(nr, nt)
            if np.hypot(n_imf, n_dth) < size:
                rho, th = nr, nt
                moved = True
                break
            t *= 0.5
        if not moved:
            return None
    z = rho * cmath.exp(1j * th)
    gap = abs(complex(f(z)) - complex(f(z.conjugate())))
    sep = abs(z - z.conjugate())
    if gap <= tol and sep >= floor:
        return z, z.conjugate(), gap
    return None


def univalence_scan(f: HarmonicMapping, r: float = DEFAULT_SCAN_RADIUS,
                    cells: int = 256,
                    collision_tol: float = DEFAULT_COLLISION_TOL,
                    separation_floor: float = DEFAULT_SEPARATION_FLOOR) -> UnivalenceReport:
    """Scan ``|z| <= r`` for injectivity failures at a given resolution.

    Samples a ``cells x 2*cells`` polar grid, buckets images in a uniform
    spatial hash whose cell size is twice the largest neighbour gap (a
    conservative local-distortion estimate), prunes buckets that cannot
    contain well-separated preimages, and refines surviving candidate pairs
    by damped Gauss-Newton.  Verdicts:

    * ``collision`` -- a refined pair with image gap <= ``collision_tol`` and
      preimage separation >= ``separation_floor`` (re-verified by direct
      evaluation, canonicalised for conjugate-symmetric mappings);
    * ``degenerate-jacobian`` -- a grid point with non-positive Jacobian;
    * ``certified-at-resolution`` -- neither of the above at this resolution.
    """
    if not 0.0 < r < 1.0:
        raise ParameterError(f"scan radius must lie in (0, 1), got {r}")
    if cells < 64:
        raise ParameterError(f"need at least 64 cells, got {cells}")

    n_r, n_a = cells, 2 * cells
    rho = r * np.arange(1, n_r + 1) / n_r
    theta = 2.0 * np.pi * np.arange(n_a) / n_a
    Z = rho[:, None] * np.exp(1j * theta)[None, :]
    W = f(Z)
    J = f.jacobian(Z)

    degenerate_point = None
    bad = np.argwhere(J <= 0.0)
    if bad.size:
        i, j = bad[0]
        degenerate_point = complex(Z[i, j])

    gap_r = np.abs(np.diff(W, axis=0))
    gap_a = np.abs(W - np.roll(W, 1, axis=1))
    cell_size = 2.0 * float(max(gap_r.max(), gap_a.max()))
    if cell_size == 0.0:
        cell_size = 1e-12

    w = W.ravel()
    z = Z.ravel()

    ix = np.floor(w.real / cell_size).astype(np.int64)
    iy = np.floor(w.imag / cell_size).astype(np.int64)
    span = int(iy.max() - iy.min()) + 3
    key = (ix - ix.min()) * span + (iy - iy.min())
    order = np.argsort(key, kind="stable")
    skey = key[order]
    uniq, starts = np.unique(skey, return_index=True)
    counts = np.diff(np.append(starts, len(skey)))

    zs = z[order]
    cent_z = np.add.reduceat(zs, starts) / counts
    rad_z = np.maximum.reduceat(np.abs(zs - np.repeat(cent_z, counts)), starts)

    # candidate cell pairs whose preimages could be separation_floor apart,
    # widest preimage spread first (those are the cells that can hide folds)
    pair_cells: list[tuple[float, int, int]] = []
    for dx, dy in ((0, 0), (0, 1), (1, -1), (1, 0), (1, 1)):
        shifted = uniq + dx * span + dy
        pos = np.searchsorted(uniq, shifted)
        pos_ok = pos < len(uniq)
        match = np.nonzero(pos_ok & (uniq[np.minimum(pos, len(uniq) - 1)] == shifted))[0]
        if dx == 0 and dy == 0:
            a_idx = match
            b_idx = match
        else:
            a_idx = match
            b_idx = pos[match]
        reach = np.abs(cent_z[a_idx] - cent_z[b_idx]) + rad_z[a_idx] + rad_z[b_idx]
        keep = reach >= separation_floor
        pair_cells.extend(
            (-float(rc), int(a), int(b))
            for rc, a, b in zip(reach[keep], a_idx[keep], b_idx[keep]))
    pair_cells.sort()

    # stratify each image cell by preimage boxes finer than the separation
    # floor and keep one representative point per (cell, box): every pair of
    # branches >= floor apart then shows up as a distinct-box representative
    # pair, while same-cell clusters collapse to a handful of points
    n_ring = min(128, max(8, int(math.ceil(r / (0.3 * separation_floor)))))
    n_sect = min(1024, max(16, int(math.ceil(2.0 * math.pi * r / (0.3 * separation_floor)))))
    n_boxes = n_ring * n_sect
    box_diag = math.hypot(r / n_ring, 2.0 * math.pi * r / n_sect)
    sep_pre = max(separation_floor - 2.0 * box_diag, 0.25 * separation_floor)
    ring = np.minimum((np.abs(z) / r * n_ring).astype(np.int64), n_ring - 1)
    sect = ((np.angle(z) + np.pi) / (2.0 * np.pi) * n_sect).astype(np.int64) % n_sect
    box = ring * n_sect + sect
    cell_of_point = np.searchsorted(uniq, key)
    combo = cell_of_point * np.int64(n_boxes) + box
    combo_order = np.argsort(combo, kind="stable")
    sc = combo[combo_order]
    first = np.ones(len(sc), dtype=bool)
    first[1:] = sc[1:] != sc[:-1]
    rep_idx = combo_order[first]
    rep_cell = sc[first] // n_boxes
    cell_starts = np.searchsorted(rep_cell, np.arange(len(uniq) + 1))

    cand_i: list[np.ndarray] = []
    cand_j: list[np.ndarray] = []
    total = 0
    truncated = False
    chunk = 2_000_000  # cap transient allocation per expansion block
    for _, a, b in pair_cells:
        ra = rep_idx[cell_starts[a] : cell_starts[a + 1]]
        rb = rep_idx[cell_starts[b] : cell_starts[b + 1]]
        if len(ra) == 0 or len(rb) == 0:
            continue
        rows_per = max(1, chunk // len(rb))
        for row0 in range(0, len(ra), rows_per):
            sub = ra[row0 : row0 + rows_per]
            pi = np.repeat(sub, len(rb))
            pj = np.tile(rb, len(sub))
            if a == b:
                tri = pi < pj
                pi, pj = pi[tri], pj[tri]
            sep = np.abs(z[pi] - z[pj])
            m = sep >= sep_pre
            if np.any(m):
                cand_i.append(pi[m])
                cand_j.append(pj[m])
                total += int(m.sum())
            if total > 12_000_000:
                truncated = True
                break
        if truncated:
            break

    if is_conjugate_symmetric(f):
        # the grid is mirror-symmetric, so conjugate collision pairs appear
        # as (point, mirrored grid point); seed the best of those directly
        jj = np.arange(n_a)
        mirror_col = (n_a - jj) % n_a
        flat = np.arange(n_r * n_a).reshape(n_r, n_a)
        upper = np.nonzero((Z.imag >= 0.5 * separation_floor).ravel())[0]
        mirrored = flat[:, mirror_col].ravel()[upper]
        mgap = np.abs(w[upper] - w[mirrored])
        best = np.argsort(mgap, kind="stable")[:512]
        cand_i.append(upper[best])
        cand_j.append(mirrored[best])

    refinement_residual = None
    collision = None
    unconfirmed = None
    tested = 0
    if cand_i:
        I = np.concatenate(cand_i)
        Jc = np.concatenate(cand_j)
        gaps = np.abs(w[I] - w[Jc])
        # one candidate per unordered preimage-box pair (smallest image gap)
        lo = np.minimum(box[I], box[Jc])
        hi = np.maximum(box[I], box[Jc])
        pair_key = lo * np.int64(n_boxes) + hi
        by_key = np.lexsort((gaps, pair_key))
        dedup = np.ones(len(by_key), dtype=bool)
        dedup[1:] = pair_key[by_key][1:] != pair_key[by_key][:-1]
        reps = by_key[dedup]
        tested = len(reps)

        rz1, rz2, rgap, alive = _batch_refine(
            f, z[I[reps]], z[Jc[reps]], r, separation_floor, collision_tol)
        rsep = np.abs(rz1 - rz2)
        valid = alive & (rsep >= separation_floor)
        if np.any(valid):
            vi = np.nonzero(valid)[0]
            best = vi[np.lexsort((rz1[vi].imag, rz1[vi].real, rgap[vi]))[0]]
            refinement_residual = float(rgap[best])
            za, zb = complex(rz1[best]), complex(rz2[best])
            if rgap[best] <= collision_tol:
                # scalar polish to squeeze out the last few digits
                got = _refine_pair(f, za, zb, r, separation_floor, collision_tol)
                if got is not None and got[3]:
                    za, zb = got[0], got[1]
                    refinement_residual = float(got[2])
                collision = (za, zb)
            else:
                unconfirmed = (za, zb)

    details = {
        "family": f.label,
        "scan_radius": r,
        "grid": [n_r, n_a],
        "hash_cell_size": cell_size,
        "candidates_refined": tested,
        "truncated": truncated,
        "anchor": "none",
    }
    if collision is None and unconfirmed is not None:
        details["unconfirmed_candidate"] = [unconfirmed[0], unconfirmed[1]]

    if collision is not None:
        za, zb = collision
        if is_conjugate_symmetric(f):
            polished = _polish_symmetric(f, za if za.imag > 0 else zb, r,
                                         separation_floor, collision_tol)
            if polished is not None:
                za, zb, _ = polished
                details["anchor"] = "symmetric-tangency"
        # independent re-verification by direct evaluation
        gap = abs(complex(f(za)) - complex(f(zb)))
        sep = abs(za - zb)
        if gap <= collision_tol and sep >= separation_floor:
            return UnivalenceReport(
                verdict="collision", resolution=cells, z1=za, z2=zb,
                image_gap=gap, refinement_residual=refinement_residual,
                separation=sep, degenerate_point=degenerate_point,
                details=details)

    if degenerate_point is not None:
        return UnivalenceReport(
            verdict="degenerate-jacobian", resolution=cells,
            degenerate_point=degenerate_point,
            refinement_residual=refinement_residual, details=details)

    return UnivalenceReport(
        verdict="certified-at-resolution", resolution=cells,
        refinement_residual=refinement_residual, details=details)


def winding_check(f: HarmonicMapping, r: float, w, M: int = 1024) -> int:
    """Winding number of ``theta -> f(r e^(i theta))`` around ``w``.

    Argument increments are accumulated stepwise; sampling is doubled until
    every step is below ``pi/2``.  Raises :class:`OnCurveError` when ``w``
    comes within ``1e-9`` of the sampled curve.
    """
    if not 0.0 < r < 1.0:
        raise ParameterError(f"radius must lie in (0, 1), got {r}")
    M = max(int(M), 256)
    wc = complex(w)
    while True:
        theta = 2.0 * np.pi * np.arange(M) / M
        c = f(r * np.exp(1j * theta)) - wc
        if float(np.min(np.abs(c))) < 1e-9:
            raise OnCurveError(f"target {wc} lies on the image curve (within 1e-9)")
        steps = np.angle(np.roll(c, -1) / c)
        if float(np.max(np.abs(steps))) < 0.5 * np.pi:
            total = float(np.sum(steps)) / (2.0 * np.pi)
            return int(round(total))
        if M >= 1 << 22:
            raise ConvergenceError("winding sampling exceeded its cap without resolving")
        M *= 2
