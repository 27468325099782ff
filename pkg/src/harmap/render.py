"""Deterministic SVG rendering of harmonic-mapping image domains.

Renders the images of concentric parameter circles and radial rays under a
mapping as one ``<polyline>`` per curve, with adaptive sampling near high
distortion (cusps), rectangle clipping to the viewport, and stable 9
significant-digit coordinate formatting so identical scene specifications
yield identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .mappings import HarmonicMapping, is_conjugate_symmetric

#: emitted document is a square of this many pixels
CANVAS_PX = 720
#: adaptive sampling splits segments longer than viewport-width / GAP_DENOM
GAP_DENOM = 200
#: maximum midpoint-insertion passes per curve
MAX_REFINE_PASSES = 12
#: hard cap on points per curve (safety valve for pathological distortion)
MAX_CURVE_POINTS = 40_000


@dataclass(frozen=True)
class SceneSpec:
    """Declarative description of one rendered scene.

    ``center``/``half_width`` of ``None`` select an automatic square
    viewport containing every sampled image point with a 5% margin.
    Resolved values are embedded in the output metadata, so a fixed spec
    always produces identical bytes.
    """

    family: str
    radius: float = 0.999
    circles: int = 12
    rays: int = 24
    samples_per_curve: int = 256
    center: complex | None = None
    half_width: float | None = None
    stroke_width: float | None = None
    grid_color: str = "#3a6ea5"
    boundary_color: str = "#b22222"
    background: str = "#ffffff"

    def __post_init__(self):
        if not 0.0 < self.radius < 1.0:
            raise ParameterError(f"scene radius must lie in (0, 1), got {self.radius}")
        if self.samples_per_curve < 128:
            raise ParameterError(
                f"samples_per_curve must be >= 128, got {self.samples_per_curve}")
        if self.circles < 0 or self.rays < 0 or self.circles + self.rays == 0:
            raise ParameterError("scene needs at least one circle or ray")
        if self.half_width is not None and not self.half_width > 0.0:
            raise ParameterError(f"viewport half-width must be > 0, got {self.half_width}")
        if self.stroke_width is not None and not self.stroke_width > 0.0:
            raise ParameterError(f"stroke width must be > 0, got {self.stroke_width}")

    def to_metadata(self, center: complex, half_width: float,
                    stroke_width: float) -> dict:
        return {
            "family": self.family,
            "radius": self.radius,
            "circles": self.circles,
            "rays": self.rays,
            "samples_per_curve": self.samples_per_curve,
            "center": [center.real, center.imag],
            "half_width": half_width,
            "stroke_width": stroke_width,
            "grid_color": self.grid_color,
            "boundary_color": self.boundary_color,
            "background": self.background,
        }


def overview_scene(family: str, radius: float = 0.999) -> SceneSpec:
    """Whole-image scene: 12 circles, 24 rays, auto-fit viewport."""
    return SceneSpec(family=family, radius=radius, circles=12, rays=24)


def zoom_scene(family: str, center: complex, half_width: float = 0.05,
               radius: float = 0.999) -> SceneSpec:
    """Close-up scene around ``center`` (e.g. a collision image point)."""
    return SceneSpec(family=family, radius=radius, circles=12, rays=24,
                     center=center, half_width=half_width)


# -- sampling -----------------------------------------------------------------


def _eval_curve(f: HarmonicMapping, z: np.ndarray, tag: str) -> np.ndarray:
    try:
        return np.asarray(f(z), dtype=np.complex128)
    except DomainError as exc:
        worst = z[np.argmax(np.abs(z))]
        raise DomainError(f"rendering {tag}: {exc} (parameter point {worst})") from exc


def _refine_params(f: HarmonicMapping, z_of_t, t: np.ndarray, tag: str,
                   max_gap: float | None) -> np.ndarray:
    """Insert parameter midpoints until image gaps fall below ``max_gap``."""
    if max_gap is None:
        return t
    for _ in range(MAX_REFINE_PASSES):
        w = _eval_curve(f, z_of_t(t), tag)
        gaps = np.abs(np.diff(w))
        wide = np.nonzero(gaps > max_gap)[0]
        if wide.size == 0 or t.size + wide.size > MAX_CURVE_POINTS:
            break
        t = np.insert(t, wide + 1, 0.5 * (t[wide] + t[wide + 1]))
    return t


@dataclass(frozen=True)
class _Curve:
    tag: str
    color: str
    width_scale: float  # multiplies the resolved stroke width
    points: np.ndarray  # complex image points


def _circle_points(f: HarmonicMapping, rho: float, n0: int, tag: str,
                   max_gap: float | None, mirror: bool) -> np.ndarray:
    if mirror:
        # sample the upper half-circle and reflect: the emitted point set is
        # then exactly invariant under y -> -y for symmetric mappings
        theta = np.linspace(0.0, math.pi, max(n0 // 2 + 1, 65))
        theta = _refine_params(f, lambda t: rho * np.exp(1j * t), theta, tag, max_gap)
        upper = rho * np.exp(1j * theta)
        z = np.concatenate([upper, np.conjugate(upper[-2:0:-1]), upper[:1]])
    else:
        theta = np.linspace(0.0, 2.0 * math.pi, max(n0, 129) + 1)
        theta = _refine_params(f, lambda t: rho * np.exp(1j * t), theta, tag, max_gap)
        z = rho * np.exp(1j * theta)
        z[-1] = z[0]
    return _eval_curve(f, z, tag)


def _ray_points(f: HarmonicMapping, angle: float, r: float, n0: int, tag: str,
                max_gap: float | None) -> np.ndarray:
    t = np.linspace(0.0, r, max(n0, 129))
    direction = complex(math.cos(angle), math.sin(angle))
    t = _refine_params(f, lambda s: s * direction, t, tag, max_gap)
    return _eval_curve(f, t * direction, tag)


def _scene_curves(f: HarmonicMapping, spec: SceneSpec,
                  max_gap: float | None) -> list[_Curve]:
    mirror = is_conjugate_symmetric(f)
    n0 = spec.samples_per_curve
    curves: list[_Curve] = []
    half = spec.rays // 2
    for k in range(spec.rays):
        tag = f"ray-{k}"
        if mirror and k > half:
            # mirror of an already-sampled ray: reuse its reflected points
            src = next(c for c in curves if c.tag == f"ray-{spec.rays - k}")
            pts = np.conjugate(src.points)
        else:
            pts = _ray_points(f, 2.0 * math.pi * k / spec.rays, spec.radius,
                              n0, tag, max_gap)
        curves.append(_Curve(tag, spec.grid_color, 1.0, pts))
    for j in range(1, spec.circles + 1):
        rho = spec.radius * j / spec.circles
        boundary = j == spec.circles
        tag = "boundary" if boundary else f"circle-{j}"
        pts = _circle_points(f, rho, n0, tag, max_gap, mirror)
        curves.append(_Curve(tag, spec.boundary_color if boundary else spec.grid_color,
                             1.8 if boundary else 1.0, pts))
    return curves


# -- viewport and clipping ----------------------------------------------------


def _resolve_viewport(spec: SceneSpec, curves: list[_Curve]) -> tuple[complex, float]:
    if spec.center is not None and spec.half_width is not None:
        return complex(spec.center), float(spec.half_width)
    allpts = np.concatenate([c.points for c in curves])
    xs, ys = allpts.real, allpts.imag
    cx = 0.5 * (xs.min() + xs.max())
    cy = 0.5 * (ys.min() + ys.max())
    hw = 0.5 * max(xs.max() - xs.min(), ys.max() - ys.min()) * 1.05
    hw = max(hw, 1e-9)
    center = complex(cx, cy) if spec.center is None else complex(spec.center)
    half = hw if spec.half_width is None else float(spec.half_width)
    return center, half


def _clip_segment(x0, y0, x1, y1, lox, hix, loy, hiy):
    """Liang-Barsky: parametric span of the segment inside the box, or None."""
    dx, dy = x1 - x0, y1 - y0
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x0 - lox), (dx, hix - x0), (-dy, y0 - loy), (dy, hiy - y0)):
        if p == 0.0:
            if q < 0.0:
                return None
            continue
        t = q / p
        if p < 0.0:
            if t > t1:
                return None
            if t > t0:
                t0 = t
        else:
            if t < t0:
                return None
            if t < t1:
                t1 = t
    return t0, t1


def _clip_polyline(points: np.ndarray, center: complex, hw: float) -> list[list[tuple[float, float]]]:
    """Split a polyline into maximal runs inside the square viewport."""
    lox, hix = center.real - hw, center.real + hw
    loy, hiy = center.imag - hw, center.imag + hw
    runs: list[list[tuple[float, float]]] = []
    run: list[tuple[float, float]] = []
    xs, ys = points.real, points.imag
    for i in range(len(points) - 1):
        got = _clip_segment(xs[i], ys[i], xs[i + 1], ys[i + 1], lox, hix, loy, hiy)
        if got is None:
            if len(run) >= 2:
                runs.append(run)
            run = []
            continue
        t0, t1 = got
        dx, dy = xs[i + 1] - xs[i], ys[i + 1] - ys[i]
        # reuse endpoint floats verbatim at t=0/1 so adjacent segments chain
        a = (xs[i], ys[i]) if t0 == 0.0 else (xs[i] + t0 * dx, ys[i] + t0 * dy)
        b = (xs[i + 1], ys[i + 1]) if t1 == 1.0 else (xs[i] + t1 * dx, ys[i] + t1 * dy)
        if not run or run[-1] != a:
            if len(run) >= 2:
                runs.append(run)
            run = [a]
        run.append(b)
        if t1 < 1.0:
            if len(run) >= 2:
                runs.append(run)
            run = []
    if len(run) >= 2:
        runs.append(run)
    return runs


# -- document assembly --------------------------------------------------------


def _fmt(x: float) -> str:
    s = format(float(x), ".9g")
    if s == "-0" or s == "-0.0":
        return "0"
    return s


def _points_attr(run: list[tuple[float, float]]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in run)


def _assemble(spec: SceneSpec, curves: list[_Curve], center: complex,
              hw: float) -> str:
    stroke = spec.stroke_width if spec.stroke_width is not None else hw / 240.0
    meta = json.dumps(spec.to_metadata(center, hw, stroke), sort_keys=True,
                      separators=(", ", ": "))
    vb = (f"{_fmt(center.real - hw)} {_fmt(-(center.imag + hw))} "
          f"{_fmt(2 * hw)} {_fmt(2 * hw)}")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{CANVAS_PX}" height="{CANVAS_PX}" viewBox="{vb}">',
        f"<!-- scene: {meta} -->",
        f'<rect x="{_fmt(center.real - hw)}" y="{_fmt(-(center.imag + hw))}" '
        f'width="{_fmt(2 * hw)}" height="{_fmt(2 * hw)}" '
        f'fill="{spec.background}"/>',
        '<g transform="scale(1,-1)" fill="none" stroke-linecap="round" '
        'stroke-linejoin="round">',
    ]
    for c in curves:
        for run in _clip_polyline(c.points, center, hw):
            lines.append(
                f'<polyline class="{c.tag}" stroke="{c.color}" '
                f'stroke-width="{_fmt(stroke * c.width_scale)}" '
                f'points="{_points_attr(run)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_image_domain(spec: SceneSpec, f: HarmonicMapping) -> str:
    """SVG of the image of ``|z| <= radius`` under ``f`` via parameter curves.

    Draws the images of ``circles`` concentric circles (the outermost stroked
    distinctly as the near-boundary curve) and ``rays`` radial segments,
    adaptively refined until consecutive points are closer than 1/200 of the
    viewport width, clipped to the viewport.
    """
    base = _scene_curves(f, spec, max_gap=None)
    center, hw = _resolve_viewport(spec, base)
    curves = _scene_curves(f, spec, max_gap=2.0 * hw / GAP_DENOM)
    return _assemble(spec, curves, center, hw)


def render_boundary_curve(f: HarmonicMapping, r: float, M: int = 1024,
                          viewport: tuple[complex, float] | None = None) -> str:
    """SVG of the closed curve ``theta -> f(r e^(i theta))`` alone.

    Uniform sampling with ``M`` steps (at least 256); with the default
    auto-fitted viewport the output is a single closed polyline.
    """
    if not 0.0 < r < 1.0:
        raise ParameterError(f"radius must lie in (0, 1), got {r}")
    if M < 256:
        raise ParameterError(f"boundary sampling needs M >= 256, got {M}")
    theta = np.linspace(0.0, 2.0 * math.pi, int(M) + 1)
    z = r * np.exp(1j * theta)
    z[-1] = z[0]
    pts = _eval_curve(f, z, "boundary")
    curve = _Curve("boundary", "#b22222", 1.8, pts)
    spec = SceneSpec(family=f.label, radius=r, circles=1, rays=0,
                     samples_per_curve=max(int(M), 128),
                     center=None if viewport is None else complex(viewport[0]),
                     half_width=None if viewport is None else float(viewport[1]))
    center, hw = _resolve_viewport(spec, [curve])
    return _assemble(spec, [curve], center, hw)
