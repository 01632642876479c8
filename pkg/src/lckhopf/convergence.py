"""Collapse of the 3-fold metrics onto S^3 x S^1 as epsilon -> 0.

On the chart U_00 of S^3 x S^3 (coordinates x_0..x_5, ``w_2 = x_2 + i x_5``)
the metric at epsilon = 0 degenerates along

    alpha = -conj(w_2) / (2 pi) d/dw_0 + B d/dw_2,      B = 1 + |w_2|^2.

Its real and J-rotated real parts span a plane of g_eps-length
``eps / sqrt(2)``.  Flowing along that plane reaches the slice ``w_2 = 0``
(a copy of S^3 x S^1) in bounded time, which bounds the Gromov-Hausdorff
distance together with the pointwise estimate ``|g_eps - g_0|^2 = eps^4``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import ChartPoint, ManifoldSpec, calabi_eckmann, hopf
from .errors import StepTooLarge
from .metrics import hermitian_matrix, metric_norm_sq, real_metric_value


def _complex_to_real(xi: np.ndarray) -> np.ndarray:
    """Real tangent vector paired with the (1,0) vector xi under the package's real metric.

    The real metric is 1/2 [[Re G, -Im G], [Im G, Re G]], which equals
    1/2 Re(xi^T G conj(xi)) for the identification (a, b) <-> xi = a - i b.
    """
    return np.concatenate([xi.real, -xi.imag])


@dataclass(frozen=True, eq=False)
class DegenerateFrame:
    alpha: np.ndarray
    zeta1: np.ndarray
    zeta2: np.ndarray
    B: float


def degenerate_frame(p: ChartPoint) -> DegenerateFrame:
    """alpha and the real pair zeta1, zeta2 paired with alpha and -i alpha."""
    if p.complex_dim != 3:
        raise ValueError("expects a point of the 3-fold chart U_00")
    w2 = p.w[2]
    B = 1.0 + abs(w2) ** 2
    alpha = np.array([-np.conj(w2) / (2 * np.pi), 0.0, B], dtype=complex)
    return DegenerateFrame(alpha, _complex_to_real(alpha), _complex_to_real(-1j * alpha), float(B))


def zeta_pair_closed_form(p: ChartPoint) -> tuple[np.ndarray, np.ndarray]:
    """zeta1 = B dx2 - x2/(2 pi) dx0 - x5/(2 pi) dx3 and zeta2 = B dx5 + x5/(2 pi) dx0 - x2/(2 pi) dx3."""
    x = p.coords
    x2, x5 = x[2], x[5]
    B = 1.0 + x2 * x2 + x5 * x5
    z1 = np.zeros(6)
    z2 = np.zeros(6)
    z1[2], z1[0], z1[3] = B, -x2 / (2 * np.pi), -x5 / (2 * np.pi)
    z2[5], z2[0], z2[3] = B, x5 / (2 * np.pi), -x2 / (2 * np.pi)
    return z1, z2


@dataclass(frozen=True, eq=False)
class CollapseCurveState:
    t: float
    coords: np.ndarray
    polar: tuple[float, float]
    ab: tuple[float, float]
    nu: float
    a1: float


def collapse_start(coords) -> CollapseCurveState:
    """Initial state with (a, b) chosen so that r decreases to zero: sin(theta(0) + nu) = -1."""
    x = np.asarray(coords, dtype=float)
    if x.shape != (6,):
        raise ValueError("3-fold coordinates have six entries")
    r = float(np.hypot(x[2], x[5]))
    theta = float(np.arctan2(x[5], x[2]))
    nu = -np.pi / 2 - theta
    a, b = float(np.sin(nu)), float(np.cos(nu))
    return CollapseCurveState(0.0, x.copy(), (r, theta), (a, b), float(nu), float(np.arctan(r)))


def collapse_rhs(x: np.ndarray, ab: tuple[float, float]) -> np.ndarray:
    """Velocity a zeta1 + b zeta2 at x."""
    a, b = ab
    x2, x5 = x[2], x[5]
    B = 1.0 + x2 * x2 + x5 * x5
    v = np.zeros(6)
    v[2] = a * B
    v[5] = b * B
    v[0] = (b * x5 - a * x2) / (2 * np.pi)
    v[3] = -(a * x5 + b * x2) / (2 * np.pi)
    return v


def closed_form_state(start: CollapseCurveState, t) -> np.ndarray:
    """Exact solution for the inward choice of (a, b).

    r = tan(a1 - t) with theta fixed; x_0 and x_3 move by cos(2 theta) L / (2 pi)
    and sin(2 theta) L / (2 pi), where L(t) = log cos(a1 - t) - log cos(a1)
    is the integral of r.  x_1 and x_4 do not move.
    """
    t = np.asarray(t, dtype=float)
    r = np.tan(start.a1 - t)
    theta = start.polar[1]
    L = np.log(np.cos(start.a1 - t)) - np.log(np.cos(start.a1))
    x = np.broadcast_to(start.coords, t.shape + (6,)).copy()
    x[..., 2] = r * np.cos(theta)
    x[..., 5] = r * np.sin(theta)
    x[..., 0] = start.coords[0] + np.cos(2 * theta) * L / (2 * np.pi)
    x[..., 3] = start.coords[3] + np.sin(2 * theta) * L / (2 * np.pi)
    return x


@dataclass(frozen=True, eq=False)
class Trajectory:
    start: CollapseCurveState
    t: np.ndarray
    x: np.ndarray

    def closed_form_error(self) -> float:
        return float(np.abs(self.x - closed_form_state(self.start, self.t)).max())

    def end_radius(self) -> float:
        return float(np.hypot(self.x[-1, 2], self.x[-1, 5]))


_STEP_LIMIT = 0.05
_MAX_HALVINGS = 20


def _rk4_step(x: np.ndarray, h: float, ab) -> np.ndarray:
    k1 = collapse_rhs(x, ab)
    k2 = collapse_rhs(x + 0.5 * h * k1, ab)
    k3 = collapse_rhs(x + 0.5 * h * k2, ab)
    k4 = collapse_rhs(x + h * k3, ab)
    return x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _advance(x: np.ndarray, h: float, ab, depth: int) -> np.ndarray:
    """One RK4 step, halved recursively while h (1 + r^2) is too large at either end."""
    y = _rk4_step(x, h, ab)
    r2 = max(x[2] ** 2 + x[5] ** 2, y[2] ** 2 + y[5] ** 2)
    if h * (1 + r2) <= _STEP_LIMIT and np.all(np.isfinite(y)):
        return y
    if depth == _MAX_HALVINGS:
        raise StepTooLarge(f"step halving failed near r = {np.sqrt(x[2] ** 2 + x[5] ** 2):.3g}")
    return _advance(_advance(x, h / 2, ab, depth + 1), h / 2, ab, depth + 1)


def integrate_collapse_curve(start: CollapseCurveState, t_end: float | None = None,
                             steps: int = 10_000) -> Trajectory:
    """Classical fourth-order Runge-Kutta on [0, t_end] (default t_end = a1, where w_2 = 0).

    Output is on a uniform grid of ``steps`` intervals.  The radial equation
    dr/dt = -(1 + r^2) blows up at t = a1 + pi/2, so each interval is halved
    until h (1 + r^2) <= 0.05 at both of its ends.  StepTooLarge is raised if
    the window reaches the pole or the halving limit is hit.
    """
    a1 = start.a1
    t_end = a1 if t_end is None else float(t_end)
    if steps < 1 or t_end <= 0:
        raise ValueError("need a positive window and at least one step")
    if t_end >= a1 + np.pi / 2:
        raise StepTooLarge("integration window reaches the pole of tan")
    h = t_end / steps
    ab = start.ab
    x = start.coords.copy()
    xs = np.empty((steps + 1, 6))
    xs[0] = x
    for i in range(steps):
        x = _advance(x, h, ab, 0)
        xs[i + 1] = x
    return Trajectory(start, np.linspace(0.0, t_end, steps + 1), xs)


def speed(traj: Trajectory, spec: ManifoldSpec) -> np.ndarray:
    g = real_metric_value(traj.x, spec)
    v = np.array([collapse_rhs(x, traj.start.ab) for x in traj.x])
    return np.sqrt(np.einsum("ti,tij,tj->t", v, g, v))


def curve_length(traj: Trajectory, spec: ManifoldSpec) -> float:
    """Length of the trajectory under the 3-fold metric (trapezoid rule on the sampled speed)."""
    s = speed(traj, spec)
    return float(np.sum(0.5 * (s[1:] + s[:-1]) * np.diff(traj.t)))


def c0_values(points, epsilon: float) -> np.ndarray:
    """|g_eps - g_0|^2 measured in g_0 on S^3 x S^1, one value per point."""
    s_eps, s_0 = hopf(2, epsilon), hopf(2, 0.0)
    out = []
    for p in points:
        G0 = hermitian_matrix(p.coords, s_0)
        D = hermitian_matrix(p.coords, s_eps) - G0
        out.append(metric_norm_sq(D, G0))
    return np.array(out)


def c0_distance_check(points, epsilon: float) -> float:
    return float(np.max(c0_values(points, epsilon)))


@dataclass(frozen=True, eq=False)
class GHBound:
    epsilons: np.ndarray
    lengths: np.ndarray
    c0: np.ndarray
    constant: float
    bounds: np.ndarray


def gh_bound(epsilons, starts, surface_points, steps: int = 4000) -> GHBound:
    """Upper bound  max length + sqrt(max c0)  per epsilon, and the measured C = max length / eps."""
    epsilons = np.asarray(epsilons, dtype=float)
    lengths, c0s = [], []
    for eps in epsilons:
        spec = calabi_eckmann(eps)
        lengths.append(max(curve_length(integrate_collapse_curve(collapse_start(x), steps=steps), spec)
                           for x in starts))
        c0s.append(c0_distance_check(surface_points, eps))
    lengths = np.array(lengths)
    c0s = np.array(c0s)
    pos = epsilons > 0
    C = float(np.max(lengths[pos] / epsilons[pos])) if pos.any() else 0.0
    return GHBound(epsilons, lengths, c0s, C, lengths + np.sqrt(c0s))
