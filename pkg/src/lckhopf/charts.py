"""Coordinate charts on S^(2n-1) x S^1 and on the Calabi-Eckmann 3-fold S^3 x S^3.

Real coordinates follow one rule for every family: with ``m`` the complex
dimension, ``w_k = x_k + i x_{m+k}``.  ``w_0`` is the fiber (torus) coordinate,
defined modulo the lattice ``{1, i}``; the remaining ``w_k`` are base
coordinates.  For the 3-fold this gives ``w_0 = x_0 + i x_3``,
``w_1 = x_1 + i x_4`` and ``w_2 = x_2 + i x_5``.

A chart is labelled ``(alpha, beta)``: ``alpha`` picks the non-vanishing
coordinate of the first sphere factor, ``beta`` that of the second (always 0
for the Hopf family, whose second factor is S^1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import OutsideChart, OutsideOverlap

# |z_alpha| below this counts as "outside the chart"
_CHART_EPS = 1e-14


class Family(enum.Enum):
    HOPF_SURFACE = "hopf-surface"
    CALABI_ECKMANN = "calabi-eckmann-3fold"
    HOPF_GENERAL = "hopf-general"


@dataclass(frozen=True)
class ManifoldSpec:
    """Which manifold, which metric in the family.

    ``n`` is the complex dimension of the ambient space of the first sphere
    factor (S^(2n-1) lives in C^n).  ``tamper`` adds a constant to the
    (1,1) entry of the Hermitian matrix; it exists only so that the
    verification suite can be shown to fail on a corrupted metric.
    """

    family: Family = Family.HOPF_SURFACE
    n: int = 2
    epsilon: float = 0.0
    tamper: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.family is Family.HOPF_GENERAL and self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.family in (Family.HOPF_SURFACE, Family.CALABI_ECKMANN) and self.n != 2:
            raise ValueError(f"{self.family.value} requires n = 2, got {self.n}")

    @property
    def complex_dim(self) -> int:
        if self.family is Family.CALABI_ECKMANN:
            return 3
        return self.n

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    @property
    def fiber_axes(self) -> tuple[int, int]:
        """Real indices of the two fiber directions (Re w_0, Im w_0)."""
        return 0, self.complex_dim

    @property
    def base_axes(self) -> tuple[int, ...]:
        m = self.complex_dim
        return tuple(range(1, m)) + tuple(range(m + 1, 2 * m))

    @property
    def is_hopf(self) -> bool:
        return self.family is not Family.CALABI_ECKMANN

    def with_epsilon(self, epsilon: float) -> "ManifoldSpec":
        return ManifoldSpec(self.family, self.n, epsilon, self.tamper)


def hopf(n: int = 2, epsilon: float = 0.0) -> ManifoldSpec:
    """S^(2n-1) x S^1 with the metric g_epsilon."""
    family = Family.HOPF_SURFACE if n == 2 else Family.HOPF_GENERAL
    return ManifoldSpec(family, n, epsilon)


def calabi_eckmann(epsilon: float = 0.0) -> ManifoldSpec:
    """S^3 x S^3 with the (possibly degenerate) metric induced from C^2 x eps^2 C^2."""
    return ManifoldSpec(Family.CALABI_ECKMANN, 2, epsilon)


@dataclass(frozen=True, eq=False)
class ChartPoint:
    coords: np.ndarray
    chart: tuple[int, int] = (0, 0)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1 or c.size % 2 or c.size < 4:
            raise ValueError(f"coords must be a flat vector of even length >= 4, got shape {c.shape}")
        object.__setattr__(self, "coords", c)

    @property
    def complex_dim(self) -> int:
        return self.coords.size // 2

    @property
    def w(self) -> np.ndarray:
        m = self.complex_dim
        return self.coords[:m] + 1j * self.coords[m:]

    @property
    def fiber(self) -> complex:
        return complex(self.w[0])

    @property
    def base(self) -> np.ndarray:
        return self.w[1:]

    def reduced(self) -> "ChartPoint":
        """Same point with the fiber coordinate moved into [0, 1)^2."""
        c = self.coords.copy()
        m = self.complex_dim
        c[0] %= 1.0
        c[m] %= 1.0
        return ChartPoint(c, self.chart)


@dataclass(frozen=True, eq=False)
class AmbientPoint:
    z: np.ndarray
    zprime: np.ndarray = field(default_factory=lambda: np.ones(1, dtype=complex))

    def sphere_residual(self) -> float:
        r1 = abs(np.vdot(self.z, self.z).real - 1.0)
        r2 = abs(np.vdot(self.zprime, self.zprime).real - 1.0)
        return max(r1, r2)


def from_complex(w, chart=(0, 0)) -> ChartPoint:
    w = np.asarray(w, dtype=complex)
    return ChartPoint(np.concatenate([w.real, w.imag]), tuple(chart))


def _check_chart(chart, spec: ManifoldSpec):
    alpha, beta = chart
    nz = spec.n
    if not 0 <= alpha < nz:
        raise ValueError(f"chart index alpha={alpha} out of range for n={nz}")
    nprime = 1 if spec.is_hopf else 2
    if not 0 <= beta < nprime:
        raise ValueError(f"chart index beta={beta} out of range")


def _others(alpha: int, size: int) -> list[int]:
    return [j for j in range(size) if j != alpha]


def embed(p: ChartPoint, spec: ManifoldSpec) -> AmbientPoint:
    """Map chart coordinates to the ambient sphere product."""
    _check_chart(p.chart, spec)
    if p.complex_dim != spec.complex_dim:
        raise ValueError(f"point has complex dimension {p.complex_dim}, spec expects {spec.complex_dim}")
    alpha, beta = p.chart
    w = p.w
    w0 = w[0]
    if spec.is_hopf:
        wb = w[1:]
        A = 1.0 + np.sum(np.abs(wb) ** 2)
        z = np.empty(spec.n, dtype=complex)
        za = A ** -0.5 * np.exp(1j * np.pi * (w0 + np.conj(w0)))
        z[alpha] = za
        z[_others(alpha, spec.n)] = za * wb
        zp = np.array([np.exp(np.pi * (w0 - np.conj(w0)) - 0.5j * np.log(A))])
        return AmbientPoint(z, zp)

    w1, w2 = w[1], w[2]
    A = 1.0 + abs(w1) ** 2
    B = 1.0 + abs(w2) ** 2
    za = A ** -0.5 * np.exp(1j * (np.pi * (w0 + np.conj(w0)) + 0.5 * np.log(B)))
    zb = B ** -0.5 * np.exp(np.pi * (w0 - np.conj(w0)) - 0.5j * np.log(A))
    z = np.empty(2, dtype=complex)
    z[alpha], z[1 - alpha] = za, za * w1
    zp = np.empty(2, dtype=complex)
    zp[beta], zp[1 - beta] = zb, zb * w2
    return AmbientPoint(z, zp)


def chart_coords(q: AmbientPoint, chart, spec: ManifoldSpec) -> ChartPoint:
    """Inverse of :func:`embed`: coordinates of an ambient point in ``chart``.

    The fiber coordinate is returned reduced into [0, 1)^2.
    """
    chart = tuple(chart)
    _check_chart(chart, spec)
    alpha, beta = chart
    za = q.z[alpha]
    zb = q.zprime[beta]
    if abs(za) < _CHART_EPS or abs(zb) < _CHART_EPS:
        raise OutsideChart(f"point lies outside chart {chart}")
    base = [q.z[j] / za for j in _others(alpha, q.z.size)]
    base += [q.zprime[k] / zb for k in _others(beta, q.zprime.size)]
    # t = (log z_alpha + i log z'_beta) / (2 pi i), principal branches
    t = (np.log(za) + 1j * np.log(zb)) / (2j * np.pi)
    t = complex(t.real % 1.0, t.imag % 1.0)
    return from_complex([t] + base, chart)


def chart_transition(p: ChartPoint, target, spec: ManifoldSpec) -> ChartPoint:
    q = embed(p, spec)
    try:
        return chart_coords(q, target, spec)
    except OutsideChart as exc:
        raise OutsideOverlap(f"point of chart {p.chart} is not in chart {tuple(target)}") from exc


def fiber_distance(t1: complex, t2: complex) -> float:
    """Distance between two fiber coordinates on the square torus C/{1, i}."""
    d = complex(t1) - complex(t2)
    dr = (d.real + 0.5) % 1.0 - 0.5
    di = (d.imag + 0.5) % 1.0 - 0.5
    return float(np.hypot(dr, di))


def point_distance(p: ChartPoint, q: ChartPoint) -> float:
    """Coordinate distance of two points in the same chart, fiber taken mod the lattice."""
    if p.chart != q.chart:
        raise ValueError("points are in different charts")
    return max(fiber_distance(p.fiber, q.fiber), float(np.max(np.abs(p.base - q.base), initial=0.0)))


def sample_points(rng: np.random.Generator, spec: ManifoldSpec, count: int,
                  radius: float = 2.0, chart=(0, 0)) -> list[ChartPoint]:
    """Random chart points: fiber uniform on the unit torus, base coordinates uniform in [-radius, radius]."""
    m = spec.complex_dim
    out = []
    for _ in range(count):
        c = np.empty(2 * m)
        c[0], c[m] = rng.random(2)
        idx = list(spec.base_axes)
        c[idx] = rng.uniform(-radius, radius, size=len(idx))
        out.append(ChartPoint(c, tuple(chart)))
    return out
