"""Hermitian metrics g_eps on S^(2n-1) x S^1 and on the 3-fold, with exact partials.

The matrix entries are written once, in :func:`_entries`, against a tiny
arithmetic interface (``+``, ``*`` by scalars and by each other,
``conjugate``).  The same code is evaluated on

* Python complex numbers (plain evaluation),
* numpy arrays (batched evaluation over many points),
* :class:`Jet` objects, which carry value, gradient and Hessian through the
  product rule.  This gives exact first and second partials of every entry
  without finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .charts import ChartPoint, Family, ManifoldSpec
from .errors import SingularMetric


class Jet:
    """Second-order jet of a complex function of the real chart coordinates."""

    __slots__ = ("v", "g", "h")

    def __init__(self, v, g, h):
        self.v = v
        self.g = g
        self.h = h

    @classmethod
    def coordinate(cls, k: int, x: np.ndarray) -> "Jet":
        d = x.size
        g = np.zeros(d, dtype=complex)
        g[k] = 1.0
        return cls(complex(x[k]), g, np.zeros((d, d), dtype=complex))

    @classmethod
    def constant(cls, c, d: int) -> "Jet":
        return cls(complex(c), np.zeros(d, dtype=complex), np.zeros((d, d), dtype=complex))

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.v + other.v, self.g + other.g, self.h + other.h)
        return Jet(self.v + other, self.g, self.h)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.g, -self.h)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            gg = np.outer(self.g, other.g)
            return Jet(self.v * other.v,
                       self.v * other.g + other.v * self.g,
                       self.v * other.h + other.v * self.h + gg + gg.T)
        return Jet(self.v * other, self.g * other, self.h * other)

    __rmul__ = __mul__

    def conjugate(self):
        return Jet(np.conj(self.v), np.conj(self.g), np.conj(self.h))

    def reciprocal(self):
        inv = 1.0 / self.v
        return Jet(inv, -self.g * inv ** 2,
                   2.0 * np.outer(self.g, self.g) * inv ** 3 - self.h * inv ** 2)


def _reciprocal(a):
    if isinstance(a, Jet):
        return a.reciprocal()
    return 1.0 / a


def _entries(w, spec: ManifoldSpec):
    """Hermitian matrix entries G[i][j] = g(d/dw_i, d/dw_j) as a nested list.

    ``w`` is a list of complex-like objects (w_0, ..., w_{m-1}).
    """
    eps2 = spec.epsilon ** 2
    c = 1.0 + eps2
    pi = np.pi
    if spec.family is Family.CALABI_ECKMANN:
        w1, w2 = w[1], w[2]
        w1b, w2b = w1.conjugate(), w2.conjugate()
        iA = _reciprocal(1.0 + w1 * w1b)
        iB = _reciprocal(1.0 + w2 * w2b)
        iA2, iB2 = iA * iA, iB * iB
        g01 = (c * 0.5j * pi) * (w1 * iA)
        g02 = (c * 0.5 * pi) * (w2 * iB)
        g11 = 0.25 * iA + 0.75 * iA2 + (0.25 * eps2) * (w1 * w1b * iA2)
        g12 = (-0.25j * c) * (w1b * w2 * iA * iB)
        g22 = 0.25 * (w2 * w2b * iB2) + (0.25 * eps2) * iB + (0.75 * eps2) * iB2
        g00 = c * pi ** 2 + 0.0 * g11
        G = [[g00, g01, g02],
             [g01.conjugate(), g11, g12],
             [g02.conjugate(), g12.conjugate(), g22]]
    else:
        m = len(w)
        base = w[1:]
        bar = [b.conjugate() for b in base]
        A = 1.0
        for b, bb in zip(base, bar):
            A = A + b * bb
        iA = _reciprocal(A)
        iA2 = iA * iA
        k = 0.25 * (eps2 - 3.0)
        G = [[None] * m for _ in range(m)]
        G[0][0] = c * pi ** 2 + 0.0 * iA
        for i in range(1, m):
            G[0][i] = (c * 0.5j * pi) * (base[i - 1] * iA)
            G[i][0] = G[0][i].conjugate()
            for j in range(i, m):
                e = k * (bar[i - 1] * base[j - 1] * iA2)
                if i == j:
                    e = e + iA
                G[i][j] = e
                if j != i:
                    G[j][i] = e.conjugate()
    if spec.tamper:
        G[1][1] = G[1][1] + spec.tamper
    return G


def _is_degenerate(spec: ManifoldSpec) -> bool:
    return spec.family is Family.CALABI_ECKMANN and spec.epsilon == 0.0


def _complex_coords(x: np.ndarray):
    m = x.shape[-1] // 2
    return [x[..., k] + 1j * x[..., m + k] for k in range(m)]


def hermitian_matrix(x, spec: ManifoldSpec) -> np.ndarray:
    """Complex matrix G for one point (shape (m, m)) or a batch (shape (..., m, m))."""
    x = np.asarray(x, dtype=float)
    w = _complex_coords(x)
    G = _entries(w, spec)
    return np.moveaxis(np.array([[np.asarray(e, dtype=complex) for e in row] for row in G]), (0, 1), (-2, -1))


def hermitian_to_real(G: np.ndarray) -> np.ndarray:
    """Real symmetric matrix 1/2 [[Re G, -Im G], [Im G, Re G]] (batched over leading axes)."""
    a, b = G.real, G.imag
    top = np.concatenate([a, -b], axis=-1)
    bot = np.concatenate([b, a], axis=-1)
    return 0.5 * np.concatenate([top, bot], axis=-2)


@dataclass(frozen=True, eq=False)
class HermitianMetricAtPoint:
    gC: np.ndarray
    detC: float
    singular: bool = False

    @cached_property
    def gC_inv(self) -> np.ndarray:
        if self.singular:
            raise SingularMetric("the degenerate 3-fold metric has no inverse")
        return np.linalg.inv(self.gC)


@dataclass(frozen=True, eq=False)
class RealMetricAtPoint:
    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    singular: bool = False

    @cached_property
    def g_inv(self) -> np.ndarray:
        if self.singular:
            raise SingularMetric("the degenerate 3-fold metric has no inverse")
        gi = np.linalg.inv(self.g)
        return 0.5 * (gi + gi.T)


def _check_point(p: ChartPoint, spec: ManifoldSpec):
    if p.complex_dim != spec.complex_dim:
        raise ValueError(f"point has complex dimension {p.complex_dim}, spec expects {spec.complex_dim}")


def hermitian_metric(p: ChartPoint, spec: ManifoldSpec) -> HermitianMetricAtPoint:
    _check_point(p, spec)
    G = hermitian_matrix(p.coords, spec)
    if _is_degenerate(spec):
        return HermitianMetricAtPoint(G, 0.0, singular=True)
    return HermitianMetricAtPoint(G, float(np.linalg.det(G).real))


def metric_jets(x: np.ndarray, spec: ManifoldSpec):
    """Hermitian entries as jets: returns (G, dG, d2G) with dG[i,j,k] = d_k G_ij."""
    x = np.asarray(x, dtype=float)
    d = x.size
    m = d // 2
    xs = [Jet.coordinate(k, x) for k in range(d)]
    w = [xs[k] + 1j * xs[m + k] for k in range(m)]
    E = _entries(w, spec)
    G = np.empty((m, m), dtype=complex)
    dG = np.empty((m, m, d), dtype=complex)
    d2G = np.empty((m, m, d, d), dtype=complex)
    for i in range(m):
        for j in range(m):
            e = E[i][j]
            G[i, j], dG[i, j], d2G[i, j] = e.v, e.g, e.h
    return G, dG, d2G


REAL_RULES = ("block", "standard")


def real_metric(p: ChartPoint, spec: ManifoldSpec, rule: str = "block") -> RealMetricAtPoint:
    """Real metric with exact first and second partials.

    ``rule="block"`` (the default used throughout) applies
    :func:`hermitian_to_real` to G.  ``rule="standard"`` applies it to
    conj(G), which gives 1/2 Re(xi^T G conj(eta)) for xi = a + i b, the
    real form under which omega(X, Y) = 2 g(JX, Y).
    """
    _check_point(p, spec)
    if rule not in REAL_RULES:
        raise ValueError(f"rule must be one of {REAL_RULES}, got {rule!r}")
    G, dG, d2G = metric_jets(p.coords, spec)
    if rule == "standard":
        G, dG, d2G = G.conj(), dG.conj(), d2G.conj()
    g = hermitian_to_real(G)
    dg = np.moveaxis(hermitian_to_real(np.moveaxis(dG, 2, 0)), 0, 2)
    d2g = np.moveaxis(hermitian_to_real(np.moveaxis(d2G, (2, 3), (0, 1))), (0, 1), (2, 3))
    return RealMetricAtPoint(g, dg, d2g, singular=_is_degenerate(spec))


def real_metric_value(x, spec: ManifoldSpec) -> np.ndarray:
    """Real metric matrix only (no partials), batched over leading axes of ``x``."""
    return hermitian_to_real(hermitian_matrix(x, spec))


def fd_partials(p: ChartPoint, spec: ManifoldSpec, h: float = 1e-5):
    """Central-difference first and second partials of the real metric.

    Intended only as an independent check of :func:`real_metric`.
    """
    if not 1e-7 <= h <= 1e-2:
        raise ValueError(f"step h must lie in [1e-7, 1e-2], got {h}")
    x = p.coords
    d = x.size
    E = np.eye(d) * h
    g0 = real_metric_value(x, spec)
    dg = np.empty(g0.shape + (d,))
    d2g = np.empty(g0.shape + (d, d))
    plus = [real_metric_value(x + E[k], spec) for k in range(d)]
    minus = [real_metric_value(x - E[k], spec) for k in range(d)]
    for k in range(d):
        dg[..., k] = (plus[k] - minus[k]) / (2 * h)
        d2g[..., k, k] = (plus[k] - 2 * g0 + minus[k]) / h ** 2
        for l in range(k + 1, d):
            pp = real_metric_value(x + E[k] + E[l], spec)
            pm = real_metric_value(x + E[k] - E[l], spec)
            mp = real_metric_value(x - E[k] + E[l], spec)
            mm = real_metric_value(x - E[k] - E[l], spec)
            v = (pp - pm - mp + mm) / (4 * h * h)
            d2g[..., k, l] = v
            d2g[..., l, k] = v
    return dg, d2g


def metric_norm_sq(D: np.ndarray, G0: np.ndarray) -> float:
    """|D|^2 measured with the Hermitian metric G0: tr(G0^-1 D G0^-1 D)."""
    Gi = np.linalg.inv(G0)
    return float(np.trace(Gi @ D @ Gi @ D).real)
