"""Second variation of energy and area for the Hopf-fiber tori T^2_p.

The fiber through a base point ``w'`` is parametrized by the unit torus
``(x_0, x_n) in [0, 1)^2`` and the inclusion is ``f(x_0, x_n) = (x_0, w', x_n)``.
The metric, its Christoffel symbols and its curvature do not depend on
``x_0`` or ``x_n``, so along a fiber every coefficient is constant.  A
variation field ``V = a_i d/dx_i`` is stored by its Fourier coefficients and
the index form splits into independent Hermitian forms, one per frequency.

Energy is conformally invariant in dimension two, so all integrals use the
flat coordinate measure ``dx_0 dx_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .charts import ChartPoint, ManifoldSpec
from .errors import ModeCapExceeded, NotNormal, PreconditionViolated
from .tensor import ConnectionAndCurvature, connection

UNSTABLE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class FiberInclusion:
    base_point: np.ndarray
    spec: ManifoldSpec

    def __post_init__(self):
        if not self.spec.is_hopf:
            raise ValueError("fiber inclusions are defined for the S^(2n-1) x S^1 family")
        b = np.atleast_1d(np.asarray(self.base_point, dtype=complex))
        if b.size != self.spec.n - 1:
            raise ValueError(f"base point needs {self.spec.n - 1} complex entries, got {b.size}")
        object.__setattr__(self, "base_point", b)

    @property
    def dim(self) -> int:
        return 2 * self.spec.n

    @property
    def tangent_axes(self) -> tuple[int, int]:
        return self.spec.fiber_axes

    def point(self, x0: float = 0.0, xn: float = 0.0) -> ChartPoint:
        b = self.base_point
        return ChartPoint(np.concatenate([[x0], b.real, [xn], b.imag]))

    def geometry(self) -> ConnectionAndCurvature:
        return connection(self.point(), self.spec)


@dataclass(eq=False)
class VariationField:
    """Real field a(x) = sum_(m,k) c(m,k) exp(2 pi i (m x_0 + k x_n)) with c(-m,-k) = conj c(m,k)."""

    modes: dict
    dim: int

    def __post_init__(self):
        clean = {}
        for key, c in self.modes.items():
            c = np.asarray(c, dtype=complex)
            if c.shape != (self.dim,):
                raise ValueError(f"mode {key} has shape {c.shape}, expected ({self.dim},)")
            clean[(int(key[0]), int(key[1]))] = c
        for (m, k), c in clean.items():
            partner = clean.get((-m, -k))
            if partner is None or np.abs(partner - c.conj()).max() > 1e-12:
                raise ValueError(f"reality constraint fails for mode {(m, k)}")
        self.modes = clean

    @property
    def cap(self) -> int:
        return max((max(abs(m), abs(k)) for m, k in self.modes), default=0)

    @classmethod
    def from_mode(cls, m: int, k: int, c) -> "VariationField":
        """Real field carried by a single frequency pair (m, k), (-m, -k)."""
        c = np.asarray(c, dtype=complex)
        if (m, k) == (0, 0):
            return cls({(0, 0): c.real.astype(complex)}, c.size)
        return cls({(m, k): c, (-m, -k): c.conj()}, c.size)

    @classmethod
    def random(cls, rng: np.random.Generator, dim: int, K: int, scale: float = 1.0) -> "VariationField":
        modes = {}
        for m in range(-K, K + 1):
            for k in range(-K, K + 1):
                if (m, k) in modes:
                    continue
                if (m, k) == (0, 0):
                    modes[(0, 0)] = scale * rng.standard_normal(dim).astype(complex)
                    continue
                c = scale * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
                modes[(m, k)] = c
                modes[(-m, -k)] = c.conj()
        return cls(modes, dim)

    def evaluate(self, x0, xn):
        """Values a_i and partials d_0 a_i, d_n a_i at the given points (arrays broadcast)."""
        x0 = np.asarray(x0, dtype=float)
        xn = np.asarray(xn, dtype=float)
        shape = np.broadcast(x0, xn).shape + (self.dim,)
        a = np.zeros(shape, dtype=complex)
        d0 = np.zeros(shape, dtype=complex)
        dn = np.zeros(shape, dtype=complex)
        for (m, k), c in self.modes.items():
            e = np.exp(2j * np.pi * (m * x0 + k * xn))[..., None]
            a += e * c
            d0 += (2j * np.pi * m) * e * c
            dn += (2j * np.pi * k) * e * c
        return a.real, d0.real, dn.real


@dataclass(eq=False)
class StabilityReport:
    base_point: np.ndarray
    epsilon: float
    cap: int
    min_eigenvalue_per_mode: dict = field(default_factory=dict)
    overall_min: float = 0.0
    witness: VariationField | None = None
    witness_energy: float | None = None

    @property
    def stable(self) -> bool:
        return self.witness is None


def _fiber_blocks(cc: ConnectionAndCurvature, spec: ManifoldSpec):
    """Gamma_alpha[p, i] = Gamma^p_(alpha i) and R_alpha[i, j] = R_(alpha i alpha j) for both fiber directions."""
    a, b = spec.fiber_axes
    G, R = cc.gamma, cc.riemann
    return (G[:, a, :], G[:, b, :]), (R[a, :, a, :], R[b, :, b, :])


def _mode_form(g, gammas, curvs, m: int, k: int, proj=None) -> np.ndarray:
    """Hermitian matrix of the index form restricted to frequency (m, k)."""
    d = g.shape[0]
    eye = np.eye(d)
    D0 = 2j * np.pi * m * eye + gammas[0]
    Dn = 2j * np.pi * k * eye + gammas[1]
    if proj is not None:
        D0, Dn = proj @ D0, proj @ Dn
    M = D0.conj().T @ g @ D0 + Dn.conj().T @ g @ Dn - curvs[0] - curvs[1]
    return 0.5 * (M + M.conj().T)


def _real_embedding(H: np.ndarray) -> np.ndarray:
    a, b = H.real, H.imag
    return np.block([[a, -b], [b, a]])


def _check_cap(V: VariationField, K: int | None):
    if K is not None and V.cap > K:
        raise ModeCapExceeded(f"field has modes up to {V.cap}, cap is {K}")


def _normal_projector(g: np.ndarray, axes) -> np.ndarray:
    """P v = v minus its g-orthogonal projection onto the tangent plane spanned by axes."""
    d = g.shape[0]
    T = np.eye(d)[:, list(axes)]
    gram = T.T @ g @ T
    return np.eye(d) - T @ np.linalg.solve(gram, T.T @ g)


def index_form(f: FiberInclusion, V: VariationField, K: int | None = 8, cc=None) -> float:
    """I(V, V) summed mode by mode from the constant-coefficient reduction."""
    _check_cap(V, K)
    cc = f.geometry() if cc is None else cc
    gammas, curvs = _fiber_blocks(cc, f.spec)
    g = cc.metric.g
    total = 0.0
    for (m, k), c in V.modes.items():
        total += (c.conj() @ _mode_form(g, gammas, curvs, m, k) @ c).real
    return float(total)


def _quadrature_size(V: VariationField, N: int | None) -> int:
    need = 2 * V.cap + 2
    if N is None:
        return max(16, 2 * need)
    if N < need:
        raise ValueError(f"grid of {N} points cannot integrate modes up to {V.cap} exactly")
    return N


def index_form_quadrature(f: FiberInclusion, V: VariationField, K: int | None = 8,
                          N: int | None = None, cc=None) -> float:
    """I(V, V) by the rectangle rule on an N x N grid of the fiber, from the pointwise integrand.

    The rule is exact for trigonometric polynomials of degree below N, and the
    integrand has degree at most twice the mode cap.
    """
    _check_cap(V, K)
    cc = f.geometry() if cc is None else cc
    N = _quadrature_size(V, N)
    return _quadrature(cc, f.spec, V, N, proj=None)


def _quadrature(cc, spec, V, N, proj):
    t = np.arange(N) / N
    X0, XN = np.meshgrid(t, t, indexing="ij")
    a, d0, dn = V.evaluate(X0, XN)
    gammas, curvs = _fiber_blocks(cc, spec)
    g = cc.metric.g
    total = np.zeros(X0.shape)
    for d_alpha, gam, R in zip((d0, dn), gammas, curvs):
        nab = d_alpha + a @ gam.T
        if proj is not None:
            nab = nab @ proj.T
        total += np.einsum("...i,ij,...j->...", nab, g, nab)
        total -= np.einsum("...i,ij,...j->...", a, R, a)
    return float(total.mean())


def stability_spectrum(f: FiberInclusion, K: int = 8, verify: bool = True) -> StabilityReport:
    """Minimal eigenvalue of the index form on each frequency |m|, |k| <= K."""
    if K < 1:
        raise ValueError("mode cap K must be at least 1")
    cc = f.geometry()
    gammas, curvs = _fiber_blocks(cc, f.spec)
    g = cc.metric.g
    report = StabilityReport(f.base_point, f.spec.epsilon, K)
    best = None
    for m in range(-K, K + 1):
        for k in range(-K, K + 1):
            H = _mode_form(g, gammas, curvs, m, k)
            w, v = np.linalg.eigh(_real_embedding(H))
            report.min_eigenvalue_per_mode[(m, k)] = float(w[0])
            if best is None or w[0] < best[0]:
                best = (float(w[0]), m, k, v[:, 0])
    report.overall_min = best[0]
    if best[0] < -UNSTABLE_TOL:
        lam, m, k, vec = best
        d = g.shape[0]
        c = vec[:d] + 1j * vec[d:]
        report.witness = VariationField.from_mode(m, k, c)
        if verify:
            report.witness_energy = index_form_quadrature(f, report.witness, K, cc=cc)
    return report


def mode_min_eigenvalue(f: FiberInclusion, m: int, k: int) -> float:
    cc = f.geometry()
    gammas, curvs = _fiber_blocks(cc, f.spec)
    H = _mode_form(cc.metric.g, gammas, curvs, m, k)
    return float(np.linalg.eigvalsh(H)[0])


def witness_field(spec: ManifoldSpec) -> VariationField:
    """a_1 = cos(2 pi x_0) / (2 pi), a_(n+1) = sin(2 pi x_0) / (2 pi), all other components zero."""
    d = 2 * spec.n
    c = np.zeros(d, dtype=complex)
    c[1] = 1.0 / (4 * np.pi)
    c[spec.n + 1] = -1j / (4 * np.pi)
    return VariationField.from_mode(1, 0, c)


def instability_integrand(f: FiberInclusion, samples: int = 16) -> float:
    """Pointwise index-form integrand of the witness field, constant along the fiber.

    Requires x_1 = 0 or x_(n+1) = 0 and w_2 = ... = w_(n-1) = 0.  The value
    returned is the mean over ``samples`` points in x_0, after checking that
    the integrand does not vary.
    """
    b = f.base_point
    if np.any(b[1:] != 0):
        raise PreconditionViolated("witness needs w_2 = ... = w_(n-1) = 0")
    if b[0].real != 0 and b[0].imag != 0:
        raise PreconditionViolated("witness needs x_1 = 0 or x_(n+1) = 0")
    cc = f.geometry()
    V = witness_field(f.spec)
    x0 = np.arange(samples) / samples
    a, d0, dn = V.evaluate(x0, 0.0)
    gammas, curvs = _fiber_blocks(cc, f.spec)
    g = cc.metric.g
    vals = np.zeros(samples)
    for d_alpha, gam, R in zip((d0, dn), gammas, curvs):
        nab = d_alpha + a @ gam.T
        vals += np.einsum("si,ij,sj->s", nab, g, nab) - np.einsum("si,ij,sj->s", a, R, a)
    spread = vals.max() - vals.min()
    if spread > 1e-10 * max(1.0, abs(vals).max()):
        raise PreconditionViolated(f"integrand varies along the fiber by {spread:.3g}")
    return float(vals.mean())


def witness_integrand_closed_form(A: float, epsilon: float) -> float:
    """-(1 + eps^2) / (8 A) + (5 + eps^2) / (8 A^2)."""
    e2 = epsilon * epsilon
    return -(1 + e2) / (8 * A) + (5 + e2) / (8 * A * A)


@dataclass(eq=False)
class RadiusScan:
    epsilon: float
    axis: int
    rows: list
    last_stable: float | None
    first_unstable: float | None


def stability_radius_scan(spec: ManifoldSpec, axis: int, radii, K: int = 8) -> RadiusScan:
    """Scan base points r * e_axis (axis is a real base index) and record spectra.

    Each row is ``(r, overall_min, mode (1,0) minimum, witness integrand or nan)``.
    """
    if axis not in spec.base_axes:
        raise ValueError(f"axis {axis} is not a base direction")
    rows = []
    last_stable = first_unstable = None
    n = spec.n
    for r in radii:
        x = np.zeros(2 * n)
        x[axis] = r
        b = x[1:n] + 1j * x[n + 1:]
        f = FiberInclusion(b, spec)
        rep = stability_spectrum(f, K, verify=False)
        m10 = rep.min_eigenvalue_per_mode[(1, 0)]
        try:
            wi = instability_integrand(f)
        except PreconditionViolated:
            wi = float("nan")
        rows.append((float(r), rep.overall_min, m10, wi))
        if rep.stable and first_unstable is None:
            last_stable = float(r)
        elif not rep.stable and first_unstable is None:
            first_unstable = float(r)
    return RadiusScan(spec.epsilon, axis, rows, last_stable, first_unstable)


def first_sign_change(xs, ys) -> tuple[float, float] | None:
    """Bracket (x_i, x_(i+1)) of the first sign change from >= 0 to < 0."""
    for i in range(len(xs) - 1):
        if ys[i] >= 0 > ys[i + 1]:
            return float(xs[i]), float(xs[i + 1])
    return None


def tension_residual(point: ChartPoint, spec: ManifoldSpec, f0, fn, laplacian=None) -> float:
    """(1/4) max_i |Laplace f^i + Gamma^i_jk (f0^j f0^k + fn^j fn^k)| for a map with given first derivatives.

    This is d_w d_wbar f + Gamma(d_w f, d_wbar f) in the complex coordinate w_0.
    """
    G = connection(point, spec).gamma
    f0 = np.asarray(f0, dtype=float)
    fn = np.asarray(fn, dtype=float)
    lap = np.zeros(G.shape[0]) if laplacian is None else np.asarray(laplacian, dtype=float)
    t = lap + np.einsum("ijk,j,k->i", G, f0, f0) + np.einsum("ijk,j,k->i", G, fn, fn)
    return float(0.25 * np.abs(t).max())


def harmonicity_residual(f: FiberInclusion) -> float:
    d = f.dim
    a, b = f.tangent_axes
    return tension_residual(f.point(), f.spec, np.eye(d)[a], np.eye(d)[b])


def section_curvature_form(f: FiberInclusion, W, cc=None) -> float:
    """R(df/dw_0, W, conj df/dw_0, conj W) for constant coefficients W over the coordinate frame.

    With df/dw_0 proportional to d/dx_0 - i d/dx_n, this is
    sum a_r conj(a_s) (R_0r0s + i R_0rns - i R_nr0s + R_nrns).
    """
    cc = f.geometry() if cc is None else cc
    R = cc.riemann
    a, b = f.tangent_axes
    W = np.asarray(W, dtype=complex)
    K = R[a, :, a, :] + 1j * R[a, :, b, :] - 1j * R[b, :, a, :] + R[b, :, b, :]
    return float((W @ K @ W.conj()).real)


def section_curvature_closed_form(f: FiberInclusion, W) -> float:
    """1/4 c^2 (|a_1|^2 + |a_3|^2) g^33 ((pi (x1^2 - x3^2) / (2 A^2))^2 + (pi x1 x3 / A^2)^2) for n = 2."""
    if f.spec.n != 2:
        raise ValueError("closed form available for n = 2")
    W = np.asarray(W, dtype=complex)
    w1 = f.base_point[0]
    x1, x3 = w1.real, w1.imag
    A = 1 + x1 * x1 + x3 * x3
    c = 1 + f.spec.epsilon ** 2
    g33 = f.geometry().metric.g_inv[3, 3]
    bracket = (np.pi * (x1 * x1 - x3 * x3) / (2 * A * A)) ** 2 + (np.pi * x1 * x3 / A ** 2) ** 2
    return float(0.25 * c * c * (abs(W[1]) ** 2 + abs(W[3]) ** 2) * g33 * bracket)


def holomorphic_frame_classification(f: FiberInclusion, tol: float = 1e-10) -> set[int]:
    """Frame indices j with nabla_(d/dw0bar) d/dx_j = 0, i.e. 1/2 |Gamma^k_0j + i Gamma^k_nj| < tol."""
    G = f.geometry().gamma
    a, b = f.tangent_axes
    out = set()
    for j in range(G.shape[0]):
        if 0.5 * np.abs(G[:, a, j] + 1j * G[:, b, j]).max() < tol:
            out.add(j)
    return out


def totally_geodesic_check(f: FiberInclusion) -> float:
    """Largest normal component of nabla_(d_i) d_j for tangent i, j."""
    cc = f.geometry()
    P = _normal_projector(cc.metric.g, f.tangent_axes)
    a, b = f.tangent_axes
    return float(max(np.abs(P @ cc.gamma[:, i, j]).max() for i in (a, b) for j in (a, b)))


def normal_frame(f: FiberInclusion, cc=None) -> np.ndarray:
    """Orthonormal normal frame (columns) by Gram-Schmidt of the base coordinate vectors.

    Base vectors are taken in order d/dx_1, ..., d/dx_(n-1), d/dx_(n+1), ...,
    after removing their components along the fiber directions.
    """
    cc = f.geometry() if cc is None else cc
    g = cc.metric.g
    d = g.shape[0]
    a, b = f.tangent_axes
    basis = [np.eye(d)[a], np.eye(d)[b]]
    basis = [e / np.sqrt(e @ g @ e) for e in basis]
    normals = []
    for j in f.spec.base_axes:
        v = np.eye(d)[j]
        for e in basis + normals:
            v = v - (e @ g @ v) * e
        normals.append(v / np.sqrt(v @ g @ v))
    return np.array(normals).T


def _check_normal(V: VariationField, g, axes, tol=1e-10):
    T = g[list(axes), :]
    for key, c in V.modes.items():
        if np.abs(T @ c).max() > tol:
            raise NotNormal(f"mode {key} has a tangential component")


def area_second_variation(f: FiberInclusion, X: VariationField, K: int | None = 8, cc=None) -> float:
    """Second variation of area, integral of |nabla^perp X|^2 - tr R(., X, ., X), summed by mode.

    The second fundamental form of a fiber vanishes, so its term is omitted;
    :func:`totally_geodesic_check` asserts that separately.
    """
    _check_cap(X, K)
    cc = f.geometry() if cc is None else cc
    g = cc.metric.g
    _check_normal(X, g, f.tangent_axes)
    P = _normal_projector(g, f.tangent_axes)
    gammas, curvs = _fiber_blocks(cc, f.spec)
    total = 0.0
    for (m, k), c in X.modes.items():
        total += (c.conj() @ _mode_form(g, gammas, curvs, m, k, proj=P) @ c).real
    return float(total)


def area_second_variation_quadrature(f: FiberInclusion, X: VariationField, K: int | None = 8,
                                     N: int | None = None, cc=None) -> float:
    _check_cap(X, K)
    cc = f.geometry() if cc is None else cc
    g = cc.metric.g
    _check_normal(X, g, f.tangent_axes)
    P = _normal_projector(g, f.tangent_axes)
    return _quadrature(cc, f.spec, X, _quadrature_size(X, N), proj=P)


def area_spectrum(f: FiberInclusion, K: int = 8) -> dict:
    """Minimal eigenvalue of the area second variation on normal fields, per frequency."""
    cc = f.geometry()
    g = cc.metric.g
    Nf = normal_frame(f, cc)
    P = _normal_projector(g, f.tangent_axes)
    gammas, curvs = _fiber_blocks(cc, f.spec)
    out = {}
    for m in range(-K, K + 1):
        for k in range(-K, K + 1):
            H = Nf.T @ _mode_form(g, gammas, curvs, m, k, proj=P) @ Nf
            out[(m, k)] = float(np.linalg.eigvalsh(0.5 * (H + H.conj().T))[0])
    return out


def rotated_witness(f: FiberInclusion) -> VariationField:
    """Witness coefficients placed on the first and the n-th normal frame vectors."""
    Nf = normal_frame(f)
    n = f.spec.n
    c = (Nf[:, 0] - 1j * Nf[:, n - 1]) / (4 * np.pi)
    return VariationField.from_mode(1, 0, c)
