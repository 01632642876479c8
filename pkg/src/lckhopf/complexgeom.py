"""Fundamental form, Lee form, Gauduchon and Chern-Ricci checks, and the total volume.

Forms are stored as full antisymmetric arrays over the real coframe
``dx_0, ..., dx_{2m-1}``; a k-form ``phi`` has components
``phi[a1, ..., ak] = phi(d/dx_a1, ..., d/dx_ak)``.  Wedge products and
exterior derivatives use the determinant convention, e.g.
``(theta ^ omega)_abc = theta_a omega_bc - theta_b omega_ac + theta_c omega_ab``.

The fundamental form is ``omega = (i/2) G_ij dw_i ^ conj(dw_j)``, so that
``(i/2) dw ^ conj(dw) = dx ^ dy`` and the top power ``omega^m / m!`` has
coefficient ``det G`` against ``dx_0 ^ dx_m ^ dx_1 ^ dx_{m+1} ^ ...``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .charts import ChartPoint, ManifoldSpec
from .metrics import hermitian_matrix, metric_jets
from .tensor import covariant_derivative_of_oneform


@dataclass(frozen=True, eq=False)
class FormAtPoint:
    degree: int
    components: np.ndarray

    def __call__(self, *vectors) -> float:
        out = self.components
        for v in vectors:
            out = np.tensordot(np.asarray(v, dtype=float), out, axes=(0, 0))
        return float(out)


@dataclass(frozen=True, eq=False)
class LeeForm:
    """theta = a dw_0 + b dw_1 + conjugates; ``real`` holds the dx-components."""

    a: complex
    b: complex
    real: np.ndarray
    residual: float = 0.0


def _dw_table(m: int) -> np.ndarray:
    """dw_i(d/dx_a) as an (m, 2m) complex table."""
    t = np.zeros((m, 2 * m), dtype=complex)
    for i in range(m):
        t[i, i] = 1.0
        t[i, m + i] = 1j
    return t


def _omega_from_G(G: np.ndarray) -> np.ndarray:
    """omega_ab = (i/2) G_ij (dw_i(a) conj(dw_j)(b) - dw_i(b) conj(dw_j)(a)), batched over trailing axes."""
    m = G.shape[0]
    t = _dw_table(m)
    M = np.einsum("ia,ij...,jb->ab...", t, G, t.conj())
    return (0.5j * (M - np.swapaxes(M, 0, 1))).real


def fundamental_form(p: ChartPoint, spec: ManifoldSpec) -> FormAtPoint:
    return FormAtPoint(2, _omega_from_G(hermitian_matrix(p.coords, spec)))


def omega_with_partials(p: ChartPoint, spec: ManifoldSpec):
    """omega, its first partials d_k omega_ab (last axis k) and second partials (last two axes)."""
    G, dG, d2G = metric_jets(p.coords, spec)
    return _omega_from_G(G), _omega_from_G(dG), _omega_from_G(d2G)


def exterior_derivative_2form(domega: np.ndarray) -> np.ndarray:
    """(d omega)_abc = d_a omega_bc - d_b omega_ac + d_c omega_ab, from domega[b, c, a] = d_a omega_bc."""
    return (np.einsum("bca->abc", domega) - np.einsum("acb->abc", domega)
            + np.einsum("abc->abc", domega))


def wedge_1_2(theta: np.ndarray, omega: np.ndarray) -> np.ndarray:
    return (np.einsum("a,bc->abc", theta, omega) - np.einsum("b,ac->abc", theta, omega)
            + np.einsum("c,ab->abc", theta, omega))


def pfaffian(M: np.ndarray) -> float:
    """Pfaffian of an antisymmetric matrix by expansion along the first row."""
    k = M.shape[0]
    if k == 0:
        return 1.0
    if k % 2:
        return 0.0
    total = 0.0
    for j in range(1, k):
        if M[0, j] == 0.0:
            continue
        rest = [i for i in range(1, k) if i != j]
        total += (-1) ** (j + 1) * M[0, j] * pfaffian(M[np.ix_(rest, rest)])
    return float(total)


def top_power_coefficient(omega: np.ndarray) -> float:
    """Coefficient of omega^m/m! against dx_0 ^ dx_m ^ dx_1 ^ dx_{m+1} ^ ..."""
    m = omega.shape[0] // 2
    order = [v for k in range(m) for v in (k, m + k)]
    return pfaffian(omega[np.ix_(order, order)])


def _triples(d: int):
    return list(itertools.combinations(range(d), 3))


def _lee_system(omega: np.ndarray) -> np.ndarray:
    """Matrix L with (theta ^ omega)_abc = (L theta)_(abc) over increasing triples."""
    d = omega.shape[0]
    rows = []
    for a, b, c in _triples(d):
        r = np.zeros(d)
        r[a] += omega[b, c]
        r[b] -= omega[a, c]
        r[c] += omega[a, b]
        rows.append(r)
    return np.array(rows)


def _pick(T: np.ndarray) -> np.ndarray:
    d = T.shape[0]
    return np.array([T[a, b, c] for a, b, c in _triples(d)])


def lee_form_with_partials(p: ChartPoint, spec: ManifoldSpec):
    """Solve d omega = -2 theta ^ omega for the real Lee form and differentiate the solution.

    Returns (theta, dtheta, residual) where dtheta[i, j] = d_i theta_j.  The
    partials come from differentiating the linear system L(x) theta = r(x)
    with the exact first and second partials of omega.
    """
    om, dom, d2om = omega_with_partials(p, spec)
    d = om.shape[0]
    L = _lee_system(om)
    r = -0.5 * _pick(exterior_derivative_2form(dom))
    theta, *_ = np.linalg.lstsq(L, r, rcond=None)
    residual = float(np.abs(exterior_derivative_2form(dom) + 2 * wedge_1_2(theta, om)).max())
    dtheta = np.empty((d, d))
    for k in range(d):
        Lk = _lee_system(dom[:, :, k])
        rk = -0.5 * _pick(exterior_derivative_2form(d2om[:, :, :, k]))
        dtheta[k], *_ = np.linalg.lstsq(L, rk - Lk @ theta, rcond=None)
    return theta, dtheta, residual


def _real_to_complex_coeffs(theta: np.ndarray) -> np.ndarray:
    m = theta.size // 2
    return 0.5 * (theta[:m] - 1j * theta[m:])


def lee_form(p: ChartPoint, spec: ManifoldSpec) -> LeeForm:
    theta, _, residual = lee_form_with_partials(p, spec)
    coeffs = _real_to_complex_coeffs(theta)
    return LeeForm(complex(coeffs[0]), complex(coeffs[1]), theta, residual)


def lee_form_closed_form(p: ChartPoint, spec: ManifoldSpec) -> LeeForm:
    """a = c i pi / 4, b = c conj(w1) / (8 A), c = 1 + eps^2."""
    c = 1.0 + spec.epsilon ** 2
    x1, x3 = p.coords[1], p.coords[3]
    A = 1.0 + x1 * x1 + x3 * x3
    real = c * np.array([0.0, x1 / (4 * A), -np.pi / 2, x3 / (4 * A)])
    return LeeForm(c * 1j * np.pi / 4, c * complex(x1, -x3) / (8 * A), real)


def lee_closedness_residual(p: ChartPoint, spec: ManifoldSpec) -> float:
    """max |d_i theta_j - d_j theta_i| for the solved Lee form."""
    _, dtheta, _ = lee_form_with_partials(p, spec)
    return float(np.abs(dtheta - dtheta.T).max())


def lee_covariant_derivative(p: ChartPoint, spec: ManifoldSpec, rule: str = "block") -> np.ndarray:
    """nabla theta for the Levi-Civita connection of the real metric built with ``rule``.

    With ``rule="standard"`` the result vanishes identically: the Lee form is
    parallel for the real metric paired with omega.  The default block rule
    gives a different Levi-Civita connection, for which it is not.
    """
    theta, dtheta, _ = lee_form_with_partials(p, spec)
    return covariant_derivative_of_oneform(p, spec, theta, dtheta, rule)


def default_parallel_grid() -> list[tuple[float, float]]:
    vals = np.linspace(-1.5, 1.5, 7)
    return [(a, b) for a in vals for b in vals]


def lee_form_not_parallel(spec: ManifoldSpec, grid=None, rule: str = "block") -> float:
    """sup over a fixed (x1, x3) grid of max |(nabla theta)_ij|."""
    grid = default_parallel_grid() if grid is None else grid
    best = 0.0
    for x1, x3 in grid:
        p = ChartPoint([0.0, x1, 0.0, x3])
        best = max(best, float(np.abs(lee_covariant_derivative(p, spec, rule)).max()))
    return best


def wirtinger_second(H: np.ndarray, k: int, l: int, m: int) -> np.ndarray:
    """d_k dbar_l from a real Hessian H[..., a, b] over (x_0..x_{m-1}, y_0..y_{m-1})."""
    xk, yk, xl, yl = k, m + k, l, m + l
    return 0.25 * ((H[..., xk, xl] + H[..., yk, yl]) + 1j * (H[..., xk, yl] - H[..., yk, xl]))


def wirtinger_first(D: np.ndarray, k: int, m: int, conj: bool = False) -> np.ndarray:
    s = 1j if conj else -1j
    return 0.5 * (D[..., k] + s * D[..., m + k])


def ddbar_omega_coefficient(H: np.ndarray) -> complex:
    """Coefficient of dw0 ^ dw0bar ^ dw1 ^ dw1bar in ddbar(G_ij dw_i ^ dw_jbar) for m = 2.

    ``H[i, j, a, b]`` holds the real second partials of G_ij.
    """
    def dd(i, j, k, l):
        return wirtinger_second(H[i, j], k, l, 2)
    return complex(dd(1, 1, 0, 0) + dd(0, 0, 1, 1) - dd(1, 0, 0, 1) - dd(0, 1, 1, 0))


def gauduchon_check(p: ChartPoint, spec: ManifoldSpec) -> float:
    if not spec.is_hopf or spec.n != 2:
        raise ValueError("the Gauduchon check is implemented for S^3 x S^1")
    _, _, d2G = metric_jets(p.coords, spec)
    return abs(ddbar_omega_coefficient(d2G))


def chern_ricci_and_scalar(p: ChartPoint, spec: ManifoldSpec):
    """Ric_kl = -d_k dbar_l log det G via Jacobi's formula; scalar = tr(G^-1 Ric)."""
    G, dG, d2G = metric_jets(p.coords, spec)
    m = G.shape[0]
    if np.linalg.det(G).real <= 0:
        raise ValueError("Chern-Ricci form needs a positive determinant")
    Gi = np.linalg.inv(G)
    d = [wirtinger_first(dG, k, m) for k in range(m)]
    dbar = [wirtinger_first(dG, l, m, conj=True) for l in range(m)]
    ric = np.empty((m, m), dtype=complex)
    for k in range(m):
        for l in range(m):
            ddb = wirtinger_second(d2G, k, l, m)
            ric[k, l] = -(np.trace(Gi @ ddb) - np.trace(Gi @ d[k] @ Gi @ dbar[l]))
    scalar = complex(np.trace(Gi @ ric))
    return ric, scalar.real


def volume(spec: ManifoldSpec, resolution: int = 1000, cutoff: float = 1e3, angular: int = 1000) -> float:
    """Integral of omega^2/2 over the chart V_00 (the complement has measure zero).

    The fiber torus has unit coordinate area.  On the base plane, polar
    coordinates with u = r^2 and t = u / (1 + u) turn the heavy tail into a
    bounded interval; the midpoint rule is used in t and in the angle.
    """
    if not spec.is_hopf or spec.n != 2:
        raise ValueError("volume is implemented for S^3 x S^1")
    if resolution < 1 or angular < 1 or cutoff <= 0:
        raise ValueError("resolution, angular and cutoff must be positive")
    t_max = cutoff ** 2 / (1.0 + cutoff ** 2)
    dt = t_max / resolution
    t = (np.arange(resolution) + 0.5) * dt
    u = t / (1.0 - t)
    du_dt = 1.0 / (1.0 - t) ** 2
    r = np.sqrt(u)
    dphi = 2 * np.pi / angular
    phi = (np.arange(angular) + 0.5) * dphi
    total = 0.0
    for ph in phi:
        x = np.zeros((resolution, 4))
        x[:, 1] = r * np.cos(ph)
        x[:, 3] = r * np.sin(ph)
        det = np.linalg.det(hermitian_matrix(x, spec)).real
        # r dr dphi = (1/2) du dphi
        total += np.sum(det * 0.5 * du_dt) * dt * dphi
    return float(total)
