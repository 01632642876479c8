"""Levi-Civita connection and Riemann tensor of the real metric, plus curvature identities.

Index conventions: ``gamma[p, i, j]`` is Gamma^p_ij and ``riemann[i, j, k, l]``
is R_ijkl with

    R_ijkl = -1/2 (g_ik,jl + g_jl,ik - g_jk,il - g_il,jk)
             - Gamma^p_ik Gamma^q_jl g_pq + Gamma^p_jk Gamma^q_il g_pq,

so that R_ijij is the (positive for spheres) sectional numerator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import ChartPoint, ManifoldSpec
from .metrics import RealMetricAtPoint, real_metric


@dataclass(frozen=True, eq=False)
class ConnectionAndCurvature:
    metric: RealMetricAtPoint
    gamma: np.ndarray
    riemann: np.ndarray


def christoffel_from(g_inv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma^p_ij = 1/2 g^pq (g_iq,j + g_jq,i - g_ij,q) from the metric inverse and first partials."""
    # lower[i, j, q] = g_iq,j + g_jq,i - g_ij,q
    lower = np.einsum("iqj->ijq", dg) + np.einsum("jqi->ijq", dg) - dg
    return 0.5 * np.einsum("pq,ijq->pij", g_inv, lower)


def riemann_from(g: np.ndarray, dg: np.ndarray, d2g: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    # d2g[a, b, c, d] = g_ab,cd
    second = (np.einsum("ikjl->ijkl", d2g) + np.einsum("jlik->ijkl", d2g)
              - np.einsum("jkil->ijkl", d2g) - np.einsum("iljk->ijkl", d2g))
    # gg[a, b, c, d] = Gamma^p_ab Gamma^q_cd g_pq
    gg = np.einsum("pab,qcd,pq->abcd", gamma, gamma, g)
    return -0.5 * second - np.einsum("ikjl->ijkl", gg) + np.einsum("jkil->ijkl", gg)


def connection(p: ChartPoint, spec: ManifoldSpec, rule: str = "block") -> ConnectionAndCurvature:
    m = real_metric(p, spec, rule)
    gamma = christoffel_from(m.g_inv, m.dg)
    return ConnectionAndCurvature(m, gamma, riemann_from(m.g, m.dg, m.d2g, gamma))


def christoffel(p: ChartPoint, spec: ManifoldSpec, rule: str = "block") -> np.ndarray:
    m = real_metric(p, spec, rule)
    return christoffel_from(m.g_inv, m.dg)


def riemann(p: ChartPoint, spec: ManifoldSpec) -> np.ndarray:
    return connection(p, spec).riemann


def gamma_product(cc: ConnectionAndCurvature, a, b, c, d) -> float:
    """Gamma^p_ab Gamma^q_cd g_pq."""
    G = cc.gamma
    return float(G[:, a, b] @ cc.metric.g @ G[:, c, d])


def symmetry_residual(R: np.ndarray) -> float:
    """Largest violation of the algebraic Riemann symmetries and the first Bianchi identity."""
    res = [
        np.abs(R + np.einsum("ijkl->jikl", R)).max(),
        np.abs(R + np.einsum("ijkl->ijlk", R)).max(),
        np.abs(R - np.einsum("ijkl->klij", R)).max(),
        np.abs(R + np.einsum("ijkl->jkil", R) + np.einsum("ijkl->kijl", R)).max(),
    ]
    return float(max(res))


def _require_surface(spec: ManifoldSpec):
    if not spec.is_hopf or spec.n != 2:
        raise ValueError("this quantity is defined for S^3 x S^1 only")


def complex_curvature(p: ChartPoint, spec: ManifoldSpec) -> float:
    """Curvature of the complex plane spanned by d/dw0, d/dw1, assembled from real components.

    Uses R0101 + R0303 + R2121 + R2323 - 2 R0213, which is
    R(u0, u1, conj u0, conj u1) for the unnormalized vectors u_k = d/dx_k - i d/dx_{k+2}.
    """
    _require_surface(spec)
    R = riemann(p, spec)
    return float(R[0, 1, 0, 1] + R[0, 3, 0, 3] + R[2, 1, 2, 1] + R[2, 3, 2, 3] - 2.0 * R[0, 2, 1, 3])


def complex_curvature_multilinear(p: ChartPoint, spec: ManifoldSpec, scale: float = 1.0) -> float:
    """R(X, Y, conj X, conj Y) by complex-multilinear extension, X = scale (e0 - i e2), Y = scale (e1 - i e3)."""
    _require_surface(spec)
    R = riemann(p, spec)
    X = scale * np.array([1.0, 0.0, -1j, 0.0])
    Y = scale * np.array([0.0, 1.0, 0.0, -1j])
    return complex(np.einsum("ijkl,i,j,k,l->", R, X, Y, X.conj(), Y.conj())).real


def complex_curvature_closed_form(p: ChartPoint, spec: ManifoldSpec) -> float:
    """1/2 g^11 pi^2 c^2 (x1^2 + x3^2)^2 / (4 A^4) with g^11 = 2 A^2, c = 1 + eps^2."""
    _require_surface(spec)
    x1, x3 = p.coords[1], p.coords[3]
    r2 = x1 * x1 + x3 * x3
    A = 1.0 + r2
    c = 1.0 + spec.epsilon ** 2
    return float(np.pi ** 2 * c * c * r2 * r2 / (4.0 * A * A))


def covariant_derivative_of_oneform(p: ChartPoint, spec: ManifoldSpec,
                                    theta: np.ndarray, dtheta: np.ndarray, rule: str = "block") -> np.ndarray:
    """(nabla theta)_ij = d_i theta_j - Gamma^p_ij theta_p, with dtheta[i, j] = d_i theta_j."""
    gamma = christoffel(p, spec, rule)
    return np.asarray(dtheta) - np.einsum("pij,p->ij", gamma, np.asarray(theta))


def surface_identity_residuals(p: ChartPoint, spec: ManifoldSpec) -> dict[str, float]:
    """Residuals of the closed-form curvature identities on S^3 x S^1.

    Keys ending in ``_zero`` are components that vanish identically; the
    others compare a Riemann component with its product form.
    """
    _require_surface(spec)
    cc = connection(p, spec)
    R, gi, dg = cc.riemann, cc.metric.g_inv, cc.metric.dg
    x1, x3 = p.coords[1], p.coords[3]
    A = 1.0 + x1 * x1 + x3 * x3
    c = 1.0 + spec.epsilon ** 2
    d0 = dg[0, 3, 1] - dg[0, 1, 3]
    d2 = dg[2, 1, 3] - dg[3, 2, 1]
    out = {
        "R0101": abs(R[0, 1, 0, 1] - 0.25 * gi[3, 3] * d0 ** 2),
        "R0303": abs(R[0, 3, 0, 3] - 0.25 * gi[1, 1] * d0 ** 2),
        "R2121": abs(R[2, 1, 2, 1] - 0.25 * gi[3, 3] * d2 ** 2),
        "R2323": abs(R[2, 3, 2, 3] - 0.25 * gi[1, 1] * d2 ** 2),
        "R0101_gamma": abs(R[0, 1, 0, 1] - gamma_product(cc, 1, 0, 1, 0)),
        "R0303_gamma": abs(R[0, 3, 0, 3] - gamma_product(cc, 3, 0, 3, 0)),
        "R2121_gamma": abs(R[2, 1, 2, 1] - gamma_product(cc, 1, 2, 1, 2)),
        "R2323_gamma": abs(R[2, 3, 2, 3] - gamma_product(cc, 3, 2, 3, 2)),
        "dg_03_1-dg_01_3": abs(d0 - c * np.pi * (x1 * x1 - x3 * x3) / (2 * A * A)),
        "dg_21_3-dg_32_1": abs(d2 + c * np.pi * x1 * x3 / (A * A)),
        "g^13_zero": abs(gi[1, 3]),
        "R0103_zero": abs(R[0, 1, 0, 3]),
        "R2123_zero": abs(R[2, 1, 2, 3]),
        "R0213_zero": abs(R[0, 2, 1, 3]),
        "R0321_zero": abs(R[0, 3, 2, 1]),
        "R0123_zero": abs(R[0, 1, 2, 3]),
    }
    return {k: float(v) for k, v in out.items()}


def fiber_identity_residuals(p: ChartPoint, spec: ManifoldSpec) -> dict[str, float]:
    """Residuals of the fiber-direction identities valid for every n.

    Christoffel symbols with both lower indices in the fiber vanish, and the
    curvature components with a fiber index in slots one and three reduce
    to products of Christoffel symbols.
    """
    if not spec.is_hopf:
        raise ValueError("defined for the S^(2n-1) x S^1 family")
    cc = connection(p, spec)
    R, G, g = cc.riemann, cc.gamma, cc.metric.g
    n = spec.n
    f = (0, n)
    fiber_gamma = max(abs(G[:, k, l]).max() for k in f for l in f)
    # P[a, r, b, s] = Gamma^p_ra Gamma^q_sb g_pq for fiber a, b
    prod = {(a, b): np.einsum("pr,qs,pq->rs", G[:, :, a], G[:, :, b], g) for a in f for b in f}
    out = {
        "gamma_fiber_zero": fiber_gamma,
        "R0r0s": np.abs(R[0, :, 0, :] - prod[(0, 0)]).max(),
        "R0rns": np.abs(R[0, :, n, :] - prod[(n, 0)]).max(),
        "Rnrns": np.abs(R[n, :, n, :] - prod[(n, n)]).max(),
        "R0n0r_zero": np.abs(R[0, n, 0, :]).max(),
        "Rn0nr_zero": np.abs(R[n, 0, n, :]).max(),
    }
    return {k: float(v) for k, v in out.items()}


def fiber_antisymmetric_first_partials(p: ChartPoint, spec: ManifoldSpec) -> float:
    """max over p, q of |g_0p,q - g_0q,p| and |g_np,q - g_nq,p|."""
    dg = real_metric(p, spec).dg
    n = spec.complex_dim
    a0 = dg[0] - dg[0].T
    an = dg[n] - dg[n].T
    return float(max(np.abs(a0).max(), np.abs(an).max()))
