"""Where do the torus fibers of S^3 x S^1 stop being stable harmonic maps?

Walk outward along the x3 axis of the base chart and, at each fiber, compute
the lowest eigenvalue of the index form over Fourier modes |m|, |k| <= 8.
The first negative eigenvalue marks the spectral threshold.  The integrand
of the explicit witness field is tracked alongside; it changes sign later,
so the witness only certifies instability from its own root onward.

Run:  python3 demos/stability_threshold.py
"""
import numpy as np

from lckhopf.charts import hopf
from lckhopf.stability import FiberInclusion, first_sign_change, instability_integrand, stability_spectrum


def scan(eps, radii):
    spec = hopf(2, eps)
    spectral, witness = [], []
    for r in radii:
        f = FiberInclusion([1j * r], spec)
        spectral.append(0.0 if stability_spectrum(f, K=8, verify=False).stable else -1.0)
        witness.append(instability_integrand(f))
    return first_sign_change(radii, spectral), first_sign_change(radii, witness)


def main():
    radii = np.round(np.arange(0.0, 2.51, 0.01), 10)
    print(f"{'eps':>5} {'spectral bracket':>20} {'sqrt(2/(1+e^2))':>16} {'witness bracket':>20} {'2/sqrt(1+e^2)':>14}")
    for eps in (0.0, 0.25, 0.5, 0.75, 1.0):
        (s_lo, s_hi), (w_lo, w_hi) = scan(eps, radii)
        print(f"{eps:5.2f} {f'[{s_lo:.2f}, {s_hi:.2f}]':>20} {np.sqrt(2 / (1 + eps ** 2)):16.5f} "
              f"{f'[{w_lo:.2f}, {w_hi:.2f}]':>20} {2 / np.sqrt(1 + eps ** 2):14.5f}")

    # the unstable direction at the spectral threshold is the first Fourier mode along x0
    f = FiberInclusion([1.2j], hopf(2, 1.0))
    rep = stability_spectrum(f, K=8)
    worst = min(rep.min_eigenvalue_per_mode, key=rep.min_eigenvalue_per_mode.get)
    print(f"\neps = 1, x3 = 1.2: most negative mode {worst}, eigenvalue {rep.min_eigenvalue_per_mode[worst]:.4f}")


if __name__ == "__main__":
    main()
