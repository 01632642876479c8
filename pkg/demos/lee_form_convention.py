"""How the real form of the Hermitian metric decides whether the Lee form is parallel.

Two ways to turn the complex matrix G into a real 4x4 metric are compared:

* "block":    1/2 [[Re G, -Im G], [Im G, Re G]]   (the rule used throughout the package)
* "standard": the same layout applied to conj(G), i.e. 1/2 Re(xi^H G eta)

Both are J-invariant and positive definite, but they are different Riemannian
metrics.  The Lee form solves dw = -2 theta ^ w for the same w in both cases;
only its Levi-Civita derivative changes.

Run:  python3 demos/lee_form_convention.py
"""
import numpy as np

from lckhopf.charts import ChartPoint, hopf
from lckhopf.complexgeom import lee_covariant_derivative, lee_form, lee_form_not_parallel

np.set_printoptions(precision=4, suppress=True)


def main():
    for eps in (0.0, 0.5, 1.0):
        spec = hopf(2, eps)
        print(f"eps = {eps}: sup |nabla theta|  block {lee_form_not_parallel(spec, rule='block'):.4f}"
              f"   standard {lee_form_not_parallel(spec, rule='standard'):.2e}")

    p = ChartPoint([0.0, 0.5, 0.0, 1.0])
    spec = hopf(2, 0.0)
    print(f"\nLee form at x1 = 0.5, x3 = 1: {lee_form(p, spec).real}")
    print("nabla theta (block):")
    print(lee_covariant_derivative(p, spec, rule="block"))
    print("nabla theta (standard):")
    print(lee_covariant_derivative(p, spec, rule="standard"))


if __name__ == "__main__":
    main()
