#!/usr/bin/env python3
"""Reference integral of f(x, y) = sin(20 x^2 + 10 y) sin(pi x) sin(pi y) on [0,1]^2.

Midpoint rule at two resolutions plus Richardson extrapolation, checked
against scipy's adaptive quadrature. The result is the constant used by the
"paper-example" registry entry.
"""
import numpy as np
from scipy import integrate


def f(x, y):
    return np.sin(20 * x * x + 10 * y) * np.sin(np.pi * x) * np.sin(np.pi * y)


def midpoint(n, block=512):
    t = (np.arange(n) + 0.5) / n
    total = 0.0
    for i in range(0, n, block):
        xs, ys = np.meshgrid(t[i:i + block], t, indexing="ij")
        total += np.sum(f(xs, ys))
    return total / n / n


coarse, fine = midpoint(4096), midpoint(8192)
richardson = (4 * fine - coarse) / 3
adaptive, err = integrate.dblquad(lambda y, x: float(f(x, y)), 0, 1, 0, 1, epsabs=1e-14, epsrel=1e-14)
print(f"midpoint 4096^2 : {coarse!r}")
print(f"midpoint 8192^2 : {fine!r}  (difference {abs(fine - coarse):.3e})")
print(f"richardson      : {richardson!r}")
print(f"adaptive        : {adaptive!r}  (estimated error {err:.1e})")
assert abs(richardson - adaptive) < 1e-8
