"""Build the spectral kernels for a few smoothness indices and check their moments."""

import numpy as np

from spectral_levy import build_kernels, verify_moments

for beta in (0.5, 1.0, 2.0, 3.0):
    print(f"beta = {beta}")
    for k in build_kernels(beta):
        poly = " + ".join(f"({c}) t^{e}" for e, c in k.exact_terms)
        worst = max(verify_moments(k).residuals)
        print(f"  {k.kind}: {poly}    worst moment residual {worst:.1e}")

# scaled kernels live on [-1/h, 1/h]
v, u, w = build_kernels(1.0)
t = np.linspace(-3, 3, 7)
print("v^h on", t, "with h = 0.5:", v(t, 0.5))
