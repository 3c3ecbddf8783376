"""Estimate the triplet and the Levy density from one simulated sample.

The bandwidth shrinks only like (log n)^(-1/2), so even at n = 100000 the
spectral window is narrow and the jump part is heavily smoothed: gamma is
sharp, while lambda and rho carry a large, slowly vanishing bias. The
oracle checks in the test suite confirm the bias is exactly what the
deterministic part of the estimator predicts.
"""

import numpy as np

from spectral_levy import (
    ClassParams, JumpDensity, LevyTriplet, default_config, estimate, estimate_rho,
    levy_density, mise, simulate_increments,
)


triplet = LevyTriplet(1.0, 1.0, 1.0, JumpDensity.gaussian(0.0, 1.0))
params = ClassParams(beta=1.0, L=10.0, Lambda=2.0, K=10.0, Sigma=2.0, Gamma=2.0, C=10.0)

for n in (1_000, 100_000):
    x = simulate_increments(triplet, n, seed=(1, n)).values
    config = default_config(n, params)
    grid, est = estimate(x, config, params)
    density = estimate_rho(x, est, grid, config)
    print(f"n={n:>6}  h={config.h:.3f}  sigma2={est.sigma2_hat:.3f}  lambda={est.lambda_hat:.3f}  "
          f"gamma={est.gamma_hat:.3f}  ISE={mise(density, triplet):.4f}")

mid = slice(450, 551, 25)
print("x      ", np.round(density.x[mid], 2))
print("rho_hat", np.round(density.rho_hat[mid], 3))
print("rho    ", np.round(levy_density(density.x[mid], triplet), 3))
