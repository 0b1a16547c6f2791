"""Closed-form constants of the instability analysis.

For a few parameter pairs: the saddle of the ray phase, the exponential
growth rate, the Laplace prefactor of the eigenfunction norm, the Weyl
coefficient and the k = 1 semigroup threshold.  Also checks the Weyl law
against a quartic eigensolve.
"""

import math

from spectral_instability import (DiscretizationConfig, OscillatorParams,
                                  asymptotic_report, solve_spectrum,
                                  weyl_modulus)

print(f"{'k':>2} {'theta':>8} {'x_saddle':>10} {'phase':>10} "
      f"{'rate c':>10} {'prefactor':>10} {'T(theta)':>9}")
for k, theta in ((1, 0.4), (1, math.pi / 2), (2, 0.8), (2, math.pi / 4),
                 (3, 0.5)):
    rep = asymptotic_report(OscillatorParams(k, theta))
    thr = "-" if rep.semigroup_threshold is None \
        else f"{rep.semigroup_threshold:9.5f}"
    print(f"{k:>2} {theta:>8.4f} {rep.x_saddle:>10.6f} "
          f"{rep.phase_at_saddle:>10.6f} {rep.growth_rate:>10.6f} "
          f"{rep.laplace_prefactor:>10.5f} {thr:>9}")

print("\nWeyl law vs computed quartic spectrum (k = 2, theta = 0):")
result = solve_spectrum(OscillatorParams(2, 0.0),
                        DiscretizationConfig(basis_size=300, n_max=20))
print(f"{'n':>3} {'|lambda_n|':>14} {'Weyl leading':>14} {'rel gap':>10}")
for n in (1, 2, 5, 10, 15, 20):
    lam = abs(result.pairs[n - 1].eigenvalue)
    weyl = weyl_modulus(n - 1, 2)
    print(f"{n:>3} {lam:>14.8f} {weyl:>14.8f} {lam / weyl - 1.0:>10.2e}")
