"""Resolvent-norm landscape of the Davies operator.

Maps ||(A - z)^{-1}|| on a rectangle covering the first few eigenvalues of
-d^2/dx^2 + i x^2, writes the grid to CSV/JSON, prints the disk-law ratios
resolvent_norm * delta / kappa near the 4th eigenvalue, and renders a
contour plot when matplotlib is importable.
"""

import math

import numpy as np

from spectral_instability import (DiscretizationConfig, GridSpec,
                                  OscillatorParams, disk_inclusion_check,
                                  resolvent_grid, solve_spectrum)
from spectral_instability.pseudospectra import write_grid_csv, write_grid_json

params = OscillatorParams(1, math.pi / 2)
config = DiscretizationConfig(basis_size=200, n_max=12, scale=1.0)

result = solve_spectrum(params, config)
lams = result.eigenvalues()
print("first eigenvalues (on the half-line arg = pi/4):")
for pair in result.pairs[:6]:
    print(f"  lambda_{pair.index} = {pair.eigenvalue:.6f}   "
          f"kappa = {pair.kappa:.4f}")

spec = GridSpec(re_min=0.0, re_max=9.0, im_min=0.0, im_max=9.0, nx=61, ny=61)
grid = resolvent_grid(params, config, spec)
write_grid_csv(grid, "pseudospectrum.csv")
write_grid_json(grid, "pseudospectrum.json")
print("\nwrote pseudospectrum.csv / pseudospectrum.json "
      f"({spec.nx}x{spec.ny} nodes)")

lam4 = abs(lams[3])
deltas = [lam4 * 10.0 ** -e for e in (2, 3, 4)]
print("\ndisk law near lambda_4: resolvent_norm * delta / kappa_4 -> 1")
for delta, ratio in disk_inclusion_check(params, config, 4, deltas):
    print(f"  delta = {delta:.3e}: ratio = {ratio:.6f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not available; skipping the contour plot")
else:
    z = np.log10(np.minimum(grid.values, 1e16))
    fig, ax = plt.subplots(figsize=(6, 5))
    cs = ax.contour(spec.re_points(), spec.im_points(), z,
                    levels=np.arange(0, 9), cmap="viridis")
    ax.clabel(cs, fmt="%d")
    ax.plot(lams.real, lams.imag, "k.", markersize=8)
    ax.set(xlabel="Re z", ylabel="Im z",
           title="log10 resolvent norm, k=1, theta=pi/2")
    fig.savefig("pseudospectrum.png", dpi=150, bbox_inches="tight")
    print("wrote pseudospectrum.png")
