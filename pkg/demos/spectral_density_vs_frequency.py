"""Optimized sideband-combination noise spectrum across the band.

Sweeps the spectral frequency over eight decades and plots the spectral
density of the optimally weighted sum of the two output sideband amplitude
quadratures, in shot-noise units.  Two pump powers are shown: the noise
floor scales inversely with the pump rate while the entanglement band stays
pinned to the cavity linewidth.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from optoent.entanglement import optimal_spectrum, thermal_floor
from optoent.linear_response import default_grid
from optoent.params import apply_overrides, derive, fig_spectrum
from optoent.series import SpectrumSeries

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

p = fig_spectrum()          # G = 2e6 gamma_m, G+ - G- = 1e4 gamma_m
p5 = apply_overrides(p, {"p_in_w": 5.0 * p.p_in})   # same cavity, 5x power
d = derive(p)

grid = default_grid(p, 400)
base = optimal_spectrum(p, grid)
boosted = optimal_spectrum(p5, grid)

print(f"thermal phonons        n_T   = {d.n_T:.3g}")
print(f"noise floor (P_in)           = {base[0, 3]:.4f}  (analytic {thermal_floor(p):.4f})")
print(f"noise floor (5 P_in)         = {boosted[0, 3]:.4f} (analytic {thermal_floor(p5):.4f})")

fig, ax = plt.subplots(figsize=(6, 4))
ax.loglog(grid, base[:, 3], "b--", label=r"$P_\mathrm{in}$")
ax.loglog(grid, boosted[:, 3], "r:", label=r"$5\,P_\mathrm{in}$")
ax.axhline(1.0, color="k", lw=1, label="shot-noise limit")
ax.axvline(p.gamma_0, color="gray", lw=0.8, ls=":")
ax.text(p.gamma_0 * 1.2, 2e-3, r"$\gamma_0$", color="gray")
ax.set_xlabel(r"spectral frequency $\Omega$ [rad/s]")
ax.set_ylabel(r"$S_{\beta_{+a}}$ (shot-noise units)")
ax.set_ylim(1e-3, 3)
ax.legend(loc="lower right")
fig.tight_layout()
fig.savefig(OUT / "spectral_density_vs_frequency.png", dpi=150)

SpectrumSeries(
    columns=["omega_rad_s", "s_total_base", "s_total_5x"],
    rows=np.column_stack([grid, base[:, 3], boosted[:, 3]]),
    meta={"demo": "spectral_density_vs_frequency"},
).write_csv(open(OUT / "spectral_density_vs_frequency.csv", "w"))
print(f"wrote {OUT}/spectral_density_vs_frequency.{{png,csv}}")
