"""Optimal combination angles theta(Omega) and phi(Omega).

The weights minimizing the combined-quadrature noise are parametrized by a
mixing angle theta and a relative phase phi.  The angle barely moves from
pi/4, while the phase rotates from 0 to pi/2 across the band; the rotation
happens around the effective (optically broadened) mechanical bandwidth,
so stronger pump-rate asymmetry pushes it to higher frequencies.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from optoent.entanglement import optimal_spectrum
from optoent.linear_response import default_grid
from optoent.params import apply_overrides, derive, fig_spectrum
from optoent.series import SpectrumSeries

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

base = fig_spectrum()
gm = derive(base).gamma_mech
grid = default_grid(base, 300)

fig, (ax_t, ax_p) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
styles = {1e3: "k-", 1e4: "b--", 1e5: "r:"}
rows_out = [grid]
for split, style in styles.items():
    p = apply_overrides(base, {"g_diff_s": split * gm})
    spec = optimal_spectrum(p, grid)
    label = rf"$G_+-G_- = 10^{int(np.log10(split))}\,\gamma_m$"
    ax_t.semilogx(grid, spec[:, 4], style, label=label)
    ax_p.semilogx(grid, spec[:, 5], style, label=label)
    rows_out += [spec[:, 4], spec[:, 5]]
    print(f"split {split:.0e} gamma_m: phi spans {spec[0, 5]:+.3f} .. {spec[-1, 5]:+.3f} rad")

ax_t.set_ylabel(r"$\theta$ [rad]")
ax_t.axhline(np.pi / 4, color="gray", lw=0.8, ls=":")
ax_p.set_ylabel(r"$\phi$ [rad]")
ax_p.axhline(np.pi / 2, color="gray", lw=0.8, ls=":")
ax_p.set_xlabel(r"spectral frequency $\Omega$ [rad/s]")
ax_t.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "optimal_angles.png", dpi=150)

SpectrumSeries(
    columns=["omega_rad_s"]
    + [f"{q}_{s:.0e}" for s in styles for q in ("theta", "phi")],
    rows=np.column_stack(rows_out),
    meta={"demo": "optimal_angles"},
).write_csv(open(OUT / "optimal_angles.csv", "w"))
print(f"wrote {OUT}/optimal_angles.{{png,csv}}")
