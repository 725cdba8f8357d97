"""Stability of the pumped system against pump-laser detuning.

The classical mean-field equations are integrated to their stationary
state for a range of detunings; each fixed point is classified twice,
by the eigenvalues of the full linearization and by a kicked re-integration.
At zero detuning the system is stable at arbitrarily strong pumping (with
the upper sideband pumped harder), but a detuning of a few percent of the
cavity linewidth destabilizes the cooled mechanical branch.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from optoent.params import derive, fig_stability
from optoent.series import SpectrumSeries
from optoent.stability import detuning_sweep

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

p = fig_stability()
d = derive(p)
result = detuning_sweep(p, (1e-3 * p.gamma_0, 1e-1 * p.gamma_0), 40)

print(f"pump rates at zero detuning: G = {d.G_mean:.4g} 1/s, G+ - G- = {d.G_diff:.4g} 1/s")
print(f"stability threshold: |delta_0|/gamma_0 = {result.threshold / p.gamma_0:.4f}")
agree = all(pt.verdicts_agree for pt in result.points)
print(f"eigenvalue and time-domain verdicts agree at all {len(result.points)} points: {agree}")

det = np.array([pt.detuning for pt in result.points]) / p.gamma_0
lead = np.array([pt.leading_real for pt in result.points])
n_d = np.array([pt.n_d for pt in result.points])
stable = np.array([pt.stable for pt in result.points])

fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
ax1.semilogx(det[stable], lead[stable], "go", label="stable")
ax1.semilogx(det[~stable], lead[~stable], "rx", label="unstable")
ax1.axhline(0.0, color="k", lw=0.8)
ax1.axvline(result.threshold / p.gamma_0, color="gray", ls=":", label="threshold")
ax1.set_ylabel("leading eigenvalue Re [1/s]")
ax1.legend(fontsize=8)
ax2.loglog(det, n_d, "b.-")
ax2.set_ylabel(r"phonon estimate $n_d$")
ax2.set_xlabel(r"$\Delta_0 / \gamma_0$")
fig.tight_layout()
fig.savefig(OUT / "stability_map.png", dpi=150)

SpectrumSeries(
    columns=["detuning_over_gamma0", "leading_real_s", "n_d", "stable"],
    rows=np.column_stack([det, lead, n_d, stable.astype(float)]),
    meta={
        "demo": "stability_map",
        "threshold_over_gamma0": f"{result.threshold / p.gamma_0:.6g}",
    },
).write_csv(open(OUT / "stability_map.csv", "w"))
print(f"wrote {OUT}/stability_map.{{png,csv}}")
