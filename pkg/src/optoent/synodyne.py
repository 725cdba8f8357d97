"""Two-carrier local-oscillator (synodyne) detection with constant weights.

A balanced homodyne detector whose local oscillator carries both sideband
frequencies measures a fixed weighted combination of the two output
sidebands; rapidly oscillating photocurrent terms are dropped.  With real
oscillator amplitudes the measured observable is the amplitude-quadrature
combination z_+ b_+a + z_- b_-a with constant real weights.

The equal-weight (z = 1/sqrt 2) spectral density has a closed form which is
cross-validated against the scattering-map route; its entanglement
bandwidth is set by thermal noise rather than the optical linewidth, hence
much narrower than the frequency-dependent optimal detection when the
optical damping is weak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entanglement import (
    EQUAL_WEIGHTS,
    CombinationWeights,
    noise_quadratic_form,
    zero_frequency_minimum,
)
from .errors import BandwidthUndefinedError, InvalidParameterError, SingularResponseError
from .linear_response import default_grid, scattering_rows, susceptibilities
from .params import PhysicalParams, derive

__all__ = [
    "LocalOscillator",
    "MeasuredCombination",
    "photocurrent_weights",
    "synodyne_psd",
    "synodyne_psd_formula",
    "SynodyneBandwidth",
    "synodyne_bandwidth",
]


@dataclass(frozen=True)
class LocalOscillator:
    """Two-carrier local oscillator amplitudes (arbitrary common scale)."""

    amp_p: complex
    amp_m: complex


@dataclass(frozen=True)
class MeasuredCombination:
    """Which fixed combination a given local oscillator selects."""

    weights: CombinationWeights
    basis: str  # 'amplitude' | 'phase' | 'mixed'


def photocurrent_weights(lo: LocalOscillator) -> MeasuredCombination:
    """Map local-oscillator amplitudes to the measured combination.

    Real amplitudes select the amplitude-quadrature combination with
    z_pm proportional to A_pm; purely imaginary amplitudes select the phase
    quadratures; general phases give the fixed pair
    theta = atan2(|A+|, |A-|), phi = arg A_- - arg A_+.
    """
    ap, am = complex(lo.amp_p), complex(lo.amp_m)
    if ap == 0 and am == 0:
        raise InvalidParameterError("local_oscillator", "both amplitudes are zero")
    theta = math.atan2(abs(ap), abs(am))
    if ap.imag == 0.0 and am.imag == 0.0:
        basis = "amplitude"
        phi = 0.0 if ap.real * am.real >= 0 else math.pi
    elif ap.real == 0.0 and am.real == 0.0:
        basis = "phase"
        phi = 0.0 if ap.imag * am.imag >= 0 else math.pi
    else:
        basis = "mixed"
        phi = float(np.angle(am) - np.angle(ap)) if ap != 0 and am != 0 else 0.0
    return MeasuredCombination(weights=CombinationWeights(theta=theta, phi=phi), basis=basis)


def synodyne_psd(p: PhysicalParams, omega: float) -> float:
    """Spectral density measured with constant equal weights z = 1/sqrt 2.

    Computed from the directly solved scattering map; the closed-form
    expression is available as :func:`synodyne_psd_formula` for validation.
    """
    alpha, beta, h = noise_quadratic_form(p, omega)
    return 0.5 * (alpha + beta) + h.real


def synodyne_psd_formula(p: PhysicalParams, omega: float) -> float:
    """Closed-form equal-weight spectral density.

    Evaluates the two quantum terms and the thermal term built from
    Delta = sqrt((1 + conj(xi_+))(1 + xi_-)) - 2 and the square roots of the
    pump-rate susceptibilities; all square roots stay on the principal
    branch for positive couplings.
    """
    t = susceptibilities(p, omega)
    d = derive(p)
    den = d.gamma_mech + t.Gamma_p - t.Gamma_m_rate - 1j * omega
    if den == 0:
        raise SingularResponseError(omega, "equal-weight response denominator vanishes")
    sqrt_gp = np.sqrt(t.Gamma_p)
    sqrt_gm = np.sqrt(t.Gamma_m_rate)
    delta = np.sqrt((1.0 + np.conj(t.xi_p)) * (1.0 + t.xi_m)) - 2.0
    n1 = (
        d.gamma_mech
        - (np.conj(sqrt_gp) - sqrt_gm) ** 2
        - 1j * omega
        + delta * np.sqrt(np.conj(t.Gamma_p) * t.Gamma_m_rate)
    )
    n2 = (
        d.gamma_mech
        + (sqrt_gp - np.conj(sqrt_gm)) ** 2
        - 1j * omega
        - np.conj(delta) * np.sqrt(t.Gamma_p * np.conj(t.Gamma_m_rate))
    )
    thermal_num = -np.sqrt(1.0 + t.xi_p) * sqrt_gp + np.sqrt(1.0 + t.xi_m) * sqrt_gm
    s_quantum = 0.5 * abs(n1 / den) ** 2 + 0.5 * abs(n2 / den) ** 2
    s_thermal = d.gamma_mech * (d.n_T + 0.5) * abs(thermal_num / den) ** 2
    return float(s_quantum + s_thermal)


@dataclass(frozen=True)
class SynodyneBandwidth:
    analytic: float  # (sqrt(G+) - sqrt(G-)) sqrt(2 gamma_m (n_T + 1/2))
    numeric: float   # bisected crossing s_syno = 2 * zero-frequency minimum


def synodyne_bandwidth(p: PhysicalParams, n_points: int = 400) -> SynodyneBandwidth:
    """Measurement bandwidth of the constant-weight detection.

    The numeric value is the bisected crossing of the equal-weight spectrum
    through twice the zero-frequency minimum; the analytic estimate is
    (sqrt(G+) - sqrt(G-)) sqrt(2 gamma_m (n_T + 1/2)).
    """
    d = derive(p)
    s0 = synodyne_psd(p, 0.0)
    if s0 >= 0.5:
        raise BandwidthUndefinedError(
            f"equal-weight zero-frequency density {s0!r} is not below 1/2"
        )
    analytic = (math.sqrt(d.G_p) - math.sqrt(d.G_m)) * math.sqrt(
        2.0 * d.gamma_mech * (d.n_T + 0.5)
    )
    target = 2.0 * zero_frequency_minimum(p)
    grid = default_grid(p, n_points)
    rows = scattering_rows(p, grid)
    w = np.array([1.0, 1.0, d.n_T + 0.5])
    alpha = np.sum(w * np.abs(rows[:, 0, :]) ** 2, axis=1)
    beta = np.sum(w * np.abs(rows[:, 1, :]) ** 2, axis=1)
    re_h = np.real(np.sum(w * rows[:, 0, :] * np.conj(rows[:, 1, :]), axis=1))
    values = 0.5 * (alpha + beta) + re_h
    above = np.nonzero(values > target)[0]
    if above.size == 0:
        raise BandwidthUndefinedError("equal-weight spectrum never crosses the doubling target")
    i = int(above[0])
    if i == 0:
        raise BandwidthUndefinedError("equal-weight spectrum already above target at grid start")
    lo, hi = float(grid[i - 1]), float(grid[i])
    for _ in range(60):
        mid = math.sqrt(lo * hi)
        if synodyne_psd(p, mid) > target:
            hi = mid
        else:
            lo = mid
        if hi / lo < 1.0 + 1e-9:
            break
    return SynodyneBandwidth(analytic=analytic, numeric=0.5 * (lo + hi))


# re-export for callers composing constant-weight measurements
EQUAL = EQUAL_WEIGHTS
