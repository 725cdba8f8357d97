"""Non-degenerate chi(2) parametric amplifier reference model.

Below threshold (G_par < sqrt(gamma_1 gamma_2)) the symmetric output
combinations g_- = (b_1a - b_2a)/sqrt 2 and g_+ = (b_1phi + b_2phi)/sqrt 2
share one spectral density with closed-form minimum and bandwidth.  Used to
contrast the depth/width anticorrelation of parametric entanglement with
the optomechanical source, where depth and bandwidth decouple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ThresholdError

__all__ = [
    "OpaParams",
    "opa_psd",
    "opa_minimum",
    "OpaBandwidth",
    "opa_bandwidth",
    "match_gain_for_depth",
    "opa_scattering_rows",
]


@dataclass(frozen=True)
class OpaParams:
    gamma_1: float  # mode 1 decay rate [1/s]
    gamma_2: float  # mode 2 decay rate [1/s]
    g_par: float    # parametric gain [1/s]

    def validate(self) -> None:
        if self.gamma_1 <= 0 or self.gamma_2 <= 0:
            raise ThresholdError(f"decay rates must be positive, got {self.gamma_1}, {self.gamma_2}")
        if self.g_par < 0:
            raise ThresholdError(f"parametric gain must be nonnegative, got {self.g_par}")
        if self.g_par >= math.sqrt(self.gamma_1 * self.gamma_2):
            raise ThresholdError(
                f"gain {self.g_par} at or above threshold sqrt(g1 g2) = "
                f"{math.sqrt(self.gamma_1 * self.gamma_2)}"
            )


def opa_psd(p: OpaParams, omega) -> float | np.ndarray:
    """One-sided spectral density of the symmetric combinations g_pm."""
    p.validate()
    om = np.asarray(omega, dtype=float)
    g1, g2, gp = p.gamma_1, p.gamma_2, p.g_par
    root = math.sqrt(g1 * g2)
    num = ((root - gp) ** 2 + om**2) ** 2 + om**2 * (g1 - g2) ** 2
    den = (g1 * g2 - gp**2 - om**2) ** 2 + om**2 * (g1 + g2) ** 2
    out = num / den
    return float(out) if out.ndim == 0 else out


def opa_minimum(p: OpaParams) -> float:
    """Spectral-density minimum ((sqrt(g1 g2) - G)/(sqrt(g1 g2) + G))^2, at Omega = 0."""
    p.validate()
    root = math.sqrt(p.gamma_1 * p.gamma_2)
    return ((root - p.g_par) / (root + p.g_par)) ** 2


@dataclass(frozen=True)
class OpaBandwidth:
    analytic: float
    numeric: float | None  # bisected crossing s_g = 2 * min; None when not applicable
    applicable: bool       # False when the minimum is too shallow to double below 1


def opa_bandwidth(p: OpaParams, omega_max_factor: float = 100.0) -> OpaBandwidth:
    """Entanglement bandwidth of the amplifier.

    Analytic estimate
        4 g1 g2 sqrt(min S) / (g1 + g2) * (1 - 4 g1 g2 sqrt(min S) / (g1+g2)^2)
    plus a numerically bisected doubling crossing for cross-validation.
    """
    s_min = opa_minimum(p)
    g1, g2 = p.gamma_1, p.gamma_2
    lead = 4.0 * g1 * g2 * math.sqrt(s_min) / (g1 + g2)
    analytic = lead * (1.0 - lead / (g1 + g2))
    applicable = s_min < 0.5
    numeric = None
    if applicable:
        target = 2.0 * s_min
        hi = omega_max_factor * max(g1, g2)
        lo = 0.0
        if opa_psd(p, hi) <= target:
            applicable = False
        else:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if opa_psd(p, mid) > target:
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-12 * max(g1, g2):
                    break
            numeric = 0.5 * (lo + hi)
    return OpaBandwidth(analytic=analytic, numeric=numeric, applicable=applicable)


def match_gain_for_depth(gamma_1: float, gamma_2: float, s_target: float) -> OpaParams:
    """Gain reproducing a requested spectral-density minimum s_target in (0, 1]."""
    if not 0.0 < s_target <= 1.0:
        raise ThresholdError(f"target minimum must lie in (0, 1], got {s_target!r}")
    root = math.sqrt(gamma_1 * gamma_2)
    g = root * (1.0 - math.sqrt(s_target)) / (1.0 + math.sqrt(s_target))
    return OpaParams(gamma_1=gamma_1, gamma_2=gamma_2, g_par=g)


def opa_scattering_rows(p: OpaParams, omega: float) -> np.ndarray:
    """Annihilation-basis output rows (b_1(O), b_2^dag(-O)) over (a_1(O), a_2^dag(-O)).

    Direct solve of the two-mode amplifier response; used for the optional
    frequency-dependent-weight check on the amplifier combinations.
    """
    p.validate()
    g1, g2, gp = p.gamma_1, p.gamma_2, p.g_par
    m = np.array([[g1 - 1j * omega, -gp], [-gp, g2 - 1j * omega]], dtype=complex)
    drive = np.diag([math.sqrt(2.0 * g1), math.sqrt(2.0 * g2)]).astype(complex)
    sol = np.linalg.solve(m, drive)
    rows = np.empty((2, 2), dtype=complex)
    rows[0] = math.sqrt(2.0 * g1) * sol[0]
    rows[0, 0] -= 1.0
    rows[1] = math.sqrt(2.0 * g2) * sol[1]
    rows[1, 1] -= 1.0
    return rows
