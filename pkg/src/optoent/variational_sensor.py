"""Back-action-evading force measurement fed by the entangled output.

Symmetric configuration (equal couplings and sideband decay rates): the
difference of the output amplitude quadratures is back-action-free by
itself, and combining it with the sum channel cancels the radiation-
pressure term in post-processing exactly.  The remaining force-referred
noise is the input optical fluctuation (vacuum, or the squeezed combination
produced by the entanglement source) plus the thermal force.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .entanglement import EQUAL_WEIGHTS, epr_psd, optimize_weights
from .errors import NoSignalError, PreconditionError
from .params import PhysicalParams, derive

__all__ = [
    "SensorParams",
    "SensorTransfer",
    "sensor_transfer",
    "back_action_evading",
    "force_noise_psd",
    "sensor_from_system",
    "sensor_series",
]

# channels of the coefficient vectors below
SENSOR_CHANNELS = ("eps_+a", "eps_-a", "sqrt(2 gamma_m) q_a", "f_s_a")


@dataclass(frozen=True)
class SensorParams:
    """Symmetric-sensor inputs.

    input_psd is the spectral density of the eps_+a input channel: 1 for
    vacuum, or the (frequency-dependent) squeezed density when fed from the
    entanglement source.
    """

    eta: float
    gamma: float
    gamma_mech: float
    c0_sq: float
    n_T: float
    input_psd: float | Callable[[float], float] = 1.0

    def validate(self) -> None:
        for name in ("eta", "gamma", "gamma_mech", "c0_sq"):
            if getattr(self, name) < 0:
                raise PreconditionError(f"{name} must be nonnegative")
        if self.n_T < 0:
            raise PreconditionError("n_T must be nonnegative")

    def input_psd_at(self, omega: float) -> float:
        return float(self.input_psd(omega)) if callable(self.input_psd) else float(self.input_psd)


@dataclass(frozen=True)
class SensorTransfer:
    omega: float
    K: float            # normalized pump power 4 gamma eta^2 C0^2 / (gamma^2 + Omega^2)
    xi: complex         # cavity reflection phase
    delta_minus: np.ndarray  # coefficients of delta_a- over SENSOR_CHANNELS
    delta_plus: np.ndarray   # coefficients of delta_a+ over SENSOR_CHANNELS


def sensor_transfer(sp: SensorParams, omega: float) -> SensorTransfer:
    """Coefficient vectors of the two measured combinations."""
    sp.validate()
    g, om = sp.gamma, float(omega)
    xi = (g + 1j * om) / (g - 1j * om)
    K = 4.0 * g * sp.eta**2 * sp.c0_sq / (g**2 + om**2)
    mech = sp.gamma_mech - 1j * om
    d_minus = np.array([0.0, xi, 0.0, 0.0], dtype=complex)
    back_action = -xi * K / mech
    force = -np.sqrt(xi * K) / mech
    d_plus = np.array([xi, back_action, force, force], dtype=complex)
    return SensorTransfer(omega=om, K=K, xi=xi, delta_minus=d_minus, delta_plus=d_plus)


def back_action_evading(sp: SensorParams, omega: float) -> np.ndarray:
    """Coefficients of delta_meas = delta_a+ + K delta_a- / (gamma_m - i Omega).

    The eps_-a (back-action) coefficient cancels; the residual is reported
    as-is so callers can assert the cancellation level.
    """
    t = sensor_transfer(sp, omega)
    mech = sp.gamma_mech - 1j * float(omega)
    return t.delta_plus + (t.K / mech) * t.delta_minus


def force_noise_psd(sp: SensorParams, omega: float) -> float:
    """Force-referred noise density, in thermal-force-equivalent units.

    Normalizing the back-action-evading combination to the signal channel
    f_s_a gives

        s_force = input_psd * |gamma_m - i Omega|^2 / K + 2 gamma_m (n_T + 1/2).
    """
    sp.validate()
    om = float(omega)
    K = 4.0 * sp.gamma * sp.eta**2 * sp.c0_sq / (sp.gamma**2 + om**2)
    if K == 0.0:
        raise NoSignalError("zero optomechanical coupling: no signal transfer")
    shot = sp.input_psd_at(om) * (sp.gamma_mech**2 + om**2) / K
    thermal = 2.0 * sp.gamma_mech * (sp.n_T + 0.5)
    return shot + thermal


# ---------------------------------------------------------------------------
# Chaining with the entanglement source
# ---------------------------------------------------------------------------

def sensor_from_system(
    p: PhysicalParams, feed: str = "synodyne", symmetry_tol: float = 0.05
) -> SensorParams:
    """Build the symmetric sensor fed by the cavity's own output.

    feed selects the eps_+a input density: 'vacuum' (1), 'synodyne'
    (constant-weight combination, the default since constant weights allow
    this substitution directly), or 'optimal' (frequency-dependent weights;
    available behind this explicit flag).
    """
    d = derive(p)
    eta = 0.5 * (p.eta_p + p.eta_m)
    gamma = 0.5 * (p.gamma_p + p.gamma_m_opt)
    if eta > 0 and abs(p.eta_p - p.eta_m) > symmetry_tol * eta:
        raise PreconditionError("sensor model requires nearly symmetric couplings eta_+ ~ eta_-")
    if abs(p.gamma_p - p.gamma_m_opt) > symmetry_tol * gamma:
        raise PreconditionError("sensor model requires nearly symmetric rates gamma_+ ~ gamma_-")

    if feed == "vacuum":
        input_psd: float | Callable[[float], float] = 1.0
    elif feed == "synodyne":
        input_psd = lambda om: epr_psd(p, om, EQUAL_WEIGHTS).s_total
    elif feed == "optimal":
        input_psd = lambda om: optimize_weights(p, om)[1]
    else:
        raise PreconditionError(f"unknown feed {feed!r}; expected vacuum|synodyne|optimal")
    return SensorParams(
        eta=eta,
        gamma=gamma,
        gamma_mech=d.gamma_mech,
        c0_sq=d.C0_sq,
        n_T=d.n_T,
        input_psd=input_psd,
    )


def sensor_series(p: PhysicalParams, omegas: np.ndarray, feed: str = "synodyne") -> np.ndarray:
    """Rows (omega_rad_s, s_force_vacuum, s_force_entangled, improvement_ratio)."""
    vac = sensor_from_system(p, feed="vacuum")
    ent = sensor_from_system(p, feed=feed)
    out = np.empty((np.size(omegas), 4))
    for k, om in enumerate(np.asarray(omegas, dtype=float)):
        sv = force_noise_psd(vac, om)
        se = force_noise_psd(ent, om)
        out[k] = (om, sv, se, sv / se)
    return out
