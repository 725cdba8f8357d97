"""Physical inputs, derived steady-state quantities, presets and parameter files.

Conventions
-----------
All rates and frequencies are angular, in rad/s (written 1/s throughout).
Plain frequencies in Hz are accepted only at the file/CLI boundary
(`f_m_hz` key) and converted on ingestion.

The membrane-in-cavity presets store pump-rate targets (G_mean, G_diff)
rather than the raw coupling constants eta_pm; the couplings are computed
on load by inverting G_pm = eta_pm^2 C0^2 / gamma_pm at the preset's input
power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import TextIO

from .constants import C_LIGHT, HBAR, K_B
from .errors import InfeasibleTargetError, InvalidParameterError

__all__ = [
    "PhysicalParams",
    "DerivedParams",
    "derive",
    "couplings_for_target",
    "params_from_targets",
    "table1",
    "fig_spectrum",
    "fig_stability",
    "preset",
    "PRESET_NAMES",
    "FILE_KEYS",
    "params_to_dict",
    "params_from_dict",
    "load_params_file",
    "dump_params_file",
    "apply_overrides",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Raw experiment inputs.

    Attributes
    ----------
    m : effective mass of the mechanical oscillator [kg]
    omega_m : mechanical angular frequency [rad/s]
    q_factor : mechanical quality factor, Q = omega_m / (2 gamma_m)
    temperature : bath temperature [K]
    cavity_length : effective cavity length [m] (carried, not used in spectra)
    gamma_0, gamma_p, gamma_m_opt : optical coupling rates of the pumped
        mode and the +/- sideband modes [1/s]
    lambda_0 : pump wavelength [m]
    p_in : input optical power [W]
    eta_p, eta_m : optomechanical coupling constants of the +/- modes
    delta_0 : pump detuning from its mode [rad/s]
    """

    m: float
    omega_m: float
    q_factor: float
    temperature: float
    cavity_length: float
    gamma_0: float
    gamma_p: float
    gamma_m_opt: float
    lambda_0: float
    p_in: float
    eta_p: float
    eta_m: float
    delta_0: float = 0.0

    def validate(self) -> None:
        positive = [
            ("m", self.m),
            ("omega_m", self.omega_m),
            ("q_factor", self.q_factor),
            ("temperature", self.temperature),
            ("cavity_length", self.cavity_length),
            ("gamma_0", self.gamma_0),
            ("gamma_p", self.gamma_p),
            ("gamma_m_opt", self.gamma_m_opt),
            ("lambda_0", self.lambda_0),
            ("p_in", self.p_in),
        ]
        for name, value in positive:
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise InvalidParameterError(name, f"must be finite, got {value!r}")
            if value <= 0:
                raise InvalidParameterError(name, f"must be strictly positive, got {value!r}")
        for name, value in [("eta_p", self.eta_p), ("eta_m", self.eta_m), ("delta_0", self.delta_0)]:
            if not math.isfinite(value):
                raise InvalidParameterError(name, f"must be finite, got {value!r}")


@dataclass(frozen=True)
class DerivedParams:
    """Steady-state quantities computed from :class:`PhysicalParams`."""

    gamma_mech: float  # mechanical damping rate gamma_m [1/s]
    x0: float          # zero-point amplitude [m]
    n_T: float         # thermal occupation (dimensionless)
    omega_0: float     # optical angular frequency [rad/s]
    A0_sq: float       # input photon flux |A0|^2 [1/s]
    C0_sq: float       # intracavity photon number C0^2
    G_p: float         # pump rate of the + mode [1/s]
    G_m: float         # pump rate of the - mode [1/s]
    G_mean: float      # (G+ + G-)/2 [1/s]
    G_diff: float      # G+ - G- [1/s]
    Gamma_m0: float    # gamma_m + G+ - G- [1/s]


def thermal_occupation(omega_m: float, temperature: float) -> float:
    """Bose factor (exp(hbar w / kB T) - 1)^-1, safe against underflow at low T."""
    x = HBAR * omega_m / (K_B * temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


@lru_cache(maxsize=256)
def derive(p: PhysicalParams) -> DerivedParams:
    """Compute all derived steady-state quantities.

    The mean intracavity amplitude is real: C0 = sqrt(2/gamma_0) A0, with
    the input normalized so hbar*omega_0*|A0|^2 is the incident power.
    """
    p.validate()
    gamma_mech = p.omega_m / (2.0 * p.q_factor)
    x0 = math.sqrt(HBAR / (2.0 * p.m * p.omega_m))
    n_T = thermal_occupation(p.omega_m, p.temperature)
    omega_0 = 2.0 * math.pi * C_LIGHT / p.lambda_0
    A0_sq = p.p_in / (HBAR * omega_0)
    C0_sq = 2.0 * A0_sq / p.gamma_0
    G_p = p.eta_p**2 * C0_sq / p.gamma_p
    G_m = p.eta_m**2 * C0_sq / p.gamma_m_opt
    G_diff = G_p - G_m
    return DerivedParams(
        gamma_mech=gamma_mech,
        x0=x0,
        n_T=n_T,
        omega_0=omega_0,
        A0_sq=A0_sq,
        C0_sq=C0_sq,
        G_p=G_p,
        G_m=G_m,
        G_mean=0.5 * (G_p + G_m),
        G_diff=G_diff,
        Gamma_m0=gamma_mech + G_diff,
    )


def couplings_for_target(
    p: PhysicalParams, g_mean_target: float, g_diff_target: float
) -> tuple[float, float]:
    """Invert G_pm = eta_pm^2 C0^2 / gamma_pm for the couplings.

    Returns (eta_p, eta_m) such that the derived pump rates equal
    g_mean_target +- g_diff_target/2 at p's input power.
    """
    g_plus = g_mean_target + 0.5 * g_diff_target
    g_minus = g_mean_target - 0.5 * g_diff_target
    if g_plus <= 0 or g_minus < 0:
        raise InfeasibleTargetError(
            f"targets G+ = {g_plus!r}, G- = {g_minus!r} require nonnegative pump rates"
        )
    d = derive(replace(p, eta_p=0.0, eta_m=0.0))
    eta_p = math.sqrt(g_plus * p.gamma_p / d.C0_sq)
    eta_m = math.sqrt(g_minus * p.gamma_m_opt / d.C0_sq)
    return eta_p, eta_m


def params_from_targets(p: PhysicalParams, g_mean: float, g_diff: float) -> PhysicalParams:
    """Copy of p with couplings set to realize the requested pump rates."""
    eta_p, eta_m = couplings_for_target(p, g_mean, g_diff)
    return replace(p, eta_p=eta_p, eta_m=eta_m)


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

def _membrane_platform() -> PhysicalParams:
    # Silicon nitride membrane oscillator in a 10 cm cavity, 1.55 um pump.
    return PhysicalParams(
        m=5e-11,
        omega_m=2.0 * math.pi * 2e6,
        q_factor=0.6e7,
        temperature=10.0,
        cavity_length=0.10,
        gamma_0=3e5,
        gamma_p=3e5,
        gamma_m_opt=3e5,
        lambda_0=1.55e-6,
        p_in=1e-2,
        eta_p=0.0,
        eta_m=0.0,
        delta_0=0.0,
    )


def table1(g_diff_over_gamma_m: float = 1e4) -> PhysicalParams:
    """Membrane preset with the tabulated pump parameter G = 2.2e6 1/s.

    The pump-rate split G+ - G- defaults to 1e4 gamma_m, the value used for
    the headline spectra.
    """
    base = _membrane_platform()
    gm = base.omega_m / (2.0 * base.q_factor)
    return params_from_targets(base, 2.2e6, g_diff_over_gamma_m * gm)


def fig_spectrum(g_diff_over_gamma_m: float = 1e4) -> PhysicalParams:
    """Membrane preset with G = 2e6 gamma_m, the value used in the spectral plots."""
    base = _membrane_platform()
    gm = base.omega_m / (2.0 * base.q_factor)
    return params_from_targets(base, 2e6 * gm, g_diff_over_gamma_m * gm)


def fig_stability() -> PhysicalParams:
    """Membrane preset for the detuning sweep.

    Uses the tabulated G = 2.2e6 1/s and a pump split G+ - G- = 5e4 gamma_m,
    which keeps |G+ - G-| < 0.05 G and reproduces the reported stability
    boundary |delta_0|/gamma_0 ~ 2e-2.
    """
    base = _membrane_platform()
    gm = base.omega_m / (2.0 * base.q_factor)
    return params_from_targets(base, 2.2e6, 5e4 * gm)


PRESET_NAMES = ("table1", "fig1", "fig5")


def preset(name: str) -> PhysicalParams:
    """Look up a named preset ('table1', 'fig1', 'fig5')."""
    if name == "table1":
        return table1()
    if name == "fig1":
        return fig_spectrum()
    if name == "fig5":
        return fig_stability()
    raise InvalidParameterError("preset", f"unknown preset {name!r}; expected one of {PRESET_NAMES}")


# ---------------------------------------------------------------------------
# Flat key/value parameter files
# ---------------------------------------------------------------------------

FILE_KEYS = (
    "mass_kg",
    "f_m_hz",
    "q_factor",
    "temp_k",
    "length_m",
    "gamma0_s",
    "gammap_s",
    "gammam_s",
    "lambda_m",
    "p_in_w",
    "g_mean_s",
    "g_diff_s",
    "detuning_s",
)


def params_to_dict(p: PhysicalParams) -> dict[str, float]:
    """Flat file representation: pump-rate targets at p's power, not couplings."""
    d = derive(p)
    return {
        "mass_kg": p.m,
        "f_m_hz": p.omega_m / (2.0 * math.pi),
        "q_factor": p.q_factor,
        "temp_k": p.temperature,
        "length_m": p.cavity_length,
        "gamma0_s": p.gamma_0,
        "gammap_s": p.gamma_p,
        "gammam_s": p.gamma_m_opt,
        "lambda_m": p.lambda_0,
        "p_in_w": p.p_in,
        "g_mean_s": d.G_mean,
        "g_diff_s": d.G_diff,
        "detuning_s": p.delta_0,
    }


def params_from_dict(values: dict[str, float]) -> PhysicalParams:
    unknown = set(values) - set(FILE_KEYS)
    if unknown:
        raise InvalidParameterError("file", f"unknown keys {sorted(unknown)}")
    missing = set(FILE_KEYS) - set(values)
    if missing:
        raise InvalidParameterError("file", f"missing keys {sorted(missing)}")
    base = PhysicalParams(
        m=values["mass_kg"],
        omega_m=2.0 * math.pi * values["f_m_hz"],
        q_factor=values["q_factor"],
        temperature=values["temp_k"],
        cavity_length=values["length_m"],
        gamma_0=values["gamma0_s"],
        gamma_p=values["gammap_s"],
        gamma_m_opt=values["gammam_s"],
        lambda_0=values["lambda_m"],
        p_in=values["p_in_w"],
        eta_p=0.0,
        eta_m=0.0,
        delta_0=values["detuning_s"],
    )
    return params_from_targets(base, values["g_mean_s"], values["g_diff_s"])


def load_params_file(fp: TextIO) -> PhysicalParams:
    """Parse a flat 'key = value' text file (blank lines and # comments allowed)."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(fp, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError("file", f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, text = line.partition("=")
        key = key.strip()
        try:
            values[key] = float(text.strip())
        except ValueError:
            raise InvalidParameterError("file", f"line {lineno}: bad number {text.strip()!r}") from None
    return params_from_dict(values)


def dump_params_file(p: PhysicalParams, fp: TextIO) -> None:
    for key, value in params_to_dict(p).items():
        fp.write(f"{key} = {value:.17g}\n")


def apply_overrides(p: PhysicalParams, overrides: dict[str, float]) -> PhysicalParams:
    """Apply file-key overrides to an existing parameter set.

    Pump-rate targets (g_mean_s, g_diff_s) re-derive the couplings at the
    current input power.  All other keys are physical overrides applied with
    the couplings held fixed, so e.g. overriding p_in_w scales the realized
    pump rates proportionally (same device, more power).
    """
    unknown = set(overrides) - set(FILE_KEYS)
    if unknown:
        raise InvalidParameterError("override", f"unknown keys {sorted(unknown)}")
    target_keys = {"g_mean_s", "g_diff_s"}
    if target_keys & set(overrides):
        d = derive(p)
        g_mean = overrides.get("g_mean_s", d.G_mean)
        g_diff = overrides.get("g_diff_s", d.G_diff)
        p = params_from_targets(p, g_mean, g_diff)
    field_map = {
        "mass_kg": "m",
        "q_factor": "q_factor",
        "temp_k": "temperature",
        "length_m": "cavity_length",
        "gamma0_s": "gamma_0",
        "gammap_s": "gamma_p",
        "gammam_s": "gamma_m_opt",
        "lambda_m": "lambda_0",
        "p_in_w": "p_in",
        "detuning_s": "delta_0",
    }
    for key, value in overrides.items():
        if key in target_keys:
            continue
        if key == "f_m_hz":
            p = replace(p, omega_m=2.0 * math.pi * value)
        else:
            p = replace(p, **{field_map[key]: value})
    p.validate()
    return p
