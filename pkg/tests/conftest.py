import math

import numpy as np
import pytest

from optoent.constants import HBAR, K_B
from optoent.params import PhysicalParams, fig_spectrum, params_from_targets, table1


@pytest.fixture(scope="session")
def fig_params() -> PhysicalParams:
    """Headline spectral parameters: G = 2e6 gamma_m, G_diff = 1e4 gamma_m."""
    return fig_spectrum()


@pytest.fixture(scope="session")
def table_params() -> PhysicalParams:
    return table1()


def temperature_for_occupation(omega_m: float, n_T: float) -> float:
    """Invert the Bose factor for a requested thermal occupation."""
    return HBAR * omega_m / (K_B * math.log1p(1.0 / n_T))


def toy_symmetric(g_over_gamma_m: float = 30.0, n_T: float = 30.0) -> PhysicalParams:
    """Small-pump symmetric system where double precision resolves 1e-9 margins."""
    base = fig_spectrum()
    gm = base.omega_m / (2.0 * base.q_factor)
    import dataclasses

    base = dataclasses.replace(
        base, temperature=temperature_for_occupation(base.omega_m, n_T)
    )
    return params_from_targets(base, g_over_gamma_m * gm, 0.0)


def random_params(rng: np.random.Generator) -> PhysicalParams:
    """Physically sensible random draw in the resolved-sideband regime.

    Pump splits are kept within [0.01, 0.05] of the mean rate so the output
    coefficients stay below ~2e2 and double precision can witness the
    1e-10 commutator tolerance.
    """
    base = fig_spectrum()
    gamma_0 = float(rng.uniform(1e5, 1e6))
    gamma_p = gamma_0 * float(rng.uniform(0.7, 1.3))
    gamma_m_opt = gamma_0 * float(rng.uniform(0.7, 1.3))
    gamma_mech = gamma_0 * 10 ** float(rng.uniform(-6, -4.5))
    q_factor = base.omega_m / (2.0 * gamma_mech)
    n_T = 10 ** float(rng.uniform(3, 6))
    g_mean = gamma_0 * float(rng.uniform(0.5, 8.0))
    g_diff = g_mean * float(rng.uniform(0.01, 0.05))
    import dataclasses

    platform = dataclasses.replace(
        base,
        gamma_0=gamma_0,
        gamma_p=gamma_p,
        gamma_m_opt=gamma_m_opt,
        q_factor=q_factor,
        temperature=temperature_for_occupation(base.omega_m, n_T),
    )
    return params_from_targets(platform, g_mean, g_diff)


def random_omega(rng: np.random.Generator, p: PhysicalParams) -> float:
    gm = p.omega_m / (2.0 * p.q_factor)
    lo, hi = 1e-2 * gm, 1e2 * p.gamma_0
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
