import dataclasses
import math

import numpy as np
import pytest

from conftest import random_params
from optoent.linear_response import (
    check_commutators,
    default_grid,
    scattering_from_formulas,
    scattering_rows,
    single_mode_psd,
    solve_fluctuations,
    susceptibilities,
)
from optoent.params import derive, params_from_targets


def vacuum(p):
    return dataclasses.replace(p, eta_p=0.0, eta_m=0.0)


def test_zero_frequency_coefficients(fig_params):
    d = derive(fig_params)
    t = susceptibilities(fig_params, 0.0)
    assert t.xi_p == pytest.approx(1.0, rel=1e-14)
    assert t.xi_m == pytest.approx(1.0, rel=1e-14)
    assert t.Gamma_p == pytest.approx(d.G_p, rel=1e-12)
    assert t.Gamma_m_rate == pytest.approx(d.G_m, rel=1e-12)
    assert t.Gamma_mech_eff == pytest.approx(d.Gamma_m0, rel=1e-12)


def test_decoupled_cavity_coefficients(fig_params):
    t = susceptibilities(vacuum(fig_params), 1e4)
    assert t.A_p == 0 and t.A_m == 0 and t.B == 0 and t.F_p == 0 and t.F_m == 0
    assert t.cal_A_p == t.xi_p and t.cal_A_m == t.xi_m


def test_reflection_phase_at_linewidth(fig_params):
    t = susceptibilities(fig_params, fig_params.gamma_p)
    assert abs(t.xi_p) == pytest.approx(1.0, abs=1e-14)
    assert np.angle(t.xi_p) == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_unimodular_reflection_all_frequencies(fig_params):
    for om in default_grid(fig_params, 50):
        t = susceptibilities(fig_params, om)
        assert abs(t.xi_p) == pytest.approx(1.0, abs=1e-12)
        assert abs(t.xi_m) == pytest.approx(1.0, abs=1e-12)


def test_vacuum_reflection_is_pure_phase(fig_params):
    p = vacuum(fig_params)
    for om in (0.0, 1.0, 1e5):
        t = susceptibilities(p, om)
        s = solve_fluctuations(p, om)
        expected = np.zeros((4, 6), dtype=complex)
        expected[0, 0] = expected[1, 1] = t.xi_p
        expected[2, 2] = expected[3, 3] = t.xi_m
        assert np.max(np.abs(s.map - expected)) < 1e-13


def test_formulas_match_direct_solve(fig_params):
    d = derive(fig_params)
    worst = 0.0
    for om in default_grid(fig_params, 400):
        a = solve_fluctuations(fig_params, om).rows
        b = scattering_from_formulas(susceptibilities(fig_params, om), d.gamma_mech).rows
        rel = np.max(np.abs(a - b) / np.maximum.reduce([np.abs(a), np.abs(b), np.full_like(np.abs(a), 1e-300)]))
        worst = max(worst, float(rel))
    assert worst < 1e-9


def test_formulas_match_solve_random_params():
    rng = np.random.default_rng(5)
    for _ in range(5):
        p = random_params(rng)
        d = derive(p)
        for om in default_grid(p, 40):
            a = solve_fluctuations(p, om).rows
            b = scattering_from_formulas(susceptibilities(p, om), d.gamma_mech).rows
            assert np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)) < 1e-9


def test_no_optical_broadening_when_balanced(fig_params):
    d = derive(fig_params)
    balanced = params_from_targets(fig_params, d.G_mean, 0.0)
    t = susceptibilities(balanced, 0.0)
    assert t.Gamma_mech_eff == pytest.approx(d.gamma_mech, rel=1e-10)


def test_limiting_form_of_entries(fig_params):
    """Entries approach the wideband limit as the scale separation grows."""
    errors = []
    for ratio in (1e2, 1e3, 1e4):
        gamma_mech = fig_params.gamma_0 / ratio**1.5
        q_factor = fig_params.omega_m / (2.0 * gamma_mech)
        platform = dataclasses.replace(fig_params, q_factor=q_factor)
        g_diff = fig_params.gamma_0 / 2.0
        p = params_from_targets(platform, 4.0 * g_diff, g_diff)
        d = derive(p)
        om = gamma_mech  # Omega and gamma_m both << gamma_pm, G_diff
        s = solve_fluctuations(p, om)
        lim = {
            (0, 0): -(d.G_p + d.G_m) / d.G_diff,
            (0, 2): -2.0 * math.sqrt(d.G_p * d.G_m) / d.G_diff,
            (0, 4): -math.sqrt(2.0 * d.G_p) / d.G_diff,
            (2, 0): 2.0 * math.sqrt(d.G_p * d.G_m) / d.G_diff,
            (2, 2): (d.G_p + d.G_m) / d.G_diff,
            (2, 4): math.sqrt(2.0 * d.G_m) / d.G_diff,
        }
        err = max(abs(s.map[idx] - val) / abs(val) for idx, val in lim.items())
        errors.append(err)
    assert errors[1] < errors[0] / 5.0
    assert errors[2] < errors[1] / 5.0
    assert errors[2] < 1e-3


def test_commutator_preservation_grid(fig_params):
    worst = 0.0
    for om in default_grid(fig_params, 400):
        worst = max(worst, max(check_commutators(solve_fluctuations(fig_params, om)).values()))
    assert worst < 1e-10


def test_reality_property(fig_params):
    for om in (1.0, 1e3, 1e5):
        plus = scattering_rows(fig_params, om)
        minus = scattering_rows(fig_params, -om)
        assert np.max(np.abs(minus - np.conj(plus))) < 1e-12 * np.max(np.abs(plus))


def test_single_mode_psd_vacuum(fig_params):
    d = derive(fig_params)
    p = vacuum(fig_params)
    for om in (0.0, d.gamma_mech, fig_params.gamma_0):
        values = single_mode_psd(solve_fluctuations(p, om), d.n_T)
        assert max(abs(v - 1.0) for v in values) < 1e-12


def test_single_mode_psd_low_frequency_estimate(fig_params):
    d = derive(fig_params)
    om = 1e-3 * d.gamma_mech
    s_pa, _, s_ma, _ = single_mode_psd(solve_fluctuations(fig_params, om), d.n_T)
    base = ((d.G_p + d.G_m) ** 2 + 4.0 * d.G_p * d.G_m) / d.G_diff**2
    expected_p = base + 2.0 * d.G_p * d.gamma_mech * (2.0 * d.n_T + 1.0) / d.G_diff**2
    expected_m = base + 2.0 * d.G_m * d.gamma_mech * (2.0 * d.n_T + 1.0) / d.G_diff**2
    assert s_pa == pytest.approx(expected_p, rel=0.01)
    assert s_ma == pytest.approx(expected_m, rel=0.01)


def test_single_mode_psd_above_shot_noise(fig_params):
    rng = np.random.default_rng(11)
    d = derive(fig_params)
    for om in default_grid(fig_params, 80):
        values = single_mode_psd(solve_fluctuations(fig_params, om), d.n_T)
        assert min(values) >= 1.0 - 1e-9
    for _ in range(4):
        p = random_params(rng)
        dd = derive(p)
        for om in default_grid(p, 40):
            values = single_mode_psd(solve_fluctuations(p, om), dd.n_T)
            assert min(values) >= 1.0 - 1e-9


def test_default_grid_bounds(fig_params):
    d = derive(fig_params)
    grid = default_grid(fig_params, 400)
    assert grid.size == 400
    assert grid[0] == pytest.approx(1e-2 * d.gamma_mech, rel=1e-12)
    assert grid[-1] == pytest.approx(1e2 * fig_params.gamma_0, rel=1e-12)
