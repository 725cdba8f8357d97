import dataclasses
import math

import numpy as np
import pytest

from optoent.errors import NoSignalError, PreconditionError
from optoent.linear_response import default_grid
from optoent.params import derive
from optoent.synodyne import synodyne_psd
from optoent.variational_sensor import (
    SensorParams,
    back_action_evading,
    force_noise_psd,
    sensor_from_system,
    sensor_series,
    sensor_transfer,
)


def make_sensor(eta=1.1, gamma=3e5, gamma_mech=1.05, c0_sq=5.2e11, n_T=1e5, input_psd=1.0):
    return SensorParams(
        eta=eta, gamma=gamma, gamma_mech=gamma_mech, c0_sq=c0_sq, n_T=n_T, input_psd=input_psd
    )


def test_no_coupling_means_no_back_action():
    sp = make_sensor(eta=0.0)
    t = sensor_transfer(sp, 1e3)
    assert t.K == 0.0
    assert t.delta_plus[1] == 0.0 and t.delta_plus[2] == 0.0 and t.delta_plus[3] == 0.0
    assert t.delta_plus[0] == t.xi


def test_zero_frequency_pump_power():
    sp = make_sensor()
    t = sensor_transfer(sp, 0.0)
    assert t.K == pytest.approx(4.0 * sp.eta**2 * sp.c0_sq / sp.gamma, rel=1e-14)


def test_reflection_phase_unimodular():
    sp = make_sensor()
    for om in (0.0, 1.0, 1e5, 1e7):
        assert abs(sensor_transfer(sp, om).xi) == pytest.approx(1.0, abs=1e-14)


def test_back_action_cancellation_random_draws():
    rng = np.random.default_rng(21)
    for _ in range(50):
        sp = make_sensor(
            eta=10 ** rng.uniform(-1, 1),
            gamma=10 ** rng.uniform(4, 6),
            gamma_mech=10 ** rng.uniform(-1, 2),
            c0_sq=10 ** rng.uniform(8, 13),
            n_T=10 ** rng.uniform(0, 6),
        )
        for om in np.geomspace(1e-2 * sp.gamma_mech, 1e2 * sp.gamma, 25):
            coeffs = back_action_evading(sp, float(om))
            ba_scale = sensor_transfer(sp, float(om)).K / abs(sp.gamma_mech - 1j * om)
            assert abs(coeffs[1]) <= 1e-12 * ba_scale


def test_meas_combination_structure():
    sp = make_sensor()
    om = 777.0
    coeffs = back_action_evading(sp, om)
    t = sensor_transfer(sp, om)
    assert coeffs[0] == pytest.approx(t.xi, rel=1e-14)
    mech = sp.gamma_mech - 1j * om
    expected_force = -np.sqrt(t.xi * t.K) / mech
    assert coeffs[3] == pytest.approx(expected_force, rel=1e-14)
    assert coeffs[2] == pytest.approx(expected_force, rel=1e-14)


def shot_term(sp: SensorParams, om: float) -> float:
    # force-referred input-noise term computed directly, no subtraction
    K = 4.0 * sp.gamma * sp.eta**2 * sp.c0_sq / (sp.gamma**2 + om**2)
    return sp.input_psd_at(om) * (sp.gamma_mech**2 + om**2) / K


def test_force_noise_linearity_in_input():
    vac = make_sensor(input_psd=1.0)
    squeezed = make_sensor(input_psd=0.025)
    om = 300.0
    thermal = 2.0 * vac.gamma_mech * (vac.n_T + 0.5)
    assert shot_term(squeezed, om) == pytest.approx(0.025 * shot_term(vac, om), rel=1e-12)
    assert force_noise_psd(squeezed, om) == pytest.approx(
        thermal + 0.025 * shot_term(vac, om), rel=1e-12
    )


def test_thermal_dominance_masks_input():
    hot = make_sensor(n_T=1e9, input_psd=1.0)
    hot_sq = make_sensor(n_T=1e9, input_psd=0.025)
    om = 300.0
    rel = abs(force_noise_psd(hot, om) - force_noise_psd(hot_sq, om)) / force_noise_psd(hot, om)
    assert rel < 1e-3


def test_doubling_coupling_halves_shot_term():
    a = make_sensor(n_T=0.0, c0_sq=5.2e5)
    b = make_sensor(n_T=0.0, c0_sq=5.2e5, eta=a.eta * math.sqrt(2.0))
    om = 55.0
    thermal = 2.0 * a.gamma_mech * 0.5
    assert force_noise_psd(b, om) == pytest.approx(
        thermal + shot_term(a, om) / 2.0, rel=1e-12
    )


def test_zero_signal_error():
    with pytest.raises(NoSignalError):
        force_noise_psd(make_sensor(eta=0.0), 100.0)


def test_chained_shot_term_scales_with_source_density(fig_params):
    vac = sensor_from_system(fig_params, feed="vacuum")
    ent = sensor_from_system(fig_params, feed="synodyne")
    d = derive(fig_params)
    thermal = 2.0 * d.gamma_mech * (d.n_T + 0.5)
    for om in default_grid(fig_params, 25):
        expected = thermal + synodyne_psd(fig_params, om) * shot_term(vac, om)
        assert force_noise_psd(ent, om) == pytest.approx(expected, rel=1e-9)


def test_series_improvement(fig_params):
    d = derive(fig_params)
    rows = sensor_series(fig_params, np.geomspace(1e-2 * d.gamma_mech, d.gamma_mech, 10))
    assert np.all(rows[:, 1] >= rows[:, 2])
    assert np.all(rows[:, 3] >= 1.0)


def test_optimal_feed_flag(fig_params):
    from optoent.entanglement import optimize_weights

    ent = sensor_from_system(fig_params, feed="optimal")
    vac = sensor_from_system(fig_params, feed="vacuum")
    om = derive(fig_params).gamma_mech
    assert force_noise_psd(ent, om) < force_noise_psd(vac, om)
    # the input-noise term scales pointwise by the squeezed feed density
    d = derive(fig_params)
    thermal = 2.0 * d.gamma_mech * (d.n_T + 0.5)
    for om in default_grid(fig_params, 12):
        expected = thermal + optimize_weights(fig_params, om)[1] * shot_term(vac, om)
        assert force_noise_psd(ent, om) == pytest.approx(expected, rel=1e-9)


def test_asymmetric_system_rejected(fig_params):
    skewed = dataclasses.replace(fig_params, gamma_p=2.0 * fig_params.gamma_m_opt)
    with pytest.raises(PreconditionError):
        sensor_from_system(skewed)
    with pytest.raises(PreconditionError):
        sensor_from_system(fig_params, feed="bogus")
