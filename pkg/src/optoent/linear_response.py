"""Linearized sideband fluctuation dynamics in the Fourier domain.

The pumped central mode is eliminated (its fluctuations decouple); what
remains is a 3-unknown complex linear system per spectral frequency Omega
coupling c_+(Omega), c_-^dag(-Omega) and the mechanical amplitude d(Omega),
driven by the input operators a_+(Omega), a_-^dag(-Omega), q(Omega).
Input-output is b_pm = -a_pm + sqrt(2 gamma_pm) c_pm.

Two independent routes produce the output scattering map:

* :func:`solve_fluctuations` - direct linear solve of the coupled system
  (the ground truth used by every consumer module);
* :func:`scattering_from_formulas` - assembly from the closed-form
  susceptibility coefficients, kept as a validation layer.

Amplitude/phase quadratures follow x_a = (x(O) + x^dag(-O))/sqrt(2),
x_phi = (x(O) - x^dag(-O))/(i sqrt(2)).  One-sided spectral densities are
reported in shot-noise units: reflected vacuum gives exactly 1.  The
thermal Langevin-force quadratures carry spectral density n_T + 1/2 in
these units (the normalization that reproduces the closed-form noise
spectra; see README).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularResponseError
from .params import PhysicalParams, derive

__all__ = [
    "TransferCoefficients",
    "QuadratureScattering",
    "susceptibilities",
    "scattering_rows",
    "solve_fluctuations",
    "scattering_from_formulas",
    "single_mode_psd",
    "check_commutators",
    "default_grid",
]

#: input quadrature channel order of QuadratureScattering.map
INPUT_QUADS = ("a+_a", "a+_phi", "a-_a", "a-_phi", "sqrt(2gm)q_a", "sqrt(2gm)q_phi")
#: output quadrature order
OUTPUT_QUADS = ("b+_a", "b+_phi", "b-_a", "b-_phi")


@dataclass(frozen=True)
class TransferCoefficients:
    """Closed-form susceptibility coefficients at one spectral frequency."""

    omega: float
    xi_p: complex
    xi_m: complex
    Gamma_p: complex
    Gamma_m_rate: complex
    Gamma_mech_eff: complex  # gamma_m + Gamma_+ - Gamma_-
    A_p: complex
    A_m: complex
    cal_A_p: complex  # xi_+ - A_+
    cal_A_m: complex  # xi_- + A_-
    B: complex
    F_p: complex
    F_m: complex


@dataclass(frozen=True)
class QuadratureScattering:
    """Complex linear map from 6 input quadratures to 4 output quadratures.

    ``map`` is 4x6 over (INPUT_QUADS -> OUTPUT_QUADS); the mechanical
    channels include the sqrt(2 gamma_m) drive factor, so those columns hold
    the bare -F_+ / +F_- style coefficients.

    ``rows`` is the equivalent 2x3 annihilation-basis map, rows
    (b_+(O), b_-^dag(-O)) over inputs (a_+(O), a_-^dag(-O), q(O)); here the
    mechanical column carries sqrt(2 gamma_m).
    """

    omega: float
    map: np.ndarray
    gamma_mech: float

    @property
    def rows(self) -> np.ndarray:
        s = np.sqrt(2.0 * self.gamma_mech)
        return np.array(
            [
                [self.map[0, 0], self.map[0, 2], self.map[0, 4] * s],
                [self.map[2, 0], self.map[2, 2], self.map[2, 4] * s],
            ]
        )


def _map_from_rows(rows: np.ndarray, gamma_mech: float) -> np.ndarray:
    """Expand the annihilation-basis rows to the 4x6 quadrature map.

    The same complex coefficient multiplies both members of each conjugate
    pair (real-coefficient dynamics), so amplitude and phase quadratures do
    not mix; only the signs of the cross-mode and mechanical entries differ
    between the two quadratures.
    """
    s = np.sqrt(2.0 * gamma_mech)
    (r11, r12, r13), (r21, r22, r23) = rows
    m = np.zeros((4, 6), dtype=complex)
    m[0, 0], m[0, 2], m[0, 4] = r11, r12, r13 / s
    m[1, 1], m[1, 3], m[1, 5] = r11, -r12, r13 / s
    m[2, 0], m[2, 2], m[2, 4] = r21, r22, r23 / s
    m[3, 1], m[3, 3], m[3, 5] = -r21, r22, -r23 / s
    return m


def susceptibilities(p: PhysicalParams, omega: float) -> TransferCoefficients:
    """Evaluate the closed-form transfer coefficients at Omega = omega.

    B and F_pm are evaluated through branch-safe products
    (eta C0 / (gamma - i Omega) factors) rather than literal square roots of
    squared quantities; the naive principal branch of the printed sqrt form
    for B flips sign for Omega > sqrt(gamma_+ gamma_-), while the product
    form is the analytic continuation matching the direct solve everywhere.
    """
    d = derive(p)
    c0 = np.sqrt(d.C0_sq)
    chi_p = 1.0 / (p.gamma_p - 1j * omega)
    chi_m = 1.0 / (p.gamma_m_opt - 1j * omega)
    xi_p = (p.gamma_p + 1j * omega) * chi_p
    xi_m = (p.gamma_m_opt + 1j * omega) * chi_m
    Gam_p = p.eta_p**2 * d.C0_sq * chi_p
    Gam_m = p.eta_m**2 * d.C0_sq * chi_m
    Gam_mech = d.gamma_mech + Gam_p - Gam_m
    den = Gam_mech - 1j * omega
    if den == 0:
        raise SingularResponseError(omega, "effective mechanical response vanishes")
    A_p = 2.0 * p.gamma_p * Gam_p * chi_p / den
    A_m = 2.0 * p.gamma_m_opt * Gam_m * chi_m / den
    B = 2.0 * np.sqrt(p.gamma_p * p.gamma_m_opt) * p.eta_p * p.eta_m * d.C0_sq * chi_p * chi_m / den
    F_p = np.sqrt(2.0 * p.gamma_p) * p.eta_p * c0 * chi_p / den
    F_m = np.sqrt(2.0 * p.gamma_m_opt) * p.eta_m * c0 * chi_m / den
    return TransferCoefficients(
        omega=omega,
        xi_p=xi_p,
        xi_m=xi_m,
        Gamma_p=Gam_p,
        Gamma_m_rate=Gam_m,
        Gamma_mech_eff=Gam_mech,
        A_p=A_p,
        A_m=A_m,
        cal_A_p=xi_p - A_p,
        cal_A_m=xi_m + A_m,
        B=B,
        F_p=F_p,
        F_m=F_m,
    )


def scattering_rows(p: PhysicalParams, omega) -> np.ndarray:
    """Direct linear solve for the annihilation-basis output rows.

    Solves, per frequency, the coupled system for
    u = (c_+(O), c_-^dag(-O), d(O)) driven by (a_+(O), a_-^dag(-O), q(O))
    and applies the input-output relation.  The conjugate-partner system
    (c_+^dag(-O), c_-(O), d^dag(-O)) has the identical real-coefficient
    matrix, so the same rows describe b_+^dag(-O) and b_-(O) over the
    conjugate inputs.

    ``omega`` may be a scalar or 1-D array; returns shape (2, 3) or (n, 2, 3).
    """
    p.validate()
    d = derive(p)
    om = np.asarray(omega, dtype=float)
    scalar = om.ndim == 0
    om = np.atleast_1d(om)
    n = om.size
    c0 = np.sqrt(d.C0_sq)
    gp, gm, gmm = p.gamma_p, p.gamma_m_opt, d.gamma_mech

    M = np.zeros((n, 3, 3), dtype=complex)
    M[:, 0, 0] = gp - 1j * om
    M[:, 0, 2] = p.eta_p * c0
    M[:, 1, 1] = gm - 1j * om
    M[:, 1, 2] = -p.eta_m * c0
    M[:, 2, 0] = -p.eta_p * c0
    M[:, 2, 1] = -p.eta_m * c0
    M[:, 2, 2] = gmm - 1j * om

    drive = np.diag([np.sqrt(2.0 * gp), np.sqrt(2.0 * gm), np.sqrt(2.0 * gmm)]).astype(complex)
    rhs = np.broadcast_to(drive, (n, 3, 3))
    try:
        sol = np.linalg.solve(M, rhs)
        # one step of iterative refinement with the residual accumulated in
        # extended precision: the output coefficients enter commutator
        # identities with terms of order |A|^2 >> 1, so entry accuracy well
        # below machine epsilon times that magnitude is required.
        resid = rhs - np.asarray(M, dtype=np.clongdouble) @ np.asarray(sol, dtype=np.clongdouble)
        sol = sol + np.linalg.solve(M, resid.astype(complex))
    except np.linalg.LinAlgError as exc:
        # locate the offending frequency for the error report
        dets = np.linalg.det(M)
        bad = om[np.argmin(np.abs(dets))]
        raise SingularResponseError(float(bad), "fluctuation system is singular") from exc

    rows = np.empty((n, 2, 3), dtype=complex)
    rows[:, 0, :] = np.sqrt(2.0 * gp) * sol[:, 0, :]
    rows[:, 0, 0] -= 1.0
    rows[:, 1, :] = np.sqrt(2.0 * gm) * sol[:, 1, :]
    rows[:, 1, 1] -= 1.0
    return rows[0] if scalar else rows


def solve_fluctuations(p: PhysicalParams, omega: float) -> QuadratureScattering:
    """Full input->output quadrature scattering map from the direct solve."""
    rows = scattering_rows(p, omega)
    gamma_mech = derive(p).gamma_mech
    return QuadratureScattering(
        omega=float(omega), map=_map_from_rows(rows, gamma_mech), gamma_mech=gamma_mech
    )


def scattering_from_formulas(t: TransferCoefficients, gamma_mech: float) -> QuadratureScattering:
    """Assemble the quadrature map from the closed-form coefficients:

        b_pm_a   = (xi_pm -+ A_pm) a_pm_a  -+ B a_mp_a  -+ F_pm sqrt(2 gm) q_a
        b_pm_phi = (xi_pm -+ A_pm) a_pm_phi +- B a_mp_phi - F_pm sqrt(2 gm) q_phi
    """
    s = np.sqrt(2.0 * gamma_mech)
    rows = np.array(
        [
            [t.cal_A_p, -t.B, -t.F_p * s],
            [t.B, t.cal_A_m, t.F_m * s],
        ]
    )
    return QuadratureScattering(
        omega=t.omega, map=_map_from_rows(rows, gamma_mech), gamma_mech=gamma_mech
    )


def single_mode_psd(s: QuadratureScattering, n_T: float) -> tuple[float, float, float, float]:
    """One-sided spectral densities (S_b+a, S_b+phi, S_b-a, S_b-phi).

    Vacuum (unit) inputs on the optical quadratures and thermal weight
    n_T + 1/2 on the mechanical force quadratures.
    """
    if n_T < 0:
        raise ValueError(f"n_T must be nonnegative, got {n_T!r}")
    w = np.array([1.0, 1.0, n_T + 0.5])
    r = s.rows
    s_pa = float(np.sum(w * np.abs(r[0]) ** 2))
    s_ma = float(np.sum(w * np.abs(r[1]) ** 2))
    # amplitude and phase rows have equal moduli entrywise
    return s_pa, s_pa, s_ma, s_ma


def check_commutators(s: QuadratureScattering) -> dict[str, float]:
    """Residuals of the symplectic (commutator-preservation) identities.

    For the annihilation-basis rows R over (a_+(O), a_-^dag(-O), q(O)):

        |R11|^2 - |R12|^2 + |R13|^2 = 1      (b_+ bosonic)
        |R22|^2 - |R21|^2 - |R23|^2 = 1      (b_- bosonic)
        R11 conj(R21) - R12 conj(R22) + R13 conj(R23) = 0   ([b_+, b_-] = 0)

    Returns absolute residuals keyed by identity name.  The quadratic
    identities are accumulated in extended precision so the reported
    residual reflects the solved map itself, not summation roundoff of the
    witness (entries of order |A|^2 >> 1 cancel down to 1).
    """
    r = s.rows.astype(np.clongdouble)
    re, im = r.real, r.imag
    sq = re * re + im * im
    plus = sq[0, 0] - sq[0, 1] + sq[0, 2] - 1.0
    minus = sq[1, 1] - sq[1, 0] - sq[1, 2] - 1.0
    cross = r[0, 0] * np.conj(r[1, 0]) - r[0, 1] * np.conj(r[1, 1]) + r[0, 2] * np.conj(r[1, 2])
    return {
        "plus_mode": abs(float(plus)),
        "minus_mode": abs(float(minus)),
        "cross_mode": float(abs(complex(cross))),
    }


def default_grid(p: PhysicalParams, n_points: int = 400) -> np.ndarray:
    """Log-spaced spectral grid from 1e-2 gamma_m to 1e2 gamma_0."""
    d = derive(p)
    return np.geomspace(1e-2 * d.gamma_mech, 1e2 * p.gamma_0, n_points)
