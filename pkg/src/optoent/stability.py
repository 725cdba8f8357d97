"""Classical mean-field dynamics of the pumped cavity and its stability map.

Noise operators are dropped and the mode amplitudes become c-numbers.  In
frames rotating at the pump and at pump +- omega_m, each optical equation
acquires a -i delta_0 detuning term (the three modes are assumed exactly
equidistant, so all share the pump's offset); the mechanical frame is
resonant and carries none:

    dc0/dt = -(gamma_0 - i delta_0) c0 + eta_+ c+ d* - eta_- c- d + sqrt(2 gamma_0) A0
    dc+/dt = -(gamma_+ - i delta_0) c+ - eta_+ c0 d
    dc-/dt = -(gamma_- - i delta_0) c- + eta_- c0 d*
    dd/dt  = -gamma_m d + eta_- c-* c0 + eta_+ c0* c+

The sideband/mechanical sector is exactly invariant from a cold start, so
the time-domain stability verdict perturbs the converged fixed point with a
small deterministic kick and classifies growth against decay; the spectral
verdict diagonalizes the 8-real-dimensional Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root

from .errors import NonStationaryError, PreconditionError
from .params import PhysicalParams, derive

__all__ = [
    "MeanFieldState",
    "Trajectory",
    "StabilityPoint",
    "SweepResult",
    "mean_field_rhs",
    "integrate_mean_field",
    "steady_state",
    "jacobian_eigenvalues",
    "kick_probe",
    "detuning_sweep",
]

DIVERGENCE_FACTOR = 1e6   # |state| beyond this multiple of the drive-balance scale
CONVERGENCE_TOL = 1e-8    # max relative change per mechanical period
KICK_SIZE = 1e-6          # relative size of the deterministic stability kick


@dataclass(frozen=True)
class MeanFieldState:
    c0: complex
    cp: complex
    cm: complex
    d: complex

    def to_vector(self) -> np.ndarray:
        z = (self.c0, self.cp, self.cm, self.d)
        return np.array([v for pair in z for v in (pair.real, pair.imag)])

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "MeanFieldState":
        return cls(
            c0=complex(y[0], y[1]),
            cp=complex(y[2], y[3]),
            cm=complex(y[4], y[5]),
            d=complex(y[6], y[7]),
        )


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    y: np.ndarray          # (8, n) real components
    diverged: bool
    final: MeanFieldState


def _rates(p: PhysicalParams):
    d = derive(p)
    return p.gamma_0, p.gamma_p, p.gamma_m_opt, d.gamma_mech, math.sqrt(d.A0_sq)


def mean_field_rhs(t: float, y: np.ndarray, p: PhysicalParams, delta_0: float) -> np.ndarray:
    """Right-hand side of the 8-real-dimensional mean-field flow."""
    g0, gp, gm, gmm, a0 = _rates(p)
    c0 = complex(y[0], y[1])
    cp = complex(y[2], y[3])
    cm = complex(y[4], y[5])
    d = complex(y[6], y[7])
    f0 = -(g0 - 1j * delta_0) * c0 + p.eta_p * cp * d.conjugate() - p.eta_m * cm * d \
        + math.sqrt(2.0 * g0) * a0
    fp = -(gp - 1j * delta_0) * cp - p.eta_p * c0 * d
    fm = -(gm - 1j * delta_0) * cm + p.eta_m * c0 * d.conjugate()
    fd = -gmm * d + p.eta_m * cm.conjugate() * c0 + p.eta_p * c0.conjugate() * cp
    return np.array([f0.real, f0.imag, fp.real, fp.imag, fm.real, fm.imag, fd.real, fd.imag])


def _amplitude_scale(p: PhysicalParams) -> float:
    # drive-balance amplitude of the pumped mode
    return math.sqrt(derive(p).C0_sq)


def integrate_mean_field(
    p: PhysicalParams,
    delta_0: float,
    t_end: float,
    state0: MeanFieldState | None = None,
    rtol: float = 1e-9,
) -> Trajectory:
    """Adaptive integration of the mean-field flow.

    Divergence (state norm beyond 1e6 x the drive-balance amplitude) stops
    the integration and is reported on the trajectory; it is a valid sweep
    outcome, not an exception.
    """
    if t_end <= 0:
        raise PreconditionError(f"t_end must be positive, got {t_end!r}")
    p.validate()
    scale = _amplitude_scale(p)
    y0 = np.zeros(8) if state0 is None else state0.to_vector()

    def too_large(t, y, *_args):
        return float(np.max(np.abs(y)) - DIVERGENCE_FACTOR * scale)

    too_large.terminal = True
    too_large.direction = 1.0

    sol = solve_ivp(
        mean_field_rhs,
        (0.0, t_end),
        y0,
        args=(p, delta_0),
        method="DOP853",
        rtol=rtol,
        atol=1e-12 * scale,
        events=too_large,
    )
    diverged = bool(sol.t_events[0].size > 0)
    return Trajectory(
        t=sol.t,
        y=sol.y,
        diverged=diverged,
        final=MeanFieldState.from_vector(sol.y[:, -1]),
    )


def _residual_per_period(p: PhysicalParams, delta_0: float, y: np.ndarray) -> float:
    period = 2.0 * math.pi / p.omega_m
    f = mean_field_rhs(0.0, y, p, delta_0)
    scale = max(float(np.max(np.abs(y))), _amplitude_scale(p))
    return float(np.max(np.abs(f))) * period / scale


def steady_state(
    p: PhysicalParams,
    delta_0: float,
    t_max: float | None = None,
    polish: bool = True,
) -> MeanFieldState:
    """Converged stationary state, integrated from zero amplitudes.

    Integration runs in segments until the relative change per mechanical
    period falls below 1e-8, then the algebraic fixed point is polished with
    a Newton-type solve.  Raises :class:`NonStationaryError` with the
    trajectory tail when no stationary state is reached in the time budget.
    """
    p.validate()
    scale = _amplitude_scale(p)
    if t_max is None:
        t_max = 200.0 / p.gamma_0
    segment = 10.0 / p.gamma_0
    y = np.zeros(8)
    t_done = 0.0
    tail = None
    while t_done < t_max:
        traj = integrate_mean_field(
            p, delta_0, min(segment, t_max - t_done), MeanFieldState.from_vector(y)
        )
        y = traj.y[:, -1]
        tail = traj
        t_done += traj.t[-1]
        if traj.diverged:
            raise NonStationaryError(
                f"mean-field amplitudes diverged at delta_0 = {delta_0!r}", tail=tail
            )
        if _residual_per_period(p, delta_0, y) < CONVERGENCE_TOL:
            break
    else:
        raise NonStationaryError(
            f"no stationary state within t_max = {t_max!r} s at delta_0 = {delta_0!r}", tail=tail
        )
    if _residual_per_period(p, delta_0, y) >= CONVERGENCE_TOL:
        raise NonStationaryError(
            f"no stationary state within t_max = {t_max!r} s at delta_0 = {delta_0!r}", tail=tail
        )

    if polish:
        def g(u):
            return mean_field_rhs(0.0, u * scale, p, delta_0) / (p.gamma_0 * scale)

        sol = root(g, y / scale, method="hybr", tol=1e-13)
        y_polished = sol.x * scale
        # accept on residual improvement; hybr's progress flag is unreliable
        # once the residual sits at rounding level
        if np.all(np.isfinite(y_polished)) and _residual_per_period(
            p, delta_0, y_polished
        ) <= _residual_per_period(p, delta_0, y):
            y = y_polished
    return MeanFieldState.from_vector(y)


def _wirtinger_blocks(p: PhysicalParams, delta_0: float, s: MeanFieldState):
    g0, gp, gm, gmm, _a0 = _rates(p)
    A = np.zeros((4, 4), dtype=complex)   # dF/dz
    B = np.zeros((4, 4), dtype=complex)   # dF/dzbar
    A[0, 0] = -(g0 - 1j * delta_0)
    A[0, 1] = p.eta_p * np.conj(s.d)
    A[0, 2] = -p.eta_m * s.d
    A[0, 3] = -p.eta_m * s.cm
    B[0, 3] = p.eta_p * s.cp
    A[1, 0] = -p.eta_p * s.d
    A[1, 1] = -(gp - 1j * delta_0)
    A[1, 3] = -p.eta_p * s.c0
    A[2, 0] = p.eta_m * np.conj(s.d)
    A[2, 2] = -(gm - 1j * delta_0)
    B[2, 3] = p.eta_m * s.c0
    A[3, 1] = p.eta_p * np.conj(s.c0)
    A[3, 3] = -gmm
    B[3, 0] = p.eta_p * s.cp
    B[3, 2] = p.eta_m * s.c0
    return A, B


def jacobian_eigenvalues(
    p: PhysicalParams, delta_0: float, state: MeanFieldState
) -> np.ndarray:
    """Eigenvalues of the 8-real-dimensional linearization at a fixed point.

    The state must satisfy the stationarity criterion; eigenvalues are
    returned sorted by descending real part.  Stability means all real
    parts are negative.
    """
    y = state.to_vector()
    if _residual_per_period(p, delta_0, y) > 1e-6:
        raise PreconditionError("jacobian_eigenvalues requires a converged fixed point")
    A, B = _wirtinger_blocks(p, delta_0, state)
    J = np.block([[np.real(A + B), -np.imag(A - B)], [np.imag(A + B), np.real(A - B)]])
    ev = np.linalg.eigvals(J)
    return ev[np.argsort(-ev.real)]


def kick_probe(
    p: PhysicalParams,
    delta_0: float,
    state: MeanFieldState,
    leading_real: float,
) -> float:
    """Deviation growth factor after a deterministic kick of the fixed point.

    The sideband/mechanical sector is kicked by 1e-6 of the drive-balance
    amplitude and integrated for several e-folding times of the leading
    eigenvalue; a factor above 1 marks time-domain instability.
    """
    scale = _amplitude_scale(p)
    yss = state.to_vector()
    kick = np.array([0, 0, 1, 0, 1, 0, 1, 0]) / math.sqrt(3.0)
    y0 = yss + KICK_SIZE * scale * kick
    rate = max(abs(leading_real), 1e-3 * p.gamma_0)
    t_probe = 6.0 / rate
    traj = integrate_mean_field(p, delta_0, t_probe, MeanFieldState.from_vector(y0))
    if traj.diverged:
        return math.inf
    dev0 = float(np.linalg.norm(y0 - yss))
    dev1 = float(np.linalg.norm(traj.y[:, -1] - yss))
    return dev1 / dev0


@dataclass(frozen=True)
class StabilityPoint:
    detuning: float
    g_mean: float
    g_diff: float
    n_d: float
    n_d_coherent: float
    n_d_thermal: float
    stable: bool
    leading_real: float
    probe_growth: float
    verdicts_agree: bool


@dataclass(frozen=True)
class SweepResult:
    points: list[StabilityPoint]
    threshold: float | None  # |delta_0| where the leading real part changes sign


def _point(p: PhysicalParams, delta_0: float) -> StabilityPoint:
    d = derive(p)
    st = steady_state(p, delta_0)
    ev = jacobian_eigenvalues(p, delta_0, st)
    leading = float(ev[0].real)
    growth = kick_probe(p, delta_0, st, leading)
    c0_sq = abs(st.c0) ** 2
    g_p = p.eta_p**2 * c0_sq / p.gamma_p
    g_m = p.eta_m**2 * c0_sq / p.gamma_m_opt
    gamma_m0 = d.gamma_mech + g_p - g_m
    n_coh = abs(st.d) ** 2
    n_th = d.gamma_mech * d.n_T / abs(gamma_m0) if gamma_m0 != 0 else math.inf
    stable = leading < 0.0
    return StabilityPoint(
        detuning=float(delta_0),
        g_mean=0.5 * (g_p + g_m),
        g_diff=g_p - g_m,
        n_d=n_coh + n_th,
        n_d_coherent=n_coh,
        n_d_thermal=n_th,
        stable=stable,
        leading_real=leading,
        probe_growth=growth,
        verdicts_agree=bool((growth > 1.0) == (not stable)),
    )


def _leading_real_trivial(p: PhysicalParams, delta_0: float) -> float:
    """Leading eigenvalue real part at the analytic zero-sideband branch."""
    g0, *_ = _rates(p)
    d = derive(p)
    c0 = math.sqrt(2.0 * g0 * d.A0_sq) / (g0 - 1j * delta_0)
    st = MeanFieldState(c0=c0, cp=0.0, cm=0.0, d=0.0)
    return float(jacobian_eigenvalues(p, delta_0, st)[0].real)


def detuning_sweep(
    p: PhysicalParams,
    delta_range: tuple[float, float],
    n_points: int,
    spacing: str = "log",
) -> SweepResult:
    """Stability classification over a detuning range, with threshold bisection.

    Every swept point carries the steady state's pump rates, the phonon
    estimate split into its coherent and cooled-thermal components, both
    stability verdicts and their agreement.  The threshold is the
    sign-change location of the leading eigenvalue's real part, bisected to
    three significant figures on the analytic stationary branch.
    """
    lo, hi = delta_range
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise PreconditionError(f"bad detuning range {delta_range!r}")
    if spacing == "log":
        if lo <= 0:
            raise PreconditionError("log spacing requires positive detuning bounds")
        deltas = np.geomspace(lo, hi, n_points)
    elif spacing == "linear":
        deltas = np.linspace(lo, hi, n_points)
    else:
        raise PreconditionError(f"unknown spacing {spacing!r}")

    points = [_point(p, float(d0)) for d0 in deltas]

    threshold = None
    for a, b in zip(points[:-1], points[1:]):
        if a.leading_real < 0.0 <= b.leading_real:
            x_lo, x_hi = abs(a.detuning), abs(b.detuning)
            while (x_hi - x_lo) > 1e-3 * 0.5 * (x_hi + x_lo):
                mid = math.sqrt(x_lo * x_hi)
                if _leading_real_trivial(p, mid) >= 0.0:
                    x_hi = mid
                else:
                    x_lo = mid
            threshold = 0.5 * (x_lo + x_hi)
            break
    return SweepResult(points=points, threshold=threshold)
