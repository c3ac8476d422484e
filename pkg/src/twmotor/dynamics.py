"""Coupled stator-rotor transient simulation and probe post-processing.

The stator is reduced to its retained mode pairs (modal oscillators with
mass-normalized coordinates); the rigid rotor carries an axial
translation and a spin DOF.  Per fixed step, contact forces are evaluated
at the step start (explicit) while the linear modal and axial dynamics are
advanced with their exact matrix exponentials, the electrode drive being
sampled at the step midpoint.  This keeps the integration robust against
the stiff penalty forces; accuracy is monitored by an energy-bookkeeping
residual accumulated alongside the states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .contact import ContactConfig, contact_angles
from .stator import StatorModel
from .wave import DriveConfig

__all__ = [
    "RotorConfig",
    "MotorTimeSeries",
    "EnergyReport",
    "SteadyState",
    "SimulationDiverged",
    "simulate",
    "detect_steady_state",
    "envelope_average",
    "mean_speed",
]

CSV_HEADER = "t,s_speed,surf_disp,fric_probe,torque,fz,wave_amp"


class SimulationDiverged(RuntimeError):
    """Raised by callers when a run produced non-finite states."""

    def __init__(self, last_valid_time: float):
        super().__init__(f"simulation diverged; last valid time {last_valid_time:g} s")
        self.last_valid_time = last_valid_time


@dataclass(frozen=True)
class RotorConfig:
    """Rigid rotor parameters and external loading."""

    inertia: float = 2e-4         # kg m^2
    mass: float = 0.01            # kg
    axial_damping: float = 700.0  # N s/m
    preload: float = 50.0         # N, pressing the rotor onto the stator
    load_torque: float = 0.0      # N m, opposing rotation
    preload_ramp: float = 0.0     # s; 0 = full preload from t=0

    def __post_init__(self):
        if self.inertia <= 0 or self.mass <= 0:
            raise ValueError("inertia and mass must be > 0")
        if self.axial_damping < 0:
            raise ValueError("axial_damping must be >= 0")
        if self.preload < 0:
            raise ValueError("preload must be >= 0")
        if self.preload_ramp < 0:
            raise ValueError("preload_ramp must be >= 0")


@dataclass(frozen=True)
class EnergyReport:
    """Work/energy ledger of one transient run.

    ``residual`` is input work minus (energy change + dissipation); the
    fraction is relative to the drive work.
    """

    drive_work: float
    preload_work: float
    load_torque_work: float
    modal_dissipation: float
    friction_dissipation: float
    axial_dissipation: float
    energy_change: float
    residual: float
    residual_fraction: float


@dataclass
class MotorTimeSeries:
    """Uniformly sampled transient probes.

    ``surface_speed`` and ``surface_displacement`` are rim quantities
    R*omega_r and R*phi; divide by ``radius`` to get the rotor spin rate.
    """

    time: np.ndarray = field(repr=False)
    surface_speed: np.ndarray = field(repr=False)
    surface_displacement: np.ndarray = field(repr=False)
    friction_probe: np.ndarray = field(repr=False)
    torque: np.ndarray = field(repr=False)
    axial_force: np.ndarray = field(repr=False)
    wave_amplitude: np.ndarray = field(repr=False)
    radius: float = 1.0
    diverged: bool = False
    last_valid_time: float = 0.0
    energy: EnergyReport | None = None

    def __len__(self):
        return len(self.time)

    @property
    def rotor_speed(self) -> np.ndarray:
        return self.surface_speed / self.radius

    def to_csv(self, path):
        cols = (self.time, self.surface_speed, self.surface_displacement,
                self.friction_probe, self.torque, self.axial_force,
                self.wave_amplitude)
        lines = [CSV_HEADER]
        for row in zip(*cols):
            lines.append(",".join(f"{v:.17g}" for v in row))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path, radius: float = 1.0) -> "MotorTimeSeries":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(time=data[:, 0], surface_speed=data[:, 1],
                   surface_displacement=data[:, 2], friction_probe=data[:, 3],
                   torque=data[:, 4], axial_force=data[:, 5],
                   wave_amplitude=data[:, 6], radius=radius,
                   last_valid_time=float(data[-1, 0]))


def _phase_matrices(omega, zeta, dt):
    """Exact one-step propagator of q'' + 2 zeta w q' + w^2 q = const."""
    A = np.array([[0.0, 1.0], [-omega * omega, -2.0 * zeta * omega]])
    E = scipy.linalg.expm(A * dt)
    P = np.linalg.solve(A, E - np.eye(2))
    return E, P


def simulate(stator: StatorModel, drive: DriveConfig, contact_cfg: ContactConfig,
             rotor_cfg: RotorConfig, duration: float = 5e-3,
             output_interval: float = 1e-5, dt: float | None = None) -> MotorTimeSeries:
    """Fixed-step transient of the coupled motor, sampled at the output interval.

    The step defaults to 1/(400 f_drive) and is snapped to an integer
    divider of the output interval; steps above 1/(200 f_drive) are
    rejected as unstable.  Deterministic for fixed inputs.  Divergence
    truncates the series and sets its flag instead of raising.
    """
    geom = stator.geometry
    pairs = stator.pairs
    contact_cfg.check_resolution(pairs[0].nodal_diameters)
    f_drive = drive.resolve_frequency(pairs[0])
    omega_d = 2.0 * math.pi * f_drive
    dt_nominal = dt if dt is not None else 1.0 / (400.0 * f_drive)
    if dt_nominal > 1.0 / (200.0 * f_drive):
        raise ValueError(
            f"dt={dt_nominal:g} s too coarse; need <= {1.0 / (200.0 * f_drive):g} s "
            "(1/(200 f_drive))"
        )
    steps_per_sample = max(1, math.ceil(output_interval / dt_nominal))
    h = output_interval / steps_per_sample
    n_samples = int(round(duration / output_interval)) + 1
    n_steps = (n_samples - 1) * steps_per_sample

    P = len(pairs)
    omega_n = np.array([p.omega for p in pairs])
    amp = np.array([p.amp for p in pairs])
    ndia = np.array([p.nodal_diameters for p in pairs])
    zeta = stator.damping_ratio
    theta = contact_angles(contact_cfg)
    cosM = np.cos(ndia[:, None] * theta[None, :])   # (P, M)
    sinM = np.sin(ndia[:, None] * theta[None, :])
    zc = geom.contact_offset
    R = geom.mean_radius
    mu = contact_cfg.cof
    kn = contact_cfg.penalty_stiffness
    vreg = contact_cfg.regularization_velocity

    # drive forces: only the leading pair is wired to the electrodes
    F_cos = np.zeros(P)
    F_sin = np.zeros(P)
    F_cos[0] = stator.forcing_per_volt.f_cos * drive.voltage
    F_sin[0] = stator.forcing_per_volt.f_sin * drive.voltage
    psi = drive.phase_offset

    e00 = np.empty(P); e01 = np.empty(P); e10 = np.empty(P); e11 = np.empty(P)
    p01 = np.empty(P); p11 = np.empty(P)
    for i, w in enumerate(omega_n):
        E, Pm = _phase_matrices(w, zeta, h)
        e00[i], e01[i], e10[i], e11[i] = E[0, 0], E[0, 1], E[1, 0], E[1, 1]
        p01[i], p11[i] = Pm[0, 1], Pm[1, 1]

    m_r = rotor_cfg.mass
    c_z = rotor_cfg.axial_damping
    J = rotor_cfg.inertia
    T_load = rotor_cfg.load_torque
    gamma = c_z / m_r
    if c_z > 0:
        e_g = math.exp(-gamma * h)
        k_g = (1.0 - e_g) / gamma

    def preload_at(t):
        if rotor_cfg.preload_ramp > 0 and t < rotor_cfg.preload_ramp:
            return rotor_cfg.preload * t / rotor_cfg.preload_ramp
        return rotor_cfg.preload

    qc = np.zeros(P); qs = np.zeros(P)       # modal coordinates
    qcd = np.zeros(P); qsd = np.zeros(P)     # modal rates
    z_r = 0.0; zd_r = 0.0                    # rotor axial
    phi_r = 0.0; om_r = 0.0                  # rotor spin

    out = np.zeros((n_samples, 7))
    sample = 0
    diverged = False
    last_valid = 0.0

    work_drive = work_preload = work_loadT = 0.0
    diss_modal = diss_fric = diss_axial = 0.0
    prev_powers = None
    prev_contact = None
    zc_over_R = zc / R

    def mech_energy(pen_energy):
        e_modal = 0.5 * float(np.sum(qcd**2 + qsd**2
                                     + omega_n**2 * (qc**2 + qs**2)))
        return (e_modal + 0.5 * m_r * zd_r**2 + 0.5 * J * om_r**2 + pen_energy)

    energy_initial = None

    for k in range(n_steps + 1):
        t = k * h
        # surface state and contact at the step start
        aqc = amp * qc
        aqs = amp * qs
        w_i = aqc @ cosM + aqs @ sinM
        vt_i = -zc_over_R * ((amp * ndia * qsd) @ cosM - (amp * ndia * qcd) @ sinM)
        gap = z_r - w_i
        pen = np.maximum(0.0, -gap)
        N_i = kn * pen
        s_i = R * om_r - vt_i
        f_i = -mu * N_i * np.tanh(s_i / vreg)
        F_z = float(np.sum(N_i))
        T = float(R * np.sum(f_i))
        Q_cos = -amp * (cosM @ N_i) - zc_over_R * amp * ndia * (sinM @ f_i)
        Q_sin = -amp * (sinM @ N_i) + zc_over_R * amp * ndia * (cosM @ f_i)

        Fp = preload_at(t)
        drv_cos = F_cos * math.cos(omega_d * t)
        drv_sin = F_sin * math.cos(omega_d * t + psi)
        powers = (
            float(drv_cos @ qcd + drv_sin @ qsd),                 # drive in
            -Fp * zd_r,                                           # preload in
            -T_load * om_r,                                       # load torque in
            2.0 * zeta * float(omega_n @ (qcd**2 + qsd**2)),      # modal out
            -float(f_i @ s_i),                                    # friction out
            c_z * zd_r * zd_r,                                    # axial damper out
        )
        if prev_powers is not None:
            half = 0.5 * h
            work_drive += half * (prev_powers[0] + powers[0])
            work_preload += half * (prev_powers[1] + powers[1])
            work_loadT += half * (prev_powers[2] + powers[2])
            diss_modal += half * (prev_powers[3] + powers[3])
            diss_fric += half * (prev_powers[4] + powers[4])
            diss_axial += half * (prev_powers[5] + powers[5])
        prev_powers = powers

        if k % steps_per_sample == 0:
            state_fin = (np.isfinite(w_i).all() and math.isfinite(z_r)
                         and math.isfinite(om_r) and math.isfinite(F_z))
            if not state_fin:
                diverged = True
                break
            wave_amp = stator.pair.amp * math.hypot(qc[0], qs[0])
            out[sample] = (t, R * om_r, R * phi_r, f_i[0], T, F_z, wave_amp)
            sample += 1
            last_valid = t
        if energy_initial is None:
            energy_initial = mech_energy(0.5 * kn * float(np.sum(pen**2)))
        if k == n_steps:
            energy_final = mech_energy(0.5 * kn * float(np.sum(pen**2)))
            break

        # advance: exact linear propagation, piecewise-constant forcing held
        # at the step midpoint; contact resultants are extrapolated there
        # from the last two evaluations (keeps the coupling second order)
        if prev_contact is None:
            Qc_mid, Qs_mid, Fz_mid, T_mid = Q_cos, Q_sin, F_z, T
        else:
            Qc_mid = 1.5 * Q_cos - 0.5 * prev_contact[0]
            Qs_mid = 1.5 * Q_sin - 0.5 * prev_contact[1]
            Fz_mid = 1.5 * F_z - 0.5 * prev_contact[2]
            T_mid = 1.5 * T - 0.5 * prev_contact[3]
        prev_contact = (Q_cos, Q_sin, F_z, T)
        t_mid = t + 0.5 * h
        p_cos = F_cos * math.cos(omega_d * t_mid) + Qc_mid
        p_sin = F_sin * math.cos(omega_d * t_mid + psi) + Qs_mid
        qc_new = e00 * qc + e01 * qcd + p01 * p_cos
        qcd_new = e10 * qc + e11 * qcd + p11 * p_cos
        qs_new = e00 * qs + e01 * qsd + p01 * p_sin
        qsd_new = e10 * qs + e11 * qsd + p11 * p_sin
        qc, qcd, qs, qsd = qc_new, qcd_new, qs_new, qsd_new

        a0 = (Fz_mid - Fp) / m_r
        if c_z > 0:
            z_r = z_r + (zd_r - a0 / gamma) * k_g + (a0 / gamma) * h
            zd_r = zd_r * e_g + (a0 / gamma) * (1.0 - e_g)
        else:
            z_r = z_r + zd_r * h + 0.5 * a0 * h * h
            zd_r = zd_r + a0 * h
        om_new = om_r + h * (T_mid - T_load) / J
        phi_r = phi_r + 0.5 * h * (om_r + om_new)
        om_r = om_new

    if diverged:
        out = out[:sample]
        energy = None
    else:
        denom = max(abs(work_drive), 1e-300)
        energy_change = energy_final - energy_initial
        residual = ((work_drive + work_preload + work_loadT)
                    - (energy_change + diss_modal + diss_fric + diss_axial))
        energy = EnergyReport(
            drive_work=work_drive, preload_work=work_preload,
            load_torque_work=work_loadT, modal_dissipation=diss_modal,
            friction_dissipation=diss_fric, axial_dissipation=diss_axial,
            energy_change=energy_change, residual=residual,
            residual_fraction=abs(residual) / denom,
        )
    return MotorTimeSeries(
        time=out[:, 0].copy(), surface_speed=out[:, 1].copy(),
        surface_displacement=out[:, 2].copy(), friction_probe=out[:, 3].copy(),
        torque=out[:, 4].copy(), axial_force=out[:, 5].copy(),
        wave_amplitude=out[:, 6].copy(), radius=R,
        diverged=diverged, last_valid_time=last_valid, energy=energy,
    )


@dataclass(frozen=True)
class SteadyState:
    """Settling verdict of a transient run."""

    t: float
    settled: bool


def detect_steady_state(series: MotorTimeSeries, window: float = 2.5e-4,
                        tolerance: float = 0.02,
                        signal: str = "wave_amplitude") -> SteadyState:
    """Earliest time where consecutive window means of a probe signal agree.

    Non-overlapping windows of the given length are compared pairwise; the
    first pair whose means differ by less than ``tolerance`` (relative)
    marks settling at the shared window boundary.  A series that never
    meets the tolerance returns its end time with ``settled=False``.

    The default probe is the flexural wave amplitude: the stator vibration
    envelope is what reaches a repeatable level once the drive and contact
    transients die out, and its settling time is insensitive to the rotor
    inertia.  Pass ``signal="surface_speed"`` to watch the rotor instead.
    """
    if len(series) < 2:
        raise ValueError("series too short")
    if signal not in ("wave_amplitude", "surface_speed", "torque", "axial_force"):
        raise ValueError(f"unknown steady-state signal {signal!r}")
    interval = series.time[1] - series.time[0]
    wlen = max(1, int(round(window / interval)))
    speed = getattr(series, signal)
    n_windows = len(speed) // wlen
    if n_windows < 2:
        raise ValueError("series shorter than two windows")
    means = np.array([np.mean(speed[j * wlen:(j + 1) * wlen])
                      for j in range(n_windows)])
    for j in range(n_windows - 1):
        m1, m2 = means[j], means[j + 1]
        denom = max(abs(m1), abs(m2))
        if abs(m2 - m1) <= tolerance * denom:
            return SteadyState(t=float(series.time[0] + (j + 1) * wlen * interval),
                               settled=True)
    return SteadyState(t=float(series.time[-1]), settled=False)


def envelope_average(series: MotorTimeSeries, t_ss: float, period: float,
                     spike_factor: float = 5.0) -> float:
    """Mean upper envelope of the oscillating torque after steady state.

    The upper envelope is the per-window maximum over consecutive windows
    of one drive period; envelope points farther than ``spike_factor``
    median-absolute-deviations from the envelope median are discarded
    before averaging.
    """
    if not series.time[0] <= t_ss <= series.time[-1]:
        raise ValueError(f"t_ss={t_ss:g} outside the series span")
    mask = series.time >= t_ss
    torque = series.torque[mask]
    interval = series.time[1] - series.time[0]
    wlen = max(1, int(round(period / interval)))
    n_windows = len(torque) // wlen
    envelope = np.array([np.max(torque[j * wlen:(j + 1) * wlen])
                         for j in range(n_windows)])
    if len(envelope) < 5:
        raise ValueError(
            f"only {len(envelope)} envelope points after t_ss; need at least 5"
        )
    med = np.median(envelope)
    mad = np.median(np.abs(envelope - med))
    mad = max(mad, 1e-12 * abs(med))
    keep = np.abs(envelope - med) <= spike_factor * mad
    return float(np.mean(envelope[keep]))


def mean_speed(series: MotorTimeSeries, t_ss: float) -> float:
    """Mean rotor spin rate (rad/s) after steady state."""
    if not series.time[0] <= t_ss <= series.time[-1]:
        raise ValueError(f"t_ss={t_ss:g} outside the series span")
    mask = series.time >= t_ss
    return float(np.mean(series.surface_speed[mask]) / series.radius)
