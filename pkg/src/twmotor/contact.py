"""Penalty normal contact and regularized Coulomb friction at the rotor interface.

The interface is sampled at M uniform angles on the mean contact radius.
Normal forces follow a one-sided penalty law on the gap between the rigid
rotor plane and the wavy stator surface; tangential forces follow a
tanh-regularized Coulomb law of the local slip velocity, so the friction
cone |f| < mu*N holds strictly and friction always opposes slip.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .stator import StatorGeometry

__all__ = [
    "ContactConfig",
    "ContactState",
    "contact_angles",
    "evaluate_contact",
    "modal_reaction",
    "power_balance",
]


@dataclass(frozen=True)
class ContactConfig:
    """Interface discretization and constitutive parameters."""

    point_count: int = 128
    penalty_stiffness: float = 2e5        # N/m per point
    regularization_velocity: float = 1e-3  # m/s
    cof: float = 0.2

    def __post_init__(self):
        if self.point_count < 4:
            raise ValueError("point_count must be >= 4")
        if self.penalty_stiffness <= 0:
            raise ValueError("penalty_stiffness must be > 0")
        if self.regularization_velocity <= 0:
            raise ValueError("regularization_velocity must be > 0")
        if self.cof < 0:
            raise ValueError("cof must be >= 0")

    def check_resolution(self, nodal_diameters: int):
        minimum = 4 * nodal_diameters
        if self.point_count < minimum:
            raise ValueError(
                f"point_count={self.point_count} cannot resolve n={nodal_diameters} "
                f"waves; need at least {minimum}"
            )


def contact_angles(cfg: ContactConfig) -> np.ndarray:
    """Uniform sampling angles of the contact points."""
    return 2.0 * np.pi * np.arange(cfg.point_count) / cfg.point_count


@dataclass(frozen=True)
class ContactState:
    """Per-point contact forces and their resultants on the rotor."""

    gap: np.ndarray = field(repr=False)             # m
    normal_force: np.ndarray = field(repr=False)    # N, >= 0
    friction_force: np.ndarray = field(repr=False)  # N, tangential on rotor
    slip_velocity: np.ndarray = field(repr=False)   # m/s, rotor rim minus surface
    axial_force: float                              # N, sum of normal forces
    torque: float                                   # N*m about the spin axis

    @property
    def friction_power(self) -> float:
        """Sum f_i * s_i; non-positive (friction dissipates)."""
        return float(self.friction_force @ self.slip_velocity)


def evaluate_contact(surface_w, surface_vt, rotor_z: float, rotor_speed: float,
                     geom: StatorGeometry, cfg: ContactConfig) -> ContactState:
    """Evaluate the interface law at every contact point.

    ``surface_w`` and ``surface_vt`` are the stator deflection and
    tangential surface velocity sampled at ``contact_angles(cfg)``.
    """
    w = np.asarray(surface_w, dtype=float)
    vt = np.asarray(surface_vt, dtype=float)
    if w.shape != (cfg.point_count,) or vt.shape != (cfg.point_count,):
        raise ValueError("surface arrays must have one entry per contact point")
    R = geom.mean_radius
    gap = rotor_z - w
    normal = cfg.penalty_stiffness * np.maximum(0.0, -gap)
    slip = R * rotor_speed - vt
    friction = -cfg.cof * normal * np.tanh(slip / cfg.regularization_velocity)
    return ContactState(
        gap=gap,
        normal_force=normal,
        friction_force=friction,
        slip_velocity=slip,
        axial_force=float(np.sum(normal)),
        torque=float(R * np.sum(friction)),
    )


def modal_reaction(state: ContactState, shape_w, shape_dtheta,
                   geom: StatorGeometry) -> np.ndarray:
    """Generalized contact forces on stator shapes (virtual-work projection).

    ``shape_w`` and ``shape_dtheta`` give each shape's deflection and its
    theta-derivative at the contact angles, one row per shape.  The normal
    traction loads the deflection; the tangential traction loads the slope
    through the tooth-tip offset:

        Q_j = sum_i [ -N_i phi_j(theta_i) + f_i z_c phi_j'(theta_i) / R ]
    """
    shape_w = np.atleast_2d(np.asarray(shape_w, dtype=float))
    shape_dtheta = np.atleast_2d(np.asarray(shape_dtheta, dtype=float))
    zc_over_R = geom.contact_offset / geom.mean_radius
    return (-shape_w @ state.normal_force
            + zc_over_R * (shape_dtheta @ state.friction_force))


def power_balance(state: ContactState, surface_wdot, surface_vt,
                  rotor_zdot: float, rotor_speed: float,
                  geom: StatorGeometry) -> dict[str, float]:
    """Bookkeeping of contact power flow.

    The work rate on the rotor plus the work rate of the reactions on the
    stator surface equals the penalty-spring storage rate plus the
    friction dissipation Sum f_i s_i (<= 0); ``residual`` is the defect of
    that identity.
    """
    wdot = np.asarray(surface_wdot, dtype=float)
    vt = np.asarray(surface_vt, dtype=float)
    R = geom.mean_radius
    p_rotor = state.axial_force * rotor_zdot + state.torque * rotor_speed
    p_stator = float(-state.normal_force @ wdot - state.friction_force @ vt)
    gap_rate = rotor_zdot - wdot
    p_penalty = float(state.normal_force @ gap_rate)
    p_friction = float(state.friction_force @ (R * rotor_speed - vt))
    return {
        "rotor": p_rotor,
        "stator": p_stator,
        "penalty": p_penalty,
        "friction": p_friction,
        "residual": p_rotor + p_stator - p_penalty - p_friction,
    }
