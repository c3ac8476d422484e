"""Traveling-wave rotary ultrasonic motor simulator.

Stator ring eigenanalysis, two-phase traveling-wave drive, penalty/Coulomb
stator-rotor contact transients, preload and COF parametric sweeps, and
areal surface-roughness metrology.
"""

from .config import RunConfig, load_config
from .contact import ContactConfig, ContactState, evaluate_contact, modal_reaction
from .dynamics import (MotorTimeSeries, RotorConfig, detect_steady_state,
                       envelope_average, mean_speed, simulate)
from .materials import builtin_library, lookup, validate_piezo
from .metrology import areal_params, level_mean_plane, load_height_map
from .stator import (StatorGeometry, StatorModel, assemble_system,
                     build_ring_mesh, piezo_modal_force, select_mode_pair,
                     solve_eigen)
from .sweep import SweepSpec, compare_trends, find_peak, grams_to_newtons, run_sweep
from .wave import DriveConfig, ideal_no_slip_speed, steady_wave_response, surface_state

__version__ = "0.1.0"
