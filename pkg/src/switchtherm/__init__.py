"""Thermal channels inside a quantum switch: simulation, capacity bound and checks.

Tensor order is ``C, A, M, E1, E2`` (control, record, message, two bath
qubits). Entropies are in nats internally; CSV output is in bits.
"""
from .channels import (
    CollisionParams,
    KrausChannel,
    collision_unitary,
    is_cptp,
    is_energy_conserving,
    is_gibbs_preserving,
    kraus_from_dilation,
    partial_cnot_channel,
    thermal_qubit_channel,
)
from .infobound import BoundResult, bound_theorem1, conditional_mutual_information, fcoh_floor, mutual_information
from .matcore import FactorLayout, kron, partial_trace
from .states import DensityMatrix, free_energy_of_coherence, thermal_state, von_neumann_entropy
from .sweep import ResultRow, SweepGrid, figure, run_scenario, run_sweep
from .switch import (
    ControlState,
    ScenarioParams,
    apply_switch,
    closed_form_final_state,
    simulate_full,
    swap_and_trace,
    verify_theorem2,
)

__version__ = "0.1.0"

__all__ = [
    "BoundResult", "CollisionParams", "ControlState", "DensityMatrix", "FactorLayout",
    "KrausChannel", "ResultRow", "ScenarioParams", "SweepGrid", "apply_switch",
    "bound_theorem1", "closed_form_final_state", "collision_unitary",
    "conditional_mutual_information", "fcoh_floor", "figure", "free_energy_of_coherence",
    "is_cptp", "is_energy_conserving", "is_gibbs_preserving", "kraus_from_dilation", "kron",
    "mutual_information", "partial_cnot_channel", "partial_trace", "run_scenario",
    "run_sweep", "simulate_full", "swap_and_trace", "thermal_qubit_channel", "thermal_state",
    "verify_theorem2", "von_neumann_entropy",
]
