"""Learning cellular automaton model of the Physarum polycephalum plasmodium.

Cells on a square lattice exchange protoplasmic mass with their Moore
neighbours according to per-cell action probabilities that are reinforced by
a diffusing food smell and by a ballistic wave field.  The package runs the
P1/P2 two-input gate experiments and aggregates Monte-Carlo truth tables.
"""

from ._backend import BACKEND
from .geometry import GateGeometry, bundled_gate, parse_maze, serialize_maze
from .harness import (
    FoodSpec,
    FrequencyTable,
    SimConfig,
    TrialResult,
    circularity,
    run_experiment,
    run_trial,
    truth_table,
)
from .lattice import CellState, Grid, diffuse_smell, init_grid, step_mass_transfer
from .reinforcement import (
    ReinforcementParams,
    apply_reinforcement,
    clamp_pv,
    compute_reinforcement,
    generate_wave_field,
    penalty_update,
    reward_update,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "GateGeometry", "bundled_gate", "parse_maze", "serialize_maze",
    "FoodSpec", "FrequencyTable", "SimConfig", "TrialResult", "circularity",
    "run_experiment", "run_trial", "truth_table", "CellState", "Grid",
    "diffuse_smell", "init_grid", "step_mass_transfer", "ReinforcementParams",
    "apply_reinforcement", "clamp_pv", "compute_reinforcement",
    "generate_wave_field", "penalty_update", "reward_update",
]
