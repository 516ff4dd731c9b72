"""Linear reward-penalty learning on the per-cell action probability vectors.

A cell's vector ``pv`` holds, for each Moore neighbour ``k``, the probability of
pulling mass from that neighbour.  Two reinforcement channels act on it: smell
(follow the attractant gradient) and wave (ballistic outward propagation from
the inputs).
"""

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ConfigurationError
from .geometry import geodesic_distance

N_ACTIONS = 8
WAVE_SENTINEL = -1


@dataclass(frozen=True)
class ReinforcementParams:
    reward_smell: float = 0.15
    penalty_smell: float = 0.05
    reward_wave: float = 0.3
    penalty_wave: float = 0.3
    pv_cap: float = 0.75
    pv_rest_floor: float = 0.25
    mass_threshold: float = 1e-3
    smell_threshold: float = 1e-3

    def __post_init__(self):
        for name in ("reward_smell", "penalty_smell", "reward_wave", "penalty_wave"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ConfigurationError(f"{name} = {v} outside the open interval (0, 1)")
        if not 0.0 < self.pv_cap <= 1.0:
            raise ConfigurationError(f"pv_cap = {self.pv_cap} outside (0, 1]")
        if abs(self.pv_cap + self.pv_rest_floor - 1.0) > 1e-12:
            raise ConfigurationError("pv_cap + pv_rest_floor must equal 1")
        if self.pv_cap < 1.0 / N_ACTIONS:
            raise ConfigurationError("pv_cap below the uniform probability 1/8")
        for name in ("mass_threshold", "smell_threshold"):
            if getattr(self, name) < 0.0:
                raise ConfigurationError(f"{name} must be non-negative")


def _check_action(k):
    if not 0 <= k < N_ACTIONS:
        raise IndexError(f"action index {k} outside 0..{N_ACTIONS - 1}")


def reward_update(pv, k, reward):
    """Move action ``k`` toward certainty; the others shrink by ``1 - reward``."""
    _check_action(k)
    pv = np.asarray(pv, dtype=np.float64)
    out = (1.0 - reward) * pv
    out[k] = pv[k] + reward * (1.0 - pv[k])
    return out


def penalty_update(pv, k, penalty):
    """Shrink action ``k``; the freed probability is spread over the other seven."""
    _check_action(k)
    pv = np.asarray(pv, dtype=np.float64)
    out = penalty / (N_ACTIONS - 1) + (1.0 - penalty) * pv
    out[k] = (1.0 - penalty) * pv[k]
    return out


def clamp_pv(pv, cap=0.75):
    """Cap the dominant action at ``cap``, redistributing the excess.

    The excess goes to the remaining actions in proportion to their current
    values, or uniformly when they are all zero.
    """
    row = np.asarray(pv, dtype=np.float64).reshape(1, N_ACTIONS)
    return kernels.clamp_rows(np.ascontiguousarray(row), float(cap))[0]


def compute_reinforcement(grid, params):
    """Set the reinforcement flags for the transfers executed this step.

    For a transfer A -> B, B's action toward A is rewarded when B smells more
    than A and penalised when it smells less.  Smell flags need both detectable
    mass and detectable smell at B; wave flags only detectable mass.
    """
    rf_smell, rf_wave = kernels.compute_flags(
        grid.mass, grid.sd, grid.wave, grid.dir,
        float(params.mass_threshold), float(params.smell_threshold), WAVE_SENTINEL,
    )
    grid.rf_smell = rf_smell
    grid.rf_wave = rf_wave
    return rf_smell, rf_wave


def apply_reinforcement(grid, params):
    """Apply pending flags (smell channel, then wave), clamp, then clear flags."""
    kernels.apply_flags(
        grid.pv, grid.dir, grid.rf_smell, grid.rf_wave,
        float(params.reward_smell), float(params.penalty_smell),
        float(params.reward_wave), float(params.penalty_wave),
        float(params.pv_cap),
    )
    grid.rf_smell[:] = 0
    grid.rf_wave[:] = 0
    grid.dir[:] = -1


def generate_wave_field(geometry, origin):
    """Geodesic (8-connected, unit cost) distance from ``origin``.

    Walls and unreachable cells hold ``WAVE_SENTINEL``.
    """
    if not geometry.accessible(origin):
        raise ConfigurationError(f"wave origin {tuple(origin)} is not accessible")
    return geodesic_distance(geometry.mask, [tuple(origin)], sentinel=WAVE_SENTINEL)


def combine_wave_fields(fields):
    """Merge fields from simultaneous origins: the earliest-arriving front wins.

    Where two fronts meet the merged field has a ridge, so neither front is
    rewarded for crossing into the other's territory.
    """
    fields = list(fields)
    if not fields:
        return None
    big = np.iinfo(np.int64).max
    stack = np.stack([np.where(f == WAVE_SENTINEL, big, f) for f in fields])
    merged = stack.min(axis=0)
    return np.where(merged == big, WAVE_SENTINEL, merged)

