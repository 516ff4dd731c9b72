"""Grid data model, Moore-neighbour indexing, smell diffusion and mass transfer.

Fields are stored as whole-grid numpy arrays (row-major, ``(row, col)``);
:class:`CellState` is a per-cell view for inspection and tests.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._backend import centre_weights, kernels, neighbour_validity
from .errors import ConfigurationError

# k -> (di, dj), row-major over the 3x3 block without its centre
NEIGHBOUR_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
SMELL_KERNEL = np.array([[1, 4, 1], [4, 16, 4], [1, 4, 1]], dtype=np.int64)


def opposite(k):
    """Index of the offset pointing the other way (0 <-> 7, 1 <-> 6, ...)."""
    return 7 - k


def offset_index(di, dj):
    return NEIGHBOUR_OFFSETS.index((di, dj))


class RF(enum.Flag):
    NONE = 0
    REWARD_SMELL = enum.auto()
    PENALTY_SMELL = enum.auto()
    REWARD_WAVE = enum.auto()
    PENALTY_WAVE = enum.auto()


@dataclass(frozen=True)
class CellState:
    as_flag: bool
    mass: float
    pv: tuple
    sd: float
    dir: Optional[int]
    rf: RF


@dataclass(eq=False)
class Grid:
    mask: np.ndarray
    mass: np.ndarray
    pv: np.ndarray
    sd: np.ndarray
    food_sources: tuple = ()
    wave: Optional[np.ndarray] = None
    dir: np.ndarray = None
    rf_smell: np.ndarray = None
    rf_wave: np.ndarray = None
    _valid: np.ndarray = field(default=None, repr=False)
    _cw: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        shape = self.mask.shape
        if self.dir is None:
            self.dir = np.full(shape, -1, dtype=np.int8)
        if self.rf_smell is None:
            self.rf_smell = np.zeros(shape, dtype=np.int8)
        if self.rf_wave is None:
            self.rf_wave = np.zeros(shape, dtype=np.int8)
        self._valid = neighbour_validity(self.mask)
        self._cw = centre_weights(self._valid)
        for i, j, _ in self.food_sources:
            if not self.mask[i, j]:
                raise ConfigurationError(f"food source at {(i, j)} is not accessible")
        if self.wave is not None and self.wave.shape != shape:
            raise ConfigurationError("wave field shape differs from the grid")

    @property
    def height(self):
        return self.mask.shape[0]

    @property
    def width(self):
        return self.mask.shape[1]

    def rf(self, i, j):
        flag = RF.NONE
        s, w = self.rf_smell[i, j], self.rf_wave[i, j]
        if s > 0:
            flag |= RF.REWARD_SMELL
        elif s < 0:
            flag |= RF.PENALTY_SMELL
        if w > 0:
            flag |= RF.REWARD_WAVE
        elif w < 0:
            flag |= RF.PENALTY_WAVE
        return flag

    def cell(self, i, j):
        d = int(self.dir[i, j])
        return CellState(
            as_flag=bool(self.mask[i, j]),
            mass=float(self.mass[i, j]),
            pv=tuple(float(p) for p in self.pv[i, j]),
            sd=float(self.sd[i, j]),
            dir=None if d < 0 else d,
            rf=self.rf(i, j),
        )

    def total_mass(self):
        return float(self.mass.sum())

    def copy(self):
        return Grid(
            mask=self.mask.copy(), mass=self.mass.copy(), pv=self.pv.copy(),
            sd=self.sd.copy(), food_sources=self.food_sources,
            wave=None if self.wave is None else self.wave.copy(),
            dir=self.dir.copy(), rf_smell=self.rf_smell.copy(),
            rf_wave=self.rf_wave.copy(),
        )


def make_grid(mask, mass=None, sd=None, food_sources=(), wave=None):
    """Grid with uniform action probabilities over an arbitrary mask."""
    mask = np.array(mask, dtype=bool)
    shape = mask.shape
    pv = np.zeros(shape + (8,))
    pv[mask] = 1.0 / 8.0
    mass = np.zeros(shape) if mass is None else np.array(mass, dtype=np.float64)
    sd = np.zeros(shape) if sd is None else np.array(sd, dtype=np.float64)
    mass[~mask] = 0.0
    sd[~mask] = 0.0
    return Grid(mask=mask, mass=mass, pv=pv, sd=sd,
                food_sources=tuple(food_sources), wave=wave)


def init_grid(geometry, config, inputs):
    """Seed a grid for one trial.

    ``inputs`` is the ``(x, y)`` activation pair; each active input site gets
    ``config.initial_mass``.  Food cells start at their source strength.
    """
    x_on, y_on = (bool(v) for v in inputs)
    mass = np.zeros(geometry.shape)
    for on, label in ((x_on, "x"), (y_on, "y")):
        if not on:
            continue
        site = geometry.input_site(label)
        if not geometry.accessible(site):
            raise ConfigurationError(f"input site {label} missing from geometry")
        mass[site] += config.initial_mass
    food = tuple(config.resolve_food(geometry))
    sd = np.zeros(geometry.shape)
    for i, j, s in food:
        sd[i, j] = max(sd[i, j], s)
    return make_grid(geometry.mask, mass=mass, sd=sd, food_sources=food)


def diffuse_smell(grid):
    """One step of the 1-4-16 smell kernel with zero-flux walls; sources refill."""
    new = kernels.diffuse(np.ascontiguousarray(grid.sd), grid.mask, grid._valid, grid._cw)
    for i, j, s in grid.food_sources:
        if new[i, j] < s:
            new[i, j] = s
    grid.sd = new
    return new


def step_mass_transfer(grid, rng, config):
    """Synchronous two-phase mass exchange.

    Every accessible cell samples a neighbour from its ``pv`` and pulls
    ``transfer_fraction`` of that neighbour's old mass, provided the neighbour
    is accessible and holds at least the detectable mass.  Oversubscribed
    donors have their outflows scaled down proportionally.  Sets ``grid.dir``
    and returns it.
    """
    u = rng.random(grid.mask.shape)
    new, direction = kernels.transfer(
        np.ascontiguousarray(grid.mass), grid.pv, grid.mask, grid._valid, u,
        float(config.transfer_fraction), float(config.reinforcement.mass_threshold),
    )
    grid.mass = new
    grid.dir = direction
    return direction


def executed_transfers(direction):
    """List of ``(donor, receiver, k)`` for a direction array from a step."""
    out = []
    for i, j in zip(*np.nonzero(direction >= 0)):
        k = int(direction[i, j])
        di, dj = NEIGHBOUR_OFFSETS[k]
        out.append(((int(i) + di, int(j) + dj), (int(i), int(j)), k))
    return out
