"""Trials, Monte-Carlo experiments, truth tables and the circularity metric."""

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .lattice import diffuse_smell, init_grid, step_mass_transfer
from .reinforcement import (
    ReinforcementParams,
    apply_reinforcement,
    combine_wave_fields,
    compute_reinforcement,
    generate_wave_field,
)

INPUT_PAIRS = ((False, False), (False, True), (True, False), (True, True))
DEGENERATE = math.inf


@dataclass(frozen=True)
class FoodSpec:
    """A smell source: an output region label (``"p"``/``"q"``) or a ``(row, col)`` cell."""

    target: object
    strength: Optional[float] = None

    def cells(self, geometry):
        if isinstance(self.target, str):
            if self.target not in ("p", "q"):
                raise ConfigurationError(f"unknown food target {self.target!r}")
            return sorted(geometry.region(self.target))
        cell = tuple(int(c) for c in self.target)
        if not geometry.accessible(cell):
            raise ConfigurationError(f"food source at {cell} is not accessible")
        return [cell]


@dataclass(frozen=True)
class SimConfig:
    width: int = 60
    height: int = 60
    initial_mass: float = 10.0
    source_strength: float = 100.0
    transfer_fraction: float = 0.1
    reinforcement: ReinforcementParams = field(default_factory=ReinforcementParams)
    max_steps: int = 1000
    trials: int = 30
    master_seed: int = 0
    wave_enabled: bool = False
    food_placement: tuple = ()

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ConfigurationError("grid width and height must be positive")
        if self.max_steps < 1:
            raise ConfigurationError("max_steps must be >= 1")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if not 0.0 < self.transfer_fraction <= 1.0:
            raise ConfigurationError("transfer_fraction must lie in (0, 1]")
        if self.initial_mass < 0.0 or self.source_strength < 0.0:
            raise ConfigurationError("initial_mass and source_strength must be non-negative")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigurationError("master_seed must be a 64-bit unsigned integer")
        for f in self.food_placement:
            if f.strength is not None and f.strength < 0.0:
                raise ConfigurationError("food strength must be non-negative")

    @property
    def mass_threshold(self):
        return self.reinforcement.mass_threshold

    def resolve_food(self, geometry):
        out = []
        for f in self.food_placement:
            s = self.source_strength if f.strength is None else f.strength
            out.extend((i, j, s) for i, j in f.cells(geometry))
        return out

    def with_params(self, **kw):
        """Copy with top-level or reinforcement fields replaced."""
        rkeys = set(ReinforcementParams.__dataclass_fields__)
        rkw = {k: kw.pop(k) for k in list(kw) if k in rkeys}
        cfg = replace(self, **kw)
        if rkw:
            cfg = replace(cfg, reinforcement=replace(cfg.reinforcement, **rkw))
        return cfg


@dataclass(frozen=True)
class TrialResult:
    inputs: tuple
    outputs: tuple
    first_activation_step: tuple
    final_mass_field: np.ndarray = field(repr=False)
    seed: int
    steps: int
    watch_hits: dict = field(default_factory=dict)


@dataclass
class FrequencyTable:
    """Input pair -> Counter of output pairs."""

    rows: dict = field(default_factory=dict)

    def add(self, inputs, counts):
        self.rows[tuple(bool(v) for v in inputs)] = Counter(counts)

    def trials(self, inputs):
        return sum(self.rows[tuple(bool(v) for v in inputs)].values())

    def modal(self, inputs):
        return modal_outcome(self.rows[tuple(bool(v) for v in inputs)])


@dataclass(frozen=True)
class TruthRow:
    inputs: tuple
    modal: tuple
    frequency: float
    counts: dict


def trial_seed(master_seed, trial_index):
    """Derive a 64-bit per-trial seed from the master seed and the trial index."""
    ss = np.random.SeedSequence([int(master_seed), int(trial_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def trial_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def wave_for_inputs(geometry, inputs):
    sites = [geometry.input_site(lbl) for on, lbl in zip(inputs, "xy") if on]
    if not sites:
        return None
    return combine_wave_fields(generate_wave_field(geometry, s) for s in sites)


def _region_index(region):
    cells = sorted(region)
    return np.array([c[0] for c in cells]), np.array([c[1] for c in cells])


def simulate(config, geometry, inputs, trial_index=0):
    """Yield ``(step, grid, seed)`` after initialisation (step 0) and every step.

    One step: apply pending reinforcement, diffuse smell, transfer mass,
    compute new flags.  Runs for ``config.max_steps`` steps unless the caller
    stops iterating.
    """
    inputs = tuple(bool(v) for v in inputs)
    grid = init_grid(geometry, config, inputs)
    if config.wave_enabled:
        grid.wave = wave_for_inputs(geometry, inputs)
    seed = trial_seed(config.master_seed, trial_index)
    rng = trial_rng(seed)
    params = config.reinforcement
    yield 0, grid, seed
    for step in range(1, config.max_steps + 1):
        apply_reinforcement(grid, params)
        diffuse_smell(grid)
        step_mass_transfer(grid, rng, config)
        compute_reinforcement(grid, params)
        yield step, grid, seed


class OutputLatch:
    """Latched output detection: an output stays on once any region cell is detectable."""

    def __init__(self, geometry, threshold):
        self._p = _region_index(geometry.output_p)
        self._q = _region_index(geometry.output_q)
        self.threshold = threshold
        self.first = [None, None]

    def update(self, step, mass):
        for n, idx in enumerate((self._p, self._q)):
            if self.first[n] is None and (mass[idx] >= self.threshold).any():
                self.first[n] = step
        return self.active

    @property
    def active(self):
        return tuple(f is not None for f in self.first)


def run_trial(config, geometry, inputs, trial_index=0, until_resolved=True, watch=None):
    """Run one trial; outputs latch at the first detectable mass in their region.

    ``watch`` optionally maps names to boolean masks; the first step at which
    any masked cell holds detectable mass is reported in ``watch_hits``.
    """
    inputs = tuple(bool(v) for v in inputs)
    watch = dict(watch or {})
    hits = {name: None for name in watch}
    latch = OutputLatch(geometry, config.mass_threshold)
    seed = trial_seed(config.master_seed, trial_index)
    if not any(inputs) or config.initial_mass == 0.0:
        # no mass: nothing can ever move, skip the dead loop
        grid = init_grid(geometry, config, inputs)
        return TrialResult(inputs, (False, False), (None, None), grid.mass.copy(), seed, 0, hits)
    step = 0
    thr = config.mass_threshold
    for step, grid, seed in simulate(config, geometry, inputs, trial_index):
        for name, m in watch.items():
            if hits[name] is None and (grid.mass[m] >= thr).any():
                hits[name] = step
        if all(latch.update(step, grid.mass)) and until_resolved:
            break
    return TrialResult(
        inputs=inputs,
        outputs=latch.active,
        first_activation_step=tuple(latch.first),
        final_mass_field=grid.mass.copy(),
        seed=seed,
        steps=step,
        watch_hits=hits,
    )


def run_experiment(config, geometry, inputs):
    """Outcome counts over ``config.trials`` independent trials."""
    counts = Counter()
    for t in range(config.trials):
        counts[run_trial(config, geometry, inputs, t).outputs] += 1
    return counts


def modal_outcome(counts):
    """Most frequent output pair; ties broken toward the smaller pair."""
    best = max(sorted(counts), key=lambda k: counts[k])
    return best, counts[best] / sum(counts.values())


def truth_table(config, geometry, overrides=None):
    """Run every input pair and report the modal output pair of each.

    ``overrides`` optionally maps an input pair to its own config, for gates
    whose per-input scenarios were tuned separately.
    """
    freq_table = frequency_table(config, geometry, overrides)
    table = {}
    for inputs in INPUT_PAIRS:
        modal, freq = freq_table.modal(inputs)
        table[inputs] = TruthRow(inputs, modal, freq, dict(freq_table.rows[inputs]))
    return table


def frequency_table(config, geometry, overrides=None):
    overrides = {tuple(bool(v) for v in k): v for k, v in (overrides or {}).items()}
    table = FrequencyTable()
    for inputs in INPUT_PAIRS:
        table.add(inputs, run_experiment(overrides.get(inputs, config), geometry, inputs))
    return table


def circularity(mass_field):
    """Ratio of the larger to the smaller principal second moment of the mass.

    1 means isotropic; a field with zero minor moment returns ``DEGENERATE``.
    """
    m = np.asarray(mass_field, dtype=np.float64)
    total = m.sum()
    if not total > 0.0:
        raise ValueError("circularity is undefined for a field with zero mass")
    ii, jj = np.indices(m.shape, dtype=np.float64)
    ci = (m * ii).sum() / total
    cj = (m * jj).sum() / total
    di, dj = ii - ci, jj - cj
    cov = np.array([
        [(m * di * di).sum(), (m * di * dj).sum()],
        [(m * di * dj).sum(), (m * dj * dj).sum()],
    ]) / total
    lo, hi = np.linalg.eigvalsh(cov)
    scale = max(hi, 1e-300)
    if lo <= 1e-12 * scale:
        return DEGENERATE
    return float(hi / lo)
