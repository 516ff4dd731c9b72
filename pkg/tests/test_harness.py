import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slimeca.errors import ConfigurationError
from slimeca.geometry import parse_maze
from slimeca.harness import (
    DEGENERATE,
    INPUT_PAIRS,
    FoodSpec,
    OutputLatch,
    SimConfig,
    circularity,
    frequency_table,
    modal_outcome,
    run_experiment,
    run_trial,
    simulate,
    trial_seed,
    truth_table,
)

CROSS = """\
#####Y#####
#####.#####
#####.#####
X.........Q
#####.#####
#####.#####
#####P#####
"""


@pytest.fixture(scope="module")
def cross():
    return parse_maze(CROSS, name="cross")


def small(**kw):
    base = dict(width=11, height=7, max_steps=200, trials=4)
    base.update(kw)
    return SimConfig(**base)


def test_no_inputs_no_outputs(cross):
    res = run_trial(small(food_placement=(FoodSpec("p"),)), cross, (False, False))
    assert res.outputs == (False, False)
    assert res.final_mass_field.sum() == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.booleans(), st.floats(0.05, 1.0))
def test_no_inputs_property(seed, wave, frac):
    geo = parse_maze(CROSS)
    cfg = small(master_seed=seed, wave_enabled=wave, transfer_fraction=frac, max_steps=20)
    assert run_trial(cfg, geo, (False, False)).outputs == (False, False)


def test_trial_deterministic(cross):
    cfg = small(food_placement=(FoodSpec("q"),), wave_enabled=True)
    a = run_trial(cfg, cross, (True, True), 3)
    b = run_trial(cfg, cross, (True, True), 3)
    assert a.outputs == b.outputs and a.first_activation_step == b.first_activation_step
    assert a.seed == b.seed and np.array_equal(a.final_mass_field, b.final_mass_field)


def test_trial_seeds_distinct():
    seeds = {trial_seed(0, t) for t in range(1000)}
    assert len(seeds) == 1000
    assert trial_seed(1, 0) != trial_seed(0, 0)


def test_single_trial_count(cross):
    counts = run_experiment(small(trials=1), cross, (False, True))
    assert sum(counts.values()) == 1 and len(counts) == 1


def test_counts_sum_to_trials_fuzz(cross):
    rng = np.random.default_rng(0)
    for _ in range(100):
        trials = int(rng.integers(1, 4))
        cfg = small(
            trials=trials, max_steps=int(rng.integers(1, 40)),
            transfer_fraction=float(rng.uniform(0.05, 1.0)),
            master_seed=int(rng.integers(0, 2**63)),
            wave_enabled=bool(rng.integers(0, 2)),
        )
        inputs = INPUT_PAIRS[int(rng.integers(0, 4))]
        assert sum(run_experiment(cfg, cross, inputs).values()) == trials


def test_aggregate_permutation_invariant(cross):
    cfg = small(trials=6, food_placement=(FoodSpec("p"),))
    order = [5, 2, 0, 4, 1, 3]
    shuffled = Counter(run_trial(cfg, cross, (True, False), t).outputs for t in order)
    assert shuffled == run_experiment(cfg, cross, (True, False))


def test_latch_never_deactivates(cross):
    cfg = small(max_steps=300, food_placement=(FoodSpec("q"),))
    latch = OutputLatch(cross, cfg.mass_threshold)
    prev = (False, False)
    for step, grid, _ in simulate(cfg, cross, (False, True)):
        now = latch.update(step, grid.mass)
        assert all(n or not p for p, n in zip(prev, now))
        prev = now
    for n, f in enumerate(latch.first):
        assert (f is not None) == prev[n]


def test_run_trial_stops_when_both_outputs_resolve(cross):
    cfg = small(max_steps=2000)
    res = run_trial(cfg, cross, (True, True))
    assert all(res.outputs) and res.steps == max(res.first_activation_step)
    full = run_trial(cfg, cross, (True, True), until_resolved=False)
    assert full.steps == 2000


def test_watch_hits(cross):
    watch = {"p_end": np.zeros(cross.shape, dtype=bool)}
    watch["p_end"][6, 5] = True
    res = run_trial(small(max_steps=400), cross, (False, True), watch=watch)
    assert res.watch_hits["p_end"] == res.first_activation_step[0]


def test_modal_outcome_ties_prefer_smaller_pair():
    c = Counter({(True, False): 2, (False, True): 2})
    assert modal_outcome(c) == ((False, True), 0.5)


def test_truth_table_one_row_per_input(cross):
    cfg = small(trials=2, max_steps=50)
    table = truth_table(cfg, cross)
    assert sorted(table) == sorted(INPUT_PAIRS)
    assert table[(False, False)].modal == (False, False)
    ft = frequency_table(cfg, cross)
    assert all(ft.trials(k) == 2 for k in INPUT_PAIRS)


def test_truth_table_overrides(cross):
    cfg = small(trials=2, max_steps=5)
    table = truth_table(cfg, cross, {(True, True): cfg.with_params(trials=3)})
    assert sum(table[(True, True)].counts.values()) == 3


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SimConfig(max_steps=0)
    with pytest.raises(ConfigurationError):
        SimConfig(transfer_fraction=0.0)
    with pytest.raises(ConfigurationError):
        SimConfig(trials=0)
    cfg = SimConfig().with_params(reward_smell=0.4, trials=3)
    assert cfg.reinforcement.reward_smell == 0.4 and cfg.trials == 3


def test_circularity_symmetric_ring():
    rng = np.random.default_rng(3)
    f = rng.random((21, 21))
    # average over the eight symmetries of the square
    sym = sum(np.rot90(g, r) for g in (f, f.T) for r in range(4))
    assert abs(circularity(sym) - 1.0) <= 1e-9
    ii, jj = np.indices((41, 41))
    ring = np.exp(-((np.hypot(ii - 20, jj - 20) - 12) ** 2))
    assert abs(circularity(ring) - 1.0) <= 1e-9


def test_circularity_line_degenerate():
    f = np.zeros((5, 9))
    f[2, :] = 1.0
    assert circularity(f) == DEGENERATE and math.isinf(DEGENERATE)


def test_circularity_ellipse():
    f = np.zeros((3, 3))
    f[1, 0] = f[1, 2] = 1.0
    f[0, 1] = f[2, 1] = 0.5
    # moments: 2/3 along the row, 1/3 along the column
    assert circularity(f) == pytest.approx(2.0, rel=1e-12)


def test_circularity_zero_mass():
    with pytest.raises(ValueError):
        circularity(np.zeros((4, 4)))
