from fractions import Fraction

import numpy as np
import pytest

from dynamo_lab.dynamics import (
    Configuration,
    Outcome,
    Simulator,
    ThresholdModel,
    Variant,
    boundary_potential_violations,
    diagnose,
    potential_phi_boundary,
    potential_phi_core,
    run,
    step,
    two_round_core,
)
from dynamo_lab.errors import ModelError, PreconditionError, RoundRangeError
from dynamo_lab.generators import gen_clique_with_leaves, gen_complete, gen_random_connected, gen_random_tree
from dynamo_lab.graph import node_mask


class TestThresholdModel:
    def test_parse_compact_and_flag_forms(self):
        """Both model spellings parse to the same model."""
        assert ThresholdModel.parse("twoway-r:2") == ThresholdModel.twoway_rbp(2)
        assert ThresholdModel.parse("alpha", alpha="1/2") == ThresholdModel.alpha_bp(Fraction(1, 2))
        assert ThresholdModel.parse("twoway-alpha:4/5").label == "twoway-alpha:4/5"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"variant": Variant.RBP},
            {"variant": Variant.RBP, "r": 0},
            {"variant": Variant.RBP, "r": 2, "alpha": "1/2"},
            {"variant": Variant.ALPHA_BP, "alpha": "1"},
            {"variant": Variant.ALPHA_BP, "alpha": "0"},
            {"variant": Variant.TWO_WAY_ALPHA_BP, "alpha": "x"},
        ],
    )
    def test_invalid_models(self, kwargs):
        with pytest.raises(ModelError):
            ThresholdModel(**kwargs)

    def test_unknown_variant(self):
        with pytest.raises(ModelError):
            ThresholdModel.parse("majority:1")

    def test_alpha_threshold_is_exact(self):
        """Thresholds use exact rationals, no float rounding."""
        m = ThresholdModel.alpha_bp("1/2")
        assert [m.threshold(d) for d in (1, 2, 3, 4, 5)] == [1, 1, 2, 2, 3]
        m = ThresholdModel.alpha_bp("2/3")
        assert m.threshold(3) == 2
        assert m.threshold(4) == 3

    def test_r_above_min_degree_rejected(self, c5):
        with pytest.raises(ModelError):
            Simulator(c5, ThresholdModel.twoway_rbp(3))


class TestStep:
    def test_odd_cycle_step(self, c5):
        nxt = step(c5, ThresholdModel.twoway_alpha_bp("1/2"), Configuration.from_nodes({0}))
        assert nxt.node_set() == {1, 4}

    def test_complete_graph_step(self):
        nxt = step(gen_complete(5), ThresholdModel.twoway_rbp(2), Configuration.from_nodes({0, 1}))
        assert nxt.node_set() == {2, 3, 4}

    def test_all_black_is_fixed(self, petersen):
        full = Configuration(petersen.full_mask)
        for m in (ThresholdModel.twoway_rbp(3), ThresholdModel.twoway_alpha_bp("4/5"), ThresholdModel.rbp(2)):
            assert step(petersen, m, full) == full

    def test_one_way_never_loses_black(self, c5):
        """One-way runs only grow."""
        nxt = step(c5, ThresholdModel.rbp(2), Configuration.from_nodes({0}))
        assert nxt.node_set() == {0}


class TestRun:
    def test_odd_cycle_reaches_all_black(self, c5):
        trace = run(c5, ThresholdModel.twoway_alpha_bp("1/2"), Configuration.from_nodes({0}))
        assert trace.outcome is Outcome.FIXED_POINT
        assert [sorted(c.nodes()) for c in trace.configs()] == [
            [0],
            [1, 4],
            [0, 2, 3],
            [1, 2, 3, 4],
            [0, 1, 2, 3, 4],
            [0, 1, 2, 3, 4],
        ]
        assert trace.period == 1 and trace.cycle_start == 4
        # black spreads one step per round in each direction
        assert trace.rounds <= 2 * (5 // 2) + 2

    def test_even_cycle_alternates(self, c4):
        """Alternate nodes of C4 flip forever with period 2."""
        trace = run(c4, ThresholdModel.twoway_rbp(1), Configuration.from_nodes({0}))
        assert trace.outcome is Outcome.CYCLE
        assert trace.period == 2 and trace.cycle_start == 1
        assert trace.black_at(1) == {1, 3}
        assert trace.black_at(2) == {0, 2}

    def test_limit_reached(self, c5):
        trace = run(c5, ThresholdModel.twoway_alpha_bp("1/2"), Configuration.from_nodes({0}), limit=2)
        assert trace.outcome is Outcome.LIMIT_REACHED
        assert trace.rounds == 2
        assert trace.period is None

    def test_bad_limit(self, c5):
        with pytest.raises(PreconditionError):
            run(c5, ThresholdModel.rbp(1), Configuration.from_nodes({0}), limit=0)

    def test_one_way_finishes_within_n_plus_one_rounds(self):
        rng = np.random.default_rng(5)
        for seed in range(8):
            g = gen_random_connected(10, 0.35, seed=seed)
            m = ThresholdModel.rbp(1) if g.min_degree < 2 else ThresholdModel.rbp(2)
            start = node_mask(np.flatnonzero(rng.random(g.n) < 0.3).tolist())
            trace = Simulator(g, m).run_mask(start)
            assert trace.outcome is Outcome.FIXED_POINT
            assert trace.rounds <= g.n + 1

    def test_black_at_out_of_range(self, c4):
        trace = run(c4, ThresholdModel.twoway_rbp(1), Configuration.from_nodes({0}))
        with pytest.raises(RoundRangeError):
            trace.black_at(trace.rounds + 1)

    def test_records(self, c4):
        records = run(c4, ThresholdModel.twoway_rbp(1), Configuration.from_nodes({0})).to_records()
        assert records[0] == {"t": 0, "black": [0]}
        assert records[1] == {"t": 1, "black": [1, 3]}
        assert records[-1] == {"outcome": "cycle", "period": 2, "start": 1}
        assert len(records) == 5


def test_step_preserves_inclusion():
    """A subset of black nodes stays a subset after one step."""
    rng = np.random.default_rng(17)
    models = [
        ThresholdModel.twoway_rbp(1),
        ThresholdModel.twoway_rbp(2),
        ThresholdModel.twoway_alpha_bp("1/2"),
        ThresholdModel.twoway_alpha_bp("4/5"),
        ThresholdModel.alpha_bp("2/3"),
    ]
    for seed in range(6):
        g = gen_random_connected(9, 0.5, seed=seed)
        for m in models:
            if m.r is not None and m.r > g.min_degree:
                continue
            sim = Simulator(g, m)
            for _ in range(30):
                small = node_mask(np.flatnonzero(rng.random(g.n) < 0.4).tolist())
                large = small | node_mask(np.flatnonzero(rng.random(g.n) < 0.4).tolist())
                assert sim.step_mask(small) & ~sim.step_mask(large) == 0


class TestCores:
    def test_all_black_core(self, k4):
        trace = run(k4, ThresholdModel.twoway_rbp(1), Configuration(k4.full_mask))
        assert two_round_core(trace, 1) == frozenset(range(4))
        assert potential_phi_core(k4, trace, 1) == 4

    def test_alternating_core_is_empty(self, c4):
        """No node is black in two consecutive rounds."""
        trace = run(c4, ThresholdModel.twoway_rbp(1), Configuration.from_nodes({0}))
        assert all(two_round_core(trace, t) == frozenset() for t in range(1, trace.rounds + 1))
        assert potential_phi_core(c4, trace, trace.rounds) == 0

    def test_clique_with_leaves_core(self):
        g = gen_clique_with_leaves(4, 16)
        trace = run(g, ThresholdModel.twoway_alpha_bp("1/2"), Configuration.from_nodes(range(4)))
        assert two_round_core(trace, 1) == frozenset(range(4))

    def test_core_potential_by_hand(self, k4):
        trace = run(k4, ThresholdModel.rbp(3), Configuration.from_nodes({0, 1}))
        assert two_round_core(trace, 1) == {0, 1}
        assert potential_phi_core(k4, trace, 1) == 6
        assert potential_phi_boundary(k4, {0, 1}) == 4

    @pytest.mark.parametrize("t", [0, 99])
    def test_round_out_of_range(self, c4, t):
        trace = run(c4, ThresholdModel.twoway_rbp(1), Configuration.from_nodes({0}))
        with pytest.raises(RoundRangeError):
            two_round_core(trace, t)

    def test_core_potential_never_grows_above_three_quarters(self):
        """|B_t| + |∂(B_t)| is non-increasing for alpha > 3/4."""
        rng = np.random.default_rng(3)
        m = ThresholdModel.twoway_alpha_bp("4/5")
        for seed in range(10):
            g = gen_random_connected(10, 0.5, seed=seed)
            sim = Simulator(g, m)
            for _ in range(20):
                start = node_mask(np.flatnonzero(rng.random(g.n) < 0.6).tolist())
                assert diagnose(g, sim.run_mask(start)).core_increases() == []

    def test_boundary_potential_on_one_way_runs(self):
        rng = np.random.default_rng(4)
        m = ThresholdModel.alpha_bp("3/5")
        graphs = [gen_random_connected(10, 0.4, seed=s) for s in range(5)] + [gen_random_tree(12, seed=s) for s in range(5)]
        for g in graphs:
            sim = Simulator(g, m)
            for _ in range(20):
                start = node_mask(np.flatnonzero(rng.random(g.n) < 0.3).tolist())
                assert boundary_potential_violations(g, sim.run_mask(start)) == []

    def test_diagnose_lengths(self, c5):
        trace = run(c5, ThresholdModel.twoway_alpha_bp("1/2"), Configuration.from_nodes({0}))
        diag = diagnose(c5, trace)
        assert len(diag.cores) == len(diag.phi_core) == trace.rounds
        assert len(diag.phi_boundary) == trace.rounds + 1
        assert diag.phi_boundary[0] == 2
        assert diag.phi_core[-1] == 5
