from itertools import combinations

import numpy as np
import pytest

from dynamo_lab.certify import (
    Property,
    certify,
    is_dynamo,
    is_immortal,
    is_monotone_dynamo,
    is_stable,
    quick_verdict,
)
from dynamo_lab.dynamics import Simulator, ThresholdModel
from dynamo_lab.errors import PreconditionError
from dynamo_lab.generators import gen_clique_with_leaves, gen_random_connected
from dynamo_lab.graph import node_mask
from dynamo_lab.monitor import get_run_monitor

TWOWAY_R2 = ThresholdModel.twoway_rbp(2)


class TestDynamo:
    def test_complete_graph_pair(self, k6):
        """Two nodes take K6 under two-way 2-BP."""
        assert is_dynamo(k6, TWOWAY_R2, {0, 1}).verdict is True

    def test_odd_cycle_single_node(self, c5):
        assert is_dynamo(c5, ThresholdModel.twoway_alpha_bp("1/2"), {0}).verdict is True

    def test_regular_graph_needs_everything(self, petersen):
        """Dropping any node of a 3-regular graph breaks the dynamo."""
        m = ThresholdModel.twoway_rbp(3)
        for missing in range(petersen.n):
            cert = is_dynamo(petersen, m, set(range(petersen.n)) - {missing})
            assert cert.verdict is False
            assert not cert.indeterminate

    def test_whole_graph_is_dynamo_and_stable(self, petersen):
        m = ThresholdModel.twoway_rbp(3)
        assert is_dynamo(petersen, m, range(10))
        assert is_stable(petersen, m, range(10))


class TestMonotone:
    def test_r_plus_one_nodes(self, k6):
        assert is_monotone_dynamo(k6, TWOWAY_R2, {0, 1, 2}).verdict is True

    def test_r_nodes_turn_white(self, k6):
        """r nodes are not enough: each sees only r - 1 black neighbours."""
        cert = is_monotone_dynamo(k6, TWOWAY_R2, {0, 1})
        assert cert.verdict is False
        assert cert.failure_round == 1

    def test_clique_with_leaves(self):
        g = gen_clique_with_leaves(4, 16)
        assert is_monotone_dynamo(g, ThresholdModel.twoway_alpha_bp("1/2"), range(4)).verdict is True

    def test_one_way_dynamo_is_monotone(self):
        rng = np.random.default_rng(8)
        m = ThresholdModel.alpha_bp("1/2")
        for seed in range(4):
            g = gen_random_connected(8, 0.4, seed=seed)
            for _ in range(15):
                nodes = np.flatnonzero(rng.random(g.n) < 0.4).tolist() or [0]
                assert is_dynamo(g, m, nodes).verdict == is_monotone_dynamo(g, m, nodes).verdict


class TestStable:
    def test_one_way_any_set(self, c5):
        assert is_stable(c5, ThresholdModel.rbp(2), {3}).verdict is True

    def test_cycle_whole_set(self, c6):
        assert is_stable(c6, TWOWAY_R2, range(6)).verdict is True

    def test_pair_in_complete_graph(self, k6):
        cert = is_stable(k6, TWOWAY_R2, {0, 1})
        assert cert.verdict is False
        assert cert.failure_round == 1


class TestImmortal:
    def test_alternate_nodes_of_even_cycle(self, c6):
        assert is_immortal(c6, TWOWAY_R2, {1, 3, 5}).verdict is True

    def test_odd_cycle_four_nodes(self, c5):
        """Four of five nodes still die out on C5."""
        for nodes in combinations(range(5), 4):
            assert is_immortal(c5, TWOWAY_R2, nodes).verdict is False

    def test_star_centre(self, star5):
        m = ThresholdModel.twoway_alpha_bp("1/2")
        assert is_immortal(star5, m, {0}).verdict is True
        assert is_stable(star5, m, {0}).verdict is False


def test_empty_set_rejected(c5):
    with pytest.raises(PreconditionError):
        certify(c5, TWOWAY_R2, [], Property.DYNAMO)


def test_foreign_node_rejected(c5):
    with pytest.raises(PreconditionError):
        certify(c5, TWOWAY_R2, [9], Property.DYNAMO)


def test_budget_overrun_is_indeterminate(c5):
    """A run cut short by the budget gives no verdict."""
    cert = is_dynamo(c5, ThresholdModel.twoway_alpha_bp("1/2"), {0}, limit=2)
    assert cert.verdict is None
    assert cert.indeterminate
    assert not cert


def test_quick_verdict_matches_certify():
    """The fast path agrees with full certification on every subset."""
    rng = np.random.default_rng(21)
    models = [ThresholdModel.twoway_rbp(1), ThresholdModel.twoway_rbp(2), ThresholdModel.twoway_alpha_bp("1/2"), ThresholdModel.alpha_bp("2/3")]
    for seed in range(5):
        g = gen_random_connected(8, 0.45, seed=seed)
        for m in models:
            if m.r is not None and m.r > g.min_degree:
                continue
            sim = Simulator(g, m)
            for _ in range(10):
                nodes = np.flatnonzero(rng.random(g.n) < 0.4).tolist() or [1]
                for prop in Property:
                    assert quick_verdict(sim, prop, node_mask(nodes)) == certify(g, m, nodes, prop, simulator=sim).verdict


def test_certificate_model(k6):
    model = is_monotone_dynamo(k6, TWOWAY_R2, {0, 1}).to_model(include_trace=True)
    assert model.property == "monotone"
    assert model.model == "twoway-r:2"
    assert model.set == [0, 1]
    assert model.verdict is False
    assert model.trace[:3] == [[0, 1], [2, 3, 4, 5], [0, 1, 2, 3, 4, 5]]
    assert is_dynamo(k6, TWOWAY_R2, {0, 1}).to_model().trace is None


def test_certifications_are_counted(c6):
    is_immortal(c6, TWOWAY_R2, {0, 2, 4})
    is_stable(c6, TWOWAY_R2, {0, 2, 4})
    assert get_run_monitor().summary()["counters"]["certifications"] == 2
