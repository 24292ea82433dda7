import numpy as np
import pytest

from dynamo_lab.construct import (
    Labeling,
    chord_split,
    count_small_dynamos,
    dense_small_dynamo,
    dynamo_by_labeling,
    dynamo_twoway_r1,
    even_cycle,
    immortal_r2,
    improving_moves,
    labeling_dynamo,
    labeling_expectation,
    longest_cycle,
    stable_by_partition,
)
from dynamo_lab.certify import Property
from dynamo_lab.dynamics import ThresholdModel
from dynamo_lab.errors import ModelError, PreconditionError
from dynamo_lab.generators import gen_complete, gen_complete_minus_matching, gen_cycle, gen_path, gen_random_connected
from dynamo_lab.graph import Graph
from dynamo_lab.search import min_set


class TestLabeling:
    def test_star_centre_first(self, star5):
        """The centre labelled first is the whole set."""
        labeling = Labeling.from_sequence([0, 1, 2, 3, 4, 5])
        assert labeling_dynamo(star5, ThresholdModel.alpha_bp("1/2"), labeling) == {0}

    def test_complete_graph_takes_first_labels(self):
        g = gen_complete(5)
        m = ThresholdModel.alpha_bp("1/2")
        labeling = Labeling.random(5, np.random.default_rng(0))
        members = labeling_dynamo(g, m, labeling)
        assert len(members) == 2
        assert sorted(labeling.order[v] for v in members) == [1, 2]
        assert labeling_expectation(g, m) == 2

    def test_not_a_bijection(self):
        with pytest.raises(PreconditionError):
            Labeling((1, 1, 2))

    def test_report(self, petersen):
        report = dynamo_by_labeling(petersen, ThresholdModel.rbp(2), seed=3, samples=30)
        assert report.certified
        assert report.details["certification_failures"] == 0
        assert len(report.details["sample_sizes"]) == 30
        assert report.size == min(report.details["sample_sizes"])
        assert report.guarantee == 5

    def test_more_samples_never_worse(self):
        g = gen_random_connected(12, 0.3, seed=2)
        m = ThresholdModel.alpha_bp("2/3")
        sizes = [dynamo_by_labeling(g, m, seed=9, samples=s).size for s in (1, 5, 25, 100)]
        assert sizes == sorted(sizes, reverse=True)

    def test_two_way_rejected(self, c5):
        with pytest.raises(ModelError):
            dynamo_by_labeling(c5, ThresholdModel.twoway_rbp(1))


class TestTwoWayR1:
    @pytest.mark.parametrize("n,size", [(6, 2), (5, 1), (8, 2), (7, 1)])
    def test_cycles(self, n, size):
        report = dynamo_twoway_r1(gen_cycle(n))
        assert report.size == size
        assert report.certified

    def test_complete_graph(self, k4):
        report = dynamo_twoway_r1(k4)
        assert report.size == 1 and report.certified
        assert report.details["bipartite"] is False


class TestDense:
    def test_complete_graph(self):
        report = dense_small_dynamo(gen_complete(10), 2, seed=1)
        assert report.size == 2 and report.certified

    def test_complete_minus_matching(self):
        report = dense_small_dynamo(gen_complete_minus_matching(20), 2, seed=4)
        assert report.size == 2 and report.certified
        assert report.details["covered"] == report.details["max_covered"]
        assert report.details["covered"] >= report.details["covered_floor_ceiling"]

    def test_sparse_graph_rejected(self):
        with pytest.raises(PreconditionError):
            dense_small_dynamo(gen_path(10), 2)

    def test_counts(self, k6, c6):
        assert count_small_dynamos(k6, 2).count == 15
        assert count_small_dynamos(c6, 2).count == 0
        partial = count_small_dynamos(k6, 2, budget=5)
        assert (partial.count, partial.examined, partial.total) == (5, 5, 15)
        assert partial.partial


class TestPartition:
    def test_complete_graph(self, k4):
        report = stable_by_partition(k4, "1/2")
        assert report.nodes == {0, 1, 3}
        assert report.certified
        assert report.guarantee == 6

    def test_even_cycle(self):
        g = gen_cycle(8)
        report = stable_by_partition(g, "1/2")
        assert report.certified
        assert 4 <= report.size <= 8
        assert improving_moves(g, report.details["partition"], report.details["size_floor"]) == []

    def test_random_graphs_are_locally_optimal(self):
        for seed in range(5):
            g = gen_random_connected(12, 0.4, seed=seed)
            for alpha in ("1/2", "1/3"):
                report = stable_by_partition(g, alpha)
                assert report.certified
                assert report.size <= float(report.guarantee)
                assert improving_moves(g, report.details["partition"], report.details["size_floor"]) == []

    def test_large_alpha_rejected(self, c6):
        with pytest.raises(PreconditionError):
            stable_by_partition(c6, "3/4")


class TestImmortalR2:
    def test_longest_cycles(self, k4, c6, petersen, star5):
        """Longest cycles of the fixture graphs by exhaustive DFS."""
        assert len(longest_cycle(c6)) == 6
        assert len(longest_cycle(k4)) == 4
        assert len(longest_cycle(petersen)) == 9
        assert longest_cycle(star5) == []

    def test_guard(self, c6):
        with pytest.raises(PreconditionError):
            longest_cycle(c6, guard=5)

    def test_even_cycle(self, c6):
        report = immortal_r2(c6)
        assert report.nodes == {1, 3, 5}
        assert report.certified
        assert report.details["case"] == "even-longest-cycle"

    def test_odd_cycle(self, c5):
        report = immortal_r2(c5)
        assert report.size == 5 and report.certified

    def test_petersen(self, petersen):
        """The longest 9-cycle has chords, one of them cuts off an even cycle."""
        report = immortal_r2(petersen)
        assert report.certified
        assert report.size <= 5
        assert report.details["case"] == "chord-even-cycle"

    def test_hamiltonian_odd_cycle_with_chords(self):
        """K5 is Hamiltonian with k = n odd, the answer still fits in n/2."""
        g = gen_complete(5)
        report = immortal_r2(g)
        assert report.certified
        assert report.details["case"] == "chord-even-cycle"
        assert report.size == min_set(g, ThresholdModel.twoway_rbp(2), Property.IMMORTAL).min_size == 2

    def test_odd_cycle_plus_one_chord(self):
        g = Graph.from_edges(7, [(i, (i + 1) % 7) for i in range(7)] + [(0, 3)])
        report = immortal_r2(g)
        assert report.certified
        assert 2 * report.size <= g.n
        assert len(report.details["cycle"]) % 2 == 0

    def test_chord_split(self, c5):
        assert chord_split(gen_complete(5), [0, 1, 2, 3, 4]) == [2, 3, 4, 0]
        # induced cycle has no chord
        assert chord_split(c5, [0, 1, 2, 3, 4]) == []

    def test_even_cycle_search(self, k4, c5, c6):
        assert even_cycle(k4) == [0, 1, 2, 3]
        assert len(even_cycle(c6)) == 6
        assert even_cycle(c5) == []

    def test_random_graphs(self):
        for seed in range(6):
            g = gen_random_connected(10, 0.45, seed=seed)
            if g.min_degree < 2:
                continue
            report = immortal_r2(g)
            assert report.certified
            assert report.size <= max(g.n / 2, report.details["k"])
            if even_cycle(g):
                assert 2 * report.size <= g.n

    def test_min_degree_one_rejected(self, star5):
        with pytest.raises(PreconditionError):
            immortal_r2(star5)

    def test_report_model(self, c6):
        model = immortal_r2(c6).to_model()
        assert model.set == [1, 3, 5]
        assert model.guarantee.value == 6
