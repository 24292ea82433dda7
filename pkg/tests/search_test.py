import pytest

from dynamo_lab.certify import Property
from dynamo_lab.config import reset_settings
from dynamo_lab.dynamics import ThresholdModel
from dynamo_lab.errors import PreconditionError, SearchCapExceeded
from dynamo_lab.generators import gen_complete, gen_cycle, gen_random_connected
from dynamo_lab.search import all_min_sets, all_sets_model, min_set

TWOWAY_R2 = ThresholdModel.twoway_rbp(2)


def test_complete_graph_minimum_dynamo():
    """K8 under two-way 3-BP needs exactly three nodes."""
    result = min_set(gen_complete(8), ThresholdModel.twoway_rbp(3), Property.DYNAMO)
    assert result.min_size == 3
    assert result.witness == {0, 1, 2}
    assert result.examined == 8 + 28 + 1
    assert result.exhausted_up_to == 2


@pytest.mark.parametrize("n,expected", [(7, 7), (8, 4), (5, 5), (6, 3)])
def test_cycle_minimum_immortal(n, expected):
    assert min_set(gen_cycle(n), TWOWAY_R2, Property.IMMORTAL).min_size == expected


def test_string_property_accepted(c6):
    assert min_set(c6, TWOWAY_R2, "immortal").witness == {0, 2, 4}


def test_all_pairs_of_complete_graph(k6):
    sets = all_min_sets(k6, TWOWAY_R2, Property.DYNAMO, 2)
    assert len(sets) == 15
    assert sets[0] == {0, 1} and sets[-1] == {4, 5}


def test_regular_cycle_has_no_small_dynamo(c6):
    assert all_min_sets(c6, TWOWAY_R2, Property.DYNAMO, 5) == []


def test_both_alternating_triples_are_immortal(c6):
    """All minimum immortal sets of C6 are listed."""
    sets = all_min_sets(c6, TWOWAY_R2, Property.IMMORTAL, 3)
    assert {0, 2, 4} in sets and {1, 3, 5} in sets


def test_all_sets_model(k6):
    sets = all_min_sets(k6, TWOWAY_R2, Property.DYNAMO, 2)
    model = all_sets_model(TWOWAY_R2, Property.DYNAMO, 2, sets)
    assert model.count == 15
    assert model.sets[0] == [0, 1]


def test_result_independent_of_workers(monkeypatch):
    """Thread count never changes the witness."""
    # small batches so several workers share each size
    monkeypatch.setenv("DYNAMO_LAB_BATCH_SIZE", "3")
    reset_settings()
    for seed in range(4):
        g = gen_random_connected(9, 0.45, seed=seed)
        m = ThresholdModel.twoway_alpha_bp("1/2")
        for prop in (Property.DYNAMO, Property.STABLE, Property.MONOTONE):
            single = min_set(g, m, prop, workers=1)
            many = min_set(g, m, prop, workers=4)
            assert single == many


def test_cap_exceeded():
    with pytest.raises(SearchCapExceeded) as excinfo:
        min_set(gen_cycle(20), TWOWAY_R2, Property.DYNAMO)
    # default cap from settings
    assert excinfo.value.cap == 16
    assert min_set(gen_cycle(20), TWOWAY_R2, Property.IMMORTAL, max_size=1).min_size is None


def test_cap_from_environment(monkeypatch):
    """DYNAMO_LAB_SEARCH_CAP overrides the default cap."""
    monkeypatch.setenv("DYNAMO_LAB_SEARCH_CAP", "5")
    reset_settings()
    with pytest.raises(SearchCapExceeded):
        min_set(gen_cycle(6), TWOWAY_R2, Property.DYNAMO)


def test_max_size_without_witness(c6):
    result = min_set(c6, ThresholdModel.twoway_alpha_bp("1/2"), Property.DYNAMO, max_size=1)
    assert result.min_size is None
    assert result.witness is None
    assert result.examined == 6
    assert result.exhausted_up_to == 1
    assert result.to_model().min_size is None


def test_bad_sizes(c6):
    with pytest.raises(PreconditionError):
        min_set(c6, TWOWAY_R2, Property.DYNAMO, max_size=0)
    with pytest.raises(PreconditionError):
        all_min_sets(c6, TWOWAY_R2, Property.DYNAMO, 7)
