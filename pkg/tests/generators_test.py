import pytest

from dynamo_lab.certify import is_stable
from dynamo_lab.dynamics import ThresholdModel
from dynamo_lab.errors import InfeasibleParametersError, UsageError
from dynamo_lab.generators import (
    GENERATORS,
    gen_clique_with_leaves,
    gen_complete,
    gen_complete_minus_matching,
    gen_cycle,
    gen_random_connected,
    gen_random_tree,
    gen_regular_chain,
    gen_stable_tight,
    gen_star,
    generate,
    generator_params,
    regular_chain_layout,
    sample_random_connected,
    stable_tight_core_size,
)


def test_basic_families():
    assert gen_complete(4).m == 6
    c5 = gen_cycle(5)
    assert c5.m == 5 and c5.degrees() == [2] * 5
    star = gen_star(4)
    assert star.n == 5 and star.degree(0) == 4


def test_complete_minus_matching():
    """Every node loses exactly one neighbour."""
    g = gen_complete_minus_matching(20)
    assert g.min_degree == g.max_degree == 18
    assert not g.has_edge(0, 1) and g.has_edge(1, 2)
    with pytest.raises(InfeasibleParametersError):
        gen_complete_minus_matching(7)


def test_clique_with_leaves():
    g = gen_clique_with_leaves(4, 16)
    assert g.n == 16
    assert [g.degree(v) for v in range(4)] == [6] * 4
    assert all(g.degree(v) == 1 for v in range(4, 16))
    assert gen_clique_with_leaves(5, 5) == gen_complete(5)
    with pytest.raises(InfeasibleParametersError):
        gen_clique_with_leaves(3, 7)


def test_regular_chain_even():
    g = gen_regular_chain(3, 18)
    assert g.n == 18 and g.m == 27
    assert set(g.degrees()) == {3}


@pytest.mark.parametrize("r,n", [(4, 20), (5, 24), (3, 8), (4, 30)])
def test_regular_chain_is_regular(r, n):
    g = gen_regular_chain(r, n)
    assert g.n == n
    assert set(g.degrees()) == {r}
    assert g.is_connected()


def test_regular_chain_odd_has_r_heavier_nodes():
    """With r n odd the chain has r nodes of degree r + 1."""
    g = gen_regular_chain(3, 17)
    degrees = g.degrees()
    assert g.n == 17
    assert degrees.count(4) == 3
    assert degrees.count(3) == 14


@pytest.mark.parametrize("r,n", [(3, 7), (2, 12), (4, 21)])
def test_regular_chain_infeasible(r, n):
    with pytest.raises(InfeasibleParametersError):
        regular_chain_layout(r, n)


def test_stable_tight_sizes():
    assert stable_tight_core_size("1/2") == 2
    assert stable_tight_core_size("3/4") == 4
    g = gen_stable_tight("3/4", 10)
    assert [g.degree(v) for v in range(4)] == [4, 3, 3, 3]


def test_stable_tight_core_is_stable():
    """The clique part of the tight family is stable on its own."""
    g = gen_stable_tight("2/3", 4)
    assert g.n == 4 and g.degree(3) == 1
    assert is_stable(g, ThresholdModel.twoway_alpha_bp("2/3"), {0, 1, 2}).verdict is True


def test_stable_tight_too_small():
    with pytest.raises(InfeasibleParametersError):
        gen_stable_tight("4/5", 5)


def test_random_connected_is_deterministic():
    """Same seed, same graph."""
    a, seed_a = sample_random_connected(10, 0.3, seed=11)
    b, seed_b = sample_random_connected(10, 0.3, seed=11)
    assert a == b and seed_a == seed_b >= 11
    assert a.is_connected()


def test_random_tree():
    for seed in range(5):
        g = gen_random_tree(9, seed=seed)
        assert g.is_tree() and g.n == 9
    assert gen_random_tree(2).m == 1


def test_generate_registry():
    assert generate("cycle", n=6) == gen_cycle(6)
    assert generate("random-connected", n=8, p=0.5, seed=3) == gen_random_connected(8, 0.5, seed=3)
    assert generator_params("clique-with-leaves") == ["k", "n"]
    assert "regular-chain" in GENERATORS


@pytest.mark.parametrize(
    "name,params",
    [("hypercube", {"n": 3}), ("cycle", {}), ("cycle", {"n": 5, "k": 2})],
    ids=["unknown", "missing", "extra"],
)
def test_generate_usage_errors(name, params):
    with pytest.raises(UsageError):
        generate(name, **params)
