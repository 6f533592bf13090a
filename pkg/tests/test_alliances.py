import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from dcnet.alliances import (
    DensityDenominator,
    SearchBudgetError,
    SearchConfig,
    alliance_vs_global,
    edge_density,
    global_edge_density,
    is_near_independent,
    rank_declared_alliances,
    refine_alliance,
    search_alliances,
)
from dcnet.network import CompetitionNetwork, build_network
from conftest import make_season
from oracles import bf_edge_density, random_multigraph

nets = st.builds(
    lambda seed, n: random_multigraph(random.Random(seed), n),
    st.integers(0, 2**32 - 1), st.integers(3, 9),
)


def test_edge_density_f1(f1_net):
    assert edge_density(f1_net, [0, 2]) == 2.0
    assert edge_density(f1_net, [0, 1]) == 0.0


def test_edge_density_f2(f2_net):
    assert edge_density(f2_net, [0, 1]) == 3.0


def test_edge_density_ordered_is_half(f1_net):
    for pair in itertools.combinations(range(4), 2):
        assert (edge_density(f1_net, pair, DensityDenominator.ORDERED_PAIRS)
                == edge_density(f1_net, pair) / 2)


def test_edge_density_needs_two_nodes(f1_net):
    with pytest.raises(ValueError):
        edge_density(f1_net, [0])


def test_global_density_f1(f1_net):
    assert global_edge_density(f1_net) == pytest.approx(7 / 6)


def test_global_density_empty_and_saturated():
    empty = build_network(make_season("e", players=["a", "b", "c"]))
    assert global_edge_density(empty) == 0.0
    votes = [(1, "a", "b"), (1, "b", "c"), (1, "a", "c")]
    sat = build_network(make_season("s", players=["a", "b", "c"], votes=votes))
    assert global_edge_density(sat) == 1.0


def test_near_independent_boundary(f1_net):
    ed = edge_density(f1_net, [0, 2])
    assert is_near_independent(f1_net, [0, 2], ed)
    assert not is_near_independent(f1_net, [0, 2], ed - 1e-12)
    assert is_near_independent(f1_net, [0, 1], 0.0)


@settings(max_examples=40, deadline=None)
@given(nets, st.integers(0, 2**32 - 1))
def test_density_matches_oracle_and_scales(net, seed):
    rng = random.Random(seed)
    members = rng.sample(range(net.n), rng.randint(2, net.n))
    got = edge_density(net, members)
    assert got == pytest.approx(bf_edge_density(net, members))
    doubled = CompetitionNetwork(net.players, list(net.edges) * 2)
    assert edge_density(doubled, members) == pytest.approx(2 * got)


@settings(max_examples=30, deadline=None)
@given(nets, st.integers(0, 2**32 - 1))
def test_density_invariant_under_relabeling(net, seed):
    rng = random.Random(seed)
    perm = list(range(net.n))
    rng.shuffle(perm)
    relabeled = CompetitionNetwork(
        tuple(net.players[perm.index(i)] for i in range(net.n)),
        [(perm[s], perm[d], r) for s, d, r in net.edges],
    )
    members = rng.sample(range(net.n), 3)
    assert edge_density(net, members) == pytest.approx(
        edge_density(relabeled, [perm[m] for m in members]))


def test_rank_declared_alliances(f1_manifest, f1_net):
    reports = rank_declared_alliances(f1_net, f1_manifest, epsilon=0.0)
    assert len(reports) == 1
    r = reports[0]
    assert r.label == "ab"
    assert r.edge_density == 0.0
    assert r.near_independent
    assert r.con_internal == 2


def test_rank_declared_alliances_empty():
    m = make_season("e", players=["a", "b"])
    assert rank_declared_alliances(build_network(m), m) == []


def test_search_exhaustive_f1(f1_net):
    ranked = search_alliances(f1_net, SearchConfig(2, 2, top_k=2))
    assert ranked == [(frozenset({0, 1}), 0.0), (frozenset({2, 3}), 0.0)]


def test_search_full_size_equals_global(f1_net):
    ranked = search_alliances(f1_net, SearchConfig(4, 4, top_k=1))
    assert ranked == [(frozenset(range(4)), pytest.approx(global_edge_density(f1_net)))]


def test_search_budget_guard(f1_net):
    with pytest.raises(SearchBudgetError):
        search_alliances(f1_net, SearchConfig(2, 4, budget=2))


def test_search_exhaustive_matches_enumeration():
    rng = random.Random(11)
    for _ in range(10):
        net = random_multigraph(rng, rng.randint(4, 9))
        for size in range(2, min(5, net.n) + 1):
            best = search_alliances(net, SearchConfig(size, size, top_k=1))[0]
            truth = min(
                edge_density(net, c)
                for c in itertools.combinations(range(net.n), size)
            )
            assert best[1] == pytest.approx(truth)


def test_local_search_deterministic(f1_net):
    config = SearchConfig(2, 3, strategy="local_search", seed=42)
    assert search_alliances(f1_net, config) == search_alliances(f1_net, config)


def test_local_search_mostly_finds_optimum():
    rng = random.Random(5)
    hits = trials = 0
    for _ in range(30):
        net = random_multigraph(rng, rng.randint(5, 10))
        size = rng.randint(2, 4)
        exact = search_alliances(net, SearchConfig(size, size, top_k=1))[0][1]
        found = search_alliances(
            net, SearchConfig(size, size, top_k=1, strategy="local_search",
                              restarts=10, seed=rng.randint(0, 10**6)))[0][1]
        trials += 1
        hits += found == pytest.approx(exact)
    assert hits / trials >= 0.95


def test_refine_f1(f1_net):
    ranked = refine_alliance(f1_net, [0, 1, 2])
    assert ranked[0] == (frozenset({0, 1}), 0.0)
    assert dict(ranked)[frozenset({0, 1, 2})] == pytest.approx(1.0)
    assert [d for _, d in ranked] == sorted(d for _, d in ranked)
    with pytest.raises(ValueError):
        refine_alliance(f1_net, [0, 1])


@settings(max_examples=30, deadline=None)
@given(nets, st.integers(0, 2**32 - 1))
def test_refine_minimum_never_exceeds_full_set(net, seed):
    rng = random.Random(seed)
    members = rng.sample(range(net.n), rng.randint(3, net.n))
    ranked = refine_alliance(net, members)
    assert ranked[0][1] <= edge_density(net, members)


def test_alliance_vs_global(f1_manifest, f1_net):
    flags, season_flag = alliance_vs_global(f1_net, f1_manifest)
    assert flags == [("ab", True)]
    assert season_flag


def test_alliance_vs_global_all_denser():
    m = make_season(
        "d", players=["a", "b", "c"],
        votes=[(1, "a", "b"), (1, "b", "a"), (2, "a", "b")],
        alliances=[("ab", ["a", "b"])],
    )
    flags, season_flag = alliance_vs_global(build_network(m), m)
    assert not season_flag
