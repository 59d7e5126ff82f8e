"""Exact and heuristic embedding search, Hamiltonian paths, median orders.

The exhaustive searcher is cross-checked against a from-scratch
permutation oracle on small instances; median orders are checked against
full factorial brute force.  Heuristic searchers may give up but must
never claim impossibility.
"""

import itertools
import time

import pytest

from treetour import (
    DirectedTree,
    EmbedOutcome,
    InfeasiblePinning,
    SearchConstraints,
    Tournament,
    embed_outbranching,
    exhaustive_embed,
    forward_arc_count,
    greedy_embed,
    is_valid_embedding,
    median_order,
    redei_path,
)
from treetour.generate import (
    directed_path,
    inward_star,
    outward_star,
    random_oriented_tree,
    random_tournament,
    rotational_regular_tournament,
    transitive_tournament,
)
from treetour.graphs import mask_of
from treetour.search import MEDIAN_EXACT_MAX_N

CYCLE3 = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


def brute_force_embeds(T: DirectedTree, G: Tournament) -> bool:
    """Independent oracle: try every injection tree -> host."""
    for image in itertools.permutations(range(G.n), T.n):
        if all(G.has_arc(image[u], image[v]) for u, v in T.arcs):
            return True
    return False


# ---------------------------------------------------------------------------
# Exhaustive search


def test_inward_star_does_not_fit_in_three_cycle():
    out = exhaustive_embed(inward_star(3), CYCLE3)
    assert out.verdict == "not_found"
    assert out.embedding is None


def test_inward_star_fits_in_transitive_four():
    T = inward_star(3)
    G = transitive_tournament(4)
    out = exhaustive_embed(T, G)
    assert out.verdict == "found"
    assert is_valid_embedding(T, G, out.embedding)
    assert G.in_deg(out.embedding[0]) >= 2  # centre image needs 2 in-arcs


def test_pinning_constrains_the_image():
    arc = DirectedTree(2, [(0, 1)])
    out = exhaustive_embed(arc, CYCLE3, SearchConstraints(pinned={0: 0}))
    assert out.verdict == "found"
    assert out.embedding[0] == 0 and out.embedding[1] == 1


def test_contradictory_pins_are_an_error_not_a_verdict():
    arc = DirectedTree(2, [(0, 1)])
    with pytest.raises(InfeasiblePinning):
        exhaustive_embed(arc, CYCLE3, SearchConstraints(pinned={0: 0, 1: 0}))
    with pytest.raises(InfeasiblePinning):
        exhaustive_embed(
            arc, CYCLE3, SearchConstraints(pinned={0: 0}, forbidden=mask_of([0]))
        )
    with pytest.raises(InfeasiblePinning):
        # both endpoints pinned against the arc direction
        exhaustive_embed(arc, CYCLE3, SearchConstraints(pinned={0: 1, 1: 0}))


def test_allowed_sets_restrict_candidate_images():
    arc = DirectedTree(2, [(0, 1)])
    G = transitive_tournament(4)
    out = exhaustive_embed(
        arc, G, SearchConstraints(allowed={0: mask_of([2]), 1: mask_of([3])})
    )
    assert out.verdict == "found"
    assert out.embedding == {0: 2, 1: 3}
    out = exhaustive_embed(
        arc, G, SearchConstraints(allowed={0: mask_of([3]), 1: mask_of([2])})
    )
    assert out.verdict == "not_found"


def test_forbidden_vertices_are_never_used():
    P = directed_path(3)
    G = transitive_tournament(5)
    out = exhaustive_embed(P, G, SearchConstraints(forbidden=mask_of([0, 1])))
    assert out.verdict == "found"
    assert set(out.embedding.values()) == {2, 3, 4}


def test_exhaustive_verdicts_match_permutation_oracle():
    for seed in range(40):
        T = random_oriented_tree(2 + seed % 3, seed=seed)
        G = random_tournament(T.n + 1 + seed % 2, seed=1000 + seed)
        out = exhaustive_embed(T, G)
        assert out.verdict in ("found", "not_found")
        expected = brute_force_embeds(T, G)
        assert (out.verdict == "found") == expected
        if out.embedding is not None:
            assert is_valid_embedding(T, G, out.embedding)


def test_tree_larger_than_host_is_not_found():
    assert exhaustive_embed(directed_path(4), CYCLE3).verdict == "not_found"


def test_node_budget_exhaustion_is_reported_distinctly():
    T = random_oriented_tree(8, seed=2)
    G = random_tournament(16, seed=3)
    out = exhaustive_embed(T, G, SearchConstraints(node_budget=1))
    assert out.verdict == "budget_exhausted"
    assert out.embedding is None


# ---------------------------------------------------------------------------
# Greedy search


def test_greedy_is_incomplete_but_never_claims_impossibility():
    out = greedy_embed(inward_star(3), CYCLE3)
    assert out.verdict == "budget_exhausted"  # not "not_found"


def test_greedy_finds_easy_embeddings_and_validates():
    arc = DirectedTree(2, [(0, 1)])
    out = greedy_embed(arc, CYCLE3)
    assert out.verdict == "found"
    assert is_valid_embedding(arc, CYCLE3, out.embedding)
    T = random_oriented_tree(20, seed=11)
    G = random_tournament(60, seed=11)
    out = greedy_embed(T, G)
    assert out.verdict == "found"
    assert is_valid_embedding(T, G, out.embedding)


def test_greedy_found_implies_exhaustive_found():
    for seed in range(30):
        T = random_oriented_tree(2 + seed % 4, seed=seed)
        G = random_tournament(T.n + 2, seed=500 + seed)
        g = greedy_embed(T, G)
        if g.verdict == "found":
            assert exhaustive_embed(T, G).verdict == "found"


# ---------------------------------------------------------------------------
# Hamiltonian directed paths


def test_every_tournament_has_a_spanning_directed_path():
    for seed in range(25):
        G = random_tournament(2 + seed % 30, seed=seed)
        path = redei_path(G)
        assert sorted(path) == list(range(G.n))
        assert all(G.has_arc(path[i], path[i + 1]) for i in range(G.n - 1))


def test_redei_path_of_transitive_is_the_transitive_order():
    assert redei_path(transitive_tournament(6)) == [0, 1, 2, 3, 4, 5]


def test_redei_path_on_cycle_is_consistent():
    path = redei_path(CYCLE3)
    assert sorted(path) == [0, 1, 2]
    assert CYCLE3.has_arc(path[0], path[1]) and CYCLE3.has_arc(path[1], path[2])


def test_redei_path_is_fast_at_two_thousand_vertices():
    G = random_tournament(2000, seed=3)
    start = time.perf_counter()
    path = redei_path(G)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    assert sorted(path) == list(range(2000))
    assert all(G.has_arc(path[i], path[i + 1]) for i in range(1999))


# ---------------------------------------------------------------------------
# Median orders


def test_median_order_of_transitive_is_the_full_order():
    order, count = median_order(transitive_tournament(5), mode="exact")
    assert order == [0, 1, 2, 3, 4]
    assert count == 10


def test_median_order_of_cycle_keeps_two_arcs():
    _, count = median_order(CYCLE3, mode="exact")
    assert count == 2


def test_exact_median_matches_factorial_brute_force():
    G = rotational_regular_tournament(7)
    order, count = median_order(G, mode="exact")
    assert forward_arc_count(G, order) == count
    best = max(
        forward_arc_count(G, list(p)) for p in itertools.permutations(range(7))
    )
    assert count == best


def test_exact_median_matches_brute_force_on_random_tournaments():
    for seed in range(5):
        G = random_tournament(6, seed=seed)
        _, count = median_order(G, mode="exact")
        best = max(
            forward_arc_count(G, list(p)) for p in itertools.permutations(range(6))
        )
        assert count == best


def test_local_median_is_a_permutation_with_consistent_count():
    for seed in range(10):
        G = random_tournament(24, seed=seed)
        order, count = median_order(G)  # local mode is the default
        assert sorted(order) == list(range(24))
        assert forward_arc_count(G, order) == count
        # sanity: no worse than a batch of random orders
        import random

        rng = random.Random(seed)
        for _ in range(20):
            perm = list(range(24))
            rng.shuffle(perm)
            assert count >= forward_arc_count(G, perm)


def test_exact_median_size_cap():
    with pytest.raises(ValueError):
        median_order(random_tournament(MEDIAN_EXACT_MAX_N + 1, seed=0), mode="exact")
    with pytest.raises(ValueError):
        median_order(CYCLE3, mode="fancy")


# ---------------------------------------------------------------------------
# Outbranching embedding


def test_outward_star_embeds_with_root_at_source():
    T = outward_star(4)
    G = transitive_tournament(6)
    out = embed_outbranching(T, G)
    assert out.verdict == "found"
    assert is_valid_embedding(T, G, out.embedding)
    assert out.embedding[0] == 0  # the source dominates everything


def test_directed_path_is_an_outbranching_and_embeds():
    for seed in range(10):
        G = random_tournament(4, seed=seed)
        out = embed_outbranching(directed_path(3), G)
        assert out.verdict == "found"
        assert is_valid_embedding(directed_path(3), G, out.embedding)


def test_every_outbranching_on_four_embeds_in_double_size_hosts():
    outbranchings = [
        DirectedTree(4, [(0, 1), (1, 2), (2, 3)]),
        DirectedTree(4, [(0, 1), (0, 2), (0, 3)]),
        DirectedTree(4, [(0, 1), (0, 2), (1, 3)]),
        DirectedTree(4, [(0, 1), (1, 2), (1, 3)]),
    ]
    for T in outbranchings:
        assert T.is_outbranching()
        for seed in range(10):
            G = random_tournament(6, seed=2000 + seed)
            out = embed_outbranching(T, G)
            assert out.verdict == "found"
            assert is_valid_embedding(T, G, out.embedding)


def test_non_outbranchings_are_rejected():
    with pytest.raises(ValueError):
        embed_outbranching(inward_star(3), transitive_tournament(6))


def test_undersized_hosts_are_rejected():
    with pytest.raises(ValueError):
        embed_outbranching(directed_path(5), transitive_tournament(7))


def test_outcome_found_property():
    found = EmbedOutcome(verdict="found", embedding={0: 0}, nodes=1, strategy="x")
    assert found.found
    missing = EmbedOutcome(verdict="not_found", embedding=None, nodes=1, strategy="x")
    assert not missing.found
