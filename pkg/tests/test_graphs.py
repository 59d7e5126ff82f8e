"""Core graph types: tournaments, oriented trees, and elementary queries.

Expected values come from hand computation on tiny fixed graphs or from
independent recounts (e.g. degree sums, permutation brute force) inside
the test, never from the functions under test.
"""

import itertools

import pytest

from treetour import (
    DirectedTree,
    PartialMapError,
    Tournament,
    canonical_form,
    degrees,
    density,
    directed_edge_count,
    forward_arc_count,
    induced_subtournament,
    is_valid_embedding,
    restricted_neighbourhood,
)
from treetour.generate import (
    directed_path,
    inward_star,
    random_oriented_tree,
    random_tournament,
    rotational_regular_tournament,
    transitive_tournament,
)
from treetour.graphs import CANONICAL_MAX_N, bits, full_mask, mask_of

CYCLE3 = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


def relabelled(G: Tournament, perm: list[int]) -> Tournament:
    """Independent relabelling helper: vertex v becomes perm[v]."""
    return Tournament.from_arcs(
        G.n, [(perm[u], perm[v]) for u, v in G.arcs()]
    )


# ---------------------------------------------------------------------------
# Construction and validation


def test_from_arcs_requires_exactly_one_arc_per_pair():
    with pytest.raises(ValueError):
        Tournament.from_arcs(3, [(0, 1), (1, 2)])  # pair {0,2} undecided
    with pytest.raises(ValueError):
        Tournament.from_arcs(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    with pytest.raises(ValueError):
        Tournament.from_arcs(2, [(0, 0), (0, 1)])  # self-loop


def test_arc_queries_are_antisymmetric():
    G = random_tournament(9, seed=4)
    for u in range(9):
        assert not G.has_arc(u, u)
        for v in range(u + 1, 9):
            assert G.has_arc(u, v) != G.has_arc(v, u)


def test_directed_tree_requires_connected_acyclic_shape():
    DirectedTree(3, [(0, 1), (2, 1)])  # fine: underlying path
    with pytest.raises(ValueError):
        DirectedTree(3, [(0, 1)])  # too few arcs
    with pytest.raises(ValueError):
        DirectedTree(3, [(0, 1), (0, 1)])  # repeated edge
    with pytest.raises(ValueError):
        DirectedTree(4, [(0, 1), (2, 3), (1, 0)])  # disconnected + cycle


def test_outbranching_recognition():
    assert directed_path(4).is_outbranching()
    assert directed_path(4).root_of_outbranching() == 0
    assert not inward_star(3).is_outbranching()
    assert inward_star(3).reverse().is_outbranching()


# ---------------------------------------------------------------------------
# Degrees


def test_degrees_on_three_cycle():
    assert degrees(CYCLE3) == [(1, 1), (1, 1), (1, 1)]


def test_degrees_on_transitive_source():
    assert degrees(transitive_tournament(4))[0] == (3, 0)


def test_degrees_on_rotational_are_regular():
    assert degrees(rotational_regular_tournament(7)) == [(3, 3)] * 7


def test_degree_sums_match_pair_count():
    for seed in range(10):
        G = random_tournament(11, seed=seed)
        ds = degrees(G)
        assert all(o + i == 10 for o, i in ds)
        assert sum(o for o, _ in ds) == 11 * 10 // 2


# ---------------------------------------------------------------------------
# Neighbourhood restriction


def test_restricted_neighbourhood_on_three_cycle():
    S = mask_of([1, 2])
    assert restricted_neighbourhood(CYCLE3, 0, S, "out") == mask_of([1])
    assert restricted_neighbourhood(CYCLE3, 0, S, "in") == mask_of([2])


def test_restricted_neighbourhood_on_transitive():
    G = transitive_tournament(5)
    S = mask_of([0, 1, 3, 4])
    assert restricted_neighbourhood(G, 2, S, "out") == mask_of([3, 4])
    assert restricted_neighbourhood(G, 2, S, "in") == mask_of([0, 1])


def test_restricted_neighbourhood_rejects_bad_direction():
    with pytest.raises(ValueError):
        restricted_neighbourhood(CYCLE3, 0, 0b110, "sideways")


# ---------------------------------------------------------------------------
# Induced subtournaments and reversal


def test_induced_on_transitive_is_transitive():
    G = transitive_tournament(5)
    H, ids = induced_subtournament(G, mask_of([1, 3, 4]))
    assert ids == [1, 3, 4]
    assert H.n == 3
    for i in range(3):
        for j in range(i + 1, 3):
            assert H.has_arc(i, j)  # order-preserving relabelling


def test_induced_preserves_arc_directions():
    H, ids = induced_subtournament(CYCLE3, mask_of([0, 2]))
    assert ids == [0, 2]
    assert H.has_arc(1, 0)  # original arc 2->0


def test_reverse_is_an_involution_and_flips_arcs():
    R = CYCLE3.reverse()
    assert R.has_arc(1, 0) and R.has_arc(2, 1) and R.has_arc(0, 2)
    for seed in range(5):
        G = random_tournament(8, seed=seed)
        assert G.reverse().reverse() == G
    T = random_oriented_tree(9, seed=1)
    assert T.reverse().reverse() == T
    assert sorted(T.reverse().arcs) == sorted((v, u) for u, v in T.arcs)


# ---------------------------------------------------------------------------
# Embedding validation


def test_valid_embedding_accepts_direction_preserving_injection():
    P2 = DirectedTree(2, [(0, 1)])
    assert is_valid_embedding(P2, CYCLE3, {0: 0, 1: 1})
    assert is_valid_embedding(P2, CYCLE3, {0: 2, 1: 0})


def test_valid_embedding_rejects_flipped_arc():
    P2 = DirectedTree(2, [(0, 1)])
    assert not is_valid_embedding(P2, CYCLE3, {0: 1, 1: 0})


def test_valid_embedding_rejects_non_injective_map():
    P2 = DirectedTree(2, [(0, 1)])
    assert not is_valid_embedding(P2, CYCLE3, {0: 0, 1: 0})


def test_valid_embedding_requires_total_map_on_tree_vertices():
    P2 = DirectedTree(2, [(0, 1)])
    with pytest.raises(PartialMapError):
        is_valid_embedding(P2, CYCLE3, {0: 0})
    with pytest.raises(PartialMapError):
        is_valid_embedding(P2, CYCLE3, {0: 0, 7: 1})
    with pytest.raises(ValueError):
        is_valid_embedding(P2, CYCLE3, {0: 0, 1: 5})


def test_valid_embedding_spanning_path_in_transitive():
    P = directed_path(4)
    G = transitive_tournament(4)
    assert is_valid_embedding(P, G, {i: i for i in range(4)})
    assert not is_valid_embedding(P, G, {0: 1, 1: 0, 2: 2, 3: 3})


# ---------------------------------------------------------------------------
# Directed edge counts and density


def test_edge_count_and_density_on_transitive_halves():
    G = transitive_tournament(4)
    U, V = mask_of([0, 1]), mask_of([2, 3])
    assert directed_edge_count(G, U, V) == 4
    assert density(G, U, V) == 1


def test_edge_count_and_density_on_cycle():
    U, V = mask_of([0]), mask_of([1, 2])
    assert directed_edge_count(CYCLE3, U, V) == 1
    assert density(CYCLE3, U, V) == pytest.approx(0.5)
    from fractions import Fraction

    assert density(CYCLE3, U, V) == Fraction(1, 2)


def test_edge_count_complement_identity():
    for seed in range(8):
        G = random_tournament(10, seed=seed)
        U = mask_of([0, 2, 4, 6])
        V = mask_of([1, 3, 5, 7, 9])
        assert (
            directed_edge_count(G, U, V) + directed_edge_count(G, V, U)
            == U.bit_count() * V.bit_count()
        )


def test_edge_count_matches_naive_recount_with_overlap():
    G = random_tournament(9, seed=3)
    U = mask_of([0, 1, 2, 3, 4])
    V = mask_of([3, 4, 5, 6])
    naive = sum(
        1
        for u in bits(U)
        for v in bits(V)
        if u != v and G.has_arc(u, v)
    )
    assert directed_edge_count(G, U, V) == naive


def test_density_of_empty_side_raises():
    with pytest.raises(ValueError):
        density(CYCLE3, 0, 0b110)


# ---------------------------------------------------------------------------
# Canonical forms


def test_canonical_form_identifies_cycle_with_its_reverse():
    assert canonical_form(CYCLE3) == canonical_form(CYCLE3.reverse())


def test_canonical_form_separates_cycle_from_transitive():
    assert canonical_form(CYCLE3) != canonical_form(transitive_tournament(3))


def test_canonical_form_invariant_under_relabelling():
    G = random_tournament(7, seed=12)
    base = canonical_form(G)
    for perm in ([6, 5, 4, 3, 2, 1, 0], [1, 2, 3, 4, 5, 6, 0], [3, 0, 6, 2, 5, 1, 4]):
        assert canonical_form(relabelled(G, perm)) == base


def test_exactly_four_tournament_classes_on_four_vertices():
    keys = set()
    for bits_ in range(64):
        arcs = []
        k = 0
        for i in range(4):
            for j in range(i + 1, 4):
                arcs.append((i, j) if (bits_ >> k) & 1 else (j, i))
                k += 1
        keys.add(canonical_form(Tournament.from_arcs(4, arcs)))
    assert len(keys) == 4


def test_canonical_form_enforces_size_cap():
    with pytest.raises(ValueError):
        canonical_form(random_tournament(CANONICAL_MAX_N + 1, seed=0))


# ---------------------------------------------------------------------------
# Forward arc counts


def test_forward_arc_count_on_transitive_identity_order():
    G = transitive_tournament(5)
    assert forward_arc_count(G, [0, 1, 2, 3, 4]) == 10
    assert forward_arc_count(G, [4, 3, 2, 1, 0]) == 0


def test_forward_arc_count_matches_naive_recount():
    G = random_tournament(7, seed=9)
    best_naive = 0
    for order in itertools.permutations(range(7)):
        naive = sum(
            1
            for i in range(7)
            for j in range(i + 1, 7)
            if G.has_arc(order[i], order[j])
        )
        assert forward_arc_count(G, list(order)) == naive
        best_naive = max(best_naive, naive)
    assert best_naive >= 7 * 6 // 4  # every tournament has a median order


def test_forward_arc_count_rejects_non_permutations():
    with pytest.raises(ValueError):
        forward_arc_count(CYCLE3, [0, 1])
    with pytest.raises(ValueError):
        forward_arc_count(CYCLE3, [0, 1, 1])


# ---------------------------------------------------------------------------
# Bit helpers


def test_mask_helpers_round_trip():
    assert full_mask(5) == 0b11111
    assert mask_of([0, 3]) == 0b1001
    assert list(bits(0b10110)) == [1, 2, 4]
