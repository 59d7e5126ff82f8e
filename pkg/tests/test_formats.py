"""Text serialization of tournaments and trees, with parser diagnostics.

The formats are line-oriented: a header naming the type and vertex count,
then an adjacency matrix (tournaments) or one arc per line (trees).
Round trips must be exact; malformed input must fail with an error that
points at the offending line.
"""

import pytest

from treetour import (
    ParseError,
    Tournament,
    parse_tournament,
    parse_tree,
    write_tournament,
    write_tree,
)
from treetour.generate import (
    directed_path,
    random_oriented_tree,
    random_tournament,
    transitive_tournament,
)

CYCLE3 = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


# ---------------------------------------------------------------------------
# Writing fixed graphs


def test_tournament_text_is_header_plus_adjacency_matrix():
    assert write_tournament(CYCLE3) == "tournament 3\n010\n001\n100\n"


def test_tournament_text_of_transitive_is_upper_triangular():
    assert write_tournament(transitive_tournament(3)) == "tournament 3\n011\n001\n000\n"


def test_tree_text_is_header_plus_arc_lines():
    assert write_tree(directed_path(3)) == "tree 3\n0 1\n1 2\n"


def test_single_vertex_graphs_serialize():
    assert parse_tournament(write_tournament(random_tournament(1, seed=0))).n == 1
    assert parse_tree(write_tree(random_oriented_tree(1, seed=0))).n == 1


# ---------------------------------------------------------------------------
# Round trips


def test_tournament_round_trip_on_random_inputs():
    for seed in range(20):
        G = random_tournament(1 + seed % 12, seed=seed)
        assert parse_tournament(write_tournament(G)) == G


def test_tree_round_trip_on_random_inputs():
    for seed in range(20):
        T = random_oriented_tree(1 + seed % 12, seed=seed)
        assert parse_tree(write_tree(T)) == T


def test_parse_tolerates_trailing_newline_variations():
    text = write_tournament(CYCLE3)
    assert parse_tournament(text.rstrip("\n")) == CYCLE3
    assert parse_tournament(text + "\n") == CYCLE3


# ---------------------------------------------------------------------------
# Tournament parse errors carry line positions


@pytest.mark.parametrize(
    "text, line_hint",
    [
        ("matrix 3\n010\n001\n100", 1),  # wrong header word
        ("tournament x\n010\n001\n100", 1),  # non-numeric size
        ("tournament 3\n01\n001\n100", 2),  # short row
        ("tournament 3\n010\n001", 3),  # missing row
        ("tournament 3\n110\n001\n100", 2),  # diagonal set
        ("tournament 3\n010\n021\n100", 3),  # non-binary cell
        ("tournament 3\n000\n001\n100", 3),  # pair {0,1} undecided, seen at row of 1
        ("tournament 3\n011\n101\n100", 3),  # pair {0,1} doubled, seen at row of 1
    ],
)
def test_tournament_parse_errors_name_the_line(text, line_hint):
    with pytest.raises(ParseError) as err:
        parse_tournament(text)
    assert f"line {line_hint}" in str(err.value)


def test_tournament_parse_rejects_trailing_garbage():
    with pytest.raises(ParseError):
        parse_tournament("tournament 3\n010\n001\n100\nextra")


# ---------------------------------------------------------------------------
# Tree parse errors carry line positions


@pytest.mark.parametrize(
    "text, line_hint",
    [
        ("graph 3\n0 1\n1 2", 1),  # wrong header word
        ("tree 3\n0 1", 2),  # missing arc line, reported at last line present
        ("tree 3\n0 1\n1 2\n2 0", 4),  # extra arc line
        ("tree 3\n0 1\nbogus", 3),  # non-numeric arc
        ("tree 3\n0 1\n1 7", 3),  # endpoint out of range
        ("tree 3\n0 1\n1 1", 3),  # self-loop
        ("tree 4\n0 1\n1 0\n2 3", 3),  # repeated pair
    ],
)
def test_tree_parse_errors_name_the_line(text, line_hint):
    with pytest.raises(ParseError) as err:
        parse_tree(text)
    assert f"line {line_hint}" in str(err.value)


def test_tree_parse_rejects_disconnected_arc_sets():
    # right arc count, wrong shape: {0,1} doubled leaves {2,3} adrift
    with pytest.raises(ParseError):
        parse_tree("tree 4\n0 1\n2 3\n3 2")


def test_parse_error_is_a_value_error():
    assert issubclass(ParseError, ValueError)
