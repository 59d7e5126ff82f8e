"""Core types: tournaments, oriented trees, vertex sets, embeddings.

Vertices are the dense 0-based integers ``0 .. n-1``.  Vertex sets are plain
Python ints used as bitmasks (bit ``v`` set iff vertex ``v`` is in the set);
adjacency is stored one bit per ordered pair, as one int per vertex.  Both
graph types are immutable after construction and hashable, so they are safe
to share across threads and to send to worker processes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

# ---------------------------------------------------------------------------
# Errors


class ParseError(ValueError):
    """A text-format violation, with 1-based line/column coordinates."""

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


class PartialMapError(ValueError):
    """An embedding check was handed a map that is not total on the tree."""


class InfeasiblePinning(ValueError):
    """Search constraints pin vertices in a way no embedding can satisfy."""


class HypothesisViolation(ValueError):
    """An instance handed to a structured strategy fails a stated hypothesis.

    The message names the hypothesis that failed.
    """


class GraphDefectError(RuntimeError):
    """An internal guarantee was violated; indicates a bug, not bad input."""


# ---------------------------------------------------------------------------
# Vertex-set (bitmask) helpers


def full_mask(n: int) -> int:
    """The set {0, .., n-1} as a bitmask."""
    return (1 << n) - 1


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask of an iterable of vertex ids."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Iterate the vertices of a bitmask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def as_fraction(x: int | float | str | Fraction) -> Fraction:
    """Exact Fraction from a threshold parameter.

    Ints, strings ("1/3", "0.25") and Fractions convert exactly; a float
    converts to its exact binary value.  Every threshold comparison in
    this package goes through Fractions, never float arithmetic.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact fraction")


def bit_list(mask: int) -> list[int]:
    """The vertices of a bitmask as an ascending list."""
    return list(bits(mask))


# ---------------------------------------------------------------------------
# Bit-matrix transpose (used for in-neighbour rows)

_NUMPY_MIN_N = 128


def _transpose_rows_small(n: int, rows: tuple[int, ...]) -> tuple[int, ...]:
    cols = [0] * n
    for i, row in enumerate(rows):
        bit = 1 << i
        while row:
            low = row & -row
            cols[low.bit_length() - 1] |= bit
            row ^= low
    return tuple(cols)


def _transpose_rows_numpy(n: int, rows: tuple[int, ...]) -> tuple[int, ...]:
    nbytes = (n + 7) // 8
    buf = np.frombuffer(
        b"".join(r.to_bytes(nbytes, "little") for r in rows), dtype=np.uint8
    ).reshape(n, nbytes)
    # bitorder="little" makes unpacked column index equal the vertex id.
    m = np.unpackbits(buf, axis=1, bitorder="little")[:, :n]
    packed = np.packbits(m.T, axis=1, bitorder="little")
    return tuple(int.from_bytes(packed[i].tobytes(), "little") for i in range(n))


def transpose_rows(n: int, rows: tuple[int, ...]) -> tuple[int, ...]:
    """Transpose an n-by-n bit matrix given as one int per row."""
    if n >= _NUMPY_MIN_N:
        return _transpose_rows_numpy(n, rows)
    return _transpose_rows_small(n, rows)


# ---------------------------------------------------------------------------
# Tournament


class Tournament:
    """An orientation of the complete graph on ``n`` vertices.

    ``out_rows[u]`` has bit ``v`` set iff the arc u -> v is present.  For
    every unordered pair exactly one direction is present, and the diagonal
    is empty; construction validates this.
    """

    __slots__ = ("n", "out_rows", "in_rows")

    def __init__(
        self,
        n: int,
        out_rows: Iterable[int],
        *,
        in_rows: tuple[int, ...] | None = None,
        _trusted: bool = False,
    ):
        rows = tuple(out_rows)
        if len(rows) != n:
            raise ValueError(f"expected {n} adjacency rows, got {len(rows)}")
        if in_rows is None:
            in_rows = transpose_rows(n, rows)
        self.n = n
        self.out_rows = rows
        self.in_rows = in_rows
        if not _trusted:
            self._validate()

    def _validate(self) -> None:
        n = self.n
        if n < 1:
            raise ValueError("a tournament needs at least one vertex")
        everything = full_mask(n)
        for v, (out, inn) in enumerate(zip(self.out_rows, self.in_rows)):
            if out < 0 or out >> n:
                raise ValueError(f"row {v} has bits outside 0..{n - 1}")
            if (out >> v) & 1:
                raise ValueError(f"vertex {v} has a self-arc")
            if out & inn:
                w = next(bits(out & inn))
                raise ValueError(f"both arcs {v}->{w} and {w}->{v} present")
            if (out | inn) != everything ^ (1 << v):
                w = next(bits(everything ^ (1 << v) ^ (out | inn)))
                raise ValueError(f"pair {{{v}, {w}}} has no arc")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        rows = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
        return cls(n, rows)

    @classmethod
    def from_pair_bits(cls, n: int, pair_bits: int) -> "Tournament":
        """Decode one orientation bit per unordered pair.

        Pairs are ordered (0,1), (0,2), .., (0,n-1), (1,2), .., (n-2,n-1);
        pair k reads bit k of ``pair_bits``; a 1 orients u -> v (u < v), a 0
        orients v -> u.
        """
        if n >= _NUMPY_MIN_N:
            return cls._from_pair_bits_numpy(n, pair_bits)
        rows = [0] * n
        k = 0
        for u in range(n):
            for v in range(u + 1, n):
                if (pair_bits >> k) & 1:
                    rows[u] |= 1 << v
                else:
                    rows[v] |= 1 << u
                k += 1
        return cls(n, rows, _trusted=True)

    @classmethod
    def _from_pair_bits_numpy(cls, n: int, pair_bits: int) -> "Tournament":
        m = n * (n - 1) // 2
        nbytes = (m + 7) // 8
        flat = np.unpackbits(
            np.frombuffer(pair_bits.to_bytes(nbytes, "little"), dtype=np.uint8),
            bitorder="little",
        )[:m]
        a = np.zeros((n, n), dtype=np.uint8)
        iu, ju = np.triu_indices(n, k=1)
        a[iu, ju] = flat
        a[ju, iu] = 1 - flat
        rowbytes = np.packbits(a, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(rowbytes[i].tobytes(), "little") for i in range(n))
        return cls(n, rows, _trusted=True)

    # -- basic queries ------------------------------------------------------

    def has_arc(self, u: int, v: int) -> bool:
        return bool((self.out_rows[u] >> v) & 1)

    def out_mask(self, v: int) -> int:
        return self.out_rows[v]

    def in_mask(self, v: int) -> int:
        return self.in_rows[v]

    def out_deg(self, v: int) -> int:
        return self.out_rows[v].bit_count()

    def in_deg(self, v: int) -> int:
        return self.in_rows[v].bit_count()

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.out_rows):
            yield from ((u, v) for v in bits(row))

    def vertices(self) -> range:
        return range(self.n)

    # -- derived tournaments -------------------------------------------------

    def reverse(self) -> "Tournament":
        """The tournament with every arc reversed."""
        return Tournament(self.n, self.in_rows, in_rows=self.out_rows, _trusted=True)

    def induced(self, subset: int) -> tuple["Tournament", list[int]]:
        """Induced subtournament on a vertex bitmask.

        Returns the subtournament (with dense 0-based ids) and the list
        mapping new ids to the original ids, in ascending original order.
        """
        keep = bit_list(subset)
        index = {v: i for i, v in enumerate(keep)}
        rows = []
        for v in keep:
            row = 0
            for w in bits(self.out_rows[v] & subset):
                row |= 1 << index[w]
            rows.append(row)
        return Tournament(len(keep), rows, _trusted=True), keep

    # -- dunder --------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Tournament)
            and self.n == other.n
            and self.out_rows == other.out_rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self.out_rows))

    def __repr__(self) -> str:
        return f"Tournament(n={self.n})"


# ---------------------------------------------------------------------------
# Oriented tree


class DirectedTree:
    """An orientation of a tree on ``n`` vertices.

    ``arcs`` lists the directed edges (u, v) meaning u -> v.  Construction
    validates that the underlying undirected graph is a tree.
    """

    __slots__ = ("n", "arcs", "out_nbrs", "in_nbrs")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]]):
        arc_tuple = tuple((int(u), int(v)) for u, v in arcs)
        if n < 1:
            raise ValueError("a tree needs at least one vertex")
        if len(arc_tuple) != n - 1:
            raise ValueError(f"a tree on {n} vertices needs {n - 1} arcs, got {len(arc_tuple)}")
        out_nbrs: list[list[int]] = [[] for _ in range(n)]
        in_nbrs: list[list[int]] = [[] for _ in range(n)]
        seen: set[frozenset[int]] = set()
        for u, v in arc_tuple:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-arc at vertex {u}")
            pair = frozenset((u, v))
            if pair in seen:
                raise ValueError(f"duplicate edge between {u} and {v}")
            seen.add(pair)
            out_nbrs[u].append(v)
            in_nbrs[v].append(u)
        # Connectivity: n-1 distinct edges + connected <=> tree.
        if n > 1:
            reached = {0}
            stack = [0]
            while stack:
                x = stack.pop()
                for y in out_nbrs[x] + in_nbrs[x]:
                    if y not in reached:
                        reached.add(y)
                        stack.append(y)
            if len(reached) != n:
                missing = min(set(range(n)) - reached)
                raise ValueError(f"not connected: vertex {missing} unreachable")
        self.n = n
        self.arcs = arc_tuple
        self.out_nbrs = tuple(tuple(sorted(x)) for x in out_nbrs)
        self.in_nbrs = tuple(tuple(sorted(x)) for x in in_nbrs)

    # -- queries ---------------------------------------------------------

    def neighbours(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self.out_nbrs[v] + self.in_nbrs[v]))

    def degree(self, v: int) -> int:
        """Underlying (undirected) degree."""
        return len(self.out_nbrs[v]) + len(self.in_nbrs[v])

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out_nbrs[u]

    def is_outbranching(self) -> bool:
        """True iff some root reaches every vertex by directed paths.

        For a tree this is equivalent to: exactly one vertex has in-degree
        0 and every other vertex has in-degree 1.
        """
        roots = [v for v in range(self.n) if not self.in_nbrs[v]]
        return len(roots) == 1 and all(len(self.in_nbrs[v]) <= 1 for v in range(self.n))

    def root_of_outbranching(self) -> int:
        if not self.is_outbranching():
            raise ValueError("not an outbranching")
        return next(v for v in range(self.n) if not self.in_nbrs[v])

    def reverse(self) -> "DirectedTree":
        return DirectedTree(self.n, tuple((v, u) for u, v in self.arcs))

    def bfs_order(self, root: int) -> list[int]:
        """Vertices in BFS order of the underlying tree, neighbours ascending."""
        order = [root]
        seen = {root}
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for y in self.neighbours(x):
                if y not in seen:
                    seen.add(y)
                    order.append(y)
        return order

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DirectedTree)
            and self.n == other.n
            and sorted(self.arcs) == sorted(other.arcs)
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.arcs))))

    def __repr__(self) -> str:
        return f"DirectedTree(n={self.n}, arcs={self.arcs!r})"


# ---------------------------------------------------------------------------
# Free functions on tournaments


def degrees(G: Tournament) -> list[tuple[int, int]]:
    """(out-degree, in-degree) per vertex, indexed by vertex id."""
    return [(G.out_deg(v), G.in_deg(v)) for v in range(G.n)]


def restricted_neighbourhood(G: Tournament, v: int, subset: int, direction: str) -> int:
    """Out- or in-neighbours of ``v`` inside a vertex bitmask."""
    if direction == "out":
        return G.out_rows[v] & subset
    if direction == "in":
        return G.in_rows[v] & subset
    raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")


def induced_subtournament(G: Tournament, subset: int) -> tuple[Tournament, list[int]]:
    return G.induced(subset)


def directed_edge_count(G: Tournament, source: int, target: int) -> int:
    """Number of arcs from the bitmask ``source`` into the bitmask ``target``."""
    return sum((G.out_rows[u] & target).bit_count() for u in bits(source))


def density(G: Tournament, source: int, target: int) -> Fraction:
    """Arc density from ``source`` to ``target``: e(source -> target)/(|source||target|).

    The two sets must be disjoint and nonempty; for disjoint sets in a
    tournament, density(U, V) + density(V, U) == 1.
    """
    if source & target:
        raise ValueError("density requires disjoint vertex sets")
    a, b = source.bit_count(), target.bit_count()
    if a == 0 or b == 0:
        raise ValueError("density requires nonempty vertex sets")
    return Fraction(directed_edge_count(G, source, target), a * b)


def is_valid_embedding(T: DirectedTree, G: Tournament, mapping: Mapping[int, int]) -> bool:
    """True iff ``mapping`` is an injective arc-direction-preserving total map.

    The map must assign an image to every tree vertex; a partial map is an
    input error (:class:`PartialMapError`), not a False verdict.  Images out
    of range are also input errors.  Non-injectivity or a wrongly directed
    arc gives False.
    """
    if set(mapping.keys()) != set(range(T.n)):
        raise PartialMapError(
            f"map must be total on the {T.n} tree vertices, got keys {sorted(mapping.keys())}"
        )
    images = list(mapping.values())
    for g in images:
        if not (0 <= g < G.n):
            raise ValueError(f"image {g} out of range for host on {G.n} vertices")
    if len(set(images)) != len(images):
        return False
    return all(G.has_arc(mapping[u], mapping[v]) for u, v in T.arcs)


# ---------------------------------------------------------------------------
# Canonical form

CANONICAL_MAX_N = 10


def canonical_form(G: Tournament) -> bytes:
    """A bytes key equal for two tournaments iff they are isomorphic.

    The key encodes the lexicographically minimal lower-triangle bit matrix
    over all vertex orderings, found by branch-and-bound with prefix
    pruning (a greedy descent seeds the incumbent).  Capped at
    n <= ``CANONICAL_MAX_N``.
    """
    n = G.n
    if n > CANONICAL_MAX_N:
        raise ValueError(f"canonical_form is capped at n <= {CANONICAL_MAX_N}, got {n}")
    if n == 1:
        return bytes([1])
    rows = G.out_rows
    total_bits = n * (n - 1) // 2

    def chunk(v: int, placed: list[int]) -> int:
        c = 0
        row = rows[v]
        for u in placed:
            c = (c << 1) | ((row >> u) & 1)
        return c

    # Greedy incumbent: repeatedly take the (first) candidate with minimal
    # next chunk.
    placed: list[int] = []
    value = 0
    remaining = set(range(n))
    while remaining:
        best_v = min(remaining, key=lambda v: (chunk(v, placed), v))
        value = (value << len(placed)) | chunk(best_v, placed)
        placed.append(best_v)
        remaining.discard(best_v)
    best = value

    # Branch and bound.
    stack: list[tuple[list[int], int, int, int]] = [([], 0, 0, 0)]
    while stack:
        placed, placed_mask, prefix, used = stack.pop()
        k = len(placed)
        if k == n:
            if prefix < best:
                best = prefix
            continue
        # Push candidates in descending id so ascending ids pop first.
        nxt = []
        for v in range(n):
            if (placed_mask >> v) & 1:
                continue
            c = chunk(v, placed)
            np_prefix = (prefix << k) | c
            nb = used + k
            if np_prefix > (best >> (total_bits - nb)):
                continue
            nxt.append((placed + [v], placed_mask | (1 << v), np_prefix, nb))
        stack.extend(reversed(nxt))
    return bytes([n]) + best.to_bytes((total_bits + 7) // 8, "big")
