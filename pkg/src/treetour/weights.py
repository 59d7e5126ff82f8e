"""Edge weights, component classification, core trees, and leading paths.

For a vertex x of an oriented tree T and an incident edge e, the weight
w_e(x) is the number of vertices of the component of T - x attached
through e.  Summing over the incident arcs directed into (out of) x gives
the inweight w-(x) (outweight w+(x)).  The Δ-core of T keeps exactly the
vertices all of whose incident edge weights are at most (1 - 1/Δ)·n; it is
a nonempty subtree with maximum degree ≤ Δ whose deleted components have
at most n/Δ vertices each.

All threshold comparisons are exact integer arithmetic; nothing here uses
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import DirectedTree, GraphDefectError, bit_list, bits, mask_of


# ---------------------------------------------------------------------------
# Rooted bookkeeping


def _parents_and_order(T: DirectedTree, root: int) -> tuple[list[int], list[int]]:
    """BFS order from ``root`` and the underlying parent of each vertex."""
    parent = [-1] * T.n
    parent[root] = root
    order = T.bfs_order(root)
    for v in order:
        for w in T.neighbours(v):
            if parent[w] == -1:
                parent[w] = v
    parent[root] = -1
    return order, parent


def _subtree_sizes(T: DirectedTree, order: list[int], parent: list[int]) -> list[int]:
    size = [1] * T.n
    for v in reversed(order):
        p = parent[v]
        if p >= 0:
            size[p] += size[v]
    return size


# ---------------------------------------------------------------------------
# Weight profile


@dataclass(frozen=True)
class WeightProfile:
    """All edge weights of a tree, with per-vertex in/out weights.

    ``side`` maps the ordered pair (x, y) over each edge {x, y} to w_e(x),
    the size of the component of T - x containing y.
    """

    n: int
    side: dict[tuple[int, int], int]
    in_weight: tuple[int, ...]
    out_weight: tuple[int, ...]

    def edge_weight(self, x: int, y: int) -> int:
        return self.side[(x, y)]


def weight_profile(T: DirectedTree) -> WeightProfile:
    """Compute every w_e(x) by two-pass subtree counting from vertex 0."""
    order, parent = _parents_and_order(T, 0)
    size = _subtree_sizes(T, order, parent)
    side: dict[tuple[int, int], int] = {}
    for v in range(T.n):
        p = parent[v]
        if p >= 0:
            side[(p, v)] = size[v]
            side[(v, p)] = T.n - size[v]
    in_w = [0] * T.n
    out_w = [0] * T.n
    for u, v in T.arcs:
        # arc u -> v: for v the edge comes in; for u it goes out
        in_w[v] += side[(v, u)]
        out_w[u] += side[(u, v)]
    return WeightProfile(T.n, side, tuple(in_w), tuple(out_w))


def edge_weight(T: DirectedTree, x: int, e: tuple[int, int]) -> int:
    """w_e(x): size of the component of T - x attached through edge ``e``."""
    a, b = e
    if x == a:
        y = b
    elif x == b:
        y = a
    else:
        raise ValueError(f"edge {e} is not incident to vertex {x}")
    if y not in T.neighbours(x):
        raise ValueError(f"{e} is not an edge of the tree")
    return weight_profile(T).edge_weight(x, y)


# ---------------------------------------------------------------------------
# Components against a subtree


def _check_connected(T: DirectedTree, subset: int) -> None:
    members = bit_list(subset)
    if not members:
        raise ValueError("subset must be nonempty")
    seen = {members[0]}
    stack = [members[0]]
    while stack:
        x = stack.pop()
        for y in T.neighbours(x):
            if (subset >> y) & 1 and y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(members):
        raise ValueError("subset does not induce a connected subtree")


def components_against(T: DirectedTree, C: int) -> list[tuple[int, str]]:
    """Components of T - C with their in/out classification.

    Each component of T - C meets C through exactly one tree edge; the
    component is classified ``"in"`` if that arc is directed toward C and
    ``"out"`` if directed away from C.  Components are listed by smallest
    member id.
    """
    _check_connected(T, C)
    out: list[tuple[int, str]] = []
    assigned = C
    for v in range(T.n):
        if (assigned >> v) & 1:
            continue
        comp = 1 << v
        stack = [v]
        while stack:
            x = stack.pop()
            for y in T.neighbours(x):
                if not ((C >> y) & 1) and not ((comp >> y) & 1):
                    comp |= 1 << y
                    stack.append(y)
        assigned |= comp
        connectors = [
            (a, b)
            for a, b in T.arcs
            if ((comp >> a) & 1 and (C >> b) & 1) or ((C >> a) & 1 and (comp >> b) & 1)
        ]
        if len(connectors) != 1:
            raise GraphDefectError(
                f"component {bit_list(comp)} attaches to the subtree by {len(connectors)} edges"
            )
        (a, b) = connectors[0]
        out.append((comp, "in" if (C >> b) & 1 else "out"))
    return out


# ---------------------------------------------------------------------------
# Core trees


@dataclass(frozen=True)
class CoreTree:
    """The Δ-core of a tree: vertex set and induced arcs."""

    delta: int
    vertices: int
    arcs: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return self.vertices.bit_count()


def core_tree(T: DirectedTree, delta: int) -> CoreTree:
    """Vertices whose incident edge weights are all ≤ (1 - 1/Δ)·n.

    Exact comparison: x is kept iff Δ·w_e(x) ≤ (Δ-1)·n for every incident
    edge e.  The result is validated against its guarantees: nonempty
    connected subtree, maximum underlying degree ≤ Δ, every component of
    T - core of size ≤ n/Δ, and both end-weights of every core edge
    ≥ n/Δ.
    """
    if delta < 2:
        raise ValueError(f"delta must be >= 2, got {delta}")
    n = T.n
    prof = weight_profile(T)
    core = 0
    for x in range(n):
        if all(delta * prof.edge_weight(x, y) <= (delta - 1) * n for y in T.neighbours(x)):
            core |= 1 << x
    arcs = tuple((u, v) for u, v in T.arcs if (core >> u) & 1 and (core >> v) & 1)
    result = CoreTree(delta, core, arcs)
    _validate_core(T, prof, result)
    return result


def _validate_core(T: DirectedTree, prof: WeightProfile, core: CoreTree) -> None:
    n = T.n
    if core.vertices == 0:
        raise GraphDefectError("core tree is empty")
    _check_connected(T, core.vertices)
    for x in bits(core.vertices):
        deg = sum(1 for y in T.neighbours(x) if (core.vertices >> y) & 1)
        if deg > core.delta:
            raise GraphDefectError(f"core vertex {x} has degree {deg} > {core.delta}")
    if core.vertices != (1 << n) - 1:
        for comp, _ in components_against(T, core.vertices):
            if core.delta * comp.bit_count() > n:
                raise GraphDefectError(
                    f"component of size {comp.bit_count()} exceeds n/delta"
                )
    for u, v in core.arcs:
        if core.delta * prof.edge_weight(u, v) < n or core.delta * prof.edge_weight(v, u) < n:
            raise GraphDefectError(f"core edge ({u}, {v}) has an end-weight below n/delta")


# ---------------------------------------------------------------------------
# Leading paths


def leading_paths(T: DirectedTree, root: int, H: int, k: int) -> int:
    """Close ``H`` under k-prefixes of root-ward paths at branch vertices.

    P_x is the set of the first k vertices of the underlying path from x
    toward ``root`` (starting with x).  The result starts from the union
    of P_x over x in H and repeatedly adds P_x for every tree vertex x
    with at least two children (root-ward orientation) in the current
    set, until nothing changes; a branch point whose subtrees both meet
    the set is therefore always pulled in, together with its root-ward
    prefix.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not (0 <= root < T.n):
        raise ValueError(f"root {root} out of range")
    if H >> T.n:
        raise ValueError("H contains ids outside the tree")
    _, parent = _parents_and_order(T, root)
    children: list[list[int]] = [[] for _ in range(T.n)]
    for v in range(T.n):
        if parent[v] >= 0:
            children[parent[v]].append(v)

    prefix_cache: dict[int, int] = {}

    def prefix(x: int) -> int:
        got = prefix_cache.get(x)
        if got is None:
            got = 0
            v = x
            for _ in range(k):
                got |= 1 << v
                if parent[v] < 0:
                    break
                v = parent[v]
            prefix_cache[x] = got
        return got

    cur = 0
    for x in bits(H):
        cur |= prefix(x)
    while True:
        nxt = cur
        for x in range(T.n):
            if sum(1 for c in children[x] if (cur >> c) & 1) >= 2:
                nxt |= prefix(x)
        if nxt == cur:
            return cur
        cur = nxt
