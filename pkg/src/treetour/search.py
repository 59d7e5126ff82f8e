"""Base embedding procedures.

- :func:`exhaustive_embed`: complete backtracking search; its NotFound is a
  non-existence certificate (used to certify sharpness constructions).
- :func:`redei_path`: Hamiltonian directed path by first-beat insertion.
- :func:`median_order`: orderings maximizing forward arcs, exact (subset
  DP, n ≤ 20) or local-search mode.
- :func:`embed_outbranching`: median-order-guided greedy embedding of
  outbranchings into hosts with ≥ 2|T|-2 vertices, oracle fallback.
- :func:`greedy_embed`: fast incomplete first attempt used by the
  structured strategies before calling the oracle.

All searches are deterministic: tree vertices are processed in BFS order
from the tree's 2-core vertex (the centroid), candidate images ascending.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .graphs import (
    DirectedTree,
    GraphDefectError,
    InfeasiblePinning,
    Tournament,
    bits,
    full_mask,
    is_valid_embedding,
)
from .weights import core_tree

DEFAULT_NODE_BUDGET = 10_000_000

FOUND = "found"
NOT_FOUND = "not_found"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class SearchConstraints:
    """Restrictions on an embedding search.

    ``pinned`` fixes images of tree vertices; ``allowed`` optionally caps
    the candidate set per tree vertex; ``forbidden`` is a bitmask of host
    vertices no image may use; ``node_budget`` caps search nodes.
    """

    pinned: Mapping[int, int] = field(default_factory=dict)
    allowed: Mapping[int, int] = field(default_factory=dict)
    forbidden: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET


@dataclass(frozen=True)
class EmbedOutcome:
    """Result of an embedding attempt.

    ``verdict`` is one of ``"found"``, ``"not_found"``,
    ``"budget_exhausted"``.  A Found outcome carries a valid embedding;
    NotFound is only ever produced by a completed exhaustive search.
    """

    verdict: str
    embedding: dict[int, int] | None
    nodes: int
    strategy: str
    notes: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.verdict == FOUND


def _validate_constraints(T: DirectedTree, G: Tournament, c: SearchConstraints) -> None:
    everything = full_mask(G.n)
    for u, g in c.pinned.items():
        if not (0 <= u < T.n):
            raise ValueError(f"pinned tree vertex {u} out of range")
        if not (0 <= g < G.n):
            raise ValueError(f"pinned image {g} out of range")
        if (c.forbidden >> g) & 1:
            raise InfeasiblePinning(f"tree vertex {u} pinned to forbidden host vertex {g}")
        if u in c.allowed and not ((c.allowed[u] >> g) & 1):
            raise InfeasiblePinning(f"tree vertex {u} pinned outside its allowed set")
    images = list(c.pinned.values())
    if len(set(images)) != len(images):
        raise InfeasiblePinning("two tree vertices pinned to the same host vertex")
    for u, v in T.arcs:
        if u in c.pinned and v in c.pinned and not G.has_arc(c.pinned[u], c.pinned[v]):
            raise InfeasiblePinning(
                f"pinned pair {u}->{v} maps to non-arc {c.pinned[u]}->{c.pinned[v]}"
            )
    for u, m in c.allowed.items():
        if not (0 <= u < T.n):
            raise ValueError(f"allowed-set tree vertex {u} out of range")
        if m & ~everything:
            raise ValueError(f"allowed set of {u} contains out-of-range host ids")


def tree_search_order(T: DirectedTree) -> list[int]:
    """BFS order from the smallest-id 2-core vertex (a centroid)."""
    root = next(bits(core_tree(T, 2).vertices))
    return T.bfs_order(root)


def _order_metadata(
    T: DirectedTree, order: list[int]
) -> tuple[list[tuple[int, str]], list[int], list[int]]:
    """Per position: (parent position, direction), plus future in/out needs.

    direction "out" means the tree arc runs parent -> vertex.
    """
    pos = {v: i for i, v in enumerate(order)}
    parents: list[tuple[int, str]] = [(-1, "")]
    for i, v in enumerate(order):
        if i == 0:
            continue
        best = min((pos[w] for w in T.neighbours(v) if pos[w] < i))
        w = order[best]
        parents.append((best, "out" if T.has_arc(w, v) else "in"))
    out_need = [0] * T.n
    in_need = [0] * T.n
    for v in order:
        out_need[v] = sum(1 for w in T.out_nbrs[v] if pos[w] > pos[v])
        in_need[v] = sum(1 for w in T.in_nbrs[v] if pos[w] > pos[v])
    return parents, out_need, in_need


def _candidate_mask(
    G: Tournament,
    base_allowed: int,
    used: int,
    parent_dir: str,
    parent_image: int,
) -> int:
    m = base_allowed & ~used
    if parent_dir == "out":
        m &= G.out_rows[parent_image]
    elif parent_dir == "in":
        m &= G.in_rows[parent_image]
    return m


def exhaustive_embed(
    T: DirectedTree, G: Tournament, c: SearchConstraints | None = None
) -> EmbedOutcome:
    """Complete backtracking search for an embedding of T into G under c.

    Found outcomes are valid and respect the constraints; NotFound means
    no embedding satisfying the constraints exists; BudgetExhausted means
    the node budget tripped before the search space was exhausted.
    """
    c = c or SearchConstraints()
    _validate_constraints(T, G, c)
    order = tree_search_order(T)
    parents, out_need, in_need = _order_metadata(T, order)
    base = full_mask(G.n) & ~c.forbidden
    base_allowed = []
    for v in order:
        m = base & c.allowed.get(v, full_mask(G.n))
        if v in c.pinned:
            m &= 1 << c.pinned[v]
        base_allowed.append(m)
    if T.n > base.bit_count():
        return EmbedOutcome(NOT_FOUND, None, 0, "exhaustive", ("too few available vertices",))

    n_t = T.n
    budget = c.node_budget
    nodes = 0
    images = [0] * n_t
    used = 0
    cand: list[int] = [0] * n_t
    out_rows, in_rows = G.out_rows, G.in_rows

    level = 0
    cand[0] = base_allowed[0]
    while True:
        if cand[level]:
            low = cand[level] & -cand[level]
            cand[level] ^= low
            g = low.bit_length() - 1
            nodes += 1
            if nodes > budget:
                return EmbedOutcome(BUDGET_EXHAUSTED, None, nodes, "exhaustive")
            free = base & ~used & ~low
            u = order[level]
            if (out_rows[g] & free).bit_count() < out_need[u]:
                continue
            if (in_rows[g] & free).bit_count() < in_need[u]:
                continue
            images[level] = g
            if level + 1 == n_t:
                mapping = {order[i]: images[i] for i in range(n_t)}
                if not is_valid_embedding(T, G, mapping):  # pragma: no cover
                    raise GraphDefectError("search produced an invalid embedding")
                return EmbedOutcome(FOUND, mapping, nodes, "exhaustive")
            used |= low
            level += 1
            ppos, pdir = parents[level]
            cand[level] = _candidate_mask(
                G, base_allowed[level], used, pdir, images[ppos]
            )
        else:
            if level == 0:
                return EmbedOutcome(NOT_FOUND, None, nodes, "exhaustive")
            level -= 1
            used &= ~(1 << images[level])
    raise AssertionError("unreachable")  # pragma: no cover


def greedy_embed(
    T: DirectedTree, G: Tournament, c: SearchConstraints | None = None
) -> EmbedOutcome:
    """One greedy pass, no backtracking; incomplete by design.

    Each tree vertex takes the admissible image maximizing the smaller of
    its residual out/in neighbourhood sizes (ties to the smallest id).
    Returns Found or BudgetExhausted, never NotFound.
    """
    c = c or SearchConstraints()
    _validate_constraints(T, G, c)
    order = tree_search_order(T)
    parents, out_need, in_need = _order_metadata(T, order)
    base = full_mask(G.n) & ~c.forbidden
    if T.n > base.bit_count():
        return EmbedOutcome(BUDGET_EXHAUSTED, None, 0, "greedy", ("too few available vertices",))
    images: list[int] = []
    used = 0
    nodes = 0
    for level, u in enumerate(order):
        m = base & c.allowed.get(u, full_mask(G.n))
        if u in c.pinned:
            m &= 1 << c.pinned[u]
        ppos, pdir = parents[level]
        m = _candidate_mask(G, m, used, pdir, images[ppos] if level else 0)
        best_g = -1
        best_score = -1
        for g in bits(m):
            free = base & ~used & ~(1 << g)
            ro = (G.out_rows[g] & free).bit_count()
            ri = (G.in_rows[g] & free).bit_count()
            if ro < out_need[u] or ri < in_need[u]:
                continue
            score = min(ro, ri)
            if score > best_score:
                best_score = score
                best_g = g
        nodes += 1
        if best_g < 0:
            return EmbedOutcome(BUDGET_EXHAUSTED, None, nodes, "greedy", ("dead end",))
        images.append(best_g)
        used |= 1 << best_g
    mapping = {order[i]: images[i] for i in range(T.n)}
    if not is_valid_embedding(T, G, mapping):  # pragma: no cover
        raise GraphDefectError("greedy produced an invalid embedding")
    return EmbedOutcome(FOUND, mapping, nodes, "greedy")


# ---------------------------------------------------------------------------
# Redei paths and median orders


def redei_path(G: Tournament) -> list[int]:
    """A Hamiltonian directed path by first-beat insertion.

    Vertex k is inserted before the first current vertex it beats, else
    appended; the returned order satisfies order[i] -> order[i+1] for all
    i.
    """
    order: list[int] = []
    for v in range(G.n):
        row = G.out_rows[v]
        for i, w in enumerate(order):
            if (row >> w) & 1:
                order.insert(i, v)
                break
        else:
            order.append(v)
    for a, b in zip(order, order[1:]):
        if not G.has_arc(a, b):  # pragma: no cover
            raise GraphDefectError("insertion produced a non-path")
    return order


def forward_arc_count(G: Tournament, order: list[int]) -> int:
    """Number of arcs order[i] -> order[j] with i < j."""
    if sorted(order) != list(range(G.n)):
        raise ValueError(f"order must be a permutation of the {G.n} vertices")
    later = full_mask(G.n)
    count = 0
    for v in order:
        later &= ~(1 << v)
        count += (G.out_rows[v] & later).bit_count()
    return count


MEDIAN_EXACT_MAX_N = 20


def _median_exact(G: Tournament) -> tuple[list[int], int]:
    n = G.n
    if n > MEDIAN_EXACT_MAX_N:
        raise ValueError(f"exact median order capped at n <= {MEDIAN_EXACT_MAX_N}, got {n}")
    rows = G.out_rows
    # best[mask] = max forward arcs achievable ordering the set `mask` as a
    # suffix; the first suffix element contributes its out-degree in the
    # rest of the mask.
    best = [0] * (1 << n)
    for mask in range(1, 1 << n):
        top = -1
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            val = (rows[v] & (mask ^ low)).bit_count() + best[mask ^ low]
            if val > top:
                top = val
        best[mask] = top
    order = []
    mask = (1 << n) - 1
    while mask:
        for v in bits(mask):  # ascending id => deterministic tie-break
            low = 1 << v
            if (rows[v] & (mask ^ low)).bit_count() + best[mask ^ low] == best[mask]:
                order.append(v)
                mask ^= low
                break
    return order, best[(1 << n) - 1]


def _improve_pass(G: Tournament, order: list[int]) -> bool:
    """Apply the first improving single-vertex interval move; True if any."""
    n = len(order)
    for i in range(n):
        v = order[i]
        row_out, row_in = G.out_rows[v], G.in_rows[v]
        delta = [0] * n
        gain = 0
        for j in range(i - 1, -1, -1):  # move v before position j
            w = order[j]
            gain += 1 if (row_out >> w) & 1 else -1
            delta[j] = gain
        gain = 0
        for j in range(i + 1, n):  # move v after position j
            w = order[j]
            gain += 1 if (row_in >> w) & 1 else -1
            delta[j] = gain
        for j in range(n):
            if j != i and delta[j] > 0:
                order.pop(i)
                order.insert(j, v)
                return True
    return False


def median_order(G: Tournament, mode: str = "local") -> tuple[list[int], int]:
    """An ordering with many forward arcs, with its forward-arc count.

    ``exact`` maximizes over all orderings by subset dynamic programming
    (n ≤ 20).  ``local`` runs first-improvement interval-move local search
    to a fixed point, restarted from the 5 rotations of the Redei path by
    ⌊kn/5⌋; the best count wins, ties to the earliest restart.
    """
    if mode == "exact":
        return _median_exact(G)
    if mode != "local":
        raise ValueError(f"mode must be 'exact' or 'local', got {mode!r}")
    base = redei_path(G)
    n = G.n
    best_order: list[int] | None = None
    best_count = -1
    for k in range(5):
        r = k * n // 5
        order = base[r:] + base[:r]
        while _improve_pass(G, order):
            pass
        count = forward_arc_count(G, order)
        if count > best_count:
            best_count = count
            best_order = order
    assert best_order is not None
    return best_order, best_count


# ---------------------------------------------------------------------------
# Outbranchings

OUTBRANCHING_FALLBACK_CAP = 16


def embed_outbranching(
    T: DirectedTree, G: Tournament, *, fallback_cap: int = OUTBRANCHING_FALLBACK_CAP
) -> EmbedOutcome:
    """Embed an outbranching into a host with at least 2|T|-2 vertices.

    Greedy attempt: the root goes to the first vertex of a local median
    order and every child to the earliest unused order position dominated
    by its parent's image.  On greedy failure the complete search takes
    over when |G| ≤ ``fallback_cap`` (the outcome notes record this), else
    BudgetExhausted.
    """
    if not T.is_outbranching():
        raise ValueError("tree is not an outbranching")
    if T.n >= 2 and G.n < 2 * T.n - 2:
        raise ValueError(f"host must have >= 2|T|-2 = {2 * T.n - 2} vertices, got {G.n}")
    order, _ = median_order(G, "local")
    root = T.root_of_outbranching()
    mapping = {root: order[0]}
    used_positions = {0}
    nodes = 1
    ok = True
    for v in T.bfs_order(root):
        if not ok:
            break
        for child in T.out_nbrs[v]:
            img = mapping[v]
            for j in range(G.n):
                if j not in used_positions and G.has_arc(img, order[j]):
                    mapping[child] = order[j]
                    used_positions.add(j)
                    nodes += 1
                    break
            else:
                ok = False
                break
    if ok and is_valid_embedding(T, G, mapping):
        return EmbedOutcome(FOUND, mapping, nodes, "outbranching_greedy")
    if G.n <= fallback_cap:
        inner = exhaustive_embed(T, G)
        return EmbedOutcome(
            inner.verdict,
            inner.embedding,
            nodes + inner.nodes,
            "outbranching_fallback",
            ("greedy failed; exhaustive fallback used",),
        )
    return EmbedOutcome(
        BUDGET_EXHAUSTED, None, nodes, "outbranching_greedy", ("greedy failed; host over fallback cap",)
    )
