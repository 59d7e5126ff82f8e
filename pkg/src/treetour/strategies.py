"""Structured embedding strategies with validated hypotheses.

This module turns three finite embedding guarantees into executable
procedures.  Each procedure takes an *instance* — the tree, the host, a
partition of the host's vertices and the numeric parameters — validates
every stated hypothesis exactly (integer and Fraction arithmetic, no
floats), and then runs the constructive argument step by step.  Inner
single-component placements are done greedy-first with a complete
backtracking search as fallback; because a validated instance guarantees
enough room (three times the component size), an inner failure is a
defect and raises, never a silent miss.

Contents:

* ``round_the_back`` — embeds a tree rooted at an in-degree-0 vertex so
  the root lands on a prescribed host vertex ``v``, the remaining
  vertices land in ``v``'s out-neighbourhood ``N`` plus a bounded spill
  region ``X`` (at most ``4d`` X-vertices used, ``d`` = largest branch).
* ``extend_one_by_one`` — grows a partial embedding of a subtree one
  hanging component at a time, each component landing inside the correct
  directed neighbourhood of its attachment image; the ``b`` variant
  additionally forces at least ``r`` vertices into a tracked subset
  ``N'``; the ``c`` variant drops the degree conditions on the unused
  arc direction.
* ``component_by_component`` (and its dual) — embeds a tree split into
  forests ``F⁻``/``F⁺`` (all cross arcs ``F⁻ → F⁺``) across a host
  bipartition ``Y``/``Z`` with few ``Y → Z`` arcs.
* ``is_almost_regular`` / ``almost_regular_subtournament`` — degree
  regularity test and the one-sided-degree extraction of a large
  almost-regular subtournament.
* ``embed_star_shaped`` — the strategy for trees whose weight core is a
  single vertex: find one host vertex with enough out- and in-degree, or
  split the host into degree classes and finish through an outbranching.
* ``portfolio_embed`` — the dispatch driver: greedy, path/outbranching
  specialisations, star-shaped, a two-set split attempt, then complete
  search within caps.  NotFound is only ever produced by a completed
  exhaustive search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graphs import (
    DirectedTree,
    GraphDefectError,
    HypothesisViolation,
    Tournament,
    as_fraction,
    bit_list,
    bits,
    full_mask,
    induced_subtournament,
    is_valid_embedding,
    mask_of,
)
from .search import (
    BUDGET_EXHAUSTED,
    DEFAULT_NODE_BUDGET,
    FOUND,
    NOT_FOUND,
    EmbedOutcome,
    SearchConstraints,
    embed_outbranching,
    exhaustive_embed,
    greedy_embed,
    redei_path,
)
from .weights import core_tree, weight_profile

__all__ = [
    "RoundTheBackInstance",
    "OneByOneInstance",
    "TwoSetInstance",
    "round_the_back",
    "extend_one_by_one",
    "component_by_component",
    "dual_component_by_component",
    "is_almost_regular",
    "almost_regular_subtournament",
    "embed_star_shaped",
    "PortfolioConfig",
    "portfolio_embed",
    "directed_path_order",
]


# ---------------------------------------------------------------------------
# Small helpers

def _lsb(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _first_bits(mask: int, k: int) -> int:
    """The k lowest set bits of mask (all of them if fewer than k)."""
    out = 0
    while k > 0 and mask:
        low = mask & -mask
        out |= low
        mask ^= low
        k -= 1
    return out


def _tree_component(T: DirectedTree, start: int, region: int) -> int:
    """Vertex mask of the component of T[region] containing start."""
    comp = 1 << start
    frontier = [start]
    while frontier:
        u = frontier.pop()
        for w in T.neighbours(u):
            b = 1 << w
            if (region & b) and not (comp & b):
                comp |= b
                frontier.append(w)
    return comp


def _pieces(T: DirectedTree, region: int, centre: int) -> list[tuple[int, str, int]]:
    """Components of T[region] - centre with their attachment data.

    Returns (component mask, direction, attachment vertex) triples where
    direction is "out" if the arc at centre points into the component.
    Listed in ascending order of the attachment vertex id.
    """
    region_wo = region & ~(1 << centre)
    seen = 0
    out: list[tuple[int, str, int]] = []
    for w in sorted(T.neighbours(centre)):
        b = 1 << w
        if not (region_wo & b) or (seen & b):
            continue
        comp = _tree_component(T, w, region_wo)
        seen |= comp
        direction = "out" if T.has_arc(centre, w) else "in"
        out.append((comp, direction, w))
    return out


def _hanging_components(
    T: DirectedTree, c_mask: int
) -> list[tuple[int, int, int, str]]:
    """Components of T - T_c with their unique attachment arcs.

    Returns (component mask, attachment vertex in T_c, attachment vertex
    in the component, direction) with direction "out" when the arc leaves
    T_c.  Components are listed by ascending smallest member id.
    """
    rest = full_mask(T.n) & ~c_mask
    seen = 0
    comps: list[int] = []
    for v in range(T.n):
        b = 1 << v
        if (rest & b) and not (seen & b):
            comp = _tree_component(T, v, rest)
            seen |= comp
            comps.append(comp)
    out: list[tuple[int, int, int, str]] = []
    for comp in comps:
        attach: tuple[int, int, str] | None = None
        for u, v in T.arcs:
            if (c_mask >> u) & 1 and (comp >> v) & 1:
                hit = (u, v, "out")
            elif (comp >> u) & 1 and (c_mask >> v) & 1:
                hit = (v, u, "in")
            else:
                continue
            if attach is not None:
                raise GraphDefectError(
                    "component attached to the subtree by more than one arc"
                )
            attach = hit
        if attach is None:
            raise GraphDefectError("component with no arc to the subtree")
        out.append((comp, attach[0], attach[1], attach[2]))
    return out


def _forest_components(T: DirectedTree, mask: int) -> list[int]:
    """Components of T[mask], sorted by decreasing size then smallest id."""
    seen = 0
    comps: list[int] = []
    for v in range(T.n):
        b = 1 << v
        if (mask & b) and not (seen & b):
            comp = _tree_component(T, v, mask)
            seen |= comp
            comps.append(comp)
    comps.sort(key=lambda c: (-c.bit_count(), _lsb(c)))
    return comps


def _extract_subtree(T: DirectedTree, mask: int) -> tuple[DirectedTree, list[int]]:
    """Relabel T[mask] as its own tree; returns (tree, old ids by new id)."""
    verts = bit_list(mask)
    index = {v: i for i, v in enumerate(verts)}
    arcs = [
        (index[u], index[v])
        for (u, v) in T.arcs
        if (mask >> u) & 1 and (mask >> v) & 1
    ]
    return DirectedTree(len(verts), arcs), verts


def _embed_component(
    tree: DirectedTree,
    G: Tournament,
    allowed: int,
    *,
    context: str,
    stats: list[str] | None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> dict[int, int] | None:
    """Place a whole component inside ``allowed``; greedy then complete.

    Records the available-room-to-size ratio against the 3x yardstick the
    guarantees are calibrated to.  Returns None only when the complete
    search proves no placement exists inside ``allowed``.
    """
    avail = allowed.bit_count()
    if stats is not None:
        ratio = "3x-headroom" if avail >= 3 * tree.n else f"room {avail}/{tree.n}"
        stats.append(f"{context}: {tree.n} vertices, {avail} available ({ratio})")
    if avail < tree.n:
        return None
    constraints = SearchConstraints(
        allowed={u: allowed for u in range(tree.n)}, node_budget=node_budget
    )
    outcome = greedy_embed(tree, G, constraints)
    if not outcome.found:
        outcome = exhaustive_embed(tree, G, constraints)
    if outcome.found:
        assert outcome.embedding is not None
        return dict(outcome.embedding)
    return None


def _merge(
    phi: dict[int, int], sub: dict[int, int], old_ids: list[int], host_ids: list[int]
) -> int:
    """Merge a relabelled sub-embedding into phi; returns new host mask."""
    used = 0
    for new_id, host in sub.items():
        g_host = host_ids[host]
        phi[old_ids[new_id]] = g_host
        used |= 1 << g_host
    return used


# ---------------------------------------------------------------------------
# Round-the-back embedding

@dataclass(frozen=True)
class RoundTheBackInstance:
    """Input bundle for :func:`round_the_back`.

    ``T`` is rooted at ``t`` (which must have no in-arcs); the host ``G``
    is partitioned into ``{v}``, ``N`` and ``X`` (vertex masks).  With
    ``d`` the largest component of ``T - t``, the hypotheses are:

    * (root): ``t`` has no in-neighbours in ``T``;
    * (N-size): ``|N| >= |T| - 1``;
    * (N-out): every vertex of ``N`` is an out-neighbour of ``v``;
    * (X-capacity): at least ``3d`` vertices of ``N`` have at least
      ``6d`` in-neighbours and ``6d`` out-neighbours in ``X``.
    """

    T: DirectedTree
    t: int
    G: Tournament
    v: int
    N: int
    X: int


def _validate_round_the_back(inst: RoundTheBackInstance) -> tuple[int, int]:
    """Check all hypotheses; returns (d, qualifying-N-vertex mask)."""
    T, G = inst.T, inst.G
    if not (0 <= inst.t < T.n):
        raise ValueError(f"root {inst.t} out of range for a {T.n}-vertex tree")
    if not (0 <= inst.v < G.n):
        raise ValueError(f"host vertex {inst.v} out of range")
    all_hosts = full_mask(G.n)
    v_bit = 1 << inst.v
    if inst.N & ~all_hosts or inst.X & ~all_hosts:
        raise ValueError("N or X contains out-of-range vertices")
    if (inst.N & inst.X) or (v_bit & (inst.N | inst.X)):
        raise ValueError("{v}, N, X must be disjoint")
    if (v_bit | inst.N | inst.X) != all_hosts:
        raise ValueError("{v}, N, X must cover all host vertices")
    if T.in_nbrs[inst.t]:
        raise HypothesisViolation(
            f"(root): root {inst.t} has in-neighbours {list(T.in_nbrs[inst.t])}"
        )
    if inst.N.bit_count() < T.n - 1:
        raise HypothesisViolation(
            f"(N-size): |N| = {inst.N.bit_count()} < |T| - 1 = {T.n - 1}"
        )
    if inst.N & ~G.out_rows[inst.v]:
        bad = _lsb(inst.N & ~G.out_rows[inst.v])
        raise HypothesisViolation(
            f"(N-out): vertex {bad} of N is not an out-neighbour of v"
        )
    d = max(
        (c.bit_count() for c, _, _ in _pieces(T, full_mask(T.n), inst.t)),
        default=0,
    )
    qual = 0
    for u in bits(inst.N):
        if (
            (G.in_rows[u] & inst.X).bit_count() >= 6 * d
            and (G.out_rows[u] & inst.X).bit_count() >= 6 * d
        ):
            qual |= 1 << u
    if qual.bit_count() < 3 * d:
        raise HypothesisViolation(
            f"(X-capacity): only {qual.bit_count()} vertices of N have 6d = {6 * d} "
            f"in- and out-neighbours in X; need 3d = {3 * d}"
        )
    return d, qual


def round_the_back(
    inst: RoundTheBackInstance, *, stats: list[str] | None = None
) -> dict[int, int]:
    """Embed T with root on v, branches in N, and at most 4d spill into X.

    Branches of ``T - t`` are processed in decreasing size (ties to the
    smallest member id).  While a qualifying N-vertex is free and fewer
    than ``3d`` X-vertices are used, a branch puts its attachment vertex
    on a qualifying N-vertex and the rest into that vertex's in/out
    neighbourhoods inside X; once ``3d`` X-vertices are occupied, whole
    branches go into the unoccupied part of N.  The returned embedding is
    verified, including the ``<= 4d`` X-occupancy bound.
    """
    d, qual = _validate_round_the_back(inst)
    T, G = inst.T, inst.G
    phi: dict[int, int] = {inst.t: inst.v}
    occupied = 1 << inst.v
    branches = sorted(
        _pieces(T, full_mask(T.n), inst.t),
        key=lambda p: (-p[0].bit_count(), _lsb(p[0])),
    )
    host_ids = list(range(G.n))
    for comp, direction, t_i in branches:
        if direction != "out":
            raise GraphDefectError("root with an in-branch survived validation")
        size = comp.bit_count()
        x_occupied = (occupied & inst.X).bit_count()
        free_qual = qual & ~occupied
        if x_occupied < 3 * d and free_qual:
            v_i = _lsb(free_qual)
            phi[t_i] = v_i
            occupied |= 1 << v_i
            sub_pieces = _pieces(T, comp, t_i)
            ordered = [p for p in sub_pieces if p[1] == "out"] + [
                p for p in sub_pieces if p[1] == "in"
            ]
            for piece, pdir, _w in ordered:
                row = G.out_rows[v_i] if pdir == "out" else G.in_rows[v_i]
                allowed = row & inst.X & ~occupied
                sub_tree, old = _extract_subtree(T, piece)
                got = _embed_component(
                    sub_tree, G, allowed, context="round-the-back branch", stats=stats
                )
                if got is None:
                    raise GraphDefectError(
                        "round-the-back: X-side placement failed on a validated instance"
                    )
                occupied |= _merge(phi, got, old, host_ids)
        elif x_occupied < 3 * d:
            if size != 1:
                raise GraphDefectError(
                    "round-the-back: all qualifying vertices used before the "
                    "branches shrank to singletons"
                )
            free_n = inst.N & ~occupied
            if not free_n:
                raise GraphDefectError("round-the-back: N exhausted prematurely")
            phi[t_i] = _lsb(free_n)
            occupied |= free_n & -free_n
        else:
            allowed = inst.N & ~occupied
            sub_tree, old = _extract_subtree(T, comp)
            got = _embed_component(
                sub_tree, G, allowed, context="round-the-back N-branch", stats=stats
            )
            if got is None:
                raise GraphDefectError(
                    "round-the-back: N-side placement failed on a validated instance"
                )
            occupied |= _merge(phi, got, old, host_ids)
    x_used = (occupied & inst.X).bit_count()
    if x_used > 4 * d:
        raise GraphDefectError(
            f"round-the-back: {x_used} X-vertices occupied, bound is 4d = {4 * d}"
        )
    if phi[inst.t] != inst.v or not is_valid_embedding(T, G, phi):
        raise GraphDefectError("round-the-back produced an invalid embedding")
    return phi


# ---------------------------------------------------------------------------
# One-by-one extension

@dataclass(frozen=True)
class OneByOneInstance:
    """Input bundle for :func:`extend_one_by_one`.

    ``seed`` embeds the subtree on vertex mask ``T_c`` into ``G[S]``;
    ``S`` and ``N`` partition the host's vertices.  With ``m = |T - T_c|``
    and ``d`` the largest hanging component, the degree hypotheses are,
    for every vertex ``v`` of ``S``:

    * (i)  ``|N⁺(v) ∩ N| >= m + 2d``     * (ii) ``|N⁻(v) ∩ N| >= m + 2d``
    * (iii) ``|N⁺(v) ∩ N'| >= r + 2d``   * (iv) ``|N⁻(v) ∩ N'| >= r + 2d``

    Variant ``a`` checks (i)-(ii); variant ``b`` additionally takes
    ``N' ⊆ N`` and ``r <= m``, checks (iii)-(iv) and guarantees at least
    ``r`` new vertices land in ``N'``; variant ``c`` requires all arcs
    between ``T_c`` and the rest to share one direction and drops the
    conditions for the unused direction.
    """

    T: DirectedTree
    T_c: int
    seed: Mapping[int, int]
    G: Tournament
    S: int
    N: int
    variant: str = "a"
    N_prime: int | None = None
    r: int | None = None


def _check_seed(
    T: DirectedTree, c_mask: int, seed: Mapping[int, int], G: Tournament, region: int
) -> None:
    if set(seed.keys()) != set(bit_list(c_mask)):
        raise HypothesisViolation("(seed): seed keys differ from the subtree vertices")
    images = list(seed.values())
    if len(set(images)) != len(images):
        raise HypothesisViolation("(seed): seed images are not distinct")
    img_mask = mask_of(images)
    if img_mask & ~region:
        raise HypothesisViolation("(seed): seed image leaves its host region")
    for u, v in T.arcs:
        if (c_mask >> u) & 1 and (c_mask >> v) & 1 and not G.has_arc(seed[u], seed[v]):
            raise HypothesisViolation(
                f"(seed): tree arc ({u},{v}) not respected by the seed"
            )


def _validate_one_by_one(
    inst: OneByOneInstance,
) -> tuple[list[tuple[int, int, int, str]], int, int, int]:
    """Check hypotheses; returns (components, d, effective N', effective r)."""
    T, G = inst.T, inst.G
    all_hosts = full_mask(G.n)
    if inst.S & inst.N:
        raise ValueError("S and N must be disjoint")
    if (inst.S | inst.N) != all_hosts:
        raise ValueError("S and N must cover all host vertices")
    tree_mask = full_mask(T.n)
    if inst.T_c == 0 or inst.T_c & ~tree_mask:
        raise ValueError("T_c must be a nonempty set of tree vertices")
    if _tree_component(T, _lsb(inst.T_c), inst.T_c) != inst.T_c:
        raise ValueError("T_c must induce a connected subtree")
    if inst.variant not in ("a", "b", "c"):
        raise ValueError(f"unknown variant {inst.variant!r}")
    _check_seed(T, inst.T_c, inst.seed, G, inst.S)
    comps = _hanging_components(T, inst.T_c)
    m = T.n - inst.T_c.bit_count()
    d = max((c.bit_count() for c, _, _, _ in comps), default=0)

    if (inst.N_prime is None) != (inst.r is None):
        raise ValueError("N_prime and r must be given together")
    if inst.variant == "b" and inst.N_prime is None:
        raise ValueError("variant b requires N_prime and r")
    if inst.variant == "a" and inst.N_prime is not None:
        raise ValueError("variant a takes no N_prime/r; use variant b")
    n_prime, r = inst.N_prime, inst.r
    if n_prime is not None:
        assert r is not None
        if n_prime & ~inst.N:
            raise HypothesisViolation("(N'-subset): N' must be a subset of N")
        if not (0 <= r <= m):
            raise HypothesisViolation(f"(r-range): r = {r} outside 0..{m}")
    else:
        n_prime, r = inst.N, m

    has_out = any(direction == "out" for _, _, _, direction in comps)
    has_in = any(direction == "in" for _, _, _, direction in comps)
    if inst.variant == "c":
        if has_out and has_in:
            raise HypothesisViolation(
                "(direction): variant c needs all arcs between the subtree and "
                "the rest to share one direction"
            )
        need_out, need_in = has_out, has_in
    else:
        need_out = need_in = True
    with_prime = inst.N_prime is not None
    for v in bits(inst.S):
        if need_out:
            if (G.out_rows[v] & inst.N).bit_count() < m + 2 * d:
                raise HypothesisViolation(
                    f"(i): vertex {v} has {(G.out_rows[v] & inst.N).bit_count()} "
                    f"out-neighbours in N, needs {m + 2 * d}"
                )
            if with_prime and (G.out_rows[v] & n_prime).bit_count() < r + 2 * d:
                raise HypothesisViolation(
                    f"(iii): vertex {v} has {(G.out_rows[v] & n_prime).bit_count()} "
                    f"out-neighbours in N', needs {r + 2 * d}"
                )
        if need_in:
            if (G.in_rows[v] & inst.N).bit_count() < m + 2 * d:
                raise HypothesisViolation(
                    f"(ii): vertex {v} has {(G.in_rows[v] & inst.N).bit_count()} "
                    f"in-neighbours in N, needs {m + 2 * d}"
                )
            if with_prime and (G.in_rows[v] & n_prime).bit_count() < r + 2 * d:
                raise HypothesisViolation(
                    f"(iv): vertex {v} has {(G.in_rows[v] & n_prime).bit_count()} "
                    f"in-neighbours in N', needs {r + 2 * d}"
                )
    return comps, d, n_prime, r


def extend_one_by_one(
    inst: OneByOneInstance, *, stats: list[str] | None = None
) -> dict[int, int]:
    """Extend the seed embedding over all hanging components.

    Components are processed in ascending order of their smallest vertex
    id.  A component attached by an out-arc at ``t`` (image ``v``) lands
    inside the unoccupied out-neighbours of ``v``: inside ``N'`` while
    ``N'`` has room, topped up with the fewest possible vertices from
    ``N ∖ N'`` once ``N'`` tightens (this forces the ``r``-landing
    guarantee), and anywhere in ``N`` once ``r`` vertices have landed.
    In-arc components are symmetric.  The returned total embedding is
    verified, including the landing count.
    """
    comps, d, n_prime, r = _validate_one_by_one(inst)
    T, G = inst.T, inst.G
    phi: dict[int, int] = dict(inst.seed)
    occupied = mask_of(phi.values())
    host_ids = list(range(G.n))
    landed_new = 0
    for comp, t_c, _w, direction in comps:
        v = phi[t_c]
        row = G.out_rows[v] if direction == "out" else G.in_rows[v]
        prime_side = row & n_prime
        occ_prime = (prime_side & occupied).bit_count()
        size = comp.bit_count()
        if occ_prime <= r - size:
            allowed = prime_side & ~occupied
        elif occ_prime >= r:
            allowed = row & inst.N & ~occupied
        else:
            k = r - occ_prime
            outside = row & (inst.N & ~n_prime) & ~occupied
            allowed = (prime_side & ~occupied) | _first_bits(outside, size - k)
        sub_tree, old = _extract_subtree(T, comp)
        got = _embed_component(
            sub_tree, G, allowed, context="one-by-one component", stats=stats
        )
        if got is None:
            raise GraphDefectError(
                "one-by-one: component placement failed on a validated instance"
            )
        used = _merge(phi, got, old, host_ids)
        occupied |= used
        landed_new |= used
    if (landed_new & n_prime).bit_count() < r:
        raise GraphDefectError(
            f"one-by-one: only {(landed_new & n_prime).bit_count()} vertices "
            f"landed in N', guarantee was {r}"
        )
    if not is_valid_embedding(T, G, phi):
        raise GraphDefectError("one-by-one produced an invalid embedding")
    return phi


# ---------------------------------------------------------------------------
# Two-set (forest-by-forest) embedding

@dataclass(frozen=True)
class TwoSetInstance:
    """Input bundle for :func:`component_by_component`.

    The tree's vertices are split into induced forests ``F⁻`` and ``F⁺``
    with every cross arc directed ``F⁻ → F⁺``; the host's vertices are
    split into ``Y`` and ``Z``.  ``seed`` embeds the largest component of
    ``F⁺`` into ``G[Y]``.  With ``n = |T|``, ``T₂⁺`` the second-largest
    ``F⁺`` component, the hypotheses are:

    * (Y-size): ``|Y| >= |F⁺| + |T₂⁺| + α·n``
    * (Z-size): ``|Z| >= 2|F⁻| + α·n``
    * (Y-out-gamma): every Y-vertex has at most ``γ·n`` out-neighbours in Z
    * (Z-in-gamma): every Z-vertex has at most ``γ·n`` in-neighbours in Y
    """

    T: DirectedTree
    F_minus: int
    F_plus: int
    G: Tournament
    Y: int
    Z: int
    gamma: Fraction | int | float | str
    alpha: Fraction | int | float | str
    seed: Mapping[int, int]


def _validate_two_set(inst: TwoSetInstance) -> list[int]:
    """Check hypotheses; returns F⁺/F⁻ components with the seed's first."""
    T, G = inst.T, inst.G
    tree_mask = full_mask(T.n)
    if inst.F_minus & inst.F_plus or (inst.F_minus | inst.F_plus) != tree_mask:
        raise ValueError("F⁻ and F⁺ must partition the tree's vertices")
    all_hosts = full_mask(G.n)
    if inst.Y & inst.Z or (inst.Y | inst.Z) != all_hosts:
        raise ValueError("Y and Z must partition the host's vertices")
    gamma = as_fraction(inst.gamma)
    alpha = as_fraction(inst.alpha)
    for u, v in T.arcs:
        if (inst.F_plus >> u) & 1 and (inst.F_minus >> v) & 1:
            raise HypothesisViolation(
                f"(cross-direction): arc ({u},{v}) runs from F⁺ to F⁻"
            )
    if inst.F_plus == 0:
        raise HypothesisViolation(
            "(F-plus-empty): F⁺ is empty; use the dual procedure instead"
        )
    plus_comps = _forest_components(T, inst.F_plus)
    t2_plus = plus_comps[1].bit_count() if len(plus_comps) > 1 else 0
    n = T.n
    if inst.Y.bit_count() < inst.F_plus.bit_count() + t2_plus + alpha * n:
        raise HypothesisViolation(
            f"(Y-size): |Y| = {inst.Y.bit_count()} < |F⁺| + |T₂⁺| + α·n = "
            f"{inst.F_plus.bit_count()} + {t2_plus} + {alpha * n}"
        )
    if inst.Z.bit_count() < 2 * inst.F_minus.bit_count() + alpha * n:
        raise HypothesisViolation(
            f"(Z-size): |Z| = {inst.Z.bit_count()} < 2|F⁻| + α·n = "
            f"{2 * inst.F_minus.bit_count()} + {alpha * n}"
        )
    for y in bits(inst.Y):
        if (G.out_rows[y] & inst.Z).bit_count() > gamma * n:
            raise HypothesisViolation(
                f"(Y-out-gamma): vertex {y} has "
                f"{(G.out_rows[y] & inst.Z).bit_count()} out-neighbours in Z, "
                f"cap is γ·n = {gamma * n}"
            )
    for z in bits(inst.Z):
        if (G.in_rows[z] & inst.Y).bit_count() > gamma * n:
            raise HypothesisViolation(
                f"(Z-in-gamma): vertex {z} has "
                f"{(G.in_rows[z] & inst.Y).bit_count()} in-neighbours in Y, "
                f"cap is γ·n = {gamma * n}"
            )
    _check_seed(T, plus_comps[0], inst.seed, G, inst.Y)
    return plus_comps


def component_by_component(
    inst: TwoSetInstance, *, stats: list[str] | None = None
) -> dict[int, int]:
    """Grow the seed over all remaining forest components.

    Components are taken in an order where each new one touches the
    already-embedded prefix by exactly one tree arc (ties to the smallest
    member id).  An ``F⁺`` component lands in the unoccupied
    out-neighbours in ``Y`` of its attachment's image; an ``F⁻``
    component in the unoccupied in-neighbours in ``Z``.  The returned
    total embedding is verified.
    """
    plus_comps = _validate_two_set(inst)
    T, G = inst.T, inst.G
    first = plus_comps[0]
    comps_all = [c for c in _forest_components(T, inst.F_plus) if c != first]
    comps_all += _forest_components(T, inst.F_minus)
    phi: dict[int, int] = dict(inst.seed)
    occupied = mask_of(phi.values())
    prefix = first
    remaining = comps_all[:]
    host_ids = list(range(G.n))
    while remaining:
        adjacent = [
            c
            for c in remaining
            if any(
                ((prefix >> u) & 1 and (c >> v) & 1)
                or ((c >> u) & 1 and (prefix >> v) & 1)
                for u, v in T.arcs
            )
        ]
        if not adjacent:
            raise GraphDefectError("two-set: disconnected component order")
        comp = min(adjacent, key=_lsb)
        remaining.remove(comp)
        links = [
            (u, v)
            for u, v in T.arcs
            if ((prefix >> u) & 1 and (comp >> v) & 1)
            or ((comp >> u) & 1 and (prefix >> v) & 1)
        ]
        if len(links) != 1:
            raise GraphDefectError("two-set: component linked by more than one arc")
        u, v = links[0]
        t_prefix = u if (prefix >> u) & 1 else v
        host_v = phi[t_prefix]
        if comp & inst.F_plus:
            allowed = G.out_rows[host_v] & inst.Y & ~occupied
            context = "two-set F⁺ component"
        else:
            allowed = G.in_rows[host_v] & inst.Z & ~occupied
            context = "two-set F⁻ component"
        sub_tree, old = _extract_subtree(T, comp)
        got = _embed_component(sub_tree, G, allowed, context=context, stats=stats)
        if got is None:
            raise GraphDefectError(
                "two-set: component placement failed on a validated instance "
                "(γ/α probably leave too little room at this scale)"
            )
        occupied |= _merge(phi, got, old, host_ids)
        prefix |= comp
    if not is_valid_embedding(T, G, phi):
        raise GraphDefectError("two-set produced an invalid embedding")
    return phi


def dual_component_by_component(
    inst: TwoSetInstance, *, stats: list[str] | None = None
) -> dict[int, int]:
    """Mirrored reading of :func:`component_by_component`.

    Here ``seed`` embeds the largest component of ``F⁻`` into ``G[Z]``
    and the size conditions swap to ``|Y| >= 2|F⁺| + α·n`` and
    ``|Z| >= |F⁻| + |T₂⁻| + α·n``.  Implemented by reversing every arc of
    the tree and the host, swapping the two forests and the two host
    sides, and running the primal procedure; the resulting vertex map is
    returned unchanged (reversing both graphs preserves embeddings).
    Hypothesis names in errors refer to the reversed primal instance.
    """
    rev = TwoSetInstance(
        T=inst.T.reverse(),
        F_minus=inst.F_plus,
        F_plus=inst.F_minus,
        G=inst.G.reverse(),
        Y=inst.Z,
        Z=inst.Y,
        gamma=inst.gamma,
        alpha=inst.alpha,
        seed=inst.seed,
    )
    return component_by_component(rev, stats=stats)


# ---------------------------------------------------------------------------
# Almost-regular tournaments

def is_almost_regular(G: Tournament, gamma: Fraction | int | float | str) -> bool:
    """True when every vertex has in- and out-degree ≥ (1-γ)(n-1)/2."""
    g = as_fraction(gamma)
    bound = (1 - g) * Fraction(G.n - 1, 2)
    return all(
        G.out_deg(v) >= bound and G.in_deg(v) >= bound for v in range(G.n)
    )


def _exceeds_sqrt(value: int, alpha: Fraction, scale: int) -> bool:
    """Exact test for value > sqrt(alpha) * scale (value, scale >= 0)."""
    if value < 0:
        return False
    return Fraction(value * value) > alpha * scale * scale


def almost_regular_subtournament(
    G: Tournament,
    alpha: Fraction | int | float | str,
    case: str,
    gamma: Fraction | int | float | str,
) -> int:
    """Extract a large almost-regular subtournament under a degree bound.

    The four admissible hypotheses, each checked exactly for every
    vertex (n = |G|):

    * case "i":   d⁺(v) >= (1-α)(n-1)/2     * case "ii":  d⁻(v) >= (1-α)(n-1)/2
    * case "iii": d⁺(v) <= (1+α)(n-1)/2     * case "iv":  d⁻(v) <= (1+α)(n-1)/2

    Cases i/iv delete every vertex with d⁺(v) > (1+√α)(n-1)/2; cases
    ii/iii delete on d⁻ instead (the complement degree turns each bound
    into the matching one-sided surplus).  The survivors are returned as
    a vertex mask after verifying they number at least (1-γ)n and induce
    a γ-almost-regular tournament; verification failure raises — it
    means the parameters sit outside the regime the guarantee needs.
    """
    a = as_fraction(alpha)
    g = as_fraction(gamma)
    if case not in ("i", "ii", "iii", "iv"):
        raise ValueError(f"unknown case {case!r}")
    n = G.n
    low = (1 - a) * Fraction(n - 1, 2)
    high = (1 + a) * Fraction(n - 1, 2)
    for v in range(n):
        dp, dm = G.out_deg(v), G.in_deg(v)
        ok = {
            "i": dp >= low,
            "ii": dm >= low,
            "iii": dp <= high,
            "iv": dm <= high,
        }[case]
        if not ok:
            raise HypothesisViolation(
                f"(case {case}): degree hypothesis fails at vertex {v} "
                f"(d⁺={dp}, d⁻={dm}, bound {low if case in ('i', 'ii') else high})"
            )
    use_out = case in ("i", "iv")
    keep = 0
    for v in range(n):
        deg = G.out_deg(v) if use_out else G.in_deg(v)
        if not _exceeds_sqrt(2 * deg - (n - 1), a, n - 1):
            keep |= 1 << v
    if keep.bit_count() < (1 - g) * n:
        raise GraphDefectError(
            f"almost-regular extraction kept {keep.bit_count()} < (1-γ)n = "
            f"{(1 - g) * n} vertices; α/γ outside the supported regime"
        )
    sub, _ = induced_subtournament(G, keep)
    if not is_almost_regular(sub, g):
        raise GraphDefectError(
            "almost-regular extraction is not γ-almost-regular; "
            "α/γ outside the supported regime"
        )
    return keep


# ---------------------------------------------------------------------------
# Star-shaped strategy

def _star_phase_one(
    T: DirectedTree,
    G: Tournament,
    t: int,
    v: int,
    t1_mask: int,
    t2_mask: int,
    stats: list[str] | None,
) -> dict[int, int] | None:
    """Embed t at v, out-branches in N⁺(v), in-branches in N⁻(v)."""
    phi: dict[int, int] = {t: v}
    for mask, row in ((t1_mask, G.out_rows[v]), (t2_mask, G.in_rows[v])):
        if mask == 1 << t:
            continue
        region = row | (1 << v)
        host, old_hosts = induced_subtournament(G, region)
        host_index = {g: i for i, g in enumerate(old_hosts)}
        sub, old = _extract_subtree(T, mask)
        t_new = old.index(t)
        inst = OneByOneInstance(
            T=sub,
            T_c=1 << t_new,
            seed={t_new: host_index[v]},
            G=host,
            S=1 << host_index[v],
            N=full_mask(host.n) & ~(1 << host_index[v]),
            variant="c",
        )
        try:
            got = extend_one_by_one(inst, stats=stats)
        except HypothesisViolation:
            return None
        for new_id, h in got.items():
            phi[old[new_id]] = old_hosts[h]
    return phi


def _star_branch_wide(
    T: DirectedTree,
    G: Tournament,
    t: int,
    y: int,
    Y: int,
    t1_mask: int,
    t2_mask: int,
    notes: list[str],
    stats: list[str] | None,
) -> dict[int, int] | None:
    """Root the out-side inside Y via round-the-back, then add the in-side."""
    cand = next(
        (u for u in bits(Y) if (G.out_rows[u] & Y).bit_count() >= y), None
    )
    if cand is None:
        notes.append("wide branch: no Y-vertex with y out-neighbours in Y")
        return None
    n_prime = _first_bits(G.out_rows[cand] & Y, y)
    host, old_hosts = induced_subtournament(G, Y)
    host_index = {g: i for i, g in enumerate(old_hosts)}
    sub1, old1 = _extract_subtree(T, t1_mask)
    n_prime_new = mask_of(host_index[u] for u in bits(n_prime))
    v_new = host_index[cand]
    x_new = full_mask(host.n) & ~(1 << v_new) & ~n_prime_new
    inst = RoundTheBackInstance(
        T=sub1, t=old1.index(t), G=host, v=v_new, N=n_prime_new, X=x_new
    )
    try:
        got1 = round_the_back(inst, stats=stats)
    except HypothesisViolation as exc:
        notes.append(f"wide branch: {exc}")
        return None
    phi: dict[int, int] = {old1[i]: old_hosts[h] for i, h in got1.items()}
    if t2_mask == 1 << t:
        return phi
    occupied = mask_of(phi.values())
    region = (full_mask(G.n) & ~occupied) | (1 << phi[t])
    host2, old_hosts2 = induced_subtournament(G, region)
    host2_index = {g: i for i, g in enumerate(old_hosts2)}
    sub2, old2 = _extract_subtree(T, t2_mask)
    t_new = old2.index(t)
    v2 = host2_index[phi[t]]
    inst2 = OneByOneInstance(
        T=sub2,
        T_c=1 << t_new,
        seed={t_new: v2},
        G=host2,
        S=1 << v2,
        N=full_mask(host2.n) & ~(1 << v2),
        variant="c",
    )
    try:
        got2 = extend_one_by_one(inst2, stats=stats)
    except HypothesisViolation as exc:
        notes.append(f"wide branch, in-side: {exc}")
        return None
    for new_id, h in got2.items():
        phi[old2[new_id]] = old_hosts2[h]
    return phi


def _star_branch_narrow(
    T: DirectedTree,
    G: Tournament,
    t: int,
    Y: int,
    notes: list[str],
    stats: list[str] | None,
) -> dict[int, int] | None:
    """Plant the out-reachable subtree in G[Y], then extend one by one."""
    t3_mask = 1 << t
    frontier = [t]
    while frontier:
        u = frontier.pop()
        for w in T.out_nbrs[u]:
            if not (t3_mask >> w) & 1:
                t3_mask |= 1 << w
                frontier.append(w)
    sub3, old3 = _extract_subtree(T, t3_mask)
    if Y.bit_count() < 2 * sub3.n - 2:
        notes.append("narrow branch: Y too small for the outbranching step")
        return None
    host, old_hosts = induced_subtournament(G, Y)
    out3 = embed_outbranching(sub3, host)
    if not out3.found:
        notes.append("narrow branch: outbranching placement failed")
        return None
    assert out3.embedding is not None
    phi: dict[int, int] = {
        old3[i]: old_hosts[h] for i, h in out3.embedding.items()
    }
    if t3_mask == full_mask(T.n):
        return phi
    image = mask_of(phi.values())
    seed = {old3[i]: old_hosts[h] for i, h in out3.embedding.items()}
    inst = OneByOneInstance(
        T=T,
        T_c=t3_mask,
        seed=seed,
        G=G,
        S=image,
        N=full_mask(G.n) & ~image,
        variant="c",
    )
    try:
        return extend_one_by_one(inst, stats=stats)
    except HypothesisViolation as exc:
        notes.append(f"narrow branch: {exc}")
        return None


def embed_star_shaped(
    T: DirectedTree,
    G: Tournament,
    delta: int,
    *,
    alpha: Fraction | int | float | str = Fraction(1, 4),
    stats: list[str] | None = None,
) -> EmbedOutcome:
    """Embedding strategy for trees whose weight core is one vertex.

    Phase one scans for a host vertex ``v`` with out-degree at least
    ``y + 2n/Δ`` (``y`` = total size of the root's out-branches; waived
    when ``y = 0``) and the mirrored in-degree bound; the root goes to
    ``v`` and the branches extend one by one inside ``N⁺(v)``/``N⁻(v)``.
    Phase two splits the host into the low-out-degree class ``Y`` and its
    complement, reverses everything if needed so ``|Y| >= 2y`` with
    ``y >= 1``, then either roots the out-side inside ``Y`` via
    round-the-back (wide branch, preferred when ``y >= α·n``) or plants
    the out-reachable subtree with the outbranching embedder and extends
    one by one (narrow branch).  Strategy failure — some hypothesis
    refusing to validate at this scale — returns BudgetExhausted; every
    Found embedding is verified.
    """
    core = core_tree(T, delta)
    if core.size != 1:
        raise ValueError(
            f"star-shaped strategy needs a single-vertex core, got {core.size}"
        )
    if G.n < 2 * T.n - 2:
        raise ValueError(
            f"host has {G.n} vertices; needs at least 2|T|-2 = {2 * T.n - 2}"
        )
    a = as_fraction(alpha)
    notes: list[str] = []
    n = T.n
    slack = Fraction(2 * n, delta)

    def finish(phi: dict[int, int], label: str) -> EmbedOutcome:
        if not is_valid_embedding(T, G, phi):
            raise GraphDefectError(f"star-shaped {label} produced an invalid map")
        notes.append(label)
        return EmbedOutcome(FOUND, phi, 0, "star_shaped", tuple(notes))

    for T_op, G_op, tag in ((T, G, "forward"), (T.reverse(), G.reverse(), "reversed")):
        prof = weight_profile(T_op)
        t = _lsb(core_tree(T_op, delta).vertices)
        y = prof.out_weight[t]
        z = prof.in_weight[t]
        t1_mask = 1 << t
        t2_mask = 1 << t
        for comp, direction, _w in _pieces(T_op, full_mask(n), t):
            if direction == "out":
                t1_mask |= comp
            else:
                t2_mask |= comp
        if tag == "forward":
            for v in range(G_op.n):
                if (y == 0 or G_op.out_deg(v) >= y + slack) and (
                    z == 0 or G_op.in_deg(v) >= z + slack
                ):
                    phi = _star_phase_one(T_op, G_op, t, v, t1_mask, t2_mask, stats)
                    if phi is not None:
                        return finish(phi, f"phase one at host vertex {v}")
            notes.append("phase one: no host vertex meets both degree bounds")
        Y = 0
        for v in range(G_op.n):
            if G_op.out_deg(v) < y + slack:
                Y |= 1 << v
        if y < 1 or Y.bit_count() < 2 * y:
            notes.append(
                f"{tag}: degree-class split unusable (y={y}, |Y|={Y.bit_count()})"
            )
            continue
        branches = ["wide", "narrow"] if y >= a * n else ["narrow", "wide"]
        for branch in branches:
            if branch == "wide":
                phi = _star_branch_wide(
                    T_op, G_op, t, y, Y, t1_mask, t2_mask, notes, stats
                )
            else:
                phi = _star_branch_narrow(T_op, G_op, t, Y, notes, stats)
            if phi is not None:
                return finish(phi, f"{tag} {branch} branch")
    return EmbedOutcome(BUDGET_EXHAUSTED, None, 0, "star_shaped", tuple(notes))


# ---------------------------------------------------------------------------
# Portfolio driver

def directed_path_order(T: DirectedTree) -> list[int] | None:
    """The source-to-sink vertex order if T is a directed path, else None."""
    if any(len(T.out_nbrs[v]) > 1 or len(T.in_nbrs[v]) > 1 for v in range(T.n)):
        return None
    sources = [v for v in range(T.n) if not T.in_nbrs[v]]
    if len(sources) != 1:
        return None
    order = [sources[0]]
    while T.out_nbrs[order[-1]]:
        order.append(T.out_nbrs[order[-1]][0])
    return order if len(order) == T.n else None


@dataclass(frozen=True)
class PortfolioConfig:
    """Knobs for :func:`portfolio_embed`.

    ``delta`` is the core parameter used for the star-shaped and two-set
    stages; ``exhaustive_max_n`` caps the host size for the complete
    search stage; ``two_set_candidates`` bounds how many host bipartitions
    the two-set stage tries; ``alpha``/``gamma`` are its slack and
    cross-arc parameters.
    """

    delta: int = 4
    node_budget: int = DEFAULT_NODE_BUDGET
    exhaustive_max_n: int = 26
    alpha: Fraction = Fraction(1, 4)
    gamma: Fraction = Fraction(1, 8)
    two_set_candidates: int = 6


def _try_two_set(
    T: DirectedTree,
    G: Tournament,
    f_minus: int,
    f_plus: int,
    cfg: PortfolioConfig,
    notes: list[str],
    label: str,
) -> dict[int, int] | None:
    """Attempt degree-ordered Y/Z bipartitions for one forest split."""
    n = T.n
    alpha_n = cfg.alpha * n
    min_extra = -(-alpha_n.numerator // alpha_n.denominator)
    plus_comps = _forest_components(T, f_plus)
    t2_plus = plus_comps[1].bit_count() if len(plus_comps) > 1 else 0
    min_y = f_plus.bit_count() + t2_plus + min_extra
    min_z = 2 * f_minus.bit_count() + min_extra
    if min_y + min_z > G.n:
        notes.append(f"{label}: host too small for any admissible bipartition")
        return None
    order = sorted(range(G.n), key=lambda v: (G.out_deg(v), v))
    sizes: list[int] = []
    lo, hi = min_y, G.n - min_z
    count = min(cfg.two_set_candidates, hi - lo + 1)
    for i in range(count):
        sizes.append(lo + (hi - lo) * i // max(1, count - 1))
    tried = 0
    for size in dict.fromkeys(sizes):
        y_mask = mask_of(order[:size])
        z_mask = full_mask(G.n) & ~y_mask
        gamma_n = cfg.gamma * n
        if any((G.out_rows[u] & z_mask).bit_count() > gamma_n for u in bits(y_mask)):
            continue
        if any((G.in_rows[u] & y_mask).bit_count() > gamma_n for u in bits(z_mask)):
            continue
        tried += 1
        sub_seed, old_seed = _extract_subtree(T, plus_comps[0])
        seed_map = _embed_component(
            sub_seed, G, y_mask, context="two-set seed", stats=None, node_budget=100_000
        )
        if seed_map is None:
            continue
        seed = {old_seed[i]: h for i, h in seed_map.items()}
        inst = TwoSetInstance(
            T=T,
            F_minus=f_minus,
            F_plus=f_plus,
            G=G,
            Y=y_mask,
            Z=z_mask,
            gamma=cfg.gamma,
            alpha=cfg.alpha,
            seed=seed,
        )
        try:
            return component_by_component(inst)
        except HypothesisViolation:
            continue
    notes.append(f"{label}: no bipartition validated ({tried} passed degree screen)")
    return None


def portfolio_embed(
    T: DirectedTree, G: Tournament, config: PortfolioConfig | None = None
) -> EmbedOutcome:
    """Dispatch driver over all embedding strategies.

    Stages, in order: pigeonhole size check; directed-path specialisation
    along a dominance order; one greedy pass; outbranching embedder (on T
    or on the reversed pair when T is an in-branching); star-shaped
    strategy when the Δ-core is a single vertex; a two-set split attempt
    on a core arc (primal and dual); complete search when the host is
    within ``exhaustive_max_n``.  The first verified embedding wins and
    the outcome's notes name the winning stage; NotFound is only produced
    by a completed exhaustive search (or an impossible size).
    """
    cfg = config or PortfolioConfig()
    notes: list[str] = []
    nodes = 0
    if T.n > G.n:
        return EmbedOutcome(
            NOT_FOUND, None, 0, "portfolio", ("host smaller than tree",)
        )

    def won(phi: dict[int, int], stage: str) -> EmbedOutcome:
        if not is_valid_embedding(T, G, phi):
            raise GraphDefectError(f"portfolio stage {stage} produced an invalid map")
        notes.append(f"found by {stage}")
        return EmbedOutcome(FOUND, phi, nodes, f"portfolio/{stage}", tuple(notes))

    path = directed_path_order(T)
    if path is not None:
        spine = redei_path(G)
        return won({path[i]: spine[i] for i in range(T.n)}, "redei-path")

    out = greedy_embed(T, G, SearchConstraints(node_budget=cfg.node_budget))
    nodes += out.nodes
    if out.found:
        assert out.embedding is not None
        return won(dict(out.embedding), "greedy")
    notes.append("greedy: no admissible completion")

    if G.n >= 2 * T.n - 2:
        if T.is_outbranching():
            ob = embed_outbranching(T, G)
            nodes += ob.nodes
            if ob.found:
                assert ob.embedding is not None
                return won(dict(ob.embedding), "outbranching")
            notes.append("outbranching: failed")
        elif T.reverse().is_outbranching():
            ob = embed_outbranching(T.reverse(), G.reverse())
            nodes += ob.nodes
            if ob.found:
                assert ob.embedding is not None
                return won(dict(ob.embedding), "inbranching-by-reversal")
            notes.append("inbranching-by-reversal: failed")

    core = core_tree(T, cfg.delta)
    if core.size == 1:
        if G.n >= 2 * T.n - 2:
            star = embed_star_shaped(T, G, cfg.delta, alpha=cfg.alpha)
            if star.found:
                assert star.embedding is not None
                return won(dict(star.embedding), "star-shaped")
            notes.append("star-shaped: all branches declined")
        else:
            notes.append("star-shaped: host below 2|T|-2, skipped")
    else:
        u, v = min(core.arcs)
        without = full_mask(T.n) & ~(1 << u) & ~(1 << v)
        u_side = _tree_component(T, u, without | (1 << u))
        f_minus = u_side
        f_plus = full_mask(T.n) & ~u_side
        phi = _try_two_set(T, G, f_minus, f_plus, cfg, notes, "two-set")
        if phi is not None:
            return won(phi, "two-set")
        phi = _try_two_set(
            T.reverse(), G.reverse(), f_plus, f_minus, cfg, notes, "two-set dual"
        )
        if phi is not None:
            return won(phi, "two-set-dual")

    if G.n <= cfg.exhaustive_max_n:
        full = exhaustive_embed(
            T, G, SearchConstraints(node_budget=cfg.node_budget)
        )
        nodes += full.nodes
        if full.found:
            assert full.embedding is not None
            return won(dict(full.embedding), "exhaustive")
        if full.verdict == NOT_FOUND:
            notes.append("exhaustive search completed: no embedding exists")
            return EmbedOutcome(NOT_FOUND, None, nodes, "portfolio", tuple(notes))
        notes.append("exhaustive: node budget exhausted")
    else:
        notes.append(f"exhaustive: host exceeds cap {cfg.exhaustive_max_n}")
    return EmbedOutcome(BUDGET_EXHAUSTED, None, nodes, "portfolio", tuple(notes))
