"""Maximum matchings, forced-edge perfect matchings, and Hall-condition machinery.

General graphs go through augmenting-path search with blossom contraction;
bipartite graphs use layered (Hopcroft-Karp) augmentation.  A subset-DP
oracle (`exhaustive_max_matching_size`) is kept for small graphs so the fast
algorithms can be cross-checked against an independent route.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import PreconditionError
from .graph import Graph, OddCycle, bipartition, bits, is_connected, mask_of

Matching = tuple[tuple[int, int], ...]



def canonical_matching(pairs) -> Matching:
    return tuple(sorted((u, v) if u < v else (v, u) for u, v in pairs))


# -- general matching: blossom contraction --------------------------------


def _blossom_matching(n: int, adjacency) -> list[int]:
    """Maximum matching on a general graph; returns the partner array.

    Classic O(V^3) scheme: BFS an alternating forest from each free vertex,
    contracting odd cycles (blossoms) via base[] relabeling.
    """
    match = [-1] * n
    # greedy seed keeps augmentation rounds short and is order-deterministic
    for v in range(n):
        if match[v] == -1:
            for w in adjacency[v]:
                if match[w] == -1:
                    match[v] = w
                    match[w] = v
                    break

    p = [-1] * n
    base = list(range(n))
    used = [False] * n
    blossom = [False] * n

    def lca(a: int, b: int) -> int:
        used2 = [False] * n
        while True:
            a = base[a]
            used2[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if used2[b]:
                return b
            b = p[match[b]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def find_path(root: int) -> bool:
        for i in range(n):
            used[i] = False
            p[i] = -1
            base[i] = i
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adjacency[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    curbase = lca(v, to)
                    for i in range(n):
                        blossom[i] = False
                    mark_path(v, curbase, to)
                    mark_path(to, curbase, v)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = curbase
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        u = to
                        while u != -1:
                            pv = p[u]
                            ppv = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = ppv
                        return True
                    used[match[to]] = True
                    q.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            find_path(v)
    return match


def _mm_size_mask(g: Graph, mask: int) -> int:
    """Maximum matching size of the subgraph induced by ``mask`` (blossom)."""
    memo = g._memo.setdefault("mm_mask", {})
    got = memo.get(mask)
    if got is not None:
        return got
    verts = list(bits(mask))
    remap = {v: i for i, v in enumerate(verts)}
    adjacency = [
        [remap[w] for w in g.adjacency[v] if mask >> w & 1] for v in verts
    ]
    match = _blossom_matching(len(verts), adjacency)
    size = sum(1 for i, w in enumerate(match) if w > i)
    memo[mask] = size
    return size


# -- bipartite matching: Hopcroft-Karp -------------------------------------

_INF = float("inf")


def hopcroft_karp(lefts, adjacency: dict[int, tuple[int, ...]]) -> dict[int, int]:
    """Maximum matching of a bipartite graph, as a left->right map.

    ``adjacency`` maps each left vertex to its right neighbors; iteration
    order is made deterministic by sorting both sides.
    """
    lefts = sorted(lefts)
    pair_l: dict[int, int] = {}
    pair_r: dict[int, int] = {}
    dist: dict[int, float] = {}

    def bfs() -> bool:
        q = deque()
        for u in lefts:
            if u not in pair_l:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = _INF
        found = False
        while q:
            u = q.popleft()
            for w in adjacency.get(u, ()):
                nxt = pair_r.get(w)
                if nxt is None:
                    found = True
                elif dist[nxt] == _INF:
                    dist[nxt] = dist[u] + 1
                    q.append(nxt)
        return found

    def dfs(u: int) -> bool:
        for w in adjacency.get(u, ()):
            nxt = pair_r.get(w)
            if nxt is None or (dist[nxt] == dist[u] + 1 and dfs(nxt)):
                pair_l[u] = w
                pair_r[w] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in lefts:
            if u not in pair_l:
                dfs(u)
    return pair_l


def _crossing_adjacency(g: Graph, side_a, side_b) -> dict[int, tuple[int, ...]]:
    bmask = mask_of(side_b)
    return {a: tuple(bits(g.adj_mask[a] & bmask)) for a in side_a}


# -- public operations ------------------------------------------------------


def max_matching_size(g: Graph) -> int:
    if g.m == 0:
        return 0
    if _is_bipartite(g):
        side0 = _bipartite_side0(g)
        pair = hopcroft_karp(side0, _crossing_adjacency(g, side0, _others(g, side0)))
        return len(pair)
    return _mm_size_mask(g, g.full_mask)


def _is_bipartite(g: Graph) -> bool:
    return not any(
        isinstance(bipartition(g.induced(comp)), OddCycle)
        for comp in _component_tuples(g)
    )


def _component_tuples(g: Graph):
    from .graph import connected_components

    return connected_components(g)


def _bipartite_side0(g: Graph) -> tuple[int, ...]:
    side = []
    for comp in _component_tuples(g):
        sub = g.induced(comp)
        res = bipartition(sub)
        a, _ = res
        side.extend(comp[i] for i in a)
    return tuple(sorted(side))


def _others(g: Graph, side) -> tuple[int, ...]:
    s = set(side)
    return tuple(v for v in range(g.n) if v not in s)


def max_matching(g: Graph) -> Matching:
    """A maximum matching, canonicalized to the lexicographically smallest
    sorted pair list among all maximum matchings (deterministic certificates).
    """
    target = max_matching_size(g)
    chosen: list[tuple[int, int]] = []
    used = 0
    if target == 0:
        return ()
    for u, v in g.edges:
        if used >> u & 1 or used >> v & 1:
            continue
        rest = g.full_mask & ~used & ~(1 << u) & ~(1 << v)
        if len(chosen) + 1 + _mm_size_mask(g, rest) == target:
            chosen.append((u, v))
            used |= (1 << u) | (1 << v)
            if len(chosen) == target:
                break
    return tuple(chosen)


def exhaustive_max_matching_size(g: Graph) -> int:
    """Independent oracle: subset DP over vertex masks (small graphs only)."""
    if g.n > 22:
        raise PreconditionError("exhaustive matching oracle capped at 22 vertices")
    adj = g.adj_mask
    memo = g._memo.setdefault("mm_dp", {})

    def rec(mask: int) -> int:
        if mask == 0:
            return 0
        got = memo.get(mask)
        if got is not None:
            return got
        v = (mask & -mask).bit_length() - 1
        best = rec(mask ^ (1 << v))  # leave v unmatched
        nb = adj[v] & mask
        for w in bits(nb):
            best = max(best, 1 + rec(mask ^ (1 << v) ^ (1 << w)))
        memo[mask] = best
        return best

    return rec(g.full_mask)


def perfect_matching_through_edge(g: Graph, side_a, side_b, e) -> Matching | None:
    """Perfect matching of the bipartite subgraph between the sides that
    contains the edge ``e``, or ``None``.

    Implemented by deleting e's endpoints, matching the rest, re-adding e.
    """
    sa, sb = set(side_a), set(side_b)
    if sa & sb:
        raise PreconditionError("sides must be disjoint")
    if len(sa) != len(sb):
        raise PreconditionError("sides must have equal size")
    for side in (side_a, side_b):
        smask = mask_of(side)
        for v in side:
            if g.adj_mask[v] & smask:
                raise PreconditionError("each side must be an independent set")
    a, b = e
    if a in sb and b in sa:
        a, b = b, a
    if a not in sa or b not in sb:
        raise PreconditionError("edge must cross the bipartition")
    if not g.has_edge(a, b):
        raise PreconditionError(f"{g.labels[a]} {g.labels[b]} is not an edge")
    rest_a = [x for x in side_a if x != a]
    rest_b = [x for x in side_b if x != b]
    adj = _crossing_adjacency(g, rest_a, rest_b)
    pair = hopcroft_karp(rest_a, adj)
    if len(pair) != len(rest_a):
        return None
    return canonical_matching(list(pair.items()) + [(a, b)])


@dataclass(frozen=True)
class HallWitness:
    """A subset of the source side violating (or tight against) Hall's condition."""

    violator: tuple[int, ...]
    neighborhood: tuple[int, ...]
    kind: str  # "deficient" (|N(X)| < |X|) or "tight" (|N(X)| = |X|, X proper)


def _check_hall_preconditions(g: Graph, sources, targets) -> None:
    smask, tmask = mask_of(sources), mask_of(targets)
    if smask & tmask:
        raise PreconditionError("sources and targets must be disjoint")
    for s in sources:
        if g.adj_mask[s] & smask:
            raise PreconditionError("sources must be an independent set")
        if g.adj_mask[s] & ~tmask:
            raise PreconditionError("all neighbors of sources must lie in targets")


def hall_check(g: Graph, sources, targets):
    """Either a matching saturating ``sources`` into ``targets``, or an
    inclusion-wise minimal deficient :class:`HallWitness`.
    """
    sources = tuple(sorted(sources))
    targets = tuple(sorted(targets))
    _check_hall_preconditions(g, sources, targets)
    adj = _crossing_adjacency(g, sources, targets)
    pair = hopcroft_karp(sources, adj)
    if len(pair) == len(sources):
        return canonical_matching(pair.items())
    pair_r = {w: u for u, w in pair.items()}
    free = next(u for u in sources if u not in pair)
    # vertices reachable from a free source along alternating paths form a
    # deficient set (its whole neighborhood is matched back into it)
    reach_s = {free}
    reach_t: set[int] = set()
    queue = [free]
    while queue:
        u = queue.pop(0)
        for w in adj[u]:
            if w in reach_t:
                continue
            reach_t.add(w)
            back = pair_r.get(w)
            if back is not None and back not in reach_s:
                reach_s.add(back)
                queue.append(back)
    violator = set(reach_s)

    def nbhd(xs) -> set[int]:
        out: set[int] = set()
        for x in xs:
            out.update(adj[x])
        return out

    # greedy element removal down to an inclusion-wise minimal violator;
    # removing larger indices first keeps the smallest labels in the witness
    changed = True
    while changed:
        changed = False
        for x in sorted(violator, reverse=True):
            cand = violator - {x}
            if cand and len(nbhd(cand)) < len(cand):
                violator = cand
                changed = True
    return HallWitness(
        violator=tuple(sorted(violator)),
        neighborhood=tuple(sorted(nbhd(violator))),
        kind="deficient",
    )


def proper_tight_set(g: Graph, sources, targets) -> HallWitness | None:
    """A non-empty proper subset X of ``sources`` with |N(X)| = |X|, or None.

    Requires that a matching saturating ``sources`` exists (tight-set mode of
    the Hall machinery).
    """
    sources = tuple(sorted(sources))
    targets = tuple(sorted(targets))
    _check_hall_preconditions(g, sources, targets)
    adj = _crossing_adjacency(g, sources, targets)
    pair = hopcroft_karp(sources, adj)
    if len(pair) != len(sources):
        raise PreconditionError("tight-set mode requires a saturating matching")
    pair_r = {w: u for u, w in pair.items()}
    src_set = set(sources)
    for a in sources:
        # close {a} under "neighbor's matched partner"; the closure is the
        # minimal tight set containing a unless it escapes via a free target
        closure = {a}
        queue = [a]
        dead = False
        while queue and not dead:
            u = queue.pop(0)
            for w in adj[u]:
                back = pair_r.get(w)
                if back is None:
                    dead = True
                    break
                if back not in closure:
                    closure.add(back)
                    queue.append(back)
        if dead or closure == src_set:
            continue
        nb: set[int] = set()
        for x in closure:
            nb.update(adj[x])
        return HallWitness(
            violator=tuple(sorted(closure)),
            neighborhood=tuple(sorted(nb)),
            kind="tight",
        )
    return None


@dataclass(frozen=True)
class ElementaryWitness:
    """Evidence that a connected bipartite graph is not elementary."""

    edge: tuple[int, int] | None = None  # an edge in no perfect matching
    tight_set: HallWitness | None = None
    deficiency: HallWitness | None = None


def is_elementary(g: Graph) -> tuple[bool, ElementaryWitness | None]:
    """True iff every edge of the connected bipartite graph ``g`` lies in some
    perfect matching (equivalently: its only minimum vertex covers are the two
    sides of the bipartition).
    """
    if not is_connected(g):
        raise PreconditionError("is_elementary requires a connected graph")
    res = bipartition(g)
    if isinstance(res, OddCycle):
        raise PreconditionError("is_elementary requires a bipartite graph")
    side_a, side_b = res
    if g.m == 0:
        # single vertex: vacuous; larger edgeless graphs cannot be connected
        return (False, ElementaryWitness()) if g.n > 1 else (True, None)
    if len(side_a) != len(side_b):
        hall = hall_check(g, side_a, tuple(sorted(set(range(g.n)) - set(side_a))))
        witness = hall if isinstance(hall, HallWitness) else None
        return False, ElementaryWitness(edge=g.edges[0], deficiency=witness)
    saturating = hall_check(g, side_a, side_b)
    if isinstance(saturating, HallWitness):
        return False, ElementaryWitness(edge=g.edges[0], deficiency=saturating)
    for e in g.edges:
        if perfect_matching_through_edge(g, side_a, side_b, e) is None:
            tight = proper_tight_set(g, side_a, side_b)
            return False, ElementaryWitness(edge=e, tight_set=tight)
    return True, None


def is_essentially_elementary(g: Graph) -> tuple[bool, ElementaryWitness | None]:
    """Every connected component elementary (components must be bipartite)."""
    from .graph import connected_components

    for comp in connected_components(g):
        ok, witness = is_elementary(g.induced(comp))
        if not ok:
            # translate the witness back to parent indices
            remap = dict(enumerate(comp))

            def tr(t):
                return tuple(remap[i] for i in t)

            edge = tuple(sorted(tr(witness.edge))) if witness.edge else None
            tight = (
                HallWitness(
                    tr(witness.tight_set.violator),
                    tr(witness.tight_set.neighborhood),
                    witness.tight_set.kind,
                )
                if witness.tight_set
                else None
            )
            defc = (
                HallWitness(
                    tr(witness.deficiency.violator),
                    tr(witness.deficiency.neighborhood),
                    witness.deficiency.kind,
                )
                if witness.deficiency
                else None
            )
            return False, ElementaryWitness(edge=edge, tight_set=tight, deficiency=defc)
    return True, None
