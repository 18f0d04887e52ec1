"""Second-Hamilton-cycle machinery with protected and desirable edges.

Given a Hamilton cycle, a small protected edge set E on it, and a graph G' of
desirable edges, we look for a different Hamilton cycle that keeps E, absorbs
at least one G'-edge, and differs only at a sparse switch set S of vertices:
the cycle minus S is left untouched.  S is drawn at random from the vertices
far from the protected region (each with probability 1/sqrt(n ln n)); a valid
draw is one that is cycle-independent and dominates everything outside the
protected region in G' minus the cycle.  Re-linking the fixed path system
through S is a complete constrained backtracking search; below a size cutoff
an exhaustive Hamilton search (protected edges forced, the old cycle
excluded) stands in when sampling fails.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

from .graphs import CycleCover, Graph, Params, bits_of, edge_key


class RewireError(ValueError):
    """A rewire request violates its invariants."""


@dataclass(frozen=True)
class RewireRequest:
    """Inputs for one rewiring attempt.

    ``graph`` hosts the cycle; ``desirable`` is a subgraph (edge set on the
    same vertices) whose edges we want to pull into the new cycle;
    ``protected`` lists cycle edges that must survive; ``bad`` holds vertices
    exempt from the degree requirement.
    """

    graph: Graph
    cycle: CycleCover
    protected: frozenset[tuple[int, int]]
    desirable: frozenset[tuple[int, int]]
    bad: frozenset[int] = frozenset()

    def protected_vertices(self) -> frozenset[int]:
        out = set()
        for u, v in self.protected:
            out.add(u)
            out.add(v)
        return frozenset(out)

    def blocked(self) -> frozenset[int]:
        """B' = bad vertices plus endpoints of protected edges."""
        return self.bad | self.protected_vertices()


@dataclass
class RewireResult:
    cycle: CycleCover
    switch_set: frozenset[int]
    absorbed: frozenset[tuple[int, int]]
    used_fallback: bool = False


def check_independent_dominating(g: Graph, cycle: CycleCover, s: Iterable[int]) -> bool:
    """True iff S is cycle-independent and dominates N_cycle(S) off the cycle.

    Cycle-independent: no two members consecutive on the cycle.  Domination:
    every cycle-neighbour of S has an S-neighbour through an edge of the
    graph that is not a cycle edge.
    """
    s = set(s)
    if not s:
        return True
    if not s <= set(range(g.n)):
        raise ValueError("switch set contains vertices outside the graph")
    cyc_edges = cycle.edge_set()
    boundary = set()
    for v in s:
        a, b = cycle.cycle_neighbors(v)
        if a in s or b in s:
            return False
        boundary.add(a)
        boundary.add(b)
    boundary -= s
    for w in boundary:
        if not any(
            g.has_edge(w, x) and edge_key(w, x) not in cyc_edges for x in s
        ):
            return False
    return True


def sample_switch_set(
    desirable_graph: Graph,
    cycle: CycleCover,
    blocked: Iterable[int],
    rng: random.Random,
    params: Optional[Params] = None,
) -> Optional[frozenset[int]]:
    """Draw a switch set from the vertices clear of the blocked region.

    Candidates A are the vertices outside blocked and its cycle
    neighbourhood; each lands in S independently with the sampling
    probability.  A draw is returned only if it is cycle-independent and
    dominates everything outside blocked in the desirable graph minus the
    cycle.  None after the retry budget.
    """
    params = params or Params()
    n = desirable_graph.n
    blocked = set(blocked)
    if len(blocked) >= n:
        raise RewireError("blocked set covers every vertex")
    candidates = _clear_candidates(cycle, blocked)
    if not candidates:
        return None
    targets = sorted(set(range(n)) - blocked)
    cyc_edges = cycle.edge_set()
    # desirable adjacency with cycle edges stripped
    off_bits = []
    for v in range(n):
        b = desirable_graph.neighbor_bits(v)
        for u in cycle.cycle_neighbors(v):
            b &= ~(1 << u)
        off_bits.append(b)
    # a target with no candidate neighbour can never be dominated
    cand_bits = bits_of(candidates)
    if any(not (off_bits[t] & cand_bits) for t in targets):
        return None
    p = params.sampling_probability(n)
    for _ in range(params.sample_retries):
        s = [v for v in candidates if rng.random() < p]
        if not s:
            continue
        s_bits = bits_of(s)
        independent = True
        for v in s:
            a, b = cycle.cycle_neighbors(v)
            if (s_bits >> a) & 1 or (s_bits >> b) & 1:
                independent = False
                break
        if not independent:
            continue
        if all(off_bits[t] & s_bits for t in targets):
            return frozenset(s)
    return None


def _clear_candidates(cycle: CycleCover, blocked: set[int]) -> list[int]:
    """Vertices outside the blocked set and its cycle neighbourhood."""
    near = set(blocked)
    for v in blocked:
        a, b = cycle.cycle_neighbors(v)
        near.add(a)
        near.add(b)
    return sorted(set(range(cycle.n)) - near)


def _segments(cycle: CycleCover, s: set[int]) -> list[list[int]]:
    """Maximal runs of non-S vertices in cyclic order (S is cycle-independent)."""
    assert cycle.num_components == 1
    seq = list(cycle.cycles[0])
    n = len(seq)
    positions = sorted(i for i, v in enumerate(seq) if v in s)
    segments = []
    for idx, p in enumerate(positions):
        q = positions[(idx + 1) % len(positions)]
        run = []
        i = (p + 1) % n
        while i != q:
            run.append(seq[i])
            i = (i + 1) % n
        if not run:
            raise RewireError("switch set is not cycle-independent")
        segments.append(run)
    return segments


def _relink(
    cycle: CycleCover,
    s: set[int],
    allowed_bits: list[int],
    budget: int,
) -> Optional[CycleCover]:
    """Complete search over re-insertions of S into the fixed path system.

    The new cycle must alternate the |S| paths (each in either direction)
    with the S vertices, every junction using an allowed edge.  The first
    arrangement whose edge set differs from the original cycle wins.
    """
    if len(s) < 2:
        return None
    segments = _segments(cycle, s)
    k = len(segments)
    original = cycle.edge_set()
    n = cycle.n
    nodes = [budget]

    anchor = segments[0]
    seg_used = [False] * k
    seg_used[0] = True
    s_sorted = sorted(s)

    def close(sequence: list[int]) -> Optional[CycleCover]:
        edges = set()
        prev = sequence[-1]
        for v in sequence:
            edges.add(edge_key(prev, v))
            prev = v
        if frozenset(edges) == original:
            return None
        return CycleCover.from_edge_set(n, edges)

    def extend(seq: list[int], used_s: set[int]) -> Optional[CycleCover]:
        nodes[0] -= 1
        if nodes[0] < 0:
            return None
        end = seq[-1]
        remaining = [v for v in s_sorted if v not in used_s]
        if not any(not u for u in seg_used):
            # all segments placed: the single remaining S vertex closes the loop
            v = remaining[0]
            if (allowed_bits[end] >> v) & 1 and (allowed_bits[v] >> anchor[0]) & 1:
                return close(seq + [v])
            return None
        for v in remaining:
            if not (allowed_bits[end] >> v) & 1:
                continue
            for si in range(1, k):
                if seg_used[si]:
                    continue
                seg = segments[si]
                orientations = [seg] if len(seg) == 1 else [seg, seg[::-1]]
                for run in orientations:
                    if not (allowed_bits[v] >> run[0]) & 1:
                        continue
                    seg_used[si] = True
                    used_s.add(v)
                    found = extend(seq + [v] + run, used_s)
                    used_s.discard(v)
                    seg_used[si] = False
                    if found is not None:
                        return found
                    if nodes[0] < 0:
                        return None
        return None

    return extend(list(anchor), set())


def _exhaustive_second_cycle(
    n: int,
    allowed_bits: list[int],
    forced: frozenset[tuple[int, int]],
    original: frozenset[tuple[int, int]],
    budget: int,
) -> Optional[CycleCover]:
    """Backtracking Hamilton search with forced edges, skipping the original."""
    forced_at = [[] for _ in range(n)]
    for u, v in forced:
        forced_at[u].append(v)
        forced_at[v].append(u)
    if any(len(f) > 2 for f in forced_at):
        return None
    nodes = [budget]

    path = [0]
    on_path = 1  # bitmask

    def dfs() -> Optional[CycleCover]:
        nonlocal on_path
        nodes[0] -= 1
        if nodes[0] < 0:
            return None
        v = path[-1]
        at_start = len(path) == 1
        prev = -1 if at_start else path[-2]
        musts = forced_at[v] if at_start else [w for w in forced_at[v] if w != prev]
        if len(path) == n:
            # closing edge (v, 0): v's leftover forced edge must be it, and
            # the start's forced edges must be among its two cycle edges
            if (
                (allowed_bits[v] & 1)
                and all(w == 0 for w in musts)
                and all(w == path[1] or w == v for w in forced_at[0])
            ):
                edges = frozenset(
                    edge_key(path[i], path[(i + 1) % n]) for i in range(n)
                )
                if edges != original:
                    return CycleCover.from_edge_set(n, edges)
            return None
        if not at_start and len(musts) > 1:
            return None
        if musts:
            candidates = [w for w in sorted(musts) if not (on_path >> w) & 1]
        else:
            candidates = list(_bits_iter(allowed_bits[v] & ~on_path))
        for w in candidates:
            if not (allowed_bits[v] >> w) & 1:
                continue
            path.append(w)
            on_path |= 1 << w
            found = dfs()
            path.pop()
            on_path &= ~(1 << w)
            if found is not None:
                return found
            if nodes[0] < 0:
                return None
        return None

    return dfs()


def _bits_iter(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def second_hamilton_cycle(
    req: RewireRequest,
    rng: random.Random,
    params: Optional[Params] = None,
) -> Optional[RewireResult]:
    """A different Hamilton cycle keeping the protected edges.

    On success the result also absorbs at least one desirable off-cycle edge
    and only touches edges incident to its switch set.  None when every
    sampled switch set fails and the instance is above the exhaustive cutoff.
    """
    params = params or Params()
    g = req.graph
    cycle = req.cycle
    n = g.n
    if cycle.num_components != 1 or cycle.n != n:
        raise RewireError("rewiring requires a Hamilton cycle of the host graph")
    cyc_edges = cycle.edge_set()
    if not req.protected <= cyc_edges:
        raise RewireError("protected edges must lie on the cycle")
    blocked = req.blocked()
    if len(blocked) >= n:
        raise RewireError("blocked set covers every vertex")
    # degree precondition on the desirable graph
    desirable = frozenset(
        edge_key(u, v) for u, v in req.desirable if g.has_edge(u, v)
    )
    deg = [0] * n
    for u, v in desirable:
        deg[u] += 1
        deg[v] += 1
    floor = params.thomassen_degree_floor
    if floor is None:
        floor = math.sqrt(n) * math.log(n) ** 2 + 3 * len(blocked) + 2
    else:
        warnings.warn(
            "rewire degree precondition overridden at desk scale",
            stacklevel=2,
        )
    short = [v for v in range(n) if v not in blocked and deg[v] < floor]
    if short and params.thomassen_degree_floor is None:
        raise RewireError(
            f"vertex {short[0]} has desirable degree {deg[short[0]]} < {floor:.1f}"
        )

    usable = desirable - cyc_edges
    if not usable:
        return None

    allowed_bits = [0] * n
    for u, v in desirable | cyc_edges:
        allowed_bits[u] |= 1 << v
        allowed_bits[v] |= 1 << u

    desirable_graph = Graph(n, desirable)
    for _ in range(max(1, params.sample_retries)):
        s = sample_switch_set(desirable_graph, cycle, blocked, rng, params)
        if s is None:
            break
        found = _relink(cycle, set(s), allowed_bits, params.rewire_node_budget)
        if found is not None:
            return _package(req, found, s, used_fallback=False)

    # Desk-scale phase: the full-domination draw above needs degrees around
    # sqrt(n) log^2 n to succeed, so at reachable sizes we instead seed one
    # usable edge into the switch set and pad with random extras.  The relink
    # search and the post-hoc checks carry correctness either way.
    clear = set(_clear_candidates(cycle, blocked))
    usable_sorted = sorted(usable)
    p_relax = min(0.3, max(params.sampling_probability(n), 6.0 / max(1, len(clear))))
    for r in range(max(1, params.sample_retries)):
        e = usable_sorted[r % len(usable_sorted)]
        s = _seeded_switch_set(cycle, e, clear, p_relax, rng)
        if s is None:
            continue
        found = _relink(cycle, s, allowed_bits, params.rewire_node_budget)
        if found is not None:
            return _package(req, found, s, used_fallback=False)

    if n <= params.exhaustive_cutoff:
        found = _exhaustive_second_cycle(
            n, allowed_bits, req.protected, cyc_edges, params.rewire_node_budget
        )
        if found is not None:
            changed = found.edge_set() ^ cyc_edges
            s_post = frozenset(v for e in changed for v in e)
            return _package(req, found, s_post, used_fallback=True)
    return None


def _seeded_switch_set(
    cycle: CycleCover,
    target_edge: tuple[int, int],
    clear: set[int],
    p_extra: float,
    rng: random.Random,
) -> Optional[set[int]]:
    """Switch set built around one usable edge (u, w): u itself plus a cycle
    neighbour of w, so the relink can route the edge; random extras pad it."""
    for a, b in (target_edge, target_edge[::-1]):
        if a not in clear:
            continue
        a_nbrs = set(cycle.cycle_neighbors(a))
        for x in cycle.cycle_neighbors(b):
            if x in clear and x != a and x not in a_nbrs:
                s = {a, x}
                for v in sorted(clear - s):
                    if rng.random() < p_extra:
                        na, nb = cycle.cycle_neighbors(v)
                        if v not in s and na not in s and nb not in s:
                            s.add(v)
                return s
    return None


def _package(req, new_cycle, switch_set, used_fallback):
    absorbed = frozenset(
        e for e in (new_cycle.edge_set() - req.cycle.edge_set())
    )
    if not req.protected <= new_cycle.edge_set():
        raise AssertionError("protected edge lost during rewiring")
    if not absorbed:
        raise AssertionError("rewiring produced the original cycle")
    return RewireResult(new_cycle, frozenset(switch_set), absorbed, used_fallback)
