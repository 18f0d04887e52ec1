"""C4-switching: enumeration, application, and the split-one-more-cycle step.

An implanted C4 consists of two non-incident cover edges plus two chords of
the host graph that are not cover edges.  Toggling it (removing the cover
edges, adding the chords) changes the component count by +1, 0 or -1
depending on the chord configuration:

* same cycle, "parallel" chords  ``{x_a x_{b+1}, x_{a+1} x_b}`` -> split (+1)
* same cycle, "crossing" chords  ``{x_a x_b, x_{a+1} x_{b+1}}`` -> rewire (0)
* two cycles (either orientation)                               -> merge (-1)

A single parallel switch raises the component count, and so do two crossing
switches whose chords interleave on one cycle, or three aligned / three
anti-aligned cross-cycle switches in chain position.  ``increase_by_one``
searches those four configurations in order of increasing edge perturbation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graphs import CoverError, CycleCover, Graph, Params, edge_key
from .patterns import (
    find_decreasing_triple,
    find_increasing_triple,
    iter_decreasing_triples,
    iter_increasing_triples,
    iter_interleaved_pairs,
)


class SwitchKind(enum.Enum):
    SAME_CYCLE_PARALLEL = "same-cycle-parallel"
    SAME_CYCLE_CROSSING = "same-cycle-crossing"
    CROSS_CYCLE = "cross-cycle"

    @property
    def component_delta(self) -> int:
        if self is SwitchKind.SAME_CYCLE_PARALLEL:
            return 1
        if self is SwitchKind.SAME_CYCLE_CROSSING:
            return 0
        return -1


@dataclass(frozen=True)
class ImplantedC4:
    """Two non-incident cover edges plus the two off-cover chords joining them.

    ``edge_a`` and ``edge_b`` are (cycle index, position) pairs; ``aligned``
    records the chord orientation: True pairs first endpoint with first
    endpoint (``{u y, v z}``), False pairs first with second (``{u z, v y}``).
    """

    edge_a: tuple[int, int]
    edge_b: tuple[int, int]
    chords: tuple[tuple[int, int], tuple[int, int]]
    kind: SwitchKind
    aligned: bool

    def cover_edges(self, cover: CycleCover) -> tuple[tuple[int, int], tuple[int, int]]:
        u, v = cover.cycle_edge(*self.edge_a)
        y, z = cover.cycle_edge(*self.edge_b)
        return edge_key(u, v), edge_key(y, z)


@dataclass(frozen=True)
class SwitchPlan:
    """An ordered batch of implanted C4's to toggle at once."""

    switches: tuple[ImplantedC4, ...]
    predicted_delta: int
    predicted_sym_diff: int
    case: int


def _make_c4(cover: CycleCover, ea, eb, aligned: bool) -> ImplantedC4:
    u, v = cover.cycle_edge(*ea)
    y, z = cover.cycle_edge(*eb)
    if aligned:
        chords = (edge_key(u, y), edge_key(v, z))
    else:
        chords = (edge_key(u, z), edge_key(v, y))
    if ea[0] == eb[0]:
        kind = SwitchKind.SAME_CYCLE_CROSSING if aligned else SwitchKind.SAME_CYCLE_PARALLEL
    else:
        kind = SwitchKind.CROSS_CYCLE
    return ImplantedC4(ea, eb, tuple(sorted(chords)), kind, aligned)


def _orientation_valid(g: Graph, cover_prev, cover_next, u, v, y, z) -> bool:
    # chords {u y, v z}: in the graph and not cover edges
    if not ((g.neighbor_bits(u) >> y) & 1 and (g.neighbor_bits(v) >> z) & 1):
        return False
    if y == cover_prev[u] or y == cover_next[u]:
        return False
    if z == cover_prev[v] or z == cover_next[v]:
        return False
    return True


def _cover_arrays(cover: CycleCover):
    """Per-vertex cyclic predecessor/successor arrays."""
    prev = [0] * cover.n
    nxt = [0] * cover.n
    for cyc in cover.cycles:
        L = len(cyc)
        for pos, v in enumerate(cyc):
            nxt[v] = cyc[(pos + 1) % L]
            prev[v] = cyc[(pos - 1) % L]
    return prev, nxt


def _global_edges(cover: CycleCover):
    out = []
    for ci, cyc in enumerate(cover.cycles):
        for pos in range(len(cyc)):
            out.append((ci, pos))
    return out


def enumerate_implanted(
    g: Graph, cover: CycleCover, cap: Optional[int] = None
) -> list[ImplantedC4]:
    """All implanted C4's in lexicographic position order, truncated at cap.

    Both chord orientations of a cover-edge pair are reported separately.
    """
    validate_or_raise(g, cover)
    prev, nxt = _cover_arrays(cover)
    edges = _global_edges(cover)
    out: list[ImplantedC4] = []
    for ia, ea in enumerate(edges):
        u, v = cover.cycle_edge(*ea)
        for eb in edges[ia + 1 :]:
            y, z = cover.cycle_edge(*eb)
            if u == y or u == z or v == y or v == z:
                continue
            if _orientation_valid(g, prev, nxt, u, v, y, z):
                out.append(_make_c4(cover, ea, eb, aligned=True))
                if cap is not None and len(out) >= cap:
                    return out
            if _orientation_valid(g, prev, nxt, u, v, z, y):
                out.append(_make_c4(cover, ea, eb, aligned=False))
                if cap is not None and len(out) >= cap:
                    return out
    return out


def count_h_edges(g: Graph, cover: CycleCover) -> int:
    """Number of C4's implanted in the cover (one per chord orientation)."""
    prev, nxt = _cover_arrays(cover)
    bits = [g.neighbor_bits(v) for v in range(g.n)]
    heads = []
    tails = []
    for ci, cyc in enumerate(cover.cycles):
        L = len(cyc)
        for pos in range(L):
            heads.append(cyc[pos])
            tails.append(cyc[(pos + 1) % L])
    total = 0
    m = len(heads)
    for i in range(m):
        u = heads[i]
        v = tails[i]
        bu = bits[u]
        bv = bits[v]
        pu, nu = prev[u], nxt[u]
        pv, nv = prev[v], nxt[v]
        for j in range(i + 1, m):
            y = heads[j]
            z = tails[j]
            if y == u or y == v or z == u or z == v:
                continue
            if (
                (bu >> y) & 1
                and (bv >> z) & 1
                and y != pu
                and y != nu
                and z != pv
                and z != nv
            ):
                total += 1
            if (
                (bu >> z) & 1
                and (bv >> y) & 1
                and z != pu
                and z != nu
                and y != pv
                and y != nv
            ):
                total += 1
    return total


class HGraphView:
    """Lazy view of the auxiliary graph on cover edges.

    Cover edges are adjacent when some C4 of the host graph contains both and
    no other cover edge.  Degrees and induced counts are computed on demand
    and cached; the full adjacency is never materialized.
    """

    def __init__(self, g: Graph, cover: CycleCover):
        self.g = g
        self.cover = cover
        self._prev, self._next = _cover_arrays(cover)
        self._deg: dict[tuple[int, int], int] = {}
        self._total: Optional[int] = None

    def _orient(self, e: tuple[int, int]) -> tuple[int, int]:
        u, v = e
        if self._next[u] == v:
            return u, v
        if self._next[v] == u:
            return v, u
        raise CoverError(f"edge {e} is not on the cover")

    def c4_count(self, e: tuple[int, int], f: tuple[int, int]) -> int:
        """Number of implanted C4's containing both cover edges (0, 1 or 2)."""
        u, v = self._orient(e)
        y, z = self._orient(f)
        if u == y or u == z or v == y or v == z:
            return 0
        count = 0
        if _orientation_valid(self.g, self._prev, self._next, u, v, y, z):
            count += 1
        if _orientation_valid(self.g, self._prev, self._next, u, v, z, y):
            count += 1
        return count

    def adjacent(self, e, f) -> bool:
        return self.c4_count(edge_key(*e), edge_key(*f)) > 0

    def degree(self, e: tuple[int, int]) -> int:
        """Number of cover edges adjacent to ``e`` in the auxiliary graph."""
        e = edge_key(*e)
        if e in self._deg:
            return self._deg[e]
        d = sum(1 for f in self.cover.iter_edges() if f != e and self.adjacent(e, f))
        self._deg[e] = d
        return d

    def induced_edge_count(self, edges: Iterable[tuple[int, int]]) -> int:
        """Auxiliary-graph edges with both endpoints in the given cover edges."""
        es = sorted(set(edge_key(*e) for e in edges))
        total = 0
        for i, e in enumerate(es):
            for f in es[i + 1 :]:
                if self.adjacent(e, f):
                    total += 1
        return total

    def total_c4s(self) -> int:
        if self._total is None:
            self._total = count_h_edges(self.g, self.cover)
        return self._total


def validate_or_raise(g: Graph, cover: CycleCover) -> None:
    if cover.n != g.n:
        raise CoverError(f"cover spans {cover.n} vertices, graph has {g.n}")
    for u, v in cover.iter_edges():
        if not g.has_edge(u, v):
            raise CoverError(f"cover edge ({u}, {v}) absent from graph")


def _toggle(cover: CycleCover, switches: Sequence[ImplantedC4]) -> Optional[CycleCover]:
    """Apply a batch of switches by edge symmetric difference; None if degenerate."""
    removed = set()
    added = set()
    for c4 in switches:
        ea, eb = c4.cover_edges(cover)
        removed.add(ea)
        removed.add(eb)
        added.update(c4.chords)
    if len(removed) != 2 * len(switches) or len(added) != 2 * len(switches):
        return None
    edge_set = cover.edge_set()
    if not removed <= edge_set or added & edge_set:
        return None
    try:
        return CycleCover.from_edge_set(cover.n, (edge_set - removed) | added)
    except CoverError:
        return None


def apply_switch(cover: CycleCover, c4: ImplantedC4) -> CycleCover:
    """Toggle one implanted C4; the component delta follows its kind."""
    ci, pa = c4.edge_a
    cj, pb = c4.edge_b
    if ci >= len(cover.cycles) or pa >= len(cover.cycles[ci]):
        raise CoverError("switch references a cover edge position that does not exist")
    if cj >= len(cover.cycles) or pb >= len(cover.cycles[cj]):
        raise CoverError("switch references a cover edge position that does not exist")
    ea, eb = c4.cover_edges(cover)
    endpoints = set(ea) | set(eb)
    chord_points = set(c4.chords[0]) | set(c4.chords[1])
    if len(endpoints) != 4 or chord_points != endpoints:
        raise CoverError("switch chords do not match its cover-edge endpoints")
    result = _toggle(cover, [c4])
    if result is None:
        raise CoverError("switch is inconsistent with the cover")
    delta = result.num_components - cover.num_components
    if delta != c4.kind.component_delta:
        raise CoverError(
            f"switch of kind {c4.kind.value} produced component delta {delta}"
        )
    return result


# -- raising the component count by one ------------------------------------


def _find_parallel(g: Graph, cover: CycleCover) -> Optional[ImplantedC4]:
    """Lexicographically first same-cycle parallel implanted C4, lazily."""
    bits = [g.neighbor_bits(v) for v in range(g.n)]
    for ci, cyc in enumerate(cover.cycles):
        L = len(cyc)
        if L < 6:
            continue
        for a in range(L - 3):
            xa = cyc[a]
            xa1 = cyc[a + 1]
            ba = bits[xa]
            # spans outside [3, L-3] would turn a chord into a cover edge
            for b in range(a + 3, min(a + L - 2, L)):
                xb = cyc[b]
                xb1 = cyc[(b + 1) % L]
                if (ba >> xb1) & 1 and (bits[xa1] >> xb) & 1:
                    return _make_c4(cover, (ci, a), (ci, b), aligned=False)
    return None


def _bucket_c4s(c4s: Sequence[ImplantedC4]):
    same_crossing: dict[int, list] = {}
    cross_aligned: dict[tuple[int, int], list] = {}
    cross_anti: dict[tuple[int, int], list] = {}
    for c4 in c4s:
        ci, a = c4.edge_a
        cj, b = c4.edge_b
        if c4.kind is SwitchKind.SAME_CYCLE_CROSSING:
            same_crossing.setdefault(ci, []).append((a, b))
        elif c4.kind is SwitchKind.CROSS_CYCLE:
            bucket = cross_aligned if c4.aligned else cross_anti
            bucket.setdefault((ci, cj), []).append((a, b))
    return same_crossing, cross_aligned, cross_anti


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _try_plan(g, cover, switches, case):
    new = _toggle(cover, switches)
    if new is None:
        return None
    if new.num_components != cover.num_components + 1:
        return None
    sym = len(new.edge_set() ^ cover.edge_set())
    if sym != 4 * len(switches):
        return None
    try:
        validate_or_raise(g, new)
    except CoverError:
        return None
    plan = SwitchPlan(tuple(switches), 1, sym, case)
    return new, plan


def increase_by_one(
    g: Graph, cover: CycleCover, params: Optional[Params] = None
) -> Optional[tuple[CycleCover, SwitchPlan]]:
    """One induction step: a cover with one more component, |delta| <= 12."""
    result, _ = increase_by_one_with_diag(g, cover, params)
    return result


def increase_by_one_with_diag(
    g: Graph, cover: CycleCover, params: Optional[Params] = None
):
    params = params or Params()
    diag = {"case1": 0, "case2": 0, "case3": 0, "case4": 0, "budget_exhausted": False}
    budget = _Budget(params.switch_candidate_budget)

    # case 1: single parallel switch, 4 changed edges
    c4 = _find_parallel(g, cover)
    if c4 is not None:
        diag["case1"] = 1
        attempt = _try_plan(g, cover, [c4], case=1)
        if attempt is not None:
            return attempt, diag

    c4s = enumerate_implanted(g, cover, cap=params.enum_cap)
    same_crossing, cross_aligned, cross_anti = _bucket_c4s(c4s)

    # case 2: two interleaved crossing switches on one cycle, 8 changed edges
    for ci in sorted(same_crossing, key=lambda c: (-len(same_crossing[c]), c)):
        chords = same_crossing[ci]
        L = len(cover.cycles[ci])
        for ka, kb in iter_interleaved_pairs(chords):
            if not budget.spend():
                diag["budget_exhausted"] = True
                return None, diag
            h, j = chords[ka]
            i, m = chords[kb]
            # resulting cycle lengths (i-h)+(m-j) and (j-i)+(L-(m-h))
            if (i - h) + (m - j) < 3 or (j - i) + (L - (m - h)) < 3:
                continue
            diag["case2"] += 1
            switches = [
                _make_c4(cover, (ci, h), (ci, j), aligned=True),
                _make_c4(cover, (ci, i), (ci, m), aligned=True),
            ]
            attempt = _try_plan(g, cover, switches, case=2)
            if attempt is not None:
                return attempt, diag

    # case 3 / case 4: three cross-cycle switches, 12 changed edges
    for case, buckets, finder, itertriples in (
        (3, cross_aligned, find_increasing_triple, iter_increasing_triples),
        (4, cross_anti, find_decreasing_triple, iter_decreasing_triples),
    ):
        for key in sorted(buckets, key=lambda p: (-len(buckets[p]), p)):
            pairs = buckets[key]
            if finder(pairs) is None:
                continue
            ci, cj = key
            lx = len(cover.cycles[ci])
            ly = len(cover.cycles[cj])
            for ta, tb, tc in itertriples(pairs):
                if not budget.spend():
                    diag["budget_exhausted"] = True
                    return None, diag
                a1, b1 = pairs[ta]
                a2, b2 = pairs[tb]
                a3, b3 = pairs[tc]
                if case == 3:
                    g2 = (a2 - a1) + (b2 - b1)
                    g3 = (a3 - a2) + (b3 - b2)
                    gw = (lx - (a3 - a1)) + (ly - (b3 - b1))
                else:
                    g2 = (a2 - a1) + (b1 - b2)
                    g3 = (a3 - a2) + (b2 - b3)
                    gw = (lx - (a3 - a1)) + (ly - (b1 - b3))
                # the three new cycles have exactly these lengths
                if g2 < 3 or g3 < 3 or gw < 3:
                    continue
                diag[f"case{case}"] += 1
                aligned = case == 3
                switches = [
                    _make_c4(cover, (ci, a1), (cj, b1), aligned=aligned),
                    _make_c4(cover, (ci, a2), (cj, b2), aligned=aligned),
                    _make_c4(cover, (ci, a3), (cj, b3), aligned=aligned),
                ]
                attempt = _try_plan(g, cover, switches, case=case)
                if attempt is not None:
                    return attempt, diag

    return None, diag


@dataclass
class SplitOutcome:
    cover: Optional[CycleCover]
    plans: tuple[SwitchPlan, ...]
    sym_diff: int
    diagnostics: dict


def split_to_k(
    g: Graph, cover: CycleCover, k: int, params: Optional[Params] = None
) -> SplitOutcome:
    """Raise the component count to exactly k, <= 12 changed edges per step.

    Never merges: ``k`` below the current count is an error, as is
    ``k > n/3`` (a 2-factor needs at least three vertices per cycle).
    """
    params = params or Params()
    ell = cover.num_components
    if k < ell:
        raise ValueError(f"target k={k} below current {ell} cycles; merging is out of scope")
    if 3 * k > g.n:
        raise ValueError(f"k={k} infeasible: a 2-factor of {g.n} vertices has at most {g.n // 3} cycles")
    validate_or_raise(g, cover)
    start_edges = cover.edge_set()
    plans = []
    current = cover
    while current.num_components < k:
        step, diag = increase_by_one_with_diag(g, current, params)
        if step is None:
            return SplitOutcome(
                None,
                tuple(plans),
                len(current.edge_set() ^ start_edges),
                {"stopped_at": current.num_components, **diag},
            )
        current, plan = step
        plans.append(plan)
    sym = len(current.edge_set() ^ start_edges)
    if sym > 12 * (k - ell):
        raise AssertionError("edge budget 12(k - l) exceeded")
    return SplitOutcome(current, tuple(plans), sym, {"stopped_at": k})
