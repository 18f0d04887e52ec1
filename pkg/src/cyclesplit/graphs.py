"""Immutable simple graphs, cycle covers (2-factors), and tuning knobs.

Vertices are dense integers ``0..n-1`` so cycle positions can be used for
modular arithmetic.  Adjacency is kept both as sorted tuples (public) and as
integer bitsets (fast intersections / membership in the hot loops).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Iterable, Optional, Sequence, Union


class GraphFormatError(ValueError):
    """Raised on malformed graph/cover files (carries the offending line)."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CoverError(ValueError):
    """Raised when a claimed cycle cover is not a valid 2-factor."""


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Normalize an edge to an ordered pair ``(min, max)``."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "_edges", "_adj", "_bits", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex out of range in edge ({u}, {v})")
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self.n = n
        self._m = m
        self._adj = tuple(tuple(sorted(s)) for s in adj)
        bits = []
        for s in adj:
            b = 0
            for v in s:
                b |= 1 << v
            bits.append(b)
        self._bits = tuple(bits)
        self._edges = None  # built lazily

    # -- queries ---------------------------------------------------------

    @property
    def m(self) -> int:
        return self._m

    def adjacency(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def neighbor_bits(self, v: int) -> int:
        return self._bits[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def min_degree(self) -> int:
        if self.n == 0:
            return 0
        return min(len(a) for a in self._adj)

    def has_edge(self, u: int, v: int) -> bool:
        return (self._bits[u] >> v) & 1 == 1

    def edge_set(self) -> frozenset[tuple[int, int]]:
        if self._edges is None:
            self._edges = frozenset(
                (u, v) for u in range(self.n) for v in self._adj[u] if u < v
            )
        return self._edges

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted ``(u, v)`` pairs with ``u < v``, lexicographic."""
        return sorted(self.edge_set())

    def with_extra_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        """New graph with ``extra`` edges added (duplicates ignored)."""
        es = set(self.edge_set())
        for u, v in extra:
            es.add(edge_key(u, v))
        return Graph(self.n, es)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edge_set() == other.edge_set()
        )

    def __hash__(self):
        return hash((self.n, self.edge_set()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self._m})"


# -- file formats ---------------------------------------------------------
#
# Graph file: first line "n m", then m lines "u v" with 0 <= u < v < n.
# Cover file: one cycle per line, vertices space-separated in cyclic order.


def load_graph(text: str) -> Graph:
    """Parse the edge-list format, reporting errors with line numbers."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise GraphFormatError("missing header 'n m'", 1)
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError("header must be 'n m'", 1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError("header must contain two integers", 1) from None
    if n < 0 or m < 0:
        raise GraphFormatError("n and m must be non-negative", 1)
    edges = []
    seen = set()
    lineno = 1
    for raw in lines[1:]:
        lineno += 1
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise GraphFormatError("edge line must be 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("edge endpoints must be integers", lineno) from None
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", lineno)
        if not (0 <= u < v < n):
            raise GraphFormatError(
                f"edge ({u}, {v}) violates 0 <= u < v < n = {n}", lineno
            )
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})", lineno)
        seen.add((u, v))
        edges.append((u, v))
    if len(edges) != m:
        raise GraphFormatError(
            f"header announced {m} edges but file has {len(edges)}", lineno
        )
    return Graph(n, edges)


def dump_graph(g: Graph) -> str:
    """Canonical serialization; ``load_graph(dump_graph(g))`` round-trips."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


class CycleCover:
    """A 2-factor stored as canonically ordered vertex cycles.

    Canonical form: each cycle is rotated to start at its smallest vertex and
    oriented toward the smaller of that vertex's two cycle neighbours; cycles
    are sorted by their starting vertex.  A Hamilton cycle is the 1-cycle case.
    """

    __slots__ = ("cycles", "locator", "n", "_edge_set")

    def __init__(self, cycles: Sequence[Sequence[int]], n: Optional[int] = None):
        canon = []
        for cyc in cycles:
            cyc = list(cyc)
            if len(cyc) < 3:
                raise CoverError(f"cycle {cyc} shorter than 3")
            if len(set(cyc)) != len(cyc):
                raise CoverError(f"repeated vertex within cycle {cyc}")
            i = cyc.index(min(cyc))
            rot = cyc[i:] + cyc[:i]
            if rot[-1] < rot[1]:
                rot = [rot[0]] + rot[:0:-1]
            canon.append(tuple(rot))
        canon.sort(key=lambda c: c[0])
        locator = {}
        for ci, cyc in enumerate(canon):
            for pos, v in enumerate(cyc):
                if v < 0:
                    raise CoverError(f"negative vertex {v}")
                if v in locator:
                    raise CoverError(f"repeated vertex {v} across cycles")
                locator[v] = (ci, pos)
        count = len(locator)
        if n is None:
            n = (max(locator) + 1) if locator else 0
        missing = [v for v in range(n) if v not in locator]
        if missing or count != n:
            bad = missing[0] if missing else max(locator)
            raise CoverError(f"cover does not partition [0, {n}): vertex {bad}")
        self.cycles = tuple(canon)
        self.locator = locator
        self.n = n
        self._edge_set = None

    @classmethod
    def from_edge_set(cls, n: int, edges: Iterable[tuple[int, int]]) -> "CycleCover":
        """Reconstruct cycles from a 2-regular spanning edge set."""
        adj = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        for v in range(n):
            if len(adj[v]) != 2:
                raise CoverError(f"vertex {v} has degree {len(adj[v])}, expected 2")
        seen = [False] * n
        cycles = []
        for start in range(n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            prev, cur = start, adj[start][0]
            while cur != start:
                cyc.append(cur)
                seen[cur] = True
                a, b = adj[cur]
                prev, cur = cur, (b if a == prev else a)
            cycles.append(cyc)
        return cls(cycles, n)

    # -- queries ---------------------------------------------------------

    @property
    def num_components(self) -> int:
        return len(self.cycles)

    def cycle_edge(self, ci: int, pos: int) -> tuple[int, int]:
        """The cover edge at ``pos`` of cycle ``ci`` in cyclic orientation."""
        cyc = self.cycles[ci]
        return cyc[pos], cyc[(pos + 1) % len(cyc)]

    def iter_edges(self):
        for ci, cyc in enumerate(self.cycles):
            L = len(cyc)
            for pos in range(L):
                yield edge_key(cyc[pos], cyc[(pos + 1) % L])

    def edge_set(self) -> frozenset[tuple[int, int]]:
        if self._edge_set is None:
            self._edge_set = frozenset(self.iter_edges())
        return self._edge_set

    def cycle_neighbors(self, v: int) -> tuple[int, int]:
        ci, pos = self.locator[v]
        cyc = self.cycles[ci]
        L = len(cyc)
        return cyc[(pos - 1) % L], cyc[(pos + 1) % L]

    def __eq__(self, other) -> bool:
        return isinstance(other, CycleCover) and self.cycles == other.cycles

    def __hash__(self):
        return hash(self.cycles)

    def __repr__(self):
        return f"CycleCover({len(self.cycles)} cycles, n={self.n})"


def load_cover(text: str, n: Optional[int] = None) -> CycleCover:
    """Parse a cover file (one cycle per line)."""
    cycles = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            cycles.append([int(t) for t in raw.split()])
        except ValueError:
            raise GraphFormatError("cycle line must be integers", lineno) from None
    try:
        return CycleCover(cycles, n)
    except CoverError as exc:
        raise GraphFormatError(str(exc)) from exc


def dump_cover(cover: CycleCover) -> str:
    return "\n".join(" ".join(str(v) for v in cyc) for cyc in cover.cycles) + "\n"


def validate_cover(
    g: Graph, cover: Union[CycleCover, Sequence[Sequence[int]]]
) -> int:
    """Check that ``cover`` is a 2-factor of ``g``; return its cycle count.

    Raises :class:`CoverError` on: missing vertex, repeated vertex, a cover
    edge absent from ``g``, or a cycle shorter than 3.
    """
    if not isinstance(cover, CycleCover):
        cover = CycleCover(cover, g.n)
    if cover.n != g.n:
        raise CoverError(f"cover spans {cover.n} vertices, graph has {g.n}")
    for u, v in cover.iter_edges():
        if not g.has_edge(u, v):
            raise CoverError(f"cover edge ({u}, {v}) absent from graph")
    return cover.num_components


def common_neighborhood(g: Graph, vertices: Iterable[int]) -> frozenset[int]:
    """Intersection of the neighbourhoods of all given vertices."""
    vs = list(vertices)
    if not vs:
        raise ValueError("common_neighborhood requires a non-empty vertex set")
    acc = g.neighbor_bits(vs[0])
    for v in vs[1:]:
        acc &= g.neighbor_bits(v)
    return frozenset(_iter_bits(acc))


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(vertices: Iterable[int]) -> int:
    b = 0
    for v in vertices:
        b |= 1 << v
    return b


@dataclass(frozen=True)
class Params:
    """Desk-scale tuning knobs.

    The asymptotic hierarchy constants have no valid instantiation at sizes a
    machine can touch, so every threshold here is an absolute value; each
    field documents the asymptotic quantity it stands in for.
    """

    # partition: pairwise common-neighbourhood floor (stands for n^(1-zeta)+1)
    common_nbr_threshold: int = 3
    # M-set membership: witness floor (stands for n^(1-zeta))
    m_set_threshold: int = 2
    # ledger: tolerated uncovered residue |V_i \ M(E_ij)| (stands for n^(1-eta'))
    coverage_slack: int = 2
    # ledger: number of full sets per part (stands for n^(1-3eta'))
    ledger_t_cap: int = 8
    # ledger: edges per full/unsaturated set (stands for n^(2eta'))
    ledger_set_cap: int = 16
    # ledger: saturated-part overflow size (stands for n^(1-6eta'))
    overflow_cap: int = 16
    # ledger: per-edge M-coverage gain required to grow an overflow set
    # (stands for n^(1-2eta'))
    partial_growth: int = 1
    # ledger: per-edge induced-H gain for saturated parts (stands for n^(1-4eta'))
    h_yield: int = 1
    # enrichment goal (stands for n^(2-eta))
    h_edge_target: int = 50
    # helper-graph |N(u) ∩ T| floor; None derives ceil(|T|^(1-2*zeta))
    cover_common_floor: Optional[int] = None
    # hierarchy zeta stand-in used only for derived floors; configuration,
    # not ground truth
    zeta: float = 0.25
    # protected-set ceiling for enrichment (stands for n^(1-eta))
    protected_cap: int = 200
    # partition precondition delta(G) >= floor (warn-only at desk scale)
    min_degree_floor: int = 0
    # switch-set sampling probability; None derives 1/sqrt(n ln n)
    sample_prob: Optional[float] = None
    # rewire degree precondition; None keeps sqrt(n) log^2 n + 3|B'| + 2
    thomassen_degree_floor: Optional[int] = None
    # budgets
    sample_retries: int = 32
    rewire_node_budget: int = 200_000
    exhaustive_cutoff: int = 14
    enrich_rounds: int = 64
    switch_candidate_budget: int = 500_000
    enum_cap: int = 2_000_000
    seed: int = 0

    def __post_init__(self):
        positive = (
            "common_nbr_threshold",
            "m_set_threshold",
            "coverage_slack",
            "ledger_t_cap",
            "ledger_set_cap",
            "overflow_cap",
            "partial_growth",
            "h_yield",
            "h_edge_target",
            "protected_cap",
            "sample_retries",
            "rewire_node_budget",
            "exhaustive_cutoff",
            "enrich_rounds",
            "switch_candidate_budget",
            "enum_cap",
        )
        for name in positive:
            if getattr(self, name) < 1:
                raise ValueError(f"params.{name} must be positive")
        if not (0.0 < self.zeta < 0.5):
            raise ValueError("params.zeta must lie in (0, 0.5)")
        if self.sample_prob is not None and not (0.0 < self.sample_prob <= 1.0):
            raise ValueError("params.sample_prob must lie in (0, 1]")

    def cover_floor(self, t_size: int) -> int:
        """Floor on |N(u) ∩ T| used when building the covering helper graph."""
        if self.cover_common_floor is not None:
            return self.cover_common_floor
        if t_size <= 1:
            return 1
        return max(1, math.ceil(t_size ** (1.0 - 2.0 * self.zeta)))

    def sampling_probability(self, n: int) -> float:
        if self.sample_prob is not None:
            return self.sample_prob
        if n < 3:
            return 1.0
        return min(1.0, 1.0 / math.sqrt(n * math.log(n)))

    @classmethod
    def from_exponents(cls, n: int, eta_prime: float = 0.1, zeta: float = None, **kw) -> "Params":
        """Literal asymptotic instantiation (vacuous for small n; for study)."""
        if zeta is None:
            zeta = eta_prime / 6.0
        eta = 10.0 * eta_prime
        vals = dict(
            common_nbr_threshold=max(1, round(n ** (1 - zeta)) + 1),
            m_set_threshold=max(1, round(n ** (1 - zeta))),
            coverage_slack=max(1, round(n ** (1 - eta_prime))),
            ledger_t_cap=max(1, round(n ** (1 - 3 * eta_prime))),
            ledger_set_cap=max(1, round(n ** (2 * eta_prime))),
            overflow_cap=max(1, round(n ** (1 - 6 * eta_prime))),
            partial_growth=max(1, round(n ** (1 - 2 * eta_prime))),
            h_yield=max(1, round(n ** (1 - 4 * eta_prime))),
            h_edge_target=max(1, round(n ** (2 - eta))),
            protected_cap=max(1, round(n ** (1 - eta))),
            zeta=zeta,
        )
        vals.update(kw)
        return cls(**vals)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def with_updates(self, **kw) -> "Params":
        return replace(self, **kw)


_PARAM_TYPES = {f.name: f.type for f in fields(Params)}


def parse_params(text: str, base: Optional[Params] = None) -> Params:
    """Parse the flat ``key = value`` params format; unknown keys are errors."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise GraphFormatError("expected 'key = value'", lineno)
            key, val = parts
        key = key.strip()
        val = val.strip()
        if key not in _PARAM_TYPES:
            raise GraphFormatError(f"unknown params key '{key}'", lineno)
        values[key] = _parse_param_value(key, val, lineno)
    base = base or Params()
    return base.with_updates(**values)


def _parse_param_value(key: str, val: str, lineno: int):
    if val.lower() in ("none", "null"):
        return None
    try:
        if key in ("zeta", "sample_prob"):
            return float(val)
        return int(val)
    except ValueError:
        raise GraphFormatError(f"bad value for '{key}': {val!r}", lineno) from None
