"""Instance generators and exhaustive small-n oracles.

The planted model supplies the solver's hypothesis (a known 2-factor) by
construction.  The two counterexample families are the ones with explicit
recipes: disjoint triangles feeding a complete bipartite block (no 2-factor
has fewer cycles), and two cliques joined by a matching of size two.  The
oracles enumerate 2-regular spanning subgraphs exactly, so they are capped at
14 vertices.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .graphs import CycleCover, Graph, edge_key

ORACLE_CAP = 14  # exhaustive enumeration stays under a minute up to here
BRUTE_CAP = 12


@dataclass(frozen=True)
class InstanceSpec:
    model: str
    n: int
    seed: int
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return (
            json.dumps(
                {
                    "model": self.model,
                    "n": self.n,
                    "seed": self.seed,
                    "params": self.params,
                },
                sort_keys=True,
                indent=2,
            )
            + "\n"
        )


def gen_planted(n: int, p: float, seed: int) -> tuple[Graph, CycleCover]:
    """Hamilton cycle on a random permutation plus iid extra edges."""
    if n < 3:
        raise ValueError("planted instances need n >= 3")
    if not (0.0 <= p <= 1.0):
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    cycle_edges = {
        edge_key(perm[i], perm[(i + 1) % n]) for i in range(n)
    }
    edges = set(cycle_edges)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in cycle_edges and rng.random() < p:
                edges.add((u, v))
    return Graph(n, edges), CycleCover([perm])


def gen_cliques_matching(q: int, seed: int, allow_even: bool = False) -> Graph:
    """Two disjoint cliques of order q joined by a matching of size two.

    The family has odd q = 2k+1; arbitrary q >= 4 is allowed behind a flag.
    The bridge endpoints are drawn from the seed; the clique labels are
    canonical (first clique 0..q-1).
    """
    if q < 4:
        raise ValueError("clique order must be at least 4")
    if q % 2 == 0 and not allow_even:
        raise ValueError("the family uses odd clique order 2k+1; pass allow_even to override")
    rng = random.Random(seed)
    edges = []
    for base in (0, q):
        for u in range(base, base + q):
            for v in range(u + 1, base + q):
                edges.append((u, v))
    a1, a2 = rng.sample(range(q), 2)
    b1, b2 = rng.sample(range(q, 2 * q), 2)
    edges.append(edge_key(a1, b1))
    edges.append(edge_key(a2, b2))
    return Graph(2 * q, edges)


def gen_triangles_biclique(k: int, m: int, seed: int) -> tuple[Graph, CycleCover]:
    """k-1 disjoint triangles, a K_{m,m}, and all triangle-to-A edges.

    The returned cover (the triangles plus a Hamilton cycle of the bipartite
    block) has exactly k components; the graph has no 2-factor with fewer.
    Labels are shuffled by the seed.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    if m < 3:
        raise ValueError("need m >= 3 for the bipartite block to have a Hamilton cycle")
    n = 3 * (k - 1) + 2 * m
    rng = random.Random(seed)
    relabel = list(range(n))
    rng.shuffle(relabel)
    tri_base = [(3 * t, 3 * t + 1, 3 * t + 2) for t in range(k - 1)]
    a_side = list(range(3 * (k - 1), 3 * (k - 1) + m))
    b_side = list(range(3 * (k - 1) + m, n))
    edges = set()
    for x, y, z in tri_base:
        edges.update({edge_key(x, y), edge_key(y, z), edge_key(x, z)})
    for a in a_side:
        for b in b_side:
            edges.add(edge_key(a, b))
    for t in tri_base:
        for v in t:
            for a in a_side:
                edges.add(edge_key(v, a))
    bip_cycle = []
    for i in range(m):
        bip_cycle.append(a_side[i])
        bip_cycle.append(b_side[i])
    cycles = [list(t) for t in tri_base] + [bip_cycle]
    edges = {edge_key(relabel[u], relabel[v]) for u, v in edges}
    cycles = [[relabel[v] for v in cyc] for cyc in cycles]
    return Graph(n, edges), CycleCover(cycles, n)


# -- exhaustive oracles ------------------------------------------------------


def _cycle_masks(g: Graph) -> bytearray:
    """cyc[mask] == 1 iff the vertices of mask carry a spanning cycle."""
    n = g.n
    adj = [g.neighbor_bits(v) for v in range(n)]
    full = 1 << n
    paths = [0] * full  # endpoint bitmask of paths from lowbit(mask) over mask
    cyc = bytearray(full)
    for v in range(n):
        paths[1 << v] = 1 << v
    for mask in range(1, full):
        ends = paths[mask]
        if not ends:
            continue
        low = mask & -mask
        start = low.bit_length() - 1
        if mask.bit_count() >= 3 and ends & adj[start]:
            cyc[mask] = 1
        above_start = ~((low << 1) - 1)
        e = ends
        while e:
            vb = e & -e
            e ^= vb
            v = vb.bit_length() - 1
            ext = adj[v] & ~mask & above_start
            while ext:
                ub = ext & -ext
                ext ^= ub
                paths[mask | ub] |= ub
    return cyc


def oracle_component_counts(g: Graph) -> frozenset[int]:
    """All component counts realized by 2-factors of g (exact, n <= 14)."""
    if g.n > ORACLE_CAP:
        raise ValueError(f"exhaustive oracle capped at n <= {ORACLE_CAP}")
    if g.n == 0:
        return frozenset({0})
    cyc = _cycle_masks(g)
    full = 1 << g.n
    counts = [0] * full  # bit c set: mask partitions into c cycles
    counts[0] = 1
    for mask in range(1, full):
        low = mask & -mask
        rest = mask ^ low
        acc = 0
        sub = rest
        while True:
            piece = sub | low
            if cyc[piece]:
                prev = counts[mask ^ piece]
                if prev:
                    acc |= prev << 1
            if sub == 0:
                break
            sub = (sub - 1) & rest
        counts[mask] = acc
    final = counts[full - 1]
    return frozenset(c for c in range(g.n + 1) if (final >> c) & 1)


def oracle_exists_k_factor(g: Graph, k: int) -> bool:
    """True iff g has a spanning 2-regular subgraph with exactly k cycles."""
    return k in oracle_component_counts(g)


def count_implanted_bruteforce(g: Graph, cover: CycleCover) -> int:
    """Exact implanted-C4 count by scanning ordered vertex quadruples."""
    if g.n > BRUTE_CAP:
        raise ValueError(f"brute-force count capped at n <= {BRUTE_CAP}")
    cov = cover.edge_set()
    n = g.n
    count = 0
    for a in range(n):
        for b in range(n):
            if b == a or edge_key(a, b) not in cov:
                continue
            for c in range(n):
                if c in (a, b) or not g.has_edge(b, c):
                    continue
                if edge_key(b, c) in cov:
                    continue
                for d in range(n):
                    if d in (a, b, c):
                        continue
                    if edge_key(c, d) not in cov:
                        continue
                    if not g.has_edge(d, a) or edge_key(d, a) in cov:
                        continue
                    count += 1
    # each C4 appears once per cover edge per direction
    assert count % 4 == 0
    return count // 4
