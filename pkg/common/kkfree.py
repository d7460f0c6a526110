"""
K_k-free witnesses built on top of a valuation witness H_0.

Every vertex u of H_0 is blown up into pairs (u, chi) where chi assigns a value in
1..k-1 to each K_k-copy of H_0 through u.  Two pairs are adjacent when their
bases are adjacent in H_0 and they disagree on every shared K_k-copy, so no K_k
survives.
"""

import logging
from functools import cached_property
from math import comb
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from common.errors import ConsistencyError, InputError
from common.structures import Graph, RuleGraph
from common.utils import EppaConfig, require_cap, resolve_config
from common.valuation import ValuationGraph, build_valuation_graph, embed_into_valuation_witness
from common.verify import Witness

logger = logging.getLogger('eppa')


def clique_number(graph) -> int:
    return max((len(c) for c in nx.find_cliques(graph.to_networkx())), default=0)


def kk_copies(graph, k: int) -> List[Tuple[int, ...]]:
    """All vertex sets inducing K_k, sorted."""
    copies = []
    for clique in nx.enumerate_all_cliques(graph.to_networkx()):
        if len(clique) > k:
            break
        if len(clique) == k:
            copies.append(tuple(sorted(clique)))
    return sorted(copies)


class KkFreeGraph(RuleGraph):
    """Pairs (u, chi) over H_0; blocks are laid out by u, chi in lexicographic order."""

    def __init__(self, base: ValuationGraph, k: int, cliques: Sequence[Tuple[int, ...]]):
        self.base = base
        self.k = k
        self.cliques = tuple(cliques)
        through: List[List[int]] = [[] for _ in range(base.n)]
        for idx, clique in enumerate(self.cliques):
            for u in clique:
                through[u].append(idx)
        self.through: Tuple[Tuple[int, ...], ...] = tuple(tuple(t) for t in through)
        offsets = [0]
        for u in range(base.n):
            offsets.append(offsets[-1] + (k - 1) ** len(self.through[u]))
        self.offsets = tuple(offsets)
        self.n = offsets[-1]

    def __repr__(self) -> str:
        return f"KkFreeGraph(k={self.k}, base={self.base!r})"

    def block(self, u: int) -> range:
        return range(self.offsets[u], self.offsets[u + 1])

    def decode(self, x: int) -> Tuple[int, Dict[int, int]]:
        """Vertex index -> (base vertex, clique index -> value)."""
        if not 0 <= x < self.n:
            raise InputError(f"vertex {x} outside 0..{self.n - 1}")
        lo, hi = 0, self.base.n
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.offsets[mid] <= x:
                lo = mid
            else:
                hi = mid
        u = lo
        rank = x - self.offsets[u]
        values: Dict[int, int] = {}
        for clique in reversed(self.through[u]):
            rank, digit = divmod(rank, self.k - 1)
            values[clique] = digit + 1
        return u, values

    def index(self, u: int, values: Dict[int, int]) -> int:
        rank = 0
        for clique in self.through[u]:
            value = values[clique]
            if not 1 <= value < self.k:
                raise InputError(f"valuation value {value} outside 1..{self.k - 1}")
            rank = rank * (self.k - 1) + value - 1
        return self.offsets[u] + rank

    @cached_property
    def _decoded(self) -> Tuple[Tuple[int, Dict[int, int]], ...]:
        return tuple(self.decode(x) for x in range(self.n))

    def has_edge(self, x: int, y: int) -> bool:
        u, chi = self._decoded[x]
        v, xi = self._decoded[y]
        if not self.base.has_edge(u, v):
            return False
        return all(chi[c] != xi[c] for c in chi if c in xi)

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        adjacency = []
        for x in range(self.n):
            u = self._decoded[x][0]
            adjacency.append(frozenset(
                y for v in self.base.adjacency[u] for y in self.block(v) if self.has_edge(x, y)
            ))
        return tuple(adjacency)

    def label(self, x: int) -> str:
        u, chi = self._decoded[x]
        values = ','.join(str(chi[c]) for c in self.through[u])
        return f"({self.base.label(u)}, chi=({values}))"


def kkfree_size_bound(m: int, k: int) -> int:
    """m * (k-1)^C(m-1, k-1)."""
    if m < 0 or k < 2:
        raise InputError(f"invalid parameters m={m}, k={k}")
    return m * (k - 1) ** comb(m - 1, k - 1) if m > 0 else 0


def build_kkfree_witness(base: Graph, k: int = 3, config: Optional[EppaConfig] = None) -> Witness:
    cfg = resolve_config(config)
    if k < 3:
        raise InputError(f"k must be at least 3, got {k}")
    if base.n < 1:
        raise InputError("K_k-free witness needs at least one vertex")
    if clique_number(base) >= k:
        raise InputError(f"the graph contains K_{k}")

    h0 = build_valuation_graph(base.n, cfg)
    psi0 = embed_into_valuation_witness(base, h0)
    cliques = kk_copies(h0, k)
    through_counts = [0] * h0.n
    for clique in cliques:
        for u in clique:
            through_counts[u] += 1
    require_cap(sum((k - 1) ** c for c in through_counts), cfg.kkfree_max_vertices, "K_k-free witness size")
    host = KkFreeGraph(h0, k, cliques)

    # per copy A, the image vertices in A get 1, 2, ... in increasing order
    assigned: Dict[int, Dict[int, int]] = {u: {} for u in psi0}
    for idx, clique in enumerate(cliques):
        inside = [u for u in clique if u in assigned]
        for value, u in enumerate(inside, start=1):
            assigned[u][idx] = value
    embedding = tuple(host.index(psi0[g], assigned[psi0[g]]) for g in range(base.n))

    if clique_number(host) >= k:
        raise ConsistencyError(f"K_{k}-free construction produced a K_{k}")
    logger.info(
        f"Built K_{k}-free witness over H_{base.n}: {len(cliques)} copies of K_{k}, "
        f"{host.n} vertices, {len(host.relation_tuples())} edges"
    )
    return Witness(
        base=base,
        host=host,
        embedding=embedding,
        construction='kkfree',
        labeler=host.label,
        metadata={'k': k, 'h0_vertices': h0.n, 'copies': len(cliques)},
    )
