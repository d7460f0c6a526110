"""
Lower bounds on EPPA numbers and the closed forms they are compared against.

The engine takes an independent set A and, for every distinct count k of
neighbours in A seen from outside A, adds C(|A|, k): every k-subset of A must be
realised as such a neighbourhood in any witness.
"""

import logging
from dataclasses import dataclass, field
from math import ceil, comb
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from common.errors import CapacityError, ConsistencyError, InputError
from common.homogeneous import is_subgraph_of_homogeneous
from common.structures import Graph, complement
from common.utils import EppaConfig, resolve_config

logger = logging.getLogger('eppa')

MODES = ('exact', 'greedy')


@dataclass(frozen=True)
class BoundCertificate:
    """value = |A| + sum C(|A|, k_i) over the witnesses (v_i, k_i)."""
    value: int
    independent_set: Tuple[int, ...]
    witnesses: Tuple[Tuple[int, int], ...] = ()
    complemented: bool = False

    def problems(self, graph: Graph) -> List[str]:
        """Reasons the certificate does not hold for ``graph``; empty when it does."""
        target = complement(graph) if self.complemented else graph
        chosen = set(self.independent_set)
        problems = []
        if len(chosen) != len(self.independent_set):
            problems.append("independent set has repeated vertices")
        if any(target.has_edge(u, v) for u in chosen for v in chosen if u < v):
            problems.append("independent set spans an edge")
        previous = -1
        for v, k in self.witnesses:
            if v in chosen:
                problems.append(f"witness vertex {v} lies in the independent set")
            if len(target.adjacency[v] & chosen) != k:
                problems.append(f"witness vertex {v} does not have exactly {k} neighbours in the set")
            if k <= previous:
                problems.append("neighbour counts are not strictly increasing")
            previous = k
        size = len(self.independent_set)
        if self.value != size + sum(comb(size, k) for _, k in self.witnesses):
            problems.append("value does not match the formula")
        return problems

    def is_valid(self, graph: Graph) -> bool:
        return not self.problems(graph)

    def validate(self, graph: Graph) -> None:
        problems = self.problems(graph)
        if problems:
            raise ConsistencyError(f"invalid bound certificate: {'; '.join(problems)}")

    def to_dict(self) -> Dict:
        return {
            'value': self.value,
            'independent_set': list(self.independent_set),
            'witnesses': [list(w) for w in self.witnesses],
            'complemented': self.complemented,
        }


def certificate_for(graph: Graph, independent: Sequence[int], complemented: bool = False) -> BoundCertificate:
    """Certificate from an independent set of ``graph``; one witness per distinct neighbour count."""
    chosen = frozenset(independent)
    first_with_count: Dict[int, int] = {}
    for v in range(graph.n):
        if v not in chosen:
            first_with_count.setdefault(len(graph.adjacency[v] & chosen), v)
    witnesses = tuple((v, k) for k, v in sorted(first_with_count.items()))
    size = len(chosen)
    value = size + sum(comb(size, k) for _, k in witnesses)
    return BoundCertificate(value, tuple(sorted(chosen)), witnesses, complemented)


def _maximal_independent_sets(graph: Graph) -> List[Tuple[int, ...]]:
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(complement(graph).to_networkx()))


def _greedy_independent_sets(graph: Graph) -> List[Tuple[int, ...]]:
    """One maximal independent set per seed vertex, growing by least degree then index."""
    found = []
    order = sorted(range(graph.n), key=lambda v: (graph.degree(v), v))
    for seed in range(graph.n):
        chosen = {seed}
        blocked = set(graph.adjacency[seed]) | {seed}
        for v in order:
            if v not in blocked:
                chosen.add(v)
                blocked |= graph.adjacency[v]
                blocked.add(v)
        found.append(tuple(sorted(chosen)))
    return found


def lower_bound_hrus(graph: Graph, mode: str = 'exact', config: Optional[EppaConfig] = None) -> BoundCertificate:
    """Best certificate over ``graph`` and its complement; ties keep the graph, then the least set."""
    cfg = resolve_config(config)
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; choose exact or greedy")
    if mode == 'exact' and graph.n > cfg.exact_bound_max_vertices:
        raise CapacityError(
            f"exact bound on {graph.n} vertices exceeds the cap of {cfg.exact_bound_max_vertices}; use greedy mode"
        )
    if graph.n == 0:
        return BoundCertificate(0, ())
    finder = _maximal_independent_sets if mode == 'exact' else _greedy_independent_sets

    best: Optional[BoundCertificate] = None
    for complemented, target in ((False, graph), (True, complement(graph))):
        for independent in finder(target):
            candidate = certificate_for(target, independent, complemented)
            if best is None or candidate.value > best.value or (
                    candidate.value == best.value and candidate.complemented == best.complemented
                    and candidate.independent_set < best.independent_set):
                best = candidate
    logger.debug(f"{mode} bound on {graph.n} vertices: {best.value}")
    return best


def build_half_star_graph(n: int) -> Graph:
    """Star centre n-1 joined to the first floor((n-1)/2) vertices of the independent part."""
    if n < 2:
        raise InputError(f"n must be at least 2, got {n}")
    return Graph(n, frozenset((v, n - 1) for v in range((n - 1) // 2)))


def build_half_graph(m: int) -> Graph:
    """Bipartite graph on [2m]: i < j adjacent iff j >= i + m."""
    if m < 1:
        raise InputError(f"m must be positive, got {m}")
    return Graph(2 * m, frozenset((i, j) for i in range(2 * m) for j in range(i + m, 2 * m)))


def eppa_bracket(n: int) -> Tuple[int, int]:
    """Lower C(n-1, floor((n-1)/2)) and upper n * 2^(n-1) on the largest EPPA number over n-vertex graphs."""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    return comb(n - 1, (n - 1) // 2), n * 2 ** (n - 1)


@dataclass(frozen=True)
class CycleBounds:
    n: int
    formula_lower: int
    formula_upper: int
    lower: int
    upper: int

    def to_dict(self) -> Dict[str, int]:
        return {'n': self.n, 'formula_lower': self.formula_lower, 'formula_upper': self.formula_upper,
                'lower': self.lower, 'upper': self.upper}


def cycle_bounds(n: int) -> CycleBounds:
    if n < 3:
        raise InputError(f"cycles need n >= 3, got {n}")
    lower = n * (n + 2) // 8 if n % 2 == 0 else (n - 1) * (n + 5) // 8
    upper = comb(n, 2)
    if n <= 5:
        # C_3, C_4 and C_5 are homogeneous
        return CycleBounds(n, lower, upper, n, n)
    return CycleBounds(n, lower, upper, lower, upper)


def max_independent_set_size(graph: Graph, vertices: Sequence[int]) -> int:
    if not vertices:
        return 0
    induced = graph.induced(vertices)
    return max(len(c) for c in nx.find_cliques(complement(induced).to_networkx()))


@dataclass
class DegreeReport:
    n: int
    max_degree: int
    neighbourhood_independence: int
    homogeneous_subgraph: bool
    bound: Optional[int] = None
    triangle_free_bound: Optional[int] = None
    informational: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'd': self.max_degree,
            'k': self.neighbourhood_independence,
            'homogeneous_subgraph': self.homogeneous_subgraph,
            'bound': self.bound,
            'triangle_free_bound': self.triangle_free_bound,
            'informational': self.informational,
            'notes': list(self.notes),
        }


def degree_bounds(graph: Graph) -> DegreeReport:
    """Degree-parameterized bound C(ceil(n/(d+1)), k), k the largest independent set inside a neighbourhood."""
    n = graph.n
    d = graph.max_degree()
    k = max((max_independent_set_size(graph, sorted(graph.adjacency[v])) for v in range(n)), default=0)
    verdict = is_subgraph_of_homogeneous(graph)
    report = DegreeReport(n, d, k, verdict.found)
    if verdict.found:
        report.notes.append(f"subgraph of the homogeneous graph {verdict.describe()}; no bound claimed")
        return report
    blocks = ceil(n / (d + 1)) if n else 0
    report.bound = comb(blocks, k)
    triangle_free = all(not (graph.adjacency[u] & graph.adjacency[v]) for u, v in graph.relation_tuples())
    if triangle_free:
        report.triangle_free_bound = comb(blocks, d)
    report.informational = ceil(5 * n / 4)
    report.notes.append("informational value ceil(5n/4) is reported, not verified")
    return report
