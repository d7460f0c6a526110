"""
Kneser-type witnesses.

The graph is made d-regular by adding half-edges; its edges and half-edges form
the element universe E'.  The witness has every d-subset of E' as a vertex, two
subsets adjacent when they intersect, and v embeds as the set of its incident
elements.  Any permutation of E' acts as an automorphism, so a partial
automorphism extends once it is lifted to a permutation of E'.

The digraph variant splits each vertex into out- and in-elements and uses
ordered pairs of disjoint d-subsets, with (A1, A2) -> (B1, B2) iff A1 meets B2.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from common.errors import ConsistencyError, InputError
from common.search import MapLike, as_mapping
from common.structures import Digraph, Graph, Permutation, RuleGraph
from common.utils import EppaConfig, one_based, require_cap, resolve_config
from common.verify import Witness

logger = logging.getLogger('eppa')


class Element(NamedTuple):
    """'e' is an edge (a, b); 'h' a half-edge of a with token b; 'o'/'i' out/in half-edges of a digraph."""
    kind: str
    a: int
    b: int

    def describe(self) -> str:
        if self.kind in ('e', 'a'):
            return f"{self.kind}({one_based(self.a)},{one_based(self.b)})"
        return f"{self.kind}({one_based(self.a)}.{self.b})"


@dataclass(frozen=True)
class EdgeUniverse:
    """Edges in sorted order followed by the half-edges (v, t), t = 1 .. d - deg(v)."""
    d: int
    elements: Tuple[Element, ...]
    incident: Tuple[Tuple[int, ...], ...]

    @classmethod
    def for_graph(cls, graph: Graph, d: int) -> 'EdgeUniverse':
        if d < graph.max_degree():
            raise InputError(f"d={d} is below the maximum degree {graph.max_degree()}")
        elements = [Element('e', u, v) for u, v in graph.relation_tuples()]
        for v in range(graph.n):
            elements.extend(Element('h', v, t) for t in range(1, d - graph.degree(v) + 1))
        incident: List[List[int]] = [[] for _ in range(graph.n)]
        for idx, element in enumerate(elements):
            incident[element.a].append(idx)
            if element.kind == 'e':
                incident[element.b].append(idx)
        universe = cls(d, tuple(elements), tuple(tuple(sorted(i)) for i in incident))
        if len(universe.elements) != d * graph.n - len(graph.edges):
            raise ConsistencyError(f"edge universe has {len(universe.elements)} elements")
        return universe

    @cached_property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {(e.a, e.b): idx for idx, e in enumerate(self.elements) if e.kind == 'e'}

    def __len__(self) -> int:
        return len(self.elements)


def _mask(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def _bits(mask: int) -> Tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


class KneserGraph(RuleGraph):
    """All d-subsets of a ground set of size ``ground``, adjacent when they intersect."""

    def __init__(self, ground: int, d: int, element_names: Optional[Sequence[str]] = None):
        if d < 1 or ground < d:
            raise InputError(f"Kneser host needs 1 <= d <= ground, got d={d}, ground={ground}")
        self.ground = ground
        self.d = d
        self.n = comb(ground, d)
        self.element_names = tuple(element_names) if element_names else tuple(str(i) for i in range(ground))

    def __repr__(self) -> str:
        return f"KneserGraph(ground={self.ground}, d={self.d})"

    @cached_property
    def masks(self) -> Tuple[int, ...]:
        return tuple(_mask(c) for c in combinations(range(self.ground), self.d))

    @cached_property
    def rank(self) -> Dict[int, int]:
        return {mask: idx for idx, mask in enumerate(self.masks)}

    def index(self, subset: Sequence[int]) -> int:
        mask = _mask(subset)
        if len(set(subset)) != self.d or mask not in self.rank:
            raise InputError(f"{list(subset)} is not a {self.d}-subset of the ground set")
        return self.rank[mask]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and (self.masks[u] & self.masks[v]) != 0

    def label(self, v: int) -> str:
        return '{' + ', '.join(self.element_names[i] for i in _bits(self.masks[v])) + '}'

    def element_action(self, sigma: Sequence[int]) -> Permutation:
        """Vertex permutation induced by a permutation of the ground set."""
        return tuple(
            self.rank[_mask(sigma[i] for i in _bits(mask))] for mask in self.masks
        )

    def edge_count(self) -> int:
        # pairs of distinct d-subsets that intersect
        disjoint = comb(self.ground - self.d, self.d)
        return self.n * (self.n - 1 - disjoint) // 2


def _check_degree(d: int, max_degree: int, minimum: int) -> None:
    if d < max_degree:
        raise InputError(f"d={d} is below the maximum degree {max_degree}")
    if d < minimum:
        raise InputError(f"d must be at least {minimum}, got {d}")


def kneser_size_bound(n: int, m: int, d: int, complement_degree: Optional[int] = None) -> int:
    """C(dn - m, d), or the smaller of it and the complement-graph instantiation."""
    if d * n < m + d:
        raise InputError(f"kneser bound needs dn >= m + d, got n={n}, m={m}, d={d}")
    value = comb(d * n - m, d)
    if complement_degree is not None:
        m_complement = comb(n, 2) - m
        d_complement = max(2, complement_degree)
        if d_complement * n >= m_complement + d_complement:
            value = min(value, comb(d_complement * n - m_complement, d_complement))
    return value


def kneser_bound_for_graph(graph: Graph) -> Dict[str, int]:
    """Kneser bound for ``graph`` and for its complement, with d = max(2, max degree)."""
    n, m = graph.n, len(graph.edges)
    d = max(2, graph.max_degree())
    direct = kneser_size_bound(n, m, d) if d * n >= m + d else None
    complement_degree = max((n - 1 - graph.degree(v) for v in range(n)), default=0)
    d_complement = max(2, complement_degree)
    m_complement = comb(n, 2) - m
    flipped = (comb(d_complement * n - m_complement, d_complement)
               if d_complement * n >= m_complement + d_complement else None)
    candidates = [v for v in (direct, flipped) if v is not None]
    return {
        'd': d,
        'direct': direct,
        'complement_d': d_complement,
        'complement': flipped,
        'best': min(candidates) if candidates else None,
    }


def _complete_sigma(sigma: Dict[int, int], size: int) -> Tuple[int, ...]:
    """Identity on elements untouched on both sides, then a sorted matching of the rest."""
    used = set(sigma.values())
    free_source = [e for e in range(size) if e not in sigma]
    free_target = [e for e in range(size) if e not in used]
    untouched = set(free_source) & set(free_target)
    for e in untouched:
        sigma[e] = e
    rest_source = [e for e in free_source if e not in untouched]
    rest_target = [e for e in free_target if e not in untouched]
    for x, y in zip(rest_source, rest_target):
        sigma[x] = y
    return tuple(sigma[e] for e in range(size))


def _match_leftovers(sigma: Dict[int, int], source: Sequence[int], target: Sequence[int], vertex: int) -> None:
    used = set(sigma.values())
    rest_source = [e for e in source if e not in sigma]
    rest_target = [e for e in target if e not in used]
    if len(rest_source) != len(rest_target):
        raise ConsistencyError(
            f"vertex {vertex}: {len(rest_source)} leftover elements against {len(rest_target)}"
        )
    for x, y in zip(rest_source, rest_target):
        sigma[x] = y


def kneser_element_permutation(base: Graph, universe: EdgeUniverse, partial: MapLike) -> Tuple[int, ...]:
    """Permutation of E' whose action on d-subsets extends the partial automorphism."""
    mapping = as_mapping(base, partial)
    sigma: Dict[int, int] = {}
    for (u, v), idx in universe.edge_index.items():
        if u in mapping and v in mapping:
            image = tuple(sorted((mapping[u], mapping[v])))
            sigma[idx] = universe.edge_index[image]
    for v in sorted(mapping):
        _match_leftovers(sigma, universe.incident[v], universe.incident[mapping[v]], v)
    return _complete_sigma(sigma, len(universe))


def extend_in_kneser_witness(base: Graph, universe: EdgeUniverse, host: KneserGraph,
                             partial: MapLike) -> Permutation:
    return host.element_action(kneser_element_permutation(base, universe, partial))


def build_kneser_witness(base: Graph, d: Optional[int] = None, config: Optional[EppaConfig] = None) -> Witness:
    cfg = resolve_config(config)
    d = max(2, base.max_degree()) if d is None else d
    _check_degree(d, base.max_degree(), 2)
    size = d * base.n - len(base.edges)
    if size < d:
        raise InputError(f"only {size} elements for d={d}")
    require_cap(comb(size, d), cfg.kneser_max_vertices, "Kneser witness size")

    universe = EdgeUniverse.for_graph(base, d)
    host = KneserGraph(len(universe), d, [e.describe() for e in universe.elements])
    embedding = tuple(host.index(universe.incident[v]) for v in range(base.n))
    logger.info(f"Built Kneser witness: d={d}, |E'|={len(universe)}, {host.n} vertices, {host.edge_count()} edges")

    def extender(partial):
        return extend_in_kneser_witness(base, universe, host, partial)

    return Witness(
        base=base,
        host=host,
        embedding=embedding,
        construction='kneser',
        extender=extender,
        labeler=host.label,
        metadata={'d': d, 'elements': len(universe)},
    )


@dataclass(frozen=True)
class ArcUniverse:
    """Arcs in sorted order, then out half-edges, then in half-edges; |X| = 2dn - m."""
    d: int
    elements: Tuple[Element, ...]
    outgoing: Tuple[Tuple[int, ...], ...]
    incoming: Tuple[Tuple[int, ...], ...]

    @classmethod
    def for_digraph(cls, digraph: Digraph, d: int) -> 'ArcUniverse':
        elements = [Element('a', u, v) for u, v in digraph.relation_tuples()]
        for v in range(digraph.n):
            elements.extend(Element('o', v, t) for t in range(1, d - len(digraph.out_neighbors[v]) + 1))
        for v in range(digraph.n):
            elements.extend(Element('i', v, t) for t in range(1, d - len(digraph.in_neighbors[v]) + 1))
        outgoing: List[List[int]] = [[] for _ in range(digraph.n)]
        incoming: List[List[int]] = [[] for _ in range(digraph.n)]
        for idx, element in enumerate(elements):
            if element.kind in ('a', 'o'):
                outgoing[element.a].append(idx)
            if element.kind == 'a':
                incoming[element.b].append(idx)
            if element.kind == 'i':
                incoming[element.a].append(idx)
        return cls(d, tuple(elements), tuple(map(tuple, outgoing)), tuple(map(tuple, incoming)))

    @cached_property
    def arc_index(self) -> Dict[Tuple[int, int], int]:
        return {(e.a, e.b): idx for idx, e in enumerate(self.elements) if e.kind == 'a'}

    def __len__(self) -> int:
        return len(self.elements)


class RelationalKneserHost:
    """Ordered pairs of disjoint d-subsets of X and the induced digraph."""

    def __init__(self, universe: ArcUniverse):
        self.universe = universe
        size, d = len(universe), universe.d
        pairs = []
        for first in combinations(range(size), d):
            rest = [e for e in range(size) if e not in first]
            for second in combinations(rest, d):
                pairs.append((_mask(first), _mask(second)))
        self.pairs: Tuple[Tuple[int, int], ...] = tuple(pairs)
        self.rank = {pair: idx for idx, pair in enumerate(self.pairs)}
        self.digraph = Digraph(len(pairs), frozenset(
            (x, y) for x, (out_x, _) in enumerate(pairs) for y, (_, in_y) in enumerate(pairs)
            if x != y and out_x & in_y
        ))

    def index(self, out_set: Sequence[int], in_set: Sequence[int]) -> int:
        return self.rank[(_mask(out_set), _mask(in_set))]

    def element_action(self, sigma: Sequence[int]) -> Permutation:
        return tuple(
            self.rank[(_mask(sigma[i] for i in _bits(a)), _mask(sigma[i] for i in _bits(b)))]
            for a, b in self.pairs
        )

    def label(self, v: int) -> str:
        names = [e.describe() for e in self.universe.elements]
        a, b = self.pairs[v]
        return '({' + ', '.join(names[i] for i in _bits(a)) + '}, {' + ', '.join(names[i] for i in _bits(b)) + '})'


def relational_size(n: int, m: int, d: int) -> int:
    size = 2 * d * n - m
    return comb(size, d) * comb(size - d, d)


def relational_element_permutation(base: Digraph, universe: ArcUniverse, partial: MapLike) -> Tuple[int, ...]:
    mapping = as_mapping(base, partial)
    sigma: Dict[int, int] = {}
    for (u, v), idx in universe.arc_index.items():
        if u in mapping and v in mapping:
            sigma[idx] = universe.arc_index[(mapping[u], mapping[v])]
    for v in sorted(mapping):
        _match_leftovers(sigma, universe.outgoing[v], universe.outgoing[mapping[v]], v)
        _match_leftovers(sigma, universe.incoming[v], universe.incoming[mapping[v]], v)
    return _complete_sigma(sigma, len(universe))


def extend_in_relational_kneser_witness(base: Digraph, host: RelationalKneserHost, partial: MapLike) -> Permutation:
    return host.element_action(relational_element_permutation(base, host.universe, partial))


def build_relational_kneser_witness(base: Digraph, d: Optional[int] = None,
                                    config: Optional[EppaConfig] = None) -> Witness:
    cfg = resolve_config(config)
    d = max(1, base.max_degree()) if d is None else d
    _check_degree(d, base.max_degree(), 1)
    require_cap(relational_size(base.n, len(base.arcs), d), cfg.kneser_max_vertices, "relational Kneser witness size")

    universe = ArcUniverse.for_digraph(base, d)
    host = RelationalKneserHost(universe)
    embedding = tuple(host.index(universe.outgoing[v], universe.incoming[v]) for v in range(base.n))
    logger.info(
        f"Built relational Kneser witness: d={d}, |X|={len(universe)}, "
        f"{host.digraph.n} vertices, {len(host.digraph.arcs)} arcs"
    )

    def extender(partial):
        return extend_in_relational_kneser_witness(base, host, partial)

    return Witness(
        base=base,
        host=host.digraph,
        embedding=embedding,
        construction='relational-kneser',
        extender=extender,
        labeler=host.label,
        metadata={'d': d, 'elements': len(universe)},
    )
