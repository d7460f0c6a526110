"""
Valuation-graph witness H_n.

Vertices are pairs (i, f) with i in [n] (the projection) and f a 0/1 valuation on
[n] minus {i}; (i, f) ~ (i', f') iff i != i' and f(i') != f'(i).  A vertex is stored
as the integer ``i * 2**(n-1) + word`` where bit ``j`` (``j - 1`` when ``j > i``)
of ``word`` holds f(j).  All indices are 0-based; labels print 1-based projections.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

from common.errors import ConsistencyError, InputError
from common.search import MapLike, as_mapping
from common.structures import Graph, PartialIso, Permutation, RuleGraph
from common.utils import EppaConfig, one_based, require_cap, resolve_config
from common.verify import Witness

logger = logging.getLogger('eppa')


class ValuationVertex(NamedTuple):
    projection: int
    word: int

    def value(self, j: int) -> int:
        return (self.word >> _position(self.projection, j)) & 1


def _position(i: int, j: int) -> int:
    return j if j < i else j - 1


class ValuationGraph(RuleGraph):
    """H_n with O(1) adjacency by bit extraction; the adjacency lists are built on first use."""

    def __init__(self, order: int):
        if order < 1:
            raise InputError(f"valuation graph needs n >= 1, got {order}")
        self.order = order
        self.words = 1 << (order - 1)
        self.n = order * self.words

    def __repr__(self) -> str:
        return f"ValuationGraph(order={self.order})"

    def vertex(self, index: int) -> ValuationVertex:
        return ValuationVertex(*divmod(index, self.words))

    def index(self, projection: int, valuation: Mapping[int, int]) -> int:
        """Vertex index of (projection, valuation); the valuation must cover [n] minus the projection."""
        if not 0 <= projection < self.order:
            raise InputError(f"projection {projection} outside 0..{self.order - 1}")
        expected = set(range(self.order)) - {projection}
        if set(valuation) != expected:
            raise InputError(f"valuation for projection {projection} must be defined on {sorted(expected)}")
        word = 0
        for j, bit in valuation.items():
            if bit not in (0, 1):
                raise InputError(f"valuation values must be 0 or 1, got {bit!r}")
            word |= bit << _position(projection, j)
        return projection * self.words + word

    def label(self, index: int) -> str:
        i, word = self.vertex(index)
        return f"({one_based(i)}, 0b{word:0{max(self.order - 1, 1)}b})"

    def has_edge(self, u: int, v: int) -> bool:
        i, fw = divmod(u, self.words)
        j, gw = divmod(v, self.words)
        if i == j:
            return False
        return ((fw >> _position(i, j)) & 1) != ((gw >> _position(j, i)) & 1)

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        by_bit: Dict[Tuple[int, int, int], List[int]] = {}
        for j in range(self.order):
            for i in range(self.order):
                if i == j:
                    continue
                for gw in range(self.words):
                    by_bit.setdefault((j, i, (gw >> _position(j, i)) & 1), []).append(j * self.words + gw)
        adjacency = []
        for u in range(self.n):
            i, fw = divmod(u, self.words)
            neighbours: List[int] = []
            for j in range(self.order):
                if j != i:
                    neighbours.extend(by_bit[(j, i, 1 - ((fw >> _position(i, j)) & 1))])
            adjacency.append(frozenset(neighbours))
        logger.debug(f"materialized adjacency of H_{self.order}")
        return tuple(adjacency)

    def edge_count(self) -> int:
        return self.n * (self.order - 1) * (self.words // 2) // 2 if self.order > 1 else 0


def _check_permutation(order: int, permutation: Sequence[int]) -> Tuple[int, ...]:
    perm = tuple(int(v) for v in permutation)
    if sorted(perm) != list(range(order)):
        raise InputError(f"{list(permutation)} is not a permutation of 0..{order - 1}")
    return perm


def _sorted_pair(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class SwitchAutomorphism:
    """theta_S after theta_pi on H_n.

    theta_pi sends (i, f) to (pi(i), f o pi^-1); theta_S then flips f'(j) for every
    switch pair {pi(i), j} in S.
    """
    order: int
    perm: Tuple[int, ...]
    switches: FrozenSet[Tuple[int, int]] = frozenset()

    def apply_vertex(self, vertex: ValuationVertex) -> ValuationVertex:
        i, word = vertex
        target = self.perm[i]
        new_word = 0
        for j in range(self.order):
            if j == i:
                continue
            bit = (word >> _position(i, j)) & 1
            image = self.perm[j]
            if _sorted_pair(target, image) in self.switches:
                bit ^= 1
            new_word |= bit << _position(target, image)
        return ValuationVertex(target, new_word)

    def apply(self, index: int) -> int:
        words = 1 << (self.order - 1)
        i, word = self.apply_vertex(ValuationVertex(*divmod(index, words)))
        return i * words + word

    def permutation(self) -> Permutation:
        return tuple(self.apply(v) for v in range(self.order << (self.order - 1)))

    def compose(self, first: 'SwitchAutomorphism') -> 'SwitchAutomorphism':
        """``self`` after ``first``: (pi2, S2) o (pi1, S1) = (pi2 pi1, S2 xor pi2(S1))."""
        if first.order != self.order:
            raise InputError(f"cannot compose maps of H_{self.order} and H_{first.order}")
        moved = frozenset(_sorted_pair(self.perm[a], self.perm[b]) for a, b in first.switches)
        return SwitchAutomorphism(
            self.order,
            tuple(self.perm[first.perm[v]] for v in range(self.order)),
            self.switches ^ moved,
        )

    def inverse(self) -> 'SwitchAutomorphism':
        back = [0] * self.order
        for v, w in enumerate(self.perm):
            back[w] = v
        return SwitchAutomorphism(
            self.order, tuple(back),
            frozenset(_sorted_pair(back[a], back[b]) for a, b in self.switches),
        )

    def is_automorphism_of(self, graph: ValuationGraph) -> bool:
        """Edge-set preservation checked pointwise on every edge."""
        images = self.permutation()
        if sorted(images) != list(range(graph.n)):
            return False
        return all(graph.has_edge(images[u], images[v]) for u in range(graph.n) for v in graph.adjacency[u] if u < v)

    def describe(self) -> str:
        perm = ' '.join(str(one_based(v)) for v in self.perm)
        switches = ', '.join(f"{{{one_based(a)},{one_based(b)}}}" for a, b in sorted(self.switches))
        return f"pi=[{perm}] S={{{switches}}}"


def theta_pi(order: int, permutation: Sequence[int]) -> SwitchAutomorphism:
    return SwitchAutomorphism(order, _check_permutation(order, permutation))


def theta_switch(order: int, a: int, b: int) -> SwitchAutomorphism:
    if a == b:
        raise InputError(f"a switch needs two distinct projections, got {a} twice")
    if not (0 <= a < order and 0 <= b < order):
        raise InputError(f"switch pair ({a}, {b}) outside 0..{order - 1}")
    return SwitchAutomorphism(order, tuple(range(order)), frozenset({_sorted_pair(a, b)}))


def build_valuation_graph(order: int, config: Optional[EppaConfig] = None) -> ValuationGraph:
    cfg = resolve_config(config)
    if order < 1:
        raise InputError(f"valuation witness needs n >= 1, got {order}")
    require_cap(order, cfg.valuation_max_n, "valuation witness order")
    return ValuationGraph(order)


def valuation_of(base: Graph, i: int, order: int) -> Dict[int, int]:
    """f_i(j) = 1 iff j < i and ij is an edge of ``base``."""
    return {j: 1 if j < i and j < base.n and i < base.n and base.has_edge(i, j) else 0
            for j in range(order) if j != i}


def embed_into_valuation_witness(base: Graph, host: ValuationGraph) -> Tuple[int, ...]:
    if base.n > host.order:
        raise InputError(f"a graph on {base.n} vertices does not fit into H_{host.order}")
    return tuple(host.index(i, valuation_of(base, i, host.order)) for i in range(base.n))


def canonical_completion(order: int, mapping: Mapping[int, int]) -> Tuple[int, ...]:
    """Extend a partial permutation of [order] to a permutation.

    When the domain equals the range the completion is the identity outside it;
    otherwise the free domain points map onto the free range points in increasing order.
    """
    perm = [-1] * order
    for x, y in mapping.items():
        perm[x] = y
    if set(mapping) == set(mapping.values()):
        for v in range(order):
            if perm[v] < 0:
                perm[v] = v
        return tuple(perm)
    free_domain = [v for v in range(order) if v not in mapping]
    free_range = sorted(set(range(order)) - set(mapping.values()))
    for x, y in zip(free_domain, free_range):
        perm[x] = y
    return tuple(perm)


def extend_in_valuation_witness(base: Graph, host: ValuationGraph, partial: MapLike) -> SwitchAutomorphism:
    """Automorphism theta_S o theta_pi of H_n extending psi o p o psi^-1."""
    mapping = as_mapping(base, partial)
    if base.n > host.order:
        raise InputError(f"a graph on {base.n} vertices does not fit into H_{host.order}")
    order = host.order
    perm = canonical_completion(order, mapping)
    back = [0] * order
    for v, w in enumerate(perm):
        back[w] = v

    wanted: Dict[Tuple[int, int], int] = {}
    for i, pi in mapping.items():
        source = valuation_of(base, i, order)
        target = valuation_of(base, pi, order)
        for j in range(order):
            if j == pi:
                continue
            flip = 1 if source[back[j]] != target[j] else 0
            pair = _sorted_pair(pi, j)
            previous = wanted.setdefault(pair, flip)
            if previous != flip:
                raise ConsistencyError(
                    f"switch set conflict on pair {{{one_based(pair[0])},{one_based(pair[1])}}} "
                    f"while extending {dict(sorted(mapping.items()))}"
                )
    switches = frozenset(pair for pair, flip in wanted.items() if flip)
    return SwitchAutomorphism(order, perm, switches)


def make_valuation_extender(base: Graph, host: ValuationGraph) -> Callable[[PartialIso], Permutation]:
    def extender(partial: PartialIso) -> Permutation:
        return extend_in_valuation_witness(base, host, partial).permutation()
    return extender


def build_valuation_witness(order: int, base: Optional[Graph] = None,
                            config: Optional[EppaConfig] = None) -> Witness:
    """H_order as a witness for ``base`` (the empty graph when omitted) with the switch extender."""
    host = build_valuation_graph(order, config)
    base = base if base is not None else Graph(0)
    embedding = embed_into_valuation_witness(base, host)
    logger.info(f"Built valuation witness H_{order}: {host.n} vertices, {host.edge_count()} edges")
    return Witness(
        base=base,
        host=host,
        embedding=embedding,
        construction='valuation',
        extender=make_valuation_extender(base, host),
        labeler=host.label,
        metadata={'order': order},
    )


def valuation_generators(order: int) -> List[SwitchAutomorphism]:
    """theta_pi for a transposition and an n-cycle, plus every theta_{a,b}."""
    generators = []
    if order > 1:
        swap = list(range(order))
        swap[0], swap[1] = 1, 0
        generators.append(theta_pi(order, swap))
        generators.append(theta_pi(order, [(v + 1) % order for v in range(order)]))
    generators.extend(theta_switch(order, a, b) for a, b in combinations(range(order), 2))
    return generators


def valuation_orbit(order: int, start: int = 0) -> Set[int]:
    """Orbit of ``start`` under the group generated by ``valuation_generators``."""
    generators = valuation_generators(order)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for g in generators:
            w = g.apply(v)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen
