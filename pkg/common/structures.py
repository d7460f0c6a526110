"""
Finite relational structures on the vertex set {0..n-1}.

Graphs, digraphs and uniform hypergraphs share one small interface
(``Structure``) so that partial-automorphism enumeration, extension search,
canonical forms and witness verification are written once.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import ClassVar, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from common.errors import InputError

Relation = Tuple[int, ...]
Permutation = Tuple[int, ...]


class Structure(ABC):
    """Common interface of Graph, Digraph, Hypergraph and rule-based hosts."""

    kind: ClassVar[str] = 'structure'
    n: int

    @property
    @abstractmethod
    def arity(self) -> int:
        """Size of the relation tuples."""

    @abstractmethod
    def relation_key(self, vertices: Relation) -> int:
        """Isomorphism type of the tuple (edge bit, arc type or hyperedge bit)."""

    @abstractmethod
    def has_relation(self, vertices: Relation) -> bool:
        """True when the tuple is one of the stored relation tuples."""

    @abstractmethod
    def neighbors(self, v: int) -> FrozenSet[int]:
        """Vertices that share a relation tuple with ``v``."""

    @abstractmethod
    def relation_tuples(self) -> Tuple[Relation, ...]:
        """All relation tuples in sorted order."""

    @abstractmethod
    def relabel(self, permutation: Sequence[int]) -> 'Structure':
        """Return the structure with vertex v renamed to permutation[v]."""

    @abstractmethod
    def induced(self, vertices: Sequence[int]) -> 'Structure':
        """Induced substructure, relabelled by the sorted order of ``vertices``."""

    @abstractmethod
    def is_compatible(self, mapping: Mapping[int, int], x: int, y: int) -> bool:
        """Whether ``mapping`` extended by x -> y still preserves every relation among its domain."""

    @abstractmethod
    def refinement_items(self, v: int, colors: Sequence[int]) -> tuple:
        """Colour multiset seen from ``v``; drives colour refinement."""

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or v < 0 or v >= self.n:
            raise InputError(f"vertex {v!r} out of range for a {self.kind} on {self.n} vertices")

    def relation_count(self) -> int:
        return len(self.relation_tuples())

    def is_partial_iso(self, mapping: Mapping[int, int]) -> bool:
        """Injective, in range, and relation-preserving on every tuple inside the domain."""
        images = list(mapping.values())
        if len(set(images)) != len(images):
            return False
        if any(not 0 <= v < self.n for v in list(mapping) + images):
            return False
        domain = sorted(mapping)
        for tup in combinations(domain, self.arity):
            if self.relation_key(tup) != self.relation_key(tuple(mapping[v] for v in tup)):
                return False
        return True

    def is_automorphism(self, permutation: Sequence[int]) -> bool:
        if len(permutation) != self.n or sorted(permutation) != list(range(self.n)):
            return False
        return all(self.has_relation(tuple(permutation[v] for v in tup)) for tup in self.relation_tuples())


def _normalise_pair(u: int, v: int, n: int, what: str) -> Tuple[int, int]:
    if not (0 <= u < n and 0 <= v < n):
        raise InputError(f"{what} ({u}, {v}) has an endpoint outside 0..{n - 1}")
    if u == v:
        raise InputError(f"{what} ({u}, {v}) is a loop")
    return (u, v)


@dataclass(frozen=True)
class Graph(Structure):
    """Simple undirected graph; edges are stored as sorted pairs."""
    n: int
    edges: FrozenSet[Tuple[int, int]] = frozenset()

    kind: ClassVar[str] = 'graph'

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        normalised = set()
        for edge in self.edges:
            u, v = _normalise_pair(int(edge[0]), int(edge[1]), self.n, 'edge')
            normalised.add((min(u, v), max(u, v)))
        object.__setattr__(self, 'edges', frozenset(normalised))

    @property
    def arity(self) -> int:
        return 2

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def relation_key(self, vertices: Relation) -> int:
        return 1 if self.has_edge(vertices[0], vertices[1]) else 0

    def has_relation(self, vertices: Relation) -> bool:
        return self.has_edge(vertices[0], vertices[1])

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self.adjacency[v]

    @cached_property
    def _sorted_relations(self) -> Tuple[Relation, ...]:
        return tuple(sorted(self.edges))

    def relation_tuples(self) -> Tuple[Relation, ...]:
        return self._sorted_relations

    def relabel(self, permutation: Sequence[int]) -> 'Graph':
        return Graph(self.n, frozenset((permutation[u], permutation[v]) for u, v in self.edges))

    def induced(self, vertices: Sequence[int]) -> 'Graph':
        order = sorted(vertices)
        index = {v: i for i, v in enumerate(order)}
        return Graph(len(order), frozenset(
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        ))

    def is_compatible(self, mapping: Mapping[int, int], x: int, y: int) -> bool:
        adj_x, adj_y = self.adjacency[x], self.adjacency[y]
        return all((w in adj_x) == (fw in adj_y) for w, fw in mapping.items())

    def refinement_items(self, v: int, colors: Sequence[int]) -> tuple:
        return tuple(sorted(colors[w] for w in self.adjacency[v]))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(sorted(self.edges))
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> 'Graph':
        nodes = sorted(graph.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), frozenset((index[u], index[v]) for u, v in graph.edges()))


@dataclass(frozen=True)
class Digraph(Structure):
    """Loopless digraph; a pair may carry no arc, one arc, or both arcs."""
    n: int
    arcs: FrozenSet[Tuple[int, int]] = frozenset()

    kind: ClassVar[str] = 'digraph'

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        normalised = frozenset(_normalise_pair(int(a[0]), int(a[1]), self.n, 'arc') for a in self.arcs)
        object.__setattr__(self, 'arcs', normalised)

    @property
    def arity(self) -> int:
        return 2

    @cached_property
    def out_neighbors(self) -> Tuple[FrozenSet[int], ...]:
        out: List[set] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            out[u].add(v)
        return tuple(frozenset(a) for a in out)

    @cached_property
    def in_neighbors(self) -> Tuple[FrozenSet[int], ...]:
        into: List[set] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            into[v].add(u)
        return tuple(frozenset(a) for a in into)

    @cached_property
    def _related(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(self.out_neighbors[v] | self.in_neighbors[v] for v in range(self.n))

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out_neighbors[u]

    def pair_type(self, u: int, v: int) -> int:
        """0 no arc, 1 u->v only, 2 v->u only, 3 both directions."""
        return (1 if v in self.out_neighbors[u] else 0) | (2 if u in self.out_neighbors[v] else 0)

    def max_degree(self) -> int:
        return max([len(a) for a in self.out_neighbors] + [len(a) for a in self.in_neighbors], default=0)

    def has_bidirectional(self) -> bool:
        return any((v, u) in self.arcs for u, v in self.arcs)

    def is_tournament(self) -> bool:
        return all(self.pair_type(u, v) in (1, 2) for u, v in combinations(range(self.n), 2))

    def relation_key(self, vertices: Relation) -> int:
        return self.pair_type(vertices[0], vertices[1])

    def has_relation(self, vertices: Relation) -> bool:
        return self.has_arc(vertices[0], vertices[1])

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._related[v]

    @cached_property
    def _sorted_relations(self) -> Tuple[Relation, ...]:
        return tuple(sorted(self.arcs))

    def relation_tuples(self) -> Tuple[Relation, ...]:
        return self._sorted_relations

    def relabel(self, permutation: Sequence[int]) -> 'Digraph':
        return Digraph(self.n, frozenset((permutation[u], permutation[v]) for u, v in self.arcs))

    def induced(self, vertices: Sequence[int]) -> 'Digraph':
        order = sorted(vertices)
        index = {v: i for i, v in enumerate(order)}
        return Digraph(len(order), frozenset(
            (index[u], index[v]) for u, v in self.arcs if u in index and v in index
        ))

    def is_compatible(self, mapping: Mapping[int, int], x: int, y: int) -> bool:
        return all(self.pair_type(x, w) == self.pair_type(y, fw) for w, fw in mapping.items())

    def refinement_items(self, v: int, colors: Sequence[int]) -> tuple:
        return tuple(sorted((self.pair_type(v, w), colors[w]) for w in self._related[v]))

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(sorted(self.arcs))
        return graph


@dataclass(frozen=True)
class Hypergraph(Structure):
    """r-uniform hypergraph; hyperedges are stored as sorted r-tuples."""
    n: int
    r: int
    hyperedges: FrozenSet[Tuple[int, ...]] = frozenset()

    kind: ClassVar[str] = 'hypergraph'

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        if self.r < 1:
            raise InputError(f"uniformity must be positive, got {self.r}")
        normalised = set()
        for edge in self.hyperedges:
            members = tuple(sorted(int(v) for v in edge))
            if len(members) != self.r or len(set(members)) != self.r:
                raise InputError(f"hyperedge {tuple(edge)} does not have {self.r} distinct vertices")
            if members[0] < 0 or members[-1] >= self.n:
                raise InputError(f"hyperedge {tuple(edge)} has a vertex outside 0..{self.n - 1}")
            normalised.add(members)
        object.__setattr__(self, 'hyperedges', frozenset(normalised))

    @property
    def arity(self) -> int:
        return self.r

    @cached_property
    def incidence(self) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
        inc: List[list] = [[] for _ in range(self.n)]
        for edge in sorted(self.hyperedges):
            for v in edge:
                inc[v].append(edge)
        return tuple(tuple(e) for e in inc)

    @cached_property
    def _related(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(
            frozenset(w for edge in self.incidence[v] for w in edge if w != v)
            for v in range(self.n)
        )

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def relation_key(self, vertices: Relation) -> int:
        return 1 if tuple(sorted(vertices)) in self.hyperedges else 0

    def has_relation(self, vertices: Relation) -> bool:
        return tuple(sorted(vertices)) in self.hyperedges

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._related[v]

    @cached_property
    def _sorted_relations(self) -> Tuple[Relation, ...]:
        return tuple(sorted(self.hyperedges))

    def relation_tuples(self) -> Tuple[Relation, ...]:
        return self._sorted_relations

    def relabel(self, permutation: Sequence[int]) -> 'Hypergraph':
        return Hypergraph(self.n, self.r, frozenset(
            tuple(permutation[v] for v in edge) for edge in self.hyperedges
        ))

    def induced(self, vertices: Sequence[int]) -> 'Hypergraph':
        order = sorted(vertices)
        index = {v: i for i, v in enumerate(order)}
        return Hypergraph(len(order), self.r, frozenset(
            tuple(index[v] for v in edge) for edge in self.hyperedges if all(v in index for v in edge)
        ))

    def is_compatible(self, mapping: Mapping[int, int], x: int, y: int) -> bool:
        # every hyperedge through x inside the domain must map onto a hyperedge through y, and back
        for edge in self.incidence[x]:
            others = [w for w in edge if w != x]
            if all(w in mapping for w in others):
                if tuple(sorted([mapping[w] for w in others] + [y])) not in self.hyperedges:
                    return False
        inverse = {fw: w for w, fw in mapping.items()}
        for edge in self.incidence[y]:
            others = [w for w in edge if w != y]
            if all(w in inverse for w in others):
                if tuple(sorted([inverse[w] for w in others] + [x])) not in self.hyperedges:
                    return False
        return True

    def refinement_items(self, v: int, colors: Sequence[int]) -> tuple:
        return tuple(sorted(
            tuple(sorted(colors[w] for w in edge if w != v)) for edge in self.incidence[v]
        ))


class RuleGraph(Structure):
    """Graph given by an adjacency rule; vertex count is known up front, edges on first use.

    Subclasses set ``n`` and implement ``has_edge``; large constructions can override
    ``adjacency`` with something faster than the pairwise scan.
    """

    kind: ClassVar[str] = 'graph'

    @property
    def arity(self) -> int:
        return 2

    @abstractmethod
    def has_edge(self, u: int, v: int) -> bool:
        """Adjacency rule."""

    def label(self, v: int) -> str:
        return str(v)

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in combinations(range(self.n), 2):
            if self.has_edge(u, v):
                adj[u].add(v)
                adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def _sorted_relations(self) -> Tuple[Relation, ...]:
        return tuple(sorted((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v))

    def relation_key(self, vertices: Relation) -> int:
        return 1 if self.has_edge(vertices[0], vertices[1]) else 0

    def has_relation(self, vertices: Relation) -> bool:
        return self.has_edge(vertices[0], vertices[1])

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self.adjacency[v]

    def relation_tuples(self) -> Tuple[Relation, ...]:
        return self._sorted_relations

    def to_graph(self) -> Graph:
        return Graph(self.n, frozenset(self.relation_tuples()))

    def relabel(self, permutation: Sequence[int]) -> Graph:
        return self.to_graph().relabel(permutation)

    def induced(self, vertices: Sequence[int]) -> Graph:
        order = sorted(vertices)
        return Graph(len(order), frozenset(
            (a, b) for a, b in combinations(range(len(order)), 2) if self.has_edge(order[a], order[b])
        ))

    def is_compatible(self, mapping: Mapping[int, int], x: int, y: int) -> bool:
        return all(self.has_edge(x, w) == self.has_edge(y, fw) for w, fw in mapping.items())

    def refinement_items(self, v: int, colors: Sequence[int]) -> tuple:
        return tuple(sorted(colors[w] for w in self.adjacency[v]))

    def is_automorphism(self, permutation: Sequence[int]) -> bool:
        if len(permutation) != self.n or sorted(permutation) != list(range(self.n)):
            return False
        return all(self.has_edge(permutation[u], permutation[v]) for u, v in self.relation_tuples())

    def to_networkx(self) -> nx.Graph:
        return self.to_graph().to_networkx()


@dataclass(frozen=True)
class PartialIso:
    """Isomorphism between two induced substructures of ``ambient``.

    ``pairs`` is sorted by domain vertex; equality and hashing use the pairs only.
    """
    pairs: Tuple[Tuple[int, int], ...]
    ambient: Optional[Structure] = field(default=None, compare=False, repr=False)

    @classmethod
    def of(cls, structure: Structure, mapping: Mapping[int, int], validate: bool = True) -> 'PartialIso':
        if validate and not structure.is_partial_iso(mapping):
            raise InputError(f"{dict(sorted(mapping.items()))} is not a partial isomorphism of the {structure.kind}")
        return cls(tuple(sorted((int(k), int(v)) for k, v in mapping.items())), structure)

    @classmethod
    def identity(cls, structure: Structure, vertices: Iterable[int]) -> 'PartialIso':
        return cls(tuple((v, v) for v in sorted(vertices)), structure)

    @cached_property
    def mapping(self) -> Dict[int, int]:
        return dict(self.pairs)

    @property
    def domain(self) -> Tuple[int, ...]:
        return tuple(x for x, _ in self.pairs)

    @property
    def image(self) -> Tuple[int, ...]:
        return tuple(y for _, y in self.pairs)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def __len__(self) -> int:
        return len(self.pairs)

    def is_subset_automorphism(self) -> bool:
        """dom == rng, i.e. an automorphism of the induced substructure on the domain."""
        return set(self.domain) == set(self.image)

    def compose(self, first: 'PartialIso') -> 'PartialIso':
        """``self`` after ``first``, defined where both maps are."""
        mine = self.mapping
        return PartialIso(tuple(sorted(
            (x, mine[y]) for x, y in first.pairs if y in mine
        )), self.ambient or first.ambient)

    def inverse(self) -> 'PartialIso':
        return PartialIso(tuple(sorted((y, x) for x, y in self.pairs)), self.ambient)

    def restrict(self, vertices: Iterable[int]) -> 'PartialIso':
        keep = set(vertices)
        return PartialIso(tuple(p for p in self.pairs if p[0] in keep), self.ambient)

    def describe(self) -> str:
        return '{' + ', '.join(f"{x}->{y}" for x, y in self.pairs) + '}'


def induced_substructure(structure: Structure, vertices: Iterable[int]) -> Structure:
    """Substructure on ``vertices`` whose tuples are exactly those of ``structure`` inside it."""
    chosen = sorted(set(vertices))
    for v in chosen:
        structure.check_vertex(v)
    return structure.induced(chosen)


def complement(graph: Graph) -> Graph:
    if not isinstance(graph, Graph):
        raise InputError(f"complement is defined for graphs, got a {graph.kind}")
    return Graph(graph.n, frozenset(
        pair for pair in combinations(range(graph.n), 2) if pair not in graph.edges
    ))


def compose_permutations(second: Sequence[int], first: Sequence[int]) -> Permutation:
    """``second`` after ``first`` as vertex permutations."""
    return tuple(second[first[v]] for v in range(len(first)))


def invert_permutation(permutation: Sequence[int]) -> Permutation:
    inverse = [0] * len(permutation)
    for v, w in enumerate(permutation):
        inverse[w] = v
    return tuple(inverse)


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def disjoint_cliques(copies: int, size: int) -> Graph:
    """``copies`` disjoint copies of K_size; clique c occupies c*size .. c*size+size-1."""
    if copies < 0 or size < 0:
        raise InputError(f"invalid clique family parameters ({copies}, {size})")
    edges = set()
    for c in range(copies):
        edges.update(combinations(range(c * size, (c + 1) * size), 2))
    return Graph(copies * size, frozenset(edges))


def disjoint_union(first: Graph, second: Graph) -> Graph:
    shift = first.n
    return Graph(first.n + second.n, first.edges | frozenset((u + shift, v + shift) for u, v in second.edges))
