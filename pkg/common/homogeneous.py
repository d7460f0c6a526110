"""
Finite homogeneous graphs up to complementation: C_5, L(K_3,3) and the
disjoint unions s * K_t of equal cliques, plus a membership check for
"G is an induced subgraph of some homogeneous graph".
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from common.errors import InputError
from common.search import find_embedding
from common.structures import Graph, PartialIso, Permutation, complement, cycle_graph, disjoint_cliques
from common.utils import EppaConfig, require_cap, resolve_config
from common.verify import Witness

logger = logging.getLogger('eppa')

C5 = 'C5'
ROOK = 'L(K33)'
CLIQUES = 'disjoint-cliques'
CO_CLIQUES = 'complement-of-disjoint-cliques'
FAMILIES = (C5, ROOK, CLIQUES, CO_CLIQUES)


@dataclass(frozen=True)
class HomogeneousCatalogEntry:
    family: str
    params: Tuple[int, ...] = ()

    @property
    def parametric(self) -> bool:
        return self.family in (CLIQUES, CO_CLIQUES)

    def describe(self) -> str:
        if self.family == CLIQUES and self.params:
            return f"{self.params[0]}*K_{self.params[1]}"
        if self.family == CO_CLIQUES and self.params:
            return f"complement of {self.params[0]}*K_{self.params[1]}"
        return self.family


def homogeneous_catalog() -> List[HomogeneousCatalogEntry]:
    """One entry per family; the clique families take (s, t) at materialization."""
    return [HomogeneousCatalogEntry(family) for family in FAMILIES]


def rook_graph() -> Graph:
    """L(K_3,3): cell 3a + b, adjacent when two cells share a row or a column."""
    return Graph(9, frozenset(
        (u, v) for u in range(9) for v in range(u + 1, 9)
        if u // 3 == v // 3 or u % 3 == v % 3
    ))


def materialize(entry: HomogeneousCatalogEntry, params: Optional[Sequence[int]] = None,
                config: Optional[EppaConfig] = None) -> Graph:
    cfg = resolve_config(config)
    params = tuple(params) if params is not None else entry.params
    if entry.family == C5:
        return cycle_graph(5)
    if entry.family == ROOK:
        return rook_graph()
    if entry.family not in (CLIQUES, CO_CLIQUES):
        raise InputError(f"unknown homogeneous family {entry.family!r}")
    if len(params) != 2 or params[0] < 1 or params[1] < 1:
        raise InputError(f"{entry.family} needs two positive parameters (s, t), got {params}")
    copies, size = params
    require_cap(copies * size, cfg.kkfree_max_vertices, f"{entry.family} size")
    graph = disjoint_cliques(copies, size)
    return graph if entry.family == CLIQUES else complement(graph)


def make_clique_family_extender(copies: int, size: int) -> Callable[[PartialIso], Permutation]:
    """Automorphisms of s * K_t (and of its complement): permute cliques, then vertices within them."""
    def extender(partial: PartialIso) -> Permutation:
        clique_map: Dict[int, int] = {}
        for x, y in partial.pairs:
            clique_map[x // size] = y // size
        free_targets = iter(sorted(set(range(copies)) - set(clique_map.values())))
        for c in range(copies):
            if c not in clique_map:
                clique_map[c] = next(free_targets)

        permutation = [0] * (copies * size)
        mapping = partial.mapping
        for c, image in clique_map.items():
            sources = range(c * size, (c + 1) * size)
            taken = {mapping[x] for x in sources if x in mapping}
            rest = iter(y for y in range(image * size, (image + 1) * size) if y not in taken)
            for x in sources:
                permutation[x] = mapping[x] if x in mapping else next(rest)
        return tuple(permutation)

    return extender


def catalog_witness(entry: HomogeneousCatalogEntry, params: Optional[Sequence[int]] = None,
                    config: Optional[EppaConfig] = None) -> Witness:
    """Self-witness of a catalog member; clique families carry a constructive extender."""
    graph = materialize(entry, params, config)
    params = tuple(params) if params is not None else entry.params
    extender = make_clique_family_extender(*params) if entry.family in (CLIQUES, CO_CLIQUES) else None
    described = HomogeneousCatalogEntry(entry.family, params).describe()
    return Witness(graph, graph, tuple(range(graph.n)), f"homogeneous {described}", extender=extender)


@dataclass(frozen=True)
class HomogeneousVerdict:
    found: bool
    entry: Optional[HomogeneousCatalogEntry] = None
    embedding: Optional[Tuple[int, ...]] = None

    def describe(self) -> str:
        return self.entry.describe() if self.entry is not None else 'none'

    def to_dict(self) -> Dict:
        return {
            'found': self.found,
            'host': self.describe(),
            'embedding': list(self.embedding) if self.embedding is not None else None,
        }


def _clique_components(graph: Graph) -> Optional[List[List[int]]]:
    """Components ordered by least vertex when every component is a clique, else None."""
    components = sorted(sorted(c) for c in nx.connected_components(graph.to_networkx()))
    for component in components:
        if any(len(graph.adjacency[v]) != len(component) - 1 for v in component):
            return None
    return components


def _into_cliques(components: List[List[int]], n: int) -> Tuple[Tuple[int, int], Tuple[int, ...]]:
    copies = max(1, len(components))
    size = max([1] + [len(c) for c in components])
    embedding = [0] * n
    for c, component in enumerate(components):
        for offset, v in enumerate(component):
            embedding[v] = c * size + offset
    return (copies, size), tuple(embedding)


def is_subgraph_of_homogeneous(graph: Graph) -> HomogeneousVerdict:
    """Induced embedding into a homogeneous graph, if one exists.

    The clique families are recognised structurally so the check covers all of
    them; the two sporadic graphs and their complements are searched directly.
    """
    components = _clique_components(graph)
    if components is not None:
        params, embedding = _into_cliques(components, graph.n)
        return HomogeneousVerdict(True, HomogeneousCatalogEntry(CLIQUES, params), embedding)
    co_components = _clique_components(complement(graph))
    if co_components is not None:
        params, embedding = _into_cliques(co_components, graph.n)
        return HomogeneousVerdict(True, HomogeneousCatalogEntry(CO_CLIQUES, params), embedding)

    # C_5 and L(K_3,3) are self-complementary, so their complements need no separate search
    for family, host in ((C5, cycle_graph(5)), (ROOK, rook_graph())):
        embedding = find_embedding(graph, host)
        if embedding is not None:
            logger.debug(f"graph on {graph.n} vertices embeds into {family}")
            return HomogeneousVerdict(True, HomogeneousCatalogEntry(family), embedding)
    return HomogeneousVerdict(False)
