"""
Search over structures: partial-automorphism enumeration, extension of a
partial map to a full automorphism, exact canonical forms, induced embeddings
and vertex orbits.

Extension and canonical labelling both run individualization-refinement:
vertices are coloured, colours are refined until stable, and the search
branches on the smallest non-singleton cell.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from networkx.algorithms.isomorphism import DiGraphMatcher, GraphMatcher

from common.errors import InputError
from common.structures import (
    Digraph, Graph, PartialIso, Permutation, Structure, invert_permutation,
)
from common.utils import Deadline, EppaConfig, require_cap, resolve_config

logger = logging.getLogger('eppa')

MapLike = Union[PartialIso, Mapping[int, int]]


def _refine(structure: Structure, colorings: List[List[int]]) -> Optional[List[List[int]]]:
    """Refine one or more colourings jointly until stable.

    Colour names are shared across the colourings, so corresponding cells keep
    corresponding names. Returns None as soon as the colour histograms differ.
    """
    current = [list(c) for c in colorings]
    count = len(set(chain.from_iterable(current)))
    while True:
        signatures = [
            [(c[v], structure.refinement_items(v, c)) for v in range(structure.n)]
            for c in current
        ]
        palette = {sig: idx for idx, sig in enumerate(sorted(set(chain.from_iterable(signatures))))}
        current = [[palette[s] for s in sigs] for sigs in signatures]
        if len(current) > 1:
            reference = Counter(current[0])
            if any(Counter(c) != reference for c in current[1:]):
                return None
        if len(palette) == count:
            return current
        count = len(palette)


def _cells(colors: Sequence[int]) -> Dict[int, List[int]]:
    cells: Dict[int, List[int]] = defaultdict(list)
    for v, c in enumerate(colors):
        cells[c].append(v)
    return cells


def _target_cell(cells: Dict[int, List[int]]) -> Optional[int]:
    candidates = [(len(members), color) for color, members in cells.items() if len(members) > 1]
    return min(candidates)[1] if candidates else None


def as_mapping(structure: Structure, partial: MapLike) -> Dict[int, int]:
    """Validate ``partial`` against ``structure`` and return it as a plain dict."""
    mapping = dict(partial.mapping) if isinstance(partial, PartialIso) else dict(partial)
    for x, y in mapping.items():
        structure.check_vertex(x)
        structure.check_vertex(y)
    if not structure.is_partial_iso(mapping):
        raise InputError(f"{dict(sorted(mapping.items()))} is not a partial isomorphism of the {structure.kind}")
    return mapping


def enumerate_partial_autos(structure: Structure, max_size: Optional[int] = None) -> Iterator[PartialIso]:
    """Yield every partial automorphism with at most ``max_size`` domain vertices.

    Domains come in colex order (as bitmasks), images in lexicographic order.
    """
    limit = structure.n if max_size is None else min(max_size, structure.n)
    for mask in range(1 << structure.n):
        if bin(mask).count('1') > limit:
            continue
        domain = [v for v in range(structure.n) if mask >> v & 1]
        for mapping in maps_on(structure, domain):
            yield PartialIso(tuple(sorted(mapping.items())), structure)


def maps_on(structure: Structure, domain: Sequence[int]) -> Iterator[Dict[int, int]]:
    mapping: Dict[int, int] = {}
    used = set()

    def assign(idx: int) -> Iterator[Dict[int, int]]:
        if idx == len(domain):
            yield dict(mapping)
            return
        x = domain[idx]
        for y in range(structure.n):
            if y in used or not structure.is_compatible(mapping, x, y):
                continue
            mapping[x] = y
            used.add(y)
            yield from assign(idx + 1)
            del mapping[x]
            used.discard(y)

    yield from assign(0)


def count_maps(structure: Structure) -> int:
    """Number of partial automorphisms, counted without materializing them."""
    total = 0
    for mask in range(1 << structure.n):
        domain = [v for v in range(structure.n) if mask >> v & 1]
        total += sum(1 for _ in maps_on(structure, domain))
    return total


def extend_to_automorphism(structure: Structure, partial: MapLike,
                           deadline: Optional[Deadline] = None) -> Optional[Permutation]:
    """Return an automorphism of ``structure`` agreeing with ``partial``, or None if none exists."""
    mapping = as_mapping(structure, partial)
    left = [0] * structure.n
    right = [0] * structure.n
    for idx, (x, y) in enumerate(sorted(mapping.items()), start=1):
        left[x] = idx
        right[y] = idx
    return _extend(structure, left, right, deadline)


def _extend(structure: Structure, left: List[int], right: List[int],
            deadline: Optional[Deadline]) -> Optional[Permutation]:
    if deadline is not None:
        deadline.check('extension search')
    refined = _refine(structure, [left, right])
    if refined is None:
        return None
    left, right = refined
    cells_left, cells_right = _cells(left), _cells(right)
    target = _target_cell(cells_left)
    if target is None:
        permutation = [0] * structure.n
        for color, members in cells_left.items():
            permutation[members[0]] = cells_right[color][0]
        return tuple(permutation) if structure.is_automorphism(permutation) else None

    fresh = len(cells_left)
    x = min(cells_left[target])
    for y in cells_right[target]:
        branch_left = list(left)
        branch_right = list(right)
        branch_left[x] = fresh
        branch_right[y] = fresh
        found = _extend(structure, branch_left, branch_right, deadline)
        if found is not None:
            return found
    return None


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical relabelling of a structure.

    Two forms compare equal exactly when the (coloured) structures are isomorphic;
    the relabelling itself is excluded from comparison.
    """
    kind: str
    n: int
    arity: int
    vertex_colors: Tuple[int, ...]
    sequence: Tuple[Tuple[int, ...], ...]
    relabeling: Permutation = field(compare=False)


def canonical_form(structure: Structure, colors: Optional[Sequence[int]] = None,
                   config: Optional[EppaConfig] = None) -> CanonicalForm:
    """Exact canonical form by individualization-refinement with orbit pruning.

    ``colors`` is an optional initial vertex colouring that isomorphisms must respect.
    """
    cfg = resolve_config(config)
    require_cap(structure.n, cfg.canonical_max_vertices, f"canonical form of a {structure.kind}")
    raw = list(colors) if colors is not None else [0] * structure.n
    if len(raw) != structure.n:
        raise InputError(f"colouring has {len(raw)} entries for {structure.n} vertices")
    names = {c: i for i, c in enumerate(sorted(set(raw)))}
    initial = [names[c] for c in raw]
    return _CanonicalSearch(structure, initial).run()


class _CanonicalSearch:
    def __init__(self, structure: Structure, initial: List[int]):
        self.structure = structure
        self.initial = initial
        self.best_key: Optional[tuple] = None
        self.best_labeling: Optional[List[int]] = None
        self.generators: List[Permutation] = []

    def run(self) -> CanonicalForm:
        self._explore(self.initial, [])
        colors_key, sequence = self.best_key
        return CanonicalForm(
            kind=self.structure.kind,
            n=self.structure.n,
            arity=self.structure.arity,
            vertex_colors=colors_key,
            sequence=sequence,
            relabeling=tuple(self.best_labeling),
        )

    def _leaf_key(self, labeling: Sequence[int]) -> tuple:
        n = self.structure.n
        colors_key = [0] * n
        for v in range(n):
            colors_key[labeling[v]] = self.initial[v]
        relabelled = self.structure.relabel(labeling)
        return tuple(colors_key), relabelled.relation_tuples()

    def _explore(self, colors: List[int], path: List[int]) -> None:
        refined = _refine(self.structure, [colors])[0]
        cells = _cells(refined)
        target = _target_cell(cells)
        if target is None:
            self._visit_leaf(refined)
            return
        fresh = len(cells)
        explored: List[int] = []
        for w in sorted(cells[target]):
            if explored and self._same_orbit(w, explored, path):
                continue
            explored.append(w)
            child = list(refined)
            child[w] = fresh
            self._explore(child, path + [w])

    def _visit_leaf(self, labeling: List[int]) -> None:
        key = self._leaf_key(labeling)
        if self.best_key is None or key < self.best_key:
            self.best_key = key
            self.best_labeling = labeling
        elif key == self.best_key:
            back = invert_permutation(self.best_labeling)
            automorphism = tuple(back[labeling[v]] for v in range(self.structure.n))
            if any(automorphism[v] != v for v in range(self.structure.n)):
                self.generators.append(automorphism)

    def _same_orbit(self, w: int, explored: List[int], path: List[int]) -> bool:
        stabilizing = [g for g in self.generators if all(g[v] == v for v in path)]
        if not stabilizing:
            return False
        orbit = {w}
        frontier = [w]
        while frontier:
            v = frontier.pop()
            for g in stabilizing:
                if g[v] not in orbit:
                    orbit.add(g[v])
                    frontier.append(g[v])
        return any(e in orbit for e in explored)


def are_isomorphic(first: Structure, second: Structure, config: Optional[EppaConfig] = None) -> bool:
    if first.kind != second.kind or first.n != second.n or first.arity != second.arity:
        return False
    return canonical_form(first, config=config) == canonical_form(second, config=config)


def graphs_up_to_isomorphism(n: int, config: Optional[EppaConfig] = None) -> List[Graph]:
    """One representative per isomorphism class of graphs on ``n`` vertices (first in edge-mask order)."""
    pairs = list(combinations(range(n), 2))
    seen = set()
    representatives = []
    for mask in range(1 << len(pairs)):
        graph = Graph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))
        form = canonical_form(graph, config=config)
        if form not in seen:
            seen.add(form)
            representatives.append(graph)
    logger.debug(f"{len(representatives)} graphs on {n} vertices up to isomorphism")
    return representatives


def find_embedding(pattern: Structure, host: Structure) -> Optional[Tuple[int, ...]]:
    """Induced embedding of ``pattern`` into ``host`` as a tuple pattern-vertex -> host-vertex."""
    if pattern.kind != host.kind or pattern.arity != host.arity:
        raise InputError(f"cannot embed a {pattern.kind} into a {host.kind}")
    if pattern.n > host.n:
        return None
    if isinstance(pattern, Graph):
        matcher = GraphMatcher(host.to_networkx(), pattern.to_networkx())
    elif isinstance(pattern, Digraph):
        matcher = DiGraphMatcher(host.to_networkx(), pattern.to_networkx())
    else:
        return _find_embedding_backtrack(pattern, host)
    for host_to_pattern in matcher.subgraph_isomorphisms_iter():
        embedding = [0] * pattern.n
        for h, p in host_to_pattern.items():
            embedding[p] = h
        return tuple(embedding)
    return None


def _find_embedding_backtrack(pattern: Structure, host: Structure) -> Optional[Tuple[int, ...]]:
    mapping: Dict[int, int] = {}
    used = set()

    def fits(x: int, y: int) -> bool:
        for others in combinations(sorted(mapping), pattern.arity - 1):
            tup = others + (x,)
            if pattern.relation_key(tup) != host.relation_key(tuple(mapping[w] for w in others) + (y,)):
                return False
        return True

    def assign(x: int) -> bool:
        if x == pattern.n:
            return True
        for y in range(host.n):
            if y in used or not fits(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if assign(x + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return tuple(mapping[x] for x in range(pattern.n)) if assign(0) else None


def is_embedding(pattern: Structure, host: Structure, embedding: Sequence[int]) -> bool:
    """True when ``embedding`` is injective and preserves every relation tuple both ways."""
    if len(embedding) != pattern.n or len(set(embedding)) != pattern.n:
        return False
    if any(not 0 <= y < host.n for y in embedding):
        return False
    return all(
        pattern.relation_key(tup) == host.relation_key(tuple(embedding[v] for v in tup))
        for tup in combinations(range(pattern.n), pattern.arity)
    )


def vertex_orbits(structure: Structure, deadline: Optional[Deadline] = None) -> List[List[int]]:
    """Orbits of the automorphism group, each sorted, ordered by least element."""
    remaining = set(range(structure.n))
    orbits = []
    while remaining:
        root = min(remaining)
        orbit = {root}
        for v in sorted(remaining - {root}):
            if v in orbit:
                continue
            automorphism = extend_to_automorphism(structure, {root: v}, deadline)
            if automorphism is not None:
                # the whole cycle of root under the found map lies in the orbit
                image = automorphism[root]
                while image != root:
                    orbit.add(image)
                    image = automorphism[image]
        orbits.append(sorted(orbit))
        remaining -= orbit
    return orbits


def is_vertex_transitive(structure: Structure, deadline: Optional[Deadline] = None) -> bool:
    """Orbit of vertex 0 under the automorphism group is the whole vertex set."""
    if structure.n <= 1:
        return True
    return all(
        extend_to_automorphism(structure, {0: v}, deadline) is not None
        for v in range(1, structure.n)
    )
