"""
Line-oriented text format for structures.

    graph N            e u v
    digraph N          a u v        (arc u -> v)
    hypergraph N R     h v1 ... vR

Indices are 0-based; '#' starts a comment; blank lines are ignored.
"""

import io
import logging
import os
from typing import Callable, Dict, List, Optional, Set, TextIO, Tuple, Union

from common.errors import FormatError
from common.structures import Digraph, Graph, Hypergraph, RuleGraph, Structure
from common.storage import get_storage_service

logger = logging.getLogger('eppa')

LABELS_SUFFIX = '.labels.json'
RELATION_TAGS = {'graph': 'e', 'digraph': 'a', 'hypergraph': 'h'}

Source = Union[str, os.PathLike, TextIO]


def _int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", line_number)


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split('#', 1)[0].split()
        if tokens:
            lines.append((line_number, tokens))
    return lines


def _parse_header(tokens: List[str], line_number: int) -> Tuple[str, int, int]:
    kind = tokens[0]
    expected = {'graph': 2, 'digraph': 2, 'hypergraph': 3}
    if kind not in expected:
        raise FormatError(f"header must start with graph, digraph or hypergraph, got {kind!r}", line_number)
    if len(tokens) != expected[kind]:
        raise FormatError(f"{kind} header takes {expected[kind] - 1} number(s)", line_number)
    n = _int(tokens[1], line_number)
    r = _int(tokens[2], line_number) if kind == 'hypergraph' else 2
    if n < 0:
        raise FormatError(f"vertex count must be non-negative, got {n}", line_number)
    if kind == 'hypergraph' and r < 2:
        raise FormatError(f"uniformity must be at least 2, got {r}", line_number)
    return kind, n, r


def parse_structure(text: str) -> Structure:
    """Parse the text format; every error carries the offending line number."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("missing header line", 1)
    header_line, header = lines[0]
    kind, n, r = _parse_header(header, header_line)
    tag = RELATION_TAGS[kind]

    relations: Set[Tuple[int, ...]] = set()
    for line_number, tokens in lines[1:]:
        if tokens[0] != tag:
            raise FormatError(f"a {kind} relation line starts with {tag!r}, got {tokens[0]!r}", line_number)
        if len(tokens) != r + 1:
            raise FormatError(f"expected {r} vertices after {tag!r}, got {len(tokens) - 1}", line_number)
        vertices = tuple(_int(t, line_number) for t in tokens[1:])
        for v in vertices:
            if not 0 <= v < n:
                raise FormatError(f"vertex {v} out of range 0..{n - 1}", line_number)
        if len(set(vertices)) != len(vertices):
            raise FormatError(f"loop or repeated vertex in {' '.join(tokens)}", line_number)
        key = vertices if kind == 'digraph' else tuple(sorted(vertices))
        if key in relations:
            raise FormatError(f"duplicate relation {' '.join(tokens)}", line_number)
        relations.add(key)

    if kind == 'graph':
        return Graph(n, frozenset(relations))
    if kind == 'digraph':
        return Digraph(n, frozenset(relations))
    return Hypergraph(n, r, frozenset(relations))


def read_structure(source: Source) -> Structure:
    """Read from a path or an open text stream."""
    return parse_structure(read_text(source))


def read_text(source: Source) -> str:
    if isinstance(source, io.TextIOBase) or hasattr(source, 'read'):
        return source.read()
    with open(source, 'r', encoding='utf-8') as f:
        return f.read()


def format_structure(structure: Structure) -> str:
    if isinstance(structure, RuleGraph):
        structure = structure.to_graph()
    if isinstance(structure, Hypergraph):
        header = f"hypergraph {structure.n} {structure.r}"
    else:
        header = f"{structure.kind} {structure.n}"
    tag = RELATION_TAGS[structure.kind]
    lines = [header] + [f"{tag} {' '.join(map(str, rel))}" for rel in structure.relation_tuples()]
    return '\n'.join(lines) + '\n'


def write_structure(structure: Structure, path: str, labeler: Optional[Callable[[int], str]] = None) -> Optional[str]:
    """Write ``structure`` to ``path``; with a labeler also write ``path.labels.json``.

    Returns the label sidecar path when one was written.
    """
    storage = get_storage_service()
    storage.save_text(format_structure(structure), path)
    logger.info(f"Wrote {structure.kind} on {structure.n} vertices to {path}")
    if labeler is None:
        return None
    labels: Dict[str, str] = {str(v): labeler(v) for v in range(structure.n)}
    sidecar = path + LABELS_SUFFIX
    storage.save_json(labels, sidecar)
    return sidecar
