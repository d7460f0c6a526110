"""
Valuation witnesses beyond graphs: digraphs over Z_4 / Z_3, uniform hypergraphs,
plus the Paley tournament and the hypergraph with a factorial witness lower bound.
"""

import logging
from itertools import combinations, product
from math import comb, factorial
from typing import Dict, List, Optional, Set, Tuple

from common.errors import InputError
from common.structures import Digraph, Hypergraph
from common.utils import EppaConfig, one_based, require_cap, resolve_config
from common.verify import Witness

logger = logging.getLogger('eppa')

# residue s = f(j) - g(i) mod q, (i, f) listed first -> pair type (1 forward, 2 backward, 3 both)
DECODE_TABLE: Dict[int, Dict[int, int]] = {
    4: {0: 0, 1: 1, 3: 2, 2: 3},
    3: {0: 0, 1: 1, 2: 2},
}


def reverse_pair_type(pair_type: int) -> int:
    return {0: 0, 1: 2, 2: 1, 3: 3}[pair_type]


def decode_residue(q: int, residue: int) -> int:
    return DECODE_TABLE[q][residue % q]


def encode_pair_type(q: int, pair_type: int) -> int:
    for residue, decoded in DECODE_TABLE[q].items():
        if decoded == pair_type:
            return residue
    raise InputError(f"arc type {pair_type} cannot be encoded over Z_{q}")


def _position(i: int, j: int) -> int:
    return j if j < i else j - 1


class DirectedValuationCodec:
    """Vertex i * q**(n-1) + word, where base-q digit pos(i, j) of word holds f(j)."""

    def __init__(self, order: int, q: int):
        self.order = order
        self.q = q
        self.words = q ** (order - 1)

    def value(self, index: int, j: int) -> int:
        i, word = divmod(index, self.words)
        return (word // self.q ** _position(i, j)) % self.q

    def index(self, i: int, valuation: Dict[int, int]) -> int:
        word = 0
        for j, value in valuation.items():
            word += (value % self.q) * self.q ** _position(i, j)
        return i * self.words + word

    def label(self, index: int) -> str:
        i = index // self.words
        values = '.'.join(str(self.value(index, j)) for j in range(self.order) if j != i)
        return f"({one_based(i)}, f={values})"


def build_directed_valuation_witness(order: int, allow_bidirectional: bool = True,
                                     base: Optional[Digraph] = None,
                                     config: Optional[EppaConfig] = None) -> Witness:
    """Digraph on n * q**(n-1) vertices, q = 4 with bidirectional arcs, q = 3 without."""
    cfg = resolve_config(config)
    if order < 1:
        raise InputError(f"directed valuation witness needs n >= 1, got {order}")
    q = 4 if allow_bidirectional else 3
    codec = DirectedValuationCodec(order, q)
    require_cap(order * codec.words, cfg.generalized_max_vertices, "directed valuation witness size")
    base = base if base is not None else Digraph(0)
    if base.n > order:
        raise InputError(f"a digraph on {base.n} vertices does not fit into the order-{order} witness")
    if not allow_bidirectional and base.has_bidirectional():
        raise InputError("the digraph has bidirectional arcs; the Z_3 witness cannot hold it")

    arcs = set()
    for i, j in combinations(range(order), 2):
        for fw in range(codec.words):
            x = i * codec.words + fw
            fj = codec.value(x, j)
            for gw in range(codec.words):
                y = j * codec.words + gw
                pair_type = decode_residue(q, fj - codec.value(y, i))
                if pair_type & 1:
                    arcs.add((x, y))
                if pair_type & 2:
                    arcs.add((y, x))
    host = Digraph(order * codec.words, frozenset(arcs))

    embedding = []
    for v in range(base.n):
        valuation = {}
        for j in range(order):
            if j == v:
                continue
            # f_v(j) = 0 for j > v; for j < v the residue decoding the pair with v listed first
            valuation[j] = encode_pair_type(q, reverse_pair_type(base.pair_type(j, v))) if j < v else 0
        embedding.append(codec.index(v, valuation))

    logger.info(f"Built directed valuation witness over Z_{q}: {host.n} vertices, {len(host.arcs)} arcs")
    return Witness(
        base=base,
        host=host,
        embedding=tuple(embedding),
        construction=f"directed-z{q}",
        labeler=codec.label,
        metadata={'order': order, 'q': q},
    )


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    divisor = 2
    while divisor * divisor <= q:
        if q % divisor == 0:
            return False
        divisor += 1
    return True


def quadratic_residues(q: int) -> Set[int]:
    return {x * x % q for x in range(1, q)}


def build_paley_tournament(q: int) -> Digraph:
    """Vertices Z_q, arc a -> b iff b - a is a nonzero square."""
    if not is_prime(q):
        raise InputError(f"Paley tournament needs a prime, got {q}")
    if q % 4 != 3:
        raise InputError(f"Paley tournament needs q = 3 (mod 4), got {q}")
    residues = quadratic_residues(q)
    tournament = Digraph(q, frozenset(
        (a, b) for a in range(q) for b in range(q) if a != b and (b - a) % q in residues
    ))
    logger.info(f"Built Paley tournament on {q} vertices")
    return tournament


class HyperValuationCodec:
    """Vertex i * 2**C(n-1, r-1) + word; bit t of word is f on the t-th (r-1)-subset of [n] minus i."""

    def __init__(self, order: int, r: int):
        self.order = order
        self.r = r
        self.domains: List[Tuple[Tuple[int, ...], ...]] = [
            tuple(combinations([j for j in range(order) if j != i], r - 1)) for i in range(order)
        ]
        self.positions: List[Dict[Tuple[int, ...], int]] = [
            {subset: t for t, subset in enumerate(domain)} for domain in self.domains
        ]
        self.words = 1 << comb(order - 1, r - 1)

    def value(self, i: int, word: int, subset: Tuple[int, ...]) -> int:
        return (word >> self.positions[i][subset]) & 1

    def label(self, index: int) -> str:
        i, word = divmod(index, self.words)
        width = max(len(self.domains[i]), 1)
        return f"({one_based(i)}, 0b{word:0{width}b})"


def build_hypergraph_valuation_witness(order: int, r: int, base: Optional[Hypergraph] = None,
                                       config: Optional[EppaConfig] = None) -> Witness:
    """r-uniform witness on n * 2**C(n-1, r-1) vertices with the odd-parity rule."""
    cfg = resolve_config(config)
    if not 2 <= r <= order:
        raise InputError(f"hypergraph valuation witness needs 2 <= r <= n, got r={r}, n={order}")
    codec = HyperValuationCodec(order, r)
    require_cap(order * codec.words, cfg.generalized_max_vertices, "hypergraph valuation witness size")
    base = base if base is not None else Hypergraph(0, r)
    if base.r != r:
        raise InputError(f"base is {base.r}-uniform, witness is {r}-uniform")
    if base.n > order:
        raise InputError(f"a hypergraph on {base.n} vertices does not fit into the order-{order} witness")

    hyperedges = set()
    for projections in combinations(range(order), r):
        rests = [tuple(p for p in projections if p != i) for i in projections]
        for words in product(range(codec.words), repeat=r):
            parity = sum(codec.value(i, w, rest) for i, w, rest in zip(projections, words, rests))
            if parity % 2 == 1:
                hyperedges.add(tuple(i * codec.words + w for i, w in zip(projections, words)))
    host = Hypergraph(order * codec.words, r, frozenset(hyperedges))

    embedding = []
    for i in range(base.n):
        word = 0
        for t, subset in enumerate(codec.domains[i]):
            # one bit per hyperedge, carried by its largest vertex
            if subset[-1] < i and tuple(sorted(subset + (i,))) in base.hyperedges:
                word |= 1 << t
        embedding.append(i * codec.words + word)

    logger.info(f"Built {r}-uniform valuation witness: {host.n} vertices, {len(hyperedges)} hyperedges")
    return Witness(
        base=base,
        host=host,
        embedding=tuple(embedding),
        construction='hypergraph-valuation',
        labeler=codec.label,
        metadata={'order': order, 'r': r},
    )


def build_obs_hypergraph(k: int) -> Hypergraph:
    """3-uniform: a = 0, b_i = 1 + i, c = 1 + k + c; {a, b_i, c} whenever bit i of c is set."""
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    m = 1 << k
    hyperedges = frozenset(
        (0, 1 + i, 1 + k + c) for i in range(k) for c in range(m) if c >> i & 1
    )
    return Hypergraph(m + k + 1, 3, hyperedges)


def obs_lower_bound(k: int) -> int:
    """(2^k)!: every witness for the k-th lower-bound hypergraph has at least this many vertices."""
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    return factorial(1 << k)


def observation_bijections(witness: Witness, k: int) -> int:
    """Number of distinct bijections f_v: C -> C read off the host, where bit i of f_v(c)
    records whether {v, b_i, c} is a hyperedge.  A witness realises all (2^k)! of them."""
    m = 1 << k
    base = witness.base
    if base != build_obs_hypergraph(k):
        raise InputError(f"witness base is not the lower-bound hypergraph for k={k}")
    host = witness.host
    b_images = [witness.embedding[1 + i] for i in range(k)]
    c_images = [witness.embedding[1 + k + c] for c in range(m)]
    found = set()
    for v in range(host.n):
        values = tuple(
            sum(1 << i for i, b in enumerate(b_images)
                if len({v, b, c}) == 3 and host.has_relation((v, b, c)))
            for c in c_images
        )
        if len(set(values)) == m:
            found.add(values)
    return len(found)


def _multinomial(total: int, parts: int) -> int:
    sizes = [total // parts + (1 if t < total % parts else 0) for t in range(parts)]
    value = factorial(total)
    for size in sizes:
        value //= factorial(size)
    return value


def directed_lower_bounds(order: int) -> Dict[str, int]:
    """Modified star construction: an independent set of size n-1 split in thirds (oriented)
    or quarters (bidirectional arcs allowed); values are the multinomials."""
    if order < 2:
        raise InputError(f"directed lower bounds need n >= 2, got {order}")
    return {
        'oriented': _multinomial(order - 1, 3),
        'bidirectional': _multinomial(order - 1, 4),
    }
