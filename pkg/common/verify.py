"""
Witness verification.

A witness is a host structure together with an embedding of the base; it is an
EPPA-witness when every partial automorphism of the base, transported along the
embedding, extends to an automorphism of the host.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from common.errors import ConsistencyError, InputError
from common.search import (
    canonical_form, count_maps, enumerate_partial_autos, extend_to_automorphism,
    is_embedding, is_vertex_transitive,
)
from common.structures import Graph, PartialIso, Permutation, Structure, compose_permutations
from common.utils import Deadline, EppaConfig, require_cap, resolve_config

logger = logging.getLogger('eppa')

STRATEGIES = ('use-extender', 'search', 'both')
COHERENCE_SCOPES = ('substructure', 'all-composable')
MAX_LOGGED_FAILURES = 10


@dataclass(frozen=True)
class Witness:
    """Host structure plus an embedding of the base; optionally a constructive extender."""
    base: Structure
    host: Structure
    embedding: Tuple[int, ...]
    construction: str = 'custom'
    extender: Optional[Callable[[PartialIso], Permutation]] = field(default=None, compare=False, repr=False)
    labeler: Optional[Callable[[int], str]] = field(default=None, compare=False, repr=False)
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'embedding', tuple(self.embedding))
        if not is_embedding(self.base, self.host, self.embedding):
            raise InputError(f"{self.construction} witness: the given map is not an embedding of the base")

    @classmethod
    def identity(cls, structure: Structure, construction: str = 'self') -> 'Witness':
        return cls(structure, structure, tuple(range(structure.n)), construction)

    def label(self, v: int) -> str:
        return self.labeler(v) if self.labeler is not None else str(v)

    def transport(self, partial: PartialIso) -> Dict[int, int]:
        """psi o p o psi^-1 as a map on host vertices."""
        return {self.embedding[x]: self.embedding[y] for x, y in partial.pairs}


@dataclass
class Failure:
    partial: PartialIso
    reason: str

    def to_dict(self) -> Dict[str, Any]:
        return {'partial': [list(p) for p in self.partial.pairs], 'reason': self.reason}


@dataclass
class VerificationReport:
    construction: str
    strategy: str
    base_vertices: int
    host_vertices: int
    checked: int = 0
    extended: int = 0
    failures: List[Failure] = field(default_factory=list)
    complete: bool = False
    wall_time: float = 0.0

    @property
    def verdict(self) -> str:
        return 'pass' if self.complete and not self.failures else 'fail'

    @property
    def passed(self) -> bool:
        return self.verdict == 'pass'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'construction': self.construction,
            'strategy': self.strategy,
            'verdict': self.verdict,
            'base_vertices': self.base_vertices,
            'host_vertices': self.host_vertices,
            'checked': self.checked,
            'extended': self.extended,
            'failures': [f.to_dict() for f in self.failures],
        }


def _check_extension(witness: Witness, target: Dict[int, int], permutation: Sequence[int]) -> Optional[str]:
    host = witness.host
    if len(permutation) != host.n or sorted(permutation) != list(range(host.n)):
        return "extender output is not a permutation of the host"
    if any(permutation[x] != y for x, y in target.items()):
        return "extender output does not extend the partial automorphism"
    if not host.is_automorphism(permutation):
        return "extender output is not an automorphism of the host"
    return None


def verify_witness(witness: Witness, strategy: str = 'use-extender', stop_on_failure: bool = False,
                   deadline: Optional[Deadline] = None, config: Optional[EppaConfig] = None,
                   quiet: bool = False) -> VerificationReport:
    """Check every partial automorphism of the base against the host."""
    cfg = resolve_config(config)
    if strategy not in STRATEGIES:
        raise InputError(f"unknown strategy {strategy!r}; choose one of {', '.join(STRATEGIES)}")
    if strategy in ('use-extender', 'both') and witness.extender is None:
        raise InputError(f"{witness.construction} witness has no extender; use strategy 'search'")
    require_cap(witness.base.n, cfg.verify_max_vertices, "verification base size")
    deadline = deadline or Deadline(cfg.timeout_secs)
    started = time.monotonic()

    report = VerificationReport(witness.construction, strategy, witness.base.n, witness.host.n)
    stopped = False
    for partial in enumerate_partial_autos(witness.base):
        deadline.check('verification')
        report.checked += 1
        target = witness.transport(partial)
        reason = None
        if strategy in ('use-extender', 'both'):
            reason = _check_extension(witness, target, witness.extender(partial))
        if strategy in ('search', 'both'):
            found = extend_to_automorphism(witness.host, target, deadline) is not None
            if strategy == 'both' and reason is None and not found:
                raise ConsistencyError(f"search missed an extension the extender produced for {partial.describe()}")
            if strategy == 'search' and not found:
                reason = "no automorphism of the host extends the partial automorphism"
        if reason is None:
            report.extended += 1
            continue
        report.failures.append(Failure(partial, reason))
        if len(report.failures) <= MAX_LOGGED_FAILURES:
            logger.warning(f"{witness.construction}: {partial.describe()} fails: {reason}")
        if stop_on_failure:
            stopped = True
            break

    report.complete = not stopped
    report.wall_time = time.monotonic() - started
    (logger.debug if quiet else logger.info)(
        f"Verified {witness.construction} witness ({strategy}): {report.extended}/{report.checked} "
        f"extended, verdict {report.verdict}"
    )
    return report


def verify_homogeneous(structure: Structure, config: Optional[EppaConfig] = None) -> VerificationReport:
    """Self-witness check: the structure is homogeneous iff this passes."""
    return verify_witness(Witness.identity(structure, 'homogeneity'), 'search', config=config)


@dataclass
class CoherenceReport:
    scope: str
    pairs_checked: int = 0
    violation: Optional[Dict[str, Any]] = None

    @property
    def verdict(self) -> str:
        return 'pass' if self.violation is None else 'fail'

    def to_dict(self) -> Dict[str, Any]:
        return {'scope': self.scope, 'verdict': self.verdict,
                'pairs_checked': self.pairs_checked, 'violation': self.violation}


def verify_coherence(witness: Witness, scope: str = 'substructure',
                     config: Optional[EppaConfig] = None) -> CoherenceReport:
    """Check Psi(g f) = Psi(g) Psi(f) on composable pairs; reports the first violation."""
    cfg = resolve_config(config)
    if scope not in COHERENCE_SCOPES:
        raise InputError(f"unknown scope {scope!r}; choose one of {', '.join(COHERENCE_SCOPES)}")
    if witness.extender is None:
        raise InputError(f"{witness.construction} witness has no extender to check")
    require_cap(witness.base.n, cfg.verify_max_vertices, "coherence base size")

    by_domain: Dict[Tuple[int, ...], List[PartialIso]] = {}
    for partial in enumerate_partial_autos(witness.base):
        if scope == 'substructure' and not partial.is_subset_automorphism():
            continue
        by_domain.setdefault(partial.domain, []).append(partial)

    images: Dict[PartialIso, Permutation] = {}

    def psi(partial: PartialIso) -> Permutation:
        if partial not in images:
            images[partial] = tuple(witness.extender(partial))
        return images[partial]

    report = CoherenceReport(scope)
    for group in by_domain.values():
        for f in group:
            for g in by_domain.get(tuple(sorted(f.image)), []):
                report.pairs_checked += 1
                expected = psi(g.compose(f))
                actual = compose_permutations(psi(g), psi(f))
                if actual != expected:
                    point = next(x for x in range(len(actual)) if actual[x] != expected[x])
                    report.violation = {'f': f.describe(), 'g': g.describe(), 'point': point}
                    logger.warning(f"coherence violated: f={f.describe()} g={g.describe()} at host vertex {point}")
                    return report
    logger.info(f"Coherence ({scope}): {report.pairs_checked} composable pairs, verdict {report.verdict}")
    return report


def count_partial_autos(structure: Structure) -> int:
    """Exact number of partial automorphisms, the empty map included."""
    return count_maps(structure)


@dataclass
class MinWitnessResult:
    base: Graph
    max_m: int
    prune_transitive: bool
    value: Optional[int] = None
    witness: Optional[Witness] = None
    hosts_per_size: Dict[int, int] = field(default_factory=dict)
    verified_per_size: Dict[int, int] = field(default_factory=dict)

    @property
    def exhausted(self) -> bool:
        return self.value is None

    @property
    def conditional(self) -> bool:
        """Pruned results assume smallest witnesses are vertex-transitive."""
        return self.prune_transitive

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'exhausted': self.exhausted,
            'conditional': self.conditional,
            'max_m': self.max_m,
            'hosts_per_size': {str(m): c for m, c in sorted(self.hosts_per_size.items())},
            'verified_per_size': {str(m): c for m, c in sorted(self.verified_per_size.items())},
            'certificate_edges': sorted(list(e) for e in self.witness.host.relation_tuples()) if self.witness else None,
        }


def _marked_form(host: Graph, marked: int, config: EppaConfig):
    return canonical_form(host, colors=[1] * marked + [0] * (host.n - marked), config=config)


def _grow(hosts: List[Graph], marked: int, config: EppaConfig, deadline: Deadline) -> List[Graph]:
    """All one-vertex extensions, deduplicated up to isomorphisms fixing the marked copy setwise."""
    seen = set()
    grown = []
    for host in hosts:
        m = host.n
        for mask in range(1 << m):
            deadline.check('host enumeration')
            edges = host.edges | frozenset((v, m) for v in range(m) if mask >> v & 1)
            candidate = Graph(m + 1, edges)
            form = _marked_form(candidate, marked, config)
            if form in seen:
                continue
            seen.add(form)
            grown.append(candidate)
            require_cap(len(grown), config.max_hosts, f"hosts on {m + 1} vertices")
    return grown


def min_witness_search(base: Graph, max_m: int, prune_transitive: bool = False,
                       config: Optional[EppaConfig] = None,
                       deadline: Optional[Deadline] = None) -> MinWitnessResult:
    """Smallest host on |base|..max_m vertices that is a verified witness for ``base``."""
    cfg = resolve_config(config)
    if not isinstance(base, Graph):
        raise InputError(f"minimal witness search runs on graphs, got a {base.kind}")
    require_cap(base.n, cfg.search_max_base, "minimal witness search base size")
    require_cap(max_m, cfg.search_max_host_pruned if prune_transitive else cfg.search_max_host,
                "minimal witness search host size")
    deadline = deadline or Deadline(cfg.timeout_secs)
    result = MinWitnessResult(base, max_m, prune_transitive)
    marked = base.n
    embedding = tuple(range(marked))

    layer = [base]
    m = base.n
    while m <= max_m:
        result.hosts_per_size[m] = len(layer)
        verified = 0
        for host in layer:
            if prune_transitive and not is_vertex_transitive(host, deadline):
                continue
            verified += 1
            witness = Witness(base, host, embedding, 'search-min')
            report = verify_witness(witness, 'search', stop_on_failure=True, deadline=deadline,
                                    config=cfg, quiet=True)
            if report.passed:
                result.verified_per_size[m] = verified
                result.value = m
                result.witness = witness
                logger.info(f"Smallest witness has {m} vertices ({len(layer)} hosts on {m} vertices)")
                return result
        result.verified_per_size[m] = verified
        logger.debug(f"no witness among {len(layer)} hosts on {m} vertices")
        if m == max_m:
            break
        layer = _grow(layer, marked, cfg, deadline)
        m += 1
    logger.info(f"Minimal witness search exhausted up to {max_m} vertices")
    return result
