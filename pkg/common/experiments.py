"""
Seeded random-graph experiments for the lower-bound engine.

Every sample draws from its own child of ``numpy.random.SeedSequence(seed)``, so a
report depends only on (n, p, samples, seed) and not on evaluation order.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from statistics import median_low
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from common.bounds import BoundCertificate, lower_bound_hrus
from common.errors import InputError
from common.structures import Graph
from common.utils import Deadline, EppaConfig, resolve_config

logger = logging.getLogger('eppa')


def parse_probability(value: Union[str, float], n: int) -> float:
    """Edge probability from a float, a fraction 'a/b', or 'c/n' scaled by the vertex count."""
    if isinstance(value, (int, float)):
        p = float(value)
    else:
        text = value.strip().replace(' ', '')
        try:
            if text.endswith('/n'):
                p = float(Fraction(text[:-2])) / n
            else:
                p = float(Fraction(text))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot read edge probability {value!r}; use e.g. 0.5, 1/2 or 4/n")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability {p} outside [0, 1]")
    return p


def sample_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p): one uniform draw per vertex pair in lexicographic order."""
    pairs = list(combinations(range(n), 2))
    draws = rng.random(len(pairs))
    return Graph(n, frozenset(pair for pair, draw in zip(pairs, draws) if draw < p))


@dataclass
class ExperimentReport:
    n: int
    p: float
    samples: int
    seed: int
    mode: str
    values: List[int] = field(default_factory=list)
    profiles: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def minimum(self) -> int:
        return min(self.values)

    @property
    def median(self) -> int:
        return median_low(self.values)

    @property
    def maximum(self) -> int:
        return max(self.values)

    def distribution(self) -> List[List[int]]:
        """(independent-set size, largest k, count), sorted."""
        return [[size, k, count] for (size, k), count in sorted(Counter(self.profiles).items())]

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'p': self.p,
            'samples': self.samples,
            'seed': self.seed,
            'mode': self.mode,
            'min': self.minimum,
            'median': self.median,
            'max': self.maximum,
            'distribution': self.distribution(),
            'values': list(self.values),
        }


def _profile(certificate: BoundCertificate) -> Tuple[int, int]:
    best_k = max((k for _, k in certificate.witnesses), default=0)
    return len(certificate.independent_set), best_k


def random_experiment(n: int, p: Union[str, float], samples: int, seed: int,
                      mode: Optional[str] = None, config: Optional[EppaConfig] = None,
                      deadline: Optional[Deadline] = None) -> ExperimentReport:
    """Lower-bound certificates of ``samples`` independent G(n, p) draws.

    Exact mode runs when n is within the exact-bound cap, greedy otherwise.
    """
    cfg = resolve_config(config)
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if samples < 1:
        raise InputError(f"samples must be positive, got {samples}")
    if seed < 0:
        raise InputError(f"seed must be non-negative, got {seed}")
    probability = parse_probability(p, n)
    mode = mode or ('exact' if n <= cfg.exact_bound_max_vertices else 'greedy')
    deadline = deadline or Deadline(cfg.timeout_secs)

    report = ExperimentReport(n, probability, samples, seed, mode)
    for index, child in enumerate(np.random.SeedSequence(seed).spawn(samples)):
        deadline.check('random experiment')
        graph = sample_graph(n, probability, np.random.default_rng(child))
        certificate = lower_bound_hrus(graph, mode, cfg)
        report.values.append(certificate.value)
        report.profiles.append(_profile(certificate))
        logger.debug(f"sample {index}: {len(graph.edges)} edges, bound {certificate.value}")

    logger.info(
        f"Random experiment n={n} p={probability:g} ({samples} samples, {mode}): "
        f"min {report.minimum}, median {report.median}, max {report.maximum}"
    )
    return report
