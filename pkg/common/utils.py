import os
import time
from dataclasses import dataclass
from typing import Optional
from dotenv import load_dotenv

from common.errors import CapacityError, InputError

VERSION = "0.1.0"


@dataclass(frozen=True)
class EppaConfig:
    """Size caps and defaults shared by constructions, verification and search."""
    canonical_max_vertices: int = 12
    valuation_max_n: int = 16
    kneser_max_vertices: int = 1_000_000
    kkfree_max_vertices: int = 100_000
    generalized_max_vertices: int = 100_000
    verify_max_vertices: int = 9
    exact_bound_max_vertices: int = 25
    search_max_base: int = 6
    search_max_host: int = 10
    search_max_host_pruned: int = 12
    max_hosts: int = 500_000
    timeout_secs: float = 0.0
    results_file: str = 'var/results.jsonl'

    @classmethod
    def defaults(cls) -> 'EppaConfig':
        return cls()

    @classmethod
    def from_env(cls) -> 'EppaConfig':
        """Create configuration from environment variables (and a .env file if present)."""
        load_dotenv()

        defaults = cls()
        return cls(
            canonical_max_vertices=_env_int('EPPA_CANONICAL_MAX_VERTICES', defaults.canonical_max_vertices),
            valuation_max_n=_env_int('EPPA_VALUATION_MAX_N', defaults.valuation_max_n),
            kneser_max_vertices=_env_int('EPPA_KNESER_MAX_VERTICES', defaults.kneser_max_vertices),
            kkfree_max_vertices=_env_int('EPPA_KKFREE_MAX_VERTICES', defaults.kkfree_max_vertices),
            generalized_max_vertices=_env_int('EPPA_GENERALIZED_MAX_VERTICES', defaults.generalized_max_vertices),
            verify_max_vertices=_env_int('EPPA_VERIFY_MAX_VERTICES', defaults.verify_max_vertices),
            exact_bound_max_vertices=_env_int('EPPA_EXACT_BOUND_MAX_VERTICES', defaults.exact_bound_max_vertices),
            search_max_base=_env_int('EPPA_SEARCH_MAX_BASE', defaults.search_max_base),
            search_max_host=_env_int('EPPA_SEARCH_MAX_HOST', defaults.search_max_host),
            search_max_host_pruned=_env_int('EPPA_SEARCH_MAX_HOST_PRUNED', defaults.search_max_host_pruned),
            max_hosts=_env_int('EPPA_MAX_HOSTS', defaults.max_hosts),
            timeout_secs=float(os.getenv('EPPA_TIMEOUT_SECS', str(defaults.timeout_secs)) or 0),
            results_file=os.getenv('EPPA_RESULTS_FILE', defaults.results_file).strip() or defaults.results_file,
        )


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, '').strip().replace('_', '')
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"Environment variable {name} must be an integer, got {raw!r}")


def resolve_config(config: Optional[EppaConfig]) -> EppaConfig:
    return config if config is not None else EppaConfig.defaults()


class Deadline:
    """Wall-clock budget; ``timeout_secs <= 0`` means unlimited."""

    def __init__(self, timeout_secs: float = 0.0):
        self.timeout_secs = timeout_secs
        self.started = time.monotonic()

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def check(self, what: str = 'operation') -> None:
        if self.timeout_secs > 0 and self.elapsed() > self.timeout_secs:
            raise CapacityError(f"{what} exceeded the {self.timeout_secs:g}s time budget")


def require_cap(value: int, cap: int, what: str) -> None:
    """Raise CapacityError when ``value`` exceeds ``cap``."""
    if value > cap:
        raise CapacityError(f"{what}: {value} exceeds the configured cap of {cap}")


def one_based(vertex: int) -> int:
    """Display index for a 0-based vertex (constructions print [n] = {1..n})."""
    return vertex + 1
