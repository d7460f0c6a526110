"""
Coherent extenders.

Given an extender that is multiplicative on Aut(C) for every induced C, pick one
representative r(C) per isomorphism type and a connecting isomorphism
iota_C: r(C) -> C.  The lifted extender

    Psi(f) = Psi(iota_D) . base(iota_D^-1 f iota_C) . Psi(iota_C)^-1      (f: C -> D)

satisfies Psi(gf) = Psi(g) Psi(f) on every composable pair.
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

from common.errors import PreconditionError
from common.search import maps_on, canonical_form
from common.structures import (
    PartialIso, Permutation, Structure, compose_permutations, invert_permutation,
)
from common.utils import EppaConfig

logger = logging.getLogger('eppa')

Extender = Callable[[PartialIso], Permutation]


def _members(mask: int) -> Tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def _mask(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class CoherentExtender:
    """Representative-based lift of a subgroup-multiplicative extender."""

    coherent = True

    def __init__(self, base: Structure, extender: Extender, host_size: int,
                 check: bool = True, config: Optional[EppaConfig] = None):
        self.base = base
        self.extender = extender
        self.host_size = host_size
        self.identity: Permutation = tuple(range(host_size))
        self._representative: Dict[int, int] = {}
        self._connecting: Dict[int, PartialIso] = {}
        self._lifted_connecting: Dict[int, Permutation] = {}

        first_of_type: Dict[object, int] = {}
        for mask in range(1 << base.n):
            form = canonical_form(base.induced(_members(mask)), config=config)
            self._representative[mask] = first_of_type.setdefault(form, mask)
        logger.debug(f"{len(first_of_type)} isomorphism types of induced substructures")

        if check:
            for representative in sorted(set(first_of_type.values())):
                self._check_multiplicative(representative)

    def representative(self, vertices) -> Tuple[int, ...]:
        return _members(self._representative[_mask(vertices)])

    def connecting(self, vertices) -> PartialIso:
        """Lexicographically first isomorphism r(C) -> C; the identity when C = r(C)."""
        mask = _mask(vertices)
        if mask not in self._connecting:
            target = set(_members(mask))
            source = _members(self._representative[mask])
            found = None
            for mapping in maps_on(self.base, source):
                if set(mapping.values()) == target:
                    found = mapping
                    break
            if found is None:
                raise PreconditionError(f"no isomorphism from {list(source)} onto {sorted(target)}")
            self._connecting[mask] = PartialIso(tuple(sorted(found.items())), self.base)
        return self._connecting[mask]

    def _lift_connecting(self, mask: int) -> Permutation:
        if mask not in self._lifted_connecting:
            if self._representative[mask] == mask:
                self._lifted_connecting[mask] = self.identity
            else:
                self._lifted_connecting[mask] = tuple(self.extender(self.connecting(_members(mask))))
        return self._lifted_connecting[mask]

    def _automorphisms(self, representative: int) -> List[PartialIso]:
        members = _members(representative)
        return [
            PartialIso(tuple(sorted(m.items())), self.base)
            for m in maps_on(self.base, members)
            if set(m.values()) == set(members)
        ]

    def _check_multiplicative(self, representative: int) -> None:
        automorphisms = self._automorphisms(representative)
        images = {f: tuple(self.extender(f)) for f in automorphisms}
        for f in automorphisms:
            for g in automorphisms:
                expected = images[g.compose(f)]
                if compose_permutations(images[g], images[f]) != expected:
                    raise PreconditionError(
                        f"base extender is not multiplicative on Aut(C) for C={list(_members(representative))}: "
                        f"f={f.describe()} g={g.describe()}"
                    )

    def __call__(self, partial: PartialIso) -> Permutation:
        domain_mask = _mask(partial.domain)
        image_mask = _mask(partial.image)
        iota_c = self.connecting(partial.domain)
        iota_d = self.connecting(partial.image)
        # alpha = iota_D^-1 f iota_C is an automorphism of r(C)
        alpha = iota_d.inverse().compose(partial.compose(iota_c))
        core = tuple(self.extender(alpha))
        lifted = compose_permutations(
            self._lift_connecting(image_mask),
            compose_permutations(core, invert_permutation(self._lift_connecting(domain_mask))),
        )
        return lifted


def make_coherent_extender(base: Structure, extender: Extender, host_size: int,
                           config: Optional[EppaConfig] = None) -> CoherentExtender:
    """Lift ``extender`` to a coherent one; PreconditionError when it is not multiplicative on some Aut(r(C))."""
    lifted = CoherentExtender(base, extender, host_size, check=True, config=config)
    logger.info(f"Built coherent extender over {host_size} host vertices")
    return lifted
