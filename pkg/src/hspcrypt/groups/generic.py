"""Generic abelian groups defined by user intrinsics over a finite domain.

The domain ``U`` is the index set ``range(domain_size)``. Without
intrinsics its own law is addition modulo ``domain_size``. Structure is
computed from a generating set: each new generator contributes one
relation (its smallest multiple landing in the span of the previous ones),
and the Smith form of the relation matrix yields both the invariant
factors and an explicit isomorphism onto ``AbelianGroup`` coordinates.
"""

from __future__ import annotations

import inspect
import threading
from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass
from typing import Any, NamedTuple, Optional

import numpy as np

from ..errors import (
    InconsistentOrder,
    IntrinsicArity,
    MissingIntrinsics,
    MissingRandom,
    UnderspecifiedSubset,
)
from .abelian import AbelianGroup
from .intmat import smith_normal_form


@dataclass(frozen=True)
class GenericGroupDescriptor:
    domain_size: int
    id_intrinsic: Optional[Callable] = None
    add_intrinsic: Optional[Callable] = None
    inverse_intrinsic: Optional[Callable] = None
    use_representation: bool = False
    order: Optional[int] = None
    user_generators: Optional[Sequence[Hashable]] = None
    proper_subset: bool = False
    random_intrinsic: Optional[Callable] = None
    compute_structure: bool = False


def _arity_ok(fn: Callable, nargs: int) -> bool:
    try:
        inspect.signature(fn).bind(*([None] * nargs))
    except TypeError:
        return False
    except ValueError:  # builtins without signatures
        return True
    return True


def validate_descriptor(d: GenericGroupDescriptor) -> None:
    if d.domain_size < 1:
        raise ValueError("domain_size must be positive")
    intrinsics = (d.id_intrinsic, d.add_intrinsic, d.inverse_intrinsic)
    if any(f is not None for f in intrinsics) and not all(f is not None for f in intrinsics):
        raise MissingIntrinsics("IdIntrinsic, AddIntrinsic and InverseIntrinsic must be set together")
    if d.proper_subset and d.order is None and d.user_generators is None:
        raise UnderspecifiedSubset("a proper subset needs Order or UserGenerators")
    if d.proper_subset and d.random_intrinsic is None and d.user_generators is None:
        raise MissingRandom("a proper subset needs RandomIntrinsic or UserGenerators")
    if d.id_intrinsic is not None:
        for fn, n, name in ((d.id_intrinsic, 1, "IdIntrinsic"),
                            (d.add_intrinsic, 2, "AddIntrinsic"),
                            (d.inverse_intrinsic, 2, "InverseIntrinsic")):
            if not _arity_ok(fn, n):
                raise IntrinsicArity(f"{name} must accept {n} argument(s)")
    if d.random_intrinsic is not None and not _arity_ok(d.random_intrinsic, 1):
        raise IntrinsicArity("RandomIntrinsic must accept 1 argument")
    if d.order is not None and d.order < 1:
        raise ValueError("order must be positive")


class Structure(NamedTuple):
    generators: tuple          # domain elements the structure was built from
    relations: list            # one relation row per generator
    group: Optional[AbelianGroup]   # None for the trivial group
    to_coords: dict            # domain element -> AbelianGroup coordinates
    from_coords: dict          # coordinates -> domain element
    representation: dict       # domain element -> exponent vector over generators


class GenericGroup:
    """Abelian group whose law is given by intrinsics on a finite domain."""

    def __init__(self, descriptor: GenericGroupDescriptor, rng: Optional[np.random.Generator] = None):
        validate_descriptor(descriptor)
        self.descriptor = descriptor
        self._rng = rng if rng is not None else np.random.default_rng(0)
        self._lock = threading.Lock()
        self._structure: Optional[Structure] = None
        d = descriptor
        if d.id_intrinsic is not None:
            self._identity = d.id_intrinsic(range(d.domain_size))
        else:
            self._identity = 0
        if d.compute_structure or d.use_representation:
            self.structure

    @property
    def domain(self) -> range:
        return range(self.descriptor.domain_size)

    def identity(self):
        return self._identity

    def compose(self, a, b):
        d = self.descriptor
        if d.add_intrinsic is not None:
            return d.add_intrinsic(a, b)
        return (a + b) % d.domain_size

    def inverse(self, a):
        d = self.descriptor
        if d.inverse_intrinsic is not None:
            # the inverse intrinsic is binary; its second argument is the identity
            return d.inverse_intrinsic(a, self._identity)
        return -a % d.domain_size

    def random_element(self, rng: np.random.Generator):
        d = self.descriptor
        if d.random_intrinsic is not None:
            return d.random_intrinsic(rng)
        if not d.proper_subset:
            return int(rng.integers(d.domain_size))
        s = self.structure
        if s.group is None:
            return self._identity
        return s.from_coords[s.group.random_element(rng)]

    @property
    def structure_computed(self) -> bool:
        return self._structure is not None

    @property
    def structure(self) -> Structure:
        if self._structure is None:
            with self._lock:
                if self._structure is None:
                    self._structure = self._compute_structure()
        return self._structure

    @property
    def order(self) -> int:
        if self.descriptor.order is not None:
            return self.descriptor.order
        s = self.structure
        return len(s.to_coords)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        s = self.structure
        return () if s.group is None else s.group.invariant_factors

    @property
    def abelian(self) -> Optional[AbelianGroup]:
        return self.structure.group

    def to_coords(self, x):
        return self.structure.to_coords[x]

    def from_coords(self, c):
        return self.structure.from_coords[tuple(c)]

    def representation(self, x) -> tuple[int, ...]:
        """Exponent vector of ``x`` over the structure generators."""
        return self.structure.representation[x]

    def element_order(self, x) -> int:
        s = self.structure
        if s.group is None:
            return 1
        return s.group.element_order(s.to_coords[x])

    def __contains__(self, x) -> bool:
        return x in self.structure.to_coords

    def _scale(self, m: int, x):
        acc, base = self._identity, x
        while m:
            if m & 1:
                acc = self.compose(acc, base)
            base = self.compose(base, base)
            m >>= 1
        return acc

    def _compute_structure(self) -> Structure:
        d = self.descriptor
        gens: list[Any] = []
        relations: list[list[int]] = []
        table: dict[Any, tuple[int, ...]] = {self._identity: ()}

        def adjoin(g):
            # smallest t > 0 with t*g already in the span; its exponent vector
            # there gives the relation t*e_new - rep = 0
            steps = [self._identity]
            x = g
            while x not in table:
                steps.append(x)
                x = self.compose(x, g)
                if len(steps) > d.domain_size:
                    raise InconsistentOrder(f"element {g!r} does not have finite order within the domain")
            t = len(steps)
            rep = table[x]
            gens.append(g)
            for row in relations:
                row.append(0)
            relations.append([-e for e in rep] + [t])
            new = {}
            for elem, vec in table.items():
                y = elem
                for s in range(t):
                    if s:
                        y = self.compose(y, g)
                    new[y] = vec + (s,)
            table.clear()
            table.update(new)

        for g in d.user_generators or ():
            if g not in table:
                adjoin(g)
            else:
                gens.append(g)
                for row in relations:
                    row.append(0)
                relations.append([-e for e in table[g]] + [1])
                for k in table:
                    table[k] += (0,)

        if not d.proper_subset:
            for x in self.domain:
                if x not in table:
                    adjoin(x)
        elif d.user_generators is None:
            draws = 0
            while len(table) < d.order:
                g = d.random_intrinsic(self._rng)
                draws += 1
                if g not in table:
                    adjoin(g)
                if draws > 100 * max(d.order, 1) or len(table) > d.order:
                    raise InconsistentOrder(f"random draws do not generate a group of order {d.order}")

        if d.order is not None and len(table) != d.order:
            raise InconsistentOrder(f"declared order {d.order}, generated group has order {len(table)}")

        m = len(gens)
        if m == 0:
            return Structure((), [], None, {self._identity: ()}, {(): self._identity}, {self._identity: ()})
        _, diag, v = smith_normal_form(relations)
        factors = [diag[i][i] for i in range(m)]
        keep = [i for i in range(m) if factors[i] > 1]
        if not keep:
            return Structure(tuple(gens), relations, None, {self._identity: ()},
                             {(): self._identity}, dict(table))
        group = AbelianGroup(tuple(factors[i] for i in keep))
        to_coords = {}
        from_coords = {}
        for elem, vec in table.items():
            z = [sum(vec[r] * v[r][c] for r in range(m)) for c in range(m)]
            coords = group.element(z[i] for i in keep)
            to_coords[elem] = coords
            from_coords[coords] = elem
        if len(from_coords) != len(table):
            raise InconsistentOrder("coordinate map is not injective; the law is not a group law")
        return Structure(tuple(gens), relations, group, to_coords, from_coords, dict(table))


def build_generic_group(descriptor: GenericGroupDescriptor,
                        rng: Optional[np.random.Generator] = None) -> GenericGroup:
    """Validate the descriptor and build the group.

    Structure is computed at creation when ``compute_structure`` (or
    ``use_representation``) is set, otherwise on first structural query.
    """
    return GenericGroup(descriptor, rng)

