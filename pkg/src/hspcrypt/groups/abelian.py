"""Finite abelian groups Z_{n1} x ... x Z_{nk} and their subgroups.

Elements are plain tuples of residues. Subgroups are stored as the lattice
of integer vectors that reduce into them, kept in Hermite normal form; the
lattice always contains the relation rows ``n_j * e_j`` so it has full
rank, its determinant is the subgroup index, and membership is a
triangular solve.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from ..errors import (
    DegenerateBase,
    DimensionMismatch,
    NotInCyclicSubgroup,
    NotPrime,
    UnliftableTerm,
)
from .intmat import hermite_basis, integer_kernel, smith_normal_form, solve_upper_triangular_left

GroupElement = tuple[int, ...]


@dataclass(frozen=True)
class AbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n) for n in self.invariant_factors)
        if not factors:
            raise ValueError("an abelian group needs at least one factor")
        if any(n < 2 for n in factors):
            raise ValueError(f"invariant factors must be >= 2, got {factors}")
        object.__setattr__(self, "invariant_factors", factors)

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Parse the comma-separated descriptor form, e.g. ``"8,4,2"``."""
        try:
            factors = tuple(int(part) for part in text.split(","))
        except ValueError:
            raise ValueError(f"bad group descriptor {text!r}") from None
        return cls(factors)

    def descriptor(self) -> str:
        return ",".join(str(n) for n in self.invariant_factors)

    def __str__(self):
        return " x ".join(f"Z_{n}" for n in self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @cached_property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.invariant_factors)

    def _check(self, a: Sequence[int]) -> None:
        if len(a) != self.rank:
            raise DimensionMismatch(f"element {tuple(a)} has {len(a)} coordinates, group has {self.rank}")

    def element(self, coords: Iterable[int]) -> GroupElement:
        coords = tuple(int(c) for c in coords)
        self._check(coords)
        return tuple(c % n for c, n in zip(coords, self.invariant_factors))

    def identity(self) -> GroupElement:
        return (0,) * self.rank

    def compose(self, a: Sequence[int], b: Sequence[int]) -> GroupElement:
        self._check(a)
        self._check(b)
        return tuple((x + y) % n for x, y, n in zip(a, b, self.invariant_factors))

    def inverse(self, a: Sequence[int]) -> GroupElement:
        self._check(a)
        return tuple(-x % n for x, n in zip(a, self.invariant_factors))

    def scale(self, m: int, a: Sequence[int]) -> GroupElement:
        """``m * a`` in additive notation."""
        self._check(a)
        return tuple(m * x % n for x, n in zip(a, self.invariant_factors))

    def element_order(self, a: Sequence[int]) -> int:
        self._check(a)
        return reduce(math.lcm, (n // math.gcd(x, n) for x, n in zip(a, self.invariant_factors)), 1)

    def is_member(self, a: Sequence[int]) -> bool:
        return len(a) == self.rank and all(0 <= x < n for x, n in zip(a, self.invariant_factors))

    # indexing used by the simulator: row-major mixed radix
    def index(self, a: Sequence[int]) -> int:
        self._check(a)
        idx = 0
        for x, n in zip(a, self.invariant_factors):
            idx = idx * n + x % n
        return idx

    def element_at(self, index: int) -> GroupElement:
        coords = []
        for n in reversed(self.invariant_factors):
            index, x = divmod(index, n)
            coords.append(x)
        return tuple(reversed(coords))

    def elements(self) -> Iterator[GroupElement]:
        return itertools.product(*(range(n) for n in self.invariant_factors))

    def random_element(self, rng: np.random.Generator) -> GroupElement:
        return tuple(int(rng.integers(n)) for n in self.invariant_factors)

    def relation_rows(self) -> list[list[int]]:
        k = self.rank
        return [[n if i == j else 0 for i in range(k)] for j, n in enumerate(self.invariant_factors)]


def random_element(group: AbelianGroup, rng: np.random.Generator) -> GroupElement:
    return group.random_element(rng)


@dataclass(frozen=True)
class Character:
    """The character ``g -> exp(2 pi i sum_j y_j g_j / n_j)``."""

    group: AbelianGroup
    exponents: GroupElement

    def __post_init__(self):
        object.__setattr__(self, "exponents", self.group.element(self.exponents))

    def phase(self, g: Sequence[int]) -> Fraction:
        self.group._check(g)
        total = sum(Fraction(y * x, n) for y, x, n in zip(self.exponents, g, self.group.invariant_factors))
        return total - math.floor(total)

    def __call__(self, g: Sequence[int]) -> complex:
        return cmath.exp(2j * math.pi * float(self.phase(g)))

    def is_trivial_on(self, g: Sequence[int]) -> bool:
        return self.phase(g) == 0


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: AbelianGroup
    generators: tuple[GroupElement, ...] = ()
    basis: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        gens = tuple(self.parent.element(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        rows = [list(g) for g in gens] + self.parent.relation_rows()
        basis = hermite_basis(rows, self.parent.rank)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in basis))

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.basis == other.basis

    def __hash__(self):
        return hash((self.parent, self.basis))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Subgroup(<{gens}> <= {self.parent}, order={self.order})"

    @property
    def index(self) -> int:
        return math.prod(self.basis[j][j] for j in range(self.parent.rank))

    @property
    def order(self) -> int:
        return self.parent.order // self.index

    @cached_property
    def structure(self) -> list[int]:
        """Invariant factors of this subgroup (``[]`` when trivial)."""
        # each relation row n_j e_j, written in the lattice basis, gives the
        # relation matrix of L / (n Z^k), which is this subgroup
        b = [list(r) for r in self.basis]
        rel = [solve_upper_triangular_left(b, row) for row in self.parent.relation_rows()]
        _, d, _ = smith_normal_form(rel)
        return [d[i][i] for i in range(len(d)) if d[i][i] > 1]

    def contains(self, g: Sequence[int]) -> bool:
        self.parent._check(g)
        v = list(g)
        for j, row in enumerate(self.basis):
            q, rem = divmod(v[j], row[j])
            if rem:
                return False
            if q:
                for c in range(j, len(v)):
                    v[c] -= q * row[c]
        return True

    __contains__ = contains

    def elements(self) -> Iterator[GroupElement]:
        factors = self.parent.invariant_factors
        ranges = [range(n // self.basis[j][j]) for j, n in enumerate(factors)]
        for combo in itertools.product(*ranges):
            yield tuple(
                sum(c * self.basis[i][j] for i, c in enumerate(combo[: j + 1])) % factors[j]
                for j in range(len(factors))
            )

    def coset_rep(self, g: Sequence[int]) -> GroupElement:
        """Lexicographically smallest element of ``g + H``."""
        v = list(self.parent.element(g))
        for j, row in enumerate(self.basis):
            q = v[j] // row[j]
            if q:
                for c in range(j, len(v)):
                    v[c] -= q * row[c]
        return self.parent.element(v)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def reduced_generators(self) -> list[GroupElement]:
        """Nonzero Hermite rows reduced into the group; they generate H."""
        gens = []
        for row in self.basis:
            g = self.parent.element(row)
            if any(g):
                gens.append(g)
        return gens


def _flatten_terms(group: AbelianGroup, terms) -> Iterator[GroupElement]:
    for term in terms:
        if isinstance(term, (int, np.integer)):
            if group.rank != 1:
                raise UnliftableTerm(f"integer term {term} needs a rank-1 group, got rank {group.rank}")
            yield (int(term) % group.invariant_factors[0],)
            continue
        items = list(term)
        if all(isinstance(x, (int, np.integer)) for x in items):
            if len(items) != group.rank:
                raise UnliftableTerm(f"term {tuple(items)} has {len(items)} coordinates, group has {group.rank}")
            yield group.element(items)
        else:
            yield from _flatten_terms(group, items)


def subgroup_from_generators(group: AbelianGroup, terms: Iterable = ()) -> Subgroup:
    """Subgroup generated by a generator list.

    A term may be an element, an integer sequence (reduced mod the factors),
    a bare integer for rank-1 groups, or a nested set/sequence of terms.
    The structure is computed eagerly since the parent structure is known.
    """
    h = Subgroup(group, tuple(_flatten_terms(group, terms)))
    h.structure
    return h


def subgroup_from_random(group: AbelianGroup, order: int, draw, rng: np.random.Generator,
                         max_draws: int = 10_000) -> Subgroup:
    """Subgroup of the given order grown from draws of ``draw(rng)``."""
    if group.order % order:
        raise ValueError(f"order {order} does not divide |G| = {group.order}")
    gens: list[GroupElement] = []
    h = Subgroup(group)
    for _ in range(max_draws):
        if h.order == order:
            return h
        g = group.element(draw(rng))
        if not h.contains(g):
            gens.append(g)
            h = Subgroup(group, tuple(gens))
            if h.order > order or order % h.order:
                raise ValueError(f"draws leave a subgroup of order {order}")
    if h.order == order:
        return h
    raise ValueError(f"no subgroup of order {order} reached after {max_draws} draws")


def compute_structure(group: AbelianGroup, gens: Iterable[Sequence[int]]) -> list[int]:
    return Subgroup(group, tuple(gens)).structure


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def sylow_subgroup(group: AbelianGroup, p: int) -> Subgroup:
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    gens = []
    for j, n in enumerate(group.invariant_factors):
        cofactor = n
        while cofactor % p == 0:
            cofactor //= p
        if cofactor != n:
            gens.append(tuple(cofactor if i == j else 0 for i in range(group.rank)))
    return subgroup_from_generators(group, gens)


def contains(h: Subgroup, g: Sequence[int]) -> bool:
    return h.contains(g)


def canonical_coset_rep(h: Subgroup, g: Sequence[int]) -> GroupElement:
    return h.coset_rep(g)


def discrete_log(group: AbelianGroup, base: Sequence[int], target: Sequence[int]) -> int:
    """Smallest ``m >= 0`` with ``m * base == target`` (baby-step giant-step)."""
    base = group.element(base)
    target = group.element(target)
    if not any(base):
        if not any(target):
            return 0
        raise DegenerateBase("base is the identity")
    r = group.element_order(base)
    step = math.isqrt(r - 1) + 1
    baby = {}
    x = group.identity()
    for j in range(step):
        baby.setdefault(x, j)
        x = group.compose(x, base)
    giant = group.inverse(group.scale(step, base))
    y = target
    for i in range(step + 1):
        j = baby.get(y)
        if j is not None and i * step + j < r:
            return i * step + j
        y = group.compose(y, giant)
    raise NotInCyclicSubgroup(f"{target} is not a multiple of {base}")


def character_kernel(group: AbelianGroup, exponent_rows: Iterable[Sequence[int]]) -> Subgroup:
    """``{g : sum_j y_j g_j / n_j in Z for every y in exponent_rows}``.

    Solved as the integer kernel of ``[A | -M I]`` where ``A`` holds the
    rows scaled to the common modulus ``M = exp(G)``.
    """
    m = group.exponent
    factors = group.invariant_factors
    k = group.rank
    rows = [[y * (m // n) for y, n in zip(group.element(r), factors)] for r in exponent_rows]
    rows = [r for r in rows if any(x % m for x in r)]
    if not rows:
        return Subgroup(group, tuple(g for g in _unit_vectors(k)))
    s = len(rows)
    system = [rows[i] + [-m if t == i else 0 for t in range(s)] for i in range(s)]
    kernel = integer_kernel(system)
    return Subgroup(group, tuple(group.element(v[:k]) for v in kernel))


def _unit_vectors(k: int) -> list[GroupElement]:
    return [tuple(int(i == j) for i in range(k)) for j in range(k)]


def annihilator(h: Subgroup) -> Subgroup:
    """H^perp as a subgroup of the dual, identified with the same factors."""
    return character_kernel(h.parent, h.generators)


def characters_of(h: Subgroup) -> list[Character]:
    return [Character(h.parent, y) for y in h.elements()]
