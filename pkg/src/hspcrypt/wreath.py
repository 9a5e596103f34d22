"""The groups W_n = Z_2^n wr Z_2.

An element ``(a, b, t)`` holds two n-bit vectors and a swap bit. The
product is ``(a, b, t)(a', b', t') = (a ^ a'', b ^ b'', t ^ t')`` with
``(a'', b'') = (a', b')`` when ``t = 0`` and ``(b', a')`` when ``t = 1``.
Bit vectors are stored as ints; the text form writes each one MSB-first,
e.g. ``"10|01|1"``.

Every subgroup of W_n is also a linear subspace of F_2^{2n+1} under the
index encoding ``t << 2n | a << n | b``, which is what makes the Hadamard
transform useful on coset states.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, TooLarge

MAX_CLOSURE_N = 4


@dataclass(frozen=True, order=True)
class WreathElement:
    n: int
    a: int
    b: int
    t: int

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.n < 1 or not (0 <= self.a <= mask and 0 <= self.b <= mask and self.t in (0, 1)):
            raise ValueError(f"invalid W_{self.n} element ({self.a}, {self.b}, {self.t})")

    @classmethod
    def parse(cls, text: str) -> "WreathElement":
        try:
            a, b, t = text.strip().split("|")
        except ValueError:
            raise ValueError(f"expected 'a|b|t', got {text!r}") from None
        if len(a) != len(b) or len(t) != 1 or not a:
            raise ValueError(f"bad wreath element {text!r}")
        return cls(len(a), int(a, 2), int(b, 2), int(t, 2))

    def __str__(self):
        return f"{self.a:0{self.n}b}|{self.b:0{self.n}b}|{self.t}"

    @classmethod
    def identity(cls, n: int) -> "WreathElement":
        return cls(n, 0, 0, 0)

    def is_identity(self) -> bool:
        return not (self.a or self.b or self.t)

    @property
    def index(self) -> int:
        return (self.t << 2 * self.n) | (self.a << self.n) | self.b

    @classmethod
    def from_index(cls, n: int, index: int) -> "WreathElement":
        mask = (1 << n) - 1
        return cls(n, (index >> n) & mask, index & mask, (index >> 2 * n) & 1)

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        return w_compose(self, other)


def w_compose(x: WreathElement, y: WreathElement) -> WreathElement:
    if x.n != y.n:
        raise DimensionMismatch(f"W_{x.n} element times W_{y.n} element")
    a2, b2 = (y.a, y.b) if x.t == 0 else (y.b, y.a)
    return WreathElement(x.n, x.a ^ a2, x.b ^ b2, x.t ^ y.t)


def w_inverse(x: WreathElement) -> WreathElement:
    if x.t == 0:
        return x
    return WreathElement(x.n, x.b, x.a, 1)


def is_in_base(x: WreathElement) -> bool:
    return x.t == 0


def swap_halves(x: WreathElement) -> WreathElement:
    """The action of the swap bit on the base group (t is kept)."""
    return WreathElement(x.n, x.b, x.a, x.t)


class WreathGroup:
    """W_n as a whole, with the index encoding used by the simulator."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n

    def __eq__(self, other):
        return isinstance(other, WreathGroup) and other.n == self.n

    def __hash__(self):
        return hash(("W", self.n))

    def __repr__(self):
        return f"WreathGroup({self.n})"

    @property
    def order(self) -> int:
        return 1 << (2 * self.n + 1)

    def identity(self) -> WreathElement:
        return WreathElement.identity(self.n)

    def elements(self) -> Iterator[WreathElement]:
        for i in range(self.order):
            yield WreathElement.from_index(self.n, i)

    def index(self, x: WreathElement) -> int:
        if x.n != self.n:
            raise DimensionMismatch(f"element of W_{x.n} in W_{self.n}")
        return x.index

    def element_at(self, index: int) -> WreathElement:
        return WreathElement.from_index(self.n, index)

    def random_element(self, rng: np.random.Generator) -> WreathElement:
        return self.element_at(int(rng.integers(self.order)))

    def base_group(self) -> "WreathSubgroup":
        n = self.n
        gens = [WreathElement(n, 1 << i, 0, 0) for i in range(n)]
        gens += [WreathElement(n, 0, 1 << i, 0) for i in range(n)]
        return w_closure(gens, n=n)


@dataclass(frozen=True)
class WreathSubgroup:
    n: int
    generators: tuple[WreathElement, ...]
    closure: frozenset[WreathElement]

    @property
    def order(self) -> int:
        return len(self.closure)

    def __contains__(self, x: WreathElement) -> bool:
        return x in self.closure

    def __eq__(self, other):
        if not isinstance(other, WreathSubgroup):
            return NotImplemented
        return self.n == other.n and self.closure == other.closure

    def __hash__(self):
        return hash((self.n, self.closure))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"WreathSubgroup(<{gens}> <= W_{self.n}, order={self.order})"

    def intersect_base(self) -> "WreathSubgroup":
        base = [x for x in self.closure if x.t == 0]
        return WreathSubgroup(self.n, tuple(sorted(base)), frozenset(base))

    def index_vectors(self) -> list[int]:
        return sorted(x.index for x in self.closure)


def w_closure(gens: Iterable[WreathElement], n: int | None = None) -> WreathSubgroup:
    """Smallest subgroup containing ``gens``, by breadth-first saturation."""
    gens = tuple(gens)
    if n is None:
        if not gens:
            raise ValueError("n is required when gens is empty")
        n = gens[0].n
    if n > MAX_CLOSURE_N:
        raise TooLarge(f"closure enumeration is limited to n <= {MAX_CLOSURE_N}")
    if any(g.n != n for g in gens):
        raise DimensionMismatch("generators from different W_n")
    e = WreathElement.identity(n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = w_compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    # finite group: closure under products already contains inverses
    return WreathSubgroup(n, gens, frozenset(seen))


def conjugate_subgroup(u: WreathSubgroup, s: WreathElement) -> WreathSubgroup:
    """``s U s^-1``."""
    if s.n != u.n:
        raise DimensionMismatch(f"conjugating a W_{u.n} subgroup by a W_{s.n} element")
    s_inv = w_inverse(s)
    conj = frozenset(w_compose(w_compose(s, x), s_inv) for x in u.closure)
    gens = tuple(w_compose(w_compose(s, g), s_inv) for g in u.generators)
    return WreathSubgroup(u.n, gens, conj)


def all_subgroups(n: int) -> list[WreathSubgroup]:
    """Every subgroup of W_n, grown one generator at a time (n <= 2 only)."""
    if n > 2:
        raise TooLarge("exhaustive subgroup listing is limited to n <= 2")
    group = WreathGroup(n)
    elems = list(group.elements())
    found = {w_closure([], n=n)}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            for x in elems:
                if x not in h.closure:
                    k = w_closure(h.generators + (x,), n=n)
                    if k not in found:
                        found.add(k)
                        nxt.append(k)
        frontier = nxt
    return sorted(found, key=lambda h: (h.order, h.index_vectors()))


def random_subgroup(n: int, rng: np.random.Generator, max_gens: int = 2) -> WreathSubgroup:
    group = WreathGroup(n)
    k = int(rng.integers(0, max_gens + 1))
    return w_closure([group.random_element(rng) for _ in range(k)], n=n)


def parse_generators(text: str) -> list[WreathElement]:
    """``"10|00|0;01|01|1"`` -> elements. An empty string gives no generators."""
    return [WreathElement.parse(part) for part in text.split(";") if part.strip()]

