"""Brute-force reference implementations used as test oracles.

Nothing here touches the normal-form machinery of the package: closures
are computed by saturation, characters by direct summation.
"""

import cmath
import itertools
import math

import numpy as np

from hspcrypt.groups import AbelianGroup


def divisor_chains(max_order, max_rank=6):
    """Every finite abelian group of order <= max_order, once, as n1 | n2 | ..."""
    out = []

    def grow(chain, order):
        if chain:
            out.append(tuple(chain))
        last = chain[-1] if chain else 1
        for m in range(1 if chain else 2, max_order // order + 1):
            n = last * m
            if order * n > max_order or len(chain) == max_rank:
                break
            grow(chain + [n], order * n)

    grow([], 1)
    return out


def add_table(group):
    """Index-level addition table of an abelian group, shape (|G|, |G|)."""
    coords = np.array(list(itertools.product(*[range(n) for n in group.invariant_factors])))
    factors = np.array(group.invariant_factors)
    s = (coords[:, None, :] + coords[None, :, :]) % factors
    return np.ravel_multi_index(tuple(np.moveaxis(s, -1, 0)), group.invariant_factors)


def closure(table, gens, identity=0):
    """Subgroup generated by element indices, by saturation."""
    members = {identity}
    frontier = [identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(members)


def adjoin(table, h, g):
    """<H, g> for a subgroup H (index frozenset): union of the cosets H + m*g."""
    base = np.fromiter(h, dtype=np.int64)
    out = set(h)
    shift = g
    while shift not in h:
        out.update(table[base, shift].tolist())
        shift = int(table[shift, g])
    return frozenset(out)


def all_subgroups(table):
    """Every subgroup, as frozensets of element indices."""
    n = table.shape[0]
    seen = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for h in frontier:
            for g in range(n):
                if g in h:
                    continue
                k = adjoin(table, h, g)
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        frontier = nxt
    return seen


def character_value(group, y, g):
    return cmath.exp(2j * math.pi * sum(a * b / n for a, b, n in zip(y, g, group.invariant_factors)))


def brute_annihilator(group, members):
    """Characters (as indices) that are 1 on every element of ``members``."""
    elems = list(group.elements())
    out = set()
    for yi, y in enumerate(elems):
        if all(sum(a * b * (group.exponent // n) for a, b, n in zip(y, elems[h], group.invariant_factors))
               % group.exponent == 0 for h in members):
            out.add(yi)
    return frozenset(out)


def multiples(group, g):
    seq = [group.identity()]
    while True:
        nxt = group.compose(seq[-1], g)
        if nxt == group.identity():
            return seq
        seq.append(nxt)


def random_group(rng, max_order=512, max_rank=3):
    while True:
        k = int(rng.integers(1, max_rank + 1))
        fs = tuple(int(x) for x in rng.integers(2, 17, size=k))
        if math.prod(fs) <= max_order:
            return AbelianGroup(fs)
