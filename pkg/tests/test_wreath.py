"""W_n arithmetic, checked against its faithful affine action on F_2^{2n}."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hspcrypt.errors import DimensionMismatch, TooLarge
from hspcrypt.wreath import (
    WreathElement,
    WreathGroup,
    all_subgroups,
    conjugate_subgroup,
    is_in_base,
    parse_generators,
    random_subgroup,
    swap_halves,
    w_closure,
    w_compose,
    w_inverse,
)

E = WreathElement.parse


def as_permutation(x):
    """x acts on v = (p, q) in F_2^n x F_2^n by v -> (a, b) + swap^t(v)."""
    n = x.n
    perm = []
    for p in range(1 << n):
        for q in range(1 << n):
            if x.t:
                p2, q2 = q, p
            else:
                p2, q2 = p, q
            perm.append(((x.a ^ p2) << n) | (x.b ^ q2))
    return tuple(perm)


def compose_perm(f, g):
    """(f o g)(v) = f(g(v))."""
    return tuple(f[g[v]] for v in range(len(g)))


def wreath_elements(n):
    return st.builds(lambda a, b, t: WreathElement(n, a, b, t),
                     st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1), st.integers(0, 1))


@pytest.mark.parametrize("x,y,z", [
    ("1|0|1", "0|1|0", "0|0|1"),
    ("1|0|1", "1|0|1", "1|1|0"),
])
def test_compose_examples(x, y, z):
    assert w_compose(E(x), E(y)) == E(z)


def test_text_form():
    x = E("10|01|1")
    assert (x.n, x.a, x.b, x.t) == (2, 2, 1, 1)
    assert str(x) == "10|01|1"
    with pytest.raises(ValueError):
        E("10|1|0")
    assert parse_generators("10|00|0; 01|01|1") == [E("10|00|0"), E("01|01|1")]
    assert parse_generators("") == []


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_action_is_faithful_homomorphism(n):
    rng = np.random.default_rng(n)
    g = WreathGroup(n)
    perms = {}
    for x in g.elements():
        perms.setdefault(as_permutation(x), x)
    assert len(perms) == g.order
    for _ in range(300):
        x, y = g.random_element(rng), g.random_element(rng)
        assert as_permutation(w_compose(x, y)) == compose_perm(as_permutation(x), as_permutation(y))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_group_axioms(n):
    rng = np.random.default_rng(100 + n)
    g = WreathGroup(n)
    e = g.identity()
    for _ in range(1000):
        x, y, z = (g.random_element(rng) for _ in range(3))
        assert w_compose(w_compose(x, y), z) == w_compose(x, w_compose(y, z))
        assert w_compose(x, e) == x == w_compose(e, x)
        assert w_compose(x, w_inverse(x)) == e == w_compose(w_inverse(x), x)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(wreath_elements(n), wreath_elements(n))))
def test_base_elements_commute(pair):
    x, y = pair
    x, y = WreathElement(x.n, x.a, x.b, 0), WreathElement(y.n, y.a, y.b, 0)
    assert w_compose(x, y) == w_compose(y, x)


def test_non_abelian():
    assert w_compose(E("1|0|1"), E("0|1|0")) != w_compose(E("0|1|0"), E("1|0|1"))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        w_compose(E("1|0|0"), E("10|00|0"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_order_and_base(n):
    elems = list(WreathGroup(n).elements())
    assert len(set(elems)) == 2 ** (2 * n + 1)
    assert sum(is_in_base(x) for x in elems) == len(elems) // 2
    base = WreathGroup(n).base_group()
    assert base.order == 4 ** n


@pytest.mark.parametrize("n", [1, 2, 3])
def test_base_is_normal(n):
    g = WreathGroup(n)
    base = g.base_group()
    for s in g.elements():
        assert conjugate_subgroup(base, s) == base


def test_index_roundtrip():
    g = WreathGroup(3)
    assert [g.index(x) for x in g.elements()] == list(range(g.order))
    for i in range(g.order):
        assert WreathElement.from_index(3, i).index == i


def test_conjugation_examples():
    u = w_closure([E("10|00|0")])
    assert conjugate_subgroup(u, E("00|00|0")) == u
    assert conjugate_subgroup(u, E("10|00|0")) == u
    assert conjugate_subgroup(u, E("00|00|1")) == w_closure([E("00|10|0")])


def test_conjugation_preserves_subgroups():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        u = random_subgroup(n, rng)
        s = WreathGroup(n).random_element(rng)
        c = conjugate_subgroup(u, s)
        assert c.order == u.order
        assert c == w_closure(list(c.closure), n=n)
        s_inv = w_inverse(s)
        assert c.closure == frozenset(w_compose(w_compose(s, x), s_inv) for x in u.closure)


def test_conjugation_by_swap_is_swap_of_halves():
    rng = np.random.default_rng(8)
    swap = E("000|000|1")
    for _ in range(50):
        u = random_subgroup(3, rng)
        assert conjugate_subgroup(u, swap).closure == frozenset(swap_halves(x) for x in u.closure)


def test_closure_examples():
    assert w_closure([], n=2).order == 1
    assert w_closure(list(WreathGroup(1).elements())).order == 8
    assert w_closure([E("1|1|0")]).order == 2
    with pytest.raises(TooLarge):
        w_closure([WreathElement(5, 0, 0, 1)])


def test_subgroup_orders_divide_group_order():
    for n in (1, 2):
        for u in all_subgroups(n):
            assert (2 ** (2 * n + 1)) % u.order == 0


def test_subgroup_count():
    # W_1 is the dihedral group of order 8, which has 10 subgroups
    assert len(all_subgroups(1)) == 10


def test_subgroups_are_linear_under_index_encoding():
    """Closures are F_2-subspaces of the index bits; the W_n solver relies on this."""
    rng = np.random.default_rng(9)
    subs = all_subgroups(1) + all_subgroups(2) + [random_subgroup(3, rng) for _ in range(40)]
    for u in subs:
        idx = set(u.index_vectors())
        assert all((x ^ y) in idx for x in idx for y in idx)


def test_closure_against_permutation_closure():
    rng = np.random.default_rng(10)
    for _ in range(30):
        n = int(rng.integers(1, 4))
        gens = [WreathGroup(n).random_element(rng) for _ in range(int(rng.integers(1, 3)))]
        perms = {as_permutation(WreathElement.identity(n))}
        frontier = list(perms)
        gp = [as_permutation(g) for g in gens]
        while frontier:
            nxt = []
            for p in frontier:
                for q in gp:
                    r = compose_perm(p, q)
                    if r not in perms:
                        perms.add(r)
                        nxt.append(r)
            frontier = nxt
        u = w_closure(gens)
        assert {as_permutation(x) for x in u.closure} == perms
