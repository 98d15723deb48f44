import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

import endv_oracle as ev
from operad_forge.perm import (ExtendedPermutation, PermError, Permutation, all_extended, all_permutations,
                               block_permutation, block_sum, compose, cycle, insert, parse_perm)


def perms(max_n=5):
    return st.integers(1, max_n).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(
        lambda p: Permutation(tuple(p)))


def brute_product(a, b):
    """(a o b)(i) = a(b(i)) straight from the one-line images."""
    return tuple(a[b[i] - 1] for i in range(len(a)))


def test_compose_identity_and_involution():
    e3 = Permutation.identity(3)
    assert compose(e3, e3) == e3
    s = Permutation((2, 1))
    assert compose(s, s) == Permutation.identity(2)


def test_compose_matches_sigma3_table():
    table = {(a, b): brute_product(a, b) for a in permutations((1, 2, 3)) for b in permutations((1, 2, 3))}
    for (a, b), ab in table.items():
        assert compose(Permutation(a), Permutation(b)).images == ab
    assert compose(Permutation((2, 3, 1)), Permutation((2, 1, 3))).images == (3, 2, 1)


def test_compose_degree_mismatch():
    with pytest.raises(PermError):
        compose(Permutation((1, 2)), Permutation((1, 2, 3)))


def test_rejects_non_bijection():
    with pytest.raises(PermError):
        Permutation((1, 1, 2))
    with pytest.raises(PermError):
        ExtendedPermutation((1, 2))


@given(perms())
def test_inverse(p):
    assert compose(p, p.inverse()).is_identity()
    assert compose(p.inverse(), p).is_identity()


@given(perms(), perms())
def test_sign_is_multiplicative(a, b):
    if a.degree == b.degree:
        assert compose(a, b).sign() == a.sign() * b.sign()


@given(perms())
def test_adjacent_word_rebuilds(p):
    cur = Permutation.identity(p.degree)
    for k in p.adjacent_word():
        cur = compose(cur, Permutation.transposition(p.degree, k, k + 1))
    assert cur == p


def test_block_permutation_examples():
    assert block_permutation(Permutation.identity(3), (2, 0, 1)).is_identity()
    assert block_permutation(Permutation((2, 1)), (1, 1)) == Permutation((2, 1))
    assert block_permutation(Permutation((2, 1)), (2, 1)) == Permutation((2, 3, 1))
    with pytest.raises(PermError):
        block_permutation(Permutation((2, 1)), (1,))


def _square_holds(sigma, hs, rng, d=2):
    """gamma(f sigma; h..) = gamma(f; h_{sigma^-1(1)}, ..) . block_permutation on End_V."""
    n = sigma.degree
    f = ev.random_map(d, n, rng)
    maps = [(ev.random_map(d, k, rng), k) for k in hs]
    lhs = ev.gamma(ev.act(f, d, n, sigma.images), d, maps)
    inv = sigma.inverse()
    reordered = [maps[inv(j) - 1] for j in range(1, n + 1)]
    bp = block_permutation(sigma, hs)
    rhs = ev.act(ev.gamma(f, d, reordered), d, sum(hs), bp.images)
    return ev.equal(lhs, rhs)


def test_block_permutation_pinned_by_equivariance_square():
    rng = random.Random(7)
    sigma = Permutation((2, 1))
    # exactly one element of Sigma_3 makes the square commute; it is ours
    good = []
    f = ev.random_map(2, 2, rng)
    h1, h2 = ev.random_map(2, 2, rng), ev.random_map(2, 1, rng)
    lhs = ev.gamma(ev.act(f, 2, 2, sigma.images), 2, [(h1, 2), (h2, 1)])
    base = ev.gamma(f, 2, [(h2, 1), (h1, 2)])
    for cand in permutations((1, 2, 3)):
        if ev.equal(lhs, ev.act(base, 2, 3, cand)):
            good.append(cand)
    assert good == [block_permutation(sigma, (2, 1)).images]


@settings(max_examples=25, deadline=None)
@given(st.permutations([1, 2, 3]), st.lists(st.integers(1, 2), min_size=3, max_size=3), st.integers(0, 10 ** 6))
def test_block_permutation_square_random(p, hs, seed):
    assert _square_holds(Permutation(tuple(p)), hs, random.Random(seed))


def test_block_sum():
    e1 = Permutation.identity(1)
    s = Permutation((2, 1))
    assert block_sum([e1, e1]) == Permutation.identity(2)
    assert block_sum([s, e1]) == Permutation((2, 1, 3))
    ss = block_sum([s, s])
    assert ss == Permutation((2, 1, 4, 3))
    bp = block_permutation(Permutation.identity(2), (2, 2))
    assert compose(bp, ss) == compose(ss, bp)


def test_block_sum_second_square():
    """gamma(f; h1 t1, h2 t2) = gamma(f; h1, h2) . (t1 (+) t2) on End_V."""
    rng = random.Random(3)
    f = ev.random_map(2, 2, rng)
    h1, h2 = ev.random_map(2, 2, rng), ev.random_map(2, 2, rng)
    s = (2, 1)
    lhs = ev.gamma(f, 2, [(ev.act(h1, 2, 2, s), 2), (ev.act(h2, 2, 2, s), 2)])
    rhs = ev.act(ev.gamma(f, 2, [(h1, 2), (h2, 2)]), 2, 4, block_sum([Permutation(s)] * 2).images)
    assert ev.equal(lhs, rhs)


def test_insert_trivial_cases():
    s = Permutation((2, 3, 1))
    assert insert(Permutation.identity(1), 1, s) == s
    tau = Permutation((3, 1, 2))
    assert insert(tau, 2, Permutation.identity(1)) == tau
    with pytest.raises(PermError):
        insert(tau, 4, s)


def test_insert_swap_swap_by_exhaustive_search():
    rng = random.Random(11)
    d = 2
    f, g = ev.random_map(d, 2, rng), ev.random_map(d, 2, rng)
    tau = sigma = Permutation((2, 1))
    lhs = ev.circ(ev.act(f, d, 2, tau.images), 2, d, 1, ev.act(g, d, 2, sigma.images), 2)
    base = ev.circ(f, 2, d, tau(1), g, 2)
    found = [p for p in permutations((1, 2, 3)) if ev.equal(lhs, ev.act(base, d, 3, p))]
    assert found == [insert(tau, 1, sigma).images]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_insert_equivariance_random(m, n, data):
    tau = Permutation(tuple(data.draw(st.permutations(list(range(1, m + 1))))))
    sigma = Permutation(tuple(data.draw(st.permutations(list(range(1, n + 1))))))
    i = data.draw(st.integers(1, m))
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    d = 2
    f, g = ev.random_map(d, m, rng), ev.random_map(d, n, rng)
    lhs = ev.circ(ev.act(f, d, m, tau.images), m, d, i, ev.act(g, d, n, sigma.images), n)
    rhs = ev.act(ev.circ(f, m, d, tau(i), g, n), d, m + n - 1, insert(tau, i, sigma).images)
    assert ev.equal(lhs, rhs)


def test_cycle():
    assert cycle(0).is_identity()
    assert cycle(1) == ExtendedPermutation((1, 0))
    c = cycle(2)
    assert c.compose(c).compose(c).is_identity()
    assert [cycle(3)(i) for i in range(4)] == [1, 2, 3, 0]


@given(st.integers(0, 6))
def test_cycle_order(n):
    c = cycle(n)
    cur = ExtendedPermutation.identity(n)
    for k in range(1, n + 2):
        cur = cur.compose(c)
        assert cur.is_identity() == (k == n + 1)


def test_extended_group_generated_by_cycle_and_sigma():
    n = 3
    gens = [cycle(n)] + [Permutation.transposition(n, k, k + 1).to_extended() for k in range(1, n)]
    seen = {ExtendedPermutation.identity(n)}
    frontier = list(seen)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x.compose(g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    assert seen == set(all_extended(n))


def test_restrict_and_parse():
    p = Permutation((2, 1, 3))
    assert p.to_extended().restrict() == p
    assert parse_perm("perm 2 1 3") == p
    assert parse_perm("xperm 1 2 0") == ExtendedPermutation((1, 2, 0))
    assert str(p) == "perm 2 1 3"
    assert parse_perm(str(cycle(2))) == cycle(2)
    with pytest.raises(PermError):
        parse_perm("cycle 1 2")
    assert len(list(all_permutations(4))) == 24
