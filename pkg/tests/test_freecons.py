import random
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from coinvariant_oracle import orbit_count
from operad_forge.exactla import invariant_projector_rank
from operad_forge.freecons import (UNIT, FreeError, GraphConstruction, MissingUnitError, TreeOperad,
                                   adjoin_unit, augmentation_ideal, check_unit_laws, counterexample_V,
                                   find_markl_obstruction, markl_from_free, markl_from_may, may_from_free,
                                   may_from_markl)
from operad_forge.pasting import automorphisms, enumerate_directed_graphs, family_predicate
from operad_forge.perm import ExtendedPermutation, Permutation, compose, cycle
from operad_forge.sigmod import (Component, SigmaCollection, builtin, collection_from_json,
                                 extend_by_sign, induced_action)


def double_factorial(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def random_element(F, n, rng):
    return F.element([(t, rng.randint(-3, 3)) for t in F.basis(n)], n)


MODULAR_E = {"flavor": "modular", "components": [
    {"genus": 0, "legs": 2, "dim": 1, "basis": ["c"]},
    {"genus": 1, "legs": 0, "dim": 1, "basis": ["t"]}]}


# -- free operads over trees -------------------------------------------------

def test_free_operad_dims_match_closed_forms():
    com = TreeOperad(builtin("E_Com"))
    ass = TreeOperad(builtin("E_Ass"))
    for n in range(2, 7):
        # binary trees with labeled leaves: (2n-3)!!, times 2^(n-1) planar choices for Ass
        assert com.dim(n) == double_factorial(2 * n - 3)
        assert ass.dim(n) == factorial(n) * catalan(n - 1)
    assert com.dim(3) == 3 and ass.dim(3) == 12
    assert com.dim(1) == 1


def test_flavors_dims():
    planar = SigmaCollection("nonsigma", {2: Component(2, 1, ("m",))}, "P")
    ns = TreeOperad(planar, "nonsigma")
    # the planar flavor carries no unit, so arity one is empty
    assert [ns.dim(n) for n in range(1, 7)] == [0] + [catalan(n - 1) for n in range(2, 7)]
    nu = TreeOperad(builtin("E_Ass"), "nonunital")
    assert nu.dim(1) == 0 and nu.dim(3) == 12
    may = TreeOperad(builtin("E_Com"), "may")
    assert [may.dim(n) for n in range(1, 6)] == [0, 1, 0, 3, 0]
    cyc = TreeOperad(extend_by_sign(builtin("E_Ass")), "cyclic")
    assert cyc.dim(4) == 120
    with pytest.raises(FreeError):
        TreeOperad(builtin("E_Ass"), "cyclic")
    with pytest.raises(FreeError):
        nu.unit()


def test_truncation():
    T = TreeOperad(builtin("E_Com"), max_vertices=2)
    assert T.dim(3) == 3
    assert T.dim(4) == 0
    mu = T.generator("mu")
    with pytest.raises(FreeError):
        T.circ(T.circ(mu, 1, mu), 1, mu)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 2), st.integers(0, 10 ** 6))
def test_circ_sequential_associativity(m, n, k, seed):
    F = TreeOperad(builtin("E_Ass"))
    rng = random.Random(seed)
    f, g, h = random_element(F, m, rng), random_element(F, n, rng), random_element(F, k, rng)
    i = rng.randint(1, m)
    j = rng.randint(1, n)
    assert F.circ(F.circ(f, i, g), i + j - 1, h) == F.circ(f, i, F.circ(g, j, h))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(1, 2), st.integers(1, 2), st.integers(0, 10 ** 6))
def test_circ_parallel_associativity(m, n, k, seed):
    F = TreeOperad(builtin("E_Lie"))
    rng = random.Random(seed)
    f, g, h = random_element(F, m, rng), random_element(F, n, rng), random_element(F, k, rng)
    i, j = sorted(rng.sample(range(1, m + 1), 2))
    assert F.circ(F.circ(f, j, h), i, g) == F.circ(F.circ(f, i, g), j + n - 1, h)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_equivariance_and_units(seed):
    F = TreeOperad(builtin("E_Ass"))
    rng = random.Random(seed)
    f = random_element(F, 3, rng)
    a = Permutation(tuple(rng.sample([1, 2, 3], 3)))
    b = Permutation(tuple(rng.sample([1, 2, 3], 3)))
    assert F.act(F.act(f, a), b) == F.act(f, compose(a, b))
    e = F.unit()
    for i in (1, 2, 3):
        assert F.circ(f, i, e) == f
    assert F.circ(e, 1, f) == f


def test_gamma_is_iterated_circ():
    F = TreeOperad(builtin("E_Com"))
    mu = F.generator("mu")
    lhs = F.gamma(mu, [mu, mu])
    assert lhs == F.circ(F.circ(mu, 2, mu), 1, mu)
    with pytest.raises(FreeError):
        F.gamma(mu, [mu])


# -- cyclic action ------------------------------------------------------------

def _cyclic():
    return TreeOperad(extend_by_sign(builtin("E_Ass")), "cyclic")


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_cycle_moves_compositions(m, n, seed):
    """(f o_i g) z = (f z) o_{i-1} g for i >= 2 and (f o_1 g) z = (g z) o_n (f z)."""
    C = _cyclic()
    rng = random.Random(seed)
    f, g = random_element(C, m, rng), random_element(C, n, rng)
    z = cycle(m + n - 1)
    for i in range(1, m + 1):
        lhs = C.cyclic_act(C.circ(f, i, g), z)
        if i > 1:
            rhs = C.circ(C.cyclic_act(f, cycle(m)), i - 1, g)
        else:
            rhs = C.circ(C.cyclic_act(g, cycle(n)), n, C.cyclic_act(f, cycle(m)))
        assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cyclic_action_laws(seed):
    C = _cyclic()
    rng = random.Random(seed)
    f = random_element(C, 3, rng)
    z = cycle(3)
    cur = f
    for _ in range(4):
        cur = C.cyclic_act(cur, z)
    assert cur == f
    a = ExtendedPermutation(tuple(rng.sample(range(4), 4)))
    b = ExtendedPermutation(tuple(rng.sample(range(4), 4)))
    assert C.cyclic_act(C.cyclic_act(f, a), b) == C.cyclic_act(f, a.compose(b))
    s = Permutation(tuple(rng.sample([1, 2, 3], 3)))
    assert C.cyclic_act(f, s.to_extended()) == C.act(f, s)


# -- partial versus simultaneous presentations ---------------------------------

def test_may_markl_roundtrip():
    F = TreeOperad(builtin("E_Ass"))
    markl = markl_from_free(F, 4)
    may = may_from_free(F, 4)
    assert may_from_markl(markl).gamma == may.gamma
    assert markl_from_may(may).circ == markl.circ
    assert check_unit_laws(markl) == []


def test_counterexample_v_has_no_partial_structure():
    V = counterexample_V()
    with pytest.raises(MissingUnitError):
        markl_from_may(V)
    witness = find_markl_obstruction(V)
    assert witness is not None
    assert witness["gamma"] == ("f", ("f", "f"))
    assert witness["vanishing_arity"] == 3
    assert find_markl_obstruction(may_from_free(TreeOperad(builtin("E_Com")), 4)) is None


def test_adjoin_unit_and_augmentation():
    S = markl_from_free(TreeOperad(builtin("E_Com"), "nonunital"), 4)
    with pytest.raises(MissingUnitError):
        check_unit_laws(S)
    U = adjoin_unit(S)
    assert U.unit == UNIT and check_unit_laws(U) == []
    back = augmentation_ideal(U)
    assert back.arity == S.arity and back.circ == S.circ
    with pytest.raises(FreeError):
        adjoin_unit(U)


# -- modular constructions ------------------------------------------------------

def test_modular_dims():
    E = collection_from_json(MODULAR_E)
    M, M0 = GraphConstruction(E, "modular"), GraphConstruction(E, "modular0")
    keys = [(0, 2), (0, 3), (1, 0), (1, 1), (2, -1)]
    assert [M.dim(k) for k in keys] == [1, 3, 2, 3, 4]
    assert [M0.dim(k) for k in keys] == [1, 3, 1, 1, 1]


def test_genus_bookkeeping():
    E = collection_from_json(MODULAR_E)
    M = GraphConstruction(E, "modular")
    c, t = M.generator("c"), M.generator("t")
    assert M.modular_compose(c, 1, c, 0).key == (0, 3)
    assert M.modular_compose(c, 2, t, 0).key == (1, 1)
    assert M.modular_compose(t, 0, t, 0).key == (2, -1)
    assert M.contract(c, 0, 1).key == (1, 0)
    assert M.contract(M.modular_compose(c, 1, c, 0), 0, 3).key == (1, 1)
    with pytest.raises(FreeError):
        M.contract(c, 1, 1)


def test_simply_connected_separation_element():
    """At genus 2 without legs the simply connected family holds t o t, which
    no contraction can produce there."""
    E = collection_from_json(MODULAR_E)
    M0 = GraphConstruction(E, "modular0")
    t = M0.generator("t")
    x = M0.modular_compose(t, 0, t, 0)
    assert x.key == (2, -1) and not x.is_zero()
    assert M0.dim((2, -1)) == 1
    with pytest.raises(FreeError):
        M0.contract(M0.generator("c"), 0, 1)


# -- PROP-like constructions ------------------------------------------------------

@pytest.mark.parametrize("name", ["E_bialgebra", "E_LieBialgebra"])
def test_parallel_edge_coinvariants(name):
    E = builtin(name)
    (G,) = [g for g in enumerate_directed_graphs(1, 1, 2, "all") if g.n_vertices == 2]
    P = GraphConstruction(E, "prop", 2)
    expected = {"E_bialgebra": 2, "E_LieBialgebra": 1}[name]
    assert P.coinvariant_dim(G) == expected == orbit_count(E, G)
    mats = [induced_action(E, G, a) for a in automorphisms(G)]
    assert invariant_projector_rank(mats) == expected


@pytest.mark.parametrize("name", ["E_bialgebra", "E_LieBialgebra"])
def test_class_dims_agree_with_projector(name):
    E = builtin(name)
    P = GraphConstruction(E, "prop", 3)
    for key in [(1, 1), (2, 2), (1, 2)]:
        for info in P.basis(key).classes:
            assert info.coinvariant_dim == P.coinvariant_dim(info.graph) == orbit_count(E, info.graph)


def test_prop_operations():
    P = GraphConstruction(builtin("E_bialgebra"), "prop", 4)
    mu, mu_s, delta = P.generator("mu"), P.generator("mu.s"), P.generator("delta")
    swap = Permutation((2, 1))
    one = P.identity(1)
    assert P.compose(P.perm(swap), P.perm(swap)) == P.identity(2)
    assert P.compose(mu, P.perm(swap)) == mu_s
    assert P.compose(one, mu) == mu == P.compose(mu, P.identity(2))
    # associativity of both compositions
    assert P.compose(P.compose(mu, P.tensor(mu, one)), P.tensor(one, delta)) == \
        P.compose(mu, P.compose(P.tensor(mu, one), P.tensor(one, delta)))
    assert P.tensor(P.tensor(mu, delta), one) == P.tensor(mu, P.tensor(delta, one))
    # interchange
    assert P.compose(P.tensor(mu, delta), P.tensor(delta, one)) == \
        P.tensor(P.compose(mu, delta), P.compose(delta, one))
    with pytest.raises(FreeError):
        P.compose(mu, mu)


def test_butterfly_is_connected_four_vertices():
    P = GraphConstruction(builtin("E_bialgebra"), "prop", 4)
    mu, delta = P.generator("mu"), P.generator("delta")
    one = P.identity(1)
    inner = P.perm(Permutation((1, 3, 2, 4)))
    butterfly = P.compose(P.tensor(mu, mu), P.compose(inner, P.tensor(delta, delta)))
    assert butterfly.key == (2, 2) and len(butterfly.terms) == 1
    ((G, _),) = butterfly.terms
    assert G.n_vertices == 4
    assert family_predicate("properad")(G)
    D = GraphConstruction(builtin("E_bialgebra"), "dioperad", 4)
    with pytest.raises(FreeError):
        D.compose(D.generator("mu"), D.generator("delta"))
    assert P.compose(delta, mu).key == (2, 2)
    assert one.key == (1, 1)


def test_family_hierarchy_dims():
    E = builtin("E_bialgebra")
    dims = {fl: [GraphConstruction(E, fl, 3).dim(k) for k in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]]
            for fl in ["prop", "properad", "dioperad", "halfprop"]}
    assert dims["prop"] == [3, 30, 30, 30, 12]
    assert dims["properad"] == [3, 30, 30, 20, 12]
    assert dims["dioperad"] == [1, 2, 2, 20, 12]
    assert dims["halfprop"] == [1, 2, 2, 4, 12]
    for k in range(5):
        assert dims["prop"][k] >= dims["properad"][k] >= dims["dioperad"][k] >= dims["halfprop"][k]
