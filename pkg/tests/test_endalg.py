import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import endv_oracle as ev
from operad_forge.endalg import (AlgebraError, FiniteSpace, StructureMaps, algebra_from_json, algebra_to_json,
                                 as_matrix, as_tensor, check_algebra, check_invariant_form, cyclic_law_failures,
                                 end_act, end_circ, end_compose, end_modcomp, end_perm, end_tensor, end_xi,
                                 evaluate)
from operad_forge.freecons import GraphConstruction, TreeOperad
from operad_forge.perm import Permutation, compose
from operad_forge.present import builtin_presentation, hypercommutative_relation
from operad_forge.sigmod import Component, SigmaCollection, builtin, collection_from_json, extend_by_sign

DUAL_NUMBERS_MU = [["1", "0", "0", "0"], ["0", "1", "1", "0"]]   # 1*1 = 1, 1*x = x*1 = x, x*x = 0
FROBENIUS = [[0, 1], [1, 0]]


def to_dict(t):
    return {idx: t[idx] for idx in np.ndindex(t.shape)}


def from_dict(f, d, n):
    t = np.full((d,) * (n + 1), Fraction(0), dtype=object)
    for k, v in f.items():
        t[k] = v
    return t


def matrix_algebra_mu():
    """Multiplication of 2x2 matrices in the basis E11, E12, E21, E22."""
    d = 4
    mu = np.full((d, d, d), Fraction(0), dtype=object)
    for a, b, c, e in product(range(2), repeat=4):
        if b == c:
            mu[2 * a + e, 2 * a + b, 2 * c + e] = Fraction(1)
    return mu


def cross_product():
    beta = np.full((3, 3, 3), Fraction(0), dtype=object)
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        beta[k, i, j] = Fraction(1)
        beta[k, j, i] = Fraction(-1)
    return beta


# -- End_V operations against the loop oracle ------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.integers(0, 10 ** 6))
def test_end_circ_matches_oracle(m, n, seed):
    rng = random.Random(seed)
    d = 2
    f, g = ev.random_map(d, m, rng), ev.random_map(d, n, rng)
    i = rng.randint(1, m)
    mine = end_circ(from_dict(f, d, m), i, from_dict(g, d, n))
    assert ev.equal(to_dict(mine), ev.circ(f, m, d, i, g, n))


@settings(max_examples=20, deadline=None)
@given(st.permutations([1, 2, 3]), st.integers(0, 10 ** 6))
def test_end_act_matches_oracle(p, seed):
    rng = random.Random(seed)
    f = ev.random_map(2, 3, rng)
    mine = end_act(from_dict(f, 2, 3), Permutation(tuple(p)))
    assert ev.equal(to_dict(mine), ev.act(f, 2, 3, tuple(p)))


def test_matrix_roundtrip_and_prop_ops():
    rng = random.Random(4)
    m = [[Fraction(rng.randint(-2, 2)) for _ in range(4)] for _ in range(2)]
    assert as_matrix(as_tensor(m, 2, 1, 2), 1) == m
    s = Permutation((2, 3, 1))
    t = Permutation((1, 3, 2))
    assert np.array_equal(end_compose(end_perm(s, 2), 3, end_perm(t, 2), 3), end_perm(compose(s, t), 2))
    # interchange: (f (x) g) o (h (x) k) = (f o h) (x) (g o k)
    f = as_tensor([[rng.randint(-2, 2) for _ in range(4)] for _ in range(2)], 2, 1, 2)      # (1,2)
    g = as_tensor([[rng.randint(-2, 2) for _ in range(2)] for _ in range(4)], 2, 2, 1)      # (2,1)
    h = as_tensor([[rng.randint(-2, 2) for _ in range(2)] for _ in range(4)], 2, 2, 1)      # (2,1)
    k = as_tensor([[rng.randint(-2, 2) for _ in range(4)] for _ in range(2)], 2, 1, 2)      # (1,2)
    lhs = end_compose(end_tensor(f, 1, g, 2), 3, end_tensor(h, 2, k, 1), 3)
    rhs = end_tensor(end_compose(f, 1, h, 2), 1, end_compose(g, 2, k, 1), 2)
    assert np.array_equal(lhs, rhs)


# -- evaluation is a homomorphism ----------------------------------------------------

@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_evaluate_respects_operations(seed):
    rng = random.Random(seed)
    E = builtin("E_Ass")
    V = FiniteSpace(2)
    mu = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(2)]
    s = StructureMaps(E, V, {"mu": mu})
    F = TreeOperad(E)
    f = F.element([(t, rng.randint(-2, 2)) for t in F.basis(2)], 2)
    g = F.element([(t, rng.randint(-2, 2)) for t in F.basis(2)], 2)
    for i in (1, 2):
        assert np.array_equal(evaluate(F.circ(f, i, g), s), end_circ(evaluate(f, s), i, evaluate(g, s)))
    sigma = Permutation((2, 1))
    assert np.array_equal(evaluate(F.act(f, sigma), s), end_act(evaluate(f, s), sigma))


def test_derived_maps_follow_the_action():
    s = StructureMaps(builtin("E_Ass"), FiniteSpace(2), {"mu": DUAL_NUMBERS_MU})
    mu = s.tensor(2, 0)
    assert np.array_equal(s.tensor(2, 1), end_act(mu, Permutation((2, 1))))
    bad = StructureMaps(builtin("E_Com"), FiniteSpace(2), {"mu": [[0, 1, 0, 0], [0, 0, 0, 0]]})
    assert bad.equivariance_failures


def test_com_derived_operations_are_symmetric():
    E = builtin("E_Com")
    s = StructureMaps(E, FiniteSpace(2), {"mu": DUAL_NUMBERS_MU})
    F = TreeOperad(E)
    mu = F.generator("mu")
    mu3 = evaluate(F.circ(mu, 1, mu), s)
    for p in [(2, 1, 3), (1, 3, 2), (3, 1, 2)]:
        assert np.array_equal(end_act(mu3, Permutation(p)), mu3)


# -- checking algebras ------------------------------------------------------------------

def test_matrix_algebra_is_associative_not_commutative():
    V = FiniteSpace(4)
    mu = matrix_algebra_mu()
    assert check_algebra(builtin_presentation("Ass", 3), StructureMaps(builtin("E_Ass"), V, {"mu": mu})).passed
    rep = check_algebra(builtin_presentation("Com", 3), StructureMaps(builtin("E_Com"), V, {"mu": mu}))
    assert not rep.passed
    assert rep.failures[0]["kind"] == "equivariance"


def test_lie_examples():
    lie = builtin_presentation("Lie", 3)
    assert check_algebra(lie, StructureMaps(builtin("E_Lie"), FiniteSpace(3), {"beta": cross_product()})).passed
    mu = matrix_algebra_mu()
    commutator = mu - end_act(mu, Permutation((2, 1)))
    assert check_algebra(lie, StructureMaps(builtin("E_Lie"), FiniteSpace(4), {"beta": commutator})).passed
    # the associative product itself is not a Lie bracket
    rep = check_algebra(lie, StructureMaps(builtin("E_Lie"), FiniteSpace(4), {"beta": mu}))
    assert not rep.passed


def test_dual_numbers_frobenius_versus_identity_form():
    com = builtin_presentation("Com", 3)
    good = StructureMaps(builtin("E_Com"), FiniteSpace(2, FROBENIUS, ("1", "x")), {"mu": DUAL_NUMBERS_MU})
    assert check_algebra(com, good).passed
    plus = extend_by_sign(builtin("E_Com"))
    assert check_invariant_form(StructureMaps(plus, good.V, {"mu": DUAL_NUMBERS_MU})).passed
    bad_V = FiniteSpace(2, [[1, 0], [0, 1]], ("1", "x"))
    rep = check_invariant_form(StructureMaps(plus, bad_V, {"mu": DUAL_NUMBERS_MU}))
    assert not rep.passed
    frob = [f for f in rep.failures if f["kind"] == "frobenius"]
    # B(x.x, 1) = B(0, 1) = 0 while B(x, x.1) = B(x, x) = 1
    assert {"kind": "frobenius", "generator": "mu", "triple": ["x", "x", "1"], "lhs": "0", "rhs": "1"} in frob


def test_half_bialgebra_with_zero_coproduct():
    half = builtin_presentation("HalfBialgebra")
    V = FiniteSpace(2)
    s = StructureMaps(builtin("E_bialgebra"), V, {"mu": DUAL_NUMBERS_MU, "delta": [[0, 0]] * 4})
    assert check_algebra(half, s).passed
    # a nonzero coproduct with delta after mu nonzero breaks the half relation
    unit_coproduct = [[1, 0], [0, 0], [0, 0], [0, 0]]
    s2 = StructureMaps(builtin("E_bialgebra"), V, {"mu": DUAL_NUMBERS_MU, "delta": unit_coproduct})
    assert not check_algebra(half, s2).passed


# -- cyclic and modular ---------------------------------------------------------------

def test_cyclic_laws_on_standard_form():
    V = FiniteSpace(2, [[1, 0], [0, 1]])
    assert cyclic_law_failures(V, 3) == []


def test_contraction_of_identity_is_dimension():
    for d in (1, 2, 3):
        V = FiniteSpace(d, [[int(i == j) for j in range(d)] for i in range(d)])
        ident = end_perm(Permutation((1,)), d)
        assert end_xi(ident, 0, 1, V) == d
    with pytest.raises(AlgebraError):
        end_xi(end_perm(Permutation((1,)), 2), 0, 1, FiniteSpace(2))


def test_modular_evaluation_matches_end_operations():
    E = collection_from_json({"flavor": "modular", "components": [{"genus": 0, "legs": 2, "dim": 1, "basis": ["c"]}]})
    V = FiniteSpace(2, FROBENIUS, ("1", "x"))
    s = StructureMaps(E, V, {"c": DUAL_NUMBERS_MU})
    assert s.equivariance_failures == []
    M = GraphConstruction(E, "modular")
    c = M.generator("c")
    cm = evaluate(c, s)
    assert np.array_equal(evaluate(M.contract(c, 0, 1), s), end_xi(cm, 0, 1, V))
    for i, j in product(range(3), repeat=2):
        assert np.array_equal(evaluate(M.modular_compose(c, i, c, j), s), end_modcomp(cm, i, cm, j, V))


def test_hypercommutative_relation_on_degenerate_structure():
    """With the ternary operation zero, the first relation only involves the
    binary product, which is commutative and associative here."""
    comps = {k: Component(k, 1, (f"h{k}",), {j: ((Fraction(1),),) for j in range(1, k)}) for k in (2, 3)}
    E = SigmaCollection("sigma", comps, "E_HyCom")
    F = TreeOperad(E, "nonunital")
    s = StructureMaps(E, FiniteSpace(2), {"h2": DUAL_NUMBERS_MU, "h3": [[0] * 8, [0] * 8]})
    assert s.equivariance_failures == []
    val = evaluate(hypercommutative_relation(1, F), s)
    assert not any(val.flat)


def test_json_roundtrip():
    data = {"dim": 2, "basis": ["1", "x"], "form": [["0", "1"], ["1", "0"]], "maps": {"mu": DUAL_NUMBERS_MU}}
    s = algebra_from_json(data, builtin("E_Com"))
    assert algebra_to_json(s) == data
    with pytest.raises(AlgebraError):
        algebra_from_json({"dim": 2}, builtin("E_Com"))
    with pytest.raises(AlgebraError):
        StructureMaps(builtin("E_Com"), FiniteSpace(2), {"nu": DUAL_NUMBERS_MU})
    with pytest.raises(AlgebraError):
        FiniteSpace(2, [[0, 1], [2, 0]])
