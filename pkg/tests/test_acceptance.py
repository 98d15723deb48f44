"""The eleven acceptance criteria, each timed against its limit.

Every test prints one line `[PASS] Cn ...` or `[FAIL] Cn ...`; run with
`pytest tests/test_acceptance.py -v` (the lines are written straight to the
terminal) or `python3 tests/test_acceptance.py` for the summary alone.
"""
import json
import random
import sys
import time
from contextlib import contextmanager
from math import factorial
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import graph_oracle  # noqa: E402
import lyndon_oracle  # noqa: E402
import triple_cases as tc  # noqa: E402
from coinvariant_oracle import orbit_count  # noqa: E402
from operad_forge.bprop import (confluence_check, ee_count, format_word, graded_dim_B, normalize,  # noqa: E402
                                random_monomial, word_from_text)
from operad_forge.endalg import (FiniteSpace, StructureMaps, algebra_from_json, check_algebra,  # noqa: E402
                                 check_invariant_form, cyclic_law_failures)
from operad_forge.exactla import invariant_projector_rank, row_reduce  # noqa: E402
from operad_forge.freecons import (FreeError, GraphConstruction, MissingUnitError, TreeOperad,  # noqa: E402
                                   counterexample_V, find_markl_obstruction, markl_from_free, markl_from_may,
                                   may_from_free, may_from_markl)
from operad_forge.pasting import automorphisms, enumerate_directed_graphs, enumerate_stable_graphs  # noqa: E402
from operad_forge.pasting.subst import check_hereditary  # noqa: E402
from operad_forge.present import builtin_presentation, quadratic_dual, relation_subspace  # noqa: E402
from operad_forge.sigmod import builtin, collection_from_json, extend_by_sign, induced_action  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"
RESULTS: list[str] = []


def _say(line, capsys):
    RESULTS.append(line)
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


@contextmanager
def criterion(tag, title, limit, capsys=None):
    start = time.perf_counter()
    try:
        yield
    except BaseException as e:
        took = time.perf_counter() - start
        _say(f"[FAIL] {tag} {title} ({took:.1f}s): {type(e).__name__}: {e}", capsys)
        raise
    took = time.perf_counter() - start
    if limit is not None and took > limit:
        _say(f"[FAIL] {tag} {title} ({took:.1f}s > {limit}s)", capsys)
        raise AssertionError(f"{tag} took {took:.1f}s, limit {limit}s")
    _say(f"[PASS] {tag} {title} ({took:.1f}s" + (f" <= {limit}s)" if limit else ")"), capsys)


def _sign_twist(tree):
    """(-1)^(number of vertices decorated by the swapped product)."""
    s, stack = 1, [tree]
    while stack:
        x = stack.pop()
        if isinstance(x, int):
            continue
        if x[0] == 1:
            s = -s
        stack.extend(x[1])
    return s


def test_c01_ass_and_com(capsys):
    with criterion("C1", "Ass(n) = n! for n = 2..5, Com(n) = 1 for n = 2..6", 60, capsys):
        ass, com = builtin_presentation("Ass", 5), builtin_presentation("Com", 6)
        assert [ass.quotient_dim(n) for n in range(2, 6)] == [factorial(n) for n in range(2, 6)]
        assert [com.quotient_dim(n) for n in range(2, 7)] == [1] * 5


def test_c02_lie_against_lyndon(capsys):
    with criterion("C2", "Lie(n) = (n-1)! for n = 2..5, Lyndon oracle", 120, capsys):
        lie = builtin_presentation("Lie", 5)
        for n in range(2, 6):
            oracle = lyndon_oracle.free_lie_multilinear_dim(n)
            assert oracle == lyndon_oracle.multilinear_lyndon_count(n) == factorial(n - 1)
            assert lie.quotient_dim(n) == oracle


def test_c03_koszul_duals(capsys):
    with criterion("C3", "Com! = Lie, Lie! = Com, Ass! = Ass (n <= 4; relations at n = 3)", None, capsys):
        for name, partner in [("Com", "Lie"), ("Lie", "Com"), ("Ass", "Ass")]:
            D = quadratic_dual(builtin_presentation(name, 4), 4)
            Q = builtin_presentation(partner, 4)
            assert [D.quotient_dim(n) for n in range(1, 5)] == [Q.quotient_dim(n) for n in range(1, 5)]
        for name, partner in [("Com", "Lie"), ("Lie", "Com")]:
            D = quadratic_dual(builtin_presentation(name, 3), 3)
            assert relation_subspace(D) == relation_subspace(builtin_presentation(partner, 3))
        D = quadratic_dual(builtin_presentation("Ass", 3), 3)
        basis = D.space.basis(3)
        twisted = row_reduce([[c * _sign_twist(t) for c, t in zip(row, basis)] for row in relation_subspace(D).basis],
                             len(basis))
        assert twisted == relation_subspace(builtin_presentation("Ass", 3))


def test_c04_may_markl(capsys):
    with criterion("C4", "May <-> Markl roundtrip on the free Ass operad (n <= 4), V rejected", None, capsys):
        F = TreeOperad(builtin("E_Ass"))
        markl, may = markl_from_free(F, 4), may_from_free(F, 4)
        assert may_from_markl(markl).gamma == may.gamma
        assert markl_from_may(may).circ == markl.circ
        V = counterexample_V()
        with pytest.raises(MissingUnitError):
            markl_from_may(V)
        assert find_markl_obstruction(V) is not None


def test_c05_cyclic_laws_in_end(capsys):
    with criterion("C5", "cyclic laws on End(Q^2) with the standard form, arity <= 3", 30, capsys):
        assert cyclic_law_failures(FiniteSpace(2, [[1, 0], [0, 1]]), 3) == []


def test_c06_modular(capsys):
    with criterion("C6", "stable graphs 1, 4, 2; genus bookkeeping; separation element at (2,-1)", None, capsys):
        keys = [(0, 2), (0, 3), (1, 0)]
        assert [len(enumerate_stable_graphs(g, n)) for g, n in keys] == [1, 4, 2]
        assert [len(graph_oracle.stable_graph_classes(g, n)) for g, n in keys] == [1, 4, 2]
        E = collection_from_json({"flavor": "modular", "components": [
            {"genus": 0, "legs": 2, "dim": 1, "basis": ["c"]}, {"genus": 1, "legs": 0, "dim": 1, "basis": ["t"]}]})
        M, M0 = GraphConstruction(E, "modular"), GraphConstruction(E, "modular0")
        c, t = M.generator("c"), M.generator("t")
        assert M.modular_compose(c, 1, c, 0).key == (0, 3)
        assert M.modular_compose(c, 2, t, 0).key == (1, 1)
        assert M.contract(c, 0, 1).key == (1, 0)
        assert M.contract(M.modular_compose(c, 1, c, 0), 0, 3).key == (1, 1)
        sep = M0.modular_compose(M0.generator("t"), 0, M0.generator("t"), 0)
        assert sep.key == (2, -1) and not sep.is_zero() and M0.dim((2, -1)) == 1
        with pytest.raises(FreeError):
            M0.contract(M0.generator("c"), 0, 1)


def test_c07_parallel_edge_coinvariants(capsys):
    with criterion("C7", "parallel-edge coinvariants: projector rank = orbit count", None, capsys):
        (G,) = [g for g in enumerate_directed_graphs(1, 1, 2, "all") if g.n_vertices == 2]
        for name in ("E_bialgebra", "E_LieBialgebra"):
            E = builtin(name)
            mats = [induced_action(E, G, a) for a in automorphisms(G)]
            assert invariant_projector_rank(mats) == orbit_count(E, G) == GraphConstruction(E, "prop", 2).coinvariant_dim(G)


def test_c08_family_hierarchy(capsys):
    with criterion("C8", "dim half <= dioperad <= properad <= prop for (m,n) <= (3,3), hereditary", 300, capsys):
        E = builtin("E_bialgebra")
        cons = [GraphConstruction(E, fl, 3) for fl in ("halfprop", "dioperad", "properad", "prop")]
        for m in range(1, 4):
            for n in range(1, 4):
                dims = [C.dim((m, n)) for C in cons]
                assert dims == sorted(dims), ((m, n), dims)
        for fam in ("properad", "dioperad", "half"):
            ok, cx = check_hereditary(fam, 3)
            assert ok, cx


def test_c09_bialgebra_prop(capsys):
    with criterion("C9", "EE normal forms: butterfly, t = 0, N!, idempotence, confluence", 600, capsys):
        w = word_from_text("(comp delta mu)")
        assert format_word(normalize(w, 1)) == "mu[2,2]|perm 1 3 2 4|delta[2,2]"
        assert normalize(w, 0).is_zero()
        for N in (1, 2, 3):
            assert graded_dim_B(1, 1, N) == factorial(N) == ee_count(1, 1, N)
        rng = random.Random(20240611)
        for _ in range(500):
            mono = random_monomial(rng, max_vertices=6)
            for t in (0, 1):
                nf = normalize(mono, t)
                assert normalize(nf, t) == nf
        for t in (0, 1):
            assert confluence_check(bound=6, t=t).joinable


def test_c10_frobenius_form(capsys):
    with criterion("C10", "Q[x]/(x^2): Com with the Frobenius form, not with the identity form", None, capsys):
        com = builtin_presentation("Com", 3)
        plus = extend_by_sign(com.generators)
        good = json.loads((DATA / "dualnumbers.json").read_text())
        bad = json.loads((DATA / "dualnumbers_identity_form.json").read_text())
        s = algebra_from_json(good, com.generators)
        assert check_algebra(com, s).passed
        assert check_invariant_form(StructureMaps(plus, s.V, good["maps"])).passed
        s2 = algebra_from_json(bad, com.generators)
        rep = check_invariant_form(StructureMaps(plus, s2.V, bad["maps"]))
        assert not rep.passed
        assert {"kind": "frobenius", "generator": "mu", "triple": ["x", "x", "1"], "lhs": "0", "rhs": "1"} \
            in rep.failures


def test_c11_triple_laws(capsys):
    with criterion("C11", "substitution associative and unital on every flavor, <= 6 vertices", None, capsys):
        for flavor in tc._flavors():
            for case in tc.associativity_cases(flavor):
                assert tc.check_associativity(*case), (flavor, case)
            for G in tc.schemes(flavor, 3):
                assert tc.check_units(flavor, G), (flavor, G)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    failed = 0
    for fn in tests:
        try:
            fn(None)
        except BaseException:
            failed += 1
    print(f"{len(tests) - failed}/{len(tests)} criteria passed")
    sys.exit(1 if failed else 0)
