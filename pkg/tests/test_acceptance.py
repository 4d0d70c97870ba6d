"""One test per acceptance criterion, run against the shipped corpus. All checks are exact."""

import random
import time
from itertools import combinations_with_replacement, product

import pytest

from conftest import corpus
from repalg import bracket as br
from repalg.algebra import FreeGroupAlgebra
from repalg.cli import corpus_scenarios, exit_code, run_many
from repalg.double_bracket import is_gerstenhaber, is_quasi_poisson, quasi_poisson_ansatz
from repalg.formulas import group_formula, trunc_formula
from repalg.forms import (adjoint_element, check_ci23, check_ci24, check_f11, check_f14, is_cyclic, vhat_on)
from repalg.foundations import Q
from repalg.rep_algebra import RepElement
from repalg.scenario import run_task

CORPUS = sorted(p.stem for p in corpus_scenarios())
CYCLIC = [n for n in CORPUS if n != "noncyclic_control"]


def fresh(setup):
    """A setup with empty bracket caches, so timings are honest."""
    return setup.with_db(setup.db)


def test_criterion_01_matrix_formula():
    start = time.perf_counter()
    checked = 0
    for name, N in (("matn_vdb", 2), ("mat3_vdb", 3)):
        scn = corpus(name)
        setup, ctx = fresh(scn.setup), scn.ctx
        for i, j, k, l in product(range(N), repeat=4):
            got = setup.bracket(ctx.symbol("a", i * N + j), ctx.symbol("b", k * N + l))
            assert got == ctx.symbol("c", k * N + j) * ctx.symbol("d", i * N + l)
            checked += 1
    assert checked == 16 + 81
    assert time.perf_counter() - start < 1


def test_criterion_02_truncated_polynomial_formula():
    start = time.perf_counter()
    empty = 0
    for n in (1, 2, 3):
        scn = corpus(f"trunc{n}")
        setup, ctx = fresh(scn.setup), scn.ctx
        for i, j in product(range(n + 1), repeat=2):
            got = setup.bracket(ctx.symbol("a", i), ctx.symbol("b", j))
            assert got == trunc_formula(ctx, setup.db, "a", i, "b", j)
            if i + j < n:
                assert not got
                empty += 1
    assert empty == 1 + 3 + 6
    assert time.perf_counter() - start < 1


@pytest.mark.parametrize("name", ["group_z2", "group_z3", "group_s3"])
def test_criterion_03_group_character_formula(name):
    scn = corpus(name)
    setup, ctx, M = fresh(scn.setup), scn.ctx, scn.coalgebra
    G = M.group
    assert G.is_class_function(scn.character)
    start = time.perf_counter()
    for g, h in product(G.elements, repeat=2):
        got = setup.bracket(ctx.symbol("a", G.index[g]), ctx.symbol("b", G.index[h]))
        assert got == group_formula(ctx, setup.db, scn.character, "a", g, "b", h)
    assert time.perf_counter() - start < 5


def test_criterion_04_jacobi_oracle_everywhere():
    total = 0
    graded = set()
    for name in CORPUS:
        scn = corpus(name)
        if name == "noncyclic_control":
            continue
        res = br.check_jacobi_oracle(scn.setup, cap=10 ** 6)
        assert res.holds, (name, res.witness)
        total += res.checked
        degrees = set(scn.pres.letter_degree.values())
        if degrees == {0, 1, 2}:
            graded.add(scn.setup.n)
    assert graded == {-1, 0, 1}
    assert total >= 200


def test_criterion_05_structural_identities():
    checks = (check_ci23, check_ci24, check_f11, check_f14)
    for name in CYCLIC:
        form = corpus(name).form
        assert is_cyclic(form), name
        for check in checks:
            assert check(form).holds, (name, check.__name__)
    control = corpus("noncyclic_control").form
    assert not is_cyclic(control)
    assert not check_f11(control).holds
    assert not check_f14(control).holds


def _adjoint_ok(M, form, theta):
    mu = M.comul_iter(theta, 2)
    return M.is_symmetric_element(theta) and vhat_on(form, theta, theta) == mu


def test_criterion_06_symmetry_and_adjoints():
    for name in CYCLIC:
        scn = corpus(name)
        if scn.coalgebra.counit is not None:
            assert scn.form.is_symmetric_matrix(), name
    for name, N in (("matn_vdb", 2), ("mat3_vdb", 3)):
        M = corpus(name).coalgebra
        theta = adjoint_element(corpus(name).form)
        assert theta == M.vector({f"t{i}{i}": 1 for i in range(1, N + 1)})
        assert _adjoint_ok(M, corpus(name).form, theta)
    for n in (1, 2, 3):
        scn = corpus(f"trunc{n}")
        theta = adjoint_element(scn.form)
        assert theta == scn.coalgebra.basis_vector(n)
        assert _adjoint_ok(scn.coalgebra, scn.form, theta)
    scn = corpus("group_z2")
    theta = adjoint_element(scn.form)
    assert theta == scn.coalgebra.vector({"d_1": Q(1, 2)})
    assert _adjoint_ok(scn.coalgebra, scn.form, theta)


def test_criterion_07_invariance_suite():
    no_adjoint = []
    for name in CYCLIC:
        scn = corpus(name)
        setup = scn.setup
        res = br.verify_all_coderivations(setup)
        assert res.holds, (name, "coderivation", res.witness)
        res = br.verify_unit_group_invariance(setup, samples=5, seed=0, pair_cap=24)
        assert res.holds and res.details["samples"] >= 5, (name, "unit group", res.witness)
        theta = adjoint_element(scn.form)
        if theta is None:
            no_adjoint.append(name)
            continue
        res = br.verify_trace_compat(setup, theta)
        assert res.holds, (name, "trace", res.witness)
    # the standard character of S3 gives a degenerate form, which has no adjoint element
    assert no_adjoint == ["group_s3"]


def _monomials_up_to_two(ctx):
    vocab = ctx.vocabulary()
    out = [ctx.unit()]
    for k in (1, 2):
        for m in combinations_with_replacement(vocab, k):
            x = RepElement(ctx, {tuple(sorted(m)): 1})
            if x:
                out.append(x)
    return out


def test_criterion_08_moment_identity():
    scn = corpus("moment_unital")
    xs = _monomials_up_to_two(scn.ctx)
    assert len(xs) == 1 + 8 + 36
    for x in xs:
        res = br.moment_bracket_identity(scn.setup, scn.pres.word("xi"), 1, x)
        assert res.holds and res.checked == scn.coalgebra.rank, (str(x), res.witness)
    quasi = corpus("quasi_free_group")
    xi = quasi.pres.word("t") - quasi.pres.one()
    for x in _monomials_up_to_two(quasi.ctx):
        res = br.moment_bracket_identity(quasi.setup, xi, 2, x, kind="multiplicative")
        assert res.holds, (str(x), res.witness)


def test_criterion_09_quasi_poisson():
    pres = FreeGroupAlgebra(["t"])
    pairs, coefs, solutions = quasi_poisson_ansatz(pres, "t")
    family = solutions[0]
    # the corpus bracket t²⊗1 − 1⊗t² is coefficient −1 on the pair (1, t²), zero elsewhere
    chosen = {c: 0 for c in coefs}
    chosen[coefs[pairs.index(((), ("t", "t")))]] = -1
    for var, expr in family.items():
        numer, denom = expr.as_numer_denom()
        assert (numer - var * denom).subs(chosen) == 0
    scn = corpus("quasi_free_group")
    assert scn.db.lookup("t", "t") == {(("t", "t"), ()): 1, ((), ("t", "t")): -1}
    assert is_quasi_poisson(scn.db, samples=10).holds
    assert not is_gerstenhaber(scn.db).holds
    setup = scn.setup
    gens = [setup.sym(s) for s in setup.generator_symbols()]
    triples = [(x, y, z) for x in scn.samples for y in gens for z in gens]
    triples = random.Random(0).sample(triples, 16)
    for x, y, z in triples:
        res = br.quasi_jacobi_on_invariants(setup, x, y, z)
        assert res.holds, res.witness
    assert len(triples) >= 10


def test_criterion_10_equivariant():
    for name in ("equivariant_mat2_J1", "equivariant_mat2_Jdiag"):
        scn = corpus(name)
        assert scn.ctx.action is not None and len(scn.ctx.action.elements) == 2
        res = br.representative_independence(scn.setup)
        letters = len(scn.pres.generators)
        assert res.holds and res.checked >= (letters * scn.coalgebra.rank) ** 2
        res = br.check_elll(scn.ctx)
        assert res.holds and res.checked >= scn.coalgebra.rank
        controls = [t for t in scn.tasks if t.name.startswith("non-")]
        assert len(controls) == 3
        for task in controls:
            out = run_task(scn, task)
            assert out["outcome"] == task.expect != "pass", (name, task.name, out)


def test_full_corpus_runtime():
    start = time.perf_counter()
    results = run_many(corpus_scenarios())
    elapsed = time.perf_counter() - start
    assert exit_code(results) == 0
    assert sum(len(r["tasks"]) for r in results) > 150
    assert elapsed < 120
