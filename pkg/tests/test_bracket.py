import pytest
from hypothesis import given, settings, strategies as st

from conftest import corpus
from repalg import bracket as br
from repalg.double_bracket import DoubleBracket
from repalg.forms import BilinearForm
from repalg.foundations import InputError

GRADED = ["graded_nm1", "graded_n0", "graded_n1"]


def sgn(e):
    return -1 if e % 2 else 1


def test_matrix_bracket_example():
    scn = corpus("matn_vdb")
    ctx = scn.ctx
    got = scn.setup.bracket(ctx.symbol("a", "t11"), ctx.symbol("b", "t22"))
    assert got == ctx.symbol("c", "t21") * ctx.symbol("d", "t12")
    assert scn.setup.bracket(ctx.symbol("a", "t11"), ctx.symbol("b", "t11")) == \
        ctx.symbol("c", "t11") * ctx.symbol("d", "t11")


@st.composite
def graded_inputs(draw, count):
    scn = corpus(draw(st.sampled_from(GRADED)))
    vocab = scn.ctx.vocabulary()
    xs = []
    for _ in range(count):
        syms = draw(st.lists(st.sampled_from(vocab), min_size=1, max_size=2))
        x = None
        for s in syms:
            x = scn.ctx.symbol(*s) if x is None else x * scn.ctx.symbol(*s)
        xs.append(x)
    return scn, xs


@settings(max_examples=40, deadline=None)
@given(graded_inputs(3))
def test_induced_bracket_antisymmetry_and_leibniz(data):
    scn, (x, y, z) = data
    setup = scn.setup
    n = setup.n
    if not (x and y and z):
        return
    dx, dy = x.degree(), y.degree()
    assert setup.bracket(x, y) == -setup.bracket(y, x).scale(sgn((dx + n) * (dy + n)))
    assert setup.bracket(x, y * z) == setup.bracket(x, y) * z + (y * setup.bracket(x, z)).scale(sgn((dx + n) * dy))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(GRADED), st.data())
def test_jacobi_form_matches_oracle_on_sampled_triples(name, data):
    scn = corpus(name)
    M = scn.coalgebra
    gens = scn.pres.generators
    letters = [data.draw(st.sampled_from(gens)) for _ in range(3)]
    idx = [data.draw(st.integers(0, M.rank - 1)) for _ in range(3)]
    xs = [scn.ctx.symbol(l, k) for l, k in zip(letters, idx)]
    direct = br.jacobi_form(scn.setup, *xs)
    oracle = br.jacobi_oracle_QR(scn.setup, (letters[0],), (letters[1],), (letters[2],), *idx)
    assert direct == oracle


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_gerstenhaber_bracket_satisfies_jacobi_on_products(data):
    scn = corpus("matn_vdb")
    ctx = scn.ctx
    vocab = ctx.vocabulary()
    xs = []
    for _ in range(3):
        x = ctx.symbol(*data.draw(st.sampled_from(vocab)))
        if data.draw(st.booleans()):
            x = x * ctx.symbol(*data.draw(st.sampled_from(vocab)))
        xs.append(x)
    assert not br.jacobi_form(scn.setup, *xs)


def test_random_bracket_breaks_jacobi():
    assert not br.check_jacobi_vanishes(corpus("graded_n0").setup).holds


def test_setup_rejects_noncyclic_form():
    scn = corpus("matn_vdb")
    bad = BilinearForm(scn.coalgebra, [[1, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    with pytest.raises(InputError, match="cyclic"):
        br.BracketSetup(scn.ctx, scn.db, bad)
    loose = br.BracketSetup(scn.ctx, scn.db, bad, require_cyclic=False)
    assert not br.verify_all_coderivations(loose).holds


@pytest.mark.parametrize("name", ["trunc2", "group_z3", "quaternion"])
def test_invariance_theorems(name):
    setup = corpus(name).setup
    assert br.verify_unit_group_invariance(setup, samples=5, seed=1).holds
    assert br.verify_all_coderivations(setup).holds


def test_trace_compatibility_and_adjoint_gate():
    scn = corpus("matn_vdb")
    theta = scn.coalgebra.vector({"t11": 1, "t22": 1})
    assert br.verify_trace_compat(scn.setup, theta).holds
    with pytest.raises(InputError):
        br.verify_trace_compat(scn.setup, scn.coalgebra.vector("t11"))


def test_additive_moment_identity():
    scn = corpus("moment_unital")
    ctx, pres = scn.ctx, scn.pres
    xi = pres.word("xi")
    for x in (ctx.symbol("a", "t12"), ctx.symbol("a", "t11") * ctx.symbol("xi", "t21")):
        res = br.moment_bracket_identity(scn.setup, xi, 1, x)
        assert res.holds and res.checked == 4
    with pytest.raises(InputError, match="moment map"):
        br.moment_bracket_identity(scn.setup, pres.word("a"), 1, ctx.symbol("a", "t11"))


def test_multiplicative_moment_identity_mod_ideal():
    scn = corpus("quasi_free_group")
    xi = scn.pres.word("t") - scn.pres.one()
    res = br.moment_bracket_identity(scn.setup, xi, 2, scn.ctx.symbol("t", "t12"), kind="multiplicative")
    assert res.holds and res.details["modulo_moment_ideal"]


def test_quasi_bracket_on_invariants_matches_expansion():
    scn = corpus("quasi_free_group")
    setup, ctx = scn.setup, scn.ctx
    x = scn.samples[1]
    for c in ("t11", "t12", "t21", "t22"):
        res = br.quasi_jacobi_on_invariants(setup, x, setup.sym(("t", 0)), ctx.symbol("t", c))
        assert res.holds and res.details["expansion_agrees"]
    with pytest.raises(InputError, match="not invariant"):
        br.quasi_jacobi_on_invariants(setup, ctx.symbol("t", "t12"), setup.sym(("t", 0)), setup.sym(("t", 1)))


def test_equivariant_bracket_gate_and_independence():
    scn = corpus("equivariant_mat2_J1")
    setup = scn.setup
    assert br.representative_independence(setup).holds
    assert br.check_elll(scn.ctx).holds
    pres = scn.pres
    raw = DoubleBracket(pres, 0, {("a", "b"): {(("c",), ("d",)): 1}}, unlisted_zero=True)
    bad = setup.with_db(raw)
    with pytest.raises(InputError):
        br.equivariant_bracket(bad, scn.ctx.symbol("a", "t11"), scn.ctx.symbol("b", "t12"))
    assert not br.representative_independence(bad, check=False).holds
