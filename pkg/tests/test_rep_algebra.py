import pytest
from hypothesis import given, settings, strategies as st

from repalg.algebra import FreeAlgebra, FreeGroupAlgebra, quaternion_like_algebra, truncated_polynomial_algebra
from repalg.coalgebra import build_algebra_dual, build_matrix_dual, build_trunc_poly_dual
from repalg.foundations import InputError, Q
from repalg.rep_algebra import RepContext, RepElement, multiply, realize

FREE = FreeAlgebra({"a": 0, "b": 0, "y": 1})
MAT2 = build_matrix_dual(2)
CTX = RepContext(FREE, MAT2)


def test_symbols_are_graded_commutative():
    a11, b12 = CTX.symbol("a", "t11"), CTX.symbol("b", "t12")
    y11, y22 = CTX.symbol("y", "t11"), CTX.symbol("y", "t22")
    assert a11 * b12 == b12 * a11
    assert y11 * y22 == -(y22 * y11)
    assert not (y11 * y11)
    assert (a11 * y11).degree() == 1


def test_word_realization_is_matrix_product():
    # (ab)_{ij} = Σ_r a_{ir} b_{rj}
    lhs = CTX.realize_word(("a", "b"), MAT2.index_of("t12"))
    rhs = CTX.symbol("a", "t11") * CTX.symbol("b", "t12") + CTX.symbol("a", "t12") * CTX.symbol("b", "t22")
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from("aby"), min_size=1, max_size=3), st.lists(st.sampled_from("aby"), min_size=1, max_size=3),
       st.sampled_from(range(4)))
def test_multiplicativity(u, w, k):
    # (uw)_α = u_{α¹} w_{α²}
    total = CTX.zero()
    for (i, j), c in MAT2.comul(k).items():
        total = total + (CTX.realize_word(tuple(u), i) * CTX.realize_word(tuple(w), j)).scale(c)
    assert CTX.realize_word(tuple(u) + tuple(w), k) == total


def test_realize_is_bilinear():
    x = FREE.word("a") + FREE.word("b b").scale(3)
    alpha = MAT2.vector({"t11": 2, "t21": -1})
    expected = (CTX.realize_word(("a",), 0).scale(2) - CTX.realize_word(("a",), 2)
                + CTX.realize_word(("b", "b"), 0).scale(6) - CTX.realize_word(("b", "b"), 2).scale(3))
    assert realize(CTX, x, alpha) == expected


def test_unital_variant_realizes_unit_as_counit():
    pres = FreeAlgebra({"a": 0}, unital=True)
    ctx = RepContext(pres, MAT2, variant="unital")
    assert ctx.realize(pres.one(), "t11") == ctx.unit()
    assert ctx.realize(pres.one(), "t12") == ctx.zero()
    with pytest.raises(InputError):
        RepContext(pres, MAT2)


def test_free_group_inverse_relations():
    pres = FreeGroupAlgebra(["t"])
    M = build_trunc_poly_dual(1)
    ctx = RepContext(pres, M, variant="unital")
    one = ctx.realize(pres.word("t t^-1"), "u0")
    assert one == ctx.unit()
    prod = ctx.symbol("t", 0) * ctx.symbol("t^-1", 0)
    assert ctx.equal_mod_relations(prod, ctx.unit())
    assert not ctx.equal_mod_relations(ctx.symbol("t", 0), ctx.unit())


def test_basis_algebra_relations():
    alg = truncated_polynomial_algebra(1)
    M = build_trunc_poly_dual(1)
    ctx = RepContext(alg, M, variant="unital", degree_bound=3)
    # x1 x1 = 0 in A forces x1_{u0}² = 0 in A_M
    x10 = ctx.symbol("x1", "u0")
    assert ctx.in_ideal(x10 * x10)
    assert not ctx.in_ideal(x10)
    with pytest.raises(InputError, match="degree bound"):
        ctx.in_ideal(x10 * x10 * x10 * x10)


def test_quaternion_relations_hold():
    H = quaternion_like_algebra()
    M = build_algebra_dual(H)
    ctx = RepContext(H, M, variant="unital", degree_bound=2)
    # i·j = k realized at 1*: Σ i_{α¹} j_{α²} = k_{1*}
    lhs = ctx.zero()
    for (p, q), c in M.comul(M.index_of("1*")).items():
        lhs = lhs + (ctx.symbol("i", p) * ctx.symbol("j", q)).scale(c)
    assert ctx.equal_mod_relations(lhs, ctx.symbol("k", "1*"))


def test_automorphism_action_is_multiplicative():
    u = MAT2.vector({"t11": 1, "t12": 1, "t22": 1})
    W = MAT2.inner_automorphism(u)
    x, y = CTX.symbol("a", "t12"), CTX.symbol("b", "t21") + CTX.symbol("y", "t11")
    assert CTX.act_automorphism(W, x * y) == CTX.act_automorphism(W, x) * CTX.act_automorphism(W, y)


def test_coderivation_action_is_a_derivation():
    d = MAT2.inner_coderivation(MAT2.vector("t12"))
    x, y = CTX.symbol("a", "t12"), CTX.symbol("y", "t21")
    lhs = CTX.act_coderivation(d, x * y)
    assert lhs == CTX.act_coderivation(d, x) * y + x * CTX.act_coderivation(d, y)


def test_traces_are_invariant():
    pres = FreeAlgebra({"a": 0, "b": 0}, unital=True)
    ctx = RepContext(pres, MAT2, variant="unital")
    trace = MAT2.vector({"t11": 1, "t22": 1})
    assert ctx.is_invariant(ctx.trace(trace, pres.word("a b")))
    assert ctx.is_invariant(ctx.trace(trace, pres.word("a")) * ctx.trace(trace, pres.word("b")))
    assert not ctx.is_invariant(ctx.symbol("a", "t12"))


def test_serialize_roundtrip_shape():
    x = multiply(CTX.symbol("a", "t11"), CTX.symbol("b", "t12")).scale(Q(1, 2))
    assert x.serialize() == [["a[t11]·b[t12]", "1/2"]]
    assert isinstance(x, RepElement) and x.max_length() == 2
