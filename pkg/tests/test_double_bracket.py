import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from repalg.algebra import AlgebraMorphism, FreeAlgebra, FreeGroupAlgebra, truncated_polynomial_algebra
from repalg.double_bracket import (DoubleBracket, average_over_involution, check_bracket, is_equivariant_db,
                                   is_gerstenhaber, is_moment_map, is_quasi_poisson, quasi_poisson_ansatz,
                                   tribracket_words)
from repalg.foundations import InputError, Q, add_into

DEGREES = {"x": 0, "y": 1, "z": 2}


def sgn(e):
    return -1 if e % 2 else 1


def random_graded_bracket(seed, n, degrees=DEGREES, max_terms=3):
    """A random n-graded double bracket on a free algebra, legs of length at most 2."""
    pres = FreeAlgebra(degrees)
    rng = random.Random(seed)
    words = [w for k in (1, 2) for w in itertools.product(pres.generators, repeat=k)]
    blank = DoubleBracket(pres, n, {}, unlisted_zero=True)
    table = {}
    for a, b in itertools.combinations_with_replacement(pres.generators, 2):
        target = degrees[a] + degrees[b] + n
        legs = [(u, w) for u in words for w in words if pres.word_degree(u) + pres.word_degree(w) == target]
        entry = {}
        for leg in rng.sample(legs, min(len(legs), rng.randint(0, max_terms))):
            add_into(entry, leg, Q(rng.randint(-3, 3)))
        if a == b:
            sym = dict(entry)
            for k, c in blank.flip(a, a, entry).items():
                add_into(sym, k, c)
            entry = {k: c / 2 for k, c in sym.items()}
        table[(a, b)] = entry
    return DoubleBracket(pres, n, table)


def swap_words(db, u, w, t):
    """⟦w,u⟧ from ⟦u,w⟧ = t by graded antisymmetry."""
    du, dw = db.deg(u) + db.n, db.deg(w) + db.n
    out = {}
    for (p, q), c in t.items():
        add_into(out, (q, p), -sgn(du * dw + db.deg(p) * db.deg(q)) * c)
    return out


def add(*ts):
    out = {}
    for t in ts:
        for k, c in t.items():
            add_into(out, k, c)
    return out


def scaled(s, t):
    return {k: s * c for k, c in t.items()}


words_st = st.lists(st.sampled_from("xyz"), min_size=1, max_size=4).map(tuple)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([-1, 0, 1]), words_st, words_st)
def test_graded_antisymmetry(seed, n, u, w):
    db = random_graded_bracket(seed, n)
    assert db.eval_words(w, u) == swap_words(db, u, w, db.eval_words(u, w))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([-1, 0, 1]), words_st, words_st, st.integers(1, 3))
def test_leibniz_rules_at_every_split(seed, n, u, w, cut):
    db = random_graded_bracket(seed, n)
    if len(w) > 1:
        b, c = w[:min(cut, len(w) - 1)], w[min(cut, len(w) - 1):]
        rhs = add(db.outer_right(db.eval_words(u, b), c),
                  scaled(sgn((db.deg(u) + n) * db.deg(b)), db.outer_left(b, db.eval_words(u, c))))
        assert db.eval_words(u, w) == rhs
    if len(u) > 1:
        a, b = u[:min(cut, len(u) - 1)], u[min(cut, len(u) - 1):]
        rhs = add(db.star_left(a, db.eval_words(b, w)),
                  scaled(sgn(db.deg(b) * (db.deg(w) + n)), db.star_right(db.eval_words(a, w), b)))
        assert db.eval_words(u, w) == rhs


def test_van_den_bergh_example_is_gerstenhaber():
    pres = FreeAlgebra({g: 0 for g in "abcd"})
    db = DoubleBracket(pres, 0, {("a", "b"): {(("c",), ("d",)): 1}}, unlisted_zero=True)
    assert db.eval_words(("b",), ("a",)) == {(("d",), ("c",)): -1}
    assert is_gerstenhaber(db, samples=10).holds
    assert check_bracket(db, pres.word("a"), pres.word("b")) == pres.word("c d")


def test_random_bracket_is_not_gerstenhaber():
    assert not is_gerstenhaber(random_graded_bracket(7, 0, max_terms=4)).holds


def test_free_group_inverse_rule():
    # ⟦s, t⟧t⁻¹ + t⟦s, t⁻¹⟧ = ⟦s, t t⁻¹⟧ = 0
    pres = FreeGroupAlgebra(["s", "t"])
    db = DoubleBracket(pres, 0, {("s", "t"): {(("t",), ("s",)): 1, (("s", "t"), ()): -2}}, unlisted_zero=True)
    t, tinv = ("t",), pres.parse_word("t^-1")
    total = add(db.outer_right(db.eval_words(("s",), t), tinv), db.outer_left(t, db.eval_words(("s",), tinv)))
    assert total == {}


def test_tribracket_is_trilinear_zero_on_zero_bracket():
    pres = FreeAlgebra({"a": 0})
    db = DoubleBracket(pres, 0, {}, unlisted_zero=True)
    assert tribracket_words(db, ("a",), ("a",), ("a", "a")) == {}


def test_quasi_poisson_ansatz_contains_corpus_bracket():
    pres = FreeGroupAlgebra(["t"])
    pairs, cs, solutions = quasi_poisson_ansatz(pres, "t")
    assert len(solutions) == 1
    # family relation: c0·c3 = c1² − 1, with c2 = c4 = c5 = 0
    sol = solutions[0]
    assert {str(k) for k, v in sol.items() if v == 0} == {"c2", "c4", "c5"}
    c0, c1, c3 = cs[0], cs[1], cs[3]
    assert (sol[c0] * c3 - (c1 ** 2 - 1)).simplify() == 0
    # ⟦t,t⟧ = t²⊗1 − 1⊗t² is c1 = −1 with c0 = c3 = 0, a member of the family
    assert pairs[1] == ((), ("t", "t"))
    db = DoubleBracket(pres, 0, {("t", "t"): {(("t", "t"), ()): 1, ((), ("t", "t")): -1}})
    assert is_quasi_poisson(db, samples=10).holds
    assert not is_gerstenhaber(db).holds


def test_moment_maps():
    pres = FreeAlgebra({"xi": 0, "a": 0}, unital=True)
    unit = ()
    db = DoubleBracket(pres, 0, {
        ("xi", "xi"): {(("xi",), unit): 1, (unit, ("xi",)): -1},
        ("xi", "a"): {(("a",), unit): 1, (unit, ("a",)): -1},
    })
    assert is_moment_map(db, pres.word("xi")).holds
    assert not is_moment_map(db, pres.word("a")).holds
    assert not is_moment_map(db, pres.word("xi"), scale=2).holds

    group = FreeGroupAlgebra(["t"])
    qdb = DoubleBracket(group, 0, {("t", "t"): {(("t", "t"), ()): 1, ((), ("t", "t")): -1}})
    assert is_moment_map(qdb, group.word("t"), kind="multiplicative").holds


def test_equivariant_averaging():
    pres = FreeAlgebra({g: 0 for g in "abcd"})
    db = DoubleBracket(pres, 0, {("a", "b"): {(("c",), ("d",)): 1}}, unlisted_zero=True)
    iota = AlgebraMorphism(pres, {}, anti=True)
    assert not is_equivariant_db(db, [iota]).holds
    avg = average_over_involution(db, iota)
    assert avg.eval_words(("a",), ("b",)) == {(("c",), ("d",)): Q(1, 2), (("d",), ("c",)): Q(1, 2)}
    assert is_equivariant_db(avg, [iota]).holds


def test_table_validation():
    pres = FreeAlgebra({"x": 0, "y": 1})
    with pytest.raises(InputError, match="grading"):
        DoubleBracket(pres, 0, {("x", "y"): {(("x",), ("x",)): 1}})
    with pytest.raises(InputError, match="antisymmetry"):
        DoubleBracket(pres, 0, {("x", "x"): {(("x",), ("x",)): 1}})
    db = DoubleBracket(pres, 0, {("x", "x"): {}})
    with pytest.raises(InputError, match=r"no entry for the pair \(x, y\)"):
        db.eval_words(("x",), ("y",))


def test_basis_algebra_leibniz_checked():
    alg = truncated_polynomial_algebra(1)
    with pytest.raises(InputError, match="Leibniz"):
        # a bracket with the unit x0 must vanish
        DoubleBracket(alg, 0, {("x0", "x1"): {(("x1",), ("x0",)): 1}}, unlisted_zero=True)
    # x1 ⊗ x0 − x0 ⊗ x1 is a genuine biderivation here since x1² = 0
    DoubleBracket(alg, 0, {("x1", "x1"): {(("x1",), ("x0",)): 1, (("x0",), ("x1",)): -1}}, unlisted_zero=True)
