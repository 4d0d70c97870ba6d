import pytest
from hypothesis import given, settings, strategies as st

from repalg.algebra import (AlgebraMorphism, BasisAlgebra, FreeAlgebra, FreeGroupAlgebra, check_class_equal,
                            matrix_algebra, quaternion_like_algebra, truncated_polynomial_algebra)
from repalg.foundations import ConstructionError, InputError
from repalg.groups import (class_function_from_spec, cyclic_group, regular_character, standard_character_s3,
                           symmetric_group)

FREE = FreeAlgebra({"x": 0, "y": 1, "z": 2})
GROUP = FreeGroupAlgebra(["s", "t"])


@st.composite
def free_elements(draw, pres=FREE, letters=("x", "y", "z")):
    words = draw(st.lists(st.lists(st.sampled_from(letters), min_size=1, max_size=3).map(tuple),
                          min_size=0, max_size=3, unique=True))
    coefs = draw(st.lists(st.integers(-4, 4), min_size=len(words), max_size=len(words)))
    return pres.element(dict(zip(words, coefs)))


@settings(max_examples=50, deadline=None)
@given(free_elements(), free_elements(), free_elements())
def test_free_algebra_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a) * b == FREE.zero()


@settings(max_examples=50, deadline=None)
@given(free_elements(GROUP, ("s", "s^-1", "t", "t^-1")), free_elements(GROUP, ("s", "s^-1", "t", "t^-1")))
def test_free_group_words_reduce(a, b):
    assert (a * b) * GROUP.one() == a * b
    for w in (a * b).terms:
        assert GROUP.reduce(w) == w


def test_free_group_inverse_and_powers():
    g = GROUP.word("s^2 t")
    ginv = GROUP.element({GROUP.inverse_word(GROUP.parse_word("s^2 t")): 1})
    assert g * ginv == GROUP.one()
    assert GROUP.parse_word("s s^-1") == ()
    with pytest.raises(InputError):
        GROUP.word("u")


def test_degrees_and_homogeneous_parts():
    e = FREE.word("x y") + FREE.word("z z")
    parts = e.homogeneous_parts()
    assert sorted(parts) == [1, 4]
    with pytest.raises(InputError):
        e.degree()


def test_graded_commutator_classes():
    # ab ~ ba in degree 0, but y*y is a graded commutator (2 y^2 = [y, y])
    assert check_class_equal(FREE.word("x z"), FREE.word("z x"))
    assert check_class_equal(FREE.word("x y"), FREE.word("y x"))
    assert check_class_equal(FREE.word("y y"), FREE.zero())
    assert not check_class_equal(FREE.word("x x"), FREE.zero())
    assert check_class_equal(FREE.word("x y z"), FREE.word("z x y"))


def test_truncated_polynomials():
    alg = truncated_polynomial_algebra(2)
    x1 = alg.word("x1")
    assert x1 * x1 == alg.word("x2")
    assert x1 * x1 * x1 == alg.zero()
    assert alg.one() == alg.word("x0")


def test_quaternion_relations():
    H = quaternion_like_algebra()
    i, j, k = H.word("i"), H.word("j"), H.word("k")
    assert i * j == k and j * i == -k
    assert i * j * k == -H.one()


def test_matrix_algebra_units():
    M = matrix_algebra(truncated_polynomial_algebra(1), 2)
    e12, e21 = M.word("E12:x0"), M.word("E21:x1")
    assert e12 * e21 == M.word("E11:x1")
    assert e21 * e12 == M.word("E22:x1")
    assert M.unit_terms == {"E11:x0": 1, "E22:x0": 1}


def test_basis_algebra_rejects_nonassociative():
    consts = {("a", "a"): {"b": 1}, ("a", "b"): {"a": 1}, ("b", "a"): {}, ("b", "b"): {}}
    with pytest.raises(ConstructionError, match="associative"):
        BasisAlgebra(["a", "b"], consts)


def test_antimorphism_sign():
    # x ↦ x, y ↦ y reversed: yy' gets the Koszul sign of the swap
    pres = FreeAlgebra({"y": 1, "w": 1})
    anti = AlgebraMorphism(pres, {}, anti=True)
    assert anti.apply(pres.word("y w")) == -pres.word("w y")
    assert anti.compose(anti).same_as(AlgebraMorphism(pres, {}))


def test_group_inversion_morphism():
    inv = AlgebraMorphism(GROUP, {"s": GROUP.word("s^-1"), "t": GROUP.word("t^-1")}, anti=True)
    w = GROUP.word("s t t")
    assert inv.apply(w) * w == GROUP.one()
    with pytest.raises(ConstructionError):
        AlgebraMorphism(GROUP, {"s": GROUP.word("s") + GROUP.word("t")})


def test_groups_and_characters():
    S3 = symmetric_group(3)
    assert len(S3) == 6 and len(S3.conjugacy_classes()) == 3
    chi = standard_character_s3(S3)
    assert S3.is_class_function(chi)
    # orthogonality: <chi, chi> = 1
    assert sum(chi[g] * chi[S3.inv(g)] for g in S3.elements) == len(S3)
    Z3 = cyclic_group(3)
    assert Z3.mul("g", "g2") == "1" and Z3.inv("g") == "g2"
    assert regular_character(Z3) == {"1": 3, "g": 0, "g2": 0}
    assert class_function_from_spec(Z3, "regular") == regular_character(Z3)
