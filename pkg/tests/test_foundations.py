from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from repalg.foundations import (InputError, SparseSpan, Tensor, compose_perms, format_scalar, graded_permute,
                                identity_matrix, mat_inverse, mat_mul, nullspace, permutation_sign_exponent,
                                plain_permute, solve, to_scalar)


def test_to_scalar_exact():
    assert to_scalar("1/3") == Fraction(1, 3)
    assert to_scalar(" -4 ") == -4
    assert to_scalar(Fraction(2, 6)) == Fraction(1, 3)
    assert format_scalar(to_scalar("6/4")) == "3/2"


@pytest.mark.parametrize("bad", [0.5, True, "x", "1/0", None])
def test_to_scalar_rejects(bad):
    with pytest.raises(InputError):
        to_scalar(bad)


def test_tensor_drops_zero_terms():
    t = Tensor(2, {("a", "b"): 1, ("b", "a"): 0})
    assert len(t) == 1
    assert not (t - t)
    with pytest.raises(InputError):
        Tensor(2, {("a",): 1})


def test_transposition_sign():
    # two odd entries swap with a minus sign, anything even swaps freely
    assert permutation_sign_exponent((2, 1), (1, 1)) % 2 == 1
    assert permutation_sign_exponent((2, 1), (1, 2)) % 2 == 0
    deg = {"x": 1, "y": 1, "z": 0}.get
    t = Tensor(2, {("x", "y"): 1}, deg)
    assert graded_permute((2, 1), 0, t) == Tensor(2, {("y", "x"): -1}, deg)
    # shifting by an odd n makes both entries even
    assert graded_permute((2, 1), 1, t) == Tensor(2, {("y", "x"): 1}, deg)


perms3 = st.permutations([1, 2, 3])
labels = st.sampled_from(["x", "y", "z", "w"])
DEGREES = {"x": 0, "y": 1, "z": 2, "w": 3}


@st.composite
def tensors3(draw):
    keys = draw(st.lists(st.tuples(labels, labels, labels), min_size=1, max_size=4, unique=True))
    coefs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(keys), max_size=len(keys)))
    return Tensor(3, dict(zip(keys, coefs)), DEGREES.get)


@settings(max_examples=60, deadline=None)
@given(tensors3(), perms3, perms3, st.integers(-1, 1))
def test_graded_permute_composes(t, p, q, n):
    lhs = graded_permute(p, n, graded_permute(q, n, t))
    assert lhs == graded_permute(compose_perms(p, q), n, t)


@settings(max_examples=60, deadline=None)
@given(tensors3(), perms3)
def test_plain_permute_composes(t, p):
    inv = tuple(p.index(i) + 1 for i in (1, 2, 3))
    assert plain_permute(inv, plain_permute(p, t)) == t


def test_matrix_helpers_oracle():
    m = [[2, 1], [1, 1]]
    assert mat_inverse(m) == [[1, -1], [-1, 2]]
    assert mat_inverse([[1, 2], [2, 4]]) is None
    assert mat_mul(m, mat_inverse(m)) == identity_matrix(2)
    ns = nullspace([[1, 2], [2, 4]])
    assert len(ns) == 1 and ns[0][0] + 2 * ns[0][1] == 0
    assert solve([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    assert solve([[1, 1], [1, 1]], [1, 2]) is None


@settings(max_examples=40, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(-3, 3).filter(bool), max_size=4), max_size=5))
def test_sparse_span_membership(vecs):
    span = SparseSpan()
    span.extend(vecs)
    for v in vecs:
        assert span.contains(v)
    if len(vecs) >= 2:
        combo = {}
        for k in set(vecs[0]) | set(vecs[1]):
            c = 2 * vecs[0].get(k, 0) - vecs[1].get(k, 0)
            if c:
                combo[k] = c
        assert span.contains(combo)
    assert len(span) <= 6
