import pytest
from hypothesis import given, settings, strategies as st

from repalg.algebra import quaternion_like_algebra, truncated_polynomial_algebra
from repalg.coalgebra import build_group_dual, build_matrix_dual, build_trunc_poly_dual
from repalg.foundations import DomainError, Q, identity_matrix
from repalg.forms import (BilinearForm, ad_v, adjoint_element, check_ci23, check_ci24, check_f11, check_f14,
                          cyclic_pairwise, form_pullback, frobenius_form, frobenius_matrix_form,
                          group_character_form, is_cyclic, is_cyclic_structure, matrix_trace_form,
                          trunc_poly_form, vhat_on)
from repalg.groups import cyclic_group, regular_character, standard_character_s3, symmetric_group

IDENTITIES = (check_ci23, check_ci24, check_f11, check_f14)


def test_matrix_vhat_closed_form():
    # v̂(τ_ij⊗τ_kl) = τ_kj⊗τ_il for the trace form
    N = 3
    M = build_matrix_dual(N)
    v = matrix_trace_form(M, N)
    for i, j, k, l in ((0, 1, 2, 0), (1, 1, 1, 1), (2, 0, 0, 2)):
        assert v.vhat_basis(i * N + j, k * N + l) == {(k * N + j, i * N + l): 1}


@pytest.mark.parametrize("N", [1, 2, 3])
def test_trace_form_is_cyclic(N):
    v = matrix_trace_form(build_matrix_dual(N), N)
    assert is_cyclic(v) and cyclic_pairwise(v)
    assert all(check(v).holds for check in IDENTITIES)
    assert adjoint_element(v) == build_matrix_dual(N).vector({f"t{i}{i}": 1 for i in range(1, N + 1)})


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(-3, 3), min_size=7, max_size=7), st.integers(0, 2))
def test_cyclic_forms_on_trunc_are_upper_hankel(n, values, low):
    # on the dual of Q[x]/x^{n+1}, v is cyclic iff v(u_i⊗u_j) = f(i + j) with f(m) = 0 for m < n
    M = build_trunc_poly_dual(n)
    f = [0] * n + values[:n + 1]
    hankel = BilinearForm(M, [[f[i + j] for j in range(n + 1)] for i in range(n + 1)])
    assert is_cyclic(hankel) and cyclic_pairwise(hankel)
    assert all(check(hankel).holds for check in IDENTITIES)
    bumped = [list(r) for r in hankel.matrix]
    bumped[0][n] += 1
    assert not is_cyclic(BilinearForm(M, bumped))
    m = low % n
    g = list(f)
    g[m] += 1
    assert not is_cyclic(BilinearForm(M, [[g[i + j] for j in range(n + 1)] for i in range(n + 1)]))


def test_trunc_form_adjoint_is_top_element():
    for n in (1, 2, 3):
        M = build_trunc_poly_dual(n)
        assert adjoint_element(trunc_poly_form(M)) == M.basis_vector(n)


def test_group_character_forms():
    M = build_group_dual(cyclic_group(2))
    v, structure = group_character_form(M, regular_character(M.group))
    assert is_cyclic(v)
    assert adjoint_element(v) == (Q(1, 2), Q(0))
    assert structure["1"] == {"1": 2}

    S3 = build_group_dual(symmetric_group(3))
    v3, _ = group_character_form(S3, standard_character_s3(S3.group))
    assert is_cyclic(v3) and v3.is_symmetric_matrix()
    # the standard character pairing has a kernel, so there is no adjoint element
    assert adjoint_element(v3) is None


def test_noncyclic_form_breaks_identities():
    M = build_matrix_dual(2)
    v = BilinearForm(M, [[1, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert not is_cyclic(v) and not cyclic_pairwise(v)
    assert not check_f11(v).holds and not check_f14(v).holds
    assert not ad_v(v).valid and not is_cyclic_structure(ad_v(v))


def test_frobenius_forms():
    H = quaternion_like_algebra()
    data = frobenius_form(H, theta={"1": 1})
    assert is_cyclic(data.form)
    assert adjoint_element(data.form) == data.coalgebra.vector("1*")
    T = truncated_polynomial_algebra(1)
    with pytest.raises(DomainError, match="degenerate"):
        frobenius_form(T, theta={"x0": 1})
    big = frobenius_matrix_form(T, 2, theta={"x1": 1})
    assert is_cyclic(big.form)


def test_pullback_by_inner_automorphism_is_trivial():
    M = build_matrix_dual(2)
    v = matrix_trace_form(M, 2)
    u = M.vector({"t11": 2, "t12": 1, "t22": 1})
    W = M.inner_automorphism(u)
    assert form_pullback(v, W) == v
    assert form_pullback(v, identity_matrix(4)) == v


def test_vhat_on_is_bilinear():
    M = build_trunc_poly_dual(2)
    v = trunc_poly_form(M)
    x, y = (Q(1), Q(2), Q(0)), (Q(0), Q(1), Q(-1))
    both = vhat_on(v, x, y)
    twice = vhat_on(v, tuple(2 * c for c in x), y)
    assert twice == {k: 2 * c for k, c in both.items()}
