"""Bilinear forms on coalgebras, the map v̂, cyclicity and the standard cyclic forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import BasisAlgebra, matrix_algebra
from .coalgebra import Coalgebra, Matrix, Vector, build_algebra_dual, build_group_dual
from .foundations import (ONE, ZERO, DomainError, InputError, add_into, mat_inverse, mat_mul,
                          nullspace, solve, to_scalar, transpose)
from .groups import FiniteGroup

Pair = Tuple[int, int]
TensorDict = Dict[tuple, Fraction]


class BilinearForm:
    """v(e_i⊗e_j) = matrix[i][j] on a coalgebra M."""

    def __init__(self, coalgebra: Coalgebra, matrix: Sequence[Sequence]):
        r = coalgebra.rank
        if len(matrix) != r or any(len(row) != r for row in matrix):
            raise InputError(f"form matrix must be {r}x{r}")
        self.coalgebra = coalgebra
        self.matrix: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(to_scalar(x) for x in row) for row in matrix)
        self._vhat: Optional[Dict[Pair, Dict[Pair, Fraction]]] = None

    @property
    def rank(self) -> int:
        return self.coalgebra.rank

    def __call__(self, a: Sequence, b: Sequence) -> Fraction:
        return sum((a[i] * self.matrix[i][j] * b[j] for i in range(self.rank) if a[i]
                    for j in range(self.rank) if b[j]), ZERO)

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and other.coalgebra is self.coalgebra and other.matrix == self.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_symmetric_matrix(self) -> bool:
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(self.rank) for j in range(self.rank))

    def vhat_basis(self, a: int, b: int) -> Dict[Pair, Fraction]:
        """v̂(e_a⊗e_b) = v(e_a⊗β²) β¹⊗β³ with β = e_b."""
        if self._vhat is None:
            table: Dict[Pair, Dict[Pair, Fraction]] = {}
            M, v = self.coalgebra, self.matrix
            for b_ in range(self.rank):
                mu3 = M.comul_iter_basis(b_, 3)
                for a_ in range(self.rank):
                    row = v[a_]
                    out: Dict[Pair, Fraction] = {}
                    for (i, j, l), c in mu3.items():
                        if row[j]:
                            add_into(out, (i, l), c * row[j])
                    table[(a_, b_)] = out
            self._vhat = table
        return self._vhat[(a, b)]

    def __repr__(self):
        return f"BilinearForm(on {self.coalgebra!r})"


def vhat(v: BilinearForm) -> Dict[Pair, Dict[Pair, Fraction]]:
    """The endomorphism v̂ of M⊗M as a map basis pair -> sparse image."""
    return {(a, b): v.vhat_basis(a, b) for a in range(v.rank) for b in range(v.rank)}


# ---------------------------------------------------------------------------
# operators on sparse tensors of M

def apply_vhat(v: BilinearForm, t: Mapping[tuple, Fraction], pos: int) -> TensorDict:
    out: TensorDict = {}
    for key, c in t.items():
        for (i, l), d in v.vhat_basis(key[pos], key[pos + 1]).items():
            add_into(out, key[:pos] + (i, l) + key[pos + 2:], c * d)
    return out


def apply_comul(M: Coalgebra, t: Mapping[tuple, Fraction], pos: int) -> TensorDict:
    return M._apply_at(t, pos)


def apply_plain(perm: Sequence[int], t: Mapping[tuple, Fraction]) -> TensorDict:
    return {tuple(key[i - 1] for i in perm): c for key, c in t.items()}


def is_cyclic(v: BilinearForm) -> bool:
    """v̂ p21 = p21 v̂."""
    for a in range(v.rank):
        for b in range(a, v.rank):
            if v.vhat_basis(b, a) != {(l, i): c for (i, l), c in v.vhat_basis(a, b).items()}:
                return False
    return True


def cyclic_pairwise(v: BilinearForm) -> bool:
    """Direct check of v(α⊗β²)β¹⊗β³ = v(β⊗α²)α³⊗α¹ on basis pairs, without going through v̂."""
    M = v.coalgebra
    for a in range(v.rank):
        for b in range(v.rank):
            lhs: TensorDict = {}
            for (i, j, l), c in M.comul_iter_basis(b, 3).items():
                add_into(lhs, (i, l), c * v.matrix[a][j])
            rhs: TensorDict = {}
            for (i, j, l), c in M.comul_iter_basis(a, 3).items():
                add_into(rhs, (l, i), c * v.matrix[b][j])
            if lhs != rhs:
                return False
    return True


@dataclass
class IdentityVerdict:
    holds: bool
    checked: int
    witness: Optional[tuple] = None


def _compare_maps(rank: int, arity: int, lhs: Callable, rhs: Callable) -> IdentityVerdict:
    n = 0
    for key in product(range(rank), repeat=arity):
        n += 1
        t = {key: ONE}
        if lhs(t) != rhs(t):
            return IdentityVerdict(False, n, key)
    return IdentityVerdict(True, n)


def check_ci23(v: BilinearForm) -> IdentityVerdict:
    """(v̂⊗id)(id⊗μ) = (id⊗μ) v̂ on M⊗M."""
    M = v.coalgebra
    return _compare_maps(v.rank, 2,
                         lambda t: apply_vhat(v, apply_comul(M, t, 1), 0),
                         lambda t: apply_comul(M, apply_vhat(v, t, 0), 1))


def check_ci24(v: BilinearForm) -> IdentityVerdict:
    """(id⊗v̂)(p21⊗id)(id⊗μ) = (μ⊗id) v̂ on M⊗M."""
    M = v.coalgebra
    return _compare_maps(v.rank, 2,
                         lambda t: apply_vhat(v, apply_plain((2, 1, 3), apply_comul(M, t, 1)), 1),
                         lambda t: apply_comul(M, apply_vhat(v, t, 0), 0))


def _X(v, t):
    return apply_vhat(v, t, 0)


def _Y(v, t):
    return apply_vhat(v, t, 1)


def check_f11(v: BilinearForm) -> IdentityVerdict:
    """p312 X Y = X Y p312 on M⊗M⊗M, X = v̂⊗id, Y = id⊗v̂."""
    return _compare_maps(v.rank, 3,
                         lambda t: apply_plain((3, 1, 2), _X(v, _Y(v, t))),
                         lambda t: _X(v, _Y(v, apply_plain((3, 1, 2), t))))


def check_f14(v: BilinearForm) -> IdentityVerdict:
    """Y p132 X = X p132 Y on M⊗M⊗M."""
    return _compare_maps(v.rank, 3,
                         lambda t: _Y(v, apply_plain((1, 3, 2), _X(v, t))),
                         lambda t: _X(v, apply_plain((1, 3, 2), _Y(v, t))))


# ---------------------------------------------------------------------------
# cyclic structures

@dataclass
class CyclicStructure:
    """α ↦ ᾱ ∈ M*; row a of ``matrix`` is the functional ē_a."""

    coalgebra: Coalgebra
    matrix: Tuple[Tuple[Fraction, ...], ...]
    valid: bool = True

    def bar(self, alpha: Sequence) -> Vector:
        r = self.coalgebra.rank
        return tuple(sum((alpha[a] * self.matrix[a][j] for a in range(r) if alpha[a]), ZERO) for j in range(r))


def ad_v(v: BilinearForm) -> CyclicStructure:
    """ad_v(α)(β) = v(α⊗β); flagged invalid when v is not cyclic."""
    return CyclicStructure(v.coalgebra, v.matrix, valid=is_cyclic(v))


def form_of(c: CyclicStructure) -> BilinearForm:
    return BilinearForm(c.coalgebra, c.matrix)


def is_cyclic_structure(c: CyclicStructure) -> bool:
    return cyclic_pairwise(form_of(c))


# ---------------------------------------------------------------------------
# constructions

def group_character_form(M: Coalgebra, F: Mapping[str, Fraction]) -> Tuple[BilinearForm, Dict[str, Dict[str, Fraction]]]:
    """v(δ_g⊗δ_h) = F(gh) on the dual of Q[G]; also returns δ_g ↦ Σ_z F(gz) z."""
    group: FiniteGroup = M.group
    els = group.elements
    mat = [[to_scalar(F[group.mul(g, h)]) for h in els] for g in els]
    structure = {g: {z: to_scalar(F[group.mul(g, z)]) for z in els if F[group.mul(g, z)]} for g in els}
    return BilinearForm(M, mat), structure


@dataclass
class FrobeniusData:
    algebra: BasisAlgebra
    gram: List[List[Fraction]]
    coalgebra: Coalgebra
    form: BilinearForm
    bar: List[List[Fraction]] = field(default_factory=list)  # bar[i] = coordinates of ē^i in the algebra


def _gram_from_theta(alg: BasisAlgebra, theta: Mapping[str, Fraction]) -> List[List[Fraction]]:
    th = {l: to_scalar(theta.get(l, 0)) for l in alg.labels}
    return [[sum((c * th[k] for k, c in alg.constants[(a, b)].items()), ZERO) for b in alg.labels]
            for a in alg.labels]


def frobenius_form(alg: BasisAlgebra, pairing: Optional[Sequence[Sequence]] = None,
                   theta: Optional[Mapping[str, Fraction]] = None,
                   coalgebra: Optional[Coalgebra] = None) -> FrobeniusData:
    """Cyclic form on the dual coalgebra of a Frobenius algebra.

    Either an explicit Gram matrix ``pairing`` or a trace-like functional
    ``theta`` (giving (a, b) = θ(ab)) must be supplied.
    """
    if (pairing is None) == (theta is None):
        raise InputError("give exactly one of pairing or theta")
    labels = alg.labels
    r = len(labels)
    P = _gram_from_theta(alg, theta) if theta is not None else [[to_scalar(x) for x in row] for row in pairing]
    if len(P) != r or any(len(row) != r for row in P):
        raise InputError(f"pairing must be {r}x{r}")
    for i in range(r):
        for j in range(r):
            if P[i][j] != P[j][i]:
                raise DomainError(f"pairing is not symmetric at ({labels[i]}, {labels[j]})")

    def pair(x: Mapping[str, Fraction], j: int) -> Fraction:
        return sum((c * P[alg.index[k]][j] for k, c in x.items()), ZERO)

    for a, b, c in product(range(r), repeat=3):
        ab = alg.constants[(labels[a], labels[b])]
        bc = alg.constants[(labels[b], labels[c])]
        lhs = pair(ab, c)
        rhs = sum((x * P[a][alg.index[k]] for k, x in bc.items()), ZERO)
        if lhs != rhs:
            raise DomainError(f"pairing is not invariant at ({labels[a]}, {labels[b]}, {labels[c]})")
    Pinv = mat_inverse(P)
    if Pinv is None:
        kernel = nullspace(P)[0]
        raise DomainError("pairing is degenerate; kernel vector "
                          + ", ".join(f"{labels[i]}:{x}" for i, x in enumerate(kernel) if x))
    # ē^i solves (a, ē^i) = e^i(a): column i of P^{-1}
    bar = [[Pinv[k][i] for k in range(r)] for i in range(r)]
    M = build_algebra_dual(alg)
    if coalgebra is not None:
        if coalgebra.rank != M.rank or any(coalgebra.comul(k) != M.comul(k) for k in range(M.rank)) \
                or coalgebra.counit != M.counit:
            raise InputError("the given coalgebra is not the dual of this algebra in matching bases")
        M = coalgebra
    mat = [[bar[i][j] for j in range(r)] for i in range(r)]  # v(e^i⊗e^j) = e^j(ē^i)
    return FrobeniusData(alg, P, M, BilinearForm(M, mat), bar)


def frobenius_matrix_form(inner: BasisAlgebra, N: int, pairing=None, theta=None) -> FrobeniusData:
    """Form on (Mat_N(inner))* from the pairing (a, b) = Σ (a_ij, b_ji)."""
    if N < 1:
        raise InputError("N must be positive")
    base = frobenius_form(inner, pairing=pairing, theta=theta)
    big = matrix_algebra(inner, N)
    r = len(inner.labels)
    idx = {}
    for pos, l in enumerate(big.labels):
        ij, p = l[1:].split(":")
        idx[pos] = (int(ij[0]), int(ij[1]), inner.index[p])
    G = [[ZERO] * len(big.labels) for _ in big.labels]
    for x, (i, j, p) in idx.items():
        for y, (k, l, q) in idx.items():
            if j == k and i == l:
                G[x][y] = base.gram[p][q]
    data = frobenius_form(big, pairing=G)
    data.inner = base
    data.index_map = idx
    return data


def adjoint_element(v: BilinearForm) -> Optional[Vector]:
    """θ with v(θ⊗e_j) = ε(e_j) for all j, or None."""
    M = v.coalgebra
    if not M.counital:
        raise InputError("adjoint elements need a counital coalgebra")
    r = v.rank
    sol = solve([[v.matrix[i][j] for i in range(r)] for j in range(r)], list(M.counit))
    return None if sol is None else tuple(sol)


def is_symmetric_element(M: Coalgebra, theta: Sequence) -> bool:
    return M.is_symmetric_element(theta)


def vhat_on(v: BilinearForm, x: Sequence, y: Sequence) -> Dict[Pair, Fraction]:
    out: Dict[Pair, Fraction] = {}
    for a in range(v.rank):
        if x[a]:
            for b in range(v.rank):
                if y[b]:
                    for key, c in v.vhat_basis(a, b).items():
                        add_into(out, key, x[a] * y[b] * c)
    return out


def form_pullback(v: BilinearForm, w: Matrix) -> BilinearForm:
    """v^ω = v(ω⊗ω), i.e. the matrix ωᵗ v ω."""
    if not v.coalgebra.is_coalgebra_automorphism(w):
        raise InputError("pullback needs a coalgebra automorphism")
    return BilinearForm(v.coalgebra, mat_mul(mat_mul(transpose(w), [list(r) for r in v.matrix]), w))


def is_equivariant_form(v: BilinearForm, coalgebra_matrices: Sequence[Matrix]) -> bool:
    """v(gα⊗gβ) = v(α⊗β) for each given group element matrix."""
    m = [list(r) for r in v.matrix]
    for g in coalgebra_matrices:
        if mat_mul(mat_mul(transpose(g), m), g) != m:
            return False
    return True


def matrix_trace_form(M: Coalgebra, N: int) -> BilinearForm:
    """v(τ_ij⊗τ_kl) = δ_jk δ_il on the dual of Mat_N (indices as in build_matrix_dual)."""
    if M.rank != N * N:
        raise InputError(f"coalgebra rank {M.rank} does not match N = {N}")
    mat = [[ZERO] * (N * N) for _ in range(N * N)]
    for i, j in product(range(N), repeat=2):
        mat[i * N + j][j * N + i] = ONE
    return BilinearForm(M, mat)


def trunc_poly_form(M: Coalgebra) -> BilinearForm:
    """v(u_i⊗u_j) = δ_{i+j,n} on the dual of Q[x]/x^{n+1}."""
    n = M.rank - 1
    return BilinearForm(M, [[ONE if i + j == n else ZERO for j in range(n + 1)] for i in range(n + 1)])
