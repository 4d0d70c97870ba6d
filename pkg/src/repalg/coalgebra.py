"""Finite-rank coalgebras over Q given by structure constants, and the dual algebra M*.

Vectors in M and in M* are tuples of Fractions of length ``rank``.  An
endomorphism E of M is a rank×rank matrix whose column k is E(e_k), so
E[i][k] is the coefficient of e_i in E(e_k).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .foundations import (ONE, ZERO, ConstructionError, DomainError, InputError, add_into,
                          identity_matrix, mat_inverse, mat_mul, solve, to_scalar)
from .groups import FiniteGroup

Vector = Tuple[Fraction, ...]
Matrix = List[List[Fraction]]


class Coalgebra:
    def __init__(self, rank: int, comul: Mapping[int, Mapping[Tuple[int, int], Fraction]],
                 counit: Optional[Sequence] = None, labels: Optional[Sequence[str]] = None,
                 name: str = ""):
        if rank < 1:
            raise ConstructionError("coalgebra rank must be positive")
        self.rank = rank
        self.name = name
        self._comul: List[Dict[Tuple[int, int], Fraction]] = []
        for k in range(rank):
            row: Dict[Tuple[int, int], Fraction] = {}
            for (i, j), c in (comul.get(k) or {}).items():
                if not (0 <= i < rank and 0 <= j < rank):
                    raise ConstructionError(f"comultiplication of e_{k} refers to index out of range")
                add_into(row, (i, j), to_scalar(c))
            self._comul.append(row)
        self.counit: Optional[Vector] = None
        if counit is not None:
            if len(counit) != rank:
                raise ConstructionError("counit has the wrong length")
            self.counit = tuple(to_scalar(c) for c in counit)
        self.labels: Tuple[str, ...] = tuple(labels) if labels else tuple(f"e{k}" for k in range(rank))
        if len(self.labels) != rank or len(set(self.labels)) != rank:
            raise ConstructionError("labels must be distinct, one per basis element")
        self.label_index = {l: i for i, l in enumerate(self.labels)}
        self._iter_cache: Dict[Tuple[int, int], Dict[tuple, Fraction]] = {}
        self._check_coassociative()
        if self.counit is not None:
            self._check_counit()

    # -- axioms ----------------------------------------------------------------
    def _check_coassociative(self):
        for k in range(self.rank):
            left = self._apply_at(self._comul[k], 0)
            right = self._apply_at(self._comul[k], 1)
            if left != right:
                bad = sorted(set(left) ^ set(right) | {t for t in left if t in right and left[t] != right[t]})
                raise ConstructionError(
                    f"comultiplication is not coassociative at {self.labels[k]}; "
                    f"first differing term {tuple(self.labels[i] for i in bad[0])}")

    def _check_counit(self):
        eps = self.counit
        for k in range(self.rank):
            left: Dict[int, Fraction] = {}
            right: Dict[int, Fraction] = {}
            for (i, j), c in self._comul[k].items():
                add_into(left, j, eps[i] * c)
                add_into(right, i, eps[j] * c)
            if left != {k: ONE} or right != {k: ONE}:
                raise ConstructionError(f"counit axiom fails at basis element {self.labels[k]}")

    @property
    def counital(self) -> bool:
        return self.counit is not None

    # -- comultiplication ---------------------------------------------------
    def comul(self, k: int) -> Dict[Tuple[int, int], Fraction]:
        return self._comul[k]

    def _apply_at(self, tensor: Mapping[tuple, Fraction], pos: int) -> Dict[tuple, Fraction]:
        """Apply μ to tensor factor ``pos``."""
        out: Dict[tuple, Fraction] = {}
        for key, c in tensor.items():
            for (i, j), d in self._comul[key[pos]].items():
                add_into(out, key[:pos] + (i, j) + key[pos + 1:], c * d)
        return out

    def comul_iter_basis(self, k: int, m: int, position: Optional[int] = None) -> Dict[tuple, Fraction]:
        """μ^m(e_k) in M^{⊗m}; ``position`` forces the insertion point used at each step."""
        if m < 1:
            raise InputError("comul_iter needs m >= 1")
        if position is None:
            key = (k, m)
            hit = self._iter_cache.get(key)
            if hit is not None:
                return hit
        t: Dict[tuple, Fraction] = {(k,): ONE}
        for step in range(1, m):
            pos = 0 if position is None else min(position, step - 1)
            t = self._apply_at(t, pos)
        if position is None:
            self._iter_cache[(k, m)] = t
        return t

    def comul_iter(self, alpha: Sequence, m: int, position: Optional[int] = None) -> Dict[tuple, Fraction]:
        if m < 2:
            raise InputError("comul_iter needs m >= 2")
        out: Dict[tuple, Fraction] = {}
        for k, a in enumerate(alpha):
            if a:
                for key, c in self.comul_iter_basis(k, m, position).items():
                    add_into(out, key, a * c)
        return out

    # -- vectors ---------------------------------------------------------------
    def basis_vector(self, k: int) -> Vector:
        return tuple(ONE if i == k else ZERO for i in range(self.rank))

    def vector(self, spec) -> Vector:
        """From a label, an index, a list of coefficients or a {label: coef} mapping."""
        if isinstance(spec, str):
            return self.basis_vector(self.index_of(spec))
        if isinstance(spec, int):
            return self.basis_vector(spec)
        if isinstance(spec, Mapping):
            v = [ZERO] * self.rank
            for l, c in spec.items():
                v[self.index_of(l)] += to_scalar(c)
            return tuple(v)
        if len(spec) != self.rank:
            raise InputError("vector has the wrong length")
        return tuple(to_scalar(c) for c in spec)

    def index_of(self, label: str) -> int:
        if label not in self.label_index:
            raise InputError(f"unknown basis label {label!r}")
        return self.label_index[label]

    def format_vector(self, v: Sequence[Fraction]) -> str:
        from .foundations import format_scalar
        parts = [f"{format_scalar(c)}*{self.labels[i]}" for i, c in enumerate(v) if c]
        return " + ".join(parts) if parts else "0"

    # -- the dual algebra M* -----------------------------------------------------
    def dual_multiply(self, a: Sequence, b: Sequence) -> Vector:
        if len(a) != self.rank or len(b) != self.rank:
            raise InputError("dual element has the wrong length")
        return tuple(sum((c * a[i] * b[j] for (i, j), c in self._comul[k].items()), ZERO)
                     for k in range(self.rank))

    def dual_unit(self) -> Vector:
        if self.counit is None:
            raise InputError("coalgebra has no counit")
        return self.counit

    def dual_inverse(self, u: Sequence) -> Vector:
        """Two-sided inverse in M*, via the systems u·x = ε and x·u = ε."""
        eps = self.dual_unit()
        r = self.rank
        left = [[sum((c * u[i] for (i, jj), c in self._comul[k].items() if jj == j), ZERO)
                 for j in range(r)] for k in range(r)]
        right = [[sum((c * u[jj] for (ii, jj), c in self._comul[k].items() if ii == i), ZERO)
                  for i in range(r)] for k in range(r)]
        x = solve(left, eps)
        y = solve(right, eps)
        if x is None or y is None:
            raise DomainError("element is not invertible in the dual algebra")
        x, y = tuple(x), tuple(y)
        if self.dual_multiply(y, u) != eps or self.dual_multiply(u, y) != eps:
            raise DomainError("element is not invertible in the dual algebra")
        return y

    def is_invertible(self, u: Sequence) -> bool:
        try:
            self.dual_inverse(u)
            return True
        except DomainError:
            return False

    # -- endomorphisms -----------------------------------------------------------
    def apply(self, E: Matrix, v: Sequence) -> Vector:
        return tuple(sum((E[i][k] * v[k] for k in range(self.rank) if v[k]), ZERO) for i in range(self.rank))

    def _check_square(self, E):
        if len(E) != self.rank or any(len(r) != self.rank for r in E):
            raise InputError(f"endomorphism must be a {self.rank}x{self.rank} matrix")

    def _tensor_image(self, E: Matrix, F: Matrix, t: Mapping[Tuple[int, int], Fraction]):
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), c in t.items():
            for a in range(self.rank):
                x = E[a][i]
                if not x:
                    continue
                for b in range(self.rank):
                    y = F[b][j]
                    if y:
                        add_into(out, (a, b), c * x * y)
        return out

    def _comul_of_image(self, E: Matrix, k: int):
        out: Dict[Tuple[int, int], Fraction] = {}
        for a in range(self.rank):
            if E[a][k]:
                for key, c in self._comul[a].items():
                    add_into(out, key, E[a][k] * c)
        return out

    def is_coderivation(self, d: Matrix) -> bool:
        """μ d = (d⊗id + id⊗d) μ."""
        self._check_square(d)
        I = identity_matrix(self.rank)
        for k in range(self.rank):
            lhs = self._comul_of_image(d, k)
            rhs = self._tensor_image(d, I, self._comul[k])
            for key, c in self._tensor_image(I, d, self._comul[k]).items():
                add_into(rhs, key, c)
            if lhs != rhs:
                return False
        return True

    def is_coalgebra_automorphism(self, w: Matrix) -> bool:
        """μ ω = (ω⊗ω) μ and ω invertible."""
        self._check_square(w)
        if mat_inverse(w) is None:
            raise InputError("candidate automorphism is not invertible")
        return all(self._comul_of_image(w, k) == self._tensor_image(w, w, self._comul[k])
                   for k in range(self.rank))

    def is_coalgebra_antiautomorphism(self, w: Matrix) -> bool:
        """(ω⊗ω) μ = p21 μ ω and ω invertible."""
        self._check_square(w)
        if mat_inverse(w) is None:
            raise InputError("candidate antiautomorphism is not invertible")
        for k in range(self.rank):
            lhs = self._tensor_image(w, w, self._comul[k])
            rhs = {(j, i): c for (i, j), c in self._comul_of_image(w, k).items()}
            if lhs != rhs:
                return False
        return True

    def preserves_counit(self, w: Matrix) -> bool:
        if self.counit is None:
            return True
        return all(sum((self.counit[i] * w[i][k] for i in range(self.rank)), ZERO) == self.counit[k]
                   for k in range(self.rank))

    def inner_coderivation(self, phi: Sequence) -> Matrix:
        """δ_φ(α) = φ(α²)α¹ − φ(α¹)α²."""
        phi = self.vector(phi) if not isinstance(phi, tuple) else phi
        D = [[ZERO] * self.rank for _ in range(self.rank)]
        for k in range(self.rank):
            for (i, j), c in self._comul[k].items():
                D[i][k] += c * phi[j]
                D[j][k] -= c * phi[i]
        return D

    def inner_automorphism(self, u: Sequence) -> Matrix:
        """^uα = u^{-1}(α¹) α² u(α³)."""
        if self.counit is None:
            raise InputError("inner automorphisms need a counital coalgebra")
        u = tuple(to_scalar(x) for x in u)
        uinv = self.dual_inverse(u)
        W = [[ZERO] * self.rank for _ in range(self.rank)]
        for k in range(self.rank):
            for (i, j, l), c in self.comul_iter_basis(k, 3).items():
                x = uinv[i] * u[l]
                if x:
                    W[j][k] += c * x
        return W

    def endomorphism_commutator(self, a: Matrix, b: Matrix) -> Matrix:
        ab, ba = mat_mul(a, b), mat_mul(b, a)
        return [[ab[i][j] - ba[i][j] for j in range(self.rank)] for i in range(self.rank)]

    def dual_commutator(self, a: Sequence, b: Sequence) -> Vector:
        ab, ba = self.dual_multiply(a, b), self.dual_multiply(b, a)
        return tuple(x - y for x, y in zip(ab, ba))

    def is_symmetric_element(self, theta: Sequence) -> bool:
        """p21 μ(θ) = μ(θ)."""
        t = self.comul_iter(theta, 2)
        return t == {(j, i): c for (i, j), c in t.items()}

    def __repr__(self):
        return f"Coalgebra({self.name or 'custom'}, rank={self.rank})"


# ---------------------------------------------------------------------------
# builders

def build_from_constants(rank: int, comul, counit=None, labels=None, name: str = "") -> Coalgebra:
    return Coalgebra(rank, comul, counit, labels, name)


def build_matrix_dual(N: int) -> Coalgebra:
    """Dual of Mat_N: basis τ_ij (labels "t{i}{j}"), μ(τ_ij) = Σ_r τ_ir⊗τ_rj, ε(τ_ij) = δ_ij."""
    if N < 1:
        raise InputError("N must be positive")
    idx = {(i, j): (i - 1) * N + (j - 1) for i in range(1, N + 1) for j in range(1, N + 1)}
    comul = {idx[(i, j)]: {(idx[(i, r)], idx[(r, j)]): ONE for r in range(1, N + 1)} for (i, j) in idx}
    counit = [ONE if i == j else ZERO for (i, j) in sorted(idx, key=idx.get)]
    sep = "," if N > 9 else ""
    labels = [f"t{i}{sep}{j}" for (i, j) in sorted(idx, key=idx.get)]
    return Coalgebra(N * N, comul, counit, labels, name=f"Mat{N}*")


def build_group_dual(group: FiniteGroup) -> Coalgebra:
    """Dual of Q[G]: basis δ_g (labels "d_{g}"), μ(δ_g) = Σ_{xy=g} δ_x⊗δ_y."""
    n = len(group)
    comul: Dict[int, Dict[Tuple[int, int], Fraction]] = {k: {} for k in range(n)}
    for x in group.elements:
        for y in group.elements:
            comul[group.index[group.mul(x, y)]][(group.index[x], group.index[y])] = ONE
    counit = [ONE if g == group.identity else ZERO for g in group.elements]
    M = Coalgebra(n, comul, counit, [f"d_{g}" for g in group.elements], name=f"Q[G]* (|G|={n})")
    M.group = group
    return M


def build_trunc_poly_dual(n: int) -> Coalgebra:
    """Dual of Q[x]/x^{n+1}: basis u_0..u_n, μ(u_i) = Σ_k u_k⊗u_{i−k}, ε(u_i) = [i=0]."""
    if n < 0:
        raise InputError("n must be non-negative")
    comul = {i: {(k, i - k): ONE for k in range(i + 1)} for i in range(n + 1)}
    counit = [ONE] + [ZERO] * n
    return Coalgebra(n + 1, comul, counit, [f"u{i}" for i in range(n + 1)], name=f"trunc{n}*")


def build_algebra_dual(alg) -> Coalgebra:
    """Dual coalgebra of a finite-dimensional algebra: μ(e^k) = Σ c_ij^k e^i⊗e^j, ε = evaluation at 1."""
    consts = alg.structure_matrix()
    r = len(alg.labels)
    comul: Dict[int, Dict[Tuple[int, int], Fraction]] = {k: {} for k in range(r)}
    for (i, j), row in consts.items():
        for k, c in row.items():
            comul[k][(i, j)] = c
    counit = None
    if alg.unit_terms is not None:
        counit = [alg.unit_terms.get(l, ZERO) for l in alg.labels]
    M = Coalgebra(r, comul, counit, [f"{l}*" for l in alg.labels], name="dual")
    M.algebra = alg
    return M
