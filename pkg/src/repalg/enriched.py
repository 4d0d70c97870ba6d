"""Enriched finite groups acting on an algebra and a coalgebra.

An enriched group is a finite group G with a subgroup G0 of index 1 or 2.
Elements of G0 act by automorphisms, the others by antiautomorphisms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .algebra import AlgebraMorphism, AlgebraPresentation, BasisAlgebra
from .coalgebra import Coalgebra, Matrix, Vector
from .foundations import ONE, ZERO, ConstructionError, InputError, identity_matrix, mat_inverse, mat_mul, to_scalar
from .groups import FiniteGroup, cyclic_group


class EnrichedGroup:
    """A finite group with G0, an action on A by (anti)automorphisms and on M by matrices."""

    def __init__(self, group: FiniteGroup, even: Sequence[str], pres: AlgebraPresentation,
                 algebra_action: Mapping[str, AlgebraMorphism], coalgebra: Coalgebra,
                 coalgebra_action: Mapping[str, Matrix]):
        self.group = group
        self.even = frozenset(even)
        self.pres = pres
        self.coalgebra = coalgebra
        if not self.even <= set(group.elements) or group.identity not in self.even:
            raise ConstructionError("G0 must be a subset of G containing the identity")
        if any(group.mul(g, h) not in self.even for g in self.even for h in self.even):
            raise ConstructionError("G0 is not closed under multiplication")
        if 2 * len(self.even) not in (len(group), 2 * len(group)):
            raise ConstructionError("G0 must have index 1 or 2 in G")
        self.alg: Dict[str, AlgebraMorphism] = {}
        self.mat: Dict[str, Matrix] = {}
        for g in group.elements:
            f = algebra_action.get(g)
            if f is None:
                if g != group.identity:
                    raise ConstructionError(f"no action on the algebra given for {g}")
                f = AlgebraMorphism(pres, {})
            if f.anti != (g not in self.even):
                kind = "an antiautomorphism" if g not in self.even else "an automorphism"
                raise ConstructionError(f"{g} must act on the algebra by {kind}")
            self.alg[g] = f
            m = coalgebra_action.get(g)
            if m is None:
                if g != group.identity:
                    raise ConstructionError(f"no action on the coalgebra given for {g}")
                m = identity_matrix(coalgebra.rank)
            m = [[to_scalar(x) for x in row] for row in m]
            if g in self.even:
                ok = coalgebra.is_coalgebra_automorphism(m)
            else:
                ok = coalgebra.is_coalgebra_antiautomorphism(m)
            if not ok:
                raise ConstructionError(f"{g} does not act on the coalgebra by a coalgebra "
                                        f"{'auto' if g in self.even else 'anti'}morphism")
            self.mat[g] = m
        self._check_action()

    def _check_action(self):
        G = self.group
        for g in G.elements:
            for h in G.elements:
                gh = G.mul(g, h)
                if mat_mul(self.mat[g], self.mat[h]) != self.mat[gh]:
                    raise ConstructionError(f"coalgebra action is not a group action at ({g}, {h})")
                if not self.alg[g].compose(self.alg[h]).same_as(self.alg[gh]):
                    raise ConstructionError(f"algebra action is not a group action at ({g}, {h})")

    @property
    def elements(self):
        return self.group.elements

    def is_even(self, g: str) -> bool:
        return g in self.even

    def act_vector(self, g: str, v: Sequence) -> Vector:
        return self.coalgebra.apply(self.mat[g], v)

    def act_functional(self, phi: Sequence, g: str) -> Vector:
        """φg = φ∘g."""
        m, r = self.mat[g], self.coalgebra.rank
        return tuple(sum((phi[i] * m[i][k] for i in range(r)), ZERO) for k in range(r))


def averaging_ell(phi: Sequence, action: EnrichedGroup) -> Vector:
    """ℓ(φ) = Σ_{g∈G0} φg − Σ_{g∉G0} φg."""
    r = action.coalgebra.rank
    out = [ZERO] * r
    for g in action.elements:
        s = 1 if action.is_even(g) else -1
        for k, x in enumerate(action.act_functional(phi, g)):
            out[k] += s * x
    return tuple(out)


def ell_span(action: EnrichedGroup) -> List[Vector]:
    """Images under ℓ of the dual basis functionals; these span L."""
    r = action.coalgebra.rank
    seen, out = set(), []
    for k in range(r):
        e = tuple(ONE if i == k else ZERO for i in range(r))
        v = averaging_ell(e, action)
        if any(v) and v not in seen:
            seen.add(v)
            out.append(v)
    return out


def trivial_action(pres: AlgebraPresentation, coalgebra: Coalgebra) -> EnrichedGroup:
    return EnrichedGroup(cyclic_group(1), ["1"], pres, {}, coalgebra, {})


def involution_action(pres: AlgebraPresentation, images: Mapping, coalgebra: Coalgebra,
                      matrix: Matrix) -> EnrichedGroup:
    """Order-two G = {1, s} with G0 = {1}: s acts by the antiautomorphism given by ``images``."""
    iota = AlgebraMorphism(pres, images, anti=True)
    return EnrichedGroup(cyclic_group(2), ["1"], pres, {"s": iota}, coalgebra, {"s": matrix})


def transpose_involution_matrix(N: int, J: Sequence[Sequence]) -> Matrix:
    """Action on the dual of Mat_N induced by X ↦ J Xᵗ J⁻¹ for a symmetric or antisymmetric J.

    ι(τ_ij) = Σ_{a,b} J_ia (J⁻¹)_bj τ_ba, with τ indexed as in build_matrix_dual.
    """
    J = [[to_scalar(x) for x in row] for row in J]
    if len(J) != N or any(len(r) != N for r in J):
        raise InputError(f"J must be {N}x{N}")
    sym = all(J[i][j] == J[j][i] for i in range(N) for j in range(N))
    anti = all(J[i][j] == -J[j][i] for i in range(N) for j in range(N))
    if not (sym or anti):
        raise InputError("J must be symmetric or antisymmetric")
    Jinv = mat_inverse(J)
    if Jinv is None:
        raise InputError("J is not invertible")
    idx = lambda i, j: i * N + j
    W = [[ZERO] * (N * N) for _ in range(N * N)]
    for i in range(N):
        for j in range(N):
            for a in range(N):
                for b in range(N):
                    c = J[i][a] * Jinv[b][j]
                    if c:
                        W[idx(b, a)][idx(i, j)] += c
    return W
