"""Closed-form brackets for the standard coalgebras, used as independent oracles."""

from __future__ import annotations

from typing import Mapping

from fractions import Fraction

from .double_bracket import DoubleBracket
from .foundations import InputError, add_into
from .rep_algebra import Poly, RepContext, RepElement


def _legs(ctx: RepContext, db: DoubleBracket, a: str, b: str):
    return db.eval_words((a,), (b,)).items()


def _pair_product(ctx: RepContext, w1, i, w2, j) -> Poly:
    return ctx.mul_poly(ctx._realize_word_poly(w1, i), ctx._realize_word_poly(w2, j))


def matrix_formula(ctx: RepContext, db: DoubleBracket, N: int, a: str, i: int, j: int, b: str, k: int, l: int) -> RepElement:
    """⟨a_ij, b_kl⟩ = ⟦a,b⟧′_kj ⟦a,b⟧″_il for the trace form on the dual of Mat_N (0-based indices)."""
    out: Poly = {}
    for (w1, w2), c in _legs(ctx, db, a, b):
        for m, x in _pair_product(ctx, w1, k * N + j, w2, i * N + l).items():
            add_into(out, m, c * x)
    return RepElement._raw(ctx, out)


def trunc_formula(ctx: RepContext, db: DoubleBracket, a: str, i: int, b: str, j: int) -> RepElement:
    """⟨a_i, b_j⟩ = Σ_{0≤k≤i+j−n} ⟦a,b⟧′_k ⟦a,b⟧″_{i+j−n−k}; zero when i + j < n."""
    n = ctx.coalgebra.rank - 1
    out: Poly = {}
    top = i + j - n
    for (w1, w2), c in _legs(ctx, db, a, b):
        for k in range(0, top + 1):
            for m, x in _pair_product(ctx, w1, k, w2, top - k).items():
                add_into(out, m, c * x)
    return RepElement._raw(ctx, out)


def group_formula(ctx: RepContext, db: DoubleBracket, F: Mapping[str, Fraction], a: str, g: str, b: str, h: str) -> RepElement:
    """⟨a_g, b_h⟩ = Σ_{x,y} F(g x⁻¹ h y⁻¹) ⟦a,b⟧′_x ⟦a,b⟧″_y for the character form F."""
    M = ctx.coalgebra
    group = getattr(M, "group", None)
    if group is None:
        raise InputError("the group formula needs the dual of a group algebra")
    out: Poly = {}
    for (w1, w2), c in _legs(ctx, db, a, b):
        for x in group.elements:
            for y in group.elements:
                f = F[group.mul(group.mul(g, group.inv(x)), group.mul(h, group.inv(y)))]
                if not f:
                    continue
                for m, z in _pair_product(ctx, w1, group.index[x], w2, group.index[y]).items():
                    add_into(out, m, c * f * z)
    return RepElement._raw(ctx, out)
