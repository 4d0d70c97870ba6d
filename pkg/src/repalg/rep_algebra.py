"""Representation algebras A_M as graded-commutative polynomial rings in symbols a_α.

A symbol is a pair (label, index): an A-letter (or A-basis element) and an
M-basis index.  Monomials are sorted tuples of symbols; the empty monomial is
the adjoined unit e in the unital variants.

Relations:
  * free A: none, A_M is free graded-commutative on the letter symbols;
  * free groups: group elements are expanded into letter symbols through
    the multiplicativity relations, leaving the inverse relations
    Σ g_{α¹}(g⁻¹)_{α²} = ε(α)e;
  * basis algebras: one symbol per basis element and the full set of
    multiplicativity relations.
Equality modulo relations is decided by degree-bounded linear algebra.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import INV, AlgebraElement, AlgebraPresentation, BasisAlgebra, FreeAlgebra, FreeGroupAlgebra, Word
from .coalgebra import Coalgebra, Matrix
from .enriched import EnrichedGroup, ell_span
from .foundations import Q, ONE, ZERO, InputError, SparseSpan, add_into, format_scalar, to_scalar

Symbol = Tuple[str, int]
Monomial = Tuple[Symbol, ...]
Poly = Dict[Monomial, Fraction]

VARIANTS = ("plain", "unital", "equivariant", "equivariant_unital")
ROW_LIMIT = 60000


class RepContext:
    def __init__(self, pres: AlgebraPresentation, coalgebra: Coalgebra, variant: str = "plain",
                 action: Optional[EnrichedGroup] = None, degree_bound: int = 4):
        if variant not in VARIANTS:
            raise InputError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
        self.pres = pres
        self.coalgebra = coalgebra
        self.variant = variant
        self.unital = variant in ("unital", "equivariant_unital")
        self.equivariant = variant.startswith("equivariant")
        self.degree_bound = int(degree_bound)
        if self.unital:
            if coalgebra.counit is None:
                raise InputError("unital variants need a counital coalgebra")
            if not pres.unital:
                raise InputError("unital variants need a unital algebra")
        elif isinstance(pres, (FreeAlgebra, FreeGroupAlgebra)) and pres.unital:
            raise InputError("the plain variant is only supported for non-unital free algebras; "
                             "use the unital variant for unital free algebras and free groups")
        if self.equivariant:
            if action is None:
                raise InputError("equivariant variants need an enriched group action")
            if action.pres is not pres or action.coalgebra is not coalgebra:
                raise InputError("the group action is defined on another algebra or coalgebra")
        self.action = action
        if isinstance(pres, BasisAlgebra):
            self.labels: Tuple[str, ...] = pres.labels
        elif isinstance(pres, FreeGroupAlgebra):
            self.labels = pres.all_letters
        else:
            self.labels = pres.generators
        # a basis unit is normalized away in the unital variants
        self.unit_label = None
        if self.unital and isinstance(pres, BasisAlgebra) and pres.unit_word is not None:
            self.unit_label = pres.unit_word[0]
        self.odd = frozenset(l for l in self.labels if pres.letter_degree.get(l, 0) % 2)
        self._word_cache: Dict[Tuple[Word, int], Poly] = {}
        self._span_cache: Dict[tuple, SparseSpan] = {}
        self._proj_cache: Dict[Symbol, Optional[Tuple[int, Symbol]]] = {}
        self._relations: Optional[List[Poly]] = None

    # -- symbols and monomials -------------------------------------------------
    def symbol_degree(self, s: Symbol) -> int:
        return self.pres.letter_degree.get(s[0], 0)

    def monomial_degree(self, m: Monomial) -> int:
        return sum(self.pres.letter_degree.get(s[0], 0) for s in m)

    def vocabulary(self) -> List[Symbol]:
        r = self.coalgebra.rank
        return [(l, k) for l in self.labels if l != self.unit_label for k in range(r)]

    def format_symbol(self, s: Symbol) -> str:
        return f"{s[0]}[{self.coalgebra.labels[s[1]]}]"

    def format_monomial(self, m: Monomial) -> str:
        if not m:
            return "e" if self.unital else "1"
        return "·".join(self.format_symbol(s) for s in m)

    def merge(self, m1: Monomial, m2: Monomial) -> Tuple[int, Monomial]:
        """Product of two sorted monomials: (sign, monomial), sign 0 for an odd square."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        odd = self.odd
        if odd:
            o2 = [s for s in m2 if s[0] in odd]
            if o2:
                o1 = [s for s in m1 if s[0] in odd]
                if o1:
                    if set(o1) & set(o2):
                        return 0, ()
                    inv = sum(1 for x in o1 for y in o2 if y < x)
                    return (-1 if inv % 2 else 1), tuple(sorted(m1 + m2))
        return 1, tuple(sorted(m1 + m2))

    def mul_poly(self, p: Mapping[Monomial, Fraction], q: Mapping[Monomial, Fraction]) -> Poly:
        out: Poly = {}
        for m1, c in p.items():
            for m2, d in q.items():
                s, m = self.merge(m1, m2)
                if s:
                    add_into(out, m, s * c * d)
        return out

    def element(self, terms: Mapping[Monomial, Fraction]) -> "RepElement":
        return RepElement(self, terms)

    def symbol(self, label: str, index) -> "RepElement":
        k = index if isinstance(index, int) else self.coalgebra.index_of(index)
        if label not in self.labels:
            raise InputError(f"unknown symbol label {label!r}")
        return self.realize_word((label,), k)

    def unit(self) -> "RepElement":
        if not self.unital:
            raise InputError("the plain variant has no unit e")
        return RepElement._raw(self, {(): ONE})

    def zero(self) -> "RepElement":
        return RepElement._raw(self, {})

    # -- realize ----------------------------------------------------------------
    def _realize_word_poly(self, word: Word, k: int) -> Poly:
        key = (word, k)
        hit = self._word_cache.get(key)
        if hit is not None:
            return hit
        pres, M = self.pres, self.coalgebra
        if isinstance(pres, BasisAlgebra):
            if word[0] == self.unit_label:
                out = {(): M.counit[k]} if M.counit[k] else {}
            else:
                out = {((word[0], k),): ONE}
        elif not word:
            if not self.unital:
                raise InputError("the unit of A has no symbol in the plain variant")
            out = {(): M.counit[k]} if M.counit[k] else {}
        elif len(word) == 1:
            out = {((word[0], k),): ONE}
        else:
            out = {}
            for idx, c in M.comul_iter_basis(k, len(word)).items():
                mono: Monomial = ()
                sign = 1
                for x, i in zip(word, idx):
                    s, mono = self.merge(mono, ((x, i),))
                    sign *= s
                    if not s:
                        break
                if sign:
                    add_into(out, mono, sign * c)
        self._word_cache[key] = out
        return out

    def realize_word(self, word: Word, k: int) -> "RepElement":
        return RepElement._raw(self, dict(self._realize_word_poly(word, k)))

    def realize(self, a: AlgebraElement, alpha) -> "RepElement":
        """a_α, bilinear in a and α."""
        if a.pres is not self.pres:
            raise InputError("element belongs to another presentation")
        alpha = self.coalgebra.vector(alpha)
        out: Poly = {}
        for w, c in a.terms.items():
            for k, x in enumerate(alpha):
                if x:
                    for m, d in self._realize_word_poly(w, k).items():
                        add_into(out, m, c * x * d)
        return RepElement._raw(self, out)

    def trace(self, theta, a: AlgebraElement) -> "RepElement":
        return self.realize(a, theta)

    # -- substitutions ------------------------------------------------------------
    def substitute(self, x: "RepElement", image: Callable[[Symbol], Poly]) -> "RepElement":
        """Apply the algebra endomorphism determined by symbol images (e ↦ e)."""
        cache: Dict[Symbol, Poly] = {}
        out: Poly = {}
        for m, c in x.terms.items():
            acc: Poly = {(): c}
            for s in m:
                img = cache.get(s)
                if img is None:
                    img = cache[s] = image(s)
                acc = self.mul_poly(acc, img)
                if not acc:
                    break
            for k, d in acc.items():
                add_into(out, k, d)
        return RepElement._raw(self, out)

    def derive(self, x: "RepElement", image: Callable[[Symbol], Poly]) -> "RepElement":
        """Apply the degree-0 derivation determined by symbol images (e ↦ 0)."""
        cache: Dict[Symbol, Poly] = {}
        out: Poly = {}
        for m, c in x.terms.items():
            for pos, s in enumerate(m):
                img = cache.get(s)
                if img is None:
                    img = cache[s] = image(s)
                if not img:
                    continue
                part = self.mul_poly(self.mul_poly({m[:pos]: c}, img), {m[pos + 1:]: ONE})
                for k, d in part.items():
                    add_into(out, k, d)
        return RepElement._raw(self, out)

    def _linear_image(self, E: Matrix) -> Callable[[Symbol], Poly]:
        r = self.coalgebra.rank

        def image(s: Symbol) -> Poly:
            out: Poly = {}
            for i in range(r):
                if E[i][s[1]]:
                    for m, d in self._realize_word_poly((s[0],), i).items():
                        add_into(out, m, E[i][s[1]] * d)
            return out
        return image

    def act_automorphism(self, w: Matrix, x: "RepElement") -> "RepElement":
        """ω a_α = a_{ω(α)}."""
        M = self.coalgebra
        if not M.is_coalgebra_automorphism(w):
            raise InputError("map is not a coalgebra automorphism")
        if self.unital and not M.preserves_counit(w):
            raise InputError("automorphism does not preserve the counit")
        return self.substitute(x, self._linear_image(w))

    def act_coderivation(self, d: Matrix, x: "RepElement") -> "RepElement":
        """δ a_α = a_{δ(α)}, extended as a derivation."""
        if not self.coalgebra.is_coderivation(d):
            raise InputError("map is not a coderivation")
        return self.derive(x, self._linear_image(d))

    def act_group(self, g: str, x: "RepElement") -> "RepElement":
        """g·a_α = (ga)_{gα}."""
        if self.action is None:
            raise InputError("no group action in this context")
        return self.substitute(x, self._group_image(g))

    def _group_image(self, g: str) -> Callable[[Symbol], Poly]:
        act = self.action
        f, W = act.alg[g], act.mat[g]
        r = self.coalgebra.rank

        def image(s: Symbol) -> Poly:
            out: Poly = {}
            ga = f.apply_word((s[0],))
            for i in range(r):
                c = W[i][s[1]]
                if c:
                    for w, d in ga.terms.items():
                        for m, e in self._realize_word_poly(w, i).items():
                            add_into(out, m, c * d * e)
            return out
        return image

    # -- equivariant projection -----------------------------------------------------
    def _project_symbol(self, s: Symbol) -> Optional[Tuple[int, Symbol]]:
        if s in self._proj_cache:
            return self._proj_cache[s]
        images = []
        for g in self.action.elements:
            img = self._group_image(g)(s)
            if len(img) != 1:
                raise InputError(f"the group does not act on {self.format_symbol(s)} by signed symbols")
            (m, c), = img.items()
            if len(m) != 1 or c not in (1, -1):
                raise InputError(f"the group does not act on {self.format_symbol(s)} by signed symbols")
            images.append((int(c), m[0]))
        rep = min(t for _, t in images)
        res: Optional[Tuple[int, Symbol]] = None
        signs = {c for c, t in images if t == rep}
        if len(signs) == 1:
            res = (signs.pop(), rep)
        # otherwise rep = −rep, so the whole orbit vanishes
        self._proj_cache[s] = res
        return res

    def equivariant_project(self, x: "RepElement") -> "RepElement":
        if not self.equivariant:
            raise InputError("equivariant_project needs an equivariant variant")

        def image(s: Symbol) -> Poly:
            p = self._project_symbol(s)
            return {} if p is None else {(p[1],): Q(p[0])}
        return self.substitute(x, image)

    # -- relations and equality ----------------------------------------------------
    def relations(self) -> List[Poly]:
        """Generators of the relation ideal, as polynomials in the symbols."""
        if self._relations is not None:
            return self._relations
        pres, M = self.pres, self.coalgebra
        rels: List[Poly] = []
        if isinstance(pres, FreeGroupAlgebra):
            for g in pres.generators:
                for first, second in ((g, g + INV), (g + INV, g)):
                    for k in range(M.rank):
                        p = dict(self._realize_word_poly((first, second), k))
                        add_into(p, (), -M.counit[k])
                        if p:
                            rels.append(p)
        elif isinstance(pres, BasisAlgebra):
            for a in pres.labels:
                for b in pres.labels:
                    prod = pres.mul_words((a,), (b,))
                    for k in range(M.rank):
                        p: Poly = {}
                        for w, c in prod.items():
                            for m, d in self._realize_word_poly(w, k).items():
                                add_into(p, m, c * d)
                        for (i, j), c in M.comul(k).items():
                            for m, d in self.mul_poly(self._realize_word_poly((a,), i),
                                                      self._realize_word_poly((b,), j)).items():
                                add_into(p, m, -c * d)
                        if p:
                            rels.append(p)
            if self.unital and self.unit_label is None and pres.unit_terms is not None:
                for k in range(M.rank):
                    p = {}
                    for l, c in pres.unit_terms.items():
                        for m, d in self._realize_word_poly((l,), k).items():
                            add_into(p, m, c * d)
                    add_into(p, (), -M.counit[k])
                    if p:
                        rels.append(p)
        # deduplicate while keeping a deterministic order
        seen, uniq = set(), []
        for p in rels:
            key = tuple(sorted(p.items()))
            if key not in seen:
                seen.add(key)
                uniq.append(p)
        self._relations = uniq
        return uniq

    def _monomials_up_to(self, vocab: Sequence[Symbol], d: int) -> Iterable[Monomial]:
        for k in range(d + 1):
            for m in combinations_with_replacement(vocab, k):
                if any(m[i] == m[i + 1] and m[i][0] in self.odd for i in range(len(m) - 1)):
                    continue
                yield m

    def _span(self, bound: int, ideal: Tuple[Poly, ...]) -> SparseSpan:
        key = (bound, tuple(tuple(sorted(p.items())) for p in ideal))
        hit = self._span_cache.get(key)
        if hit is not None:
            return hit
        gens = list(self.relations()) + list(ideal)
        vocab = sorted(self.vocabulary())
        if self.equivariant:
            gens = [self.equivariant_project(RepElement._raw(self, p)).terms for p in gens]
            vocab = sorted({p[1] for p in (self._project_symbol(s) for s in vocab) if p is not None})
        gens = [g for g in gens if g]
        count = 0
        for g in gens:
            dg = max(len(m) for m in g)
            count += sum(1 for _ in self._monomials_up_to(vocab, max(bound - dg, 0)))
            if count > ROW_LIMIT:
                raise InputError(f"relation system up to degree {bound} needs more than {ROW_LIMIT} rows; "
                                 f"lower the degree bound")
        span = SparseSpan(key=lambda m: (-len(m), m))
        for g in gens:
            dg = max(len(m) for m in g)
            for mult in self._monomials_up_to(vocab, max(bound - dg, 0)):
                span.add(self.mul_poly({mult: ONE}, g))
        self._span_cache[key] = span
        return span

    def in_ideal(self, x: "RepElement", ideal: Sequence["RepElement"] = (), degree_bound: Optional[int] = None) -> bool:
        """Is x zero in A_M (or its equivariant quotient) modulo the extra ideal generators?"""
        if x.ctx is not self:
            raise InputError("element belongs to another context")
        if self.equivariant:
            x = self.equivariant_project(x)
        if not x.terms:
            return True
        ideal_polys = tuple(i.terms for i in ideal if i.terms)
        if not self.relations() and not ideal_polys:
            return False
        bound = self.degree_bound if degree_bound is None else int(degree_bound)
        deg = x.max_length()
        if deg > bound:
            if isinstance(self.pres, FreeGroupAlgebra) and not ideal_polys:
                # letter expansion inflates degrees; the bound applies to the expanded form
                bound = deg
            else:
                raise InputError(f"element has {deg} symbols per monomial, above the degree bound {bound}")
        return self._span(bound, ideal_polys).contains(x.terms)

    def equal_mod_relations(self, x: "RepElement", y: "RepElement", ideal: Sequence["RepElement"] = (),
                            degree_bound: Optional[int] = None) -> bool:
        return self.in_ideal(x - y, ideal, degree_bound)

    # -- invariants ---------------------------------------------------------------
    def invariance_functionals(self, scope: str = "all_inner") -> List[tuple]:
        r = self.coalgebra.rank
        if scope == "all_inner":
            return [tuple(ONE if i == k else ZERO for i in range(r)) for k in range(r)]
        if scope == "L_only":
            if self.action is None:
                raise InputError("scope L_only needs a group action")
            return ell_span(self.action)
        raise InputError(f"unknown invariance scope {scope!r}")

    def is_invariant(self, x: "RepElement", scope: str = "all_inner") -> bool:
        """δ_φ x = 0 modulo relations for all φ in the scope."""
        M = self.coalgebra
        if M.counit is None:
            raise InputError("invariance needs a counital coalgebra")
        for phi in self.invariance_functionals(scope):
            d = M.inner_coderivation(phi)
            if not self.in_ideal(self.derive(x, self._linear_image(d))):
                return False
        return True

    def __repr__(self):
        return f"RepContext({self.pres.kind}, {self.coalgebra!r}, {self.variant})"


class RepElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RepContext, terms: Optional[Mapping] = None):
        self.ctx = ctx
        out: Poly = {}
        for m, c in (terms or {}).items():
            mono: Monomial = ()
            sign = 1
            for s in m:
                s = (str(s[0]), int(s[1]))
                sg, mono = ctx.merge(mono, (s,))
                sign *= sg
            if sign:
                add_into(out, mono, sign * to_scalar(c))
        if not ctx.unital and () in out:
            raise InputError("the plain variant has no unit e")
        self.terms = out

    @classmethod
    def _raw(cls, ctx, terms):
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        return obj

    def _check(self, other):
        if not isinstance(other, RepElement) or other.ctx is not self.ctx:
            raise InputError("elements belong to different contexts")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            add_into(out, m, c)
        return RepElement._raw(self.ctx, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            add_into(out, m, -c)
        return RepElement._raw(self.ctx, out)

    def __neg__(self):
        return RepElement._raw(self.ctx, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "RepElement":
        c = to_scalar(c)
        if not c:
            return RepElement._raw(self.ctx, {})
        return RepElement._raw(self.ctx, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, RepElement):
            self._check(other)
            return RepElement._raw(self.ctx, self.ctx.mul_poly(self.terms, other.terms))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, RepElement) and other.ctx is self.ctx and other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def max_length(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def degree(self) -> int:
        degs = {self.ctx.monomial_degree(m) for m in self.terms}
        if len(degs) > 1:
            raise InputError("element is not homogeneous")
        return degs.pop() if degs else 0

    def homogeneous_parts(self) -> Dict[int, "RepElement"]:
        parts: Dict[int, Poly] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.ctx.monomial_degree(m), {})[m] = c
        return {d: RepElement._raw(self.ctx, t) for d, t in sorted(parts.items())}

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items())

    def serialize(self) -> List[List[str]]:
        return [[self.ctx.format_monomial(m), format_scalar(c)] for m, c in self.sorted_terms()]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = self.ctx.format_monomial(m)
            if c == 1:
                parts.append(f"+ {mono}")
            elif c == -1:
                parts.append(f"- {mono}")
            elif c < 0:
                parts.append(f"- {format_scalar(-c)}·{mono}")
            else:
                parts.append(f"+ {format_scalar(c)}·{mono}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


def realize(ctx: RepContext, a: AlgebraElement, alpha) -> RepElement:
    return ctx.realize(a, alpha)


def multiply(x: RepElement, y: RepElement) -> RepElement:
    return x * y
