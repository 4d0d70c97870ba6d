"""Double brackets on a presented algebra, their Leibniz extension and the tribracket."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import (INV, AlgebraElement, AlgebraMorphism, AlgebraPresentation, BasisAlgebra,
                      FreeGroupAlgebra, Word, inverse_letter)
from .foundations import Q, ONE, ZERO, InputError, Tensor, add_into, graded_permute, to_scalar

Pair = Tuple[Word, Word]
Triple = Tuple[Word, Word, Word]
T2 = Dict[Pair, Fraction]
T3 = Dict[Triple, Fraction]


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass
class Verdict:
    """Outcome of an exhaustive or sampled check."""

    holds: bool
    checked: int = 0
    witness: Optional[str] = None
    details: Dict[str, object] = field(default_factory=dict)

    def __bool__(self):
        return self.holds


class DoubleBracket:
    """An n-graded double bracket given on pairs of generators (or basis elements).

    ``table`` maps (x, y) to a dict {(word', word''): coefficient}.  Entries
    for (y, x) missing from the table are produced by antisymmetry; pairs with
    neither entry are zero when ``unlisted_zero`` is set and an error otherwise.
    """

    def __init__(self, pres: AlgebraPresentation, n: int, table: Mapping[Tuple[str, str], Mapping[Pair, Fraction]],
                 unlisted_zero: bool = False):
        self.pres = pres
        self.n = int(n)
        self.unlisted_zero = unlisted_zero
        if isinstance(pres, BasisAlgebra):
            self.keys = pres.labels
        else:
            self.keys = pres.generators
        given: Dict[Tuple[str, str], T2] = {}
        for (x, y), entry in table.items():
            if x not in self.keys or y not in self.keys:
                raise InputError(f"double bracket entry for unknown pair ({x}, {y})")
            clean: T2 = {}
            for (u, w), c in entry.items():
                add_into(clean, (pres.check_word(tuple(u)), pres.check_word(tuple(w))), to_scalar(c))
            target = pres.letter_degree[x] + pres.letter_degree[y] + self.n
            for (u, w) in clean:
                if pres.word_degree(u) + pres.word_degree(w) != target:
                    raise InputError(f"grading condition fails for ⟦{x},{y}⟧: term "
                                     f"{pres.format_word(u)}⊗{pres.format_word(w)} is not in degree {target}")
            given[(x, y)] = clean
        self.table: Dict[Tuple[str, str], T2] = dict(given)
        for (x, y), entry in given.items():
            flipped = self.flip(x, y, entry)
            if (y, x) in given:
                if given[(y, x)] != flipped:
                    raise InputError(f"entries for ({x}, {y}) and ({y}, {x}) violate antisymmetry")
            else:
                self.table[(y, x)] = flipped
        self._cache: Dict[Pair, T2] = {}
        if isinstance(pres, BasisAlgebra):
            self._check_basis_leibniz()

    # -- basics ----------------------------------------------------------------
    def deg(self, w: Word) -> int:
        return self.pres.word_degree(w)

    def flip(self, x: str, y: str, entry: Mapping[Pair, Fraction]) -> T2:
        """⟦y,x⟧ = −(−1)^{|x|_n|y|_n + |x'||x''|} x''⊗x' from ⟦x,y⟧ = x'⊗x''."""
        dx = self.pres.letter_degree[x] + self.n
        dy = self.pres.letter_degree[y] + self.n
        out: T2 = {}
        for (u, w), c in entry.items():
            s = _sgn(dx * dy + self.deg(u) * self.deg(w))
            add_into(out, (w, u), -s * c)
        return out

    def lookup(self, x: str, y: str) -> T2:
        hit = self.table.get((x, y))
        if hit is not None:
            return hit
        if self.unlisted_zero:
            return {}
        raise InputError(f"double bracket has no entry for the pair ({x}, {y})")

    # -- bimodule structures on A⊗A ----------------------------------------------
    def _mul(self, u: Word, w: Word):
        return self.pres.mul_words(u, w).items()

    def outer_left(self, b: Word, t: T2) -> T2:
        out: T2 = {}
        for (x, y), c in t.items():
            for z, d in self._mul(b, x):
                add_into(out, (z, y), c * d)
        return out

    def outer_right(self, t: T2, b: Word) -> T2:
        out: T2 = {}
        for (x, y), c in t.items():
            for z, d in self._mul(y, b):
                add_into(out, (x, z), c * d)
        return out

    def star_left(self, a: Word, t: T2) -> T2:
        """a*(x⊗y) = (−1)^{|a||x|} x⊗ay."""
        da = self.deg(a)
        out: T2 = {}
        for (x, y), c in t.items():
            s = _sgn(da * self.deg(x))
            for z, d in self._mul(a, y):
                add_into(out, (x, z), s * c * d)
        return out

    def star_right(self, t: T2, b: Word) -> T2:
        """(x⊗y)*b = (−1)^{|b||y|} xb⊗y."""
        db = self.deg(b)
        out: T2 = {}
        for (x, y), c in t.items():
            s = _sgn(db * self.deg(y))
            for z, d in self._mul(x, b):
                add_into(out, (z, y), s * c * d)
        return out

    # -- evaluation ----------------------------------------------------------------
    def eval_words(self, u: Word, w: Word) -> T2:
        key = (u, w)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        res = self._eval_words(u, w)
        self._cache[key] = res
        return res

    def _eval_words(self, u: Word, w: Word) -> T2:
        pres = self.pres
        if isinstance(pres, BasisAlgebra):
            return self.lookup(u[0], w[0])
        if not u or not w:
            return {}
        n = self.n
        if len(w) > 1:
            b, c = w[:1], w[1:]
            out = dict(self.outer_right(self.eval_words(u, b), c))
            s = _sgn((self.deg(u) + n) * self.deg(b))
            for k, x in self.outer_left(b, self.eval_words(u, c)).items():
                add_into(out, k, s * x)
            return out
        if len(u) > 1:
            a, b = u[:1], u[1:]
            out = dict(self.star_left(a, self.eval_words(b, w)))
            s = _sgn(self.deg(b) * (self.deg(w) + n))
            for k, x in self.star_right(self.eval_words(a, w), b).items():
                add_into(out, k, s * x)
            return out
        x, y = u[0], w[0]
        if isinstance(pres, FreeGroupAlgebra):
            if y.endswith(INV):
                # ⟦x, h^{-1}⟧ = −h^{-1}⟦x, h⟧h^{-1}
                h = (inverse_letter(y),)
                t = self.outer_right(self.outer_left(w, self.eval_words(u, h)), w)
                return {k: -c for k, c in t.items()}
            if x.endswith(INV):
                # ⟦g^{-1}, y⟧ = −(g^{-1} * ⟦g, y⟧) * g^{-1}
                g = (inverse_letter(x),)
                t = self.star_right(self.star_left(u, self.eval_words(g, w)), u)
                return {k: -c for k, c in t.items()}
        return self.lookup(x, y)

    def evaluate(self, a: AlgebraElement, b: AlgebraElement) -> Tensor:
        if a.pres is not self.pres or b.pres is not self.pres:
            raise InputError("arguments belong to another presentation")
        out: T2 = {}
        for u, c in a.terms.items():
            for w, d in b.terms.items():
                for k, x in self.eval_words(u, w).items():
                    add_into(out, k, c * d * x)
        return Tensor._raw(2, out, self.deg)

    def __call__(self, a: AlgebraElement, b: AlgebraElement) -> Tensor:
        return self.evaluate(a, b)

    def _check_basis_leibniz(self):
        """Exhaustive Leibniz check for tables given on a finite basis."""
        pres = self.pres
        labels = pres.labels
        for a, b, c in product(labels, repeat=3):
            A, B, C = (a,), (b,), (c,)
            # ⟦a, bc⟧ = ⟦a,b⟧c + (−1)^{|a|_n|b|} b⟦a,c⟧
            lhs: T2 = {}
            for z, k in pres.mul_words(B, C).items():
                for key, x in self.lookup(a, z[0]).items():
                    add_into(lhs, key, k * x)
            rhs = dict(self.outer_right(self.lookup(a, b), C))
            s = _sgn((self.deg(A) + self.n) * self.deg(B))
            for key, x in self.outer_left(B, self.lookup(a, c)).items():
                add_into(rhs, key, s * x)
            if lhs != rhs:
                raise InputError(f"double bracket table violates the Leibniz rule at ({a}, {b}·{c})")

    # -- derived operations ----------------------------------------------------------
    def with_table(self, table) -> "DoubleBracket":
        return DoubleBracket(self.pres, self.n, table, self.unlisted_zero)

    def generator_table(self) -> Dict[Tuple[str, str], T2]:
        return {(x, y): self.lookup(x, y) for x in self.keys for y in self.keys}


def check_bracket(db: DoubleBracket, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """⟦a,b⟧'⟦a,b⟧'' as an element of A."""
    out: Dict[Word, Fraction] = {}
    for (u, w), c in db.evaluate(a, b).terms.items():
        for z, d in db.pres.mul_words(u, w).items():
            add_into(out, z, c * d)
    return AlgebraElement(db.pres, out)


# ---------------------------------------------------------------------------
# the tribracket

def _inner_compose(db: DoubleBracket, t: T3) -> T3:
    """(⟦−,−⟧⊗id)(id⊗⟦−,−⟧) on a sparse 3-tensor."""
    out: T3 = {}
    for (u, v, w), c in t.items():
        for (x1, x2), d in db.eval_words(v, w).items():
            for (y1, y2), e in db.eval_words(u, x1).items():
                add_into(out, (y1, y2, x2), c * d * e)
    return out


def tribracket_words(db: DoubleBracket, a: Word, b: Word, c: Word) -> T3:
    """Σ_{i=0}^{2} P312^i (⟦⟧⊗id)(id⊗⟦⟧) P312,n^{−i} applied to a⊗b⊗c."""
    deg = db.deg
    n = db.n
    base = Tensor._raw(3, {(a, b, c): ONE}, deg)
    total: T3 = {}
    # P312,n^{-1} = P231,n and P312,n^{-2} = P312,n
    pre = [(), ((2, 3, 1),), ((3, 1, 2),)]
    for i in range(3):
        t = base
        for perm in pre[i]:
            t = graded_permute(perm, n, t)
        inner = Tensor._raw(3, _inner_compose(db, t.terms), deg)
        for _ in range(i):
            inner = graded_permute((3, 1, 2), 0, inner)
        for k, x in inner.terms.items():
            add_into(total, k, x)
    return total


def tribracket(db: DoubleBracket, a: AlgebraElement, b: AlgebraElement, c: AlgebraElement) -> Tensor:
    out: T3 = {}
    for u, x in a.terms.items():
        for v, y in b.terms.items():
            for w, z in c.terms.items():
                for k, t in tribracket_words(db, u, v, w).items():
                    add_into(out, k, x * y * z * t)
    return Tensor._raw(3, out, db.deg)


def quasi_poisson_rhs_words(pres: AlgebraPresentation, a: Word, b: Word, c: Word) -> T3:
    """c⊗a⊗b + 1⊗ab⊗c + a⊗1⊗bc + ca⊗b⊗1 − a⊗b⊗c − 1⊗a⊗bc − ca⊗1⊗b − c⊗ab⊗1."""
    one = pres.unit_word
    mul = pres.mul_words
    out: T3 = {}

    def put(sign, x, y, z):
        for x1, cx in (x.items() if isinstance(x, dict) else [(x, ONE)]):
            for y1, cy in (y.items() if isinstance(y, dict) else [(y, ONE)]):
                for z1, cz in (z.items() if isinstance(z, dict) else [(z, ONE)]):
                    add_into(out, (x1, y1, z1), sign * cx * cy * cz)

    put(1, c, a, b)
    put(1, one, mul(a, b), c)
    put(1, a, one, mul(b, c))
    put(1, mul(c, a), b, one)
    put(-1, a, b, c)
    put(-1, one, a, mul(b, c))
    put(-1, mul(c, a), one, b)
    put(-1, c, mul(a, b), one)
    return out


def _fmt3(pres, t: Mapping[Triple, Fraction]) -> str:
    items = sorted(t.items())[:6]
    return " + ".join(f"{c}*({pres.format_word(x)}⊗{pres.format_word(y)}⊗{pres.format_word(z)})"
                      for (x, y, z), c in items) + (" + …" if len(t) > 6 else "")


def generator_words(db: DoubleBracket) -> List[Word]:
    return [(g,) for g in db.keys]


def random_words(pres: AlgebraPresentation, rng: random.Random, count: int, max_len: int = 3) -> List[Word]:
    if isinstance(pres, BasisAlgebra):
        return [(rng.choice(pres.labels),) for _ in range(count)]
    letters = pres.all_letters if isinstance(pres, FreeGroupAlgebra) else pres.generators
    out = []
    for _ in range(count):
        k = rng.randint(1, max_len)
        w = tuple(rng.choice(letters) for _ in range(k))
        out.append(pres.check_word(w) if isinstance(pres, FreeGroupAlgebra) else w)
    return [w for w in out if w or pres.unital]


def is_gerstenhaber(db: DoubleBracket, samples: int = 0, seed: int = 0) -> Verdict:
    """Tribracket vanishing on generator triples, plus optional random word triples."""
    gens = generator_words(db)
    checked = 0
    for a, b, c in product(gens, repeat=3):
        checked += 1
        t = tribracket_words(db, a, b, c)
        if t:
            return Verdict(False, checked, f"tribracket({a[0]}, {b[0]}, {c[0]}) = {_fmt3(db.pres, t)}")
    rng = random.Random(seed)
    sampled = 0
    for _ in range(samples):
        a, b, c = random_words(db.pres, rng, 3)
        sampled += 1
        t = tribracket_words(db, a, b, c)
        if t:
            return Verdict(False, checked + sampled,
                           f"generator triples vanish but sampled words ({a}, {b}, {c}) give {_fmt3(db.pres, t)}",
                           {"generator_triples": checked, "sampled": sampled})
    return Verdict(True, checked + sampled, details={"generator_triples": checked, "sampled": sampled})


def _require_ungraded_unital(db: DoubleBracket):
    pres = db.pres
    if not pres.unital:
        raise InputError("quasi-Poisson brackets need a unital algebra")
    if db.n != 0 or any(pres.letter_degree[g] for g in pres.letter_degree):
        raise InputError("quasi-Poisson brackets need an ungraded algebra and n = 0")


def is_quasi_poisson(db: DoubleBracket, samples: int = 0, seed: int = 0) -> Verdict:
    """Tribracket equals the eight-term expression on generator triples."""
    _require_ungraded_unital(db)
    gens = generator_words(db)
    checked = 0
    words = [(a, b, c) for a, b, c in product(gens, repeat=3)]
    rng = random.Random(seed)
    words += [tuple(random_words(db.pres, rng, 3)) for _ in range(samples)]
    for a, b, c in words:
        checked += 1
        t = dict(tribracket_words(db, a, b, c))
        for k, x in quasi_poisson_rhs_words(db.pres, a, b, c).items():
            add_into(t, k, -x)
        if t:
            return Verdict(False, checked, f"at ({'·'.join(a)}, {'·'.join(b)}, {'·'.join(c)}): "
                                            f"tribracket − rhs = {_fmt3(db.pres, t)}")
    return Verdict(True, checked, details={"generator_triples": len(gens) ** 3, "sampled": samples})


def moment_rhs(pres: AlgebraPresentation, xi: AlgebraElement, a: AlgebraElement, kind: str) -> T2:
    one = pres.unit_word
    out: T2 = {}
    for w, c in a.terms.items():
        if kind == "additive":
            add_into(out, (w, one), c)
            add_into(out, (one, w), -c)
            continue
        for e, d in xi.terms.items():
            add_into(out, (w, e), c * d)
            add_into(out, (e, w), -c * d)
            for z, k in pres.mul_words(w, e).items():
                add_into(out, (z, one), c * d * k)
            for z, k in pres.mul_words(e, w).items():
                add_into(out, (one, z), -c * d * k)
    return out


def is_moment_map(db: DoubleBracket, xi: AlgebraElement, kind: str = "additive", scale=1) -> Verdict:
    """⟦ξ,a⟧ = k(a⊗1 − 1⊗a) (additive) or the multiplicative identity, on generators."""
    pres = db.pres
    if kind not in ("additive", "multiplicative"):
        raise InputError(f"unknown moment map kind {kind!r}")
    if not pres.unital:
        raise InputError("moment maps need a unital algebra")
    for w in xi.terms:
        if pres.word_degree(w) != -db.n:
            raise InputError(f"moment map must have degree {-db.n}")
    k = to_scalar(scale)
    letters = pres.all_letters if isinstance(pres, FreeGroupAlgebra) else db.keys
    checked = 0
    for g in letters:
        a = pres.word((g,))
        checked += 1
        lhs = db.evaluate(xi, a).terms
        rhs = {key: k * c for key, c in moment_rhs(pres, xi, a, kind).items()}
        if lhs != rhs:
            return Verdict(False, checked, f"fails at generator {g}")
    return Verdict(True, checked)


def is_equivariant_db(db: DoubleBracket, morphisms: Sequence[AlgebraMorphism]) -> Verdict:
    """⟦ga,gb⟧ = (g⊗g)⟦a,b⟧ for automorphisms, P21(g⊗g)⟦a,b⟧ for antiautomorphisms."""
    gens = generator_words(db)
    checked = 0
    for idx, g in enumerate(morphisms):
        for a, b in product(gens, repeat=2):
            checked += 1
            A, B = db.pres.word(a), db.pres.word(b)
            lhs = db.evaluate(g.apply(A), g.apply(B))
            rhs = _twist(db, g, db.eval_words(a, b))
            if lhs.terms != rhs:
                return Verdict(False, checked, f"fails for group element #{idx} at ({a[0]}, {b[0]})")
    return Verdict(True, checked)


def _twist(db: DoubleBracket, g: AlgebraMorphism, t: Mapping[Pair, Fraction]) -> T2:
    """(g⊗g)t, followed by P21 (Koszul signs, n = 0) when g is an antiautomorphism."""
    out: T2 = {}
    for (u, w), c in t.items():
        for x, cx in g.apply_word(u).terms.items():
            for y, cy in g.apply_word(w).terms.items():
                if g.anti:
                    add_into(out, (y, x), _sgn(db.deg(x) * db.deg(y)) * c * cx * cy)
                else:
                    add_into(out, (x, y), c * cx * cy)
    return out


def average_over_involution(db: DoubleBracket, iota: AlgebraMorphism) -> DoubleBracket:
    """½(⟦a,b⟧ + twist) where twist(a,b) = P21(ι⊗ι)⟦ιa,ιb⟧ (or (ι⊗ι)⟦ιa,ιb⟧ for automorphisms)."""
    table = {}
    for x, y in product(db.keys, repeat=2):
        A, B = db.pres.word((x,)), db.pres.word((y,))
        inner = db.evaluate(iota.apply(A), iota.apply(B)).terms
        tw = _twist(db, iota, inner)
        entry: T2 = {}
        for k, c in db.eval_words((x,), (y,)).items():
            add_into(entry, k, c / 2)
        for k, c in tw.items():
            add_into(entry, k, c / 2)
        table[(x, y)] = entry
    return DoubleBracket(db.pres, db.n, table, unlisted_zero=True)


def quasi_poisson_ansatz(pres: FreeGroupAlgebra, generator: str, words: Sequence[str] = ("1", "g", "g^2", "g^-1")):
    """Solve for antisymmetric ⟦g,g⟧ = Σ c_uv (u⊗v − v⊗u) over the given words satisfying the
    eight-term identity at (g, g, g).

    The tribracket is quadratic in the table, so the system is assembled by
    polarization and handed to sympy.  Returns (basis pairs, symbols, solutions).
    """
    import sympy as sp
    from itertools import combinations

    g = (generator,)
    ws = [pres.parse_word(w.replace("g", generator)) for w in words]
    pairs = list(combinations(ws, 2))

    def table_of(coefs):
        e: T2 = {}
        for (u, v), c in zip(pairs, coefs):
            add_into(e, (u, v), Q(c))
            add_into(e, (v, u), -Q(c))
        return DoubleBracket(pres, 0, {(generator, generator): e}, unlisted_zero=True)

    def tri(coefs):
        return tribracket_words(table_of(coefs), g, g, g)

    n = len(pairs)
    unit = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
    diag = [tri(unit[i]) for i in range(n)]
    cs = sp.symbols(f"c0:{n}")
    expr: Dict[Triple, object] = {}

    def acc(t, coef):
        for k, x in t.items():
            expr[k] = expr.get(k, 0) + coef * sp.Rational(x.numerator, x.denominator)

    for i in range(n):
        acc(diag[i], cs[i] ** 2)
        for j in range(i + 1, n):
            mixed = dict(tri([a + b for a, b in zip(unit[i], unit[j])]))
            for k, x in diag[i].items():
                add_into(mixed, k, -x)
            for k, x in diag[j].items():
                add_into(mixed, k, -x)
            acc(mixed, cs[i] * cs[j])
    for k, x in quasi_poisson_rhs_words(pres, g, g, g).items():
        expr[k] = expr.get(k, 0) - sp.Rational(x.numerator, x.denominator)
    eqs = [e for e in (sp.expand(v) for v in expr.values()) if e != 0]
    return pairs, cs, sp.solve(eqs, cs, dict=True)
