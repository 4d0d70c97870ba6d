"""Presentations of graded algebras over Q and their elements.

Words are tuples of letters.  Free algebras use letters = generator names;
free groups use letters ``g`` and ``g^-1`` and keep words reduced; finite
groups and structure-constant algebras use one-letter words naming a basis
element.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .foundations import (Q, ONE, ZERO, ConstructionError, InputError, SparseSpan, add_into,
                          format_scalar, to_scalar)
from .groups import FiniteGroup

Word = Tuple[str, ...]

INV = "^-1"


def inverse_letter(letter: str) -> str:
    return letter[: -len(INV)] if letter.endswith(INV) else letter + INV


class AlgebraPresentation:
    """Common interface; see the concrete subclasses."""

    kind: str = ""
    unital: bool = False
    unit_word: Optional[Word] = None

    def __init__(self, degrees: Mapping[str, int]):
        self.letter_degree: Dict[str, int] = {k: int(v) for k, v in degrees.items()}

    # -- words -----------------------------------------------------------
    @property
    def generators(self) -> Tuple[str, ...]:
        return tuple(self.letter_degree)

    def word_degree(self, word: Word) -> int:
        return sum(self.letter_degree[x] for x in word)

    def check_word(self, word: Word) -> Word:
        raise NotImplementedError

    def mul_words(self, u: Word, w: Word) -> Dict[Word, Fraction]:
        raise NotImplementedError

    def parse_word(self, text) -> Word:
        """Words are written as letters separated by spaces or '*'; "1" is the unit."""
        if isinstance(text, (list, tuple)):
            letters = [str(x) for x in text]
        else:
            text = str(text).strip()
            letters = [] if text in ("", "1") and self._unit_is_empty() else text.replace("*", " ").split()
        return self.check_word(tuple(letters))

    def _unit_is_empty(self) -> bool:
        return self.unital and self.unit_word == ()

    def format_word(self, word: Word) -> str:
        return "·".join(word) if word else "1"

    def letters_of(self, word: Word) -> Word:
        return word

    # -- elements ----------------------------------------------------------
    def element(self, terms: Mapping) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def word(self, text) -> "AlgebraElement":
        return AlgebraElement(self, {self.parse_word(text): ONE})

    def parse_element(self, spec) -> "AlgebraElement":
        """An element from a word string or a list of [word, coefficient] pairs."""
        if isinstance(spec, str):
            return self.word(spec)
        out: Dict[Word, Fraction] = {}
        for item in spec:
            w, c = item
            add_into(out, self.parse_word(w), to_scalar(c))
        return AlgebraElement(self, out)

    def one(self) -> "AlgebraElement":
        if not self.unital:
            raise InputError(f"{self.kind} presentation is not unital")
        return AlgebraElement(self, {self.unit_word: ONE})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def generator_elements(self) -> List["AlgebraElement"]:
        return [self.word((g,)) for g in self.generators]

    def basis_words(self, max_length: int) -> List[Word]:
        """All basis words up to a length (used for bounded span computations)."""
        raise NotImplementedError


class FreeAlgebra(AlgebraPresentation):
    kind = "free"

    def __init__(self, degrees: Mapping[str, int], unital: bool = False):
        super().__init__(degrees)
        for g in self.letter_degree:
            if not g or any(ch.isspace() for ch in g) or "*" in g or g == "1" or g.endswith(INV):
                raise ConstructionError(f"invalid generator name {g!r}")
        self.unital = bool(unital)
        self.unit_word = () if self.unital else None

    def check_word(self, word: Word) -> Word:
        for x in word:
            if x not in self.letter_degree:
                raise InputError(f"unknown generator {x!r}")
        if not word and not self.unital:
            raise InputError("the empty word is not allowed in a non-unital free algebra")
        return tuple(word)

    def mul_words(self, u: Word, w: Word) -> Dict[Word, Fraction]:
        return {u + w: ONE}

    def basis_words(self, max_length: int) -> List[Word]:
        out: List[Word] = [()] if self.unital else []
        for k in range(1, max_length + 1):
            out.extend(product(self.generators, repeat=k))
        return out


class FreeGroupAlgebra(AlgebraPresentation):
    kind = "free_group"

    def __init__(self, generators: Sequence[str], degrees: Optional[Mapping[str, int]] = None):
        degrees = dict(degrees or {})
        if any(int(d) != 0 for d in degrees.values()):
            raise ConstructionError("free group generators must have degree 0")
        super().__init__({g: 0 for g in generators})
        for g in generators:
            if not g or g.endswith(INV) or " " in g or g == "1":
                raise ConstructionError(f"invalid generator name {g!r}")
        self.unital = True
        self.unit_word = ()
        self.all_letters = tuple(x for g in generators for x in (g, g + INV))
        self._letter_set = set(self.all_letters)

    def word_degree(self, word: Word) -> int:
        return 0

    @staticmethod
    def reduce(word: Iterable[str]) -> Word:
        out: List[str] = []
        for x in word:
            if out and out[-1] == inverse_letter(x):
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def check_word(self, word: Word) -> Word:
        expanded: List[str] = []
        for x in word:
            # allow powers like g^2 and g^-2 in input
            base, _, exp = x.partition("^")
            if exp and exp != "-1":
                k = int(exp)
                if base not in self.letter_degree:
                    raise InputError(f"unknown generator {base!r}")
                expanded.extend([base if k > 0 else base + INV] * abs(k))
                continue
            if x not in self._letter_set:
                raise InputError(f"unknown free-group letter {x!r}")
            expanded.append(x)
        return self.reduce(expanded)

    def mul_words(self, u: Word, w: Word) -> Dict[Word, Fraction]:
        return {self.reduce(u + w): ONE}

    def inverse_word(self, word: Word) -> Word:
        return tuple(inverse_letter(x) for x in reversed(word))

    def basis_words(self, max_length: int) -> List[Word]:
        out: List[Word] = [()]
        frontier: List[Word] = [()]
        for _ in range(max_length):
            nxt = []
            for w in frontier:
                for x in self.all_letters:
                    if w and w[-1] == inverse_letter(x):
                        continue
                    nxt.append(w + (x,))
            out.extend(nxt)
            frontier = nxt
        return out


class BasisAlgebra(AlgebraPresentation):
    """Finite-dimensional algebra with a multiplicative basis given by structure constants."""

    kind = "structure_constants"

    def __init__(self, labels: Sequence[str], constants: Mapping[Tuple[str, str], Mapping[str, Fraction]],
                 degrees: Optional[Mapping[str, int]] = None, unit: Optional[str] = None,
                 kind: str = "structure_constants", unit_terms: Optional[Mapping[str, Fraction]] = None):
        degrees = {l: int((degrees or {}).get(l, 0)) for l in labels}
        super().__init__(degrees)
        self.kind = kind
        self.labels: Tuple[str, ...] = tuple(labels)
        self.index = {l: i for i, l in enumerate(self.labels)}
        self.constants: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
        for a, b in product(self.labels, repeat=2):
            row = {}
            for k, c in (constants.get((a, b)) or {}).items():
                if k not in self.index:
                    raise ConstructionError(f"structure constant refers to unknown basis element {k!r}")
                add_into(row, k, to_scalar(c))
            for k in row:
                if degrees[k] != degrees[a] + degrees[b]:
                    raise ConstructionError(f"product {a}*{b} has a term {k} of the wrong degree")
            self.constants[(a, b)] = row
        self._check_associative()
        self.unital = unit is not None
        self.unit_word = (unit,) if unit is not None else None
        if unit is not None:
            if unit not in self.index:
                raise ConstructionError(f"unit {unit!r} is not a basis element")
            unit_terms = {unit: ONE}
        # a unit that need not be a basis element (e.g. the identity matrix); used by duals
        self.unit_terms: Optional[Dict[str, Fraction]] = None
        if unit_terms is not None:
            ut = {k: to_scalar(c) for k, c in unit_terms.items() if to_scalar(c)}
            for a in self.labels:
                left: Dict[str, Fraction] = {}
                right: Dict[str, Fraction] = {}
                for k, c in ut.items():
                    for l, x in self.constants[(k, a)].items():
                        add_into(left, l, c * x)
                    for l, x in self.constants[(a, k)].items():
                        add_into(right, l, c * x)
                if left != {a: ONE} or right != {a: ONE}:
                    raise ConstructionError(f"the given unit is not a two-sided unit (fails at {a!r})")
            self.unit_terms = ut

    def _check_associative(self):
        for a, b, c in product(self.labels, repeat=3):
            left: Dict[str, Fraction] = {}
            for k, x in self.constants[(a, b)].items():
                for l, y in self.constants[(k, c)].items():
                    add_into(left, l, x * y)
            right: Dict[str, Fraction] = {}
            for k, x in self.constants[(b, c)].items():
                for l, y in self.constants[(a, k)].items():
                    add_into(right, l, x * y)
            if left != right:
                raise ConstructionError(f"multiplication is not associative at ({a}, {b}, {c})")

    @classmethod
    def from_group(cls, group: FiniteGroup) -> "BasisAlgebra":
        consts = {(g, h): {group.mul(g, h): ONE} for g in group.elements for h in group.elements}
        alg = cls(group.elements, consts, unit=group.identity, kind="finite_group")
        alg.group = group
        return alg

    def check_word(self, word: Word) -> Word:
        if len(word) != 1 or word[0] not in self.index:
            raise InputError(f"{word!r} is not a basis element of this algebra")
        return tuple(word)

    def parse_word(self, text) -> Word:
        if isinstance(text, (list, tuple)):
            return self.check_word(tuple(text))
        text = str(text).strip()
        if text == "1" and self.unital and "1" not in self.index:
            return self.unit_word
        return self.check_word((text,))

    def mul_words(self, u: Word, w: Word) -> Dict[Word, Fraction]:
        return {(k,): c for k, c in self.constants[(u[0], w[0])].items()}

    def format_word(self, word: Word) -> str:
        return word[0]

    def basis_words(self, max_length: int) -> List[Word]:
        return [(l,) for l in self.labels]

    def structure_matrix(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        """Constants keyed by basis indices."""
        return {(self.index[a], self.index[b]): {self.index[k]: c for k, c in row.items()}
                for (a, b), row in self.constants.items()}


def quaternion_like_algebra() -> BasisAlgebra:
    """Basis 1, i, j, k with i² = j² = k² = ijk = −1."""
    sign_table = {
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    }
    labels = ["1", "i", "j", "k"]
    consts = {}
    for a, b in product(labels, repeat=2):
        if a == "1":
            consts[(a, b)] = {b: ONE}
        elif b == "1":
            consts[(a, b)] = {a: ONE}
        else:
            s, c = sign_table[(a, b)]
            consts[(a, b)] = {c: Q(s)}
    return BasisAlgebra(labels, consts, unit="1")


def truncated_polynomial_algebra(n: int) -> BasisAlgebra:
    """Q[x]/(x^{n+1}) on the basis x^0..x^n, labelled "x0".."xn"."""
    labels = [f"x{i}" for i in range(n + 1)]
    consts = {(labels[i], labels[j]): ({labels[i + j]: ONE} if i + j <= n else {})
              for i in range(n + 1) for j in range(n + 1)}
    return BasisAlgebra(labels, consts, unit="x0")


def matrix_algebra(inner: BasisAlgebra, N: int) -> BasisAlgebra:
    """Mat_N(inner) on the basis E_ij ⊗ e_p, labelled "E{i}{j}:{p}" (1-based i, j)."""
    labels = [f"E{i}{j}:{p}" for i in range(1, N + 1) for j in range(1, N + 1) for p in inner.labels]
    consts: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    for i, j, p in product(range(1, N + 1), range(1, N + 1), inner.labels):
        for k, l, q in product(range(1, N + 1), range(1, N + 1), inner.labels):
            row: Dict[str, Fraction] = {}
            if j == k:
                for r, c in inner.constants[(p, q)].items():
                    add_into(row, f"E{i}{l}:{r}", c)
            consts[(f"E{i}{j}:{p}", f"E{k}{l}:{q}")] = row
    unit_terms = None
    if inner.unit_terms is not None:
        unit_terms = {f"E{i}{i}:{p}": c for i in range(1, N + 1) for p, c in inner.unit_terms.items()}
    return BasisAlgebra(labels, consts, unit_terms=unit_terms)


class AlgebraElement:
    """Finite linear combination of basis words of a fixed presentation."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: AlgebraPresentation, terms: Optional[Mapping] = None):
        self.pres = pres
        clean: Dict[Word, Fraction] = {}
        for w, c in (terms or {}).items():
            c = to_scalar(c)
            if c:
                add_into(clean, pres.check_word(tuple(w)), c)
        self.terms = clean

    @classmethod
    def _raw(cls, pres, terms):
        x = cls.__new__(cls)
        x.pres, x.terms = pres, terms
        return x

    def _check(self, other: "AlgebraElement"):
        if other.pres is not self.pres:
            raise InputError("elements of different presentations")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_into(out, w, c)
        return AlgebraElement._raw(self.pres, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_into(out, w, -c)
        return AlgebraElement._raw(self.pres, out)

    def __neg__(self):
        return AlgebraElement._raw(self.pres, {w: -c for w, c in self.terms.items()})

    def scale(self, c) -> "AlgebraElement":
        c = to_scalar(c)
        return AlgebraElement._raw(self.pres, {w: c * x for w, x in self.terms.items()} if c else {})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and other.pres is self.pres and other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Degree of a homogeneous element (error for mixed degrees)."""
        degs = {self.pres.word_degree(w) for w in self.terms}
        if len(degs) > 1:
            raise InputError("element is not homogeneous")
        return degs.pop() if degs else 0

    def homogeneous_parts(self) -> Dict[int, "AlgebraElement"]:
        parts: Dict[int, Dict[Word, Fraction]] = {}
        for w, c in self.terms.items():
            parts.setdefault(self.pres.word_degree(w), {})[w] = c
        return {d: AlgebraElement._raw(self.pres, t) for d, t in sorted(parts.items())}

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            ws = self.pres.format_word(w)
            if c == 1:
                parts.append(ws)
            elif c == -1:
                parts.append("-" + ws)
            else:
                parts.append(f"{format_scalar(c)}·{ws}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._check(y)
    pres = x.pres
    out: Dict[Word, Fraction] = {}
    for u, a in x.terms.items():
        for w, b in y.terms.items():
            for z, c in pres.mul_words(u, w).items():
                add_into(out, z, a * b * c)
    return AlgebraElement._raw(pres, out)


# ---------------------------------------------------------------------------
# the quotient A/[A,A]

def _rotations_closure(words: Iterable[Word]) -> List[Word]:
    seen = set()
    for w in words:
        for k in range(max(len(w), 1)):
            seen.add(w[k:] + w[:k])
    return sorted(seen)


def commutator_spanning_set(pres: AlgebraPresentation, words: Iterable[Word], degree_bound: int):
    """Graded commutators uv − (−1)^{|u||v|} vu relevant to the given words."""
    words = list(words)
    if pres.kind == "free":
        for w in words:
            if len(w) > degree_bound:
                raise InputError(f"word {pres.format_word(w)} is longer than degree_bound={degree_bound}")
        for w in _rotations_closure(words):
            for k in range(1, len(w)):
                u, v = w[:k], w[k:]
                sign = -1 if (pres.word_degree(u) * pres.word_degree(v)) % 2 else 1
                yield u, v, sign
    else:
        pool = pres.basis_words(degree_bound)
        for u in pool:
            for v in pool:
                sign = -1 if (pres.word_degree(u) * pres.word_degree(v)) % 2 else 1
                yield u, v, sign


def check_class_equal(x: AlgebraElement, y: AlgebraElement, degree_bound: int = 4) -> bool:
    """Whether x − y lies in the span of graded commutators (bounded-degree linear algebra)."""
    x._check(y)
    pres = x.pres
    diff = (x - y).terms
    if not diff:
        return True
    if pres.kind == "free_group":
        for w in diff:
            if len(w) > degree_bound:
                raise InputError(f"word {pres.format_word(w)} is longer than degree_bound={degree_bound}")
    span = SparseSpan(key=lambda w: (len(w), w))
    for u, v, sign in commutator_spanning_set(pres, diff, degree_bound):
        vec: Dict[Word, Fraction] = {}
        for z, c in pres.mul_words(u, v).items():
            add_into(vec, z, c)
        for z, c in pres.mul_words(v, u).items():
            add_into(vec, z, -sign * c)
        if vec:
            span.add(vec)
    return span.contains(diff)


# ---------------------------------------------------------------------------
# (anti)automorphisms

class AlgebraMorphism:
    """Degree-preserving algebra endomorphism (or antiendomorphism when ``anti``).

    Free algebras and free groups take images of generators; basis algebras
    take images of every basis element and are checked exhaustively.
    """

    def __init__(self, pres: AlgebraPresentation, images: Mapping[str, "AlgebraElement"], anti: bool = False):
        self.pres = pres
        self.anti = bool(anti)
        if isinstance(pres, BasisAlgebra):
            keys = pres.labels
        else:
            keys = pres.generators
        self.images: Dict[str, AlgebraElement] = {}
        for k in keys:
            img = images.get(k)
            if img is None:
                img = pres.word((k,))
            if img.pres is not pres:
                raise InputError("image lies in another presentation")
            for w in img.terms:
                if pres.word_degree(w) != pres.letter_degree[k]:
                    raise ConstructionError(f"image of {k} does not preserve degree")
            self.images[k] = img
        extra = set(images) - set(keys)
        if extra:
            raise InputError(f"images given for unknown letters {sorted(extra)}")
        if isinstance(pres, FreeGroupAlgebra):
            for g, img in list(self.images.items()):
                if len(img.terms) != 1 or next(iter(img.terms.values())) != 1:
                    raise ConstructionError(f"image of group generator {g} must be a group element")
                self.images[g + INV] = AlgebraElement(pres, {pres.inverse_word(next(iter(img.terms))): ONE})
        if isinstance(pres, BasisAlgebra):
            self._check_basis_morphism()
        self._cache: Dict[Word, AlgebraElement] = {}

    def _check_basis_morphism(self):
        pres = self.pres
        for a, b in product(pres.labels, repeat=2):
            lhs = self.apply(pres.word(a) * pres.word(b))
            fa, fb = self.images[a], self.images[b]
            if self.anti:
                s = -1 if (pres.letter_degree[a] * pres.letter_degree[b]) % 2 else 1
                rhs = (fb * fa).scale(s)
            else:
                rhs = fa * fb
            if lhs != rhs:
                raise ConstructionError(f"map is not multiplicative at ({a}, {b})")

    def apply_word(self, word: Word) -> AlgebraElement:
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        pres = self.pres
        if isinstance(pres, BasisAlgebra):
            out = self.images[word[0]]
        elif not word:
            out = pres.one()
        else:
            letters = list(word)
            sign = 1
            if self.anti:
                degs = [pres.letter_degree.get(x, 0) for x in letters]
                odd = sum(1 for i in range(len(degs)) for j in range(i + 1, len(degs)) if degs[i] * degs[j] % 2)
                sign = -1 if odd % 2 else 1
                letters.reverse()
            out = self.images[letters[0]]
            for x in letters[1:]:
                out = out * self.images[x]
            out = out.scale(sign)
        self._cache[word] = out
        return out

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        out: Dict[Word, Fraction] = {}
        for w, c in x.terms.items():
            for z, d in self.apply_word(w).terms.items():
                add_into(out, z, c * d)
        return AlgebraElement._raw(self.pres, out)

    def compose(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """self ∘ other."""
        keys = self.pres.labels if isinstance(self.pres, BasisAlgebra) else self.pres.generators
        return AlgebraMorphism(self.pres, {k: self.apply(other.apply(self.pres.word((k,)))) for k in keys},
                               anti=self.anti != other.anti)

    def same_as(self, other: "AlgebraMorphism") -> bool:
        keys = self.pres.labels if isinstance(self.pres, BasisAlgebra) else self.pres.generators
        return self.anti == other.anti and all(self.images[k] == other.images[k] for k in keys)
