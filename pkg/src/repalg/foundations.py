"""Exact scalars, sparse tensors, permutation operators and small exact linear algebra."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from gmpy2 import mpq
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

# gmpy2 rationals; they compare and hash like Fraction, so both may meet in dict keys and equality tests
Scalar = mpq
Q = mpq

ZERO = mpq(0)
ONE = mpq(1)


class ReprError(Exception):
    """Base class for all library errors."""


class InputError(ReprError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class ConstructionError(InputError):
    """A structure failed its axioms while being built."""


class DomainError(ReprError):
    """A mathematical precondition (invertibility, non-degeneracy) failed."""


def to_scalar(value) -> Fraction:
    """Parse ints, rationals and "p/q" strings exactly. Floats are rejected."""
    if type(value) is mpq:
        return value
    if isinstance(value, bool):
        raise InputError(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, str):
        try:
            f = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
        return mpq(f.numerator, f.denominator)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return mpq(int(value.numerator), int(value.denominator))
    raise InputError(f"not an exact scalar: {value!r}")


def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# sparse dictionaries

def add_into(target: dict, key, coef) -> None:
    """target[key] += coef, dropping the entry when it cancels."""
    if not coef:
        return
    new = target.get(key, ZERO) + coef
    if new:
        target[key] = new
    else:
        target.pop(key, None)


def combine(*pairs: Tuple[object, dict]) -> dict:
    """Sparse linear combination sum(c * d) of dictionaries."""
    out: dict = {}
    for c, d in pairs:
        if not c:
            continue
        for k, v in d.items():
            add_into(out, k, c * v)
    return out


class Tensor:
    """Finitely supported element of a tensor power, keyed by tuples of basis labels.

    ``degree_of`` gives the degree of each basis label and is only consulted
    by graded operations.
    """

    __slots__ = ("arity", "terms", "degree_of")

    def __init__(self, arity: int, terms: Optional[dict] = None,
                 degree_of: Optional[Callable[[Hashable], int]] = None):
        if arity < 1:
            raise InputError("tensor arity must be positive")
        self.arity = arity
        clean = {}
        for key, c in (terms or {}).items():
            if len(key) != arity:
                raise InputError(f"key {key!r} does not have arity {arity}")
            c = to_scalar(c)
            if c:
                clean[tuple(key)] = c
        self.terms = clean
        self.degree_of = degree_of if degree_of is not None else (lambda _x: 0)

    @classmethod
    def _raw(cls, arity, terms, degree_of):
        t = cls.__new__(cls)
        t.arity, t.terms, t.degree_of = arity, terms, degree_of
        return t

    def _same(self, terms):
        return Tensor._raw(self.arity, terms, self.degree_of)

    def _check(self, other: "Tensor"):
        if other.arity != self.arity:
            raise InputError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return self._same(combine((ONE, self.terms), (ONE, other.terms)))

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return self._same(combine((ONE, self.terms), (-ONE, other.terms)))

    def __neg__(self) -> "Tensor":
        return self._same({k: -v for k, v in self.terms.items()})

    def scale(self, c) -> "Tensor":
        c = to_scalar(c)
        return self._same({k: c * v for k, v in self.terms.items()} if c else {})

    def __eq__(self, other) -> bool:
        return isinstance(other, Tensor) and self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[tuple, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda kv: repr(kv[0])))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        body = " + ".join(f"{format_scalar(c)}*{'⊗'.join(map(str, k))}" for k, c in self)
        return f"Tensor({body or '0'})"


def _check_perm(perm: Sequence[int], arity: int) -> Tuple[int, ...]:
    perm = tuple(perm)
    if len(perm) != arity:
        raise InputError(f"permutation of length {len(perm)} applied to arity-{arity} tensor")
    if sorted(perm) != list(range(1, arity + 1)):
        raise InputError(f"{perm!r} is not a permutation of 1..{arity}")
    return perm


def permutation_sign_exponent(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Sum of degrees[i_k]*degrees[i_l] over inverted pairs k<l (i_k > i_l), 1-based perm."""
    t = 0
    m = len(perm)
    for k in range(m):
        for l in range(k + 1, m):
            if perm[k] > perm[l]:
                t += degrees[perm[k] - 1] * degrees[perm[l] - 1]
    return t


def graded_permute(perm: Sequence[int], n: int, t: Tensor) -> Tensor:
    """a_1⊗…⊗a_m ↦ (−1)^s a_{i_1}⊗…⊗a_{i_m}, signs from the shifted degrees |a|+n."""
    perm = _check_perm(perm, t.arity)
    out: dict = {}
    deg = t.degree_of
    for key, c in t.terms.items():
        degs = [deg(x) + n for x in key]
        s = permutation_sign_exponent(perm, degs)
        add_into(out, tuple(key[i - 1] for i in perm), -c if s % 2 else c)
    return t._same(out)


def plain_permute(perm: Sequence[int], t: Tensor) -> Tensor:
    """Unsigned coordinate shuffle."""
    perm = _check_perm(perm, t.arity)
    return t._same({tuple(key[i - 1] for i in perm): c for key, c in t.terms.items()})


def compose_perms(p: Sequence[int], q: Sequence[int]) -> Tuple[int, ...]:
    """The permutation r with plain_permute(r) = plain_permute(p) ∘ plain_permute(q)."""
    return tuple(q[i - 1] for i in p)


# ---------------------------------------------------------------------------
# dense exact linear algebra (thin wrappers over sympy's DomainMatrix over QQ)

def _to_dm(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    nr = len(rows)
    nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    data = [[QQ(int(to_scalar(x).numerator), int(to_scalar(x).denominator)) for x in r] for r in rows]
    return DomainMatrix(data, (nr, nc), QQ)


def _from_q(x) -> Fraction:
    return mpq(int(x.numerator), int(x.denominator))


def _from_dm(m: DomainMatrix) -> List[List[Fraction]]:
    return [[_from_q(x) for x in row] for row in m.to_list()]


def mat_inverse(rows: Sequence[Sequence]) -> Optional[List[List[Fraction]]]:
    """Exact inverse, or None when singular."""
    m = _to_dm(rows)
    if m.rank() < len(rows):
        return None
    return _from_dm(m.inv())


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of {x : rows·x = 0}."""
    nc = ncols if ncols is not None else len(rows[0])
    if not rows:
        return [[ONE if i == j else ZERO for i in range(nc)] for j in range(nc)]
    ns = _to_dm(rows, nc).nullspace()
    return _from_dm(ns)


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """One exact solution of rows·x = rhs (free variables set to 0), or None."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    aug = [list(rows[i]) + [rhs[i]] for i in range(nr)]
    red, pivots = _to_dm(aug, nc + 1).rref()
    red = _from_dm(red)
    if nc in pivots:
        return None
    x = [ZERO] * nc
    for r, p in enumerate(pivots):
        x[p] = red[r][nc]
    return x


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[List[Fraction]]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner) if a[i][k] and b[k][j]), ZERO)
             for j in range(cols)] for i in range(len(a))]


def transpose(a: Sequence[Sequence]) -> List[List]:
    return [list(col) for col in zip(*a)]


def identity_matrix(n: int) -> List[List[Fraction]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# sparse echelon basis for span-membership questions

class SparseSpan:
    """Incrementally maintained echelon basis of sparse rational vectors.

    Vectors are dicts column -> Fraction; columns need only be hashable and
    totally ordered by ``key``.
    """

    def __init__(self, key: Callable = lambda c: c):
        self._key = key
        self._pivots: Dict[Hashable, dict] = {}

    def __len__(self):
        return len(self._pivots)

    def _lead(self, vec: dict):
        return min(vec, key=self._key)

    def reduce(self, vec: dict) -> dict:
        """Residual of vec after elimination against the basis (empty iff in the span)."""
        vec = dict(vec)
        pivots = self._pivots
        while vec:
            todo = [c for c in vec if c in pivots]
            if not todo:
                return vec
            col = min(todo, key=self._key)
            coef = vec[col]
            for k, v in pivots[col].items():
                add_into(vec, k, -coef * v)
        return vec

    def add(self, vec: dict) -> bool:
        """Insert vec; returns True when it enlarged the span."""
        red = self.reduce(vec)
        if not red:
            return False
        lead = self._lead(red)
        inv = ONE / to_scalar(red[lead])
        red = {k: v * inv for k, v in red.items()}
        # keep pivot rows free of this new pivot column
        for col, row in self._pivots.items():
            c = row.get(lead)
            if c:
                for k, v in red.items():
                    add_into(row, k, -c * v)
        self._pivots[lead] = red
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def extend(self, vecs: Iterable[dict]) -> None:
        for v in vecs:
            self.add(v)
