"""Finite groups given by multiplication tables, plus a few standard ones."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from .foundations import Q, ConstructionError, InputError, to_scalar


class FiniteGroup:
    """A finite group on string labels with a full multiplication table."""

    def __init__(self, elements: Sequence[str], table: Mapping[Tuple[str, str], str]):
        self.elements: Tuple[str, ...] = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ConstructionError("duplicate group element labels")
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._table = {}
        for g, h in product(self.elements, repeat=2):
            if (g, h) not in table:
                raise ConstructionError(f"group table has no entry for ({g}, {h})")
            gh = table[(g, h)]
            if gh not in self.index:
                raise ConstructionError(f"group table entry {g}*{h} = {gh} is not an element")
            self._table[(g, h)] = gh
        ids = [e for e in self.elements if all(self._table[(e, g)] == g == self._table[(g, e)] for g in self.elements)]
        if not ids:
            raise ConstructionError("group table has no two-sided neutral element")
        self.identity = ids[0]
        for g, h, k in product(self.elements, repeat=3):
            if self._table[(self._table[(g, h)], k)] != self._table[(g, self._table[(h, k)])]:
                raise ConstructionError(f"group table is not associative at ({g}, {h}, {k})")
        self._inverse = {}
        for g in self.elements:
            inv = [h for h in self.elements if self._table[(g, h)] == self.identity]
            if not inv:
                raise ConstructionError(f"element {g} has no inverse")
            self._inverse[g] = inv[0]

    def __len__(self):
        return len(self.elements)

    def mul(self, g: str, h: str) -> str:
        return self._table[(g, h)]

    def inv(self, g: str) -> str:
        return self._inverse[g]

    def conjugacy_classes(self) -> List[frozenset]:
        seen, classes = set(), []
        for g in self.elements:
            if g in seen:
                continue
            cls = frozenset(self.mul(self.mul(x, g), self.inv(x)) for x in self.elements)
            seen |= cls
            classes.append(cls)
        return classes

    def is_class_function(self, f: Mapping[str, Fraction]) -> bool:
        return all(f[self.mul(self.mul(x, g), self.inv(x))] == f[g]
                   for g in self.elements for x in self.elements)

    def table_dict(self) -> Dict[Tuple[str, str], str]:
        return dict(self._table)

    def __repr__(self):
        return f"FiniteGroup({len(self)} elements)"


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with elements "1", "g", "g2", ... (written multiplicatively)."""
    if n < 1:
        raise InputError("cyclic group order must be positive")
    names = ["1"] + [("g" if k == 1 else f"g{k}") for k in range(1, n)]
    if n == 2:
        names = ["1", "s"]
    table = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
    return FiniteGroup(names, table)


def _perm_label(p: Tuple[int, ...]) -> str:
    if p == tuple(range(len(p))):
        return "e"
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = p[x]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles)


def symmetric_group(k: int) -> FiniteGroup:
    """S_k on {1..k}; elements labelled in cycle notation, identity "e"."""
    perms = sorted(permutations(range(k)))
    labels = {p: _perm_label(p) for p in perms}
    # (pq)(x) = p(q(x))
    table = {(labels[p], labels[q]): labels[tuple(p[q[x]] for x in range(k))] for p in perms for q in perms}
    return FiniteGroup([labels[p] for p in perms], table)


def group_from_spec(spec: Mapping) -> FiniteGroup:
    """Build a group from a scenario section: {"cyclic": n}, {"symmetric": k} or explicit table."""
    if "cyclic" in spec:
        return cyclic_group(int(spec["cyclic"]))
    if "symmetric" in spec:
        return symmetric_group(int(spec["symmetric"]))
    if "elements" in spec and "table" in spec:
        elements = list(spec["elements"])
        rows = spec["table"]
        if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
            raise InputError("group table must be square with one row per element")
        table = {(g, h): rows[i][j] for i, g in enumerate(elements) for j, h in enumerate(elements)}
        return FiniteGroup(elements, table)
    raise InputError("group section needs 'cyclic', 'symmetric' or 'elements'+'table'")


def standard_character_s3(group: FiniteGroup) -> Dict[str, Fraction]:
    """Character of the 2-dimensional irreducible representation of S_3."""
    out = {}
    for g in group.elements:
        if g == "e":
            out[g] = Q(2)
        elif g.count("(") == 1 and len(g) == 4:  # transposition "(12)"
            out[g] = Q(0)
        else:
            out[g] = Q(-1)
    return out


def regular_character(group: FiniteGroup) -> Dict[str, Fraction]:
    return {g: Q(len(group) if g == group.identity else 0) for g in group.elements}


def class_function_from_spec(group: FiniteGroup, spec) -> Dict[str, Fraction]:
    """A function G -> Q from "regular", "trivial", "standard" or an explicit mapping."""
    if spec == "regular":
        return regular_character(group)
    if spec == "trivial":
        return {g: Q(1) for g in group.elements}
    if spec == "standard":
        return standard_character_s3(group)
    if isinstance(spec, Mapping):
        missing = [g for g in group.elements if g not in spec]
        if missing:
            raise InputError(f"function on the group is missing values at {missing}")
        return {g: to_scalar(spec[g]) for g in group.elements}
    raise InputError(f"unknown group function {spec!r}")
