"""Scenario files: loading, element specs and the task runner.

A scenario is a JSON document with the sections algebra, coalgebra, form,
double_bracket, an optional group_action, optional moments and samples, and
a list of tasks.  Rationals are written as "p/q" strings.
"""

from __future__ import annotations

import json
import random
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from . import bracket as br
from .algebra import (AlgebraElement, AlgebraPresentation, BasisAlgebra, FreeAlgebra, FreeGroupAlgebra,
                      quaternion_like_algebra, truncated_polynomial_algebra)
from .coalgebra import (Coalgebra, build_algebra_dual, build_from_constants, build_group_dual, build_matrix_dual,
                        build_trunc_poly_dual)
from .double_bracket import (DoubleBracket, Verdict, average_over_involution, is_equivariant_db, is_gerstenhaber,
                             is_moment_map, is_quasi_poisson)
from .enriched import EnrichedGroup, involution_action, transpose_involution_matrix, trivial_action
from .forms import (BilinearForm, adjoint_element, check_ci23, check_ci24, check_f11, check_f14, frobenius_form,
                    group_character_form, is_cyclic, is_equivariant_form, matrix_trace_form, trunc_poly_form)
from .formulas import group_formula, matrix_formula, trunc_formula
from .foundations import Q, ConstructionError, InputError, ReprError, add_into, format_scalar, to_scalar
from .groups import class_function_from_spec, group_from_spec
from .rep_algebra import RepContext, RepElement

EXPECTATIONS = ("pass", "fail", "error")


class ScenarioError(InputError):
    """Raised when a scenario file cannot be parsed or fails validation; carries (location, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{loc}: {msg}" for loc, msg in self.errors))


@dataclass
class Task:
    name: str
    check: str
    params: Dict[str, Any]
    expect: str = "pass"


@dataclass
class Scenario:
    name: str
    description: str
    raw: Dict[str, Any]
    pres: AlgebraPresentation
    coalgebra: Coalgebra
    form: BilinearForm
    db: DoubleBracket
    ctx: RepContext
    setup: br.BracketSetup
    tasks: List[Task]
    degree_bound: int
    character: Optional[Dict[str, Fraction]] = None
    matrix_size: Optional[int] = None
    moments: List[Dict[str, Any]] = field(default_factory=list)
    samples: List[RepElement] = field(default_factory=list)
    path: Optional[str] = None


# ---------------------------------------------------------------------------
# sections

def build_algebra(sec: Dict[str, Any]) -> AlgebraPresentation:
    kind = sec.get("kind")
    if kind == "free":
        return FreeAlgebra({g: int(d) for g, d in sec["generators"].items()}, unital=bool(sec.get("unital", False)))
    if kind == "free_group":
        return FreeGroupAlgebra(list(sec["generators"]))
    if kind == "group_algebra":
        return BasisAlgebra.from_group(group_from_spec(sec["group"]))
    if kind == "truncated_polynomial":
        return truncated_polynomial_algebra(int(sec["n"]))
    if kind == "quaternion":
        return quaternion_like_algebra()
    if kind == "structure_constants":
        consts = {}
        for key, row in sec.get("constants", {}).items():
            a, b = key.split("*")
            consts[(a.strip(), b.strip())] = row
        return BasisAlgebra(sec["labels"], consts, sec.get("degrees"), sec.get("unit"))
    raise InputError(f"unknown algebra kind {kind!r}")


def build_coalgebra(sec: Dict[str, Any]) -> Coalgebra:
    kind = sec.get("kind")
    if kind == "matrix_dual":
        return build_matrix_dual(int(sec["N"]))
    if kind == "group_dual":
        return build_group_dual(group_from_spec(sec["group"]))
    if kind == "trunc_poly_dual":
        return build_trunc_poly_dual(int(sec["n"]))
    if kind == "algebra_dual":
        return build_algebra_dual(build_algebra(sec["algebra"]))
    if kind == "constants":
        labels = list(sec["labels"])
        index = {l: i for i, l in enumerate(labels)}
        comul = {}
        for label, terms in sec["comul"].items():
            if label not in index:
                raise InputError(f"comultiplication given for unknown label {label!r}")
            row = {}
            for left, right, c in terms:
                if left not in index or right not in index:
                    raise InputError(f"comultiplication of {label} uses an unknown label")
                add_into(row, (index[left], index[right]), to_scalar(c))
            comul[index[label]] = row
        return build_from_constants(len(labels), comul, sec.get("counit"), labels, sec.get("name", ""))
    raise InputError(f"unknown coalgebra kind {kind!r}")


def build_form(sec: Dict[str, Any], M: Coalgebra, pres: AlgebraPresentation):
    """Returns (form, character, matrix size)."""
    kind = sec.get("kind")
    if kind == "trace":
        N = int(round(M.rank ** 0.5))
        return matrix_trace_form(M, N), None, N
    if kind == "trunc":
        return trunc_poly_form(M), None, None
    if kind == "character":
        group = getattr(M, "group", None)
        if group is None:
            raise InputError("a character form needs a group_dual coalgebra")
        F = class_function_from_spec(group, sec.get("function", "regular"))
        return group_character_form(M, F)[0], F, None
    if kind == "frobenius":
        alg = getattr(M, "algebra", None)
        if alg is None:
            raise InputError("a Frobenius form needs an algebra_dual coalgebra")
        if "theta" in sec:
            data = frobenius_form(alg, theta=sec["theta"], coalgebra=M)
        else:
            data = frobenius_form(alg, pairing=sec["pairing"], coalgebra=M)
        return data.form, None, None
    if kind == "matrix":
        return BilinearForm(M, sec["matrix"]), None, None
    raise InputError(f"unknown form kind {kind!r}")


def build_double_bracket(sec: Dict[str, Any], pres: AlgebraPresentation) -> DoubleBracket:
    table = {}
    for entry in sec.get("entries", []):
        x, y = entry["pair"]
        terms = {}
        for left, right, c in entry["value"]:
            key = (pres.parse_word(left), pres.parse_word(right))
            add_into(terms, key, to_scalar(c))
        if (x, y) in table:
            raise InputError(f"duplicate entry for ({x}, {y})")
        table[(x, y)] = terms
    db = DoubleBracket(pres, int(sec.get("n", 0)), table, unlisted_zero=bool(sec.get("unlisted_zero", False)))
    return db


def build_action(sec: Optional[Dict[str, Any]], pres: AlgebraPresentation, M: Coalgebra) -> Optional[EnrichedGroup]:
    if sec is None:
        return None
    kind = sec.get("kind")
    if kind == "trivial":
        return trivial_action(pres, M)
    if kind == "involution":
        images = {k: pres.parse_element(v) for k, v in sec.get("images", {}).items()}
        if "J" in sec:
            N = int(round(M.rank ** 0.5))
            matrix = transpose_involution_matrix(N, sec["J"])
        else:
            matrix = sec["matrix"]
        return involution_action(pres, images, M, matrix)
    raise InputError(f"unknown group_action kind {kind!r}")


# ---------------------------------------------------------------------------
# elements of A_M

_SYMBOL = re.compile(r"^(.+)\[([^\[\]]+)\]$")


def parse_monomial(ctx: RepContext, text: str) -> RepElement:
    text = text.strip()
    if text in ("e", "1"):
        return ctx.unit()
    acc = None
    for part in re.split(r"[·*]", text):
        m = _SYMBOL.match(part.strip())
        if not m:
            raise InputError(f"cannot parse symbol {part!r}; expected label[basis]")
        s = ctx.symbol(m.group(1), m.group(2))
        acc = s if acc is None else acc * s
    return acc


def parse_rep_element(ctx: RepContext, spec, theta=None) -> RepElement:
    """An element of A_M from a monomial string, a list of [monomial, coefficient] pairs,
    {"trace": a} (at ``theta``), {"realize": a, "at": α} or {"product": [x, y, ...]}."""
    if isinstance(spec, str):
        return parse_monomial(ctx, spec)
    if isinstance(spec, list):
        total = ctx.zero()
        for mono, c in spec:
            total = total + parse_monomial(ctx, mono).scale(to_scalar(c))
        return total
    if isinstance(spec, dict):
        if "trace" in spec:
            at = spec.get("at")
            if at is None:
                if theta is None:
                    raise InputError("trace sample needs an adjoint element, and the form has none")
                at = theta
            return ctx.trace(at, ctx.pres.parse_element(spec["trace"]))
        if "realize" in spec:
            return ctx.realize(ctx.pres.parse_element(spec["realize"]), spec["at"])
        if "product" in spec:
            acc = None
            for part in spec["product"]:
                x = parse_rep_element(ctx, part, theta)
                acc = x if acc is None else acc * x
            return acc
    raise InputError(f"cannot parse element spec {spec!r}")


# ---------------------------------------------------------------------------
# loading

def load_json(path) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError([(str(path), f"JSON parse error: {exc}")]) from exc
    except OSError as exc:
        raise ScenarioError([(str(path), str(exc))]) from exc


def _stage(errors, location, fn, *args):
    try:
        return fn(*args)
    except (ReprError, KeyError, TypeError, ValueError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        errors.append((location, msg))
        raise ScenarioError(errors) from exc


def scenario_from_dict(raw: Dict[str, Any], degree_bound: Optional[int] = None, path=None) -> Scenario:
    errors: List = []
    name = raw.get("name") or (Path(path).stem if path else "scenario")
    bound = int(degree_bound if degree_bound is not None else raw.get("degree_bound", 3))
    pres = _stage(errors, "algebra", build_algebra, raw.get("algebra", {}))
    M = _stage(errors, "coalgebra", build_coalgebra, raw.get("coalgebra", {}))
    form, character, N = _stage(errors, "form", build_form, raw.get("form", {}), M, pres)
    db = _stage(errors, "double_bracket", build_double_bracket, raw.get("double_bracket", {}), pres)
    action = _stage(errors, "group_action", build_action, raw.get("group_action"), pres, M)
    variant = raw.get("variant", "plain")
    ctx = _stage(errors, "variant", RepContext, pres, M, variant, action, bound)
    require_cyclic = not raw.get("form", {}).get("allow_noncyclic", False)
    setup = _stage(errors, "form", br.BracketSetup, ctx, db, form, require_cyclic)
    tasks = []
    for i, t in enumerate(raw.get("tasks", [])):
        loc = f"tasks[{i}]"
        if not isinstance(t, dict) or "check" not in t:
            errors.append((loc, "each task needs a 'check' field"))
            continue
        if t["check"] not in TASKS:
            errors.append((loc, f"unknown check {t['check']!r}"))
            continue
        expect = t.get("expect", "pass")
        if expect not in EXPECTATIONS:
            errors.append((loc, f"expect must be one of {EXPECTATIONS}"))
            continue
        params = {k: v for k, v in t.items() if k not in ("name", "check", "expect")}
        tasks.append(Task(t.get("name", t["check"]), t["check"], params, expect))
    names = [t.name for t in tasks]
    if len(set(names)) != len(names):
        errors.append(("tasks", "task names must be unique"))
    if errors:
        raise ScenarioError(errors)
    scn = Scenario(name, raw.get("description", ""), raw, pres, M, form, db, ctx, setup, tasks, bound,
                   character, N, list(raw.get("moments", [])), [], str(path) if path else None)
    theta = _theta(scn)
    scn.samples = [_stage(errors, f"samples[{i}]", parse_rep_element, ctx, s, theta)
                   for i, s in enumerate(raw.get("samples", []))]
    for i, m in enumerate(scn.moments):
        _stage(errors, f"moments[{i}]", _moment, scn, m)
    return scn


def load_scenario(path, degree_bound: Optional[int] = None) -> Scenario:
    return scenario_from_dict(load_json(path), degree_bound, path)


def _theta(scn: Scenario):
    if scn.coalgebra.counit is None:
        return None
    try:
        return adjoint_element(scn.form)
    except InputError:
        return None


def _moment(scn: Scenario, spec):
    xi = scn.pres.parse_element(spec["xi"])
    return xi, to_scalar(spec.get("k", 1)), spec.get("kind", "additive")


# ---------------------------------------------------------------------------
# tasks

def _setup_for(scn: Scenario, params) -> br.BracketSetup:
    setup = scn.setup
    if "double_bracket" in params:
        setup = setup.with_db(build_double_bracket(params["double_bracket"], scn.pres))
    if "form" in params:
        form, _, _ = build_form(params["form"], scn.coalgebra, scn.pres)
        setup = setup.with_form(form, require_cyclic=False)
    return setup


def _samples(scn: Scenario, params) -> List[RepElement]:
    if "samples" in params:
        theta = _theta(scn)
        return [parse_rep_element(scn.ctx, s, theta) for s in params["samples"]]
    return scn.samples


def _moments(scn: Scenario, params):
    specs = params.get("moments", scn.moments)
    if not specs:
        raise InputError("no moment map given")
    return [_moment(scn, m) for m in specs]


def _task_coalgebra(scn, params, seed):
    # the axioms were verified while loading
    return Verdict(True, scn.coalgebra.rank, details={"counital": scn.coalgebra.counit is not None})


def _task_cyclic(scn, params, seed):
    form = _setup_for(scn, params).form
    return Verdict(is_cyclic(form), 1)


def _task_form_identities(scn, params, seed):
    form = _setup_for(scn, params).form
    which = params.get("identities", ["ci23", "ci24", "f11", "f14"])
    funcs = {"ci23": check_ci23, "ci24": check_ci24, "f11": check_f11, "f14": check_f14}
    details, checked, witness = {}, 0, None
    for key in which:
        if key not in funcs:
            raise InputError(f"unknown identity {key!r}")
        res = funcs[key](form)
        details[key] = res.holds
        checked += res.checked
        if not res.holds and witness is None:
            witness = f"{key}: {res.witness}"
    return Verdict(witness is None, checked, witness, details)


def _task_symmetric(scn, params, seed):
    form = _setup_for(scn, params).form
    if scn.coalgebra.counit is None:
        raise InputError("symmetry of cyclic forms is stated for counital coalgebras")
    if not is_cyclic(form):
        raise InputError("the form is not cyclic")
    return Verdict(form.is_symmetric_matrix(), 1)


def _task_adjoint(scn, params, seed):
    M = scn.coalgebra
    theta = adjoint_element(scn.form)
    if theta is None:
        return Verdict(False, 1, "the form has no adjoint element")
    details = {"theta": M.format_vector(theta)}
    if "expected" in params and tuple(theta) != M.vector(params["expected"]):
        return Verdict(False, 1, f"adjoint element {M.format_vector(theta)} differs from the expected one", details)
    if not M.is_symmetric_element(theta):
        return Verdict(False, 1, "adjoint element is not symmetric", details)
    br._check_adjoint(scn.setup, theta)
    return Verdict(True, 1, details=details)


def _task_bracket_formula(scn, params, seed):
    setup, ctx, M = scn.setup, scn.ctx, scn.coalgebra
    formula = params["formula"]
    a, b = params.get("pair", ("a", "b"))
    checked = 0
    for x in range(M.rank):
        for y in range(M.rank):
            checked += 1
            got = setup.bracket(ctx.realize_word((a,), x), ctx.realize_word((b,), y))
            if formula == "matrix":
                N = scn.matrix_size
                want = matrix_formula(ctx, setup.db, N, a, x // N, x % N, b, y // N, y % N)
            elif formula == "trunc":
                want = trunc_formula(ctx, setup.db, a, x, b, y)
            elif formula == "group":
                g = M.group.elements
                want = group_formula(ctx, setup.db, scn.character, a, g[x], b, g[y])
            else:
                raise InputError(f"unknown formula {formula!r}")
            if got != want:
                return Verdict(False, checked, f"at ({a}[{M.labels[x]}], {b}[{M.labels[y]}]): {got} vs {want}")
    return Verdict(True, checked)


def _task_jacobi_oracle(scn, params, seed):
    return br.check_jacobi_oracle(_setup_for(scn, params), int(params.get("cap", 50000)), seed)


def _task_jacobi_vanishes(scn, params, seed):
    return br.check_jacobi_vanishes(_setup_for(scn, params), int(params.get("cap", 50000)), seed)


def _task_gerstenhaber(scn, params, seed):
    return is_gerstenhaber(_setup_for(scn, params).db, int(params.get("samples", 10)), seed)


def _task_quasi_poisson(scn, params, seed):
    return is_quasi_poisson(_setup_for(scn, params).db, int(params.get("samples", 10)), seed)


def _random_element(ctx: RepContext, rng: random.Random, degree: Optional[int] = None, terms: int = 2) -> RepElement:
    vocab = ctx.vocabulary()
    if degree is not None:
        vocab = [s for s in vocab if ctx.symbol_degree(s) == degree] or vocab
    total = ctx.zero()
    for _ in range(terms):
        x = ctx.symbol(*rng.choice(vocab))
        if rng.random() < 0.5:
            x = x * ctx.symbol(*rng.choice(ctx.vocabulary()))
        total = total + x.scale(rng.randint(1, 3))
    return total


def _task_bracket_axioms(scn, params, seed):
    """Antisymmetry, Leibniz and the Leibniz formula for the Jacobi form on random homogeneous inputs."""
    setup, ctx = _setup_for(scn, params), scn.ctx
    rng = random.Random(seed)
    n = setup.n
    sgn = lambda e: -1 if e % 2 else 1
    checked = 0
    for _ in range(int(params.get("samples", 20))):
        xs = []
        for _ in range(4):
            s = ctx.symbol(*rng.choice(ctx.vocabulary()))
            xs.append(s if rng.random() < 0.6 else s * ctx.symbol(*rng.choice(ctx.vocabulary())))
        x, y, z, w = xs
        dx, dy, dz, dw = (t.degree() for t in xs)
        checked += 1
        lhs = setup.bracket(x, y) + setup.bracket(y, x).scale(sgn((dx + n) * (dy + n)))
        if lhs and not ctx.in_ideal(lhs):
            return Verdict(False, checked, f"antisymmetry fails at ({x}, {y})")
        lhs = setup.bracket(x, y * z)
        rhs = setup.bracket(x, y) * z + (y * setup.bracket(x, z)).scale(sgn((dx + n) * dy))
        if lhs != rhs and not ctx.equal_mod_relations(lhs, rhs):
            return Verdict(False, checked, f"Leibniz rule fails at ({x}, {y}, {z})")
        lhs = br.jacobi_form(setup, x * w, y, z)
        rhs = (x * br.jacobi_form(setup, w, y, z)).scale(sgn(dx * (dz + n))) \
            + (br.jacobi_form(setup, x, y, z) * w).scale(sgn(dw * (dy + n)))
        if lhs != rhs and not ctx.equal_mod_relations(lhs, rhs):
            return Verdict(False, checked, f"Jacobi-form Leibniz formula fails at ({x}, {w}, {y}, {z})")
    return Verdict(True, checked)


def _task_unit_group(scn, params, seed):
    return br.verify_unit_group_invariance(_setup_for(scn, params), int(params.get("samples", 5)), seed,
                                           int(params.get("pair_cap", 64)))


def _task_coderivation(scn, params, seed):
    setup = _setup_for(scn, params)
    if "phi" in params:
        return br.verify_coderivation_invariance(setup, params["phi"])
    return br.verify_all_coderivations(setup)


def _task_trace_compat(scn, params, seed):
    theta = params.get("theta")
    if theta is None:
        theta = adjoint_element(scn.form)
        if theta is None:
            raise InputError("the form has no adjoint element")
    return br.verify_trace_compat(_setup_for(scn, params), theta)


def _task_closed_on_invariants(scn, params, seed):
    setup, ctx = _setup_for(scn, params), scn.ctx
    samples = _samples(scn, params)
    checked = 0
    for x in samples:
        if not ctx.is_invariant(x):
            raise InputError(f"sample {x} is not invariant")
    for x in samples:
        for y in samples:
            checked += 1
            if not ctx.is_invariant(setup.bracket(x, y)):
                return Verdict(False, checked, f"⟨{x}, {y}⟩ is not invariant")
    return Verdict(True, checked)


def _monomials_of_degree(ctx: RepContext, max_len: int) -> List[RepElement]:
    vocab = ctx.vocabulary()
    out = [ctx.unit()] if ctx.unital else []
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for m in layer:
            for s in vocab:
                if not m or s >= m[-1]:
                    nxt.append(m + (s,))
        layer = nxt
        for m in layer:
            x = RepElement(ctx, {m: 1})
            if x:
                out.append(x)
    return out


def _task_moment(scn, params, seed):
    setup, ctx = _setup_for(scn, params), scn.ctx
    checked = 0
    xs = _monomials_of_degree(ctx, int(params.get("max_length", 2)))
    for xi, k, kind in _moments(scn, params):
        for x in xs:
            res = br.moment_bracket_identity(setup, xi, k, x, kind)
            checked += res.checked
            if not res:
                return Verdict(False, checked, f"x = {x}: {res.witness}")
    return Verdict(True, checked, details={"elements": len(xs)})


def _task_hamiltonian(scn, params, seed):
    moments = []
    for xi, k, kind in _moments(scn, params):
        moments.append((xi, k))
    return br.hamiltonian_reduction_check(_setup_for(scn, params), moments, _samples(scn, params))


def _task_quasi_invariants(scn, params, seed):
    setup, ctx = _setup_for(scn, params), scn.ctx
    gens = [setup.sym(s) for s in setup.generator_symbols()]
    rng = random.Random(seed)
    triples = [(x, y, z) for x in _samples(scn, params) for y in gens for z in gens]
    limit = int(params.get("limit", 40))
    if len(triples) > limit:
        triples = rng.sample(triples, limit)
    checked, agreed = 0, 0
    for x, y, z in triples:
        res = br.quasi_jacobi_on_invariants(setup, x, y, z)
        checked += 1
        agreed += bool(res.details.get("expansion_agrees"))
        if not res:
            return Verdict(False, checked, f"at ({x}, {y}, {z}): {res.witness}")
    return Verdict(True, checked, details={"expansion_cross_checks": agreed})


def _task_representative(scn, params, seed):
    return br.representative_independence(_setup_for(scn, params), check=not params.get("unchecked", False))


def _task_elll(scn, params, seed):
    return br.check_elll(scn.ctx)


def _task_equivariant_reduction(scn, params, seed):
    moments = [(xi, k) for xi, k, _ in _moments(scn, params)]
    return br.equivariant_reduction_check(_setup_for(scn, params), moments, _samples(scn, params))


def _task_equivariant_quasi(scn, params, seed):
    setup, ctx = _setup_for(scn, params), scn.ctx
    gens = [setup.sym(s) for s in setup.generator_symbols()]
    rng = random.Random(seed)
    triples = [(x, y, z) for x in _samples(scn, params) for y in gens for z in gens]
    limit = int(params.get("limit", 20))
    if len(triples) > limit:
        triples = rng.sample(triples, limit)
    checked = 0
    for x, y, z in triples:
        checked += 1
        res = br.equivariant_quasi_check(setup, x, y, z)
        if not res:
            return Verdict(False, checked, f"at ({x}, {y}, {z}): {res.witness}")
    return Verdict(True, checked)


def _task_equivariance(scn, params, seed):
    act = scn.ctx.action
    if act is None:
        raise InputError("the scenario has no group action")
    setup = _setup_for(scn, params)
    res = is_equivariant_db(setup.db, [act.alg[g] for g in act.elements])
    if not res:
        return res
    if not is_equivariant_form(setup.form, [act.mat[g] for g in act.elements]):
        return Verdict(False, res.checked, "the form is not equivariant")
    return Verdict(True, res.checked + 1)


def _task_moment_map(scn, params, seed):
    checked = 0
    for xi, k, kind in _moments(scn, params):
        if kind == "multiplicative":
            res = is_moment_map(scn.db, xi + scn.pres.one(), kind)
        else:
            res = is_moment_map(scn.db, xi, kind, k)
        checked += res.checked
        if not res:
            return res
    return Verdict(True, checked)


TASKS: Dict[str, Callable] = {
    "coalgebra-axioms": _task_coalgebra,
    "cyclic": _task_cyclic,
    "form-identities": _task_form_identities,
    "symmetric-form": _task_symmetric,
    "adjoint": _task_adjoint,
    "bracket-formula": _task_bracket_formula,
    "jacobi-oracle": _task_jacobi_oracle,
    "jacobi-vanishes": _task_jacobi_vanishes,
    "gerstenhaber": _task_gerstenhaber,
    "quasi-poisson": _task_quasi_poisson,
    "bracket-axioms": _task_bracket_axioms,
    "unit-group-invariance": _task_unit_group,
    "coderivation-invariance": _task_coderivation,
    "trace-compat": _task_trace_compat,
    "closed-on-invariants": _task_closed_on_invariants,
    "moment-map": _task_moment_map,
    "moment-identity": _task_moment,
    "hamiltonian-reduction": _task_hamiltonian,
    "quasi-invariants": _task_quasi_invariants,
    "equivariance": _task_equivariance,
    "representative-independence": _task_representative,
    "elll": _task_elll,
    "equivariant-reduction": _task_equivariant_reduction,
    "equivariant-quasi": _task_equivariant_quasi,
}


def _jsonable(x):
    if isinstance(x, (Fraction, Q)):
        return format_scalar(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def run_task(scn: Scenario, task: Task, seed: int = 0, timing: bool = False) -> Dict[str, Any]:
    start = time.perf_counter()
    try:
        res = TASKS[task.check](scn, task.params, seed)
        outcome = "pass" if res.holds else "fail"
        record = {"checked": res.checked, "witness": res.witness, "details": _jsonable(res.details or {})}
    except ReprError as exc:
        outcome = "error"
        record = {"checked": 0, "witness": str(exc), "details": {}}
    out = {"task": task.name, "check": task.check, "expect": task.expect, "outcome": outcome,
           "as_expected": outcome == task.expect}
    out.update(record)
    if timing:
        out["seconds"] = round(time.perf_counter() - start, 3)
    return out


def run_scenario(scn: Scenario, only: Optional[List[str]] = None, seed: int = 0,
                 timing: bool = False) -> Dict[str, Any]:
    results = []
    for task in scn.tasks:
        if only and task.check not in only and task.name not in only:
            continue
        results.append(run_task(scn, task, seed, timing))
    return {"scenario": scn.name, "description": scn.description, "tasks": results}
