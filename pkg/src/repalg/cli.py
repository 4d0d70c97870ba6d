"""Command line interface: repalg check | bracket | jacobi | verify-suite | report."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional

from . import bracket as br
from .foundations import ReprError
from .scenario import TASKS, ScenarioError, Task, load_scenario, parse_rep_element, run_scenario, run_task, _theta

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# axioms accepted by `repalg check`, mapped to task kinds
AXIOMS = {
    "coalgebra": "coalgebra-axioms",
    "cyclic": "cyclic",
    "form-identities": "form-identities",
    "symmetric": "symmetric-form",
    "adjoint": "adjoint",
    "gerstenhaber": "gerstenhaber",
    "quasi-poisson": "quasi-poisson",
    "moment-map": "moment-map",
    "equivariance": "equivariance",
}


def corpus_dir() -> Path:
    env = os.environ.get("REPALG_CORPUS")
    if env:
        return Path(env)
    return Path(str(resources.files("repalg") / "corpus"))


def corpus_scenarios() -> List[Path]:
    return sorted(corpus_dir().glob("*.json"))


def resolve(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    for cand in (corpus_dir() / name, corpus_dir() / f"{name}.json"):
        if cand.exists():
            return cand
    raise ScenarioError([(name, "no such scenario file or corpus entry")])


def _run_path(args):
    path, only, seed, degree_bound, timing = args
    try:
        scn = load_scenario(path, degree_bound)
    except ScenarioError as exc:
        return {"scenario": Path(path).stem, "load_errors": [[loc, msg] for loc, msg in exc.errors], "tasks": []}
    return run_scenario(scn, only, seed, timing)


def run_many(paths, only=None, seed=0, degree_bound=None, timing=False, jobs=1) -> List[Dict]:
    work = [(str(p), only, seed, degree_bound, timing) for p in paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_path, work))
    else:
        results = [_run_path(w) for w in work]
    return sorted(results, key=lambda r: r["scenario"])


def exit_code(results: List[Dict]) -> int:
    code = EXIT_OK
    for r in results:
        if r.get("load_errors"):
            return EXIT_INPUT
        for t in r["tasks"]:
            if t["as_expected"]:
                continue
            if t["outcome"] == "error":
                return EXIT_INPUT
            code = EXIT_FAIL
    return code


def format_text(results: List[Dict]) -> str:
    lines = []
    total = unexpected = 0
    for r in results:
        lines.append(f"== {r['scenario']}")
        for loc, msg in r.get("load_errors", []):
            lines.append(f"  load error at {loc}: {msg}")
            unexpected += 1
        for t in r["tasks"]:
            total += 1
            mark = "ok " if t["as_expected"] else "BAD"
            if not t["as_expected"]:
                unexpected += 1
            note = "" if t["expect"] == "pass" else f" (expected {t['expect']})"
            line = f"  {mark} {t['task']}: {t['outcome']}{note}, checked {t['checked']}"
            if "seconds" in t:
                line += f", {t['seconds']}s"
            lines.append(line)
            if t["witness"] and (t["outcome"] != "pass"):
                lines.append(f"      {t['witness']}")
    lines.append(f"{len(results)} scenarios, {total} tasks, {unexpected} unexpected")
    return "\n".join(lines) + "\n"


def emit(results, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps({"results": results, "exit_code": exit_code(results)}, indent=2,
                             ensure_ascii=False, sort_keys=True) + "\n")
    else:
        out.write(format_text(results))


def _element_args(scn, a, alpha, spec):
    if spec is not None:
        return parse_rep_element(scn.ctx, json.loads(spec), _theta(scn))
    if a is None or alpha is None:
        raise ReprError("give either a letter and a basis label or a JSON element spec")
    return scn.ctx.symbol(a, alpha)


def cmd_check(args) -> int:
    scn = load_scenario(resolve(args.scenario), args.degree_bound)
    task = Task(args.axiom, AXIOMS[args.axiom], {}, "pass")
    results = [{"scenario": scn.name, "description": scn.description,
                "tasks": [run_task(scn, task, args.seed, args.timing)]}]
    emit(results, args.format)
    return exit_code(results)


def cmd_bracket(args) -> int:
    scn = load_scenario(resolve(args.scenario), args.degree_bound)
    x = _element_args(scn, args.a, args.alpha, args.x)
    y = _element_args(scn, args.b, args.beta, args.y)
    if args.equivariant:
        value = br.equivariant_bracket(scn.setup, x, y)
    else:
        value = scn.setup.bracket(x, y)
    if args.format == "json":
        print(json.dumps({"x": str(x), "y": str(y), "bracket": value.serialize(), "text": str(value)},
                         ensure_ascii=False, sort_keys=True))
    else:
        print(str(value))
    return EXIT_OK


def cmd_jacobi(args) -> int:
    scn = load_scenario(resolve(args.scenario), args.degree_bound)
    setup, ctx = scn.setup, scn.ctx
    xs = [ctx.symbol(l, b) for l, b in ((args.a, args.alpha), (args.b, args.beta), (args.c, args.gamma))]
    direct = br.jacobi_form(setup, *xs)
    M = ctx.coalgebra
    oracle = br.jacobi_oracle_QR(setup, (args.a,), (args.b,), (args.c,), M.index_of(args.alpha),
                                 M.index_of(args.beta), M.index_of(args.gamma))
    agree = direct == oracle or ctx.equal_mod_relations(direct, oracle)
    if args.format == "json":
        print(json.dumps({"jacobi_form": direct.serialize(), "oracle": oracle.serialize(), "agree": agree},
                         ensure_ascii=False, sort_keys=True))
    else:
        print(f"jacobi form: {direct}")
        print(f"Q - R:       {oracle}")
        print(f"agree: {'yes' if agree else 'no'}")
    return EXIT_OK if agree else EXIT_FAIL


def _paths(names) -> List[Path]:
    if names:
        return [resolve(n) for n in names]
    paths = corpus_scenarios()
    if not paths:
        raise ScenarioError([(str(corpus_dir()), "no scenario files found")])
    return paths


def cmd_verify_suite(args) -> int:
    if args.suite != "all" and args.suite not in TASKS:
        raise ReprError(f"unknown suite {args.suite!r}; choose from {sorted(TASKS)} or 'all'")
    only = None if args.suite == "all" else [args.suite]
    results = run_many(_paths(args.scenarios), only, args.seed, args.degree_bound, args.timing, args.jobs)
    results = [r for r in results if r["tasks"] or r.get("load_errors")]
    emit(results, args.format)
    return exit_code(results)


def cmd_report(args) -> int:
    results = run_many(_paths(args.scenarios), args.only, args.seed, args.degree_bound, args.timing, args.jobs)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            emit(results, args.format, fh)
    else:
        emit(results, args.format)
    return exit_code(results)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--degree-bound", type=int, default=None, help="override the scenario degree bound")
    common.add_argument("--seed", type=int, default=0, help="seed for the random-sampling suites")
    common.add_argument("--timing", action="store_true", help="include per-task timings in reports")

    parser = argparse.ArgumentParser(prog="repalg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check one axiom on a scenario")
    p.add_argument("axiom", choices=sorted(AXIOMS))
    p.add_argument("scenario")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bracket", parents=[common], help="evaluate the induced bracket")
    p.add_argument("scenario")
    p.add_argument("--a")
    p.add_argument("--alpha")
    p.add_argument("--b")
    p.add_argument("--beta")
    p.add_argument("--x", help="JSON element spec for the first argument")
    p.add_argument("--y", help="JSON element spec for the second argument")
    p.add_argument("--equivariant", action="store_true")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("jacobi", parents=[common], help="Jacobi form against the Q - R oracle")
    p.add_argument("scenario")
    for letter, basis in (("a", "alpha"), ("b", "beta"), ("c", "gamma")):
        p.add_argument(f"--{letter}", required=True)
        p.add_argument(f"--{basis}", required=True)
    p.set_defaults(func=cmd_jacobi)

    for name, func, helptext in (("verify-suite", cmd_verify_suite, "run one task kind across scenarios"),
                                 ("report", cmd_report, "run every task of the given scenarios")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "verify-suite":
            p.add_argument("suite")
        p.add_argument("scenarios", nargs="*", help="scenario files or corpus names (default: whole corpus)")
        p.add_argument("--jobs", type=int, default=1)
        if name == "report":
            p.add_argument("--only", action="append", help="restrict to a task kind or name (repeatable)")
            p.add_argument("--output")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        for loc, msg in exc.errors:
            print(f"error: {loc}: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except ReprError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
