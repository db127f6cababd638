"""Command-line surface.

Subcommands: mvc, evc, spartan, konig, certify, aux, play, selftest.
Exit codes: 0 success, 1 analysis refusal (budget or truncation), 2 input
error.  ``--json`` emits the byte-stable canonical report (it omits the
timing block, which is the only run-dependent field).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import report as rpt
from .covers import enumerate_min_vcs
from .decider import is_spartan, strategy_export
from .defense import build_aux
from .errors import (
    EvckitError,
    GraphFormatError,
    IntegrityError,
    PreconditionError,
    ResourceLimitError,
    ValidationError,
)
from .game import evc, play_session
from .goodness import necessary_conditions_report
from .graph import Graph, OddCycle, bipartition, load_graph_text
from .matching import is_essentially_elementary, max_matching_size
from .covers import mvc_mask


def _load(path: str) -> Graph:
    if path == "-":
        return load_graph_text(sys.stdin.read())
    return load_graph_text(Path(path).read_text())


class _Timer:
    def __init__(self):
        self.phases: dict[str, float] = {}

    def phase(self, name: str):
        timer = self

        class _Ctx:
            def __enter__(self_inner):
                self_inner.t0 = time.perf_counter()

            def __exit__(self_inner, *exc):
                timer.phases[name] = round(
                    (time.perf_counter() - self_inner.t0) * 1000.0, 3
                )

        return _Ctx()


def _emit(report_obj: dict, timer: _Timer, json_mode: bool) -> None:
    if json_mode:
        print(rpt.canonical_json(report_obj))
    else:
        report_obj = dict(report_obj)
        report_obj["timings_ms"] = timer.phases
        print(rpt.pretty_json(report_obj))


def _cover_labels(g: Graph, covers) -> list[list[str]]:
    return [list(g.labels_of(c)) for c in covers]


def cmd_mvc(args) -> int:
    g = _load(args.file)
    timer = _Timer()
    with timer.phase("enumerate"):
        cs = enumerate_min_vcs(g, cap=args.cap)
    out = rpt.base_report(g, "mvc")
    out["result"] = {
        "size": cs.size,
        "covers": _cover_labels(g, cs.covers),
        "truncated": cs.truncated,
        "cap": cs.cap,
    }
    _emit(out, timer, args.json)
    return 0


def cmd_evc(args) -> int:
    g = _load(args.file)
    timer = _Timer()
    with timer.phase("solve"):
        result = evc(g, budget=args.budget)
    out = rpt.base_report(g, "evc")
    out["result"] = {
        "evc": result.value,
        "mvc": result.mvc,
        "components": result.per_component,
        "outcomes_by_guard_count": {str(k): w for k, w in result.outcomes.items()},
    }
    _emit(out, timer, args.json)
    return 0


def cmd_spartan(args) -> int:
    g = _load(args.file)
    timer = _Timer()
    with timer.phase("decide"):
        verdict = is_spartan(
            g, method=args.method, cross_check=args.cross_check, cover_cap=args.cap
        )
    out = rpt.base_report(g, "spartan")
    payload = {
        "spartan": verdict.spartan,
        "method": verdict.method,
        "mvc": verdict.mvc,
        "max_matching": verdict.max_matching,
    }
    if verdict.family is not None:
        payload["family"] = _cover_labels(g, verdict.family.covers)
        payload["strategy"] = strategy_export(verdict.family, g)
    if verdict.certificate is not None:
        payload["certificate"] = rpt.labelize(g, verdict.certificate)
    if verdict.components is not None:
        payload["components"] = [
            {
                "spartan": v.spartan,
                "method": v.method,
                "mvc": v.mvc,
                "family": None
                if v.family is None
                else _cover_labels(g, v.family.covers),
                "certificate": None
                if v.certificate is None
                else rpt.labelize(g, v.certificate),
            }
            for v in verdict.components
        ]
    if verdict.cross_check is not None:
        cc = verdict.cross_check
        if args.json:
            cc = {k: v for k, v in cc.items() if not k.endswith("_ms")}
        payload["cross_check"] = cc
    out["result"] = payload
    _emit(out, timer, args.json)
    return 0


def cmd_konig(args) -> int:
    g = _load(args.file)
    timer = _Timer()
    with timer.phase("analyze"):
        mm = max_matching_size(g)
        k = mvc_mask(g, g.full_mask)
        konig = mm == k
        from .graph import connected_components

        bip_ok = True
        odd = None
        for comp in connected_components(g):
            res = bipartition(g.induced(comp))
            if isinstance(res, OddCycle):
                bip_ok = False
                odd = [g.induced(comp).labels[i] for i in res.vertices]
                break
        elem, _ = is_essentially_elementary(g) if bip_ok else (False, None)
    out = rpt.base_report(g, "konig")
    out["result"] = {
        "max_matching": mm,
        "mvc": k,
        "konig": konig,
        "bipartite": bip_ok,
        "essentially_elementary": elem,
        "spartan_if_konig": (bip_ok and elem) if konig else None,
        "odd_cycle": odd,
    }
    _emit(out, timer, args.json)
    return 0


def cmd_certify(args) -> int:
    g = _load(args.file)
    timer = _Timer()
    k = args.k if args.k is not None else mvc_mask(g, g.full_mask)
    with timer.phase("battery"):
        battery = necessary_conditions_report(g, k)
    out = rpt.base_report(g, "certify")
    conditions = []
    for cond in battery["conditions"]:
        cond = dict(cond)
        if cond["certificate"] is not None:
            cond["certificate"] = rpt.labelize(g, cond["certificate"])
        conditions.append(cond)
    out["result"] = {
        "k": battery["k"],
        "mvc": battery["mvc"],
        "spartan_mode": battery["spartan_mode"],
        "verdict": battery["verdict"],
        "conditions": conditions,
    }
    _emit(out, timer, args.json)
    return 0


def cmd_aux(args) -> int:
    g = _load(args.file)
    timer = _Timer()
    s = g.index_set(args.cover_s.split(","))
    t = g.index_set(args.cover_t.split(","))
    with timer.phase("build"):
        aux = build_aux(g, s, t)
    out = rpt.base_report(g, "aux")
    out["result"] = {
        "left": list(g.labels_of(aux.left)),
        "right": list(g.labels_of(aux.right)),
        "dead_zone": list(g.labels_of(aux.dead_zone)),
        "colors": [list(g.labels_of(c)) for c in aux.colors],
        "real_edges": sorted(
            [g.labels[u], g.labels[v]] for u, v in aux.real_pairs
        ),
        "helper_edges": [
            {"edge": [g.labels[u], g.labels[v]], "color": c}
            for u, v, c in aux.helper_pairs
        ],
    }
    _emit(out, timer, args.json)
    return 0


def cmd_play(args) -> int:
    g = _load(args.file)
    play_session(g, args.guards, sys.stdin, sys.stdout)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    report = run_selftest(
        max_n=args.max_n,
        samples=args.samples,
        seed=args.seed,
        jobs=args.jobs,
        progress=(lambda done: print(f"... {done} graphs", file=sys.stderr))
        if args.verbose
        else None,
    )
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="byte-stable JSON output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evckit",
        description="eternal vertex cover game solver and Spartan-graph decider",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mvc", help="minimum vertex cover size and all optima")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(fn=cmd_mvc)

    p = sub.add_parser("evc", help="exact eternal vertex cover number")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=None, help="max game states")
    _add_common(p)
    p.set_defaults(fn=cmd_evc)

    p = sub.add_parser("spartan", help="decide evc == mvc with certificates")
    p.add_argument("file")
    p.add_argument("--method", choices=["auto", "fixpoint", "game"], default="auto")
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--cap", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(fn=cmd_spartan)

    p = sub.add_parser("konig", help="Koenig / bipartite / elementary flags")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(fn=cmd_konig)

    p = sub.add_parser("certify", help="necessary-condition battery for k guards")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("aux", help="print the defense graph for two covers")
    p.add_argument("file")
    p.add_argument("--cover-s", required=True, help="comma-separated labels")
    p.add_argument("--cover-t", required=True, help="comma-separated labels")
    _add_common(p)
    p.set_defaults(fn=cmd_aux)

    p = sub.add_parser("play", help="interactive attacker session")
    p.add_argument("file")
    p.add_argument("--guards", type=int, required=True)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("selftest", help="run the acceptance suites")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (GraphFormatError, ValidationError, PreconditionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        msg = f"analysis refused: {exc}"
        if exc.bracket:
            msg += f" (known bounds: {exc.bracket[0]}..{exc.bracket[1]})"
        print(msg, file=sys.stderr)
        return 1
    except IntegrityError as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except EvckitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
