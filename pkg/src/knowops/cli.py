"""Command-line interface.

Exit status: 0 when every requested check holds, 1 when any fails, 2 on
usage, file or schema errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence, TextIO

from . import __version__
from .dynamics import validate_refinement, verify_learning_claims
from .enumeration import (
    EnumerationStats,
    expected_tm_count,
    parse_check,
    sampled_check,
    universal_check,
)
from .errors import KnowOpsError
from .events import Event
from .formula import (
    Model,
    eval_assertion,
    eval_expr,
    format_assertion,
    parse_assertion,
    parse_expr,
)
from .modelio import event_to_json, load_model, load_scenario, operator_model
from .operator import (
    DEFAULT_CAP,
    TRUTH_AND_MONOTONICITY,
    Axiom,
    Claim,
    check_axioms,
    claim_holds,
    verify_claim,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _stage_name(stage: int | None) -> str:
    return "K" if stage is None else f"K{stage}"


def _ev(event: Event) -> list[str]:
    return event_to_json(event)


def _trace_json(trace: dict[str, Event]) -> dict[str, list[str]]:
    return {name: _ev(e) for name, e in trace.items()}


def _witness_json(w) -> dict[str, Any]:
    out = {"events": [_ev(e) for e in w.events], "violation": _ev(w.violation)}
    if w.note:
        out["condition"] = w.note
    return out


def _sorted_stages(model: Model):
    return sorted(model.operators.items(), key=lambda p: -1 if p[0] is None else p[0])


# -- check ---------------------------------------------------------------------------


def _run_assertions(model: Model, texts: Sequence[str]) -> list[dict[str, Any]]:
    results = []
    for text in texts:
        a = parse_assertion(text)
        r = eval_assertion(a, model)
        results.append({
            "assertion": format_assertion(a),
            "holds": r.holds,
            "witness": r.witness,
            "values": [_ev(v) for v in r.values],
        })
    return results


def _claim_on_operator(k, claim: Claim, cap: int) -> dict[str, Any]:
    if claim is not Claim.REFINEMENT_CHAINS:
        report = verify_claim(k, claim, cap=cap)
        return {
            "claim": claim.value,
            "applicable": report.applicable,
            "holds": report.holds,
            "missing": [a.value for a in report.missing],
            "witnesses": [_witness_json(w) for w in report.witnesses],
            "trace": _trace_json(report.trace),
        }
    missing = sorted(a.value for a in claim.requires if not k.satisfies(a))
    if missing:
        return {"claim": claim.value, "applicable": False, "holds": None, "missing": missing,
                "witnesses": [], "trace": {}}
    witnesses = []
    for e in range(k.space.full_mask):
        if not claim_holds(k, claim, e) and len(witnesses) < cap:
            report = verify_claim(k, claim, Event(k.space, e), cap=cap)
            witnesses.extend(_witness_json(w) for w in report.witnesses)
    return {"claim": claim.value, "applicable": True, "holds": not witnesses, "missing": [],
            "witnesses": witnesses[:cap], "trace": {}}


def cmd_check(args) -> tuple[int, dict[str, Any]]:
    model = load_model(args.model)
    cap = args.max_counterexamples
    operators = []
    ok = True
    claims = [Claim.parse(c) for c in _split(args.claims)]
    for stage, k in _sorted_stages(model):
        reports = check_axioms(k, cap=cap)
        entry = {
            "operator": _stage_name(stage),
            "axioms": {
                a.value: {"holds": r.holds, "counterexamples": [_witness_json(w) for w in r.counterexamples]}
                for a, r in reports.items()
            },
            "claims": [_claim_on_operator(k, c, cap) for c in claims],
        }
        for c in entry["claims"]:
            if c["applicable"] and not c["holds"]:
                ok = False
        operators.append(entry)
    texts = args.assertions if args.assertions else list(model.assertions)
    assertions = _run_assertions(model, texts)
    ok = ok and all(a["holds"] for a in assertions)
    doc = {
        "command": "check",
        "model": str(args.model),
        "states": list(model.space.names),
        "operators": operators,
        "assertions": assertions,
        "ok": ok,
    }
    return (EXIT_OK if ok else EXIT_FAIL), doc


def _text_check(doc, out: TextIO) -> None:
    out.write(f"model {doc['model']}: states {{{','.join(doc['states'])}}}\n")
    for op in doc["operators"]:
        held = [a for a, r in op["axioms"].items() if r["holds"]]
        failed = [a for a, r in op["axioms"].items() if not r["holds"]]
        out.write(f"  {op['operator']}: axioms hold: {', '.join(held) or '-'}; "
                  f"fail: {', '.join(failed) or '-'}\n")
        for a in failed:
            w = op["axioms"][a]["counterexamples"][0]
            out.write(f"    {a} counterexample: {_fmt_witness(w)}\n")
        for c in op["claims"]:
            out.write(f"    claim {c['claim']}: {_verdict(c)}\n")
            for name, labels in c["trace"].items():
                out.write(f"      {name} = {_fmt(labels)}\n")
            for w in c["witnesses"]:
                out.write(f"      counterexample: {_fmt_witness(w)}\n")
    for a in doc["assertions"]:
        status = "PASS" if a["holds"] else "FAIL"
        line = f"  [{status}] {a['assertion']}"
        if not a["holds"] and a["witness"] is not None:
            line += f"  (witness state {a['witness']})"
        out.write(line + "\n")
        if not a["holds"]:
            out.write(f"         values: {', '.join(_fmt(v) for v in a['values'])}\n")
    out.write("ok\n" if doc["ok"] else "FAILED\n")


# -- eval ------------------------------------------------------------------------------


def cmd_eval(args) -> tuple[int, dict[str, Any]]:
    model = load_model(args.model)
    results = []
    ok = True
    for text in args.expressions:
        try:
            ast = parse_expr(text)
        except KnowOpsError:
            a = parse_assertion(text)
            r = eval_assertion(a, model)
            ok = ok and r.holds
            results.append({"assertion": format_assertion(a), "holds": r.holds, "witness": r.witness,
                            "values": [_ev(v) for v in r.values]})
            continue
        results.append({"expression": text, "value": _ev(eval_expr(ast, model))})
    doc = {"command": "eval", "model": str(args.model), "results": results, "ok": ok}
    return (EXIT_OK if ok else EXIT_FAIL), doc


def _text_eval(doc, out: TextIO) -> None:
    for r in doc["results"]:
        if "expression" in r:
            out.write(f"{r['expression']} = {_fmt(r['value'])}\n")
        else:
            status = "PASS" if r["holds"] else "FAIL"
            extra = f" (witness state {r['witness']})" if r["witness"] else ""
            out.write(f"[{status}] {r['assertion']}{extra}\n")


# -- enumerate ---------------------------------------------------------------------------


def _split(text: str | None) -> list[str]:
    if not text:
        return []
    return [p.strip() for p in text.split(",") if p.strip()]


def _stats_json(stats: EnumerationStats, count_only: bool, cap: int) -> dict[str, Any]:
    checks = {}
    for check, tally in stats.results.items():
        entry = {
            "kind": "axiom" if isinstance(check, Axiom) else "claim",
            "pass": tally.passed,
            "fail": tally.failed,
            "not_applicable": tally.not_applicable,
            "forced_failures": tally.forced_failures,
            "universal": tally.universal,
        }
        if not count_only:
            entry["counterexamples"] = [
                {
                    "model": operator_model(rec.operator),
                    "applicable": rec.applicable,
                    "witnesses": [_witness_json(w) for w in rec.witnesses],
                    "trace": _trace_json(rec.trace),
                }
                for rec in tally.counterexamples[:cap]
            ]
        checks[check.value] = entry
    return checks


def cmd_enumerate(args) -> tuple[int, dict[str, Any]]:
    n = args.states
    axioms = frozenset(Axiom.parse(a) for a in _split(args.axioms))
    checks = [parse_check(c) for c in _split(args.claims)]
    cap = args.max_counterexamples
    if args.samples:
        if axioms != TRUTH_AND_MONOTONICITY:
            raise _UsageError("--samples draws Truth+Monotone operators; use --axioms truth,mono")
        stats = sampled_check(n, checks, args.samples, args.seed, cap=cap)
    else:
        stats = universal_check(
            n, checks, axioms, override=args.override_large, cap=cap, workers=args.workers
        )
    doc = {
        "command": "enumerate",
        "states": n,
        "axioms": sorted(a.value for a in axioms),
        "source": stats.source,
        "operators": stats.operators,
        "checks": _stats_json(stats, args.count_only, cap),
    }
    if stats.source == "neighborhoods" and axioms == TRUTH_AND_MONOTONICITY:
        doc["expected_operators"] = expected_tm_count(n)
    doc["ok"] = stats.universal
    return (EXIT_OK if stats.universal else EXIT_FAIL), doc


def _text_enumerate(doc, out: TextIO) -> None:
    axioms = ",".join(doc["axioms"]) or "none"
    out.write(f"{doc['operators']} operators (n={doc['states']}, axioms {axioms}, {doc['source']})\n")
    if "expected_operators" in doc:
        out.write(f"  expected D(n-1)^n = {doc['expected_operators']}\n")
    for name, c in doc["checks"].items():
        line = f"  {name}: {c['pass']} pass, {c['fail']} fail"
        if c["not_applicable"]:
            line += f", {c['not_applicable']} not applicable ({c['forced_failures']} break the conclusion)"
        out.write(line + "\n")
        for rec in c.get("counterexamples", []):
            table = rec["model"]["operator"]["table"]
            out.write(f"    counterexample: table {' '.join(_fmt(t) for t in table)}\n")
            for name_, labels in rec["trace"].items():
                out.write(f"      {name_} = {_fmt(labels)}\n")
    out.write("ok\n" if doc["ok"] else "FAILED\n")


# -- simulate -------------------------------------------------------------------------------


def cmd_simulate(args) -> tuple[int, dict[str, Any]]:
    loaded = load_scenario(args.scenario)
    scenario, model = loaded.scenario, loaded.model
    cap = args.max_counterexamples
    refinement = validate_refinement(scenario, cap=cap)
    ok = refinement.valid
    stages = []
    for s, k in enumerate(scenario.stages):
        stages.append({
            "stage": f"K{s}",
            "axioms": {a.value: r.holds for a, r in check_axioms(k, cap=1).items()},
            "K Omega": _ev(k.k_omega),
            "~K Omega": _ev(~k.k_omega),
            "K ~K Omega": _ev(k(~k.k_omega)),
        })
    learning = []
    for s, facts in enumerate(scenario.facts):
        k0, k1 = scenario.stages[s], scenario.stages[s + 1]
        for fact in facts:
            report = verify_learning_claims(k0, k1, fact.event)
            if report.applicable and not report.holds:
                ok = False
            learning.append({
                "transition": f"K{s} -> K{s + 1}",
                "event": _ev(fact.event),
                "knowledge": _ev(fact.knowledge),
                "applicable": report.applicable,
                "reason": report.reason,
                "holds": report.holds,
                "checks": {c.name: c.holds for c in report.checks},
                "trace": _trace_json(report.trace),
            })
    assertions = _run_assertions(model, list(model.assertions))
    ok = ok and all(a["holds"] for a in assertions)
    doc = {
        "command": "simulate",
        "scenario": str(args.scenario),
        "states": list(scenario.space.names),
        "stages": stages,
        "refinement": {
            "valid": refinement.valid,
            "witnesses": [
                {"stage": s, "event": _ev(e), "lost": _ev(lost)} for s, e, lost in refinement.witnesses
            ],
        },
        "learning": learning,
        "assertions": assertions,
        "ok": ok,
    }
    return (EXIT_OK if ok else EXIT_FAIL), doc


def _text_simulate(doc, out: TextIO) -> None:
    out.write(f"scenario {doc['scenario']}: states {{{','.join(doc['states'])}}}\n")
    for st in doc["stages"]:
        out.write(f"  {st['stage']}: K Omega = {_fmt(st['K Omega'])}, ~K Omega = {_fmt(st['~K Omega'])}, "
                  f"K ~K Omega = {_fmt(st['K ~K Omega'])}\n")
    ref = doc["refinement"]
    out.write(f"  refinement: {'valid' if ref['valid'] else 'INVALID'}\n")
    for w in ref["witnesses"]:
        out.write(f"    stage {w['stage']}: event {_fmt(w['event'])} loses {_fmt(w['lost'])}\n")
    for item in doc["learning"]:
        head = f"  {item['transition']} learning {_fmt(item['event'])}"
        if not item["applicable"]:
            out.write(f"{head}: not applicable ({item['reason']})\n")
            continue
        out.write(f"{head}: {'holds' if item['holds'] else 'FAILS'}\n")
        for name, held in item["checks"].items():
            out.write(f"    [{'PASS' if held else 'FAIL'}] {name}\n")
        for name, labels in item["trace"].items():
            out.write(f"      {name} = {_fmt(labels)}\n")
    for a in doc["assertions"]:
        status = "PASS" if a["holds"] else "FAIL"
        extra = f"  (witness state {a['witness']})" if not a["holds"] and a["witness"] else ""
        out.write(f"  [{status}] {a['assertion']}{extra}\n")
    out.write("ok\n" if doc["ok"] else "FAILED\n")


# -- plumbing -----------------------------------------------------------------------------------


def _fmt(labels: list[str]) -> str:
    return "{" + ",".join(labels) + "}"


def _fmt_witness(w: dict[str, Any]) -> str:
    events = ", ".join(_fmt(e) for e in w["events"])
    cond = f" [{w['condition']}]" if "condition" in w else ""
    return f"({events}) at {_fmt(w['violation'])}{cond}"


def _verdict(c: dict[str, Any]) -> str:
    if not c["applicable"]:
        return f"not applicable (missing {', '.join(c['missing'])})"
    return "holds" if c["holds"] else "FAILS"


def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # flags are accepted before or after the subcommand; only the top
        # level sets defaults so a later parser cannot overwrite them
        p = _ArgumentParser(add_help=False)
        default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--format", choices=("text", "json"), default=default("text"))
        p.add_argument("--seed", type=int, default=default(0), help="base seed for sampling")
        p.add_argument("--max-counterexamples", type=int, default=default(DEFAULT_CAP), metavar="K")
        return p

    common = global_flags(suppress=True)
    parser = _ArgumentParser(
        prog="knowops", description="Finite-model workbench for knowledge operators.",
        parents=[global_flags(suppress=False)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("check", parents=[common], help="check axioms, claims and assertions of a model")
    p.add_argument("model")
    p.add_argument("-a", "--assert", dest="assertions", action="append", metavar="ASSERTION",
                   help="assertion to check instead of the file's list (repeatable)")
    p.add_argument("--claims", default="", help="comma-separated claims to verify on each operator")
    p.set_defaults(run=cmd_check, render=_text_check)

    p = sub.add_parser("eval", parents=[common], help="evaluate expressions on a model")
    p.add_argument("model")
    p.add_argument("-e", "--expr", dest="expressions", action="append", required=True, metavar="EXPR")
    p.set_defaults(run=cmd_eval, render=_text_eval)

    p = sub.add_parser("enumerate", parents=[common], help="check claims over every operator")
    p.add_argument("--states", type=int, required=True, metavar="N")
    p.add_argument("--axioms", default="truth,mono")
    p.add_argument("--claims", default="thm3", help="claims and/or axioms, comma-separated")
    p.add_argument("--count-only", action="store_true", help="omit counterexample models")
    p.add_argument("--override-large", action="store_true",
                   help="allow brute-force table filtering at n=3")
    p.add_argument("--samples", type=int, default=0, metavar="COUNT",
                   help="check COUNT sampled operators (seeds seed..seed+COUNT-1) instead")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(run=cmd_enumerate, render=_text_enumerate)

    p = sub.add_parser("simulate", parents=[common], help="run a learning scenario")
    p.add_argument("scenario")
    p.set_defaults(run=cmd_simulate, render=_text_simulate)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        status, doc = args.run(args)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except (KnowOpsError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    if args.format == "json":
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        args.render(doc, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
