"""Command-line front door.

Five subcommands: ``decide`` (satisfiability or validity of one formula),
``check-model`` (validate a model file against a profile and optionally
evaluate a formula in it), ``corpus`` (replay a verdict corpus), ``compare``
(one satisfiability verdict per profile, side by side) and ``oracle``
(bounded brute-force model search).

Exit codes follow one convention everywhere: 0 for a positive outcome
(satisfiable, valid, all checks pass, model found), 1 for a negative one,
2 for usage, parse or input-format errors.  Text output colors verdicts
when attached to a terminal unless ``DOXA_COLOR=0``; ``--output json``
prints stable machine-readable JSON with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import load_corpus, run_corpus
from .formula import Formula, render
from .models import (
    LogicProfile,
    ModelSystem,
    PROFILES_BY_STRENGTH,
    check_frame,
    check_model_set,
    evaluate,
    labeled_from_json_dict,
    model_from_json_dict,
    model_to_json_dict,
)
from .oracle import MAX_BUDGET_WORLDS, EnumerationBudget, sat_upto
from .parser import ParseError, format_parse_error, parse
from .tableau import (
    SatVerdict,
    UnsatVerdict,
    decide_sat,
    decide_valid,
    render_trace,
    verdict_to_json_dict,
)

_GREEN = "\x1b[32m"
_RED = "\x1b[31m"
_RESET = "\x1b[0m"


def _use_color() -> bool:
    return os.environ.get("DOXA_COLOR", "1") != "0" and sys.stdout.isatty()


def _verdict_word(word: str, positive: bool) -> str:
    if not _use_color():
        return word
    return f"{_GREEN if positive else _RED}{word}{_RESET}"


def _parse_formula(text: str) -> Formula | None:
    try:
        return parse(text)
    except ParseError as err:
        print(format_parse_error(text, err), file=sys.stderr)
        return None


def _dump_json(payload) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _render_model_text(model: ModelSystem) -> str:
    lines = [f"worlds: {model.worlds} (designated w{model.designated})"]
    for w in range(model.worlds):
        atoms = ", ".join(sorted(model.valuation[w])) or "-"
        lines.append(f"  w{w}: {atoms}")
    for agent in sorted(model.alternatives):
        pairs = ", ".join(
            f"w{u}->w{v}" for u, v in sorted(model.alternatives[agent])
        )
        lines.append(f"  alternatives[{agent}]: {pairs or '-'}")
    return "\n".join(lines)


# ----------------------------------------------------------------------
# subcommands

def cmd_decide(args: argparse.Namespace) -> int:
    f = _parse_formula(args.formula)
    if f is None:
        return 2
    profile = LogicProfile.from_name(args.profile)
    if args.mode == "sat":
        verdict = decide_sat(f, profile)
        positive = verdict.is_sat
        word = "SAT" if positive else "UNSAT"
    else:
        verdict = decide_valid(f, profile)
        positive = verdict.valid
        word = "VALID" if positive else "INVALID"
    if args.output == "json":
        _dump_json(verdict_to_json_dict(verdict))
    else:
        print(f"{_verdict_word(word, positive)}  {render(f)}  [{profile.value}]")
        if isinstance(verdict, UnsatVerdict):
            print(render_trace(verdict.trace))
        elif isinstance(verdict, SatVerdict):
            print(_render_model_text(verdict.model))
        elif verdict.valid:
            print(render_trace(verdict.trace))
        else:
            print(_render_model_text(verdict.countermodel))
    return 0 if positive else 1


def cmd_check_model(args: argparse.Namespace) -> int:
    try:
        raw = json.loads(Path(args.model).read_text("utf-8"))
    except OSError as err:
        print(f"error: cannot read {args.model}: {err}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as err:
        print(
            f"error: malformed JSON in {args.model}: {err.msg} "
            f"(line {err.lineno}, column {err.colno})",
            file=sys.stderr,
        )
        return 2
    profile = LogicProfile.from_name(args.profile)
    try:
        if isinstance(raw, dict) and "labels" in raw:
            labeled = labeled_from_json_dict(raw)
            model = labeled.model
            violations = check_model_set(labeled, profile)
        else:
            model = model_from_json_dict(raw)
            violations = check_frame(model, profile)
    except (ValueError, TypeError, ParseError) as err:
        print(f"error: invalid model in {args.model}: {err}", file=sys.stderr)
        return 2
    value: bool | None = None
    if args.formula is not None:
        f = _parse_formula(args.formula)
        if f is None:
            return 2
        value = evaluate(model, model.designated, f)
    if args.output == "json":
        _dump_json(
            {
                "violations": [
                    {
                        "kind": v.kind,
                        "worlds": list(v.worlds),
                        "formula": None if v.formula is None else render(v.formula),
                        "message": v.message,
                    }
                    for v in violations
                ],
                "formula_value": value,
            }
        )
    else:
        for v in violations:
            where = ", ".join(f"w{w}" for w in v.worlds)
            detail = f" {v.message}" if v.message else ""
            shown = f" [{render(v.formula)}]" if v.formula is not None else ""
            print(f"violation: {v.kind} at {where}{shown}{detail}")
        if not violations:
            print(f"ok: model satisfies the {profile.value} frame conditions")
        if value is not None:
            print("true" if value else "false")
    return 0 if not violations else 1


def cmd_corpus(args: argparse.Namespace) -> int:
    try:
        entries = load_corpus(args.path)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    result = run_corpus(entries)
    if args.output == "json":
        _dump_json(result.to_json_dict())
    else:
        width = max(len(row.entry.id) for row in result.rows)
        for row in result.rows:
            mark = _verdict_word("pass", True) if row.ok else _verdict_word("FAIL", False)
            print(
                f"{mark}  {row.entry.id:<{width}}  {row.entry.profile.value:<8}"
                f"  {row.entry.mode:<5}  expected {row.entry.expected},"
                f" got {row.actual}"
            )
        print(f"passed: {result.passed}  failed: {result.failed}")
    return 0 if result.failed == 0 else 1


def cmd_compare(args: argparse.Namespace) -> int:
    f = _parse_formula(args.formula)
    if f is None:
        return 2
    profiles = [LogicProfile.from_name(p.strip()) for p in args.profiles.split(",")]
    verdicts = {}
    for profile in profiles:
        verdicts[profile.value] = "sat" if decide_sat(f, profile).is_sat else "unsat"
    agree = len(set(verdicts.values())) == 1
    if args.output == "json":
        _dump_json({"formula": render(f), "verdicts": verdicts, "agree": agree})
    else:
        print(f"formula: {render(f)}")
        for profile in profiles:
            word = verdicts[profile.value]
            print(f"  {profile.value:<9} {_verdict_word(word.upper(), word == 'sat')}")
        if agree:
            print("all profiles agree")
        else:
            sat_in = sorted(p for p, v in verdicts.items() if v == "sat")
            unsat_in = sorted(p for p, v in verdicts.items() if v == "unsat")
            print(
                "profiles disagree: sat in "
                + ", ".join(sat_in)
                + "; unsat in "
                + ", ".join(unsat_in)
            )
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    f = _parse_formula(args.formula)
    if f is None:
        return 2
    if not 1 <= args.max_worlds <= MAX_BUDGET_WORLDS:
        print(
            f"error: --max-worlds must be between 1 and {MAX_BUDGET_WORLDS}",
            file=sys.stderr,
        )
        return 2
    profile = LogicProfile.from_name(args.profile)
    from .formula import agents, atoms

    budget = EnumerationBudget(
        max_worlds=args.max_worlds,
        atoms=tuple(sorted(atoms(f))),
        agents=tuple(sorted(a.name for a in agents(f))),
    )
    model = sat_upto(f, budget, profile)
    if args.output == "json":
        _dump_json(
            {
                "found": model is not None,
                "max_worlds": args.max_worlds,
                "model": None if model is None else model_to_json_dict(model),
            }
        )
    elif model is None:
        print(
            f"not-found up to {args.max_worlds} worlds"
            " (no model that small; this is not an unsatisfiability proof)"
        )
    else:
        print(f"found a model with {model.worlds} world(s)")
        print(_render_model_text(model))
    return 0 if model is not None else 1


# ----------------------------------------------------------------------
# argument parsing

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doxa",
        description="Decide belief-logic formulas, check models, and run corpora.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--profile",
        default="hstar",
        choices=[p.value for p in sorted(LogicProfile, key=lambda p: p.value)],
        help="logic profile (default: hstar)",
    )
    common.add_argument(
        "--output",
        default="text",
        choices=["text", "json"],
        help="report format (default: text)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_decide = sub.add_parser(
        "decide", parents=[common], help="decide satisfiability or validity"
    )
    p_decide.add_argument("formula")
    p_decide.add_argument(
        "--mode", default="sat", choices=["sat", "valid"], help="decision mode"
    )
    p_decide.set_defaults(func=cmd_decide)

    p_check = sub.add_parser(
        "check-model", parents=[common], help="validate a model JSON file"
    )
    p_check.add_argument("model", help="path to a model JSON file")
    p_check.add_argument(
        "--formula", default=None, help="evaluate this formula at the designated world"
    )
    p_check.set_defaults(func=cmd_check_model)

    p_corpus = sub.add_parser(
        "corpus", parents=[common], help="replay a verdict corpus"
    )
    p_corpus.add_argument(
        "path", nargs="?", default=None, help="corpus JSONL file (default: bundled)"
    )
    p_corpus.set_defaults(func=cmd_corpus)

    p_compare = sub.add_parser(
        "compare", parents=[common], help="compare satisfiability across profiles"
    )
    p_compare.add_argument("formula")
    p_compare.add_argument(
        "--profiles",
        default=",".join(p.value for p in PROFILES_BY_STRENGTH),
        help="comma-separated profiles (default: all, strongest first)",
    )
    p_compare.set_defaults(func=cmd_compare)

    p_oracle = sub.add_parser(
        "oracle", parents=[common], help="bounded brute-force model search"
    )
    p_oracle.add_argument("formula")
    p_oracle.add_argument(
        "--max-worlds", type=int, default=4, help="world budget, at most 5"
    )
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
