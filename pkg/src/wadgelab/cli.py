"""Command-line front end.

Exit codes: 0 = yes / success, 1 = no / verification failed, 2 = error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import automata
from .automata import format_rational
from .bourgain import analyse, rank_chain, rank_report, stages_dot
from .catalog import FAMILIES, catalog
from .errors import ParseError, StableViolation, WadgeLabError
from .games import MealyStrategy, to_dot
from .realfun import FunctionAutomaton, ThresholdPair, m_reducible
from .selfcheck import replay_job, run_all
from .wadge import (
    LIPSCHITZ,
    WADGE,
    IndexedFamily,
    TwoBotPair,
    decompose,
    leq_w,
    m_reduction,
    pair_leq,
    separate_closed,
    solved_game,
)

FAMILY_ALIASES = {"sigma": "sigma_complete", "pi": "pi_complete"}


# -- loading ---------------------------------------------------------------------------


def _read(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _object(doc, where: str):
    try:
        if isinstance(doc, dict) and "components" in doc:
            comps = doc["components"]
            if not isinstance(comps, list):
                raise ParseError("field 'components' must be a list")
            return IndexedFamily(tuple(_object(c, f"{where}.components[{i}]") for i, c in enumerate(comps)))
        if isinstance(doc, dict) and "zero_part" in doc:
            if set(doc) != {"zero_part", "one_part"}:
                raise ParseError("a pair holds exactly 'zero_part' and 'one_part'")
            return TwoBotPair(automata.from_dict(doc["zero_part"]), automata.from_dict(doc["one_part"]))
        return automata.from_dict(doc)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def load_any(path):
    """An automaton, a pair or a family, depending on the document's shape."""
    return _object(_read(path), str(path))


def load_set(path) -> automata.OmegaAutomaton:
    obj = load_any(path)
    if not isinstance(obj, automata.OmegaAutomaton) or not obj.is_parity:
        raise ParseError(f"{path}: expected a parity automaton")
    return obj


def load_pair(path) -> TwoBotPair:
    obj = load_any(path)
    if isinstance(obj, TwoBotPair):
        return obj
    if isinstance(obj, automata.OmegaAutomaton) and obj.is_parity:
        return TwoBotPair.of_set(obj)
    raise ParseError(f"{path}: expected a pair or a parity automaton")


def load_family(path) -> IndexedFamily:
    obj = load_any(path)
    if isinstance(obj, IndexedFamily):
        return obj
    if isinstance(obj, automata.OmegaAutomaton):
        obj = TwoBotPair.of_set(obj)
    return decompose(obj)


def load_function(path) -> FunctionAutomaton:
    obj = load_any(path)
    if not isinstance(obj, automata.OmegaAutomaton) or obj.is_parity:
        raise ParseError(f"{path}: expected a weak-output automaton")
    return FunctionAutomaton(obj)


def pair_to_dict(p: TwoBotPair) -> dict:
    return {"zero_part": automata.to_dict(p.zero_part), "one_part": automata.to_dict(p.one_part)}


def _emit(doc, out=None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- commands -------------------------------------------------------------------------------


def _pair_doc(t: ThresholdPair) -> dict:
    return {"p": format_rational(t.p), "q": format_rational(t.q)}


def cmd_cmp(args) -> int:
    mode = args.mode
    if mode in (WADGE, LIPSCHITZ):
        verdict = leq_w(load_set(args.left), load_set(args.right), mode)
        doc = {"verdict": verdict.holds, "certificate": verdict.certificate.to_dict()}
    elif mode == "pair":
        verdict = pair_leq(load_pair(args.left), load_pair(args.right))
        doc = {"verdict": verdict.holds, "certificate": verdict.certificate.to_dict()}
    elif mode == "m":
        wit = m_reduction(load_family(args.left), load_family(args.right))
        doc = {"verdict": wit is not None}
        if wit is not None:
            doc["certificate"] = [
                {"component": n, "target": m, "strategy": s.to_dict()} for n, (m, s) in sorted(wit.items())
            ]
    else:
        verdict = m_reducible(load_function(args.left), load_function(args.right))
        doc = {"verdict": verdict.holds}
        if verdict.holds:
            doc["certificate"] = [
                {**_pair_doc(t), "target": _pair_doc(s), "strategy": strat.to_dict()}
                for t, (s, strat) in verdict.certificate.items()
            ]
        else:
            doc["failing_pair"] = _pair_doc(verdict.failing)
    if args.dot:
        if mode == "m" or mode == "mreal":
            raise ParseError("--dot is available for the wadge, lipschitz and pair modes")
        if mode == "pair":
            x, y = load_pair(args.left), load_pair(args.right)
            game = solved_game([x.zero_part, x.one_part], [y.zero_part, y.one_part], "pair", WADGE)
        else:
            game = solved_game([load_set(args.left)], [load_set(args.right)], "set", mode)
        Path(args.dot).write_text(to_dot(game.arena, game.solution) + "\n")
    _emit(doc, args.output)
    return 0 if doc["verdict"] else 1


def _threshold(args) -> ThresholdPair | None:
    if args.pair is None:
        return None
    return ThresholdPair.of(automata.parse_rational(args.pair[0]), automata.parse_rational(args.pair[1]))


def cmd_rank(args) -> int:
    f = load_function(args.function)
    t = _threshold(args)
    if t is not None:
        chain = rank_chain(f, t)
        doc = {**_pair_doc(t), "rank": chain.rank, "stages": [automata.to_dict(s) for s in chain.stages]}
        if args.dot:
            Path(args.dot).write_text(stages_dot(chain) + "\n")
        _emit(doc, args.output)
        return 0
    _emit(rank_report(f, with_sep=not args.no_sep).to_dict(), args.output)
    return 0


def cmd_type(args) -> int:
    a = analyse(load_function(args.function))
    _emit({"alpha": a.alpha, "type": a.type.value, "achieving": [_pair_doc(t) for t in a.achieving]})
    return 0


def cmd_mrank(args) -> int:
    report = rank_report(load_function(args.function), with_sep=False)
    _emit({"alpha": report.alpha, "type": report.type.value, "m_rank": report.m_rank})
    return 0


def cmd_certify(args) -> int:
    if args.mode in (WADGE, LIPSCHITZ):
        x, y = load_set(args.left), load_set(args.right)
        verdict = leq_w(x, y, args.mode)
    elif args.mode == "pair":
        x, y = load_pair(args.left), load_pair(args.right)
        verdict = pair_leq(x, y)
    else:
        raise ParseError("certify supports the modes wadge, lipschitz and pair")
    if args.certificate:
        doc = _read(args.certificate)
        if isinstance(doc, dict) and "certificate" in doc:
            doc = doc["certificate"]
        try:
            strategy = MealyStrategy.from_dict(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{args.certificate}: malformed certificate ({exc})") from None
    elif verdict.holds:
        strategy = verdict.certificate
    else:
        _emit({"verdict": False, "violations": None, "message": "no reduction exists"})
        return 1
    try:
        violations = replay_job((strategy, x, y, args.seed, args.samples))
    except KeyError as exc:
        # the transducer has no entry for a reachable situation
        _emit({"verdict": verdict.holds, "samples": args.samples, "violations": args.samples, "missing": str(exc)})
        return 1
    _emit({"verdict": verdict.holds, "samples": args.samples, "seed": args.seed, "violations": violations})
    return 0 if violations == 0 else 1


def cmd_catalog(args) -> int:
    family = FAMILY_ALIASES.get(args.family, args.family)
    entry = catalog(family, args.level, args.alphabet)
    _emit(automata.to_dict(entry.automaton), args.output)
    return 0


def cmd_separate(args) -> int:
    c = separate_closed(load_set(args.a), load_set(args.b), args.max_depth)
    _emit(automata.to_dict(c), args.output)
    return 0


def cmd_selfcheck(args) -> int:
    results = run_all(seed=args.seed, jobs=args.jobs, report=lambda r: print(r.line(), flush=True))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


# -- argument parsing -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for every random choice (default 0)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for independent replays")
    parser = argparse.ArgumentParser(
        prog="wadgelab", description="Wadge-style reducibility and Bourgain ranks", parents=[common]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cmp", help="decide reducibility between two files", parents=[common])
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--mode", choices=[WADGE, LIPSCHITZ, "pair", "m", "mreal"], default=WADGE)
    p.add_argument("--dot", help="write the solved game arena as DOT")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_cmp)

    for name, func, text in (
        ("rank", cmd_rank, "full rank report of a function automaton"),
        ("type", cmd_type, "Bourgain rank and sided type"),
        ("mrank", cmd_mrank, "m-rank from rank and type"),
    ):
        p = sub.add_parser(name, help=text, parents=[common])
        p.add_argument("function")
        if name == "rank":
            p.add_argument("--pair", nargs=2, metavar=("P", "Q"), help="restrict to one threshold pair, e.g. 1/3 2/3")
            p.add_argument("--dot", help="write the derivative stages of --pair as DOT")
            p.add_argument("--no-sep", action="store_true", help="skip the game-based separation rank")
            p.add_argument("-o", "--output")
        p.set_defaults(func=func)

    p = sub.add_parser("certify", help="replay a reduction strategy on seeded lassos", parents=[common])
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--mode", choices=[WADGE, LIPSCHITZ, "pair"], default=WADGE)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--certificate", help="strategy JSON (as printed by cmp) to replay instead of solving")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("catalog", help="write a catalog automaton", parents=[common])
    p.add_argument("--family", required=True, choices=sorted(set(FAMILIES) | set(FAMILY_ALIASES)))
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("separate", help="clopen separator of two disjoint closed sets", parents=[common])
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-depth", type=int, default=20)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("selfcheck", help="run the acceptance suite", parents=[common])
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed = getattr(args, "seed", 0)
    args.jobs = getattr(args, "jobs", 1)
    try:
        return args.func(args)
    except StableViolation as exc:
        _emit({"error": "StableViolation", "message": str(exc), "violation": exc.violation.to_dict()})
        return 2
    except WadgeLabError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 2
    except (OSError, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 2


if __name__ == "__main__":
    sys.exit(main())
