"""Command-line front end: check | decompose | synthesize | simulate | fit | limit.

Inputs and outputs are the JSON documents of :mod:`lucekit.documents`.
Exit codes are a stable contract: 0 when the command succeeds and any
checked property holds, 1 on a semantic failure (an axiom fails, a
decomposition or fit is blocked, a limit has not converged), 2 on usage or
input-format errors. All randomness is governed by ``--seed``, and repeated
invocations with the same arguments produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from .axioms import (
    Axiom,
    AxiomReport,
    check_choice_axiom,
    check_full_support,
    check_odds_independence,
    check_positivity,
    check_product_rule,
    check_renyi_conditioning,
    check_set_choice_axiom,
    check_set_intersection_rule,
    check_warp,
)
from .core import (
    EXACT,
    FLOAT,
    ChoiceCorrespondence,
    ChoiceFamily,
    RandomChoiceRule,
    Universe,
    support_correspondence,
)
from .decompose import decompose as run_decompose
from .documents import (
    dumps_document,
    encode_axiom_report,
    loads_document,
    read_document,
    to_document,
)
from .errors import (
    ChoiceAxiomError,
    DocumentError,
    FamilySizeError,
    LucekitError,
    NotRationalError,
)
from .estimate import ChoiceDataset, fit as run_fit
from .synthesize import (
    LuceWeights,
    general_luce_rule,
    general_luce_rule_from_utility,
    limit_check,
    luce_rule,
)

_RULE_CHECKERS: dict[str, Callable[..., AxiomReport]] = {
    Axiom.CHOICE_AXIOM.value: check_choice_axiom,
    Axiom.ODDS_INDEPENDENCE.value: check_odds_independence,
    Axiom.PRODUCT_RULE.value: check_product_rule,
    Axiom.SET_CHOICE_AXIOM.value: check_set_choice_axiom,
    Axiom.SET_INTERSECTION_RULE.value: check_set_intersection_rule,
    Axiom.POSITIVITY.value: check_positivity,
    Axiom.FULL_SUPPORT.value: check_full_support,
    Axiom.RENYI_CONDITIONING.value: check_renyi_conditioning,
}
_ALL_AXIOMS = tuple(list(_RULE_CHECKERS) + [Axiom.WARP.value])


def _emit(args: argparse.Namespace, obj: Any, *, kind: str | None = None) -> None:
    text = dumps_document(obj, kind=kind)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_error(args: argparse.Namespace, error: str, exc: LucekitError) -> int:
    payload: dict[str, Any] = {"type": "error", "error": error, "message": str(exc)}
    report = getattr(exc, "report", None)
    if report is not None:
        payload["report"] = encode_axiom_report(report)
    _emit(args, payload, kind="report")
    return 1


def _load_typed(path: str, expected: type, what: str) -> Any:
    obj = read_document(path)
    if not isinstance(obj, expected):
        raise DocumentError(f"{path} is not a {what} document")
    return obj


def _load_family(spec: str, universe: Universe) -> ChoiceFamily:
    if spec == "all":
        return ChoiceFamily.of_all_subsets(universe)
    if spec == "pairs":
        return ChoiceFamily.of_pairs(universe)
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read family from {spec}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{spec} is not valid JSON: {exc}") from exc
    if isinstance(raw, dict):
        obj = loads_document(text)
        family = getattr(obj, "family", None)
        if isinstance(family, ChoiceFamily):
            if family.universe != universe:
                raise DocumentError(f"family in {spec} is over a different universe")
            return family
        raise DocumentError(f"{spec} carries no choice-set family")
    if isinstance(raw, list):
        try:
            from .core import ChoiceSet

            return ChoiceFamily(universe, [ChoiceSet(s) for s in raw])
        except (ValueError, TypeError) as exc:
            raise DocumentError(f"bad family list in {spec}: {exc}") from exc
    raise DocumentError(f"{spec} must hold a document or a JSON list of sets")


def _cmd_check(args: argparse.Namespace) -> int:
    rule = _load_typed(args.rule, RandomChoiceRule, "rule")
    if args.mode == FLOAT and rule.mode == EXACT:
        rule = rule.as_float(args.eps)
    elif args.mode == EXACT and rule.mode == FLOAT:
        raise DocumentError("a float rule cannot be promoted to exact mode")
    names = list(_ALL_AXIOMS) if not args.axioms else args.axioms.split(",")
    reports: list[AxiomReport] = []
    for name in names:
        name = name.strip()
        if name == Axiom.WARP.value:
            reports.append(check_warp(support_correspondence(rule)))
        elif name in _RULE_CHECKERS:
            reports.append(_RULE_CHECKERS[name](rule, eps=args.eps))
        else:
            raise DocumentError(
                f"unknown axiom {name!r}; choose from {', '.join(_ALL_AXIOMS)}"
            )
    all_hold = all(r.holds for r in reports)
    payload = {
        "type": "axioms",
        "mode": rule.mode,
        "eps": rule.eps if args.eps is None else args.eps,
        "all_hold": all_hold,
        "reports": [encode_axiom_report(r) for r in reports],
    }
    _emit(args, payload, kind="report")
    return 0 if all_hold else 1


def _cmd_decompose(args: argparse.Namespace) -> int:
    rule = _load_typed(args.rule, RandomChoiceRule, "rule")
    report = check_choice_axiom(rule)
    if not report.holds:
        return _emit_error(
            args,
            "choice-axiom",
            ChoiceAxiomError("rule fails the choice axiom", report=report),
        )
    try:
        dec = run_decompose(rule)
    except LucekitError as exc:
        return _emit_error(args, _error_slug(exc), exc)
    _emit(args, dec)
    return 0


def _error_slug(exc: LucekitError) -> str:
    slug = type(exc).__name__
    if slug.endswith("Error"):
        slug = slug[: -len("Error")]
    out = []
    for ch in slug:
        if ch.isupper() and out:
            out.append("-")
        out.append(ch.lower())
    return "".join(out)


def _cmd_synthesize(args: argparse.Namespace) -> int:
    weights = _load_typed(args.weights, LuceWeights, "weights")
    try:
        if args.gamma:
            gamma = _load_typed(args.gamma, ChoiceCorrespondence, "correspondence")
            rule = general_luce_rule(gamma, weights)
        elif args.utility:
            u = _load_typed(args.utility, dict, "utility")
            family = _load_family(args.family, weights.universe)
            rule = general_luce_rule_from_utility(u, weights, family)
        else:
            family = _load_family(args.family, weights.universe)
            rule = luce_rule(weights, family)
    except NotRationalError as exc:
        return _emit_error(args, "not-rational", exc)
    if args.mode == FLOAT and rule.mode == EXACT:
        rule = rule.as_float()
    _emit(args, rule)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    # numpy/numba only load for simulation, keeping the other commands quick.
    from .rum import GumbelLuceSampler, IndependentRumSampler, LexSampler, empirical_rule
    from .core import WeakOrder

    weights = _load_typed(args.weights, LuceWeights, "weights")
    universe = weights.universe
    if args.sampler in ("independent", "lex"):
        if not args.utility:
            raise DocumentError(f"--sampler {args.sampler} needs --utility")
        u = _load_typed(args.utility, dict, "utility")
    if args.sampler == "gumbel":
        sampler = GumbelLuceSampler(weights, seed=args.seed)
    elif args.sampler == "independent":
        sampler = IndependentRumSampler(u, weights, seed=args.seed)
    else:
        base = GumbelLuceSampler(weights, seed=args.seed)
        try:
            order = WeakOrder.from_utility(universe, {k: float(x) for k, x in u.items()})
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
        sampler = LexSampler(order, base)
    family = _load_family(args.family, universe)
    if args.draws < 1:
        raise DocumentError("--draws must be at least 1")
    emp = empirical_rule(sampler, family, args.draws)
    _emit(args, ChoiceDataset(universe, emp.counts))
    return 0


def _cmd_fit(args: argparse.Namespace) -> int:
    data = _load_typed(args.dataset, ChoiceDataset, "dataset")
    result = run_fit(data, pseudo_count=args.pseudo_count)
    _emit(args, result)
    return 0 if result.alpha_hat is not None else 1


def _cmd_limit(args: argparse.Namespace) -> int:
    weights = _load_typed(args.weights, LuceWeights, "weights")
    u = _load_typed(args.utility, dict, "utility")
    try:
        schedule = [float(x) for x in args.schedule.split(",") if x.strip()]
    except ValueError as exc:
        raise DocumentError(f"bad --schedule: {exc}") from exc
    family = _load_family(args.family, weights.universe)
    try:
        report = limit_check(u, weights, schedule, family, tolerance=args.tolerance)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    _emit(args, report)
    return 0 if report.converged else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lucekit",
        description="Verify, decompose, synthesize, simulate, and fit "
        "selective-Luce choice rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write the output document here instead of stdout")

    p = sub.add_parser("check", help="run axiom checkers on a rule document")
    p.add_argument("rule", help="rule document path")
    p.add_argument(
        "--axioms",
        help="comma-separated subset of: " + ", ".join(_ALL_AXIOMS),
    )
    p.add_argument("--mode", choices=(EXACT, FLOAT), help="coerce the rule's mode")
    p.add_argument("--eps", type=float, help="float-mode comparison tolerance")
    add_out(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("decompose", help="recover (gamma, classes, v, alpha) from a rule")
    p.add_argument("rule", help="rule document path")
    add_out(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("synthesize", help="build a rule from weights and a selection")
    p.add_argument("--weights", required=True, help="weights document path")
    p.add_argument("--gamma", help="correspondence document path")
    p.add_argument("--utility", help="utility document path (argmax selection)")
    p.add_argument(
        "--family",
        default="all",
        help="'all', 'pairs', or a path holding a family (ignored with --gamma)",
    )
    p.add_argument("--mode", choices=(EXACT, FLOAT), help="force output mode")
    add_out(p)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("simulate", help="tally top choices from a preference sampler")
    p.add_argument(
        "--sampler",
        choices=("gumbel", "independent", "lex"),
        default="gumbel",
        help="gumbel: logit noise around weights; independent: utility plus "
        "bounded noise; lex: utility order refined by gumbel draws",
    )
    p.add_argument("--weights", required=True, help="weights document path")
    p.add_argument("--utility", help="utility document path")
    p.add_argument("--draws", type=int, required=True, help="draws per choice set")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--family", default="all", help="'all', 'pairs', or a path")
    add_out(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fit", help="estimate support and weights from counts")
    p.add_argument("dataset", help="dataset document path")
    p.add_argument(
        "--pseudo-count",
        type=float,
        default=0.0,
        help="additive smoothing inside estimated supports (default 0)",
    )
    add_out(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("limit", help="measure smoothed-rule convergence as noise shrinks")
    p.add_argument("--utility", required=True, help="utility document path")
    p.add_argument("--weights", required=True, help="weights document path")
    p.add_argument(
        "--schedule",
        default="1,0.5,0.1,0.05",
        help="comma-separated strictly decreasing noise levels",
    )
    p.add_argument("--tolerance", type=float, default=1e-6, help="convergence target")
    p.add_argument("--family", default="all", help="'all', 'pairs', or a path")
    add_out(p)
    p.set_defaults(func=_cmd_limit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DocumentError, FamilySizeError) as exc:
        print(f"lucekit: {exc}", file=sys.stderr)
        return 2
    except LucekitError as exc:
        print(f"lucekit: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"lucekit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
