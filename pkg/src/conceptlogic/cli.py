"""Command-line interface.

Commands: ``concepts``, ``lattice``, ``eval``, ``valid``, ``consequence``,
``translate``, ``member``, ``check-proof``, ``verify``.  Results go to the
output stream and diagnostics to the error stream.  Exit codes: 0 when the
command succeeds and any checked property holds, 1 when a property fails,
2 on usage or parse errors, 3 when an exhaustive check refuses its budget.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .errors import BudgetExceededError, ConceptLogicError
from .formats import export_dot, load_context, structured_lines
from .lattices import ConceptKind, build_lattice, enumerate_concepts
from .logical import member_class
from .parser import parse_formula, print_formula
from .proofs import parse_proof_script
from .semantics import (
    DEFAULT_BUDGET,
    Model,
    Valuation,
    consequence_countermodel,
    context_to_frame,
    falsify,
    truth_set,
)
from .suites import suite_iso, suite_lattice, suite_translation, suite_yao
from .syntax import SORT1, SORT2, translate_rho, variables

EXIT_OK = 0
EXIT_PROPERTY_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_SORTS = {"1": SORT1, "2": SORT2}


@dataclass
class RunConfig:
    """Resolved invocation parameters shared by the command handlers."""

    command: str
    context_path: str | None = None
    kind: str | None = None
    cls: str | None = None
    side: str | None = None
    formula: str | None = None
    sort: str | None = None
    premises: list[str] = field(default_factory=list)
    conclusion: str | None = None
    assigns: list[str] = field(default_factory=list)
    script: str | None = None
    system: str | None = None
    suite: str = "all"
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    format: str = "text"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptlogic",
        description="Concept lattices and two-sorted modal logics over formal contexts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, context=True):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--format", choices=["text", "dot", "structured"], default="text"
        )
        if context:
            p.add_argument("context", help="context file (.cxt or .csv)")

    p = sub.add_parser("concepts", help="enumerate concepts of a context")
    p.add_argument("--kind", choices=["fc", "pc", "oc"], required=True)
    add_common(p)

    p = sub.add_parser("lattice", help="concept lattice with covering relation")
    p.add_argument("--kind", choices=["fc", "pc", "oc"], required=True)
    add_common(p)

    p = sub.add_parser("eval", help="truth set of a formula in a model")
    p.add_argument("--formula", required=True)
    p.add_argument("--sort", choices=["1", "2"], required=True)
    p.add_argument(
        "--assign",
        action="append",
        default=[],
        metavar="VAR=w1,w2",
        help="assign worlds to a variable (repeatable)",
    )
    add_common(p)

    p = sub.add_parser("valid", help="frame validity by exhaustive valuations")
    p.add_argument("--formula", required=True)
    p.add_argument("--sort", choices=["1", "2"], required=True)
    add_common(p)

    p = sub.add_parser("consequence", help="local semantic consequence on a frame")
    p.add_argument("--premise", action="append", default=[], dest="premises")
    p.add_argument("--conclusion", required=True)
    p.add_argument("--sort", choices=["1", "2"], required=True)
    add_common(p)

    p = sub.add_parser("translate", help="window dialect into diamond dialect")
    p.add_argument("--formula", required=True)
    p.add_argument("--sort", choices=["1", "2"], required=True)
    add_common(p, context=False)

    p = sub.add_parser("member", help="membership in a concept formula family")
    p.add_argument("--class", dest="cls", choices=["pc", "oc", "fc"], required=True)
    p.add_argument("--side", choices=["ext", "int"], required=True)
    p.add_argument("--formula", required=True)
    add_common(p)

    p = sub.add_parser("check-proof", help="check a proof script")
    p.add_argument("script", help="proof script file")
    p.add_argument("--system", choices=["K", "KB2", "KF"], default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("verify", help="run verification suites on a context")
    p.add_argument(
        "--suite",
        choices=["yao", "translation", "lattice", "iso", "all"],
        default="all",
    )
    add_common(p)
    return parser


def _set_names(subset, carrier) -> str:
    return "{" + ",".join(subset.members(carrier)) + "}"


def _concept_payload(ctx, concepts):
    return [
        {
            "extent": list(c.extent.members(ctx.objects)),
            "intent": list(c.intent.members(ctx.attributes)),
        }
        for c in concepts
    ]


def _emit_structured(out, payload: dict) -> None:
    for line in structured_lines("", payload):
        print(line.lstrip("."), file=out)


def _cmd_concepts(cfg: RunConfig, out) -> int:
    ctx = load_context(cfg.context_path)
    kind = ConceptKind(cfg.kind)
    concepts = enumerate_concepts(ctx, kind)
    if cfg.format == "structured":
        _emit_structured(out, {"kind": kind.value, "concepts": _concept_payload(ctx, concepts)})
    else:
        print(f"kind={kind.value} count={len(concepts)}", file=out)
        for i, c in enumerate(concepts):
            print(
                f"{i}: extent={_set_names(c.extent, ctx.objects)} "
                f"intent={_set_names(c.intent, ctx.attributes)}",
                file=out,
            )
    return EXIT_OK


def _cmd_lattice(cfg: RunConfig, out) -> int:
    ctx = load_context(cfg.context_path)
    kind = ConceptKind(cfg.kind)
    lattice = build_lattice(enumerate_concepts(ctx, kind), kind, ctx)
    if cfg.format == "dot":
        out.write(export_dot(lattice))
        return EXIT_OK
    if cfg.format == "structured":
        payload = {
            "kind": kind.value,
            "concepts": _concept_payload(ctx, lattice.concepts),
            "covers": [list(c) for c in lattice.covers()],
            "top": lattice.top,
            "bottom": lattice.bottom,
        }
        _emit_structured(out, payload)
        return EXIT_OK
    print(f"kind={kind.value} count={len(lattice)}", file=out)
    for i, c in enumerate(lattice.concepts):
        print(
            f"{i}: extent={_set_names(c.extent, ctx.objects)} "
            f"intent={_set_names(c.intent, ctx.attributes)}",
            file=out,
        )
    for low, high in lattice.covers():
        print(f"cover: {low} < {high}", file=out)
    print(f"top={lattice.top} bottom={lattice.bottom}", file=out)
    return EXIT_OK


def _parse_assignments(cfg: RunConfig, f, frame):
    by_name = {v.name: v for v in variables(f)}
    assignments = {}
    for item in cfg.assigns:
        if "=" not in item:
            raise ConceptLogicError(f"assignment {item!r} is not VAR=worlds")
        name, worlds = item.split("=", 1)
        name = name.strip()
        if name not in by_name:
            raise ConceptLogicError(f"variable {name!r} does not occur in the formula")
        v = by_name[name]
        ws = [w.strip() for w in worlds.split(",") if w.strip()]
        assignments[v] = ws
    missing = [v.name for v in by_name.values() if v not in assignments]
    if missing:
        raise ConceptLogicError(
            f"unassigned variables: {', '.join(sorted(missing))} (use --assign)"
        )
    return Valuation(assignments)


def _cmd_eval(cfg: RunConfig, out) -> int:
    ctx = load_context(cfg.context_path)
    frame = context_to_frame(ctx)
    f = parse_formula(cfg.formula, _SORTS[cfg.sort])
    val = _parse_assignments(cfg, f, frame)
    ts = truth_set(Model(frame, val), f)
    print(_set_names(ts, frame.carrier(f.sort)), file=out)
    return EXIT_OK


def _cmd_valid(cfg: RunConfig, out) -> int:
    ctx = load_context(cfg.context_path)
    frame = context_to_frame(ctx)
    f = parse_formula(cfg.formula, _SORTS[cfg.sort])
    counter = falsify(frame, f, cfg.budget)
    if counter is None:
        print("valid", file=out)
        return EXIT_OK
    print(f"invalid: {counter.describe()}", file=out)
    return EXIT_PROPERTY_FAILED


def _cmd_consequence(cfg: RunConfig, out) -> int:
    ctx = load_context(cfg.context_path)
    frame = context_to_frame(ctx)
    sort = _SORTS[cfg.sort]
    premises = [parse_formula(p, sort) for p in cfg.premises]
    conclusion = parse_formula(cfg.conclusion, sort)
    counter = consequence_countermodel(frame, premises, conclusion, cfg.budget)
    if counter is None:
        print("holds", file=out)
        return EXIT_OK
    print(f"fails: {counter.describe()}", file=out)
    return EXIT_PROPERTY_FAILED


def _cmd_translate(cfg: RunConfig, out) -> int:
    f = parse_formula(cfg.formula, _SORTS[cfg.sort])
    print(print_formula(translate_rho(f)), file=out)
    return EXIT_OK


def _cmd_member(cfg: RunConfig, out) -> int:
    ctx = load_context(cfg.context_path)
    frame = context_to_frame(ctx)
    which = f"{cfg.cls.upper()}_{cfg.side}"
    sort = SORT1 if cfg.side == "ext" else SORT2
    f = parse_formula(cfg.formula, sort)
    ok = member_class(f, which, frame, cfg.budget)
    print("true" if ok else "false", file=out)
    return EXIT_OK if ok else EXIT_PROPERTY_FAILED


def _cmd_check_proof(cfg: RunConfig, out) -> int:
    with open(cfg.script, "r", encoding="utf-8") as fh:
        text = fh.read()
    script = parse_proof_script(text, default_system=cfg.system or "KB2")
    if cfg.system and script.system_id.upper() != cfg.system.upper():
        raise ConceptLogicError(
            f"script declares system {script.system_id}, --system says {cfg.system}"
        )
    verdict = script.check()
    if verdict.accepted:
        print("accepted", file=out)
        return EXIT_OK
    print(f"rejected at line {verdict.line}: {verdict.reason}", file=out)
    return EXIT_PROPERTY_FAILED


def _report_lines(report) -> list[str]:
    lines = []
    for check in report.checks:
        status = "pass" if check.passed else "fail"
        suffix = f" ({check.detail})" if check.detail else ""
        lines.append(f"{check.name}: {status}{suffix}")
    return lines


def _cmd_verify(cfg: RunConfig, out) -> int:
    ctx = load_context(cfg.context_path)
    failed = False
    if cfg.suite in ("yao", "all"):
        report = suite_yao(ctx)
        for clause in report.clauses:
            status = "pass" if clause.passed else f"fail ({clause.detail})"
            print(f"{clause.clause}: {status}", file=out)
        failed |= not report.passed
    if cfg.suite in ("translation", "all"):
        report = suite_translation(ctx, cfg.seed)
        for line in _report_lines(report):
            print(f"translation {line}", file=out)
        failed |= not report.passed
    if cfg.suite in ("lattice", "all"):
        for kind, report in zip(("pc", "oc", "fc"), suite_lattice(ctx, cfg.budget)):
            status = "pass" if report.passed else "fail"
            print(f"lattice {kind}: {status}", file=out)
            for check in report.failures():
                print(f"  {check.name}: fail ({check.detail})", file=out)
            failed |= not report.passed
    if cfg.suite in ("iso", "all"):
        report = suite_iso(ctx, cfg.budget)
        status = "pass" if report.passed else "fail"
        print(f"iso: {status}", file=out)
        for check in report.failures():
            print(f"  {check.name}: fail ({check.detail})", file=out)
        failed |= not report.passed
    return EXIT_PROPERTY_FAILED if failed else EXIT_OK


_HANDLERS = {
    "concepts": _cmd_concepts,
    "lattice": _cmd_lattice,
    "eval": _cmd_eval,
    "valid": _cmd_valid,
    "consequence": _cmd_consequence,
    "translate": _cmd_translate,
    "member": _cmd_member,
    "check-proof": _cmd_check_proof,
    "verify": _cmd_verify,
}


def run_cli(argv, out=None, err=None) -> int:
    """Dispatch a CLI invocation; returns the process exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    cfg = RunConfig(
        command=args.command,
        context_path=getattr(args, "context", None),
        kind=getattr(args, "kind", None),
        cls=getattr(args, "cls", None),
        side=getattr(args, "side", None),
        formula=getattr(args, "formula", None),
        sort=getattr(args, "sort", None),
        premises=list(getattr(args, "premises", [])),
        conclusion=getattr(args, "conclusion", None),
        assigns=list(getattr(args, "assign", [])),
        script=getattr(args, "script", None),
        system=getattr(args, "system", None),
        suite=getattr(args, "suite", "all"),
        budget=getattr(args, "budget", DEFAULT_BUDGET),
        seed=getattr(args, "seed", 0),
        format=getattr(args, "format", "text"),
    )
    try:
        return _HANDLERS[cfg.command](cfg, out)
    except BudgetExceededError as exc:
        print(f"budget refused: {exc}", file=err)
        return EXIT_BUDGET
    except (ConceptLogicError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
