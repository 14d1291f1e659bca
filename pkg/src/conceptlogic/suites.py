"""Seeded verification campaigns over a given context.

Each suite returns a report object with named checks; the CLI renders them
and maps failures to exit codes.  All randomness flows from one seed, so a
fixed seed and input reproduce byte-identical output.
"""

from __future__ import annotations

import random

from .context import FormalContext, complement_context
from .lattices import ConceptKind, YaoReport, verify_yao_isomorphisms
from .logical import (
    VerificationReport,
    generate_pair,
    verify_isomorphisms,
    verify_quotient_lattice,
)
from .semantics import (
    DEFAULT_BUDGET,
    Model,
    Valuation,
    context_to_frame,
    satisfies,
)
from .syntax import (
    KF,
    SORT1,
    SORT2,
    And,
    Bot,
    Box,
    Dia,
    Formula,
    Iff,
    Imp,
    Neg,
    Or,
    Signature,
    Top,
    Var,
    translate_rho,
    variables,
)

_VAR_POOLS = {SORT1: ("p", "q", "r"), SORT2: ("x", "y", "z")}


def random_formula(
    rng: random.Random,
    sort: str,
    max_depth: int,
    sig: Signature,
    n_vars: int = 3,
) -> Formula:
    """Random dialect formula; variable names are disjoint per sort."""
    mods = {}
    for m in sig.modalities:
        mods.setdefault(m.result_sort, [])
        if m.window:
            mods[m.result_sort].append((Box, m))
        else:
            mods[m.result_sort].append((Dia, m))
            mods[m.result_sort].append((Box, m))
    kinds = ["var", "bot", "top", "neg", "and", "or", "imp", "iff", "mod"]
    weights = [5, 1, 1, 3, 4, 2, 2, 1, 6]
    while True:
        kind = (
            rng.choices(kinds, weights)[0]
            if max_depth > 0
            else rng.choices(["var", "bot", "top"], [6, 1, 1])[0]
        )
        if kind != "mod" or sort in mods:
            break
    if kind == "var":
        return Var(_VAR_POOLS[sort][rng.randrange(n_vars)], sort)
    if kind == "bot":
        return Bot(sort)
    if kind == "top":
        return Top(sort)
    if kind == "neg":
        return Neg(random_formula(rng, sort, max_depth - 1, sig, n_vars))
    if kind == "mod":
        cls, m = rng.choice(mods[sort])
        return cls(m, (random_formula(rng, m.arg_sorts[0], max_depth - 1, sig, n_vars),))
    cls = {"and": And, "or": Or, "imp": Imp, "iff": Iff}[kind]
    return cls(
        random_formula(rng, sort, max_depth - 1, sig, n_vars),
        random_formula(rng, sort, max_depth - 1, sig, n_vars),
    )


def random_context(
    rng: random.Random, max_objects: int, max_attributes: int
) -> FormalContext:
    n_g = rng.randint(1, max_objects)
    n_m = rng.randint(1, max_attributes)
    p = rng.uniform(0.2, 0.8)
    objects = tuple(f"g{i + 1}" for i in range(n_g))
    attributes = tuple(f"m{j + 1}" for j in range(n_m))
    pairs = [(g, m) for g in objects for m in attributes if rng.random() < p]
    return FormalContext.from_pairs(objects, attributes, pairs)


def random_valuation(rng: random.Random, frame, vs) -> Valuation:
    return Valuation(
        {v: {w for w in frame.carrier(v.sort) if rng.random() < 0.5} for v in vs}
    )


def suite_yao(ctx: FormalContext) -> YaoReport:
    return verify_yao_isomorphisms(ctx)


def suite_translation(
    ctx: FormalContext, seed: int, count: int = 100, max_depth: int = 4
) -> VerificationReport:
    """Pointwise agreement of window formulas with their translated images.

    Samples random window-dialect formulas and valuations on the context's
    frame and checks satisfaction world by world against the translation on
    the complemented frame.
    """
    rng = random.Random(seed)
    frame = context_to_frame(ctx)
    cframe = context_to_frame(complement_context(ctx))
    report = VerificationReport("translation semantics")
    violations = 0
    for _ in range(count):
        sort = rng.choice([SORT1, SORT2])
        f = random_formula(rng, sort, max_depth, KF, n_vars=3)
        val = random_valuation(rng, frame, variables(f))
        model, cmodel = Model(frame, val), Model(cframe, val)
        rho_f = translate_rho(f)
        for w in frame.carrier(sort):
            if satisfies(model, w, f) != satisfies(cmodel, w, rho_f):
                violations += 1
                break
    report.add(
        "pointwise agreement",
        violations == 0,
        f"{count - violations}/{count} sampled formulas agree on every world",
    )
    return report


_SEEDS = (
    Var("p", SORT1),
    Var("q", SORT1),
    And(Var("p", SORT1), Var("q", SORT1)),
    Top(SORT1),
    Bot(SORT1),
)


def seed_pairs(kind: ConceptKind):
    return [generate_pair(s, kind) for s in _SEEDS]


def suite_lattice(
    ctx: FormalContext, budget: int = DEFAULT_BUDGET
) -> list[VerificationReport]:
    frame = context_to_frame(ctx)
    return [
        verify_quotient_lattice(seed_pairs(kind), kind, frame, budget)
        for kind in (ConceptKind.PC, ConceptKind.OC, ConceptKind.FC)
    ]


def suite_iso(ctx: FormalContext, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    return verify_isomorphisms(seed_pairs(ConceptKind.FC), ctx, budget)
