"""Independent brute-force oracles used to freeze expected values.

Everything here works on plain Python sets of names and quantifies
explicitly, so it shares no code path with the bitmask implementations
it is used to check.
"""

from __future__ import annotations

import random

from conceptlogic import FormalContext


def incident(ctx: FormalContext, g: str, m: str) -> bool:
    return ctx.incidence(g, m)


def row(ctx: FormalContext, g: str) -> set[str]:
    return {m for m in ctx.attributes if incident(ctx, g, m)}


def col(ctx: FormalContext, m: str) -> set[str]:
    return {g for g in ctx.objects if incident(ctx, g, m)}


def op_plus(ctx: FormalContext, A: set[str]) -> set[str]:
    return {m for m in ctx.attributes if all(incident(ctx, g, m) for g in A)}


def op_minus(ctx: FormalContext, B: set[str]) -> set[str]:
    return {g for g in ctx.objects if all(incident(ctx, g, m) for m in B)}


def op_poss(ctx: FormalContext, A: set[str]) -> set[str]:
    return {m for m in ctx.attributes if col(ctx, m) & A}


def op_nec(ctx: FormalContext, A: set[str]) -> set[str]:
    return {m for m in ctx.attributes if col(ctx, m) <= A}


def op_poss_inv(ctx: FormalContext, B: set[str]) -> set[str]:
    return {g for g in ctx.objects if row(ctx, g) & B}


def op_nec_inv(ctx: FormalContext, B: set[str]) -> set[str]:
    return {g for g in ctx.objects if row(ctx, g) <= B}


def all_subsets(elements: tuple[str, ...]) -> list[set[str]]:
    out = []
    for mask in range(1 << len(elements)):
        out.append({elements[i] for i in range(len(elements)) if mask >> i & 1})
    return out


def formal_concepts(ctx: FormalContext) -> set[tuple[frozenset, frozenset]]:
    found = set()
    for A in all_subsets(ctx.objects):
        B = op_plus(ctx, A)
        if op_minus(ctx, B) == A:
            found.add((frozenset(A), frozenset(B)))
    return found


def property_concepts(ctx: FormalContext) -> set[tuple[frozenset, frozenset]]:
    found = set()
    for A in all_subsets(ctx.objects):
        B = op_poss(ctx, A)
        if op_nec_inv(ctx, B) == A:
            found.add((frozenset(A), frozenset(B)))
    return found


def object_concepts(ctx: FormalContext) -> set[tuple[frozenset, frozenset]]:
    found = set()
    for A in all_subsets(ctx.objects):
        B = op_nec(ctx, A)
        if op_poss_inv(ctx, B) == A:
            found.add((frozenset(A), frozenset(B)))
    return found


def random_context(rng: random.Random, max_objects: int = 6, max_attributes: int = 6,
                   density: float | None = None) -> FormalContext:
    n_g = rng.randint(1, max_objects)
    n_m = rng.randint(1, max_attributes)
    p = rng.uniform(0.2, 0.8) if density is None else density
    objects = tuple(f"g{i + 1}" for i in range(n_g))
    attributes = tuple(f"m{j + 1}" for j in range(n_m))
    pairs = [
        (g, m) for g in objects for m in attributes if rng.random() < p
    ]
    return FormalContext.from_pairs(objects, attributes, pairs)


def k0() -> FormalContext:
    """The 2x2 fixture used throughout the examples."""
    return FormalContext.from_pairs(
        ("g1", "g2"), ("m1", "m2"), [("g1", "m1"), ("g2", "m1"), ("g2", "m2")]
    )
