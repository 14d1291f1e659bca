"""Many-sorted relational frames, models, truth sets, and exhaustive validity.

Truth sets are computed as bitmasks over a carrier (bit i = i-th world of
that sort).  Frame validity and local consequence enumerate all valuations
of the variables occurring in the formulas, refusing explicitly when the
assignment count exceeds the budget.  Everything here is pure and
immutable-by-convention; models can be shared freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .context import FormalContext, SortedSubset, iter_bits
from .errors import (
    BudgetExceededError,
    FrameError,
    SortMismatchError,
    ValuationError,
)
from .syntax import (
    FULL,
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
    variables,
)

DEFAULT_BUDGET = 1 << 20


class SortedFrame:
    """Finite carriers per sort plus one relation table per modality.

    A relation entry for a modality of arity ``s1...sn -> s`` is a tuple
    ``(w, w1, ..., wn)`` whose first component lives in the carrier of the
    result sort.  When ``bidirectional`` is set, every modality with a
    declared converse must have the converse relation table, and this is
    validated at construction.  Carriers are disjoint by sort tagging, so
    equal world names in different sorts are allowed.
    """

    def __init__(
        self,
        carriers: Mapping[str, Sequence[str]],
        relations: Mapping[str, Iterable[tuple[str, ...]]],
        sig: Signature = FULL,
        bidirectional: bool = False,
    ):
        self.sig = sig
        self.carriers = {s: tuple(ws) for s, ws in carriers.items()}
        for s in sig.sorts:
            if not self.carriers.get(s):
                raise FrameError(f"carrier for sort {s!r} must be non-empty")
        for s, ws in self.carriers.items():
            if len(set(ws)) != len(ws):
                raise FrameError(f"carrier for sort {s!r} has duplicate worlds")
        self._index = {
            s: {w: i for i, w in enumerate(ws)} for s, ws in self.carriers.items()
        }
        self.relations: dict[str, frozenset[tuple[str, ...]]] = {}
        for name, entries in relations.items():
            mod = sig.modality(name)
            table = frozenset(tuple(e) for e in entries)
            for entry in table:
                if len(entry) != mod.arity + 1:
                    raise FrameError(
                        f"relation entry {entry!r} has wrong arity for {name!r}"
                    )
                if entry[0] not in self._index[mod.result_sort]:
                    raise FrameError(f"unknown world {entry[0]!r} in relation {name!r}")
                for w, s in zip(entry[1:], mod.arg_sorts):
                    if w not in self._index[s]:
                        raise FrameError(f"unknown world {w!r} in relation {name!r}")
            self.relations[name] = table
        for m in sig.modalities:
            self.relations.setdefault(m.name, frozenset())
        self.bidirectional = bidirectional
        if bidirectional:
            self._check_converses()
        # successor masks for unary modalities: per result-world bitmask of
        # argument worlds; n-ary modalities keep tuple lists instead
        self._succ_masks: dict[str, list[int]] = {}
        self._succ_tuples: dict[str, list[list[tuple[int, ...]]]] = {}
        for m in sig.modalities:
            size = len(self.carriers[m.result_sort])
            if m.arity == 1:
                masks = [0] * size
                arg_index = self._index[m.arg_sorts[0]]
                for w, w1 in self.relations[m.name]:
                    masks[self._index[m.result_sort][w]] |= 1 << arg_index[w1]
                self._succ_masks[m.name] = masks
            else:
                tuples: list[list[tuple[int, ...]]] = [[] for _ in range(size)]
                for entry in self.relations[m.name]:
                    w, rest = entry[0], entry[1:]
                    tuples[self._index[m.result_sort][w]].append(
                        tuple(
                            self._index[s][u] for u, s in zip(rest, m.arg_sorts)
                        )
                    )
                self._succ_tuples[m.name] = tuples

    def _check_converses(self) -> None:
        for m in self.sig.modalities:
            if m.converse is None:
                continue
            partner = self.sig.modality(m.converse)
            if m.arity != 1 or partner.arity != 1:
                continue
            forward = self.relations[m.name]
            backward = {(b, a) for a, b in self.relations[partner.name]}
            if forward != backward:
                raise FrameError(
                    f"bidirectional frame: relation for {partner.name!r} is not "
                    f"the converse of {m.name!r}"
                )

    def carrier(self, sort: str) -> tuple[str, ...]:
        try:
            return self.carriers[sort]
        except KeyError:
            raise SortMismatchError("|".join(self.carriers), sort, "frame carrier")

    def carrier_size(self, sort: str) -> int:
        return len(self.carrier(sort))

    def full_mask(self, sort: str) -> int:
        return (1 << self.carrier_size(sort)) - 1

    def world_index(self, sort: str, world: str) -> int:
        try:
            return self._index[sort][world]
        except KeyError:
            raise SortMismatchError(
                f"world of sort {sort}", repr(world), "world lookup"
            )

    def subset(self, sort: str, worlds: Iterable[str] = ()) -> SortedSubset:
        return SortedSubset.from_names(sort, worlds, self.carrier(sort))


class Valuation:
    """Assignment of world sets to sorted propositional variables."""

    def __init__(self, assignments: Mapping[Var, Iterable[str]] | None = None):
        self._map: dict[Var, frozenset[str]] = {}
        for v, worlds in (assignments or {}).items():
            self._map[v] = frozenset(worlds)

    def assign(self, v: Var, worlds: Iterable[str]) -> "Valuation":
        out = Valuation()
        out._map = dict(self._map)
        out._map[v] = frozenset(worlds)
        return out

    def worlds(self, v: Var) -> frozenset[str]:
        try:
            return self._map[v]
        except KeyError:
            raise ValuationError(f"variable {v.name!r} of sort {v.sort} is unassigned")

    def __contains__(self, v: Var) -> bool:
        return v in self._map

    def items(self):
        return self._map.items()


@dataclass
class Model:
    """A frame plus a valuation; variable masks are computed lazily."""

    frame: SortedFrame
    valuation: Valuation

    def var_mask(self, v: Var) -> int:
        worlds = self.valuation.worlds(v)
        index = self.frame._index[v.sort]
        mask = 0
        for w in worlds:
            if w not in index:
                raise ValuationError(
                    f"valuation of {v.name!r} mentions unknown world {w!r}"
                )
            mask |= 1 << index[w]
        return mask


def context_to_frame(ctx: FormalContext, sig: Signature = FULL) -> SortedFrame:
    """The bidirectional frame of a context: carriers (G, M), both dialects.

    Every forward modality of ``sig`` is interpreted by the transpose of the
    incidence relation and every converse modality by the incidence itself,
    so diamond/box and window formulas evaluate over one frame.
    """
    carriers = {SORT1: ctx.objects, SORT2: ctx.attributes}
    transpose = [
        (ctx.attributes[m], ctx.objects[g])
        for g in range(ctx.n_objects)
        for m in iter_bits(ctx.rows[g])
    ]
    incidence = [(b, a) for a, b in transpose]
    relations: dict[str, list[tuple[str, str]]] = {}
    for m in sig.modalities:
        if m.arg_sorts == (SORT1,) and m.result_sort == SORT2:
            relations[m.name] = transpose
        elif m.arg_sorts == (SORT2,) and m.result_sort == SORT1:
            relations[m.name] = incidence
        else:
            raise FrameError(f"modality {m.name!r} is not two-sorted unary")
    return SortedFrame(carriers, relations, sig, bidirectional=True)


def frame_to_context(frame: SortedFrame) -> FormalContext:
    """Reconstruct the context from a bidirectional two-sorted frame.

    Total on frames whose sorts are (s1, s2): the incidence is read off any
    s2-to-s1 modality table; all such tables must agree.
    """
    if not frame.bidirectional:
        raise FrameError("only bidirectional frames correspond to contexts")
    objects = frame.carrier(SORT1)
    attributes = frame.carrier(SORT2)
    tables = [
        frame.relations[m.name]
        for m in frame.sig.modalities
        if m.arg_sorts == (SORT2,) and m.result_sort == SORT1
    ]
    if not tables:
        raise FrameError("frame has no s2 -> s1 modality to read the incidence from")
    if any(t != tables[0] for t in tables[1:]):
        raise FrameError("s2 -> s1 relation tables disagree; no single context")
    return FormalContext.from_pairs(objects, attributes, tables[0])


def complement_frame(frame: SortedFrame) -> SortedFrame:
    """Complement every relation table; preserves bidirectionality."""
    relations: dict[str, set[tuple[str, ...]]] = {}
    for m in frame.sig.modalities:
        full = set(
            itertools.product(
                frame.carrier(m.result_sort),
                *(frame.carrier(s) for s in m.arg_sorts),
            )
        )
        relations[m.name] = full - set(frame.relations[m.name])
    return SortedFrame(frame.carriers, relations, frame.sig, frame.bidirectional)


def truth_set(model: Model, f: Formula, _cache: dict | None = None) -> SortedSubset:
    """All worlds of sort(f) where the formula holds."""
    mask = _truth_mask(model, f, {} if _cache is None else _cache)
    sort = f.sort
    return SortedSubset(sort, mask, model.frame.carrier_size(sort))


def _truth_mask(model: Model, f: Formula, cache: dict) -> int:
    hit = cache.get(f)
    if hit is not None:
        return hit
    frame = model.frame
    if isinstance(f, Var):
        mask = model.var_mask(f)
    elif isinstance(f, Bot):
        mask = 0
    elif isinstance(f, Top):
        mask = frame.full_mask(f.sort)
    elif isinstance(f, Neg):
        mask = frame.full_mask(f.sort) ^ _truth_mask(model, f.arg, cache)
    elif isinstance(f, And):
        mask = _truth_mask(model, f.left, cache) & _truth_mask(model, f.right, cache)
    elif isinstance(f, Or):
        mask = _truth_mask(model, f.left, cache) | _truth_mask(model, f.right, cache)
    elif isinstance(f, Imp):
        full = frame.full_mask(f.sort)
        mask = (full ^ _truth_mask(model, f.left, cache)) | _truth_mask(
            model, f.right, cache
        )
    elif isinstance(f, Iff):
        full = frame.full_mask(f.sort)
        mask = full ^ _truth_mask(model, f.left, cache) ^ _truth_mask(
            model, f.right, cache
        )
    elif isinstance(f, (Dia, Box)):
        mask = _modal_mask(model, f, cache)
    else:
        raise TypeError(f"unknown formula node {f!r}")
    cache[f] = mask
    return mask


def _modal_mask(model: Model, f: Dia | Box, cache: dict) -> int:
    frame = model.frame
    mod = f.mod
    size = frame.carrier_size(mod.result_sort)
    if mod.arity == 1:
        arg = _truth_mask(model, f.args[0], cache)
        succ = frame._succ_masks[mod.name]
        if isinstance(f, Box) and mod.window:
            # sufficiency: every world satisfying the argument is related
            return _collect(size, lambda w: arg & ~succ[w] == 0)
        if isinstance(f, Dia):
            return _collect(size, lambda w: succ[w] & arg != 0)
        return _collect(size, lambda w: succ[w] & ~arg == 0)
    arg_masks = [_truth_mask(model, a, cache) for a in f.args]
    tuples = frame._succ_tuples[mod.name]
    if isinstance(f, Dia):
        return _collect(
            size,
            lambda w: any(
                all(m >> i & 1 for m, i in zip(arg_masks, t)) for t in tuples[w]
            ),
        )
    return _collect(
        size,
        lambda w: all(
            any(m >> i & 1 for m, i in zip(arg_masks, t)) for t in tuples[w]
        ),
    )


def _collect(size: int, pred) -> int:
    mask = 0
    for w in range(size):
        if pred(w):
            mask |= 1 << w
    return mask


def satisfies(model: Model, world: str, f: Formula) -> bool:
    """Truth at a single world; the world must inhabit the formula's sort."""
    idx = model.frame.world_index(f.sort, world)
    return bool(truth_set(model, f).bits >> idx & 1)


def _sorted_variables(formulas: Iterable[Formula]) -> list[Var]:
    vs: set[Var] = set()
    for f in formulas:
        vs |= variables(f)
    return sorted(vs, key=lambda v: (v.sort, v.name))


def _assignment_count(frame: SortedFrame, vs: Sequence[Var]) -> int:
    count = 1
    for v in vs:
        count *= 1 << frame.carrier_size(v.sort)
    return count


def _iter_valuations(frame: SortedFrame, vs: Sequence[Var]):
    """Yield variable-mask dicts covering every valuation of ``vs``."""
    ranges = [range(1 << frame.carrier_size(v.sort)) for v in vs]
    for combo in itertools.product(*ranges):
        yield dict(zip(vs, combo))


class _MaskModel(Model):
    """Model whose valuation is a prebuilt mask dict (internal fast path)."""

    def __init__(self, frame: SortedFrame, masks: dict[Var, int]):
        self.frame = frame
        self.masks = masks
        self.valuation = None  # type: ignore[assignment]

    def var_mask(self, v: Var) -> int:
        try:
            return self.masks[v]
        except KeyError:
            raise ValuationError(f"variable {v.name!r} of sort {v.sort} is unassigned")


@dataclass(frozen=True)
class Countermodel:
    """A falsifying valuation plus a world, reported on validity failure."""

    assignments: tuple[tuple[Var, tuple[str, ...]], ...]
    world: str

    def describe(self) -> str:
        parts = [
            f"v({v.name})={{{','.join(ws)}}}" for v, ws in self.assignments
        ]
        return f"{'; '.join(parts) or 'empty valuation'} falsifies at world {self.world}"


def _mask_to_worlds(frame: SortedFrame, sort: str, mask: int) -> tuple[str, ...]:
    carrier = frame.carrier(sort)
    return tuple(carrier[i] for i in iter_bits(mask))


def falsify(
    frame: SortedFrame, f: Formula, budget: int = DEFAULT_BUDGET
) -> Countermodel | None:
    """Search all valuations for a countermodel; None means frame-valid."""
    vs = _sorted_variables([f])
    count = _assignment_count(frame, vs)
    if count > budget:
        raise BudgetExceededError(count, budget)
    full = frame.full_mask(f.sort)
    for masks in _iter_valuations(frame, vs):
        model = _MaskModel(frame, masks)
        got = _truth_mask(model, f, {})
        if got != full:
            missing = (full ^ got) & -(full ^ got)  # lowest failing world
            world = frame.carrier(f.sort)[missing.bit_length() - 1]
            assignments = tuple(
                (v, _mask_to_worlds(frame, v.sort, m)) for v, m in masks.items()
            )
            return Countermodel(assignments, world)
    return None


def frame_valid(frame: SortedFrame, f: Formula, budget: int = DEFAULT_BUDGET) -> bool:
    """Exact frame validity by exhaustive valuation enumeration."""
    return falsify(frame, f, budget) is None


def consequence_countermodel(
    frame: SortedFrame,
    premises: Sequence[Formula],
    conclusion: Formula,
    budget: int = DEFAULT_BUDGET,
) -> Countermodel | None:
    """Counterexample to local consequence on this frame, if any."""
    for p in premises:
        if p.sort != conclusion.sort:
            raise SortMismatchError(conclusion.sort, p.sort, "local consequence")
    vs = _sorted_variables([*premises, conclusion])
    count = _assignment_count(frame, vs)
    if count > budget:
        raise BudgetExceededError(count, budget)
    full = frame.full_mask(conclusion.sort)
    for masks in _iter_valuations(frame, vs):
        model = _MaskModel(frame, masks)
        cache: dict = {}
        holds_premises = full
        for p in premises:
            holds_premises &= _truth_mask(model, p, cache)
            if not holds_premises:
                break
        if not holds_premises:
            continue
        bad = holds_premises & ~_truth_mask(model, conclusion, cache)
        if bad:
            lowest = bad & -bad
            world = frame.carrier(conclusion.sort)[lowest.bit_length() - 1]
            assignments = tuple(
                (v, _mask_to_worlds(frame, v.sort, m)) for v, m in masks.items()
            )
            return Countermodel(assignments, world)
    return None


def local_consequence(
    frame: SortedFrame,
    premises: Sequence[Formula],
    conclusion: Formula,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Every (valuation, world) satisfying all premises satisfies the conclusion."""
    return consequence_countermodel(frame, premises, conclusion, budget) is None


def global_consequence(
    frame: SortedFrame,
    premises: Sequence[Formula],
    conclusion: Formula,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Valuations making every premise true everywhere make the conclusion so.

    Unlike local consequence this allows premises of either sort; it is the
    notion preserved by derivations that generalize over premise-derived
    lines (generalization moves between the sorts).
    """
    vs = _sorted_variables([*premises, conclusion])
    count = _assignment_count(frame, vs)
    if count > budget:
        raise BudgetExceededError(count, budget)
    for masks in _iter_valuations(frame, vs):
        model = _MaskModel(frame, masks)
        cache: dict = {}
        if any(
            _truth_mask(model, p, cache) != frame.full_mask(p.sort) for p in premises
        ):
            continue
        if _truth_mask(model, conclusion, cache) != frame.full_mask(conclusion.sort):
            return False
    return True


class FrameEvaluator:
    """Vectorized truth-set signatures over all valuations of a fixed variable set.

    For a frame and a variable universe, ``signature(f)`` is the tuple of
    truth masks of ``f`` across every valuation in a canonical order.  Two
    formulas (built over those variables) are frame-equivalent iff their
    signatures are equal; a formula is frame-valid iff its signature is all
    full masks.  Signatures are memoized per subformula, which makes large
    families of overlapping checks cheap.
    """

    def __init__(
        self,
        frame: SortedFrame,
        variable_universe: Sequence[Var],
        budget: int = DEFAULT_BUDGET,
    ):
        self.frame = frame
        self.vars = sorted(set(variable_universe), key=lambda v: (v.sort, v.name))
        self.count = _assignment_count(frame, self.vars)
        if self.count > budget:
            raise BudgetExceededError(self.count, budget)
        self._var_sigs: dict[Var, tuple[int, ...]] = {}
        stride = 1
        for v in self.vars:
            n = 1 << frame.carrier_size(v.sort)
            period = stride * n
            sig = tuple(
                (idx % period) // stride for idx in range(self.count)
            )
            self._var_sigs[v] = sig
            stride = period
        self._memo: dict[Formula, tuple[int, ...]] = {}

    def signature(self, f: Formula) -> tuple[int, ...]:
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        frame = self.frame
        if isinstance(f, Var):
            if f not in self._var_sigs:
                raise ValuationError(
                    f"variable {f.name!r} of sort {f.sort} is outside the evaluator's universe"
                )
            sig = self._var_sigs[f]
        elif isinstance(f, Bot):
            sig = (0,) * self.count
        elif isinstance(f, Top):
            sig = (frame.full_mask(f.sort),) * self.count
        elif isinstance(f, Neg):
            full = frame.full_mask(f.sort)
            sig = tuple(full ^ m for m in self.signature(f.arg))
        elif isinstance(f, And):
            sig = tuple(
                a & b for a, b in zip(self.signature(f.left), self.signature(f.right))
            )
        elif isinstance(f, Or):
            sig = tuple(
                a | b for a, b in zip(self.signature(f.left), self.signature(f.right))
            )
        elif isinstance(f, Imp):
            full = frame.full_mask(f.sort)
            sig = tuple(
                (full ^ a) | b
                for a, b in zip(self.signature(f.left), self.signature(f.right))
            )
        elif isinstance(f, Iff):
            full = frame.full_mask(f.sort)
            sig = tuple(
                full ^ a ^ b
                for a, b in zip(self.signature(f.left), self.signature(f.right))
            )
        elif isinstance(f, (Dia, Box)) and f.mod.arity == 1:
            succ = frame._succ_masks[f.mod.name]
            size = frame.carrier_size(f.mod.result_sort)
            arg_sig = self.signature(f.args[0])
            if isinstance(f, Box) and f.mod.window:
                sig = tuple(
                    _collect(size, lambda w: arg & ~succ[w] == 0) for arg in arg_sig
                )
            elif isinstance(f, Dia):
                sig = tuple(
                    _collect(size, lambda w: succ[w] & arg != 0) for arg in arg_sig
                )
            else:
                sig = tuple(
                    _collect(size, lambda w: succ[w] & ~arg == 0) for arg in arg_sig
                )
        else:
            raise SortMismatchError("unary modality", "polyadic", "FrameEvaluator")
        self._memo[f] = sig
        return sig

    def valid(self, f: Formula) -> bool:
        full = self.frame.full_mask(f.sort)
        return all(m == full for m in self.signature(f))

    def equivalent(self, f: Formula, g: Formula) -> bool:
        if f.sort != g.sort:
            raise SortMismatchError(f.sort, g.sort, "equivalence check")
        return self.signature(f) == self.signature(g)
