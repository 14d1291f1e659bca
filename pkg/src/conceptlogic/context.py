"""Finite formal contexts and the six set-level derivation/approximation operators.

A context is a finite two-sorted incidence structure (G, M, I).  Subsets of
either carrier are stored as integer bitmasks (bit i = i-th object or
attribute), so every operator below reduces to word-parallel AND/OR/subset
tests.  Contexts and subsets are immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator

from .errors import DimensionError, SortMismatchError

SORT_OBJECTS = "s1"
SORT_ATTRIBUTES = "s2"


def _mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class SortedSubset:
    """A subset of one carrier, tagged with its sort.

    ``bits`` is a bitmask over a carrier of length ``size``; which carrier
    that is (objects or attributes of some context, or a frame carrier) is
    determined by ``sort`` plus the ambient structure.
    """

    sort: str
    bits: int
    size: int

    def __post_init__(self) -> None:
        if self.size < 0:
            raise DimensionError(f"negative carrier size {self.size}")
        if not 0 <= self.bits < (1 << self.size):
            raise DimensionError(
                f"bitmask {self.bits:#x} does not fit a carrier of size {self.size}"
            )

    @classmethod
    def from_indices(cls, sort: str, indices: Iterable[int], size: int) -> "SortedSubset":
        return cls(sort, _mask_from_indices(indices), size)

    @classmethod
    def from_names(
        cls, sort: str, names: Iterable[str], carrier: tuple[str, ...]
    ) -> "SortedSubset":
        index = {name: i for i, name in enumerate(carrier)}
        try:
            return cls(sort, _mask_from_indices(index[n] for n in names), len(carrier))
        except KeyError as exc:
            raise DimensionError(f"unknown element {exc.args[0]!r}") from None

    def indices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def members(self, carrier: tuple[str, ...]) -> tuple[str, ...]:
        if len(carrier) != self.size:
            raise DimensionError(
                f"carrier has {len(carrier)} elements, subset sized for {self.size}"
            )
        return tuple(carrier[i] for i in iter_bits(self.bits))

    def complement(self) -> "SortedSubset":
        full = (1 << self.size) - 1
        return SortedSubset(self.sort, full ^ self.bits, self.size)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def is_subset(self, other: "SortedSubset") -> bool:
        return self.bits & ~other.bits == 0


@dataclass(frozen=True)
class FormalContext:
    """A finite context: object names, attribute names, and an incidence matrix.

    ``rows[g]`` is the bitmask of attributes incident to object ``g``.
    Carriers must be non-empty and names pairwise distinct per sort; the
    same name may appear as both an object and an attribute (the sorts are
    disjoint namespaces).
    """

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.objects or not self.attributes:
            raise DimensionError("contexts need at least one object and one attribute")
        if len(set(self.objects)) != len(self.objects):
            raise DimensionError("object names must be pairwise distinct")
        if len(set(self.attributes)) != len(self.attributes):
            raise DimensionError("attribute names must be pairwise distinct")
        if len(self.rows) != len(self.objects):
            raise DimensionError(
                f"{len(self.rows)} incidence rows for {len(self.objects)} objects"
            )
        full = (1 << len(self.attributes)) - 1
        for g, row in enumerate(self.rows):
            if not 0 <= row <= full:
                raise DimensionError(f"row {g} does not fit {len(self.attributes)} attributes")

    @classmethod
    def from_pairs(
        cls,
        objects: Iterable[str],
        attributes: Iterable[str],
        incidence: Iterable[tuple[str, str]],
    ) -> "FormalContext":
        objects = tuple(objects)
        attributes = tuple(attributes)
        gi = {name: i for i, name in enumerate(objects)}
        mi = {name: i for i, name in enumerate(attributes)}
        rows = [0] * len(objects)
        for g, m in incidence:
            if g not in gi:
                raise DimensionError(f"unknown object {g!r} in incidence")
            if m not in mi:
                raise DimensionError(f"unknown attribute {m!r} in incidence")
            rows[gi[g]] |= 1 << mi[m]
        return cls(objects, attributes, tuple(rows))

    @classmethod
    def from_bools(
        cls,
        objects: Iterable[str],
        attributes: Iterable[str],
        matrix: Iterable[Iterable[bool]],
    ) -> "FormalContext":
        objects = tuple(objects)
        attributes = tuple(attributes)
        rows = []
        for row in matrix:
            cells = list(row)
            if len(cells) != len(attributes):
                raise DimensionError("incidence row length does not match attributes")
            rows.append(_mask_from_indices(i for i, c in enumerate(cells) if c))
        return cls(objects, attributes, tuple(rows))

    @cached_property
    def cols(self) -> tuple[int, ...]:
        """Column masks: ``cols[m]`` is the bitmask of objects incident to m."""
        cols = [0] * len(self.attributes)
        for g, row in enumerate(self.rows):
            for m in iter_bits(row):
                cols[m] |= 1 << g
        return tuple(cols)

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def incidence(self, g: str, m: str) -> bool:
        gi = self.objects.index(g)
        mi = self.attributes.index(m)
        return bool(self.rows[gi] >> mi & 1)

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(
            (self.objects[g], self.attributes[m])
            for g in range(self.n_objects)
            for m in iter_bits(self.rows[g])
        )

    def object_subset(self, names: Iterable[str] = ()) -> SortedSubset:
        return SortedSubset.from_names(SORT_OBJECTS, names, self.objects)

    def attribute_subset(self, names: Iterable[str] = ()) -> SortedSubset:
        return SortedSubset.from_names(SORT_ATTRIBUTES, names, self.attributes)

    def full_objects(self) -> SortedSubset:
        return SortedSubset(SORT_OBJECTS, (1 << self.n_objects) - 1, self.n_objects)

    def full_attributes(self) -> SortedSubset:
        return SortedSubset(SORT_ATTRIBUTES, (1 << self.n_attributes) - 1, self.n_attributes)

    def carrier(self, sort: str) -> tuple[str, ...]:
        if sort == SORT_OBJECTS:
            return self.objects
        if sort == SORT_ATTRIBUTES:
            return self.attributes
        raise SortMismatchError(f"{SORT_OBJECTS}|{SORT_ATTRIBUTES}", sort, "carrier lookup")


class OperatorKind(Enum):
    """The six set operators: derivation (+, -) and approximation pairs."""

    PLUS = "plus"
    MINUS = "minus"
    POSS = "poss"
    NEC = "nec"
    POSS_INV = "poss_inv"
    NEC_INV = "nec_inv"

    @property
    def input_sort(self) -> str:
        return SORT_OBJECTS if self in _FORWARD else SORT_ATTRIBUTES

    @property
    def output_sort(self) -> str:
        return SORT_ATTRIBUTES if self in _FORWARD else SORT_OBJECTS


_FORWARD = {OperatorKind.PLUS, OperatorKind.POSS, OperatorKind.NEC}


def apply_operator(kind: OperatorKind, subset: SortedSubset, ctx: FormalContext) -> SortedSubset:
    """Apply one of +, -, poss, nec, poss_inv, nec_inv to a sorted subset.

    Forward operators take object sets to attribute sets; the *_inv and
    minus operators go the other way.  Pure function of its arguments.
    """
    if subset.sort != kind.input_sort:
        raise SortMismatchError(kind.input_sort, subset.sort, f"operator {kind.value}")
    expected = ctx.n_objects if kind.input_sort == SORT_OBJECTS else ctx.n_attributes
    if subset.size != expected:
        raise DimensionError(
            f"subset sized for {subset.size}, carrier has {expected} elements"
        )
    bits = subset.bits
    if kind is OperatorKind.PLUS:
        # attributes shared by every object in the set
        out = (1 << ctx.n_attributes) - 1
        for g in iter_bits(bits):
            out &= ctx.rows[g]
    elif kind is OperatorKind.MINUS:
        out = (1 << ctx.n_objects) - 1
        for m in iter_bits(bits):
            out &= ctx.cols[m]
    elif kind is OperatorKind.POSS:
        out = _mask_from_indices(
            m for m in range(ctx.n_attributes) if ctx.cols[m] & bits
        )
    elif kind is OperatorKind.NEC:
        out = _mask_from_indices(
            m for m in range(ctx.n_attributes) if ctx.cols[m] & ~bits == 0
        )
    elif kind is OperatorKind.POSS_INV:
        out = _mask_from_indices(
            g for g in range(ctx.n_objects) if ctx.rows[g] & bits
        )
    elif kind is OperatorKind.NEC_INV:
        out = _mask_from_indices(
            g for g in range(ctx.n_objects) if ctx.rows[g] & ~bits == 0
        )
    else:  # pragma: no cover
        raise ValueError(kind)
    out_size = ctx.n_attributes if kind.output_sort == SORT_ATTRIBUTES else ctx.n_objects
    return SortedSubset(kind.output_sort, out, out_size)


def complement_context(ctx: FormalContext) -> FormalContext:
    """Same carriers, incidence bitwise negated.  Involutive."""
    full = (1 << ctx.n_attributes) - 1
    return FormalContext(ctx.objects, ctx.attributes, tuple(full ^ r for r in ctx.rows))


_DUAL_PAIRS = {
    OperatorKind.POSS: (OperatorKind.POSS, OperatorKind.NEC),
    OperatorKind.NEC: (OperatorKind.POSS, OperatorKind.NEC),
    OperatorKind.POSS_INV: (OperatorKind.POSS_INV, OperatorKind.NEC_INV),
    OperatorKind.NEC_INV: (OperatorKind.POSS_INV, OperatorKind.NEC_INV),
}


def duality_check(kind: OperatorKind, subset: SortedSubset, ctx: FormalContext) -> bool:
    """Check nec(S) == ~poss(~S) for the directed pair that ``kind`` names.

    Accepts any of poss/nec/poss_inv/nec_inv and tests the matching pair;
    plus/minus do not form a possibility/necessity pair.
    """
    if kind not in _DUAL_PAIRS:
        raise SortMismatchError("poss|nec|poss_inv|nec_inv", kind.value, "duality_check")
    poss_kind, nec_kind = _DUAL_PAIRS[kind]
    lhs = apply_operator(nec_kind, subset, ctx)
    rhs = apply_operator(poss_kind, subset.complement(), ctx).complement()
    return lhs == rhs
