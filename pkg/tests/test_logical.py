"""Tests for formula-level concepts, quotient operations, and isomorphisms."""

import random

import pytest

from conceptlogic import FormalContext, complement_context
from conceptlogic.errors import InternalConsistencyError, SortMismatchError
from conceptlogic.lattices import ConceptKind, enumerate_concepts
from conceptlogic.logical import (
    LogicalConceptPair,
    TransformDirection,
    equiv_pairs,
    generate_pair,
    member_class,
    member_pair,
    quotient_join,
    quotient_meet,
    transform_pair,
    verify_isomorphisms,
    verify_quotient_lattice,
)
from conceptlogic.semantics import Model, Valuation, context_to_frame, truth_set
from conceptlogic.syntax import (
    SORT1,
    And,
    Bot,
    Neg,
    Or,
    Top,
    box,
    box_inv,
    dia,
    dia_inv,
    var1,
    variables,
    wbox,
    wbox_inv,
)

import oracles
from oracles import k0

P, Q = var1("p"), var1("q")
SEEDS = [P, Q, And(P, Q), Top(SORT1), Bot(SORT1)]


def seed_family(kind):
    return [generate_pair(s, kind) for s in SEEDS]


class TestMemberClass:
    def test_pc_ext_closure_formula(self):
        frame = context_to_frame(k0())
        assert member_class(box_inv(dia(P)), "PC_ext", frame)

    def test_bare_variable_not_pc_ext(self):
        frame = context_to_frame(k0())
        assert not member_class(P, "PC_ext", frame)

    def test_bot_in_fc_ext_is_frame_dependent(self):
        # the empty-set closure is the set of objects carrying every
        # attribute: nonempty on this fixture (g2 has both), so bot is out
        frame = context_to_frame(k0())
        assert not member_class(Bot(SORT1), "FC_ext", frame)
        # but when no object carries every attribute, bot is in the family
        ctx = FormalContext.from_pairs(
            ("g1", "g2"), ("m1", "m2"), [("g1", "m1")]
        )
        assert member_class(Bot(SORT1), "FC_ext", context_to_frame(ctx))

    def test_bot_in_pc_ext_on_k0(self):
        frame = context_to_frame(k0())
        assert member_class(Bot(SORT1), "PC_ext", frame)

    def test_sort_checked(self):
        frame = context_to_frame(k0())
        with pytest.raises(SortMismatchError):
            member_class(dia(P), "PC_ext", frame)

    def test_unknown_side(self):
        frame = context_to_frame(k0())
        with pytest.raises(ValueError):
            member_class(P, "XX_ext", frame)


class TestMemberPair:
    def test_generated_pc_pair_on_any_frame(self):
        rng = random.Random(61)
        pair = generate_pair(P, ConceptKind.PC)
        for _ in range(15):
            frame = context_to_frame(oracles.random_context(rng, 4, 4))
            assert member_pair(pair, frame)

    def test_generated_fc_pair(self):
        frame = context_to_frame(k0())
        pair = generate_pair(P, ConceptKind.FC)
        assert pair == LogicalConceptPair(wbox_inv(wbox(P)), wbox(P), ConceptKind.FC)
        assert member_pair(pair, frame)

    def test_mismatched_pair_rejected(self):
        frame = context_to_frame(k0())
        assert not member_pair(
            LogicalConceptPair(P, dia(P), ConceptKind.PC), frame
        )

    def test_top_seed_denotes_full_concept(self):
        frame = context_to_frame(k0())
        pair = generate_pair(Top(SORT1), ConceptKind.PC)
        model = Model(frame, Valuation({}))
        assert truth_set(model, pair.extent).bits == 0b11
        assert truth_set(model, pair.intent).bits == 0b11


class TestGeneratePair:
    def test_shapes(self):
        assert generate_pair(P, ConceptKind.FC) == LogicalConceptPair(
            wbox_inv(wbox(P)), wbox(P), ConceptKind.FC
        )
        assert generate_pair(And(P, Q), ConceptKind.OC) == LogicalConceptPair(
            dia_inv(box(And(P, Q))), box(And(P, Q)), ConceptKind.OC
        )

    def test_seed_sort_checked(self):
        with pytest.raises(SortMismatchError):
            generate_pair(dia(P), ConceptKind.PC)


class TestBridgeToSemanticConcepts:
    @pytest.mark.parametrize("kind", list(ConceptKind))
    def test_pair_truth_sets_are_concepts(self, kind):
        rng = random.Random(71)
        for _ in range(12):
            ctx = oracles.random_context(rng, 4, 4)
            frame = context_to_frame(ctx)
            concepts = {
                (c.extent.bits, c.intent.bits) for c in enumerate_concepts(ctx, kind)
            }
            seed = rng.choice(SEEDS)
            pair = generate_pair(seed, kind)
            val = Valuation(
                {
                    v: {w for w in frame.carrier(v.sort) if rng.random() < 0.5}
                    for v in variables(seed)
                }
            )
            model = Model(frame, val)
            ext = truth_set(model, pair.extent).bits
            intent = truth_set(model, pair.intent).bits
            assert (ext, intent) in concepts


class TestTransform:
    def test_pc_to_oc_shape(self):
        pair = generate_pair(P, ConceptKind.PC)
        image = transform_pair(pair, TransformDirection.PC_OF_K_TO_OC_OF_KC)
        assert image == LogicalConceptPair(
            Neg(box_inv(dia(P))), Neg(dia(P)), ConceptKind.OC
        )

    def test_fc_to_pc_shape(self):
        pair = generate_pair(P, ConceptKind.FC)
        image = transform_pair(pair, TransformDirection.FC_OF_K_TO_PC_OF_KC)
        assert image == LogicalConceptPair(
            box_inv(Neg(box(Neg(P)))), Neg(box(Neg(P))), ConceptKind.PC
        )

    def test_fc_to_oc_shape(self):
        pair = generate_pair(P, ConceptKind.FC)
        image = transform_pair(pair, TransformDirection.FC_OF_K_TO_OC_OF_KC)
        assert image.kind is ConceptKind.OC
        assert image.extent == Neg(box_inv(Neg(box(Neg(P)))))

    @pytest.mark.parametrize("direction", list(TransformDirection))
    def test_images_verified_on_frames(self, direction):
        rng = random.Random(81)
        source_kind = (
            ConceptKind.PC if direction.value.startswith("pc_of") else ConceptKind.FC
        )
        for _ in range(10):
            ctx = oracles.random_context(rng, 4, 4)
            frame = context_to_frame(ctx)
            cframe = context_to_frame(complement_context(ctx))
            seed = rng.choice(SEEDS)
            pair = generate_pair(seed, source_kind)
            image = transform_pair(
                pair, direction, source_frame=frame, target_frame=cframe
            )
            assert member_pair(image, cframe)

    def test_wrong_source_kind(self):
        pair = generate_pair(P, ConceptKind.OC)
        with pytest.raises(SortMismatchError):
            transform_pair(pair, TransformDirection.PC_OF_K_TO_OC_OF_KC)

    def test_negation_round_trip_is_equivalence_preserving(self):
        # negating twice lands back in the original class of the original
        # context and is equivalent to the starting pair there
        rng = random.Random(83)
        for _ in range(8):
            ctx = oracles.random_context(rng, 4, 4)
            frame = context_to_frame(ctx)
            pair = generate_pair(rng.choice(SEEDS), ConceptKind.PC)
            image = transform_pair(pair, TransformDirection.PC_OF_K_TO_OC_OF_KC)
            back = LogicalConceptPair(
                Neg(image.extent), Neg(image.intent), ConceptKind.PC
            )
            assert member_pair(back, frame)
            assert equiv_pairs(pair, back, frame)

    def test_membership_transfers_in_both_directions(self):
        # the mapping is an iff: a non-member source yields a non-member image
        frame = context_to_frame(k0())
        cframe = context_to_frame(complement_context(k0()))
        bad = LogicalConceptPair(P, wbox(P), ConceptKind.FC)
        assert not member_pair(bad, frame)
        image = transform_pair(bad, TransformDirection.FC_OF_K_TO_PC_OF_KC)
        assert not member_pair(image, cframe)


class TestEquivalence:
    def test_reflexive(self):
        frame = context_to_frame(k0())
        a = generate_pair(P, ConceptKind.PC)
        assert equiv_pairs(a, a, frame)

    def test_idempotent_conjunction(self):
        frame = context_to_frame(k0())
        a = generate_pair(P, ConceptKind.PC)
        b = generate_pair(And(P, P), ConceptKind.PC)
        assert equiv_pairs(a, b, frame)

    def test_top_bottom_differ_on_k0(self):
        frame = context_to_frame(k0())
        top_pair = generate_pair(Top(SORT1), ConceptKind.PC)
        bot_pair = generate_pair(Bot(SORT1), ConceptKind.PC)
        assert not equiv_pairs(top_pair, bot_pair, frame)

    def test_symmetric_transitive_on_family(self):
        frame = context_to_frame(k0())
        family = seed_family(ConceptKind.FC)
        n = len(family)
        rel = [[equiv_pairs(family[i], family[j], frame) for j in range(n)] for i in range(n)]
        for i in range(n):
            assert rel[i][i]
            for j in range(n):
                assert rel[i][j] == rel[j][i]
                for k in range(n):
                    if rel[i][j] and rel[j][k]:
                        assert rel[i][k]

    def test_inconsistent_pair_raises(self):
        frame = context_to_frame(k0())
        good = generate_pair(P, ConceptKind.PC)
        # same extent, corrupted intent: extent-equivalent but not intent-equivalent
        bad = LogicalConceptPair(good.extent, Neg(good.intent), ConceptKind.PC)
        with pytest.raises(InternalConsistencyError):
            equiv_pairs(good, bad, frame)


class TestQuotientOps:
    def test_fc_meet_shape(self):
        a = generate_pair(P, ConceptKind.FC)
        b = generate_pair(Q, ConceptKind.FC)
        m = quotient_meet(a, b)
        want_ext = And(wbox_inv(wbox(P)), wbox_inv(wbox(Q)))
        assert m == LogicalConceptPair(want_ext, wbox(want_ext), ConceptKind.FC)

    def test_meet_idempotent_up_to_equiv(self):
        frame = context_to_frame(k0())
        for kind in ConceptKind:
            a = generate_pair(P, kind)
            assert equiv_pairs(quotient_meet(a, a), a, frame)
            assert equiv_pairs(quotient_join(a, a), a, frame)

    def test_pc_join_of_top_and_bottom_is_top(self):
        frame = context_to_frame(k0())
        top_pair = generate_pair(Top(SORT1), ConceptKind.PC)
        bot_pair = generate_pair(Bot(SORT1), ConceptKind.PC)
        joined = quotient_join(top_pair, bot_pair)
        assert member_pair(joined, frame)
        assert equiv_pairs(joined, top_pair, frame)

    def test_kind_mismatch(self):
        with pytest.raises(SortMismatchError):
            quotient_meet(
                generate_pair(P, ConceptKind.PC), generate_pair(P, ConceptKind.OC)
            )

    @pytest.mark.parametrize("kind", list(ConceptKind))
    def test_ops_stay_in_class_randomized(self, kind):
        rng = random.Random(91)
        family = seed_family(kind)
        for _ in range(8):
            frame = context_to_frame(oracles.random_context(rng, 4, 4))
            for a in family:
                for b in family:
                    assert member_pair(quotient_meet(a, b), frame)
                    assert member_pair(quotient_join(a, b), frame)


class TestSideClosureProperties:
    def test_conjunction_closure_on_closure_sides(self):
        # PC and FC extents are conjunction-closed; so are OC intents
        rng = random.Random(95)
        for _ in range(10):
            frame = context_to_frame(oracles.random_context(rng, 4, 4))
            for kind, side in [
                (ConceptKind.PC, "PC_ext"),
                (ConceptKind.FC, "FC_ext"),
            ]:
                a = generate_pair(P, kind).extent
                b = generate_pair(Q, kind).extent
                assert member_class(And(a, b), side, frame)
            oa = generate_pair(P, ConceptKind.OC).intent
            ob = generate_pair(Q, ConceptKind.OC).intent
            assert member_class(And(oa, ob), "OC_int", frame)

    def test_oc_extents_closed_under_disjunction_not_conjunction(self):
        # kernel side: unions of object-oriented extents stay in the family,
        # intersections need not
        ctx = FormalContext.from_pairs(
            ("g1", "g2", "g3"),
            ("m1", "m2"),
            [("g1", "m1"), ("g2", "m1"), ("g2", "m2"), ("g3", "m2")],
        )
        frame = context_to_frame(ctx)
        a = generate_pair(P, ConceptKind.OC).extent
        b = generate_pair(Q, ConceptKind.OC).extent
        assert member_class(Or(a, b), "OC_ext", frame)
        assert not member_class(And(a, b), "OC_ext", frame)

    def test_pc_intents_closed_under_disjunction_not_conjunction(self):
        ctx = FormalContext.from_pairs(
            ("g1", "g2"),
            ("m1", "m2", "m3"),
            [("g1", "m1"), ("g1", "m2"), ("g2", "m2"), ("g2", "m3")],
        )
        frame = context_to_frame(ctx)
        a = generate_pair(P, ConceptKind.PC).intent
        b = generate_pair(Q, ConceptKind.PC).intent
        assert member_class(Or(a, b), "PC_int", frame)
        assert not member_class(And(a, b), "PC_int", frame)

    def test_modal_transfer(self):
        rng = random.Random(97)
        builders = {
            ConceptKind.PC: (dia, "PC_int"),
            ConceptKind.OC: (box, "OC_int"),
            ConceptKind.FC: (wbox, "FC_int"),
        }
        for _ in range(8):
            frame = context_to_frame(oracles.random_context(rng, 4, 4))
            for kind, (fwd, side) in builders.items():
                ext = generate_pair(And(P, Q), kind).extent
                assert member_class(fwd(ext), side, frame)


class TestVerifyQuotientLattice:
    @pytest.mark.parametrize("kind", list(ConceptKind))
    def test_seed_family_on_k0(self, kind):
        frame = context_to_frame(k0())
        report = verify_quotient_lattice(seed_family(kind), kind, frame)
        assert report.passed, report.failures()

    def test_singleton_family(self):
        frame = context_to_frame(k0())
        report = verify_quotient_lattice(
            [generate_pair(P, ConceptKind.FC)], ConceptKind.FC, frame
        )
        assert report.passed

    def test_corrupted_pair_detected(self):
        frame = context_to_frame(k0())
        family = seed_family(ConceptKind.PC)
        family.append(LogicalConceptPair(P, dia(P), ConceptKind.PC))
        report = verify_quotient_lattice(family, ConceptKind.PC, frame)
        assert not report.passed
        assert any("membership" in c.name for c in report.failures())

    def test_randomized_contexts(self):
        rng = random.Random(101)
        for _ in range(6):
            ctx = oracles.random_context(rng, 4, 4)
            frame = context_to_frame(ctx)
            for kind in ConceptKind:
                report = verify_quotient_lattice(seed_family(kind), kind, frame)
                assert report.passed, (ctx, kind, report.failures())


class TestVerifyIsomorphisms:
    def test_k0(self):
        report = verify_isomorphisms(seed_family(ConceptKind.FC), k0())
        assert report.passed, report.failures()

    def test_identity_seeds_trivial(self):
        report = verify_isomorphisms(
            [generate_pair(P, ConceptKind.FC), generate_pair(P, ConceptKind.FC)], k0()
        )
        assert report.passed

    def test_randomized_contexts(self):
        rng = random.Random(103)
        for _ in range(5):
            ctx = oracles.random_context(rng, 4, 4)
            report = verify_isomorphisms(seed_family(ConceptKind.FC), ctx)
            assert report.passed, (ctx, report.failures())

    def test_rejects_wrong_kind(self):
        report = verify_isomorphisms([generate_pair(P, ConceptKind.PC)], k0())
        assert not report.passed
