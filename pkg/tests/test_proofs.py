"""Tests for the proof kernel: tautologies, axiom matching, checking, translation."""

import random
from pathlib import Path

import pytest

from conceptlogic.errors import BudgetExceededError, ProofScriptError
from conceptlogic.proofs import (
    AxiomRef,
    MPRef,
    PremiseRef,
    ProofLine,
    ProofScript,
    UGRef,
    check_proof,
    delete_line,
    establishes,
    get_system,
    is_tautology,
    match_axiom,
    parse_proof_script,
    serialize_proof_script,
    soundness_probe,
    system_KB2,
    system_KF,
    translate_proof,
)
from conceptlogic.semantics import context_to_frame, frame_valid
from conceptlogic.syntax import (
    KF,
    SORT1,
    And,
    Bot,
    Iff,
    Imp,
    Neg,
    Or,
    Var,
    box,
    dia,
    dia_inv,
    normalize,
    substitute,
    translate_rho,
    var1,
    var2,
    wbox,
    wbox_inv,
)

import oracles
from test_syntax import random_formula

DATA = Path(__file__).parent / "data" / "proofs"

P, Q, R = var1("p"), var1("q"), var1("r")
X, Y = var2("x"), var2("y")


def load(name):
    return parse_proof_script((DATA / name).read_text())


class TestTautology:
    def test_identity(self):
        assert is_tautology(Imp(P, P))

    def test_excluded_middle_with_window_atom(self):
        assert is_tautology(Or(wbox(P), Neg(wbox(P))))

    def test_non_tautology(self):
        assert not is_tautology(Imp(P, Q))
        assert not is_tautology(P)

    def test_modal_atoms_are_opaque(self):
        # box p -> box p is a tautology, box (p -> p) alone is not
        assert is_tautology(Imp(box(P), box(P)))
        assert not is_tautology(box(Imp(P, P)))

    def test_bot_and_top(self):
        assert is_tautology(Neg(Bot(SORT1)))
        assert is_tautology(Imp(Bot(SORT1), P))

    def test_atom_budget(self):
        f = Bot(SORT1)
        for i in range(30):
            f = Or(f, Var(f"v{i}", SORT1))
        with pytest.raises(BudgetExceededError):
            is_tautology(f)


class TestMatchAxiom:
    def test_b1_window_instance(self):
        kf = system_KF()
        got = match_axiom(Imp(P, wbox_inv(wbox(P))), kf)
        assert got is not None and got[0] == "B1"
        assert got[1] == {Var("ph1", SORT1): P}

    def test_b2_diamond_instance(self):
        kb2 = system_KB2()
        got = match_axiom(Imp(X, box(dia_inv(X))), kb2)
        assert got is not None and got[0] == "B2"

    def test_dual_instance(self):
        kb2 = system_KB2()
        got = match_axiom(Iff(dia(P), Neg(box(Neg(P)))), kb2)
        assert got is not None and got[0] == "Dual_dia"

    def test_pl_has_priority(self):
        kb2 = system_KB2()
        got = match_axiom(Imp(P, P), kb2)
        assert got == ("PL", {})

    def test_no_match(self):
        kb2 = system_KB2()
        assert match_axiom(Imp(P, Q), kb2) is None

    def test_inconsistent_binding_rejected(self):
        kf = system_KF()
        # p -> boxm- boxm q is not a B1 instance (metavariable mismatch)
        assert match_axiom(Imp(P, wbox_inv(wbox(Q))), kf) is None

    def test_k_axiom_instance(self):
        kb2 = system_KB2()
        f = Imp(box(Imp(P, Q)), Imp(box(P), box(Q)))
        got = match_axiom(f, kb2)
        assert got is not None and got[0] == "K_dia"


class TestCorpusProofs:
    @pytest.mark.parametrize(
        "name",
        ["antitone_kb2.prf", "kf_b1.prf", "kf_b2.prf", "kf_ug.prf", "kf_k1_mp.prf", "kf_k2.prf"],
    )
    def test_accepted(self, name):
        script = load(name)
        verdict = script.check()
        assert verdict.accepted, (verdict.line, verdict.reason)

    def test_antitone_conclusion(self):
        script = load("antitone_kb2.prf")
        assert script.lines[-1].formula == Imp(box(Neg(Q)), box(Neg(P)))

    def test_single_citation_off_by_one_rejected(self):
        script = load("antitone_kb2.prf")
        lines = list(script.lines)
        lines[2] = ProofLine(3, lines[2].formula, MPRef(2, 2))
        verdict = check_proof(lines, script.premises, script.system())
        assert not verdict.accepted and verdict.line == 3

    def test_round_trip_serialization(self):
        for name in ["antitone_kb2.prf", "kf_k1_mp.prf"]:
            script = load(name)
            again = parse_proof_script(serialize_proof_script(script))
            assert again.system_id == script.system_id
            assert again.premises == script.premises
            assert again.lines == script.lines


class TestCheckProof:
    def test_empty_script(self):
        assert not check_proof([], [], system_KB2()).accepted

    def test_premise_formula_must_match(self):
        kb2 = system_KB2()
        lines = [ProofLine(1, P, PremiseRef(1))]
        assert check_proof(lines, [P], kb2).accepted
        assert not check_proof(lines, [Q], kb2).accepted
        assert not check_proof(lines, [], kb2).accepted

    def test_mp_requires_exact_shape(self):
        kb2 = system_KB2()
        lines = [
            ProofLine(1, P, PremiseRef(1)),
            ProofLine(2, Imp(P, Q), PremiseRef(2)),
            ProofLine(3, Q, MPRef(1, 2)),
        ]
        assert check_proof(lines, [P, Imp(P, Q)], kb2).accepted
        swapped = [lines[0], lines[1], ProofLine(3, Q, MPRef(2, 1))]
        assert not check_proof(swapped, [P, Imp(P, Q)], kb2).accepted

    def test_mp_accepts_defined_connective_spelling(self):
        # the implication premise may be spelled in its negative normal form
        kb2 = system_KB2()
        as_neg = Neg(And(P, Neg(Q)))
        lines = [
            ProofLine(1, P, PremiseRef(1)),
            ProofLine(2, as_neg, PremiseRef(2)),
            ProofLine(3, Q, MPRef(1, 2)),
        ]
        assert check_proof(lines, [P, as_neg], kb2).accepted

    def test_standard_ug_inserts_argument(self):
        kb2 = system_KB2()
        lines = [
            ProofLine(1, Imp(P, P), AxiomRef("PL")),
            ProofLine(2, box(Imp(P, P)), UGRef("dia", 1)),
        ]
        assert check_proof(lines, [], kb2).accepted
        bad = [lines[0], ProofLine(2, box(Imp(P, Q)), UGRef("dia", 1))]
        assert not check_proof(bad, [], kb2).accepted

    def test_window_ug_needs_negated_source(self):
        kf = system_KF()
        lines = [
            ProofLine(1, Neg(And(P, Neg(P))), AxiomRef("PL")),
            ProofLine(2, wbox(And(P, Neg(P))), UGRef("boxm", 1)),
        ]
        assert check_proof(lines, [], kf).accepted
        bad = [
            ProofLine(1, Imp(P, P), AxiomRef("PL")),
            ProofLine(2, wbox(Imp(P, P)), UGRef("boxm", 1)),
        ]
        assert not check_proof(bad, [], kf).accepted

    def test_named_axiom_with_substitution_verified(self):
        kf = system_KF()
        inst = Imp(And(P, Q), wbox_inv(wbox(And(P, Q))))
        good = [ProofLine(1, inst, AxiomRef("B1", (("ph1", And(P, Q)),)))]
        assert check_proof(good, [], kf).accepted
        bad = [ProofLine(1, inst, AxiomRef("B1", (("ph1", P),)))]
        assert not check_proof(bad, [], kf).accepted

    def test_unknown_scheme_name(self):
        kf = system_KF()
        lines = [ProofLine(1, Imp(P, P), AxiomRef("K_dia"))]
        verdict = check_proof(lines, [], kf)
        assert not verdict.accepted and "no scheme" in verdict.reason

    def test_line_numbering_enforced(self):
        kb2 = system_KB2()
        lines = [ProofLine(2, Imp(P, P), AxiomRef("PL"))]
        assert not check_proof(lines, [], kb2).accepted

    def test_deleting_unused_line_preserves_acceptance(self):
        script = load("antitone_kb2.prf")
        padded = list(script.lines[:3])
        padded.append(ProofLine(4, Imp(Q, Q), AxiomRef("PL")))  # unused
        for line in script.lines[3:]:
            j = line.justification
            if isinstance(j, MPRef):
                j = MPRef(
                    j.antecedent + (1 if j.antecedent >= 4 else 0),
                    j.implication + (1 if j.implication >= 4 else 0),
                )
            elif isinstance(j, UGRef):
                j = UGRef(j.modality, j.source + (1 if j.source >= 4 else 0), j.position)
            padded.append(ProofLine(line.index + 1, line.formula, j))
        kb2 = script.system()
        assert check_proof(padded, script.premises, kb2).accepted
        trimmed = delete_line(padded, 4)
        assert trimmed == list(script.lines)
        assert check_proof(trimmed, script.premises, kb2).accepted

    def test_delete_cited_line_refused(self):
        script = load("antitone_kb2.prf")
        with pytest.raises(ProofScriptError):
            delete_line(script.lines, 1)


class TestEstablishes:
    def test_premise_style(self):
        script = load("antitone_kb2.prf")
        target = Imp(box(Neg(Q)), box(Neg(P)))
        assert establishes(script.lines, script.premises, target, script.system())

    def test_conjunction_implication_style(self):
        kb2 = system_KB2()
        lines = [ProofLine(1, Imp(And(P, Q), P), AxiomRef("PL"))]
        assert establishes(lines, [P, Q], P, kb2)
        assert not establishes(lines, [Q], P, kb2)


class TestSoundness:
    def frames(self, count=6, seed=5):
        rng = random.Random(seed)
        return [
            context_to_frame(oracles.random_context(rng, 4, 4)) for _ in range(count)
        ]

    def test_corpus_conclusions_sound(self):
        for name in ["kf_b1.prf", "kf_b2.prf", "kf_ug.prf"]:
            script = load(name)
            assert soundness_probe(
                script.system(), script.lines, script.premises, self.frames()
            )

    def test_antitone_sound_with_premises(self):
        script = load("antitone_kb2.prf")
        assert soundness_probe(
            script.system(), script.lines, script.premises, self.frames()
        )

    def test_axiom_instances_frame_valid(self):
        rng = random.Random(17)
        frames = self.frames(4, seed=18)
        for system in (system_KB2(), system_KF()):
            sig = system.sig
            for scheme in system.schemes:
                if scheme.pattern is None:
                    continue
                for _ in range(5):
                    from conceptlogic.syntax import variables

                    mapping = {
                        mv: random_formula(rng, mv.sort, 2, sig=sig, n_vars=2)
                        for mv in variables(scheme.pattern)
                    }
                    inst = substitute(scheme.pattern, mapping)
                    for frame in frames:
                        assert frame_valid(frame, inst), (scheme.name, inst)


class TestTranslation:
    @pytest.mark.parametrize(
        "name", ["kf_b1.prf", "kf_b2.prf", "kf_ug.prf", "kf_k1_mp.prf", "kf_k2.prf"]
    )
    def test_translated_scripts_accepted(self, name):
        script = load(name)
        image = translate_proof(script)
        assert image.system_id == "KB2"
        verdict = image.check()
        assert verdict.accepted, (name, verdict.line, verdict.reason)
        want = normalize(translate_rho(script.lines[-1].formula))
        assert normalize(image.lines[-1].formula) == want
        assert image.premises == [translate_rho(p) for p in script.premises]

    def test_axiom_images_are_kb2_theorems(self):
        # every window axiom scheme, randomly instantiated, single-line script
        rng = random.Random(23)
        kf = system_KF()
        from conceptlogic.syntax import variables

        for scheme in kf.schemes:
            if scheme.pattern is None:
                continue
            for _ in range(6):
                mapping = {
                    mv: random_formula(rng, mv.sort, 2, sig=KF, n_vars=2)
                    for mv in variables(scheme.pattern)
                }
                inst = substitute(scheme.pattern, mapping)
                script = ProofScript(
                    "KF", [], [ProofLine(1, inst, AxiomRef(scheme.name))]
                )
                image = translate_proof(script)
                assert image.check().accepted, scheme.name

    def test_rejects_non_window_scripts(self):
        script = load("antitone_kb2.prf")
        with pytest.raises(ProofScriptError):
            translate_proof(script)


class TestScriptParsing:
    def test_parse_errors_carry_line(self):
        with pytest.raises(ProofScriptError) as exc:
            parse_proof_script("system: KB2\n1 | p:1 -> | mp 1 2\n")
        assert exc.value.line == 2
        with pytest.raises(ProofScriptError):
            parse_proof_script("1 | p:1 | nonsense 1\n")
        with pytest.raises(ProofScriptError):
            parse_proof_script("system: NOPE\n")

    def test_system_header_must_lead(self):
        with pytest.raises(ProofScriptError):
            parse_proof_script("premise: p:1\nsystem: KF\n")

    def test_generic_system_k(self):
        sys_k = get_system("K")
        assert sys_k.id == "K"
        got = match_axiom(Iff(dia(P), Neg(box(Neg(P)))), sys_k)
        assert got is not None and got[0] == "Dual_dia"
