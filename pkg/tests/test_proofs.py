import json

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from omegamodal.frames import all_relations, common_knowledge_frame, relation_to_frame, strict_partial_orders
from omegamodal.formats import data_path
from omegamodal.proofs import (
    GAMMA,
    MHFORMULA,
    PS_QCKL,
    PS_QCKL_MINUS,
    PS_QGL,
    MP,
    Axiom,
    CheckedToBound,
    FullyChecked,
    Generalization,
    GeneratorRef,
    Necessitation,
    OmegaRule,
    Proof,
    ProofBuilder,
    ProofError,
    Rejected,
    Step,
    UniformSub,
    alpha_equal,
    alpha_normal,
    check_proof,
    dump_proof,
    generate_mhformula_proof,
    get_system,
    instantiate_axiom,
    is_tautology,
    load_proof,
    mhformula_premise,
    proof_formulas,
    proof_from_json,
    proof_to_json,
    soundness_spot_check,
)
from omegamodal.syntax import BOTTOM, Box, Implies, apply_substitution, atom, box_power, parse, substitution

from tests.strategies import formulas


def step(text, by, note=""):
    return Step(parse(text), by, note)


# -- tautologies


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p -> p", True),
        ("p | ~p", True),
        ("p -> q", False),
        ("[E]p -> [E]p", True),
        ("[E]p -> [C]p", False),
        ("(forall x. P(x)) -> (forall y. P(y))", True),
        ("P(x) -> P(y)", False),
        ("(p -> q) -> (q -> r) -> p -> r", True),
        ("T", True),
        ("F", False),
    ],
)
def test_is_tautology(text, expected):
    assert is_tautology(parse(text)) is expected


def test_tautology_letter_limit():
    big = parse(" & ".join(f"p{i}" for i in range(21)) + " -> p0")
    with pytest.raises(ProofError):
        is_tautology(big)


def test_alpha_equivalence():
    assert alpha_equal(parse("forall x. R(x, z)"), parse("forall y. R(y, z)"))
    assert not alpha_equal(parse("forall x. R(x, z)"), parse("forall z. R(z, z)"))
    assert alpha_normal(parse("forall x. forall y. R(x, y)")) == alpha_normal(parse("forall y. forall x. R(y, x)"))


# -- systems and axioms


def test_systems_by_name():
    assert get_system("PS_QGL") is PS_QGL
    assert get_system("PS_QCKL⁻") is PS_QCKL_MINUS is get_system("PS_QCKL-")
    with pytest.raises(ProofError):
        get_system("PS_K")


def test_barcan_only_in_full_system():
    assert "BF_C" in PS_QCKL.axioms and "BF_C" not in PS_QCKL_MINUS.axioms
    assert PS_QCKL.omega_rules["ck-omega"].max_prefix is None
    assert PS_QCKL_MINUS.omega_rules["ck-omega"].max_prefix == 0


def test_instantiate_indexed_family():
    got = instantiate_axiom(PS_QCKL_MINUS, "C_En", {"p": parse("Q(x)")}, index=2)
    assert got == parse("[C]Q(x) -> [E][E]Q(x)")
    assert instantiate_axiom(PS_QCKL_MINUS, "C_En", index=0) == parse("[C]p -> p")


def test_instantiate_plain_schemas():
    assert instantiate_axiom(PS_QGL, "4") == parse("[]p -> [][]p")
    got = instantiate_axiom(PS_QGL, "K", {"p": parse("T"), "q": parse("F")})
    assert got == parse("[](T -> F) -> ([]T -> []F)")


def test_instantiate_quantifier_schema_with_renaming():
    got = instantiate_axiom(PS_QGL, "forall_elim", {"phi": (["u"], "R(u, u)")}, variables={"x": "z", "y": "w"})
    assert got == parse("(forall z. R(z, z)) -> R(w, w)")


@pytest.mark.parametrize(
    "schema, index",
    [("nope", None), ("C_En", None), ("K_E", 3), ("C_En", -1), ("taut", None)],
)
def test_instantiate_errors(schema, index):
    with pytest.raises(ProofError):
        instantiate_axiom(PS_QCKL_MINUS, schema, index=index)


@settings(max_examples=100)
@given(formulas(max_leaves=5), formulas(max_leaves=5), st.sampled_from(["K_E", "K_C", "C_En"]), st.integers(0, 3))
def test_instantiation_commutes_with_substitution(a, b, schema, n):
    index = n if schema == "C_En" else None
    tau = substitution(p=a, q=b)
    after = apply_substitution(tau, instantiate_axiom(PS_QCKL, schema, index=index))
    assert alpha_equal(after, instantiate_axiom(PS_QCKL, schema, tau, index=index))
    # Composition: first p -> [E]q, then tau.
    sigma = substitution(p=Box("E", atom("q")))
    composed = substitution(p=Box("E", b), q=b)
    twice = apply_substitution(tau, instantiate_axiom(PS_QCKL, schema, sigma, index=index))
    assert alpha_equal(twice, instantiate_axiom(PS_QCKL, schema, composed, index=index))


# -- checking


def test_generalization_proof():
    proof = Proof([
        step("p -> p", Axiom("taut")),
        step("forall x. (p -> p)", Generalization(0, "x")),
        step("(forall x. (p -> p)) -> q -> (forall x. (p -> p))", Axiom("taut")),
        step("q -> (forall x. (p -> p))", MP(1, 2)),
    ])
    rep = check_proof(PS_QCKL_MINUS, proof)
    assert rep.status == FullyChecked() and rep.accepted
    assert rep.verdicts == ["tautology", "generalization over x on 0", "tautology", "MP 1, 2"]


def test_axiom_mismatch_rejected():
    proof = Proof([step("[C]p -> [E][E]p", Axiom("C_En", index=3))])
    rep = check_proof(PS_QCKL_MINUS, proof)
    assert isinstance(rep.status, Rejected) and rep.status.step == 0
    assert rep.status.reason.startswith("axiom-mismatch")
    assert check_proof(PS_QCKL_MINUS, Proof([step("[C]p -> [E][E][E]p", Axiom("C_En", index=3))])).accepted


@pytest.mark.parametrize(
    "steps, reason",
    [
        ([step("p -> q", Axiom("taut"))], "not-a-tautology"),
        ([step("[]p -> []p", Axiom("K"))], "unknown-schema"),
        ([step("p", MP(0, 1))], "bad-index"),
        ([step("p -> p", Axiom("taut")), step("q", MP(0, 0))], "mp-shape"),
        ([step("p -> p", Axiom("taut")), step("[X](p -> p)", Necessitation(0, "X"))], "unknown-modality"),
        ([step("p -> p", Axiom("taut")), step("[E](p -> q)", Necessitation(0, "E"))], "necessitation-shape"),
        ([step("p -> p", Axiom("taut")), step("forall y. (p -> q)", Generalization(0, "y"))], "generalization-shape"),
        ([step("p -> p", Axiom("taut")), step("q -> p", UniformSub(0, substitution(p="q")))], "substitution-mismatch"),
        ([step("p -> p", Axiom("taut", index=2))], "axiom-mismatch"),
    ],
)
def test_rejections(steps, reason):
    rep = check_proof(PS_QCKL_MINUS, Proof(steps))
    assert isinstance(rep.status, Rejected)
    assert rep.status.reason.startswith(reason), rep.status
    assert rep.status.step == len(steps) - 1


def test_uniform_substitution_step():
    proof = Proof([
        step("[C]p -> [E]p", Axiom("C_En", index=1)),
        step("[C]P(x) -> [E]P(x)", UniformSub(0, substitution(p="P(x)"))),
    ])
    assert check_proof(PS_QCKL_MINUS, proof).status == FullyChecked()


def test_empty_proof_and_bad_bound():
    assert isinstance(check_proof(PS_QGL, Proof([])).status, Rejected)
    with pytest.raises(ProofError):
        check_proof(PS_QGL, Proof([step("T", Axiom("taut"))]), omega_bound=0)


# -- omega rules


def _bottom_premises(n):
    # Every premise F -> E^n p is a tautology, listed as earlier steps.
    b = ProofBuilder()
    idx = [b.taut(Implies(BOTTOM, box_power("E", k, atom("p")))) for k in range(n + 1)]
    return b, idx


def test_steps_generator():
    b, idx = _bottom_premises(8)
    b.add(parse("F -> [C]p"), OmegaRule("ck-omega", GeneratorRef("steps", {"steps": idx}), {"gamma": "F", "phi": "p"}))
    proof = b.build()
    assert check_proof(PS_QCKL_MINUS, proof, 8).status == CheckedToBound(8)
    rep = check_proof(PS_QCKL_MINUS, proof, 9)
    assert isinstance(rep.status, Rejected) and rep.status.reason.startswith("generator-error")


def test_omega_rule_rejections():
    b, idx = _bottom_premises(3)
    gen = GeneratorRef("steps", {"steps": idx})
    cases = [
        (OmegaRule("gl-omega", gen, {"p": "F"}), "F -> F", "unknown-rule"),
        (OmegaRule("ck-omega", gen, {"gamma": "F", "phi": "p", "psi": "q"}), "F -> [C]p", "omega-instantiation"),
        (OmegaRule("ck-omega", gen, {"gamma": "F", "phi": "p"}), "F -> [C]q", "omega-conclusion-mismatch"),
        (OmegaRule("ck-omega", GeneratorRef("magic"), {"gamma": "F", "phi": "p"}), "F -> [C]p", "unknown-generator"),
        (OmegaRule("ck-omega", GeneratorRef("steps", {"steps": idx[::-1]}), {"gamma": "F", "phi": "p"}), "F -> [C]p",
         "omega-premise-mismatch"),
    ]
    for rule, text, reason in cases:
        proof = Proof(b.steps + [step(text, rule)])
        rep = check_proof(PS_QCKL_MINUS, proof, 3)
        assert isinstance(rep.status, Rejected) and rep.status.reason.startswith(reason), (reason, rep.status)


def test_prefix_context_only_in_full_system():
    b = ProofBuilder()
    idx = [b.taut(Implies(BOTTOM, Box("E", Implies(atom("q"), box_power("E", k, atom("p")))))) for k in range(5)]
    inst = {"gamma": "F", "phi": "p", "prefix": [("E", "q")]}
    b.add(parse("F -> [E](q -> [C]p)"), OmegaRule("ck-omega", GeneratorRef("steps", {"steps": idx}), inst))
    proof = b.build()
    assert check_proof(PS_QCKL, proof, 4).status == CheckedToBound(4)
    rep = check_proof(PS_QCKL_MINUS, proof, 4)
    assert isinstance(rep.status, Rejected) and rep.status.reason.startswith("omega-instantiation")


def test_gl_omega_rule_with_listed_premises():
    b = ProofBuilder()
    idx = [b.taut(Implies(BOTTOM, parse("<>" * k + "T"))) for k in range(4)]
    b.add(parse("F -> F"), OmegaRule("gl-omega", GeneratorRef("steps", {"steps": idx}), {"p": "F"}))
    assert check_proof(PS_QGL, b.build(), 3).status == CheckedToBound(3)


def test_files_generator(tmp_path):
    for n in range(5):
        dump_proof(mhformula_premise(n), tmp_path / f"premise_{n}.json")
    main = Proof([Step(Implies(GAMMA, Box("C", atom("p"))),
                       OmegaRule("ck-omega", GeneratorRef("files", {"pattern": "premise_{n}.json"}),
                                 {"gamma": GAMMA, "phi": atom("p")}))])
    dump_proof(main, tmp_path / "main.json")
    loaded = load_proof(tmp_path / "main.json")
    assert check_proof(PS_QCKL_MINUS, loaded, 4).status == CheckedToBound(4)
    rep = check_proof(PS_QCKL_MINUS, loaded, 5)
    assert isinstance(rep.status, Rejected) and "generator-error at n=5" in rep.status.reason


def test_files_generator_rejects_bad_sub_proof(tmp_path):
    bad = Proof([step("p", Axiom("taut"))])
    dump_proof(bad, tmp_path / "p0.json")
    main = Proof([step("F -> [C]p", OmegaRule("ck-omega", GeneratorRef("files", {"pattern": "p{n}.json"}),
                                              {"gamma": "F", "phi": "p"}))], base_dir=tmp_path)
    rep = check_proof(PS_QCKL_MINUS, main, 1)
    assert isinstance(rep.status, Rejected) and "sub-proof" in rep.status.reason


# -- the derivation of C(p -> Ep) -> (p -> Cp)


def test_premise_zero_is_the_base_case():
    p0 = mhformula_premise(0)
    assert len(p0) == 1 and p0.conclusion == Implies(GAMMA, atom("p"))
    assert check_proof(PS_QCKL_MINUS, p0).status == FullyChecked()


@pytest.mark.parametrize("n", [1, 2, 5])
def test_premises_prove_iterated_e(n):
    pn = mhformula_premise(n)
    assert pn.conclusion == Implies(GAMMA, box_power("E", n, atom("p")))
    assert check_proof(PS_QCKL_MINUS, pn).status == FullyChecked()
    # Each premise extends the previous one's reasoning.
    assert len(mhformula_premise(n + 1)) > len(pn)


@pytest.mark.parametrize("bound", [1, 2, 4, 8, 12, 16])
def test_mhformula_checked_to_bound(bound):
    proof = generate_mhformula_proof()
    assert proof.conclusion == MHFORMULA
    assert check_proof(PS_QCKL_MINUS, proof, bound).status == CheckedToBound(bound)


def test_mhformula_not_a_gl_proof():
    rep = check_proof(PS_QGL, generate_mhformula_proof())
    assert isinstance(rep.status, Rejected) and rep.status.reason.startswith("unknown-rule")


def test_bundled_proof_matches_generator():
    loaded = load_proof(data_path("mhformula_proof.json"))
    assert loaded == generate_mhformula_proof()
    assert check_proof("PS_QCKL⁻", loaded).status == CheckedToBound(8)


def test_json_round_trip():
    for proof in (generate_mhformula_proof(), mhformula_premise(3)):
        doc = json.loads(json.dumps(proof_to_json(proof)))
        assert proof_from_json(doc) == proof


def test_json_round_trip_covers_every_rule():
    proof = Proof([
        step("(forall x. P(x)) -> P(y)", Axiom("forall_elim", substitution(phi=(["u"], "P(u)")), None, {"x": "x"})),
        step("(forall x. Q(x)) -> Q(y)", UniformSub(0, substitution(P=(["u"], "Q(u)")))),
        step("[E]((forall x. Q(x)) -> Q(y))", Necessitation(1, "E")),
        step("forall y. [E]((forall x. Q(x)) -> Q(y))", Generalization(2, "y")),
    ], "PS_QCKL-")
    assert check_proof(PS_QCKL_MINUS, proof).status == FullyChecked()
    assert proof_from_json(proof_to_json(proof)) == proof


@pytest.mark.parametrize("doc", [{}, {"steps": [{"formula": "p"}]}, {"steps": [{"formula": "p", "by": {"rule": "x"}}]}])
def test_json_rejects_malformed(doc):
    with pytest.raises(ProofError):
        proof_from_json(doc)


def test_proof_formulas_include_sub_proofs():
    proof = generate_mhformula_proof()
    assert len(proof_formulas(proof)) == 3
    assert len(proof_formulas(proof, 2)) > 3


# -- soundness


def test_mhformula_sound_on_small_common_knowledge_frames():
    frames = [common_knowledge_frame(n, rel) for n in (1, 2) for rel in all_relations(n)]
    rep = soundness_spot_check(generate_mhformula_proof(), frames, max_domain=1, omega_bound=4)
    assert rep.ok and rep.checked > 0


def test_gl_axiom_sound_on_gl_frames():
    frames = [relation_to_frame({"box": rel}, n) for n in (1, 2, 3) for rel in strict_partial_orders(n)]
    assert soundness_spot_check([parse("[]p -> [][]p"), parse("[](p -> q) -> []p -> []q")], frames).ok


def test_soundness_spot_check_reports_violations():
    frames = [relation_to_frame({"box": [(0, 0)]}, 1)]
    rep = soundness_spot_check([parse("[]p -> p"), parse("[]F")], frames)
    assert [f for _, f, _ in rep.violations] == [parse("[]F")]
