"""Hilbert-style proof systems with omega-rules, and a bounded proof checker.

A proof is a list of steps, each a formula with its justification.  Steps
are indexed from 0 and may only cite earlier steps.  An omega-rule step
has infinitely many premises; it names a premise generator that, given
``n``, yields either an earlier step index or a sub-proof of the ``n``-th
premise.  The checker can only run the generator for ``n = 0..bound``, so a
proof containing an omega-rule step is at best ``CheckedToBound(bound)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence, Union

from .syntax import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Bottom,
    Box,
    Formula,
    Forall,
    Implies,
    Not,
    Replacement,
    SubstitutionError,
    Top,
    apply_substitution,
    atom,
    box_power,
    diamond_power,
    parse,
    substitute_var,
    substitution,
    to_text,
)


class ProofError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Propositional tautologies


def alpha_normal(f: Formula) -> Formula:
    """Rename bound variables to ``#0, #1, ...`` by binding depth.

    Two formulas are equal up to renaming of bound variables iff their
    normal forms are equal.  ``#`` never occurs in parsed names.
    """

    def go(g: Formula, env: dict[str, str], level: int) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(env.get(a, a) for a in g.args))
        if isinstance(g, And):
            return And(go(g.left, env, level), go(g.right, env, level))
        if isinstance(g, Not):
            return Not(go(g.body, env, level))
        if isinstance(g, Box):
            return Box(g.modality, go(g.body, env, level))
        if isinstance(g, Forall):
            name = f"#{level}"
            return Forall(name, go(g.body, {**env, g.var: name}, level + 1))
        return g

    return go(f, {}, 0)


def alpha_equal(a: Formula, b: Formula) -> bool:
    return a == b or alpha_normal(a) == alpha_normal(b)


def propositional_skeleton(f: Formula) -> tuple[list[Formula], Callable[[dict[Formula, int], int], int]]:
    """Split ``f`` into its maximal non-Boolean subformulas and a Boolean evaluator."""
    letters: dict[Formula, None] = {}

    def collect(g: Formula):
        if isinstance(g, And):
            collect(g.left)
            collect(g.right)
        elif isinstance(g, Not):
            collect(g.body)
        elif not isinstance(g, (Top, Bottom)):
            letters.setdefault(alpha_normal(g))

    collect(f)

    def evaluate(values: dict[Formula, int], full: int) -> int:
        def ev(g: Formula) -> int:
            if isinstance(g, And):
                return ev(g.left) & ev(g.right)
            if isinstance(g, Not):
                return full & ~ev(g.body)
            if isinstance(g, Top):
                return full
            if isinstance(g, Bottom):
                return 0
            return values[alpha_normal(g)]

        return ev(f)

    return list(letters), evaluate


MAX_TAUTOLOGY_LETTERS = 20


def is_tautology(f: Formula) -> bool:
    """Truth-table check treating atoms, boxes and quantified subformulas as letters."""
    letters, evaluate = propositional_skeleton(f)
    k = len(letters)
    if k > MAX_TAUTOLOGY_LETTERS:
        raise ProofError(f"tautology check over {k} letters is too large")
    rows = 1 << k
    full = (1 << rows) - 1
    # Column j of the truth table, packed as a bitmask over all rows.
    values = {}
    for j, letter in enumerate(letters):
        col = 0
        for r in range(rows):
            if r >> j & 1:
                col |= 1 << r
        values[letter] = col
    return evaluate(values, full) == full


# ---------------------------------------------------------------------------
# Proof systems


@dataclass(frozen=True)
class AxiomSchema:
    """A template over schematic predicates, or an indexed family of them."""

    id: str
    template: Formula | Callable[[int], Formula] | None
    indexed: bool = False
    description: str = ""

    def instance(self, index: int | None = None) -> Formula:
        if self.template is None:
            raise ProofError(f"schema {self.id!r} has no template")
        if self.indexed:
            if index is None:
                raise ProofError(f"schema {self.id!r} needs an index")
            if index < 0:
                raise ProofError(f"schema {self.id!r}: negative index {index}")
            return self.template(index)
        if index is not None:
            raise ProofError(f"schema {self.id!r} takes no index")
        return self.template


Instantiation = Mapping[str, object]


@dataclass(frozen=True)
class OmegaRuleDescriptor:
    """``premise(n, inst)`` for every ``n`` yields ``conclusion(inst)``.

    ``parameters`` names the formula slots of an instantiation;
    ``max_prefix`` bounds the length of the boxed context (``None`` for any).
    ``paired_axiom`` names the schema ``alpha -> beta_n`` the rule inverts.
    """

    id: str
    parameters: tuple[str, ...]
    premise: Callable[[int, Instantiation], Formula]
    conclusion: Callable[[Instantiation], Formula]
    max_prefix: int | None = 0
    paired_axiom: str | None = None


@dataclass(frozen=True)
class ProofSystem:
    name: str
    modalities: tuple[str, ...]
    axioms: Mapping[str, AxiomSchema]
    omega_rules: Mapping[str, OmegaRuleDescriptor]


P, Q = atom("p"), atom("q")
PHI_X = atom("phi", "x")
PHI_Y = atom("phi", "y")


def _k_axiom(m: str) -> Formula:
    return Implies(Box(m, Implies(P, Q)), Implies(Box(m, P), Box(m, Q)))


def _barcan(m: str) -> Formula:
    return Implies(Forall("x", Box(m, PHI_X)), Box(m, Forall("x", PHI_X)))


_TAUT = AxiomSchema("taut", None, description="classical tautology, checked by truth table")
_FORALL_ELIM = AxiomSchema("forall_elim", Implies(Forall("x", PHI_X), PHI_Y))
_FORALL_DIST = AxiomSchema("forall_dist", Implies(Forall("x", Implies(P, PHI_X)), Implies(P, Forall("x", PHI_X))))
_PREDICATE = {s.id: s for s in (_TAUT, _FORALL_ELIM, _FORALL_DIST)}


def _prefix(inst: Instantiation) -> list[tuple[str, Formula]]:
    return [(m, _as_formula(f)) for m, f in inst.get("prefix", ()) or ()]


def _in_context(prefix: Sequence[tuple[str, Formula]], core: Formula) -> Formula:
    out = core
    for m, f in reversed(prefix):
        out = Box(m, Implies(f, out))
    return out


def _as_formula(value) -> Formula:
    return parse(value) if isinstance(value, str) else value


def _slot(inst: Instantiation, name: str) -> Formula:
    try:
        return _as_formula(inst[name])
    except KeyError:
        raise ProofError(f"instantiation is missing {name!r}") from None


def _gl_rule() -> OmegaRuleDescriptor:
    return OmegaRuleDescriptor(
        "gl-omega",
        ("p",),
        lambda n, inst: Implies(_slot(inst, "p"), diamond_power("box", n, TOP)),
        lambda inst: Implies(_slot(inst, "p"), BOTTOM),
        max_prefix=0,
    )


def _ck_rule(max_prefix: int | None) -> OmegaRuleDescriptor:
    def premise(n, inst):
        return Implies(_slot(inst, "gamma"), _in_context(_prefix(inst), box_power("E", n, _slot(inst, "phi"))))

    def conclusion(inst):
        return Implies(_slot(inst, "gamma"), _in_context(_prefix(inst), Box("C", _slot(inst, "phi"))))

    return OmegaRuleDescriptor("ck-omega", ("gamma", "phi", "prefix"), premise, conclusion, max_prefix, "C_En")


def _ckl_axioms(barcan: bool) -> dict[str, AxiomSchema]:
    out = dict(_PREDICATE)
    out["K_E"] = AxiomSchema("K_E", _k_axiom("E"))
    out["K_C"] = AxiomSchema("K_C", _k_axiom("C"))
    out["C_En"] = AxiomSchema("C_En", lambda n: Implies(Box("C", P), box_power("E", n, P)), indexed=True)
    if barcan:
        out["BF_E"] = AxiomSchema("BF_E", _barcan("E"))
        out["BF_C"] = AxiomSchema("BF_C", _barcan("C"))
    return out


PS_QGL = ProofSystem(
    "PS_QGL",
    ("box",),
    {**_PREDICATE, "K": AxiomSchema("K", _k_axiom("box")),
     "4": AxiomSchema("4", Implies(Box("box", P), Box("box", Box("box", P))))},
    {"gl-omega": _gl_rule()},
)
PS_QCKL = ProofSystem("PS_QCKL", ("E", "C"), _ckl_axioms(barcan=True), {"ck-omega": _ck_rule(None)})
PS_QCKL_MINUS = ProofSystem("PS_QCKL-", ("E", "C"), _ckl_axioms(barcan=False), {"ck-omega": _ck_rule(0)})

SYSTEMS = {s.name: s for s in (PS_QGL, PS_QCKL, PS_QCKL_MINUS)}
SYSTEMS["PS_QCKL⁻"] = PS_QCKL_MINUS


def get_system(name: str) -> ProofSystem:
    try:
        return SYSTEMS[name]
    except KeyError:
        raise ProofError(f"unknown proof system {name!r}; known: {sorted(set(SYSTEMS) - {'PS_QCKL⁻'})}") from None


def instantiate_axiom(
    system: ProofSystem,
    schema: str,
    subst=None,
    index: int | None = None,
    variables: Mapping[str, str] | None = None,
) -> Formula:
    """The instance of ``schema`` under a uniform substitution.

    ``variables`` renames the template's own variables (``x``, ``y`` in the
    quantifier schemata) before substituting.
    """
    try:
        ax = system.axioms[schema]
    except KeyError:
        raise ProofError(f"{system.name} has no axiom schema {schema!r}") from None
    f = ax.instance(index)
    for old, new in (variables or {}).items():
        f = _rename_template_var(f, old, new)
    return apply_substitution(subst or {}, f)


def _rename_template_var(f: Formula, old: str, new: str) -> Formula:
    if isinstance(f, Forall) and f.var == old:
        return Forall(new, substitute_var(f.body, old, new))
    if isinstance(f, Forall):
        return Forall(f.var, _rename_template_var(f.body, old, new))
    if isinstance(f, And):
        return And(_rename_template_var(f.left, old, new), _rename_template_var(f.right, old, new))
    if isinstance(f, Not):
        return Not(_rename_template_var(f.body, old, new))
    if isinstance(f, Box):
        return Box(f.modality, _rename_template_var(f.body, old, new))
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(new if a == old else a for a in f.args))
    return f


# ---------------------------------------------------------------------------
# Proofs


@dataclass(frozen=True)
class Axiom:
    schema: str
    subst: Mapping[str, Replacement] = field(default_factory=dict)
    index: int | None = None
    variables: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class MP:
    """From step ``premise`` (``A``) and step ``implication`` (``A -> B``) infer ``B``."""

    premise: int
    implication: int


@dataclass(frozen=True)
class UniformSub:
    source: int
    subst: Mapping[str, Replacement]


@dataclass(frozen=True)
class Necessitation:
    source: int
    modality: str


@dataclass(frozen=True)
class Generalization:
    source: int
    var: str


@dataclass(frozen=True)
class GeneratorRef:
    name: str
    params: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class OmegaRule:
    rule: str
    generator: GeneratorRef
    instantiation: Mapping[str, object]


Justification = Union[Axiom, MP, UniformSub, Necessitation, Generalization, OmegaRule]


@dataclass(frozen=True)
class Step:
    formula: Formula
    by: Justification
    note: str = ""


@dataclass
class Proof:
    steps: list[Step]
    system: str | None = None
    base_dir: Path | None = field(default=None, compare=False)

    @property
    def conclusion(self) -> Formula:
        if not self.steps:
            raise ProofError("empty proof")
        return self.steps[-1].formula

    def __len__(self) -> int:
        return len(self.steps)


class ProofBuilder:
    """Appends steps and returns their indices."""

    def __init__(self):
        self.steps: list[Step] = []

    def add(self, formula: Formula, by: Justification, note: str = "") -> int:
        self.steps.append(Step(formula, by, note))
        return len(self.steps) - 1

    def formula(self, i: int) -> Formula:
        return self.steps[i].formula

    def taut(self, formula: Formula, note: str = "") -> int:
        return self.add(formula, Axiom("taut"), note)

    def mp(self, premise: int, implication: int, note: str = "") -> int:
        imp = self.formula(implication)
        if not (isinstance(imp, Not) and isinstance(imp.body, And) and isinstance(imp.body.right, Not)):
            raise ProofError(f"step {implication} is not an implication")
        return self.add(imp.body.right.body, MP(premise, implication), note)

    def build(self, system: str | None = None) -> Proof:
        return Proof(list(self.steps), system)


# ---------------------------------------------------------------------------
# Premise generators

GeneratorFn = Callable[[int, Mapping[str, object], "Proof"], Union[int, Proof]]
GENERATORS: dict[str, GeneratorFn] = {}


def register_generator(name: str):
    def deco(fn: GeneratorFn) -> GeneratorFn:
        GENERATORS[name] = fn
        return fn

    return deco


@register_generator("steps")
def _steps_generator(n, params, parent):
    """``params["steps"][n]`` is the index of an earlier step proving premise ``n``."""
    steps = params.get("steps", [])
    if n >= len(steps):
        raise ProofError(f"generator 'steps' lists only {len(steps)} premises")
    return int(steps[n])


@register_generator("files")
def _files_generator(n, params, parent):
    """``params["pattern"]`` such as ``"premise_{n}.json"``, relative to the proof file."""
    pattern = params.get("pattern")
    if not pattern:
        raise ProofError("generator 'files' needs a 'pattern'")
    path = Path(str(pattern).format(n=n))
    if not path.is_absolute() and parent.base_dir is not None:
        path = parent.base_dir / path
    return load_proof(path)


# ---------------------------------------------------------------------------
# Checking


@dataclass(frozen=True)
class FullyChecked:
    def __str__(self) -> str:
        return "FullyChecked"


@dataclass(frozen=True)
class CheckedToBound:
    bound: int

    def __str__(self) -> str:
        return f"CheckedToBound({self.bound})"


@dataclass(frozen=True)
class Rejected:
    step: int
    reason: str

    def __str__(self) -> str:
        return f"Rejected(step {self.step}: {self.reason})"


Status = Union[FullyChecked, CheckedToBound, Rejected]


@dataclass
class CheckReport:
    status: Status
    verdicts: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not isinstance(self.status, Rejected)


class _Reject(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _earlier(i: int, k: int) -> None:
    if not isinstance(i, int) or not 0 <= i < k:
        raise _Reject(f"bad-index: step {k} cites {i}, which is not an earlier step")


def _check_step(system: ProofSystem, proof: Proof, k: int, bound: int, depth: int) -> tuple[str, bool]:
    """Verify step ``k``; returns a verdict and whether an omega-rule was used."""
    step = proof.steps[k]
    f, by = step.formula, step.by
    prev = proof.steps
    if isinstance(by, Axiom):
        if by.schema == "taut":
            if by.subst or by.index is not None:
                raise _Reject("axiom-mismatch: tautologies take no substitution or index")
            if "taut" not in system.axioms or not is_tautology(f):
                raise _Reject("not-a-tautology")
            return "tautology", False
        try:
            expected = instantiate_axiom(system, by.schema, by.subst, by.index, by.variables)
        except SubstitutionError as e:
            raise _Reject(f"axiom-mismatch: {e}") from None
        except ProofError as e:
            reason = "unknown-schema" if "no axiom schema" in str(e) else "axiom-mismatch"
            raise _Reject(f"{reason}: {e}") from None
        if not alpha_equal(f, expected):
            raise _Reject(f"axiom-mismatch: expected {to_text(expected)}")
        return f"axiom {by.schema}" + ("" if by.index is None else f"[{by.index}]"), False
    if isinstance(by, MP):
        _earlier(by.premise, k)
        _earlier(by.implication, k)
        if not alpha_equal(prev[by.implication].formula, Implies(prev[by.premise].formula, f)):
            raise _Reject(f"mp-shape: step {by.implication} is not step {by.premise} -> this formula")
        return f"MP {by.premise}, {by.implication}", False
    if isinstance(by, UniformSub):
        _earlier(by.source, k)
        try:
            expected = apply_substitution(by.subst, prev[by.source].formula)
        except SubstitutionError as e:
            raise _Reject(f"substitution-mismatch: {e}") from None
        if not alpha_equal(f, expected):
            raise _Reject(f"substitution-mismatch: expected {to_text(expected)}")
        return f"substitution on {by.source}", False
    if isinstance(by, Necessitation):
        _earlier(by.source, k)
        if by.modality not in system.modalities:
            raise _Reject(f"unknown-modality: {by.modality!r}")
        if not alpha_equal(f, Box(by.modality, prev[by.source].formula)):
            raise _Reject("necessitation-shape")
        return f"necessitation [{by.modality}] on {by.source}", False
    if isinstance(by, Generalization):
        _earlier(by.source, k)
        if not alpha_equal(f, Forall(by.var, prev[by.source].formula)):
            raise _Reject("generalization-shape")
        return f"generalization over {by.var} on {by.source}", False
    if isinstance(by, OmegaRule):
        _check_omega(system, proof, k, by, bound, depth)
        return f"omega-rule {by.rule} checked for n = 0..{bound}", True
    raise _Reject(f"unknown justification {type(by).__name__}")


MAX_NESTING = 8


def _check_omega(system, proof, k, by: OmegaRule, bound, depth):
    rule = system.omega_rules.get(by.rule)
    if rule is None:
        raise _Reject(f"unknown-rule: {system.name} has no omega-rule {by.rule!r}")
    inst = dict(by.instantiation)
    extra = set(inst) - set(rule.parameters)
    if extra:
        raise _Reject(f"omega-instantiation: unexpected slots {sorted(extra)}")
    if rule.max_prefix is not None and len(inst.get("prefix", ()) or ()) > rule.max_prefix:
        raise _Reject(f"omega-instantiation: {system.name} allows no boxed context around the rule")
    try:
        conclusion = rule.conclusion(inst)
    except Exception as e:
        raise _Reject(f"omega-instantiation: {e}") from None
    if not alpha_equal(proof.steps[k].formula, conclusion):
        raise _Reject(f"omega-conclusion-mismatch: expected {to_text(conclusion)}")
    gen = GENERATORS.get(by.generator.name)
    if gen is None:
        raise _Reject(f"unknown-generator: {by.generator.name!r}")
    if depth >= MAX_NESTING:
        raise _Reject("omega-nesting: sub-proofs nest too deeply")
    for n in range(bound + 1):
        target = rule.premise(n, inst)
        try:
            got = gen(n, by.generator.params, proof)
        except (ProofError, OSError, ValueError) as e:
            raise _Reject(f"generator-error at n={n}: {e}") from None
        if isinstance(got, int):
            _earlier(got, k)
            proved = proof.steps[got].formula
        else:
            sub = _check(system, got, bound, depth + 1)
            if isinstance(sub.status, Rejected):
                raise _Reject(f"omega-premise n={n}: sub-proof {sub.status}")
            proved = got.conclusion
        if not alpha_equal(proved, target):
            raise _Reject(f"omega-premise-mismatch at n={n}: expected {to_text(target)}")


def _check(system: ProofSystem, proof: Proof, bound: int, depth: int) -> CheckReport:
    verdicts = []
    used_omega = False
    if not proof.steps:
        return CheckReport(Rejected(0, "empty proof"), verdicts)
    for k in range(len(proof.steps)):
        try:
            verdict, omega = _check_step(system, proof, k, bound, depth)
        except _Reject as r:
            verdicts.append(f"REJECT {r.reason}")
            return CheckReport(Rejected(k, r.reason), verdicts)
        verdicts.append(verdict)
        used_omega |= omega
    return CheckReport(CheckedToBound(bound) if used_omega else FullyChecked(), verdicts)


def check_proof(system: ProofSystem | str, proof: Proof, omega_bound: int = 8) -> CheckReport:
    """Check every step; omega-rule premises are checked for ``n = 0..omega_bound``."""
    if isinstance(system, str):
        system = get_system(system)
    if omega_bound < 1:
        raise ProofError("omega_bound must be at least 1")
    return _check(system, proof, omega_bound, 0)


# ---------------------------------------------------------------------------
# The derivation of C(p -> Ep) -> (p -> Cp)

_STEP_E = Implies(P, Box("E", P))
GAMMA = And(P, Box("C", _STEP_E))
MHFORMULA = Implies(Box("C", _STEP_E), Implies(P, Box("C", P)))


def _chain(b: ProofBuilder, ab: int, bc: int) -> int:
    """From ``A -> B`` and ``B -> C`` derive ``A -> C``."""
    a, bb = _split(b.formula(ab))
    _, c = _split(b.formula(bc))
    t = b.taut(Implies(Implies(a, bb), Implies(Implies(bb, c), Implies(a, c))))
    return b.mp(bc, b.mp(ab, t))


def _split(f: Formula) -> tuple[Formula, Formula]:
    return f.body.left, f.body.right.body


def _lift_e_step(b: ProofBuilder, k: int) -> int:
    """Derive ``E^k(p -> Ep) -> (E^k p -> E^(k+1) p)``."""
    d = b.taut(Implies(_STEP_E, _STEP_E), "E^0 case")
    for j in range(k):
        a = box_power("E", j, _STEP_E)
        lo, hi = box_power("E", j, P), box_power("E", j + 1, P)
        nec = b.add(Box("E", b.formula(d)), Necessitation(d, "E"))
        k1 = b.add(Implies(Box("E", b.formula(d)), Implies(Box("E", a), Box("E", Implies(lo, hi)))),
                   Axiom("K_E", substitution(p=a, q=Implies(lo, hi))))
        e1 = b.mp(nec, k1)
        k2 = b.add(Implies(Box("E", Implies(lo, hi)), Implies(Box("E", lo), Box("E", hi))),
                   Axiom("K_E", substitution(p=lo, q=hi)))
        d = _chain(b, e1, k2)
    return d


def mhformula_premise(n: int) -> Proof:
    """A proof of ``(p & C(p -> Ep)) -> E^n p``, by induction on ``n``."""
    b = ProofBuilder()
    cur = b.taut(Implies(GAMMA, P), "base case")
    for k in range(n):
        ax = b.add(Implies(Box("C", _STEP_E), box_power("E", k, _STEP_E)),
                   Axiom("C_En", substitution(p=_STEP_E), k), f"C-to-E^{k} on p -> Ep")
        lift = _lift_e_step(b, k)
        ek, ek1 = box_power("E", k, P), box_power("E", k + 1, P)
        ck = Box("C", _STEP_E)
        ekstep = box_power("E", k, _STEP_E)
        glue = b.taut(
            Implies(Implies(GAMMA, ek),
                    Implies(Implies(ck, ekstep), Implies(Implies(ekstep, Implies(ek, ek1)), Implies(GAMMA, ek1)))),
            f"combine for E^{k + 1}",
        )
        cur = b.mp(lift, b.mp(ax, b.mp(cur, glue)))
    return b.build("PS_QCKL-")


@register_generator("mhformula-premise")
def _mh_generator(n, params, parent):
    return mhformula_premise(n)


def generate_mhformula_proof() -> Proof:
    """``C(p -> Ep) -> (p -> Cp)`` in PS_QCKL-, through the omega-rule with ``gamma = p & C(p -> Ep)``."""
    b = ProofBuilder()
    omega = b.add(Implies(GAMMA, Box("C", P)),
                  OmegaRule("ck-omega", GeneratorRef("mhformula-premise"), {"gamma": GAMMA, "phi": P}),
                  "premise n proves gamma -> E^n p")
    t = b.taut(Implies(b.formula(omega), MHFORMULA), "uncurry gamma")
    b.mp(omega, t)
    return b.build("PS_QCKL-")


def proof_formulas(proof: Proof, omega_bound: int = 0) -> list[Formula]:
    """Every formula in ``proof`` plus, for ``n <= omega_bound``, those of generated sub-proofs."""
    out = [s.formula for s in proof.steps]
    if omega_bound <= 0:
        return out
    for s in proof.steps:
        if isinstance(s.by, OmegaRule):
            gen = GENERATORS[s.by.generator.name]
            for n in range(omega_bound + 1):
                got = gen(n, s.by.generator.params, proof)
                if isinstance(got, Proof):
                    out += proof_formulas(got, omega_bound)
    return out


# ---------------------------------------------------------------------------
# Soundness spot checks


@dataclass
class SoundnessReport:
    checked: int
    violations: list[tuple[int, Formula, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def soundness_spot_check(
    proof: Proof | Sequence[Formula],
    frames: Sequence,
    max_domain: int = 2,
    omega_bound: int = 0,
    budget: int | None = None,
) -> SoundnessReport:
    """Each proved formula must be valid (to the bound) on every frame given.

    Pass frames from the class the proof system is sound for; a violation
    means the checker or the frame-class test is wrong.
    """
    from .semantics import DEFAULT_BUDGET, frame_validates

    formulas = proof_formulas(proof, omega_bound) if isinstance(proof, Proof) else list(proof)
    unique = list(dict.fromkeys(alpha_normal(f) for f in formulas))
    report = SoundnessReport(0)
    for i, frame in enumerate(frames):
        for f in unique:
            report.checked += 1
            res = frame_validates(frame, f, max_domain, budget or DEFAULT_BUDGET)
            if not res.valid:
                report.violations.append((i, f, res))
    return report


# ---------------------------------------------------------------------------
# JSON


def _subst_to_json(subst: Mapping[str, Replacement]) -> dict:
    out = {}
    for pred, rep in substitution(subst).items():
        if rep.params:
            out[pred] = {"params": list(rep.params), "body": to_text(rep.body)}
        else:
            out[pred] = to_text(rep.body)
    return out


def _subst_from_json(obj) -> dict[str, Replacement]:
    if not isinstance(obj, dict):
        raise ProofError("a substitution must be an object")
    out = {}
    for pred, v in obj.items():
        if isinstance(v, str):
            out[pred] = Replacement((), parse(v))
        elif isinstance(v, dict):
            out[pred] = Replacement(tuple(v.get("params", ())), parse(v["body"]))
        else:
            raise ProofError(f"bad replacement for {pred!r}")
    return out


def _inst_to_json(inst: Mapping[str, object]) -> dict:
    out = {}
    for k, v in inst.items():
        if k == "prefix":
            out[k] = [[m, to_text(_as_formula(f))] for m, f in v]
        else:
            out[k] = to_text(_as_formula(v))
    return out


def _by_to_json(by: Justification) -> dict:
    if isinstance(by, Axiom):
        d = {"rule": "axiom", "schema": by.schema}
        if by.subst:
            d["subst"] = _subst_to_json(by.subst)
        if by.index is not None:
            d["index"] = by.index
        if by.variables:
            d["variables"] = dict(by.variables)
        return d
    if isinstance(by, MP):
        return {"rule": "mp", "premise": by.premise, "implication": by.implication}
    if isinstance(by, UniformSub):
        return {"rule": "sub", "from": by.source, "subst": _subst_to_json(by.subst)}
    if isinstance(by, Necessitation):
        return {"rule": "nec", "from": by.source, "modality": by.modality}
    if isinstance(by, Generalization):
        return {"rule": "gen", "from": by.source, "var": by.var}
    return {
        "rule": "omega",
        "id": by.rule,
        "generator": {"name": by.generator.name, "params": dict(by.generator.params)},
        "instantiation": _inst_to_json(by.instantiation),
    }


def _by_from_json(d: dict) -> Justification:
    rule = d.get("rule")
    if rule == "axiom":
        return Axiom(d["schema"], _subst_from_json(d.get("subst", {})), d.get("index"), dict(d.get("variables", {})))
    if rule == "mp":
        return MP(d["premise"], d["implication"])
    if rule == "sub":
        return UniformSub(d["from"], _subst_from_json(d["subst"]))
    if rule == "nec":
        return Necessitation(d["from"], d["modality"])
    if rule == "gen":
        return Generalization(d["from"], d["var"])
    if rule == "omega":
        inst = {}
        for k, v in d.get("instantiation", {}).items():
            inst[k] = [(m, parse(f)) for m, f in v] if k == "prefix" else parse(v)
        g = d["generator"]
        return OmegaRule(d["id"], GeneratorRef(g["name"], dict(g.get("params", {}))), inst)
    raise ProofError(f"unknown justification rule {rule!r}")


def proof_to_json(proof: Proof) -> dict:
    out = {"steps": [dict({"formula": to_text(s.formula), "by": _by_to_json(s.by)}, **({"note": s.note} if s.note else {}))
                     for s in proof.steps]}
    if proof.system:
        out = {"system": proof.system, **out}
    return out


def proof_from_json(doc: dict, base_dir: Path | None = None) -> Proof:
    """Inverse of :func:`proof_to_json`; raises ProofError or ParseError on bad input."""
    if not isinstance(doc, dict) or not isinstance(doc.get("steps"), list):
        raise ProofError("a proof document needs a 'steps' list")
    steps = []
    for i, s in enumerate(doc["steps"]):
        try:
            steps.append(Step(parse(s["formula"]), _by_from_json(s["by"]), s.get("note", "")))
        except (KeyError, TypeError) as e:
            raise ProofError(f"step {i}: missing or malformed field {e}") from None
    return Proof(steps, doc.get("system"), base_dir)


def load_proof(path: str | Path) -> Proof:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ProofError(f"{path}: {e}") from None
    return proof_from_json(doc, path.parent)


def dump_proof(proof: Proof, path: str | Path) -> None:
    Path(path).write_text(json.dumps(proof_to_json(proof), indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
