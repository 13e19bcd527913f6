"""Neighborhood and algebraic valuations, bounded validity and the duality harness."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .algebra import ModalAlgebra, complex_algebra
from .frames import NeighborhoodFrame, members
from .syntax import And, Atom, Bottom, Box, Forall, Formula, Not, Top, free_vars, predicates, to_text

Assignment = Mapping[str, int]
DEFAULT_BUDGET = 1_000_000


class BudgetExceeded(RuntimeError):
    """An enumeration would take more steps than the configured budget."""


class EvaluationError(KeyError):
    pass


@dataclass(frozen=True, eq=True)
class NeighborhoodModel:
    """A frame plus a domain ``0..domain-1`` and, per predicate, the tuples true at each world."""

    frame: NeighborhoodFrame
    domain: int
    arity: Mapping[str, int]
    extension: Mapping[str, tuple[frozenset[tuple[int, ...]], ...]]

    def __post_init__(self):
        if self.domain < 1:
            raise ValueError("the domain must be non-empty")
        for pred, per_world in self.extension.items():
            if pred not in self.arity:
                raise ValueError(f"no arity declared for {pred!r}")
            if len(per_world) != self.frame.worlds:
                raise ValueError(f"{pred!r}: expected one relation per world")
            n = self.arity[pred]
            for rel in per_world:
                for t in rel:
                    if len(t) != n or any(not 0 <= d < self.domain for d in t):
                        raise ValueError(f"{pred!r}: bad tuple {t} for arity {n}, domain {self.domain}")

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_true_at(cls, frame: NeighborhoodFrame, domain: int, interpretation: Mapping[str, tuple[int, list]]):
        """``interpretation[P] = (arity, [(world, tuple), ...])``."""
        arity, ext = {}, {}
        for pred, (n, true_at) in interpretation.items():
            per_world: list[set] = [set() for _ in range(frame.worlds)]
            for world, tup in true_at:
                per_world[world].add(tuple(tup))
            arity[pred] = n
            ext[pred] = tuple(frozenset(s) for s in per_world)
        return cls(frame, domain, arity, ext)


@dataclass(frozen=True, eq=True)
class AlgebraicModel:
    """An algebra plus a domain and, per predicate, a map from tuples to elements."""

    algebra: ModalAlgebra
    domain: int
    arity: Mapping[str, int]
    interpretation: Mapping[str, Mapping[tuple[int, ...], int]]

    def __post_init__(self):
        if self.domain < 1:
            raise ValueError("the domain must be non-empty")
        for pred, table in self.interpretation.items():
            n = self.arity[pred]
            for t, value in table.items():
                if len(t) != n:
                    raise ValueError(f"{pred!r}: tuple {t} has wrong arity")
                if not 0 <= value < self.algebra.size:
                    raise ValueError(f"{pred!r}: {value} is not an element of the algebra")

    __hash__ = None  # type: ignore[assignment]

    def value(self, pred: str, args: tuple[int, ...]) -> int:
        # Unlisted tuples map to the bottom element.
        return self.interpretation[pred].get(args, 0)


# ---------------------------------------------------------------------------
# Valuations


def eval_neighborhood(model: NeighborhoodModel, assignment: Assignment, f: Formula) -> int:
    """The set of worlds (as a mask) where ``f`` holds under ``assignment``."""
    frame = model.frame
    universe = frame.universe
    n = frame.worlds
    neigh = frame.neighborhoods
    ext = model.extension
    domain = range(model.domain)

    def v(g: Formula, a: Assignment) -> int:
        if isinstance(g, Atom):
            try:
                per_world = ext[g.pred]
                args = tuple(a[x] for x in g.args)
            except KeyError as e:
                raise EvaluationError(f"no interpretation or assignment for {e.args[0]!r}") from None
            out = 0
            for c in range(n):
                if args in per_world[c]:
                    out |= 1 << c
            return out
        if isinstance(g, Not):
            return universe & ~v(g.body, a)
        if isinstance(g, And):
            return v(g.left, a) & v(g.right, a)
        if isinstance(g, Box):
            try:
                fams = neigh[g.modality]
            except KeyError:
                raise EvaluationError(f"frame has no modality {g.modality!r}") from None
            x = v(g.body, a)
            out = 0
            for c in range(n):
                if x in fams[c]:
                    out |= 1 << c
            return out
        if isinstance(g, Forall):
            out = universe
            for d in domain:
                out &= v(g.body, {**a, g.var: d})
                if not out:
                    break
            return out
        if isinstance(g, Top):
            return universe
        if isinstance(g, Bottom):
            return 0
        raise TypeError(f"not a formula: {g!r}")

    return v(f, assignment)


def eval_algebraic(model: AlgebraicModel, assignment: Assignment, f: Formula) -> int:
    """The algebra element ``f`` denotes under ``assignment``."""
    alg = model.algebra
    domain = range(model.domain)

    def u(g: Formula, a: Assignment) -> int:
        if isinstance(g, Atom):
            try:
                args = tuple(a[x] for x in g.args)
                return model.value(g.pred, args)
            except KeyError as e:
                raise EvaluationError(f"no interpretation or assignment for {e.args[0]!r}") from None
        if isinstance(g, Not):
            return alg.complement(u(g.body, a))
        if isinstance(g, And):
            return u(g.left, a) & u(g.right, a)
        if isinstance(g, Box):
            if g.modality not in alg.boxes:
                raise EvaluationError(f"algebra has no modality {g.modality!r}")
            return alg.box(g.modality, u(g.body, a))
        if isinstance(g, Forall):
            return alg.meet_all(u(g.body, {**a, g.var: d}) for d in domain)
        if isinstance(g, Top):
            return alg.top
        if isinstance(g, Bottom):
            return 0
        raise TypeError(f"not a formula: {g!r}")

    return u(f, assignment)


# ---------------------------------------------------------------------------
# Translations between the two kinds of model


def model_to_algebraic(model: NeighborhoodModel) -> AlgebraicModel:
    """Over the complex algebra: ``c in P_J(d) iff d in P_I(c)``."""
    interp = {}
    for pred, per_world in model.extension.items():
        table: dict[tuple[int, ...], int] = {}
        for c, rel in enumerate(per_world):
            for t in rel:
                table[t] = table.get(t, 0) | 1 << c
        interp[pred] = table
    return AlgebraicModel(complex_algebra(model.frame), model.domain, dict(model.arity), interp)


def algebraic_to_model(amodel: AlgebraicModel, frame: NeighborhoodFrame) -> NeighborhoodModel:
    """Inverse of :func:`model_to_algebraic`.

    ``amodel.algebra`` must be the complex algebra of ``frame``.
    """
    if amodel.algebra != complex_algebra(frame):
        raise ValueError("the algebra is not the complex algebra of the given frame")
    ext = {}
    for pred, table in amodel.interpretation.items():
        per_world: list[set] = [set() for _ in range(frame.worlds)]
        for t, value in table.items():
            for c in members(value):
                per_world[c].add(t)
        ext[pred] = tuple(frozenset(s) for s in per_world)
    return NeighborhoodModel(frame, amodel.domain, dict(amodel.arity), ext)


# ---------------------------------------------------------------------------
# Bounded validity


@dataclass(frozen=True)
class Valid:
    """No countermodel up to the domain bound."""

    bound: int
    valid: bool = field(default=True, init=False)


@dataclass(frozen=True)
class Countermodel:
    model: NeighborhoodModel
    assignment: dict[str, int]
    world: int
    valid: bool = field(default=False, init=False)


@dataclass(frozen=True)
class AlgebraicCountermodel:
    model: AlgebraicModel
    assignment: dict[str, int]
    value: int
    valid: bool = field(default=False, init=False)


def _closed_or_policy(f: Formula, free: str) -> list[str]:
    fv = sorted(free_vars(f))
    if fv and free != "universal":
        raise ValueError(f"formula has free variables {fv}; pass free='universal' to quantify them")
    return fv


def _assignments(fv: list[str], domain: int) -> Iterator[dict[str, int]]:
    for values in itertools.product(range(domain), repeat=len(fv)):
        yield dict(zip(fv, values))


def _tuples(arity: int, domain: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(domain), repeat=arity))


def _enumeration_size(preds: Mapping[str, int], nfree: int, max_domain: int, cells_per_tuple: int) -> int:
    total = 0
    for d in range(1, max_domain + 1):
        bits = sum(d ** a for a in preds.values()) * cells_per_tuple
        total += (1 << bits) * d ** nfree
    return total


def frame_validates(
    frame: NeighborhoodFrame,
    f: Formula,
    max_domain: int = 2,
    budget: int = DEFAULT_BUDGET,
    free: str = "reject",
) -> Valid | Countermodel:
    """Search every model on ``frame`` with domain size ``1..max_domain``.

    Interpretations are enumerated in lexicographic order of their truth
    bit-vectors indexed by (world, predicate, tuple), so the countermodel
    returned is the first one in that order.  ``free="universal"`` treats
    free variables as universally quantified; the default rejects them.
    A formula with only 0-ary predicates and no quantifiers is checked at
    domain size 1 only, since the domain cannot affect its value.
    """
    if max_domain < 1:
        raise ValueError("max_domain must be positive")
    fv = _closed_or_policy(f, free)
    preds = dict(sorted(predicates(f).items()))
    requested = max_domain
    if not fv and all(a == 0 for a in preds.values()) and not _has_quantifier(f):
        max_domain = 1
    steps = _enumeration_size(preds, len(fv), max_domain, frame.worlds)
    if steps > budget:
        raise BudgetExceeded(f"{steps} models to enumerate exceeds the budget of {budget}")
    n = frame.worlds
    universe = frame.universe
    for d in range(1, max_domain + 1):
        cells = [(c, p, t) for c in range(n) for p, a in preds.items() for t in _tuples(a, d)]
        assignments = list(_assignments(fv, d))
        for bits in itertools.product((False, True), repeat=len(cells)):
            per_world = {p: [set() for _ in range(n)] for p in preds}
            for (c, p, t), b in zip(cells, bits):
                if b:
                    per_world[p][c].add(t)
            model = NeighborhoodModel(
                frame, d, preds, {p: tuple(frozenset(s) for s in ws) for p, ws in per_world.items()}
            )
            for a in assignments:
                value = eval_neighborhood(model, a, f)
                if value != universe:
                    world = members(universe & ~value)[0]
                    return Countermodel(model, a, world)
    return Valid(requested)


def algebra_validates(
    alg: ModalAlgebra,
    f: Formula,
    max_domain: int = 2,
    budget: int = DEFAULT_BUDGET,
    free: str = "reject",
) -> Valid | AlgebraicCountermodel:
    """The algebraic counterpart of :func:`frame_validates`.

    Enumerates every map from (predicate, tuple) to algebra elements, in
    lexicographic order of the element sequence.
    """
    if max_domain < 1:
        raise ValueError("max_domain must be positive")
    fv = _closed_or_policy(f, free)
    preds = dict(sorted(predicates(f).items()))
    requested = max_domain
    if not fv and all(a == 0 for a in preds.values()) and not _has_quantifier(f):
        max_domain = 1
    steps = _enumeration_size(preds, len(fv), max_domain, alg.atoms)
    if steps > budget:
        raise BudgetExceeded(f"{steps} models to enumerate exceeds the budget of {budget}")
    for d in range(1, max_domain + 1):
        slots = [(p, t) for p, a in preds.items() for t in _tuples(a, d)]
        assignments = list(_assignments(fv, d))
        for values in itertools.product(alg.elements(), repeat=len(slots)):
            interp: dict[str, dict] = {p: {} for p in preds}
            for (p, t), x in zip(slots, values):
                interp[p][t] = x
            model = AlgebraicModel(alg, d, preds, interp)
            for a in assignments:
                value = eval_algebraic(model, a, f)
                if value != alg.top:
                    return AlgebraicCountermodel(model, a, value)
    return Valid(requested)


def _has_quantifier(f: Formula) -> bool:
    if isinstance(f, Forall):
        return True
    if isinstance(f, And):
        return _has_quantifier(f.left) or _has_quantifier(f.right)
    if isinstance(f, (Not, Box)):
        return _has_quantifier(f.body)
    return False


# ---------------------------------------------------------------------------
# Duality harness


@dataclass(frozen=True)
class DualityRow:
    formula: Formula
    frame_valid: bool
    algebra_valid: bool

    @property
    def agree(self) -> bool:
        return self.frame_valid == self.algebra_valid

    def record(self) -> dict:
        return {"formula": to_text(self.formula), "frame_valid": self.frame_valid,
                "algebra_valid": self.algebra_valid, "agree": self.agree}


@dataclass
class DualityReport:
    rows: list[DualityRow]

    @property
    def disagreements(self) -> list[DualityRow]:
        return [r for r in self.rows if not r.agree]

    def __len__(self) -> int:
        return len(self.rows)


def check_duality(
    frame: NeighborhoodFrame, formulas, max_domain: int = 2, budget: int = DEFAULT_BUDGET
) -> DualityReport:
    """Compare frame validity with validity in the complex algebra, formula by formula."""
    alg = complex_algebra(frame)
    rows = []
    for f in formulas:
        rows.append(
            DualityRow(
                f,
                frame_validates(frame, f, max_domain, budget).valid,
                algebra_validates(alg, f, max_domain, budget).valid,
            )
        )
    return DualityReport(rows)
