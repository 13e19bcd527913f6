"""Finite modal algebras, complex algebras and Q-filter frames.

A finite complete Boolean algebra is the powerset of its atoms, so a
``ModalAlgebra`` with ``k`` atoms has the elements ``0..2**k - 1`` read as
bitmasks over the atoms.  Each modality is an explicit box table, which
allows boxes that are not normal or not even monotone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .frames import NeighborhoodFrame, check_cf, check_kripke, check_mt, check_tp, members, upward_closure

Filter = frozenset[int]
MeetFamily = Sequence[Iterable[int]]


@dataclass(frozen=True, eq=True)
class ModalAlgebra:
    atoms: int
    boxes: Mapping[str, tuple[int, ...]]

    def __post_init__(self):
        if self.atoms < 0:
            raise ValueError("atom count must be non-negative")
        size = 1 << self.atoms
        norm = {}
        for m, table in self.boxes.items():
            table = tuple(table)
            if len(table) != size:
                raise ValueError(f"box table for {m!r} has {len(table)} entries, expected {size}")
            if any(not 0 <= t < size for t in table):
                raise ValueError(f"box table for {m!r} has an entry outside the carrier")
            norm[m] = table
        object.__setattr__(self, "boxes", norm)

    __hash__ = None  # type: ignore[assignment]

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1

    @property
    def size(self) -> int:
        return 1 << self.atoms

    @property
    def modalities(self) -> tuple[str, ...]:
        return tuple(self.boxes)

    def elements(self) -> range:
        return range(1 << self.atoms)

    def complement(self, x: int) -> int:
        return self.top & ~x

    def box(self, m: str, x: int) -> int:
        return self.boxes[m][x]

    def diamond(self, m: str, x: int) -> int:
        return self.complement(self.boxes[m][self.complement(x)])

    def meet_all(self, xs: Iterable[int]) -> int:
        out = self.top
        for x in xs:
            out &= x
        return out

    def join_all(self, xs: Iterable[int]) -> int:
        out = 0
        for x in xs:
            out |= x
        return out

    @classmethod
    def from_function(cls, atoms: int, **boxes: Callable[[int], int]) -> "ModalAlgebra":
        return cls(atoms, {m: tuple(fn(x) for x in range(1 << atoms)) for m, fn in boxes.items()})


def identity_algebra(atoms: int, *modalities: str) -> ModalAlgebra:
    return ModalAlgebra(atoms, {m: tuple(range(1 << atoms)) for m in (modalities or ("box",))})


def _resolve(alg: ModalAlgebra, m: str | None) -> str:
    if m is not None:
        return m
    if len(alg.modalities) != 1:
        raise ValueError(f"algebra has modalities {alg.modalities}; name one")
    return alg.modalities[0]


def check_algebra_mt(alg: ModalAlgebra, m: str | None = None) -> bool:
    """``box(x & y) <= box x & box y`` for all pairs."""
    t = alg.boxes[_resolve(alg, m)]
    return all(t[x & y] & ~(t[x] & t[y]) == 0 for x in alg.elements() for y in alg.elements())


def check_algebra_tp(alg: ModalAlgebra, m: str | None = None) -> bool:
    return alg.boxes[_resolve(alg, m)][alg.top] == alg.top


def check_algebra_cf(alg: ModalAlgebra, m: str | None = None) -> bool:
    t = alg.boxes[_resolve(alg, m)]
    return all((t[x] & t[y]) & ~t[x & y] == 0 for x in alg.elements() for y in alg.elements())


def check_completely_multiplicative(
    alg: ModalAlgebra, m: str | None = None, samples: int = 20000, seed: int = 0
) -> bool:
    """``box`` of a meet is the meet of the boxes, for every set of elements.

    Exhaustive over all ``2 ** 2 ** k`` subsets for ``k <= 3``; seeded
    random subsets above that.  The empty set is always checked.
    """
    t = alg.boxes[_resolve(alg, m)]
    elems = list(alg.elements())

    def ok(xs) -> bool:
        return t[alg.meet_all(xs)] == alg.meet_all(t[x] for x in xs)

    if alg.atoms <= 3:
        return all(
            ok([e for i, e in enumerate(elems) if code >> i & 1]) for code in range(1 << len(elems))
        )
    rng = random.Random(seed)
    if not ok([]):
        return False
    return all(ok([e for e in elems if rng.random() < 0.5]) for _ in range(samples))


def complex_algebra(frame: NeighborhoodFrame) -> ModalAlgebra:
    """Powerset of the worlds with ``box X = {c | X in N(c)}``."""
    return ModalAlgebra(
        frame.worlds, {m: tuple(frame.box(m, x) for x in range(1 << frame.worlds)) for m in frame.modalities}
    )


# ---------------------------------------------------------------------------
# Filters


def upset(alg: ModalAlgebra, a: int) -> Filter:
    return frozenset(x for x in alg.elements() if a & ~x == 0)


def is_filter(alg: ModalAlgebra, F: Iterable[int]) -> bool:
    F = frozenset(F)
    if not F:
        return False
    if any(y not in F for x in F for y in alg.elements() if x & ~y == 0):
        return False
    return all(x & y in F for x in F for y in F)


def is_prime_filter(alg: ModalAlgebra, F: Iterable[int]) -> bool:
    F = frozenset(F)
    if not is_filter(alg, F) or 0 in F:
        return False
    return all(x in F or y in F for x in alg.elements() for y in alg.elements() if x | y in F)


def enumerate_prime_filters(alg: ModalAlgebra) -> list[Filter]:
    """The prime filters, in atom order.

    On a finite Boolean algebra these are exactly the principal filters of
    the atoms.
    """
    return [upset(alg, 1 << i) for i in range(alg.atoms)]


def is_qfilter(alg: ModalAlgebra, F: Iterable[int], S: MeetFamily) -> bool:
    """``F`` contains the meet of every member of ``S`` it includes."""
    F = frozenset(F)
    for X in S:
        X = list(X)
        if all(x in F for x in X) and alg.meet_all(X) not in F:
            return False
    return True


def qfilters(alg: ModalAlgebra, S: MeetFamily = ()) -> list[Filter]:
    return [F for F in enumerate_prime_filters(alg) if is_qfilter(alg, F, S)]


@dataclass(frozen=True)
class QFilterFrame:
    """A neighborhood frame whose world ``i`` is the Q-filter ``filters[i]``."""

    frame: NeighborhoodFrame
    filters: tuple[Filter, ...]
    algebra: ModalAlgebra = field(repr=False)

    def world_of(self, F: Filter) -> int:
        return self.filters.index(F)


def embedding(alg: ModalAlgebra, S: MeetFamily = (), filters: Sequence[Filter] | None = None) -> Callable[[int], int]:
    """``f(x) = {F | x in F}`` as a world mask over the Q-filters of ``S``."""
    filters = list(qfilters(alg, S) if filters is None else filters)
    table = []
    for x in alg.elements():
        mask = 0
        for i, F in enumerate(filters):
            if x in F:
                mask |= 1 << i
        table.append(mask)
    return table.__getitem__


def qfilter_frame(alg: ModalAlgebra, S: MeetFamily = ()) -> QFilterFrame:
    """Worlds are the Q-filters; ``N(F) = {f(x) | box x in F}``."""
    filters = tuple(qfilters(alg, S))
    if not filters:
        raise ValueError("the algebra has no Q-filters (it is trivial)")
    f = embedding(alg, S, filters)
    neigh = {
        m: tuple(frozenset(f(x) for x in alg.elements() if t[x] in F) for F in filters)
        for m, t in alg.boxes.items()
    }
    return QFilterFrame(NeighborhoodFrame(len(filters), neigh), filters, alg)


def with_neighborhoods(qf: QFilterFrame, neighborhoods: Mapping[str, Sequence[Iterable[int]]]) -> QFilterFrame:
    """The same Q-filter worlds with a user-supplied neighborhood system."""
    frame = NeighborhoodFrame(len(qf.filters), {m: tuple(frozenset(fam) for fam in per_world)
                                                for m, per_world in neighborhoods.items()})
    return QFilterFrame(frame, qf.filters, qf.algebra)


def upward_frame(frame: NeighborhoodFrame) -> NeighborhoodFrame:
    """Replace every neighborhood family by its upward closure."""
    return NeighborhoodFrame(frame.worlds, {m: tuple(upward_closure(fam, frame.worlds) for fam in per_world)
                                            for m, per_world in frame.neighborhoods.items()})


def check_dfrm_conditions(qf: QFilterFrame, m: str | None = None) -> bool:
    """The two inclusions tying a user neighborhood system to the algebra.

    For every filter-world ``F``::

        box^-1 F      is included in  the union over X in N(F) of meet(X)
        diamond^-1 F  is included in  the intersection over X in N(F) of join(X)

    where a world-set ``X`` is read as the set of elements lying in every
    (for ``meet``) or some (for ``join``) filter of ``X``.
    """
    alg, frame, filters = qf.algebra, qf.frame, qf.filters
    if frame.worlds != len(filters):
        raise ValueError(f"frame has {frame.worlds} worlds but {len(filters)} filters are indexed")
    every = frozenset(alg.elements())
    mods = [m] if m is not None else list(alg.modalities)
    for m in mods:
        if m not in frame.neighborhoods:
            raise ValueError(f"frame has no modality {m!r}")
        for i, F in enumerate(filters):
            inverse_box = {x for x in alg.elements() if alg.box(m, x) in F}
            inverse_dia = {x for x in alg.elements() if alg.diamond(m, x) in F}
            covered: set[int] = set()
            inside = set(every)
            for X in frame.family(m, i):
                in_all = set(every)
                in_some: set[int] = set()
                for j in members(X):
                    in_all &= filters[j]
                    in_some |= filters[j]
                covered |= in_all
                inside &= in_some
            if not inverse_box <= covered or not inverse_dia <= inside:
                return False
    return True


# ---------------------------------------------------------------------------
# GL and common-knowledge conditions


def orbit(step: Callable[[int], int], start: int) -> list[int]:
    """``start, step(start), ...`` up to the first repeated value."""
    seen: list[int] = []
    index: set[int] = set()
    x = start
    while x not in index:
        seen.append(x)
        index.add(x)
        x = step(x)
    return seen


def omega_meet(step: Callable[[int], int], start: int, top: int) -> int:
    """Meet of ``step^n(start)`` over all ``n >= 0``.

    The sequence lives in a finite carrier, so it is eventually periodic and
    every value it ever takes already occurs before the first repeat.
    """
    out = top
    for x in orbit(step, start):
        out &= x
    return out


def check_gl_frame(frame: NeighborhoodFrame, m: str | None = None) -> bool:
    if m is None:
        if len(frame.modalities) != 1:
            raise ValueError("name the modality of a multi-modal frame")
        m = frame.modalities[0]
    alg = complex_algebra(frame)
    if not (check_algebra_mt(alg, m) and check_algebra_tp(alg, m) and check_algebra_cf(alg, m)):
        return False
    t = alg.boxes[m]
    if any(t[x] & ~t[t[x]] for x in alg.elements()):
        return False
    return omega_meet(lambda x: alg.diamond(m, x), alg.top, alg.top) == 0


def check_ckl_algebra(alg: ModalAlgebra, everyone: str = "E", common: str = "C") -> bool:
    """Normal in both modalities and ``C x`` is the meet of ``E^n x`` for ``n >= 0``."""
    for m in (everyone, common):
        if not (check_algebra_mt(alg, m) and check_algebra_tp(alg, m) and check_algebra_cf(alg, m)):
            return False
    e, c = alg.boxes[everyone], alg.boxes[common]
    return all(c[x] == omega_meet(e.__getitem__, x, alg.top) for x in alg.elements())


@dataclass
class CKLKripkeReport:
    hypotheses: dict[str, bool]
    conclusions: dict[str, bool]

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def conclusions_hold(self) -> bool:
        return all(self.conclusions.values())

    @property
    def lemma_consistent(self) -> bool:
        return not self.hypotheses_hold or self.conclusions_hold


def check_ckl_kripke_consequences(
    frame: NeighborhoodFrame, max_n: int = 8, everyone: str = "E", common: str = "C"
) -> CKLKripkeReport:
    """Check the Kripke-frame consequences of validating the CKL- axioms.

    Hypotheses (checked by bounded frame validity): ``Cp -> E^n p`` for
    ``n <= max_n`` and ``C(p -> Ep) -> (p -> Cp)``.  Conclusions (checked on
    the complex algebra): ``C X`` is the meet of the ``E^n X`` and
    ``C X <= E C X`` for every ``X``.
    """
    from .semantics import frame_validates
    from .syntax import Box, Implies, atom, box_power

    for m in (everyone, common):
        if m not in frame.neighborhoods:
            raise ValueError(f"frame has no modality {m!r}")
        if not check_kripke(frame, m):
            raise ValueError(f"modality {m!r} is not Kripke")
    p = atom("p")
    hyps = {}
    for n in range(max_n + 1):
        f = Implies(Box(common, p), box_power(everyone, n, p))
        hyps[str(f)] = frame_validates(frame, f, 1).valid
    mh = Implies(Box(common, Implies(p, Box(everyone, p))), Implies(p, Box(common, p)))
    hyps[str(mh)] = frame_validates(frame, mh, 1).valid

    alg = complex_algebra(frame)
    e, c = alg.boxes[everyone], alg.boxes[common]
    conc = {
        "C X = meet of E^n X": all(c[x] == omega_meet(e.__getitem__, x, alg.top) for x in alg.elements()),
        "C X <= E C X": all(c[x] & ~e[c[x]] == 0 for x in alg.elements()),
    }
    return CKLKripkeReport(hyps, conc)


# ---------------------------------------------------------------------------
# Random algebras


def random_algebra(rng: random.Random, atoms: int, kind: str = "any", modalities: Sequence[str] = ("box",)) -> ModalAlgebra:
    """A random algebra.

    ``kind`` is ``"table"`` (uniform box table), ``"monotone"`` (complex
    algebra of a random MT frame), ``"kripke"`` (complex algebra of a random
    relation) or ``"any"`` (one of the three, chosen at random).
    """
    from .frames import relation_to_frame, upward_closure

    if kind == "any":
        kind = rng.choice(["table", "monotone", "kripke"])
    if atoms == 0 and kind in ("monotone", "kripke"):
        kind = "table"  # no frame has zero worlds
    size = 1 << atoms
    boxes = {}
    for m in modalities:
        if kind == "table":
            boxes[m] = tuple(rng.randrange(size) for _ in range(size))
        elif kind == "monotone":
            fams = [upward_closure([x for x in range(size) if rng.random() < 0.25], atoms) for _ in range(atoms)]
            boxes[m] = complex_algebra(NeighborhoodFrame(atoms, {m: fams})).boxes[m]
        elif kind == "kripke":
            rel = [(x, y) for x in range(atoms) for y in range(atoms) if rng.random() < 0.4]
            boxes[m] = complex_algebra(relation_to_frame({m: rel}, atoms)).boxes[m]
        else:
            raise ValueError(f"unknown algebra kind {kind!r}")
    return ModalAlgebra(atoms, boxes)


def random_meet_family(rng: random.Random, alg: ModalAlgebra, sets: int = 3) -> list[frozenset[int]]:
    return [
        frozenset(x for x in alg.elements() if rng.random() < 0.4) for _ in range(rng.randint(0, sets))
    ]


def preservation_report(alg: ModalAlgebra, S: MeetFamily = ()) -> dict[str, dict[str, bool]]:
    """Which of MT/TP/CF the algebra and its Q-filter frame satisfy, per modality."""
    qf = qfilter_frame(alg, S)
    out = {}
    for m in alg.modalities:
        out[m] = {
            "algebra_mt": check_algebra_mt(alg, m),
            "algebra_tp": check_algebra_tp(alg, m),
            "algebra_cf": check_algebra_cf(alg, m),
            "frame_mt": check_mt(qf.frame, m),
            "frame_tp": check_tp(qf.frame, m),
            "frame_cf": check_cf(qf.frame, m),
        }
    return out


def is_modal_monomorphism(
    alg: ModalAlgebra, target: ModalAlgebra, f: Callable[[int], int], sets: MeetFamily = ()
) -> dict[str, bool]:
    """Check that ``f`` is an injective homomorphism ``alg -> target``.

    Also checks ``f(meet X) = meet f[X]`` for each ``X`` in ``sets``.
    """
    el = list(alg.elements())
    image = [f(x) for x in el]
    return {
        "injective": len(set(image)) == len(image),
        "zero": f(0) == 0,
        "one": f(alg.top) == target.top,
        "meet": all(f(x & y) == f(x) & f(y) for x in el for y in el),
        "join": all(f(x | y) == f(x) | f(y) for x in el for y in el),
        "complement": all(f(alg.complement(x)) == target.complement(f(x)) for x in el),
        "box": all(f(alg.box(m, x)) == target.box(m, f(x)) for m in alg.modalities for x in el),
        "meets_of_S": all(f(alg.meet_all(X)) == target.meet_all(f(x) for x in X) for X in map(list, sets)),
    }
