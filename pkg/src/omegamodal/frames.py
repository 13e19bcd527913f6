"""Finite neighborhood frames, Kripke frames and their frame conditions.

Worlds are the integers ``0..n-1``.  A set of worlds is an ``int`` bitmask
(bit ``c`` set iff world ``c`` is in the set), so ``P(C)`` is simply
``range(2**n)`` and a neighborhood family is a frozenset of masks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .syntax import DEFAULT_MODALITY

Pair = tuple[int, int]
Relation = frozenset[Pair]


def to_mask(worlds: Iterable[int]) -> int:
    m = 0
    for w in worlds:
        m |= 1 << w
    return m


def members(mask: int) -> list[int]:
    out, c = [], 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return out


def supersets(mask: int, universe: int) -> Iterator[int]:
    """All ``Y`` with ``mask <= Y <= universe``."""
    free = universe & ~mask
    sub = free
    while True:
        yield mask | sub
        if sub == 0:
            return
        sub = (sub - 1) & free


def upward_closure(family: Iterable[int], worlds: int) -> frozenset[int]:
    universe = (1 << worlds) - 1
    out: set[int] = set()
    for x in family:
        out.update(supersets(x, universe))
    return frozenset(out)


@dataclass(frozen=True, eq=True)
class NeighborhoodFrame:
    """``worlds`` worlds and, per modality, one neighborhood family per world."""

    worlds: int
    neighborhoods: Mapping[str, tuple[frozenset[int], ...]]

    def __post_init__(self):
        if self.worlds < 1:
            raise ValueError("a frame needs at least one world")
        universe = (1 << self.worlds) - 1
        norm = {}
        for m, per_world in self.neighborhoods.items():
            per_world = tuple(frozenset(fam) for fam in per_world)
            if len(per_world) != self.worlds:
                raise ValueError(f"modality {m!r}: expected {self.worlds} neighborhood families, got {len(per_world)}")
            for fam in per_world:
                for x in fam:
                    if x < 0 or x & ~universe:
                        raise ValueError(f"modality {m!r}: {x:#b} is not a subset of the worlds")
            norm[m] = per_world
        if not norm:
            raise ValueError("a frame needs at least one modality")
        object.__setattr__(self, "neighborhoods", norm)

    __hash__ = None  # type: ignore[assignment]

    @property
    def universe(self) -> int:
        return (1 << self.worlds) - 1

    @property
    def modalities(self) -> tuple[str, ...]:
        return tuple(self.neighborhoods)

    def family(self, m: str, c: int) -> frozenset[int]:
        try:
            return self.neighborhoods[m][c]
        except KeyError:
            raise KeyError(f"frame has no modality {m!r}") from None

    def box(self, m: str, x: int) -> int:
        """``{c | x in N_m(c)}``."""
        out = 0
        for c, fam in enumerate(self.neighborhoods[m]):
            if x in fam:
                out |= 1 << c
        return out

    @classmethod
    def from_sets(cls, worlds: int, neighborhoods: Mapping[str, Iterable[Iterable[Iterable[int]]]]):
        """Build from explicit world lists, e.g. ``{"box": [[[0, 1], [1]], [[]]]}``."""
        return cls(worlds, {m: tuple(frozenset(to_mask(x) for x in fam) for fam in per_world)
                            for m, per_world in neighborhoods.items()})


def _resolve(frame: NeighborhoodFrame, m: str | None) -> str:
    if m is not None:
        return m
    if len(frame.modalities) != 1:
        raise ValueError(f"frame has modalities {frame.modalities}; name one")
    return frame.modalities[0]


def check_mt(frame: NeighborhoodFrame, m: str | None = None) -> bool:
    """Every neighborhood family is upward closed."""
    m = _resolve(frame, m)
    u = frame.universe
    return all(all(y in fam for x in fam for y in supersets(x, u)) for fam in frame.neighborhoods[m])


def check_tp(frame: NeighborhoodFrame, m: str | None = None) -> bool:
    m = _resolve(frame, m)
    return all(frame.universe in fam for fam in frame.neighborhoods[m])


def check_cf(frame: NeighborhoodFrame, m: str | None = None) -> bool:
    m = _resolve(frame, m)
    return all(x & y in fam for fam in frame.neighborhoods[m] for x in fam for y in fam)


def core(frame: NeighborhoodFrame, m: str, c: int) -> int:
    """Intersection of ``N_m(c)``; the empty family intersects to all worlds."""
    out = frame.universe
    for x in frame.neighborhoods[m][c]:
        out &= x
    return out


def check_kripke(frame: NeighborhoodFrame, m: str | None = None) -> bool:
    m = _resolve(frame, m)
    if not check_mt(frame, m):
        return False
    return all(core(frame, m, c) in fam for c, fam in enumerate(frame.neighborhoods[m]))


def frame_to_relation(frame: NeighborhoodFrame) -> dict[str, Relation]:
    """Accessibility relations ``(x, y) in R iff y in core N(x)``.

    Raises ValueError for a modality that is not Kripke.
    """
    out = {}
    for m in frame.modalities:
        if not check_kripke(frame, m):
            raise ValueError(f"modality {m!r} is not a Kripke neighborhood system")
        out[m] = frozenset((c, y) for c in range(frame.worlds) for y in members(core(frame, m, c)))
    return out


def successors(relation: Iterable[Pair], worlds: int) -> list[int]:
    succ = [0] * worlds
    for x, y in relation:
        succ[x] |= 1 << y
    return succ


def relation_to_frame(relations: Mapping[str, Iterable[Pair]], worlds: int) -> NeighborhoodFrame:
    """``N_m(c)`` is the up-set of ``R_m[c]``."""
    neigh = {}
    for m, rel in relations.items():
        rel = list(rel)
        for x, y in rel:
            if not (0 <= x < worlds and 0 <= y < worlds):
                raise ValueError(f"edge {(x, y)} outside worlds 0..{worlds - 1}")
        neigh[m] = tuple(upward_closure([s], worlds) for s in successors(rel, worlds))
    return NeighborhoodFrame(worlds, neigh)


def kripke_frame(worlds: int, relation: Iterable[Pair] = (), **relations: Iterable[Pair]) -> NeighborhoodFrame:
    """Shorthand: ``kripke_frame(3, [(0, 1)])`` or ``kripke_frame(2, E=..., C=...)``."""
    if not relations:
        relations = {DEFAULT_MODALITY: relation}
    return relation_to_frame(relations, worlds)


def check_conversely_wellfounded(relation: Iterable[Pair]) -> bool:
    """On a finite relation: no cycles, self-loops included."""
    graph: dict[int, set[int]] = {}
    for x, y in relation:
        graph.setdefault(x, set()).add(y)
    state: dict[int, int] = {}  # 1 = on stack, 2 = done
    for root in graph:
        if root in state:
            continue
        stack = [(root, iter(graph.get(root, ())))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                s = state.get(nxt)
                if s == 1:
                    return False
                if s is None:
                    state[nxt] = 1
                    stack.append((nxt, iter(graph.get(nxt, ()))))
                    break
            else:
                state[node] = 2
                stack.pop()
    return True


def transitive_closure_union(
    relation: Iterable[Pair], worlds: int | None = None, include_identity: bool = False
) -> Relation:
    """``R^1 | R^2 | ...``; with ``include_identity`` also ``R^0`` (needs ``worlds``)."""
    rel = set(relation)
    nodes = {v for e in rel for v in e}
    if include_identity:
        if worlds is None:
            raise ValueError("include_identity needs the number of worlds")
        nodes |= set(range(worlds))
    reach = set(rel)
    for k in nodes:
        for i in nodes:
            if (i, k) in reach:
                for j in nodes:
                    if (k, j) in reach:
                        reach.add((i, j))
    if include_identity:
        reach |= {(w, w) for w in range(worlds)}
    return frozenset(reach)


def is_transitive(relation: Iterable[Pair]) -> bool:
    rel = set(relation)
    return all((x, z) in rel for x, y in rel for (y2, z) in rel if y == y2)


# ---------------------------------------------------------------------------
# Enumeration


def all_frames(worlds: int, modality: str = DEFAULT_MODALITY) -> Iterator[NeighborhoodFrame]:
    """Every mono-modal neighborhood frame on ``worlds`` worlds.

    There are ``(2 ** 2 ** n) ** n`` of them: 4 for n=1, 256 for n=2.
    """
    families = [frozenset(x for x in range(1 << worlds) if code >> x & 1) for code in range(1 << (1 << worlds))]
    for choice in itertools.product(families, repeat=worlds):
        yield NeighborhoodFrame(worlds, {modality: choice})


def all_relations(worlds: int, reflexive: bool = True) -> Iterator[Relation]:
    """Every binary relation on ``worlds`` worlds (without loops if not ``reflexive``)."""
    pairs = [(x, y) for x in range(worlds) for y in range(worlds) if reflexive or x != y]
    for code in range(1 << len(pairs)):
        yield frozenset(p for i, p in enumerate(pairs) if code >> i & 1)


def strict_partial_orders(worlds: int) -> Iterator[Relation]:
    """Transitive, conversely well-founded relations: the finite GL Kripke frames."""
    for rel in all_relations(worlds, reflexive=False):
        if is_transitive(rel) and check_conversely_wellfounded(rel):
            yield rel


def common_knowledge_frame(worlds: int, everyone: Iterable[Pair], include_identity: bool = True) -> NeighborhoodFrame:
    """Kripke bi-frame with ``R_C`` the union of the powers of ``R_E``.

    ``include_identity`` adds the 0-th power, which is what makes the
    axioms ``Cp -> E^0 p`` (i.e. ``Cp -> p``) valid.
    """
    everyone = frozenset(everyone)
    common = transitive_closure_union(everyone, worlds, include_identity=include_identity)
    return relation_to_frame({"E": everyone, "C": common}, worlds)
