"""The interval subalgebra of ``2^(w+w)`` with the operators ``E`` and ``C``.

An element is a characteristic function on the ordinals below ``w+w``,
stored as the sorted, merged list of half-open intervals where it is 1.
Finite unions of such intervals form a Boolean subalgebra that is closed
under ``E`` and ``C`` (both return ``0``, ``1`` or a final segment), and
it contains the witness refuting ``Cp -> ECp``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class Ordinal:
    """``omegas * w + offset`` for ``omegas`` in {0, 1}; ``(2, 0)`` is ``w+w``."""

    omegas: int
    offset: int = 0

    def __post_init__(self):
        if self.omegas not in (0, 1, 2) or self.offset < 0 or (self.omegas == 2 and self.offset):
            raise ValueError(f"not an ordinal up to w+w: {self.omegas}*w+{self.offset}")

    @property
    def is_finite(self) -> bool:
        return self.omegas == 0

    def successor(self) -> "Ordinal":
        if self.omegas == 2:
            raise ValueError("w+w is only an interval endpoint")
        return Ordinal(self.omegas, self.offset + 1)

    def __str__(self) -> str:
        if self.omegas == 0:
            return str(self.offset)
        if self.omegas == 2:
            return "w+w"
        return "w" if self.offset == 0 else f"w+{self.offset}"

    def __repr__(self) -> str:
        return f"Ordinal({self})"


def Fin(n: int) -> Ordinal:
    return Ordinal(0, n)


def OmegaPlus(n: int) -> Ordinal:
    return Ordinal(1, n)


ZERO = Fin(0)
OMEGA = OmegaPlus(0)
OMEGA_OMEGA = Ordinal(2, 0)

_ORD_RE = re.compile(r"\s*(?:(\d+)|w\s*\+\s*w|w(?:\s*\+\s*(\d+))?)\s*\Z")


def parse_ordinal(text: str) -> Ordinal:
    """``3``, ``w``, ``w+2`` or ``w+w``."""
    m = _ORD_RE.match(text)
    if not m:
        raise ValueError(f"not an ordinal below or equal to w+w: {text!r}")
    if m.group(1) is not None:
        return Fin(int(m.group(1)))
    if "+" in text and m.group(2) is None:
        return OMEGA_OMEGA
    return OmegaPlus(int(m.group(2) or 0))


Interval = tuple[Ordinal, Ordinal]


def _canonical(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    out: list[list[Ordinal]] = []
    for lo, hi in sorted(i for i in intervals if i[0] < i[1]):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


@dataclass(frozen=True)
class OrdinalElement:
    """An element of the interval subalgebra, given by where it is 1."""

    ones: tuple[Interval, ...] = ()

    def __post_init__(self):
        for lo, hi in self.ones:
            if hi > OMEGA_OMEGA or lo >= OMEGA_OMEGA:
                raise ValueError(f"interval [{lo},{hi}) leaves w+w")
        object.__setattr__(self, "ones", _canonical(self.ones))

    @classmethod
    def of(cls, *intervals: tuple) -> "OrdinalElement":
        """``OrdinalElement.of((0, 1), (2, "w+w"))``; ints and strings are parsed."""
        return cls(tuple((_ord(lo), _ord(hi)) for lo, hi in intervals))

    def __call__(self, alpha: Ordinal) -> int:
        """The value ``x(alpha)``."""
        return int(any(lo <= alpha < hi for lo, hi in self.ones))

    def __and__(self, other: "OrdinalElement") -> "OrdinalElement":
        return meet(self, other)

    def __or__(self, other: "OrdinalElement") -> "OrdinalElement":
        return join(self, other)

    def __invert__(self) -> "OrdinalElement":
        return complement(self)

    def __le__(self, other: "OrdinalElement") -> bool:
        return meet(self, other) == self

    def __str__(self) -> str:
        if not self.ones:
            return "1 on {}"
        return "1 on " + " ∪ ".join(f"[{lo},{hi})" for lo, hi in self.ones)

    def segments(self) -> list[tuple[int, Ordinal, Ordinal]]:
        """The maximal constant pieces ``(value, lo, hi)`` covering ``[0, w+w)``."""
        out = []
        pos = ZERO
        for lo, hi in self.ones:
            if pos < lo:
                out.append((0, pos, lo))
            out.append((1, lo, hi))
            pos = hi
        if pos < OMEGA_OMEGA:
            out.append((0, pos, OMEGA_OMEGA))
        return out

    def case_table(self) -> str:
        """E.g. ``0 on [0,w), 1 on [w,w+w)``."""
        return ", ".join(f"{v} on [{lo},{hi})" for v, lo, hi in self.segments())


def _ord(v) -> Ordinal:
    if isinstance(v, Ordinal):
        return v
    if isinstance(v, int):
        return Fin(v)
    return parse_ordinal(v)


ZERO_A = OrdinalElement(())
ONE_A = OrdinalElement(((ZERO, OMEGA_OMEGA),))


def _combine(x: OrdinalElement, y: OrdinalElement, op) -> OrdinalElement:
    points = sorted({ZERO, OMEGA_OMEGA} | {p for lo, hi in x.ones + y.ones for p in (lo, hi)})
    pieces = [(lo, hi) for lo, hi in zip(points, points[1:]) if op(x(lo), y(lo))]
    return OrdinalElement(tuple(pieces))


def meet(x: OrdinalElement, y: OrdinalElement) -> OrdinalElement:
    return _combine(x, y, lambda a, b: a & b)


def join(x: OrdinalElement, y: OrdinalElement) -> OrdinalElement:
    return _combine(x, y, lambda a, b: a | b)


def complement(x: OrdinalElement) -> OrdinalElement:
    return OrdinalElement(tuple((lo, hi) for v, lo, hi in x.segments() if v == 0))


@dataclass(frozen=True)
class ZeroSetInfo:
    """Whether the 0-set is cofinal in ``w+w`` and, if not, where ``x`` becomes 1 for good."""

    cofinal: bool
    n_x: Ordinal | None = None


def zero_set_info(x: OrdinalElement) -> ZeroSetInfo:
    zeros = complement(x).ones
    if not zeros:
        return ZeroSetInfo(False, ZERO)
    last_hi = zeros[-1][1]
    if last_hi == OMEGA_OMEGA:
        return ZeroSetInfo(True, None)
    # Below a successor endpoint the 0-set has a maximum; below w it is
    # unbounded in w. Either way x is 1 from last_hi on and not before.
    return ZeroSetInfo(False, last_hi)


def final_segment(start: Ordinal) -> OrdinalElement:
    return OrdinalElement(((start, OMEGA_OMEGA),))


def op_E(x: OrdinalElement) -> OrdinalElement:
    if x == ONE_A:
        return ONE_A
    info = zero_set_info(x)
    if info.cofinal:
        return ZERO_A
    return final_segment(info.n_x.successor())


def op_C(x: OrdinalElement) -> OrdinalElement:
    """Closed form of the meet of ``E^n x`` over ``n >= 0``."""
    if x == ONE_A:
        return ONE_A
    info = zero_set_info(x)
    if info.cofinal or not info.n_x.is_finite:
        return ZERO_A
    return final_segment(OMEGA)


def truncated_meet_E(x: OrdinalElement, N: int) -> OrdinalElement:
    """Meet of ``E^n x`` for ``0 <= n <= N``, by iteration."""
    out = x
    y = x
    for _ in range(N):
        y = op_E(y)
        out = meet(out, y)
    return out


# ---------------------------------------------------------------------------
# Law checks and the incompleteness witness


def sample_ordinals(k: int = 20) -> list[Ordinal]:
    """``0..k`` and ``w..w+k``, both inclusive."""
    return [Fin(i) for i in range(k + 1)] + [OmegaPlus(i) for i in range(k + 1)]


def random_element(rng: random.Random, max_offset: int = 12, max_intervals: int = 3) -> OrdinalElement:
    """A random element with endpoints below ``w + max_offset``, or ``w+w``.

    The tail is drawn first, uniformly among: 0 cofinally, 1 from a finite
    point on, 1 from some ``w+k`` on. Without this almost every sample has a
    cofinal 0-set and the other branches of ``E`` go untested.
    """
    pool = [Fin(i) for i in range(max_offset)] + [OmegaPlus(i) for i in range(max_offset)]
    tail = rng.randrange(3)
    if tail == 0:
        start, body_pool = None, pool
    elif tail == 1:
        start = Fin(rng.randrange(max_offset))
        body_pool = [p for p in pool if p < start]
    else:
        start = OmegaPlus(rng.randrange(max_offset))
        body_pool = [p for p in pool if p < start]
    k = rng.randint(0, max_intervals)
    pts = sorted(rng.sample(body_pool, min(len(body_pool), 2 * k)))
    ones = list(zip(pts[0::2], pts[1::2]))
    if start is not None:
        ones.append((start, OMEGA_OMEGA))
    return OrdinalElement(tuple(ones))


@dataclass
class LawReport:
    samples: int
    violations: list[tuple[str, OrdinalElement, OrdinalElement]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_ckl_laws(samples: int = 500, seed: int = 0) -> LawReport:
    """Check ``E`` and ``C`` distribute over meets, ``E1 = 1`` and monotonicity.

    Uses ``samples`` random elements, each paired with the next one.
    """
    rng = random.Random(seed)
    xs = [random_element(rng) for _ in range(samples)]
    # Edge elements first so every branch of E is exercised.
    special = [ONE_A, ZERO_A, WITNESS, OrdinalElement.of(("w", "w+w")), OrdinalElement.of((0, "w"))]
    xs = special + xs if samples else []
    report = LawReport(samples)
    if op_E(ONE_A) != ONE_A:
        report.violations.append(("E1 = 1", ONE_A, ONE_A))
    for x, y in zip(xs, xs[1:] + xs[:1]):
        xy = meet(x, y)
        if op_E(xy) != meet(op_E(x), op_E(y)):
            report.violations.append(("E(x&y) = Ex & Ey", x, y))
        if op_C(xy) != meet(op_C(x), op_C(y)):
            report.violations.append(("C(x&y) = Cx & Cy", x, y))
        if not op_E(xy) <= op_E(y):
            report.violations.append(("x <= y implies Ex <= Ey", xy, y))
        if not op_C(xy) <= op_C(y):
            report.violations.append(("x <= y implies Cx <= Cy", xy, y))
    return report


def truncation_disagreements(
    xs: Sequence[OrdinalElement], N: int = 20, points: Sequence[Ordinal] | None = None
) -> list[tuple[OrdinalElement, Ordinal]]:
    """Points where ``truncated_meet_E(x, N)`` and ``op_C(x)`` differ."""
    points = sample_ordinals() if points is None else points
    out = []
    for x in xs:
        t, c = truncated_meet_E(x, N), op_C(x)
        out += [(x, a) for a in points if t(a) != c(a)]
    return out


WITNESS = OrdinalElement.of((0, 1), (2, "w+w"))


@dataclass
class IncompletenessReport:
    x: OrdinalElement
    cx: OrdinalElement
    ecx: OrdinalElement
    failing_point: Ordinal | None

    @property
    def refuted(self) -> bool:
        return self.failing_point is not None

    def lines(self) -> list[str]:
        out = [
            f"x     = {self.x.case_table()}",
            f"C x   = {self.cx.case_table()}",
            f"E C x = {self.ecx.case_table()}",
        ]
        if self.refuted:
            out.append(f"Cp -> ECp FAILS at alpha = {self.failing_point}: C x = 1, E C x = 0")
        else:
            out.append("C x <= E C x holds")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def demo_incompleteness() -> IncompletenessReport:
    """Evaluate ``C x`` and ``E C x`` at the witness and locate where ``C x <= E C x`` breaks."""
    x = WITNESS
    cx = op_C(x)
    ecx = op_E(cx)
    bad = meet(cx, complement(ecx))
    point = bad.ones[0][0] if bad.ones else None
    return IncompletenessReport(x, cx, ecx, point)
