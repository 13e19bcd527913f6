"""Predicate modal formulas: AST, concrete syntax, variables and substitution.

The core connectives are ``Top``, ``Bottom``, ``Atom``, ``And``, ``Not``,
``Forall`` and ``Box``.  Everything else (``Or``, ``Implies``, ``Iff``,
``Exists``, ``Diamond``) is a constructor function that expands into the
core set, so two formulas are equal exactly when their core trees are.

Concrete grammar::

    formula := iff
    iff     := imp ('<->' imp)*
    imp     := or ('->' imp)?
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | '[' modname? ']' unary | '<' modname? '>' unary
             | ('forall' | 'exists') VAR '.' formula | atom
    atom    := 'T' | 'F' | IDENT ('(' VAR (',' VAR)* ')')? | '(' formula ')'

``[]`` and ``<>`` name the default modality ``"box"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

DEFAULT_MODALITY = "box"

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_RESERVED = frozenset({"T", "F", "forall", "exists"})


class ParseError(ValueError):
    """Syntax error carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


class ArityError(ParseError):
    """A predicate symbol is used with two different arities."""


class SubstitutionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST


class Formula:
    """Base class of the formula AST.  Subclasses are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)


def _cached_hash(cls):
    # Formula trees are compared and hashed a lot during proof checking;
    # caching the hash keeps that linear in the number of distinct nodes.
    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((cls.__name__,) + tuple(getattr(self, f) for f in cls.__dataclass_fields__))
            object.__setattr__(self, "_h", h)
        return h

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True, eq=True)
class Top(Formula):
    pass


@_cached_hash
@dataclass(frozen=True, eq=True)
class Bottom(Formula):
    pass


@_cached_hash
@dataclass(frozen=True, eq=True)
class Atom(Formula):
    pred: str
    args: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@_cached_hash
@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula


@_cached_hash
@dataclass(frozen=True, eq=True)
class Not(Formula):
    body: Formula


@_cached_hash
@dataclass(frozen=True, eq=True)
class Forall(Formula):
    var: str
    body: Formula


@_cached_hash
@dataclass(frozen=True, eq=True)
class Box(Formula):
    modality: str
    body: Formula


TOP = Top()
BOTTOM = Bottom()


def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def Iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


def Exists(var: str, body: Formula) -> Formula:
    return Not(Forall(var, Not(body)))


def Diamond(modality: str, body: Formula) -> Formula:
    return Not(Box(modality, Not(body)))


def atom(pred: str, *args: str) -> Atom:
    return Atom(pred, tuple(args))


def box_power(modality: str, n: int, body: Formula) -> Formula:
    """``[m]^n body`` (``body`` itself when ``n == 0``)."""
    for _ in range(n):
        body = Box(modality, body)
    return body


def diamond_power(modality: str, n: int, body: Formula) -> Formula:
    for _ in range(n):
        body = Diamond(modality, body)
    return body


# ---------------------------------------------------------------------------
# Structural queries


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, And):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Not, Box)):
        return free_vars(f.body)
    if isinstance(f, Forall):
        return free_vars(f.body) - {f.var}
    return frozenset()


def all_vars(f: Formula) -> frozenset[str]:
    """Every variable occurring in ``f``, free or bound."""
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, And):
        return all_vars(f.left) | all_vars(f.right)
    if isinstance(f, (Not, Box)):
        return all_vars(f.body)
    if isinstance(f, Forall):
        return all_vars(f.body) | {f.var}
    return frozenset()


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def predicates(f: Formula) -> dict[str, int]:
    """Map each predicate symbol of ``f`` to its arity.

    Raises ArityError if a symbol occurs with two arities.
    """
    out: dict[str, int] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            known = out.setdefault(g.pred, len(g.args))
            if known != len(g.args):
                raise ArityError(f"predicate {g.pred!r} used with arities {known} and {len(g.args)}", 0, 0)
        elif isinstance(g, And):
            stack += (g.left, g.right)
        elif isinstance(g, (Not, Box, Forall)):
            stack.append(g.body)
    return out


def modalities(f: Formula) -> frozenset[str]:
    if isinstance(f, Box):
        return modalities(f.body) | {f.modality}
    if isinstance(f, And):
        return modalities(f.left) | modalities(f.right)
    if isinstance(f, (Not, Forall)):
        return modalities(f.body)
    return frozenset()


def depth(f: Formula) -> int:
    """Nesting depth of modal operators and quantifiers."""
    if isinstance(f, (Box, Forall)):
        return 1 + depth(f.body)
    if isinstance(f, Not):
        return depth(f.body)
    if isinstance(f, And):
        return max(depth(f.left), depth(f.right))
    return 0


def size(f: Formula) -> int:
    if isinstance(f, And):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, (Not, Box, Forall)):
        return 1 + size(f.body)
    return 1


def fresh_var(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


# ---------------------------------------------------------------------------
# Substitution


def substitute_var(f: Formula, x: str, y: str) -> Formula:
    """``[y/x]f``: replace the free occurrences of ``x`` by ``y``.

    No renaming is done, so ``y`` may be captured if it is bound in ``f``.
    """
    if isinstance(f, Atom):
        if x not in f.args:
            return f
        return Atom(f.pred, tuple(y if a == x else a for a in f.args))
    if isinstance(f, And):
        return And(substitute_var(f.left, x, y), substitute_var(f.right, x, y))
    if isinstance(f, Not):
        return Not(substitute_var(f.body, x, y))
    if isinstance(f, Box):
        return Box(f.modality, substitute_var(f.body, x, y))
    if isinstance(f, Forall):
        if f.var == x:
            return f
        return Forall(f.var, substitute_var(f.body, x, y))
    return f


@dataclass(frozen=True)
class Replacement:
    """The formula a predicate symbol is replaced by.

    ``params`` are the placeholder variables standing for the atom's
    arguments, in order.
    """

    params: tuple[str, ...]
    body: Formula

    def __post_init__(self):
        if not isinstance(self.params, tuple):
            object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise SubstitutionError(f"repeated placeholder in {self.params}")


SubstitutionMap = Mapping[str, Replacement]
SubstitutionLike = Mapping[str, Union[Replacement, Formula, tuple]]


def substitution(mapping: SubstitutionLike | None = None, **kw) -> dict[str, Replacement]:
    """Normalise a substitution.

    Values may be a Replacement, a bare Formula (for a 0-ary symbol) or a
    ``(params, body)`` pair.  Bodies given as strings are parsed.
    """
    items = dict(mapping or {})
    items.update(kw)
    out = {}
    for pred, value in items.items():
        if isinstance(value, Replacement):
            out[pred] = value
        elif isinstance(value, (Formula, str)):
            out[pred] = Replacement((), _as_formula(value))
        else:
            params, body = value
            out[pred] = Replacement(tuple(params), _as_formula(body))
    return out


def _as_formula(value) -> Formula:
    return parse(value) if isinstance(value, str) else value


def _rename_simultaneous(f: Formula, mapping: dict[str, str]) -> Formula:
    """Capture-avoiding simultaneous renaming of free variables."""
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(mapping.get(a, a) for a in f.args))
    if isinstance(f, And):
        return And(_rename_simultaneous(f.left, mapping), _rename_simultaneous(f.right, mapping))
    if isinstance(f, Not):
        return Not(_rename_simultaneous(f.body, mapping))
    if isinstance(f, Box):
        return Box(f.modality, _rename_simultaneous(f.body, mapping))
    if isinstance(f, Forall):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        var, body = f.var, f.body
        if var in inner.values():
            new = fresh_var(var, set(inner.values()) | set(inner) | all_vars(body))
            body = substitute_var(body, var, new)
            var = new
        return Forall(var, _rename_simultaneous(body, inner))
    return f


def apply_substitution(s: SubstitutionLike, f: Formula) -> Formula:
    """Uniformly substitute formulas for predicate symbols in ``f``.

    Each atom ``P(t1..tn)`` with ``P`` in ``s`` becomes the replacement body
    with its placeholders instantiated to ``t1..tn``.  Bound variables of
    ``f`` that would capture a parameter of some replacement are renamed,
    as are binders inside a replacement that would capture an argument.
    """
    s = substitution(s)
    if not s:
        return f
    parameters: set[str] = set()
    for rep in s.values():
        parameters |= free_vars(rep.body) - set(rep.params)
    reserved = set(parameters)
    for rep in s.values():
        reserved |= all_vars(rep.body)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            rep = s.get(g.pred)
            if rep is None:
                return g
            if len(rep.params) != len(g.args):
                raise SubstitutionError(
                    f"{g.pred} has arity {len(g.args)} but its replacement takes {len(rep.params)} arguments"
                )
            return _rename_simultaneous(rep.body, dict(zip(rep.params, g.args)))
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, Box):
            return Box(g.modality, go(g.body))
        if isinstance(g, Forall):
            var, body = g.var, g.body
            if var in parameters:
                new = fresh_var(var, reserved | all_vars(body))
                body = substitute_var(body, var, new)
                var = new
            return Forall(var, go(body))
        return g

    return go(f)


# ---------------------------------------------------------------------------
# Printing

_IFF, _IMP, _OR, _AND, _UNARY, _ATOM = 0, 1, 2, 3, 4, 5
_QUANT = -1


def _modality_text(m: str) -> str:
    return "" if m == DEFAULT_MODALITY else m


def _fmt(f: Formula) -> tuple[str, int]:
    if isinstance(f, Top):
        return "T", _ATOM
    if isinstance(f, Bottom):
        return "F", _ATOM
    if isinstance(f, Atom):
        if not f.args:
            return f.pred, _ATOM
        return f"{f.pred}({','.join(f.args)})", _ATOM
    if isinstance(f, Not):
        b = f.body
        if (
            isinstance(b, And) and isinstance(b.left, Not) and isinstance(b.right, Not)
            and not isinstance(b.left.body, And)
        ):
            return f"{_wrap(b.left.body, _OR)} | {_wrap(b.right.body, _AND)}", _OR
        if isinstance(b, And) and isinstance(b.right, Not):
            return f"{_wrap(b.left, _OR)} -> {_wrap(b.right.body, _IMP)}", _IMP
        if isinstance(b, Box) and isinstance(b.body, Not):
            return f"<{_modality_text(b.modality)}>{_wrap(b.body.body, _UNARY)}", _UNARY
        if isinstance(b, Forall) and isinstance(b.body, Not):
            return f"exists {b.var}. {to_text(b.body.body)}", _QUANT
        return f"~{_wrap(b, _UNARY)}", _UNARY
    if isinstance(f, And):
        pair = _as_iff(f)
        if pair is not None:
            return f"{_wrap(pair[0], _IFF)} <-> {_wrap(pair[1], _IMP)}", _IFF
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _UNARY)}", _AND
    if isinstance(f, Box):
        return f"[{_modality_text(f.modality)}]{_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, Forall):
        return f"forall {f.var}. {to_text(f.body)}", _QUANT
    raise TypeError(f"not a formula: {f!r}")


def _as_iff(f: And):
    left, right = f.left, f.right
    if (
        isinstance(left, Not) and isinstance(left.body, And) and isinstance(left.body.right, Not)
        and right == Implies(left.body.right.body, left.body.left)
    ):
        return left.body.left, left.body.right.body
    return None


def _wrap(f: Formula, need: int) -> str:
    text, level = _fmt(f)
    return text if level >= need else f"({text})"


def to_text(f: Formula) -> str:
    """Render ``f`` in the concrete syntax; ``parse(to_text(f)) == f``."""
    return _fmt(f)[0]


def dump(f: Formula, indent: int = 0) -> str:
    """Indented dump of the core tree, one node per line."""
    pad = "  " * indent
    if isinstance(f, Atom):
        return f"{pad}Atom {f.pred}({', '.join(f.args)})"
    if isinstance(f, (Top, Bottom)):
        return f"{pad}{type(f).__name__}"
    if isinstance(f, And):
        return f"{pad}And\n{dump(f.left, indent + 1)}\n{dump(f.right, indent + 1)}"
    if isinstance(f, Not):
        return f"{pad}Not\n{dump(f.body, indent + 1)}"
    if isinstance(f, Box):
        return f"{pad}Box {f.modality}\n{dump(f.body, indent + 1)}"
    if isinstance(f, Forall):
        return f"{pad}Forall {f.var}\n{dump(f.body, indent + 1)}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Parsing

_UNICODE = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "⊃": "->", "↔": "<->", "≡": "<->",
            "∀": "forall ", "∃": "exists ", "□": "[]", "◇": "<>", "⊤": "T", "⊥": "F"}

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<op><->|->|[~&|()\[\]<>.,])|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<bad>.)"
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    for k, v in _UNICODE.items():
        text = text.replace(k, v)
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        col = m.start() - line_start + 1
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = m.start() + chunk.rfind("\n") + 1
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", line, col)
        tokens.append(_Token(kind, m.group(), line, col))
    tokens.append(_Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.arity: dict[str, tuple[int, _Token]] = {}

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def ident(self, what: str) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in _RESERVED:
            self.error(f"expected {what}")
        self.pos += 1
        return tok.text

    def formula(self) -> Formula:
        left = self.imp()
        while self.accept("<->"):
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary())
        return left

    def modname(self, close: str) -> str:
        if self.accept(close):
            return DEFAULT_MODALITY
        name = self.ident("modality name")
        self.expect(close)
        return name

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("["):
            m = self.modname("]")
            return Box(m, self.unary())
        if self.accept("<"):
            m = self.modname(">")
            return Diamond(m, self.unary())
        if tok.kind == "ident" and tok.text in ("forall", "exists"):
            self.pos += 1
            var = self.ident("variable after quantifier")
            self.expect(".")
            body = self.formula()
            return Forall(var, body) if tok.text == "forall" else Exists(var, body)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "ident" and tok.text == "T":
            self.pos += 1
            return TOP
        if tok.kind == "ident" and tok.text == "F":
            self.pos += 1
            return BOTTOM
        if tok.kind != "ident" or tok.text in _RESERVED:
            self.error("expected a formula")
        name = self.ident("predicate symbol")
        args: list[str] = []
        if self.accept("("):
            args.append(self.ident("variable"))
            while self.accept(","):
                args.append(self.ident("variable"))
            self.expect(")")
        known = self.arity.setdefault(name, (len(args), tok))
        if known[0] != len(args):
            raise ArityError(
                f"predicate {name!r} used with arity {len(args)} but earlier with arity {known[0]}",
                tok.line,
                tok.col,
            )
        return Atom(name, tuple(args))


def parse(text: str) -> Formula:
    """Parse the concrete syntax into a core Formula."""
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        p.error("expected end of input")
    return f


def is_identifier(name: str) -> bool:
    return bool(_IDENT_RE.match(name)) and name not in _RESERVED


def random_formula(
    rng,
    depth: int = 3,
    modalities: tuple[str, ...] = (DEFAULT_MODALITY,),
    letters: tuple[str, ...] = ("p",),
    unary: tuple[str, ...] = ("P",),
    variables: tuple[str, ...] = ("x", "y"),
) -> Formula:
    """A random closed formula of depth at most ``depth``, drawn from ``rng``.

    Unary atoms only appear under a quantifier binding their variable.
    """

    def go(d: int, bound: tuple[str, ...]) -> Formula:
        if d == 0 or rng.random() < 0.2:
            if bound and unary and rng.random() < 0.6:
                return Atom(rng.choice(unary), (rng.choice(bound),))
            return rng.choice([Atom(q, ()) for q in letters] + [TOP, BOTTOM] if rng.random() < 0.15
                              else [Atom(q, ()) for q in letters])
        op = rng.choice(["not", "and", "imp", "box", "forall"] if unary else ["not", "and", "imp", "box"])
        if op == "not":
            return Not(go(d - 1, bound))
        if op == "and":
            return And(go(d - 1, bound), go(d - 1, bound))
        if op == "imp":
            return Implies(go(d - 1, bound), go(d - 1, bound))
        if op == "box":
            return Box(rng.choice(modalities), go(d - 1, bound))
        v = variables[len(bound) % len(variables)]
        return Forall(v, go(d - 1, bound + (v,)))

    return go(depth, ())
