"""Abstract and concrete syntax of PCF with differentials (``.pcfd`` files).

Types are ``NatD(d)`` (the d-fold T tower over nat) and ``Arrow``.  T on an
arrow is pushed into the codomain, so a type is always an arrow spine ending
in some ``NatD(d)``; the sharp decomposition reads d off the spine end.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class NatD:
    d: int = 0

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("negative depth")


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"


Type = Union[NatD, Arrow]
NAT = NatD(0)


def t_shift(a: Type, times: int = 1) -> Type:
    """T applied ``times`` times: T(T^d nat) = T^{d+1} nat, T(A -> B) = A -> T B."""
    if times == 0:
        return a
    if isinstance(a, NatD):
        return NatD(a.d + times)
    return Arrow(a.dom, t_shift(a.cod, times))


def sharp_decompose(a: Type) -> tuple[int, Type]:
    """The unique (d, E) with E sharp and A = T^d E."""
    if isinstance(a, NatD):
        return a.d, NAT
    d, e = sharp_decompose(a.cod)
    return d, Arrow(a.dom, e)


def is_sharp(a: Type) -> bool:
    return sharp_decompose(a)[0] == 0


def t_unshift(a: Type, times: int = 1) -> Type:
    """Inverse of ``t_shift``; raises ValueError when the depth is too small."""
    d, e = sharp_decompose(a)
    if d < times:
        raise ValueError("depth too small")
    return t_shift(e, d - times)


def arrows(*tys: Type) -> Type:
    """Right-nested arrow type ``A1 -> ... -> An``."""
    out = tys[-1]
    for a in reversed(tys[:-1]):
        out = Arrow(a, out)
    return out


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Abs:
    var: str
    annot: Type
    body: "Term"


@dataclass(frozen=True)
class Fix:
    body: "Term"


@dataclass(frozen=True)
class Num:
    n: int


@dataclass(frozen=True)
class Succ:
    d: int
    arg: "Term"


@dataclass(frozen=True)
class Pred:
    d: int
    arg: "Term"


@dataclass(frozen=True)
class If:
    d: int
    scrut: "Term"
    then: "Term"
    orelse: "Term"


@dataclass(frozen=True)
class Let:
    d: int
    var: str
    scrut: "Term"
    body: "Term"


@dataclass(frozen=True)
class DApp:
    arg: "Term"


@dataclass(frozen=True)
class Inj:
    d: int
    i: int
    arg: "Term"


@dataclass(frozen=True)
class Theta:
    d: int
    arg: "Term"


@dataclass(frozen=True)
class Flip:
    d: int
    l: int
    arg: "Term"


@dataclass(frozen=True)
class Proj:
    d: int
    i: int
    arg: "Term"


Term = Union[Var, App, Abs, Fix, Num, Succ, Pred, If, Let, DApp, Inj, Theta, Flip, Proj]

# constructors with a single ``arg`` child and only integer parameters
UNARY = (Succ, Pred, DApp, Inj, Theta, Flip, Proj, Fix)


def children(t: Term) -> tuple:
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Abs):
        return (t.body,)
    if isinstance(t, Fix):
        return (t.body,)
    if isinstance(t, If):
        return (t.scrut, t.then, t.orelse)
    if isinstance(t, Let):
        return (t.scrut, t.body)
    if isinstance(t, (Succ, Pred, DApp, Inj, Theta, Flip, Proj)):
        return (t.arg,)
    return ()


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.var}
    if isinstance(t, Let):
        return free_vars(t.scrut) | (free_vars(t.body) - {t.var})
    out: frozenset[str] = frozenset()
    for c in children(t):
        out |= free_vars(c)
    return out


def all_names(t: Term) -> set[str]:
    """Every variable name occurring in ``t``, free or bound."""
    acc: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            acc.add(u.name)
        elif isinstance(u, (Abs, Let)):
            acc.add(u.var)
        stack.extend(children(u))
    return acc


_SUFFIX = re.compile(r"^(.*?)_(\d+)$")


def fresh(base: str, avoid) -> str:
    """Smallest ``base_N`` not in ``avoid`` (an existing ``_N`` suffix is stripped)."""
    m = _SUFFIX.match(base)
    stem = m.group(1) if m else base
    n = 1
    while f"{stem}_{n}" in avoid:
        n += 1
    return f"{stem}_{n}"


def alpha_eq(a: Term, b: Term) -> bool:
    return _alpha(a, b, {}, {})


def _alpha(a, b, ea: dict, eb: dict) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        xa, xb = ea.get(a.name), eb.get(b.name)
        if xa is None and xb is None:
            return a.name == b.name
        return xa is not None and xa == xb
    if isinstance(a, Abs):
        if a.annot != b.annot:
            return False
        k = object()
        return _alpha(a.body, b.body, {**ea, a.var: k}, {**eb, b.var: k})
    if isinstance(a, Let):
        if a.d != b.d or not _alpha(a.scrut, b.scrut, ea, eb):
            return False
        k = object()
        return _alpha(a.body, b.body, {**ea, a.var: k}, {**eb, b.var: k})
    if isinstance(a, Num):
        return a.n == b.n
    for attr in ("d", "i", "l"):
        if getattr(a, attr, None) != getattr(b, attr, None):
            return False
    return all(_alpha(x, y, ea, eb) for x, y in zip(children(a), children(b)))


# ---------------------------------------------------------------------------
# rendering


def render_type(a: Type) -> str:
    if isinstance(a, NatD):
        return "T " * a.d + "Nat"
    left = render_type(a.dom)
    if isinstance(a.dom, Arrow):
        left = f"({left})"
    return f"{left} -> {render_type(a.cod)}"


_TOP, _APP, _UNIT, _ATOM = range(4)


def _prefix(t: Term) -> str:
    if isinstance(t, Fix):
        return "fix"
    if isinstance(t, Succ):
        return f"succ^{t.d}"
    if isinstance(t, Pred):
        return f"pred^{t.d}"
    if isinstance(t, DApp):
        return "D"
    if isinstance(t, Inj):
        return f"inj^{t.d}_{t.i}"
    if isinstance(t, Theta):
        return f"sum^{t.d}"
    if isinstance(t, Flip):
        return f"flip^{{{t.d},{t.l}}}"
    if isinstance(t, Proj):
        return f"proj^{t.d}_{t.i}"
    raise TypeError(t)


def render(t: Term) -> str:
    return _render(t, _TOP)


def _render(t: Term, need: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.n)
    if isinstance(t, If):
        return f"if^{t.d}({render(t.scrut)}, {render(t.then)}, {render(t.orelse)})"
    if isinstance(t, Abs):
        s, lvl = f"\\{t.var}:{render_type(t.annot)}. {render(t.body)}", _TOP
    elif isinstance(t, Let):
        s, lvl = f"let^{t.d} {t.var} = {render(t.scrut)} in {render(t.body)}", _TOP
    elif isinstance(t, App):
        s, lvl = f"{_render(t.fun, _APP)} {_render(t.arg, _ATOM)}", _APP
    else:
        s, lvl = f"{_prefix(t)} {_render(t.body if isinstance(t, Fix) else t.arg, _ATOM)}", _UNIT
    return s if lvl >= need else f"({s})"


# ---------------------------------------------------------------------------
# parsing


class ParseError(Exception):
    def __init__(self, msg: str, pos: int | None = None, line: int | None = None, col: int | None = None):
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(msg + where)
        self.msg = msg
        self.pos = pos
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<arrow>->)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
  | (?P<sym>[\\λ:.(),=^_{}])
    """,
    re.VERBOSE,
)

KEYWORDS = {"fix", "succ", "pred", "if", "let", "in", "D", "inj", "sum", "flip", "proj", "Nat", "T"}


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> list[Tok]:
    out: list[Tok] = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            line, col = _linecol(src, pos)
            raise ParseError(f"lexical error: unexpected character {src[pos]!r}", pos, line, col)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if text == "λ":
                text = "\\"
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            out.append(Tok(kind, text, pos))
        pos = m.end()
    out.append(Tok("eof", "", pos))
    return out


def _linecol(src: str, pos: int) -> tuple[int, int]:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, src: str, free: tuple[str, ...] = ()):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.scope: list[str] = list(free)

    # token helpers
    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Tok | None = None) -> ParseError:
        tok = tok or self.peek()
        line, col = _linecol(self.src, tok.pos)
        return ParseError(msg, tok.pos, line, col)

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.text == text and t.kind in ("sym", "kw", "arrow")

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            got = self.peek().text or "end of input"
            raise self.error(f"syntax error: expected {text!r}, got {got!r}")
        return self.next()

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "int":
            raise self.error(f"syntax error: expected an integer, got {t.text or 'end of input'!r}")
        self.next()
        return int(t.text)

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            raise self.error(f"syntax error: expected a variable name, got {t.text or 'end of input'!r}")
        self.next()
        return t.text

    def done(self):
        if self.peek().kind != "eof":
            raise self.error(f"syntax error: unexpected {self.peek().text!r}")

    # types
    def typ(self) -> Type:
        left = self.tatom()
        if self.at("->"):
            self.next()
            return Arrow(left, self.typ())
        return left

    def tatom(self) -> Type:
        if self.at("Nat"):
            self.next()
            return NAT
        if self.at("T"):
            self.next()
            times = 1
            if self.at("^"):
                self.next()
                times = self.integer()
            return t_shift(self.tatom(), times)
        if self.at("("):
            self.next()
            a = self.typ()
            self.expect(")")
            return a
        raise self.error(f"syntax error: expected a type, got {self.peek().text or 'end of input'!r}")

    # terms
    def term(self) -> Term:
        if self.at("\\"):
            self.next()
            x = self.ident()
            self.expect(":")
            a = self.typ()
            self.expect(".")
            self.scope.append(x)
            body = self.term()
            self.scope.pop()
            return Abs(x, a, body)
        if self.at("let"):
            self.next()
            self.expect("^")
            d = self.integer()
            x = self.ident()
            self.expect("=")
            m = self.term()
            self.expect("in")
            self.scope.append(x)
            body = self.term()
            self.scope.pop()
            return Let(d, x, m, body)
        return self.app()

    def _starts_unit(self) -> bool:
        t = self.peek()
        if t.kind in ("ident", "int"):
            return True
        return t.kind in ("sym", "kw") and t.text in (
            "(", "\\", "let", "if", "fix", "succ", "pred", "D", "inj", "sum", "flip", "proj"
        )

    def app(self) -> Term:
        head = self.unit()
        while self._starts_unit():
            if self.at("\\") or self.at("let"):
                return App(head, self.term())
            head = App(head, self.unit())
        return head

    def operand(self) -> Term:
        if self.at("\\") or self.at("let"):
            return self.term()
        return self.unit()

    def unit(self) -> Term:
        t = self.peek()
        if t.kind == "ident":
            self.next()
            if t.text not in self.scope:
                line, col = _linecol(self.src, t.pos)
                raise ParseError(f"unbound variable {t.text!r}", t.pos, line, col)
            return Var(t.text)
        if t.kind == "int":
            self.next()
            return Num(int(t.text))
        if self.at("("):
            self.next()
            m = self.term()
            self.expect(")")
            return m
        if self.at("if"):
            self.next()
            self.expect("^")
            d = self.integer()
            self.expect("(")
            m = self.term()
            self.expect(",")
            p = self.term()
            self.expect(",")
            q = self.term()
            self.expect(")")
            return If(d, m, p, q)
        if self.at("fix"):
            self.next()
            return Fix(self.operand())
        if self.at("D"):
            self.next()
            return DApp(self.operand())
        if self.at("succ") or self.at("pred") or self.at("sum"):
            kw = self.next().text
            self.expect("^")
            d = self.integer()
            arg = self.operand()
            return {"succ": Succ, "pred": Pred, "sum": Theta}[kw](d, arg)
        if self.at("inj") or self.at("proj"):
            kw = self.next().text
            self.expect("^")
            d = self.integer()
            self.expect("_")
            itok = self.peek()
            i = self.integer()
            if i not in (0, 1):
                raise self.error("syntax error: index must be 0 or 1", itok)
            arg = self.operand()
            return (Inj if kw == "inj" else Proj)(d, i, arg)
        if self.at("flip"):
            self.next()
            self.expect("^")
            self.expect("{")
            d = self.integer()
            self.expect(",")
            l = self.integer()
            self.expect("}")
            return Flip(d, l, self.operand())
        raise self.error(f"syntax error: unexpected {t.text or 'end of input'!r}")


def parse_term(src: str, free: tuple[str, ...] | list[str] = ()) -> Term:
    """Parse a term; names not bound inside the term must be listed in ``free``."""
    p = _Parser(src, tuple(free))
    t = p.term()
    p.done()
    return t


def parse_type(src: str) -> Type:
    p = _Parser(src)
    a = p.typ()
    p.done()
    return a


def parse(src: str, free: tuple[str, ...] = ()) -> Term | Type:
    """Parse a term, falling back to a type when the text is not a term."""
    try:
        return parse_term(src, free)
    except ParseError as term_err:
        try:
            return parse_type(src)
        except ParseError:
            raise term_err from None


def read_header(src: str, key: str) -> str | None:
    """Value of a ``-- key: value`` comment line, if present."""
    pat = re.compile(rf"^\s*--\s*{re.escape(key)}\s*:\s*(.*?)\s*$", re.MULTILINE)
    m = pat.search(src)
    return m.group(1) if m else None


def iter_subterms(t: Term) -> Iterator[Term]:
    yield t
    for c in children(t):
        yield from iter_subterms(c)
