"""Parser for the system description language.

    # Example 2.3
    vars x1 x2 x3
    unknown y
    eq: y_33 - x2*y_1 = v
    eq: y_22 = u

Statements end with ';' or a newline, '#' starts a comment. Statements:

    vars NAME...                 independent variables (n = count)
    unknown NAME... / unknowns   dependent variables (m = count)
    sources NAME...              optional: fixes the order of the sources
    option KEY INT               max_order, depth, seed, order
    eq [LABEL]: EXPR = SOURCE    SOURCE is a name or 0 (homogeneous)

EXPR is a linear form in jets with coefficients that are rational expressions
in the variables (+ - * / ^, integer literals, parentheses). A jet is written
NAME or NAME_DIGITS where the digits are variable indices in any order
(y_31 = y_13); NAME_0 is the order-zero jet.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .field import Field, RationalFunction
from .jets import Jet, SourceJet, index_digits, parse_index_digits


class SystemFileError(ValueError):
    """Base class; every error carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class GrammarError(SystemFileError):
    pass


class UnknownSymbolError(SystemFileError):
    pass


class IndexOutOfRangeError(SystemFileError):
    pass


class DuplicateLabelError(SystemFileError):
    pass


class NonlinearTermError(SystemFileError):
    """A term that is not linear and homogeneous in the jets."""


ERROR_CLASSES = (GrammarError, UnknownSymbolError, IndexOutOfRangeError,
                 DuplicateLabelError, NonlinearTermError)

OPTION_KEYS = ("max_order", "depth", "seed", "order")


@dataclass
class ParsedEquation:
    label: str
    lhs: Dict[Jet, RationalFunction]
    source: Optional[str]  # None for a homogeneous equation


@dataclass
class SystemFile:
    variables: Tuple[str, ...]
    unknowns: Tuple[str, ...]
    sources: Tuple[str, ...]
    equations: List[ParsedEquation]
    options: Dict[str, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.unknowns)

    def field(self) -> Field:
        return Field(self.variables)

    def to_system(self):
        from .system import LinearEquation, PDESystem

        K = self.field()
        orders: Dict[str, int] = {}
        eqs = []
        for pe in self.equations:
            rhs = {}
            o = max(j.order for j in pe.lhs)
            if pe.source is not None:
                a = self.sources.index(pe.source)
                rhs = {SourceJet(a, (0,) * self.n): K.one}
                orders[pe.source] = max(orders.get(pe.source, 0), o)
            eqs.append(LinearEquation(dict(pe.lhs), rhs, pe.label, o))
        q = max([e.order for e in eqs] + [self.options.get("order", 0)])
        src_orders = tuple(orders.get(s, q) for s in self.sources)
        return PDESystem(K, self.unknowns, tuple(eqs), self.sources, src_orders, q)


# lexer ----------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>[0-9]+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*(?:_[0-9]+|(?:_[A-Za-z][A-Za-z0-9]*)+)?)
  | (?P<op>[-+*/^():=;])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Tok]:
    toks = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise GrammarError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = mo.lastgroup
        if kind == "nl":
            toks.append(Tok("end", "\n", line, pos - start + 1))
            line += 1
            start = mo.end()
        elif kind == "op" and mo.group() == ";":
            toks.append(Tok("end", ";", line, pos - start + 1))
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, mo.group(), line, pos - start + 1))
        pos = mo.end()
    toks.append(Tok("end", "", line, pos - start + 1))
    return toks


# parser ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.variables: List[str] = []
        self.unknowns: List[str] = []
        self.sources: List[str] = []
        self.declared_sources = False
        self.equations: List[ParsedEquation] = []
        self.options: Dict[str, int] = {}
        self.K: Optional[Field] = None

    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, text=None) -> Tok:
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text if t.text not in ("", "\n") else "end of statement"
            raise GrammarError(f"expected {want!r}, got {got!r}", t.line, t.col)
        return t

    def parse(self) -> SystemFile:
        while self.peek().text != "" or self.peek().kind != "end":
            t = self.peek()
            if t.kind == "end":
                self.next()
                continue
            self.statement()
        return SystemFile(tuple(self.variables), tuple(self.unknowns), tuple(self.sources),
                          self.equations, dict(self.options))

    def names_until_end(self) -> List[Tok]:
        out = []
        while self.peek().kind != "end":
            t = self.next()
            if t.kind != "name" or "_" in t.text:
                raise GrammarError(f"expected a name, got {t.text!r}", t.line, t.col)
            out.append(t)
        return out

    def _declare(self, toks, target):
        taken = set(self.variables) | set(self.unknowns) | set(self.sources)
        for t in toks:
            if t.text in taken:
                raise DuplicateLabelError(f"name {t.text!r} declared twice", t.line, t.col)
            taken.add(t.text)
            target.append(t.text)

    def statement(self):
        t = self.next()
        if t.kind != "name":
            raise GrammarError(f"unexpected {t.text!r} at start of statement", t.line, t.col)
        kw = t.text
        if kw == "vars":
            if self.equations:
                raise GrammarError("vars must come before equations", t.line, t.col)
            self._declare(self.names_until_end(), self.variables)
            if len(self.variables) > 9:
                raise IndexOutOfRangeError("at most 9 variables are supported", t.line, t.col)
        elif kw in ("unknown", "unknowns"):
            self._declare(self.names_until_end(), self.unknowns)
        elif kw == "sources":
            self._declare(self.names_until_end(), self.sources)
            self.declared_sources = True
        elif kw == "option":
            key = self.expect("name")
            if key.text not in OPTION_KEYS:
                raise GrammarError(f"unknown option {key.text!r}", key.line, key.col)
            val = self.expect("num")
            self.options[key.text] = int(val.text)
        elif kw == "eq":
            self.equation(t)
        else:
            raise GrammarError(f"unknown statement {kw!r}", t.line, t.col)
        end = self.peek()
        if end.kind != "end":
            raise GrammarError(f"unexpected {end.text!r}", end.line, end.col)

    def equation(self, kw_tok):
        if not self.variables:
            raise GrammarError("vars must be declared before equations", kw_tok.line, kw_tok.col)
        if not self.unknowns:
            raise GrammarError("unknowns must be declared before equations", kw_tok.line, kw_tok.col)
        if self.K is None:
            self.K = Field(self.variables)
        label = None
        t = self.peek()
        if t.kind == "name":
            self.next()
            label = t.text
            if any(e.label == label for e in self.equations):
                raise DuplicateLabelError(f"duplicate equation label {label!r}", t.line, t.col)
        self.expect("op", ":")
        start = self.peek()
        val = self.sum()
        if not isinstance(val, dict):
            raise NonlinearTermError("left-hand side contains no jet", start.line, start.col)
        if not val:
            raise NonlinearTermError("left-hand side is identically zero", start.line, start.col)
        self.expect("op", "=")
        s = self.next()
        if s.kind == "num" and s.text == "0":
            source = None
        elif s.kind == "name" and "_" not in s.text:
            source = s.text
            if source in self.variables or source in self.unknowns:
                raise GrammarError(f"{source!r} is not a source name", s.line, s.col)
            if source not in self.sources:
                if self.declared_sources:
                    raise UnknownSymbolError(f"undeclared source {source!r}", s.line, s.col)
                self.sources.append(source)
        else:
            raise GrammarError(f"expected a source name or 0, got {s.text!r}", s.line, s.col)
        if label is None:
            k = len(self.equations) + 1
            used = {e.label for e in self.equations}
            while f"e{k}" in used:
                k += 1
            label = f"e{k}"
        self.equations.append(ParsedEquation(label, val, source))

    # expressions: values are RationalFunction (coefficient) or dict (linear form)
    def sum(self):
        first = self.peek()
        if first.kind == "op" and first.text in "+-":
            self.next()
            acc = self.product()
            if first.text == "-":
                acc = _neg(acc)
        else:
            acc = self.product()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next()
            rhs = self.product()
            if op.text == "-":
                rhs = _neg(rhs)
            acc = self._add(acc, rhs, op)
        return acc

    def _add(self, a, b, tok):
        if isinstance(a, dict) != isinstance(b, dict):
            raise NonlinearTermError("constant term mixed with jets", tok.line, tok.col)
        if isinstance(a, dict):
            out = dict(a)
            for k, v in b.items():
                w = out.get(k)
                w = v if w is None else w + v
                if w.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = w
            return out
        return a + b

    def product(self):
        acc = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next()
            rhs = self.unary()
            if op.text == "*":
                if isinstance(acc, dict) and isinstance(rhs, dict):
                    raise NonlinearTermError("product of two jets", op.line, op.col)
                if isinstance(acc, dict):
                    acc = _scale(acc, rhs)
                elif isinstance(rhs, dict):
                    acc = _scale(rhs, acc)
                else:
                    acc = acc * rhs
            else:
                if isinstance(rhs, dict):
                    raise NonlinearTermError("jet in a denominator", op.line, op.col)
                if rhs.is_zero():
                    raise GrammarError("division by zero", op.line, op.col)
                inv = rhs.inverse()
                acc = _scale(acc, inv) if isinstance(acc, dict) else acc * inv
        return acc

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return _neg(self.unary())
        if t.kind == "op" and t.text == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            op = self.next()
            e = self.expect("num")
            k = int(e.text)
            if isinstance(base, dict):
                if k != 1:
                    raise NonlinearTermError("power of a jet", op.line, op.col)
                return base
            out = self.K.one
            for _ in range(k):
                out = out * base
            return out
        return base

    def atom(self):
        t = self.next()
        if t.kind == "num":
            return self.K.const(int(t.text))
        if t.kind == "op" and t.text == "(":
            v = self.sum()
            self.expect("op", ")")
            return v
        if t.kind == "name":
            return self.name(t)
        got = t.text if t.text not in ("", "\n") else "end of statement"
        raise GrammarError(f"unexpected {got!r} in expression", t.line, t.col)

    def name(self, t: Tok):
        text = t.text
        if text in self.variables:
            return self.K.var(self.variables.index(text))
        base, _, digits = text.partition("_")
        if base in self.unknowns:
            n = len(self.variables)
            try:
                mu = parse_index_digits(digits, n) if digits else (0,) * n
            except IndexError as exc:
                raise IndexOutOfRangeError(f"{text}: {exc}", t.line, t.col) from None
            return {Jet(self.unknowns.index(base), mu): self.K.one}
        raise UnknownSymbolError(f"unknown symbol {text!r}", t.line, t.col)


def _neg(v):
    if isinstance(v, dict):
        return {k: -c for k, c in v.items()}
    return -v


def _scale(form, c):
    if c.is_zero():
        return {}
    return {k: x * c for k, x in form.items()}


def parse_system(text: str) -> SystemFile:
    return _Parser(text).parse()


def load_system(text: str):
    """Parse and convert to a PDESystem in one step."""
    return parse_system(text).to_system()


def render_system(sf: SystemFile) -> str:
    """Text form that parses back to an equal SystemFile."""
    from .jets import jet_key
    from .render import render_linear_form

    lines = [f"vars {' '.join(sf.variables)}",
             f"unknowns {' '.join(sf.unknowns)}"]
    if sf.sources:
        lines.append(f"sources {' '.join(sf.sources)}")
    for k in sorted(sf.options):
        lines.append(f"option {k} {sf.options[k]}")
    for e in sf.equations:
        lhs = render_linear_form(e.lhs, sf.unknowns, sf.variables, key=jet_key)
        lines.append(f"eq {e.label}: {lhs} = {e.source if e.source else 0}")
    return "\n".join(lines) + "\n"
