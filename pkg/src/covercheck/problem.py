"""Text format for morphism problems, and a small polynomial expression parser.

A problem file is a sequence of sections, each introduced by a header at the
start of a line::

    # nodal curve double cover
    fiber: x1 x2
    base: y1 y2
    order: grevlex grevlex
    ideal:
      y1 - x1^2 + 1
      y2 - x1*x2
      x2^2 - (x1^2 - 1)^2
    point smooth: y1=3, y2=6
    radical: ...
    saturate: ...

Expressions are separated by ``;`` or by line breaks.  A line break inside
parentheses or right after a binary operator continues the expression.
Multiplication is always explicit, ``^`` takes a non-negative integer
exponent, and ``a/b`` is a rational literal (there is no general division).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Polynomial, VarTable, format_poly

SECTIONS = ("fiber", "base", "order", "ideal", "point", "radical", "saturate")
ORDER_NAMES = ("lex", "grevlex")


class ProblemSyntaxError(ValueError):
    """Lexical, syntax or declaration error, located by line and column (1-based)."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    kind: str      # ident, number, op, newline, eof
    text: str
    line: int
    col: int
    value: object = None


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>\d+(?:[ \t]*/[ \t]*\S?\d*)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^(),;:=])
""", re.VERBOSE)

_RATIONAL_RE = re.compile(r"(\d+)[ \t]*/[ \t]*(\d+)$")


def tokenize(text: str) -> list[Token]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ProblemSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "newline":
            out.append(Token("newline", s, line, col))
            line += 1
            line_start = m.end()
        elif kind == "number":
            if "/" in s:
                r = _RATIONAL_RE.match(s)
                if r is None:
                    raise ProblemSyntaxError(f"malformed rational {s.strip()!r}", line, col)
                if int(r.group(2)) == 0:
                    raise ProblemSyntaxError(f"malformed rational {s!r}: zero denominator",
                                             line, col)
                value = Fraction(int(r.group(1)), int(r.group(2)))
            else:
                value = Fraction(int(s))
            out.append(Token("number", s, line, col, value))
        elif kind in ("ident", "op"):
            out.append(Token(kind, s, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# ----------------------------------------------------------- expressions


class _ExprParser:
    """Recursive descent over a token list; builds polynomials directly."""

    def __init__(self, tokens: Sequence[Token], vars: VarTable):
        self.toks = list(tokens)
        self.i = 0
        self.vars = vars
        self.depth = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def skip_soft_newlines(self):
        while self.peek().kind == "newline":
            self.i += 1

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind != "op":
            raise _unexpected(t, f"expected {text!r}")
        return self.next()

    def expr(self) -> Polynomial:
        f = self.term()
        while True:
            if self.depth:
                self.skip_soft_newlines()
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.next()
                self.skip_soft_newlines()
                g = self.term()
                f = f + g if t.text == "+" else f - g
            else:
                return f

    def term(self) -> Polynomial:
        f = self.unary()
        while True:
            if self.depth:
                self.skip_soft_newlines()
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.next()
                self.skip_soft_newlines()
                f = f * self.unary()
            elif t.kind in ("ident", "number") or (t.kind == "op" and t.text == "("):
                raise ProblemSyntaxError("missing '*' (juxtaposition is not multiplication)",
                                         t.line, t.col)
            else:
                return f

    def unary(self) -> Polynomial:
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.next()
            self.skip_soft_newlines()
            f = self.unary()
            return -f if t.text == "-" else f
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            self.skip_soft_newlines()
            e = self.peek()
            if e.kind != "number" or e.value.denominator != 1:
                raise _unexpected(e, "exponent must be a non-negative integer")
            self.next()
            return base ** int(e.value)
        return base

    def atom(self) -> Polynomial:
        t = self.next()
        if t.kind == "number":
            return self.vars.const(t.value)
        if t.kind == "ident":
            if t.text not in self.vars.names:
                raise ProblemSyntaxError(f"undeclared variable {t.text!r}", t.line, t.col)
            return self.vars.gen(t.text)
        if t.kind == "op" and t.text == "(":
            self.depth += 1
            self.skip_soft_newlines()
            f = self.expr()
            self.skip_soft_newlines()
            self.expect(")")
            self.depth -= 1
            return f
        raise _unexpected(t, "expected a number, variable or '('")


def _unexpected(t: Token, what: str) -> ProblemSyntaxError:
    if t.kind == "eof":
        return ProblemSyntaxError(f"{what}, found end of input", t.line, t.col)
    if t.kind == "newline":
        return ProblemSyntaxError(f"{what}, found end of line", t.line, t.col)
    return ProblemSyntaxError(f"{what}, found {t.text!r}", t.line, t.col)


def _parse_expr_list(tokens: Sequence[Token], vars: VarTable) -> list[Polynomial]:
    """Expressions separated by ';' or line breaks."""
    p = _ExprParser(list(tokens) + [_eof_after(tokens)], vars)
    out = []
    while True:
        while p.peek().kind == "newline" or (p.peek().kind == "op" and p.peek().text == ";"):
            p.next()
        if p.peek().kind == "eof":
            return out
        out.append(p.expr())
        t = p.peek()
        if t.kind == "eof":
            return out
        if t.kind == "newline" or (t.kind == "op" and t.text == ";"):
            continue
        raise _unexpected(t, "expected an operator, ';' or end of line")


def _eof_after(tokens: Sequence[Token]) -> Token:
    if tokens:
        last = tokens[-1]
        return Token("eof", "", last.line, last.col + len(last.text))
    return Token("eof", "", 1, 1)


def parse_polynomial(text: str, vars: VarTable) -> Polynomial:
    """Parse one expression over a fixed variable table."""
    toks = [t for t in tokenize(text) if t.kind != "newline"]
    p = _ExprParser(toks, vars)
    if p.peek().kind == "eof":
        raise _unexpected(p.peek(), "expected an expression")
    f = p.expr()
    if p.peek().kind != "eof":
        raise _unexpected(p.peek(), "expected an operator or end of input")
    return f


# --------------------------------------------------------- problem files

@dataclass
class ProblemFile:
    fiber: tuple[str, ...]
    base: tuple[str, ...]
    orders: tuple[str, str] = ("grevlex", "grevlex")
    ideal: list[Polynomial] = field(default_factory=list)
    points: dict[str, dict[str, Fraction]] = field(default_factory=dict)
    radical: list[Polynomial] | None = None
    saturate: list[Polynomial] = field(default_factory=list)

    @property
    def vars(self) -> VarTable:
        return VarTable.of(self.fiber, self.base)

    def presentation(self):
        from .morphism import MorphismPresentation
        return MorphismPresentation(self.vars, self.ideal, self.orders)

    def radical_presentation(self):
        if self.radical is None:
            return None
        from .morphism import MorphismPresentation
        return MorphismPresentation(self.vars, self.radical, self.orders)


def _split_sections(tokens: list[Token]):
    """Group tokens by section header; a header must open a line."""
    sections = []
    current = None
    at_line_start = True
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t.kind == "eof":
            break
        if at_line_start and t.kind == "ident" and t.text in SECTIONS:
            if t.text == "point":
                name = tokens[i + 1]
                colon = tokens[i + 2] if i + 2 < len(tokens) else tokens[-1]
                if name.kind != "ident":
                    raise _unexpected(name, "expected a point name after 'point'")
                if colon.text != ":":
                    raise _unexpected(colon, "expected ':' after the point name")
                current = ("point", name.text, t, [])
                i += 3
            else:
                colon = tokens[i + 1]
                if colon.text != ":":
                    raise _unexpected(colon, f"expected ':' after {t.text!r}")
                current = (t.text, None, t, [])
                i += 2
            sections.append(current)
            at_line_start = False
            continue
        if t.kind == "newline":
            at_line_start = True
            if current is not None:
                current[3].append(t)
            i += 1
            continue
        at_line_start = False
        if current is None:
            raise ProblemSyntaxError(
                f"expected a section header ({', '.join(SECTIONS)}), found {t.text!r}",
                t.line, t.col)
        current[3].append(t)
        i += 1
    return sections


def _names(tokens: Iterable[Token], what: str) -> list[tuple[str, Token]]:
    out = []
    for t in tokens:
        if t.kind == "newline" or (t.kind == "op" and t.text == ","):
            continue
        if t.kind != "ident":
            raise _unexpected(t, f"expected a {what} name")
        out.append((t.text, t))
    return out


def _parse_point(tokens: list[Token], base: Sequence[str], header: Token) -> dict[str, Fraction]:
    toks = [t for t in tokens if t.kind != "newline"]
    toks = [t for t in toks if not (t.kind == "op" and t.text == ",")]
    named = any(t.kind == "op" and t.text == "=" for t in toks)
    values: dict[str, Fraction] = {}

    def number(k):
        sign = 1
        if k < len(toks) and toks[k].kind == "op" and toks[k].text in "+-":
            sign = -1 if toks[k].text == "-" else 1
            k += 1
        if k >= len(toks) or toks[k].kind != "number":
            t = toks[k] if k < len(toks) else _eof_after(tokens or [header])
            raise _unexpected(t, "expected a rational value")
        return sign * toks[k].value, k + 1

    k = 0
    if named:
        while k < len(toks):
            name = toks[k]
            if name.kind != "ident":
                raise _unexpected(name, "expected 'variable=value'")
            if name.text not in base:
                raise ProblemSyntaxError(f"{name.text!r} is not a base variable",
                                         name.line, name.col)
            if name.text in values:
                raise ProblemSyntaxError(f"{name.text!r} assigned twice", name.line, name.col)
            if k + 1 >= len(toks) or toks[k + 1].text != "=":
                raise _unexpected(toks[k + 1] if k + 1 < len(toks) else _eof_after(tokens),
                                  "expected '='")
            values[name.text], k = number(k + 2)
    else:
        vals = []
        while k < len(toks):
            v, k = number(k)
            vals.append(v)
        if len(vals) != len(base):
            raise ProblemSyntaxError(
                f"point needs {len(base)} values for {' '.join(base)}, got {len(vals)}",
                header.line, header.col)
        values = dict(zip(base, vals))
    missing = [v for v in base if v not in values]
    if missing:
        raise ProblemSyntaxError(f"point leaves {', '.join(missing)} unassigned",
                                 header.line, header.col)
    return {v: values[v] for v in base}


def parse_problem(text: str) -> ProblemFile:
    sections = _split_sections(tokenize(text))
    seen: dict[str, Token] = {}
    for kind, name, header, _ in sections:
        key = kind if kind != "point" else f"point {name}"
        if key in seen:
            raise ProblemSyntaxError(f"section {key!r} given twice", header.line, header.col)
        seen[key] = header
    for req in ("fiber", "base", "ideal"):
        if req not in seen:
            raise ProblemSyntaxError(f"missing required section {req!r}")
    by_kind = {(k if k != "point" else f"point {n}"): toks for k, n, _, toks in sections}

    declared: dict[str, Token] = {}
    blocks = {}
    for block in ("fiber", "base"):
        names = []
        for name, tok in _names(by_kind[block], "variable"):
            if name in declared:
                raise ProblemSyntaxError(f"duplicate variable {name!r}", tok.line, tok.col)
            if name in SECTIONS:
                raise ProblemSyntaxError(f"{name!r} is reserved", tok.line, tok.col)
            declared[name] = tok
            names.append(name)
        blocks[block] = tuple(names)

    orders = ("grevlex", "grevlex")
    if "order" in by_kind:
        names = _names(by_kind["order"], "order")
        for name, tok in names:
            if name not in ORDER_NAMES:
                raise ProblemSyntaxError(f"unknown order {name!r} (expected lex or grevlex)",
                                         tok.line, tok.col)
        if len(names) == 1:
            orders = (names[0][0], names[0][0])
        elif len(names) == 2:
            orders = (names[0][0], names[1][0])
        else:
            raise ProblemSyntaxError("order takes one or two names", seen["order"].line,
                                     seen["order"].col)

    vars = VarTable.of(blocks["fiber"], blocks["base"])
    ideal = _parse_expr_list(by_kind["ideal"], vars)
    radical = _parse_expr_list(by_kind["radical"], vars) if "radical" in by_kind else None
    saturate = _parse_expr_list(by_kind["saturate"], vars) if "saturate" in by_kind else []
    points = {}
    for kind, name, header, toks in sections:
        if kind == "point":
            points[name] = _parse_point(toks, blocks["base"], header)
    return ProblemFile(blocks["fiber"], blocks["base"], orders, ideal, points, radical, saturate)


def load_problem(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def format_point(point: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in point.items())


def format_problem(p: ProblemFile) -> str:
    """Canonical text; ``parse_problem(format_problem(p))`` reproduces ``p``."""
    lines = [f"fiber: {' '.join(p.fiber)}", f"base: {' '.join(p.base)}",
             f"order: {p.orders[0]} {p.orders[1]}", "ideal:"]
    lines += [f"  {format_poly(g)}" for g in p.ideal]
    if p.radical is not None:
        lines.append("radical:")
        lines += [f"  {format_poly(g)}" for g in p.radical]
    if p.saturate:
        lines.append("saturate:")
        lines += [f"  {format_poly(g)}" for g in p.saturate]
    for name, pt in p.points.items():
        lines.append(f"point {name}: {format_point(pt)}")
    return "\n".join(lines) + "\n"
