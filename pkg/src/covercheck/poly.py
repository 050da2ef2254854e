"""Sparse multivariate polynomials over the rationals.

A polynomial lives over a :class:`VarTable`, an ordered list of variable
names split into a fiber block (first) and a base block.  Terms are kept in
a dict ``{exponent tuple: Fraction}``; dict equality makes equality
structural and independent of any monomial order.

Monomial orders are represented by sort keys: ``order.key(a) < order.key(b)``
iff ``a < b``.  grevlex compares total degree first and breaks ties in
favour of the smaller exponent on the *last* variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

NEG_INF = -math.inf

LT, EQ, GT = -1, 0, 1


class StructuralError(ValueError):
    """Operands live over different variable tables or have the wrong shape."""


@dataclass(frozen=True)
class VarTable:
    """Ordered variable names; ``names[:split]`` is the fiber block."""

    names: tuple[str, ...]
    split: int = -1

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate variable names in {names}")
        split = len(names) if self.split < 0 else self.split
        if not 0 <= split <= len(names):
            raise StructuralError(f"split point {split} out of range")
        object.__setattr__(self, "split", split)

    @classmethod
    def of(cls, fiber: Iterable[str], base: Iterable[str] = ()) -> "VarTable":
        fiber = tuple(fiber)
        return cls(fiber + tuple(base), len(fiber))

    def __len__(self):
        return len(self.names)

    @property
    def fiber(self) -> tuple[str, ...]:
        return self.names[: self.split]

    @property
    def base(self) -> tuple[str, ...]:
        return self.names[self.split:]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def default_order(self) -> "MonomialOrder":
        return block_order(grevlex(), grevlex(), self.split, len(self.names))

    def gen(self, name: str) -> "Polynomial":
        i = self.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return Polynomial(self, {mono: Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(n) for n in self.names]

    def const(self, c) -> "Polynomial":
        return Polynomial.constant(self, c)

    def one(self) -> "Polynomial":
        return Polynomial.constant(self, 1)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})


# ---------------------------------------------------------------- orders

@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or a block order ``first > second`` split at ``split``."""

    kind: str
    first: "MonomialOrder | None" = None
    second: "MonomialOrder | None" = None
    split: int = 0
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and (self.first is None or self.second is None):
            raise ValueError("block order needs two inner orders")

    def key(self, m: tuple[int, ...]) -> tuple:
        k = self._cache.get(m)
        if k is None:
            k = self._key(m)
            self._cache[m] = k
        return k

    def _key(self, m):
        if self.kind == "lex":
            return m
        if self.kind == "grevlex":
            return (sum(m),) + tuple(-e for e in reversed(m))
        s = self.split
        return (self.first._key(m[:s]), self.second._key(m[s:]))

    def __str__(self):
        if self.kind == "block":
            return f"block({self.first}>{self.second}@{self.split})"
        return self.kind


def lex() -> MonomialOrder:
    return MonomialOrder("lex")


def grevlex() -> MonomialOrder:
    return MonomialOrder("grevlex")


def block_order(first: MonomialOrder, second: MonomialOrder, split: int,
                nvars: int | None = None) -> MonomialOrder:
    # degenerate blocks collapse to the surviving inner order
    if split == 0:
        return second
    if nvars is not None and split == nvars:
        return first
    return MonomialOrder("block", first, second, split)


def mono_cmp(order: MonomialOrder, a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise StructuralError(f"monomials of different length: {a}, {b}")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b) -> bool:
    """True iff monomial a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


# ------------------------------------------------------------ polynomials

def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: VarTable, terms: Mapping[tuple[int, ...], Fraction]):
        n = len(vars)
        clean = {}
        for m, c in terms.items():
            if len(m) != n:
                raise StructuralError(f"monomial {m} does not fit {vars.names}")
            if c:
                clean[tuple(m)] = _coerce_coeff(c)
        self.vars = vars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms):
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, vars: VarTable, c) -> "Polynomial":
        c = _coerce_coeff(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    # -- basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def degree(self, var: str | None = None):
        if var is None:
            return self.total_degree()
        if not self.terms:
            return NEG_INF
        i = self.vars.index(var)
        return max(m[i] for m in self.terms)

    def support(self) -> set[str]:
        used = set()
        for m in self.terms:
            used.update(n for n, e in zip(self.vars.names, m) if e)
        return used

    def involves_only(self, names: Iterable[str]) -> bool:
        allowed = set(names)
        return self.support() <= allowed

    def leading_term(self, order: MonomialOrder):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def lm(self, order: MonomialOrder):
        return self.leading_term(order)[0]

    def lc(self, order: MonomialOrder) -> Fraction:
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.lc(order))

    def sorted_terms(self, order: MonomialOrder | None = None):
        order = order or self.vars.default_order()
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic

    def _check(self, other: "Polynomial"):
        if self.vars != other.vars:
            raise StructuralError(f"variable tables differ: {self.vars.names} vs {other.vars.names}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.vars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _coerce_coeff(other)
            if not c:
                return Polynomial._raw(self.vars, {})
            return Polynomial._raw(self.vars, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(self.vars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            return self.exact_div(other)
        return self * (1 / _coerce_coeff(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, mono, coeff) -> "Polynomial":
        coeff = _coerce_coeff(coeff)
        if not coeff:
            return Polynomial._raw(self.vars, {})
        return Polynomial._raw(
            self.vars, {mono_mul(m, mono): c * coeff for m, c in self.terms.items()})

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        other = self._lift(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        order = self.vars.default_order()
        lm, lc = other.leading_term(order)
        rest = dict(self.terms)
        quot = {}
        while rest:
            m = max(rest, key=order.key)
            if not mono_divides(lm, m):
                raise ArithmeticError(f"{other} does not divide {self}")
            q = mono_div(m, lm)
            c = rest[m] / lc
            quot[q] = c
            for mg, cg in other.terms.items():
                mm = mono_mul(mg, q)
                v = rest.get(mm, 0) - c * cg
                if v:
                    rest[mm] = v
                else:
                    rest.pop(mm, None)
        return Polynomial._raw(self.vars, quot)

    # -- calculus and substitution

    def diff(self, var: str) -> "Polynomial":
        i = self.vars.index(var)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = c * e
        return Polynomial._raw(self.vars, out)

    def specialize(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Substitute rationals for some variables; the result drops them."""
        if not assignment:
            return self
        idx = {self.vars.index(v): _coerce_coeff(val) for v, val in assignment.items()}
        keep = [i for i in range(len(self.vars)) if i not in idx]
        kept_names = [self.vars.names[i] for i in keep]
        split = sum(1 for i in keep if i < self.vars.split)
        target = VarTable(tuple(kept_names), split)
        out: dict = {}
        for m, c in self.terms.items():
            v = c
            for i, val in idx.items():
                if m[i]:
                    v *= val ** m[i]
            if v:
                mm = tuple(m[i] for i in keep)
                out[mm] = out.get(mm, 0) + v
        return Polynomial._raw(target, {m: c for m, c in out.items() if c})

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        p = self.specialize(point)
        if not p.is_constant():
            raise ValueError(f"unassigned variables {sorted(p.support())}")
        return p.constant_value()

    def substitute(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Substitute rationals while staying over the same variable table."""
        image = self.specialize(assignment)
        return image.rebase(self.vars)

    def rebase(self, target: VarTable) -> "Polynomial":
        """Re-express over another table containing every used variable."""
        if target == self.vars:
            return self
        pos = []
        for i, name in enumerate(self.vars.names):
            if name in target.names:
                pos.append(target.names.index(name))
            else:
                pos.append(None)
        n = len(target)
        out = {}
        for m, c in self.terms.items():
            mm = [0] * n
            for i, e in enumerate(m):
                if e:
                    if pos[i] is None:
                        raise StructuralError(
                            f"variable {self.vars.names[i]!r} missing from {target.names}")
                    mm[pos[i]] = e
            out[tuple(mm)] = c
        return Polynomial._raw(target, out)

    def coefficients_in(self, var: str) -> list["Polynomial"]:
        """Coefficients of ``var^0, var^1, ...`` as polynomials in the other variables."""
        if not self.terms:
            return []
        i = self.vars.index(var)
        d = max(m[i] for m in self.terms)
        out = [dict() for _ in range(d + 1)]
        for m, c in self.terms.items():
            out[m[i]][m[:i] + (0,) + m[i + 1:]] = c
        return [Polynomial._raw(self.vars, t) for t in out]

    # -- equality and display

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def format_poly(p: Polynomial, order: MonomialOrder | None = None) -> str:
    """Canonical text: decreasing terms, integer coefficients, one rational scalar.

    A polynomial whose coefficients are all integers prints as-is.  Otherwise
    the lcm ``d`` of the denominators is pulled out as ``1/d*( ... )``.
    """
    if not p.terms:
        return "0"
    terms = p.sorted_terms(order)
    den = 1
    for _, c in terms:
        den = den * c.denominator // math.gcd(den, c.denominator)
    body = _format_terms(p.vars, [(m, c * den) for m, c in terms])
    if den == 1:
        return body
    if len(terms) == 1 and terms[0][1] * den in (1, -1):
        # a bare monomial with coefficient +-1/d
        sign = "-" if terms[0][1] < 0 else ""
        mono = _format_mono(p.vars, terms[0][0])
        return f"{sign}1/{den}*{mono}" if mono else f"{sign}1/{den}"
    return f"1/{den}*({body})"


def _format_mono(vars: VarTable, m) -> str:
    parts = []
    for name, e in zip(vars.names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_terms(vars, terms) -> str:
    out = []
    for k, (m, c) in enumerate(terms):
        c = int(c)
        mono = _format_mono(vars, m)
        mag = abs(c)
        if not mono:
            piece = str(mag)
        elif mag == 1:
            piece = mono
        else:
            piece = f"{mag}*{mono}"
        if k == 0:
            out.append(f"-{piece}" if c < 0 else piece)
        else:
            out.append(f" - {piece}" if c < 0 else f" + {piece}")
    return "".join(out)


def diff(f: Polynomial, var: str) -> Polynomial:
    return f.diff(var)


def specialize(f: Polynomial, assignment: Mapping[str, object]) -> Polynomial:
    return f.specialize(assignment)


def poly_arith(op: str, f: Polynomial, g) -> Polynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "pow":
        return f ** g
    raise ValueError(f"unknown operation {op!r}")


def common_table(polys: Sequence[Polynomial]) -> VarTable:
    tables = {p.vars for p in polys}
    if len(tables) > 1:
        raise StructuralError("polynomials live over different variable tables")
    return next(iter(tables))
