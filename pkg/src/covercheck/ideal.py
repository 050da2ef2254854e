"""Ideals with cached Gröbner bases and the combinators the analyzers need.

Intersections use the auxiliary-variable trick ``t*I + (1-t)*J`` followed by
elimination of ``t``; quotients go through intersections with principal
ideals; saturation iterates the quotient until the reduced basis stops
changing.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .groebner import GroebnerBasis, buchberger, eliminate
from .poly import MonomialOrder, Polynomial, StructuralError, VarTable


class Ideal:
    """Generator list plus reduced Gröbner bases cached per monomial order."""

    def __init__(self, vars: VarTable, gens: Iterable[Polynomial] = ()):
        gens = list(gens)
        for g in gens:
            if g.vars != vars:
                raise StructuralError(f"generator {g} lives over {g.vars.names}, not {vars.names}")
        self.vars = vars
        self.gens = tuple(g for g in gens if not g.is_zero())
        self._gb: dict = {}

    @classmethod
    def unit(cls, vars: VarTable) -> "Ideal":
        return cls(vars, [vars.one()])

    def groebner_basis(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        order = order or self.vars.default_order()
        gb = self._gb.get(order)
        if gb is None:
            gb = buchberger(self.gens, order, vars=self.vars)
            self._gb[order] = gb
        return gb

    def canonical(self) -> tuple[Polynomial, ...]:
        return self.groebner_basis().elements

    def __contains__(self, f: Polynomial) -> bool:
        return self.groebner_basis().contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(g in self for g in other.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def is_trivial(self) -> bool:
        return self.groebner_basis().is_unit()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if self.vars != other.vars:
            return False
        return self.canonical() == other.canonical()

    __hash__ = None

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def rebase(self, vars: VarTable) -> "Ideal":
        return Ideal(vars, [g.rebase(vars) for g in self.gens])

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.gens)) or '0'}>"


def _check(I: Ideal, J: Ideal):
    if I.vars != J.vars:
        raise StructuralError("ideals live over different variable tables")


def is_trivial(I: Ideal) -> bool:
    return I.is_trivial()


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _check(I, J)
    return Ideal(I.vars, I.gens + J.gens)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _check(I, J)
    return Ideal(I.vars, [f * g for f in I.gens for g in J.gens])


def _fresh_name(vars: VarTable, stem: str = "t") -> str:
    name = stem
    k = 0
    while name in vars.names:
        k += 1
        name = f"{stem}{k}"
    return name


def intersect(I: Ideal, J: Ideal) -> Ideal:
    _check(I, J)
    if I.is_zero() or J.is_zero():
        return Ideal(I.vars)
    if I.is_trivial():
        return Ideal(J.vars, J.gens)
    if J.is_trivial():
        return Ideal(I.vars, I.gens)
    t = _fresh_name(I.vars)
    big = VarTable((t,) + I.vars.names, 1)
    tv = big.gen(t)
    gens = [tv * f.rebase(big) for f in I.gens]
    gens += [(1 - tv) * g.rebase(big) for g in J.gens]
    kept = eliminate(gens, I.vars.names, vars=big)
    return Ideal(I.vars, [g.rebase(I.vars) for g in kept])


def intersect_all(ideals: Sequence[Ideal]) -> Ideal:
    out = ideals[0]
    for J in ideals[1:]:
        out = intersect(out, J)
    return out


def quotient_by_element(I: Ideal, g: Polynomial) -> Ideal:
    """``(I : g) = (I ∩ <g>) / g``."""
    if g.is_zero():
        return Ideal.unit(I.vars)
    meet = intersect(I, Ideal(I.vars, [g]))
    return Ideal(I.vars, [h.exact_div(g) for h in meet.gens])


def quotient(I: Ideal, F: Ideal) -> Ideal:
    """Colon ideal ``(I : F)``; the zero ideal contributes no condition."""
    _check(I, F)
    if not F.gens:
        return Ideal.unit(I.vars)
    parts = [quotient_by_element(I, g) for g in F.gens]
    return intersect_all(parts)


def saturate(I: Ideal, F: Ideal) -> Ideal:
    """``(I : F^∞)``, iterating the quotient to a fixpoint."""
    _check(I, F)
    current = I
    while True:
        nxt = quotient(current, F)
        if nxt == current:
            return current
        current = Ideal(I.vars, nxt.canonical())


def radical_member(f: Polynomial, I: Ideal) -> bool:
    """``f ∈ √I`` by the Rabinowitsch trick: ``1 ∈ I + <1 - t*f>``."""
    if f.is_zero():
        return True
    t = _fresh_name(I.vars)
    big = VarTable((t,) + I.vars.names, 1)
    gens = [g.rebase(big) for g in I.gens] + [1 - big.gen(t) * f.rebase(big)]
    return Ideal(big, gens).is_trivial()


def eliminate_ideal(I: Ideal, keep: Sequence[str]) -> Ideal:
    return Ideal(I.vars, eliminate(I.gens, keep, vars=I.vars))
