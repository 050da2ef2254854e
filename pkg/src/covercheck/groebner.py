"""Multivariate division, Buchberger's algorithm, membership and elimination.

The Buchberger loop runs on primitive integer-coefficient polynomials
(``dict[exponent tuple, int]``) and only converts to monic rational
polynomials at the end, so coefficient growth is held down by content
removal instead of rational normalisation at every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .poly import (MonomialOrder, Polynomial, StructuralError, VarTable, block_order,
                   common_table, grevlex, mono_div, mono_divides, mono_lcm, mono_mul)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic Gröbner basis, sorted by decreasing leading monomial."""

    vars: VarTable
    order: MonomialOrder
    elements: tuple[Polynomial, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def leading_monomials(self):
        return [g.lm(self.order) for g in self.elements]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.vars != self.vars:
            raise StructuralError("polynomial and basis live over different tables")
        if not self.elements:
            return f
        basis = [_to_int(g.terms) for g in self.elements]
        key = self.order.key
        lms = [max(b, key=key) for b in basis]
        den = 1
        for c in f.terms.values():
            den = lcm(den, c.denominator)
        scaled = {m: int(c * den) for m, c in f.terms.items()}
        rem, scale = _reduce(scaled, list(zip(lms, basis)), key)
        # rem = scale * den * NF(f) up to the content removed on the way
        return Polynomial(self.vars, {m: Fraction(c) / (scale * den) for m, c in rem.items()})

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()


# ------------------------------------------------------------ division

def reduce(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder):
    """Division algorithm: ``f = sum(q_i * G_i) + r``.

    No monomial of ``r`` is divisible by any ``LM(G_i)`` and
    ``LM(q_i * G_i) <= LM(f)``.
    """
    if not G:
        raise ValueError("need at least one divisor")
    vars = common_table([f, *G])
    key = order.key
    leads = []
    for g in G:
        if g.is_zero():
            leads.append(None)
        else:
            leads.append(g.leading_term(order))
    quots = [dict() for _ in G]
    rem: dict = {}
    p = dict(f.terms)
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, lt in enumerate(leads):
            if lt is not None and mono_divides(lt[0], m):
                q = mono_div(m, lt[0])
                k = c / lt[1]
                quots[i][q] = quots[i].get(q, 0) + k
                for mg, cg in G[i].terms.items():
                    mm = mono_mul(mg, q)
                    v = p.get(mm, 0) - k * cg
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[m] = c
            del p[m]
    return [Polynomial(vars, q) for q in quots], Polynomial(vars, rem)


# ------------------------------------------------- integer-coefficient core

def _to_int(terms: dict) -> dict:
    den = 1
    for c in terms.values():
        den = lcm(den, c.denominator)
    return _primitive({m: int(c * den) for m, c in terms.items()})


def _primitive(d: dict) -> dict:
    g = 0
    for c in d.values():
        g = gcd(g, c)
        if g == 1:
            return d
    if g > 1:
        return {m: c // g for m, c in d.items()}
    return d


def _reduce(p: dict, basis, key):
    """Fully reduce integer polynomial ``p``; returns ``(rem, scale)``.

    ``rem`` is congruent to ``scale * p`` modulo the basis after content
    removal, with ``scale`` a nonzero rational.
    """
    p = dict(p)
    rem: dict = {}
    scale = Fraction(1)
    steps = 0
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in basis:
            if mono_divides(lm, m):
                break
        else:
            rem[m] = c
            del p[m]
            continue
        a = g[lm]
        d = gcd(a, c)
        a1, c1 = a // d, c // d
        if a1 < 0:
            a1, c1 = -a1, -c1
        if a1 != 1:
            for k in p:
                p[k] *= a1
            for k in rem:
                rem[k] *= a1
            scale *= a1
        q = mono_div(m, lm)
        for mg, cg in g.items():
            mm = mono_mul(mg, q)
            v = p.get(mm, 0) - c1 * cg
            if v:
                p[mm] = v
            else:
                p.pop(mm, None)
        steps += 1
        if a1 != 1 and steps % 8 == 0:
            cont = 0
            for v in p.values():
                cont = gcd(cont, v)
            for v in rem.values():
                cont = gcd(cont, v)
            if cont > 1:
                p = {k: v // cont for k, v in p.items()}
                rem = {k: v // cont for k, v in rem.items()}
                scale /= cont
    if rem:
        cont = 0
        for v in rem.values():
            cont = gcd(cont, v)
        if cont > 1:
            rem = {k: v // cont for k, v in rem.items()}
            scale /= cont
    return rem, scale


def _spoly(f, lmf, g, lmg):
    L = mono_lcm(lmf, lmg)
    a, b = f[lmf], g[lmg]
    d = gcd(a, b)
    a, b = a // d, b // d
    qf, qg = mono_div(L, lmf), mono_div(L, lmg)
    out: dict = {}
    for m, c in f.items():
        mm = mono_mul(m, qf)
        out[mm] = out.get(mm, 0) + b * c
    for m, c in g.items():
        mm = mono_mul(m, qg)
        v = out.get(mm, 0) - a * c
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return {m: c for m, c in out.items() if c}


def _update(lms, pairs, new_lm):
    """Gebauer–Möller update for a new basis element (index ``len(lms)``)."""
    t = len(lms)
    # criterion B: drop old pairs whose lcm is divisible by new_lm strictly
    kept = set()
    for (i, j) in pairs:
        L = mono_lcm(lms[i], lms[j])
        if (mono_divides(new_lm, L) and L != mono_lcm(lms[i], new_lm)
                and L != mono_lcm(lms[j], new_lm)):
            continue
        kept.add((i, j))
    # new pairs, grouped by lcm (criterion M / F)
    groups: dict = {}
    for i in range(t):
        if lms[i] is None:
            continue
        groups.setdefault(mono_lcm(lms[i], new_lm), []).append(i)
    lcms = sorted(groups, key=sum)
    minimal = []
    for L in lcms:
        if not any(mono_divides(M, L) for M in minimal):
            minimal.append(L)
    for L in minimal:
        idx = groups[L]
        # Buchberger's first criterion: coprime leading monomials
        if any(mono_lcm(lms[i], new_lm) == mono_mul(lms[i], new_lm) for i in idx):
            continue
        kept.add((min(idx), t))
    return kept


def _buchberger_int(F: list[dict], key) -> list[dict]:
    G: list = []
    lms: list = []
    pairs: set = set()

    def add(h):
        nonlocal pairs
        lm = max(h, key=key)
        pairs = _update(lms, pairs, lm)
        G.append(h)
        lms.append(lm)

    for f in F:
        if f:
            f, _ = _reduce(f, [(lm, g) for lm, g in zip(lms, G) if g is not None], key)
            if f:
                add(f)
    while pairs:
        i, j = min(pairs, key=lambda p: _pair_key(lms, p, key))
        pairs.discard((i, j))
        if G[i] is None or G[j] is None:
            continue
        s = _spoly(G[i], lms[i], G[j], lms[j])
        if not s:
            continue
        active = [(lm, g) for lm, g in zip(lms, G) if g is not None]
        h, _ = _reduce(s, active, key)
        if h:
            h = _primitive(h)
            if all(m == (0,) * len(m) for m in h):
                return [{next(iter(h)): 1}]
            add(h)
    return [g for g in G if g is not None]


def _pair_key(lms, pair, key):
    i, j = pair
    L = mono_lcm(lms[i], lms[j])
    return (sum(L), key(L), j, i)


def _interreduce(G: list[dict], key) -> list[dict]:
    lm_of = [max(g, key=key) for g in G]
    order = sorted(range(len(G)), key=lambda i: key(lm_of[i]))
    minimal = []
    for i in order:
        if not any(mono_divides(lm_of[j], lm_of[i]) for j in minimal):
            minimal.append(i)
    basis = [(lm_of[i], G[i]) for i in minimal]
    out = []
    for k, (lm, g) in enumerate(basis):
        others = basis[:k] + basis[k + 1:]
        # leading monomial is irreducible by minimality; reduce the tail only
        tail = {m: c for m, c in g.items() if m != lm}
        lead = g[lm]
        if others and tail:
            red, scale = _reduce(tail, others, key)
        else:
            red, scale = tail, Fraction(1)
        # g ~ lead*lm + tail ; tail ≡ red/scale  ->  g ~ lead*lm + red/scale
        new = {m: Fraction(c) / scale for m, c in red.items()}
        new[lm] = Fraction(lead)
        out.append((lm, new))
    return out


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder | None = None,
               vars: VarTable | None = None) -> GroebnerBasis:
    """Reduced monic Gröbner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if vars is None:
        if not gens:
            raise ValueError("cannot infer the variable table of an empty generator list")
        vars = common_table(gens)
    elif gens:
        if common_table(gens) != vars:
            raise StructuralError("generators live over a different table")
    order = order or vars.default_order()
    key = order.key
    F = [_to_int(g.terms) for g in gens if not g.is_zero()]
    if not F:
        return GroebnerBasis(vars, order, ())
    G = _buchberger_int(F, key)
    red = _interreduce(G, key)
    elems = []
    for lm, terms in red:
        lc = terms[lm]
        elems.append((lm, Polynomial(vars, {m: c / lc for m, c in terms.items()})))
    elems.sort(key=lambda t: key(t[0]), reverse=True)
    return GroebnerBasis(vars, order, tuple(p for _, p in elems))


def member(f: Polynomial, I, order: MonomialOrder | None = None) -> bool:
    """Ideal membership via normal form against the reduced basis."""
    if hasattr(I, "groebner_basis"):
        gb = I.groebner_basis(order)
    else:
        gb = buchberger(list(I), order, vars=f.vars)
    return gb.contains(f)


def eliminate(gens: Sequence[Polynomial], keep: Sequence[str],
              vars: VarTable | None = None) -> list[Polynomial]:
    """Generators of ``<gens> ∩ k[keep]``, still over the original table.

    Uses a block order with the eliminated variables first.
    """
    gens = list(gens)
    if vars is None:
        vars = common_table(gens)
    keep = [v for v in vars.names if v in set(keep)]
    drop = [v for v in vars.names if v not in set(keep)]
    if not drop:
        return [g for g in gens if not g.is_zero()]
    table = VarTable(tuple(drop) + tuple(keep), len(drop))
    order = block_order(grevlex(), grevlex(), len(drop), len(table))
    gb = buchberger([g.rebase(table) for g in gens], order, vars=table)
    kept = set(keep)
    return [g.rebase(vars) for g in gb.elements if g.support() <= kept]
