"""Finiteness, flatness and étaleness of a projection, plus fiber analysis.

A :class:`MorphismPresentation` is an ideal ``I`` in ``k[x, y]`` together
with the split of its variables into fiber variables ``x`` and base
variables ``y``.  Everything is read off one reduced Gröbner basis ``G`` of
``I`` for the block order ``T_x > T_y``:

* ``G_y = G ∩ k[y]`` generates ``J = I ∩ k[y]``;
* the projection is finite iff every ``x_i`` is the leading monomial power
  of some element of ``G``;
* ``B = k[x, y]/I`` is then generated over ``A = k[y]/J`` by the box of
  monomials below those powers, and the relations ``g * x^a`` that stay
  inside the box present it, which gives Fitting ideals and the flatness
  test;
* étaleness is the Jacobian test on ``G_x``.

Fibers over rational base points are analysed through the multiplication
operator of a separating linear form on the fiber algebra.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .groebner import GroebnerBasis, buchberger
from .ideal import (Ideal, eliminate_ideal, ideal_product, ideal_sum, intersect, quotient,
                    radical_member, saturate)
from .poly import (MonomialOrder, Polynomial, StructuralError, VarTable, block_order,
                   grevlex, lex, mono_divides)
from .polymat import PolyMatrix, RationalMatrix, charpoly, charpoly_coeffs, minors, rank
from .univar import _gcd_degree_dense, from_dense, squarefree_dense, sturm_count_dense


class NotFiniteError(ValueError):
    """The operation needs a finite morphism."""


class PointOffBaseError(ValueError):
    """The point does not lie on the base variety V(J)."""


class NotZeroDimensionalError(ValueError):
    """The fiber over the point is not a finite set."""


class NoSeparatingFormError(RuntimeError):
    """No candidate linear form separated the fiber within the retry budget."""


def _order_by_name(name: str) -> MonomialOrder:
    if name == "lex":
        return lex()
    if name == "grevlex":
        return grevlex()
    raise ValueError(f"unknown block order {name!r} (expected lex or grevlex)")


class MorphismPresentation:
    """Ideal plus fiber/base split; derived data is computed once and cached."""

    def __init__(self, vars: VarTable, gens: Sequence[Polynomial],
                 orders: tuple[str, str] = ("grevlex", "grevlex")):
        self.vars = vars
        self.I = Ideal(vars, gens)
        self.order_names = tuple(orders)
        self.order = block_order(_order_by_name(orders[0]), _order_by_name(orders[1]),
                                 vars.split, len(vars))

    @property
    def fiber_vars(self) -> tuple[str, ...]:
        return self.vars.fiber

    @property
    def base_vars(self) -> tuple[str, ...]:
        return self.vars.base

    @cached_property
    def gb(self) -> GroebnerBasis:
        return self.I.groebner_basis(self.order)

    @property
    def G(self) -> tuple[Polynomial, ...]:
        return self.gb.elements

    @cached_property
    def G_y(self) -> tuple[Polynomial, ...]:
        base = set(self.base_vars)
        return tuple(g for g in self.G if g.support() <= base)

    @cached_property
    def G_x(self) -> tuple[Polynomial, ...]:
        ys = set(self.G_y)
        return tuple(g for g in self.G if g not in ys)

    @cached_property
    def J(self) -> Ideal:
        J = Ideal(self.vars, self.G_y)
        # G_y is already the reduced basis of J for the block order
        J._gb[self.order] = GroebnerBasis(self.vars, self.order, self.G_y)
        return J

    # -- leading data with respect to T_x

    def x_part(self, mono) -> tuple[int, ...]:
        return mono[: self.vars.split]

    def lm_x(self, g: Polynomial) -> tuple[int, ...]:
        return self.x_part(g.lm(self.order))

    def lc_x(self, g: Polynomial) -> Polynomial:
        """Coefficient in ``k[y]`` of the ``T_x``-leading monomial of ``g``."""
        lead = self.lm_x(g)
        n = self.vars.split
        terms = {(0,) * n + m[n:]: c for m, c in g.terms.items() if m[:n] == lead}
        return Polynomial(self.vars, terms)

    def __repr__(self):
        return (f"MorphismPresentation(fiber={self.fiber_vars}, base={self.base_vars}, "
                f"I={self.I!r})")


# ------------------------------------------------------------ finiteness

@dataclass(frozen=True)
class FiniteCertificate:
    """Per fiber variable: the basis element whose leading monomial is a pure power."""

    witnesses: Mapping[str, Polynomial]
    exponents: Mapping[str, int]


def _pure_power_var(mono, n) -> int | None:
    """Index ``i < n`` if ``mono`` is ``x_i^a`` (a >= 1) and involves nothing else."""
    nz = [i for i, e in enumerate(mono) if e]
    if len(nz) == 1 and nz[0] < n:
        return nz[0]
    return None


def finiteness_witnesses(M: MorphismPresentation) -> dict[str, Polynomial | None]:
    n = M.vars.split
    found: dict[str, Polynomial | None] = {v: None for v in M.fiber_vars}
    for g in M.G:
        i = _pure_power_var(g.lm(M.order), n)
        if i is not None:
            name = M.vars.names[i]
            prev = found[name]
            if prev is None or g.lm(M.order)[i] < prev.lm(M.order)[i]:
                found[name] = g
    return found


def is_finite(M: MorphismPresentation) -> tuple[bool, FiniteCertificate | None]:
    """Finite iff each ``x_i`` has a basis element with leading monomial ``x_i^t``."""
    found = finiteness_witnesses(M)
    if any(g is None for g in found.values()):
        return False, None
    exps = {v: g.lm(M.order)[M.vars.index(v)] for v, g in found.items()}
    return True, FiniteCertificate(found, exps)


def non_finite_locus(M: MorphismPresentation) -> Ideal:
    """Product over ``i`` of ``J + <LC_{T_x}(g) : LM_{T_x}(g) = x_i^a>``.

    Its zero set is the smallest closed subset of the base outside which
    the projection is finite.  The product is not claimed to be radical.
    """
    n = M.vars.split
    extra: dict[int, list[Polynomial]] = {i: [] for i in range(n)}
    for g in M.G_x:
        i = _pure_power_var(M.lm_x(g) + (0,) * (len(M.vars) - n), n)
        if i is not None:
            extra[i].append(M.lc_x(g))
    out = None
    for i in range(n):
        Ji = ideal_sum(M.J, Ideal(M.vars, extra[i]))
        out = Ji if out is None else ideal_product(out, Ji)
    if out is None:
        return Ideal.unit(M.vars)
    return Ideal(M.vars, out.groebner_basis(M.order).elements)


def _require_finite(M) -> FiniteCertificate:
    ok, cert = is_finite(M)
    if not ok:
        raise NotFiniteError("the projection is not finite; see non_finite_locus")
    return cert


# ---------------------------------------------------- module presentation

def monomial_basis(M: MorphismPresentation, cert: FiniteCertificate) -> list[tuple[int, ...]]:
    """The box ``x^a``, ``0 <= a_i < t_i``, first fiber variable varying fastest."""
    ts = [cert.exponents[v] for v in M.fiber_vars]
    tail = (0,) * len(M.base_vars)
    out = []
    for rev in itertools.product(*(range(t) for t in reversed(ts))):
        out.append(tuple(reversed(rev)) + tail)
    return out


def presentation_matrix(M: MorphismPresentation, basis: Sequence[tuple[int, ...]],
                        cert: FiniteCertificate | None = None):
    """Relations ``g * x^a`` staying inside the box, and their coefficient matrix.

    Row ``i`` of ``N`` belongs to ``basis[i]``, column ``j`` to ``relations[j]``;
    entries lie in ``k[y]`` and are reduced modulo ``J``.
    """
    cert = cert or _require_finite(M)
    n = M.vars.split
    ts = [cert.exponents[v] for v in M.fiber_vars]
    index = {m[:n]: k for k, m in enumerate(basis)}
    relations = []
    for g in M.G_x:
        degs = [g.degree(v) for v in M.fiber_vars]
        for a in basis:
            if all(d + e <= t - 1 for d, e, t in zip(degs, a[:n], ts)):
                relations.append(g.mul_term(a, 1))
    Jgb = M.J.groebner_basis(M.order)
    cols = []
    for h in relations:
        col = [dict() for _ in basis]
        for m, c in h.terms.items():
            col[index[m[:n]]][(0,) * n + m[n:]] = c
        cols.append([Jgb.normal_form(Polynomial(M.vars, t)) if Jgb.elements
                     else Polynomial(M.vars, t) for t in col])
    r, s = len(basis), len(relations)
    entries = [cols[j][i] for i in range(r) for j in range(s)]
    return PolyMatrix(M.vars, r, s, entries), relations


def fitting_ideal(N: PolyMatrix, J: Ideal, r: int, i: int) -> Ideal:
    """``F_i = <(r-i)-minors of N> + J``."""
    if not 0 <= i <= r:
        raise ValueError(f"Fitting index {i} outside 0..{r}")
    return ideal_sum(Ideal(N.vars, [m for m in minors(N, r - i) if not m.is_zero()]), J)


@dataclass
class FlatnessResult:
    flat: bool
    F: Ideal | None = None
    fitting: list[Ideal] = field(default_factory=list)
    basis: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    matrix: PolyMatrix | None = None

    def __iter__(self):
        return iter((self.flat, self.F, self.fitting))


def _flatness(M: MorphismPresentation) -> FlatnessResult:
    ok, cert = is_finite(M)
    if not ok:
        return FlatnessResult(False)
    basis = monomial_basis(M, cert)
    N, rels = presentation_matrix(M, basis, cert)
    r = len(basis)
    J = M.J
    fitting = [fitting_ideal(N, J, r, i) for i in range(r + 1)]
    F = Ideal(M.vars)
    for i in range(1, r + 1):
        if F.is_trivial():
            break
        piece = intersect(quotient(J, fitting[i - 1]), fitting[i])
        F = Ideal(M.vars, ideal_sum(F, piece).groebner_basis(M.order).elements)
    return FlatnessResult(F.is_trivial(), F, fitting, basis, rels, N)


_FLAT_CACHE = "_flatness_result"


def is_finite_flat(M: MorphismPresentation) -> FlatnessResult:
    """Flatness test: ``1 ∈ sum_i ((J : F_{i-1}) ∩ F_i)``; False when not finite."""
    res = M.__dict__.get(_FLAT_CACHE)
    if res is None:
        res = _flatness(M)
        M.__dict__[_FLAT_CACHE] = res
    return res


def non_flat_locus(M: MorphismPresentation) -> Ideal:
    """Ideal in the base variables cutting out the points where ``B`` is not flat."""
    _require_finite(M)
    return is_finite_flat(M).F


# ------------------------------------------------------------ étaleness

def jacobian_matrix(M: MorphismPresentation) -> PolyMatrix:
    rows = [[g.diff(v) for g in M.G_x] for v in M.fiber_vars]
    return PolyMatrix(M.vars, len(rows), len(M.G_x), [e for r in rows for e in r])


def jacobian_ideal(M: MorphismPresentation) -> Ideal:
    """``<n-minors of (dg/dx_i)_{g in G_x}> + I``."""
    cached = M.__dict__.get("_jacobian_ideal")
    if cached is None:
        n = len(M.fiber_vars)
        ms = [m for m in minors(jacobian_matrix(M), n) if not m.is_zero()]
        cached = Ideal(M.vars, ms + list(M.G))
        M.__dict__["_jacobian_ideal"] = cached
    return cached


def is_etale(M: MorphismPresentation) -> bool:
    """Finite étale test; False unless the projection is finite and flat."""
    if not is_finite_flat(M).flat:
        return False
    return jacobian_ideal(M).groebner_basis(M.order).is_unit()


def non_etale_locus(M: MorphismPresentation) -> Ideal:
    """Elimination of the fiber variables from the Jacobian ideal."""
    _require_finite(M)
    cached = M.__dict__.get("_non_etale_locus")
    if cached is None:
        cached = eliminate_ideal(jacobian_ideal(M), M.base_vars)
        M.__dict__["_non_etale_locus"] = cached
    return cached


# ------------------------------------------------------------- fibers

@dataclass
class ZeroDimAlgebra:
    """Finite-dimensional quotient ``k[x]/I`` with its multiplication tables."""

    vars: VarTable
    gb: GroebnerBasis
    basis: list[tuple[int, ...]]
    mult: list[RationalMatrix]

    @property
    def length(self) -> int:
        return len(self.basis)

    def operator(self, form: Sequence) -> RationalMatrix:
        n = self.length
        rows = [[Fraction(0)] * n for _ in range(n)]
        for u, L in zip(form, self.mult):
            if u:
                for i in range(n):
                    for j in range(n):
                        rows[i][j] += u * L.rows[i][j]
        return RationalMatrix(rows)

    def basis_operators(self) -> list[RationalMatrix]:
        ops = []
        ident = RationalMatrix.identity(self.length)
        for b in self.basis:
            L = ident
            for k, e in enumerate(b):
                for _ in range(e):
                    L = L @ self.mult[k]
            ops.append(L)
        return ops

    def trace_form(self) -> list[list[Fraction]]:
        """``Tr(L_{b_i b_j})``: its rank counts the distinct geometric points."""
        ops = self.basis_operators()
        n = self.length
        return [[(ops[i] @ ops[j]).trace() for j in range(n)] for i in range(n)]


def zero_dim_algebra(gens: Sequence[Polynomial], vars: VarTable) -> ZeroDimAlgebra:
    order = grevlex()
    gb = buchberger(gens, order, vars=vars)
    lms = gb.leading_monomials()
    n = len(vars)
    if gb.is_unit():
        return ZeroDimAlgebra(vars, gb, [], [RationalMatrix([]) for _ in range(n)])
    bounds = []
    for i in range(n):
        pure = [m[i] for m in lms if _pure_power_var(m, n) == i]
        if not pure:
            raise NotZeroDimensionalError(
                f"fiber is not finite: no leading monomial is a power of {vars.names[i]}")
        bounds.append(min(pure))
    basis = [m for m in itertools.product(*(range(t) for t in bounds))
             if not any(mono_divides(l, m) for l in lms)]
    basis.sort(key=order.key)
    index = {m: k for k, m in enumerate(basis)}
    mult = []
    for i in range(n):
        cols = []
        for b in basis:
            shifted = b[:i] + (b[i] + 1,) + b[i + 1:]
            nf = gb.normal_form(Polynomial(vars, {shifted: Fraction(1)}))
            col = [Fraction(0)] * len(basis)
            for m, c in nf.terms.items():
                col[index[m]] = c
            cols.append(col)
        mult.append(RationalMatrix([[cols[j][k] for j in range(len(basis))]
                                    for k in range(len(basis))]))
    return ZeroDimAlgebra(vars, gb, basis, mult)


@dataclass
class FiberReport:
    point: dict
    length: int
    distinct: int
    real: int
    separating_form: tuple[int, ...] | None
    charpoly: Polynomial | None = None
    squarefree: Polynomial | None = None
    gcd_degree: int | None = None

    def as_tuple(self):
        return (self.length, self.distinct, self.real)


SEPARATION_SEED = 20240601
SEPARATION_RANDOM_TRIES = 64


def candidate_forms(n: int, seed: int = SEPARATION_SEED):
    """Deterministic ladder: ``x_n``, ``x_1``, ``x_1 + 2 x_2 + ...``, then random."""
    if n == 0:
        yield ()
        return
    seen = set()
    fixed = [tuple(1 if i == n - 1 else 0 for i in range(n)),
             tuple(1 if i == 0 else 0 for i in range(n)),
             tuple(range(1, n + 1))]
    for f in fixed:
        if f not in seen:
            seen.add(f)
            yield f
    rng = random.Random(seed)
    for k in range(SEPARATION_RANDOM_TRIES):
        width = 3 + k // 4
        f = tuple(rng.randint(-width, width) for _ in range(n))
        if any(f) and f not in seen:
            seen.add(f)
            yield f


def separation_data(alg: ZeroDimAlgebra, form: Sequence):
    """``(chi, gcd degree of chi and chi', squarefree part)`` for one form."""
    chi = charpoly_coeffs(alg.operator(form))
    dchi = [chi[i] * i for i in range(1, len(chi))]
    j, _ = _gcd_degree_dense(chi, dchi) if len(chi) > 2 else (0, None)
    omega = squarefree_dense(chi)
    return chi, j, omega


def analyze_zero_dim(alg: ZeroDimAlgebra, form: Sequence | None = None,
                     point: Mapping | None = None) -> FiberReport:
    point = dict(point or {})
    r = alg.length
    if r == 0:
        return FiberReport(point, 0, 0, 0, None)
    n = len(alg.vars)
    distinct_points = rank(alg.trace_form())
    forms = [tuple(form)] if form is not None else candidate_forms(n)
    for u in forms:
        if len(u) != n:
            raise StructuralError(f"linear form needs {n} coefficients, got {len(u)}")
        chi, j, omega = separation_data(alg, u)
        if r - j == distinct_points:
            lam = "lam"
            return FiberReport(
                point=point, length=r, distinct=len(omega) - 1,
                real=sturm_count_dense(omega), separating_form=tuple(u),
                charpoly=from_dense(chi, lam), squarefree=from_dense(omega, lam),
                gcd_degree=j)
    if form is not None:
        raise NoSeparatingFormError(f"linear form {tuple(form)} does not separate the fiber")
    raise NoSeparatingFormError(
        f"no separating form found among {3 + SEPARATION_RANDOM_TRIES} candidates")


def _normalize_point(M: MorphismPresentation, point: Mapping) -> dict:
    out = {}
    for k, v in point.items():
        if k not in M.base_vars:
            raise StructuralError(f"{k!r} is not a base variable")
        out[k] = Fraction(v)
    missing = [v for v in M.base_vars if v not in out]
    if missing:
        raise StructuralError(f"point leaves base variables {missing} unassigned")
    return out


def fiber_algebra(M: MorphismPresentation, point: Mapping,
                  remove: Sequence[Polynomial] = ()) -> ZeroDimAlgebra:
    """Fiber algebra over ``point``; ``remove`` saturates away a closed subset."""
    point = _normalize_point(M, point)
    for g in M.G_y:
        if not g.specialize(point).is_zero():
            raise PointOffBaseError(f"point {fmt_point(point)} is not on the base: {g} != 0")
    gens = [g.specialize(point) for g in M.G]
    fvars = VarTable(M.fiber_vars)
    gens = [g.rebase(fvars) for g in gens if not g.is_zero()]
    if remove:
        drop = [h.specialize(point).rebase(fvars) for h in remove]
        sat = saturate(Ideal(fvars, gens), Ideal(fvars, drop))
        gens = list(sat.canonical())
    return zero_dim_algebra(gens, fvars)


def fiber_report(M: MorphismPresentation, point: Mapping, form: Sequence | None = None,
                 remove: Sequence[Polynomial] = ()) -> FiberReport:
    """Length, distinct geometric points and real points of the fiber over ``point``.

    The length is the dimension of the specialized algebra.  A linear form is
    accepted as separating when the gcd degree of its characteristic
    polynomial and that polynomial's derivative, read off the subresultant
    pattern, leaves exactly as many distinct eigenvalues as the rank of the
    trace form.  Distinct and real counts then come from the squarefree part
    of the characteristic polynomial.
    """
    alg = fiber_algebra(M, point, remove)
    return analyze_zero_dim(alg, form, _normalize_point(M, point))


def fmt_point(point: Mapping) -> str:
    return "(" + ", ".join(f"{k}={v}" for k, v in point.items()) + ")"


# ------------------------------------------------------------- verdicts

class Verdict(str, enum.Enum):
    COVERING = "COVERING"
    CRITERION_FAILS = "CRITERION_FAILS"
    INCONCLUSIVE_NEEDS_RADICAL = "INCONCLUSIVE_NEEDS_RADICAL"
    NOT_FINITE = "NOT_FINITE"


VERDICT_NOTE = {
    Verdict.COVERING: "finite, flat and étale: the projection restricted to real points "
                      "is a covering map in the Euclidean topology",
    Verdict.CRITERION_FAILS: "the reduced projection is not finite étale, so the geometric "
                             "fiber count is not locally constant and the sufficient "
                             "criterion does not apply (this does not prove the map is not "
                             "a covering)",
    Verdict.INCONCLUSIVE_NEEDS_RADICAL: "the presentation is not finite flat étale, but it may "
                                        "be non-reduced; supply its radical or assert "
                                        "reducedness to decide the criterion",
    Verdict.NOT_FINITE: "the projection is not finite, so the criterion does not apply",
}


@dataclass
class CoveringVerdict:
    finite: bool
    flat: bool
    etale: bool
    verdict: Verdict
    loci: dict = field(default_factory=dict)
    certified_on: str = "input"

    @property
    def note(self) -> str:
        return VERDICT_NOTE[self.verdict]


def _check_radical(M: MorphismPresentation, R: MorphismPresentation):
    if R.vars != M.vars:
        raise StructuralError("radical presentation uses a different variable table")
    if not all(g in R.I for g in M.I.gens):
        raise ValueError("radical presentation does not contain the input ideal")
    if not all(radical_member(g, M.I) for g in R.I.gens):
        raise ValueError("radical presentation is not contained in the radical of the input")


def _flags_and_loci(M: MorphismPresentation):
    finite, _ = is_finite(M)
    loci = {"non_finite": non_finite_locus(M)}
    if not finite:
        return False, False, False, loci
    flat = is_finite_flat(M).flat
    etale = is_etale(M)
    loci["non_flat"] = non_flat_locus(M)
    loci["non_etale"] = non_etale_locus(M)
    return True, flat, etale, loci


def covering_verdict(M: MorphismPresentation, assume_reduced: bool = False,
                     radical: MorphismPresentation | None = None) -> CoveringVerdict:
    """Apply the covering criterion (finite flat with locally constant fibers).

    A finite flat étale presentation certifies the criterion directly.
    Otherwise the answer depends on the reduced structure: over a reduced
    presentation, failure of finite étaleness means the geometric fiber count
    is not locally constant.
    """
    if radical is not None:
        _check_radical(M, radical)
    finite, flat, etale, loci = _flags_and_loci(M)
    if not finite:
        return CoveringVerdict(False, False, False, Verdict.NOT_FINITE, loci)
    if flat and etale:
        return CoveringVerdict(True, True, True, Verdict.COVERING, loci)
    if radical is not None:
        rf, rfl, ret, rloci = _flags_and_loci(radical)
        verdict = Verdict.COVERING if (rf and rfl and ret) else Verdict.CRITERION_FAILS
        return CoveringVerdict(rf, rfl, ret, verdict, rloci, certified_on="radical")
    if assume_reduced:
        return CoveringVerdict(True, flat, etale, Verdict.CRITERION_FAILS, loci)
    return CoveringVerdict(True, flat, etale, Verdict.INCONCLUSIVE_NEEDS_RADICAL, loci)
