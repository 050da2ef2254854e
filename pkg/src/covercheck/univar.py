"""Univariate toolkit: subresultants, gcd degree under specialization,
squarefree parts and Sturm real-root counting.

Sign convention for subresultants.  ``sResP_j(f, g)`` is ``sum_i d_{j,i} x^i``
where ``d_{j,i}`` is the determinant of the square matrix whose columns are
the coefficient vectors of ``f, x f, ..., x^(q-j-1) f, g, x g, ...,
x^(p-j-1) g`` and whose rows pick the coefficients of ``x^i, x^(j+1), ...,
x^(p+q-j-1)`` in that order (``p = deg f > q = deg g``).  With this
convention ``sRes_0(x^3 + a x + b, 3x^2 + a) = 4a^3 + 27b^2``.

Internally polynomials are dense coefficient lists, lowest degree first;
coefficients are either ``Fraction`` or ``Polynomial`` (a ring where ``/``
is exact division).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .poly import Polynomial, StructuralError, VarTable
from .polymat import PolyMatrix, det


class DegenerateSpecialization(ValueError):
    """A leading coefficient vanishes at the chosen point."""


# ------------------------------------------------------------ dense helpers

def _trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _deg(a) -> int:
    return len(a) - 1


def _lc(a):
    return a[-1]


def _add(a, b):
    n = max(len(a), len(b))
    zero = Fraction(0)
    return _trim([(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero)
                  for i in range(n)])


def _neg(a):
    return [-c for c in a]


def _sub(a, b):
    return _add(a, _neg(b))


def _scale(a, c):
    return _trim([x * c for x in a])


def _mul(a, b):
    if not a or not b:
        return []
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _divexact_scalar(a, c):
    return _trim([x / c for x in a])


def _derivative(a):
    return _trim([a[i] * i for i in range(1, len(a))])


def _prem(a, b):
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b``."""
    a = _trim(a)
    db = _deg(b)
    if _deg(a) < db:
        return a, 0
    e = _deg(a) - db + 1
    lb = _lc(b)
    r = list(a)
    uses = 0
    while r and _deg(r) >= db:
        c = _lc(r)
        shift = _deg(r) - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[i + shift] = r[i + shift] - c * y
        r = _trim(r)
        uses += 1
    # bring the multiplier up to exactly lc(b)^e
    for _ in range(e - uses):
        r = [x * lb for x in r]
    return _trim(r), e


def _divmod_field(a, b):
    a = _trim(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = _lc(b)
    while r and _deg(r) >= _deg(b):
        c = _lc(r) / lb
        shift = _deg(r) - _deg(b)
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] -= c * y
        r = _trim(r)
    return _trim(q), r


def _monic(a):
    return [x / a[-1] for x in a] if a else a


def _eval(a, x):
    v = Fraction(0)
    for c in reversed(a):
        v = v * x + c
    return v


def _gcd_field(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _divmod_field(a, b)
        a, b = b, r
    return _monic(a)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# ------------------------------------------------ conversion from Polynomial

def _dense(f: Polynomial, var: str, constant: bool):
    coeffs = f.coefficients_in(var)
    if constant:
        return [c.constant_value() for c in coeffs]
    return coeffs


def _undense(a, var: str, vars: VarTable) -> Polynomial:
    x = vars.gen(var)
    out = vars.zero()
    xp = vars.one()
    for c in a:
        if c:
            out = out + (c * xp if isinstance(c, Polynomial) else xp * c)
        xp = xp * x
    return out


def _only_var(f: Polynomial, var: str) -> bool:
    return f.support() <= {var}


def _main_var(f: Polynomial, var: str | None) -> str:
    if var is not None:
        return var
    if len(f.vars) == 1:
        return f.vars.names[0]
    used = f.support()
    if len(used) == 1:
        return next(iter(used))
    raise StructuralError(f"cannot infer the main variable of {f}")


# ----------------------------------------------------------- subresultants

@dataclass(frozen=True)
class SubresultantSequence:
    """``polys[j]`` is ``sResP_j`` for ``j = 0..q``."""

    var: str
    polys: tuple[Polynomial, ...]

    def coeff(self, j: int):
        """``sRes_j``: the formal coefficient of ``x^j`` in ``sResP_j``."""
        cs = self.polys[j].coefficients_in(self.var)
        return cs[j] if j < len(cs) else self.polys[j].vars.zero()

    @property
    def coeffs(self) -> list[Polynomial]:
        return [self.coeff(j) for j in range(len(self.polys))]

    @property
    def resultant(self) -> Polynomial:
        return self.coeff(0)


def _det_sres(a: list, b: list, j: int, zero, vars: VarTable | None):
    """``d_{j,0..j}`` by the determinant definition (dense inputs)."""
    p, q = _deg(a), _deg(b)
    n = p + q - 2 * j
    cols = []
    for k in range(q - j):
        cols.append((a, k))
    for k in range(p - j):
        cols.append((b, k))
    top = list(range(j + 1, p + q - j))
    out = []
    for i in range(j + 1):
        powers = [i] + top
        rows = []
        for e in powers:
            row = []
            for h, k in cols:
                idx = e - k
                row.append(h[idx] if 0 <= idx < len(h) else zero)
            rows.append(row)
        if vars is None:
            from .polymat import rational_det
            out.append(rational_det(rows) if n else Fraction(1))
        else:
            M = PolyMatrix.from_rows(vars, rows) if n else None
            out.append(det(M) if n else vars.one())
    return out


def _prs_sres(a: list, b: list):
    """All ``sResP_j`` (dense) via the signed subresultant recurrence.

    Runs the signed-subresultant algorithm of real algebraic geometry texts
    and converts to the determinant sign convention above.
    """
    p, q = _deg(a), _deg(b)
    zero = a[0] * 0
    one = zero + 1
    S = {p: a, p - 1: b}
    s = {p: one}
    t = {p: one, p - 1: _lc(b)}
    i, j = p + 1, p
    while True:
        prev = S.get(j - 1)
        if not prev:
            break
        k = _deg(prev)
        if k == j - 1:
            s[k] = t[j - 1]
        else:
            # defective jump: ε_{j-k} t_{j-1}^{j-k} / s_j^{j-k-1}
            num = t[j - 1] ** (j - k)
            den = s[j] ** (j - k - 1)
            sk = num / den
            if ((j - k) * (j - k - 1) // 2) % 2:
                sk = -sk
            s[k] = sk
            for l in range(k + 1, j - 1):
                S[l] = []
                s[l] = zero
            S[k] = _divexact_scalar(_scale(prev, s[k]), t[j - 1])
        if k == 0:
            break
        # sResP_{k-1} = -Rem(s_k t_{j-1} S_{i-1}, S_{j-1}) / (s_j t_{i-1})
        r, e = _prem(_scale(S[i - 1], s[k] * t[j - 1]), prev)
        den = s[j] * t[i - 1] * (_lc(prev) ** e)
        nxt = _neg(_divexact_scalar(r, den)) if r else []
        S[k - 1] = nxt
        if nxt:
            t[k - 1] = _lc(nxt)
        i, j = j, k
    out = []
    for jj in range(q + 1):
        poly = S.get(jj, [])
        sign = ((p - jj) * (q - jj) + (p - jj) * (p - jj - 1) // 2) % 2
        out.append(_neg(poly) if sign and poly else list(poly))
    return out


def subresultants(f: Polynomial, g: Polynomial, var: str | None = None,
                  method: str = "prs") -> SubresultantSequence:
    """Subresultant sequence of ``f, g`` in ``var``; requires ``deg f > deg g >= 0``.

    ``method="det"`` evaluates the defining determinants directly;
    ``method="prs"`` runs the remainder-sequence recurrence.
    """
    var = _main_var(f, var)
    if f.vars != g.vars:
        raise StructuralError("f and g live over different tables")
    p, q = f.degree(var), g.degree(var)
    if g.is_zero() or not p > q >= 0:
        raise ValueError(f"need deg f > deg g >= 0, got {p} and {q}; swap or pre-reduce")
    vars = f.vars
    constant = _only_var(f, var) and _only_var(g, var)
    a, b = _dense(f, var, constant), _dense(g, var, constant)
    if method == "det":
        zero = Fraction(0) if constant else vars.zero()
        dense = [_trim(_det_sres(a, b, j, zero, None if constant else vars))
                 for j in range(q + 1)]
    elif method == "prs":
        dense = _prs_sres(a, b)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SubresultantSequence(var, tuple(_undense(d, var, vars) for d in dense))


def resultant(f: Polynomial, g: Polynomial, var: str | None = None) -> Polynomial:
    return subresultants(f, g, var).resultant


# ------------------------------------------------- gcd degree at a point

def _specialized_dense(f: Polynomial, var: str, point: Mapping[str, object]):
    others = {v: c for v, c in point.items() if v != var}
    image = f.specialize(others)
    if image.support() - {var}:
        raise ValueError(f"point leaves variables {sorted(image.support() - {var})} unassigned")
    if var not in image.vars.names:
        return _trim([image.constant_value()])
    return _dense(image, var, True)


def gcd_degree_at(f: Polynomial, g: Polynomial, var: str | None = None,
                  point: Mapping[str, object] | None = None):
    """Degree and monic gcd of the images of ``f, g`` at ``point``.

    Reads the degree off the subresultant vanishing pattern: the gcd has
    degree ``j`` iff ``sRes_0 .. sRes_{j-1}`` vanish and ``sRes_j`` does
    not; the gcd is then the monic image of ``sResP_j``.  Pairs of equal
    degree are first replaced by ``(g, f mod g)``.
    """
    var = _main_var(f, var)
    point = dict(point or {})
    a = _specialized_dense(f, var, point)
    b = _specialized_dense(g, var, point)
    if f.degree(var) != _deg(a) or g.degree(var) != _deg(b):
        raise DegenerateSpecialization("specialization degenerate: a leading coefficient vanishes")
    j, gcd = _gcd_degree_dense(a, b)
    vars = VarTable((var,))
    return j, _undense(gcd, var, vars)


def _gcd_degree_dense(a, b):
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    if not b:
        return _deg(a), _monic(a)
    if not a:
        return _deg(b), _monic(b)
    if _deg(a) < _deg(b):
        a, b = b, a
    if _deg(a) == _deg(b):
        _, r = _divmod_field(a, b)
        if not r:
            return _deg(b), _monic(b)
        a, b = b, r
    if _deg(b) == 0:
        return 0, [Fraction(1)]
    seq = _prs_sres(a, b)
    for j, sp in enumerate(seq):
        sj = sp[j] if j < len(sp) else 0
        if sj:
            return j, _monic(sp)
    # sRes_q = lc(b)^(p-q) never vanishes
    raise AssertionError("subresultant chain has no nonzero principal coefficient")


# --------------------------------------------------------- squarefree part

def squarefree_dense(a):
    a = _trim(a)
    if _deg(a) < 1:
        return _monic(a)
    j, gamma = _gcd_degree_dense(a, _derivative(a))
    if j == 0:
        return _monic(a)
    q, r = _divmod_field(a, gamma)
    assert not r
    return _monic(q)


def squarefree_part(f: Polynomial, var: str | None = None) -> Polynomial:
    """``f / gcd(f, f')`` made monic; same roots, each simple."""
    var = _main_var(f, var)
    if not _only_var(f, var):
        raise StructuralError("squarefree_part needs a univariate polynomial")
    if f.degree(var) < 1:
        raise ValueError("squarefree_part needs degree >= 1")
    return _undense(squarefree_dense(_dense(f, var, True)), var, f.vars)


# -------------------------------------------------------------- Sturm count

def sturm_sequence(a):
    seq = [_trim(a), _derivative(a)]
    while seq[-1]:
        _, r = _divmod_field(seq[-2], seq[-1])
        seq.append(_neg(r))
    seq.pop()
    return seq


def _variations(signs):
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def sturm_count_dense(a) -> int:
    a = _trim(a)
    if not a:
        raise ValueError("sturm_count of the zero polynomial")
    if _deg(a) == 0:
        return 0
    seq = sturm_sequence(a)
    if _deg(seq[-1]) > 0:
        raise ValueError("sturm_count needs a squarefree polynomial")
    at_pos = [_sign(_lc(s)) for s in seq]
    at_neg = [_sign(_lc(s)) * (-1) ** _deg(s) for s in seq]
    return _variations(at_neg) - _variations(at_pos)


def sturm_count(f: Polynomial, var: str | None = None) -> int:
    """Number of distinct real roots of a squarefree univariate polynomial."""
    var = _main_var(f, var) if not f.is_constant() else (var or f.vars.names[0])
    if not _only_var(f, var):
        raise StructuralError("sturm_count needs a univariate polynomial")
    return sturm_count_dense(_dense(f, var, True))


def dense_coeffs(f: Polynomial, var: str | None = None) -> list[Fraction]:
    var = _main_var(f, var)
    return _dense(f, var, True)


def from_dense(coeffs: Sequence, var: str = "x", vars: VarTable | None = None) -> Polynomial:
    vars = vars or VarTable((var,))
    return _undense(_trim(list(coeffs)), var, vars)
