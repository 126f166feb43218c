"""Weierstrass division and preparation with respect to the first variable.

Division runs the successive approximation along the filtration by order
in the remaining variables ``t2..tn``: write ``F = t1**a * E + B`` with ``E``
a unit and ``B`` in ``(t2, ..., tn)``; each pass moves the ``t1``-degree ``< a``
part of the residual into the remainder and replaces the rest ``t1**a * Q``
by ``-Q * E**-1 * B``, whose order in ``t2..tn`` is strictly larger.  At
truncation degree ``D`` this stops after at most ``D + 1`` passes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import List, Sequence

from .errors import NotRegular, TruncationTooSmall
from .series import MultiSeries, grlex_key, series_invert, substitute

__all__ = [
    "DivisionResult",
    "LinearChange",
    "WeierstrassFactorization",
    "finite_decompose",
    "make_regular",
    "random_coordinate_change",
    "regularity_order",
    "weierstrass_divide",
    "weierstrass_prepare",
    "weighted_truncate",
]


@dataclass(frozen=True)
class DivisionResult:
    quotient: MultiSeries
    remainders: List[MultiSeries]  # R_0..R_{a-1}, each free of t1
    order: int

    def remainder(self) -> MultiSeries:
        """``sum R_i * t1**i`` as one series."""
        F = self.quotient
        total = MultiSeries.zero(F.ctx, F.nvars, F.coords)
        for i, r in enumerate(self.remainders):
            total = total + r.mul_monomial((i,) + (0,) * (F.nvars - 1))
        return total

    def to_json(self) -> dict:
        return {
            "regular_order": self.order,
            "quotient": self.quotient.to_json(),
            "remainder": [r.to_json() for r in self.remainders],
        }


@dataclass(frozen=True)
class WeierstrassFactorization:
    distinguished: MultiSeries
    unit: MultiSeries
    degree: int

    def to_json(self) -> dict:
        return {
            "regular_order": self.degree,
            "distinguished": self.distinguished.to_json(),
            "unit": self.unit.to_json(),
        }


def regularity_order(F: MultiSeries) -> int:
    """Order in t1 of F(t1, 0, ..., 0)."""
    if F.is_zero():
        raise NotRegular("zero series")
    axis = [b[0] for b in F.terms if not any(b[1:])]
    if not axis:
        raise NotRegular("F(t1, 0, ..., 0) vanishes to truncation; change coordinates first")
    return min(axis)


def _split(F: MultiSeries, a: int):
    """F = t1^a * E + B with B of t1-degree < a."""
    hi, lo = {}, {}
    for b, c in F.terms.items():
        if b[0] >= a:
            hi[(b[0] - a,) + b[1:]] = c
        else:
            lo[b] = c
    return (MultiSeries._raw(F.ctx, F.nvars, F.coords, hi),
            MultiSeries._raw(F.ctx, F.nvars, F.coords, lo))


def _remainders(R: MultiSeries, a: int) -> List[MultiSeries]:
    parts = [dict() for _ in range(a)]
    for b, c in R.terms.items():
        parts[b[0]][(0,) + b[1:]] = c
    return [MultiSeries._raw(R.ctx, R.nvars, R.coords, p) for p in parts]


def weierstrass_divide(G: MultiSeries, F: MultiSeries, variant: str = "batch") -> DivisionResult:
    """Return U, R with G = U*F + sum R_i t1^i and deg_t1(R) < a.

    ``variant="batch"`` processes the whole residual per pass; the
    ``"monomial-asc"``/``"monomial-desc"`` variants reduce one term at a time
    in ascending/descending graded-lex order.  All produce the same result.
    """
    F._check(G)
    a = regularity_order(F)
    ctx, n, coords = F.ctx, F.nvars, F.coords
    if a == 0:
        return DivisionResult(G * series_invert(F), [], 0)
    E, B = _split(F, a)
    Einv = series_invert(E)
    if variant == "batch":
        U = MultiSeries.zero(ctx, n, coords)
        R = MultiSeries.zero(ctx, n, coords)
        H = G
        for _ in range(ctx.trunc_degree + 2):
            hi, lo = _split(H, a)
            R = R + lo
            if hi.is_zero():
                break
            Q = hi * Einv
            U = U + Q
            H = -(Q * B)
        else:
            raise TruncationTooSmall("division did not stabilise")
        return DivisionResult(U, _remainders(R, a), a)
    if variant not in ("monomial-asc", "monomial-desc"):
        raise ValueError(f"unknown variant {variant!r}")
    EF = Einv * F
    residual = dict(G.terms)
    U: dict = {}
    R: dict = {}
    reverse = variant == "monomial-desc"
    while residual:
        for b in [b for b in residual if b[0] < a]:
            c = residual.pop(b)
            R[b] = R[b] + c if b in R else c
        if not residual:
            break
        b = sorted(residual, key=grlex_key, reverse=reverse)[0]
        c = residual[b]
        shift = (b[0] - a,) + b[1:]
        U[shift] = U[shift] + c if shift in U else c
        step = EF.mul_monomial(shift, c)
        for sb, sc in step.terms.items():
            if sb in residual:
                s = residual[sb] - sc
                if s.is_zero():
                    del residual[sb]
                else:
                    residual[sb] = s
            else:
                residual[sb] = -sc
    Us = MultiSeries(ctx, n, coords, {b: c for b, c in U.items()}) * Einv
    Rs = MultiSeries(ctx, n, coords, R)
    return DivisionResult(Us, _remainders(Rs, a), a)


def weighted_truncate(f: MultiSeries, a: int, bound: int) -> MultiSeries:
    """Keep terms t1^i * T'^g with i + a*|g| <= bound."""
    return MultiSeries._raw(f.ctx, f.nvars, f.coords,
                            {b: c for b, c in f.terms.items() if b[0] + a * sum(b[1:]) <= bound})


def weierstrass_prepare(F: MultiSeries) -> WeierstrassFactorization:
    """F = W * U with W distinguished in t1 and U a unit.

    Knowing F to total degree D determines W only on monomials
    ``t1^i T'^g`` with ``i + a|g| <= D`` and U on those with ``i + a|g| <= D - a``;
    the outputs are cut to exactly these monomials, so the factorization is
    canonical and ``F = W*U`` holds modulo the same weighted truncation.
    """
    a = regularity_order(F)
    ctx, n, coords = F.ctx, F.nvars, F.coords
    if a == 0:
        return WeierstrassFactorization(MultiSeries.one(ctx, n, coords), F, 0)
    if a > ctx.trunc_degree:
        raise TruncationTooSmall("regularity order exceeds truncation degree")
    ta = MultiSeries.variable(0, ctx, n, coords) ** a
    res = weierstrass_divide(ta, F)
    D = ctx.trunc_degree
    W = weighted_truncate(ta - res.remainder(), a, D)
    U = weighted_truncate(series_invert(res.quotient), a, D - a)
    return WeierstrassFactorization(W, U, a)


def finite_decompose(g: MultiSeries, p: MultiSeries) -> List[MultiSeries]:
    """Coefficients f_i(y1, x2, ..., xn) with g = sum f_i(p, x2, ..., xn) * x1^i."""
    a = regularity_order(p)
    if a == 0:
        raise NotRegular("p is a unit")
    if a > p.ctx.trunc_degree:
        raise TruncationTooSmall("regularity order exceeds truncation degree")
    if not p.constant_term().is_zero():
        raise NotRegular("p must lie in the maximal ideal")
    ctx, n, coords = g.ctx, g.nvars, g.coords
    D = ctx.trunc_degree
    fs = [dict() for _ in range(a)]
    u = g
    # p^(D+1) vanishes at truncation D, so D+1 rounds suffice
    for k in range(D + 1):
        if u.is_zero():
            break
        res = weierstrass_divide(u, p)
        for i, r in enumerate(res.remainders):
            for b, c in r.terms.items():
                if k + sum(b) <= D:
                    nb = (k,) + b[1:]
                    fs[i][nb] = fs[i][nb] + c if nb in fs[i] else c
        u = res.quotient
    return [MultiSeries(ctx, n, coords, f) for f in fs]


@dataclass(frozen=True)
class LinearChange:
    """x_i -> sum_j matrix[i][j] * x_j, with matrix entries rational."""

    matrix: tuple

    def apply(self, f: MultiSeries) -> MultiSeries:
        n = f.nvars
        subs = []
        for i in range(n):
            subs.append(MultiSeries(f.ctx, n, f.coords, {
                tuple(1 if k == j else 0 for k in range(n)): self.matrix[i][j]
                for j in range(n) if self.matrix[i][j]
            }))
        return substitute(f, subs)


def random_coordinate_change(nvars: int, seed: int, shear: bool = True) -> LinearChange:
    """Seeded permutation composed with a diagonal scaling and, optionally, a shear
    x_j -> x_j + c_j * x_1 (j >= 2) that makes generic series t1-regular."""
    rng = random.Random(seed)
    perm = list(range(nvars))
    rng.shuffle(perm)
    diag = [rng.choice([1, 2, 3, 4, -1, -2]) for _ in range(nvars)]
    M = [[0] * nvars for _ in range(nvars)]
    for i in range(nvars):
        M[i][perm[i]] = diag[i]
    if shear:
        for i in range(nvars):
            if perm[i] != 0:
                M[i][0] += rng.randint(1, 5)
    return LinearChange(tuple(tuple(r) for r in M))


def make_regular(F: MultiSeries, seed: int = 0, attempts: int = 32):
    """Return (F', change) with F' = change(F) t1-regular.

    Tries plain variable permutations first, then seeded random changes.
    """
    n = F.nvars
    for perm in permutations(range(n)):
        M = tuple(tuple(1 if j == perm[i] else 0 for j in range(n)) for i in range(n))
        ch = LinearChange(M)
        G = ch.apply(F)
        try:
            regularity_order(G)
            return G, ch
        except NotRegular:
            continue
    for k in range(attempts):
        ch = random_coordinate_change(n, seed + k)
        G = ch.apply(F)
        try:
            regularity_order(G)
            return G, ch
        except NotRegular:
            continue
    raise NotRegular("no regularising coordinate change found")
