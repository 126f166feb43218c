"""Diagonal Frobenius action on series and the eigen-normalisation of units.

In x-coordinates the action is ``x_i -> alpha_i * x_i``; in t-coordinates it is
``t_i -> (1 + t_i)**alpha_i - 1``.  An effective eigenvalue is ``alpha_i**power``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .coeff import CoefficientContext, PadicScalar, valuation_int
from .errors import (
    ContextMismatch,
    CoordinateMismatch,
    NotAUnit,
    NotEigenPrincipal,
    PrecisionExhausted,
)
from .series import X, MultiSeries, grlex_key, substitute

__all__ = [
    "FrobeniusAction",
    "TrivializationResult",
    "apply_phi",
    "homogenize_eigen",
    "is_phi_stable",
    "trivialization_loss",
    "trivialize_unit",
]


def _binomial_coeffs(alpha: Fraction, D: int) -> List[Fraction]:
    # (1+t)^alpha - 1 = sum_{k>=1} C(alpha, k) t^k; equal to exp(alpha*log(1+t)) - 1
    out = [Fraction(0)]
    c = Fraction(1)
    for k in range(1, D + 1):
        c = c * (alpha - k + 1) / k
        out.append(c)
    return out


@dataclass(frozen=True)
class FrobeniusAction:
    alphas: Tuple[Fraction, ...]
    weight: int = 1
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(Fraction(a) for a in self.alphas))
        if not self.alphas:
            raise ValueError("at least one eigenvalue required")
        if self.power < 1 or self.weight < 1:
            raise ValueError("weight and power must be positive")

    @property
    def nvars(self) -> int:
        return len(self.alphas)

    def effective(self) -> Tuple[Fraction, ...]:
        return tuple(a**self.power for a in self.alphas)

    def with_power(self, k: int) -> "FrobeniusAction":
        return FrobeniusAction(self.alphas, self.weight, self.power * k)

    def restrict(self, indices: Sequence[int]) -> "FrobeniusAction":
        return FrobeniusAction(tuple(self.alphas[i] for i in indices), self.weight, self.power)

    def monomial_eigenvalue(self, beta: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for a, e in zip(self.effective(), beta):
            out *= a**e
        return out

    def check(self, ctx: CoefficientContext) -> None:
        """Eigenvalues are units and no alpha_i^j (1 <= j <= D) is 1 modulo l^N."""
        p = ctx.prime
        for a in self.effective():
            if a == 0 or valuation_int(a.numerator, p) or valuation_int(a.denominator, p):
                raise NotAUnit(f"eigenvalue {a} is not an l-adic unit")
            for j in range(1, ctx.trunc_degree + 1):
                d = a**j - 1
                if d == 0 or valuation_int(d.numerator, p) >= ctx.precision:
                    raise PrecisionExhausted(f"{a}^{j} = 1 modulo l^{ctx.precision}")

    def to_json(self) -> dict:
        return {"alphas": [str(a) for a in self.alphas], "weight": self.weight, "power": self.power}

    @classmethod
    def from_json(cls, d: dict) -> "FrobeniusAction":
        return cls(tuple(Fraction(a) for a in d["alphas"]), int(d.get("weight", 1)), int(d.get("power", 1)))


@dataclass(frozen=True)
class TrivializationResult:
    c: PadicScalar
    h: MultiSeries
    g: MultiSeries
    k_deg: int
    loss: int = 0

    def to_json(self) -> dict:
        return {"c": self.c.to_json(), "h": self.h.to_json(), "g": self.g.to_json(),
                "k": self.k_deg, "loss": self.loss}


def _check_nvars(f: MultiSeries, phi: FrobeniusAction) -> None:
    if f.nvars != phi.nvars:
        raise ContextMismatch(f"series has {f.nvars} variables, action has {phi.nvars}")


def apply_phi(f: MultiSeries, phi: FrobeniusAction) -> MultiSeries:
    _check_nvars(f, phi)
    ctx = f.ctx
    if f.coords == X:
        return f.map_coeffs(lambda b, c: c * PadicScalar.from_fraction(phi.monomial_eigenvalue(b), ctx))
    D = ctx.trunc_degree
    subs = []
    for i, a in enumerate(phi.effective()):
        terms = {}
        for k, c in enumerate(_binomial_coeffs(a, D)):
            if c:
                terms[tuple(k if j == i else 0 for j in range(f.nvars))] = c
        subs.append(MultiSeries(ctx, f.nvars, f.coords, terms))
    return substitute(f, subs)


def _levels(n: int, nu: int):
    if n == 1:
        yield (nu,)
        return
    for first in range(nu, -1, -1):
        for rest in _levels(n - 1, nu - first):
            yield (first,) + rest


def trivialization_loss(phi: FrobeniusAction, ctx: CoefficientContext, degree=None) -> int:
    """Sum over degrees 1..D of the largest v(alpha^beta - 1) with |beta| = degree."""
    D = ctx.trunc_degree if degree is None else degree
    total = 0
    for nu in range(1, D + 1):
        worst = 0
        for beta in _levels(phi.nvars, nu):
            d = phi.monomial_eigenvalue(beta) - 1
            if d == 0:
                return ctx.precision
            worst = max(worst, valuation_int(d.numerator, ctx.prime))
        total += worst
    return total


def trivialize_unit(u: MultiSeries, phi: FrobeniusAction, degree=None):
    """Return (c, h) with c = u(0), h(0) = 1 and u * phi(h) = c * h.

    ``degree`` caps the computation (default: truncation degree).
    """
    _check_nvars(u, phi)
    if u.coords != X:
        raise CoordinateMismatch("trivialize_unit works in x-coordinates")
    ctx = u.ctx
    c = u.constant_term()
    if c.is_zero():
        raise NotAUnit("u(0) = 0")
    D = ctx.trunc_degree if degree is None else min(degree, ctx.trunc_degree)
    if trivialization_loss(phi, ctx, D) >= ctx.precision:
        raise PrecisionExhausted("accumulated loss from alpha^beta - 1 reaches the precision")
    v = u.scale(c.inverse())
    vparts = [v.homogeneous_part(j) for j in range(D + 1)]
    n = u.nvars
    h_parts = [MultiSeries.one(ctx, n, X)]
    phi_parts = [h_parts[0]]
    for nu in range(1, D + 1):
        rhs = MultiSeries.zero(ctx, n, X)
        for j in range(1, nu + 1):
            if not vparts[j].is_zero() and not phi_parts[nu - j].is_zero():
                rhs = rhs + (vparts[j] * phi_parts[nu - j]).homogeneous_part(nu)
        terms = {}
        for b, coeff in rhs.terms.items():
            d = PadicScalar.from_fraction(phi.monomial_eigenvalue(b) - 1, ctx)
            terms[b] = -coeff / d
        hn = MultiSeries(ctx, n, X, terms)
        h_parts.append(hn)
        phi_parts.append(apply_phi(hn, phi))
    h = MultiSeries.zero(ctx, n, X)
    for part in h_parts:
        h = h + part
    return c, h


def _divide_homogeneous(num: MultiSeries, den: MultiSeries):
    """Exact division of homogeneous polynomials, or None if it does not divide."""
    ctx, n = num.ctx, num.nvars
    lead_b, lead_c = max(den.terms.items(), key=lambda t: t[0])
    inv = lead_c.inverse()
    rem: Dict[tuple, PadicScalar] = dict(num.terms)
    quot = {}
    while rem:
        b = max(rem)
        shift = tuple(x - y for x, y in zip(b, lead_b))
        if min(shift) < 0:
            return None
        q = rem[b] * inv
        quot[shift] = q
        for db, dc in den.terms.items():
            nb = tuple(x + y for x, y in zip(db, shift))
            s = rem[nb] - q * dc if nb in rem else -(q * dc)
            if s.is_zero():
                rem.pop(nb, None)
            else:
                rem[nb] = s
    return MultiSeries(ctx, n, X, quot)


def _phi_quotient(f: MultiSeries, phi: FrobeniusAction) -> MultiSeries:
    """u with phi(f) = u * f, known to degree D - ord(f)."""
    ctx, n = f.ctx, f.nvars
    k = f.order()
    D = ctx.trunc_degree
    pf = apply_phi(f, phi)
    fk = f.homogeneous_part(k)
    fparts = [f.homogeneous_part(k + j) for j in range(D - k + 1)]
    uparts: List[MultiSeries] = []
    for m in range(D - k + 1):
        target = pf.homogeneous_part(k + m)
        for j in range(m):
            if not uparts[j].is_zero() and not fparts[m - j].is_zero():
                target = target - (uparts[j] * fparts[m - j]).homogeneous_part(k + m)
        q = _divide_homogeneous(target, fk)
        if q is None:
            raise NotEigenPrincipal(f"phi(f)/f fails to be a power series in degree {m}")
        uparts.append(q)
    u = MultiSeries.zero(ctx, n, X)
    for part in uparts:
        u = u + part
    if u.constant_term().is_zero():
        raise NotEigenPrincipal("phi(f)/f is not a unit")
    return u


def homogenize_eigen(f: MultiSeries, phi: FrobeniusAction) -> TrivializationResult:
    """Find a unit h with g = f*h homogeneous and phi(g) = c*g."""
    _check_nvars(f, phi)
    if f.coords != X:
        raise CoordinateMismatch("homogenize_eigen works in x-coordinates")
    if f.is_zero():
        raise NotEigenPrincipal("zero series")
    ctx = f.ctx
    k = f.order()
    u = _phi_quotient(f, phi)
    c, h = trivialize_unit(u, phi, degree=ctx.trunc_degree - k)
    h = h.truncate(ctx.trunc_degree - k)
    g = f * h
    if any(sum(b) != k for b in g.terms):
        raise NotEigenPrincipal("f*h is not homogeneous; f is not eigen-principal to this precision")
    for b in g.terms:
        if PadicScalar.from_fraction(phi.monomial_eigenvalue(b), ctx) != c:
            raise NotEigenPrincipal(f"monomial {b} of g has eigenvalue different from c")
    loss = trivialization_loss(phi, ctx, ctx.trunc_degree - k)
    return TrivializationResult(c, h, g, k, loss)


def is_phi_stable(ideal, phi: FrobeniusAction) -> bool:
    """phi(g) lies in the ideal for every generator g."""
    from .linearize import membership

    return all(membership(apply_phi(g, phi), ideal) for g in ideal.generators)
