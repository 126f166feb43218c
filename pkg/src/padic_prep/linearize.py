"""Linearization of prime phi-ideals: find x_i -> lambda_i * x killing the ideal.

The recursion:

* two variables, dimension one: the ideal is principal; homogenizing its
  generator against phi leaves a linear form ``a*x1 + b*x2`` and
  ``lambda = (-b, a)``;
* a coordinate ``x_i`` in the ideal: set ``lambda_i = 0`` and drop it;
* dimension one, ``n >= 3``: eliminate ``x1``, linearize ``J = I cap A_{n-1}``
  to get ``lambda'``, push ``I`` to two variables ``(x1, y)`` along
  ``x_j -> lambda'_j y`` and solve the two-variable case there;
* dimension above one: cut with a coordinate hyperplane and continue on a
  minimal prime of the cut.

Ideal arithmetic (elimination, local membership, factorization) is done over
exact rationals with sympy; only the homogenization step runs on p-adic series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import sympy

from .coeff import CoefficientContext, PadicScalar
from .errors import (
    ComponentOracleRequired,
    CoordinateMismatch,
    ExactnessRequired,
    MaximalIdeal,
    MembershipUndecidable,
    NoAlignment,
    NotEigenPrincipal,
    NotLinearizable,
    NotRegular,
    ZeroIdeal,
)
from .frobenius import FrobeniusAction, homogenize_eigen
from .ideal import IdealPresentation, series_to_sympy, sympy_to_series, symbols_for
from .series import X, MultiSeries, substitute
from .weierstrass import make_regular, weierstrass_divide, weighted_truncate

__all__ = [
    "K_MAX",
    "EvaluationMap",
    "align_eigenvalues",
    "eliminate",
    "linearize_n2_dim1",
    "linearize_phi_ideal",
    "membership",
    "subgroup_points",
    "verify_evaluation",
]

K_MAX = 32


@dataclass(frozen=True)
class EvaluationMap:
    lambdas: Tuple[PadicScalar, ...]
    aligned_power: int
    aligned_alpha: PadicScalar

    @property
    def nvars(self) -> int:
        return len(self.lambdas)

    @property
    def ctx(self) -> CoefficientContext:
        return self.aligned_alpha.ctx

    def support(self) -> List[int]:
        return [i for i, l in enumerate(self.lambdas) if not l.is_zero()]

    def rational_lambdas(self):
        return [l.to_rational() for l in self.lambdas]

    def to_json(self) -> dict:
        rat = self.rational_lambdas()
        return {
            "nvars": self.nvars,
            "lambdas": [l.to_json() for l in self.lambdas],
            "lambdas_rational": [None if q is None else str(q) for q in rat],
            "aligned_power": self.aligned_power,
            "aligned_alpha": self.aligned_alpha.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict, ctx: CoefficientContext) -> "EvaluationMap":
        lams = tuple(PadicScalar.from_json(l, ctx) for l in d["lambdas"])
        return cls(lams, int(d["aligned_power"]), PadicScalar.from_json(d["aligned_alpha"], ctx))


# -- eigenvalue alignment -------------------------------------------------

def _same(a: Fraction, b: Fraction, ctx: CoefficientContext) -> bool:
    return PadicScalar.from_fraction(a - b, ctx, abs_prec=ctx.precision).is_zero()


def align_eigenvalues(phi: FrobeniusAction, support: Sequence[int], ctx: CoefficientContext,
                      k_max: int = K_MAX):
    """Smallest k <= k_max with alpha_i^k equal modulo l^N over the support."""
    support = list(support)
    if not support:
        raise ValueError("empty support")
    eff = phi.effective()
    for k in range(1, k_max + 1):
        vals = [eff[i] ** k for i in support]
        if all(_same(v, vals[0], ctx) for v in vals[1:]):
            return k, PadicScalar.from_fraction(vals[0], ctx)
    raise NoAlignment(f"eigenvalues on {support} do not align for k <= {k_max}")


def _make_map(lams: Sequence, phi: FrobeniusAction, ctx: CoefficientContext) -> EvaluationMap:
    lams = [PadicScalar.coerce(l, ctx) for l in lams]
    nz = [l for l in lams if not l.is_zero()]
    if not nz:
        raise NotLinearizable("all lambda vanish")
    inv = nz[0].inverse()
    lams = tuple(l * inv for l in lams)
    support = [i for i, l in enumerate(lams) if not l.is_zero()]
    k, alpha = align_eigenvalues(phi, support, ctx)
    return EvaluationMap(lams, k * phi.power, alpha)


# -- exact ideal helpers --------------------------------------------------

def _local_ring(syms):
    return sympy.QQ.old_poly_ring(*syms, order="ilex")


def _local_contains(exprs, f, syms) -> bool:
    exprs = [e for e in exprs if e != 0]
    if f == 0:
        return True
    if not exprs:
        return False
    R = _local_ring(syms)
    return R.ideal(*[R.convert(e) for e in exprs]).contains(R.convert(f))


def _groebner(exprs, syms, order="grevlex"):
    exprs = [e for e in exprs if e != 0]
    if not exprs:
        return []
    return list(sympy.groebner(exprs, *syms, order=order, domain="QQ").exprs)


def _dimension(exprs, syms) -> int:
    """Krull dimension of Q[syms]/(exprs) from grevlex leading monomials."""
    G = _groebner(exprs, syms)
    if not G:
        return len(syms)
    if any(sympy.Poly(g, *syms).is_ground for g in G):
        return -1
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G]
    n = len(syms)
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            if all(any(m[i] for i in range(n) if i not in S) for m in leads):
                return size
    return 0


def _eliminate_exprs(exprs, syms, drop: int):
    order = [syms[drop]] + [s for i, s in enumerate(syms) if i != drop]
    G = _groebner(exprs, order, order="lex")
    return [g for g in G if not g.has(syms[drop])]


def _restrict_zero(exprs, syms, i: int):
    return [e for e in (sympy.expand(e.subs(syms[i], 0)) for e in exprs) if e != 0]


# -- public operations ----------------------------------------------------

def eliminate(I: IdealPresentation, drop_var: int) -> IdealPresentation:
    """I cap (ring without x_drop), by lex Groebner elimination over Q."""
    if not I.exact:
        raise ExactnessRequired("elimination needs polynomial-exact generators")
    syms = symbols_for(I.nvars, I.coords)
    J = _eliminate_exprs(I.sympy_generators(syms), syms, drop_var)
    keep = [s for i, s in enumerate(syms) if i != drop_var]
    ctx = I.ctx
    gens = [sympy_to_series(g, keep, ctx, I.coords) for g in J]
    return IdealPresentation(tuple(gens), I.nvars - 1, I.coords, I.flavor, True, I.prime)


def _principal_series_membership(f: MultiSeries, g: MultiSeries) -> bool:
    try:
        g2, ch = make_regular(g)
    except NotRegular:
        raise MembershipUndecidable("generator is zero to truncation")
    f2 = ch.apply(f)
    res = weierstrass_divide(f2, g2)
    return weighted_truncate(res.remainder(), res.order, f.ctx.trunc_degree).is_zero()


def membership(f: MultiSeries, I: IdealPresentation) -> bool:
    """Decide f in I inside the local ring at the origin.

    Exact ideals use a local (Mora) normal form over Q; principal ideals
    fall back to Weierstrass division of truncated series.
    """
    if f.is_zero():
        return True
    if I.is_zero():
        return False
    if I.exact:
        syms = symbols_for(I.nvars, I.coords)
        try:
            fe = series_to_sympy(f, syms)
        except ExactnessRequired:
            fe = None
        if fe is not None:
            return _local_contains(I.sympy_generators(syms), fe, syms)
    if I.is_principal():
        return _principal_series_membership(f, I.nonzero()[0])
    raise MembershipUndecidable("ideal is neither polynomial-exact nor principal")


def linearize_n2_dim1(f: MultiSeries, phi: FrobeniusAction) -> EvaluationMap:
    """Two variables, principal prime phi-ideal (f)."""
    if f.nvars != 2:
        raise ValueError("linearize_n2_dim1 needs two variables")
    if f.coords != X:
        raise CoordinateMismatch("linearization works in x-coordinates")
    # (f) may only be stable under a power of phi
    for k in range(1, K_MAX + 1):
        try:
            res = homogenize_eigen(f, phi.with_power(k))
            break
        except NotEigenPrincipal:
            if k == K_MAX:
                raise
    if res.k_deg != 1:
        raise NotLinearizable(f"homogenized generator has degree {res.k_deg}; ideal is not prime")
    a = res.g.coeff((1, 0))
    b = res.g.coeff((0, 1))
    return _make_map([-b, a], phi, f.ctx)


def _n2_lambdas(f: MultiSeries, phi: FrobeniusAction) -> List[PadicScalar]:
    return list(linearize_n2_dim1(f, phi).lambdas)


def _stable_power(expr, syms, alphas: Sequence[Fraction], k_max: int = K_MAX) -> Optional[int]:
    """Smallest k with (expr) stable under x_i -> alpha_i^k x_i, locally."""
    for k in range(1, k_max + 1):
        img = sympy.expand(expr.subs({s: sympy.Rational(a.numerator, a.denominator) ** k * s
                                      for s, a in zip(syms, alphas)}, simultaneous=True))
        if _local_contains([expr], img, syms):
            return k
    return None


def _minimal_prime(exprs, syms, alphas, oracle):
    """A phi-stable minimal prime of (exprs), as (generators, power)."""
    G = _groebner(exprs, syms)
    if all(sympy.Poly(g, *syms).total_degree() <= 1 for g in G):
        return G, 1
    if len(G) == 1:
        factors = [p for p, _ in sympy.factor_list(G[0], *syms)[1]]
        origin = {s: 0 for s in syms}
        factors = [p for p in factors if p.subs(origin) == 0]
        for p in factors:
            k = _stable_power(p, syms, alphas)
            if k is not None:
                return [p], k
    if oracle is not None:
        comp = oracle(exprs, syms)
        if comp is not None:
            return list(comp), 1
    raise ComponentOracleRequired("cannot compute a minimal prime of the cut ideal in the exact fragment")


def _lin(exprs, syms, alphas: Tuple[Fraction, ...], ctx, oracle) -> List[Fraction]:
    """Exact recursion; returns unnormalized rational lambdas."""
    n = len(syms)
    exprs = [sympy.expand(e) for e in exprs if sympy.expand(e) != 0]
    if not exprs:
        raise ZeroIdeal("zero ideal")
    # coordinates inside the ideal are sent to zero
    for i, s in enumerate(syms):
        if _local_contains(exprs, s, syms):
            if n == 1:
                raise MaximalIdeal("ideal contains every coordinate")
            rest = [t for j, t in enumerate(syms) if j != i]
            sub = _restrict_zero(exprs, syms, i)
            if not sub:
                # I = (x_i): any lambda with lambda_i = 0 works; pick e_j
                lam = [Fraction(0)] * n
                lam[0 if i else 1] = Fraction(1)
                return lam
            lam = _lin(sub, rest, alphas[:i] + alphas[i + 1:], ctx, oracle)
            return lam[:i] + [Fraction(0)] + lam[i:]
    if n == 1:
        raise NotLinearizable("nonzero ideal of one variable without x1 is not prime")
    d = _dimension(exprs, syms)
    if d <= 0:
        raise NotLinearizable("ideal is zero-dimensional but misses a coordinate; not prime")
    if d >= 2:
        cut = _restrict_zero(exprs, syms, 0)
        rest = list(syms[1:])
        comp, k = _minimal_prime(cut, rest, alphas[1:], oracle)
        sub_alphas = tuple(a**k for a in alphas[1:])
        lam = _lin(comp, rest, sub_alphas, ctx, oracle)
        return [Fraction(0)] + lam
    if n == 2:
        G = _groebner(exprs, syms)
        f = G[0]
        for g in G[1:]:
            f = sympy.gcd(f, g)
        if not all(_local_contains([f], g, syms) for g in exprs):
            raise NotLinearizable("two-variable ideal is not principal; not a height-one prime")
        fs = sympy_to_series(f, syms, ctx, X)
        lam = _n2_lambdas(fs, FrobeniusAction(alphas))
        return [_rational(l) for l in lam]
    # dimension one, n >= 3
    axis = {s: 0 for s in syms[1:]}
    if all(sympy.expand(e.subs(axis)) == 0 for e in exprs):
        return [Fraction(1)] + [Fraction(0)] * (n - 1)
    J = _eliminate_exprs(exprs, syms, 0)
    lam_rest = _lin(J, list(syms[1:]), alphas[1:], ctx, oracle)
    support = [j for j, l in enumerate(lam_rest) if l]
    kp, _ = align_eigenvalues(FrobeniusAction(alphas[1:]), support, ctx)
    alpha_y = alphas[1 + support[0]] ** kp
    y = sympy.Symbol("_y")
    x1 = syms[0]
    images = [sympy.expand(e.subs({s: sympy.Rational(l.numerator, l.denominator) * y
                                   for s, l in zip(syms[1:], lam_rest)}, simultaneous=True))
              for e in exprs]
    images = [e for e in images if e != 0]
    if not images:
        return [Fraction(0)] + lam_rest
    q = images[0]
    for e in images[1:]:
        q = sympy.gcd(q, e)
    if sympy.Poly(q, x1, y).is_ground:
        raise NotLinearizable("image in two variables is the unit or maximal ideal")
    mu = _lin([q], [x1, y], (alphas[0] ** kp, alpha_y), ctx, oracle)
    return [mu[0]] + [mu[1] * l for l in lam_rest]


def _rational(l: PadicScalar) -> Fraction:
    q = l.to_rational()
    if q is None:
        raise ExactnessRequired("lambda is not a reconstructible rational")
    return q


def linearize_phi_ideal(I: IdealPresentation, phi: FrobeniusAction,
                        component_oracle: Optional[Callable] = None) -> EvaluationMap:
    """EvaluationMap with I inside its kernel; I prime, phi-stable, 0 != I != m."""
    if I.coords != X:
        raise CoordinateMismatch("linearization works in x-coordinates")
    if I.nvars != phi.nvars:
        raise ValueError("ideal and Frobenius action disagree on the number of variables")
    if I.is_zero():
        raise ZeroIdeal("zero ideal")
    ctx = I.ctx
    gens = I.nonzero()
    if I.nvars == 1:
        if len(gens) and min(g.order() for g in gens) == 1:
            raise MaximalIdeal("nonzero prime of one variable is the maximal ideal")
        raise NotLinearizable("ideal of one variable is not prime")
    if I.nvars == 2 and len(gens) == 1 and not I.exact:
        return linearize_n2_dim1(gens[0], phi)
    if not I.exact:
        if I.nvars == 2 and I.is_principal():
            return linearize_n2_dim1(gens[0], phi)
        raise ExactnessRequired("ideals with several generators need polynomial-exact input")
    syms = symbols_for(I.nvars, X)
    lam = _lin(I.sympy_generators(syms), list(syms), phi.effective(), ctx, component_oracle)
    return _make_map(lam, phi, ctx)


def verify_evaluation(I: IdealPresentation, pi: EvaluationMap) -> bool:
    """Every generator vanishes under x_i -> lambda_i * x (to truncation)."""
    if I.coords != X:
        raise CoordinateMismatch("verification works in x-coordinates")
    for g in I.nonzero():
        subs = [MultiSeries(g.ctx, 1, X, {(1,): l}) if not l.is_zero() else MultiSeries.zero(g.ctx, 1, X)
                for l in pi.lambdas]
        if not substitute(g, subs).is_zero():
            return False
    return True


def subgroup_points(pi: EvaluationMap, xs):
    from .characters import char_from_line

    return [char_from_line(pi, x) for x in xs]
