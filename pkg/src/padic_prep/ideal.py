"""Ideal presentations and the bridge to exact rational polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy

from .coeff import CoefficientContext
from .errors import ContextMismatch, ExactnessRequired
from .series import T, X, MultiSeries

__all__ = ["IdealPresentation", "series_to_sympy", "sympy_to_series", "symbols_for"]

FLAVORS = ("Rn", "An")


def symbols_for(nvars: int, coords: str = X):
    return sympy.symbols(f"{coords}1:{nvars + 1}")


def series_to_sympy(f: MultiSeries, syms=None):
    """Exact rational polynomial with the same terms, via rational reconstruction."""
    syms = syms or symbols_for(f.nvars, f.coords)
    q = f.to_rational_dict()
    if q is None:
        raise ExactnessRequired("a coefficient is not a reconstructible rational")
    expr = sympy.Integer(0)
    for b, c in q.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, b):
            term *= s**e
        expr += term
    return sympy.expand(expr)


def sympy_to_series(expr, syms, ctx: CoefficientContext, coords: str = X) -> MultiSeries:
    poly = sympy.Poly(expr, *syms, domain="QQ")
    terms = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms() if c != 0}
    return MultiSeries(ctx, len(syms), coords, terms)


@dataclass(frozen=True)
class IdealPresentation:
    generators: Tuple[MultiSeries, ...]
    nvars: int
    coords: str = X
    flavor: str = "An"
    exact: bool = False
    prime: bool = True

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}")
        if self.coords not in (T, X):
            raise ValueError(f"unknown coordinate system {self.coords!r}")
        ctx = None
        for g in self.generators:
            if g.nvars != self.nvars or g.coords != self.coords:
                raise ContextMismatch("generators disagree on variables or coordinates")
            if ctx is not None and g.ctx != ctx:
                raise ContextMismatch("generators from different contexts")
            ctx = g.ctx
            if not g.constant_term().is_zero():
                raise ValueError("generator with nonzero constant term: ideal not inside m")

    @property
    def ctx(self):
        return self.generators[0].ctx if self.generators else None

    def nonzero(self) -> List[MultiSeries]:
        return [g for g in self.generators if not g.is_zero()]

    def is_zero(self) -> bool:
        return not self.nonzero()

    def is_principal(self) -> bool:
        return len(self.nonzero()) <= 1

    def sympy_generators(self, syms=None) -> list:
        if not self.exact:
            raise ExactnessRequired("ideal is not flagged polynomial-exact")
        syms = syms or symbols_for(self.nvars, self.coords)
        return [series_to_sympy(g, syms) for g in self.nonzero()]

    @classmethod
    def from_sympy(cls, exprs: Sequence, syms, ctx, coords=X, flavor="An", prime=True):
        gens = [sympy_to_series(e, syms, ctx, coords) for e in exprs if sympy.expand(e) != 0]
        return cls(tuple(gens), len(syms), coords, flavor, True, prime)

    @classmethod
    def parse(cls, texts: Sequence[str], ctx, nvars: int, coords=X, flavor="An", exact=True, prime=True):
        gens = tuple(MultiSeries.parse(t, ctx, nvars, coords) for t in texts)
        return cls(gens, nvars, coords, flavor, exact, prime)

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "coords": self.coords,
            "nvars": self.nvars,
            "exact": self.exact,
            "prime": self.prime,
            "generators": [g.to_json() for g in self.generators],
        }

    @classmethod
    def from_json(cls, d: dict, ctx: CoefficientContext) -> "IdealPresentation":
        """Generators are series-JSON objects or polynomial strings.

        ``exact`` defaults to true when every generator is a string.
        """
        coords = d.get("coords", X)
        gens = []
        nvars = d.get("nvars")
        for g in d["generators"]:
            if isinstance(g, str):
                if nvars is None:
                    raise ValueError("string generators need an explicit nvars")
                gens.append(MultiSeries.parse(g, ctx, int(nvars), coords))
            else:
                gens.append(MultiSeries.from_json(g, ctx))
        if nvars is None:
            if not gens:
                raise ValueError("empty ideal needs an explicit nvars")
            nvars = gens[0].nvars
        return cls(tuple(gens), int(nvars), coords, d.get("flavor", "An"),
                   bool(d.get("exact", all(isinstance(g, str) for g in d["generators"]))), bool(d.get("prime", True)))

    def with_generators(self, gens: Sequence[MultiSeries]) -> "IdealPresentation":
        n = gens[0].nvars if gens else self.nvars
        return IdealPresentation(tuple(gens), n, self.coords, self.flavor, self.exact, self.prime)
