"""Continuous characters of Z_l^n with values in principal units.

A character is stored by its values on the topological generators; the
corresponding point of the open polydisk is ``t_i = chi(gamma_i) - 1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .coeff import CoefficientContext, PadicScalar, scalar_exp, scalar_log
from .errors import ContextMismatch, ConvergenceViolation, CoordinateMismatch
from .frobenius import FrobeniusAction
from .series import T

__all__ = [
    "Character",
    "char_from_line",
    "char_inv",
    "char_mul",
    "eval_ideal_at_char",
    "frobenius_on_char",
    "sample_line_parameters",
    "trivial_character",
]


@dataclass(frozen=True)
class Character:
    values: Tuple[PadicScalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError("character needs at least one value")
        ctx = self.values[0].ctx
        for v in self.values:
            if v.ctx != ctx:
                raise ContextMismatch("character values from different contexts")
            d = v - ctx.one()
            if v.v != 0 or (d.v is not None and d.v < 1):
                raise ConvergenceViolation("character values must be principal units")

    @property
    def ctx(self) -> CoefficientContext:
        return self.values[0].ctx

    @property
    def nvars(self) -> int:
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.nvars == other.nvars and all(a == b for a, b in zip(self.values, other.values))

    __hash__ = None

    def __mul__(self, other: "Character") -> "Character":
        return char_mul(self, other)

    def t_point(self) -> List[PadicScalar]:
        return [v - self.ctx.one() for v in self.values]

    def to_json(self) -> dict:
        return {"values": [v.to_json() for v in self.values]}

    @classmethod
    def from_json(cls, d: dict, ctx: CoefficientContext) -> "Character":
        return cls(tuple(PadicScalar.from_json(v, ctx) if isinstance(v, dict) else ctx.scalar(v)
                         for v in d["values"]))


def trivial_character(ctx: CoefficientContext, n: int) -> Character:
    return Character(tuple(ctx.one() for _ in range(n)))


def char_mul(a: Character, b: Character) -> Character:
    if a.ctx != b.ctx or a.nvars != b.nvars:
        raise ContextMismatch("characters of different shape")
    return Character(tuple(x * y for x, y in zip(a.values, b.values)))


def char_inv(a: Character) -> Character:
    return Character(tuple(v.inverse() for v in a.values))


def char_from_line(pi, x) -> Character:
    """chi_x(gamma_i) = exp(lambda_i * x)."""
    ctx = pi.ctx
    x = PadicScalar.coerce(x, ctx)
    return Character(tuple(scalar_exp(l * x) for l in pi.lambdas))


def sample_line_parameters(pi, count: int, seed: int = 0) -> List[PadicScalar]:
    """Random x in l*Z_l (scaled further so every lambda_i * x lies in l*Z_l)."""
    ctx = pi.ctx
    p, N = ctx.prime, ctx.precision
    shift = max([0] + [-l.v for l in pi.lambdas if not l.is_zero()])
    rng = random.Random(seed)
    return [PadicScalar.from_fraction(p ** (1 + shift) * rng.randrange(p**N), ctx) for _ in range(count)]


def eval_ideal_at_char(I, chi: Character) -> List[PadicScalar]:
    """Generators evaluated at t_i = chi(gamma_i) - 1."""
    if I.coords != T:
        raise CoordinateMismatch("characters evaluate t-coordinate ideals")
    if I.nvars != chi.nvars:
        raise ContextMismatch("ideal and character disagree on the number of variables")
    point = chi.t_point()
    # generators are stored up to total degree D; with integral coefficients the
    # dropped tail has valuation >= (D+1) * min v(t_i), so nothing finer is known
    vals = [t.v for t in point if t.v is not None]
    bound = None
    if vals and all(c.v is None or c.v >= 0 for g in I.generators for c in g.terms.values()):
        bound = (chi.ctx.trunc_degree + 1) * min(vals)
    out = []
    for g in I.generators:
        y = g.evaluate(point)
        out.append(y.reduce_abs(bound) if bound is not None else y)
    return out


def frobenius_on_char(chi: Character, phi: FrobeniusAction) -> Character:
    """Values exp(alpha_i * log chi(gamma_i))."""
    if phi.nvars != chi.nvars:
        raise ContextMismatch("action and character disagree on the number of variables")
    ctx = chi.ctx
    return Character(tuple(scalar_exp(PadicScalar.from_fraction(a, ctx) * scalar_log(v))
                           for a, v in zip(phi.effective(), chi.values)))
