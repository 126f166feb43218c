"""Truncated multivariate power series over a :class:`CoefficientContext`.

Terms live in a sparse map from exponent tuples to nonzero scalars and are
truncated at total degree ``ctx.trunc_degree``.  The ``coords`` tag says
whether the variables are the group-ring parameters ``t_i`` or the
logarithmic parameters ``x_i = log(1 + t_i)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .coeff import CoefficientContext, PadicScalar
from .errors import ContextMismatch, CoordinateMismatch, NotAUnit, SubstitutionDiverges

__all__ = [
    "MultiSeries",
    "T",
    "X",
    "change_coords",
    "exp_minus_one_coeffs",
    "log_one_plus_coeffs",
    "grlex_key",
    "series_invert",
    "series_ring_op",
    "substitute",
]

T = "t"
X = "x"


def grlex_key(beta: tuple) -> tuple:
    return (sum(beta), beta)


class MultiSeries:
    __slots__ = ("ctx", "nvars", "coords", "_terms")

    def __init__(self, ctx: CoefficientContext, nvars: int, coords: str = T, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        if coords not in (T, X):
            raise ValueError(f"coords must be 't' or 'x', got {coords!r}")
        self.ctx = ctx
        self.nvars = nvars
        self.coords = coords
        D = ctx.trunc_degree
        clean = {}
        if terms:
            for beta, c in terms.items():
                beta = tuple(int(e) for e in beta)
                if len(beta) != nvars:
                    raise ValueError(f"exponent {beta} has wrong length")
                if sum(beta) > D:
                    continue
                c = PadicScalar.coerce(c, ctx)
                if not c.is_zero():
                    clean[beta] = c
        self._terms = clean

    @classmethod
    def _raw(cls, ctx, nvars, coords, terms: dict) -> "MultiSeries":
        # trusted constructor: terms already truncated, nonzero, coerced
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.nvars = nvars
        obj.coords = coords
        obj._terms = terms
        return obj

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, ctx, nvars, coords=T):
        return cls._raw(ctx, nvars, coords, {})

    @classmethod
    def constant(cls, value, ctx, nvars, coords=T):
        return cls(ctx, nvars, coords, {(0,) * nvars: value})

    @classmethod
    def one(cls, ctx, nvars, coords=T):
        return cls.constant(1, ctx, nvars, coords)

    @classmethod
    def variable(cls, i: int, ctx, nvars, coords=T):
        """The i-th variable, 0-based."""
        beta = [0] * nvars
        beta[i] = 1
        return cls(ctx, nvars, coords, {tuple(beta): 1})

    @classmethod
    def from_rational_dict(cls, coeffs: Mapping, ctx, nvars, coords=T):
        return cls(ctx, nvars, coords, {b: Fraction(c) for b, c in coeffs.items()})

    @classmethod
    def parse(cls, text: str, ctx, nvars: int, coords=T):
        """Build from a polynomial string in ``t1..tn`` (or ``x1..xn``).

        With one variable the bare name ``t`` (or ``x``) is accepted too.
        """
        import sympy

        syms = sympy.symbols(f"{coords}1:{nvars + 1}")
        names = {str(s): s for s in syms}
        if nvars == 1:
            names[coords] = syms[0]
        poly = sympy.Poly(sympy.sympify(text, locals=names), *syms, domain="QQ")
        coeffs = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
        return cls(ctx, nvars, coords, coeffs)

    # -- accessors -----------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def coeff(self, beta) -> PadicScalar:
        return self._terms.get(tuple(beta), self.ctx.zero())

    def constant_term(self) -> PadicScalar:
        return self.coeff((0,) * self.nvars)

    def is_zero(self) -> bool:
        return not self._terms

    def order(self):
        """Lowest total degree of a nonzero term (inf for zero)."""
        if not self._terms:
            return float("inf")
        return min(sum(b) for b in self._terms)

    def degree(self) -> int:
        return max((sum(b) for b in self._terms), default=-1)

    def homogeneous_part(self, k: int) -> "MultiSeries":
        return self._raw(self.ctx, self.nvars, self.coords,
                         {b: c for b, c in self._terms.items() if sum(b) == k})

    def truncate(self, k: int) -> "MultiSeries":
        """Drop terms of total degree > k."""
        return self._raw(self.ctx, self.nvars, self.coords,
                         {b: c for b, c in self._terms.items() if sum(b) <= k})

    def is_unit(self) -> bool:
        c = self.constant_term()
        return not c.is_zero()

    def var_degree(self, i: int) -> int:
        return max((b[i] for b in self._terms), default=-1)

    def free_of(self, i: int) -> bool:
        return all(b[i] == 0 for b in self._terms)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other) -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            return MultiSeries.constant(other, self.ctx, self.nvars, self.coords)
        if other.ctx != self.ctx:
            raise ContextMismatch("series from different contexts")
        if other.nvars != self.nvars:
            raise ContextMismatch(f"nvars differ: {self.nvars} vs {other.nvars}")
        if other.coords != self.coords:
            raise CoordinateMismatch(f"cannot mix {self.coords}- and {other.coords}-coordinates")
        return other

    def __add__(self, other):
        g = self._check(other)
        out = dict(self._terms)
        for b, c in g._terms.items():
            if b in out:
                s = out[b] + c
                if s.is_zero():
                    del out[b]
                else:
                    out[b] = s
            else:
                out[b] = c
        return self._raw(self.ctx, self.nvars, self.coords, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.ctx, self.nvars, self.coords, {b: -c for b, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def scale(self, c) -> "MultiSeries":
        c = PadicScalar.coerce(c, self.ctx)
        out = {}
        for b, a in self._terms.items():
            s = a * c
            if not s.is_zero():
                out[b] = s
        return self._raw(self.ctx, self.nvars, self.coords, out)

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        g = self._check(other)
        D = self.ctx.trunc_degree
        left = [(b, sum(b), c) for b, c in self._terms.items()]
        right = [(b, sum(b), c) for b, c in g._terms.items()]
        out = {}
        for b1, d1, c1 in left:
            for b2, d2, c2 in right:
                if d1 + d2 > D:
                    continue
                beta = tuple(x + y for x, y in zip(b1, b2))
                prod = c1 * c2
                if beta in out:
                    out[beta] = out[beta] + prod
                else:
                    out[beta] = prod
        out = {b: c for b, c in out.items() if not c.is_zero()}
        return self._raw(self.ctx, self.nvars, self.coords, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return series_invert(self) ** (-k)
        result = MultiSeries.one(self.ctx, self.nvars, self.coords)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, beta, c=None) -> "MultiSeries":
        """Multiply by ``c * t**beta``."""
        D = self.ctx.trunc_degree
        out = {}
        for b, a in self._terms.items():
            nb = tuple(x + y for x, y in zip(b, beta))
            if sum(nb) > D:
                continue
            out[nb] = a if c is None else a * c
        out = {b: a for b, a in out.items() if not a.is_zero()}
        return self._raw(self.ctx, self.nvars, self.coords, out)

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            if isinstance(other, (int, Fraction, PadicScalar)):
                other = MultiSeries.constant(other, self.ctx, self.nvars, self.coords)
            else:
                return NotImplemented
        if (self.ctx, self.nvars, self.coords) != (other.ctx, other.nvars, other.coords):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def map_coeffs(self, fn) -> "MultiSeries":
        """Apply ``fn(beta, coeff) -> scalar`` termwise."""
        out = {}
        for b, c in self._terms.items():
            s = fn(b, c)
            if not s.is_zero():
                out[b] = s
        return self._raw(self.ctx, self.nvars, self.coords, out)

    def with_coords(self, coords: str) -> "MultiSeries":
        """Relabel the coordinate tag without changing coefficients."""
        return self._raw(self.ctx, self.nvars, coords, dict(self._terms))

    def at_modulus(self, k=None) -> "MultiSeries":
        """Coefficients reduced to absolute precision ``l**k`` (default: the working modulus)."""
        k = self.ctx.precision if k is None else k
        return self.map_coeffs(lambda b, c: c.reduce_abs(k))

    def max_loss(self) -> int:
        return max((c.loss for c in self._terms.values()), default=0)

    def evaluate(self, point: Sequence[PadicScalar]) -> PadicScalar:
        """Sum of the stored terms at a point."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        point = [PadicScalar.coerce(p, self.ctx) for p in point]
        powers = [[self.ctx.one()] for _ in point]
        total = self.ctx.zero()
        for b, c in self._terms.items():
            term = c
            for i, e in enumerate(b):
                pw = powers[i]
                while len(pw) <= e:
                    pw.append(pw[-1] * point[i])
                if e:
                    term = term * pw[e]
            total = total + term
        return total

    # -- relabelling ---------------------------------------------------
    def permute(self, perm: Sequence[int]) -> "MultiSeries":
        """New variable j is old variable perm[j]."""
        out = {tuple(b[perm[j]] for j in range(self.nvars)): c for b, c in self._terms.items()}
        return self._raw(self.ctx, self.nvars, self.coords, out)

    def embed(self, nvars: int, positions: Sequence[int]) -> "MultiSeries":
        """Place variable i at position positions[i] of a ring with ``nvars`` variables."""
        out = {}
        for b, c in self._terms.items():
            nb = [0] * nvars
            for i, e in enumerate(b):
                nb[positions[i]] += e
            out[tuple(nb)] = c
        return self._raw(self.ctx, nvars, self.coords, out)

    def drop_variables(self, keep: Sequence[int]) -> "MultiSeries":
        """Restrict to the variables ``keep`` (the others must be absent)."""
        out = {}
        for b, c in self._terms.items():
            if any(b[i] for i in range(self.nvars) if i not in keep):
                raise ValueError("series depends on a dropped variable")
            out[tuple(b[i] for i in keep)] = c
        return self._raw(self.ctx, len(keep), self.coords, out)

    # -- io ------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "coords": self.coords,
            "nvars": self.nvars,
            "terms": [{"exp": list(b), "coeff": c.to_json()} for b, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, d: dict, ctx: CoefficientContext) -> "MultiSeries":
        nvars = int(d["nvars"])
        terms = {}
        for t in d["terms"]:
            c = t["coeff"]
            if isinstance(c, dict):
                c = PadicScalar.from_json(c, ctx)
            else:
                c = PadicScalar.from_fraction(Fraction(str(c)), ctx)
            terms[tuple(t["exp"])] = c
        return cls(ctx, nvars, d.get("coords", T), terms)

    def to_rational_dict(self):
        """Rational reconstruction of every coefficient; None if any fails."""
        out = {}
        for b, c in self._terms.items():
            q = c.to_rational()
            if q is None:
                return None
            out[b] = q
        return out

    def __repr__(self):
        if not self._terms:
            return "0"
        names = [f"{self.coords}{i + 1}" for i in range(self.nvars)]
        parts = []
        for b, c in self.sorted_terms():
            q = c.to_rational()
            cs = str(q) if q is not None else repr(c)
            mono = "*".join(f"{n}^{e}" if e > 1 else n for n, e in zip(names, b) if e)
            parts.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(parts)


def series_ring_op(f: MultiSeries, g: MultiSeries, op: str) -> MultiSeries:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def series_invert(f: MultiSeries) -> MultiSeries:
    c = f.constant_term()
    if c.is_zero():
        raise NotAUnit("constant term vanishes")
    cinv = c.inverse()
    # f = c (1 - g) with g in m, so 1/f = c^-1 sum g^k
    g = MultiSeries.one(f.ctx, f.nvars, f.coords) - f.scale(cinv)
    D = f.ctx.trunc_degree
    acc = MultiSeries.one(f.ctx, f.nvars, f.coords)
    # Horner: 1 + g(1 + g(1 + ...))
    for _ in range(D):
        acc = MultiSeries.one(f.ctx, f.nvars, f.coords) + g * acc
    return acc.scale(cinv)


def substitute(f: MultiSeries, g: Sequence[MultiSeries]) -> MultiSeries:
    """Compose: replace variable i of ``f`` by ``g[i]``."""
    if len(g) != f.nvars:
        raise ValueError(f"need {f.nvars} substitutes, got {len(g)}")
    if not g:
        raise ValueError("empty substitution")
    ref = g[0]
    for gi in g:
        ref._check(gi)
        if gi.ctx != f.ctx:
            raise ContextMismatch("substitute across contexts")
        if not gi.constant_term().is_zero():
            raise SubstitutionDiverges("substituted series has a nonzero constant term")
    ctx, n, coords = ref.ctx, ref.nvars, ref.coords
    powers = [[MultiSeries.one(ctx, n, coords)] for _ in g]

    def power(i, e):
        pw = powers[i]
        while len(pw) <= e:
            pw.append(pw[-1] * g[i])
        return pw[e]

    # memoise products over exponent prefixes
    prefix = {(): MultiSeries.one(ctx, n, coords)}

    def mono(beta):
        if beta in prefix:
            return prefix[beta]
        head = mono(beta[:-1])
        e = beta[-1]
        val = head if e == 0 else head * power(len(beta) - 1, e)
        prefix[beta] = val
        return val

    out: dict = {}
    for beta, c in f.sorted_terms():
        m = mono(beta)
        for b, a in m._terms.items():
            prod = a * c
            if b in out:
                out[b] = out[b] + prod
            else:
                out[b] = prod
    out = {b: a for b, a in out.items() if not a.is_zero()}
    return MultiSeries._raw(ctx, n, coords, out)


def exp_minus_one_coeffs(D: int) -> list:
    """Coefficients of exp(z) - 1 up to z^D (index = power)."""
    return [Fraction(0)] + [Fraction(1, factorial(k)) for k in range(1, D + 1)]


def log_one_plus_coeffs(D: int) -> list:
    """Coefficients of log(1 + z) up to z^D."""
    return [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, D + 1)]


def _univariate(coeffs: Iterable, i: int, ctx, nvars, coords) -> MultiSeries:
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            b = [0] * nvars
            b[i] = k
            terms[tuple(b)] = c
    return MultiSeries(ctx, nvars, coords, terms)


def change_coords(f: MultiSeries, target: str) -> MultiSeries:
    """Switch between t- and x-coordinates via x_i = log(1 + t_i)."""
    if target not in (T, X):
        raise ValueError(f"unknown coordinate system {target!r}")
    if f.coords == target:
        raise CoordinateMismatch(f"series is already in {target}-coordinates")
    D = f.ctx.trunc_degree
    if target == X:
        # t_i = exp(x_i) - 1
        coeffs = exp_minus_one_coeffs(D)
    else:
        coeffs = log_one_plus_coeffs(D)
    subs = [_univariate(coeffs, i, f.ctx, f.nvars, target) for i in range(f.nvars)]
    return substitute(f, subs)
