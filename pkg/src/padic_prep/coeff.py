"""Fixed-precision arithmetic in Q_l.

A nonzero :class:`PadicScalar` is ``u * l**v`` with ``u`` a unit known modulo
``l**(N - loss)``.  Precision is tracked per value: the absolute precision
of a value is ``v + N - loss`` and every operation returns the best absolute
precision its inputs justify.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import (
    ContextMismatch,
    ConvergenceViolation,
    DivisionByZero,
    PrecisionExhausted,
)

__all__ = [
    "CoefficientContext",
    "PadicScalar",
    "scalar_arith",
    "scalar_exp",
    "scalar_log",
    "valuation_int",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def valuation_int(n: int, p: int) -> int:
    """l-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def _pow(p: int, k: int) -> int:
    return p**k


@dataclass(frozen=True)
class CoefficientContext:
    prime: int
    precision: int
    trunc_degree: int = 8

    def __post_init__(self):
        if not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.prime == 2:
            raise ValueError("l = 2 is not supported")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.trunc_degree < 0:
            raise ValueError("trunc_degree must be >= 0")

    @property
    def modulus(self) -> int:
        return _pow(self.prime, self.precision)

    def scalar(self, value) -> "PadicScalar":
        return PadicScalar.coerce(value, self)

    def zero(self) -> "PadicScalar":
        return PadicScalar(self, None, 0, 0)

    def one(self) -> "PadicScalar":
        return PadicScalar(self, 0, 1, 0)

    def to_json(self) -> dict:
        return {"prime": self.prime, "precision": self.precision, "degree": self.trunc_degree}

    @classmethod
    def from_json(cls, d: dict) -> "CoefficientContext":
        return cls(int(d["prime"]), int(d["precision"]), int(d.get("degree", 8)))


class PadicScalar:
    """Element of Q_l at finite precision.

    ``v is None`` encodes zero.  Instances are immutable; do not assign to
    the slots after construction.
    """

    __slots__ = ("ctx", "v", "u", "loss")

    def __init__(self, ctx: CoefficientContext, v, u: int, loss: int = 0):
        self.ctx = ctx
        self.v = v
        self.u = u
        self.loss = loss

    # -- construction -------------------------------------------------
    @classmethod
    def from_fraction(cls, q, ctx: CoefficientContext, abs_prec=None) -> "PadicScalar":
        """Exact rational, optionally known only modulo ``l**abs_prec``."""
        q = Fraction(q)
        p, N = ctx.prime, ctx.precision
        if q == 0:
            return ctx.zero()
        num, den = q.numerator, q.denominator
        vn = valuation_int(num, p)
        vd = valuation_int(den, p)
        v = vn - vd
        num //= _pow(p, vn)
        den //= _pow(p, vd)
        rel = N
        if abs_prec is not None:
            rel = min(N, abs_prec - v)
            if rel <= 0:
                return ctx.zero()
        mod = _pow(p, rel)
        u = num * pow(den, -1, mod) % mod
        return cls(ctx, v, u, N - rel)

    @classmethod
    def coerce(cls, value, ctx: CoefficientContext) -> "PadicScalar":
        if isinstance(value, PadicScalar):
            if value.ctx != ctx:
                raise ContextMismatch("scalar built under a different context")
            return value
        if isinstance(value, (int, Fraction)):
            return cls.from_fraction(value, ctx)
        if isinstance(value, str):
            return cls.from_fraction(Fraction(value), ctx)
        raise TypeError(f"cannot coerce {type(value).__name__} to PadicScalar")

    # -- basic properties ---------------------------------------------
    @property
    def rel_prec(self) -> int:
        return self.ctx.precision - self.loss

    @property
    def abs_prec(self):
        """Exponent k such that the value is known modulo l**k (None for exact zero)."""
        if self.v is None:
            return None
        return self.v + self.ctx.precision - self.loss

    def is_zero(self) -> bool:
        return self.v is None

    def valuation(self):
        return float("inf") if self.v is None else self.v

    def is_unit(self) -> bool:
        return self.v == 0

    # -- arithmetic ---------------------------------------------------
    def _check(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch("scalars from different contexts")
            return other
        return PadicScalar.coerce(other, self.ctx)

    def __add__(self, other):
        b = self._check(other)
        a = self
        if a.v is None:
            return b
        if b.v is None:
            return a
        p, N = a.ctx.prime, a.ctx.precision
        absp = min(a.v + N - a.loss, b.v + N - b.loss)
        m = min(a.v, b.v)
        s = a.u * _pow(p, a.v - m) + b.u * _pow(p, b.v - m)
        K = absp - m
        s %= _pow(p, K)
        if s == 0:
            return PadicScalar(a.ctx, None, 0, 0)
        c = 0
        while s % p == 0:
            s //= p
            c += 1
        r = K - c
        return PadicScalar(a.ctx, m + c, s % _pow(p, r), N - r)

    __radd__ = __add__

    def __neg__(self):
        if self.v is None:
            return self
        r = self.rel_prec
        return PadicScalar(self.ctx, self.v, (-self.u) % _pow(self.ctx.prime, r), self.loss)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        b = self._check(other)
        a = self
        if a.v is None or b.v is None:
            return PadicScalar(a.ctx, None, 0, 0)
        loss = a.loss if a.loss > b.loss else b.loss
        r = a.ctx.precision - loss
        return PadicScalar(a.ctx, a.v + b.v, a.u * b.u % _pow(a.ctx.prime, r), loss)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.v is None:
            raise DivisionByZero("inverse of zero")
        r = self.rel_prec
        return PadicScalar(self.ctx, -self.v, pow(self.u, -1, _pow(self.ctx.prime, r)), self.loss)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, (PadicScalar, int, Fraction)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def reduce_abs(self, k: int) -> "PadicScalar":
        """Forget everything beyond ``l**k``."""
        if self.v is None:
            return self
        if self.v >= k:
            return self.ctx.zero()
        r = min(self.rel_prec, k - self.v)
        return PadicScalar(self.ctx, self.v, self.u % _pow(self.ctx.prime, r), self.ctx.precision - r)

    # -- conversions --------------------------------------------------
    def to_int(self) -> int:
        """Least non-negative representative of an integral value modulo l**abs_prec."""
        if self.v is None:
            return 0
        if self.v < 0:
            raise ValueError("value is not l-integral")
        return self.u * _pow(self.ctx.prime, self.v)

    def residue(self, k: int) -> int:
        """Value modulo l**k."""
        if self.v is not None and k > self.abs_prec:
            raise PrecisionExhausted(f"value only known modulo l^{self.abs_prec}")
        return self.to_int() % _pow(self.ctx.prime, k)

    def to_rational(self):
        """Smallest-height rational congruent to this value, or None."""
        if self.v is None:
            return Fraction(0)
        M = _pow(self.ctx.prime, self.rel_prec)
        q = _rational_reconstruct(self.u, M)
        if q is None:
            return None
        return q * Fraction(self.ctx.prime) ** self.v

    def to_json(self) -> dict:
        if self.v is None:
            return {"v": "inf", "u": "0", "loss": 0}
        return {"v": self.v, "u": str(self.u), "loss": self.loss}

    @classmethod
    def from_json(cls, d: dict, ctx: CoefficientContext) -> "PadicScalar":
        if d["v"] == "inf":
            return ctx.zero()
        loss = int(d.get("loss", 0))
        u = int(d["u"])
        if u % ctx.prime == 0:
            raise ValueError("unit digits divisible by the prime")
        return cls(ctx, int(d["v"]), u % _pow(ctx.prime, ctx.precision - loss), loss)

    def __repr__(self):
        if self.v is None:
            return "PadicScalar(0)"
        return f"PadicScalar({self.u}*{self.ctx.prime}^{self.v}, loss={self.loss})"


def _rational_reconstruct(u: int, M: int):
    # Wang's half-extended Euclid: a/b = u mod M with |a|, b <= sqrt(M/2)
    bound = isqrt(M // 2)
    r0, r1 = M, u % M
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    q = Fraction(r1, s1)
    if (q.numerator - u * q.denominator) % M != 0:
        return None
    return q


def scalar_arith(a: PadicScalar, b, op: str) -> PadicScalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


def _exact_value(a: PadicScalar) -> Fraction:
    if a.v is None:
        return Fraction(0)
    return Fraction(a.u) * Fraction(a.ctx.prime) ** a.v


def scalar_exp(a: PadicScalar) -> PadicScalar:
    ctx = a.ctx
    if a.v is None:
        return ctx.one()
    if a.v < 1:
        raise ConvergenceViolation("exp needs v(a) >= 1")
    p = ctx.prime
    target = min(ctx.precision, a.abs_prec)
    M = _pow(p, target)
    # a^k/k! = u^k * p^(vk - v_p(k!)) / (unit part of k!); the exponent is >= 0
    # and bounded below by k*(v - 1/(p-1)), which increases with k
    slope = Fraction(a.v) - Fraction(1, p - 1)
    total = 1
    uk = 1
    fact_unit = 1
    fact_val = 0
    k = 0
    while True:
        k += 1
        if k * slope >= target:
            break
        uk = uk * a.u % M
        j = k
        while j % p == 0:
            j //= p
            fact_val += 1
        fact_unit = fact_unit * j % M
        e = a.v * k - fact_val
        if e < target:
            total += uk * _pow(p, e) * pow(fact_unit, -1, M)
    return PadicScalar.from_fraction(total % M, ctx, abs_prec=target)


def scalar_log(u: PadicScalar) -> PadicScalar:
    ctx = u.ctx
    one = ctx.one()
    t = u - one
    if u.v != 0 or (t.v is not None and t.v < 1):
        raise ConvergenceViolation("log needs u = 1 mod l")
    if t.v is None:
        return ctx.zero()
    p = ctx.prime
    target = min(ctx.precision, u.abs_prec)
    M = _pow(p, target)
    total = 0
    tk = 1
    k = 0
    while True:
        k += 1
        tk = tk * t.u % M
        # v(T^k/k) >= k*v - log_p(k); the bound is increasing for v >= 1, p >= 3
        if k * t.v - _ilog(k, p) >= target and k > 1:
            break
        j, ev = k, 0
        while j % p == 0:
            j //= p
            ev += 1
        e = t.v * k - ev
        if e < target:
            term = tk * _pow(p, e) * pow(j, -1, M)
            total += term if k % 2 else -term
    return PadicScalar.from_fraction(total % M, ctx, abs_prec=target)


def _ilog(k: int, p: int) -> int:
    e = 0
    while p ** (e + 1) <= k:
        e += 1
    return e
