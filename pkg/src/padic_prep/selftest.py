"""Quick invariant suite behind ``padic-prep selftest``."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .coeff import CoefficientContext, PadicScalar, scalar_exp, scalar_log
from .series import MultiSeries, change_coords


def _rand_series(rng, ctx, n, coords="t", terms=6, deg=4, min_order=0):
    out = {}
    for _ in range(terms):
        b = tuple(rng.randint(0, deg) for _ in range(n))
        if sum(b) >= min_order:
            out[b] = Fraction(rng.randint(-20, 20), rng.choice([1, 1, 2, 3]))
    return MultiSeries(ctx, n, coords, out)


def check_scalars(rng) -> bool:
    ctx = CoefficientContext(5, 12, 8)
    for _ in range(20):
        x = PadicScalar.from_fraction(5 * rng.randint(1, 10**6), ctx)
        if scalar_log(scalar_exp(x)) != x:
            return False
        a = ctx.scalar(rng.randint(1, 10**6) * rng.choice([1, 5]))
        if not (a * a.inverse() == 1):
            return False
    return True


def check_coords(rng) -> bool:
    ctx = CoefficientContext(5, 16, 6)
    for _ in range(5):
        f = _rand_series(rng, ctx, 2)
        if change_coords(change_coords(f, "x"), "t") != f:
            return False
    return True


def check_division(rng) -> bool:
    from .weierstrass import weierstrass_divide

    ctx = CoefficientContext(5, 16, 6)
    for _ in range(10):
        F = _rand_series(rng, ctx, 2, min_order=1) + MultiSeries.variable(0, ctx, 2) ** rng.randint(1, 3)
        G = _rand_series(rng, ctx, 2)
        a = weierstrass_divide(G, F)
        b = weierstrass_divide(G, F, "monomial-desc")
        if a.quotient != b.quotient or a.remainder() != b.remainder():
            return False
        if a.quotient * F + a.remainder() != G:
            return False
    return True


def check_frobenius(rng) -> bool:
    from .frobenius import FrobeniusAction, apply_phi

    ctx = CoefficientContext(5, 16, 6)
    phi = FrobeniusAction((2, 7))
    for _ in range(5):
        f = _rand_series(rng, ctx, 2)
        if change_coords(apply_phi(f, phi), "x") != apply_phi(change_coords(f, "x"), phi):
            return False
    return True


def check_linearize(rng) -> bool:
    from .frobenius import FrobeniusAction
    from .ideal import IdealPresentation
    from .linearize import linearize_phi_ideal, verify_evaluation

    ctx = CoefficientContext(5, 16, 8)
    I = IdealPresentation.parse(["2*x1 - x2", "3*x1 - x3"], ctx, 3)
    pi = linearize_phi_ideal(I, FrobeniusAction((2, 2, 2)))
    return verify_evaluation(I, pi) and pi.rational_lambdas() == [1, 2, 3]


def check_koszul(rng) -> bool:
    from math import comb

    from .homology import koszul_complex, reduce_and_cohomology

    for n in range(1, 4):
        prof = reduce_and_cohomology(koszul_complex(n))
        if [prof[-i] for i in range(n + 1)] != [comb(n, i) for i in range(n + 1)]:
            return False
    return True


CHECKS: List[Tuple[str, Callable]] = [
    ("scalars", check_scalars),
    ("coordinates", check_coords),
    ("division", check_division),
    ("frobenius", check_frobenius),
    ("linearize", check_linearize),
    ("koszul", check_koszul),
]


def run_selftest(seed: int = 0) -> Dict:
    results = {}
    for name, fn in CHECKS:
        rng = random.Random(seed)
        try:
            results[name] = bool(fn(rng))
        except Exception as e:  # a crash is a failure, reported by name
            results[name] = f"error: {type(e).__name__}: {e}"
    return {"checks": results, "ok": all(v is True for v in results.values())}
