import random
from fractions import Fraction
from math import comb

import pytest

from gen import rand_series, rand_unit
from padic_prep.coeff import CoefficientContext, valuation_int
from padic_prep.errors import NotAUnit, NotEigenPrincipal, PrecisionExhausted
from padic_prep.frobenius import (
    FrobeniusAction,
    apply_phi,
    homogenize_eigen,
    is_phi_stable,
    trivialization_loss,
    trivialize_unit,
)
from padic_prep.ideal import IdealPresentation
from padic_prep.series import MultiSeries, change_coords, series_invert

CTX = CoefficientContext(5, 16, 8)


def X(text, n=2):
    return MultiSeries.parse(text, CTX, n, "x")


def test_phi_on_t_is_binomial():
    t = MultiSeries.parse("t", CTX, 1)
    # (1+t)^6 - 1
    want = MultiSeries(CTX, 1, "t", {(k,): comb(6, k) for k in range(1, 7)})
    assert apply_phi(t, FrobeniusAction((6,))) == want
    assert apply_phi(t, FrobeniusAction((2,))) == MultiSeries.parse("2*t + t**2", CTX, 1)


def test_phi_intertwines_coordinates():
    rng = random.Random(0)
    phi = FrobeniusAction((2, Fraction(1, 3)))
    for _ in range(5):
        f = rand_series(rng, CTX, 2)
        assert change_coords(apply_phi(f, phi), "x") == apply_phi(change_coords(f, "x"), phi)


def test_action_checks():
    with pytest.raises(NotAUnit):
        FrobeniusAction((5, 2)).check(CTX)
    with pytest.raises(PrecisionExhausted):
        FrobeniusAction((-1,)).check(CTX)
    phi = FrobeniusAction((2, -2))
    assert phi.with_power(2).effective() == (4, 4)
    assert FrobeniusAction.from_json(phi.to_json()) == phi


def test_homogenize_examples():
    res = homogenize_eigen(X("x1*(1 + x2)"), FrobeniusAction((6, 6)))
    assert res.g == X("x1")
    assert res.c == 6
    # h is determined up to degree D - k
    assert (res.h * X("1 + x2")).truncate(7) == 1
    expected = sum(1 + valuation_int(nu, 5) for nu in range(1, 8))
    assert res.loss == expected == trivialization_loss(FrobeniusAction((6, 6)), CTX, 7)
    res = homogenize_eigen(X("(x1 - x2)*(1 + x1)"), FrobeniusAction((2, 2)))
    assert res.g == X("x1 - x2")
    assert homogenize_eigen(X("x1*x2"), FrobeniusAction((2, 3))).c == 6


def test_homogenize_rejects_mixed_eigenvalues():
    with pytest.raises(NotEigenPrincipal):
        homogenize_eigen(X("x1 + x2"), FrobeniusAction((2, 3)))


def test_trivialize_random_units():
    rng = random.Random(1)
    phi = FrobeniusAction((2, 7))
    for _ in range(10):
        h = rand_unit(rng, CTX, 2, "x")
        h = h.scale(h.constant_term().inverse())
        u = h.scale(3) * series_invert(apply_phi(h, phi))
        c, h2 = trivialize_unit(u, phi)
        assert c == 3
        assert h2 == h


def test_phi_stability():
    phi = FrobeniusAction((2, 2))
    assert is_phi_stable(IdealPresentation.parse(["x1 - 3*x2"], CTX, 2), phi)
    assert not is_phi_stable(IdealPresentation.parse(["x1 - x2**2"], CTX, 2), phi)
