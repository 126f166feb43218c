import random
from fractions import Fraction

import pytest
import sympy

from gen import kernel_family, normalized
from padic_prep.coeff import CoefficientContext
from padic_prep.errors import CoordinateMismatch, MaximalIdeal, NoAlignment, NotLinearizable, ZeroIdeal
from padic_prep.frobenius import FrobeniusAction
from padic_prep.ideal import IdealPresentation, symbols_for
from padic_prep.linearize import (
    EvaluationMap,
    align_eigenvalues,
    eliminate,
    linearize_phi_ideal,
    membership,
    verify_evaluation,
)
from padic_prep.series import MultiSeries

CTX = CoefficientContext(5, 16, 8)


def I(*gens, n=2, exact=True):
    return IdealPresentation.parse(list(gens), CTX, n, exact=exact)


def lin(ideal, alphas):
    pi = linearize_phi_ideal(ideal, FrobeniusAction(alphas))
    assert verify_evaluation(ideal, pi)
    return pi.rational_lambdas()


def test_two_variable_lines():
    assert lin(I("x2"), (2, 2)) == [1, 0]
    assert lin(I("x1 - 3*x2"), (2, 2)) == [1, Fraction(1, 3)]


def test_non_exact_principal():
    f = MultiSeries.parse("(x1 - x2)*(1 + x1)", CTX, 2, "x")
    ideal = IdealPresentation((f,), 2, "x", "An", exact=False)
    assert lin(ideal, (2, 2)) == [1, 1]


def test_three_variables():
    assert lin(I("2*x1 - x2", "3*x1 - x3", n=3), (2, 2, 2)) == [1, 2, 3]
    assert lin(I("x3 - 2*x1", "x1", n=3), (2, 3, 2)) == [0, 1, 0]


def test_power_alignment():
    pi = linearize_phi_ideal(I("x1 - 3*x2"), FrobeniusAction((2, -2)))
    assert pi.aligned_power == 2
    assert pi.aligned_alpha == 4
    k, a = align_eigenvalues(FrobeniusAction((2, -2)), [0, 1], CTX)
    assert (k, a) == (2, 4)
    with pytest.raises(NoAlignment):
        align_eigenvalues(FrobeniusAction((2, 3)), [0, 1], CTX)


def test_negative_cases():
    with pytest.raises(MaximalIdeal):
        lin(I("x1", "x2"), (2, 2))
    with pytest.raises(NotLinearizable):
        lin(I("x1**2 - 2*x2**2"), (2, 2))
    with pytest.raises(ZeroIdeal):
        lin(I("0"), (2, 2))
    with pytest.raises(CoordinateMismatch):
        linearize_phi_ideal(IdealPresentation.parse(["t1 - t2"], CTX, 2, coords="t"), FrobeniusAction((2, 2)))


def test_membership_and_elimination():
    ideal = I("x1 - x2**2", "x3 - x1*x2", n=3)
    f = MultiSeries.parse("x3 - x2**3", CTX, 3, "x")
    assert membership(f, ideal)
    assert not membership(MultiSeries.parse("x2", CTX, 3, "x"), ideal)
    J = eliminate(ideal, 0)
    syms = symbols_for(2)
    (g,) = J.sympy_generators(syms)
    assert sympy.simplify(g / (syms[1] - syms[0] ** 3)).is_constant()
    # local ring: 1 + x1 is a unit, so (x1*(1 + x1)) contains x1
    assert membership(MultiSeries.parse("x1", CTX, 2, "x"), I("x1 + x1**2"))


def test_kernel_family_sample():
    rng = random.Random(9)
    for _ in range(8):
        n, lam, gens, alphas = kernel_family(rng)
        ideal = IdealPresentation.from_sympy(gens, symbols_for(n), CTX)
        assert lin(ideal, alphas) == normalized(lam)


def test_map_json_round_trip():
    pi = linearize_phi_ideal(I("x1 - 3*x2"), FrobeniusAction((2, 2)))
    back = EvaluationMap.from_json(pi.to_json(), CTX)
    assert back.rational_lambdas() == pi.rational_lambdas()
    assert back.aligned_power == pi.aligned_power
