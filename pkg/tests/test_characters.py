import pytest

from padic_prep.characters import (
    Character,
    char_from_line,
    char_inv,
    char_mul,
    eval_ideal_at_char,
    frobenius_on_char,
    sample_line_parameters,
    trivial_character,
)
from padic_prep.coeff import CoefficientContext, scalar_exp
from padic_prep.errors import ConvergenceViolation, CoordinateMismatch
from padic_prep.frobenius import FrobeniusAction
from padic_prep.ideal import IdealPresentation
from padic_prep.linearize import linearize_phi_ideal

CTX = CoefficientContext(5, 16, 8)
P_T = IdealPresentation.parse(["t1 - 3*t2 - 3*t2**2 - t2**3"], CTX, 2, coords="t", flavor="Rn")


@pytest.fixture(scope="module")
def pi():
    return linearize_phi_ideal(IdealPresentation.parse(["x1 - 3*x2"], CTX, 2), FrobeniusAction((2, 2)))


def test_values_must_be_principal_units():
    with pytest.raises(ConvergenceViolation):
        Character((CTX.scalar(2),))
    chi = Character((CTX.scalar(6), CTX.scalar(11)))
    assert char_mul(chi, char_inv(chi)) == trivial_character(CTX, 2)
    assert Character.from_json(chi.to_json(), CTX) == chi


def test_cube_relation_vanishes(pi):
    # P(t) = (1 + t1) - (1 + t2)^3, and chi_x = (exp(x), exp(x/3))
    for k in (5, 10, 15):
        chi = char_from_line(pi, CTX.scalar(k))
        assert chi.values[0] == scalar_exp(CTX.scalar(k))
        assert all(v.is_zero() for v in eval_ideal_at_char(P_T, chi))


def test_group_law_and_frobenius(pi):
    c5, c10, c15 = (char_from_line(pi, CTX.scalar(k)) for k in (5, 10, 15))
    assert c5 * c10 == c15
    assert frobenius_on_char(c5, FrobeniusAction((2, 2))) == c10


def test_sampling_is_seeded(pi):
    a = sample_line_parameters(pi, 4, seed=3)
    b = sample_line_parameters(pi, 4, seed=3)
    assert a == b
    assert all(x.v >= 1 for x in a)


def test_off_subgroup_character_does_not_vanish():
    chi = Character((CTX.scalar(6), CTX.scalar(6)))
    assert not eval_ideal_at_char(P_T, chi)[0].is_zero()


def test_x_coordinate_ideal_rejected(pi):
    ideal = IdealPresentation.parse(["x1 - 3*x2"], CTX, 2)
    with pytest.raises(CoordinateMismatch):
        eval_ideal_at_char(ideal, char_from_line(pi, CTX.scalar(5)))


def test_ideal_json_round_trip():
    back = IdealPresentation.from_json(P_T.to_json(), CTX)
    assert back.generators[0] == P_T.generators[0]
    assert (back.coords, back.flavor, back.nvars) == ("t", "Rn", 2)
