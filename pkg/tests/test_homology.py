import random
from math import comb

import pytest

from padic_prep.errors import PreconditionUnverified
from padic_prep.homology import (
    FreeComplex,
    check_window,
    cone,
    direct_sum,
    koszul_complex,
    localization_test,
    parse_poly,
    random_window_complex,
    reduce_and_cohomology,
    ring_cohomology,
    supp_equals_Supp,
)


def mult_by(text, n=2):
    return FreeComplex(n, 0, [1, 1], [[[parse_poly(text, n)]]])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_koszul_reduces_to_exterior_algebra(n):
    K = koszul_complex(n)
    prof = reduce_and_cohomology(K)
    assert [prof[-i] for i in range(n + 1)] == [comb(n, i) for i in range(n + 1)]
    ring, finite = ring_cohomology(K)
    assert finite and ring.dims == {0: 1}


def test_d_squared_checked():
    x1, x2 = parse_poly("x1", 2), parse_poly("x2", 2)
    with pytest.raises(ValueError):
        FreeComplex(2, 0, [1, 1, 1], [[[x1]], [[x2]]])


def test_window_on_koszul_and_shifts():
    w = check_window(koszul_complex(2))
    assert (w["a"], w["b"], w["window_ok"]) == (0, 0, True)
    w = check_window(koszul_complex(2).shift(3))
    assert (w["a"], w["b"]) == (-3, -3)
    assert sorted(int(k) for k in w["reduced_cohomology"]) == [-5, -4, -3]
    K = koszul_complex(2)
    w = check_window(direct_sum(K.shift(1), K.shift(-1)))
    assert (w["a"], w["b"], w["window_ok"]) == (-1, 1, True)


def test_multiplication_by_variable():
    C = mult_by("x1")
    assert reduce_and_cohomology(C).dims == {0: 1, 1: 1}
    # coker x1 = k[x2] has positive dimension
    with pytest.raises(PreconditionUnverified):
        check_window(C)


def test_inhomogeneous_differential_rejected():
    with pytest.raises(PreconditionUnverified):
        ring_cohomology(mult_by("1 + x1"))


def test_cone_requires_chain_map():
    K = koszul_complex(1)
    with pytest.raises(ValueError):
        cone(K, K, {-1: [[parse_poly("1", 1)]], 0: [[parse_poly("0", 1)]]})


def test_random_windows():
    rng = random.Random(5)
    for _ in range(10):
        assert check_window(random_window_complex(rng, rng.randint(1, 2)))["window_ok"]


def test_json_round_trip():
    K = koszul_complex(3)
    assert FreeComplex.from_json(K.to_json()).to_json() == K.to_json()


def test_supports_of_cyclic_module():
    P = [[parse_poly("x1", 2)]]
    pts = [(0, 0), (1, 0), (0, 5)]
    agree, pairs = supp_equals_Supp(P, 1, pts)
    assert agree
    assert [a for a, _ in pairs] == [True, False, True]
    assert localization_test([[parse_poly("0", 2)]], 1, (3, 3))
