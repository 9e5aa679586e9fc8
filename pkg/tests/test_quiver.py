from collections import Counter

import pytest

from uqh import quiver
from uqh.quiver import GradedDimension, algebra_A, algebra_B, algebra_C, graded_trace, product
from uqh.scalar import InvalidParameter


def _e(alg, name):
    return {alg.index(name): 1}


def test_algebra_A_shape():
    A = algebra_A()
    assert A.dim == 8
    assert A.graded_dimension() == GradedDimension({-1: 2, 0: 4, 1: 2})
    assert A.check_associative() and A.check_unit() and A.check_grading()


def test_algebra_A_relations():
    A = algebra_A()
    m = lambda u, v: A.mul(_e(A, u), _e(A, v))  # noqa: E731
    assert m("b+", "a-") == _e(A, "x")
    assert m("a+", "b-") == _e(A, "y")
    assert m("x", "y") == {} and m("y", "x") == {}
    assert m("x", "x") == {}


def test_algebra_B_relations():
    B = algebra_B()
    assert B.dim == 4
    ap, am = _e(B, "a+"), _e(B, "a-")
    total = Counter(B.mul(ap, am))
    total.update(B.mul(am, ap))
    assert all(v == 0 for v in total.values())
    assert B.check_associative() and B.check_unit()


def test_invariants_distinguish_models():
    inv = {k: f().invariants() for k, f in (("A", algebra_A), ("B", algebra_B), ("C", algebra_C))}
    assert len({repr(v) for v in inv.values()}) == 3


@pytest.mark.parametrize("r", range(2, 9))
def test_compositions(r):
    for i, ok in quiver.composition_checks(r).items():
        assert all(ok.values()), (i, ok)


@pytest.mark.parametrize("r", range(2, 9))
def test_end_sigma_is_an_algebra(r):
    for parity in (0, 1):
        alg = quiver.end_sigma(r, parity)
        assert alg.check_associative() and alg.check_unit() and alg.check_grading()


def test_end_sigma_r3_even():
    alg = quiver.end_sigma(3, 0)
    assert alg.graded_dimension() == GradedDimension({-1: 2, 0: 5, 1: 2})


def test_end_sigma_bad_parity():
    with pytest.raises(InvalidParameter):
        quiver.end_sigma(3, 2)


@pytest.mark.parametrize("r, expected", [
    (5, {0: {"A": 2, "C": 1}, 1: {"A": 2, "C": 1}}),
    (6, {0: {"A": 1, "B": 1}, 1: {"A": 1, "C": 1}}),
    (4, {0: {"A": 1}, 1: {"B": 1, "C": 1}}),
    (3, {0: {"A": 1, "C": 1}, 1: {"A": 1, "C": 1}}),
    (7, {0: {"A": 3, "C": 1}, 1: {"A": 3, "C": 1}}),
    (8, {0: {"A": 2}, 1: {"A": 1, "B": 1, "C": 1}}),
])
def test_case_analysis(r, expected):
    rep = quiver.compare_endsigma(r)
    for parity in (0, 1):
        assert rep[parity]["pass"], rep[parity]
        assert rep[parity]["found"] == expected[parity]


@pytest.mark.parametrize("z, dim", [(2, 2), (-3, 2), (0.5 + 1j, 2), (1, 3), (-1, 3)])
@pytest.mark.parametrize("sup", [False, True])
def test_trace_of_A(z, dim, sup):
    assert graded_trace(algebra_A(), z, sup) == dim


def test_super_trace_of_B():
    B = algebra_B()
    assert graded_trace(B, 1, True) == GradedDimension({-1: 1, 0: 2, 1: 1})


def test_trace_zero_parameter():
    with pytest.raises(InvalidParameter):
        graded_trace(algebra_A(), 0)


@pytest.mark.parametrize("z", [1, -1, 2])
@pytest.mark.parametrize("sup", [False, True])
def test_trace_additive_over_products(z, sup):
    A, B, C = algebra_A(), algebra_B(), algebra_C()
    lhs = graded_trace(product(A, B, C), z, sup)
    assert lhs == graded_trace(A, z, sup) + graded_trace(B, z, sup) + graded_trace(C, z, sup)


@pytest.mark.parametrize("r, z, sup, parity, expected", [
    (5, 2, False, 0, 5),
    (5, 2, False, 1, 5),
    (5, 1, False, 0, 7),
    (7, -1, False, 1, 10),
    (6, 1, True, 0, GradedDimension({-1: 1, 0: 5, 1: 1})),
    (6, 1, True, 1, 4),
    (6, 3, True, 0, 3),
    (10, 1, True, 0, GradedDimension({-1: 1, 0: 8, 1: 1})),
])
def test_trace_closed_forms(r, z, sup, parity, expected):
    alg = quiver.end_sigma(r, parity)
    assert graded_trace(alg, z, sup) == expected


@pytest.mark.parametrize("r", [3, 5, 6])
def test_trace_report(r):
    for z in (2, 1, -1):
        for key, entry in quiver.graded_trace_report(r, z).items():
            assert entry["pass"], (key, entry)


def test_nonzero_degree_vanishes_unless_root_of_unity():
    # with z = 3 only degree-0 classes survive
    for parity in (0, 1):
        d = graded_trace(quiver.end_sigma(6, parity), 3, True)
        assert set(d.dims) <= {0}


def test_graded_dimension_str():
    assert str(GradedDimension({-1: 1, 0: 5, 1: 1})) == "s^-1 + 5 + s"
    assert str(GradedDimension({-1: 2, 0: 4, 1: 2})) == "2s^-1 + 4 + 2s"
