import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from uqh.scalar import (
    InvalidParameter,
    MissingAssignment,
    UnsupportedExponent,
    cheb_T,
    make_field,
    numeric_eval,
    qint,
    qnum,
    qpow,
)

RS = range(2, 8)


@pytest.mark.parametrize("r", RS)
def test_q_is_a_2r_th_root(r):
    ctx = make_field(r)
    z = ctx.zeta_power(1)
    assert z ** (4 * r) == ctx.one
    assert z ** (2 * r) == -ctx.one
    assert qpow(ctx, r) == -ctx.one
    assert qpow(ctx, 2 * r) == ctx.one


@pytest.mark.parametrize("r, rp", [(2, 1), (3, 3), (4, 2), (5, 5), (6, 3), (7, 7)])
def test_r_prime(r, rp):
    assert make_field(r).r_prime == rp


def test_make_field_rejects_small_r():
    with pytest.raises(InvalidParameter):
        make_field(1)


def test_q_squared_is_minus_one_at_r2():
    ctx = make_field(2)
    assert qpow(ctx, 1) ** 2 == -ctx.one


def test_half_power_is_primitive_root():
    ctx = make_field(3)
    assert complex(qpow(ctx, Fraction(1, 2))) == pytest.approx(cmath.exp(2j * math.pi / 12))


def test_nonhalf_exponent_rejected():
    with pytest.raises(UnsupportedExponent):
        qpow(make_field(3), Fraction(1, 3))


@pytest.mark.parametrize("r", RS)
def test_qnum_of_r_vanishes(r):
    ctx = make_field(r)
    assert qnum(ctx, r).is_zero()
    assert qint(ctx, 0).is_zero()
    assert qint(ctx, 1) == ctx.one


def test_qint_two_at_r3():
    # [2] = sin(2π/3)/sin(π/3)
    ctx = make_field(3)
    assert qint(ctx, 2) == ctx(round(math.sin(2 * math.pi / 3) / math.sin(math.pi / 3)))


@pytest.mark.parametrize("r", RS)
@pytest.mark.parametrize("x", [Fraction(-3, 2), 0, Fraction(1, 2), 2, Fraction(7, 2)])
def test_qnum_shift_by_r(r, x):
    ctx = make_field(r)
    assert qnum(ctx, x + r) == -qnum(ctx, x)
    assert qnum(ctx, -x) == -qnum(ctx, x)


@pytest.mark.parametrize("r", RS)
def test_exact_and_numeric_agree(r):
    ctx = make_field(r)
    rng = np.random.default_rng(r)
    for two_e in rng.integers(-8 * r, 8 * r, size=1000):
        e = Fraction(int(two_e), 2)
        assert abs(complex(qpow(ctx, e)) - cmath.exp(1j * math.pi * float(e) / r)) < 1e-10


def test_inverse():
    ctx = make_field(5)
    x = qnum(ctx, 1) + qpow(ctx, Fraction(3, 2))
    assert x * x.inverse() == ctx.one
    with pytest.raises(ZeroDivisionError):
        ctx.zero.inverse()


def test_scalar_json_round_trip():
    ctx = make_field(4)
    x = qnum(ctx, Fraction(1, 2)) / 3
    assert type(x).from_json(ctx, x.to_json()) == x
    assert all("/" in s for s in x.to_json())


def test_cheb_small_cases():
    X = 0.3
    assert cheb_T(2, X) == pytest.approx(2 * X * X - 1)
    theta = math.pi / 7
    assert abs(cheb_T(3, math.cos(theta)) - math.cos(3 * theta)) < 1e-12


@pytest.mark.parametrize("r", RS)
def test_cheb_at_q(r):
    ctx = make_field(r)
    q, qi = qpow(ctx, 1), qpow(ctx, -1)
    half = ctx(Fraction(1, 2))
    assert cheb_T(r, (q + qi) * half) == (q**r + qi**r) * half


def test_cheb_matrix_shape_error():
    with pytest.raises(ValueError, match="shape"):
        cheb_T(3, np.ones((2, 3)))


def test_cheb_matrix():
    M = np.array([[0.2, 1.0], [0.0, 0.2]])
    T = cheb_T(4, M)
    # T_4 = 8x^4 - 8x^2 + 1 on a Jordan block: derivative on the off-diagonal
    assert T[0, 0] == pytest.approx(8 * 0.2**4 - 8 * 0.2**2 + 1)
    assert T[0, 1] == pytest.approx(32 * 0.2**3 - 16 * 0.2)


def test_numeric_eval():
    r = 3
    assert abs(numeric_eval(lambda qp, v: qp(v["α"]), {"α": r}, r) + 1) < 1e-12
    # 3{α}/{rα} at α = 1/2 is 3 sin(π/6)/sin(π/2)
    val = numeric_eval(lambda qp, v: 3 * (qp(v["α"]) - qp(-v["α"])) / (qp(r * v["α"]) - qp(-r * v["α"])), {"α": 0.5}, r)
    assert abs(val - 1.5) < 1e-12
    assert abs(numeric_eval(lambda qp, v: qp(v["α"] * v["β"]), {"α": 0, "β": 0}, r) - 1) < 1e-12
    with pytest.raises(MissingAssignment):
        numeric_eval(lambda qp, v: qp(v["β"]), {"α": 1}, r)
