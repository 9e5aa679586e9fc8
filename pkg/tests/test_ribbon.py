import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from uqh import ribbon
from uqh.modules import onedim_C, projective_P, shifted, simple_S, tensor, typical_V
from uqh.scalar import make_field, qpow
from uqh.structure import hom_space

SMALL = [2, 3, 4, 5]


def _q(r, e=1):
    return cmath.exp(1j * math.pi * e / r)


def test_braiding_with_unit_is_flip():
    V = projective_P(3, 0)
    I = onedim_C(3, 0)
    c = ribbon.braiding(I, V).matrix
    assert V.backend.equal(c, V.eye())


@pytest.mark.parametrize("r, k, l", [(3, 1, 1), (4, 1, -1), (5, 2, 1), (2, 1, 3)])
def test_braiding_of_one_dimensionals(r, k, l):
    c = ribbon.braiding(onedim_C(r, k), onedim_C(r, l)).matrix
    expected = _q(r, k * l * r * r / 2)
    assert abs(complex(c[0, 0]) - expected) < 1e-12


def test_yang_baxter_S1_cubed():
    S = simple_S(3, 1)
    assert ribbon.yang_baxter_check(S, S, S)


@pytest.mark.parametrize("r", [3, 4])
def test_yang_baxter_mixed(r):
    assert ribbon.yang_baxter_check(simple_S(r, 1), projective_P(r, 0), simple_S(r, r - 1))


@pytest.mark.parametrize("r", SMALL)
def test_braiding_is_intertwiner(r):
    for V, W in [(simple_S(r, 1), projective_P(r, 0)), (shifted(projective_P(r, 0), 1), simple_S(r, r - 1))]:
        assert ribbon.braiding(V, W).check()


@pytest.mark.parametrize("r", [3, 4, 5, 6, 7])
def test_twist_on_simples(r):
    ctx = make_field(r)
    for j in range(r):
        S = simple_S(ctx, j)
        expected = qpow(ctx, Fraction(j * j + 2 * j, 2)) * (1 if j % 2 == 0 else -1)
        assert S.backend.equal(ribbon.twist(S).matrix, S.eye() * expected)


def test_twist_on_unit():
    I = onedim_C(4, 0)
    assert I.backend.equal(ribbon.twist(I).matrix, I.eye())


@pytest.mark.parametrize("r", SMALL + [6, 7])
def test_twist_on_projectives(r):
    # the stated closed form agrees only at the two extreme indices; see the rescaled form
    for j in range(r - 1):
        P = projective_P(r, j)
        conv = ribbon.twist_convention(P)
        assert conv == ("matched" if j in (0, r - 2) else "neither")
        assert P.backend.equal(ribbon.twist(P).matrix, ribbon.twist_closed_form_rescaled(P))


@pytest.mark.parametrize("r", SMALL)
def test_zigzag_and_compatibility(r):
    for V in (simple_S(r, 1), projective_P(r, 0), shifted(projective_P(r, r - 2), -1), onedim_C(r, 1)):
        assert all(ribbon.zigzag_checks(V).values())
        assert all(ribbon.ribbon_compat_checks(V).values())


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 7])
def test_qdim_simple(r):
    for n in range(r):
        got = complex(ribbon.qdim(simple_S(r, n)))
        expected = (-1) ** n * math.sin((n + 1) * math.pi / r) / math.sin(math.pi / r)
        assert abs(got - expected) < 1e-12


def test_qdim_vanishing_cases():
    assert ribbon.qdim(simple_S(2, 1)).is_zero()
    assert ribbon.qdim(typical_V(5, 0)).is_zero()
    assert abs(ribbon.qdim(typical_V(5, 0.3 - 0.7j))) < 1e-9


@pytest.mark.parametrize("r", [3, 4])
def test_qdim_via_dualities(r):
    for n in range(r):
        S = simple_S(r, n)
        coev_r, _, _, ev_l = ribbon.dualities(S)
        val = (ev_l.matrix @ coev_r.matrix)[0, 0]
        assert val == ribbon.qdim(S)


def test_partial_traces_of_identity():
    V, W = projective_P(4, 0), simple_S(4, 2)
    VW = tensor(V, W)
    assert V.backend.equal(ribbon.ptr_right(VW.eye(), V, W), V.eye() * ribbon.qdim(W))
    assert V.backend.equal(ribbon.ptr_left(VW.eye(), V, W), W.eye() * ribbon.qdim(V))


def test_partial_trace_shape_error():
    V, W = simple_S(3, 1), simple_S(3, 2)
    with pytest.raises(ValueError, match="shape"):
        ribbon.ptr_right(V.eye(), V, W)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_open_hopf_two_routes(r):
    for V, W in [(simple_S(r, 1), projective_P(r, 0)), (typical_V(r, 0), projective_P(r, r - 2))]:
        assert W.backend.equal(ribbon.open_hopf(V, W), ribbon.open_hopf_ptr(V, W))


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 7])
def test_hopf_simple_simple(r):
    ctx = make_field(r)
    for i in range(r - 1):
        for j in range(r - 1):
            S = simple_S(ctx, j)
            lam = ribbon.hopf_SS(ctx, i, j)
            assert S.backend.equal(ribbon.open_hopf(simple_S(ctx, i), S), S.eye() * lam)
            expected = (-1) ** i * math.sin((i + 1) * (j + 1) * math.pi / r) / math.sin((j + 1) * math.pi / r)
            assert abs(complex(lam) - expected) < 1e-12


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_hopf_S1_on_projectives(r):
    ctx = make_field(r)
    q, qi = qpow(ctx, 1), qpow(ctx, -1)
    for j in range(r - 1):
        a, b = ribbon.phi_coeffs(simple_S(ctx, 1), projective_P(ctx, j))
        assert a == -(qpow(ctx, j + 1) + qpow(ctx, -j - 1))
        assert b == -((q - qi) ** 2)


def test_hopf_S1_P1_r4_field_values():
    a, b = ribbon.phi_coeffs(simple_S(4, 1), projective_P(4, 1))
    assert a.is_zero()
    assert b.rational() == 2


@pytest.mark.parametrize("r", [3, 4, 5])
def test_hopf_V0_on_projectives_rescaled(r):
    ctx = make_field(r)
    for j in range(r - 1):
        P = projective_P(ctx, j)
        got = ribbon.phi_coeffs(typical_V(ctx, 0), P)
        assert got == ribbon.hopf_V0P(ctx, j, rescaled=True)
        stated = ribbon.hopf_V0P(ctx, j)
        assert (got == stated) == (j in (0, r - 2))


@pytest.mark.parametrize("r", [3, 4, 5])
def test_hopf_projective_projective_rescaled(r):
    ctx = make_field(r)
    for i in range(r - 1):
        for j in range(r - 1):
            got = ribbon.phi_coeffs(projective_P(ctx, i), projective_P(ctx, j))
            assert got == ribbon.hopf_PP(ctx, i, j, rescaled=True)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_hopf_simple_projective_rescaled(r):
    ctx = make_field(r)
    for i in range(r - 1):
        for j in range(r - 1):
            got = ribbon.phi_coeffs(simple_S(ctx, i), projective_P(ctx, j))
            assert got == ribbon.hopf_SP(ctx, i, j, rescaled=True)


@pytest.mark.parametrize("r", [3, 4])
def test_hopf_multiplicative_in_first_slot(r):
    for i in range(r - 1):
        for j in range(r - 1):
            P = projective_P(r, j)
            lhs = ribbon.open_hopf(tensor(simple_S(r, 1), simple_S(r, i)), P)
            rhs = ribbon.open_hopf(simple_S(r, 1), P) @ ribbon.open_hopf(simple_S(r, i), P)
            assert P.backend.equal(lhs, rhs)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_hopf_oracle_on_highest_weight(r):
    for V in (simple_S(r, 1), projective_P(r, 0), onedim_C(r, 1)):
        for n in range(r):
            W = simple_S(r, n)
            assert ribbon.open_hopf(V, W)[0, 0] == ribbon.hopf_oracle(V, n)


@pytest.mark.parametrize("alpha", [0.31 + 0.2j, -1.4 + 0.05j])
def test_hopf_numeric_typical(alpha):
    r = 3
    V = typical_V(r, alpha)
    for i in range(r - 1):
        S = simple_S(r, i, "numeric")
        phi = np.asarray(ribbon.open_hopf(S, V))
        lam = ribbon.hopf_SV(r, i, alpha)
        assert np.allclose(phi, lam * np.eye(r), atol=1e-8)
        expected = (_q(r, (i + 1) * alpha) - _q(r, -(i + 1) * alpha)) / (_q(r, alpha) - _q(r, -alpha))
        assert abs(lam - expected) < 1e-10
        P = projective_P(r, i, "numeric")
        assert np.allclose(np.asarray(ribbon.open_hopf(P, V)), ribbon.hopf_PV(r, i, alpha) * np.eye(r), atol=1e-8)


def test_hopf_oracle_typical_pair():
    from uqh.modules import Weight

    r, a, b = 4, 0.27 + 0.11j, -0.63 + 0.4j
    V = typical_V(r, Weight.symbol("β"), values={"β": b})
    W = typical_V(r, a)
    phi = np.asarray(ribbon.open_hopf(V, W))
    expected = _q(r, a * b) * (_q(r, r * a) - _q(r, -r * a)) / (_q(r, a) - _q(r, -a))
    assert abs(phi[0, 0] - expected) < 1e-8
    assert abs(ribbon.hopf_VV(r, b, a) - expected) < 1e-8


@pytest.mark.parametrize("r", [3, 4])
def test_ribbon_identity(r):
    pool = [simple_S(r, 1), projective_P(r, 0), onedim_C(r, 1)]
    for V in pool:
        for W in pool:
            assert ribbon.ribbon_identity_check(V, W)


def test_braiding_naturality():
    r = 3
    V, Vp, W = simple_S(r, 2), typical_V(r, 0), projective_P(r, 0)
    (f,) = hom_space(V, Vp)
    lhs = ribbon.braiding(Vp, W).matrix @ f.kron(W.eye())
    rhs = W.eye().kron(f) @ ribbon.braiding(V, W).matrix
    assert V.backend.equal(lhs, rhs)


def test_casimir_commutes_with_double_braiding():
    from uqh.structure import casimir

    V, W = simple_S(4, 1), projective_P(4, 1)
    C = casimir(tensor(V, W))
    M = ribbon.double_braiding(V, W)
    assert V.backend.equal(C @ M, M @ C)
