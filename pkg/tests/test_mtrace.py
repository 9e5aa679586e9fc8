import math

import numpy as np
import pytest

from uqh import mtrace
from uqh.modules import direct_sum, projective_P, shifted, simple_S, tensor, typical_V
from uqh.ribbon import open_hopf, twist
from uqh.scalar import InvalidParameter, make_field, qint
from uqh.structure import nilpotent_x

RS = range(2, 8)


@pytest.mark.parametrize("r", RS)
def test_mdim_V0(r):
    prod, ratio = mtrace.mdim_typical_forms(0, r)
    assert prod == ratio == make_field(r)((-1) ** (r - 1))


def test_mdim_typical_half_at_r3():
    # 3 sin(π/6) / sin(π/2)
    d = mtrace.mdim_typical(0.5, 3)
    assert abs(d - 3 * math.sin(math.pi / 6) / math.sin(math.pi / 2)) < 1e-12


@pytest.mark.parametrize("r", RS)
def test_mdim_typical_forms_agree(r):
    rng = np.random.default_rng(100 + r)
    for z in rng.uniform(-3, 3, size=100) + 1j * rng.uniform(-1, 1, size=100):
        a, b = mtrace.mdim_typical_forms(complex(z), r)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


@pytest.mark.parametrize("r, k", [(3, 1), (4, -1), (5, 2)])
def test_mdim_typical_exact_forms_agree_on_rZ(r, k):
    prod, ratio = mtrace.mdim_typical_forms(k * r, r)
    assert prod == ratio


@pytest.mark.parametrize("alpha, r", [(1, 3), (2, 4), (1.0, 5)])
def test_mdim_typical_domain_error(alpha, r):
    with pytest.raises(InvalidParameter, match="domain-error"):
        mtrace.mdim_typical(alpha, r)


def test_mdim_P_small_values():
    # -2cos(π/3), +2cos(2π/3), -2cos(π/2)
    assert mtrace.mdim_P(0, 3).rational() == -1
    assert mtrace.mdim_P(1, 3).rational() == -1
    assert mtrace.mdim_P(0, 2).is_zero()
    with pytest.raises(InvalidParameter):
        mtrace.mdim_P(2, 3)


@pytest.mark.parametrize("r", RS)
def test_mdim_P_is_trace_of_identity(r):
    for j in range(r - 1):
        P = projective_P(r, j)
        assert mtrace.mtrace(P, P.eye()) == mtrace.mdim_P(j, r)


@pytest.mark.parametrize("r", RS)
def test_consistency_chain(r):
    assert all(mtrace.consistency_chain(j, r) for j in range(r - 1))


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
def test_trace_of_x_matches_independent_route(r):
    for j in range(r - 1):
        P = projective_P(r, j)
        via_V0 = mtrace.x_trace_via_V0(j, r)
        assert mtrace.mtrace(P, nilpotent_x(P)) == via_V0 == mtrace.x_trace(j, r)


@pytest.mark.parametrize("r", RS)
def test_stated_trace_of_x_agrees_only_at_extreme_indices(r):
    ctx = make_field(r)
    for j in range(r - 1):
        same = mtrace.x_trace(j, r) == mtrace.x_trace_stated(j, r)
        assert same == (qint(ctx, j + 1) ** 2 == ctx.one)
        if j in (0, r - 2):
            assert same


@pytest.mark.parametrize("r", [3, 4, 5])
def test_trace_on_split_module(r):
    j = 0
    M = tensor(typical_V(r, 0), simple_S(r, r - j - 1))
    d0 = mtrace.mdim_typical(0, r)
    ctx = make_field(r)
    expected = d0 * (qint(ctx, r - j) - qint(ctx, r - j - 2)) + d0 * qint(ctx, r - j - 2)
    assert mtrace.mtrace(M, M.eye()) == expected


def test_trace_rejects_non_projective():
    with pytest.raises(mtrace.NotInIdeal):
        mtrace.mtrace(simple_S(3, 1), simple_S(3, 1).eye())


def test_trace_shape_error():
    P = projective_P(3, 0)
    with pytest.raises(ValueError, match="shape"):
        mtrace.mtrace(P, simple_S(3, 1).eye())


@pytest.mark.parametrize("U, W, r", [
    (lambda r: projective_P(r, 0), lambda r: simple_S(r, 1), 3),
    (lambda r: typical_V(r, 0), lambda r: projective_P(r, 1), 4),
    (lambda r: shifted(projective_P(r, 0), 1), lambda r: simple_S(r, 1), 3),
])
def test_trace_axioms(U, W, r):
    rep = mtrace.trace_axiom_checks(U(r), W(r), samples=25, seed=1)
    assert rep["right"] and rep["left"], rep


def test_trace_axioms_numeric_typical():
    r = 3
    V = typical_V(r, 0.4 + 0.3j)
    rep = mtrace.trace_axiom_checks(V, simple_S(r, 1, "numeric"), samples=5, seed=2)
    assert rep["right"] and rep["left"]


@pytest.mark.parametrize("r", [3, 4])
def test_cyclicity(r):
    V = direct_sum(projective_P(r, 0), projective_P(r, 0))
    U = tensor(typical_V(r, 0), simple_S(r, r - 1))
    assert mtrace.cyclicity_checks(V, U, samples=20, seed=3)["pass"]


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_phicom_holds_without_extra_factor(r):
    for j in range(r - 1):
        rep = mtrace.phicom_check(projective_P(r, j))
        assert rep["pass"]
        assert not rep["pass_with_factor_r"] or rep["lhs"].is_zero()


def test_pairing_ranks():
    assert mtrace.pairing_rank(projective_P(3, 0), projective_P(3, 0))["rank"] == 2
    for i in range(3):
        assert mtrace.pairing_rank(projective_P(4, i), simple_S(4, i))["rank"] == 1
    empty = mtrace.pairing_rank(projective_P(3, 0), simple_S(3, 1))
    assert empty["rank"] == 0 and empty["full"]


@pytest.mark.parametrize("r", [3, 4, 5])
def test_pairing_full_on_tensor_products(r):
    for i in range(r - 1):
        assert mtrace.pairing_rank(projective_P(r, i), tensor(simple_S(r, 1), simple_S(r, i)))["full"]


@pytest.mark.parametrize("lam", [2, -3])
def test_normalization_rescales(lam):
    r = 4
    base = mtrace.TraceContext(r)
    scaled = mtrace.TraceContext(r, normalization=base.normalization * lam)
    P = projective_P(r, 1)
    for f in (P.eye(), nilpotent_x(P), twist(P).matrix):
        assert mtrace.mtrace(P, f, scaled) == mtrace.mtrace(P, f, base) * lam
    a, b = mtrace.mdim_typical_forms(0.2 + 0.1j, r, scaled)
    c, _ = mtrace.mdim_typical_forms(0.2 + 0.1j, r, base)
    assert abs(a - lam * c) < 1e-9


@pytest.mark.parametrize("r", RS)
def test_twist_trace_closed_form(r):
    for j in range(r - 1):
        assert mtrace.twist_trace_check(j, r)["pass"]


def test_trace_of_hopf_on_projective_matches_typical_side():
    r = 3
    P = projective_P(r, 0)
    V0 = typical_V(r, 0)
    lhs = mtrace.mtrace(P, open_hopf(V0, P))
    rhs = mtrace.mtrace(V0, open_hopf(P, V0))
    assert lhs == rhs
