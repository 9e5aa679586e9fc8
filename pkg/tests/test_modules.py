import json

import numpy as np
import pytest

from uqh.modules import (
    Character,
    InvalidPair,
    Weight,
    character,
    check_module_axioms,
    direct_sum,
    dual,
    module_from_json,
    module_to_json,
    onedim_C,
    projective_P,
    qint_X,
    shifted,
    sigma_power,
    simple_S,
    tensor,
    typical_V,
)
from uqh.ribbon import qdim
from uqh.scalar import InvalidParameter, make_field
from uqh.structure import hom_dim

RS = range(2, 8)


def constructors(r):
    ctx = make_field(r)
    mods = [simple_S(ctx, n) for n in range(r)]
    mods += [projective_P(ctx, i) for i in range(r)]
    mods += [typical_V(ctx, k * r) for k in (-1, 0, 1)]
    mods += [onedim_C(ctx, k) for k in (-1, 0, 2)]
    mods += [sigma_power(ctx, 1), shifted(projective_P(ctx, 0), 1)]
    return mods


def _weights(V):
    return sorted(int(w) for w in V.weights)


@pytest.mark.parametrize("r", RS)
def test_constructors_satisfy_axioms(r):
    for V in constructors(r):
        rep = check_module_axioms(V)
        assert all(rep.values()), (V.label, rep)


def test_trivial_simple():
    S0 = simple_S(3, 0)
    assert S0.dim == 1
    assert S0.E.is_zero() and S0.F.is_zero()
    assert int(S0.weights[0]) == 0


@pytest.mark.parametrize("r, n", [(3, 3), (3, -1), (5, 5)])
def test_simple_out_of_range(r, n):
    with pytest.raises(InvalidParameter):
        simple_S(r, n)


@pytest.mark.parametrize("r, i", [(r, i) for r in RS for i in range(r)])
def test_simple_character(r, i):
    assert character(simple_S(r, i)) == qint_X(i + 1)


def test_top_simple_is_V0_at_r3():
    assert character(simple_S(3, 2)) == qint_X(3)
    assert character(typical_V(3, 0)) == qint_X(3)
    assert hom_dim(typical_V(3, 0), simple_S(3, 2)) == 1


@pytest.mark.parametrize("r", RS)
def test_typical_character(r):
    a = Weight.symbol("α")
    V = typical_V(r, a, values={"α": 0.3 + 0.1j})
    assert character(V) == qint_X(r).shift(a)
    assert V.dim == r and V.typical


def test_typical_quantum_dimension_vanishes_numerically():
    V = typical_V(5, 0.37 + 0.2j)
    assert abs(qdim(V)) < 1e-9


def test_typicality_flag():
    assert typical_V(4, 0).typical
    assert typical_V(4, 8).typical
    assert not typical_V(4, 1).typical


def test_onedim_and_sigma():
    ctx = make_field(2)
    sigma = sigma_power(ctx, 1)
    assert _weights(sigma) == [2]
    assert _weights(dual(onedim_C(ctx, 3))) == [-6]
    assert character(onedim_C(5, -1)) == Character.monomial(-5)
    assert _weights(tensor(sigma_power(3, 1), sigma_power(3, 2))) == _weights(sigma_power(3, 3))


def test_unit_is_trivial_one_dimensional():
    I = onedim_C(4, 0)
    V = projective_P(4, 1)
    W = tensor(I, V)
    assert W.backend.equal(W.E, V.E) and W.backend.equal(W.F, V.F)
    assert character(W) == character(V)
    assert hom_dim(W, V) == 2


@pytest.mark.parametrize("r", RS)
def test_projective_character_two_forms(r):
    for i in range(r - 1):
        P = projective_P(r, i)
        assert P.dim == 2 * r
        form1 = qint_X(r) * (Character.monomial(r - i - 1) + Character.monomial(-r + i + 1))
        form2 = qint_X(i + 1).scale(2) + (Character.monomial(r) + Character.monomial(-r)) * qint_X(r - i - 1)
        assert character(P) == form1 == form2


def test_projective_P0_character_r3():
    # [3]_X (X^2 + X^-2) expanded by hand
    expected = Character({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})
    assert character(projective_P(3, 0)) == expected


def test_top_projective_is_V0():
    assert character(projective_P(5, 4)) == character(typical_V(5, 0))


def test_tensor_axioms_P1_S1():
    assert all(check_module_axioms(tensor(projective_P(4, 1), simple_S(4, 1))).values())


@pytest.mark.parametrize("seed", range(10))
def test_character_multiplicative(seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(2, 6))
    mods = constructors(r)
    V, W = (mods[int(k)] for k in rng.integers(0, len(mods), size=2))
    assert character(tensor(V, W)) == character(V) * character(W)


def test_tensor_context_mismatch():
    with pytest.raises(InvalidPair):
        tensor(simple_S(3, 1), simple_S(4, 1))


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_dual_negates_weights(r):
    for V in constructors(r):
        assert _weights(dual(V)) == sorted(-w for w in _weights(V))
        assert all(check_module_axioms(dual(V)).values())


@pytest.mark.parametrize("r", [3, 4, 5])
def test_self_duality(r):
    for n in range(r):
        assert hom_dim(dual(simple_S(r, n)), simple_S(r, n)) == 1
    for i in range(r - 1):
        P = projective_P(r, i)
        assert hom_dim(dual(P), P) == 2
        assert hom_dim(dual(dual(P)), P) == 2


def test_typical_dual_weights():
    V = typical_V(4, 4)
    assert _weights(dual(V)) == sorted(-w for w in _weights(V))


def test_direct_sum_character():
    V = direct_sum(simple_S(4, 1), projective_P(4, 0))
    assert character(V) == character(simple_S(4, 1)) + character(projective_P(4, 0))


def test_axiom_check_detects_non_nilpotent_E():
    # weights 6, 4, 2, 0 with a full E-chain: E^3 != 0 at r = 3
    r = 3
    one = ["1/1"] + ["0/1"] * 3
    data = {
        "r": r,
        "backend": "exact",
        "dim": 4,
        "weights": [{"base": b, "alpha_coeff": 0} for b in (6, 4, 2, 0)],
        "E": [[0, 1, one], [1, 2, one], [2, 3, one]],
        "F": [],
    }
    rep = check_module_axioms(module_from_json(data))
    assert not rep["E^r=0"]


@pytest.mark.parametrize("build", [
    lambda: shifted(projective_P(4, 1), -1),
    lambda: typical_V(4, 4),
    lambda: tensor(simple_S(3, 1), projective_P(3, 0)),
    lambda: dual(projective_P(5, 2)),
    lambda: typical_V(3, 0.25 + 0.5j),
])
def test_json_round_trip(build):
    V = build()
    text = json.dumps(module_to_json(V), sort_keys=True)
    W = module_from_json(json.loads(text))
    assert json.dumps(module_to_json(W), sort_keys=True) == text
    assert W.backend.equal(W.E, V.E) and W.backend.equal(W.F, V.F)
