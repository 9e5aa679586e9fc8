import cmath
import math

import numpy as np
import pytest

from uqh import decomp
from uqh.decomp import Decomposition, decompose, multiplicity
from uqh.modules import Character, Weight, dual, onedim_C, projective_P, simple_S, tensor, typical_V
from uqh.structure import PreconditionViolation, casimir


def test_multiplicity_examples():
    for r in (3, 4, 5):
        for j in range(r - 1):
            M = tensor(typical_V(r, 0), simple_S(r, r - j - 1))
            assert multiplicity(("P", j, 0), M) == 1
        assert multiplicity(("S", 0, 0), tensor(simple_S(r, 1), simple_S(r, 1))) == 1
    assert multiplicity(("P", 0, 0), simple_S(3, 0)) == 0


def test_multiplicity_rejects_bad_label():
    from uqh.scalar import InvalidParameter

    with pytest.raises(InvalidParameter):
        multiplicity(("Q", 0, 0), simple_S(3, 0))


@pytest.mark.parametrize("mod, expected", [
    (lambda: tensor(simple_S(3, 1), simple_S(3, 1)), {("S", 0, 0): 1, ("P", 2, 0): 1}),
    (lambda: tensor(simple_S(3, 2), simple_S(3, 2)), {("P", 0, 0): 1, ("P", 2, 0): 1}),
    (lambda: tensor(projective_P(3, 0), simple_S(3, 1)), {("P", 1, 0): 1, ("P", 2, 1): 1, ("P", 2, -1): 1}),
])
@pytest.mark.parametrize("method", ["fast", "slow"])
def test_small_decompositions(mod, expected, method):
    assert decompose(mod(), method) == Decomposition(3, expected)


def test_labels_of_S2_squared():
    assert decompose(tensor(simple_S(3, 2), simple_S(3, 2))).labels() == ["P_0", "P_2"]


@pytest.mark.parametrize("r", [2, 3, 4, 5])
@pytest.mark.parametrize("which", decomp.TABLES)
def test_tables(r, which):
    entries = decomp.verify_tables(r, which)
    bad = [e for e in entries if e["status"] != "pass"]
    assert not bad, bad


def test_peel_negative_coefficient():
    with pytest.raises(decomp.NotInSubcategory):
        decomp.peel(Character({1: 1}), 3)


@pytest.mark.parametrize("seed", range(12))
def test_fast_and_slow_agree(seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(2, 6))
    pool = [simple_S(r, n) for n in range(r)] + [projective_P(r, i) for i in range(r - 1)] + [onedim_C(r, 1)]
    V, W = (pool[int(k)] for k in rng.integers(0, len(pool), size=2))
    M = tensor(V, W)
    fast = decompose(M, "fast")
    assert fast == decompose(M, "slow")
    assert fast.dim() == M.dim
    assert fast.character() == M.character()
    assert decompose(dual(M)) == fast.dual()
    proj = fast.projective_part().character()
    if proj:
        assert _divisible_by_qint(proj, r)


def _divisible_by_qint(char, r):
    """Laurent division by [r]_X = X^{1-r}(1 + X^2 + ... + X^{2r-2})."""
    ws = sorted(int(w) for w in char.terms)
    lo = ws[0]
    coeffs = [0] * ((ws[-1] - lo) // 2 + 1)
    for w, m in char.terms.items():
        coeffs[(int(w) - lo) // 2] = m
    _, rem = np.polydiv(coeffs[::-1], [1] * r)
    return np.allclose(rem, 0)


def test_typical_rule_example():
    rep = decomp.typical_tensor_rule(3, 0.3, 0.45)
    assert rep["character"] and rep["casimir_spectrum"] and rep["semisimple"] and rep["decomposition"]
    # Casimir values of V_{0.75+k}, k in {-2, 0, 2}, computed independently
    q = lambda e: cmath.exp(1j * math.pi * e / 3)  # noqa: E731
    a = Weight.symbol("α")
    b = Weight.symbol("β")
    vals = {"α": 0.3, "β": 0.45}
    M = tensor(typical_V(3, a, values=vals), typical_V(3, b, values=vals))
    ev = np.linalg.eigvals(np.asarray(casimir(M)))
    for k in (-2, 0, 2):
        lam = 0.75 + k
        c = (q(lam + 3) + q(-lam - 3)) / (q(1) - q(-1)) ** 2
        assert np.sum(np.abs(ev - c) < 1e-8) == 3


def test_typical_rule_resonant_rejected():
    with pytest.raises(PreconditionViolation):
        decomp.typical_tensor_rule(3, 0.5, 0.5)


def test_generic_times_simple_is_semisimple():
    r = 4
    V = tensor(typical_V(r, 0.37 + 0.21j), simple_S(r, 2, "numeric"))
    C = np.asarray(casimir(V))
    ev = np.linalg.eigvals(C)
    distinct = []
    for z in ev:
        if all(abs(z - w) > 1e-6 for w in distinct):
            distinct.append(z)
    P = np.eye(C.shape[0], dtype=complex)
    for z in distinct:
        P = P @ (C - z * np.eye(C.shape[0]))
    assert len(distinct) == 3
    assert np.max(np.abs(P)) < 1e-6


def test_valpha_vminusalpha_character():
    for r in (2, 3, 5):
        (entry,) = decomp.verify_tables(r, "ValphaVmalpha")
        assert entry["status"] == "pass"


def test_decomposition_json():
    D = decompose(tensor(projective_P(3, 0), simple_S(3, 1)))
    out = D.to_json()
    assert {e["label"] for e in out} == {"P_1", "C^H_3⊗P_2", "C^H_-3⊗P_2"}
    assert sum(e["mult"] for e in out) == 3
