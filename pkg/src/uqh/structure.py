"""Casimir element, dominant vectors and the intertwiner solver."""

from __future__ import annotations

import numpy as np

from .linalg import nullspace_rows
from .modules import Weight, WeightModule, gamma
from .scalar import InvalidParameter, cheb_T, nqpow, qnum, qpow

__all__ = [
    "PreconditionViolation",
    "casimir",
    "casimir_alt",
    "casimir_value",
    "chebyshev_identity_check",
    "power_identity_check",
    "apply",
    "dominant_vectors",
    "submodule_from_dominant",
    "cyclic_words",
    "map_from_generator",
    "hom_space",
    "hom_dim",
    "is_intertwiner",
    "endo_coeffs",
    "nilpotent_x",
    "p_index",
]


class PreconditionViolation(ValueError):
    """An input does not satisfy the documented precondition."""


def _qnum1_sq_inv(V):
    B = V.backend
    if B.exact:
        return 1 / (qnum(V.ctx, 1) ** 2)
    return 1 / (nqpow(V.r, 1) - nqpow(V.r, -1)) ** 2


def casimir(V: WeightModule):
    """C = FE + (Kq + K^{-1}q^{-1}) / {1}^2."""
    B = V.backend
    diag = V.K() * B.qpow(1) + V.K(-1) * B.qpow(-1)
    return V.F @ V.E + diag * _qnum1_sq_inv(V)


def casimir_alt(V: WeightModule):
    """Same element written as EF + (Kq^{-1} + K^{-1}q) / {1}^2."""
    B = V.backend
    diag = V.K() * B.qpow(-1) + V.K(-1) * B.qpow(1)
    return V.E @ V.F + diag * _qnum1_sq_inv(V)


def casimir_value(ctx_or_backend, i: int, k: int = 0):
    """Eigenvalue of C on S_i ⊗ C^H_{kr}: (-1)^k (q^{i+1}+q^{-i-1})/{1}^2."""
    ctx = getattr(ctx_or_backend, "ctx", ctx_or_backend)
    c = (qpow(ctx, i + 1) + qpow(ctx, -i - 1)) / qnum(ctx, 1) ** 2
    return -c if k % 2 else c


def chebyshev_identity_check(V: WeightModule) -> bool:
    """T_r({1}^2 C / 2) + (K^r + K^{-r}) / 2 vanishes on V."""
    B = V.backend
    r = V.r
    half = B.scalar(1) / 2 if B.exact else 0.5
    if B.exact:
        s = qnum(V.ctx, 1) ** 2
    else:
        s = (nqpow(r, 1) - nqpow(r, -1)) ** 2
    T = cheb_T(r, casimir(V) * (s * half))
    return B.is_zero(T + (V.K(r) + V.K(-r)) * half)


def power_identity_check(V: WeightModule, k: int) -> bool:
    """prod_{i<k} (C - (q^{-2i-1}K + q^{2i+1}K^{-1})/{1}^2) equals E^k F^k."""
    if not 0 <= k <= V.r:
        raise InvalidParameter("k must lie in 0..r")
    B = V.backend
    C = casimir(V)
    inv = _qnum1_sq_inv(V)
    K, Ki = V.K(), V.K(-1)
    lhs = V.eye()
    rhs = V.eye()
    for i in range(k):
        lhs = lhs @ (C - (K * B.qpow(-2 * i - 1) + Ki * B.qpow(2 * i + 1)) * inv)
        rhs = V.E @ rhs
    for _ in range(k):
        rhs = rhs @ V.F
    return B.is_zero(lhs - rhs)


# -- vectors ---------------------------------------------------------------------------


def apply(V: WeightModule, M, vec: dict) -> dict:
    """Apply a module matrix to a sparse vector {index: value}."""
    B = V.backend
    if B.exact:
        return M.apply(vec)
    x = np.zeros(M.shape[1], dtype=complex)
    for i, v in vec.items():
        x[i] = v
    y = np.asarray(M) @ x
    return {i: complex(y[i]) for i in np.nonzero(np.abs(y) > 1e-14)[0]}


def _apply_word(V, word, vec):
    for ch in reversed(word):
        vec = apply(V, V.E if ch == "E" else V.F, vec)
    return vec


def _is_zero_vec(B, vec):
    return all(B.is_zero_scalar(v) for v in vec.values())


def dominant_vectors(V: WeightModule, w) -> list:
    """Basis of {v of weight w : (FE)^2 v = 0} as sparse vectors."""
    B = V.backend
    w = Weight.of(w)
    idx = [i for i, x in enumerate(V.weights) if x == w]
    if not idx:
        return []
    FE = V.F @ V.E
    M = FE @ FE
    sub = _columns(B, M, idx)
    vecs = _kernel(B, sub, len(idx))
    return [{idx[k]: v for k, v in vec.items()} for vec in vecs]


def _columns(B, M, idx):
    """Row list of M restricted to columns idx (as dict rows keyed 0..len(idx)-1)."""
    if B.exact:
        pos = {c: k for k, c in enumerate(idx)}
        rows = []
        for row in M.rows.values():
            new = {pos[c]: v for c, v in row.items() if c in pos}
            if new:
                rows.append(new)
        return rows
    return np.asarray(M)[:, idx]


def _kernel(B, rows, n):
    if B.exact:
        return nullspace_rows(rows, n, B.one)
    arr = np.asarray(rows)
    if arr.size == 0:
        return [{k: 1.0 + 0j} for k in range(n)]
    return B.nullspace(arr)


def submodule_from_dominant(V: WeightModule, v: dict, i: int):
    """The 2r vectors generated by a dominant vector of weight i.

    Returns ``(vectors, report)``; ``vectors`` follows the basis order of
    P_i and ``report`` maps each relation group to a bool.
    """
    B = V.backend
    r = V.r
    if not 0 <= i <= r - 2:
        raise InvalidParameter("weight of a dominant generator must lie in 0..r-2")
    for k in v:
        if V.weight_value(k) != i:
            raise PreconditionViolation("generator is not a weight vector of weight i")
    FE = lambda x: apply(V, V.F, apply(V, V.E, x))  # noqa: E731
    if not _is_zero_vec(B, FE(FE(v))):
        raise PreconditionViolation("vector is not dominant")
    j = r - 2 - i
    E = lambda x: apply(V, V.E, x)  # noqa: E731
    F = lambda x: apply(V, V.F, x)  # noqa: E731
    vH = [v]
    for _ in range(i):
        vH.append(F(vH[-1]))
    vR0 = E(v)
    vR = [vR0]
    for _ in range(j):
        vR.append(E(vR[-1]))
    vS = [F(vR0)]
    for _ in range(i):
        vS.append(F(vS[-1]))
    vL = [F(vH[-1])]
    for _ in range(j):
        vL.append(F(vL[-1]))
    # basis order runs from the top weight of each string
    vectors = vH + vR[::-1] + vL + vS

    def eq(a, b):
        keys = set(a) | set(b)
        z = B.zero
        return all(B.is_zero_scalar(a.get(k, z) - b.get(k, z)) for k in keys)

    def lin(*terms):
        out = {}
        for c, x in terms:
            for k, val in x.items():
                out[k] = out.get(k, B.zero) + c * val
        return out

    def g(n, k):
        val = gamma(V.ctx, n, k)
        return val if B.exact else complex(val)

    one = B.one
    rep = {}
    rep["E v^R_{j+r}=0"] = _is_zero_vec(B, E(vR[-1]))
    rep["E v^S_i=0"] = _is_zero_vec(B, E(vS[0]))
    rep["F v^S_{-i}=0"] = _is_zero_vec(B, F(vS[-1]))
    rep["F v^L_{-j-r}=0"] = _is_zero_vec(B, F(vL[-1]))
    rep["E v^L_{j-r}=v^S_{-i}"] = eq(E(vL[0]), vS[-1])
    rep["E v^H"] = all(
        eq(E(vH[k]), lin((g(i, k), vH[k - 1]), (one, vS[k - 1]))) for k in range(1, i + 1)
    )
    rep["E v^S"] = all(eq(E(vS[k]), lin((g(i, k), vS[k - 1]))) for k in range(1, i + 1))
    rep["F v^R"] = all(eq(F(vR[k]), lin((-g(j, k), vR[k - 1]))) for k in range(1, j + 1))
    rep["E v^L"] = all(eq(E(vL[k]), lin((-g(j, k), vL[k - 1]))) for k in range(1, j + 1))
    return vectors, rep


def cyclic_words(X: WeightModule, gen: int = 0):
    """Words w_b with w_b . x_gen = c_b x_b for every basis vector x_b.

    Returns {b: (word, c_b)} or None when X is not reached by monomial words.
    """
    B = X.backend
    found = {gen: ("", B.one)}
    frontier = [(gen, "", {gen: B.one})]
    while frontier:
        nxt = []
        for _, word, vec in frontier:
            for ch, M in (("E", X.E), ("F", X.F)):
                w = apply(X, M, vec)
                w = {k: x for k, x in w.items() if not B.is_zero_scalar(x)}
                if len(w) == 1:
                    (b, c), = w.items()
                    if b not in found:
                        found[b] = (ch + word, c)
                        nxt.append((b, ch + word, w))
        frontier = nxt
    if len(found) != X.dim:
        return None
    return found


def map_from_generator(X: WeightModule, V: WeightModule, y: dict, gen: int = 0, words=None):
    """Matrix of the module map X -> V sending x_gen to y (X cyclic on x_gen)."""
    B = V.backend
    words = words or cyclic_words(X, gen)
    if words is None:
        raise PreconditionViolation("source is not cyclic by monomial words")
    entries = []
    for b, (word, c) in words.items():
        img = _apply_word(V, word, y)
        inv = 1 / c
        for a, val in img.items():
            entries.append((a, b, val * inv))
    return B.from_entries(V.dim, X.dim, entries)


# -- intertwiners --------------------------------------------------------------------


def is_intertwiner(f, V: WeightModule, W: WeightModule) -> bool:
    """f : V -> W commutes with E, F and preserves weights."""
    B = V.backend
    if tuple(f.shape) != (W.dim, V.dim):
        return False
    for a, b, val in B.entries(f):
        if not B.is_zero_scalar(val) and W.weights[a] != V.weights[b]:
            return False
    return B.is_zero(W.E @ f - f @ V.E) and B.is_zero(W.F @ f - f @ V.F)


def _hom_system(V, W):
    # weight-major ordering keeps elimination local along the weight chain
    sw = W.weight_spaces()
    sv = V.weight_spaces()
    var = {}
    for w in sorted(sv, key=lambda x: x.sort_key()):
        for b in sv[w]:
            for a in sw.get(w, ()):
                var[(a, b)] = len(var)
    return var


def hom_space(V: WeightModule, W: WeightModule) -> list:
    """Basis of Hom(V, W) as matrices of shape (dim W, dim V)."""
    B = V.backend
    if V.backend.name != W.backend.name or V.r != W.r:
        raise InvalidParameter("hom_space needs modules on one backend")
    var = _hom_system(V, W)
    if not var:
        return []
    rows = []
    for X in ("E", "F"):
        VX, WX = getattr(V, X), getattr(W, X)
        rows.extend(_hom_rows(V, W, var, VX, WX))
    keys = list(var)
    if B.exact:
        rows = [{k: v for k, v in row.items() if v} for row in rows]
        basis = nullspace_rows(rows, len(var), B.one)
    else:
        n = len(var)
        A = np.zeros((len(rows), n), dtype=complex)
        for e, row in enumerate(rows):
            for k, v in row.items():
                A[e, k] = v
        basis = B.nullspace(A) if len(rows) else [{k: 1.0 + 0j} for k in range(n)]
    out = []
    for vec in basis:
        out.append(B.from_entries(W.dim, V.dim, ((keys[k][0], keys[k][1], v) for k, v in vec.items())))
    return out


def _hom_rows(V, W, var, VX, WX):
    B = V.backend
    if B.exact:
        Wrows = WX.rows
        Vrows = VX.rows  # V_X[d, b] keyed by d
    else:
        arr_w, arr_v = np.asarray(WX), np.asarray(VX)
        Wrows = {a: {int(c): arr_w[a, c] for c in np.nonzero(arr_w[a])[0]} for a in range(W.dim)}
        Vrows = {d: {int(b): arr_v[d, b] for b in np.nonzero(arr_v[d])[0]} for d in range(V.dim)}
    Wcols = {}
    for a, row in Wrows.items():
        for c, v in row.items():
            Wcols.setdefault(c, []).append((a, v))
    rows = {}
    for (c, b), k in var.items():
        for a, val in Wcols.get(c, ()):
            row = rows.setdefault((a, b), {})
            row[k] = row[k] + val if k in row else val
        # f[c, b] V_X[b, b'] enters equation (c, b')
        for b2, val in Vrows.get(b, {}).items():
            row = rows.setdefault((c, b2), {})
            row[k] = row[k] - val if k in row else -val
    return list(rows.values())


def hom_dim(V: WeightModule, W: WeightModule) -> int:
    return len(hom_space(V, W))


# -- End(P_i) -----------------------------------------------------------------------------


def p_index(P: WeightModule):
    """(i, k) when P is C^H_{kr} ⊗ P_i built by the constructors, else None."""
    kind = P.kind
    if kind and kind[0] == "P":
        return kind[1], 0
    if kind and kind[0] == "shift" and kind[2] and kind[2][0] == "P":
        return kind[2][1], kind[1]
    return None


def nilpotent_x(P: WeightModule):
    """x_i = C - c_i on (a shift of) P_i; the radical generator of End(P_i)."""
    idx = p_index(P)
    if idx is None:
        raise PreconditionViolation("module is not a tagged projective P_i")
    i, k = idx
    B = P.backend
    c = casimir_value(P.ctx, i, k)
    c = c if B.exact else complex(c)
    return casimir(P) - P.eye() * c


def endo_coeffs(P: WeightModule, f):
    """(a, b) with f = a Id + b x, x = nilpotent_x(P), read off from f(v^H_i)."""
    idx = p_index(P)
    if idx is None or idx[0] >= P.r - 1:
        raise PreconditionViolation("endo_coeffs needs P_i with i <= r-2")
    i, k = idx
    B = P.backend
    if not is_intertwiner(f, P, P):
        raise PreconditionViolation("matrix is not an endomorphism of P_i")
    j = P.r - 2 - i
    s0 = i + 2 * j + 3
    a = f[0, 0]
    # on the shift by k, x sends v^H to (-1)^k v^S
    b = f[s0, 0] * (1 if k % 2 == 0 else -1)
    if not B.exact:
        a, b = complex(a), complex(b)
    return a, b
