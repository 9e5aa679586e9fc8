"""Modified dimensions and the modified trace on projective modules.

A trace is fixed by its value on the identity of V_0. Every other value is
obtained by splitting a projective module into indecomposable summands with
explicit injections and projections, then evaluating the trace summand by
summand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .decomp import decompose, hom_from, hom_to, indecomposable, label_str
from .modules import Weight, WeightModule, projective_P, simple_S, tensor, typical_V
from .ribbon import open_hopf, ptr_left, ptr_right, qdim, twist
from .scalar import InvalidParameter, make_field, nqnum, qint, qnum, qpow
from .structure import endo_coeffs, hom_space, nilpotent_x, p_index

__all__ = [
    "NotInIdeal",
    "TraceContext",
    "mdim_typical",
    "mdim_typical_forms",
    "mdim_P",
    "x_trace",
    "x_trace_stated",
    "x_trace_via_V0",
    "split",
    "mtrace",
    "trace_axiom_checks",
    "cyclicity_checks",
    "pairing_rank",
    "phicom_check",
    "twist_trace_closed",
    "twist_trace_check",
    "consistency_chain",
]


class NotInIdeal(ValueError):
    """The module has a non-projective summand."""


@dataclass(frozen=True)
class TraceContext:
    """Trace normalised by its value on Id_{V_0}; the default is (-1)^(r-1)."""

    r: int
    normalization: object = None
    _scale: object = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        ctx = make_field(self.r)
        base = ctx((-1) ** (self.r - 1))
        norm = base if self.normalization is None else self.normalization
        if isinstance(norm, (int, Fraction)):
            norm = ctx(norm)
        object.__setattr__(self, "normalization", norm)
        object.__setattr__(self, "_scale", norm * base)

    @property
    def ctx(self):
        return make_field(self.r)

    @property
    def scale(self):
        """Ratio to the default normalisation."""
        return self._scale

    def scalar(self, v, exact=True):
        s = self._scale * v
        return s if exact else complex(s)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _tc(r, tc):
    return tc if tc is not None else TraceContext(r)


def _as_alpha(alpha):
    if isinstance(alpha, Weight):
        if alpha.terms:
            raise InvalidParameter("pass a numeric value for a formal weight")
        return alpha.base
    if isinstance(alpha, complex) and abs(alpha.imag) < 1e-15 and float(alpha.real).is_integer():
        return int(alpha.real)
    if isinstance(alpha, float) and alpha.is_integer():
        return int(alpha)
    if isinstance(alpha, Fraction) and alpha.denominator == 1:
        return int(alpha)
    return alpha


def _check_typical(alpha, r, tol=1e-9):
    if isinstance(alpha, int):
        if alpha % r:
            raise InvalidParameter(f"domain-error: V_{alpha} is not typical at r={r}")
        return
    z = complex(alpha)
    n = round(z.real)
    if abs(z - n) < tol and n % r:
        raise InvalidParameter(f"domain-error: V_{alpha} is not typical at r={r}")


def mdim_typical_forms(alpha, r: int, tc: TraceContext | None = None):
    """Both closed forms of d(V_alpha): the product over j and r{α}/{rα}."""
    tc = _tc(r, tc)
    alpha = _as_alpha(alpha)
    _check_typical(alpha, r)
    sign = (-1) ** (r - 1)
    if isinstance(alpha, int):
        ctx = tc.ctx
        prod = ctx(sign)
        for j in range(1, r):
            prod = prod * qnum(ctx, j) / qnum(ctx, alpha + r - j)
        # r{α}/{rα} has a removable singularity on rZ
        k = alpha // r
        ratio = ctx(sign * _sign(k * (r - 1)))
        return tc.scalar(prod), tc.scalar(ratio)
    a = complex(alpha)
    prod = complex(sign)
    for j in range(1, r):
        prod *= nqnum(r, j) / nqnum(r, a + r - j)
    ratio = sign * r * nqnum(r, a) / nqnum(r, r * a)
    s = complex(tc.scale)
    return prod * s, ratio * s


def mdim_typical(alpha, r: int, tc: TraceContext | None = None):
    return mdim_typical_forms(alpha, r, tc)[0]


def mdim_P(j: int, r: int, tc: TraceContext | None = None):
    """d(P_j) = (-1)^(j+1) (q^(j+1) + q^-(j+1))."""
    if j == r - 1:
        raise InvalidParameter("P_{r-1} is V_0; use mdim_typical(0)")
    if not 0 <= j <= r - 2:
        raise InvalidParameter(f"no projective P_{j} at r={r}")
    tc = _tc(r, tc)
    ctx = tc.ctx
    return tc.scalar((qpow(ctx, j + 1) + qpow(ctx, -j - 1)) * (-1) ** (j + 1))


def x_trace_stated(j: int, r: int, tc: TraceContext | None = None):
    """The value (-1)^(j+1) for t(x_j) as it is usually written."""
    tc = _tc(r, tc)
    return tc.scalar(tc.ctx((-1) ** (j + 1)))


def x_trace(j: int, r: int, tc: TraceContext | None = None):
    """t(x_j) = (-1)^(j+1) [j+1]^2, the value forced by the trace axioms."""
    if not 0 <= j <= r - 2:
        raise InvalidParameter(f"no projective P_{j} at r={r}")
    tc = _tc(r, tc)
    return tc.scalar(qint(tc.ctx, j + 1) ** 2 * (-1) ** (j + 1))


# -- splitting into indecomposables --------------------------------------------------------


@dataclass(eq=False)
class Summand:
    label: tuple
    module: WeightModule
    inj: object
    proj: object


def _invertible(B, m):
    v = m[0, 0]
    return (not B.is_zero_scalar(v)) if B.exact else abs(complex(v)) > 1e-7


def _pick_pair(B, hs, gs, compl):
    trial = [(h, g) for h in hs for g in gs]
    mixes = []
    if hs and gs:
        rng = random.Random(len(hs) * 131 + len(gs))
        for _ in range(4):
            ch = [rng.randint(1, 7) for _ in hs]
            cg = [rng.randint(1, 7) for _ in gs]
            h = sum((x * c for x, c in zip(hs[1:], ch[1:])), hs[0] * ch[0])
            g = sum((x * c for x, c in zip(gs[1:], cg[1:])), gs[0] * cg[0])
            mixes.append((h, g))
    for h, g in trial + mixes:
        hh = h if compl is None else compl @ h
        gg = g if compl is None else g @ compl
        m = gg @ hh
        if _invertible(B, m):
            return hh, gg, m
    return None


def split(M: WeightModule) -> list:
    """Indecomposable summands of M with inj: X -> M, proj: M -> X, proj inj = Id."""
    if "split" in M.derived:
        return M.derived["split"]
    B = M.backend
    dec = decompose(M, "fast")
    out = []
    E = None
    for label, mult in dec.items():
        X = indecomposable(label, M.ctx, B.name, M.values)
        hs = hom_from(label, M, X)
        gs = hom_to(M, label, X)
        for _ in range(mult):
            compl = None if E is None else M.eye() - E
            found = _pick_pair(B, hs, gs, compl)
            if found is None:
                raise RuntimeError(f"could not split off {label_str(label, M.r)}")
            hh, gg, m = found
            proj = B.inverse(m) @ gg
            e = hh @ proj
            E = e if E is None else E + e
            out.append(Summand(label, X, hh, proj))
    M.derived["split"] = out
    return out


# -- the trace ---------------------------------------------------------------------------


def _label_of(M: WeightModule):
    idx = p_index(M)
    if idx is not None:
        return ("P", idx[0], idx[1])
    if M.kind and M.kind[0] == "V":
        w = M.kind[1]
        if w.is_integer:
            if w.base % M.r:
                raise NotInIdeal(f"{M.label} is not projective")
            return ("P", M.r - 1, w.base // M.r)
        return ("V", w)
    return None


def _trace_indecomposable(label, X: WeightModule, g, tc: TraceContext):
    r = X.r
    B = X.backend
    kind = label[0]
    if kind == "S":
        raise NotInIdeal(f"summand {label_str(label, r)} is not projective")
    if kind == "V":
        alpha = label[1].value(X.values)
        return mdim_typical(alpha, r, tc) * complex(g[0, 0])
    _, i, k = label
    if i == r - 1:
        d = mdim_typical(k * r, r, tc)
        return d * g[0, 0] if B.exact else complex(d) * complex(g[0, 0])
    a, b = endo_coeffs(X, g)
    # shifting by C^H_{kr} multiplies d by (-1)^(k(r-1)); x picks up another (-1)^k
    d = mdim_P(i, r, tc) * _sign(k * (r - 1))
    t = x_trace(i, r, tc) * _sign(k * r)
    if B.exact:
        return a * d + b * t
    return a * complex(d) + b * complex(t)


def mtrace(M: WeightModule, f, tc: TraceContext | None = None):
    """Modified trace of f in End(M) for a projective module M."""
    tc = _tc(M.r, tc)
    if tuple(f.shape) != (M.dim, M.dim):
        raise ValueError("shape-error: endomorphism does not match the module")
    label = _label_of(M)
    if label is not None:
        return _trace_indecomposable(label, M, f, tc)
    acc = None
    for s in split(M):
        val = _trace_indecomposable(s.label, s.module, s.proj @ f @ s.inj, tc)
        acc = val if acc is None else acc + val
    if acc is None:
        return tc.ctx.zero if M.exact else 0j
    return acc


def x_trace_via_V0(j: int, r: int, tc: TraceContext | None = None):
    """t_{P_j}(x_j) computed as d(V_0) <ptr_R(inj x_j proj)> inside V_0 ⊗ S_{r-j-1}."""
    tc = _tc(r, tc)
    ctx = tc.ctx
    V0 = typical_V(ctx, 0)
    S = simple_S(ctx, r - j - 1)
    M = tensor(V0, S)
    P = projective_P(ctx, j)
    label = ("P", j, 0)
    found = _pick_pair(M.backend, hom_from(label, M, P), hom_to(M, label, P), None)
    if found is None:
        raise RuntimeError("P_j is not a summand of V_0 ⊗ S_{r-j-1}")
    inj, g, m = found
    proj = M.backend.inverse(m) @ g
    red = ptr_right(inj @ nilpotent_x(P) @ proj, V0, S)
    return mdim_typical(0, r, tc) * red[0, 0]


# -- checks ------------------------------------------------------------------------------


def _random_combo(B, basis, rng):
    if not basis:
        return None
    acc = None
    for m in basis:
        c = rng.randint(-3, 3)
        if not B.exact:
            c = complex(c + rng.random())
        term = m * c
        acc = term if acc is None else acc + term
    return acc


def _close(B, a, b, tol=1e-8):
    if B.exact:
        return a == b
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(a)), abs(complex(b)))


def trace_axiom_checks(U: WeightModule, W: WeightModule, samples: int = 20, seed: int = 0, tc=None) -> dict:
    """t_{U⊗W}(f) = t_U(ptr_R f) and t_{W⊗U}(f) = t_U(ptr_L f) on random f."""
    tc = _tc(U.r, tc)
    B = U.backend
    rng = random.Random(seed)
    UW, WU = tensor(U, W), tensor(W, U)
    right_basis = hom_space(UW, UW)
    left_basis = hom_space(WU, WU)
    fails = {"right": 0, "left": 0}
    for _ in range(samples):
        f = _random_combo(B, right_basis, rng)
        if not _close(B, mtrace(UW, f, tc), mtrace(U, ptr_right(f, U, W), tc)):
            fails["right"] += 1
        g = _random_combo(B, left_basis, rng)
        if not _close(B, mtrace(WU, g, tc), mtrace(U, ptr_left(g, W, U), tc)):
            fails["left"] += 1
    return {"samples": samples, "right": fails["right"] == 0, "left": fails["left"] == 0, "failures": fails}


def cyclicity_checks(V: WeightModule, U: WeightModule, samples: int = 20, seed: int = 0, tc=None) -> dict:
    """t_V(g f) = t_U(f g) for random f: V -> U and g: U -> V."""
    tc = _tc(V.r, tc)
    B = V.backend
    rng = random.Random(seed)
    fs = hom_space(V, U)
    gs = hom_space(U, V)
    if not fs or not gs:
        return {"samples": 0, "pass": True, "failures": 0}
    bad = 0
    for _ in range(samples):
        f = _random_combo(B, fs, rng)
        g = _random_combo(B, gs, rng)
        if not _close(B, mtrace(V, g @ f, tc), mtrace(U, f @ g, tc)):
            bad += 1
    return {"samples": samples, "pass": bad == 0, "failures": bad}


def pairing_rank(P: WeightModule, V: WeightModule, tc=None) -> dict:
    """Rank of (h1, h2) -> t_P(h1 h2) on Hom(V, P) x Hom(P, V)."""
    tc = _tc(P.r, tc)
    B = P.backend
    h1s = hom_space(V, P)
    h2s = hom_space(P, V)
    if not h1s or not h2s:
        return {"rank": 0, "dims": (len(h1s), len(h2s)), "full": True}
    G = [[mtrace(P, a @ b, tc) for b in h2s] for a in h1s]
    if B.exact:
        rank = B.rank(B.from_entries(len(G), len(G[0]), ((i, j, v) for i, row in enumerate(G) for j, v in enumerate(row) if v)))
    else:
        rank = int(np.linalg.matrix_rank(np.array(G, dtype=complex), tol=1e-8))
    return {"rank": rank, "dims": (len(h1s), len(h2s)), "full": rank == min(len(h1s), len(h2s))}


def phicom_check(P: WeightModule, tc=None) -> dict:
    """t_P(Φ_{V_0,P}) against d(V_0) <Φ_{P,V_0}> under both readings of d(V_0)."""
    tc = _tc(P.r, tc)
    r = P.r
    V0 = typical_V(P.ctx, 0, P.backend.name)
    lhs = mtrace(P, open_hopf(V0, P), tc)
    bracket = open_hopf(P, V0)[0, 0]
    d0 = mdim_typical(0, r, tc)
    rhs = d0 * bracket
    rhs_times_r = rhs * r
    B = P.backend
    return {
        "lhs": lhs,
        "d(V0)": rhs,
        "r*d(V0)": rhs_times_r,
        "pass": _close(B, lhs, rhs),
        "pass_with_factor_r": _close(B, lhs, rhs_times_r),
    }


def twist_trace_closed(j: int, r: int, tc=None):
    """-q^{(j^2+2j)/2} (-(r-j-2) q^{j+1} + (r-j) q^{-j-1})."""
    tc = _tc(r, tc)
    ctx = tc.ctx
    inner = qpow(ctx, j + 1) * (-(r - j - 2)) + qpow(ctx, -j - 1) * (r - j)
    return tc.scalar(-qpow(ctx, Fraction(j * j + 2 * j, 2)) * inner)


def twist_trace_check(j: int, r: int, tc=None) -> dict:
    tc = _tc(r, tc)
    P = projective_P(make_field(r), j)
    got = mtrace(P, twist(P).matrix, tc)
    want = twist_trace_closed(j, r, tc)
    return {"got": got, "expected": want, "pass": got == want}


def consistency_chain(j: int, r: int, tc=None) -> bool:
    """d(P_j) = d(V_0) (qdim S_{r-j-1} - qdim S_{r-j-3})."""
    tc = _tc(r, tc)
    ctx = make_field(r)
    big = qdim(simple_S(ctx, r - j - 1))
    small = qdim(simple_S(ctx, r - j - 3)) if r - j - 3 >= 0 else ctx.zero
    return mdim_P(j, r, tc) == mdim_typical(0, r, tc) * (big - small)
