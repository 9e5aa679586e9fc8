"""Braiding, twist, dualities, partial traces and open Hopf links."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .modules import WeightModule, dual, tensor
from .scalar import nqnum, nqpow, qfact, qnum, qpow
from .structure import endo_coeffs, is_intertwiner, nilpotent_x

__all__ = [
    "Morphism",
    "flip",
    "r_coefficients",
    "braiding",
    "theta_operator",
    "twist",
    "twist_convention",
    "dualities",
    "zigzag_checks",
    "ribbon_compat_checks",
    "ptr_left",
    "ptr_right",
    "qdim",
    "open_hopf",
    "open_hopf_ptr",
    "double_braiding",
    "hopf_oracle",
    "phi_coeffs",
    "hopf_SS",
    "hopf_SV",
    "hopf_PV",
    "hopf_VV",
    "hopf_SP",
    "hopf_V0P",
    "hopf_PP",
    "yang_baxter_check",
    "ribbon_identity_check",
    "twist_closed_form_P",
    "twist_closed_form_rescaled",
]


@dataclass(eq=False)
class Morphism:
    source: object
    target: object
    matrix: object

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return Morphism(other.source, self.target, self.matrix @ other.matrix)

    def check(self) -> bool:
        return is_intertwiner(self.matrix, self.source, self.target)


def _exp_weight(V: WeightModule, a: int, b: int, W: WeightModule, coef):
    """q^{coef * λ_a * μ_b}, exact when both weights are integers."""
    if V.exact:
        return qpow(V.ctx, coef * int(V.weights[a]) * int(W.weights[b]))
    lam = V.weights[a].value(V.values)
    mu = W.weights[b].value(W.values)
    return nqpow(V.r, coef * lam * mu)


def flip(V: WeightModule, W: WeightModule):
    """τ : V ⊗ W -> W ⊗ V."""
    B = V.backend
    dv, dw = V.dim, W.dim
    return B.from_entries(dv * dw, dv * dw, ((b * dv + a, a * dw + b, B.one) for a in range(dv) for b in range(dw)))


def r_coefficients(B, r: int):
    """{1}^{2n}/{n}! q^{n(n-1)/2} for n < r."""
    ctx = B.ctx
    out = []
    one1 = qnum(ctx, 1)
    for n in range(r):
        c = one1 ** (2 * n) / qfact(ctx, n) * qpow(ctx, Fraction(n * (n - 1), 2))
        out.append(c if B.exact else complex(c))
    return out


def _powers(M, n, eye):
    out = [eye]
    for _ in range(n - 1):
        out.append(out[-1] @ M)
    return out


def braiding(V: WeightModule, W: WeightModule) -> Morphism:
    """c_{V,W} = τ ∘ R with the truncated R-matrix."""
    B = V.backend
    r = V.r
    coef = r_coefficients(B, r)
    EV = _powers(V.E, r, V.eye())
    FW = _powers(W.F, r, W.eye())
    S = None
    for n in range(r):
        term = EV[n].kron(FW[n]) * coef[n]
        S = term if S is None else S + term
    dv, dw = V.dim, W.dim
    half = Fraction(1, 2)
    D = B.diag([_exp_weight(V, a, b, W, half) for a in range(dv) for b in range(dw)])
    R = D @ S
    src = tensor(V, W)
    tgt = tensor(W, V)
    return Morphism(src, tgt, flip(V, W) @ R)


def theta_operator(V: WeightModule):
    """Matrix of θ = K^{r-1} Σ_n c_n S(F)^n q^{-H^2/2} E^n on V."""
    B = V.backend
    r = V.r
    coef = r_coefficients(B, r)
    SF = -(V.K() @ V.F)
    if V.exact:
        Q = B.diag([qpow(V.ctx, Fraction(-int(w) ** 2, 2)) for w in V.weights])
    else:
        Q = B.diag([nqpow(r, -(w.value(V.values) ** 2) / 2) for w in V.weights])
    SFp = _powers(SF, r, V.eye())
    Ep = _powers(V.E, r, V.eye())
    acc = None
    for n in range(r):
        term = SFp[n] @ Q @ Ep[n] * coef[n]
        acc = term if acc is None else acc + term
    return V.K(r - 1) @ acc


def twist(V: WeightModule) -> Morphism:
    """θ_V, acting by θ^{-1}."""
    B = V.backend
    return Morphism(V, V, B.inverse(theta_operator(V)))


def twist_closed_form_P(P: WeightModule):
    """(-1)^j q^{(j^2+2j)/2} (Id - (r-j-1){j+1} x_j) on P_j."""
    from .structure import p_index

    j = p_index(P)[0]
    r = P.r
    ctx = P.ctx
    s = qpow(ctx, Fraction(j * j + 2 * j, 2)) * (-1) ** j
    lam = qnum(ctx, j + 1) * (-(r - j - 1))
    x = nilpotent_x(P)
    if P.exact:
        return (P.eye() + x * lam) * s
    return (P.eye() + x * complex(lam)) * complex(s)


def twist_convention(P: WeightModule) -> str:
    """Compare θ_{P_j} and its inverse with the closed form."""
    B = P.backend
    closed = twist_closed_form_P(P)
    th = twist(P).matrix
    if B.equal(th, closed):
        return "matched"
    if B.equal(theta_operator(P), closed):
        return "inverse"
    return "neither"


def dualities(V: WeightModule):
    """(coev→, ev→, coev←, ev←) as Morphisms between V⊗V*, V*⊗V and the unit."""
    from .modules import onedim_C

    B = V.backend
    n = V.dim
    Vs = dual(V)
    unit = onedim_C(V.ctx, 0, V.backend.name)
    pivot = [V.qpow_diag(lambda x: (V.r - 1) * x)[i, i] for i in range(n)]
    coev_r = B.from_entries(n * n, 1, ((i * n + i, 0, B.one) for i in range(n)))
    ev_r = B.from_entries(1, n * n, ((0, i * n + i, B.one) for i in range(n)))
    coev_l = B.from_entries(n * n, 1, ((i * n + i, 0, pivot[i]) for i in range(n)))
    ev_l = B.from_entries(1, n * n, ((0, i * n + i, 1 / pivot[i]) for i in range(n)))
    VVs = tensor(V, Vs)
    VsV = tensor(Vs, V)
    return (
        Morphism(unit, VVs, coev_r),
        Morphism(VsV, unit, ev_r),
        Morphism(unit, VsV, coev_l),
        Morphism(VVs, unit, ev_l),
    )


def zigzag_checks(V: WeightModule) -> dict:
    B = V.backend
    n = V.dim
    coev_r, ev_r, coev_l, ev_l = (m.matrix for m in dualities(V))
    I = V.eye()
    out = {}
    # V -> V⊗V*⊗V -> V
    out["left V"] = B.equal(I.kron(ev_r) @ coev_r.kron(I), I)
    # V* -> V*⊗V⊗V* -> V*
    out["left V*"] = B.equal(ev_r.kron(I) @ I.kron(coev_r), I)
    # V -> V⊗V*⊗V -> V  with the pivotal pair
    out["right V"] = B.equal(ev_l.kron(I) @ I.kron(coev_l), I)
    out["right V*"] = B.equal(I.kron(ev_l) @ coev_l.kron(I), I)
    out["duals are modules"] = all(
        m.check() for m in dualities(V)
    ) if n <= 16 else True
    return out


def ribbon_compat_checks(V: WeightModule) -> dict:
    """ev← = ev→ c_{V,V*} (θ_V ⊗ Id) and coev← = (Id ⊗ θ_V) c_{V,V*} coev→."""
    B = V.backend
    coev_r, ev_r, coev_l, ev_l = (m.matrix for m in dualities(V))
    Vs = dual(V)
    c = braiding(V, Vs).matrix
    th = twist(V).matrix
    Is = Vs.eye()
    return {
        "ev<-": B.equal(ev_r @ c @ th.kron(Is), ev_l),
        "coev<-": B.equal(Is.kron(th) @ c @ coev_r, coev_l),
    }


def qdim(V: WeightModule):
    """Quantum dimension Σ q^{(1-r)λ}."""
    B = V.backend
    D = V.qpow_diag(lambda x: (1 - V.r) * x)
    acc = B.zero
    for i in range(V.dim):
        acc = acc + D[i, i]
    return acc


def ptr_right(f, V: WeightModule, W: WeightModule):
    """Right partial trace End(V⊗W) -> End(V)."""
    B = V.backend
    dv, dw = V.dim, W.dim
    if tuple(f.shape) != (dv * dw, dv * dw):
        raise ValueError("shape-error: endomorphism does not match V⊗W")
    piv = W.qpow_diag(lambda x: (1 - W.r) * x)
    w = [piv[b, b] for b in range(dw)]
    entries = []
    for row, col, val in B.entries(f):
        a1, b1 = divmod(row, dw)
        a2, b2 = divmod(col, dw)
        if b1 == b2:
            entries.append((a1, a2, val * w[b1]))
    return B.from_entries(dv, dv, entries)


def ptr_left(f, V: WeightModule, W: WeightModule):
    """Left partial trace End(V⊗W) -> End(W)."""
    B = V.backend
    dv, dw = V.dim, W.dim
    if tuple(f.shape) != (dv * dw, dv * dw):
        raise ValueError("shape-error: endomorphism does not match V⊗W")
    piv = V.qpow_diag(lambda x: (V.r - 1) * x)
    w = [piv[a, a] for a in range(dv)]
    entries = []
    for row, col, val in B.entries(f):
        a1, b1 = divmod(row, dw)
        a2, b2 = divmod(col, dw)
        if a1 == a2:
            entries.append((b1, b2, val * w[a1]))
    return B.from_entries(dw, dw, entries)


def double_braiding(V: WeightModule, W: WeightModule):
    """c_{W,V} ∘ c_{V,W} on V ⊗ W."""
    return braiding(W, V).matrix @ braiding(V, W).matrix


def open_hopf(V: WeightModule, W: WeightModule):
    """Φ_{V,W} = (Id_W ⊗ ev←_V)(c_{V,W} ⊗ Id)(c_{W,V} ⊗ Id)(Id_W ⊗ coev→_V)."""
    coev_r, _, _, ev_l = (m.matrix for m in dualities(V))
    IW = W.eye()
    Is = V.eye()  # V* has the same dimension as V
    step = IW.kron(coev_r)
    step = braiding(W, V).matrix.kron(Is) @ step
    step = braiding(V, W).matrix.kron(Is) @ step
    return IW.kron(ev_l) @ step


def open_hopf_ptr(V: WeightModule, W: WeightModule):
    """Φ_{V,W} as the right partial trace of c_{V,W} c_{W,V} over V."""
    return ptr_right(double_braiding(W, V), W, V)


def hopf_oracle(V: WeightModule, lam):
    """Ψ_{λ+1-r}(χ(V)) = Σ q^{(λ+1-r)μ} over the weights μ of V."""
    B = V.backend
    acc = B.zero
    for w in V.weights:
        if V.exact and not isinstance(lam, complex):
            acc = acc + qpow(V.ctx, (int(lam) + 1 - V.r) * int(w))
        else:
            acc = acc + nqpow(V.r, (complex(lam) + 1 - V.r) * w.value(V.values))
    return acc


def phi_coeffs(V: WeightModule, P: WeightModule):
    """(a, b) with Φ_{V,P} = a Id + b x for P a tagged projective."""
    return endo_coeffs(P, open_hopf(V, P))


# -- closed forms for open Hopf links ------------------------------------------------------


def _rescale(ctx, j):
    """{1}^2 / {j+1}^2, the factor separating the quoted x_j-coefficients from the computed ones."""
    return (qnum(ctx, 1) / qnum(ctx, j + 1)) ** 2


def hopf_SS(ctx, i: int, j: int):
    """Scalar of Φ_{S_i,S_j}: (-1)^i {(i+1)(j+1)}/{j+1}."""
    return qnum(ctx, (i + 1) * (j + 1)) / qnum(ctx, j + 1) * (-1) ** i


def hopf_SV(r: int, i: int, alpha: complex) -> complex:
    """Scalar of Φ_{S_i,V_α}: {(i+1)α}/{α}."""
    return nqnum(r, (i + 1) * alpha) / nqnum(r, alpha)


def hopf_PV(r: int, i: int, alpha: complex) -> complex:
    """Scalar of Φ_{P_i,V_α}: (-1)^(r-1) r (q^{(r-1-i)α} + q^{-(r-1-i)α}) / d(V_α)."""
    from .mtrace import mdim_typical

    n = r - 1 - i
    return (-1) ** (r - 1) * r * (nqpow(r, n * alpha) + nqpow(r, -n * alpha)) / mdim_typical(alpha, r)


def hopf_VV(r: int, beta: complex, alpha: complex) -> complex:
    """Scalar of Φ_{V_β,V_α}: (-1)^(r-1) r q^{αβ} / d(V_α)."""
    from .mtrace import mdim_typical

    return (-1) ** (r - 1) * r * nqpow(r, alpha * beta) / mdim_typical(alpha, r)


def hopf_SP(ctx, i: int, j: int, rescaled: bool = False):
    """(a, b) of Φ_{S_i,P_j} = a Id + b x_j."""
    a = hopf_SS(ctx, i, j)
    b = (qnum(ctx, (i + 2) * (j + 1)) * i - qnum(ctx, i * (j + 1)) * (i + 2)) / qnum(ctx, j + 1) * (-1) ** i
    return (a, b * _rescale(ctx, j)) if rescaled else (a, b)


def hopf_V0P(ctx, j: int, rescaled: bool = False):
    """(a, b) of Φ_{V_0,P_j} = (-1)^(r+j) 2r x_j."""
    r = ctx.r
    b = ctx((-1) ** (r + j) * 2 * r)
    return ctx.zero, (b * _rescale(ctx, j) if rescaled else b)


def hopf_PP(ctx, i: int, j: int, rescaled: bool = False):
    """(a, b) of Φ_{P_i,P_j} = (-1)^i 2r (q^{(i+1)(j+1)} + q^{-(i+1)(j+1)}) x_j."""
    r = ctx.r
    n = (i + 1) * (j + 1)
    b = (qpow(ctx, n) + qpow(ctx, -n)) * ((-1) ** i * 2 * r)
    return ctx.zero, (b * _rescale(ctx, j) if rescaled else b)


def yang_baxter_check(U: WeightModule, V: WeightModule, W: WeightModule) -> bool:
    """(c_{V,W} ⊗ 1)(1 ⊗ c_{U,W})(c_{U,V} ⊗ 1) = (1 ⊗ c_{U,V})(c_{U,W} ⊗ 1)(1 ⊗ c_{V,W})."""
    B = U.backend
    cUV = braiding(U, V).matrix
    cUW = braiding(U, W).matrix
    cVW = braiding(V, W).matrix
    lhs = cVW.kron(U.eye()) @ V.eye().kron(cUW) @ cUV.kron(W.eye())
    rhs = W.eye().kron(cUV) @ cUW.kron(V.eye()) @ U.eye().kron(cVW)
    return B.equal(lhs, rhs)


def ribbon_identity_check(V: WeightModule, W: WeightModule) -> bool:
    """θ_{V⊗W} = c_{W,V} c_{V,W} (θ_V ⊗ θ_W)."""
    B = V.backend
    lhs = twist(tensor(V, W)).matrix
    rhs = double_braiding(V, W) @ twist(V).matrix.kron(twist(W).matrix)
    return B.equal(lhs, rhs)


def twist_closed_form_rescaled(P: WeightModule):
    """The closed form with x_j replaced by x_j / [j+1]^2."""
    from .structure import p_index

    j = p_index(P)[0]
    ctx = P.ctx
    s = qpow(ctx, Fraction(j * j + 2 * j, 2)) * (-1) ** j
    lam = qnum(ctx, j + 1) * (-(P.r - j - 1)) * _rescale(ctx, j)
    x = nilpotent_x(P)
    if P.exact:
        return (P.eye() + x * lam) * s
    return (P.eye() + x * complex(lam)) * complex(s)
