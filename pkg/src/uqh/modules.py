"""Weight modules over unrolled quantum sl(2): data model and constructors.

A module stores its basis weights and the matrices of E and F. H is the
diagonal of the weights and K = q^H is derived from it, so the weight-module
condition holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .linalg import ExactBackend, NumericBackend
from .scalar import (
    FieldContext,
    InvalidParameter,
    UnsupportedExponent,
    make_field,
    nqpow,
    qint,
)

__all__ = [
    "Weight",
    "Character",
    "WeightModule",
    "InvalidPair",
    "get_backend",
    "qint_X",
    "simple_S",
    "typical_V",
    "onedim_C",
    "sigma_power",
    "projective_P",
    "tensor",
    "tensor_many",
    "dual",
    "direct_sum",
    "shifted",
    "character",
    "check_module_axioms",
    "module_to_json",
    "module_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "to_backend",
    "gamma",
]

ALPHA = "α"


class InvalidPair(ValueError):
    """Two modules cannot be combined (context, backend or symbol clash)."""


@lru_cache(maxsize=None)
def _backend(r: int, name: str, tol: float):
    ctx = make_field(r)
    if name == "exact":
        return ExactBackend(ctx)
    if name == "numeric":
        return NumericBackend(ctx, tol)
    raise InvalidParameter(f"unknown backend {name!r}")


def get_backend(ctx_or_r, name: str = "exact", tol: float = 1e-9):
    r = ctx_or_r.r if isinstance(ctx_or_r, FieldContext) else int(ctx_or_r)
    return _backend(r, name, float(tol))


# -- weights and characters ---------------------------------------------------------


@dataclass(frozen=True, order=False)
class Weight:
    """Affine weight ``base + sum(coeff * symbol)`` with integer data."""

    base: int = 0
    terms: tuple = ()

    @staticmethod
    def symbol(name: str = ALPHA, coeff: int = 1, base: int = 0) -> "Weight":
        return Weight(base, ((name, coeff),) if coeff else ())

    @staticmethod
    def of(x) -> "Weight":
        if isinstance(x, Weight):
            return x
        if isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1):
            return Weight(int(x))
        raise InvalidParameter(f"not an exact weight: {x!r}")

    @property
    def is_integer(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = Weight.of(other)
        acc = dict(self.terms)
        for s, c in other.terms:
            acc[s] = acc.get(s, 0) + c
        return Weight(self.base + other.base, tuple(sorted((s, c) for s, c in acc.items() if c)))

    __radd__ = __add__

    def __neg__(self):
        return Weight(-self.base, tuple((s, -c) for s, c in self.terms))

    def __sub__(self, other):
        return self + (-Weight.of(other))

    def __rsub__(self, other):
        return Weight.of(other) - self

    def scale(self, k: int) -> "Weight":
        return Weight(self.base * k, tuple((s, c * k) for s, c in self.terms if c * k))

    def symbols(self):
        return {s for s, _ in self.terms}

    def value(self, values=None) -> complex:
        v = complex(self.base)
        for s, c in self.terms:
            if values is None or s not in values:
                raise KeyError(f"missing-assignment: {s}")
            v += c * complex(values[s])
        return v

    def sort_key(self):
        return (tuple(-c for _, c in self.terms), self.terms and tuple(s for s, _ in self.terms), -self.base)

    def __int__(self):
        if self.terms:
            raise UnsupportedExponent(f"weight {self} is not an integer")
        return self.base

    def __str__(self):
        parts = []
        for s, c in self.terms:
            parts.append(s if c == 1 else ("-" + s if c == -1 else f"{c}{s}"))
        if self.base or not parts:
            parts.append(str(self.base))
        return "+".join(parts).replace("+-", "-")

    def to_json(self):
        out = {"base": self.base, "alpha_coeff": 0}
        other = {}
        for s, c in self.terms:
            if s == ALPHA:
                out["alpha_coeff"] = c
            else:
                other[s] = c
        if other:
            out["terms"] = dict(sorted(other.items()))
        return out

    @staticmethod
    def from_json(data) -> "Weight":
        terms = dict(data.get("terms", {}))
        if data.get("alpha_coeff"):
            terms[ALPHA] = data["alpha_coeff"]
        return Weight(int(data["base"]), tuple(sorted(terms.items())))


class Character:
    """Finitely supported map weight -> multiplicity (a Laurent polynomial in X)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc = {}
        for w, m in (terms.items() if isinstance(terms, dict) else (terms or ())):
            w = Weight.of(w)
            acc[w] = acc.get(w, 0) + m
        self.terms = {w: m for w, m in acc.items() if m}

    @staticmethod
    def monomial(w, mult: int = 1) -> "Character":
        return Character({Weight.of(w): mult})

    def __add__(self, other):
        acc = dict(self.terms)
        for w, m in other.terms.items():
            acc[w] = acc.get(w, 0) + m
        return Character(acc)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k: int) -> "Character":
        return Character({w: m * k for w, m in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        acc = {}
        for w1, m1 in self.terms.items():
            for w2, m2 in other.terms.items():
                w = w1 + w2
                acc[w] = acc.get(w, 0) + m1 * m2
        return Character(acc)

    __rmul__ = __mul__

    def shift(self, w) -> "Character":
        w = Weight.of(w)
        return Character({k + w: m for k, m in self.terms.items()})

    def dual(self) -> "Character":
        return Character({-w: m for w, m in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Character) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def dim(self) -> int:
        return sum(self.terms.values())

    def is_nonnegative(self) -> bool:
        return all(m > 0 for m in self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def top(self) -> Weight:
        """Highest weight; only meaningful for integer characters."""
        return max(self.terms, key=lambda w: (tuple(c for _, c in w.terms), w.base))

    def to_json(self):
        return [{"weight": w.to_json(), "mult": m} for w, m in self.sorted_terms()]

    @staticmethod
    def from_json(data) -> "Character":
        return Character({Weight.from_json(t["weight"]): t["mult"] for t in data})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{m}·X^{w}" if m != 1 else f"X^{w}" for w, m in self.sorted_terms())


def qint_X(k: int, shift=0) -> Character:
    """[k]_X = X^{k-1} + X^{k-3} + ... + X^{-(k-1)}, optionally multiplied by X^shift."""
    s = Weight.of(shift)
    return Character({s + (k - 1 - 2 * m): 1 for m in range(max(k, 0))})


# -- the module object -------------------------------------------------------------


@dataclass(eq=False)
class WeightModule:
    backend: object
    weights: list
    E: object
    F: object
    label: str = "module"
    kind: tuple = ()
    values: dict = field(default_factory=dict)
    factors: tuple = ()
    typical: bool = False
    derived: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def ctx(self) -> FieldContext:
        return self.backend.ctx

    @property
    def r(self) -> int:
        return self.backend.r

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def exact(self) -> bool:
        return self.backend.exact

    def __repr__(self):
        return f"WeightModule({self.label}, dim={self.dim}, r={self.r}, {self.backend.name})"

    # weight helpers
    def weight_value(self, i: int):
        w = self.weights[i]
        if self.exact:
            return int(w)
        return w.value(self.values)

    def weight_spaces(self):
        """Ordered mapping weight -> list of basis indices."""
        out = {}
        for i, w in enumerate(self.weights):
            out.setdefault(w, []).append(i)
        return out

    def degree(self):
        """Degree in C/2Z: integer part mod 2 plus the formal symbols."""
        w = self.weights[0]
        return (w.base % 2, w.terms)

    def qpow_diag(self, fn):
        """Diagonal matrix with entries q^{fn(weight)}."""
        B = self.backend
        if self.exact:
            return B.diag([B.qpow(fn(int(w))) for w in self.weights])
        return B.diag([nqpow(self.r, fn(w.value(self.values))) for w in self.weights])

    def H(self):
        B = self.backend
        if self.exact:
            return B.diag([B.scalar(int(w)) for w in self.weights])
        return B.diag([w.value(self.values) for w in self.weights])

    def K(self, power=1):
        return self.qpow_diag(lambda x: power * x)

    def eye(self):
        return self.backend.eye(self.dim)

    def character(self) -> Character:
        return character(self)


def _mk(backend, weights, E_entries, F_entries, **kw):
    n = len(weights)
    E = backend.from_entries(n, n, E_entries)
    F = backend.from_entries(n, n, F_entries)
    return WeightModule(backend, list(weights), E, F, **kw)


def gamma(ctx: FieldContext, n: int, k: int):
    """γ_{n,k} = [k][n-k+1]."""
    return qint(ctx, k) * qint(ctx, n - k + 1)


def _numeric_qnum(r, x):
    return nqpow(r, x) - nqpow(r, -x)


# -- constructors -------------------------------------------------------------------


def simple_S(ctx, n: int, backend: str = "exact") -> WeightModule:
    """Simple highest weight module of dimension n+1."""
    ctx = ctx if isinstance(ctx, FieldContext) else make_field(ctx)
    r = ctx.r
    if not 0 <= n <= r - 1:
        raise InvalidParameter(f"S_n needs 0 <= n <= {r - 1}, got {n}")
    B = get_backend(ctx, backend)
    weights = [Weight(n - 2 * i) for i in range(n + 1)]
    F = [(i + 1, i, B.one) for i in range(n)]
    if B.exact:
        E = [(i - 1, i, qint(ctx, i) * qint(ctx, n + 1 - i)) for i in range(1, n + 1)]
    else:
        d = _numeric_qnum(r, 1) ** 2
        E = [(i - 1, i, _numeric_qnum(r, i) * _numeric_qnum(r, n + 1 - i) / d) for i in range(1, n + 1)]
    kind = ("S", n)
    return _mk(B, weights, E, F, label=f"S_{n}", kind=kind, typical=(n == r - 1))


def _is_typical(alpha, r) -> bool:
    if isinstance(alpha, Weight):
        return bool(alpha.terms) or alpha.base % r == 0
    return alpha % r == 0


def typical_V(ctx, alpha=0, backend: str | None = None, values=None, tol: float = 1e-9) -> WeightModule:
    """r-dimensional module of highest weight alpha + r - 1.

    ``alpha`` is an integer (exact), a :class:`Weight` with formal symbols
    (numeric, needs ``values``) or a complex number (numeric, bound to the
    symbol α).
    """
    ctx = ctx if isinstance(ctx, FieldContext) else make_field(ctx)
    r = ctx.r
    values = dict(values or {})
    if isinstance(alpha, (int, Fraction)) and not isinstance(alpha, bool):
        alpha = Weight.of(alpha)
    elif not isinstance(alpha, Weight):
        z = complex(alpha)
        alpha = Weight.symbol(ALPHA)
        values[ALPHA] = z
        backend = backend or "numeric"
    if alpha.terms:
        if backend == "exact":
            raise UnsupportedExponent("formal weights need the numeric backend")
        backend = "numeric"
        missing = alpha.symbols() - set(values)
        if missing:
            raise KeyError(f"missing-assignment: {sorted(missing)}")
    backend = backend or "exact"
    B = get_backend(ctx, backend, tol)
    weights = [alpha + (r - 1 - 2 * i) for i in range(r)]
    F = [(i + 1, i, B.one) for i in range(r - 1)]
    if B.exact:
        a = int(alpha)
        E = [(i - 1, i, qint(ctx, i) * qint(ctx, i - a)) for i in range(1, r)]
    else:
        a = alpha.value(values)
        d = _numeric_qnum(r, 1) ** 2
        E = [(i - 1, i, _numeric_qnum(r, i) * _numeric_qnum(r, i - a) / d) for i in range(1, r)]
    name = str(alpha)
    return _mk(
        B,
        weights,
        E,
        F,
        label=f"V_{name}",
        kind=("V", alpha),
        values=values,
        typical=_is_typical(alpha, r),
    )


def onedim_C(ctx, k: int, backend: str = "exact") -> WeightModule:
    """One-dimensional module C^H_{kr}: E = F = 0 and H = kr."""
    ctx = ctx if isinstance(ctx, FieldContext) else make_field(ctx)
    B = get_backend(ctx, backend)
    return _mk(B, [Weight(k * ctx.r)], [], [], label=f"C^H_{k * ctx.r}", kind=("C", k))


def sigma_power(ctx, k: int, backend: str = "exact") -> WeightModule:
    """σ^k = C^H_{2kr'}, with r' = r for odd r and r/2 for even r."""
    ctx = ctx if isinstance(ctx, FieldContext) else make_field(ctx)
    m = 2 * k * ctx.r_prime
    if m % ctx.r:
        raise InvalidParameter("σ power not a multiple of r")
    V = onedim_C(ctx, m // ctx.r, backend)
    V.label = f"σ^{k}"
    return V


def projective_P(ctx, i: int, backend: str = "exact") -> WeightModule:
    """Projective cover of S_i.

    Basis order: v^H_i..v^H_{-i}, v^R_{r+j}..v^R_{r-j}, v^L_{j-r}..v^L_{-j-r},
    v^S_i..v^S_{-i} where j = r-2-i (subscript = weight). For i = r-1 this is
    S_{r-1} = V_0.
    """
    ctx = ctx if isinstance(ctx, FieldContext) else make_field(ctx)
    r = ctx.r
    if not 0 <= i <= r - 1:
        raise InvalidParameter(f"P_i needs 0 <= i <= {r - 1}, got {i}")
    if i == r - 1:
        V = simple_S(ctx, r - 1, backend)
        V.label = f"P_{i}"
        V.kind = ("P", i)
        return V
    B = get_backend(ctx, backend)
    j = r - 2 - i
    one = B.one

    def g(n, k):
        val = gamma(ctx, n, k)
        return val if B.exact else complex(val)

    # index helpers: position of the basis vector with the given weight
    H0, R0, L0, S0 = 0, i + 1, i + j + 2, i + 2 * j + 3

    def vH(w):
        return H0 + (i - w) // 2

    def vR(w):
        return R0 + (r + j - w) // 2

    def vL(w):
        return L0 + (j - r - w) // 2

    def vS(w):
        return S0 + (i - w) // 2

    weights = (
        [Weight(i - 2 * k) for k in range(i + 1)]
        + [Weight(r + j - 2 * k) for k in range(j + 1)]
        + [Weight(j - r - 2 * k) for k in range(j + 1)]
        + [Weight(i - 2 * k) for k in range(i + 1)]
    )
    E, F = [], []
    # F on the H, S, L strings lowers the weight by 2
    for k in range(i):
        F.append((vH(i - 2 * k - 2), vH(i - 2 * k), one))
        F.append((vS(i - 2 * k - 2), vS(i - 2 * k), one))
    for k in range(j):
        F.append((vL(j - r - 2 * k - 2), vL(j - r - 2 * k), one))
    F.append((vL(j - r), vH(-i), one))
    F.append((vS(i), vR(r - j), one))
    for k in range(1, j + 1):
        F.append((vR(r - j + 2 * k - 2), vR(r - j + 2 * k), -g(j, k)))
    # E raises the weight by 2
    for k in range(j):
        E.append((vR(r - j + 2 * k + 2), vR(r - j + 2 * k), one))
    E.append((vR(r - j), vH(i), one))
    for k in range(1, i + 1):
        E.append((vH(i - 2 * k + 2), vH(i - 2 * k), g(i, k)))
        E.append((vS(i - 2 * k + 2), vH(i - 2 * k), one))
        E.append((vS(i - 2 * k + 2), vS(i - 2 * k), g(i, k)))
    E.append((vS(-i), vL(j - r), one))
    for k in range(1, j + 1):
        E.append((vL(j - 2 * k - r + 2), vL(j - 2 * k - r), -g(j, k)))
    return _mk(B, weights, E, F, label=f"P_{i}", kind=("P", i))


# -- operations on modules ---------------------------------------------------------------


def _merge_values(V, W):
    vals = dict(V.values)
    for s, z in W.values.items():
        if s in vals and abs(complex(vals[s]) - complex(z)) > 1e-12:
            raise InvalidPair(f"symbol {s} assigned two values")
        vals[s] = z
    return vals


def _common_backend(V, W):
    if V.r != W.r:
        raise InvalidPair("modules over different fields")
    if V.backend.name == W.backend.name:
        return V.backend
    raise InvalidPair("modules on different backends; convert with to_backend")


def to_backend(V: WeightModule, name: str, tol: float = 1e-9) -> WeightModule:
    """Copy of V on another backend (exact -> numeric always works)."""
    if V.backend.name == name:
        return V
    B = get_backend(V.ctx, name, tol)
    if name == "exact":
        raise InvalidParameter("cannot convert numeric modules to exact")
    E = B.from_entries(V.dim, V.dim, ((i, j, complex(v)) for i, j, v in V.backend.entries(V.E)))
    F = B.from_entries(V.dim, V.dim, ((i, j, complex(v)) for i, j, v in V.backend.entries(V.F)))
    factors = tuple(to_backend(X, name, tol) for X in V.factors)
    return WeightModule(B, list(V.weights), E, F, V.label, V.kind, dict(V.values), factors, V.typical)


def tensor(V: WeightModule, W: WeightModule) -> WeightModule:
    """V ⊗ W with basis index a * dim W + b."""
    B = _common_backend(V, W)
    values = _merge_values(V, W)
    IV, IW = V.eye(), W.eye()
    E = IV.kron(W.E) + V.E.kron(W.K())
    F = V.K(-1).kron(W.F) + V.F.kron(IW)
    weights = [a + b for a in V.weights for b in W.weights]
    return WeightModule(
        B,
        weights,
        E,
        F,
        label=f"({V.label}⊗{W.label})",
        kind=("tensor",),
        values=values,
        factors=(V, W),
    )


def tensor_many(*mods: WeightModule) -> WeightModule:
    out = mods[0]
    for M in mods[1:]:
        out = tensor(out, M)
    return out


def dual(V: WeightModule) -> WeightModule:
    """V* on the dual basis; x acts by the transpose of S(x)."""
    if "dual" in V.derived:
        return V.derived["dual"]
    E = -((V.E @ V.K(-1)).T)
    F = -((V.K() @ V.F).T)
    out = WeightModule(
        V.backend,
        [-w for w in V.weights],
        E,
        F,
        label=f"{V.label}*",
        kind=("dual", V.kind),
        values=dict(V.values),
        factors=(),
    )
    V.derived["dual"] = out
    return out


def direct_sum(*mods: WeightModule) -> WeightModule:
    B = mods[0].backend
    values = {}
    for M in mods:
        if M.backend.name != B.name or M.r != B.r:
            raise InvalidPair("direct sum needs one backend")
        values.update(M.values)
    n = sum(M.dim for M in mods)
    Ee, Fe = [], []
    off = 0
    for M in mods:
        for a, b, v in M.backend.entries(M.E):
            Ee.append((a + off, b + off, v))
        for a, b, v in M.backend.entries(M.F):
            Fe.append((a + off, b + off, v))
        off += M.dim
    weights = [w for M in mods for w in M.weights]
    return WeightModule(
        B,
        weights,
        B.from_entries(n, n, Ee),
        B.from_entries(n, n, Fe),
        label="(" + "⊕".join(M.label for M in mods) + ")",
        kind=("sum", tuple(M.dim for M in mods)),
        values=values,
    )


def shifted(V: WeightModule, k: int) -> WeightModule:
    """C^H_{kr} ⊗ V: weights shift by kr and F picks up the sign (-1)^k."""
    sign = -1 if k % 2 else 1
    F = V.F * (V.backend.scalar(sign))
    kind = ("shift", k, V.kind)
    return WeightModule(
        V.backend,
        [w + k * V.r for w in V.weights],
        V.E,
        F,
        label=f"(C^H_{k * V.r}⊗{V.label})" if k else V.label,
        kind=kind if k else V.kind,
        values=dict(V.values),
    )


def character(V: WeightModule) -> Character:
    acc = {}
    for w in V.weights:
        acc[w] = acc.get(w, 0) + 1
    return Character(acc)


# -- axioms ----------------------------------------------------------------------


def _mat_power(M, n, eye):
    out = eye
    for _ in range(n):
        out = out @ M
    return out


def check_module_axioms(V: WeightModule) -> dict:
    """Check the defining relations; returns {relation: bool}."""
    B = V.backend
    r = V.r
    ws = V.weights
    report = {}
    report["weight-grading"] = all(
        (ws[a] - ws[0]).is_integer and (ws[a] - ws[0]).base % 2 == 0 for a in range(V.dim)
    )
    report["[H,E]=2E"] = all(ws[a] == ws[b] + 2 for a, b, _ in B.entries(V.E) if not B.is_zero_scalar(_))
    report["[H,F]=-2F"] = all(ws[a] == ws[b] - 2 for a, b, _ in B.entries(V.F) if not B.is_zero_scalar(_))
    H = V.H()
    report["[H,E]=2E (matrix)"] = B.is_zero(H @ V.E - V.E @ H - V.E * B.scalar(2))
    report["[H,F]=-2F (matrix)"] = B.is_zero(H @ V.F - V.F @ H + V.F * B.scalar(2))
    K, Ki = V.K(), V.K(-1)
    q2 = B.qpow(2)
    qm2 = B.qpow(-2)
    report["KEK^-1=q^2E"] = B.is_zero(K @ V.E @ Ki - V.E * q2)
    report["KFK^-1=q^-2F"] = B.is_zero(K @ V.F @ Ki - V.F * qm2)
    report["KK^-1=1"] = B.is_zero(K @ Ki - V.eye())
    inv = 1 / (B.qpow(1) - B.qpow(-1))
    report["[E,F]"] = B.is_zero(V.E @ V.F - V.F @ V.E - (K - Ki) * inv)
    eye = V.eye()
    report["E^r=0"] = B.is_zero(_mat_power(V.E, r, eye))
    report["F^r=0"] = B.is_zero(_mat_power(V.F, r, eye))
    return report


# -- JSON -------------------------------------------------------------------------


def _mat_to_json(B, M):
    return [[i, j, B.scalar_to_json(v)] for i, j, v in sorted(B.entries(M), key=lambda t: (t[0], t[1]))]


def _mat_from_json(B, n, data, m=None):
    return B.from_entries(n, n if m is None else m, ((i, j, B.scalar_from_json(v)) for i, j, v in data))


def matrix_to_json(B, M) -> dict:
    """Sparse entry list [row, col, scalar] with the shape."""
    return {"shape": list(M.shape), "entries": _mat_to_json(B, M)}


def matrix_from_json(B, data):
    rows, cols = data["shape"]
    return _mat_from_json(B, rows, data["entries"], cols)


def _kind_to_json(kind):
    if not kind:
        return []
    if kind[0] == "V":
        return ["V", kind[1].to_json()]
    if kind[0] == "shift":
        return ["shift", kind[1], _kind_to_json(kind[2])]
    if kind[0] in ("S", "P", "C"):
        return list(kind)
    return None


def _kind_from_json(data):
    if not data:
        return ()
    if data[0] == "V":
        return ("V", Weight.from_json(data[1]))
    if data[0] == "shift":
        return ("shift", int(data[1]), _kind_from_json(data[2]))
    return tuple(data)


def module_to_json(V: WeightModule) -> dict:
    out = {
        "r": V.r,
        "backend": V.backend.name,
        "label": V.label,
        "dim": V.dim,
        "typical": V.typical,
        "weights": [w.to_json() for w in V.weights],
        "E": _mat_to_json(V.backend, V.E),
        "F": _mat_to_json(V.backend, V.F),
    }
    if V.values:
        out["values"] = {s: [complex(z).real, complex(z).imag] for s, z in sorted(V.values.items())}
    kind = _kind_to_json(V.kind)
    if kind:
        out["kind"] = kind
    return out


def module_from_json(data: dict, tol: float = 1e-9) -> WeightModule:
    B = get_backend(int(data["r"]), data.get("backend", "exact"), tol)
    weights = [Weight.from_json(w) for w in data["weights"]]
    n = len(weights)
    if int(data.get("dim", n)) != n:
        raise InvalidParameter("dim does not match the weight list")
    values = {s: complex(z[0], z[1]) for s, z in data.get("values", {}).items()}
    kind = _kind_from_json(data["kind"]) if "kind" in data else ("json",)
    return WeightModule(
        B,
        weights,
        _mat_from_json(B, n, data["E"]),
        _mat_from_json(B, n, data["F"]),
        label=data.get("label", "module"),
        kind=kind,
        values=values,
        typical=bool(data.get("typical", False)),
    )
