"""Exact arithmetic in the cyclotomic field Q(zeta_{4r}) and a complex backend.

Elements are stored as integer coordinate vectors in the power basis of
``zeta = exp(i*pi/(2r))`` together with one positive common denominator.
``q = zeta**2 = exp(i*pi/r)``, so every power ``q**(m/2)`` is a power of zeta.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational

__all__ = [
    "FieldContext",
    "CycScalar",
    "InvalidParameter",
    "UnsupportedExponent",
    "MissingAssignment",
    "make_field",
    "cyclotomic_poly",
    "qpow",
    "qnum",
    "qint",
    "qfact",
    "qintfact",
    "cheb_T",
    "numeric_eval",
    "nqpow",
    "nqnum",
]


class InvalidParameter(ValueError):
    """A constructor or operation received a parameter outside its domain."""


class UnsupportedExponent(ValueError):
    """The exact backend cannot represent the requested power of q."""


class MissingAssignment(KeyError):
    """A formal symbol was evaluated without a numeric value."""


def _poly_divmod_int(num, den):
    """Divide integer polynomials (low-to-high coefficients), den monic."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for m, dm in enumerate(den):
                num[k + m] -= c * dm
    return out, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, cyclotomic_poly(d))
            assert not any(rem)
    return tuple(poly)


class FieldContext:
    """The field Q(zeta_N), N = 4r, with q = zeta**2 a primitive 2r-th root."""

    def __init__(self, r: int):
        if not isinstance(r, Integral) or r < 2:
            raise InvalidParameter(f"r must be an integer >= 2, got {r!r}")
        self.r = int(r)
        self.N = 4 * self.r
        self.minpoly = cyclotomic_poly(self.N)
        self.degree = len(self.minpoly) - 1
        self.r_prime = self.r if self.r % 2 else self.r // 2
        d = self.degree
        # x**d = -sum_{m<d} minpoly[m] x**m
        self._tail = [(m, -c) for m, c in enumerate(self.minpoly[:d]) if c]
        self._zpow = []
        vec = [0] * d
        vec[0] = 1
        for _ in range(self.N):
            self._zpow.append(tuple(vec))
            vec = self._shift(vec)
        self.zero = CycScalar(self, (0,) * d, 1)
        self.one = CycScalar(self, self._zpow[0], 1)
        self._inv_cache = {}

    def _shift(self, vec):
        top = vec[-1]
        out = [0] + list(vec[:-1])
        if top:
            for m, c in self._tail:
                out[m] += top * c
        return out

    def __repr__(self):
        return f"FieldContext(r={self.r})"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and other.r == self.r

    def __hash__(self):
        return hash(("FieldContext", self.r))

    def __reduce__(self):
        return (make_field, (self.r,))

    # -- element construction -------------------------------------------
    def zeta_power(self, k: int) -> "CycScalar":
        return CycScalar(self, self._zpow[k % self.N], 1)

    def __call__(self, value) -> "CycScalar":
        if isinstance(value, CycScalar):
            if value.field != self:
                raise InvalidParameter("scalar from a different field")
            return value
        if isinstance(value, Integral):
            return CycScalar(self, (int(value),) + (0,) * (self.degree - 1), 1)
        if isinstance(value, Rational):
            v = Fraction(value)
            return CycScalar(
                self, (v.numerator,) + (0,) * (self.degree - 1), v.denominator
            )
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def from_coords(self, coords) -> "CycScalar":
        fr = [Fraction(c) for c in coords]
        if len(fr) != self.degree:
            raise InvalidParameter("coordinate vector has wrong length")
        den = 1
        for f in fr:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return CycScalar(self, tuple(int(f * den) for f in fr), den)

    # -- reduction of raw products ----------------------------------------
    def _reduce(self, prod):
        d = self.degree
        tail = self._tail
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                base = k - d
                for m, t in tail:
                    prod[base + m] += c * t
        return tuple(prod[:d])

    def to_complex_root(self) -> complex:
        return cmath.exp(1j * math.pi / (2 * self.r))


@lru_cache(maxsize=None)
def make_field(r: int) -> FieldContext:
    """Field context for q = exp(i*pi/r); r >= 2."""
    return FieldContext(r)


def _normalize(num, den):
    if den == 1:
        return num, 1
    g = den
    for c in num:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                return num, den
    if g == den and not any(num):
        return num, 1
    if den < 0:
        g = -g
    return tuple(c // g for c in num), den // g


class CycScalar:
    """Exact element of Q(zeta_{4r})."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: FieldContext, num, den: int = 1):
        num, den = _normalize(tuple(num), den)
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # -- helpers ------------------------------------------------------------
    def _coerce(self, other):
        if type(other) is CycScalar or isinstance(other, CycScalar):
            return other
        if isinstance(other, (Integral, Rational)):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return any(self.num)

    def coords(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return CycScalar(
                self.field, tuple(a + b for a, b in zip(self.num, other.num)), self.den
            )
        d1, d2 = self.den, other.den
        return CycScalar(
            self.field,
            tuple(a * d2 + b * d1 for a, b in zip(self.num, other.num)),
            d1 * d2,
        )

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.field, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if type(other) is not CycScalar:
            if isinstance(other, Integral):
                return CycScalar(self.field, tuple(a * other for a in self.num), self.den)
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        a = self.num
        b = other.num
        nzb = [(j, bj) for j, bj in enumerate(b) if bj]
        if not nzb:
            return self.field.zero
        d = len(a)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in nzb:
                    prod[i + j] += ai * bj
        return CycScalar(self.field, self.field._reduce(prod), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        cache = self.field._inv_cache
        el = cache.get(self.num)
        if el is None:
            el = self.field.from_coords(_poly_inverse_mod(self.num, self.field.minpoly))
            if len(cache) < 500_000:
                cache[self.num] = el
        return el * self.den if self.den != 1 else el

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CycScalar":
        """Image under zeta -> zeta**-1 (complex conjugation)."""
        f = self.field
        out = f.zero
        for k, c in enumerate(self.num):
            if c:
                out = out + f.zeta_power(-k) * c
        return CycScalar(f, out.num, out.den * self.den)

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycScalar):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (Integral, Rational)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.r, self.num, self.den))
        return self._hash

    # -- conversion -----------------------------------------------------------
    def __complex__(self):
        z = self.field.to_complex_root()
        return sum(c * z**k for k, c in enumerate(self.num)) / self.den

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coords()]

    @classmethod
    def from_json(cls, field: FieldContext, data) -> "CycScalar":
        return field.from_coords([Fraction(s) for s in data])

    def rational(self):
        """Return the rational value if the element lies in Q, else None."""
        if any(self.num[1:]):
            return None
        return Fraction(self.num[0], self.den)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coords()):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return "CycScalar(" + (" + ".join(terms) or "0") + f"; r={self.field.r})"


def _poly_inverse_mod(a, m):
    """Inverse of polynomial a modulo m over Q (extended Euclid)."""

    def trim(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    def sub_mul(p, q, c, shift):
        out = list(p) + [Fraction(0)] * max(0, len(q) + shift - len(p))
        for k, qk in enumerate(q):
            out[k + shift] -= c * qk
        return trim(out)

    def mul(p, q):
        if not p or not q:
            return []
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
        return trim(out)

    def add(p, q):
        n = max(len(p), len(q))
        p = list(p) + [Fraction(0)] * (n - len(p))
        q = list(q) + [Fraction(0)] * (n - len(q))
        return trim([x + y for x, y in zip(p, q)])

    r0, r1 = trim([Fraction(c) for c in m]), trim([Fraction(c) for c in a])
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        # polynomial division r0 = quo*r1 + rem
        quo = [Fraction(0)] * (len(r0) - len(r1) + 1)
        rem = list(r0)
        while len(rem) >= len(r1) and rem:
            c = rem[-1] / r1[-1]
            shift = len(rem) - len(r1)
            quo[shift] = c
            rem = sub_mul(rem, r1, c, shift)
        quo = trim(quo)
        r0, r1 = r1, rem
        s0, s1 = s1, add(s0, [-x for x in mul(quo, s1)])
        if not r1:
            raise ZeroDivisionError("element not invertible (not coprime to minpoly)")
    # r1 is a nonzero constant
    c = r1[0]
    inv = [x / c for x in s1]
    # reduce modulo m
    mm = trim([Fraction(x) for x in m])
    while len(inv) >= len(mm):
        cc = inv[-1] / mm[-1]
        inv = sub_mul(inv, mm, cc, len(inv) - len(mm))
    deg = len(m) - 1
    return inv + [Fraction(0)] * (deg - len(inv))


# -- q-combinatorics ------------------------------------------------------------


def _half_integer(e) -> int:
    """Return 2e as an int, raising if e is not a half-integer."""
    if isinstance(e, complex):
        raise UnsupportedExponent(f"exponent {e!r} is not a half-integer")
    two_e = Fraction(e) * 2
    if two_e.denominator != 1:
        raise UnsupportedExponent(f"exponent {e!r} is not a half-integer")
    return int(two_e)


def qpow(ctx: FieldContext, e) -> CycScalar:
    """Exact q**e for a half-integer e (q**(1/2) = zeta)."""
    return ctx.zeta_power(_half_integer(e))


def qnum(ctx: FieldContext, x) -> CycScalar:
    """{x} = q**x - q**-x."""
    return qpow(ctx, x) - qpow(ctx, -Fraction(x))


@lru_cache(maxsize=None)
def _qnum1_inv(ctx: FieldContext) -> CycScalar:
    return qnum(ctx, 1).inverse()


def qint(ctx: FieldContext, x) -> CycScalar:
    """[x] = {x}/{1}."""
    return qnum(ctx, x) * _qnum1_inv(ctx)


def qfact(ctx: FieldContext, n: int) -> CycScalar:
    """{n}! = {n}{n-1}...{1}."""
    out = ctx.one
    for k in range(1, n + 1):
        out = out * qnum(ctx, k)
    return out


def qintfact(ctx: FieldContext, n: int) -> CycScalar:
    """[n]! = [n][n-1]...[1]."""
    out = ctx.one
    for k in range(1, n + 1):
        out = out * qint(ctx, k)
    return out


def cheb_T(r: int, x):
    """Chebyshev polynomial T_r evaluated at a scalar or square matrix.

    Uses T_0 = 1, T_1 = x, T_{k+1} = 2 x T_k - T_{k-1}. Matrices must
    provide ``shape``, ``@`` and an identity via ``identity_like``.
    """
    shape = getattr(x, "shape", None)
    if shape is not None and len(shape) == 2:
        if shape[0] != shape[1]:
            raise ValueError(f"shape-error: Chebyshev argument must be square, got {shape}")
        one = _identity_like(x)
        mul = lambda a, b: a @ b  # noqa: E731
    else:
        one = x ** 0 if not isinstance(x, CycScalar) else x.field.one
        mul = lambda a, b: a * b  # noqa: E731
    if r == 0:
        return one
    prev, cur = one, x
    for _ in range(1, r):
        prev, cur = cur, mul(x, cur) * 2 - prev
    return cur


def _identity_like(m):
    if hasattr(m, "identity_like"):
        return m.identity_like()
    import numpy as np

    return np.eye(m.shape[0], dtype=m.dtype)


# -- numeric backend --------------------------------------------------------------


def nqpow(r: int, e) -> complex:
    """q**e = exp(i*pi*e/r) for arbitrary complex e."""
    return cmath.exp(1j * math.pi * complex(e) / r)


def nqnum(r: int, x) -> complex:
    return nqpow(r, x) - nqpow(r, -complex(x))


def numeric_eval(expr, assignments=None, r: int | None = None) -> complex:
    """Evaluate a q-expression numerically.

    ``expr`` is either a callable taking ``(qp, values)`` where ``qp(e)``
    returns q**e, or a CycScalar (converted directly). ``assignments``
    maps symbol names to complex values; referencing an unassigned symbol
    raises MissingAssignment.
    """
    if isinstance(expr, CycScalar):
        return complex(expr)
    if r is None:
        raise InvalidParameter("r is required for symbolic expressions")
    values = _Assignments(assignments or {})
    return complex(expr(lambda e: nqpow(r, e), values))


class _Assignments(dict):
    def __missing__(self, key):
        raise MissingAssignment(f"symbol {key!r} has no numeric assignment")
