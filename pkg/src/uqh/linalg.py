"""Sparse exact matrices over Q(zeta_{4r}) and the dense complex backend.

Module code is written against the small interface shared by
:class:`SparseMatrix` and :class:`NumMatrix` (``@``, ``+``, ``-``, scalar
``*``, ``kron``, ``T``); construction, zero-tests and solving go through a
backend object.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalar import CycScalar, FieldContext, nqpow, qpow

__all__ = [
    "SparseMatrix",
    "NumMatrix",
    "ExactBackend",
    "NumericBackend",
    "echelon",
    "nullspace_rows",
    "rank_of_rows",
]


class SparseMatrix:
    """Row-dict sparse matrix with exact entries.

    ``rows[i][j]`` holds nonzero entries only. Entries are CycScalar (or any
    exact field type supporting + * and truth testing, e.g. Fraction).
    """

    __slots__ = ("shape", "rows", "zero", "_cols")

    def __init__(self, shape, rows=None, zero=0):
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows = rows if rows is not None else {}
        self.zero = zero
        self._cols = None

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_entries(cls, shape, entries, zero=0):
        rows = {}
        for i, j, v in entries:
            if v:
                row = rows.setdefault(i, {})
                if j in row:
                    s = row[j] + v
                    if s:
                        row[j] = s
                    else:
                        del row[j]
                else:
                    row[j] = v
        return cls(shape, {i: r for i, r in rows.items() if r}, zero)

    @classmethod
    def identity(cls, n, one, zero=0):
        return cls((n, n), {i: {i: one} for i in range(n)}, zero)

    @classmethod
    def diagonal(cls, values, zero=0):
        n = len(values)
        return cls((n, n), {i: {i: v} for i, v in enumerate(values) if v}, zero)

    def identity_like(self):
        one = self._one()
        return SparseMatrix.identity(self.shape[0], one, self.zero)

    def zeros_like(self):
        return SparseMatrix(self.shape, {}, self.zero)

    def _one(self):
        z = self.zero
        if isinstance(z, CycScalar):
            return z.field.one
        return 1

    # -- access -----------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, self.zero)

    def entries(self):
        for i in sorted(self.rows):
            row = self.rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def column(self, j):
        return {i: row[j] for i, row in self.rows.items() if j in row}

    def columns(self):
        """Column view {j: {i: value}}; cached, matrices are treated as immutable."""
        if self._cols is None:
            cols = {}
            for i, row in self.rows.items():
                for j, v in row.items():
                    cols.setdefault(j, {})[i] = v
            self._cols = cols
        return self._cols

    def apply(self, vec: dict) -> dict:
        """Multiply by a sparse column vector given as {index: value}."""
        cols = self.columns()
        out = {}
        for j, v in vec.items():
            col = cols.get(j)
            if not col:
                continue
            for i, a in col.items():
                t = a * v
                c = out.get(i)
                out[i] = t if c is None else c + t
        return {i: x for i, x in out.items() if x}

    def submatrix(self, row_idx, col_idx):
        rpos = {r: k for k, r in enumerate(row_idx)}
        cpos = {c: k for k, c in enumerate(col_idx)}
        rows = {}
        for r, k in rpos.items():
            row = self.rows.get(r)
            if not row:
                continue
            new = {cpos[c]: v for c, v in row.items() if c in cpos}
            if new:
                rows[k] = new
        return SparseMatrix((len(row_idx), len(col_idx)), rows, self.zero)

    def to_dense(self):
        out = [[self.zero] * self.shape[1] for _ in range(self.shape[0])]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    # -- algebra ---------------------------------------------------------------
    @property
    def T(self):
        rows = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                rows.setdefault(j, {})[i] = v
        return SparseMatrix((self.shape[1], self.shape[0]), rows, self.zero)

    def __matmul__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape-error: {self.shape} @ {other.shape}")
        orows = other.rows
        rows = {}
        for i, row in self.rows.items():
            acc = {}
            for k, a in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for j, b in brow.items():
                    t = a * b
                    c = acc.get(j)
                    acc[j] = t if c is None else c + t
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                rows[i] = acc
        return SparseMatrix((self.shape[0], other.shape[1]), rows, self.zero)

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError(f"shape-error: {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, orow in other.rows.items():
            row = rows.setdefault(i, {})
            for j, v in orow.items():
                c = row.get(j)
                s = (v if sign > 0 else -v) if c is None else (c + v if sign > 0 else c - v)
                if s:
                    row[j] = s
                elif j in row:
                    del row[j]
            if not row:
                del rows[i]
        return SparseMatrix(self.shape, rows, self.zero)

    def __add__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self):
        return SparseMatrix(
            self.shape, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()}, self.zero
        )

    def __mul__(self, c):
        if isinstance(c, SparseMatrix):
            return NotImplemented
        if not c:
            return self.zeros_like()
        rows = {}
        for i, r in self.rows.items():
            new = {j: v * c for j, v in r.items()}
            new = {j: v for j, v in new.items() if v}
            if new:
                rows[i] = new
        return SparseMatrix(self.shape, rows, self.zero)

    __rmul__ = __mul__

    def kron(self, other):
        m2, n2 = other.shape
        rows = {}
        for i1, r1 in self.rows.items():
            for i2, r2 in other.rows.items():
                row = {}
                for j1, a in r1.items():
                    base = j1 * n2
                    for j2, b in r2.items():
                        t = a * b
                        if t:
                            row[base + j2] = t
                if row:
                    rows[i1 * m2 + i2] = row
        return SparseMatrix((self.shape[0] * m2, self.shape[1] * n2), rows, self.zero)

    def is_zero(self):
        return not any(self.rows.values())

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz()})"


class NumMatrix(np.ndarray):
    """Plain complex ndarray; subclass exists only to carry ``kron``/``identity_like``."""

    def __new__(cls, arr):
        return np.asarray(arr, dtype=complex).view(cls)

    def kron(self, other):
        return NumMatrix(np.kron(np.asarray(self), np.asarray(other)))

    def identity_like(self):
        return NumMatrix(np.eye(self.shape[0], dtype=complex))

    def is_zero(self, tol=1e-9):
        return bool(np.all(np.abs(np.asarray(self)) <= tol))


# -- exact elimination ---------------------------------------------------------------


def echelon(rows):
    """Row echelon form of sparse exact rows.

    ``rows`` is an iterable of {col: value}. Returns {pivot_col: row} with each
    pivot row normalised to 1 at its pivot and zero in lower columns.
    """
    pivots = {}
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                inv = 1 / row[c]
                if inv != 1:
                    row = {k: v * inv for k, v in row.items()}
                pivots[c] = row
                break
            f = row.pop(c)
            for k, v in p.items():
                if k == c:
                    continue
                old = row.get(k)
                t = v * f
                if old is None:
                    row[k] = -t
                else:
                    s = old - t
                    if s:
                        row[k] = s
                    else:
                        del row[k]
    return pivots


def rank_of_rows(rows):
    return len(echelon(rows))


def nullspace_rows(rows, ncols, one=1):
    """Basis of {x : row . x = 0 for all rows}, as list of {col: value}."""
    pivots = echelon(rows)
    order = sorted(pivots, reverse=True)
    # back substitution to reduced form
    reduced = {}
    for c in order:
        row = dict(pivots[c])
        for k in [k for k in row if k != c and k in reduced]:
            f = row.pop(k)
            for kk, vv in reduced[k].items():
                if kk == k:
                    continue
                old = row.get(kk)
                t = vv * f
                if old is None:
                    row[kk] = -t
                else:
                    s = old - t
                    if s:
                        row[kk] = s
                    else:
                        del row[kk]
        reduced[c] = row
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = {fcol: one}
        for c, row in reduced.items():
            v = row.get(fcol)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


# -- backends ----------------------------------------------------------------------


class ExactBackend:
    """Exact arithmetic over Q(zeta_{4r}); matrices are SparseMatrix."""

    name = "exact"
    exact = True

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.r = ctx.r
        self.tol = 0.0

    def __eq__(self, other):
        return isinstance(other, ExactBackend) and other.ctx == self.ctx

    def __hash__(self):
        return hash(("exact", self.r))

    def scalar(self, v):
        return self.ctx(v)

    @property
    def one(self):
        return self.ctx.one

    @property
    def zero(self):
        return self.ctx.zero

    def qpow(self, e):
        return qpow(self.ctx, e)

    def zeros(self, m, n):
        return SparseMatrix((m, n), {}, self.ctx.zero)

    def eye(self, n):
        return SparseMatrix.identity(n, self.ctx.one, self.ctx.zero)

    def diag(self, values):
        return SparseMatrix.diagonal(list(values), self.ctx.zero)

    def from_entries(self, m, n, entries):
        return SparseMatrix.from_entries((m, n), entries, self.ctx.zero)

    def from_dense(self, rows):
        m = len(rows)
        n = len(rows[0]) if m else 0
        return self.from_entries(
            m, n, ((i, j, self.ctx(v)) for i, r in enumerate(rows) for j, v in enumerate(r))
        )

    def is_zero_scalar(self, x):
        return not x

    def is_zero(self, A):
        return A.is_zero()

    def equal(self, A, B):
        return A == B

    def entries(self, A):
        return A.entries()

    def nullspace(self, A):
        """Column-vector basis (as SparseMatrix columns) of ker A."""
        vecs = nullspace_rows(A.rows.values(), A.shape[1], self.ctx.one)
        return vecs

    def rank(self, A):
        return rank_of_rows(A.rows.values())

    def inverse(self, A):
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError("shape-error: inverse of non-square matrix")
        aug = []
        for i in range(n):
            row = dict(A.rows.get(i, {}))
            row[n + i] = self.ctx.one
            aug.append(row)
        piv = echelon(aug)
        if any(c >= n for c in piv) or len(piv) != n:
            raise ZeroDivisionError("singular matrix")
        out = {}
        for c in sorted(piv, reverse=True):
            row = dict(piv[c])
            for k in [k for k in row if k != c and k < n]:
                f = row.pop(k)
                for kk, vv in out[k].items():
                    old = row.get(kk)
                    t = vv * f
                    s = -t if old is None else old - t
                    if s:
                        row[kk] = s
                    elif kk in row:
                        del row[kk]
            row.pop(c, None)
            out[c] = {kk: vv for kk, vv in row.items()}
        rows = {}
        for c, row in out.items():
            new = {kk - n: vv for kk, vv in row.items() if kk >= n and vv}
            if new:
                rows[c] = new
        return SparseMatrix((n, n), rows, self.ctx.zero)

    def matrix_from_columns(self, n_rows, cols):
        entries = []
        for j, col in enumerate(cols):
            for i, v in col.items():
                entries.append((i, j, v))
        return self.from_entries(n_rows, len(cols), entries)

    def to_complex(self, A):
        out = np.zeros(A.shape, dtype=complex)
        for i, j, v in A.entries():
            out[i, j] = complex(v)
        return out

    def scalar_to_json(self, x):
        return x.to_json()

    def scalar_from_json(self, data):
        return CycScalar.from_json(self.ctx, data)


class NumericBackend:
    """Double-precision complex backend for generic (non-integral) weights."""

    name = "numeric"
    exact = False

    def __init__(self, ctx: FieldContext, tol: float = 1e-9):
        self.ctx = ctx
        self.r = ctx.r
        self.tol = tol

    def __eq__(self, other):
        return isinstance(other, NumericBackend) and other.r == self.r

    def __hash__(self):
        return hash(("numeric", self.r))

    def scalar(self, v):
        return complex(v)

    one = 1.0 + 0j
    zero = 0j

    def qpow(self, e):
        return nqpow(self.r, e)

    def zeros(self, m, n):
        return NumMatrix(np.zeros((m, n), dtype=complex))

    def eye(self, n):
        return NumMatrix(np.eye(n, dtype=complex))

    def diag(self, values):
        return NumMatrix(np.diag(np.array(list(values), dtype=complex)))

    def from_entries(self, m, n, entries):
        out = np.zeros((m, n), dtype=complex)
        for i, j, v in entries:
            out[i, j] += complex(v)
        return NumMatrix(out)

    def from_dense(self, rows):
        return NumMatrix(np.array(rows, dtype=complex))

    def is_zero_scalar(self, x):
        return abs(x) <= self.tol

    def is_zero(self, A):
        return bool(np.all(np.abs(np.asarray(A)) <= self.tol))

    def equal(self, A, B):
        return self.is_zero(np.asarray(A) - np.asarray(B))

    def entries(self, A):
        arr = np.asarray(A)
        for i, j in zip(*np.nonzero(np.abs(arr) > 0)):
            yield int(i), int(j), complex(arr[i, j])

    def nullspace(self, A):
        arr = np.asarray(A)
        n = arr.shape[1]
        if arr.shape[0] == 0:
            return [{j: 1.0 + 0j} for j in range(n)]
        _, s, vh = np.linalg.svd(arr)
        scale = max(1.0, s[0] if len(s) else 1.0)
        rank = int(np.sum(s > self.tol * scale))
        vecs = []
        for row in vh[rank:]:
            v = np.conj(row)
            vecs.append({j: complex(v[j]) for j in range(n) if abs(v[j]) > 1e-14})
        return vecs

    def rank(self, A):
        arr = np.asarray(A)
        if arr.size == 0:
            return 0
        s = np.linalg.svd(arr, compute_uv=False)
        scale = max(1.0, s[0] if len(s) else 1.0)
        return int(np.sum(s > self.tol * scale))

    def inverse(self, A):
        return NumMatrix(np.linalg.inv(np.asarray(A)))

    def matrix_from_columns(self, n_rows, cols):
        out = np.zeros((n_rows, len(cols)), dtype=complex)
        for j, col in enumerate(cols):
            for i, v in col.items():
                out[i, j] = v
        return NumMatrix(out)

    def to_complex(self, A):
        return np.asarray(A, dtype=complex)

    def scalar_to_json(self, x):
        x = complex(x)
        return [x.real, x.imag]

    def scalar_from_json(self, data):
        return complex(data[0], data[1])


def fraction_rank(rows):
    """Rank of a list of dense rows of Fractions."""
    return rank_of_rows(
        [{j: Fraction(v) for j, v in enumerate(row) if v} for row in rows]
    )
