"""Matrices over exact rings and their numeric complex128 counterparts.

Exact matrices are plain lists of rows whose entries are MPoly, RatFun,
Fraction, or int; the helpers only assume ring arithmetic with coercion.
Numeric matrices are numpy arrays.  RFMatrix wraps either representation
behind one interface; the free functions are the workhorses and avoid any
per-operation canonicalization beyond what the entry type itself does.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd, lcm as int_lcm

import numpy as np

from .ratfun import RatFun

__all__ = [
    "mat_mul",
    "mat_add",
    "mat_sub",
    "mat_scale",
    "mat_eq",
    "mat_transpose",
    "identity",
    "kron",
    "op_on_slots",
    "partial_trace",
    "rref",
    "nullspace_exact",
    "inverse_exact",
    "solve_unique",
    "bareiss_nullspace",
    "np_op_on_slots",
    "np_partial_trace",
    "np_rank",
    "np_nullspace",
    "np_residual",
    "RFMatrix",
]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = None
            for t in range(k):
                a = Ai[t]
                if not a:
                    continue
                b = B[t][j]
                if not b:
                    continue
                p = a * b
                acc = p if acc is None else acc + p
            row.append(0 if acc is None else acc)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, s):
    return [[s * a for a in row] for row in A]


def mat_eq(A, B) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for a, b in zip(ra, rb):
            if not (a == b):
                return False
    return True


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def kron(A, B):
    na, ma = len(A), len(A[0])
    nb, mb = len(B), len(B[0])
    out = [[0] * (ma * mb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(ma):
            a = A[i][j]
            if not a:
                continue
            for k in range(nb):
                for l in range(mb):
                    b = B[k][l]
                    if b:
                        out[i * nb + k][j * mb + l] = a * b
    return out


def _digits(index: int, dims) -> list[int]:
    out = [0] * len(dims)
    for pos in range(len(dims) - 1, -1, -1):
        out[pos] = index % dims[pos]
        index //= dims[pos]
    return out


def _index(digits, dims) -> int:
    idx = 0
    for d, n in zip(digits, dims):
        idx = idx * n + d
    return idx


def op_on_slots(M, slots, dims):
    """Embed an operator on the chosen tensor slots, identity elsewhere.

    ``M`` acts on the product of ``dims[s] for s in slots`` with the slots in
    the order given; repeated slots are rejected.
    """
    slots = tuple(slots)
    if len(set(slots)) != len(slots):
        raise ValueError("repeated tensor slots")
    sub_dims = [dims[s] for s in slots]
    sub_n = 1
    for d in sub_dims:
        sub_n *= d
    if len(M) != sub_n:
        raise ValueError("operator size does not match the chosen slots")
    rest = [i for i in range(len(dims)) if i not in slots]
    rest_dims = [dims[i] for i in rest]
    rest_n = 1
    for d in rest_dims:
        rest_n *= d
    N = sub_n * rest_n
    out = [[0] * N for _ in range(N)]
    for sr in range(sub_n):
        row_sub = _digits(sr, sub_dims)
        for sc in range(sub_n):
            entry = M[sr][sc]
            if not entry:
                continue
            col_sub = _digits(sc, sub_dims)
            for rest_idx in range(rest_n):
                rd = _digits(rest_idx, rest_dims)
                row_digits = [0] * len(dims)
                col_digits = [0] * len(dims)
                for t, s in enumerate(slots):
                    row_digits[s] = row_sub[t]
                    col_digits[s] = col_sub[t]
                for t, r in enumerate(rest):
                    row_digits[r] = rd[t]
                    col_digits[r] = rd[t]
                out[_index(row_digits, dims)][_index(col_digits, dims)] = entry
    return out


def partial_trace(M, slot: int, dims):
    """Trace out one tensor slot of an exact matrix."""
    n = len(dims)
    keep = [i for i in range(n) if i != slot]
    keep_dims = [dims[i] for i in keep]
    kn = 1
    for d in keep_dims:
        kn *= d
    out = [[0] * kn for _ in range(kn)]
    for r in range(kn):
        rk = _digits(r, keep_dims)
        for c in range(kn):
            ck = _digits(c, keep_dims)
            acc = None
            for s in range(dims[slot]):
                row_digits = [0] * n
                col_digits = [0] * n
                for t, i in enumerate(keep):
                    row_digits[i] = rk[t]
                    col_digits[i] = ck[t]
                row_digits[slot] = s
                col_digits[slot] = s
                e = M[_index(row_digits, dims)][_index(col_digits, dims)]
                if not e:
                    continue
                acc = e if acc is None else acc + e
            out[r][c] = 0 if acc is None else acc
    return out


# exact elimination


def rref(rows):
    """Reduced row echelon form over a field; returns (rows, pivot columns)."""
    R = [list(r) for r in rows]
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if R[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        p = R[r][col]
        R[r] = [x / p for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][col]:
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return R, pivots


def rank_exact(rows) -> int:
    return len(rref(rows)[1])


def nullspace_exact(rows):
    """Basis of the right null space over the entry field."""
    R, pivots = rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][f]
        basis.append(v)
    return basis


def inverse_exact(rows):
    n = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in R[:n]]


def solve_unique(A, b):
    """Solve A x = b insisting on exactly one solution."""
    aug = [list(r) + [v] for r, v in zip(A, b)]
    R, pivots = rref(aug)
    ncols = len(A[0])
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    if len(pivots) != ncols:
        raise ValueError("underdetermined linear system")
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][ncols]
    return x


def bareiss_nullspace(rows):
    """Right null space of a matrix of Fractions via fraction-free elimination.

    Rows are rescaled to integers, the echelon form is computed with the
    two-step division-free rule, and the basis is back-substituted exactly.
    """
    M = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        mult = 1
        for x in fr:
            mult = int_lcm(mult, x.denominator)
        ints = [int(x * mult) for x in fr]
        g = 0
        for x in ints:
            g = int_gcd(g, abs(x))
        if g > 1:
            ints = [x // g for x in ints]
        M.append(ints)
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    prev = 1
    r = 0
    pivots = []
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if M[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        p = M[r][col]
        for i in range(r + 1, nrows):
            f = M[i][col]
            M[i] = [(p * M[i][j] - f * M[r][j]) // prev for j in range(ncols)]
        pivots.append(col)
        prev = p
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            acc = Fraction(0)
            for j in range(pc + 1, ncols):
                if M[i][j] and v[j]:
                    acc += M[i][j] * v[j]
            v[pc] = -acc / M[i][pc]
        basis.append(v)
    return basis


# numeric counterparts


def np_op_on_slots(M: np.ndarray, slots, dims) -> np.ndarray:
    slots = tuple(slots)
    n = len(dims)
    sub_dims = [dims[s] for s in slots]
    T = np.asarray(M, dtype=complex).reshape(sub_dims + sub_dims)
    rest = [i for i in range(n) if i not in slots]
    for i in rest:
        eye = np.eye(dims[i], dtype=complex)
        T = np.tensordot(T, eye, axes=0)
    # axis layout: slot outs, slot ins, then (out, in) pairs for each rest slot
    k = len(slots)
    src_out = list(range(k)) + [2 * k + 2 * t for t in range(len(rest))]
    src_in = list(range(k, 2 * k)) + [2 * k + 2 * t + 1 for t in range(len(rest))]
    order_sites = list(slots) + rest
    perm_out = [src_out[order_sites.index(i)] for i in range(n)]
    perm_in = [src_in[order_sites.index(i)] for i in range(n)]
    T = np.transpose(T, perm_out + perm_in)
    N = 1
    for d in dims:
        N *= d
    return T.reshape(N, N)


def np_partial_trace(M: np.ndarray, slot: int, dims) -> np.ndarray:
    n = len(dims)
    T = np.asarray(M, dtype=complex).reshape(list(dims) * 2)
    T = np.trace(T, axis1=slot, axis2=n + slot)
    keep = [d for i, d in enumerate(dims) if i != slot]
    N = 1
    for d in keep:
        N *= d
    return T.reshape(N, N)


def np_rank(M: np.ndarray, rtol: float = 1e-9) -> int:
    s = np.linalg.svd(np.asarray(M, dtype=complex), compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def np_nullspace(M: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the right null space, singular values below
    ``rtol`` relative to the largest treated as zero.  Rows are the basis."""
    M = np.asarray(M, dtype=complex)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    ncols = M.shape[1]
    smax = s[0] if s.size else 0.0
    null_rows = [i for i in range(ncols) if i >= s.size or s[i] <= rtol * smax]
    return vh[null_rows, :].conj() if null_rows else np.zeros((0, ncols), dtype=complex)


def np_residual(A: np.ndarray, B: np.ndarray) -> float:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(A))), float(np.max(np.abs(B))))
    return float(np.max(np.abs(A - B))) / scale


class RFMatrix:
    """Matrix facade over exact RatFun rows or a numeric numpy array."""

    __slots__ = ("mode", "rows", "arr")

    def __init__(self, data, mode: str | None = None):
        if isinstance(data, np.ndarray) or mode == "numeric":
            object.__setattr__(self, "mode", "numeric")
            object.__setattr__(self, "arr", np.asarray(data, dtype=complex))
            object.__setattr__(self, "rows", None)
        else:
            coerced = [[_entry(x) for x in row] for row in data]
            object.__setattr__(self, "mode", "exact")
            object.__setattr__(self, "rows", coerced)
            object.__setattr__(self, "arr", None)

    def __setattr__(self, *a):
        raise AttributeError("RFMatrix is immutable")

    @property
    def shape(self):
        if self.mode == "numeric":
            return self.arr.shape
        return (len(self.rows), len(self.rows[0]))

    def entry(self, i: int, j: int):
        return self.arr[i, j] if self.mode == "numeric" else self.rows[i][j]

    def _other(self, other) -> "RFMatrix":
        if not isinstance(other, RFMatrix):
            raise TypeError("expected an RFMatrix")
        if other.mode != self.mode:
            raise ValueError("mixed exact and numeric matrices")
        return other

    def __matmul__(self, other):
        other = self._other(other)
        if self.mode == "numeric":
            return RFMatrix(self.arr @ other.arr)
        return RFMatrix(mat_mul(self.rows, other.rows))

    def __add__(self, other):
        other = self._other(other)
        if self.mode == "numeric":
            return RFMatrix(self.arr + other.arr)
        return RFMatrix(mat_add(self.rows, other.rows))

    def __sub__(self, other):
        other = self._other(other)
        if self.mode == "numeric":
            return RFMatrix(self.arr - other.arr)
        return RFMatrix(mat_sub(self.rows, other.rows))

    def scale(self, s) -> "RFMatrix":
        if self.mode == "numeric":
            return RFMatrix(self.arr * complex(s))
        return RFMatrix(mat_scale(self.rows, _entry(s)))

    def __eq__(self, other):
        if not isinstance(other, RFMatrix) or other.mode != self.mode:
            return NotImplemented
        if self.mode == "numeric":
            return bool(np.array_equal(self.arr, other.arr))
        return mat_eq(self.rows, other.rows)

    def transpose(self) -> "RFMatrix":
        if self.mode == "numeric":
            return RFMatrix(self.arr.T)
        return RFMatrix(mat_transpose(self.rows))

    def kron(self, other) -> "RFMatrix":
        other = self._other(other)
        if self.mode == "numeric":
            return RFMatrix(np.kron(self.arr, other.arr))
        return RFMatrix(kron(self.rows, other.rows))

    def partial_trace(self, slot: int, dims) -> "RFMatrix":
        if self.mode == "numeric":
            return RFMatrix(np_partial_trace(self.arr, slot, dims))
        return RFMatrix(partial_trace(self.rows, slot, dims))

    def inverse(self) -> "RFMatrix":
        if self.mode == "numeric":
            return RFMatrix(np.linalg.inv(self.arr))
        return RFMatrix(inverse_exact(self.rows))

    def rank(self, rtol: float = 1e-9) -> int:
        if self.mode == "numeric":
            return np_rank(self.arr, rtol)
        return rank_exact(self.rows)

    def nullspace(self, rtol: float = 1e-9):
        if self.mode == "numeric":
            return np_nullspace(self.arr, rtol)
        if all(x.is_const() for row in self.rows for x in row):
            fr = [[x.as_fraction() for x in row] for row in self.rows]
            return [[RatFun(v) for v in vec] for vec in bareiss_nullspace(fr)]
        return nullspace_exact(self.rows)

    def eval_complex(self, mapping: dict) -> "RFMatrix":
        if self.mode == "numeric":
            return self
        return RFMatrix(
            np.array(
                [[x.eval_complex(mapping) for x in row] for row in self.rows],
                dtype=complex,
            )
        )

    def map(self, f) -> "RFMatrix":
        if self.mode == "numeric":
            raise ValueError("map applies to exact matrices")
        return RFMatrix([[f(x) for x in row] for row in self.rows])

    def __str__(self):
        if self.mode == "numeric":
            return str(self.arr)
        body = "; ".join(", ".join(str(x) for x in row) for row in self.rows)
        return f"[{body}]"

    def __repr__(self):
        return f"RFMatrix({self})"


def _entry(x) -> RatFun:
    if isinstance(x, RatFun):
        return x
    return RatFun(x)
