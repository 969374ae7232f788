"""Dense linear algebra over F_q on integer-coded numpy arrays."""

from __future__ import annotations

from functools import cache

import numpy as np

from .gf import FieldSpec


def as_matrix(rows, ncols: int | None = None) -> np.ndarray:
    arr = np.array(rows, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(0 if arr.size == 0 else 1, -1)
    if arr.size == 0 and ncols is not None:
        arr = np.zeros((0, ncols), dtype=np.int64)
    return arr


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


@cache
def _digits(F: FieldSpec) -> tuple[np.ndarray, np.ndarray]:
    d = np.array([F.coords(a) for a in range(F.q)], dtype=np.int64).reshape(F.q, F.m)
    return d, F.p ** np.arange(F.m, dtype=np.int64)


def matmul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product over F_q.

    Splits A by value: A = sum_c c * [A == c].  Each term becomes an ordinary
    0/1 matrix product against the base-p digits of c * B, accumulated in
    float64 (exact far beyond these sizes) and reduced mod p at the end.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    rows, inner = A.shape
    cols = B.shape[1]
    digits, weights = _digits(F)
    acc = np.zeros((rows, cols * F.m), dtype=np.float64)
    for c in np.unique(A):
        if c == 0:
            continue
        mask = (A == c).astype(np.float64)
        scaled = digits[F.mul_table[c][B]].reshape(inner, cols * F.m).astype(np.float64)
        acc += mask @ scaled
    return (acc.astype(np.int64) % F.p).reshape(rows, cols, F.m) @ weights


def sparse_product(F: FieldSpec, V: np.ndarray, coo: tuple[np.ndarray, np.ndarray, np.ndarray],
                   ncols: int) -> np.ndarray:
    """V @ G for G given as (row indices, column indices, values)."""
    V = np.asarray(V, dtype=np.int64)
    rows_idx, cols_idx, vals = coo
    digits, weights = _digits(F)
    acc = np.zeros((V.shape[0], ncols, F.m), dtype=np.int64)
    prod = F.mul_table[V[:, rows_idx], vals[None, :]]
    np.add.at(acc, (slice(None), cols_idx), digits[prod])
    return (acc % F.p) @ weights


def to_coo(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r, c = np.nonzero(M)
    return r, c, np.asarray(M)[r, c]


def matvec(F: FieldSpec, v: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Row vector times matrix."""
    return matmul(F, np.asarray(v, dtype=np.int64)[None, :], A)[0]


def scale(F: FieldSpec, c: int, A: np.ndarray) -> np.ndarray:
    return F.mul_table[c, np.asarray(A, dtype=np.int64)]


def add(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.add_table[np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)]


def rref(F: FieldSpec, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    nrows, ncols = R.shape
    add, mul, neg, inv = F.add_table, F.mul_table, F.neg_table, F.inv_table
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = mul[inv[R[row, col]], R[row]]
        coeffs = R[:, col].copy()
        coeffs[row] = 0
        hit = np.nonzero(coeffs)[0]
        if hit.size:
            R[hit] = add[R[hit], mul[neg[coeffs[hit]][:, None], R[row][None, :]]]
        pivots.append(col)
        row += 1
    return R[:row], pivots


def rank(F: FieldSpec, M: np.ndarray) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def is_invertible(F: FieldSpec, M: np.ndarray) -> bool:
    M = np.asarray(M)
    return M.shape[0] == M.shape[1] and rank(F, M) == M.shape[0]


def inverse(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    R, piv = rref(F, np.hstack([M, identity(n)]))
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular over F_q")
    return R[:, n:]


def determinant(F: FieldSpec, M: np.ndarray) -> int:
    R = np.array(M, dtype=np.int64, copy=True)
    n = R.shape[0]
    det = 1
    for col in range(n):
        nz = np.nonzero(R[col:, col])[0]
        if nz.size == 0:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            R[[col, piv]] = R[[piv, col]]
            det = F.neg(det)
        det = F.mul(det, int(R[col, col]))
        ic = F.inv(int(R[col, col]))
        for r in range(col + 1, n):
            if R[r, col]:
                c = F.neg(F.mul(int(R[r, col]), ic))
                R[r] = F.add_table[R[r], F.mul_table[c, R[col]]]
    return det


def nullspace(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return identity(ncols)
    R, piv = rref(F, M)
    free = [c for c in range(ncols) if c not in piv]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(piv):
            basis[k, pc] = F.neg(int(R[r, f]))
    return basis


class Subspace:
    """A subspace of F_q^d held in canonical reduced row echelon form."""

    def __init__(self, F: FieldSpec, ambient: int, rows=()):
        self.field = F
        self.ambient = ambient
        M = as_matrix(rows, ambient) if len(rows) else np.zeros((0, ambient), dtype=np.int64)
        if M.shape[1] != ambient:
            raise ValueError("row length does not match the ambient dimension")
        self.basis, self.pivots = rref(F, M) if M.shape[0] else (M, [])

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient == other.ambient
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.ambient, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64)
        if not v.any():
            return True
        return rank(self.field, np.vstack([self.basis, v[None, :]])) == self.dim

    def contains_space(self, other: Subspace) -> bool:
        return (self + other).dim == self.dim

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace(self.field, self.ambient, np.vstack([self.basis, other.basis]))

    def intersection(self, other: Subspace) -> Subspace:
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.field, self.ambient)
        # x U = y W  <=>  (x, y) [U; -W] = 0
        stacked = np.vstack([self.basis, self.field.neg_table[other.basis]])
        kern = nullspace(self.field, stacked.T)
        if kern.shape[0] == 0:
            return Subspace(self.field, self.ambient)
        vecs = matmul(self.field, kern[:, : self.dim], self.basis)
        return Subspace(self.field, self.ambient, vecs)
