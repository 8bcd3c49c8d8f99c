"""Exact dense linear algebra over prime fields GF(p).

Matrices are dense, row-major numpy int64 arrays with entries reduced to
[0, p), wrapped in the immutable :class:`FpMatrix`.  Every routine here is
deterministic and pure: identical inputs give bit-identical outputs.  The
echelon conventions are fixed once (leftmost pivot column, first nonzero
row from the top) so that every higher-level construction that selects
coordinates, complements or coset representatives is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Fp",
    "FpContext",
    "FpMatrix",
    "ModulusMismatch",
    "Subspace",
    "block_diag",
    "cokernel",
    "column_echelon",
    "hstack",
    "is_prime",
    "kernel_basis",
    "kron",
    "rank",
    "rref",
    "solve",
    "solve_matrix",
    "vstack",
]


class ModulusMismatch(ValueError):
    """Raised when operands live over different prime fields."""


def is_prime(p: int) -> bool:
    """Trial-division primality check, sufficient for p < 2**31."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FpContext:
    """A validated prime field GF(p), p < 2**31."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not 2 <= self.p < 2**31:
            raise ValueError(f"modulus must be an int in [2, 2**31): {self.p!r}")
        if not is_prime(self.p):
            raise ValueError(f"modulus must be prime: {self.p}")

    def element(self, value: int) -> "Fp":
        return Fp(value % self.p, self.p)

    def inv(self, value: int) -> int:
        # pow(a, -1, p) runs the extended Euclid inverse in CPython.
        return pow(value % self.p, -1, self.p)

    def matrix(self, data) -> "FpMatrix":
        return FpMatrix(self.p, data)

    def identity(self, d: int) -> "FpMatrix":
        return FpMatrix(self.p, np.eye(d, dtype=np.int64))

    def zeros(self, rows: int, cols: int) -> "FpMatrix":
        return FpMatrix(self.p, np.zeros((rows, cols), dtype=np.int64))


@dataclass(frozen=True)
class Fp:
    """A scalar in GF(p)."""

    value: int
    p: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.p)

    def _check(self, other: "Fp") -> None:
        if self.p != other.p:
            raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")

    def __add__(self, other: "Fp") -> "Fp":
        self._check(other)
        return Fp(self.value + other.value, self.p)

    def __sub__(self, other: "Fp") -> "Fp":
        self._check(other)
        return Fp(self.value - other.value, self.p)

    def __mul__(self, other: "Fp") -> "Fp":
        self._check(other)
        return Fp(self.value * other.value, self.p)

    def inv(self) -> "Fp":
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other: "Fp") -> "Fp":
        self._check(other)
        return self * other.inv()

    def __neg__(self) -> "Fp":
        return Fp(-self.value, self.p)


def _as_array(p: int, data) -> np.ndarray:
    a = np.asarray(data, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError(f"matrix data must be 2-dimensional, got shape {a.shape}")
    return a % p


class FpMatrix:
    """An immutable dense matrix over GF(p)."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, data):
        a = _as_array(p, data)
        a.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def _check(self, other: "FpMatrix") -> None:
        if self.p != other.p:
            raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, (self.a + other.a) % self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, (self.a - other.a) % self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, (-self.a) % self.p)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, (self.a * (c % self.p)) % self.p)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        return FpMatrix(self.p, _matmul_mod(self.a, other.a, self.p))

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.a.T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(
            np.array_equal(self.a, other.a)
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> tuple:
        """Hashable content key; equal keys iff equal matrices."""
        return (self.p, self.shape, self.a.tobytes())

    def is_zero(self) -> bool:
        return bool(np.all(self.a == 0))

    def col(self, j: int) -> np.ndarray:
        return self.a[:, j].copy()

    def take_rows(self, idx) -> "FpMatrix":
        return FpMatrix(self.p, self.a[list(idx), :])

    def take_cols(self, idx) -> "FpMatrix":
        return FpMatrix(self.p, self.a[:, list(idx)])

    def reshape_vec(self) -> np.ndarray:
        """Row-major flattening to a 1-d vector."""
        return self.a.reshape(-1).copy()

    def to_lists(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.a]

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, shape={self.shape})"


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    inner = a.shape[1]
    # int64 is safe while (p-1)^2 * inner < 2**63; fall back to objects otherwise.
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if (p - 1) * (p - 1) * inner < 2**63:
        return (a @ b) % p
    return np.asarray((a.astype(object) @ b.astype(object)) % p, dtype=np.int64)


def hstack(mats: list[FpMatrix]) -> FpMatrix:
    if not mats:
        raise ValueError("hstack of empty list")
    p = mats[0].p
    for m in mats:
        if m.p != p:
            raise ModulusMismatch("mixed moduli in hstack")
    return FpMatrix(p, np.hstack([m.a for m in mats]))


def vstack(mats: list[FpMatrix]) -> FpMatrix:
    if not mats:
        raise ValueError("vstack of empty list")
    p = mats[0].p
    for m in mats:
        if m.p != p:
            raise ModulusMismatch("mixed moduli in vstack")
    return FpMatrix(p, np.vstack([m.a for m in mats]))


def block_diag(p: int, mats: list[FpMatrix]) -> FpMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FpMatrix(p, out)


def kron(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    """Kronecker product; row-major index convention (i*cols_b + j)."""
    if a.p != b.p:
        raise ModulusMismatch("mixed moduli in kron")
    # products of residues stay below 2**62 for p < 2**31
    return FpMatrix(a.p, np.kron(a.a, b.a) % a.p)


def _rref_array(m: np.ndarray, p: int, pivot_limit: int | None = None):
    """In-place reduced row echelon form of a copy of ``m``.

    Pivots are searched left to right; within a column the first nonzero
    row from the top is chosen.  Returns (array, pivot column list).
    ``pivot_limit`` restricts pivot search to the first k columns, which
    is what augmented-solve needs.
    """
    r_mat = m.copy()
    rows, cols = r_mat.shape
    limit = cols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        col = r_mat[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            r_mat[[r, i]] = r_mat[[i, r]]
        piv = int(r_mat[r, c])
        if piv != 1:
            r_mat[r] = (r_mat[r] * pow(piv, -1, p)) % p
        f = r_mat[:, c].copy()
        f[r] = 0
        tgt = np.nonzero(f)[0]
        if tgt.size:
            r_mat[tgt] = (r_mat[tgt] - np.outer(f[tgt], r_mat[r])) % p
        pivots.append(c)
        r += 1
    return r_mat, tuple(pivots)


def rref(m: FpMatrix) -> tuple[FpMatrix, int, list[int]]:
    """Reduced row echelon form.

    Returns:
        (R, rank, pivot_cols).  R is canonical for the row space of ``m``.
    """
    arr, pivots = _rref_array(m.a, m.p)
    return FpMatrix(m.p, arr), len(pivots), pivots


def rank(m: FpMatrix) -> int:
    return rref(m)[1]


def column_echelon(m: FpMatrix) -> tuple[FpMatrix, int, list[int]]:
    """Reduced column echelon form; canonical for the column space.

    Returns:
        (C, rank, pivot_rows).  Column j of C has leading entry 1 in row
        pivot_rows[j]; pivot rows are strictly increasing and each pivot
        row is zero in every other column.
    """
    arr, pivots = _rref_array(m.a.T, m.p)
    r = len(pivots)
    return FpMatrix(m.p, arr[:r].T), r, pivots


def kernel_basis(m: FpMatrix) -> "Subspace":
    """Right kernel {v : m v = 0} as a canonical subspace.

    The basis is in reduced column echelon form, so it depends only on
    the kernel as a subspace, not on the elimination path.
    """
    arr, pivots = _rref_array(m.a, m.p)
    cols = m.cols
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return Subspace(m.p, cols, FpMatrix(m.p, np.zeros((cols, 0), dtype=np.int64)))
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-arr[i, fc]) % m.p
    ech, _, _ = column_echelon(FpMatrix(m.p, basis))
    return Subspace(m.p, cols, ech)


def solve(m: FpMatrix, b) -> np.ndarray | None:
    """One particular solution of m x = b with free variables set to 0.

    Returns None when the system is inconsistent.
    """
    bv = np.asarray(b, dtype=np.int64).reshape(-1) % m.p
    if bv.shape[0] != m.rows:
        raise ValueError("right-hand side length mismatch")
    x = solve_matrix(m, FpMatrix(m.p, bv.reshape(-1, 1)))
    return None if x is None else x.a[:, 0].copy()


def solve_matrix(m: FpMatrix, b: FpMatrix) -> FpMatrix | None:
    """Solve m X = b columnwise (free variables 0); None if any column fails."""
    if m.p != b.p:
        raise ModulusMismatch("mixed moduli in solve")
    if m.rows != b.rows:
        raise ValueError("row count mismatch in solve")
    aug = np.hstack([m.a, b.a])
    arr, pivots = _rref_array(aug, m.p, pivot_limit=m.cols)
    nr = len(pivots)
    # rows below the pivot block must be entirely zero on the b side
    if arr[nr:, m.cols :].size and np.any(arr[nr:, m.cols :]):
        return None
    x = np.zeros((m.cols, b.cols), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = arr[i, m.cols :]
    return FpMatrix(m.p, x)


def cokernel(m: FpMatrix) -> tuple[FpMatrix, FpMatrix]:
    """Projection and section for the cokernel of ``m`` as a map into k^rows.

    The quotient k^rows / im(m) is coordinatized by the non-pivot rows of
    the reduced column echelon form of ``m``.  Returns (proj, section)
    with proj @ m = 0, proj surjective and proj @ section = identity.
    """
    d = m.rows
    basis, r, pivot_rows = column_echelon(m)
    others = [i for i in range(d) if i not in pivot_rows]
    q = len(others)
    proj = np.zeros((q, d), dtype=np.int64)
    for j, row in enumerate(others):
        proj[j, row] = 1
    if r and q:
        # subtract the unique image element matching v on the pivot rows
        corr = np.zeros((q, d), dtype=np.int64)
        bq = basis.a[others, :]
        for i, prow in enumerate(pivot_rows):
            corr[:, prow] = bq[:, i]
        proj = (proj - corr) % m.p
    section = np.zeros((d, q), dtype=np.int64)
    for j, row in enumerate(others):
        section[row, j] = 1
    return FpMatrix(m.p, proj), FpMatrix(m.p, section)


@dataclass(frozen=True)
class Subspace:
    """A subspace of k^ambient_dim given by a canonical echelon basis.

    The basis matrix is in reduced column echelon form with strictly
    increasing pivot rows, hence unique for the subspace.
    """

    p: int
    ambient_dim: int
    basis: FpMatrix

    def __post_init__(self) -> None:
        if self.basis.rows != self.ambient_dim:
            raise ValueError("basis rows must match ambient dimension")

    @property
    def dim(self) -> int:
        return self.basis.cols

    def contains(self, v) -> bool:
        vec = np.asarray(v, dtype=np.int64).reshape(-1) % self.p
        if self.dim == 0:
            return not np.any(vec)
        return solve(self.basis, vec) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return solve_matrix(self.basis, other.basis) is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis.key()))


class _EchelonAccumulator:
    """Incremental span tracker used for greedy complement choices."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows: list[tuple[int, np.ndarray]] = []

    def add(self, vec: np.ndarray) -> bool:
        """Reduce ``vec`` against the span; absorb and report if new."""
        v = np.asarray(vec, dtype=np.int64).reshape(-1) % self.p
        for pos, r in self.rows:
            c = int(v[pos])
            if c:
                v = (v - c * r) % self.p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        pos = int(nz[0])
        v = (v * pow(int(v[pos]), -1, self.p)) % self.p
        self.rows.append((pos, v))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def complement_cols(inside: FpMatrix, ambient_cols: FpMatrix) -> list[int]:
    """Indices of columns of ``ambient_cols`` extending span(inside) greedily.

    Columns are scanned left to right and kept when they enlarge the span;
    the choice is deterministic because the scan order is fixed.
    """
    acc = _EchelonAccumulator(inside.p, inside.rows)
    for j in range(inside.cols):
        acc.add(inside.a[:, j])
    return [j for j in range(ambient_cols.cols) if acc.add(ambient_cols.a[:, j])]
