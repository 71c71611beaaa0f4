"""Dense operator primitives for small multipartite quantum systems.

Subsystems are indexed little-endian: subsystem 0 varies fastest in the
composite basis. With the single-qubit basis ordered {|e>, |g>} this makes
the two-qubit basis {|ee>, |ge>, |eg>, |gg>}, the first letter being qubit 1,
and an operator acting on qubit 1 alone is kron(identity, op).
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass

import numpy as np

# validation tolerances for double precision at dimension <= a few hundred
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_FLOOR = -1e-8

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)  # +1 on |e>
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |g><e|
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g|
for _m in (IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, SIGMA_MINUS, SIGMA_PLUS):
    _m.setflags(write=False)
del _m


class InvalidStateError(Exception):
    """A density-matrix invariant (shape, Hermiticity, trace, positivity) failed."""


@dataclass(frozen=True)
class HilbertSpace:
    """Composite Hilbert space as a tuple of subsystem dimensions, fastest first."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must all be >= 2, got {dims!r}")
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)


TWO_QUBITS = HilbertSpace((2, 2))


def _as_matrix(op) -> np.ndarray:
    if isinstance(op, np.ndarray):
        return op
    return op.matrix


@dataclass(frozen=True, eq=False)
class Operator:
    """A square matrix tied to a HilbertSpace; not required to be Hermitian."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = self.space.dim
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match space dimension {d}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated quantum state: Hermitian, unit trace, positive within PSD_FLOOR."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = self.space.dim
        if m.shape != (d, d):
            raise InvalidStateError(f"matrix shape {m.shape} does not match space dimension {d}")
        if np.linalg.norm(m - m.conj().T) > HERMITICITY_TOL:
            raise InvalidStateError("density matrix is not Hermitian within tolerance")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace {tr:.6g} differs from 1 beyond tolerance")
        lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
        if lo < PSD_FLOOR:
            raise InvalidStateError(f"negative eigenvalue {lo:.3e} below the PSD floor")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def kron(a, b) -> np.ndarray:
    """Kronecker product; the first factor carries the slower composite index."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def partial_transpose(rho, subsystem: int) -> Operator:
    """Transpose the indices of one subsystem.

    Preserves trace and Hermiticity exactly (index moves plus conjugation);
    the result need not be positive, which is the point of the map.
    """
    space = rho.space
    dims = space.dims
    n = len(dims)
    if not 0 <= subsystem < n:
        raise ValueError(f"subsystem index {subsystem} outside 0..{n - 1}")
    rev = dims[::-1]
    t = _as_matrix(rho).reshape(rev + rev)
    # axis of subsystem k: row block n-1-k, column block 2n-1-k
    t = np.swapaxes(t, n - 1 - subsystem, 2 * n - 1 - subsystem)
    d = space.dim
    return Operator(space, t.reshape(d, d))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep`` (indices, any order)."""
    dims = rho.space.dims
    n = len(dims)
    kept = sorted({int(k) for k in keep})
    if not kept:
        raise ValueError("keep set must be nonempty")
    if kept[0] < 0 or kept[-1] >= n:
        raise ValueError(f"keep indices {kept} outside 0..{n - 1}")
    rev = dims[::-1]
    t = _as_matrix(rho).reshape(rev + rev)
    letters = iter(string.ascii_lowercase)
    row, col = {}, {}
    for k in range(n):
        if k in kept:
            row[k] = next(letters)
            col[k] = next(letters)
        else:
            row[k] = col[k] = next(letters)  # repeated letter contracts the pair
    src = "".join(row[k] for k in reversed(range(n))) + "".join(col[k] for k in reversed(range(n)))
    dst = "".join(row[k] for k in reversed(kept)) + "".join(col[k] for k in reversed(kept))
    out = np.einsum(f"{src}->{dst}", t)
    d = math.prod(dims[k] for k in kept)
    return DensityMatrix(HilbertSpace(tuple(dims[k] for k in kept)), out.reshape(d, d))


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns). Rejects input
    whose anti-Hermitian part exceeds HERMITICITY_TOL relative to its norm.
    """
    mat = np.asarray(_as_matrix(m), dtype=complex)
    scale = max(1.0, np.linalg.norm(mat))
    if np.linalg.norm(mat - mat.conj().T) > HERMITICITY_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(mat)
    return w, v


def eig_general(m) -> np.ndarray:
    """Full complex spectrum of an arbitrary square matrix (eigenvalues only)."""
    return np.linalg.eigvals(np.asarray(_as_matrix(m), dtype=complex))


def trace_distance(a, b) -> float:
    """Half the trace norm of (a - b) for Hermitian a, b."""
    diff = _as_matrix(a) - _as_matrix(b)
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))
