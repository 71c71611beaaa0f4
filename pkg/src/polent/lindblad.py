"""Liouvillian assembly, steady-state solving, and fixed-step time evolution.

Vectorization is column-stacking: vec(A rho B) = (B^T kron A) vec(rho), with
vec(rho) = rho.ravel(order="F").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LindbladModel
from .qops import DensityMatrix, HilbertSpace

GAP_FLOOR = 1e-8
RESIDUAL_TOL = 1e-9
DRIFT_ABORT = 1e-6
DEFAULT_DT = 1e-3


class DegenerateSteadyStateError(Exception):
    """The Liouvillian null space is not one-dimensional within tolerance."""


class IntegrationError(Exception):
    """The fixed-step integrator lost the trace beyond the abort threshold."""


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Superoperator matrix acting on column-stacked density matrices."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        d = self.space.dim
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (d * d, d * d):
            raise ValueError(f"matrix shape {m.shape} does not match space dimension {d}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class SteadyStateResult:
    """Steady state with its defect norm and the uniqueness gap.

    residual is ||L vec(rho)||_2; gap is the second-smallest singular value
    of L, which bounds the distance to a second stationary solution.
    """

    rho: DensityMatrix
    residual: float
    gap: float


def _vec(m: np.ndarray) -> np.ndarray:
    return m.ravel(order="F")


def _unvec(v: np.ndarray, d: int) -> np.ndarray:
    return v.reshape(d, d, order="F")


def build_liouvillian(m: LindbladModel) -> Liouvillian:
    """Assemble -i[H, .] plus the jump dissipators as one superoperator matrix."""
    h = m.hamiltonian
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    mat = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for jump in m.jumps:
        if jump.shape != h.shape:
            raise ValueError(f"jump shape {jump.shape} does not match Hamiltonian {h.shape}")
        jdj = jump.conj().T @ jump
        mat += np.kron(jump.conj(), jump)
        mat -= 0.5 * (np.kron(eye, jdj) + np.kron(jdj.T, eye))
    return Liouvillian(m.space, mat)


def steady_state(liouv: Liouvillian) -> SteadyStateResult:
    """Solve L vec(rho) = 0 with Tr rho = 1 appended, in the least-squares sense.

    Raises DegenerateSteadyStateError when the singular-value probe finds a
    second near-null direction, rather than returning an arbitrary mixture.
    """
    d = liouv.space.dim
    lm = liouv.matrix
    singulars = np.linalg.svd(lm, compute_uv=False)
    gap = float(singulars[-2])
    if gap <= GAP_FLOOR:
        raise DegenerateSteadyStateError(
            f"stationary space is degenerate (gap {gap:.3e} <= {GAP_FLOOR:g})"
        )
    stacked = np.vstack([lm, _vec(np.eye(d, dtype=complex))[None, :]])
    rhs = np.zeros(d * d + 1, dtype=complex)
    rhs[-1] = 1.0
    sol, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)
    mat = _unvec(sol, d)
    mat = 0.5 * (mat + mat.conj().T)
    residual = float(np.linalg.norm(lm @ _vec(mat)))
    if residual > RESIDUAL_TOL:
        raise DegenerateSteadyStateError(
            f"steady-state residual {residual:.3e} exceeds {RESIDUAL_TOL:g}"
        )
    return SteadyStateResult(DensityMatrix(liouv.space, mat), residual, gap)


def evolve(
    m: LindbladModel,
    rho0: DensityMatrix,
    t_final: float,
    dt: float = DEFAULT_DT,
    _observer=None,
) -> DensityMatrix:
    """Propagate rho0 with fixed-step fourth-order Runge-Kutta.

    The state is re-symmetrized once per step; the trace is monitored and
    never renormalized, and drift beyond DRIFT_ABORT aborts the run.
    ``_observer(step, t, matrix, drift)`` is called after every step.
    """
    if rho0.space.dims != m.space.dims:
        raise ValueError("initial state lives on a different space than the model")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    lm = build_liouvillian(m).matrix
    d = m.space.dim
    v = _vec(rho0.matrix.astype(complex))
    nsteps = max(1, int(round(t_final / dt))) if t_final > 0 else 0
    mat = rho0.matrix
    for step in range(1, nsteps + 1):
        k1 = lm @ v
        k2 = lm @ (v + (0.5 * dt) * k1)
        k3 = lm @ (v + (0.5 * dt) * k2)
        k4 = lm @ (v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        mat = _unvec(v, d)
        mat = 0.5 * (mat + mat.conj().T)
        v = _vec(mat)
        drift = abs(np.trace(mat) - 1.0)
        # "not <=" instead of ">" so a NaN trace (overflowed state) also aborts
        if not drift <= DRIFT_ABORT:
            raise IntegrationError(
                f"trace drift {drift:.3e} at t = {step * dt:.6g} exceeds "
                f"{DRIFT_ABORT:g}; reduce dt below {dt:g}"
            )
        if _observer is not None:
            _observer(step, step * dt, mat, drift)
    return DensityMatrix(m.space, mat)
