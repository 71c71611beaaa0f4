"""Exact steady state of the reduced two-qubit model.

The density matrix is parametrized by 15 real numbers (populations A, E, H
and seven complex coherences split into real/imaginary parts); stationarity
turns into 16 real linear equations in those 15 unknowns, one of which is
redundant. The zero-xi2 branch has a closed-form solution, implemented here
from its printed formulas so it can cross-check the assembled linear system,
which is in turn independent of the superoperator route in lindblad.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass

import numpy as np

from .qops import TWO_QUBITS, DensityMatrix

POPULATION_SLACK = 1e-10
SOLVE_RESIDUAL_TOL = 1e-10

_FIELDS = ("a", "b1", "b2", "c1", "c2", "d1", "d2", "e", "f1", "f2", "g1", "g2", "h", "i1", "i2")
_IDX = {name: k for k, name in enumerate(_FIELDS)}


class DegenerateSystemError(Exception):
    """The stationarity system lost rank or failed to reach a consistent solution."""


@dataclass(frozen=True)
class RhoParametrization:
    """Real components of a two-qubit density matrix in the {ee, ge, eg, gg} basis.

    a, e, h are the ee, ge, eg populations (gg is 1 - a - e - h); the pairs
    (b1, b2) ... (i1, i2) are the real and imaginary parts of the upper
    triangle, row by row.
    """

    a: float
    b1: float
    b2: float
    c1: float
    c2: float
    d1: float
    d2: float
    e: float
    f1: float
    f2: float
    g1: float
    g2: float
    h: float
    i1: float
    i2: float

    def __post_init__(self):
        for name in ("a", "e", "h"):
            if getattr(self, name) < -POPULATION_SLACK:
                raise ValueError(f"population {name} = {getattr(self, name):.6g} is negative")
        total = self.a + self.e + self.h
        if total > 1.0 + POPULATION_SLACK:
            raise ValueError(f"populations a + e + h = {total:.6g} exceed 1")


def to_density_matrix(p: RhoParametrization) -> DensityMatrix:
    """Assemble the Hermitian 4x4 matrix; raises InvalidStateError if not PSD."""
    m = np.array(
        [
            [p.a, p.b1 + 1j * p.b2, p.c1 + 1j * p.c2, p.d1 + 1j * p.d2],
            [p.b1 - 1j * p.b2, p.e, p.f1 + 1j * p.f2, p.g1 + 1j * p.g2],
            [p.c1 - 1j * p.c2, p.f1 - 1j * p.f2, p.h, p.i1 + 1j * p.i2],
            [p.d1 - 1j * p.d2, p.g1 - 1j * p.g2, p.i1 - 1j * p.i2, 1.0 - p.a - p.e - p.h],
        ],
        dtype=complex,
    )
    return DensityMatrix(TWO_QUBITS, m)


def _from_matrix(m: np.ndarray) -> RhoParametrization:
    # inverse of to_density_matrix's layout; drops the redundant gg entry
    return RhoParametrization(
        a=m[0, 0].real,
        b1=m[0, 1].real, b2=m[0, 1].imag,
        c1=m[0, 2].real, c2=m[0, 2].imag,
        d1=m[0, 3].real, d2=m[0, 3].imag,
        e=m[1, 1].real,
        f1=m[1, 2].real, f2=m[1, 2].imag,
        g1=m[1, 3].real, g2=m[1, 3].imag,
        h=m[2, 2].real,
        i1=m[2, 3].real, i2=m[2, 3].imag,
    )


def closed_form(zeta: float, xi1: float) -> RhoParametrization:
    """Closed-form steady-state parameters on the xi2 = 0 branch."""
    d = zeta**2 + (1.0 + 2.0 * xi1**2) ** 2
    return RhoParametrization(
        a=xi1**4 / d,
        b1=0.0,
        b2=-(xi1**3) / d,
        c1=0.0,
        c2=-(xi1**3) / d,
        d1=-(xi1**2) / d,
        d2=zeta * xi1**2 / d,
        e=(xi1**2 + xi1**4) / d,
        f1=xi1**2 / d,
        f2=0.0,
        g1=-zeta * xi1 / d,
        g2=-(xi1 + xi1**3) / d,
        h=(xi1**2 + xi1**4) / d,
        i1=-zeta * xi1 / d,
        i2=-(xi1 + xi1**3) / d,
    )


def _system(zeta: float, xi1: float, xi2: float) -> tuple[np.ndarray, np.ndarray]:
    """The 16x15 stationarity system M p = b.

    Row order follows the matrix entries whose time derivatives vanish:
    (11, Re 12, Im 12, Re 13, Im 13, Re 14, Im 14, 22, Re 23, Im 23,
    Re 24, Im 24, 33, Re 34, Im 34, 44). Shared verbatim by
    solve_linear_system and residual so a transcription slip cannot
    self-confirm against the independent closed form.
    """
    m = np.zeros((16, 15))
    b = np.zeros(16)

    def row(r, **terms):
        for name, coeff in terms.items():
            m[r, _IDX[name]] = coeff

    row(0, a=-4, b1=2 * xi2, b2=-2 * xi1, c1=2 * xi2, c2=-2 * xi1)
    row(1, a=-xi2, b1=-3, c2=-zeta, d1=xi2, d2=-xi1, e=xi2, f1=xi2, f2=-xi1)
    row(2, a=xi1, b2=-3, c1=zeta, d1=xi1, d2=xi2, e=-xi1, f1=-xi1, f2=-xi2)
    row(3, a=-xi2, b2=-zeta, c1=-3, d1=xi2, d2=-xi1, f1=xi2, f2=xi1, h=xi2)
    row(4, a=xi1, b1=zeta, c2=-3, d1=xi1, d2=xi2, f1=-xi1, f2=xi2, h=-xi1)
    row(5, b1=-xi2, b2=-xi1, c1=-xi2, c2=-xi1, d1=-2, g1=xi2, g2=xi1, i1=xi2, i2=xi1)
    row(6, b1=xi1, b2=-xi2, c1=xi1, c2=-xi2, d2=-2, g1=-xi1, g2=xi2, i1=-xi1, i2=xi2)
    row(7, a=2, b1=-2 * xi2, b2=2 * xi1, e=-2, f2=-2 * zeta, g1=2 * xi2, g2=-2 * xi1)
    row(8, b1=-xi2, b2=xi1, c1=-xi2, c2=xi1, f1=-2, g1=xi2, g2=-xi1, i1=xi2, i2=-xi1)
    row(9, b1=xi1, b2=xi2, c1=-xi1, c2=-xi2, e=zeta, f2=-2, g1=xi1, g2=xi2, h=-zeta,
        i1=-xi1, i2=-xi2)
    row(10, a=-xi2, c1=2, d1=-xi2, d2=xi1, e=-2 * xi2, f1=-xi2, f2=-xi1, g1=-1, h=-xi2,
        i2=zeta)
    row(11, a=xi1, c2=2, d1=-xi1, d2=-xi2, e=2 * xi1, f1=xi1, f2=-xi2, g2=-1, h=xi1,
        i1=-zeta)
    row(12, a=2, c1=-2 * xi2, c2=2 * xi1, f2=2 * zeta, h=-2, i1=2 * xi2, i2=-2 * xi1)
    row(13, a=-xi2, b1=2, d1=-xi2, d2=xi1, e=-xi2, f1=-xi2, f2=xi1, g2=zeta, h=-2 * xi2,
        i1=-1)
    row(14, a=xi1, b2=2, d1=-xi1, d2=-xi2, e=xi1, f1=xi1, f2=xi2, g1=-zeta, h=2 * xi1,
        i2=-1)
    row(15, e=2, g1=-2 * xi2, g2=2 * xi1, h=2, i1=-2 * xi2, i2=2 * xi1)

    # the drive enters inhomogeneously through the 24 and 34 coherences
    b[10] = -xi2
    b[11] = xi1
    b[13] = -xi2
    b[14] = xi1
    return m, b


def solve_linear_system(zeta: float, xi1: float, xi2: float) -> RhoParametrization:
    """Least-squares solution of the 16-equation system (consistent by construction)."""
    m, b = _system(zeta, xi1, xi2)
    sol, _, rank, _ = np.linalg.lstsq(m, b, rcond=None)
    if rank < 15:
        raise DegenerateSystemError(f"stationarity system has rank {rank} < 15")
    defect = float(np.linalg.norm(m @ sol - b))
    if defect > SOLVE_RESIDUAL_TOL * max(1.0, float(np.linalg.norm(b))):
        raise DegenerateSystemError(f"inconsistent solve, residual {defect:.3e}")
    return RhoParametrization(*sol)


def residual(zeta: float, xi1: float, xi2: float, p: RhoParametrization) -> float:
    """Euclidean norm of all 16 stationarity equations at the given parameters."""
    m, b = _system(zeta, xi1, xi2)
    return float(np.linalg.norm(m @ np.array(astuple(p)) - b))
