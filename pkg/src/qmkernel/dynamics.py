"""Unitary propagators and state evolution.

Internal units fix hbar = 1, so energies are inverse times.  Constant
Hamiltonians are exponentiated through their spectral decomposition, which
keeps the result unitary up to eigensolver error.  Time-dependent
Hamiltonians use the midpoint-exponential composition, second-order
accurate for piecewise-continuous H(t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DensityOperator,
    Operator,
    Tolerances,
    herm_defect,
    validate_density,
)

__all__ = [
    "Hamiltonian",
    "Propagator",
    "unitarity_defect",
    "propagator_const",
    "propagator_td",
    "evolve",
    "evolve_vector",
]


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Energy operator, either constant or a function of time."""

    constant: Operator | None = None
    time_dependent: Callable[[float], Operator] | None = None
    smoothness: str = "piecewise continuous"

    def __post_init__(self):
        if (self.constant is None) == (self.time_dependent is None):
            raise ValueError("provide exactly one of constant or time_dependent")
        if self.constant is not None and herm_defect(self.constant) > DEFAULT_TOL.herm:
            raise ValueError("constant Hamiltonian is not Hermitian")


def unitarity_defect(u: Operator) -> float:
    """Spectral norm of U^dagger U - I."""
    return float(np.linalg.norm(u.mat.conj().T @ u.mat - np.eye(u.dim), 2))


@dataclass(frozen=True, eq=False)
class Propagator:
    """Unitary mapping states at time t0 to states at time t1."""

    u: Operator
    t0: float
    t1: float

    def __post_init__(self):
        defect = unitarity_defect(self.u)
        if defect > DEFAULT_TOL.unitary:
            raise ValueError(f"propagator is not unitary (defect {defect:.3g})")


def _constant_part(h: Operator | Hamiltonian) -> Operator:
    if isinstance(h, Hamiltonian):
        if h.constant is None:
            raise ValueError("expected a constant Hamiltonian")
        return h.constant
    return h


def _sampler(h: Callable[[float], Operator] | Hamiltonian) -> Callable[[float], Operator]:
    if isinstance(h, Hamiltonian):
        if h.time_dependent is None:
            raise ValueError("expected a time-dependent Hamiltonian")
        return h.time_dependent
    return h


def _herm_exp(h: Operator, scale: float, tol: Tolerances) -> np.ndarray:
    """exp(-i h scale) for Hermitian h, via eigendecomposition."""
    defect = herm_defect(h)
    if defect > tol.herm:
        raise ValueError(f"Hamiltonian sample is not Hermitian (defect {defect:.3g})")
    w, v = np.linalg.eigh(h.mat)
    return (v * np.exp(-1j * w * scale)) @ v.conj().T


def propagator_const(
    h: Operator | Hamiltonian,
    t: float,
    t0: float = 0.0,
    tol: Tolerances = DEFAULT_TOL,
) -> Propagator:
    """exp(-i H t) for a constant Hermitian H (duration t starting at t0)."""
    ham = _constant_part(h)
    return Propagator(Operator(_herm_exp(ham, t, tol)), t0, t0 + t)


def propagator_td(
    h: Callable[[float], Operator] | Hamiltonian,
    t0: float,
    t1: float,
    steps: int,
    tol: Tolerances = DEFAULT_TOL,
) -> Propagator:
    """Midpoint-exponential propagator for a time-dependent Hamiltonian.

    Composes exp(-i H(t_k + dt/2) dt) right-to-left in time order;
    second-order accurate in dt for piecewise-continuous H(t).
    """
    if steps < 1:
        raise ValueError("steps must be a positive integer")
    sample = _sampler(h)
    dt = (t1 - t0) / steps
    dim = sample(t0).dim
    u = np.eye(dim, dtype=complex)
    for k in range(steps):
        mid = t0 + (k + 0.5) * dt
        u = _herm_exp(sample(mid), dt, tol) @ u
    return Propagator(Operator(u), t0, t1)


def evolve(rho: DensityOperator, p: Propagator, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """Conjugation U rho U^dagger; the output is re-validated."""
    if rho.dim != p.u.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {p.u.dim}")
    return validate_density(Operator(p.u.mat @ rho.mat @ p.u.mat.conj().T), tol)


def evolve_vector(psi, p: Propagator, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Apply the propagator to a unit vector."""
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    if vec.shape[0] != p.u.dim:
        raise ValueError(f"dimension mismatch: {vec.shape[0]} vs {p.u.dim}")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > tol.unitary:
        raise ValueError(f"state vector norm {norm:.6g} is not 1")
    return p.u.mat @ vec
