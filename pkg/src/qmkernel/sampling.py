"""Seeded random operators for property checks and reports."""

from __future__ import annotations

import numpy as np

from .linalg import DensityOperator, Operator, validate_density

__all__ = ["random_hermitian", "random_density", "random_state"]


def random_hermitian(rng: np.random.Generator, dim: int) -> Operator:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Operator((a + a.conj().T) / 2.0)


def random_density(rng: np.random.Generator, dim: int) -> DensityOperator:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return validate_density(Operator(rho / np.trace(rho).real))


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)
