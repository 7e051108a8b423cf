"""U(1) internal symmetry, charge superselection sectors, and locality checks.

The internal group is U(1) with integer charges, generated by a charge
operator that is diagonal in the computational basis (use
``linalg.conjugate`` to move into that basis first).  Admissible
observables are block-diagonal across charge sectors, equivalently they
commute with every exp(i tau Q).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import Operator, commutator_norm
from .space import Lattice, SpinRep, spin_rotation, translation_unitary

__all__ = [
    "ChargeOperator",
    "SectorDecomposition",
    "SpaceLayout",
    "charge_from_values",
    "u1_unitary",
    "sectors",
    "check_superselection",
    "lift_internal",
    "check_commutes_with_space",
]


@dataclass(frozen=True, eq=False)
class ChargeOperator:
    """Diagonal operator with integer eigenvalues generating U(1)."""

    q: Operator

    def __post_init__(self):
        off = self.q.mat - np.diag(np.diag(self.q.mat))
        if float(np.abs(off).max()) > 1e-10:
            raise ValueError("charge operator must be diagonal in the computational basis")
        diag = np.diag(self.q.mat)
        if float(np.abs(diag.imag).max()) > 1e-10:
            raise ValueError("charge operator must be Hermitian")
        rounded = np.round(diag.real)
        if float(np.abs(diag.real - rounded).max()) > 1e-10:
            raise ValueError("charge eigenvalues must be integers")

    @property
    def dim(self) -> int:
        return self.q.dim

    @property
    def charges(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.round(np.diag(self.q.mat).real))


def charge_from_values(values: Sequence[int]) -> ChargeOperator:
    return ChargeOperator(Operator(np.diag([float(int(v)) for v in values])))


def u1_unitary(q: ChargeOperator, tau: float) -> Operator:
    """exp(i tau Q); 2-pi periodic in tau because the charges are integers."""
    return Operator(np.diag(np.exp(1j * tau * np.array(q.charges))))


@dataclass(frozen=True, eq=False)
class SectorDecomposition:
    """Orthogonal charge-sector projectors, one per distinct eigenvalue."""

    sectors: tuple[tuple[int, Operator], ...]

    @property
    def dim(self) -> int:
        return self.sectors[0][1].dim


def sectors(q: ChargeOperator) -> SectorDecomposition:
    charges = np.array(q.charges)
    out = []
    for value in sorted(set(q.charges)):
        diag = (charges == value).astype(float)
        out.append((int(value), Operator(np.diag(diag))))
    return SectorDecomposition(tuple(out))


def check_superselection(a: Operator, dec: SectorDecomposition, tol: float = 1e-10) -> bool:
    """Whether ``a`` has no matrix elements between distinct charge sectors."""
    if a.dim != dec.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {dec.dim}")
    for qa, pa in dec.sectors:
        for qb, pb in dec.sectors:
            if qa == qb:
                continue
            block = pa.mat @ a.mat @ pb.mat
            if float(np.linalg.norm(block, 2)) > tol:
                return False
    return True


@dataclass(frozen=True, eq=False)
class SpaceLayout:
    """Composite factor layout: internal (x) spin (x) lattice, in that order."""

    internal_dim: int
    spin: SpinRep
    lattice: Lattice

    def __post_init__(self):
        if self.internal_dim < 1:
            raise ValueError("internal dimension must be at least 1")

    @property
    def total_dim(self) -> int:
        return self.internal_dim * self.spin.dim * self.lattice.size


def lift_internal(u: Operator, layout: SpaceLayout) -> Operator:
    """Embed an internal-factor operator into the full composite space."""
    if u.dim != layout.internal_dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {layout.internal_dim}")
    return Operator(np.kron(u.mat, np.eye(layout.spin.dim * layout.lattice.size)))


def _lift_spin(u: Operator, layout: SpaceLayout) -> Operator:
    return Operator(
        np.kron(np.eye(layout.internal_dim), np.kron(u.mat, np.eye(layout.lattice.size)))
    )


def _lift_space(u: Operator, layout: SpaceLayout) -> Operator:
    return Operator(np.kron(np.eye(layout.internal_dim * layout.spin.dim), u.mat))


def check_commutes_with_space(u_int: Operator, layout: SpaceLayout, tol: float = 1e-12) -> bool:
    """Whether an internal symmetry commutes with translations and rotations.

    Accepts either an operator on the internal factor (lifted here) or a
    pre-lifted operator on the full composite, so that incorrectly lifted
    candidates can be probed too.
    """
    if u_int.dim == layout.internal_dim:
        lifted = lift_internal(u_int, layout)
    elif u_int.dim == layout.total_dim:
        lifted = u_int
    else:
        raise ValueError(
            f"layout mismatch: operator dim {u_int.dim} is neither the internal "
            f"dim {layout.internal_dim} nor the composite dim {layout.total_dim}"
        )
    for axis in range(layout.lattice.d):
        step = [0] * layout.lattice.d
        step[axis] = 1
        shift = _lift_space(translation_unitary(layout.lattice, step), layout)
        if commutator_norm(lifted, shift) > tol:
            return False
    for direction in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)):
        rot = _lift_spin(spin_rotation(layout.spin, direction, 1.0), layout)
        if commutator_norm(lifted, rot) > tol:
            return False
    return True
