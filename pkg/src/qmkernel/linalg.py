"""Dense complex operator arithmetic, validation, and spectral machinery.

Everything downstream (instruments, propagators, lattice representations,
CHSH scans) builds on the value types defined here.  All values are
immutable after construction and every function is pure, so the whole
module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Operator",
    "DensityOperator",
    "DensityValidationError",
    "SpectralDecomposition",
    "identity",
    "zero",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "pauli_dot",
    "ket_projector",
    "operator_norm",
    "herm_defect",
    "commutator_norm",
    "conjugate",
    "expectation",
    "density_violations",
    "validate_density",
    "spectral",
    "hermitian_sqrt",
    "operator_to_json",
    "operator_from_json",
]


@dataclass(frozen=True)
class Tolerances:
    """Absolute numerical tolerances shared across the package.

    Defaults give double-precision spectral accuracy with headroom.
    """

    trace: float = 1e-10
    herm: float = 1e-10
    psd: float = 1e-10
    recon: float = 1e-9
    degen: float = 1e-8
    unitary: float = 1e-9
    prob: float = 1e-12


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class Operator:
    """A dense complex square matrix on a Hilbert space of dimension ``dim``."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {mat.shape}")
        if mat.shape[0] < 1:
            raise ValueError("operator dimension must be at least 1")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.mat.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def _check_dim(self, other: "Operator") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_dim(other)
        return Operator(self.mat @ other.mat)

    def __add__(self, other: "Operator") -> "Operator":
        self._check_dim(other)
        return Operator(self.mat + other.mat)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_dim(other)
        return Operator(self.mat - other.mat)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.mat * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(-self.mat)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim))


def zero(dim: int) -> Operator:
    return Operator(np.zeros((dim, dim)))


SIGMA_X = Operator([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = Operator([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = Operator([[1.0, 0.0], [0.0, -1.0]])


def pauli_dot(direction) -> Operator:
    """sigma-dot-n for a real 3-vector ``direction``."""
    nx, ny, nz = (float(c) for c in direction)
    return Operator(nx * SIGMA_X.mat + ny * SIGMA_Y.mat + nz * SIGMA_Z.mat)


def ket_projector(psi) -> Operator:
    """Rank-one projector |psi><psi| from a 1-D state vector."""
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    return Operator(np.outer(vec, vec.conj()))


def operator_norm(a: Operator) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(a.mat, 2))


def herm_defect(a: Operator) -> float:
    """Spectral-norm distance from ``a`` to its adjoint."""
    return float(np.linalg.norm(a.mat - a.mat.conj().T, 2))


def commutator_norm(a: Operator, b: Operator) -> float:
    a._check_dim(b)
    return float(np.linalg.norm(a.mat @ b.mat - b.mat @ a.mat, 2))


def conjugate(a: Operator, u: Operator) -> Operator:
    """Basis change u a u^dagger (pass ``u.dagger()`` for the inverse map)."""
    a._check_dim(u)
    return Operator(u.mat @ a.mat @ u.mat.conj().T)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A positive unit-trace operator; construct through ``validate_density``."""

    op: Operator

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat

    @property
    def dim(self) -> int:
        return self.op.dim


class DensityValidationError(ValueError):
    """Raised when an operator fails the density-operator invariants.

    ``violations`` lists every violated invariant, one message each.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("not a density operator: " + "; ".join(self.violations))


def density_violations(op: Operator, tol: Tolerances = DEFAULT_TOL) -> list[str]:
    """Return the list of violated density-operator invariants (empty if valid)."""
    out = []
    tr = complex(np.trace(op.mat))
    if abs(tr - 1.0) > tol.trace:
        out.append(f"trace is {tr:.6g}, expected 1 within {tol.trace:g}")
    defect = herm_defect(op)
    if defect > tol.herm:
        out.append(f"Hermiticity defect {defect:.3g} exceeds {tol.herm:g}")
    lam_min = float(np.linalg.eigvalsh((op.mat + op.mat.conj().T) / 2.0).min())
    if lam_min < -tol.psd:
        out.append(f"minimum eigenvalue {lam_min:.6g} below -{tol.psd:g}")
    return out


def validate_density(op: Operator, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """Validate trace, Hermiticity, and positivity; raise with all violations."""
    violations = density_violations(op, tol)
    if violations:
        raise DensityValidationError(violations)
    return DensityOperator(op)


def expectation(rho: DensityOperator, a: Operator, tol: Tolerances = DEFAULT_TOL) -> float:
    """Expectation value Re Tr(rho a) of a Hermitian observable."""
    if a.dim != rho.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {a.dim}")
    defect = herm_defect(a)
    if defect > tol.herm:
        raise ValueError(f"observable is not Hermitian (defect {defect:.3g})")
    val = complex(np.trace(rho.mat @ a.mat))
    if abs(val.imag) > tol.herm:
        raise ValueError(f"trace has imaginary part {val.imag:.3g} beyond tolerance")
    return val.real


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending, degeneracies merged) with orthogonal projectors."""

    eigenvalues: tuple[float, ...]
    projectors: tuple[Operator, ...]

    def reconstruct(self) -> Operator:
        acc = np.zeros_like(self.projectors[0].mat)
        for val, proj in zip(self.eigenvalues, self.projectors):
            acc = acc + val * proj.mat
        return Operator(acc)


def spectral(a: Operator, tol: Tolerances = DEFAULT_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian operator.

    Eigenvalues closer than ``tol.degen`` are merged into a single
    eigenvalue (group mean) with one projector spanning the group.
    """
    defect = herm_defect(a)
    if defect > tol.herm:
        raise ValueError(f"operator is not Hermitian (defect {defect:.3g})")
    w, v = np.linalg.eigh(a.mat)
    values = []
    projectors = []
    start = 0
    for i in range(1, a.dim + 1):
        if i == a.dim or w[i] - w[i - 1] >= tol.degen:
            block = v[:, start:i]
            values.append(float(w[start:i].mean()))
            projectors.append(Operator(block @ block.conj().T))
            start = i
    return SpectralDecomposition(tuple(values), tuple(projectors))


def hermitian_sqrt(a: Operator, tol: Tolerances = DEFAULT_TOL) -> Operator:
    """Hermitian square root of a positive semidefinite operator.

    Eigenvalues in [-tol.psd, 0) are clipped to zero; anything lower is
    rejected.
    """
    defect = herm_defect(a)
    if defect > tol.herm:
        raise ValueError(f"operator is not Hermitian (defect {defect:.3g})")
    w, v = np.linalg.eigh(a.mat)
    if w.min() < -tol.psd:
        raise ValueError(f"eigenvalue {w.min():.6g} below -{tol.psd:g}; no Hermitian sqrt")
    root = np.sqrt(np.clip(w, 0.0, None))
    return Operator((v * root) @ v.conj().T)


def operator_to_json(a: Operator) -> dict:
    """Serialize to ``{dim, entries: [[re, im], ...]}`` with row-major entries."""
    flat = a.mat.reshape(-1)
    return {"dim": a.dim, "entries": [[float(z.real), float(z.imag)] for z in flat]}


def operator_from_json(obj: dict) -> Operator:
    dim = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return Operator(flat.reshape(dim, dim))
