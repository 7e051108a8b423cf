"""Tensor-product composition, partial trace, and exchange symmetry.

Factor indices follow the global row-major convention: the leftmost factor
is the slowest index, (i1, i2) -> i1 * dim2 + i2.  Symmetrizers and
antisymmetrizers are built by the explicit sum over all N! factor
permutations, which keeps the code a transcript of the definition; the
d**N <= 4096 guard holds the factorial cost at desk scale.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, DensityOperator, Operator, Tolerances, validate_density
from .space import SpinRep

__all__ = [
    "CompositeSpace",
    "ExchangeSymmetry",
    "tensor",
    "tensor_all",
    "partial_trace",
    "exchange_operator",
    "symmetrizer",
    "antisymmetrizer",
    "projector_rank",
    "statistics_consistent",
]

SIZE_GUARD = 4096


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered factor dimensions of a tensor-product space."""

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))
        if len(self.factors) == 0 or any(f < 1 for f in self.factors):
            raise ValueError("factors must be a non-empty list of positive dimensions")

    @property
    def dim(self) -> int:
        return math.prod(self.factors)


@dataclass(frozen=True)
class ExchangeSymmetry:
    """Statistics declaration for N identical d-dimensional particles."""

    kind: str
    n: int
    d: int

    def __post_init__(self):
        if self.kind not in ("boson", "fermion", "distinguishable"):
            raise ValueError(f"unknown statistics kind {self.kind!r}")
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")


def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker product; the left argument is the slower index."""
    return Operator(np.kron(a.mat, b.mat))


def tensor_all(ops) -> Operator:
    out = None
    for op in ops:
        out = op if out is None else tensor(out, op)
    if out is None:
        raise ValueError("need at least one factor")
    return out


def partial_trace(
    rho: DensityOperator,
    space: CompositeSpace,
    keep: int,
    tol: Tolerances = DEFAULT_TOL,
) -> DensityOperator:
    """Reduced state on factor ``keep`` (0-based), tracing out the rest."""
    dims = space.factors
    if rho.dim != space.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {space.dim}")
    if not 0 <= keep < len(dims):
        raise ValueError(f"factor index {keep} out of range [0, {len(dims)})")
    t = rho.mat.reshape(dims + dims)
    removed = 0
    for i in range(len(dims)):
        if i == keep:
            continue
        ax = i - removed
        t = np.trace(t, axis1=ax, axis2=ax + len(dims) - removed)
        removed += 1
    return validate_density(Operator(t), tol)


def _guard(n: int, d: int) -> int:
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    size = d**n
    if size > SIZE_GUARD:
        raise ValueError(f"d**n = {size} exceeds the desk-scale guard {SIZE_GUARD}")
    return size


def _permutation_targets(perm: tuple[int, ...], d: int) -> np.ndarray:
    """Flat basis-index map of the factor permutation ``perm``.

    Factor k of the output is factor perm[k] of the input; for the full
    group sum and for transpositions the direction is immaterial.
    """
    n = len(perm)
    idx = np.arange(d**n).reshape((d,) * n)
    return idx.transpose(perm).reshape(-1)


def _parity(perm: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for k in range(i + 1, len(perm)):
            if perm[i] > perm[k]:
                sign = -sign
    return sign


def exchange_operator(n: int, d: int, i: int, j: int) -> Operator:
    """Transposition of tensor factors i and j (0-based, i < j)."""
    size = _guard(n, d)
    if not 0 <= i < j < n:
        raise ValueError(f"need 0 <= i < j < {n}, got i={i}, j={j}")
    perm = list(range(n))
    perm[i], perm[j] = perm[j], perm[i]
    mat = np.zeros((size, size))
    mat[_permutation_targets(tuple(perm), d), np.arange(size)] = 1.0
    return Operator(mat)


def _exchange_projector(n: int, d: int, signed: bool) -> Operator:
    size = _guard(n, d)
    cols = np.arange(size)
    acc = np.zeros((size, size))
    for perm in itertools.permutations(range(n)):
        coeff = float(_parity(perm)) if signed else 1.0
        acc[_permutation_targets(perm, d), cols] += coeff
    return Operator(acc / math.factorial(n))


def symmetrizer(n: int, d: int) -> Operator:
    """Orthogonal projector onto the symmetric subspace of (C^d)^(x)n."""
    return _exchange_projector(n, d, signed=False)


def antisymmetrizer(n: int, d: int) -> Operator:
    """Orthogonal projector onto the antisymmetric subspace of (C^d)^(x)n."""
    return _exchange_projector(n, d, signed=True)


def projector_rank(p: Operator) -> int:
    """Rank of an orthogonal projector, read off as the rounded trace."""
    return int(round(p.trace().real))


def statistics_consistent(sym: ExchangeSymmetry, rep: SpinRep) -> bool:
    """Spin-statistics pairing: bosons carry integer j, fermions half-odd j."""
    if sym.kind == "distinguishable":
        return True
    integer_spin = int(round(2 * rep.j)) % 2 == 0
    return integer_spin if sym.kind == "boson" else not integer_spin
