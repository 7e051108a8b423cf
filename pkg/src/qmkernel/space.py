"""Periodic lattice discretization of position space and SU(2) spin.

Translations on a periodic lattice are exact permutation unitaries, so the
group law and the covariance of position projectors hold as integer-matrix
identities, not merely within floating-point tolerance.  Spin carries the
standard angular-momentum representation for any half-integer j.

Site indexing is row-major over the d axes (leftmost axis slowest), the
same convention every composite operator in this package uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .linalg import DEFAULT_TOL, Operator, Tolerances, herm_defect, pauli_dot

__all__ = [
    "Lattice",
    "LatticeVector",
    "SpinRep",
    "translation_unitary",
    "position_projector",
    "translate_region",
    "check_covariance",
    "spin_rep",
    "spin_rotation",
    "kinetic_operator",
    "pauli_hamiltonian",
    "gaussian_packet",
    "window_from_radius",
]


@dataclass(frozen=True)
class Lattice:
    """Periodic spatial grid: d axes, n points per axis, spacing dx."""

    d: int
    n: int
    dx: float
    periodic: bool = True

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError("lattice dimension d must be 1, 2, or 3")
        if self.n < 2:
            raise ValueError("need at least 2 points per axis")
        if self.dx <= 0:
            raise ValueError("lattice spacing must be positive")
        if not self.periodic:
            raise ValueError("only periodic lattices are supported")

    @property
    def size(self) -> int:
        return self.n**self.d

    def coords(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise ValueError(f"site index {index} out of range [0, {self.size})")
        out = []
        for _ in range(self.d):
            index, rem = divmod(index, self.n)
            out.append(rem)
        return tuple(reversed(out))

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {len(coords)}")
        idx = 0
        for c in coords:
            idx = idx * self.n + int(c) % self.n
        return idx

    def translate_site(self, index: int, shift: Sequence[int]) -> int:
        base = self.coords(index)
        return self.index(tuple(b + int(s) for b, s in zip(base, shift)))

    def min_image(self, coords: Sequence[int], center: Sequence[int]) -> tuple[float, ...]:
        """Signed per-axis displacement to ``center`` in length units."""
        out = []
        for c, c0 in zip(coords, center):
            delta = (int(c) - int(c0) + self.n // 2) % self.n - self.n // 2
            out.append(delta * self.dx)
        return tuple(out)

    def site_distance(self, index: int, center: Sequence[int]) -> float:
        return math.sqrt(sum(v * v for v in self.min_image(self.coords(index), center)))


@dataclass(frozen=True)
class LatticeVector:
    """Translation vector in units of dx; reduced modulo n when applied."""

    components: tuple[int, ...]

    def __init__(self, components: Sequence[int]):
        object.__setattr__(self, "components", tuple(int(c) for c in components))


def _shift_components(lat: Lattice, a) -> tuple[int, ...]:
    comps = a.components if isinstance(a, LatticeVector) else tuple(int(c) for c in a)
    if len(comps) != lat.d:
        raise ValueError(f"expected {lat.d} components, got {len(comps)}")
    return tuple(c % lat.n for c in comps)


def translation_unitary(lat: Lattice, a) -> Operator:
    """Permutation matrix for the cyclic shift by ``a`` (exactly unitary)."""
    shift = _shift_components(lat, a)
    size = lat.size
    targets = np.empty(size, dtype=int)
    for site in range(size):
        targets[site] = lat.translate_site(site, shift)
    mat = np.zeros((size, size))
    mat[targets, np.arange(size)] = 1.0
    return Operator(mat)


def position_projector(lat: Lattice, region: Iterable[int]) -> Operator:
    """Diagonal 0/1 projector onto the span of the region's site vectors."""
    diag = np.zeros(lat.size)
    for site in region:
        if not 0 <= int(site) < lat.size:
            raise ValueError(f"site index {site} out of range [0, {lat.size})")
        diag[int(site)] = 1.0
    return Operator(np.diag(diag))


def translate_region(lat: Lattice, region: Iterable[int], a) -> frozenset[int]:
    """Image of a site set under the translation automorphism B -> B + a."""
    shift = _shift_components(lat, a)
    return frozenset(lat.translate_site(int(site), shift) for site in region)


def check_covariance(lat: Lattice, a, region: Iterable[int]) -> bool:
    """Whether U(a) P_B U(a)^dagger equals P_{B+a} exactly."""
    region = frozenset(int(s) for s in region)
    u = translation_unitary(lat, a).mat
    p = position_projector(lat, region).mat
    shifted = position_projector(lat, translate_region(lat, region, a)).mat
    return bool(np.array_equal(u @ p @ u.conj().T, shifted))


@dataclass(frozen=True, eq=False)
class SpinRep:
    """su(2) generators for total spin j, basis ordered m = j, j-1, ..., -j."""

    j: float
    jx: Operator
    jy: Operator
    jz: Operator

    @property
    def dim(self) -> int:
        return int(round(2 * self.j)) + 1


def spin_rep(j: float) -> SpinRep:
    """Angular-momentum representation for half-integer j >= 1/2."""
    two_j = 2 * j
    if abs(two_j - round(two_j)) > 1e-12 or round(two_j) < 1:
        raise ValueError(f"j must be a half-integer >= 1/2, got {j}")
    j = round(two_j) / 2.0
    dim = int(round(two_j)) + 1
    raising = np.zeros((dim, dim))
    for i in range(1, dim):
        m = j - i
        raising[i - 1, i] = math.sqrt(j * (j + 1) - m * (m + 1))
    lowering = raising.T
    jx = Operator((raising + lowering) / 2.0)
    jy = Operator((raising - lowering) / 2.0j)
    jz = Operator(np.diag([j - i for i in range(dim)]))
    return SpinRep(j, jx, jy, jz)


def spin_rotation(rep: SpinRep, axis, angle: float) -> Operator:
    """Rotation exp(-i angle axis.J) about a unit 3-vector axis."""
    ax = np.asarray(axis, dtype=float).reshape(-1)
    if ax.shape[0] != 3:
        raise ValueError("axis must be a 3-vector")
    norm = float(np.linalg.norm(ax))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"axis must be a unit vector, got norm {norm:.6g}")
    gen = ax[0] * rep.jx.mat + ax[1] * rep.jy.mat + ax[2] * rep.jz.mat
    w, v = np.linalg.eigh(gen)
    return Operator((v * np.exp(-1j * w * angle)) @ v.conj().T)


def kinetic_operator(lat: Lattice, mass: float) -> Operator:
    """p^2 / 2m from the 3-point periodic Laplacian stencil per axis."""
    if mass <= 0:
        raise ValueError("mass must be positive")
    size = lat.size
    hop = np.zeros((size, size))
    for axis in range(lat.d):
        step = [0] * lat.d
        step[axis] = 1
        shift = translation_unitary(lat, step).mat
        hop += shift + shift.T
    coeff = 1.0 / (2.0 * mass * lat.dx**2)
    return Operator(coeff * (2.0 * lat.d * np.eye(size) - hop))


def pauli_hamiltonian(lat: Lattice, mass: float, field, mu: float) -> Operator:
    """Spin-1/2 particle Hamiltonian on C^2 (x) lattice: kinetic - mu sigma.B.

    Spin is the leftmost (slowest) tensor factor.  With B = 0 the result
    commutes with every lifted translation, since the kinetic stencil is
    shift-invariant.
    """
    kinetic = kinetic_operator(lat, mass)
    zeeman = -mu * pauli_dot(field).mat
    mat = np.kron(np.eye(2), kinetic.mat) + np.kron(zeeman, np.eye(lat.size))
    out = Operator(mat)
    if herm_defect(out) > DEFAULT_TOL.herm:
        raise ValueError("assembled Hamiltonian is not Hermitian")
    return out


def gaussian_packet(lat: Lattice, center: Sequence[int], width: float) -> np.ndarray:
    """Normalized Gaussian wavefunction of width ``width`` (length units).

    Amplitudes follow exp(-r^2 / 4 width^2) with the periodic minimum-image
    distance r, so |psi|^2 is a discrete Gaussian of standard deviation
    ``width`` around ``center``.
    """
    if width <= 0:
        raise ValueError("packet width must be positive")
    if len(center) != lat.d:
        raise ValueError(f"expected {lat.d} center coordinates, got {len(center)}")
    amp = np.empty(lat.size)
    for site in range(lat.size):
        r = lat.site_distance(site, center)
        amp[site] = math.exp(-r * r / (4.0 * width * width))
    return amp / np.linalg.norm(amp)


def window_from_radius(lat: Lattice, center: Sequence[int], radius: float) -> frozenset[int]:
    """Sites within periodic distance ``radius`` (length units) of ``center``.

    A negative radius gives the empty window.
    """
    if radius < 0:
        return frozenset()
    return frozenset(
        site for site in range(lat.size) if lat.site_distance(site, center) <= radius
    )
