"""The reference system assembled from a run configuration.

The descriptor gathers everything a concrete quantum system is made of:
Hilbert-space factors, the symmetry representations present, a state, an
outcome space with its POVM, and the measuring instrument.  The default
assembly is a spin-1/2 particle on a periodic lattice with the
lattice-discretized kinetic term and a Zeeman coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ConfigError, RunConfig
from .internal_symmetry import ChargeOperator
from .linalg import DensityOperator, Operator, ket_projector, validate_density
from .measurement import Instrument, Povm, instrument_from_json, luders_instrument, povm_from_json, pvm_from_observable
from .space import Lattice, SpinRep, gaussian_packet, pauli_hamiltonian, spin_rep

__all__ = ["SystemDescriptor", "example_system"]


@dataclass(frozen=True, eq=False)
class SystemDescriptor:
    """A named, cross-checked assembly of one concrete quantum system."""

    name: str
    factors: tuple[tuple[str, int], ...]
    lattice: Lattice
    spin: SpinRep
    hamiltonian: Operator
    state: DensityOperator
    povm: Povm
    instrument: Instrument
    charge: ChargeOperator | None = None

    def __post_init__(self):
        dim = math.prod(d for _, d in self.factors)
        mismatches = {
            "hamiltonian": self.hamiltonian.dim,
            "state": self.state.dim,
            "povm": self.povm.dim,
            "instrument": self.instrument.dim,
        }
        for what, got in mismatches.items():
            if got != dim:
                raise ConfigError(f"{what} dimension {got} != composite dimension {dim}")
        if self.charge is not None and self.charge.dim != dim:
            raise ConfigError(f"charge dimension {self.charge.dim} != composite dimension {dim}")

    @property
    def dim(self) -> int:
        return math.prod(d for _, d in self.factors)


def example_system(cfg: RunConfig) -> SystemDescriptor:
    """Spin-1/2 particle on the configured lattice, slightly mixed state.

    The default measurement is the projective spin-z readout lifted to the
    composite; a POVM or instrument supplied in the config (JSON wire
    schema) replaces the default.
    """
    lat = Lattice(cfg.lattice.d, cfg.lattice.n, cfg.lattice.dx)
    rep = spin_rep(0.5)
    ham = pauli_hamiltonian(lat, cfg.evolve.mass, cfg.evolve.field, cfg.evolve.mu)

    packet = gaussian_packet(lat, cfg.packet.center1, cfg.packet.width)
    plus_x = np.array([1.0, 1.0]) / math.sqrt(2.0)
    pure = ket_projector(np.kron(plus_x, packet)).mat
    dim = 2 * lat.size
    mixed = 0.9 * pure + 0.1 * np.eye(dim) / dim
    state = validate_density(Operator(mixed), cfg.tolerances)

    try:
        if cfg.povm is not None:
            povm = povm_from_json(cfg.povm)
        else:
            povm = pvm_from_observable(Operator(np.kron([[1.0, 0.0], [0.0, -1.0]], np.eye(lat.size))))
        instrument = instrument_from_json(cfg.instrument) if cfg.instrument is not None else luders_instrument(povm)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"invalid povm/instrument in config: {exc}") from exc

    return SystemDescriptor(
        name="spin-half particle on a periodic lattice",
        factors=(("spin", 2), ("space", lat.size)),
        lattice=lat,
        spin=rep,
        hamiltonian=ham,
        state=state,
        povm=povm,
        instrument=instrument,
        charge=None,
    )
