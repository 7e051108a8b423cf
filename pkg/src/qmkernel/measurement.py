"""Outcome spaces, POVMs, and measurement instruments.

An instrument maps each outcome label to a completely positive
trace-non-increasing map, encoded by its Kraus operators.  The projective
update rule is E rho E for a spectral projector E; general effects use the
minimal-disturbance square-root form sqrt(E) rho sqrt(E).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DensityOperator,
    Operator,
    Tolerances,
    herm_defect,
    hermitian_sqrt,
    operator_from_json,
    operator_norm,
    operator_to_json,
    spectral,
    validate_density,
)

__all__ = [
    "OutcomeSpace",
    "Povm",
    "Instrument",
    "format_outcome",
    "pvm_from_observable",
    "luders_instrument",
    "apply",
    "apply_event",
    "povm_to_json",
    "povm_from_json",
    "instrument_to_json",
    "instrument_from_json",
]


@dataclass(frozen=True)
class OutcomeSpace:
    """Finite ordered set of outcome labels; events are arbitrary subsets."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) == 0:
            raise ValueError("outcome space needs at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("outcome labels must be distinct")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown outcome label {label!r}") from None

    def is_event(self, event: Iterable[str]) -> bool:
        return set(event) <= set(self.labels)


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive effects, one per label, summing to the identity."""

    space: OutcomeSpace
    effects: tuple[Operator, ...]

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(self.effects))
        if len(self.effects) != len(self.space.labels):
            raise ValueError("one effect per outcome label required")
        dim = self.effects[0].dim
        total = np.zeros((dim, dim), dtype=complex)
        for label, eff in zip(self.space.labels, self.effects):
            if eff.dim != dim:
                raise ValueError(f"dimension mismatch: {dim} vs {eff.dim}")
            if herm_defect(eff) > DEFAULT_TOL.herm:
                raise ValueError(f"effect for {label!r} is not Hermitian")
            w = np.linalg.eigvalsh(eff.mat)
            if w.min() < -DEFAULT_TOL.psd or w.max() > 1.0 + DEFAULT_TOL.psd:
                raise ValueError(f"effect for {label!r} has eigenvalues outside [0, 1]")
            total += eff.mat
        if float(np.linalg.norm(total - np.eye(dim), 2)) > DEFAULT_TOL.herm:
            raise ValueError("effects do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    def effect(self, label: str) -> Operator:
        return self.effects[self.space.index(label)]


@dataclass(frozen=True, eq=False)
class Instrument:
    """One completely positive map per label, each given by its Kraus list.

    Every map must be trace-non-increasing and the total map over all
    labels trace-preserving.
    """

    space: OutcomeSpace
    maps: tuple[tuple[Operator, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(tuple(ks) for ks in self.maps))
        if len(self.maps) != len(self.space.labels):
            raise ValueError("one Kraus list per outcome label required")
        if any(len(ks) == 0 for ks in self.maps):
            raise ValueError("each map needs at least one Kraus operator")
        dim = self.maps[0][0].dim
        total = np.zeros((dim, dim), dtype=complex)
        for label, kraus in zip(self.space.labels, self.maps):
            partial = np.zeros((dim, dim), dtype=complex)
            for k in kraus:
                if k.dim != dim:
                    raise ValueError(f"dimension mismatch: {dim} vs {k.dim}")
                partial += k.mat.conj().T @ k.mat
            if float(np.linalg.eigvalsh(partial).max()) > 1.0 + DEFAULT_TOL.psd:
                raise ValueError(f"map for {label!r} increases trace")
            total += partial
        if float(np.linalg.norm(total - np.eye(dim), 2)) > DEFAULT_TOL.herm:
            raise ValueError("total map is not trace-preserving")

    @property
    def dim(self) -> int:
        return self.maps[0][0].dim

    def kraus(self, label: str) -> tuple[Operator, ...]:
        return self.maps[self.space.index(label)]


def format_outcome(value: float) -> str:
    """Canonical label for a real outcome value."""
    text = f"{value:.12g}"
    return "0" if text == "-0" else text


def pvm_from_observable(a: Operator, tol: Tolerances = DEFAULT_TOL) -> Povm:
    """Projective measurement of a Hermitian observable.

    Labels are the distinct (degeneracy-merged) eigenvalues as formatted
    reals; effects are the corresponding spectral projectors.
    """
    dec = spectral(a, tol)
    labels = tuple(format_outcome(v) for v in dec.eigenvalues)
    if len(set(labels)) != len(labels):
        raise ValueError(f"eigenvalue labels collide after formatting: {labels}")
    return Povm(OutcomeSpace(labels), dec.projectors)


def luders_instrument(p: Povm, tol: Tolerances = DEFAULT_TOL) -> Instrument:
    """Minimal-disturbance instrument for a POVM.

    Projector effects keep the projector itself as the single Kraus
    operator; general effects take their Hermitian square root.
    """
    maps = []
    for eff in p.effects:
        if operator_norm(eff @ eff - eff) <= tol.recon:
            maps.append((eff,))
        else:
            maps.append((hermitian_sqrt(eff, tol),))
    return Instrument(p.space, tuple(maps))


def _apply_kraus(kraus: tuple[Operator, ...], rho: DensityOperator) -> np.ndarray:
    out = np.zeros_like(rho.mat)
    for k in kraus:
        out = out + k.mat @ rho.mat @ k.mat.conj().T
    return out


def _finish(out: np.ndarray, tol: Tolerances) -> tuple[float, DensityOperator | None]:
    prob = float(np.trace(out).real)
    prob = min(max(prob, 0.0), 1.0)
    if prob <= tol.prob:
        return prob, None
    return prob, validate_density(Operator(out / prob), tol)


def apply(
    ins: Instrument,
    label: str,
    rho: DensityOperator,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, DensityOperator | None]:
    """Outcome probability and normalized post-measurement state.

    The post state is ``None`` when the probability is below ``tol.prob``
    (conditioning on a null event).
    """
    kraus = ins.kraus(label)
    if ins.dim != rho.dim:
        raise ValueError(f"dimension mismatch: {ins.dim} vs {rho.dim}")
    return _finish(_apply_kraus(kraus, rho), tol)


def apply_event(
    ins: Instrument,
    event: Iterable[str],
    rho: DensityOperator,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, DensityOperator | None]:
    """Additive extension of ``apply`` to a subset of outcome labels."""
    event_set = set(event)
    if not ins.space.is_event(event_set):
        raise ValueError(f"event {sorted(event_set)} is not a subset of the outcome labels")
    if ins.dim != rho.dim:
        raise ValueError(f"dimension mismatch: {ins.dim} vs {rho.dim}")
    out = np.zeros_like(rho.mat)
    for label in ins.space.labels:
        if label in event_set:
            out = out + _apply_kraus(ins.kraus(label), rho)
    return _finish(out, tol)


def povm_to_json(p: Povm) -> dict:
    return {
        "labels": list(p.space.labels),
        "effects": [operator_to_json(eff) for eff in p.effects],
    }


def povm_from_json(obj: dict) -> Povm:
    labels = tuple(str(s) for s in obj["labels"])
    effects = tuple(operator_from_json(e) for e in obj["effects"])
    return Povm(OutcomeSpace(labels), effects)


def instrument_to_json(ins: Instrument) -> dict:
    return {
        "labels": list(ins.space.labels),
        "kraus": [[operator_to_json(k) for k in ks] for ks in ins.maps],
    }


def instrument_from_json(obj: dict) -> Instrument:
    labels = tuple(str(s) for s in obj["labels"])
    maps = tuple(tuple(operator_from_json(k) for k in ks) for ks in obj["kraus"])
    return Instrument(OutcomeSpace(labels), maps)
