"""Run configuration: one flat JSON document drives every CLI subcommand.

Unknown keys are rejected so that typos surface as config errors (exit
code 2) instead of silently falling back to defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .linalg import DEFAULT_TOL, Tolerances

__all__ = ["ConfigError", "RunConfig", "default_config", "load_config", "config_from_dict"]


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class LatticeSpec:
    d: int = 1
    n: int = 32
    dx: float = 1.0


@dataclass(frozen=True)
class PacketSpec:
    width: float = 2.0
    center1: tuple[int, ...] = (8,)
    center2: tuple[int, ...] = (24,)


@dataclass(frozen=True)
class EvolveSpec:
    mass: float = 1.0
    field: tuple[float, float, float] = (0.0, 0.0, 1.0)
    mu: float = 0.5


@dataclass(frozen=True)
class RunConfig:
    lattice: LatticeSpec = LatticeSpec()
    packet: PacketSpec = PacketSpec()
    angles: tuple[float, float, float, float] = (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)
    window_radii: tuple[float, ...] = tuple(float(r) for r in range(-1, 17))
    tolerances: Tolerances = DEFAULT_TOL
    output_format: str = "csv"
    seed: int = 20260810
    evolve: EvolveSpec = EvolveSpec()
    povm: dict | None = None
    instrument: dict | None = None

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=int(seed))


def default_config() -> RunConfig:
    return RunConfig()


_TOL_KEYS = {
    "tol_trace": "trace",
    "tol_herm": "herm",
    "tol_psd": "psd",
    "tol_recon": "recon",
    "tol_degen": "degen",
    "tol_unitary": "unitary",
    "tol_prob": "prob",
}


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")


def _center(value, d: int, name: str) -> tuple[int, ...]:
    try:
        coords = tuple(int(c) for c in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a list of {d} integers") from exc
    if len(coords) != d:
        raise ConfigError(f"{name} must have {d} coordinates, got {len(coords)}")
    return coords


def config_from_dict(obj: dict) -> RunConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    _require_keys(
        obj,
        {
            "lattice",
            "packet",
            "angles",
            "windows",
            "tolerances",
            "format",
            "seed",
            "evolve",
            "povm",
            "instrument",
        },
        "config",
    )
    cfg = default_config()
    try:
        if "lattice" in obj:
            _require_keys(obj["lattice"], {"d", "n", "dx"}, "lattice")
            lat = LatticeSpec(
                d=int(obj["lattice"].get("d", cfg.lattice.d)),
                n=int(obj["lattice"].get("n", cfg.lattice.n)),
                dx=float(obj["lattice"].get("dx", cfg.lattice.dx)),
            )
            cfg = replace(cfg, lattice=lat)
        if "packet" in obj:
            _require_keys(obj["packet"], {"width", "center1", "center2"}, "packet")
            pk = obj["packet"]
            packet = PacketSpec(
                width=float(pk.get("width", cfg.packet.width)),
                center1=_center(pk["center1"], cfg.lattice.d, "center1")
                if "center1" in pk
                else cfg.packet.center1,
                center2=_center(pk["center2"], cfg.lattice.d, "center2")
                if "center2" in pk
                else cfg.packet.center2,
            )
            cfg = replace(cfg, packet=packet)
        if "angles" in obj:
            angles = tuple(float(a) for a in obj["angles"])
            if len(angles) != 4:
                raise ConfigError("angles must list exactly four values (a, a', b, b')")
            cfg = replace(cfg, angles=angles)
        if "windows" in obj:
            _require_keys(obj["windows"], {"radii"}, "windows")
            radii = tuple(float(r) for r in obj["windows"]["radii"])
            if len(radii) == 0:
                raise ConfigError("windows.radii must be non-empty")
            cfg = replace(cfg, window_radii=radii)
        if "tolerances" in obj:
            _require_keys(obj["tolerances"], set(_TOL_KEYS), "tolerances")
            overrides = {_TOL_KEYS[k]: float(v) for k, v in obj["tolerances"].items()}
            cfg = replace(cfg, tolerances=replace(DEFAULT_TOL, **overrides))
        if "format" in obj:
            if obj["format"] not in ("csv", "json"):
                raise ConfigError(f"format must be 'csv' or 'json', got {obj['format']!r}")
            cfg = replace(cfg, output_format=obj["format"])
        if "seed" in obj:
            cfg = replace(cfg, seed=int(obj["seed"]))
        if "evolve" in obj:
            _require_keys(obj["evolve"], {"mass", "field", "mu"}, "evolve")
            ev = obj["evolve"]
            fld = ev.get("field", cfg.evolve.field)
            if len(fld) != 3:
                raise ConfigError("evolve.field must be a 3-vector")
            cfg = replace(
                cfg,
                evolve=EvolveSpec(
                    mass=float(ev.get("mass", cfg.evolve.mass)),
                    field=tuple(float(x) for x in fld),
                    mu=float(ev.get("mu", cfg.evolve.mu)),
                ),
            )
        if "povm" in obj and obj["povm"] is not None:
            cfg = replace(cfg, povm=dict(obj["povm"]))
        if "instrument" in obj and obj["instrument"] is not None:
            cfg = replace(cfg, instrument=dict(obj["instrument"]))
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(obj)
