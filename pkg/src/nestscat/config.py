"""Run configuration: JSON file + command-line flag merging.

A config file is a JSON object; every key is optional except that a
geometry and materials must be available from the file or from flags by
the time a command runs.  Example:

    {
      "geometry": {"equidistant": 4},
      "materials": {"delta": 0.000167},
      "n_max": 0,
      "direction": [1.0, 0.0, 0.0],
      "sweep": {"omega_min": null, "omega_max": null, "steps": 400},
      "field": {"mode": "plane", "extent": 1.25, "points": 161,
                "omega_in": null, "mode_index": 0},
      "seeds": null,
      "threads": null,
      "plot": true,
      "compare": {"tol_exact": 1e-8}
    }

``RunConfig.to_dict`` emits the fully resolved configuration, which parses
back to an equivalent RunConfig.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import MaterialParams, NestedGeometry, equidistant_geometry
from .special import MAX_ORDER

__all__ = ["ConfigError", "RunConfig"]


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration (CLI exit code 2)."""


def _get(d: dict, key: str, kind, default=None, required: bool = False):
    if key not in d or d[key] is None:
        if required:
            raise ConfigError(f"missing required config key '{key}'")
        return default
    val = d[key]
    try:
        return kind(val)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for config key '{key}': {val!r}") from exc


@dataclass
class RunConfig:
    """Fully resolved inputs of one CLI run."""

    geometry: NestedGeometry
    materials: MaterialParams
    n_max: int | None = None
    direction: tuple = (1.0, 0.0, 0.0)
    omega_min: float | None = None
    omega_max: float | None = None
    steps: int = 400
    seeds: tuple | None = None
    threads: int | None = None
    plot: bool = True
    field_mode: str = "plane"
    field_extent: float = 1.25
    field_points: int = 161
    field_omega: float | None = None
    field_mode_index: int = 0
    tol_exact: float = 1e-8

    def __post_init__(self):
        if self.n_max is not None and not 0 <= int(self.n_max) <= MAX_ORDER:
            raise ConfigError(f"n_max must be in [0, {MAX_ORDER}]")
        d = np.asarray(self.direction, dtype=float)
        if d.shape != (3,) or not np.all(np.isfinite(d)) or np.linalg.norm(d) == 0:
            raise ConfigError("direction must be a nonzero finite 3-vector")
        self.direction = tuple(float(x) for x in d / np.linalg.norm(d))
        if self.steps < 2:
            raise ConfigError("steps must be at least 2")
        if self.omega_min is not None and self.omega_max is not None:
            if not 0 < self.omega_min < self.omega_max:
                raise ConfigError("need 0 < omega_min < omega_max")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.field_mode not in ("plane", "line"):
            raise ConfigError("field mode must be 'plane' or 'line'")
        if not self.field_extent > 0:
            raise ConfigError("field extent must be positive")
        if self.field_points < 2:
            raise ConfigError("field points must be at least 2")
        if not 0 <= self.field_mode_index < self.geometry.n_layers:
            raise ConfigError("field mode_index out of range")
        if not self.tol_exact > 0:
            raise ConfigError("tol_exact must be positive")

    # -- construction ----------------------------------------------------

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        geometry = _parse_geometry(raw.get("geometry"))
        materials = _parse_materials(raw.get("materials"))
        sweep = raw.get("sweep") or {}
        fld = raw.get("field") or {}
        comp = raw.get("compare") or {}
        if not isinstance(sweep, dict) or not isinstance(fld, dict) \
                or not isinstance(comp, dict):
            raise ConfigError("'sweep', 'field' and 'compare' must be objects")
        seeds = raw.get("seeds")
        if seeds is not None:
            try:
                seeds = tuple(complex(s[0], s[1]) for s in seeds)
            except (TypeError, IndexError, ValueError) as exc:
                raise ConfigError("seeds must be [re, im] pairs") from exc
        try:
            return cls(
                geometry=geometry,
                materials=materials,
                n_max=_get(raw, "n_max", int),
                direction=tuple(raw.get("direction") or (1.0, 0.0, 0.0)),
                omega_min=_get(sweep, "omega_min", float),
                omega_max=_get(sweep, "omega_max", float),
                steps=_get(sweep, "steps", int, 400),
                seeds=seeds,
                threads=_get(raw, "threads", int),
                plot=bool(raw.get("plot", True)),
                field_mode=_get(fld, "mode", str, "plane"),
                field_extent=_get(fld, "extent", float, 1.25),
                field_points=_get(fld, "points", int, 161),
                field_omega=_get(fld, "omega_in", float),
                field_mode_index=_get(fld, "mode_index", int, 0),
                tol_exact=_get(comp, "tol_exact", float, 1e-8),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(raw)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "geometry": {"radii": list(self.geometry.radii)},
            "materials": {
                "rho_r": self.materials.rho_r,
                "kappa_r": self.materials.kappa_r,
                "rho": self.materials.rho,
                "kappa": self.materials.kappa,
            },
            "n_max": self.n_max,
            "direction": list(self.direction),
            "sweep": {
                "omega_min": self.omega_min,
                "omega_max": self.omega_max,
                "steps": self.steps,
            },
            "field": {
                "mode": self.field_mode,
                "extent": self.field_extent,
                "points": self.field_points,
                "omega_in": self.field_omega,
                "mode_index": self.field_mode_index,
            },
            "seeds": None if self.seeds is None
            else [[s.real, s.imag] for s in self.seeds],
            "threads": self.threads,
            "plot": self.plot,
            "compare": {"tol_exact": self.tol_exact},
        }


def _parse_geometry(raw) -> NestedGeometry:
    if raw is None:
        raise ConfigError("config needs a 'geometry' (or --geometry-equidistant)")
    if not isinstance(raw, dict):
        raise ConfigError("'geometry' must be an object")
    if "radii" in raw and raw["radii"] is not None:
        try:
            return NestedGeometry(tuple(float(r) for r in raw["radii"]))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad geometry radii: {exc}") from exc
    if "equidistant" in raw and raw["equidistant"] is not None:
        try:
            return equidistant_geometry(int(raw["equidistant"]))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad equidistant layer count: {exc}") from exc
    raise ConfigError("'geometry' needs 'radii' or 'equidistant'")


def _parse_materials(raw) -> MaterialParams:
    if raw is None:
        raise ConfigError("config needs 'materials' (or --delta)")
    if not isinstance(raw, dict):
        raise ConfigError("'materials' must be an object")
    try:
        if "delta" in raw and raw["delta"] is not None:
            return MaterialParams.from_contrast(float(raw["delta"]))
        return MaterialParams(
            rho_r=float(raw["rho_r"]),
            kappa_r=float(raw["kappa_r"]),
            rho=float(raw["rho"]),
            kappa=float(raw["kappa"]),
        )
    except KeyError as exc:
        raise ConfigError(f"materials needs 'delta' or all of rho_r/kappa_r/rho/kappa "
                          f"(missing {exc})") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad materials: {exc}") from exc
