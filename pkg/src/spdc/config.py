"""Experiment configuration files: schema, validation, object construction.

Configs are JSON with four blocks (``material``, ``beams``, ``pump``,
``run``) and SI base units only; no unit suffixes are accepted, so a
wavelength is always meters and a power always watts. The material block
carries either literal indices or references to dispersion files
("builtin:<name>" or a path resolved relative to the config file).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .beams import BeamTriple, GaussianMode
from .errors import ConfigError
from .materials import (
    DispersionModel,
    MaterialOptics,
    group_index,
    load_builtin_material,
    load_dispersion_model,
    refractive_index,
)
from .rates import PumpSpec

_ENERGY_CONSERVATION_RTOL = 1e-6


def _get(block: dict, key: str, where: str, typ=float):
    if key not in block:
        raise ConfigError(f"{where}.{key}: missing required field")
    value = block[key]
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
        return float(value)
    return value


def _positive(value: float, where: str) -> float:
    if not (value > 0.0) or not math.isfinite(value):
        raise ConfigError(f"{where}: must be positive and finite, got {value!r}")
    return value


def _nonnegative(value: float, where: str) -> float:
    if value < 0.0 or not math.isfinite(value):
        raise ConfigError(f"{where}: must be nonnegative and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description.

    ``indices`` holds (n_p, n_1, n_2, ng_p, ng_1, ng_2) either given
    literally or evaluated from dispersion files at the band centers.
    """

    lambda_p: float
    lambda_1: float
    lambda_2: float
    waist_p: float
    waist_1: float
    waist_2: float
    d_eff: float
    crystal_length: float
    indices: tuple
    pump_power: float
    pump_bandwidth: float
    pump_shape: str = "gaussian"
    poling_period: Optional[float] = None
    transverse_dims: Optional[tuple] = None
    run: dict = field(default_factory=dict)

    def material_optics(self) -> MaterialOptics:
        n_p, n_1, n_2, ng_p, ng_1, ng_2 = self.indices
        return MaterialOptics(
            n_p=n_p, n_1=n_1, n_2=n_2,
            ng_p=ng_p, ng_1=ng_1, ng_2=ng_2,
            d_eff=self.d_eff,
            crystal_length=self.crystal_length,
            poling_period=self.poling_period,
            transverse_dims=self.transverse_dims,
        )

    def beam_triple(self) -> BeamTriple:
        n_p, n_1, n_2 = self.indices[:3]
        return BeamTriple(
            pump=GaussianMode(self.lambda_p, n_p, self.waist_p),
            signal=GaussianMode(self.lambda_1, n_1, self.waist_1),
            idler=GaussianMode(self.lambda_2, n_2, self.waist_2),
            crystal_length=self.crystal_length,
        )

    def pump_spec(self) -> PumpSpec:
        return PumpSpec(
            power=self.pump_power,
            central_lambda=self.lambda_p,
            bandwidth=self.pump_bandwidth,
            shape=self.pump_shape,
        )


def _resolve_dispersion(ref, base_dir: Path, where: str) -> DispersionModel:
    if not isinstance(ref, str):
        raise ConfigError(f"{where}: expected a material reference string")
    if ref.startswith("builtin:"):
        return load_builtin_material(ref[len("builtin:"):])
    path = Path(ref)
    if not path.is_absolute():
        path = base_dir / path
    if not path.exists():
        raise ConfigError(f"{where}: material file {path} not found")
    return load_dispersion_model(path)


def _indices_from_block(material: dict, lambdas: tuple, base_dir: Path) -> tuple:
    has_literal = "indices" in material
    has_disp = "dispersion" in material
    if has_literal == has_disp:
        raise ConfigError(
            "material: provide exactly one of 'indices' or 'dispersion'"
        )
    lam_p, lam_1, lam_2 = lambdas
    if has_literal:
        blk = material["indices"]
        vals = tuple(
            _get(blk, key, "material.indices")
            for key in ("n_p", "n_1", "n_2", "ng_p", "ng_1", "ng_2")
        )
        for key, v in zip(("n_p", "n_1", "n_2", "ng_p", "ng_1", "ng_2"), vals):
            if v < 1.0:
                raise ConfigError(f"material.indices.{key}: must be >= 1, got {v}")
        return vals
    blk = material["dispersion"]
    models = {}
    for role in ("pump", "signal", "idler"):
        if role not in blk:
            raise ConfigError(f"material.dispersion.{role}: missing reference")
        models[role] = _resolve_dispersion(
            blk[role], base_dir, f"material.dispersion.{role}"
        )
    return (
        refractive_index(models["pump"], lam_p),
        refractive_index(models["signal"], lam_1),
        refractive_index(models["idler"], lam_2),
        group_index(models["pump"], lam_p),
        group_index(models["signal"], lam_1),
        group_index(models["idler"], lam_2),
    )


def parse_config(raw: dict, base_dir: Path) -> ExperimentConfig:
    """Validate a parsed JSON document and build an ExperimentConfig."""
    for block in ("material", "beams", "pump"):
        if block not in raw or not isinstance(raw[block], dict):
            raise ConfigError(f"{block}: missing required block")
    material = raw["material"]
    beams = raw["beams"]
    pump = raw["pump"]
    run = raw.get("run", {})
    if not isinstance(run, dict):
        raise ConfigError("run: must be an object")

    lam_p = _positive(_get(beams, "lambda_p_m", "beams"), "beams.lambda_p_m")
    lam_1 = _positive(_get(beams, "lambda_1_m", "beams"), "beams.lambda_1_m")
    lam_2 = _positive(_get(beams, "lambda_2_m", "beams"), "beams.lambda_2_m")
    # energy conservation at band centers: 1/lp = 1/l1 + 1/l2
    lhs = 1.0 / lam_p
    rhs = 1.0 / lam_1 + 1.0 / lam_2
    if abs(lhs - rhs) > _ENERGY_CONSERVATION_RTOL * lhs:
        raise ConfigError(
            "beams: energy conservation violated at band centers: "
            f"1/lambda_p differs from 1/lambda_1 + 1/lambda_2 by "
            f"{abs(lhs - rhs) / lhs:.3e} relative (limit "
            f"{_ENERGY_CONSERVATION_RTOL:g})"
        )

    waist_p = _positive(_get(beams, "waist_p_m", "beams"), "beams.waist_p_m")
    waist_1 = _positive(_get(beams, "waist_1_m", "beams"), "beams.waist_1_m")
    waist_2 = _positive(_get(beams, "waist_2_m", "beams"), "beams.waist_2_m")

    d_eff = _nonnegative(
        _get(material, "d_eff_m_per_V", "material"), "material.d_eff_m_per_V"
    )
    Lz = _positive(
        _get(material, "crystal_length_m", "material"),
        "material.crystal_length_m",
    )
    poling = material.get("poling_period_m")
    if poling is not None:
        poling = _positive(float(poling), "material.poling_period_m")
    tdims = material.get("transverse_dims_m")
    if tdims is not None:
        if not (isinstance(tdims, (list, tuple)) and len(tdims) == 2):
            raise ConfigError("material.transverse_dims_m: expected [Lx, Ly]")
        tdims = (
            _positive(float(tdims[0]), "material.transverse_dims_m[0]"),
            _positive(float(tdims[1]), "material.transverse_dims_m[1]"),
        )

    indices = _indices_from_block(material, (lam_p, lam_1, lam_2), base_dir)

    power = _positive(_get(pump, "power_W", "pump"), "pump.power_W")
    bandwidth = _positive(
        _get(pump, "bandwidth_rad_s", "pump"), "pump.bandwidth_rad_s"
    )
    shape = pump.get("shape", "gaussian")
    if shape != "gaussian":
        raise ConfigError(f"pump.shape: unsupported shape {shape!r}")

    return ExperimentConfig(
        lambda_p=lam_p, lambda_1=lam_1, lambda_2=lam_2,
        waist_p=waist_p, waist_1=waist_1, waist_2=waist_2,
        d_eff=d_eff, crystal_length=Lz,
        indices=indices,
        pump_power=power, pump_bandwidth=bandwidth, pump_shape=shape,
        poling_period=poling, transverse_dims=tdims,
        run=dict(run),
    )


def load_config(path) -> ExperimentConfig:
    """Load and validate an experiment config file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return parse_config(raw, path.parent)


def load_table_fixture(path) -> list:
    """Load a published-rates table fixture.

    Each row: name, correction factor, R_th_paper, R_th_revised (all
    required), optional R_exp (experimental; metadata only, never used in
    pass/fail) and a per-row relative tolerance. Values with uncertainties
    are [central, uncertainty] pairs; only centrals are computed with.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"table fixture {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    rows = raw.get("rows")
    if not isinstance(rows, list) or not rows:
        raise ConfigError(f"{path}: expected a non-empty 'rows' array")

    def central(row, key, name):
        if key not in row:
            raise ConfigError(f"{path}: row {name!r} missing field {key}")
        v = row[key]
        if isinstance(v, (list, tuple)):
            return float(v[0])
        return float(v)

    out = []
    for row in rows:
        name = row.get("name")
        if not name:
            raise ConfigError(f"{path}: every row needs a 'name'")
        out.append({
            "name": name,
            "correction_factor": central(row, "correction_factor", name),
            "rate_published": central(row, "R_th_published_per_s_per_mW", name),
            "rate_revised": central(row, "R_th_revised_per_s_per_mW", name),
            "rate_experimental": (
                central(row, "R_exp_per_s_per_mW", name)
                if "R_exp_per_s_per_mW" in row else None
            ),
            "tolerance_rel": float(row.get("tolerance_rel", 0.002)),
        })
    return out
