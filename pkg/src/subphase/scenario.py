"""Scenario files: strict JSON parsing into core/model/scan objects.

The schema is deliberately rigid: unknown keys are rejected everywhere and
every error message names the offending key, so a scenario that loads is a
complete, reproducible description of a run.  Complex numbers are [re, im]
pairs; matrices are row-major lists of such pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .analysis import ExtractionConfig
from .core import (
    ConfigurationError,
    Constant,
    DriveSpec,
    DriveTerm,
    EnergySpectrum,
    Exponential,
    SlowGauge,
    TimeGrid,
)
from .models import PerturbationScenario, TwoLevelScenario
from .propagator import IntegratorConfig
from .scan import ScanRequest


@dataclass
class Scenario:
    """Everything a CLI command can need, with absent sections left None."""

    spectrum: EnergySpectrum | None = None
    drive: DriveSpec | None = None
    grid: TimeGrid | None = None
    initial_index: int | None = None
    initial_vector: np.ndarray | None = None
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    scan: ScanRequest | None = None
    model: TwoLevelScenario | PerturbationScenario | None = None


def load_scenario(path: str, *, require: tuple[str, ...] = ()) -> Scenario:
    """Load and validate a scenario file; `require` lists mandatory sections."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"scenario is not valid JSON: {exc}") from None
    return parse_scenario(data, require=require)


_TOP_KEYS = ("spectrum", "drive", "grid", "initial", "analysis",
             "integrator", "scan", "model")


def parse_scenario(data, *, require: tuple[str, ...] = ()) -> Scenario:
    _check_object(data, _TOP_KEYS, "scenario")
    for section in require:
        if section not in data:
            raise ConfigurationError(f"scenario: missing required section '{section}'")

    out = Scenario()

    if "spectrum" in data:
        out.spectrum = _parse_spectrum(data["spectrum"])
    if "grid" in data:
        out.grid = _parse_grid(data["grid"])
    if "analysis" in data:
        out.extraction = _parse_analysis(data["analysis"])
    if "integrator" in data:
        out.integrator = _parse_integrator(data["integrator"])

    if "drive" in data:
        if out.spectrum is None:
            raise ConfigurationError(
                "scenario.drive: needs a spectrum section to fix the dimension")
        out.drive = _parse_drive(data["drive"], out.spectrum.dim)

    if "initial" in data:
        dim = out.spectrum.dim if out.spectrum is not None else None
        out.initial_index, out.initial_vector = _parse_initial(data["initial"], dim)

    if "model" in data:
        hbar = out.spectrum.hbar if out.spectrum is not None else 1.0
        out.model = _parse_model(data["model"], hbar, out.spectrum)

    if "scan" in data:
        if out.spectrum is None or out.drive is None:
            raise ConfigurationError(
                "scenario.scan: needs spectrum and drive sections")
        out.scan = _parse_scan(data["scan"], out.spectrum, out.drive)

    return out


# --- primitive checks ---------------------------------------------------------

def _check_object(obj, allowed, path):
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{path}: expected an object")
    for key in obj:
        if key not in allowed:
            raise ConfigurationError(f"{path}.{key}: unknown key")


def _get(obj, key, path, required=True, default=None):
    if key not in obj:
        if required:
            raise ConfigurationError(f"{path}: missing required key '{key}'")
        return default
    return obj[key]


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{path}: expected a number")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigurationError(f"{path}: must be finite")
    return value


def _integer(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{path}: expected an integer")
    return value


def _complex_pair(value, path):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
        raise ConfigurationError(f"{path}: expected an [re, im] pair")
    return complex(float(value[0]), float(value[1]))


# --- section parsers ----------------------------------------------------------

def _parse_spectrum(obj) -> EnergySpectrum:
    _check_object(obj, ("energies", "hbar"), "scenario.spectrum")
    raw = _get(obj, "energies", "scenario.spectrum")
    if not isinstance(raw, list) or not raw:
        raise ConfigurationError("scenario.spectrum.energies: expected a non-empty list")
    energies = tuple(_number(e, f"scenario.spectrum.energies[{i}]")
                     for i, e in enumerate(raw))
    hbar = obj.get("hbar", 1.0)
    return EnergySpectrum(energies=energies,
                          hbar=_number(hbar, "scenario.spectrum.hbar"))


def _parse_grid(obj) -> TimeGrid:
    _check_object(obj, ("t_start", "t_end", "steps"), "scenario.grid")
    t_start = _number(_get(obj, "t_start", "scenario.grid"), "scenario.grid.t_start")
    t_end = _number(_get(obj, "t_end", "scenario.grid"), "scenario.grid.t_end")
    steps = _integer(_get(obj, "steps", "scenario.grid"), "scenario.grid.steps")
    if t_end <= t_start:
        raise ConfigurationError("scenario.grid.t_end: must exceed t_start")
    if steps < 1:
        raise ConfigurationError("scenario.grid.steps: must be >= 1")
    return TimeGrid(t_start=t_start, t_end=t_end, steps=steps)


def _parse_analysis(obj) -> ExtractionConfig:
    _check_object(obj, ("amplitude_floor", "slope_tolerance", "window_fraction"),
                  "scenario.analysis")
    defaults = ExtractionConfig()
    floor = _number(obj.get("amplitude_floor", defaults.amplitude_floor),
                    "scenario.analysis.amplitude_floor")
    slope = _number(obj.get("slope_tolerance", defaults.slope_tolerance),
                    "scenario.analysis.slope_tolerance")
    frac = _number(obj.get("window_fraction", defaults.window_fraction),
                   "scenario.analysis.window_fraction")
    if floor <= 0:
        raise ConfigurationError("scenario.analysis.amplitude_floor: must be positive")
    if slope < 0:
        raise ConfigurationError("scenario.analysis.slope_tolerance: must be >= 0")
    if not 0 < frac <= 1:
        raise ConfigurationError("scenario.analysis.window_fraction: must be in (0, 1]")
    return ExtractionConfig(amplitude_floor=floor, slope_tolerance=slope,
                            window_fraction=frac)


def _parse_integrator(obj) -> IntegratorConfig:
    _check_object(obj, ("norm_tolerance", "hermiticity_tolerance"), "scenario.integrator")
    defaults = IntegratorConfig()
    norm_tol = _number(obj.get("norm_tolerance", defaults.norm_tolerance),
                       "scenario.integrator.norm_tolerance")
    herm_tol = _number(obj.get("hermiticity_tolerance", defaults.hermiticity_tolerance),
                       "scenario.integrator.hermiticity_tolerance")
    if norm_tol <= 0 or herm_tol <= 0:
        raise ConfigurationError("scenario.integrator: tolerances must be positive")
    return IntegratorConfig(norm_tolerance=norm_tol, hermiticity_tolerance=herm_tol)


def _parse_envelope(obj, path):
    _check_object(obj, ("type", "rate"), path)
    kind = _get(obj, "type", path)
    if kind == "constant":
        if "rate" in obj:
            raise ConfigurationError(f"{path}.rate: constant envelope takes no rate")
        return Constant()
    if kind == "exponential":
        return Exponential(rate=_number(_get(obj, "rate", path), f"{path}.rate"))
    if kind == "slow_gauge":
        return SlowGauge(rate=_number(_get(obj, "rate", path), f"{path}.rate"))
    raise ConfigurationError(
        f"{path}.type: unknown envelope '{kind}' "
        "(expected constant, exponential or slow_gauge)")


def _parse_drive(obj, dim: int) -> DriveSpec:
    _check_object(obj, ("terms",), "scenario.drive")
    raw_terms = _get(obj, "terms", "scenario.drive")
    if not isinstance(raw_terms, list):
        raise ConfigurationError("scenario.drive.terms: expected a list")
    terms = []
    for i, raw in enumerate(raw_terms):
        path = f"scenario.drive.terms[{i}]"
        _check_object(raw, ("matrix", "envelope", "carrier", "delta0"), path)
        raw_matrix = _get(raw, "matrix", path)
        if not isinstance(raw_matrix, list) or len(raw_matrix) != dim * dim:
            raise ConfigurationError(
                f"{path}.matrix: expected {dim * dim} [re, im] pairs (row-major)")
        flat = [_complex_pair(v, f"{path}.matrix[{j}]") for j, v in enumerate(raw_matrix)]
        matrix = np.array(flat, dtype=complex).reshape(dim, dim)
        envelope = _parse_envelope(_get(raw, "envelope", path), f"{path}.envelope")
        carrier = _number(raw.get("carrier", 0.0), f"{path}.carrier")
        delta_phase = _number(raw.get("delta0", 0.0), f"{path}.delta0")
        terms.append(DriveTerm(matrix=matrix, envelope=envelope,
                               carrier=carrier, delta_phase=delta_phase))
    return DriveSpec(terms=tuple(terms), dim=dim)


def _parse_initial(obj, dim: int | None):
    _check_object(obj, ("index", "vector"), "scenario.initial")
    if ("index" in obj) == ("vector" in obj):
        raise ConfigurationError(
            "scenario.initial: give exactly one of 'index' or 'vector'")
    if "index" in obj:
        index = _integer(obj["index"], "scenario.initial.index")
        if index < 0 or (dim is not None and index >= dim):
            raise ConfigurationError(
                f"scenario.initial.index: {index} outside 0..{(dim or 1) - 1}")
        return index, None
    raw = obj["vector"]
    if not isinstance(raw, list) or (dim is not None and len(raw) != dim):
        raise ConfigurationError(
            f"scenario.initial.vector: expected {dim} [re, im] pairs")
    vec = np.array([_complex_pair(v, f"scenario.initial.vector[{j}]")
                    for j, v in enumerate(raw)], dtype=complex)
    return None, vec


def _parse_model(obj, hbar: float, spectrum: EnergySpectrum | None):
    _check_object(obj, ("type", "delta", "amplitude", "rate", "phase0", "omega",
                        "matrix_element", "omega_nk", "gauge_rate"), "scenario.model")
    kind = _get(obj, "type", "scenario.model")
    if kind == "two_level":
        for key in ("matrix_element", "omega_nk", "gauge_rate"):
            if key in obj:
                raise ConfigurationError(
                    f"scenario.model.{key}: not a two_level key")
        model = TwoLevelScenario(
            delta=_number(_get(obj, "delta", "scenario.model"), "scenario.model.delta"),
            amplitude=_number(_get(obj, "amplitude", "scenario.model"),
                              "scenario.model.amplitude"),
            rate=_number(_get(obj, "rate", "scenario.model"), "scenario.model.rate"),
            phase0=_number(obj.get("phase0", 0.0), "scenario.model.phase0"),
            omega=_number(obj.get("omega", 0.0), "scenario.model.omega"),
            hbar=hbar,
        )
        if spectrum is not None:
            expected = (-model.delta, model.delta)
            actual = spectrum.energies
            if (len(actual) != 2
                    or abs(actual[0] - expected[0]) > 1e-12
                    or abs(actual[1] - expected[1]) > 1e-12):
                raise ConfigurationError(
                    "scenario.spectrum.energies: inconsistent with model.delta "
                    f"(expected [{expected[0]}, {expected[1]}])")
        return model
    if kind == "perturbation":
        for key in ("delta", "amplitude", "rate", "phase0"):
            if key in obj:
                raise ConfigurationError(
                    f"scenario.model.{key}: not a perturbation key")
        model = PerturbationScenario(
            matrix_element=_complex_pair(_get(obj, "matrix_element", "scenario.model"),
                                         "scenario.model.matrix_element"),
            omega=_number(_get(obj, "omega", "scenario.model"), "scenario.model.omega"),
            omega_nk=_number(_get(obj, "omega_nk", "scenario.model"),
                             "scenario.model.omega_nk"),
            gauge_rate=_number(obj.get("gauge_rate", 0.0), "scenario.model.gauge_rate"),
            hbar=hbar,
        )
        if model.omega == model.omega_nk:
            raise ConfigurationError(
                "scenario.model.omega: equals omega_nk (Markov pole)")
        return model
    raise ConfigurationError(
        f"scenario.model.type: unknown model '{kind}' "
        "(expected two_level or perturbation)")


def _parse_scan(obj, spectrum: EnergySpectrum, drive: DriveSpec) -> ScanRequest:
    keys = ("omega_min", "omega_max", "points", "horizon", "steps",
            "initial_index", "target_index")
    _check_object(obj, keys, "scenario.scan")
    values = {}
    for key in ("omega_min", "omega_max", "horizon"):
        values[key] = _number(_get(obj, key, "scenario.scan"), f"scenario.scan.{key}")
    for key in ("points", "steps", "initial_index", "target_index"):
        values[key] = _integer(_get(obj, key, "scenario.scan"), f"scenario.scan.{key}")
    return ScanRequest(spectrum=spectrum, drive_template=drive, **values)
