"""Scenario configuration: a single YAML document with explicit units in
every physical key name (MHz for rates over 2 pi, ns for times), so rad/s
vs Hz mistakes cannot hide.

Defaults mirror the device-grade values: gamma1/2pi = 20 MHz, dt = 2 ns,
T_r = 100 ns, detuning gamma1/20 (set d_omega_over_2pi_khz: 10 for the
hardware value instead).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import yaml

from .atom import AtomSpec
from .pulses import (DT_DEFAULT, TR_DEFAULT, PulseSequence, preset_classical,
                     preset_quantum)

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Invalid scenario configuration; message carries the field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class SpectrumSettings:
    method: str = "phase_grid"
    grid_size: int = 32
    max_mode: int = 9
    threshold: float = 1e-3
    n_periods: int = 40


@dataclass(frozen=True)
class SweepSettings:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"
    formats: tuple[str, ...] = ("csv", "json")


@dataclass(frozen=True)
class ScenarioConfig:
    atom: AtomSpec
    sequence: PulseSequence
    preset: str
    spectrum: SpectrumSettings = field(default_factory=SpectrumSettings)
    sweep: SweepSettings | None = None
    output: OutputSettings = field(default_factory=OutputSettings)
    resolved: dict = field(default_factory=dict)


def _require_keys(section: dict, path: str, allowed: set[str]):
    for key in section:
        if key not in allowed:
            where = f"{path}.{key}" if path else str(key)
            raise ConfigError(where, "unknown key "
                              f"(allowed: {', '.join(sorted(allowed))})")


def _number(section: dict, path: str, key: str, default=None, minimum=None,
            positive=False):
    if key not in section:
        if default is None:
            raise ConfigError(f"{path}.{key}", "missing required value")
        return default
    val = section[key]
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {val!r}")
    val = float(val)
    if positive and val <= 0:
        raise ConfigError(f"{path}.{key}", "must be > 0")
    if minimum is not None and val < minimum:
        raise ConfigError(f"{path}.{key}", f"must be >= {minimum}")
    return val


def _parse_atom(section: dict) -> AtomSpec:
    _require_keys(section, "atom", {"levels", "gamma1_over_2pi_mhz",
                                    "gamma_phi_over_2pi_mhz", "mu_ef"})
    levels = section.get("levels", 2)
    if levels not in (2, 3):
        raise ConfigError("atom.levels", "must be 2 or 3")
    gamma1 = TWO_PI * 1e6 * _number(section, "atom", "gamma1_over_2pi_mhz",
                                    default=20.0, positive=True)
    gamma_phi = TWO_PI * 1e6 * _number(section, "atom", "gamma_phi_over_2pi_mhz",
                                       default=0.0, minimum=0.0)
    if levels == 2:
        if "mu_ef" in section:
            raise ConfigError("atom.mu_ef", "only valid for levels: 3")
        return AtomSpec.two_level(gamma1, gamma_phi)
    mu_ef = _number(section, "atom", "mu_ef", default=math.sqrt(2.0), positive=True)
    return AtomSpec.three_level(gamma1, mu_ef, gamma_phi)


def _detuning(section: dict, path: str, gamma1: float) -> float:
    has_rel = "d_omega_over_gamma1" in section
    has_abs = "d_omega_over_2pi_khz" in section
    if has_rel and has_abs:
        raise ConfigError(path, "give d_omega_over_gamma1 or d_omega_over_2pi_khz, not both")
    if has_abs:
        return TWO_PI * 1e3 * _number(section, path, "d_omega_over_2pi_khz", positive=True)
    if has_rel:
        return gamma1 * _number(section, path, "d_omega_over_gamma1", positive=True)
    return gamma1 / 20.0


def _parse_sequence(section: dict, atom: AtomSpec) -> tuple[PulseSequence, str]:
    preset = section.get("preset")
    if preset not in ("classical", "quantum"):
        raise ConfigError("sequence.preset", "must be 'classical' or 'quantum'")
    t_r = 1e-9 * _number(section, "sequence", "t_r_ns", default=TR_DEFAULT * 1e9,
                         positive=True)
    d_omega = _detuning(section, "sequence", atom.gamma1)
    try:
        if preset == "classical":
            _require_keys(section, "sequence", {
                "preset", "omega_rabi_over_2pi_mhz", "dt_ns", "t_r_ns",
                "d_omega_over_gamma1", "d_omega_over_2pi_khz"})
            omega = TWO_PI * 1e6 * _number(section, "sequence",
                                           "omega_rabi_over_2pi_mhz", minimum=0.0)
            dt = 1e-9 * _number(section, "sequence", "dt_ns",
                                default=DT_DEFAULT * 1e9, minimum=0.0)
            return preset_classical(omega, dt, t_r, d_omega), preset
        _require_keys(section, "sequence", {
            "preset", "omega1_over_2pi_mhz", "omega2_over_2pi_mhz", "dt1_ns",
            "dt2_ns", "gap_ns", "first_tone", "t_r_ns",
            "d_omega_over_gamma1", "d_omega_over_2pi_khz"})
        omega1 = TWO_PI * 1e6 * _number(section, "sequence",
                                        "omega1_over_2pi_mhz", minimum=0.0)
        omega2 = TWO_PI * 1e6 * _number(section, "sequence",
                                        "omega2_over_2pi_mhz", minimum=0.0)
        dt1 = 1e-9 * _number(section, "sequence", "dt1_ns",
                             default=DT_DEFAULT * 1e9, minimum=0.0)
        dt2 = 1e-9 * _number(section, "sequence", "dt2_ns",
                             default=DT_DEFAULT * 1e9, minimum=0.0)
        gap = 1e-9 * _number(section, "sequence", "gap_ns", default=0.0, minimum=0.0)
        first = section.get("first_tone", -1)
        if first not in (-1, 1):
            raise ConfigError("sequence.first_tone", "must be -1 or 1")
        return preset_quantum(omega1, omega2, dt1, dt2, gap, t_r, d_omega,
                              first), preset
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("sequence", str(exc)) from exc


def _parse_spectrum(section: dict) -> SpectrumSettings:
    _require_keys(section, "spectrum", {"method", "grid_size", "max_mode",
                                        "threshold", "n_periods"})
    method = section.get("method", "phase_grid")
    if method not in ("phase_grid", "time_trace"):
        raise ConfigError("spectrum.method", "must be 'phase_grid' or 'time_trace'")
    grid_size = int(_number(section, "spectrum", "grid_size", default=32, minimum=2))
    max_mode = int(_number(section, "spectrum", "max_mode", default=9, minimum=1))
    threshold = _number(section, "spectrum", "threshold", default=1e-3, positive=True)
    if threshold >= 1:
        raise ConfigError("spectrum.threshold", "must be < 1")
    n_periods = int(_number(section, "spectrum", "n_periods", default=40, minimum=1))
    if method == "phase_grid" and grid_size < 2 * max_mode + 2:
        raise ConfigError("spectrum.grid_size",
                          f"need >= 2 * max_mode + 2 = {2 * max_mode + 2}")
    return SpectrumSettings(method, grid_size, max_mode, threshold, n_periods)


_SWEEP_KEYS = {
    "omega_rabi_over_2pi_mhz": ("omega_rabi", TWO_PI * 1e6),
    "dt_ns": ("dt", 1e-9),
    "omega1_over_2pi_mhz": ("omega1", TWO_PI * 1e6),
    "omega2_over_2pi_mhz": ("omega2", TWO_PI * 1e6),
}


def _parse_sweep(section: dict) -> SweepSettings:
    _require_keys(section, "sweep", {"parameter", "values", "range"})
    key = section.get("parameter")
    if key not in _SWEEP_KEYS:
        raise ConfigError("sweep.parameter",
                          f"must be one of {sorted(_SWEEP_KEYS)}")
    name, scale = _SWEEP_KEYS[key]
    if ("values" in section) == ("range" in section):
        raise ConfigError("sweep", "give exactly one of 'values' or 'range'")
    if "values" in section:
        raw = section["values"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("sweep.values", "must be a non-empty list")
        vals = []
        for i, v in enumerate(raw):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ConfigError(f"sweep.values[{i}]", "must be a number")
            vals.append(float(v) * scale)
    else:
        rng = section["range"]
        if not isinstance(rng, dict):
            raise ConfigError("sweep.range", "must be a mapping with start/stop/count")
        _require_keys(rng, "sweep.range", {"start", "stop", "count"})
        start = _number(rng, "sweep.range", "start")
        stop = _number(rng, "sweep.range", "stop")
        count = int(_number(rng, "sweep.range", "count", minimum=1))
        if count == 1:
            vals = [start * scale]
        else:
            step = (stop - start) / (count - 1)
            vals = [(start + i * step) * scale for i in range(count)]
    return SweepSettings(name, tuple(vals))


def _parse_output(section: dict) -> OutputSettings:
    _require_keys(section, "output", {"directory", "formats"})
    directory = section.get("directory", "out")
    if not isinstance(directory, str) or not directory:
        raise ConfigError("output.directory", "must be a non-empty string")
    formats = section.get("formats", ["csv", "json"])
    if not isinstance(formats, list) or not formats:
        raise ConfigError("output.formats", "must be a non-empty list")
    for f in formats:
        if f not in ("csv", "json"):
            raise ConfigError("output.formats", f"unknown format {f!r}")
    return OutputSettings(directory, tuple(formats))


def parse_config(doc: dict) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigError("", "top level must be a mapping")
    _require_keys(doc, "", {"atom", "sequence", "spectrum", "sweep", "output"})
    atom = _parse_atom(doc.get("atom", {}) or {})
    if "sequence" not in doc:
        raise ConfigError("sequence", "missing required section")
    sequence, preset = _parse_sequence(doc["sequence"] or {}, atom)
    spectrum = _parse_spectrum(doc.get("spectrum", {}) or {})
    sweep = _parse_sweep(doc["sweep"]) if doc.get("sweep") else None
    output = _parse_output(doc.get("output", {}) or {})
    if sweep is not None and preset == "classical" \
            and sweep.parameter in ("omega1", "omega2"):
        raise ConfigError("sweep.parameter",
                          "omega1/omega2 apply to the quantum preset only")
    if sweep is not None and preset == "quantum" \
            and sweep.parameter in ("omega_rabi", "dt"):
        raise ConfigError("sweep.parameter",
                          "omega_rabi/dt apply to the classical preset only")
    return ScenarioConfig(atom, sequence, preset, spectrum, sweep, output,
                          resolved=_resolved_dict(atom, sequence, preset,
                                                  spectrum, sweep, output))


def _resolved_dict(atom, sequence, preset, spectrum, sweep, output) -> dict:
    """Every parameter in SI units, sufficient to re-run bit-identically."""
    return {
        "atom": {
            "levels": atom.levels,
            "transition_elements": list(atom.transition_elements),
            "gamma1_rad_per_s": atom.gamma1,
            "gamma_phi_rad_per_s": atom.gamma_phi,
        },
        "sequence": {
            "preset": preset,
            "repetition_period_s": sequence.repetition_period,
            "detuning_rad_per_s": sequence.detuning,
            "segments": [
                {
                    "duration_s": seg.duration,
                    "tones": [
                        {"mode_index": t.mode_index,
                         "rabi_amplitude_rad_per_s": t.rabi_amplitude,
                         "phase_offset_rad": t.phase_offset}
                        for t in seg.tones
                    ],
                }
                for seg in sequence.segments
            ],
        },
        "spectrum": {
            "method": spectrum.method,
            "grid_size": spectrum.grid_size,
            "max_mode": spectrum.max_mode,
            "threshold": spectrum.threshold,
            "n_periods": spectrum.n_periods,
        },
        "sweep": None if sweep is None else {
            "parameter": sweep.parameter,
            "values_si": list(sweep.values),
        },
        "output": {
            "directory": output.directory,
            "formats": list(output.formats),
        },
    }


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise ConfigError("", f"YAML parse error{where}: {exc}") from exc
    return parse_config(doc if doc is not None else {})
