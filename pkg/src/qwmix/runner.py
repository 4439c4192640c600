"""Scenario execution: expand the sweep, compute spectra (optionally on a
worker pool), and write deterministic CSV/JSON outputs plus a run
manifest.

Outputs are byte-identical across runs and worker counts: sweep points
are keyed by index, reductions happen in fixed order, and floats are
formatted with 17 significant digits.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import __version__
from .config import ScenarioConfig
from .pulses import PulseSequence, sweep_grid
from .spectrum import (ModeSpectrum, phase_grid_spectrum, spectrum_to_csv,
                       spectrum_to_json, time_trace_spectrum)

_SWEEP_COLUMN = {
    "omega_rabi": "omega_rabi_rad_per_s",
    "dt": "dt_s",
    "omega1": "omega1_rad_per_s",
    "omega2": "omega2_rad_per_s",
}


@dataclass
class RunResult:
    out_dir: str
    spectrum_files: list[str]
    table_file: str | None
    manifest_file: str
    spectra: list[ModeSpectrum]


def _compute(config: ScenarioConfig, seq: PulseSequence) -> ModeSpectrum:
    s = config.spectrum
    if s.method == "phase_grid":
        return phase_grid_spectrum(config.atom, seq, s.grid_size, s.max_mode)
    return time_trace_spectrum(config.atom, seq, s.n_periods, s.max_mode)


def _g(x: float) -> str:
    return format(float(x), ".17g")


def run_scenario(config: ScenarioConfig, threads: int | None = None,
                 out_dir: str | None = None, seed: int | None = None) -> RunResult:
    """Execute one scenario and write its outputs.

    `seed` is accepted for interface stability and recorded; the pipeline
    is deterministic and does not consume randomness.
    """
    out = out_dir or config.output.directory
    os.makedirs(out, exist_ok=True)

    if config.sweep is None:
        seqs = [config.sequence]
        swept_values: list[float] | None = None
    else:
        seqs = sweep_grid(config.sequence, config.sweep.parameter,
                          config.sweep.values)
        swept_values = list(config.sweep.values)

    n_workers = threads if threads and threads > 0 else (os.cpu_count() or 1)
    if n_workers > 1 and len(seqs) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            spectra = list(pool.map(lambda s: _compute(config, s), seqs))
    else:
        spectra = [_compute(config, s) for s in seqs]

    spectrum_files = []
    for i, spec in enumerate(spectra):
        stem = os.path.join(out, f"spectrum_{i:04d}")
        if "csv" in config.output.formats:
            path = stem + ".csv"
            _write_text(path, spectrum_to_csv(spec))
            spectrum_files.append(path)
        if "json" in config.output.formats:
            path = stem + ".json"
            _write_text(path, spectrum_to_json(spec))
            spectrum_files.append(path)

    table_file = None
    if swept_values is not None:
        table_file = os.path.join(out, "sweep_table.csv")
        _write_text(table_file, _sweep_table(config, swept_values, spectra))

    manifest_file = os.path.join(out, "manifest.json")
    manifest = {
        "tool": "qwmix",
        "version": __version__,
        "seed": seed,
        "resolved": config.resolved,
        "outputs": sorted(os.path.basename(p) for p in spectrum_files
                          + ([table_file] if table_file else [])),
    }
    _write_text(manifest_file, json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    return RunResult(out, spectrum_files, table_file, manifest_file, spectra)


def _sweep_table(config: ScenarioConfig, values: list[float],
                 spectra: list[ModeSpectrum]) -> str:
    modes = sorted(set().union(*(s.modes.keys() for s in spectra)))
    col = _SWEEP_COLUMN[config.sweep.parameter]
    header = [col] + [f"N[{m}]" for m in modes]
    lines = [",".join(header)]
    for v, spec in zip(values, spectra):
        row = [_g(v)] + [_g(spec.photons(m)) if m in spec.modes else _g(0.0)
                         for m in modes]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
