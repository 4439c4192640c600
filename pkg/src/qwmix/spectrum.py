"""Emission records and mode-comb spectra at frequencies offset by integer
multiples of the tone detuning.

Successive hardware repetitions of a pulse sequence sample the slow beat
phase phi = d_omega * t at one value per repetition, and relaxation makes
repetitions independent. The long-time power spectrum at offset m *
d_omega is therefore the discrete Fourier series, in phi, of the
single-repetition emission amplitude: simulate one repetition per grid
phase, Fourier-transform across the grid, and integrate. A brute-force
alternative (`time_trace_spectrum`) evolves many consecutive repetitions
with the phase advancing continuously and digitally heterodynes the
concatenated record; the two must agree.

Units: emission amplitudes are the weighted coherences sum_j mu_j *
rho[j, j+1], i.e. the radiated field with the dipole prefactor set to 1.
Photon numbers are per repetition: N_m = gamma1 * integral |a_m(t)|^2 dt.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .atom import (AtomSpec, PhysicalityReport, Trajectory, drive_hamiltonian,
                   ground_state, liouvillian, physicality_report)
from .linalg import expm
from .pulses import PulseSequence

_trapz = getattr(np, "trapezoid", None) or np.trapz

# Sampling targets: at least 20 samples per relaxation time, and at least
# 64 samples per full Rabi turn during drive segments.
DECAY_SAMPLES_PER_LIFETIME = 20
DRIVE_SAMPLES_PER_TURN = 64


@dataclass
class EmissionRecord:
    """Complex emission amplitude over one repetition at fixed beat phase."""

    beat_phase: float
    times: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


class ModeData(NamedTuple):
    amplitude: complex
    photons_per_cycle: float


@dataclass(frozen=True)
class ModeSpectrum:
    """Per-mode complex amplitude and photons per cycle, keyed by mode index."""

    d_omega: float
    modes: dict[int, ModeData]
    diagnostics: PhysicalityReport = field(default_factory=PhysicalityReport)

    def __post_init__(self):
        for m, data in self.modes.items():
            if data.photons_per_cycle < 0:
                raise ValueError(f"negative photon number at mode {m}")

    def mode_indices(self) -> list[int]:
        return sorted(self.modes)

    def photons(self, m: int) -> float:
        return self.modes[m].photons_per_cycle

    def amplitude(self, m: int) -> complex:
        return self.modes[m].amplitude

    def max_photons(self) -> float:
        return max((d.photons_per_cycle for d in self.modes.values()), default=0.0)

    def total_photons(self) -> float:
        return sum(d.photons_per_cycle for d in self.modes.values())


def emission_record(trajectory: Trajectory, atom: AtomSpec,
                    beat_phase: float = 0.0) -> EmissionRecord:
    """Weighted coherence sum_j mu_j * rho[j, j+1](t) along a trajectory."""
    if len(trajectory) == 0:
        raise ValueError("trajectory is empty")
    amps = _amplitudes(trajectory.states, atom)
    bound = 0.5 * sum(atom.transition_elements) + 1e-16
    if np.max(np.abs(amps)) > bound + 1e-6:
        raise ValueError("emission amplitude exceeds the coherence bound")
    return EmissionRecord(beat_phase, trajectory.times.copy(), amps)


def _amplitudes(states: np.ndarray, atom: AtomSpec) -> np.ndarray:
    amps = np.zeros(states.shape[0], dtype=complex)
    for j, mu in enumerate(atom.transition_elements):
        amps += mu * states[:, j, j + 1]
    return amps


# ---------------------------------------------------------------------------
# repetition sampling


def _segment_plan(atom: AtomSpec, seq: PulseSequence) -> list[tuple[object, int, float]]:
    """(segment-or-None, n_steps, step) per piece of one repetition.

    None stands for the trailing free decay. Zero-duration segments are
    dropped. The plan depends only on (atom, seq), so every beat phase of
    a grid shares one time base.
    """
    decay_step = math.inf
    if atom.gamma1 > 0:
        decay_step = 1.0 / (DECAY_SAMPLES_PER_LIFETIME * atom.gamma1)
    mu_max = max(atom.transition_elements)
    plan = []
    for seg in seq.segments:
        if seg.duration <= 0:
            continue
        step = min(decay_step, seg.duration / 8)
        if seg.driven:
            rate = sum(t.rabi_amplitude for t in seg.tones) * mu_max
            if rate > 0:
                step = min(step, 2 * math.pi / (DRIVE_SAMPLES_PER_TURN * rate))
        n = max(8, int(math.ceil(seg.duration / step)))
        plan.append((seg, n, seg.duration / n))
    tail = seq.free_tail
    if tail > 0:
        step = min(decay_step, tail / 8)
        n = max(8, int(math.ceil(tail / step)))
        plan.append((None, n, tail / n))
    return plan


def simulate_repetition(atom: AtomSpec, seq: PulseSequence, beat_phase: float,
                        plan=None, propagator_cache=None):
    """One full repetition from the ground state at frozen beat phase.

    Returns (times, amplitudes, states) with the same time base for every
    phase of a grid.
    """
    if plan is None:
        plan = _segment_plan(atom, seq)
    if propagator_cache is None:
        propagator_cache = {}
    d = atom.levels
    n_total = 1 + sum(n for _, n, _ in plan)
    states = np.empty((n_total, d, d), dtype=complex)
    times = np.empty(n_total)
    states[0] = ground_state(d)
    times[0] = 0.0
    v = states[0].reshape(-1)
    idx = 1
    t = 0.0
    for seg, n, h in plan:
        if seg is None:
            key = ("free", n, h)
            if key not in propagator_cache:
                S = liouvillian(atom, np.zeros((d, d), complex))
                propagator_cache[key] = expm(S * h)
            P = propagator_cache[key]
        else:
            H = drive_hamiltonian(atom, seg.tones, beat_phase) if seg.driven \
                else np.zeros((d, d), complex)
            P = expm(liouvillian(atom, H) * h)
        for _ in range(n):
            v = P @ v
            t += h
            states[idx] = v.reshape(d, d)
            times[idx] = t
            idx += 1
    return times, _amplitudes(states, atom), states


# ---------------------------------------------------------------------------
# phase-grid spectral method


def phase_grid_spectrum(atom: AtomSpec, seq: PulseSequence, grid_size: int,
                        max_mode: int, check_physicality: bool = True) -> ModeSpectrum:
    """Mode spectrum from a discrete Fourier series over the beat phase.

    Simulates one repetition from the ground state at each phi_j = 2 pi
    j / grid_size, forms a_m(t) = (1/M) sum_j amp(t; phi_j) e^{-i m
    phi_j}, and reports photons per cycle N_m = gamma1 * int |a_m|^2 dt
    and the decay-weighted amplitude gamma1 * int a_m dt for |m| <=
    max_mode. grid_size must be at least 2 * max_mode + 2 so the series
    is Nyquist resolved.
    """
    M = int(grid_size)
    if M < 2 * max_mode + 2:
        raise ValueError(
            f"grid_size {M} too small for max_mode {max_mode}: need >= {2 * max_mode + 2}")
    seq.warn_if_detuning_large(atom.gamma1)
    plan = _segment_plan(atom, seq)
    cache: dict = {}
    records = []
    times = None
    report = PhysicalityReport()
    for j in range(M):
        phi = 2 * math.pi * j / M
        times, amps, states = simulate_repetition(atom, seq, phi, plan, cache)
        records.append(amps)
        if check_physicality:
            report = report.merge(physicality_report(states))
    if check_physicality:
        report.require()
    recs = np.array(records)  # (M, nt)
    phases = 2 * math.pi * np.arange(M) / M
    modes = {}
    for m in range(-max_mode, max_mode + 1):
        a_m = (recs * np.exp(-1j * m * phases)[:, None]).mean(axis=0)
        photons = atom.gamma1 * float(_trapz(np.abs(a_m) ** 2, times))
        amplitude = atom.gamma1 * complex(_trapz(a_m, times))
        modes[m] = ModeData(amplitude, photons)
    return ModeSpectrum(seq.detuning, modes, report)


def coherence_mode_amplitudes(atom: AtomSpec, seq: PulseSequence, grid_size: int,
                              max_mode: int) -> dict[int, complex]:
    """Beat-phase Fourier coefficients of the post-sequence coherence.

    Direct readout of the emission amplitude right after the last driven
    segment, bypassing the photon-number integral. This is the quantity
    the decay-free rotation algebra predicts, so it anchors closed-form
    cross-checks with the radiative decay switched off.
    """
    M = int(grid_size)
    if M < 2 * max_mode + 2:
        raise ValueError(
            f"grid_size {M} too small for max_mode {max_mode}: need >= {2 * max_mode + 2}")
    d = atom.levels
    finals = np.empty(M, dtype=complex)
    for j in range(M):
        phi = 2 * math.pi * j / M
        rho = ground_state(d)
        for seg in seq.segments:
            if seg.duration <= 0 or not seg.driven:
                continue
            H = drive_hamiltonian(atom, seg.tones, phi)
            P = expm(liouvillian(atom, H) * seg.duration)
            rho = (P @ rho.reshape(-1)).reshape(d, d)
        finals[j] = sum(mu * rho[k, k + 1]
                        for k, mu in enumerate(atom.transition_elements))
    phases = 2 * math.pi * np.arange(M) / M
    return {m: complex((finals * np.exp(-1j * m * phases)).mean())
            for m in range(-max_mode, max_mode + 1)}


# ---------------------------------------------------------------------------
# brute-force oracle: continuous-phase time trace + digital heterodyne


def _rk4_drive_span(atom: AtomSpec, tones, v, t_abs: float, h: float, n_sub: int,
                    d_omega: float):
    """Advance vec(rho) across one sample step of a drive segment (RK4)."""
    from .atom import lindblad_rhs  # local import to keep module load light

    d = atom.levels
    rho = v.reshape(d, d)
    hs = h / n_sub
    for k in range(n_sub):
        t = t_abs + k * hs

        def rhs(tt, r):
            H = drive_hamiltonian(atom, tones, d_omega * tt)
            return lindblad_rhs(atom, H, r)

        k1 = rhs(t, rho)
        k2 = rhs(t + 0.5 * hs, rho + 0.5 * hs * k1)
        k3 = rhs(t + 0.5 * hs, rho + 0.5 * hs * k2)
        k4 = rhs(t + hs, rho + hs * k3)
        rho = rho + (hs / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho.reshape(-1)


def time_trace_spectrum(atom: AtomSpec, seq: PulseSequence, n_periods: int,
                        max_mode: int | None = None,
                        check_physicality: bool = True) -> ModeSpectrum:
    """Spectrum from consecutive repetitions with continuously advancing phase.

    Evolves n_periods repetitions back to back (no state reset, drive
    phases follow phi = d_omega * t exactly), demodulates the concatenated
    emission record by e^{-i m d_omega t}, and low-pass averages across
    repetitions at fixed intra-period time. Repetition-to-repetition the
    beat phase steps by d_omega * T_r, so modes are only resolved when the
    step pattern suppresses cross-talk; the achievable max_mode is derived
    from that (and capped at 9 by default).
    """
    if n_periods < 2 * math.pi / (seq.detuning * seq.repetition_period):
        raise ValueError(
            "n_periods must cover at least one full beat cycle "
            f"(need >= {2 * math.pi / (seq.detuning * seq.repetition_period):.1f})")
    seq.warn_if_detuning_large(atom.gamma1)

    leak = _comb_leakage(seq.detuning * seq.repetition_period, n_periods)
    if max_mode is None:
        max_mode = 0
        while max_mode < 9 and max(leak(dm) for dm in range(1, 2 * max_mode + 3)) < 1e-3:
            max_mode += 1
        if max_mode == 0:
            raise ValueError(
                "the repetition phase step cannot isolate any mode; "
                "choose n_periods commensurate with the beat cycle")
    else:
        bad = [dm for dm in range(1, 2 * max_mode + 1) if leak(dm) >= 1e-3]
        if bad:
            raise ValueError(
                f"modes separated by {bad} alias together for this detuning x "
                "period; reduce max_mode or adjust n_periods/T_r")

    plan = _segment_plan(atom, seq)
    d = atom.levels
    n_samp = 1 + sum(n for _, n, _ in plan)
    taus = np.empty(n_samp)
    recs = np.empty((n_periods, n_samp), dtype=complex)

    decay_cache: dict = {}
    v = ground_state(d).reshape(-1)
    report = PhysicalityReport()
    states_scratch = np.empty((n_samp, d, d), dtype=complex)
    for r in range(n_periods):
        t0 = r * seq.repetition_period
        tau = 0.0
        idx = 0
        taus[idx] = tau
        states_scratch[idx] = v.reshape(d, d)
        idx += 1
        for seg, n, h in plan:
            if seg is None or not seg.driven:
                key = ("free", n, h)
                if key not in decay_cache:
                    S = liouvillian(atom, np.zeros((d, d), complex))
                    decay_cache[key] = expm(S * h)
                P = decay_cache[key]
                for _ in range(n):
                    v = P @ v
                    tau += h
                    taus[idx] = tau
                    states_scratch[idx] = v.reshape(d, d)
                    idx += 1
            else:
                rate = sum(t.rabi_amplitude for t in seg.tones) \
                    * max(atom.transition_elements)
                n_sub = max(1, int(math.ceil(rate * h / 0.025))) if rate > 0 else 1
                for _ in range(n):
                    v = _rk4_drive_span(atom, seg.tones, v, t0 + tau, h, n_sub,
                                        seq.detuning)
                    tau += h
                    taus[idx] = tau
                    states_scratch[idx] = v.reshape(d, d)
                    idx += 1
        recs[r] = _amplitudes(states_scratch, atom)
        if check_physicality:
            report = report.merge(physicality_report(states_scratch))
    if check_physicality:
        report.require()

    modes = {}
    for m in range(-max_mode, max_mode + 1):
        acc = np.zeros(n_samp, dtype=complex)
        for r in range(n_periods):
            acc += recs[r] * np.exp(-1j * m * seq.detuning
                                    * (r * seq.repetition_period + taus))
        acc /= n_periods
        photons = atom.gamma1 * float(_trapz(np.abs(acc) ** 2, taus))
        amplitude = atom.gamma1 * complex(_trapz(acc, taus))
        modes[m] = ModeData(amplitude, photons)
    return ModeSpectrum(seq.detuning, modes, report)


def _comb_leakage(phase_step: float, n: int):
    """Dirichlet-kernel magnitude of mode cross-talk after n repetitions."""

    def leak(delta_m: int) -> float:
        x = 0.5 * delta_m * phase_step
        denom = n * abs(math.sin(x))
        if denom < 1e-12:
            return 1.0  # delta_m * step is a multiple of 2 pi: full alias
        return abs(math.sin(n * x)) / denom

    return leak


# ---------------------------------------------------------------------------
# peak detection and serialization


def detect_peaks(spec: ModeSpectrum, rel_threshold: float = 1e-3) -> list[int]:
    """Modes whose photon number reaches rel_threshold of the largest."""
    if not 0 < rel_threshold < 1:
        raise ValueError("rel_threshold must lie in (0, 1)")
    top = spec.max_photons()
    if top <= 0:
        return []
    return sorted(m for m, d in spec.modes.items()
                  if d.photons_per_cycle >= rel_threshold * top)


def _g(x: float) -> str:
    return format(float(x), ".17g")


def spectrum_to_csv(spec: ModeSpectrum) -> str:
    lines = ["m,amplitude_re,amplitude_im,photons_per_cycle"]
    for m in spec.mode_indices():
        d = spec.modes[m]
        lines.append(f"{m},{_g(d.amplitude.real)},{_g(d.amplitude.imag)},"
                     f"{_g(d.photons_per_cycle)}")
    return "\n".join(lines) + "\n"


def spectrum_to_json(spec: ModeSpectrum) -> str:
    doc = {
        "d_omega": spec.d_omega,
        "modes": [
            {
                "m": m,
                "amplitude": [spec.modes[m].amplitude.real,
                              spec.modes[m].amplitude.imag],
                "photons_per_cycle": spec.modes[m].photons_per_cycle,
            }
            for m in spec.mode_indices()
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def spectrum_from_json(text: str) -> ModeSpectrum:
    doc = json.loads(text)
    modes = {
        int(entry["m"]): ModeData(
            complex(entry["amplitude"][0], entry["amplitude"][1]),
            float(entry["photons_per_cycle"]))
        for entry in doc["modes"]
    }
    return ModeSpectrum(float(doc["d_omega"]), modes)
