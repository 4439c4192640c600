"""Declarative pulse protocols: simultaneous two-tone driving, sequential
single-tone pulses, repetition structure, and parameter sweeps.

A sequence is a list of segments inside one repetition period; whatever
time the segments do not cover is free decay. The detuning d_omega sets
the tone comb spacing: tone frequency = atom frequency + mode_index *
d_omega.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .atom import GAMMA1_DEFAULT, DriveTone

# Paper-grade timing defaults: 2 ns pulses repeated every 100 ns.
DT_DEFAULT = 2e-9
TR_DEFAULT = 100e-9
# Simulation default detuning. The hardware used 2*pi*10 kHz (spectrum
# analyser bandwidth); numerically only d_omega << gamma1 matters and a
# larger value keeps time-trace cross-checks short.
DETUNING_DEFAULT = GAMMA1_DEFAULT / 20

_DUR_TOL = 1e-15


@dataclass(frozen=True)
class PulseSegment:
    """Tones applied for `duration` seconds; empty tones = free decay."""

    tones: tuple[DriveTone, ...]
    duration: float

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("segment duration must be >= 0")
        object.__setattr__(self, "tones", tuple(self.tones))

    @property
    def driven(self) -> bool:
        return len(self.tones) > 0


@dataclass(frozen=True)
class PulseSequence:
    """Ordered segments within one repetition period, plus the comb detuning."""

    segments: tuple[PulseSegment, ...]
    repetition_period: float
    detuning: float

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.repetition_period <= 0:
            raise ValueError("repetition_period must be > 0")
        if self.detuning <= 0:
            raise ValueError("detuning must be > 0")
        total = sum(s.duration for s in self.segments)
        if total > self.repetition_period * (1 + 1e-12) + _DUR_TOL:
            raise ValueError(
                f"segments ({total:.3e} s) exceed the repetition period "
                f"({self.repetition_period:.3e} s)")

    @property
    def segment_time(self) -> float:
        return sum(s.duration for s in self.segments)

    @property
    def free_tail(self) -> float:
        return max(0.0, self.repetition_period - self.segment_time)

    def driven_segments(self) -> list[PulseSegment]:
        return [s for s in self.segments if s.driven]

    def without_zero_segments(self) -> "PulseSequence":
        kept = tuple(s for s in self.segments if s.duration > 0)
        return replace(self, segments=kept)

    def warn_if_detuning_large(self, gamma1: float) -> None:
        if self.detuning > gamma1 / 2:
            warnings.warn(
                "detuning exceeds gamma1/2; the frozen-beat-phase picture "
                "degrades well before d_omega ~ gamma1", stacklevel=2)


def preset_classical(omega_rabi: float, dt: float = DT_DEFAULT,
                     t_r: float = TR_DEFAULT,
                     d_omega: float = DETUNING_DEFAULT) -> PulseSequence:
    """Two simultaneous equal-amplitude tones at mode indices -1 and +1.

    This is the classical mixing protocol: a single pulse of length dt in
    which both tones beat against each other, then free decay until t_r.
    """
    if omega_rabi < 0:
        raise ValueError("omega_rabi must be >= 0")
    if dt < 0 or t_r <= 0 or d_omega <= 0:
        raise ValueError("dt, t_r and d_omega must be positive")
    if dt > t_r:
        raise ValueError("pulse length dt exceeds the repetition period")
    seg = PulseSegment(
        (DriveTone(-1, omega_rabi, 0.0), DriveTone(+1, omega_rabi, 0.0)), dt)
    return PulseSequence((seg,), t_r, d_omega)


def preset_quantum(omega1: float, omega2: float, dt1: float = DT_DEFAULT,
                   dt2: float = DT_DEFAULT, gap: float = 0.0,
                   t_r: float = TR_DEFAULT, d_omega: float = DETUNING_DEFAULT,
                   first_tone: int = -1) -> PulseSequence:
    """Two consecutive single-tone pulses (first_tone, then its mirror).

    first_tone = -1 reproduces the lower-then-upper ordering whose mixing
    spectrum carries the lone side peak above the upper tone; +1 mirrors it.
    """
    if first_tone not in (-1, +1):
        raise ValueError("first_tone must be -1 or +1")
    if min(omega1, omega2) < 0:
        raise ValueError("pulse amplitudes must be >= 0")
    if min(dt1, dt2, gap) < 0 or t_r <= 0 or d_omega <= 0:
        raise ValueError("timings must be non-negative and t_r, d_omega positive")
    if dt1 + gap + dt2 > t_r:
        raise ValueError("pulse timings overflow the repetition period")
    segs = (
        PulseSegment((DriveTone(first_tone, omega1, 0.0),), dt1),
        PulseSegment((), gap),
        PulseSegment((DriveTone(-first_tone, omega2, 0.0),), dt2),
    )
    return PulseSequence(segs, t_r, d_omega)


SWEEPABLE = ("omega_rabi", "dt", "omega1", "omega2")


def _classify(seq: PulseSequence) -> str:
    driven = seq.driven_segments()
    if len(driven) == 1 and len(driven[0].tones) == 2:
        modes = sorted(t.mode_index for t in driven[0].tones)
        if modes == [-1, 1]:
            return "classical"
    if len(driven) == 2 and all(len(s.tones) == 1 for s in driven):
        return "quantum"
    return "other"


def sweep_grid(base: PulseSequence, parameter: str, values) -> list[PulseSequence]:
    """Copies of `base` with one preset parameter swept over `values`.

    omega_rabi and dt apply to the classical preset; omega1 and omega2 to
    the sequential preset. Anything else raises.
    """
    values = [float(v) for v in values]
    if not values:
        raise ValueError("sweep values must be non-empty")
    if not all(math.isfinite(v) for v in values):
        raise ValueError("sweep values must be finite")
    if parameter not in SWEEPABLE:
        raise ValueError(f"unknown sweep parameter {parameter!r}; pick from {SWEEPABLE}")

    kind = _classify(base)
    out = []
    if kind == "classical" and parameter == "omega_rabi":
        for v in values:
            segs = tuple(
                PulseSegment(tuple(replace(t, rabi_amplitude=v) for t in s.tones),
                             s.duration) if s.driven else s
                for s in base.segments)
            out.append(replace(base, segments=segs))
    elif kind == "classical" and parameter == "dt":
        for v in values:
            if v > base.repetition_period:
                raise ValueError("swept dt exceeds the repetition period")
            segs = tuple(
                PulseSegment(s.tones, v) if s.driven else s
                for s in base.segments)
            out.append(replace(base, segments=segs))
    elif kind == "quantum" and parameter in ("omega1", "omega2"):
        target = 0 if parameter == "omega1" else 1
        for v in values:
            idx = -1
            segs = []
            for s in base.segments:
                if s.driven:
                    idx += 1
                    if idx == target:
                        s = PulseSegment(
                            tuple(replace(t, rabi_amplitude=v) for t in s.tones),
                            s.duration)
                segs.append(s)
            out.append(replace(base, segments=tuple(segs)))
    else:
        raise ValueError(
            f"parameter {parameter!r} is not applicable to a {kind!r} sequence")
    return out
