import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qwmix.atom import GAMMA1_DEFAULT, DriveTone
from qwmix.pulses import (DETUNING_DEFAULT, PulseSegment, PulseSequence,
                          preset_classical, preset_quantum, sweep_grid)


def test_classical_preset_structure():
    seq = preset_classical(1e8, 2e-9, 100e-9, DETUNING_DEFAULT)
    assert len(seq.segments) == 1
    seg = seq.segments[0]
    assert sorted(t.mode_index for t in seg.tones) == [-1, 1]
    assert all(t.rabi_amplitude == 1e8 and t.phase_offset == 0.0 for t in seg.tones)
    assert seg.duration == 2e-9
    assert seq.free_tail == pytest.approx(98e-9)


def test_classical_preset_errors():
    with pytest.raises(ValueError):
        preset_classical(1e8, dt=200e-9, t_r=100e-9)
    with pytest.raises(ValueError):
        preset_classical(-1.0)
    with pytest.raises(ValueError):
        preset_classical(1e8, d_omega=0.0)


def test_classical_zero_duration_and_zero_amplitude():
    assert preset_classical(1e8, dt=0.0).segments[0].duration == 0.0
    seq = preset_classical(0.0)
    assert all(t.rabi_amplitude == 0.0 for t in seq.segments[0].tones)


def test_quantum_preset_structure_and_order():
    seq = preset_quantum(2e8, 3e8, 2e-9, 4e-9, 1e-9, 100e-9, DETUNING_DEFAULT, -1)
    driven = seq.driven_segments()
    assert [s.tones[0].mode_index for s in driven] == [-1, +1]
    assert [s.tones[0].rabi_amplitude for s in driven] == [2e8, 3e8]
    assert seq.segments[1].tones == () and seq.segments[1].duration == 1e-9
    mirrored = preset_quantum(2e8, 3e8, first_tone=+1)
    assert [s.tones[0].mode_index for s in mirrored.driven_segments()] == [+1, -1]


def test_quantum_preset_timing_overflow():
    with pytest.raises(ValueError):
        preset_quantum(1e8, 1e8, 60e-9, 50e-9, 0.0, 100e-9)
    with pytest.raises(ValueError):
        preset_quantum(1e8, 1e8, first_tone=2)


def test_quantum_zero_first_pulse_is_single_tone_scattering():
    seq = preset_quantum(1e8, 2e8, dt1=0.0)
    live = seq.without_zero_segments().driven_segments()
    assert len(live) == 1
    assert live[0].tones[0].mode_index == +1


def test_quantum_degenerate_equals_single_pulse():
    two = preset_quantum(1e8, 0.0, dt1=2e-9, dt2=0.0, gap=0.0)
    # after dropping zero-length segments only the first pulse remains
    kept = two.without_zero_segments()
    assert len(kept.segments) == 1
    assert kept.segments[0].tones[0].mode_index == -1


def test_sequence_invariants():
    with pytest.raises(ValueError):
        PulseSequence((PulseSegment((), 200e-9),), 100e-9, DETUNING_DEFAULT)
    with pytest.raises(ValueError):
        PulseSequence((), 100e-9, -1.0)
    with pytest.raises(ValueError):
        PulseSegment((), -1e-9)


def test_detuning_warning_threshold():
    seq = preset_classical(1e8, d_omega=0.9 * GAMMA1_DEFAULT)
    with pytest.warns(UserWarning):
        seq.warn_if_detuning_large(GAMMA1_DEFAULT)
    quiet = preset_classical(1e8, d_omega=GAMMA1_DEFAULT / 20)
    quiet.warn_if_detuning_large(GAMMA1_DEFAULT)  # no warning expected


def test_sweep_omega_rabi():
    base = preset_classical(1e8)
    values = np.linspace(0, 5e8, 50)
    seqs = sweep_grid(base, "omega_rabi", values)
    assert len(seqs) == 50
    for v, s in zip(values, seqs):
        amps = {t.rabi_amplitude for t in s.segments[0].tones}
        assert amps == {v}
        assert s.repetition_period == base.repetition_period
        assert s.detuning == base.detuning


def test_sweep_dt_adjusts_only_the_pulse():
    base = preset_classical(1e8, dt=2e-9)
    seqs = sweep_grid(base, "dt", [1e-9, 4e-9])
    assert [s.segments[0].duration for s in seqs] == [1e-9, 4e-9]
    assert [s.free_tail for s in seqs] == [pytest.approx(99e-9), pytest.approx(96e-9)]


def test_sweep_2d_grid_by_nesting():
    base = preset_quantum(1e8, 1e8)
    grid = [sweep_grid(s, "omega2", [1e8, 2e8, 3e8])
            for s in sweep_grid(base, "omega1", [1e8, 2e8])]
    assert len(grid) == 2 and all(len(row) == 3 for row in grid)
    amp1 = {row[0].driven_segments()[0].tones[0].rabi_amplitude for row in grid}
    assert amp1 == {1e8, 2e8}


def test_sweep_errors():
    base = preset_classical(1e8)
    with pytest.raises(ValueError):
        sweep_grid(base, "omega1", [1e8])
    with pytest.raises(ValueError):
        sweep_grid(base, "omega_rabi", [])
    with pytest.raises(ValueError):
        sweep_grid(base, "omega_rabi", [float("nan")])
    with pytest.raises(ValueError):
        sweep_grid(preset_quantum(1e8, 1e8), "dt", [1e-9])
    with pytest.raises(ValueError):
        sweep_grid(base, "bogus", [1.0])


@given(st.floats(1e6, 1e9), st.floats(0.5e-9, 5e-9), st.integers(1, 40))
def test_presets_referentially_transparent(omega, dt, n_vals):
    a = preset_classical(omega, dt)
    b = preset_classical(omega, dt)
    assert a == b
    values = [float(k) * 1e7 for k in range(1, n_vals + 1)]
    assert sweep_grid(a, "omega_rabi", values) == sweep_grid(b, "omega_rabi", values)
