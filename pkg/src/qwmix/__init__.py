"""Two-tone wave mixing on a single artificial atom in a 1D waveguide.

Simulates Lindblad dynamics of a driven two- or three-level ladder atom,
extracts the comb of elastic emission peaks at integer multiples of the
tone detuning, and ships the closed-form laws (odd-order Bessel Rabi
oscillations, sequential-pulse rotation algebra, peak counting) the
simulation is validated against.
"""

__version__ = "0.1.0"

from .atom import (AtomSpec, DriveTone, NumericalContractViolation, Trajectory,
                   drive_hamiltonian, evolve, evolve_swept_phase, ground_state,
                   lindblad_rhs, liouvillian)
from .oracles import (FockVector, PeakPrediction, bessel_j,
                      classical_mode_amplitude, classical_photon_number,
                      jacobi_anger_residual, make_state, predicted_peak_count,
                      two_pulse_spectrum)
from .pulses import (PulseSegment, PulseSequence, preset_classical,
                     preset_quantum, sweep_grid)
from .spectrum import (EmissionRecord, ModeSpectrum, coherence_mode_amplitudes,
                       detect_peaks, emission_record, phase_grid_spectrum,
                       spectrum_from_json, spectrum_to_csv, spectrum_to_json,
                       time_trace_spectrum)

__all__ = [
    "AtomSpec", "DriveTone", "NumericalContractViolation", "Trajectory",
    "drive_hamiltonian", "evolve", "evolve_swept_phase", "ground_state",
    "lindblad_rhs", "liouvillian",
    "FockVector", "PeakPrediction", "bessel_j", "classical_mode_amplitude",
    "classical_photon_number", "jacobi_anger_residual", "make_state",
    "predicted_peak_count", "two_pulse_spectrum",
    "PulseSegment", "PulseSequence", "preset_classical", "preset_quantum",
    "sweep_grid",
    "EmissionRecord", "ModeSpectrum", "coherence_mode_amplitudes",
    "detect_peaks", "emission_record", "phase_grid_spectrum",
    "spectrum_from_json", "spectrum_to_csv", "spectrum_to_json",
    "time_trace_spectrum",
]
