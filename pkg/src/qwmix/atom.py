"""N-level atom, rotating-frame drive, and Lindblad time evolution.

Conventions
-----------
* Levels are labelled 0 (ground) upward; only neighbouring levels couple.
* A drive tone is specified by an integer mode index m (its frequency is
  the atomic frequency plus m times the tone detuning), a Rabi amplitude
  Omega and a phase offset. Omega is the measured Rabi frequency: under a
  single resonant tone the excited-state population of a two-level atom
  oscillates as sin^2(Omega*t/2), i.e. at angular frequency Omega, and a
  pi pulse has Omega*dt = pi. Each tone therefore contributes
  (Omega*mu_j/2) * exp(-i*(m*phi + offset)) |j+1><j| + h.c.
  to H/hbar, with phi the slowly varying beat phase.
* Radiative decay acts on each transition with collapse operator
  |j><j+1| at rate gamma1 * mu_j^2. Optional pure dephasing uses
  L_z = sqrt(2) * diag(0, 1, ..., d-1), which adds exactly gamma_phi to
  the decay rate of neighbouring-level coherences.

Within a pulse segment the beat phase is held fixed (the drive beat is
slow on the pulse timescale), making the generator time independent, so
segments propagate by exact exponentiation of the vectorized
superoperator. A continuously advancing phase mode is provided separately
for cross-validation (`evolve_swept_phase`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import expm

TWO_PI = 2.0 * math.pi

# Paper-grade defaults: radiative rate Gamma1/2pi = 20 MHz.
GAMMA1_DEFAULT = TWO_PI * 20e6


class NumericalContractViolation(RuntimeError):
    """A physicality bound (trace, Hermiticity, positivity) was exceeded."""


@dataclass(frozen=True)
class AtomSpec:
    """Ladder atom with relative dipole elements and decay rates (rad/s)."""

    levels: int = 2
    transition_elements: tuple[float, ...] = (1.0,)
    gamma1: float = GAMMA1_DEFAULT
    gamma_phi: float = 0.0

    def __post_init__(self):
        if self.levels not in (2, 3):
            raise ValueError("levels must be 2 or 3")
        mus = tuple(float(m) for m in self.transition_elements)
        if len(mus) != self.levels - 1:
            raise ValueError("need one transition element per ladder step")
        if mus[0] != 1.0:
            raise ValueError("transition_elements[0] must be 1 (g-e reference)")
        if self.gamma1 < 0 or self.gamma_phi < 0:
            raise ValueError("rates must be non-negative")
        object.__setattr__(self, "transition_elements", mus)

    @classmethod
    def two_level(cls, gamma1: float = GAMMA1_DEFAULT, gamma_phi: float = 0.0) -> "AtomSpec":
        return cls(2, (1.0,), gamma1, gamma_phi)

    @classmethod
    def three_level(cls, gamma1: float = GAMMA1_DEFAULT, mu_ef: float = math.sqrt(2.0),
                    gamma_phi: float = 0.0) -> "AtomSpec":
        """Weakly anharmonic ladder; mu_ef defaults to the sqrt(2) circuit value."""
        return cls(3, (1.0, float(mu_ef)), gamma1, gamma_phi)


@dataclass(frozen=True)
class DriveTone:
    """One drive tone: frequency = atom frequency + mode_index * detuning."""

    mode_index: int
    rabi_amplitude: float
    phase_offset: float = 0.0

    def __post_init__(self):
        if self.rabi_amplitude < 0:
            raise ValueError("rabi_amplitude must be >= 0")


def ground_state(levels: int) -> np.ndarray:
    rho = np.zeros((levels, levels), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def excited_state(levels: int, level: int = 1) -> np.ndarray:
    rho = np.zeros((levels, levels), dtype=complex)
    rho[level, level] = 1.0
    return rho


def density_from_ket(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def lowering_operators(levels: int) -> list[np.ndarray]:
    """|j><j+1| for each ladder step j."""
    ops = []
    for j in range(levels - 1):
        L = np.zeros((levels, levels), dtype=complex)
        L[j, j + 1] = 1.0
        ops.append(L)
    return ops


def drive_hamiltonian(atom: AtomSpec, tones, beat_phase: float) -> np.ndarray:
    """Rotating-frame RWA drive Hamiltonian (units of rad/s) at fixed beat phase.

    Both ladder transitions of a three-level atom are resonant, so every
    tone drives each step j with weight mu_j.
    """
    tones = list(tones)
    if not tones:
        raise ValueError("at least one tone is required")
    d = atom.levels
    mus = atom.transition_elements
    H = np.zeros((d, d), dtype=complex)
    for tone in tones:
        amp = np.exp(-1j * (tone.mode_index * beat_phase + tone.phase_offset))
        for j in range(d - 1):
            H[j + 1, j] += 0.5 * tone.rabi_amplitude * mus[j] * amp
    return H + H.conj().T


def collapse_terms(atom: AtomSpec) -> list[tuple[float, np.ndarray]]:
    """(rate, operator) pairs: radiative ladder decay plus optional dephasing."""
    terms = [
        (atom.gamma1 * mu * mu, L)
        for mu, L in zip(atom.transition_elements, lowering_operators(atom.levels))
    ]
    if atom.gamma_phi > 0:
        Lz = math.sqrt(2.0) * np.diag(np.arange(atom.levels, dtype=complex))
        terms.append((atom.gamma_phi, Lz))
    return terms


def lindblad_rhs(atom: AtomSpec, H, rho) -> np.ndarray:
    """d(rho)/dt = -i[H, rho] + sum_k gamma_k D[L_k] rho."""
    H = np.asarray(H, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if H.shape != (atom.levels, atom.levels) or rho.shape != H.shape:
        raise ValueError("dimension mismatch between atom, H and rho")
    out = -1j * (H @ rho - rho @ H)
    for g, L in collapse_terms(atom):
        Ld = L.conj().T
        LdL = Ld @ L
        out += g * (L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def liouvillian(atom: AtomSpec, H) -> np.ndarray:
    """Vectorized generator S with d(vec rho)/dt = S vec(rho), C-order vec."""
    H = np.asarray(H, dtype=complex)
    d = atom.levels
    I = np.eye(d, dtype=complex)
    S = -1j * (np.kron(H, I) - np.kron(I, H.T))
    for g, L in collapse_terms(atom):
        LdL = L.conj().T @ L
        S += g * (np.kron(L, L.conj()) - 0.5 * (np.kron(LdL, I) + np.kron(I, LdL.T)))
    return S


@dataclass
class Trajectory:
    """Sampled density-matrix evolution: states[i] at times[i]."""

    times: np.ndarray
    states: np.ndarray  # shape (n, d, d)

    def __iter__(self):
        return iter(zip(self.times, self.states))

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def check_density_matrix(rho, trace_tol: float = 1e-10, herm_tol: float = 1e-10,
                         eig_floor: float = -1e-9) -> None:
    """Raise NumericalContractViolation if rho is not a physical state."""
    physicality_report(np.asarray(rho, dtype=complex)[None, :, :]).require(
        trace_tol, herm_tol, eig_floor)


@dataclass
class PhysicalityReport:
    """Worst-case physicality metrics over a batch of states."""

    max_trace_dev: float = 0.0
    max_herm_dev: float = 0.0
    min_eigenvalue: float = 1.0

    def merge(self, other: "PhysicalityReport") -> "PhysicalityReport":
        return PhysicalityReport(
            max(self.max_trace_dev, other.max_trace_dev),
            max(self.max_herm_dev, other.max_herm_dev),
            min(self.min_eigenvalue, other.min_eigenvalue),
        )

    def ok(self, trace_tol: float = 1e-10, herm_tol: float = 1e-10,
           eig_floor: float = -1e-9) -> bool:
        return (self.max_trace_dev < trace_tol and self.max_herm_dev < herm_tol
                and self.min_eigenvalue >= eig_floor)

    def require(self, trace_tol: float = 1e-10, herm_tol: float = 1e-10,
                eig_floor: float = -1e-9) -> None:
        if not self.ok(trace_tol, herm_tol, eig_floor):
            raise NumericalContractViolation(
                f"state left the physical set: |tr-1|={self.max_trace_dev:.3e}, "
                f"herm dev={self.max_herm_dev:.3e}, min eig={self.min_eigenvalue:.3e}; "
                "reduce dt_max or check the generator")


def physicality_report(states: np.ndarray) -> PhysicalityReport:
    """Batch trace / Hermiticity / positivity diagnostics for (n, d, d) states."""
    states = np.asarray(states, dtype=complex)
    traces = np.einsum("nii->n", states)
    herm = np.max(np.abs(states - states.conj().transpose(0, 2, 1)), axis=(1, 2))
    sym = 0.5 * (states + states.conj().transpose(0, 2, 1))
    eigs = np.linalg.eigvalsh(sym)
    return PhysicalityReport(
        float(np.max(np.abs(traces - 1.0))),
        float(np.max(herm)),
        float(np.min(eigs)),
    )


def evolve(atom: AtomSpec, tones, beat_phase: float, rho0, duration: float,
           dt_max: float, check: bool = True) -> Trajectory:
    """Propagate rho0 under the frozen-phase Lindblad generator.

    The generator is time independent, so each sampling step of size
    <= dt_max applies the exact exponential propagator; dt_max only sets
    the trajectory's sampling density.
    """
    if duration < 0:
        raise ValueError("duration must be >= 0")
    if dt_max <= 0:
        raise ValueError("dt_max must be > 0")
    rho0 = np.asarray(rho0, dtype=complex)
    d = atom.levels
    if rho0.shape != (d, d):
        raise ValueError("rho0 dimension does not match the atom")
    if duration == 0:
        return Trajectory(np.zeros(1), rho0[None, :, :].copy())

    H = drive_hamiltonian(atom, tones, beat_phase) if tones else np.zeros((d, d), complex)
    S = liouvillian(atom, H)
    n = max(1, int(math.ceil(duration / dt_max)))
    h = duration / n
    P = expm(S * h)

    states = np.empty((n + 1, d, d), dtype=complex)
    states[0] = rho0
    v = rho0.reshape(-1)
    for i in range(n):
        v = P @ v
        states[i + 1] = v.reshape(d, d)
    times = np.linspace(0.0, duration, n + 1)
    traj = Trajectory(times, states)
    if check:
        rep = physicality_report(states)
        if rep.max_trace_dev > 1e-8:
            raise NumericalContractViolation(
                f"trace drifted by {rep.max_trace_dev:.3e} (> 1e-8); "
                "use a smaller dt_max")
        rep.require()
    return traj


def evolve_swept_phase(atom: AtomSpec, tones, rho0, duration: float, dt_max: float,
                       d_omega: float, t_start: float = 0.0) -> Trajectory:
    """Propagate with the beat phase advancing continuously, phi = d_omega * t.

    Classic RK4 with step <= dt_max on the time-dependent master equation;
    `t_start` is the absolute time at which this segment begins. Used for
    cross-validating the frozen-phase approximation.
    """
    if duration < 0:
        raise ValueError("duration must be >= 0")
    if dt_max <= 0:
        raise ValueError("dt_max must be > 0")
    rho0 = np.asarray(rho0, dtype=complex)
    d = atom.levels
    if duration == 0:
        return Trajectory(np.zeros(1), rho0[None, :, :].copy())
    tones = list(tones)

    def rhs(t_abs, rho):
        H = drive_hamiltonian(atom, tones, d_omega * t_abs) if tones \
            else np.zeros((d, d), complex)
        return lindblad_rhs(atom, H, rho)

    n = max(1, int(math.ceil(duration / dt_max)))
    h = duration / n
    states = np.empty((n + 1, d, d), dtype=complex)
    states[0] = rho0
    rho = rho0
    for i in range(n):
        t = t_start + i * h
        k1 = rhs(t, rho)
        k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2)
        k4 = rhs(t + h, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        states[i + 1] = rho
    times = np.linspace(0.0, duration, n + 1)
    traj = Trajectory(times, states)
    rep = physicality_report(states)
    if rep.max_trace_dev > 1e-8:
        raise NumericalContractViolation(
            f"trace drifted by {rep.max_trace_dev:.3e} (> 1e-8); use a smaller dt_max")
    return traj


def purity(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))
