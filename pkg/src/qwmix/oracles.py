"""Closed-form predictions the simulator is tested against.

Includes a self-contained Bessel-J evaluator (power series at small
argument, Miller backward recurrence at large), the odd-harmonic
classical mixing law, the decay-free rotation algebra of the sequential
two-pulse protocol, photonic state constructors, and the peak-count law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BESSEL_Z_MAX = 30.0
_SERIES_CUTOVER = 10.0


def bessel_j(n: int, z: float) -> float:
    """Bessel function of the first kind J_n(z), |z| <= 30, n >= 0.

    Absolute error below 1e-12 over the validated range: the power series
    is used for |z| <= 10 (no significant cancellation there) and Miller's
    backward recurrence, normalized with J_0 + 2*sum J_2k = 1, beyond.
    """
    if n < 0 or int(n) != n:
        raise ValueError("order n must be a non-negative integer")
    n = int(n)
    z = float(z)
    if not math.isfinite(z) or abs(z) > BESSEL_Z_MAX:
        raise ValueError(f"|z| must be <= {BESSEL_Z_MAX} (got {z!r})")
    sign = -1.0 if (z < 0 and n % 2 == 1) else 1.0
    z = abs(z)
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    if z <= _SERIES_CUTOVER:
        return sign * _bessel_series(n, z)
    return sign * _bessel_miller(n, z)


def _bessel_series(n: int, z: float) -> float:
    half = 0.5 * z
    # leading term (z/2)^n / n!, built in log space to dodge under/overflow
    lg = n * math.log(half) - math.lgamma(n + 1)
    if lg < -745.0:
        return 0.0
    term = math.exp(lg)
    total = term
    hh = half * half
    s = 0
    while True:
        s += 1
        term *= -hh / (s * (n + s))
        total += term
        if abs(term) <= 1e-18 * (abs(total) + 1e-300) or s > 400:
            return total


def _bessel_miller(n: int, z: float) -> float:
    start = max(n, int(math.ceil(z))) + 42
    if start % 2:
        start += 1
    jp, j = 0.0, 1e-300
    result = 0.0
    norm = 0.0
    for k in range(start, 0, -1):
        jm = (2.0 * k / z) * j - jp
        jp, j = j, jm
        if abs(j) > 1e250:  # rescale to avoid overflow
            j *= 1e-250
            jp *= 1e-250
            result *= 1e-250
            norm *= 1e-250
        if k - 1 == n:
            result = j
        if (k - 1) % 2 == 0:
            norm += 2.0 * j
    norm -= j  # J_0 counted once, not twice
    return result / norm


def classical_mode_amplitude(k: int, omega_rabi: float, dt: float) -> complex:
    """Emitted mode amplitude of classical two-tone mixing at mode 2k+1.

    For equal-amplitude tones the odd-harmonic coefficients follow
    (-1)^k/2 * J_{2k+1}(2*Omega*dt); photons per cycle is the squared
    magnitude.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    z = 2.0 * omega_rabi * dt
    if not math.isfinite(z):
        raise ValueError("omega_rabi * dt must be finite")
    return complex(((-1.0) ** k) * 0.5 * bessel_j(2 * k + 1, z))


def classical_photon_number(k: int, omega_rabi: float, dt: float) -> float:
    """Photons per cycle in mode 2k+1 under classical two-tone mixing."""
    return abs(classical_mode_amplitude(k, omega_rabi, dt)) ** 2


def jacobi_anger_residual(z: float, phi: float, K: int) -> float:
    """|sin(z cos phi) - 2 sum_{k=0}^{K} (-1)^k J_{2k+1}(z) cos((2k+1) phi)|."""
    if K < 0:
        raise ValueError("K must be >= 0")
    acc = 0.0
    for k in range(K + 1):
        acc += ((-1.0) ** k) * bessel_j(2 * k + 1, z) * math.cos((2 * k + 1) * phi)
    return abs(math.sin(z * math.cos(phi)) - 2.0 * acc)


@dataclass(frozen=True)
class PeakPrediction:
    """Predicted mode indices (strictly increasing) and complex amplitudes."""

    modes: tuple[int, ...]
    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        if len(self.modes) != len(self.amplitudes):
            raise ValueError("modes and amplitudes must have equal length")
        if any(b <= a for a, b in zip(self.modes, self.modes[1:])):
            raise ValueError("modes must be strictly increasing")
        if not all(np.isfinite(a) for a in self.amplitudes):
            raise ValueError("amplitudes must be finite")

    def magnitude(self, mode: int) -> float:
        return abs(self.amplitudes[self.modes.index(mode)])


def two_pulse_spectrum(theta1: float, theta2: float) -> PeakPrediction:
    """Decay-free mode amplitudes of the sequential two-pulse protocol.

    First pulse (lower tone) of area theta1 from the ground state, then
    the upper tone with area theta2: the final coherence has exactly three
    beat-phase Fourier components,

        mode -1: (i/2) sin(theta1) cos^2(theta2/2)    (lower tone)
        mode +1: (i/2) sin(theta2) cos(theta1)        (upper tone)
        mode +3: -(i/2) sin(theta1) sin^2(theta2/2)   (mixing side peak)

    with every other mode identically zero. The phase convention matches
    the simulator's emission Fourier analysis; magnitudes are convention
    free.
    """
    p = 0.5 * math.sin(theta1) * math.cos(theta2 / 2) ** 2
    q = 0.5 * math.sin(theta2) * math.cos(theta1)
    r = -0.5 * math.sin(theta1) * math.sin(theta2 / 2) ** 2
    return PeakPrediction((-1, +1, +3), (1j * p, 1j * q, 1j * r))


@dataclass(frozen=True)
class FockVector:
    """Photon-number-basis coefficients c_0..c_truncation, unit norm."""

    truncation: int
    coefficients: tuple[complex, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.truncation + 1:
            raise ValueError("need truncation + 1 coefficients")
        norm = math.fsum(abs(c) ** 2 for c in self.coefficients)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized (|c|^2 sums to {norm!r})")

    @property
    def photon_content(self) -> int:
        """Highest Fock state with non-negligible weight."""
        idx = [n for n, c in enumerate(self.coefficients) if abs(c) > 1e-12]
        return max(idx) if idx else 0


def make_state(kind: str, **params) -> FockVector:
    """Construct the photonic states probed by the mixing spectra.

    kind = "coherent":   params alpha, truncation
    kind = "zero_one":   params theta          -> (cos t/2, sin t/2)
    kind = "two_photon": params gamma1, gamma2 -> (1, g1, g2) normalized
    """
    if kind == "coherent":
        alpha = complex(params["alpha"])
        n_max = int(params["truncation"])
        if n_max < 0:
            raise ValueError("truncation must be >= 0")
        if abs(alpha) ** 2 >= 0.5 * n_max and abs(alpha) > 0:
            raise ValueError(
                "truncation too small for |alpha|: need |alpha|^2 / truncation < 0.5")
        coeff = np.empty(n_max + 1, dtype=complex)
        coeff[0] = 1.0
        for n in range(1, n_max + 1):
            coeff[n] = coeff[n - 1] * alpha / math.sqrt(n)
        coeff *= math.exp(-0.5 * abs(alpha) ** 2)
        coeff /= math.sqrt(math.fsum(abs(c) ** 2 for c in coeff))
        return FockVector(n_max, tuple(coeff))
    if kind == "zero_one":
        theta = float(params["theta"])
        return FockVector(1, (complex(math.cos(theta / 2)), complex(math.sin(theta / 2))))
    if kind == "two_photon":
        g1 = complex(params["gamma1"])
        g2 = complex(params["gamma2"])
        norm = math.sqrt(1.0 + abs(g1) ** 2 + abs(g2) ** 2)
        return FockVector(2, (1.0 / norm, g1 / norm, g2 / norm))
    raise ValueError(f"unknown state kind {kind!r}")


def predicted_peak_count(n_ph) -> float:
    """Total peak count 2*N_ph + 1; infinite for the classical marker."""
    if n_ph == math.inf:
        return math.inf
    n = int(n_ph)
    if n < 1 or n != n_ph:
        raise ValueError("n_ph must be a positive integer or math.inf")
    return 2 * n + 1
