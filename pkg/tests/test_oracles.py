import math

import numpy as np
import pytest
import scipy.optimize
import scipy.special
from hypothesis import given, strategies as st

from qwmix.oracles import (FockVector, bessel_j, classical_mode_amplitude,
                           classical_photon_number, jacobi_anger_residual,
                           make_state, predicted_peak_count, two_pulse_spectrum)

SP = np.array([[0, 0], [1, 0]], dtype=complex)
SM = SP.conj().T


def test_bessel_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    for n in range(1, 8):
        assert bessel_j(n, 0.0) == 0.0


def test_bessel_first_maximum_of_j1():
    # root-find J_1'(z) = (J_0 - J_2)/2 = 0 on the series oracle
    zstar = scipy.optimize.brentq(
        lambda z: bessel_j(0, z) - bessel_j(2, z), 1.0, 3.0, xtol=1e-12)
    assert zstar == pytest.approx(1.8412, abs=1e-4)
    assert bessel_j(1, zstar) == pytest.approx(0.5819, abs=1e-4)


def test_bessel_recurrence_residual():
    for z in np.arange(0.5, 30.0, 0.7):
        for n in range(1, 12):
            resid = bessel_j(n - 1, z) + bessel_j(n + 1, z) \
                - (2 * n / z) * bessel_j(n, z)
            assert abs(resid) < 1e-10


def test_bessel_against_scipy_dense():
    worst = 0.0
    for n in range(0, 30):
        for z in np.arange(0.0, 30.0001, 0.13):
            worst = max(worst, abs(bessel_j(n, z) - scipy.special.jv(n, z)))
    assert worst < 1e-12


def test_bessel_negative_argument_parity():
    for n in range(0, 6):
        for z in (0.7, 3.3, 12.5):
            assert bessel_j(n, -z) == pytest.approx(((-1) ** n) * bessel_j(n, z),
                                                    abs=1e-14)


def test_bessel_domain_errors():
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)
    with pytest.raises(ValueError):
        bessel_j(0, 31.0)
    with pytest.raises(ValueError):
        bessel_j(0, float("nan"))


def test_classical_mode_amplitude_values():
    assert classical_mode_amplitude(0, 0.0, 1e-9) == 0.0
    # 2*Omega*dt at the first maximum of J_1: amplitude magnitude is J_1/2
    amp = classical_mode_amplitude(0, 1.8412 / (2 * 2e-9), 2e-9)
    assert abs(amp) == pytest.approx(0.2910, abs=2e-4)
    # sign alternates with k
    z = 5.0
    for k in range(4):
        expected = ((-1) ** k) * 0.5 * bessel_j(2 * k + 1, z)
        assert classical_mode_amplitude(k, z / (2 * 1e-9), 1e-9) == pytest.approx(expected)


def test_classical_first_maxima_delayed_with_order():
    zs = np.arange(0.05, 12.0, 0.005)
    positions = []
    for k in range(4):
        vals = [classical_photon_number(k, z / 2, 1.0) for z in zs]
        i = int(np.argmax(np.array(vals[:len(zs) // 1])))
        # first local max, not global: scan until first downturn
        for i in range(1, len(vals) - 1):
            if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]:
                break
        positions.append(zs[i])
    assert all(a < b for a, b in zip(positions, positions[1:]))
    # first maxima appear roughly proportionally to k + 1
    ratios = [p / (positions[0] * (k + 1)) for k, p in enumerate(positions)]
    assert all(0.9 < r < 1.3 for r in ratios)


def test_jacobi_anger_exact_at_zero():
    assert jacobi_anger_residual(0.0, 0.7, 5) == 0.0


@given(st.floats(0.0, 2 * math.pi))
def test_jacobi_anger_converged_tail(phi):
    assert jacobi_anger_residual(5.0, phi, 40) < 1e-10


def test_jacobi_anger_truncation_scale():
    # K = 0 leaves an O(J_3(3)) truncation error
    resid = jacobi_anger_residual(3.0, 0.0, 0)
    assert 0.2 < resid < 0.8


def test_jacobi_anger_validates_K():
    with pytest.raises(ValueError):
        jacobi_anger_residual(1.0, 0.0, -1)


def _brute_force_modes(theta1, theta2, M=32):
    """Unitary two-pulse composition, Fourier analysed over the beat phase."""
    js = np.arange(M)
    amps = np.empty(M, dtype=complex)
    for j in js:
        phi = 2 * np.pi * j / M
        psi = np.array([1, 0], complex)
        for theta, mode in ((theta1, -1), (theta2, +1)):
            axis = np.exp(-1j * mode * phi) * SP + np.exp(1j * mode * phi) * SM
            u = np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * axis
            psi = u @ psi
        amps[j] = psi[0] * np.conj(psi[1])  # rho[0, 1]
    return {m: (amps * np.exp(-1j * m * 2 * np.pi * js / M)).mean()
            for m in range(-7, 9)}, amps


@given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 2 * math.pi))
def test_two_pulse_spectrum_matches_brute_force(theta1, theta2):
    pred = two_pulse_spectrum(theta1, theta2)
    brute, _ = _brute_force_modes(theta1, theta2)
    for mode, amp in zip(pred.modes, pred.amplitudes):
        assert abs(brute[mode] - amp) < 1e-12
    for mode, val in brute.items():
        if mode not in pred.modes:
            assert abs(val) < 1e-12


def test_two_pulse_special_angles():
    lone = two_pulse_spectrum(math.pi / 2, math.pi)
    assert lone.magnitude(3) == pytest.approx(0.5)
    assert lone.magnitude(-1) < 1e-15 and lone.magnitude(1) < 1e-15
    no_first = two_pulse_spectrum(0.0, 1.1)
    assert no_first.magnitude(1) == pytest.approx(0.5 * abs(math.sin(1.1)))
    assert no_first.magnitude(-1) == 0.0 and no_first.magnitude(3) == 0.0
    no_second = two_pulse_spectrum(0.9, 0.0)
    assert no_second.magnitude(-1) == pytest.approx(0.5 * abs(math.sin(0.9)))
    assert no_second.magnitude(1) == 0.0 and no_second.magnitude(3) == 0.0


@given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 2 * math.pi))
def test_two_pulse_parseval(theta1, theta2):
    pred = two_pulse_spectrum(theta1, theta2)
    _, amps = _brute_force_modes(theta1, theta2)
    power_modes = sum(abs(a) ** 2 for a in pred.amplitudes)
    power_phi = float(np.mean(np.abs(amps) ** 2))
    assert abs(power_modes - power_phi) < 1e-12


def test_make_state_coherent():
    vac = make_state("coherent", alpha=0.0, truncation=5)
    assert vac.coefficients[0] == 1.0
    assert all(c == 0 for c in vac.coefficients[1:])
    st8 = make_state("coherent", alpha=1.2, truncation=12)
    # Poisson weights: c_n ratio = alpha / sqrt(n)
    c = st8.coefficients
    assert abs(c[2] / c[1] - 1.2 / math.sqrt(2)) < 1e-12
    with pytest.raises(ValueError):
        make_state("coherent", alpha=3.0, truncation=10)


def test_make_state_zero_one():
    s = make_state("zero_one", theta=math.pi / 2)
    assert abs(s.coefficients[0] - 1 / math.sqrt(2)) < 1e-15
    assert abs(s.coefficients[1] - 1 / math.sqrt(2)) < 1e-15
    # beta = tan(theta/2) = 1 at theta = pi/2
    assert abs(s.coefficients[1] / s.coefficients[0] - 1.0) < 1e-14


def test_make_state_two_photon():
    s = make_state("two_photon", gamma1=1.0, gamma2=1.0)
    assert np.allclose(s.coefficients, np.ones(3) / math.sqrt(3))
    assert s.photon_content == 2


@given(st.floats(-math.pi, math.pi))
def test_zero_one_theta_reflection_swaps_weights(theta):
    # theta -> pi - theta flips the g/e weighting: |c0| and |c1| swap
    a = make_state("zero_one", theta=theta)
    b = make_state("zero_one", theta=math.pi - theta)
    assert abs(abs(a.coefficients[1]) - abs(b.coefficients[0])) < 1e-12
    assert abs(abs(a.coefficients[0]) - abs(b.coefficients[1])) < 1e-12


@given(st.floats(0, 1.8), st.floats(0, 2 * math.pi), st.integers(8, 20))
def test_make_state_unit_norm(mag, phase, trunc):
    alpha = mag * complex(math.cos(phase), math.sin(phase))
    s = make_state("coherent", alpha=alpha, truncation=trunc)
    assert abs(sum(abs(c) ** 2 for c in s.coefficients) - 1.0) < 1e-12


def test_fock_vector_rejects_unnormalized():
    with pytest.raises(ValueError):
        FockVector(1, (1.0, 1.0))


def test_predicted_peak_count():
    assert predicted_peak_count(1) == 3
    assert predicted_peak_count(2) == 5
    assert predicted_peak_count(math.inf) == math.inf
    with pytest.raises(ValueError):
        predicted_peak_count(0)
    with pytest.raises(ValueError):
        make_state("bogus")
