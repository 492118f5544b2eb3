"""Drive-frequency sweeps: peak finding, lineshape oracle, determinism."""

import numpy as np
import pytest

from subphase import (
    BoundaryPeakWarning,
    ConfigurationError,
    Constant,
    DriveSpec,
    DriveTerm,
    EnergySpectrum,
    EnvelopeOverflowError,
    Exponential,
    ScanRequest,
    find_peak,
    resonance_scan,
)


def test_find_peak_exact_on_parabola():
    x = np.linspace(1.0, 3.0, 11)  # vertex 2.25 falls between samples
    y = 3.0 - 2.0 * (x - 2.25) ** 2
    xv, yv = find_peak(x, y)
    assert np.isclose(xv, 2.25, rtol=0, atol=1e-12)
    assert np.isclose(yv, 3.0, rtol=0, atol=1e-12)
    x = np.linspace(1.0, 3.0, 9)  # vertex on a sample
    y = 3.0 - 2.0 * (x - 2.25) ** 2
    xv, yv = find_peak(x, y)
    assert np.isclose(xv, 2.25, rtol=0, atol=1e-12)


def test_find_peak_boundary_and_validation():
    x = np.linspace(0.0, 1.0, 5)
    with pytest.warns(BoundaryPeakWarning):
        xv, yv = find_peak(x, x.copy())
    assert (xv, yv) == (1.0, 1.0)
    with pytest.warns(BoundaryPeakWarning):
        xv, _ = find_peak(x, -x)
    assert xv == 0.0
    with pytest.raises(ConfigurationError):
        find_peak(x[:2], x[:2])
    with pytest.raises(ConfigurationError):
        find_peak(x, x[:3])


def two_state_request(template, **kw):
    args = dict(spectrum=EnergySpectrum((0.0, 1.0)), drive_template=template,
                omega_min=0.7, omega_max=1.3, points=41, horizon=20.0,
                steps=400, initial_index=0, target_index=1)
    args.update(kw)
    return ScanRequest(**args)


def one_sided_template(eps):
    lower = np.array([[0.0, 0.0], [eps, 0.0]], dtype=complex)
    return DriveSpec(terms=(DriveTerm(lower, Constant(), carrier=-1.0),))


def test_request_validation():
    t = one_sided_template(1e-3)
    with pytest.raises(ConfigurationError):
        two_state_request(t, omega_min=1.3)
    with pytest.raises(ConfigurationError):
        two_state_request(t, points=2)
    with pytest.raises(ConfigurationError):
        two_state_request(t, horizon=0.0)
    with pytest.raises(ConfigurationError):
        two_state_request(t, steps=0)
    with pytest.raises(ConfigurationError):
        two_state_request(t, target_index=2)
    with pytest.raises(ConfigurationError):
        two_state_request(DriveSpec(terms=(), dim=3))


def test_lineshape_matches_first_order_theory():
    # one-sided coupling never depletes the source, so
    # P(omega) = eps^2 * 4 sin^2(kappa T/2)/kappa^2, kappa = omega_10 - omega
    eps = 1e-3
    res = resonance_scan(two_state_request(one_sided_template(eps)))
    kappa = 1.0 - res.omegas
    T = 20.0
    with np.errstate(invalid="ignore", divide="ignore"):
        want = eps ** 2 * 4.0 * np.sin(kappa * T / 2) ** 2 / kappa ** 2
    want[kappa == 0.0] = eps ** 2 * T ** 2
    assert np.max(np.abs(res.probabilities - want)) < 1e-13
    assert np.isclose(res.peak_omega, 1.0, rtol=0, atol=1e-6)
    assert np.isclose(res.unshifted_omega, 1.0, rtol=0, atol=0)


def sine_template(amp):
    m = np.array([[0.0, amp], [amp, 0.0]], dtype=complex)
    return DriveSpec(terms=(
        DriveTerm(m, Constant(), carrier=+1.0, delta_phase=-np.pi / 2),
        DriveTerm(m, Constant(), carrier=-1.0, delta_phase=+np.pi / 2),
    ))


def test_hermitian_scan_probabilities_stay_physical():
    req = two_state_request(sine_template(0.02), points=11,
                            horizon=4 * np.pi, steps=300)
    res = resonance_scan(req)
    assert np.all(res.probabilities >= 0.0)
    assert np.all(res.probabilities <= 1.0 + 1e-9)
    assert res.predicted_omega is not None
    # weak drive: prediction lands near the bare spacing
    assert abs(res.predicted_omega - res.unshifted_omega) < 0.01


def test_zero_drive_scan():
    req = two_state_request(DriveSpec(terms=(), dim=2), points=5, steps=50)
    res = resonance_scan(req)
    assert np.array_equal(res.probabilities, np.zeros(5))
    assert res.predicted_omega is None
    assert any("prediction unavailable" in w for w in res.warnings)
    assert any("boundary" in w for w in res.warnings)


def test_scan_error_names_the_offending_frequency():
    m = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    template = DriveSpec(terms=(DriveTerm(m, Exponential(300.0), carrier=-1.0),))
    req = two_state_request(template, points=3, steps=50)
    with pytest.raises(EnvelopeOverflowError, match="scan aborted at omega="):
        resonance_scan(req)


def test_scan_is_deterministic_across_worker_counts(monkeypatch):
    req = two_state_request(one_sided_template(1e-3), points=9, steps=200)
    monkeypatch.setenv("SUBPHASE_THREADS", "1")
    serial = resonance_scan(req)
    monkeypatch.setenv("SUBPHASE_THREADS", "4")
    pooled = resonance_scan(req)
    assert np.array_equal(serial.probabilities, pooled.probabilities)
    assert np.array_equal(serial.omegas, pooled.omegas)
    assert serial.peak_omega == pooled.peak_omega
    assert serial.predicted_omega == pooled.predicted_omega


def test_thread_cap_validation(monkeypatch):
    req = two_state_request(one_sided_template(1e-3), points=3, steps=20)
    monkeypatch.setenv("SUBPHASE_THREADS", "zero")
    with pytest.raises(ConfigurationError, match="SUBPHASE_THREADS"):
        resonance_scan(req)
    monkeypatch.setenv("SUBPHASE_THREADS", "0")
    with pytest.raises(ConfigurationError, match="SUBPHASE_THREADS"):
        resonance_scan(req)
