"""Core types: envelopes, drive evaluation, grids, validation."""

import numpy as np
import pytest

from subphase import (
    ConfigurationError,
    Constant,
    DensityMatrixSnapshot,
    DriveSpec,
    DriveTerm,
    EnergySpectrum,
    EnvelopeOverflowError,
    Exponential,
    SlowGauge,
    TimeGrid,
    drive_stack,
    evaluate_drive,
    is_hermitian,
)


def test_envelope_values():
    assert Constant().value(3.7) == 1.0 + 0.0j
    assert np.isclose(Exponential(0.2).value(5.0), np.exp(1.0))
    g = SlowGauge(0.3).value(2.0)
    assert np.isclose(g, np.exp(0.6j))


def test_slow_gauge_is_pure_phase():
    ts = np.linspace(-40.0, 40.0, 101)
    assert np.allclose(np.abs(SlowGauge(1.7).value(ts)), 1.0, rtol=0, atol=1e-15)


def test_spectrum_validation_and_omega():
    spec = EnergySpectrum((-0.5, 0.5))
    assert spec.dim == 2
    assert spec.omega(1, 0) == 1.0
    with pytest.raises(ConfigurationError):
        EnergySpectrum(())
    with pytest.raises(ConfigurationError):
        EnergySpectrum((0.0, np.inf))
    with pytest.raises(ConfigurationError):
        EnergySpectrum((0.0, 1.0), hbar=0.0)


def test_drive_term_validation():
    with pytest.raises(ConfigurationError):
        DriveTerm(matrix=np.zeros((2, 3)), envelope=Constant())
    with pytest.raises(ConfigurationError):
        DriveTerm(matrix=np.array([[np.nan, 0], [0, 0]]), envelope=Constant())
    with pytest.raises(ConfigurationError):
        DriveTerm(matrix=np.eye(2), envelope=Constant(), carrier=np.inf)
    term = DriveTerm(matrix=np.eye(2), envelope=Constant())
    with pytest.raises(ValueError):
        term.matrix[0, 0] = 5.0  # stored matrix is read-only


def test_drive_spec_dimension_rules():
    m2 = np.eye(2, dtype=complex)
    m3 = np.eye(3, dtype=complex)
    with pytest.raises(ConfigurationError):
        DriveSpec(terms=(DriveTerm(m2, Constant()), DriveTerm(m3, Constant())))
    with pytest.raises(ConfigurationError):
        DriveSpec(terms=())  # empty needs explicit dim
    with pytest.raises(ConfigurationError):
        DriveSpec(terms=(DriveTerm(m2, Constant()),), dim=3)
    assert DriveSpec(terms=(), dim=4).dim == 4
    assert DriveSpec(terms=(DriveTerm(m2, Constant()),)).dim == 2


def test_time_grid():
    grid = TimeGrid(0.0, 1.0, 4)
    assert grid.h == 0.25
    assert grid.samples.size == grid.steps + 1
    assert np.all(np.diff(grid.samples) > 0)
    assert np.allclose(grid.samples, [0.0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ConfigurationError):
        TimeGrid(1.0, 1.0, 5)
    with pytest.raises(ConfigurationError):
        TimeGrid(0.0, 1.0, 0)


def test_evaluate_drive_empty_is_zero():
    spec = DriveSpec(terms=(), dim=3)
    assert np.array_equal(evaluate_drive(spec, 12.3), np.zeros((3, 3)))


def test_evaluate_drive_constant_term_identity():
    m = np.array([[0.0, 1.0 + 2.0j], [1.0 - 2.0j, 0.5]])
    spec = DriveSpec(terms=(DriveTerm(m, Constant()),))
    assert np.array_equal(evaluate_drive(spec, 3.7), m)


def test_evaluate_drive_exponential():
    m = np.array([[0.0, 1.0], [1.0, 0.0]])
    spec = DriveSpec(terms=(DriveTerm(m, Exponential(0.2)),))
    out = evaluate_drive(spec, 5.0)
    assert np.allclose(out, m * np.exp(1.0), rtol=1e-15)


def test_evaluate_drive_linear_in_terms():
    rng = np.random.default_rng(7)
    m1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    m2 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    t1 = DriveTerm(m1, Exponential(0.1), carrier=0.4, delta_phase=0.2)
    t2 = DriveTerm(m2, SlowGauge(0.3), carrier=-1.1)
    both = evaluate_drive(DriveSpec(terms=(t1, t2)), 2.5)
    single = (evaluate_drive(DriveSpec(terms=(t1,)), 2.5)
              + evaluate_drive(DriveSpec(terms=(t2,)), 2.5))
    assert np.array_equal(both, single)


def test_drive_stack_matches_pointwise_evaluation():
    m = np.array([[0.0, 0.3], [0.3, 0.0]])
    spec = DriveSpec(terms=(DriveTerm(m, Exponential(0.15), carrier=0.9,
                                      delta_phase=0.3),))
    ts = np.linspace(-2.0, 4.0, 17)
    stack = drive_stack(spec, ts)
    for j, t in enumerate(ts):
        assert np.array_equal(stack[j], evaluate_drive(spec, float(t)))


def test_envelope_overflow_names_time():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    spec = DriveSpec(terms=(DriveTerm(m, Exponential(10.0)),))
    with pytest.raises(EnvelopeOverflowError):
        evaluate_drive(spec, 100.0)
    with pytest.raises(EnvelopeOverflowError, match="term 0"):
        drive_stack(spec, np.array([0.0, 100.0]))


def test_is_hermitian():
    grid = TimeGrid(0.0, 10.0, 50)
    sym = np.array([[0.0, 0.7], [0.7, 0.0]])
    assert is_hermitian(DriveSpec(terms=(DriveTerm(sym, Constant()),)), grid)
    assert is_hermitian(DriveSpec(terms=(), dim=2), grid)
    # off-diagonal drive under a common carrier: Hermitian only without carrier
    up = DriveTerm(np.array([[0.0, 0.7], [0.0, 0.0]]), Exponential(0.1), carrier=-1.0)
    dn = DriveTerm(np.array([[0.0, 0.0], [0.7, 0.0]]), Exponential(0.1), carrier=-1.0)
    assert not is_hermitian(DriveSpec(terms=(up, dn)), grid)
    up0 = DriveTerm(np.array([[0.0, 0.7], [0.0, 0.0]]), Exponential(0.1))
    dn0 = DriveTerm(np.array([[0.0, 0.0], [0.7, 0.0]]), Exponential(0.1))
    assert is_hermitian(DriveSpec(terms=(up0, dn0)), grid)


def test_density_snapshot_validation():
    with pytest.raises(ConfigurationError):
        DensityMatrixSnapshot(np.array([[0.5, 0.5], [0.4, 0.5]]))  # not Hermitian
    with pytest.raises(ConfigurationError):
        DensityMatrixSnapshot(np.array([[1.0, 2.0], [2.0, 1.0]]))  # negative eigenvalue
    snap = DensityMatrixSnapshot(np.array([[0.5, 0.5], [0.5, 0.5]]))
    assert snap.dim == 2
