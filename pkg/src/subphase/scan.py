"""Resonance scans: drive-frequency sweeps of the transition probability.

Each swept frequency omega propagates the same scenario with every drive
term's carrier set to multiplier*omega (the template term's `carrier` field
holds the dimensionless multiplier, so e.g. a linear sine drive uses two
terms with multipliers +1 and -1).  The peak of P(omega) is refined with a
three-point parabola, and the sub-phases of the peak run feed the
shifted-resonance prediction, reported next to the unshifted (E_n - E_k)/hbar
so the comparison stays transparent.

Runs are independent and executed concurrently; the SUBPHASE_THREADS
environment variable caps the worker count.  Results are assembled by sweep
index, so the output is identical for any worker count.
"""

from __future__ import annotations

import os
import warnings as _warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import ExtractionConfig, extract, predicted_resonance
from .core import ConfigurationError, DriveSpec, DriveTerm, EnergySpectrum, TimeGrid
from .propagator import IntegratorConfig, propagate


class BoundaryPeakWarning(UserWarning):
    """The sampled maximum sat on the sweep boundary; interpolation skipped."""


class FlatPeakWarning(UserWarning):
    """The three points around the maximum are collinear; interpolation skipped."""


@dataclass(frozen=True)
class ScanRequest:
    """A sweep specification.

    drive_template holds terms whose `carrier` is a multiplier on the swept
    omega; horizon/steps define the per-run grid [0, horizon].
    """

    spectrum: EnergySpectrum
    drive_template: DriveSpec
    omega_min: float
    omega_max: float
    points: int
    horizon: float
    steps: int
    initial_index: int
    target_index: int

    def __post_init__(self):
        if not self.omega_min < self.omega_max:
            raise ConfigurationError("scan needs omega_min < omega_max")
        if self.points < 3:
            raise ConfigurationError("scan needs at least 3 points")
        if self.horizon <= 0:
            raise ConfigurationError("scan horizon must be positive")
        if self.steps < 1:
            raise ConfigurationError("scan needs at least one integrator step")
        for name in ("initial_index", "target_index"):
            idx = getattr(self, name)
            if not 0 <= idx < self.spectrum.dim:
                raise ConfigurationError(f"{name} {idx} outside 0..{self.spectrum.dim - 1}")
        if self.drive_template.dim != self.spectrum.dim:
            raise ConfigurationError("drive template dimension does not match spectrum")


@dataclass(frozen=True, eq=False)
class ScanResult:
    omegas: np.ndarray
    probabilities: np.ndarray
    peak_omega: float
    peak_probability: float
    predicted_omega: float | None
    unshifted_omega: float
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("omegas", "probabilities"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def find_peak(x, y) -> tuple[float, float]:
    """Location and height of the maximum of y(x), parabola-refined.

    Fits the quadratic through the sampled maximum and its neighbours
    (exact for a parabola).  A boundary or collinear maximum falls back to
    the raw sample with a warning.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 3:
        raise ConfigurationError("find_peak needs matching 1-D arrays of length >= 3")
    i = int(np.argmax(y))
    if i == 0 or i == x.size - 1:
        _warnings.warn("maximum on the sweep boundary; returning the raw sample",
                       BoundaryPeakWarning)
        return float(x[i]), float(y[i])
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    d1 = (y1 - y0) / (x1 - x0)
    d2 = (y2 - y1) / (x2 - x1)
    curv = (d2 - d1) / (x2 - x0)
    if curv >= 0.0:
        _warnings.warn("flat or non-concave maximum; returning the raw sample",
                       FlatPeakWarning)
        return float(x1), float(y1)
    xv = 0.5 * (x0 + x1) - d1 / (2.0 * curv)
    yv = y0 + d1 * (xv - x0) + curv * (xv - x0) * (xv - x1)
    return float(xv), float(yv)


def _worker_count(points: int) -> int:
    raw = os.environ.get("SUBPHASE_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise ConfigurationError(f"SUBPHASE_THREADS={raw!r} is not an integer") from None
        if cap < 1:
            raise ConfigurationError("SUBPHASE_THREADS must be >= 1")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, points))


def resonance_scan(request: ScanRequest,
                   integrator_config: IntegratorConfig | None = None,
                   extraction_config: ExtractionConfig | None = None) -> ScanResult:
    """Sweep the drive frequency and locate/predict the resonance peak."""
    omegas = np.linspace(request.omega_min, request.omega_max, request.points)
    grid = TimeGrid(0.0, request.horizon, request.steps)
    integrator_config = integrator_config or IntegratorConfig()

    def run(omega: float):
        terms = tuple(
            DriveTerm(matrix=term.matrix, envelope=term.envelope,
                      carrier=term.carrier * omega, delta_phase=term.delta_phase)
            for term in request.drive_template.terms)
        drive = DriveSpec(terms=terms, dim=request.drive_template.dim)
        try:
            return propagate(request.spectrum, drive, grid,
                             request.initial_index, integrator_config)
        except ArithmeticError as exc:
            raise type(exc)(f"scan aborted at omega={omega}: {exc}") from None

    with ThreadPoolExecutor(max_workers=_worker_count(request.points)) as pool:
        trajectories = list(pool.map(run, omegas))

    probabilities = np.array(
        [float(np.abs(t.values[-1, request.target_index]) ** 2) for t in trajectories])

    notes: list[str] = []
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        peak_omega, peak_probability = find_peak(omegas, probabilities)
    notes.extend(str(w.message) for w in caught)

    # Shift prediction from the sampled peak run's extracted phases, both
    # taken at the last sample where both eigenstates are defined.
    peak_index = int(np.argmax(probabilities))
    sub = extract(trajectories[peak_index], extraction_config)
    energies = request.spectrum.energies
    hbar = request.spectrum.hbar
    unshifted = (energies[request.target_index] - energies[request.initial_index]) / hbar

    both = (sub.defined[:, request.target_index]
            & sub.defined[:, request.initial_index]
            & (sub.grid.samples > 0.0))
    shared = np.flatnonzero(both)
    if shared.size == 0:
        predicted = None
        notes.append("no sample with both phases defined; prediction unavailable")
    else:
        j = int(shared[-1])
        t_eval = float(sub.grid.samples[j])
        predicted = predicted_resonance(
            energies[request.target_index], energies[request.initial_index],
            float(sub.phi[j, request.target_index]),
            float(sub.phi[j, request.initial_index]),
            t_eval, hbar)

    return ScanResult(
        omegas=omegas,
        probabilities=probabilities,
        peak_omega=peak_omega,
        peak_probability=peak_probability,
        predicted_omega=predicted,
        unshifted_omega=unshifted,
        warnings=tuple(notes),
    )
