"""Sub-phase extraction and derived quantities.

Writing each coefficient as c_n(t) = exp(a_n(t) + i*phi_n(t)) splits it into
a log-amplitude a_n = ln|c_n| and a phase phi_n continued through time by
nearest-branch unwrapping.  Samples where |c_n| falls below the amplitude
floor are masked: the phase genuinely does not exist there, so nothing is
clamped or interpolated.  The phase series feeds the effective level shift
E_n - hbar*phi_n(t)/t and the shifted-resonance prediction; the log-amplitude
series feeds the trailing-window stability classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CRITICAL,
    STABLE,
    UNDETERMINED,
    UNSTABLE,
    CoefficientTrajectory,
    ConfigurationError,
    DensityMatrixSnapshot,
    StabilityVerdict,
    SubPhaseTrajectory,
    UndefinedPhaseError,
)


@dataclass(frozen=True)
class ExtractionConfig:
    """Floors and thresholds for extraction and classification.

    amplitude_floor: |c| below this is treated as a vanished coefficient.
    slope_tolerance: |slope| at or below this classifies as Critical.
    window_fraction: trailing fraction of defined samples used for the fit.
    """

    amplitude_floor: float = 1e-12
    slope_tolerance: float = 1e-3
    window_fraction: float = 0.5

    def __post_init__(self):
        if not 0 < self.amplitude_floor:
            raise ConfigurationError("amplitude_floor must be positive")
        if not 0 <= self.slope_tolerance:
            raise ConfigurationError("slope_tolerance must be non-negative")
        if not 0 < self.window_fraction <= 1:
            raise ConfigurationError("window_fraction must be in (0, 1]")


def extract(trajectory: CoefficientTrajectory,
            config: ExtractionConfig | None = None) -> SubPhaseTrajectory:
    """Split a coefficient trajectory into (a, phi) series with a defined-mask.

    phi is anchored at the first defined sample's principal value in
    (-pi, pi] and continued by adding the 2*pi multiple that minimizes each
    consecutive jump.  An eigenstate with fewer than two defined samples is
    fully masked and flagged.
    """
    config = config or ExtractionConfig()
    values = trajectory.values
    amps = np.abs(values)
    defined = amps >= config.amplitude_floor

    a = np.full(values.shape, np.nan)
    phi = np.full(values.shape, np.nan)
    warnings: list[str] = []

    for n in range(values.shape[1]):
        idx = np.flatnonzero(defined[:, n])
        if idx.size < 2:
            if idx.size:
                defined[idx, n] = False
            warnings.append(
                f"eigenstate {n}: fewer than 2 samples above the amplitude floor; masked")
            continue
        a[idx, n] = np.log(amps[idx, n])
        phi[idx, n] = np.unwrap(np.angle(values[idx, n]))

    return SubPhaseTrajectory(grid=trajectory.grid, a=a, phi=phi,
                              defined=defined, warnings=tuple(warnings))


def density_matrix(coefficients) -> DensityMatrixSnapshot:
    """rho = c c^dagger for one instant's coefficient vector.

    Assembled from separately rounded real products rather than complex
    multiplies: compilers may contract the latter with FMA, which would make
    the result depend on the global phase at the last bit.  This form is
    exactly Hermitian and bit-invariant under quarter-turn phase rotations.
    """
    v = np.asarray(coefficients, dtype=complex)
    if v.ndim != 1:
        raise ConfigurationError("coefficients must be a 1-D vector")
    x, y = v.real, v.imag
    re = np.outer(x, x) + np.outer(y, y)
    im = np.outer(y, x) - np.outer(x, y)
    return DensityMatrixSnapshot(re + 1j * im)


def dephase(snapshot: DensityMatrixSnapshot) -> DensityMatrixSnapshot:
    """Zero the off-diagonal coherences, keeping the populations."""
    return DensityMatrixSnapshot(np.diag(np.diag(snapshot.matrix)))


def von_neumann_entropy(snapshot: DensityMatrixSnapshot) -> float:
    """S = -sum p ln p over the eigenvalues, in nats (0*ln 0 = 0)."""
    p = np.linalg.eigvalsh(snapshot.matrix)
    if p.min() < -1e-8:
        raise ConfigurationError(
            f"density matrix eigenvalue {p.min():.3e} below -1e-8")
    p = np.clip(p, 0.0, 1.0)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def expectation(snapshot: DensityMatrixSnapshot, observable) -> float:
    """Tr(rho A) for a Hermitian observable A."""
    a = np.asarray(observable, dtype=complex)
    if a.shape != snapshot.matrix.shape:
        raise ConfigurationError("observable shape does not match the density matrix")
    if np.max(np.abs(a - a.conj().T)) > 1e-12:
        raise ConfigurationError("observable is not Hermitian")
    value = complex(np.trace(snapshot.matrix @ a))
    if abs(value.imag) > 1e-10:
        raise ArithmeticError(
            f"expectation imaginary residue {value.imag:.3e} exceeds 1e-10")
    return value.real


def samuel_bhandari_phase(phi_value: float, energy: float, t: float,
                          hbar: float = 1.0) -> tuple[float, float]:
    """(full phase with the dynamical part restored, generalized part).

    The interaction-picture phase phi is the generalized (sub-geometric)
    part; subtracting the dynamical phase E*t/hbar gives the total.
    """
    return (phi_value - energy * t / hbar, phi_value)


def _last_defined_at_or_before(subphase: SubPhaseTrajectory, n: int, t: float):
    times = subphase.grid.samples
    cut = t + 1e-12 * (1.0 + abs(t))
    ok = subphase.defined[:, n] & (times <= cut) & (times > 0.0)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return None
    j = int(idx[-1])
    return float(times[j]), float(subphase.phi[j, n])


def effective_shift(subphase: SubPhaseTrajectory, n: int, energy: float,
                    t: float, hbar: float = 1.0) -> float:
    """E_n - hbar*phi_n(t*)/t* at the final defined sample t* <= t (t* > 0)."""
    if t <= 0:
        raise ConfigurationError("effective shift needs t > 0")
    if not 0 <= n < subphase.dim:
        raise ConfigurationError(f"eigenstate index {n} out of range")
    found = _last_defined_at_or_before(subphase, n, t)
    if found is None:
        raise UndefinedPhaseError(
            f"eigenstate {n} has no defined phase sample in (0, {t}]")
    t_sel, phi_sel = found
    return energy - hbar * phi_sel / t_sel


def predicted_resonance(energy_n: float, energy_kprime: float,
                        phi_nk: float, phi_kprimek: float,
                        t: float, hbar: float = 1.0) -> float:
    """Shifted resonance (E_n - E_k' - hbar*phi_nk/t + hbar*phi_k'k/t)/hbar."""
    if t <= 0:
        raise ConfigurationError("resonance prediction needs t > 0")
    return (energy_n - energy_kprime - hbar * phi_nk / t + hbar * phi_kprimek / t) / hbar


def classify_stability(subphase: SubPhaseTrajectory, n: int,
                       config: ExtractionConfig | None = None) -> StabilityVerdict:
    """Least-squares slope of a_n over the trailing window of defined samples.

    slope > tol -> Unstable, slope < -tol -> Stable, |slope| <= tol ->
    Critical; fewer than two usable samples -> Undetermined.
    """
    config = config or ExtractionConfig()
    if not 0 <= n < subphase.dim:
        raise ConfigurationError(f"eigenstate index {n} out of range")
    idx = np.flatnonzero(subphase.defined[:, n])
    count = math.ceil(config.window_fraction * idx.size)
    if count < 2:
        return StabilityVerdict(UNDETERMINED, None, None, int(idx.size))
    win = idx[-count:]
    times = subphase.grid.samples[win]
    slope = float(np.polyfit(times, subphase.a[win, n], 1)[0])
    tol = config.slope_tolerance
    if slope > tol:
        label = UNSTABLE
    elif slope < -tol:
        label = STABLE
    else:
        label = CRITICAL
    return StabilityVerdict(label, slope, (float(times[0]), float(times[-1])), count)
