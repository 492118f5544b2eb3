"""Core types for driven finite-level systems.

Energies and drive matrices are plain numbers/arrays in consistent units
(hbar configurable, default 1).  A drive is a sum of parametric terms

    H'(t) = sum_i  M_i * env_i(t) * exp(i*(nu_i*t + delta_i))

with envelope env one of Constant, Exponential (exp(rate*t)) or SlowGauge
(exp(i*rate*t)).  This closed family keeps every trajectory reproducible
from a scenario file alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np


class ConfigurationError(ValueError):
    """Invalid scenario/parameter input."""


class EnvelopeOverflowError(ArithmeticError):
    """A drive envelope left the floating-point range."""


class DivergenceError(ArithmeticError):
    """Propagation produced non-finite coefficients."""


class UndefinedPhaseError(ValueError):
    """A phase value was requested where the amplitude is below the floor."""


class PoleError(ValueError):
    """Closed-form expression evaluated at its pole."""


# --- envelopes ---------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    """env(t) = 1."""

    def value(self, t):
        return np.ones_like(np.asarray(t, dtype=float), dtype=complex)


@dataclass(frozen=True)
class Exponential:
    """env(t) = exp(rate * t), rate real."""

    rate: float

    def value(self, t):
        return np.exp(self.rate * np.asarray(t, dtype=float)).astype(complex)


@dataclass(frozen=True)
class SlowGauge:
    """env(t) = exp(i * rate * t): a pure phase drifting at `rate`."""

    rate: float

    def value(self, t):
        return np.exp(1j * self.rate * np.asarray(t, dtype=float))


Envelope = Union[Constant, Exponential, SlowGauge]


# --- static structure ---------------------------------------------------------

@dataclass(frozen=True)
class EnergySpectrum:
    """Unperturbed eigenenergies E_0..E_{N-1} and the hbar convention."""

    energies: tuple[float, ...]
    hbar: float = 1.0

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        object.__setattr__(self, "energies", energies)
        if len(energies) < 1:
            raise ConfigurationError("spectrum needs at least one level")
        if not all(np.isfinite(energies)):
            raise ConfigurationError("spectrum energies must be finite")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ConfigurationError("hbar must be positive and finite")

    @property
    def dim(self) -> int:
        return len(self.energies)

    def omega(self, m: int, n: int) -> float:
        """Transition frequency (E_m - E_n) / hbar."""
        return (self.energies[m] - self.energies[n]) / self.hbar


@dataclass(frozen=True, eq=False)
class DriveTerm:
    """One parametric term M * env(t) * exp(i*(carrier*t + delta_phase))."""

    matrix: np.ndarray
    envelope: Envelope
    carrier: float = 0.0
    delta_phase: float = 0.0

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigurationError("drive term matrix must be square")
        if not np.isfinite(m).all():
            raise ConfigurationError("drive term matrix must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if not np.isfinite(self.carrier) or not np.isfinite(self.delta_phase):
            raise ConfigurationError("carrier and delta_phase must be finite")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def scalar(self, t):
        """env(t) * exp(i*(carrier*t + delta_phase)) for scalar or array t.

        Overflow is allowed to produce inf/nan here; callers check and raise
        EnvelopeOverflowError with the offending time.
        """
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            return self.envelope.value(t) * np.exp(1j * (self.carrier * t + self.delta_phase))


@dataclass(frozen=True)
class DriveSpec:
    """A drive as a tuple of terms; `dim` pins N for the empty (zero) drive."""

    terms: tuple[DriveTerm, ...] = ()
    dim: int | None = None

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        dims = {t.dim for t in terms}
        if len(dims) > 1:
            raise ConfigurationError("drive terms have mismatched dimensions")
        if self.dim is None:
            if not terms:
                raise ConfigurationError("empty drive needs an explicit dim")
            object.__setattr__(self, "dim", terms[0].dim)
        elif terms and terms[0].dim != self.dim:
            raise ConfigurationError(
                f"drive dim {self.dim} does not match term matrices ({terms[0].dim})")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_j = t_start + j*h, j = 0..steps, h = (t_end-t_start)/steps."""

    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if not (np.isfinite(self.t_start) and np.isfinite(self.t_end)):
            raise ConfigurationError("grid endpoints must be finite")
        if self.t_end <= self.t_start:
            raise ConfigurationError("grid needs t_end > t_start")
        if self.steps < 1:
            raise ConfigurationError("grid needs at least one step")

    @property
    def h(self) -> float:
        return (self.t_end - self.t_start) / self.steps

    @property
    def samples(self) -> np.ndarray:
        return self.t_start + np.arange(self.steps + 1) * self.h


# --- trajectories and derived snapshots ---------------------------------------

@dataclass(frozen=True, eq=False)
class CoefficientTrajectory:
    """Propagated coefficients c_n(t_j): values[j, n], plus the norm series."""

    grid: TimeGrid
    values: np.ndarray
    norm_series: np.ndarray
    initial_index: int | None = None
    norm_violation: bool = False
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("values", "norm_series"):
            arr = getattr(self, name)
            arr = np.asarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class SubPhaseTrajectory:
    """Extracted log-amplitude a_n(t_j) and unwrapped phase phi_n(t_j).

    Entries with defined[j, n] == False are masked (NaN in a and phi): the
    amplitude fell below the extraction floor, so the phase has no value
    there.  Masking is a true singularity, never a clamp.
    """

    grid: TimeGrid
    a: np.ndarray
    phi: np.ndarray
    defined: np.ndarray
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("a", "phi", "defined"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.a.shape[1]


@dataclass(frozen=True, eq=False)
class DensityMatrixSnapshot:
    """A density matrix at one instant; validated Hermitian and PSD.

    Trace equals the squared norm of the source state (1 for a normalized
    state; drives that are not Hermitian legitimately move it off 1).
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigurationError("density matrix must be square")
        if not np.isfinite(m).all():
            raise ConfigurationError("density matrix must be finite")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ConfigurationError("density matrix is not Hermitian")
        if np.min(np.linalg.eigvalsh(m)) < -1e-8:
            raise ConfigurationError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


STABLE = "Stable"
UNSTABLE = "Unstable"
CRITICAL = "Critical"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class StabilityVerdict:
    """Trailing-window slope classification of a log-amplitude series."""

    label: str
    slope: float | None
    window: tuple[float, float] | None
    n_samples: int


# --- drive evaluation ----------------------------------------------------------

def _term_scalars(term: DriveTerm, ts: np.ndarray) -> np.ndarray:
    s = term.scalar(ts)
    finite = np.isfinite(s)
    if not finite.all():
        t_bad = np.asarray(ts, dtype=float).reshape(-1)[int(np.argmin(finite))]
        raise EnvelopeOverflowError(f"drive term envelope overflowed at t={t_bad}")
    return s


def evaluate_drive(spec: DriveSpec, t: float) -> np.ndarray:
    """Sum the drive terms at time t into an N x N complex matrix."""
    out = np.zeros((spec.dim, spec.dim), dtype=complex)
    for i, term in enumerate(spec.terms):
        s = term.scalar(float(t))
        if not (np.isfinite(s.real) and np.isfinite(s.imag)):
            raise EnvelopeOverflowError(f"drive term {i} overflowed at t={t}")
        out += term.matrix * complex(s)
    return out


def drive_stack(spec: DriveSpec, ts: np.ndarray) -> np.ndarray:
    """Vectorized evaluate_drive over a 1-D time array: shape (len(ts), N, N)."""
    ts = np.asarray(ts, dtype=float)
    out = np.zeros((ts.size, spec.dim, spec.dim), dtype=complex)
    for i, term in enumerate(spec.terms):
        try:
            s = _term_scalars(term, ts)
        except EnvelopeOverflowError as exc:
            raise EnvelopeOverflowError(f"drive term {i}: {exc}") from None
        out += s[:, None, None] * term.matrix
    return out


_HERMITIAN_CHUNK = 1 << 15


def is_hermitian(spec: DriveSpec, grid: TimeGrid, tol: float = 1e-12) -> bool:
    """True iff max_j ||H'(t_j) - H'(t_j)^dagger||_max <= tol on the grid."""
    ts = grid.samples
    for lo in range(0, ts.size, _HERMITIAN_CHUNK):
        h = drive_stack(spec, ts[lo:lo + _HERMITIAN_CHUNK])
        dev = np.max(np.abs(h - np.conj(np.swapaxes(h, 1, 2))))
        if dev > tol:
            return False
    return True
