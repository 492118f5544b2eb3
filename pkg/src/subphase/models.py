"""Worked drive models with closed-form references.

Two families:

* A slow-gauge periodic perturbation H'(t) = U * exp(i*gauge_rate*t) *
  exp(-i*omega*t) acting between two levels, whose first-order coefficient
  has an exact closed form and a Markov-style approximate form.

* A two-level system, H0 = diag(-delta, +delta), driven through the
  off-diagonal by w(t)*exp(-i*omega*t) with w(t) = amplitude * exp(rate*t) *
  exp(i*phase0), switched on from t = -infinity.  Under the Markov
  approximation the initially occupied coefficient is exp(a21 + i*phi21)
  with a21/phi21 given by nested integrals over the drive; for phase0 = 0
  both have closed forms.  The nested integrals are evaluated here by
  composite Simpson quadrature so the closed forms can be checked against an
  independent route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigurationError,
    DriveSpec,
    DriveTerm,
    EnergySpectrum,
    Exponential,
    PoleError,
    SlowGauge,
)

# Truncation rule for the t = -infinity switch-on: the quadrature floor
# t_floor must satisfy exp(rate*t_floor) <= TRUNCATION_RATIO * exp(rate*t).
TRUNCATION_RATIO = 1e-6

# Panel-doubling control for the nested quadrature.  The stop is far below
# the closed-form comparison tolerance (1e-6 relative) so samples near the
# oscillatory zero crossings, where the values are small, remain comparable.
_QUAD_START_PANELS = 512
_QUAD_MAX_PANELS = 1 << 20
_QUAD_ABS_TOL = 1e-12


@dataclass(frozen=True)
class PerturbationScenario:
    """Slow-gauge periodic perturbation between a pair of levels.

    matrix_element: the coupling <n|U|k>; omega: drive carrier frequency;
    omega_nk: level spacing (E_n - E_k)/hbar; gauge_rate: slow phase drift.
    """

    matrix_element: complex
    omega: float
    omega_nk: float
    gauge_rate: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ConfigurationError("hbar must be positive and finite")
        for name in ("omega", "omega_nk", "gauge_rate"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")
        if not np.isfinite(complex(self.matrix_element)):
            raise ConfigurationError("matrix_element must be finite")
        if self.gauge_rate != 0.0 and abs(self.gauge_rate) > 0.1 * abs(self.omega):
            warnings.warn(
                "gauge_rate exceeds a tenth of the carrier omega; the "
                "slow-gauge regime assumption is strained", UserWarning)


def perturbative_c_exact(scenario: PerturbationScenario, t):
    """First-order coefficient of the initially empty level, exact in time.

    c(t) = <n|U|k> * (exp(i*kappa*t) - 1) / (i*hbar * i*kappa) with
    kappa = omega_nk - omega + gauge_rate; the kappa = 0 pole is the
    t-linear limit -i*<n|U|k>*t/hbar.
    """
    t = np.asarray(t, dtype=float)
    kappa = scenario.omega_nk - scenario.omega + scenario.gauge_rate
    matel = complex(scenario.matrix_element)
    if kappa == 0.0:
        value = matel * t / (1j * scenario.hbar)
    else:
        value = matel * (np.exp(1j * kappa * t) - 1.0) / (-(scenario.hbar * kappa))
    return value if value.shape else complex(value)


def perturbative_c_markov(scenario: PerturbationScenario, t):
    """Markov form: <n|U|k>/(hbar*(omega_nk-omega)) * e^{i*gauge_rate*t} * (1 - e^{i*(omega_nk-omega)*t}).

    Identical to the exact form when gauge_rate = 0; diverges (pole) at
    omega = omega_nk.
    """
    t = np.asarray(t, dtype=float)
    kappa0 = scenario.omega_nk - scenario.omega
    if kappa0 == 0.0:
        raise PoleError("Markov form has a pole at omega = omega_nk")
    matel = complex(scenario.matrix_element)
    value = (matel * np.exp(1j * scenario.gauge_rate * t)
             * (1.0 - np.exp(1j * kappa0 * t)) / (scenario.hbar * kappa0))
    return value if value.shape else complex(value)


def perturbation_drive_spec(scenario: PerturbationScenario, hermitian: bool = True) -> DriveSpec:
    """Two-level drive whose propagation realizes the perturbative setup.

    The coupled element is H'_10 = <n|U|k> * e^{i*gauge_rate*t} * e^{-i*omega*t}
    (initial level 0, driven level 1); with hermitian=True the conjugate
    element is included so the propagated diagonal picks up the usual
    second-order back-action.
    """
    matel = complex(scenario.matrix_element)
    lower = np.array([[0.0, 0.0], [matel, 0.0]], dtype=complex)
    terms = [DriveTerm(matrix=lower, envelope=SlowGauge(scenario.gauge_rate),
                       carrier=-scenario.omega)]
    if hermitian:
        upper = np.array([[0.0, np.conj(matel)], [0.0, 0.0]], dtype=complex)
        terms.append(DriveTerm(matrix=upper, envelope=SlowGauge(-scenario.gauge_rate),
                               carrier=scenario.omega))
    return DriveSpec(terms=tuple(terms))


@dataclass(frozen=True)
class TwoLevelScenario:
    """Exponentially switched two-level drive, on from t = -infinity.

    H0 = diag(-delta, +delta); coupling w(t) = amplitude * exp(rate*t) *
    exp(i*phase0) times the carrier exp(-i*omega*t).  omega21 = 2*delta/hbar.
    """

    delta: float
    amplitude: float
    rate: float
    phase0: float = 0.0
    omega: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise ConfigurationError("delta must be positive")
        if not (np.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ConfigurationError("amplitude must be non-negative")
        if not (np.isfinite(self.rate) and self.rate > 0):
            raise ConfigurationError("rate must be positive (switch-on from -infinity)")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ConfigurationError("hbar must be positive and finite")
        if not (np.isfinite(self.phase0) and np.isfinite(self.omega)):
            raise ConfigurationError("phase0 and omega must be finite")

    @property
    def omega21(self) -> float:
        return 2.0 * self.delta / self.hbar

    def spectrum(self) -> EnergySpectrum:
        return EnergySpectrum(energies=(-self.delta, self.delta), hbar=self.hbar)


def two_level_drive_spec(scenario: TwoLevelScenario) -> DriveSpec:
    """DriveSpec for H'(t) = [[0, w(t)], [w*(t), 0]] * exp(-i*omega*t)."""
    if scenario.amplitude == 0.0:
        return DriveSpec(terms=(), dim=2)
    upper = np.array([[0.0, scenario.amplitude], [0.0, 0.0]], dtype=complex)
    lower = np.array([[0.0, 0.0], [scenario.amplitude, 0.0]], dtype=complex)
    env = Exponential(scenario.rate)
    return DriveSpec(terms=(
        DriveTerm(matrix=upper, envelope=env, carrier=-scenario.omega,
                  delta_phase=scenario.phase0),
        DriveTerm(matrix=lower, envelope=env, carrier=-scenario.omega,
                  delta_phase=-scenario.phase0),
    ))


def default_floor(scenario: TwoLevelScenario, t: float) -> float:
    """A truncation floor far past the switch-on rule's minimum depth.

    The envelope ratio exp(rate*(floor - t)) = 1e-12 keeps the truncated
    switch-on tail below the quadrature stop, so values near the integrand's
    zero crossings stay accurate in relative terms.
    """
    return t - math.log(1e12) / scenario.rate


def _check_floor(scenario: TwoLevelScenario, t: float, t_floor: float):
    if not t_floor < t:
        raise ConfigurationError("t_floor must lie below t")
    # exp(rate*t_floor) <= ratio * exp(rate*t), in log form to dodge overflow
    if scenario.rate * (t_floor - t) > math.log(TRUNCATION_RATIO) + 1e-9:
        raise ConfigurationError(
            "t_floor too shallow: exp(rate*t_floor) exceeds "
            f"{TRUNCATION_RATIO:g}*exp(rate*t)")


def _simpson(y: np.ndarray, h: float) -> float:
    """Composite Simpson over an even number of uniform panels."""
    return (h / 3.0) * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-2:2]))


def _cumulative_simpson(y: np.ndarray, h: float) -> np.ndarray:
    """Running integral of uniform samples; Simpson pairs plus half-panel ends.

    out[j] = integral from x_0 to x_j.  Even j uses composite Simpson; odd j
    adds the three-point Newton-Cotes half panel (h/12)*(5*y_{j-1} + 8*y_j -
    y_{j+1}).  Needs an even panel count.
    """
    out = np.empty_like(y, dtype=float)
    pair = (h / 3.0) * (y[:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    even = np.concatenate(([0.0], np.cumsum(pair)))
    out[0::2] = even
    out[1::2] = even[:-1] + (h / 12.0) * (5.0 * y[:-2:2] + 8.0 * y[1::2] - y[2::2])
    return out


def _nested_quadrature(scenario: TwoLevelScenario, t: float, t_floor: float,
                       phase_part: bool) -> float:
    """Panel-doubled nested Simpson for the a21/phi21 double integrals."""
    w21 = scenario.omega21
    cos0 = math.cos(scenario.phase0)
    sin0 = math.sin(scenario.phase0)

    def evaluate(panels: int) -> float:
        ts = np.linspace(t_floor, t, panels + 1)
        h = (t - t_floor) / panels
        absw = scenario.amplitude * np.exp(scenario.rate * ts)
        arg = scenario.phase0 - 2.0 * w21 * ts
        inner_cos = _cumulative_simpson(absw * np.cos(arg), h)
        inner_sin = _cumulative_simpson(absw * np.sin(arg), h)
        if phase_part:
            outer = absw * (cos0 * inner_sin - sin0 * inner_cos)
        else:
            outer = absw * (cos0 * inner_cos + sin0 * inner_sin)
        return -_simpson(outer, h) / scenario.hbar ** 2

    panels = _QUAD_START_PANELS
    value = evaluate(panels)
    while panels < _QUAD_MAX_PANELS:
        panels *= 2
        refined = evaluate(panels)
        if abs(refined - value) < _QUAD_ABS_TOL:
            return refined
        value = refined
    return value


def a21_quadrature(scenario: TwoLevelScenario, t: float, t_floor: float | None = None) -> float:
    """Log-amplitude of the initially occupied coefficient, by nested quadrature."""
    if t_floor is None:
        t_floor = default_floor(scenario, t)
    _check_floor(scenario, t, t_floor)
    if scenario.amplitude == 0.0:
        return 0.0
    return _nested_quadrature(scenario, t, t_floor, phase_part=False)


def phi21_quadrature(scenario: TwoLevelScenario, t: float, t_floor: float | None = None) -> float:
    """Phase of the initially occupied coefficient, by nested quadrature."""
    if t_floor is None:
        t_floor = default_floor(scenario, t)
    _check_floor(scenario, t, t_floor)
    if scenario.amplitude == 0.0:
        return 0.0
    return _nested_quadrature(scenario, t, t_floor, phase_part=True)


def _inner_integrals(scenario: TwoLevelScenario, t):
    """Closed-form switch-on integrals int_-inf^t |w| cos/sin(phase0 - 2*w21*s) ds."""
    lam = scenario.rate
    w21 = scenario.omega21
    theta = scenario.phase0 - 2.0 * w21 * t
    den = lam ** 2 + 4.0 * w21 ** 2
    scale = scenario.amplitude * np.exp(lam * t) / den
    i_cos = scale * (lam * np.cos(theta) - 2.0 * w21 * np.sin(theta))
    i_sin = scale * (lam * np.sin(theta) + 2.0 * w21 * np.cos(theta))
    return i_cos, i_sin


def a21_rate(scenario: TwoLevelScenario, t):
    """d a21/dt: the outer integrand of the nested a21 integral at time t."""
    t = np.asarray(t, dtype=float)
    i_cos, i_sin = _inner_integrals(scenario, t)
    absw = scenario.amplitude * np.exp(scenario.rate * t)
    cos0 = math.cos(scenario.phase0)
    sin0 = math.sin(scenario.phase0)
    value = -absw * (cos0 * i_cos + sin0 * i_sin) / scenario.hbar ** 2
    return value if value.shape else float(value)


def phi21_rate(scenario: TwoLevelScenario, t):
    """d phi21/dt: the outer integrand of the nested phi21 integral at time t."""
    t = np.asarray(t, dtype=float)
    i_cos, i_sin = _inner_integrals(scenario, t)
    absw = scenario.amplitude * np.exp(scenario.rate * t)
    cos0 = math.cos(scenario.phase0)
    sin0 = math.sin(scenario.phase0)
    value = -absw * (cos0 * i_sin - sin0 * i_cos) / scenario.hbar ** 2
    return value if value.shape else float(value)


def _require_zero_phase(scenario: TwoLevelScenario):
    if scenario.phase0 != 0.0:
        raise ConfigurationError(
            "closed forms hold for phase0 = 0 only; use the quadrature")


def a21_closed_form(scenario: TwoLevelScenario, t):
    """Closed-form a21(t) for phase0 = 0."""
    _require_zero_phase(scenario)
    t = np.asarray(t, dtype=float)
    lam = scenario.rate
    w21 = scenario.omega21
    pref = scenario.amplitude ** 2 / (scenario.hbar ** 2 * (lam ** 2 + 4.0 * w21 ** 2))
    den = 4.0 * lam ** 2 + 4.0 * w21 ** 2
    grow = np.exp(2.0 * lam * t) / den
    c2 = np.cos(2.0 * w21 * t)
    s2 = np.sin(2.0 * w21 * t)
    value = -pref * (lam * grow * (2.0 * lam * c2 + 2.0 * w21 * s2)
                     + 2.0 * w21 * grow * (2.0 * lam * s2 - 2.0 * w21 * c2))
    return value if value.shape else float(value)


def phi21_closed_form(scenario: TwoLevelScenario, t):
    """Closed-form phi21(t) for phase0 = 0."""
    _require_zero_phase(scenario)
    t = np.asarray(t, dtype=float)
    lam = scenario.rate
    w21 = scenario.omega21
    pref = scenario.amplitude ** 2 / (scenario.hbar ** 2 * (lam ** 2 + 4.0 * w21 ** 2))
    den = 4.0 * lam ** 2 + 4.0 * w21 ** 2
    grow = np.exp(2.0 * lam * t) / den
    value = pref * ((2.0 * lam ** 2 - 4.0 * w21 ** 2) * grow * np.sin(2.0 * w21 * t)
                    - 6.0 * w21 * lam * grow * np.cos(2.0 * w21 * t))
    return value if value.shape else float(value)


def transition_probability_from_a(a):
    """Survival probability |c|^2 = exp(2a) of the initially occupied level."""
    return np.exp(2.0 * np.asarray(a, dtype=float))


def two_level_markov_c21(scenario: TwoLevelScenario, t: float,
                         t_floor: float | None = None) -> complex:
    """exp(a21 + i*phi21): closed forms when phase0 = 0, else quadrature."""
    if scenario.phase0 == 0.0:
        a = a21_closed_form(scenario, t)
        phi = phi21_closed_form(scenario, t)
    else:
        a = a21_quadrature(scenario, t, t_floor)
        phi = phi21_quadrature(scenario, t, t_floor)
    return complex(np.exp(a + 1j * phi))
