"""Fixed-step RK4 propagation of interaction-picture coefficients.

The coefficient equations are

    i*hbar * dc_m/dt = sum_n exp(i*w_mn*t) * H'_mn(t) * c_n,
    w_mn = (E_m - E_n)/hbar,

integrated with one classical RK4 step per grid interval.  No adaptivity:
the sample grid is the integration grid, so trajectories are reproducible
bit-for-bit and step-halving gives a clean error audit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigurationError,
    CoefficientTrajectory,
    DivergenceError,
    DriveSpec,
    EnergySpectrum,
    TimeGrid,
    drive_stack,
    is_hermitian,
)


@dataclass(frozen=True)
class IntegratorConfig:
    """Numerical guard rails for propagation.

    norm_tolerance: allowed drift of sum_n |c_n|^2 from 1 under a Hermitian
    drive before the trajectory is flagged.  hermiticity_tolerance feeds the
    sampled-grid Hermiticity gate that decides whether the norm check applies.
    """

    norm_tolerance: float = 1e-9
    hermiticity_tolerance: float = 1e-12


# Steps per precomputed RHS block; fixed so the arithmetic (and therefore the
# output bytes) never depends on run conditions.
_BLOCK = 1 << 14


def _rhs_stack(spectrum: EnergySpectrum, drive: DriveSpec, ts: np.ndarray) -> np.ndarray:
    """W(t) = -(i/hbar) * exp(i*w_mn*t) .* H'(t) for each t, shape (len, N, N)."""
    w = drive_stack(drive, ts)
    energies = np.asarray(spectrum.energies)
    delta = (energies[:, None] - energies[None, :]) / spectrum.hbar
    w *= np.exp(1j * np.multiply.outer(np.asarray(ts, dtype=float), delta))
    w *= -1j / spectrum.hbar
    return w


def _propagate(spectrum, drive, grid, initial_vector, initial_index, config):
    if drive.dim != spectrum.dim:
        raise ConfigurationError(
            f"drive dimension {drive.dim} does not match spectrum dimension {spectrum.dim}")
    n_dim = spectrum.dim
    steps = grid.steps
    h = grid.h
    half = 0.5 * h

    values = np.empty((steps + 1, n_dim), dtype=complex)
    c = np.array(initial_vector, dtype=complex)
    values[0] = c

    for block_start in range(0, steps, _BLOCK):
        block_steps = min(_BLOCK, steps - block_start)
        # RK4 needs H' at t_j, t_j + h/2 and t_j + h: half-step resolution.
        k0 = 2 * block_start
        ts = grid.t_start + half * np.arange(k0, k0 + 2 * block_steps + 1)
        rhs = _rhs_stack(spectrum, drive, ts)
        # Overflow inside a step is tolerated arithmetic: the finite check
        # below turns it into a DivergenceError with the first bad time.
        with np.errstate(over="ignore", invalid="ignore"):
            for j in range(block_steps):
                w0 = rhs[2 * j]
                wm = rhs[2 * j + 1]
                w1 = rhs[2 * j + 2]
                k1 = w0 @ c
                k2 = wm @ (c + half * k1)
                k3 = wm @ (c + half * k2)
                k4 = w1 @ (c + h * k3)
                c = c + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
                values[block_start + j + 1] = c
        block = values[block_start + 1:block_start + block_steps + 1]
        finite = np.isfinite(block).all(axis=1)
        if not finite.all():
            bad = block_start + 1 + int(np.argmin(finite))
            raise DivergenceError(
                f"non-finite coefficients at t={grid.samples[bad]}")

    norm_series = np.einsum("jn,jn->j", values, values.conj()).real

    norm_violation = False
    warnings: tuple[str, ...] = ()
    if is_hermitian(drive, grid, config.hermiticity_tolerance):
        drift = float(np.max(np.abs(norm_series - 1.0)))
        if drift > config.norm_tolerance:
            norm_violation = True
            warnings = (f"norm drifted by {drift:.3e} under a Hermitian drive",)

    return CoefficientTrajectory(
        grid=grid,
        values=values,
        norm_series=norm_series,
        initial_index=initial_index,
        norm_violation=norm_violation,
        warnings=warnings,
    )


def propagate(spectrum: EnergySpectrum, drive: DriveSpec, grid: TimeGrid,
              initial_index: int, config: IntegratorConfig | None = None) -> CoefficientTrajectory:
    """Propagate from the basis state `initial_index` over the grid."""
    if not 0 <= initial_index < spectrum.dim:
        raise ConfigurationError(
            f"initial index {initial_index} outside 0..{spectrum.dim - 1}")
    v = np.zeros(spectrum.dim, dtype=complex)
    v[initial_index] = 1.0
    return _propagate(spectrum, drive, grid, v, initial_index,
                      config or IntegratorConfig())


def propagate_with_initial(spectrum: EnergySpectrum, drive: DriveSpec, grid: TimeGrid,
                           initial_vector, config: IntegratorConfig | None = None) -> CoefficientTrajectory:
    """Propagate from an explicit normalized coefficient vector."""
    v = np.asarray(initial_vector, dtype=complex)
    if v.shape != (spectrum.dim,):
        raise ConfigurationError(
            f"initial vector length {v.shape} does not match dimension {spectrum.dim}")
    norm = float(np.sqrt(np.sum(np.abs(v) ** 2)))
    if abs(norm - 1.0) > 1e-12:
        raise ConfigurationError(f"initial vector norm {norm!r} is not 1")
    return _propagate(spectrum, drive, grid, v, None, config or IntegratorConfig())


def convergence_report(spectrum: EnergySpectrum, drive: DriveSpec, grid: TimeGrid,
                       initial_index: int, config: IntegratorConfig | None = None) -> dict:
    """Re-run with doubled steps; report the max |difference| on shared samples.

    For a smooth drive the reported error contracts ~16x per halving of h
    (classical RK4); the ratio between successive reports is the order audit.
    """
    if grid.steps % 2 != 0:
        raise ConfigurationError("convergence_report needs an even step count")
    coarse = propagate(spectrum, drive, grid, initial_index, config)
    fine_grid = TimeGrid(grid.t_start, grid.t_end, 2 * grid.steps)
    fine = propagate(spectrum, drive, fine_grid, initial_index, config)
    diff = np.max(np.abs(coarse.values - fine.values[::2]))
    return {
        "steps": grid.steps,
        "doubled_steps": fine_grid.steps,
        "max_abs_difference": float(diff),
    }
