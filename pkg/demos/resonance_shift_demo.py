"""Resonance-peak shift under a linear sine drive, across an amplitude ladder.

The scan sweeps the drive frequency through the transition, locates the
interpolated peak of the final transition probability, and compares two
frequencies: the bare transition (unshifted) and the prediction built from
the phase trajectories of the peak run.  The gap between them is a
second-order effect of the drive, so one amplitude decade shrinks it about
a hundredfold.
"""

import os
import time

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from subphase import (
    Constant,
    DriveSpec,
    DriveTerm,
    EnergySpectrum,
    ScanRequest,
    resonance_scan,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)


def sine_template(amp):
    # 2*amp*sin(omega*t) on the off-diagonal; template carriers are
    # multipliers of the swept frequency
    m = np.array([[0.0, amp], [amp, 0.0]], dtype=complex)
    return DriveSpec(terms=(
        DriveTerm(m, Constant(), carrier=+1.0, delta_phase=-np.pi / 2),
        DriveTerm(m, Constant(), carrier=-1.0, delta_phase=+np.pi / 2)))


spec = EnergySpectrum((0.0, 1.0))
amps = (0.03, 0.003, 0.0003)
results = {}
start = time.perf_counter()
for amp in amps:
    req = ScanRequest(spectrum=spec, drive_template=sine_template(amp),
                      omega_min=0.0, omega_max=2.0, points=101,
                      horizon=8.0 * np.pi, steps=2500,
                      initial_index=0, target_index=1)
    results[amp] = resonance_scan(req)
elapsed = time.perf_counter() - start

print(f"{'amplitude':>10} {'peak':>10} {'predicted':>12} {'gap':>12}")
gaps = []
for amp in amps:
    r = results[amp]
    gap = abs(r.predicted_omega - r.unshifted_omega)
    gaps.append(gap)
    print(f"{amp:>10} {r.peak_omega:>10.6f} {r.predicted_omega:>12.8f} {gap:>12.3e}")
print(f"gap ratios per decade: {gaps[0] / gaps[1]:.1f}, {gaps[1] / gaps[2]:.1f}"
      f"  (quadratic in amplitude -> ~100)")
print(f"three 101-point scans in {elapsed:.1f} s")

fig, ax = plt.subplots(figsize=(8, 5))
for amp in amps:
    r = results[amp]
    ax.plot(r.omegas, r.probabilities / r.peak_probability,
            label=f"A = {amp}")
ax.axvline(1.0, color="k", lw=0.5)
ax.set_xlabel(r"drive frequency $\omega$")
ax.set_ylabel("P / P_peak")
ax.set_xlim(0.6, 1.4)
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "resonance_shift.png"), dpi=120)
print(f"wrote {os.path.join(OUT, 'resonance_shift.png')}")
