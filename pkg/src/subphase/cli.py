"""Command-line front end.

Five subcommands (propagate, twolevel, perturb, scan, validate), each driven
by a JSON scenario file.  Series go to CSV (--out), scalar reports to JSON;
stdout carries exactly one machine-readable status line; human warnings go
to stderr.  Exit codes: 0 success, 1 invalid input, 2 numerical failure.

All numbers are written with full round-trip precision and masked values as
the token NA, so outputs are byte-stable across runs and thread counts.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .analysis import extract
from .core import (
    ConfigurationError,
    DivergenceError,
    EnvelopeOverflowError,
    Exponential,
    PoleError,
    SlowGauge,
    TimeGrid,
    UndefinedPhaseError,
    is_hermitian,
)
from .models import (
    PerturbationScenario,
    TwoLevelScenario,
    a21_closed_form,
    a21_quadrature,
    perturbative_c_exact,
    perturbative_c_markov,
    phi21_closed_form,
    phi21_quadrature,
    transition_probability_from_a,
)
from .propagator import propagate, propagate_with_initial
from .scan import resonance_scan
from .scenario import Scenario, load_scenario

# Disagreement (radians) between an extraction and its double-resolution
# re-run beyond which the grid is reported as too coarse for unwrapping.
_UNWRAP_AUDIT_TOL = 1.0


def _fmt(x) -> str:
    if x is None:
        return "NA"
    x = float(x)
    if math.isnan(x):
        return "NA"
    if x == 0.0:
        x = 0.0  # drop the sign of zero: a byte-level artifact, not a value
    return format(x, ".17e")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _emit_warnings(notes) -> list[str]:
    notes = list(notes)
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    return notes


# --- subcommands ---------------------------------------------------------------

def cmd_propagate(scenario: Scenario, out: str):
    grid = scenario.grid
    traj = _run_propagation(scenario, grid)
    sub = extract(traj, scenario.extraction)
    notes = list(traj.warnings) + list(sub.warnings)

    # Unwrap audit: re-run at double resolution; a branch disagreement on the
    # shared samples means the grid undersamples the phase winding.
    fine_grid = TimeGrid(grid.t_start, grid.t_end, 2 * grid.steps)
    fine_sub = extract(_run_propagation(scenario, fine_grid), scenario.extraction)
    shared = sub.defined & fine_sub.defined[::2]
    if shared.any():
        gap = np.max(np.abs(sub.phi[shared] - fine_sub.phi[::2][shared]))
        if gap > _UNWRAP_AUDIT_TOL:
            notes.append(
                f"phase unwrapping shifts by {gap:.3e} rad at doubled resolution; "
                "grid is too coarse")

    header = ["t"]
    for n in range(traj.dim):
        header += [f"re_c_{n}", f"im_c_{n}", f"a_{n}", f"phi_{n}", f"P_{n}"]
    header.append("norm")

    def rows():
        times = grid.samples
        for j in range(times.size):
            row = [times[j]]
            for n in range(traj.dim):
                c = traj.values[j, n]
                ok = sub.defined[j, n]
                row += [c.real, c.imag,
                        sub.a[j, n] if ok else None,
                        sub.phi[j, n] if ok else None,
                        abs(c) ** 2]
            row.append(traj.norm_series[j])
            yield row

    _write_csv(out, header, rows())
    notes = _emit_warnings(notes)
    status = {"command": "propagate", "status": "ok", "out": out, "warnings": notes}
    if traj.norm_violation:
        status["status"] = "error"
        status["message"] = "norm violation under a Hermitian drive"
        return 2, status
    return 0, status


def _run_propagation(scenario: Scenario, grid: TimeGrid):
    if scenario.initial_index is not None:
        return propagate(scenario.spectrum, scenario.drive, grid,
                         scenario.initial_index, scenario.integrator)
    return propagate_with_initial(scenario.spectrum, scenario.drive, grid,
                                  scenario.initial_vector, scenario.integrator)


def cmd_twolevel(scenario: Scenario, out: str):
    model = scenario.model
    if not isinstance(model, TwoLevelScenario):
        raise ConfigurationError("scenario.model.type: twolevel needs a two_level model")
    times = scenario.grid.samples
    closed_ok = model.phase0 == 0.0

    def rows():
        for t in times:
            t = float(t)
            a_quad = a21_quadrature(model, t)
            phi_quad = phi21_quadrature(model, t)
            a_closed = a21_closed_form(model, t) if closed_ok else None
            phi_closed = phi21_closed_form(model, t) if closed_ok else None
            yield [t, a_closed, phi_closed, a_quad, phi_quad,
                   float(transition_probability_from_a(a_quad))]

    _write_csv(out, ["t", "a21_closed", "phi21_closed", "a21_quad", "phi21_quad", "P21"],
               rows())
    notes = _emit_warnings(
        [] if closed_ok else ["phase0 != 0: closed-form columns are NA"])
    return 0, {"command": "twolevel", "status": "ok", "out": out, "warnings": notes}


def cmd_perturb(scenario: Scenario, out: str):
    model = scenario.model
    if not isinstance(model, PerturbationScenario):
        raise ConfigurationError("scenario.model.type: perturb needs a perturbation model")
    times = scenario.grid.samples
    exact = perturbative_c_exact(model, times)
    markov = perturbative_c_markov(model, times)
    err = np.abs(exact - markov)

    rows = ([float(times[j]), exact[j].real, exact[j].imag,
             markov[j].real, markov[j].imag, float(err[j])]
            for j in range(times.size))
    _write_csv(out, ["t", "re_c_exact", "im_c_exact", "re_c_markov", "im_c_markov",
                     "abs_err"], rows)
    return 0, {"command": "perturb", "status": "ok", "out": out, "warnings": []}


def cmd_scan(scenario: Scenario, out: str):
    result = resonance_scan(scenario.scan, scenario.integrator, scenario.extraction)
    _write_csv(out, ["omega", "P"],
               ([float(w), float(p)] for w, p in
                zip(result.omegas, result.probabilities)))
    report_path = out + ".report.json"
    report = {
        "peak_omega": result.peak_omega,
        "peak_P": result.peak_probability,
        "predicted_omega": result.predicted_omega,
        "unshifted_omega": result.unshifted_omega,
    }
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, sort_keys=True)
        fh.write("\n")
    notes = _emit_warnings(result.warnings)
    return 0, {"command": "scan", "status": "ok", "out": out,
               "report": report_path, "warnings": notes}


def cmd_validate(scenario: Scenario):
    notes = []
    grid = scenario.grid
    if scenario.spectrum is not None and scenario.drive is not None and grid is not None:
        rate = _max_phase_rate(scenario)
        if rate > 0 and grid.h * rate >= math.pi:
            notes.append(
                f"per-step phase advance {grid.h * rate:.3f} rad >= pi: "
                "grid too coarse for reliable unwrapping")
        if not is_hermitian(scenario.drive, grid,
                            scenario.integrator.hermiticity_tolerance):
            notes.append("drive is not Hermitian on the sampled grid; "
                         "norm conservation will not be asserted")
        for i, term in enumerate(scenario.drive.terms):
            env = term.envelope
            if isinstance(env, Exponential) and env.rate > 0:
                span = env.rate * (grid.t_end - grid.t_start)
                if span < math.log(1e6):
                    notes.append(
                        f"drive term {i}: exponential switch-on spans only "
                        f"exp({span:.2f}) growth; the t=-infinity truncation rule "
                        "wants rate*(t_end-t_start) >= ln(1e6)")
    notes = _emit_warnings(notes)
    return 0, {"command": "validate", "status": "ok", "warnings": notes}


def _max_phase_rate(scenario: Scenario) -> float:
    energies = np.asarray(scenario.spectrum.energies)
    spread = float(energies.max() - energies.min()) / scenario.spectrum.hbar
    carrier = 0.0
    for term in scenario.drive.terms:
        rate = abs(term.carrier)
        if scenario.scan is not None:
            # scan templates store carrier multipliers
            rate = abs(term.carrier) * max(abs(scenario.scan.omega_min),
                                           abs(scenario.scan.omega_max))
        if isinstance(term.envelope, SlowGauge):
            rate += abs(term.envelope.rate)
        carrier = max(carrier, rate)
    return spread + carrier


# --- driver ---------------------------------------------------------------------

_REQUIRED_SECTIONS = {
    "propagate": ("spectrum", "drive", "grid", "initial"),
    "twolevel": ("model", "grid"),
    "perturb": ("model", "grid"),
    "scan": ("spectrum", "drive", "scan"),
    "validate": (),
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="subphase",
        description="Driven finite-level systems: propagation, sub-phase "
                    "extraction, resonance scans.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("propagate", "integrate a scenario and emit coefficient/sub-phase series"),
            ("twolevel", "two-level switch-on model: closed forms vs quadrature"),
            ("perturb", "slow-gauge perturbation: exact vs Markov coefficient"),
            ("scan", "sweep the drive frequency and locate the resonance peak"),
            ("validate", "check a scenario file without running it")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, help="scenario JSON path")
        if name != "validate":
            p.add_argument("--out", required=True, help="output CSV path")
    args = parser.parse_args(argv)

    try:
        scenario = load_scenario(args.scenario,
                                 require=_REQUIRED_SECTIONS[args.command])
        if args.command == "propagate":
            code, status = cmd_propagate(scenario, args.out)
        elif args.command == "twolevel":
            code, status = cmd_twolevel(scenario, args.out)
        elif args.command == "perturb":
            code, status = cmd_perturb(scenario, args.out)
        elif args.command == "scan":
            code, status = cmd_scan(scenario, args.out)
        else:
            code, status = cmd_validate(scenario)
    except (ConfigurationError, UndefinedPhaseError, PoleError, OSError) as exc:
        code = 1
        status = {"command": args.command, "status": "error", "message": str(exc)}
    except (DivergenceError, EnvelopeOverflowError, ArithmeticError) as exc:
        code = 2
        status = {"command": args.command, "status": "error", "message": str(exc)}

    print(json.dumps(status, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
