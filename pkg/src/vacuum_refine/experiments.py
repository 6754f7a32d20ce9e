"""Experiment pipelines behind the command-line interface.

Each ``cmd_*`` function consumes an ``ExperimentConfig``, writes its
deterministic data files under ``output.prefix`` plus a JSON run manifest,
and returns the summary values it printed.  File contents depend only on
the config and seed; wall-clock duration lives in the manifest alone, so
repeated runs produce byte-identical CSV and report files.

Shot-mode estimation draws one seed per estimate, advancing a counter
from the configured base seed in a fixed record order, which makes every
sampled column reproducible.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .adiabatic import (
    EvolutionMode,
    TrajectoryRecord,
    run_adiabatic,
    run_hold,
)
from .config import EstimationConfig, ExperimentConfig, build_model, config_to_text
from .errors import ConfigError, DomainError
from .estimation import corrected_expectation, cross_term, shot_expectation
from .filtering import refine_iteratively, tag_circuit_one_qubit
from .hamiltonian import PauliSum, exact_diagonalize, initial_hamiltonian
from .statevector import (
    StateVector,
    expectation_observable,
    fidelity,
    postselect,
)

REFERENCE_PREP_QUALITY = 0.999242  # benchmark 2|alpha|^2 - 1 for the default J=pi/4 run

_OBS_KEY = "expval_Z"
_THREADS_ENV = "VACUUM_REFINE_THREADS"


@dataclass
class CommandResult:
    """Outputs, printable summary lines and machine-readable summary values."""

    outputs: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def thread_cap() -> int:
    """Worker-count ceiling from the environment (evaluation is sequential,
    so a single worker is always within the cap)."""
    raw = os.environ.get(_THREADS_ENV)
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"{_THREADS_ENV}: expected an integer, got {raw!r}") from None
    if cap < 1:
        raise ConfigError(f"{_THREADS_ENV}: must be >= 1, got {cap}")
    return cap


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".9g")


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _ensure_output_dir(prefix: str) -> None:
    directory = os.path.dirname(prefix)
    if directory:
        os.makedirs(directory, exist_ok=True)


class _Estimator:
    """Evaluates observables exactly or by sampling with derived seeds."""

    def __init__(self, settings: EstimationConfig):
        self.settings = settings
        self.exact = settings.method == "exact"
        self._counter = 0

    def _next_seed(self) -> int:
        seed = self.settings.seed + self._counter
        self._counter += 1
        return seed

    def evaluate(self, state: StateVector, observable: PauliSum) -> tuple[float, float]:
        """Return (value, standard error) for one observable on one state."""
        if self.exact:
            return expectation_observable(state, observable), 0.0
        total = 0.0
        variance = 0.0
        for coeff, string in observable.terms:
            result = shot_expectation(state, string, self.settings.shots, self._next_seed())
            total += coeff * result.value
            variance += (coeff * result.std_error) ** 2
        return total, math.sqrt(variance)


def _mean_z(num_qubits: int) -> PauliSum:
    terms = tuple(
        (1.0 / num_qubits, "I" * q + "Z" + "I" * (num_qubits - q - 1))
        for q in range(num_qubits)
    )
    return PauliSum(num_qubits, terms)


def _trajectory_rows(
    records: list[TrajectoryRecord], estimator: _Estimator, observable: PauliSum
) -> list[tuple]:
    rows = []
    for record in records:
        if estimator.exact:
            value, err = record.observables[_OBS_KEY], 0.0
        else:
            value, err = estimator.evaluate(record.snapshot, observable)
        rows.append((record.t, value, err, record.fidelity, record.observables["energy"]))
    return rows


def _write_manifest(
    command: str,
    config: ExperimentConfig,
    outputs: list[str],
    started: float,
) -> str:
    path = f"{config.output_prefix}_manifest.json"
    payload = {
        "command": command,
        "version": __version__,
        "seed": config.estimation.seed,
        "thread_cap": thread_cap(),
        "duration_seconds": time.perf_counter() - started,
        "outputs": outputs,
        "config": config_to_text(config),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
    return path


def _prepare(config: ExperimentConfig):
    """Shared ramp stage: returns (system operator, ramp final state, trajectories)."""
    h1 = build_model(config)
    h0 = initial_hamiltonian(config.model.J, h1.num_qubits)
    estimator = _Estimator(config.estimation)
    observables = {_OBS_KEY: _mean_z(h1.num_qubits)}
    final, ramp = run_adiabatic(
        h0,
        h1,
        config.schedule,
        config.mode,
        observables,
        record_snapshots=not estimator.exact,
    )
    return h1, estimator, observables, final, ramp


def cmd_sweep(config: ExperimentConfig) -> CommandResult:
    """Ramp plus hold with no filtering; the discretized benchmark sweep."""
    started = time.perf_counter()
    _ensure_output_dir(config.output_prefix)
    h1, estimator, observables, final, ramp = _prepare(config)
    held, hold = run_hold(
        final,
        h1,
        config.schedule,
        config.mode,
        observables,
        record_snapshots=not estimator.exact,
        start_time=config.schedule.total_time,
    )
    rows = _trajectory_rows(ramp.records + hold.records, estimator, observables[_OBS_KEY])
    trajectory_path = f"{config.output_prefix}_trajectory.csv"
    _write_csv(trajectory_path, ["t", "expval_Z", "std_error", "fidelity", "energy"], rows)

    spectrum = exact_diagonalize(h1)
    final_fidelity = fidelity(final, spectrum.ground_state)
    prep_quality = 2.0 * final_fidelity - 1.0
    summary = {
        "prep_quality": prep_quality,
        "prep_quality_reference": REFERENCE_PREP_QUALITY,
        "prep_quality_difference": prep_quality - REFERENCE_PREP_QUALITY,
        "final_fidelity": final_fidelity,
        "final_energy": expectation_observable(final, h1),
        "ground_energy": float(spectrum.eigenvalues[0]),
        "held_final_energy": expectation_observable(held, h1),
    }
    summary_path = f"{config.output_prefix}_summary.csv"
    _write_csv(summary_path, list(summary), [tuple(summary.values())])

    outputs = [trajectory_path, summary_path]
    manifest = _write_manifest("sweep", config, outputs, started)
    lines = [
        f"trajectory written to {trajectory_path} ({len(rows)} records)",
        f"prep quality 2|alpha|^2-1 = {prep_quality:.9f} "
        f"(reference {REFERENCE_PREP_QUALITY}, difference {summary['prep_quality_difference']:+.3e})",
        f"final energy {summary['final_energy']:.9f} vs ground {summary['ground_energy']:.9f}",
        f"manifest written to {manifest}",
    ]
    return CommandResult(outputs=outputs + [manifest], lines=lines, summary=summary)


def _embed_with_ancilla(h: PauliSum) -> PauliSum:
    return PauliSum(h.num_qubits + 1, tuple((c, "I" + s) for c, s in h.terms))


def cmd_filter_run(config: ExperimentConfig) -> CommandResult:
    """Ramp, tag the excited component with one ancilla, then hold.

    In discard mode the ancilla is post-selected on |0> at the tagging
    time; otherwise the joint register keeps evolving and the summary
    reports the mixed value together with its closed-form correction.
    """
    started = time.perf_counter()
    _ensure_output_dir(config.output_prefix)
    h1, estimator, observables, final, ramp = _prepare(config)
    if h1.num_qubits != 1:
        raise ConfigError("model.hamiltonian: filter-run requires a one-qubit model")
    spectrum = exact_diagonalize(h1)

    pre_tag_z = expectation_observable(final, observables[_OBS_KEY])
    interference = cross_term(final, spectrum, observables[_OBS_KEY])

    joint = StateVector(2, np.kron(np.array([1.0, 0.0]), final.amplitudes))
    tagged = tag_circuit_one_qubit(joint, spectrum)

    z_system = PauliSum(2, ((1.0, "IZ"),))
    mixed_z_exact = expectation_observable(tagged, z_system)
    p0_exact = float(np.sum(np.abs(tagged.amplitudes.reshape(2, 2)[0]) ** 2))

    raw, raw_err = estimator.evaluate(tagged, z_system)
    if estimator.exact:
        p0, p0_err = p0_exact, 0.0
    else:
        z_ancilla, z_ancilla_err = estimator.evaluate(tagged, PauliSum(2, ((1.0, "ZI"),)))
        p0, p0_err = (1.0 + z_ancilla) / 2.0, z_ancilla_err / 2.0
    corrected = corrected_expectation(raw, p0)
    denom = 2.0 * p0 - 1.0
    corrected_err = math.sqrt(
        (raw_err / denom) ** 2 + (raw * 2.0 * p0_err / denom**2) ** 2
    )

    if config.filter.discard:
        _, collapsed = postselect(tagged, [0], "0")
        post_state: StateVector = collapsed
        hold_h = h1
        hold_obs = observables
        hold_target = None
        post_z, _ = estimator.evaluate(collapsed, observables[_OBS_KEY])
    else:
        post_state = tagged
        hold_h = _embed_with_ancilla(h1)
        hold_obs = {_OBS_KEY: z_system}
        hold_target = StateVector(
            2, np.kron(np.array([1.0, 0.0]), spectrum.ground_state.amplitudes)
        )
        post_z = mixed_z_exact
    _, hold = run_hold(
        post_state,
        hold_h,
        config.schedule,
        config.mode,
        hold_obs,
        record_snapshots=not estimator.exact,
        start_time=config.schedule.total_time,
        include_initial=True,
        fidelity_target=hold_target,
    )
    rows = _trajectory_rows(ramp.records, estimator, observables[_OBS_KEY])
    rows += _trajectory_rows(hold.records, estimator, hold_obs[_OBS_KEY])
    trajectory_path = f"{config.output_prefix}_trajectory.csv"
    _write_csv(trajectory_path, ["t", "expval_Z", "std_error", "fidelity", "energy"], rows)

    summary = {
        "raw": raw,
        "raw_std_error": raw_err,
        "two_p0_minus_1": denom,
        "p0_std_error": p0_err,
        "corrected": corrected,
        "corrected_std_error": corrected_err,
        "cross_term": interference,
        "discontinuity": pre_tag_z - mixed_z_exact,
        "postselected_expval": post_z if config.filter.discard else float("nan"),
    }
    summary_path = f"{config.output_prefix}_summary.csv"
    _write_csv(summary_path, list(summary), [tuple(summary.values())])

    outputs = [trajectory_path, summary_path]
    manifest = _write_manifest("filter-run", config, outputs, started)
    lines = [
        f"trajectory written to {trajectory_path} ({len(rows)} records)",
        f"raw = {raw:.9f}  2p0-1 = {denom:.9f}  corrected = raw/(2p0-1) = {corrected:.9f}",
        f"cross term at tagging time = {interference:.9e} "
        f"(pre/post jump {summary['discontinuity']:.9e})",
        f"manifest written to {manifest}",
    ]
    if config.filter.discard:
        lines.insert(2, f"post-selected expval_Z = {post_z:.9f}")
    return CommandResult(outputs=outputs + [manifest], lines=lines, summary=summary)


def cmd_refine(config: ExperimentConfig) -> CommandResult:
    """Ramp, then iterative estimate/filter/post-select passes."""
    started = time.perf_counter()
    _ensure_output_dir(config.output_prefix)
    h1 = build_model(config)
    if not 1 <= h1.num_qubits <= 4:
        raise ConfigError(
            f"model.hamiltonian: refinement supports 1 to 4 system qubits, "
            f"got {h1.num_qubits}"
        )
    h0 = initial_hamiltonian(config.model.J, h1.num_qubits)
    final, _ = run_adiabatic(h0, h1, config.schedule, config.mode)
    spectrum = exact_diagonalize(h1)
    start_fidelity = fidelity(final, spectrum.ground_state)

    fixed_theta = config.filter.theta if config.filter.theta_mode == "fixed" else None
    report = refine_iteratively(
        final,
        h1,
        m=config.filter.ancillas,
        max_iters=config.refine.max_iters,
        target_infidelity=config.refine.target_infidelity,
        powers=config.filter.powers,
        fixed_theta=fixed_theta,
    )
    rows = []
    for index, step in enumerate(report.steps, start=1):
        is_aborted_row = report.status.startswith("aborted") and index == len(report.steps)
        rows.append(
            (
                index,
                step.e0_prime,
                step.theta,
                step.success_probability,
                step.fidelity_to_ground,
                step.excited_weight,
                report.status if is_aborted_row else "ok",
            )
        )
    refinement_path = f"{config.output_prefix}_refinement.csv"
    _write_csv(
        refinement_path,
        ["iteration", "E0_prime", "theta", "success_probability", "fidelity", "excited_weight", "status"],
        rows,
    )
    summary = {
        "start_fidelity": start_fidelity,
        "passes": len(report.steps),
        "status": report.status,
        "final_fidelity": report.steps[-1].fidelity_to_ground if report.steps else start_fidelity,
        "final_excited_weight": report.steps[-1].excited_weight if report.steps else 1.0 - start_fidelity,
    }
    outputs = [refinement_path]
    manifest = _write_manifest("refine", config, outputs, started)
    lines = [
        f"refinement written to {refinement_path} ({len(rows)} pass(es))",
        f"start fidelity {start_fidelity:.9f} -> final fidelity {summary['final_fidelity']:.9f} "
        f"({report.status})",
        f"manifest written to {manifest}",
    ]
    return CommandResult(outputs=outputs + [manifest], lines=lines, summary=summary)


def _load_state_file(path: str, expected_qubits: int) -> StateVector:
    """Read one ``<re> <im>`` amplitude per line, requiring near-unit norm."""
    if not os.path.isfile(path):
        raise ConfigError(f"state file not found: {path}")
    values: list[complex] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, rawline in enumerate(handle, start=1):
            line = rawline.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigError(f"{path}: line {lineno}: expected '<re> <im>', got {rawline!r}")
            try:
                values.append(complex(float(parts[0]), float(parts[1])))
            except ValueError:
                raise ConfigError(f"{path}: line {lineno}: bad number in {rawline!r}") from None
    if len(values) != 2**expected_qubits:
        raise ConfigError(
            f"{path}: expected {2 ** expected_qubits} amplitudes, found {len(values)}"
        )
    amps = np.asarray(values, dtype=np.complex128)
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > 1e-6:
        raise ConfigError(f"{path}: amplitudes have norm {norm!r}, expected 1 within 1e-6")
    return StateVector(expected_qubits, amps / norm)


def cmd_diag(config: ExperimentConfig) -> CommandResult:
    """Report the model spectrum and, for a supplied state, its interference."""
    started = time.perf_counter()
    _ensure_output_dir(config.output_prefix)
    h = build_model(config)
    spectrum = exact_diagonalize(h)
    ground = spectrum.ground_state
    lines = [
        f"model: {config.model.hamiltonian} (J = {_fmt(config.model.J)})",
        "eigenvalues: " + ", ".join(_fmt(v) for v in spectrum.eigenvalues),
        f"gap: {_fmt(spectrum.gap)}",
        f"degenerate ground level: {'yes' if spectrum.degenerate else 'no'}",
    ]
    per_qubit = []
    for q in range(h.num_qubits):
        string = "I" * q + "Z" + "I" * (h.num_qubits - q - 1)
        value = expectation_observable(ground, PauliSum(h.num_qubits, ((1.0, string),)))
        per_qubit.append(value)
        lines.append(f"ground <Z_{q}>: {_fmt(value)}")
    summary = {
        "eigenvalues": [float(v) for v in spectrum.eigenvalues],
        "gap": spectrum.gap,
        "degenerate": spectrum.degenerate,
        "ground_z": per_qubit,
    }
    if config.state_file is not None:
        state = _load_state_file(config.state_file, h.num_qubits)
        interference = cross_term(state, spectrum, _mean_z(h.num_qubits))
        summary["cross_term"] = interference
        lines.append(f"state file: {config.state_file}")
        lines.append(f"cross term (mean Z): {_fmt(interference)}")
    report_path = f"{config.output_prefix}_diag.txt"
    with open(report_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    outputs = [report_path]
    manifest = _write_manifest("diag", config, outputs, started)
    lines.append(f"manifest written to {manifest}")
    return CommandResult(outputs=outputs + [manifest], lines=lines, summary=summary)
