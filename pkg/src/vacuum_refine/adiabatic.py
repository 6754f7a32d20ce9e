"""Discrete-time evolution under slowly interpolated Hamiltonians.

The total ramp time T is split into N = T / dt equal steps.  Step k
evolves under the interpolated operator frozen at the midpoint parameter
s_k = (k + 1/2) * dt / T, which keeps the discretization error of the
schedule at second order in dt.  Steps themselves are taken either
exactly (dense propagator) or with a first-order splitting that applies
Z-type factors before X-type factors, lexicographically within each
class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError
from .hamiltonian import PauliSum, evolution_unitary, exact_diagonalize, interpolate
from .statevector import StateVector, apply_gate, apply_pauli_string, basis_state
from .statevector import expectation_observable, fidelity

_GRID_ATOL = 1e-9
_ENERGY_KEY = "energy"


class EvolutionMode(enum.Enum):
    """How a single time step is realized."""

    EXACT_STEP = "exact_step"
    TROTTER1 = "trotter1"

    @classmethod
    def parse(cls, name: str) -> "EvolutionMode":
        for mode in cls:
            if mode.value == name:
                return mode
        raise DomainError(f"unknown evolution mode {name!r}")


@dataclass(frozen=True)
class Schedule:
    """Ramp duration, step size and optional fixed-operator hold time."""

    total_time: float
    dt: float
    hold_time: float = 0.0

    def __post_init__(self) -> None:
        if self.total_time <= 0:
            raise DomainError(f"total_time must be positive, got {self.total_time!r}")
        if self.dt <= 0 or self.dt > self.total_time:
            raise DomainError(f"dt={self.dt!r} must lie in (0, total_time]")
        if abs(self.total_time / self.dt - round(self.total_time / self.dt)) > _GRID_ATOL:
            raise DomainError(
                f"total_time/dt = {self.total_time / self.dt!r} is not an integer"
            )
        if self.hold_time < 0:
            raise DomainError(f"hold_time must be >= 0, got {self.hold_time!r}")
        if abs(self.hold_time / self.dt - round(self.hold_time / self.dt)) > _GRID_ATOL:
            raise DomainError(
                f"hold_time/dt = {self.hold_time / self.dt!r} is not an integer"
            )

    @property
    def num_ramp_steps(self) -> int:
        return int(round(self.total_time / self.dt))

    @property
    def num_hold_steps(self) -> int:
        return int(round(self.hold_time / self.dt))


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    observables: dict[str, float]
    fidelity: float
    snapshot: StateVector | None = None


@dataclass
class Trajectory:
    """Time-ordered records plus run metadata (warnings, schedule echo)."""

    records: list[TrajectoryRecord] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, record: TrajectoryRecord) -> None:
        if self.records and record.t <= self.records[-1].t:
            raise DomainError(
                f"record times must increase, got {record.t} after {self.records[-1].t}"
            )
        self.records.append(record)


def _split_key(term: tuple[float, str]) -> tuple[int, str]:
    letters = set(term[1])
    if letters <= {"I", "Z"}:
        rank = 0
    elif letters <= {"I", "X"}:
        rank = 1
    else:
        rank = 2
    return rank, term[1]


def evolve_step(state: StateVector, h: PauliSum, dt: float, mode: EvolutionMode) -> StateVector:
    """Advance the state by one step of duration ``dt`` under a fixed operator."""
    if h.num_qubits != state.num_qubits:
        raise DomainError(
            f"operator acts on {h.num_qubits} qubit(s), state has {state.num_qubits}"
        )
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt!r}")
    if mode is EvolutionMode.EXACT_STEP:
        gate = evolution_unitary(h, dt)
        return apply_gate(state, gate, list(range(state.num_qubits)))
    if mode is EvolutionMode.TROTTER1:
        for coeff, string in sorted(h.terms, key=_split_key):
            angle = coeff * dt
            rotated = apply_pauli_string(state, string)
            amps = np.cos(angle) * state.amplitudes - 1j * np.sin(angle) * rotated.amplitudes
            state = StateVector(state.num_qubits, amps)
        return state
    raise DomainError(f"unsupported evolution mode {mode!r}")


def _clamped_fidelity(state: StateVector, target: StateVector) -> float:
    return min(fidelity(state, target), 1.0)


def _record(
    trajectory: Trajectory,
    t: float,
    state: StateVector,
    h_now: PauliSum,
    observables: Mapping[str, PauliSum],
    target: StateVector,
    keep_snapshot: bool,
) -> None:
    values = {name: expectation_observable(state, obs) for name, obs in observables.items()}
    values[_ENERGY_KEY] = expectation_observable(state, h_now)
    trajectory.append(
        TrajectoryRecord(
            t=t,
            observables=values,
            fidelity=_clamped_fidelity(state, target),
            snapshot=state if keep_snapshot else None,
        )
    )


def _check_observables(observables: Mapping[str, PauliSum], num_qubits: int) -> None:
    for name, obs in observables.items():
        if name == _ENERGY_KEY:
            raise DomainError(f"observable name {_ENERGY_KEY!r} is reserved")
        if obs.num_qubits != num_qubits:
            raise DomainError(
                f"observable {name!r} acts on {obs.num_qubits} qubit(s), expected {num_qubits}"
            )


def run_adiabatic(
    h0: PauliSum,
    h1: PauliSum,
    schedule: Schedule,
    mode: EvolutionMode,
    observables: Mapping[str, PauliSum] | None = None,
    record_snapshots: bool = False,
) -> tuple[StateVector, Trajectory]:
    """Ramp from the preparation operator to the target operator.

    Starts from |0...0>, takes ``schedule.num_ramp_steps`` midpoint steps
    and records observables, instantaneous energy and fidelity to the
    instantaneous ground state after each one.  A degenerate instantaneous
    ground level is recorded as a metadata warning, not an error.
    """
    if h0.num_qubits != h1.num_qubits:
        raise DomainError(
            f"operators act on different registers: {h0.num_qubits} vs {h1.num_qubits}"
        )
    observables = dict(observables or {})
    _check_observables(observables, h0.num_qubits)
    n = h0.num_qubits
    state = basis_state(n, 0)
    trajectory = Trajectory(
        metadata={
            "mode": mode.value,
            "schedule": {
                "total_time": schedule.total_time,
                "dt": schedule.dt,
                "hold_time": schedule.hold_time,
            },
            "interpolation_rule": "midpoint",
            "warnings": [],
        }
    )
    start_spectrum = exact_diagonalize(h0)
    if start_spectrum.degenerate:
        trajectory.metadata["warnings"].append("degenerate ground level at s=0")
    _record(trajectory, 0.0, state, h0, observables, start_spectrum.ground_state, record_snapshots)
    for k in range(schedule.num_ramp_steps):
        s_k = (k + 0.5) * schedule.dt / schedule.total_time
        h_k = interpolate(h0, h1, s_k)
        state = evolve_step(state, h_k, schedule.dt, mode)
        spectrum = exact_diagonalize(h_k)
        if spectrum.degenerate:
            trajectory.metadata["warnings"].append(
                f"degenerate instantaneous ground level at step {k} (s={s_k!r})"
            )
        _record(
            trajectory,
            (k + 1) * schedule.dt,
            state,
            h_k,
            observables,
            spectrum.ground_state,
            record_snapshots,
        )
    return state, trajectory


def run_hold(
    state: StateVector,
    h: PauliSum,
    schedule: Schedule,
    mode: EvolutionMode,
    observables: Mapping[str, PauliSum] | None = None,
    record_snapshots: bool = False,
    start_time: float = 0.0,
    include_initial: bool = False,
    fidelity_target: StateVector | None = None,
) -> tuple[StateVector, Trajectory]:
    """Evolve under a fixed operator for ``schedule.hold_time``.

    Record times are offset by ``start_time`` so a hold can continue a
    ramp trajectory.  Fidelity is taken against ``fidelity_target`` when
    given, otherwise against the ground state of ``h``.
    """
    observables = dict(observables or {})
    _check_observables(observables, state.num_qubits)
    if h.num_qubits != state.num_qubits:
        raise DomainError(
            f"operator acts on {h.num_qubits} qubit(s), state has {state.num_qubits}"
        )
    trajectory = Trajectory(
        metadata={"mode": mode.value, "hold_time": schedule.hold_time, "warnings": []}
    )
    if fidelity_target is None:
        spectrum = exact_diagonalize(h)
        if spectrum.degenerate:
            trajectory.metadata["warnings"].append(
                "ground level of the held operator is degenerate"
            )
        fidelity_target = spectrum.ground_state
    if include_initial:
        _record(trajectory, start_time, state, h, observables, fidelity_target, record_snapshots)
    for j in range(schedule.num_hold_steps):
        state = evolve_step(state, h, schedule.dt, mode)
        _record(
            trajectory,
            start_time + (j + 1) * schedule.dt,
            state,
            h,
            observables,
            fidelity_target,
            record_snapshots,
        )
    return state, trajectory
