"""Ancilla-driven eigenstate filtering with post-selection.

Two circuits live here.  The first, ``tag_circuit_one_qubit``, entangles
a single ancilla with the two energy eigenstates of a one-qubit system:
basis-changing the system so the eigenbasis aligns with the computational
basis, copying that bit onto the ancilla, and changing basis back.  An
approximate ground state alpha|E0> + beta|E1> becomes
alpha|0>|E0> + beta|1>|E1>, so reading the ancilla either discards the
excited component (post-selection) or decoheres the superposition into a
mixture whose measured values can be corrected in closed form.

The second, ``apply_filter``, needs no eigenbasis knowledge.  Each of m
ancillas is put on the Hadamard axis and kicks back the phase of a
controlled propagator power

    U(theta)^p = (i * exp(-i * theta * H / 2))^p.

After the closing Hadamard wall, the all-zeros ancilla branch carries the
system state with each eigencomponent of energy E multiplied by

    A(E) = prod_j (1 + z^p_j) / 2,     z = i * exp(-i * E * theta / 2),

the closed form exposed as ``filter_amplitude``.  Choosing
theta = pi / E0' with E0' a (possibly rough) ground-energy estimate makes
z = 1 at resonance, passing the ground component through untouched while
suppressing the rest; the leading global phase i is applied as a
controlled phase, which is why it matters physically.  Iterating
estimate -> filter -> post-select sharpens E0' and the state together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEnergyError,
    DomainError,
    ImpossibleOutcomeError,
)
from .estimation import eigen_overlaps, shot_expectation
from .hamiltonian import PauliSum, Spectrum, evolution_unitary, exact_diagonalize
from .statevector import (
    HADAMARD,
    X,
    GateMatrix,
    StateVector,
    apply_controlled,
    apply_gate,
    expectation_observable,
    postselect,
)

_ANCILLA_RESIDUE_LIMIT = 1e-10
_MIN_E0_PRIME = 1e-9


@dataclass(frozen=True)
class FilterConfig:
    """Ancilla count, phase parameter and per-ancilla propagator powers."""

    num_ancillas: int
    theta: float
    powers: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.num_ancillas, int) or self.num_ancillas < 1:
            raise DomainError(
                f"num_ancillas must be a positive integer, got {self.num_ancillas!r}"
            )
        powers = self.powers
        if powers is None:
            powers = tuple(2**j for j in range(self.num_ancillas))
        else:
            powers = tuple(int(p) for p in powers)
            if len(powers) != self.num_ancillas:
                raise DomainError(
                    f"{len(powers)} power(s) given for {self.num_ancillas} ancilla(s)"
                )
            if any(p < 1 for p in powers):
                raise DomainError(f"powers must be strictly positive, got {powers}")
        object.__setattr__(self, "powers", powers)


@dataclass(frozen=True, eq=False)
class FilterOutcome:
    """Result of one filter application.

    ``refined_state`` holds the post-selected system register when the
    excited branch was discarded; ``joint_state`` holds the full
    ancilla+system register otherwise, for mixed-value estimation.
    """

    success_probability: float
    kept: bool
    refined_state: StateVector | None = None
    joint_state: StateVector | None = None


@dataclass(frozen=True)
class RefinementStep:
    """Metrics of one estimate -> filter -> post-select pass."""

    e0_prime: float
    theta: float
    success_probability: float
    fidelity_to_ground: float
    excited_weight: float


@dataclass(frozen=True, eq=False)
class RefinementReport:
    steps: tuple[RefinementStep, ...]
    status: str
    final_state: StateVector


def tag_circuit_one_qubit(joint: StateVector, spectrum: Spectrum) -> StateVector:
    """Entangle a fresh ancilla (qubit 0) with the system eigencomponents.

    Expects a two-qubit register |0>|psi> and the diagonalized one-qubit
    system operator; returns the tagged state with the ancilla marking the
    excited component.
    """
    if joint.num_qubits != 2:
        raise DomainError(f"tagging needs an ancilla+system pair, got {joint.num_qubits} qubit(s)")
    if spectrum.dim != 2:
        raise DomainError(f"spectrum dimension {spectrum.dim} is not a one-qubit spectrum")
    if spectrum.degenerate:
        raise DomainError("cannot tag against a degenerate spectrum")
    ancilla_one = float(np.sum(np.abs(joint.amplitudes.reshape(2, 2)[1]) ** 2))
    if ancilla_one > _ANCILLA_RESIDUE_LIMIT:
        raise DomainError(
            f"ancilla must start in |0> (found population {ancilla_one:.3e} on |1>)"
        )
    to_eigen = GateMatrix(1, spectrum.eigenvectors.conj().T)
    tagged = apply_gate(joint, to_eigen, [1])
    tagged = apply_controlled(tagged, [1], X, [0])
    return apply_gate(tagged, GateMatrix(1, spectrum.eigenvectors), [1])


def estimate_e0(state: StateVector, h: PauliSum, shots: int = 0, seed: int = 0) -> float:
    """Energy estimate <psi|h|psi>, exact or from per-term sampling."""
    if shots:
        total = 0.0
        for index, (coeff, string) in enumerate(h.terms):
            total += coeff * shot_expectation(state, string, shots, seed + index).value
        return total
    return expectation_observable(state, h)


def choose_theta(e0_prime: float) -> float:
    """Phase parameter pi / E0' putting the estimated level on resonance."""
    if abs(e0_prime) < _MIN_E0_PRIME:
        raise DegenerateEnergyError(
            f"energy estimate {e0_prime!r} is too close to zero to set a phase"
        )
    return math.pi / e0_prime


def controlled_u_power(
    joint: StateVector, ancilla: int, h: PauliSum, theta: float, k: int
) -> StateVector:
    """Apply the k-th power of i*exp(-i*theta*h/2) controlled on one ancilla.

    The system register occupies the trailing ``h.num_qubits`` qubits of
    ``joint``.  The power of the global phase i is kept inside the
    controlled matrix, where it acts as a relative phase.
    """
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"power k must be a positive integer, got {k!r}")
    n_sys = h.num_qubits
    if joint.num_qubits <= n_sys:
        raise DomainError(
            f"joint register of {joint.num_qubits} qubit(s) has no room for ancillas"
        )
    targets = list(range(joint.num_qubits - n_sys, joint.num_qubits))
    if ancilla in targets:
        raise DomainError(f"ancilla {ancilla} overlaps the system register {targets}")
    bare = evolution_unitary(h, k * theta / 2.0)
    gate = GateMatrix(n_sys, (1j**k) * bare.entries)
    return apply_controlled(joint, [ancilla], gate, targets)


def filter_amplitude(energy: float, theta: float, config: FilterConfig) -> complex:
    """Closed-form amplitude multiplier for an eigencomponent of ``energy``."""
    z = 1j * np.exp(-0.5j * energy * theta)
    result = 1.0 + 0.0j
    for p in config.powers:
        result *= (1.0 + z**p) / 2.0
    return complex(result)


def apply_filter(
    system_state: StateVector, h: PauliSum, config: FilterConfig, discard: bool = True
) -> FilterOutcome:
    """Run the m-ancilla filter circuit against a system state.

    Ancillas are allocated internally in |0...0> ahead of the system
    register.  With ``discard`` the all-zeros ancilla outcome is
    post-selected and the collapsed system state returned; otherwise the
    entangled joint state is returned for mixed-value estimation.
    """
    if h.num_qubits != system_state.num_qubits:
        raise DomainError(
            f"operator acts on {h.num_qubits} qubit(s), state has {system_state.num_qubits}"
        )
    m = config.num_ancillas
    ancilla_amps = np.zeros(2**m, dtype=np.complex128)
    ancilla_amps[0] = 1.0
    joint = StateVector(m + h.num_qubits, np.kron(ancilla_amps, system_state.amplitudes))
    for a in range(m):
        joint = apply_gate(joint, HADAMARD, [a])
    for a in range(m):
        joint = controlled_u_power(joint, a, h, config.theta, config.powers[a])
    for a in range(m):
        joint = apply_gate(joint, HADAMARD, [a])
    if discard:
        probability, refined = postselect(joint, list(range(m)), "0" * m)
        return FilterOutcome(
            success_probability=probability, kept=True, refined_state=refined
        )
    block = joint.amplitudes.reshape((2**m, -1))[0]
    probability = float(np.sum(np.abs(block) ** 2))
    return FilterOutcome(success_probability=probability, kept=False, joint_state=joint)


def refine_iteratively(
    system_state: StateVector,
    h: PauliSum,
    m: int,
    max_iters: int = 5,
    target_infidelity: float = 1e-8,
    powers: tuple[int, ...] | None = None,
    fixed_theta: float | None = None,
) -> RefinementReport:
    """Alternate energy estimation and filtering until the state is clean.

    Each pass estimates E0' on the current state, picks
    theta = pi / E0' (or reuses ``fixed_theta``), filters with ``m``
    ancillas and post-selects.  Per-pass metrics come from the exact
    spectrum, which serves as the measuring stick, not as an input to the
    circuit.  A pass whose post-selection is impossible or whose energy
    estimate cannot set a phase is recorded with the pre-filter metrics
    and aborts the loop; completed passes always report post-filter
    metrics.
    """
    if max_iters < 1:
        raise DomainError(f"max_iters must be >= 1, got {max_iters!r}")
    if target_infidelity < 0:
        raise DomainError(f"target_infidelity must be >= 0, got {target_infidelity!r}")
    spectrum = exact_diagonalize(h)
    if spectrum.degenerate:
        raise DomainError("iterative refinement needs a non-degenerate ground level")
    state = system_state
    steps: list[RefinementStep] = []
    status = "max_iterations"
    for _ in range(max_iters):
        e0_prime = estimate_e0(state, h)
        theta = float("nan")
        try:
            theta = fixed_theta if fixed_theta is not None else choose_theta(e0_prime)
            outcome = apply_filter(state, h, FilterConfig(m, theta, powers), discard=True)
        except (DegenerateEnergyError, ImpossibleOutcomeError) as exc:
            weights = eigen_overlaps(state, spectrum).weights
            steps.append(
                RefinementStep(
                    e0_prime=e0_prime,
                    theta=theta,
                    success_probability=0.0,
                    fidelity_to_ground=float(weights[0]),
                    excited_weight=float(1.0 - weights[0]),
                )
            )
            status = f"aborted: {exc}"
            break
        state = outcome.refined_state
        weights = eigen_overlaps(state, spectrum).weights
        excited = float(1.0 - weights[0])
        steps.append(
            RefinementStep(
                e0_prime=e0_prime,
                theta=theta,
                success_probability=outcome.success_probability,
                fidelity_to_ground=float(weights[0]),
                excited_weight=excited,
            )
        )
        if excited <= target_infidelity:
            status = "converged"
            break
    return RefinementReport(steps=tuple(steps), status=status, final_state=state)
