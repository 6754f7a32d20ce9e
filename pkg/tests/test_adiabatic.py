import numpy as np
import pytest

from vacuum_refine import (
    DomainError,
    EvolutionMode,
    PauliSum,
    Schedule,
    StateVector,
    basis_state,
    evolve_step,
    exact_diagonalize,
    fidelity,
    hadamard_hamiltonian,
    initial_hamiltonian,
    interpolate,
    run_adiabatic,
    run_hold,
)

J = np.pi / 4

BENCHMARK = Schedule(total_time=36.0, dt=1.0 / 24.0, hold_time=12.0)


def test_schedule_validation():
    with pytest.raises(DomainError):
        Schedule(total_time=0.0, dt=0.1)
    with pytest.raises(DomainError):
        Schedule(total_time=1.0, dt=-0.1)
    with pytest.raises(DomainError):
        Schedule(total_time=1.0, dt=0.3)  # not an integer number of steps
    with pytest.raises(DomainError):
        Schedule(total_time=1.0, dt=0.25, hold_time=0.3)
    sched = Schedule(total_time=1.0, dt=0.25, hold_time=0.5)
    assert sched.num_ramp_steps == 4
    assert sched.num_hold_steps == 2


def test_mode_parse():
    assert EvolutionMode.parse("exact_step") is EvolutionMode.EXACT_STEP
    assert EvolutionMode.parse("trotter1") is EvolutionMode.TROTTER1
    with pytest.raises(DomainError):
        EvolutionMode.parse("rk4")


def test_exact_step_phases_eigenstate():
    # |0> is the -J eigenstate of -J Z, so one step contributes e^{+iJ dt}
    h = initial_hamiltonian(J, 1)
    dt = 0.5
    stepped = evolve_step(basis_state(1, 0), h, dt, EvolutionMode.EXACT_STEP)
    assert stepped.amplitudes[0] == pytest.approx(np.exp(1j * J * dt), abs=1e-14)


def test_trotter_exact_agree_for_commuting_terms():
    # all-Z operator: the split pieces commute, so one trotter step is exact
    h = PauliSum(2, ((0.3, "ZI"), (-0.7, "IZ"), (0.2, "ZZ")))
    rng = np.random.default_rng(2)
    from oracles import random_state

    state = StateVector(2, random_state(2, rng))
    a = evolve_step(state, h, 0.37, EvolutionMode.EXACT_STEP)
    b = evolve_step(state, h, 0.37, EvolutionMode.TROTTER1)
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) < 1e-12


def test_single_step_error_scales_quadratically():
    # first-order splitting has O(dt^2) local error: one step at dt vs one
    # step at dt/2, each against the exact step of matching duration, gives
    # an error ratio of about 4
    h = interpolate(initial_hamiltonian(J, 1), hadamard_hamiltonian(J), 0.5)
    state = basis_state(1, 0)

    def err(dt):
        a = evolve_step(state, h, dt, EvolutionMode.EXACT_STEP)
        b = evolve_step(state, h, dt, EvolutionMode.TROTTER1)
        return np.linalg.norm(a.amplitudes - b.amplitudes)

    ratio = err(1.0 / 24.0) / err(1.0 / 48.0)
    assert 3.4 < ratio < 4.6


def test_benchmark_ramp_reaches_ground():
    h0 = initial_hamiltonian(J, 1)
    h1 = hadamard_hamiltonian(J)
    final, traj = run_adiabatic(h0, h1, BENCHMARK, EvolutionMode.EXACT_STEP)
    ground = exact_diagonalize(h1).ground_state
    assert fidelity(final, ground) > 0.999
    assert len(traj.records) == BENCHMARK.num_ramp_steps + 1
    assert traj.records[0].t == 0.0
    assert traj.records[-1].t == pytest.approx(36.0)
    assert traj.metadata["warnings"] == []


def test_sudden_ramp_keeps_initial_overlap():
    # a single-step ramp is a quench: fidelity ~ |<ground|0>|^2 = cos^2(pi/8)
    h0 = initial_hamiltonian(J, 1)
    h1 = hadamard_hamiltonian(J)
    sched = Schedule(total_time=1.0 / 24.0, dt=1.0 / 24.0)
    final, _ = run_adiabatic(h0, h1, sched, EvolutionMode.EXACT_STEP)
    ground = exact_diagonalize(h1).ground_state
    assert fidelity(final, ground) == pytest.approx(np.cos(np.pi / 8) ** 2, abs=0.02)


def test_trivial_ramp_is_perfect():
    h0 = initial_hamiltonian(J, 1)
    sched = Schedule(total_time=2.0, dt=0.25)
    final, traj = run_adiabatic(h0, h0, sched, EvolutionMode.EXACT_STEP)
    assert traj.records[-1].fidelity == pytest.approx(1.0, abs=1e-12)
    assert abs(final.amplitudes[0]) == pytest.approx(1.0, abs=1e-12)


def test_slower_ramp_prepares_better():
    h0 = initial_hamiltonian(J, 1)
    h1 = hadamard_hamiltonian(J)
    fast = Schedule(total_time=9.0, dt=1.0 / 24.0)
    _, traj_fast = run_adiabatic(h0, h1, fast, EvolutionMode.EXACT_STEP)
    _, traj_slow = run_adiabatic(h0, h1, BENCHMARK, EvolutionMode.EXACT_STEP)
    assert traj_slow.records[-1].fidelity > traj_fast.records[-1].fidelity


def test_trotter_deviation_scales_linearly_in_dt():
    # over a fixed ramp the accumulated first-order error is O(dt): halving
    # dt halves the deviation between the two steppers' final states
    h0 = initial_hamiltonian(J, 1)
    h1 = hadamard_hamiltonian(J)

    def deviation(dt):
        sched = Schedule(total_time=36.0, dt=dt)
        exact, _ = run_adiabatic(h0, h1, sched, EvolutionMode.EXACT_STEP)
        trot, _ = run_adiabatic(h0, h1, sched, EvolutionMode.TROTTER1)
        return np.linalg.norm(exact.amplitudes - trot.amplitudes)

    ratio = deviation(1.0 / 12.0) / deviation(1.0 / 24.0)
    assert 1.7 < ratio < 2.3


def test_energy_recorded_against_instantaneous_operator():
    h0 = initial_hamiltonian(J, 1)
    h1 = hadamard_hamiltonian(J)
    _, traj = run_adiabatic(h0, h1, BENCHMARK, EvolutionMode.EXACT_STEP)
    # at t=0 the state is the exact ground of h0 with energy -J
    assert traj.records[0].observables["energy"] == pytest.approx(-J, abs=1e-12)
    # near the end the energy approaches the target ground energy
    assert traj.records[-1].observables["energy"] == pytest.approx(-J, abs=5e-3)


def test_hold_leaves_eigenstate_invariant():
    h1 = hadamard_hamiltonian(J)
    ground = exact_diagonalize(h1).ground_state
    sched = Schedule(total_time=1.0, dt=1.0 / 24.0, hold_time=12.0)
    final, traj = run_hold(ground, h1, sched, EvolutionMode.EXACT_STEP)
    assert len(traj.records) == sched.num_hold_steps
    for record in traj.records:
        assert record.fidelity == pytest.approx(1.0, abs=1e-10)
    assert fidelity(final, ground) == pytest.approx(1.0, abs=1e-10)


def test_hold_oscillation_closed_form():
    # superpose the two levels of the single-qubit operator and hold; the
    # observable oscillates as w0 z0 + w1 z1 + cross * cos(gap * t)
    h1 = hadamard_hamiltonian(J)
    spec = exact_diagonalize(h1)
    v0 = spec.eigenvectors[:, 0]
    v1 = spec.eigenvectors[:, 1]
    a, b = np.sqrt(0.9), np.sqrt(0.1)
    state = StateVector(1, a * v0 + b * v1)

    z = PauliSum(1, ((1.0, "Z"),))
    zmat = np.array([[1.0, 0.0], [0.0, -1.0]])
    z00 = float(np.real(v0.conj() @ zmat @ v0))
    z11 = float(np.real(v1.conj() @ zmat @ v1))
    z01 = complex(v0.conj() @ zmat @ v1)
    gap = spec.gap

    sched = Schedule(total_time=1.0, dt=1.0 / 24.0, hold_time=12.0)
    _, traj = run_hold(
        state,
        h1,
        sched,
        EvolutionMode.EXACT_STEP,
        observables={"expval_Z": z},
        start_time=0.0,
        include_initial=True,
    )
    for record in traj.records:
        t = record.t
        expected = (
            a * a * z00
            + b * b * z11
            + 2 * a * b * np.real(z01 * np.exp(-1j * gap * t))
        )
        assert record.observables["expval_Z"] == pytest.approx(expected, abs=1e-8)
    # the oscillation period 2*pi/gap = 4 shows up as a repeat after 4 units
    values = {round(r.t, 9): r.observables["expval_Z"] for r in traj.records}
    assert values[4.0] == pytest.approx(values[0.0], abs=1e-10)
    assert values[8.0] == pytest.approx(values[0.0], abs=1e-10)


def test_hold_time_offset_and_target():
    h1 = hadamard_hamiltonian(J)
    ground = exact_diagonalize(h1).ground_state
    sched = Schedule(total_time=1.0, dt=0.25, hold_time=1.0)
    _, traj = run_hold(
        ground,
        h1,
        sched,
        EvolutionMode.EXACT_STEP,
        start_time=36.0,
        include_initial=True,
        fidelity_target=ground,
    )
    times = [r.t for r in traj.records]
    assert times == pytest.approx([36.0, 36.25, 36.5, 36.75, 37.0])


def test_crossing_ramp_records_degeneracy_warning():
    # ramping -JZ to +JZ passes through zero coupling where the levels meet
    h0 = initial_hamiltonian(J, 1)
    h1 = h0.scaled(-1.0)
    sched = Schedule(total_time=1.0, dt=1.0 / 3.0)
    _, traj = run_adiabatic(h0, h1, sched, EvolutionMode.EXACT_STEP)
    assert any("degenerate" in w for w in traj.metadata["warnings"])


def test_mismatched_registers_rejected():
    h0 = initial_hamiltonian(J, 2)
    h1 = hadamard_hamiltonian(J)
    with pytest.raises(DomainError):
        run_adiabatic(h0, h1, BENCHMARK, EvolutionMode.EXACT_STEP)


def test_observable_register_checked():
    h0 = initial_hamiltonian(J, 1)
    h1 = hadamard_hamiltonian(J)
    bad = {"expval_Z": PauliSum(2, ((1.0, "ZI"),))}
    with pytest.raises(DomainError):
        run_adiabatic(h0, h1, BENCHMARK, EvolutionMode.EXACT_STEP, observables=bad)


def test_energy_key_reserved():
    h0 = initial_hamiltonian(J, 1)
    h1 = hadamard_hamiltonian(J)
    with pytest.raises(DomainError):
        run_adiabatic(
            h0,
            h1,
            BENCHMARK,
            EvolutionMode.EXACT_STEP,
            observables={"energy": PauliSum(1, ((1.0, "Z"),))},
        )


def test_trajectory_time_ordering_enforced():
    from vacuum_refine import Trajectory, TrajectoryRecord

    traj = Trajectory(metadata={})
    traj.append(TrajectoryRecord(t=0.0, observables={}, fidelity=1.0, snapshot=None))
    with pytest.raises(DomainError):
        traj.append(TrajectoryRecord(t=0.0, observables={}, fidelity=1.0, snapshot=None))
