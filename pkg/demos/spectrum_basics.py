"""
Model spectra and the exact vacuum value
========================================

Builds the two bundled operators, diagonalizes them and prints the
quantities the rest of the demos keep referring back to.
"""

import numpy as np

from vacuum_refine import (
    PauliSum,
    StateVector,
    exact_diagonalize,
    expectation_observable,
    hadamard_hamiltonian,
    transverse_ising_pair,
)

J = np.pi / 4

# one-qubit operator -J(Z+X)/sqrt(2): levels at -J and +J
h = hadamard_hamiltonian(J)
spec = exact_diagonalize(h)
print("one-qubit model, J = pi/4")
print("  terms:", h.terms)
print("  eigenvalues:", spec.eigenvalues)
print("  gap:", spec.gap)

ground = spec.ground_state
print("  ground amplitudes:", ground.amplitudes)
print("  analytic ground:  ", np.array([np.cos(np.pi / 8), np.sin(np.pi / 8)]))

z = PauliSum(1, ((1.0, "Z"),))
vacuum_z = expectation_observable(ground, z)
print("  vacuum <Z> =", vacuum_z, " (exact 1/sqrt(2) =", 1 / np.sqrt(2), ")")

# the off-diagonal matrix element drives the oscillation seen in the
# sweep demo: <E0|Z|E1> = -1/sqrt(2) under the fixed phase convention
v0, v1 = spec.eigenvectors[:, 0], spec.eigenvectors[:, 1]
zmat = np.array([[1.0, 0.0], [0.0, -1.0]])
print("  <E0|Z|E1> =", v0.conj() @ zmat @ v1)

print()

# two-qubit pair: -J(ZZ + X0 + X1), used by the refinement demo
pair = transverse_ising_pair(J)
spec2 = exact_diagonalize(pair)
print("two-qubit pair model")
print("  terms:", pair.terms)
print("  eigenvalues:", spec2.eigenvalues)
print("  analytic:    ", J * np.array([-np.sqrt(5), -1, 1, np.sqrt(5)]))
print("  gap:", spec2.gap)
for q in range(2):
    string = "ZI" if q == 0 else "IZ"
    obs = PauliSum(2, ((1.0, string),))
    print(f"  ground <Z_{q}> =", expectation_observable(spec2.ground_state, obs))
