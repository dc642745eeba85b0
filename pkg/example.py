# How to use QUBATH?

# 1. Import the modules
import numpy as np

import qubath.bath.degeneracy as qbdeg
import qubath.bath.distribution as qbdist
import qubath.dynamics.ising_exact as qdexact
import qubath.dynamics.ising_mf as qdimf
import qubath.dynamics.xy_model as qdxy

# 2. Count the multiplets of total spin j in a bath of N spins S
table = qbdeg.degeneracy_table(4, "1/2")
print(table)
print(f"Total number of states: {table.total_states()}\n")

# 3. The law of j: exact for small baths, gaussian for large ones
print(f"P(j=1) for N=4 spins 1/2: {qbdist.exact_pmf_fraction(table, 1)}")
large = qbdist.JDistribution.gaussian(1000, 1)
print(f"<j> for N=1000 spins 1: {qbdist.expectation(large, lambda j: j):.4f}\n")

# 4. A qubit coupled to the bath through XY interactions
xy = qdxy.XYParams(mu=1.0, alpha=1.0, g=1.0, beta=0.1, N=1000, S=1)
rho0 = np.array([[0.5, 0.5], [0.5, 0.5]])
series = qdxy.coherence_evolution(xy, rho0, np.linspace(0, 10, 6))
print(f"|rho12(t)/rho12(0)| = {np.round(series.magnitude(), 4)}")
print(f"Long-time coherence: {qdxy.asymptotic_coherence_closed_form(xy):.4f}")
print(f"Decoherence time: {qdxy.decoherence_time(xy).tau:.4f}\n")

# 5. A qubit coupled to an Ising bath: mean field ...
ising = qdimf.IsingParams(N=10000, S=1, J=2.0, J0=1.0, w=1.0, T=2.52)
solution = qdimf.solve_order_parameter(ising)
print(f"Order parameter m = {solution.m:.4f}, decay condition holds: {solution.decay_valid}")
print(f"|g(t)| = {np.round(qdimf.g_meanfield(ising, solution, np.linspace(0, 10, 6)).magnitude(), 4)}\n")

# 6. ... and exactly, without transverse field
exact = qdimf.IsingParams(N=10, S=1, J=1.0, J0=1.0, w=0.0, T=1.0)
result = qdexact.g_exact(exact, qbdeg.degeneracy_table(10, 1), np.linspace(0, 30, 7))
print(f"|g(t)| = {np.round(result.series.magnitude(), 4)}, revival period {result.revival_period:.4f}")

# 7. Everything above is also reachable from the command line: python -m qubath --help
