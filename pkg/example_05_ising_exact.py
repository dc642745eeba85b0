import logging
import numpy as np
import qubath.bath.degeneracy as qbdeg
import qubath.bath.spin_algebra as qbspin
import qubath.dynamics.ising_exact as qdexact
import qubath.dynamics.ising_mf as qdimf

def run():
    params = qdimf.IsingParams(N=6, S=1, J=1.0, J0=1.0, w=0.0, T=0.8)
    times = np.linspace(0, 20, 21)
    result = qdexact.g_exact(params, qbdeg.degeneracy_table(6, 1), times)
    brute = qbspin.brute_force_ising_g(6, 1, 1.0, 1.0, params.beta, times)
    assert np.max(np.abs(result.series.ratio12 - brute.ratio12)) < 1e-12, "The degeneracy sum should be exact!"

    bath = qdimf.IsingParams(N=10, S=1, J=1.0, J0=1.0, w=0.0, T=1.0)
    period = qdexact.revival_period(bath)
    result = qdexact.g_exact(bath, qbdeg.degeneracy_table(10, 1), np.linspace(0, 2 * period, 401))
    revivals = qdexact.revival_diagnostics(result)
    logging.info(f"revivals at J0 t = {np.round(revivals.times, 3)} with |g| = {np.round(revivals.amplitudes, 4)}")

    near_tc = qdimf.IsingParams(N=100, S=1, J=3.0, J0=1.0, w=0.0, T=3.8)
    report = qdexact.meanfield_vs_exact(near_tc)
    logging.info(f"m={report.solution.m:.3f}: exact and mean-field |g| differ by up to {report.max_deviation:.3f}")


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    run()
