import logging
import numpy as np
import qubath.dynamics.ising_mf as qdimf

def run():
    for T, expected in [(2.52, 0.280), (2.54, 0.245)]:
        params = qdimf.IsingParams(N=10000, S=1, J=2.0, J0=1.0, w=1.0, T=T)
        solution = qdimf.solve_order_parameter(params)
        logging.info(f"T={T}: m={solution.m:.4f}, Theta={solution.Theta:.4f}, decay valid: {solution.decay_valid}")
        assert abs(solution.m - expected) < 1e-3, f"The order parameter at T={T} should be {expected}!"

        series = qdimf.g_meanfield(params, solution, np.linspace(0, 10, 11))
        logging.info(f"    |g| = {np.round(series.magnitude(), 4)}")

    cold = qdimf.IsingParams(N=10000, S=1, J=3.0, J0=1.0, w=0.0, T=1.0)
    solution = qdimf.solve_order_parameter(cold)
    assert not solution.decay_valid, "Deep in the ordered phase the gaussian decay breaks down!"
    logging.info(f"T=1: |g|^2 limit at J0 t = 2 is {qdimf.g_meanfield_limit(cold, solution, 2.0):.4f} > 1")


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    run()
