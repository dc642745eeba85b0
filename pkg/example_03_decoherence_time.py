import logging
import math
import numpy as np
import qubath.dynamics.xy_model as qdxy

def run():
    params = qdxy.XYParams(mu=0.0, alpha=1.0, g=1.0, beta=1.0, N=1000, S="1/2")
    tau_d = qdxy.decoherence_time(params).tau
    rho0 = np.array([[0.5, 0.5], [0.5, 0.5]])
    series = qdxy.coherence_evolution(params, rho0, np.linspace(0, 0.2 * tau_d, 41))
    fit = qdxy.short_time_check(series, params)

    logging.info(f"tau_D = {tau_d:.4f}, fitted gaussian time {fit.tau:.4f} over {fit.points} points")
    assert abs(fit.ratio - math.sqrt(2 / 3)) < 0.02, "The short-time decay should follow tau_D!"

    taus = [qdxy.decoherence_time(qdxy.XYParams(0.0, 1.0, 1.0, 1.0, 1000, S)).tau for S in ["1/2", "1", "5", "100"]]
    logging.info(f"tau_D for S = 1/2, 1, 5, 100: {np.round(taus, 4)}")
    assert taus == sorted(taus, reverse=True), "Decoherence should get faster with S!"


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    run()
