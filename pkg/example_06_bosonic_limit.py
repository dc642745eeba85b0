import logging
import numpy as np
import qubath.dynamics.hp_boson as qdboson

def run():
    grid = np.linspace(20, 40, 401)
    means = []
    for S in ["5", "8", "12"]:
        params = qdboson.BosonParams(S=S, g=1.0, alpha=0.5, mu=3.0, beta=0.01)
        series = qdboson.coherence_series(params, grid / params.alpha)
        means.append(series.magnitude().mean())
        logging.info(f"S={S:>2}: {int(series.diagnostics['n_max'])} thermal terms, late |rho12| ~ {means[-1]:.4f}")

    assert means == sorted(means), "Larger spins should keep more coherence at long times!"


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    run()
