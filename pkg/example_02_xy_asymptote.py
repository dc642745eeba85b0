import logging
import qubath.dynamics.xy_model as qdxy

def run():
    spins = ["1/2", "1", "3/2", "2", "5", "10"]
    values = []
    for S in spins:
        params = qdxy.XYParams(mu=1.0, alpha=1.0, g=1.0, beta=0.1, N=1000, S=S)
        psi = qdxy.asymptotic_coherence(params)
        closed = qdxy.asymptotic_coherence_closed_form(params)
        logging.info(f"S={S:>4}: psi={psi:.8f} (closed form {closed:.8f})")
        assert abs(psi - closed) < 1e-8 * psi, "Quadrature and closed form should agree!"
        values.append(psi)

    assert values == sorted(values), "Larger spins should keep more coherence!"
    logging.info(f"S -> infinity limit: {qdxy.large_S_asymptote(1.0, 0.1):.4f}")


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    run()
