import logging
import qubath.bath.degeneracy as qbdeg
import qubath.bath.spin_algebra as qbspin

def run():
    table = qbdeg.degeneracy_table(4, "1/2")
    logging.info(table)

    assert {str(j): nu for j, nu in table.entries.items()} == {"0": 2, "1": 3, "2": 1}, \
        "Four spins 1/2 should hold two singlets, three triplets and one quintet!"

    for N, S in [(6, "1"), (5, "3/2"), (40, "2")]:
        table = qbdeg.degeneracy_table(N, S)
        assert table.total_states() == table.S.dimension ** N, f"The sum rule fails for N={N}, S={S}!"

    spectrum = qbspin.brute_force_multiplicities(3, "3/2")
    logging.info(f"multiplicities read off the J^2 spectrum: {spectrum}")
    assert spectrum == {j: nu for j, nu in qbdeg.degeneracy_table(3, "3/2").entries.items()}, \
        "Counting and diagonalizing should agree!"

    logging.info("Degeneracies check out :)")


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    run()
