import pytest

from qubath.bath.half_integer import HalfInteger
import qubath.bath.degeneracy as qbdeg
from qubath.exceptions import InvalidParameterError, InvalidQuantumNumberError, MismatchedSpinError


def indented_string(s: str, ident: str = '    '):
    return '\n'.join([ident + l for l in s.splitlines()])


def as_plain(table):
    return {str(j): nu for j, nu in table.entries.items()}


class TestDegeneracyTable:

    @pytest.mark.parametrize("N, spin, expected", [
        (4, "1/2", {"0": 2, "1": 3, "2": 1}),
        (3, "1/2", {"1/2": 2, "3/2": 1}),
        (3, "1", {"0": 1, "1": 3, "2": 2, "3": 1}),
        (2, "3/2", {"0": 1, "1": 1, "2": 1, "3": 1}),
        (1, "5/2", {"5/2": 1}),
    ])
    def test_small_tables(self, N, spin, expected):
        table = qbdeg.degeneracy_table(N, spin)
        assert as_plain(table) == expected, \
            f"wrong multiplicities for N={N}, S={spin}:" + \
            f"\n- expected: {expected}" + \
            f"\n- got: {as_plain(table)}"

    @pytest.mark.parametrize("N", [1, 2, 7, 50, 200])
    @pytest.mark.parametrize("spin", ["1/2", "1", "3/2", "2", "5/2", "3"])
    def test_sum_rule(self, N, spin):
        table = qbdeg.degeneracy_table(N, spin)
        s = HalfInteger.spin(spin)
        assert table.total_states() == s.dimension ** N, \
            f"sum of (2j+1) nu(j) should be (2S+1)^N for N={N}, S={spin}"
        assert all(nu >= 0 for nu in table.entries.values()), "multiplicities must be non-negative"

    def test_spin_half_closed_form(self):
        for N in range(1, 65):
            table = qbdeg.degeneracy_table(N, "1/2")
            for j, nu in table.entries.items():
                closed = qbdeg.spin_half_degeneracy(N, j)
                assert closed == nu, \
                    f"binomial form disagrees at N={N}, j={j}:" + \
                    f"\n- expected: {nu}" + \
                    f"\n- got: {closed}"

    @pytest.mark.parametrize("N, spin", [(1, "1"), (5, "1/2"), (6, "3/2"), (9, "2"), (20, "1")])
    def test_adding_one_spin(self, N, spin):
        smaller = qbdeg.degeneracy_table(N, spin)
        larger = qbdeg.degeneracy_table(N + 1, spin)
        assert qbdeg.degeneracy_recursion_check(smaller, larger), \
            f"recursion N -> N+1 fails for N={N}, S={spin}:" + \
            f"\n{indented_string(str(smaller))}" + \
            f"\n{indented_string(str(larger))}"

    @pytest.mark.parametrize("N1, N2, spin", [(2, 3, "1/2"), (3, 4, "1"), (2, 2, "3/2"), (5, 1, "2")])
    def test_composition_of_two_baths(self, N1, N2, spin):
        first = qbdeg.degeneracy_table(N1, spin)
        second = qbdeg.degeneracy_table(N2, spin)
        for J in qbdeg.degeneracy_table(N1 + N2, spin).js():
            assert qbdeg.composition_check(first, second, J), \
                f"composing N1={N1} and N2={N2} spins {spin} fails at J={J}"

    def test_combining_different_spins_fails(self):
        with pytest.raises(MismatchedSpinError):
            qbdeg.degeneracy_composition(qbdeg.degeneracy_table(2, "1/2"), qbdeg.degeneracy_table(2, "1"), 1)
        with pytest.raises(MismatchedSpinError):
            qbdeg.degeneracy_recursion_check(qbdeg.degeneracy_table(2, "1/2"), qbdeg.degeneracy_table(3, "1"))

    def test_recursion_needs_consecutive_sizes(self):
        with pytest.raises(InvalidParameterError):
            qbdeg.degeneracy_recursion_check(qbdeg.degeneracy_table(2, "1"), qbdeg.degeneracy_table(4, "1"))

    @pytest.mark.parametrize("j", ["1/2", "5", "-1"])
    def test_inadmissible_j(self, j):
        table = qbdeg.degeneracy_table(4, "1")
        with pytest.raises(InvalidQuantumNumberError):
            table.nu(j)

    @pytest.mark.parametrize("spin", ["1/2", "1", "3/2", "2", "5/2", "3"])
    def test_single_spin_has_one_multiplet(self, spin):
        table = qbdeg.degeneracy_table(1, spin)
        expected = {spin: 1}
        assert as_plain(table) == expected, \
            f"a lone spin {spin} carries a single multiplet j = S:" + \
            f"\n- expected: {expected}" + \
            f"\n- got: {as_plain(table)}"

    @pytest.mark.parametrize("j", ["1/2", "3/2"])
    def test_unreached_j_has_zero_multiplicity(self, j):
        table = qbdeg.degeneracy_table(1, "5/2")
        assert table.nu(j) == 0, f"nu({j}, 1; 5/2) should be 0, got {table.nu(j)}"
        assert HalfInteger.of(j) not in table.js(), f"j = {j} carries no multiplet and should not be listed"

    def test_large_bath_stays_exact(self):
        counts = qbdeg.level_count_vector(2000, 1)
        assert sum(counts) == 3 ** 2000, "level counts of 2000 spins 1 should add up to 3^2000"
        assert counts[0] == counts[-1] == 1, "fully polarized levels are unique"


class TestLevelCounts:

    @pytest.mark.parametrize("N, spin", [(1, "1"), (3, "1/2"), (4, "1"), (3, "3/2"), (5, "2"), (6, "1/2")])
    def test_recurrence_matches_multinomial_sum(self, N, spin):
        s = HalfInteger.spin(spin)
        for level in qbdeg.level_counts(N, s):
            multinomial = qbdeg.dim_fm_multinomial(N, s, level.m)
            assert level.count == multinomial, \
                f"dim F_m disagrees at N={N}, S={spin}, m={level.m}:" + \
                f"\n- multinomial: {multinomial}" + \
                f"\n- recurrence: {level.count}"

    def test_level_counts_are_symmetric(self):
        counts = qbdeg.level_count_vector(17, "3/2")
        assert counts == counts[::-1], "dim F_m should equal dim F_-m"

    def test_projection_parity_is_checked(self):
        with pytest.raises(InvalidQuantumNumberError):
            qbdeg.dim_fm(3, "1/2", 1)

    def test_multinomial_is_limited_to_small_baths(self):
        with pytest.raises(InvalidParameterError):
            qbdeg.dim_fm_multinomial(qbdeg.MULTINOMIAL_MAX_N + 1, "1/2", "1/2")


class TestTableCache:

    def test_cached_table_is_written_once_and_read_back(self, tmp_path):
        fresh = qbdeg.cached_degeneracy_table(12, "3/2", cache_dir=tmp_path)
        path = qbdeg.table_cache_path(12, "3/2", tmp_path)
        assert path.exists(), f"expected a cache file at {path}"

        cached = qbdeg.cached_degeneracy_table(12, "3/2", cache_dir=tmp_path)
        assert dict(cached.entries) == dict(fresh.entries), "the cached table should reproduce the computed one"
        assert not list(tmp_path.glob("*.tmp")), "no temporary files should survive a write"

    def test_environment_selects_cache_directory(self, tmp_path, monkeypatch):
        monkeypatch.setenv(qbdeg.CACHE_ENV, str(tmp_path))
        qbdeg.cached_degeneracy_table(5, "1")
        assert qbdeg.table_cache_path(5, "1", tmp_path).exists(), "the table should land in QUBATH_CACHE_DIR"

    def test_unexpected_header_is_rejected(self, tmp_path):
        path = tmp_path / "broken.csv"
        path.write_text("j,count\n0,1\n")
        with pytest.raises(InvalidParameterError):
            qbdeg.read_table_csv(path, 1, "1")

    def test_empty_multiplets_in_a_cache_file_are_dropped(self, tmp_path):
        path = tmp_path / "nu_N1_2S5.csv"
        path.write_text("two_j,nu\n1,0\n3,0\n5,1\n")
        table = qbdeg.read_table_csv(path, 1, "5/2")
        assert as_plain(table) == {"5/2": 1}, \
            "rows with nu = 0 should not survive reading:" + \
            f"\n- expected: {{'5/2': 1}}" + \
            f"\n- got: {as_plain(table)}"
