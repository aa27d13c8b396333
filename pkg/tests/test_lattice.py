from fractions import Fraction

import pytest

from unitary_heights.lattice import (ALMOST_PI_MODULAR, IN_CLASS, NOT_APPLICABLE, OUT_OF_CLASS,
                                     PI_MODULAR, SELF_DUAL, LatticeError, VectorTypeLabel,
                                     b_series, c_n_constant, component_counts, d0_local,
                                     degree_decomposition_check, f_series, hyperbolic_pair,
                                     lattice_model, lattice_volume, norm_class_of,
                                     norm_class_representative, orbit_count_bruteforce,
                                     orbit_count_closed, orbit_model, orbit_types_bruteforce,
                                     orbit_types_closed, residue_ring, vector_type, volume_ratio)
from unitary_heights.numberfield import INERT, RAMIFIED, SPLIT, LocalPlaceData
from unitary_heights.symbolic_values import SymbolicValue, Surd
from unitary_heights.whittaker_local import s_term_closed


def log(m):
    return SymbolicValue.log_of(m)


def place(N, kind, e=0):
    return LocalPlaceData(N, kind, e)


class TestResidueRing:
    def test_class_count_p_odd(self):
        ring = residue_ring(3, 3)
        # zero, then (valuation, square class) for v = 0, 1, 2
        assert ring.n_classes == 1 + 3 * 2

    def test_hyperbolic_counts_exact(self):
        # #{(x, y) mod p^k : xy = a} for v(a) = 0 is phi(p^k)
        counts = component_counts(3, 3, hyperbolic_pair())
        ring = residue_ring(3, 3)
        assert counts[ring.class_of(1)] == 18

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_counts_total(self, p):
        counts = component_counts(p, 3, hyperbolic_pair())
        ring = residue_ring(p, 3)
        # counts are per value t; weighting by class sizes recovers all p^6 pairs
        assert sum(c * int(s) for c, s in zip(counts, ring.class_sizes)) == p ** 6


class TestClosedCounts:
    def test_split(self):
        assert orbit_count_closed(place(3, SPLIT), 2, 2) == 6

    def test_inert(self):
        assert orbit_count_closed(place(3, INERT), 2, 4) == 3

    def test_ramified_even_dual_in_class(self):
        assert orbit_count_closed(place(3, RAMIFIED), 2, 1, IN_CLASS, dual=True) == 3

    def test_negative_r(self):
        with pytest.raises(LatticeError):
            orbit_count_closed(place(3, SPLIT), 1, -1)


class TestBruteforceCounts:
    def test_split(self):
        model = orbit_model(place(2, SPLIT), 1, False, 1, M=3)
        assert orbit_count_bruteforce(model, 1, 2) == 3

    def test_inert(self):
        model = orbit_model(place(3, INERT), 1, False, 2, M=4)
        assert orbit_count_bruteforce(model, 2, 9) == 2

    def test_ramified_pi_modular(self):
        model = lattice_model(place(3, RAMIFIED), 1, PI_MODULAR, M=3)
        assert orbit_count_bruteforce(model, 1, 3) == 1

    @pytest.mark.parametrize("cls", [IN_CLASS, OUT_OF_CLASS])
    @pytest.mark.parametrize("dual", [False, True])
    def test_ramified_even_types(self, cls, dual):
        pl = place(5, RAMIFIED)
        for r in range(3):
            model = orbit_model(pl, 2, dual, r)
            a = norm_class_representative(pl, 2, r, cls)
            assert norm_class_of(pl, 2, a) == cls
            assert orbit_types_bruteforce(model, r, a) == set(orbit_types_closed(pl, 2, r, cls, dual))


class TestVectorTypes:
    def test_split_representative(self):
        m = lattice_model(place(3, SPLIT), 1, SELF_DUAL, M=5)
        # ((1, a), (0, 1)) with v(a) = 2
        assert vector_type(m, (1, 9, 0, 1)) == VectorTypeLabel(SPLIT, (0, 0))
        assert vector_type(m, (3, 3, 0, 1)) == VectorTypeLabel(SPLIT, (1, 0))

    def test_inert_primitive_and_divisible(self):
        m = lattice_model(place(3, INERT), 1, SELF_DUAL, M=5)
        assert vector_type(m, (1, 0, 1, 8)) == VectorTypeLabel(INERT, 2)    # v(q) = 2, primitive
        assert vector_type(m, (3, 0, 0, 0)) == VectorTypeLabel(INERT, 0)    # in p * Lambda

    def test_ramified_type_zero(self):
        m = lattice_model(place(3, RAMIFIED), 1, PI_MODULAR, M=5)
        assert vector_type(m, (0, 0, 1, 1)) == VectorTypeLabel(RAMIFIED, 0)


class TestVolumes:
    def test_unramified(self):
        assert lattice_volume(lattice_model(place(3, INERT), 2, SELF_DUAL)) == Surd(1)

    def test_ramified_odd(self):
        m = lattice_model(place(3, RAMIFIED), 1, PI_MODULAR)
        assert lattice_volume(m) == Surd(Fraction(1, 9))

    def test_ramified_even(self):
        m = lattice_model(place(3, RAMIFIED), 2, ALMOST_PI_MODULAR)
        assert lattice_volume(m) == Surd.power(3, -5)

    def test_volume_matches_gram(self):
        for kind, n in ((PI_MODULAR, 3), (ALMOST_PI_MODULAR, 2), (SELF_DUAL, 2)):
            m = lattice_model(place(5, RAMIFIED), n, kind)
            assert m.volume() == lattice_volume(m)

    def test_ratio_split_n1(self):
        pl = place(3, SPLIT, 1)
        v = volume_ratio(pl, 1, VectorTypeLabel(SPLIT, (0, 0)), 2)
        assert v == Surd.power(3, -3) * Fraction(8, 9)

    def test_ratio_inert_base(self):
        for n in (1, 2):
            pl = place(3, INERT, 1)
            v = volume_ratio(pl, n, VectorTypeLabel(INERT, 0), 2)
            assert v == Surd.power(3, -(2 * n + 1)) * (1 + (-1) ** n * Fraction(1, 3 ** (n + 1)))

    def test_ratio_ramified_odd(self):
        v = volume_ratio(place(3, RAMIFIED), 3, VectorTypeLabel(RAMIFIED, 2), 2)
        assert v == Surd((1 - Fraction(1, 81)) * 3 ** 4)

    def test_parity_enforced(self):
        with pytest.raises(LatticeError):
            lattice_model(place(3, RAMIFIED), 2, PI_MODULAR)
        with pytest.raises(LatticeError):
            lattice_model(place(2, RAMIFIED), 1, PI_MODULAR)


class TestDiscrepancySeries:
    def test_d0_examples(self):
        pl = place(2, SPLIT)
        assert d0_local(pl, VectorTypeLabel(SPLIT, (1, 1)), 2).is_zero()
        assert d0_local(pl, VectorTypeLabel(SPLIT, (0, 0)), 2) == log(2) * 4
        assert d0_local(place(3, INERT), VectorTypeLabel(INERT, 0), 2).is_zero()

    def test_split_f(self):
        pl = place(2, SPLIT)
        assert f_series(pl, 1, 1) == log(2) * Fraction(3, 8)
        assert f_series(pl, 2, 0).is_zero()

    def test_inert_f_and_b(self):
        pl = place(2, INERT)
        assert b_series(pl, 1, 1) == log(2) * Fraction(3, 4)
        assert f_series(pl, 1, 1) == s_term_closed(pl, 1, 1) * 2 + b_series(pl, 1, 1)
        assert b_series(pl, 1, 2) == log(2) * Fraction(9, 8)
        assert b_series(pl, 3, 0).is_zero()

    def test_split_has_no_b(self):
        with pytest.raises(LatticeError):
            b_series(place(3, SPLIT), 1, 1)

    @pytest.mark.parametrize("N", [3, 5, 7, 9])
    @pytest.mark.parametrize("n", [2, 4])
    def test_ramified_even_pairing(self, N, n):
        pl = place(N, RAMIFIED)
        for r in range(6):
            assert (b_series(pl, n, r, IN_CLASS) + b_series(pl, n, r, OUT_OF_CLASS)).is_zero()
        assert c_n_constant(N, n) == Fraction(-2, N ** n)

    @pytest.mark.parametrize("N", [3, 5])
    def test_ramified_odd_identity(self, N):
        pl = place(N, RAMIFIED)
        for r in range(5):
            for dual, kind in ((True, "dual"), (False, "standard")):
                f = f_series(pl, 3, r, NOT_APPLICABLE, dual)
                S = s_term_closed(pl, 3, r, NOT_APPLICABLE, kind)
                assert f - S * 2 == b_series(pl, 3, r, NOT_APPLICABLE, dual)


class TestDegreeDecompositions:
    def test_examples(self):
        assert degree_decomposition_check(SPLIT, 3, 1)
        assert degree_decomposition_check(INERT, 2, 3)
        assert degree_decomposition_check(RAMIFIED, 5, 4)

    @pytest.mark.parametrize("kind", [SPLIT, INERT, RAMIFIED])
    def test_range(self, kind):
        assert all(degree_decomposition_check(kind, N, r) for N in (2, 3, 4, 5, 7) for r in range(11))
