import numpy as np
import pytest

from src.errors import (
    BadShapeError,
    ExponentOutOfRangeError,
    HadamardError,
    NotEquivalentError,
    NotUnitaryError,
    SearchSpaceTooLargeError,
    UnsupportedError,
)
from src.hadamard.butson import (
    ButsonMatrix,
    EquivalenceWitness,
    apply_equivalence,
    are_equivalent,
    dephase,
    fourier_exponents,
    hadamard_from_rows,
    is_dephased,
    random_witness,
    representatives,
    sylvester_exponents,
    verify_butson,
)


class TestVerifyButson:

    def test_binary_order_four(self):
        H = hadamard_from_rows(['0000', '0101', '0011', '0110'], 2)
        assert isinstance(H, ButsonMatrix)
        assert H.size == 4

    def test_quaternary_representatives(self):
        hadamard_from_rows(['0000', '0202', '0022', '0220'], 4)
        hadamard_from_rows(['0000', '0123', '0202', '0321'], 4)

    def test_duplicate_row_reports_first_pair(self):
        with pytest.raises(NotUnitaryError) as excinfo:
            hadamard_from_rows(['0000', '0000', '0011', '0110'], 2)
        assert excinfo.value.rows == (0, 1)

    def test_non_orthogonal_quaternary(self):
        with pytest.raises(NotUnitaryError):
            verify_butson([[0, 1], [1, 1]], 4)

    def test_bad_shapes(self):
        with pytest.raises(BadShapeError):
            verify_butson([[0, 0, 0], [0, 1, 1]], 2)
        with pytest.raises(BadShapeError):
            verify_butson([], 2)
        with pytest.raises(BadShapeError):
            verify_butson([[0, 0], [0]], 2)

    def test_exponent_range(self):
        with pytest.raises(ExponentOutOfRangeError):
            verify_butson([[0, 0], [0, 2]], 2)
        with pytest.raises(ExponentOutOfRangeError):
            verify_butson([[0, 0], [0, -1]], 2)

    def test_fractional_exponents_rejected(self):
        with pytest.raises(ExponentOutOfRangeError):
            verify_butson([[0, 0], [0, 1.9]], 2)
        with pytest.raises(ExponentOutOfRangeError):
            verify_butson(np.array([[0.0, 0.5], [0.0, 1.0]]), 2)

    def test_integral_floats_accepted(self):
        H = verify_butson([[0.0, 0.0], [0.0, 1.0]], 2)
        assert H.exps == ((0, 0), (0, 1))

    def test_non_numeric_entries(self):
        with pytest.raises(BadShapeError):
            verify_butson([['0', '0'], ['0', '1']], 2)
        with pytest.raises(BadShapeError):
            verify_butson([[False, False], [False, True]], 2)

    def test_error_is_value_error(self):
        with pytest.raises(ValueError):
            verify_butson([[0, 0], [0, 0]], 2)

    def test_transpose_is_butson(self):
        H = hadamard_from_rows(['0000', '0123', '0202', '0321'], 4)
        assert H.transpose().exps == tuple(zip(*H.exps))

    def test_odd_alphabet_fourier(self):
        verify_butson(fourier_exponents(3), 3)
        verify_butson(fourier_exponents(6), 6)


class TestRepresentatives:

    def test_binary_four(self):
        reps = representatives(2, 4)
        assert len(reps) == 1
        assert reps[0].exps == ((0, 0, 0, 0), (0, 1, 0, 1), (0, 0, 1, 1), (0, 1, 1, 0))

    def test_quaternary_four_has_two_classes(self):
        reps = representatives(4, 4)
        assert [r.exps for r in reps] == [
            ((0, 0, 0, 0), (0, 2, 0, 2), (0, 0, 2, 2), (0, 2, 2, 0)),
            ((0, 0, 0, 0), (0, 1, 2, 3), (0, 2, 0, 2), (0, 3, 2, 1)),
        ]

    def test_all_dephased(self):
        for q, N in [(2, 2), (4, 2), (8, 4), (3, 3), (6, 3)]:
            assert all(is_dephased(H) for H in representatives(q, N))

    def test_unsupported(self):
        with pytest.raises(UnsupportedError):
            representatives(3, 4)
        with pytest.raises(UnsupportedError):
            representatives(2, 3)
        with pytest.raises(UnsupportedError):
            representatives(1, 2)

    def test_sylvester_pattern(self):
        assert sylvester_exponents(2).tolist() == [[0, 0], [0, 1]]
        with pytest.raises(UnsupportedError):
            sylvester_exponents(6)


class TestEquivalence:

    def test_apply_equivalence_formula(self):
        H = hadamard_from_rows(['0000', '0123', '0202', '0321'], 4)
        witness = EquivalenceWitness(
            row_phases=(1, 0, 2, 3),
            col_phases=(0, 3, 1, 2),
            row_perm=(2, 0, 3, 1),
            col_perm=(1, 3, 0, 2),
        )
        result = apply_equivalence(H, witness).array
        source = H.array
        for i in range(4):
            for j in range(4):
                expected = (witness.row_phases[i] + source[witness.row_perm[i], witness.col_perm[j]]
                            + witness.col_phases[j]) % 4
                assert result[i, j] == expected

    def test_identity_witness(self):
        H = representatives(4, 4)[1]
        assert apply_equivalence(H, EquivalenceWitness.identity(4)) == H

    def test_invalid_witness(self):
        H = representatives(2, 2)[0]
        with pytest.raises(HadamardError):
            apply_equivalence(H, EquivalenceWitness((0, 0), (0, 0), (0, 0), (0, 1)))
        with pytest.raises(HadamardError):
            apply_equivalence(H, EquivalenceWitness((0, 2), (0, 0), (0, 1), (0, 1)))

    def test_identical_matrices_give_identity(self):
        H = representatives(4, 4)[0]
        witness = are_equivalent(H, H)
        assert witness == EquivalenceWitness.identity(4)

    def test_quaternary_classes_not_equivalent(self):
        rep1, rep2 = representatives(4, 4)
        with pytest.raises(NotEquivalentError) as excinfo:
            are_equivalent(rep1, rep2)
        assert excinfo.value.candidates_checked == 24 * 24 * 4 ** 4

    def test_random_transforms_are_found(self, rng):
        for _ in range(20):
            q = int(rng.choice([2, 4]))
            N = int(rng.choice([2, 4]))
            reps = representatives(q, N)
            H = reps[int(rng.integers(len(reps)))]
            target = apply_equivalence(H, random_witness(N, q, rng))
            witness = are_equivalent(target, H)
            assert apply_equivalence(H, witness) == target

    def test_search_limits(self):
        H = verify_butson(fourier_exponents(6), 6)
        with pytest.raises(SearchSpaceTooLargeError):
            are_equivalent(H, H)

    def test_mismatched_parameters(self):
        with pytest.raises(HadamardError):
            are_equivalent(representatives(2, 2)[0], representatives(4, 2)[0])

    def test_dephase(self, rng):
        H = apply_equivalence(representatives(4, 4)[1], random_witness(4, 4, rng))
        dephased, witness = dephase(H)
        assert is_dephased(dephased)
        assert apply_equivalence(H, witness) == dephased
        assert np.all(dephased.array[0] == 0)

    def test_dephase_is_idempotent(self, rng):
        for _ in range(10):
            H = apply_equivalence(representatives(4, 4)[int(rng.integers(2))], random_witness(4, 4, rng))
            once, _ = dephase(H)
            twice, witness = dephase(once)
            assert twice == once
            assert witness == EquivalenceWitness.identity(4)

    def test_equivalence_is_reflexive_and_symmetric(self, rng):
        for _ in range(10):
            q = int(rng.choice([2, 4]))
            N = int(rng.choice([2, 4]))
            reps = representatives(q, N)
            H1 = apply_equivalence(reps[int(rng.integers(len(reps)))], random_witness(N, q, rng))
            H2 = apply_equivalence(H1, random_witness(N, q, rng))

            assert apply_equivalence(H1, are_equivalent(H1, H1)) == H1
            assert apply_equivalence(H2, are_equivalent(H1, H2)) == H1
            assert apply_equivalence(H1, are_equivalent(H2, H1)) == H2

    def test_binary_representative_and_transpose(self):
        H = representatives(2, 4)[0]
        T = H.transpose()
        witness = are_equivalent(H, T)
        assert apply_equivalence(T, witness) == H
        assert apply_equivalence(H, are_equivalent(T, H)) == T

    def test_witness_serialization(self):
        witness = EquivalenceWitness((1, 0), (0, 1), (1, 0), (0, 1))
        assert witness.to_dict() == {'D1': [1, 0], 'P1': [1, 0], 'P2': [0, 1], 'D2': [0, 1]}
