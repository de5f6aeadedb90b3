import numpy as np
import pytest

from src.algebra.cyclotomic import CyclotomicInt, from_root
from src.analysis.sequence_analyzer import (
    GeneralizedBooleanFunction,
    GolaySet,
    QarySequence,
    anf,
    autocorrelation,
    binary_golay_pair_members,
    cross_correlation,
    degree,
    extract_sets,
    golay_check,
    is_complementary_by_shifts,
    paraunitary_check,
    parse_anf,
    pmepr,
    pmepr_profile,
    standard_golay_sequences,
)
from src.construction.paraunitary import (
    ConstructionSpec,
    UnitCoeffPolyMatrix,
    construct,
    example8_pair_generator,
    random_construction_spec,
)
from src.errors import (
    AnalysisError,
    DataFormatError,
    InvalidParameterError,
    NotComplementaryError,
)
from src.hadamard.butson import representatives

PAIR = [QarySequence(2, (0, 0, 0, 1)), QarySequence(2, (0, 0, 1, 0))]


def random_sequence(rng, q, length):
    return QarySequence(q, tuple(int(e) for e in rng.integers(0, q, length)))


class TestQarySequence:

    def test_validation(self):
        with pytest.raises(AnalysisError):
            QarySequence(4, ())
        with pytest.raises(AnalysisError):
            QarySequence(4, (0, 4))
        with pytest.raises(AnalysisError):
            QarySequence(1, (0,))

    def test_fractional_exponents_rejected(self):
        with pytest.raises(AnalysisError):
            QarySequence(4, (0, 1.7, 2))
        with pytest.raises(AnalysisError):
            QarySequence(2, (0, True))
        with pytest.raises(AnalysisError):
            QarySequence(4.0, (0, 1))

    def test_integral_values_normalised(self):
        seq = QarySequence(4, (0, 1.0, np.int64(3)))
        assert seq.exps == (0, 1, 3)
        assert all(type(e) is int for e in seq.exps)

    def test_text_format(self):
        seq = QarySequence(4, (0, 1, 2, 3))
        assert seq.to_text() == "q=4 L=4\n0 1 2 3"
        assert QarySequence.from_text(seq.to_text()) == seq

    def test_text_length_mismatch(self):
        with pytest.raises(DataFormatError):
            QarySequence.from_text("q=2 L=3\n0 1")
        with pytest.raises(DataFormatError):
            QarySequence.from_text("0 1 1")


class TestAutocorrelation:

    def test_zero_shift_is_length(self, rng):
        seq = random_sequence(rng, 8, 11)
        assert autocorrelation(seq, 0) == CyclotomicInt.from_integer(11, 8)

    def test_binary_shift_one(self):
        assert autocorrelation(PAIR[0], 1) == CyclotomicInt.from_integer(1, 2)

    def test_last_shift_is_single_term(self, rng):
        seq = random_sequence(rng, 6, 9)
        assert autocorrelation(seq, 8) == from_root((seq.exps[8] - seq.exps[0]) % 6, 6)

    def test_shift_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            autocorrelation(PAIR[0], 4)
        with pytest.raises(InvalidParameterError):
            autocorrelation(PAIR[0], -1)

    def test_cross_correlation_of_self(self, rng):
        seq = random_sequence(rng, 4, 7)
        coeffs = cross_correlation(seq, seq)
        assert len(coeffs) == 13
        assert coeffs[6] == CyclotomicInt.from_integer(7, 4)
        for u in range(1, 7):
            assert coeffs[6 + u] == autocorrelation(seq, u)
            assert coeffs[6 - u] == autocorrelation(seq, u).conjugate()


class TestGolayCheck:

    def test_binary_pair(self):
        golay_set = golay_check(PAIR)
        assert isinstance(golay_set, GolaySet)
        assert (golay_set.N, golay_set.L) == (2, 4)

    def test_all_ones_fails_at_first_shift(self):
        ones = QarySequence(2, (0, 0, 0, 0))
        with pytest.raises(NotComplementaryError) as excinfo:
            golay_check([ones, ones])
        assert excinfo.value.shift == 1
        assert excinfo.value.value == CyclotomicInt.from_integer(6, 2)

    def test_mixed_families(self):
        with pytest.raises(AnalysisError):
            golay_check([QarySequence(2, (0, 0)), QarySequence(2, (0, 0, 1))])
        with pytest.raises(AnalysisError):
            golay_check([QarySequence(2, (0, 0)), QarySequence(4, (0, 1))])
        with pytest.raises(AnalysisError):
            golay_check([])

    def test_length_one_is_trivially_complementary(self):
        assert golay_check([QarySequence(3, (2,))]).L == 1

    def test_agrees_with_shift_sums(self, rng):
        complementary = 0
        for trial in range(500):
            q = int(rng.choice([2, 3, 4, 8]))
            if trial % 3 == 0 and q != 3:
                N = int(rng.choice([2, 4]))
                M = construct(random_construction_spec(q, N, int(rng.integers(0, 3)), rng))
                family = [QarySequence(q, tuple(M.entry(0, j))) for j in range(N)]
                if trial % 2:
                    family[0] = random_sequence(rng, q, M.L)
            else:
                length = int(rng.integers(1, 9))
                family = [random_sequence(rng, q, length) for _ in range(int(rng.integers(1, 5)))]

            by_shifts = is_complementary_by_shifts(family)
            try:
                golay_check(family)
                by_product = True
            except NotComplementaryError:
                by_product = False
            assert by_product == by_shifts
            complementary += by_product
        assert 0 < complementary < 500


class TestExtractSets:

    def test_example7_gives_eight_sets(self, example7_spec):
        sets = extract_sets(construct(example7_spec))
        all_sets = sets['rows'] + sets['columns']
        assert len(all_sets) == 8
        assert all(s.N == 4 and s.L == 16 for s in all_sets)

    def test_butson_rows_are_trivial_sets(self):
        H = representatives(4, 4)[1]
        M = construct(ConstructionSpec(q=4, N=4, n=0, perm=(), hadamards=(H,)))
        sets = extract_sets(M)
        assert len(sets['rows']) == 4 and len(sets['columns']) == 4
        assert all(s.L == 1 for s in sets['rows'])

    def test_example8_first_row(self):
        M = construct(example8_pair_generator(4, 2, (1, 3, 2), (1, 0)))
        assert extract_sets(M)['rows'][0].N == 2


class TestParaunitaryCheck:

    def test_butson_matrix(self):
        H = representatives(8, 4)[1]
        M = construct(ConstructionSpec(q=8, N=4, n=0, perm=(), hadamards=(H,)))
        assert paraunitary_check(M)

    def test_example7(self, example7_spec):
        assert paraunitary_check(construct(example7_spec))

    def test_random_specs(self, rng):
        for _ in range(20):
            spec = random_construction_spec(int(rng.choice([2, 4, 8])), int(rng.choice([2, 4])),
                                            int(rng.integers(0, 3)), rng)
            assert paraunitary_check(construct(spec))

    def test_corrupted_exponent(self, example7_spec):
        coeffs = construct(example7_spec).coeffs.copy()
        coeffs[2, 1, 5] = (coeffs[2, 1, 5] + 1) % 4
        assert not paraunitary_check(UnitCoeffPolyMatrix(q=4, coeffs=coeffs))


class TestPmepr:

    def test_all_ones(self):
        ones = QarySequence(2, (0,) * 4)
        assert abs(pmepr(ones, 16) - 4.0) <= 1e-9
        assert pmepr_profile(ones, 16)[1] == 0
        assert abs(pmepr(QarySequence(2, (0,) * 16), 64) - 16.0) <= 1e-9

    def test_single_element(self):
        assert pmepr(QarySequence(4, (3,)), 64) == 1.0

    def test_pair_members(self):
        for seq in PAIR:
            assert pmepr(seq) <= 2.0 + 1e-9

    def test_oversample_too_small(self):
        with pytest.raises(InvalidParameterError):
            pmepr(PAIR[0], 3)

    def test_monotone_in_oversampling(self, rng):
        for _ in range(20):
            seq = random_sequence(rng, 8, int(rng.integers(2, 33)))
            for K in (4, 8, 16, 32):
                assert pmepr(seq, 2 * K) >= pmepr(seq, K) - 1e-12

    def test_bounded_by_length(self, rng):
        for _ in range(50):
            seq = random_sequence(rng, int(rng.choice([2, 4, 8])), int(rng.integers(1, 40)))
            assert pmepr(seq) <= seq.L + 1e-9

    def test_constructed_sequences_respect_set_size(self, example7_spec):
        M = construct(example7_spec)
        for i in range(4):
            for j in range(4):
                assert pmepr(QarySequence(4, tuple(M.entry(i, j))), 64) <= 4 + 1e-6


class TestAnf:

    def test_constant(self):
        f = anf(QarySequence(4, (3,) * 8))
        assert f.terms == ((0, 3),)
        assert f.to_text() == "+ 3"
        assert degree(f) == 0

    def test_digit_weights(self):
        f = anf(QarySequence(4, (0, 1, 2, 3)))
        assert f == parse_anf("2x_0 + x_1", 4, 2)
        assert f.to_text() == "2*x_0 + x_1"
        assert f.to_text(compact=True) == "2x_0 + x_1"
        assert degree(f) == 1

    def test_zero_function(self):
        f = anf(QarySequence(2, (0, 0)))
        assert f.terms == ()
        assert f.to_text() == "+ 0"

    def test_round_trip(self, rng):
        for _ in range(50):
            v = int(rng.integers(0, 7))
            q = int(rng.choice([2, 3, 4, 8]))
            seq = random_sequence(rng, q, 2 ** v)
            f = anf(seq)
            assert np.array_equal(f.evaluate_all(), seq.array)
            assert all(f.evaluate(m) == seq.exps[m] for m in range(seq.L))
            assert f.degree <= v

    def test_reverse_reading(self, rng):
        seq = random_sequence(rng, 4, 16)
        assert anf(seq, reverse=True) == anf(seq.reversed())

    def test_requires_power_of_two(self):
        with pytest.raises(InvalidParameterError):
            anf(QarySequence(2, (0, 1, 1)))

    def test_serialization_order(self):
        f = parse_anf("x_1*x_2 + 3*x_0 + 1", 4, 3)
        masks = [term['mask'] for term in f.to_dict()['terms']]
        assert masks == sorted(masks)
        assert f.to_text() == "3*x_0 + x_1*x_2 + 1"

    def test_parse_errors(self):
        with pytest.raises(DataFormatError):
            parse_anf("3y_0 + 1", 4)
        with pytest.raises(DataFormatError):
            parse_anf("x_4", 4, 3)

    def test_parse_merges_repeated_terms(self):
        f = parse_anf("3x_0 + x_0 + 2", 4)
        assert f == GeneralizedBooleanFunction(4, 1, ((0, 2),))


class TestExample7Listing:

    @pytest.fixture
    def listing(self, loader):
        return loader.load_anf_listing()

    def test_all_functions_match(self, example7_spec, listing):
        M = construct(example7_spec)
        for entry in listing['functions']:
            r, s = entry['r'], entry['s']
            computed = anf(QarySequence(4, tuple(M.entry(r, s))), reverse=True)
            expected_text = entry.get('corrected', entry['printed'])
            assert computed == parse_anf(expected_text, 4, 4)
            assert computed.to_text(compact=True) == expected_text
            assert computed.degree == 3

    def test_printed_misprint_repeats_neighbour(self, listing):
        by_index = {(e['r'], e['s']): e for e in listing['functions']}
        assert by_index[(2, 0)]['printed'] == by_index[(1, 3)]['printed']
        assert 'corrected' not in by_index[(1, 3)]

    def test_ascending_reading_differs(self, example7_spec, listing):
        M = construct(example7_spec)
        printed = parse_anf(listing['functions'][5]['printed'], 4, 4)
        assert anf(QarySequence(4, tuple(M.entry(1, 1)))) != printed


class TestStandardSequences:

    def test_binary_length_eight_count(self):
        standard = standard_golay_sequences(2, 3)
        assert len(standard) == 48
        assert set(standard) <= set(binary_golay_pair_members(8))

    def test_short_lengths(self):
        assert len(standard_golay_sequences(2, 1)) == 4
        assert len(binary_golay_pair_members(2)) == 4

    def test_quaternary_sequences_have_low_pmepr(self):
        standard = standard_golay_sequences(4, 2)
        assert len(standard) == 4 ** 3
        for exps in standard:
            assert pmepr(QarySequence(4, exps)) <= 2 + 1e-6

    def test_odd_alphabet_rejected(self):
        with pytest.raises(InvalidParameterError):
            standard_golay_sequences(3, 2)

    def test_pair_scan_limits(self):
        with pytest.raises(InvalidParameterError):
            binary_golay_pair_members(11)
