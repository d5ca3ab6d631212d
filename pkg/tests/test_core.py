from collections import Counter
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from shapeavoid.core import (
    Partition,
    Permutation,
    RskPair,
    StandardTableau,
    SubsequenceWitness,
    conjugate,
    contains,
    dominates,
    longest_decreasing_positions,
    longest_increasing_positions,
    pattern_of,
    rsk,
    rsk_inverse,
    shape_of,
)
from shapeavoid.errors import ValidationError

from oracles import all_partitions, lds_dp, lis_dp, shape_by_greene

P = Partition


def words(n_max):
    for n in range(1, n_max + 1):
        yield from permutations(range(1, n + 1))


@st.composite
def perms(draw, max_n=12):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return Permutation(draw(st.permutations(range(1, n + 1))))


class TestPartition:
    def test_normalizes_trailing_zeros(self):
        assert P((3, 1, 0, 0)) == P((3, 1))
        assert P(()).size() == 0

    @pytest.mark.parametrize("bad", [(1, 2), (2, -1, 0), (0, 1)])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValidationError):
            P(bad)

    def test_parse(self):
        assert Partition.parse("4,2,1,1") == P((4, 2, 1, 1))
        assert Partition.parse("") == P(())
        with pytest.raises(ValidationError):
            Partition.parse("2,x")

    @pytest.mark.parametrize(
        "lam, conj",
        [((3,), (1, 1, 1)), ((2, 2), (2, 2)), ((4, 2, 1, 1), (4, 2, 1, 1)), ((), ())],
    )
    def test_conjugate(self, lam, conj):
        assert conjugate(P(lam)) == P(conj)

    def test_conjugate_involution(self):
        for n in range(11):
            for parts in all_partitions(n):
                assert conjugate(conjugate(P(parts))) == P(parts)

    @pytest.mark.parametrize(
        "mu, lam, expected",
        [((2, 2), (3, 1, 1), False), ((4, 1, 1, 1), (4, 2, 1, 1), True), ((), (5, 2), True),
         ((1, 1, 1), (3,), False)],
    )
    def test_contains(self, mu, lam, expected):
        assert contains(P(mu), P(lam)) is expected

    @pytest.mark.parametrize(
        "lam, mu, expected",
        [((3, 1), (2, 2), True), ((2, 2), (3, 1), False), ((3, 2, 1), (3, 2, 1), True),
         ((3,), (1, 1, 1), True), ((2,), (1, 1, 1), False)],
    )
    def test_dominates(self, lam, mu, expected):
        assert dominates(P(lam), P(mu)) is expected

    def test_dominance_reverses_under_conjugation(self):
        for n in range(1, 11):
            parts = [P(p) for p in all_partitions(n)]
            for lam in parts:
                for mu in parts:
                    forward = dominates(lam, mu)
                    assert forward == dominates(conjugate(mu), conjugate(lam))
                    if forward and dominates(conjugate(lam), conjugate(mu)):
                        # mu <= lam and mu' <= lam' force equality
                        assert lam == mu

    def test_containment_implies_dominance(self):
        parts = [P(p) for n in range(11) for p in all_partitions(n)]
        for lam in parts:
            for mu in parts:
                if contains(mu, lam):
                    assert dominates(lam, mu)


class TestPermutation:
    def test_validation(self):
        with pytest.raises(ValidationError):
            Permutation((1, 1, 2))
        with pytest.raises(ValidationError):
            Permutation((0, 1))

    def test_parse(self):
        assert Permutation.parse("65127843").word == (6, 5, 1, 2, 7, 8, 4, 3)
        assert Permutation.parse("10,1,2,3,4,5,6,7,8,9")[0] == 10
        with pytest.raises(ValidationError):
            Permutation.parse("1234567890")


class TestRsk:
    @pytest.mark.parametrize(
        "word, shape",
        [((6, 5, 1, 2, 7, 8, 4, 3), (4, 2, 1, 1)), ((2, 5, 3, 1, 4), (3, 1, 1)),
         ((3, 1, 4, 2), (2, 2))],
    )
    def test_shapes_of_examples(self, word, shape):
        assert shape_of(Permutation(word)) == P(shape)
        pair = rsk(Permutation(word))
        assert pair.p.shape == pair.q.shape == P(shape)

    def test_identity_is_one_row(self):
        pair = rsk(Permutation.identity(5))
        assert pair.p.rows == pair.q.rows == ((1, 2, 3, 4, 5),)

    def test_inverse_of_row_and_column(self):
        row = StandardTableau([[1, 2, 3, 4]])
        col = StandardTableau([[1], [2], [3], [4]])
        assert rsk_inverse(RskPair(row, row)) == Permutation.identity(4)
        assert rsk_inverse(RskPair(col, col)) == Permutation((4, 3, 2, 1))

    def test_roundtrip_example(self):
        p = Permutation((6, 5, 1, 2, 7, 8, 4, 3))
        assert rsk_inverse(rsk(p)) == p

    def test_bijective_up_to_seven(self):
        for n in range(1, 8):
            images = set()
            for w in permutations(range(1, n + 1)):
                pair = rsk(Permutation(w))
                assert rsk_inverse(pair).word == w
                images.add(pair)
            assert len(images) == len(set(permutations(range(n))))

    def test_malformed_pairs_rejected(self):
        with pytest.raises(ValidationError):
            RskPair(StandardTableau([[1, 2]]), StandardTableau([[1], [2]]))
        with pytest.raises(ValidationError):
            StandardTableau([[1, 3], [4, 2]])
        with pytest.raises(ValidationError):
            StandardTableau([[2, 1]])
        with pytest.raises(ValidationError):
            rsk_inverse(((1,), (1,)))

    def test_schensted_against_dynamic_program(self):
        for w in words(7):
            shape = shape_of(w)
            assert shape[0] == lis_dp(w)
            assert conjugate(shape)[0] == lds_dp(w)

    def test_reversal_conjugates(self):
        for w in words(7):
            assert shape_of(w[::-1]) == conjugate(shape_of(w))

    def test_shape_matches_greene_by_subsets(self):
        for w in words(6):
            assert shape_of(w).parts == shape_by_greene(w)

    @given(perms())
    def test_random_roundtrip_and_lis(self, perm):
        assert rsk_inverse(rsk(perm)) == perm
        inc = longest_increasing_positions(perm.word)
        dec = longest_decreasing_positions(perm.word)
        assert len(inc) == lis_dp(perm.word) == shape_of(perm)[0]
        assert len(dec) == lds_dp(perm.word)
        assert all(perm[a] < perm[b] for a, b in zip(inc, inc[1:]))
        assert all(perm[a] > perm[b] for a, b in zip(dec, dec[1:]))


class TestPatternOf:
    def test_example(self):
        # values 2,5,1,4 of 2,5,3,1,4 sit at positions 0,1,3,4
        pattern = pattern_of(Permutation((2, 5, 3, 1, 4)), (0, 1, 3, 4))
        assert pattern.word == (2, 4, 1, 3)
        assert shape_of(pattern) == P((2, 2))

    def test_full_and_single(self):
        p = Permutation((3, 1, 2))
        assert pattern_of(p, (0, 1, 2)) == p
        assert pattern_of(p, (1,)).word == (1,)

    @pytest.mark.parametrize("positions", [(2, 1), (0, 3), (1, 1), (-1,)])
    def test_bad_positions(self, positions):
        with pytest.raises(ValidationError):
            pattern_of(Permutation((3, 1, 2)), positions)

    def test_witness_certifies(self):
        w = SubsequenceWitness.certify((6, 5, 1, 2, 7, 8, 4, 3), (2, 3, 4, 5))
        assert w.shape == P((4,))
        assert w.values((6, 5, 1, 2, 7, 8, 4, 3)) == (1, 2, 7, 8)


def test_shape_histogram_small():
    # each shape occurs (number of standard tableaux)^2 times; n=4: 1,9,4,9,1
    hist = Counter(shape_of(w).parts for w in permutations(range(1, 5)))
    assert hist == {(4,): 1, (3, 1): 9, (2, 2): 4, (2, 1, 1): 9, (1, 1, 1, 1): 1}
