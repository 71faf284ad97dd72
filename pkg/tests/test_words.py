import pytest
from hypothesis import given
from hypothesis import strategies as st

from starcodes.words import (
    BinaryWord,
    Isometry,
    Permutation,
    StarredWord,
    all_starred_words,
    apply_isometry,
    ball,
    bits_to_str,
    distance,
    even_part,
    odd_part,
    star_from_pair,
    str_to_bits,
)

N = 8


def starred(n=N):
    return st.builds(
        lambda s, r: StarredWord.from_values(s, r, n),
        st.integers(0, n - 1), st.integers(0, (1 << n) - 1),
    )


def isometries(n=N):
    return st.builds(
        lambda p, s: Isometry(Permutation(tuple(p)), s),
        st.permutations(range(n)), st.integers(0, (1 << n) - 1),
    )


def char_distance(a: str, b: str) -> int:
    return sum(x != y for x, y in zip(a, b))


def test_string_round_trip_puts_coordinate_one_first():
    assert bits_to_str(1, 4) == "1000"
    assert str_to_bits("0001") == 8
    assert StarredWord.parse("1*01").star == 1
    assert str(StarredWord.parse("01*0")) == "01*0"


def test_weight_and_binary_distance():
    a, b = BinaryWord.parse("1100"), BinaryWord.parse("1010")
    assert a.weight == 2
    assert distance(a, b) == 2


def test_starred_members():
    w = StarredWord.parse("1*01")
    assert str(even_part(w)) == "1001"
    assert str(odd_part(w)) == "1101"
    assert star_from_pair(BinaryWord.parse("1101"), BinaryWord.parse("1001")) == w


def test_star_from_pair_rejects_far_pair():
    with pytest.raises(ValueError):
        star_from_pair(BinaryWord.parse("1100"), BinaryWord.parse("0000"))


def test_mixed_distance_counts_star_against_any_bit():
    # * differs from both 0 and 1
    assert distance(StarredWord.parse("*000"), BinaryWord.parse("0000")) == 1
    assert distance(StarredWord.parse("*000"), BinaryWord.parse("1000")) == 1


@given(starred(), starred())
def test_starred_distance_matches_character_count(a, b):
    assert distance(a, b) == char_distance(str(a), str(b))


@given(starred(), starred(), starred())
def test_triangle_inequality(a, b, c):
    assert distance(a, c) <= distance(a, b) + distance(b, c)


@given(isometries(), starred(), starred())
def test_isometries_preserve_starred_distance(g, a, b):
    assert distance(apply_isometry(g, a), apply_isometry(g, b)) == distance(a, b)


@given(isometries(), isometries(), starred())
def test_isometry_composition_and_inverse(g, h, w):
    assert apply_isometry(g * h, w) == apply_isometry(g, apply_isometry(h, w))
    assert apply_isometry(g.inverse(), apply_isometry(g, w)) == w


@given(isometries(), starred())
def test_isometry_on_starred_word_maps_members(g, w):
    image = apply_isometry(g, w)
    members = {g.apply_bits(w.even), g.apply_bits(w.odd)}
    assert members == {image.even, image.odd}


def test_permutation_cycle_notation_is_one_based():
    p = Permutation((1, 2, 0, 3))
    assert str(p) == "(1 2 3)"
    assert (p * p.inverse()).is_identity()


def test_ball_sizes():
    assert len(ball(BinaryWord(0, 8), 1)) == 9
    assert len(ball(BinaryWord(0, 8), 2)) == 37


def test_starred_space_size():
    assert len(set(all_starred_words(6))) == 6 * 2 ** 5


def test_even_member_must_be_even():
    with pytest.raises(ValueError):
        StarredWord(0, 0b10, 4)
