import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerpres.errors import MalformedInputError
from powerpres.words import (
    Word,
    commutator,
    cyclic_conjugates,
    cyclically_reduce,
    exponent_sum_vector,
    free_reduce,
    substitute,
)


def naive_reduce(letters):
    """Repeatedly scan for the leftmost cancelling pair and delete it."""
    seq = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            (a, s), (b, t) = seq[i], seq[i + 1]
            if a == b and s == -t:
                del seq[i : i + 2]
                changed = True
                break
    return tuple(seq)


def random_reduce(letters, rng):
    """Cancel pairs in random order; confluence says the result is the same."""
    seq = list(letters)
    while True:
        spots = [i for i in range(len(seq) - 1) if seq[i][0] == seq[i + 1][0] and seq[i][1] == -seq[i + 1][1]]
        if not spots:
            return tuple(seq)
        i = rng.choice(spots)
        del seq[i : i + 2]


letter = st.tuples(st.integers(0, 2), st.sampled_from((1, -1)))
raw_words = st.lists(letter, max_size=64)
words = raw_words.map(Word)


def test_cancellation_examples():
    assert free_reduce([(0, 1), (0, -1)]) == Word()
    a = Word.gen(0)
    assert free_reduce([(0, 1), (1, 1), (1, -1), (0, 1)]) == a * a


def test_free_reduce_rejects_bad_index():
    with pytest.raises(MalformedInputError):
        free_reduce([(3, 1)], rank=2)
    with pytest.raises(MalformedInputError):
        Word([(-1, 1)])
    with pytest.raises(MalformedInputError):
        Word([(0, 2)])


def test_free_reduce_matches_naive_on_random_words():
    rng = random.Random(1)
    for _ in range(1000):
        n = rng.randint(0, 64)
        letters = [(rng.randrange(3), rng.choice((1, -1))) for _ in range(n)]
        w = free_reduce(letters)
        assert w.letters == naive_reduce(letters)
        assert free_reduce(w.letters) == w
        assert w.letters == random_reduce(letters, rng)


@given(raw_words)
def test_reduced_has_no_cancelling_pair(letters):
    w = free_reduce(letters)
    ints = w.ints
    assert all(ints[i] != -ints[i + 1] for i in range(len(ints) - 1))


def test_substitute_examples():
    x1, x2 = Word.gen(0), Word.gen(1)
    y1, y2 = Word.gen(2), Word.gen(3)
    assert substitute(x1 * x2.inverse(), [y1, y2]) == y1 * y2.inverse()
    assert substitute(x1, [Word()]) == Word()


def test_substitute_unmapped_generator():
    with pytest.raises(MalformedInputError):
        substitute(Word.gen(2), [Word.gen(0)])


@given(words, words, st.lists(words, min_size=3, max_size=3))
def test_substitute_is_a_homomorphism(u, v, images):
    assert substitute(u * v, images) == substitute(u, images) * substitute(v, images)
    assert substitute(u.inverse(), images) == substitute(u, images).inverse()


@given(words, st.lists(words, min_size=3, max_size=3), st.lists(words, min_size=3, max_size=3))
def test_substitute_is_functorial(w, m1, m2):
    composed = [substitute(x, m2) for x in m1]
    assert substitute(w, composed) == substitute(substitute(w, m1), m2)


def test_commutator_convention():
    a, b = Word.gen(0), Word.gen(1)
    assert commutator(a, b).ints == (-1, -2, 1, 2)
    assert commutator(a, a) == Word()


@given(words, words)
def test_commutator_has_zero_exponent_sums(u, v):
    assert exponent_sum_vector(commutator(u, v), 3) == (0, 0, 0)


def test_exponent_sum_examples():
    a, b = Word.gen(0), Word.gen(1)
    assert exponent_sum_vector(a * b * a * b.inverse(), 2) == (2, 0)
    assert exponent_sum_vector(Word(), 3) == (0, 0, 0)
    with pytest.raises(MalformedInputError):
        exponent_sum_vector(Word.gen(4), 2)


@given(words, words)
def test_exponent_sums_add(u, v):
    su, sv = exponent_sum_vector(u, 3), exponent_sum_vector(v, 3)
    assert exponent_sum_vector(u * v, 3) == tuple(x + y for x, y in zip(su, sv))


@given(words, st.integers(-4, 4))
def test_power_agrees_with_repeated_product(w, n):
    expected = Word()
    step = w if n >= 0 else w.inverse()
    for _ in range(abs(n)):
        expected = expected * step
    assert w**n == expected


@settings(max_examples=50)
@given(words)
def test_cyclic_conjugates_are_conjugate(w):
    core = cyclically_reduce(w)
    for c in cyclic_conjugates(w):
        assert len(c) == len(core)
        assert sorted(c.ints) == sorted(core.ints)


def test_words_are_hashable_values():
    a = Word.from_ints([1, 2, -2])
    b = Word.from_ints([1])
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1
    with pytest.raises(MalformedInputError):
        Word.from_ints([0])
