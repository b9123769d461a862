import random

import pytest
import sympy

from powerpres.constructions import a5, bp_presentation, sl25
from powerpres.homology import abelianization_invariants, is_perfect, smith_normal_form
from powerpres.presentations import (
    Presentation,
    parse_presentation,
    tietze_add_generator,
    tietze_remove_generator,
)


def test_diagonal_example():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]


def test_zero_matrix():
    assert smith_normal_form([[0, 0], [0, 0]]) == []
    assert smith_normal_form([]) == []


def test_divisibility_chain_and_determinant():
    rng = random.Random(7)
    checked = 0
    for _ in range(200):
        M = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
        d = smith_normal_form(M)
        assert all(b % a == 0 for a, b in zip(d, d[1:]))
        det = sympy.Matrix(M).det()
        if det != 0:
            checked += 1
            prod = 1
            for x in d:
                prod *= x
            assert len(d) == 6
            assert prod == abs(det)
    assert checked > 100


def test_rank_matches_sympy_on_rectangular():
    rng = random.Random(11)
    for _ in range(50):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.choice([0, 0, 1, -1, 2, 3, -4]) for _ in range(c)] for _ in range(r)]
        assert len(smith_normal_form(M)) == sympy.Matrix(M).rank()


def test_invariance_under_permutation_and_sign():
    rng = random.Random(3)
    for _ in range(50):
        M = [[rng.randint(-6, 6) for _ in range(5)] for _ in range(4)]
        d = smith_normal_form(M)
        rows = [list(r) for r in M]
        rng.shuffle(rows)
        perm = list(range(5))
        rng.shuffle(perm)
        N = [[(-1 if i % 2 else 1) * row[j] for j in perm] for i, row in enumerate(rows)]
        assert smith_normal_form(N) == d


def test_big_entries_do_not_overflow():
    big = 10**30
    assert smith_normal_form([[big, 0], [0, big * 3]]) == [big, 3 * big]


def test_free_abelian():
    ab = abelianization_invariants(parse_presentation("gens: a b\nrels: [a,b]"))
    assert ab.free_rank == 2 and ab.torsion == ()


def test_cyclic_torsion():
    ab = abelianization_invariants(parse_presentation("gens: a b\nrels: a^4, b^6, [a,b]"))
    assert ab.free_rank == 0 and ab.torsion == (2, 12)


def test_no_relators():
    ab = abelianization_invariants(Presentation.create(["a"], []))
    assert ab.free_rank == 1 and not ab.trivial


@pytest.mark.parametrize("p", range(1, 8))
def test_bp_is_perfect(p):
    assert is_perfect(bp_presentation(p)[0])


def test_fixtures_are_perfect():
    assert is_perfect(a5().presentation)
    assert is_perfect(sl25().presentation)


def test_invariant_under_tietze_moves():
    P = parse_presentation("gens: a b\nrels: a^4, b^6 a^2")
    before = abelianization_invariants(P)
    Q = tietze_add_generator(P, "c", P.word("a b^2"))
    assert abelianization_invariants(Q) == before
    R = tietze_remove_generator(Q, "c", Q.word("a b^2"))
    assert abelianization_invariants(R) == before
