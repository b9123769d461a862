import pytest

from powerpres.constructions import a5, sl25, square_presentation, uce_presentation
from powerpres.enumeration import Completed, Overflow, todd_coxeter
from powerpres.errors import MalformedInputError
from powerpres.permgrp import schreier_sims
from powerpres.presentations import Presentation, naive_product, parse_presentation
from powerpres.words import Word

STRATEGIES = ("hlt", "felsch")


def small_suite():
    A = a5().presentation
    S = sl25().presentation
    return {
        "cyclic5": (Presentation.create(["a"], ["a^5"]), 5),
        "klein": (parse_presentation("gens: a b\nrels: a^2, b^2, (a b)^2"), 4),
        "s3": (parse_presentation("gens: a b\nrels: a^3, b^2, (a b)^2"), 6),
        "q8": (parse_presentation("gens: i j\nrels: i^4, i^2 j^-2, j^-1 i j i"), 8),
        "a5": (A, 60),
        "sl25": (S, 120),
        "uce_a5": (uce_presentation(A, a5().witnesses), 120),
        "uce_sl25": (uce_presentation(S, sl25().witnesses), 120),
        "a5xc2": (naive_product(A, Presentation.create(["c"], ["c^2"])), 120),
        "trivial": (parse_presentation("gens: a b\nrels: a, b"), 1),
    }


@pytest.mark.parametrize("name", list(small_suite()))
@pytest.mark.parametrize("strategy", STRATEGIES)
def test_known_orders(name, strategy):
    P, expected = small_suite()[name]
    res = todd_coxeter(P, strategy=strategy)
    assert isinstance(res, Completed)
    assert res.index == expected


@pytest.mark.parametrize("F", [a5(), sl25()], ids=["a5", "sl25"])
def test_agrees_with_schreier_sims(F):
    assert todd_coxeter(F.presentation).index == schreier_sims(list(F.hom.images)).order()


def test_subgroup_index():
    P = sl25().presentation
    s = P.gen("s")
    assert todd_coxeter(P, [s]).index == 20
    assert todd_coxeter(P, [s], strategy="felsch").index == 20
    assert todd_coxeter(P, [P.gen("t")]).index == 12


def test_square_of_sl25():
    F = sl25()
    Q, _, _ = square_presentation(F.presentation, F.witnesses)
    assert todd_coxeter(Q).index == 14400


def test_overflow_is_reported():
    F = sl25()
    res = todd_coxeter(F.presentation, max_cosets=50)
    assert isinstance(res, Overflow)
    assert not res
    assert res.live <= 50


def test_lookahead_rescues_tight_limit():
    F = a5()
    U = uce_presentation(F.presentation, F.witnesses)
    loose = todd_coxeter(U)
    assert loose.max_live > 800
    tight = todd_coxeter(U, max_cosets=200)
    assert isinstance(tight, Completed) and tight.index == 120


def test_monotone_limits():
    F = a5()
    base = todd_coxeter(F.presentation, max_cosets=70)
    assert base.index == 60
    for limit in (80, 200, 10_000):
        assert todd_coxeter(F.presentation, max_cosets=limit).index == 60


def test_deterministic():
    F = sl25()
    assert todd_coxeter(F.presentation) == todd_coxeter(F.presentation)


def test_infinite_group_overflows():
    P = parse_presentation("gens: a b\nrels: [a,b]")
    res = todd_coxeter(P, max_cosets=500)
    assert isinstance(res, Overflow)


def test_bad_arguments():
    P = Presentation.create(["a"], ["a^2"])
    with pytest.raises(MalformedInputError):
        todd_coxeter(P, strategy="nope")
    with pytest.raises(MalformedInputError):
        todd_coxeter(P, max_cosets=0)
    with pytest.raises(MalformedInputError):
        todd_coxeter(P, [Word.gen(3)])


def test_empty_relators_are_ignored():
    P = Presentation(("a",), (Word(), Word.gen(0, 3)))
    assert todd_coxeter(P).index == 3
