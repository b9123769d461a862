import itertools
import random

import numpy as np
import pytest

from powerpres.constructions import a5, sl25
from powerpres.errors import BudgetExhausted, MalformedInputError, NotAMemberError
from powerpres.permgrp import (
    GroupHom,
    Permutation,
    direct_power_hom,
    embed_factor,
    evaluate_word,
    factor_element,
    group_order,
    schreier_sims,
    shortest_word,
    verify_presentation_hom,
)
from powerpres.words import Word


def closure_size(gens):
    """Brute-force orbit of the identity under right multiplication."""
    n = gens[0].degree
    start = tuple(range(n))
    seen = {start}
    frontier = [start]
    arrays = [g.array for g in gens]
    while frontier:
        nxt = []
        for p in frontier:
            for a in arrays:
                q = tuple(a[list(p)])
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def test_symmetric_group():
    assert group_order([Permutation.from_cycles([(0, 1, 2, 3, 4)]), Permutation.from_cycles([(0, 1)], 5)]) == 120


def test_fixture_orders():
    assert schreier_sims(list(a5().hom.images)).order() == 60
    assert schreier_sims(list(sl25().hom.images)).order() == 120


def test_random_small_groups_against_closure():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(2, 7)
        gens = []
        for _ in range(rng.randint(1, 3)):
            a = list(range(n))
            rng.shuffle(a)
            gens.append(Permutation(a))
        assert schreier_sims(gens).order() == closure_size(gens)


def test_order_invariant_under_generator_order_and_redundancy():
    F = sl25()
    g = list(F.hom.images)
    assert schreier_sims(g[::-1]).order() == 120
    assert schreier_sims(g + [g[0] * g[1], g[1] ** 3]).order() == 120


def test_membership():
    F = a5()
    chain = schreier_sims(list(F.hom.images))
    assert chain.contains(F.hom.images[0] * F.hom.images[1])
    assert not chain.contains(Permutation.from_cycles([(0, 1)], 5))


def test_evaluate_word_basics():
    F = a5()
    h = F.hom
    assert evaluate_word(h, Word()).is_identity()
    w = Word.from_ints([1, -1, 2])
    assert evaluate_word(h, w) == h.images[1]
    u, v = Word.from_ints([1, 2, 2]), Word.from_ints([-2, 1])
    assert evaluate_word(h, u * v) == evaluate_word(h, u) * evaluate_word(h, v)
    with pytest.raises(MalformedInputError):
        evaluate_word(h, Word.gen(5))


def test_fixture_relators_are_identity():
    for F in (a5(), sl25()):
        assert all(evaluate_word(F.hom, r).is_identity() for r in F.presentation.relators)
        for i, c in enumerate(F.witnesses.words):
            assert evaluate_word(F.hom, c) == F.hom.images[i]


def test_verify_report():
    F = a5()
    rep = verify_presentation_hom(F.presentation, F.hom, 60)
    assert rep["ok"] and rep["order"] == 60
    swapped = GroupHom((F.hom.images[1], F.hom.images[0]))
    bad = verify_presentation_hom(F.presentation, swapped, 60)
    assert not bad["relators_trivial"] and not bad["ok"]


def test_direct_power_hom():
    F = a5()
    assert direct_power_hom(F.hom, 1) is F.hom
    h2 = direct_power_hom(F.hom, 2)
    assert h2.degree == 10
    assert schreier_sims(list(h2.images)).order() == 3600
    e = embed_factor(F.hom.images[0], 1, 3)
    assert e.support() <= set(range(5, 10))


def test_large_power_order_is_exact():
    F = sl25()
    h = direct_power_hom(F.hom, 16)
    assert h.degree == 384
    assert schreier_sims(list(h.images)).order() == 120**16


def test_factor_element():
    F = sl25()
    chain = schreier_sims(list(F.hom.images), track_words=True)
    assert factor_element(chain, Permutation.identity(24)) == Word()
    rng = random.Random(2)
    for _ in range(20):
        g = chain.random_element(rng)
        w = factor_element(chain, g)
        assert evaluate_word(F.hom, w) == g
    with pytest.raises(NotAMemberError):
        factor_element(chain, Permutation.from_cycles([(0, 1)], 24))


def test_factor_element_budget():
    F = sl25()
    chain = schreier_sims(list(F.hom.images), track_words=True)
    target = F.hom.images[0] * F.hom.images[1] ** 3 * F.hom.images[0]
    with pytest.raises(BudgetExhausted):
        factor_element(chain, target, budget=0)


def test_a5_squared_in_three_elements():
    from powerpres.constructions import diagonal_power_generating_words
    from powerpres.presentations import CoordinateDictionary

    F = a5()
    h2 = direct_power_hom(F.hom, 2)
    D = CoordinateDictionary(((Word.gen(0), Word.gen(1)), (Word.gen(2), Word.gen(3))), 2)
    words = diagonal_power_generating_words(D, [0, 1], Word.from_ints([1, 2]), 2)
    assert len(words) == 3
    new = [evaluate_word(h2, w) for w in words]
    assert schreier_sims(new).order() == 3600
    chain = schreier_sims(new, track_words=True)
    newhom = GroupHom(tuple(new))
    for target in h2.images:
        u = factor_element(chain, target)
        assert evaluate_word(newhom, u) == target
        v = shortest_word(new, target)
        assert evaluate_word(newhom, v) == target
        assert len(v) <= len(u)


def test_shortest_word_is_shortest():
    F = a5()
    gens = list(F.hom.images)
    # breadth-first distances from the identity
    dist = {tuple(range(5)): 0}
    frontier = [np.arange(5)]
    moves = [g.array for g in gens] + [g.inverse().array for g in gens]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for p in frontier:
            for m in moves:
                q = m[p]
                if tuple(q) not in dist:
                    dist[tuple(q)] = d
                    nxt.append(q)
        frontier = nxt
    for key, dd in itertools.islice(dist.items(), 0, 60, 7):
        w = shortest_word(gens, Permutation(list(key)))
        assert len(w) == dd


def test_permutation_parsing():
    p = Permutation.parse("(0 1 2)(3 4)")
    assert p.to_list() == [1, 2, 0, 4, 3]
    assert Permutation.parse("()", 3).is_identity()
    with pytest.raises(MalformedInputError):
        Permutation.parse("(0 1")
    with pytest.raises(MalformedInputError):
        Permutation([0, 0, 1])
