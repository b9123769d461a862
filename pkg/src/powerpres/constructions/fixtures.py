"""Built-in groups: A5, SL(2,5), the B_p family, and synthetic count fixtures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass


from ..errors import MalformedInputError
from ..permgrp import GroupHom, Permutation
from ..presentations import CommutatorWitnesses, Presentation, Tracked, parse_word
from ..words import Word, commutator
from .schedules import GeneratorBoundSchedule

__all__ = [
    "Fixture",
    "a5",
    "sl25",
    "builtin_examples",
    "bp_presentation",
    "bp_reduced",
    "bp_schedule",
    "synthetic_perfect",
    "hall_schedule",
    "HALL_A5_TWO",
    "HALL_A5_THREE",
]

# Largest m with A5^m (equivalently SL(2,5)^m) generated by 2 resp. 3
# elements: generating tuples of A5 counted up to Aut(A5) = S5, which acts
# freely on them.  2280 pairs / 120 = 19 and 200160 triples / 120 = 1668.
HALL_A5_TWO = 19
HALL_A5_THREE = 1668


@dataclass(frozen=True)
class Fixture:
    name: str
    presentation: Presentation
    hom: GroupHom
    witnesses: CommutatorWitnesses
    order: int


def a5() -> Fixture:
    """``<a, b | a^2, b^3, (ab)^5>`` acting on 5 points."""
    names = ("a", "b")
    P = Presentation.create(names, ["a^2", "b^3", "(a b)^5"], label="A5")
    hom = GroupHom(
        (Permutation.from_cycles([(0, 1), (2, 3)], 5), Permutation.from_cycles([(0, 2, 4)], 5)),
        names,
    )
    # shortest zero-exponent words found by breadth-first search
    w = CommutatorWitnesses(
        (
            Word.from_ints((2, 1, 2, 1, -2, 1, 2, 1, 2, -1, -2, -1, 2, -1, -2, -2, -1, -2)),
            Word.from_ints((1, 2, 1, 2, 2, 1, -2, 1, -2, -1, 2, -1, -2, -1, -2, -1)),
        )
    )
    return Fixture("a5", P, hom, w, 60)


def _sl25_matrices():
    s = ((0, 1), (4, 1))
    t = ((0, 4), (1, 3))
    return s, t


def _sl25_perm(M) -> Permutation:
    """Right action ``v -> v M`` on the 24 nonzero vectors of ``F_5^2``."""
    vecs = [v for v in itertools.product(range(5), repeat=2) if v != (0, 0)]
    index = {v: i for i, v in enumerate(vecs)}
    img = []
    for x, y in vecs:
        u = ((x * M[0][0] + y * M[1][0]) % 5, (x * M[0][1] + y * M[1][1]) % 5)
        img.append(index[u])
    return Permutation(img)


def sl25() -> Fixture:
    """``<s, t | s^3 = t^5 = (st)^2>`` acting on nonzero vectors of ``F_5^2``."""
    names = ("s", "t")
    P = Presentation.create(names, ["s^3 t^-5", "s^3 (s t)^-2"], label="SL(2,5)")
    s, t = _sl25_matrices()
    hom = GroupHom((_sl25_perm(s), _sl25_perm(t)), names)
    w = CommutatorWitnesses(
        (
            Word.from_ints((2, -1, 2, 2, 2, -1, -2, -2, 1, -2, 1, -2)),
            Word.from_ints((1, -2, 1, -2, -1, 2, 2, -1)),
        )
    )
    return Fixture("sl25", P, hom, w, 120)


def builtin_examples() -> dict[str, Fixture]:
    return {"a5": a5(), "sl25": sl25()}


def bp_presentation(p: int) -> tuple[Presentation, CommutatorWitnesses]:
    """The four-generator, four-relator group ``B_p``.

    Witnesses: ``a = [b^-1, a^-p]`` and ``alpha = [beta^-1, alpha^-p]`` from
    the conjugation relators, ``beta = [b a b^-1, a]`` and
    ``b = [beta alpha beta^-1, alpha]`` from the other two.
    """
    if not isinstance(p, int) or p < 1:
        raise MalformedInputError("p must be a positive integer")
    names = ("a", "b", "alpha", "beta")
    a, b, al, be = (Word.gen(i) for i in range(4))
    rels = [
        b * a**p * b.inverse() * a ** -(p + 1),
        be * al**p * be.inverse() * al ** -(p + 1),
        commutator(b * a * b.inverse(), a) * be.inverse(),
        commutator(be * al * be.inverse(), al) * b.inverse(),
    ]
    P = Presentation.create(names, rels, label=f"B_{p}")
    w = CommutatorWitnesses(
        (
            commutator(b.inverse(), a**-p),
            commutator(be * al * be.inverse(), al),
            commutator(be.inverse(), al**-p),
            commutator(b * a * b.inverse(), a),
        )
    )
    return P, w


def bp_reduced(p: int) -> tuple[Presentation, CommutatorWitnesses]:
    """``B_p`` on ``a, b, alpha`` after eliminating ``beta = [b a b^-1, a]``."""
    P, w = bp_presentation(p)
    repl = parse_word("[b a b^-1, a]", P.names)
    T = Tracked(P, None, w).remove_generator("beta", repl)
    return T.presentation, T.witnesses


def bp_schedule() -> GeneratorBoundSchedule:
    """Three generators for ``B_p`` itself, four for every power ``B_p^m``."""
    return GeneratorBoundSchedule(3, lambda m: 3 if m == 1 else 4, "bp")


def synthetic_perfect(k: int, l: int) -> tuple[Presentation, CommutatorWitnesses]:
    """A presentation with trivial abelianization and given counts.

    Relators ``x_i^-1 [x_{i+1}, x_{i+2}]`` (indices mod ``k``) followed by
    ``l - k`` extra commutators.  Only counts matter for these.
    """
    if k < 2 or l < k:
        raise MalformedInputError("need k >= 2 and l >= k")
    names = tuple(f"x{i + 1}" for i in range(k))
    xs = [Word.gen(i) for i in range(k)]
    wit = [commutator(xs[(i + 1) % k], xs[(i + 2) % k]) for i in range(k)]
    rels = [xs[i].inverse() * wit[i] for i in range(k)]
    pairs = itertools.cycle(itertools.combinations(range(k), 2))
    for _ in range(l - k):
        i, j = next(pairs)
        rels.append(commutator(xs[i], xs[j] * xs[i]))
    P = Presentation.create(names, rels, label=f"synthetic({k},{l})")
    return P, CommutatorWitnesses(tuple(wit))


def hall_schedule() -> GeneratorBoundSchedule:
    """Generator counts for powers of SL(2,5) from Hall's enumeration."""
    return GeneratorBoundSchedule.thresholds(2, {HALL_A5_TWO: 2, HALL_A5_THREE: 3}, "hall")
