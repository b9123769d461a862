"""Universal central extension, the square presentation, and generating words."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import HypothesisViolation, InvalidWitnessError, MalformedInputError
from ..homology import abelianization_invariants
from ..presentations import (
    CommutatorWitnesses,
    CoordinateDictionary,
    Presentation,
    replay_step,
)
from ..words import Word, commutator, exponent_sum_vector, substitute

__all__ = [
    "uce_presentation",
    "square_presentation",
    "propagate_witnesses",
    "binary_generating_words",
    "diagonal_power_generating_words",
    "commutator_form",
    "evaluate_form",
]


def _check_witnesses(P: Presentation, w: CommutatorWitnesses):
    if len(w) != P.rank:
        raise InvalidWitnessError(f"{P.rank} generators but {len(w)} witnesses")
    w.check(P.rank)


def uce_presentation(P: Presentation, w: CommutatorWitnesses) -> Presentation:
    """``<X | x^-1 c_x, [r, x] for r in R, x in X>``.

    For a perfect group this presents its universal central extension.
    """
    _check_witnesses(P, w)
    gens = [Word.gen(i) for i in range(P.rank)]
    rels = w.relators()
    rels += [commutator(r, x) for r in P.relators for x in gens]
    step = {"op": "uce", "witnesses": w.to_json(P.names)}
    return P.with_step(P.names, rels, step)


def _y_names(names: Sequence[str]) -> tuple[str, ...]:
    taken = set(names)
    out = []
    for nm in names:
        y = nm + "'"
        while y in taken:
            y += "'"
        taken.add(y)
        out.append(y)
    return tuple(out)


def square_presentation(
    P: Presentation,
    w: CommutatorWitnesses,
    dictionary: CoordinateDictionary | None = None,
    check_h1: bool = True,
    y_names: Sequence[str] | None = None,
):
    """Presentation of ``G x G`` on generators ``x_1..x_k, y_1..y_k``.

    Relators are ``r_1..r_l``, then ``y_i^-1 c_i(y)``, then
    ``[x_i y_i^-1, y_j]`` for all ``i, j``.  In the presented group the
    ``y_i`` generate the first factor and ``y_i^-1 x_i`` the second, so the
    returned dictionary places old factor ``j`` at ``j`` (via ``y``) and at
    ``j + m`` (via ``y^-1 x``).  Witnesses become ``c_i(x)`` and ``c_i(y)``.

    Returns ``(presentation, dictionary, witnesses)``; the dictionary is
    ``None`` when none was given.
    """
    _check_witnesses(P, w)
    if check_h1:
        ab = abelianization_invariants(P)
        if not ab.trivial:
            raise HypothesisViolation(f"abelianization is {ab}, not trivial")
    k = P.rank
    ys = [Word.gen(k + i) for i in range(k)]
    xs = [Word.gen(i) for i in range(k)]
    rels = list(P.relators)
    rels += [ys[i].inverse() * substitute(c, ys) for i, c in enumerate(w.words)]
    rels += [commutator(xs[i] * ys[i].inverse(), ys[j]) for i in range(k) for j in range(k)]
    if y_names is None:
        y_names = _y_names(P.names)
    names = P.names + tuple(y_names)
    step = {
        "op": "square",
        "witnesses": w.to_json(P.names),
        "y_names": list(y_names),
    }
    Q = P.with_step(names, rels, step)
    w2 = CommutatorWitnesses(
        tuple(substitute(c, xs) for c in w.words) + tuple(substitute(c, ys) for c in w.words)
    )
    d2 = None
    if dictionary is not None:
        zs = [ys[i].inverse() * xs[i] for i in range(k)]
        first = dictionary.substitute(ys)
        second = dictionary.substitute(zs)
        d2 = CoordinateDictionary(first.entries + second.entries, dictionary.base_rank)
    return Q, d2, w2


@replay_step("uce")
def _(P, step):
    w = CommutatorWitnesses(tuple(P.word(c) for c in step["witnesses"]))
    return uce_presentation(P, w)


@replay_step("square")
def _(P, step):
    w = CommutatorWitnesses(tuple(P.word(c) for c in step["witnesses"]))
    return square_presentation(P, w, check_h1=False, y_names=step["y_names"])[0]


def propagate_witnesses(
    old: CommutatorWitnesses,
    substitution: Sequence[Word],
    rank: int | None = None,
    images=None,
) -> CommutatorWitnesses:
    """Push witnesses through a substitution of generators.

    The image of a word in ``[F, F]`` under a homomorphism stays in the
    commutator subgroup, so exponent sums remain zero.  ``images`` (a sequence
    of permutation arrays for the target alphabet) enables the check that
    generator ``i`` equals its new witness.
    """
    new = old.substitute(substitution)
    if rank is None:
        rank = max((c.max_index() for c in new.words), default=-1) + 1
        rank = max(rank, len(new))
    for i, c in enumerate(new.words):
        if any(exponent_sum_vector(c, rank)):
            raise InvalidWitnessError(f"propagated witness {i} has nonzero exponent sums")
    if images is not None:
        from ..permgrp import WordEvaluator

        ev = WordEvaluator(images)
        for i, c in enumerate(new.words):
            if not np.array_equal(ev(c), ev.arrays[i]):
                raise InvalidWitnessError(f"propagated witness {i} fails the permutation check")
    return new


def _bits(m: int) -> int:
    """Number of binary digits needed for ``1..m``: ``ceil(log2(m + 1))``."""
    return m.bit_length()


def binary_generating_words(
    dictionary: CoordinateDictionary, base_gens: Sequence[int], m: int
) -> list[Word]:
    """Diagonal words and binary-digit words for ``G^m``.

    For each base generator ``a_r`` returns the diagonal ``prod_j embed_j(a_r)``
    followed by ``a_{r,i} = prod_{j: bit i of j is 1} embed_j(a_r)`` for
    ``i = 0 .. ceil(log2(m + 1)) - 1``, with factors numbered ``j = 1..m``.
    """
    if m < 1:
        raise MalformedInputError("m must be positive")
    if dictionary.num_factors < m:
        raise MalformedInputError(f"dictionary covers {dictionary.num_factors} factors, need {m}")
    out = []
    for r in base_gens:
        entries = [dictionary.entry(j - 1, r) for j in range(1, m + 1)]
        diag = Word()
        for e in entries:
            diag = diag * e
        out.append(diag)
        for i in range(_bits(m)):
            w = Word()
            for j in range(1, m + 1):
                if (j >> i) & 1:
                    w = w * entries[j - 1]
            out.append(w)
    return out


def diagonal_power_generating_words(
    dictionary: CoordinateDictionary, base_gens: Sequence[int], g: Word, m: int
) -> list[Word]:
    """Diagonal words for ``base_gens`` plus ``(g, g^2, ..., g^m)``.

    ``g`` is a word over the base alphabet.
    """
    if dictionary.num_factors < m:
        raise MalformedInputError(f"dictionary covers {dictionary.num_factors} factors, need {m}")
    out = []
    for r in base_gens:
        diag = Word()
        for j in range(m):
            diag = diag * dictionary.entry(j, r)
        out.append(diag)
    power = Word()
    for j in range(m):
        power = power * substitute(g, dictionary.entries[j]) ** (j + 1)
    out.append(power)
    return out


# ---------------------------------------------------------------------------
# commutator forms


def commutator_form(c: Word) -> list[tuple[Word, Word, Word]]:
    """Write a word with zero exponent sums as ``prod [a_t, b_t]^(s_t)``.

    Each triple ``(a, b, s)`` has ``a`` and ``b`` single letters and ``s`` a
    conjugator, so ``c == prod(s^-1 [a, b] s)`` in the free group.  Found by
    bubble-sorting the letters: ``P a b S = (P b a S) [a, b]^S``.
    """
    if any(exponent_sum_vector(c, c.max_index() + 1)):
        raise InvalidWitnessError("word is not in the commutator subgroup")
    letters = list(c.ints)
    tail: list[tuple[Word, Word, Word]] = []
    while True:
        # free reduction
        out: list[int] = []
        for x in letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        letters = out
        pos = next((i for i in range(len(letters) - 1) if abs(letters[i]) > abs(letters[i + 1])), None)
        if pos is None:
            break
        a, b = letters[pos], letters[pos + 1]
        suffix = Word.from_ints(letters[pos + 2 :])
        tail.append((Word.from_ints([a]), Word.from_ints([b]), suffix))
        letters[pos], letters[pos + 1] = b, a
    if letters:
        raise AssertionError("sorted word with zero exponent sums must be empty")
    tail.reverse()
    return tail


def evaluate_form(form, left: Sequence[Word], right: Sequence[Word], conj: Sequence[Word] | None = None) -> Word:
    """``prod [a_t(left), b_t(right)]^(s_t(conj))``.

    When ``left`` and ``right`` place the generators on two coordinate
    patterns, the result is the witnessed element on their intersection.
    """
    if conj is None:
        conj = left
    out = Word()
    for a, b, s in form:
        sw = substitute(s, conj)
        out = out * (sw.inverse() * commutator(substitute(a, left), substitute(b, right)) * sw)
    return out


def pair_form(pairs: Sequence[tuple[Word, Word]]) -> list[tuple[Word, Word, Word]]:
    """Commutator form from explicit ``[U, V]`` factors (no conjugators)."""
    return [(u, v, Word()) for u, v in pairs]


def form_word(form) -> Word:
    k = max((max(a.max_index(), b.max_index(), s.max_index()) for a, b, s in form), default=-1) + 1
    gens = [Word.gen(i) for i in range(k)]
    return evaluate_form(form, gens, gens)


def short_commutator_form(hom, index: int, max_elements: int = 100_000):
    """A single commutator ``[u, v]`` equal to generator ``index`` under ``hom``.

    Enumerates the (finite) image group with shortest words and returns
    ``pair_form([(u, v)])`` minimizing ``|u| + |v|``, or ``None`` if the
    generator is not a commutator or the group exceeds ``max_elements``.
    """
    from collections import deque

    arrays = [p.array for p in hom.images]
    n = hom.degree
    moves = []
    for i, a in enumerate(arrays):
        inv = np.empty_like(a)
        inv[a] = np.arange(n)
        moves += [(i + 1, a), (-(i + 1), inv)]
    ident = np.arange(n, dtype=np.intp)
    words = {ident.tobytes(): ()}
    elems = [ident]
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        w = words[p.tobytes()]
        for x, g in moves:
            q = g[p]
            key = q.tobytes()
            if key not in words:
                words[key] = w + (x,)
                elems.append(q)
                queue.append(q)
                if len(elems) > max_elements:
                    return None
    target = arrays[index]
    inv = {}
    for p in elems:
        ip = np.empty_like(p)
        ip[p] = ident
        inv[p.tobytes()] = ip
    best = None
    for p in elems:
        pk = p.tobytes()
        wp = words[pk]
        if best is not None and len(wp) >= best[0]:
            continue
        ip = inv[pk]
        for q in elems:
            qk = q.tobytes()
            cost = len(wp) + len(words[qk])
            if best is not None and cost >= best[0]:
                continue
            # [p, q] = p^-1 q^-1 p q, composed left to right
            c = q[p[inv[qk][ip]]]
            if np.array_equal(c, target):
                best = (cost, wp, words[qk])
    if best is None:
        return None
    return pair_form([(Word.from_ints(best[1]), Word.from_ints(best[2]))])
