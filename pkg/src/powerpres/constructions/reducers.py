"""Strategies for cutting a square presentation down to fewer generators.

After each squaring step the pipeline asks a reducer for a plan.  A plan is
either a *rewrite* (new generating words plus expressions of every old
generator in them, costing one relator per new generator) or an
*elimination* (old generators deleted using consequences of the relators,
costing nothing).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import BudgetExhausted, FactorizationError, NotAMemberError
from ..permgrp import (
    Permutation,
    WordEvaluator,
    factor_element,
    schreier_sims,
    shortest_word,
)
from ..presentations import CommutatorWitnesses, CoordinateDictionary, Tracked
from ..words import Word
from .core import commutator_form, evaluate_form, short_commutator_form

__all__ = [
    "StageContext",
    "ReductionPlan",
    "PlaceholderReducer",
    "ExpressionReducer",
    "PermutationReducer",
    "PatternReducer",
]


@dataclass(frozen=True)
class StageContext:
    stage: int
    factors: int
    tracked: Tracked
    target: int
    base_rank: int
    images: list | None = None
    base_order: int | None = None

    @property
    def rank(self) -> int:
        return self.tracked.presentation.rank


@dataclass(frozen=True)
class ReductionPlan:
    new_gens: tuple = ()
    old_in_new: tuple = ()
    eliminate: tuple = ()
    dictionary: CoordinateDictionary | None = None
    checked: bool = True
    note: str = ""

    @property
    def kind(self) -> str:
        return "eliminate" if self.eliminate else "rewrite"


def _names(t: int) -> list[str]:
    return [f"g{j + 1}" for j in range(t)]


class PlaceholderReducer:
    """Counts only: new generator ``j`` is old generator ``j`` and every old
    generator ``i`` is claimed to equal new generator ``i mod t``.

    The resulting relators have the right number and shape but do not present
    the intended group.  Use it where only counts matter, or where expressions
    exist but are not constructive.
    """

    cost = "rewrite"

    def plan(self, ctx: StageContext) -> ReductionPlan:
        t = ctx.target
        new = tuple((nm, Word.gen(j)) for j, nm in enumerate(_names(t)))
        old = tuple(Word.gen(i % t) for i in range(ctx.rank))
        return ReductionPlan(new, old, checked=False, note="placeholder expressions (count only)")


class ExpressionReducer:
    """Delegates to ``fn(ctx)``, which returns a plan or ``(new_gens, old_in_new)``."""

    cost = "rewrite"

    def __init__(self, fn: Callable[[StageContext], object]):
        self.fn = fn

    def plan(self, ctx: StageContext) -> ReductionPlan:
        out = self.fn(ctx)
        if isinstance(out, ReductionPlan):
            return out
        new_gens, old_in_new = out
        return ReductionPlan(tuple(new_gens), tuple(old_in_new), note="user expressions")


class PermutationReducer:
    """Random short generating words, checked and factorized in a permutation image.

    Candidate words are products of up to ``max_len`` random generators; a
    candidate set is accepted when its image has the full order.  Old
    generators are expressed by shortest-word search, falling back to
    stabilizer-chain factorization.
    """

    cost = "rewrite"

    def __init__(self, seed: int = 0, attempts: int = 200, max_len: int = 3, budget: int = 400_000):
        self.seed = seed
        self.attempts = attempts
        self.max_len = max_len
        self.budget = budget

    def plan(self, ctx: StageContext) -> ReductionPlan:
        if ctx.images is None or ctx.base_order is None:
            raise FactorizationError("permutation reducer needs a permutation image", ctx.stage)
        rng = random.Random(self.seed * 1_000_003 + ctx.stage)
        ev = WordEvaluator(ctx.images)
        K, t = ctx.rank, ctx.target
        full = ctx.base_order**ctx.factors
        for _ in range(self.attempts):
            words = []
            for _ in range(t):
                ln = rng.randint(1, self.max_len)
                ints = [rng.choice((1, -1)) * rng.randint(1, K) for _ in range(ln)]
                words.append(Word.from_ints(ints))
            if any(not w for w in words):
                continue
            perms = [Permutation._wrap(ev(w)) for w in words]
            if schreier_sims(perms).order() == full:
                break
        else:
            raise FactorizationError(f"no {t}-element generating set found", ctx.stage)
        old = []
        chain = None
        for i in range(K):
            target = Permutation._wrap(ctx.images[i])
            try:
                u = shortest_word(perms, target, self.budget)
            except BudgetExhausted:
                if chain is None:
                    chain = schreier_sims(perms, track_words=True)
                try:
                    u = factor_element(chain, target, 10**6)
                except (BudgetExhausted, NotAMemberError) as exc:
                    raise FactorizationError(f"cannot express generator {i}: {exc}", ctx.stage) from None
            old.append(u)
        new = tuple(zip(_names(t), words))
        return ReductionPlan(new, tuple(old), note=f"permutation search, seed {self.seed}")


class PatternReducer:
    """Constructive reduction for any perfect group, by coordinate patterns.

    With ``k`` base generators, the presentation of ``G^(2^s)`` is kept on
    ``(s + 1) k`` generators in groups of ``k``: group 0 is the diagonal and
    group ``t + 1`` carries ``a_r`` on the factors whose index has binary digit
    ``t`` equal to 0.  Squaring doubles every group; the ``x`` copies keep their
    meaning and the ``y`` copy of the diagonal becomes the pattern for the new
    digit.  The other ``y`` groups sit on intersections of two patterns, and
    ``a_r`` on an intersection ``A & B`` equals ``c_r`` with its commutators
    taken between the ``A`` and ``B`` versions of the letters.  Those words
    replace the ``y`` groups, so no relators are added.

    ``forms[r]`` is a commutator form of a word equal to ``a_r`` in ``G``.
    Must be used with ``GeneratorBoundSchedule.patterns``.
    """

    cost = "eliminate"

    def __init__(self, forms: Sequence):
        self.forms = list(forms)

    @classmethod
    def from_witnesses(cls, witnesses: CommutatorWitnesses) -> PatternReducer:
        return cls([commutator_form(c) for c in witnesses.words])

    @classmethod
    def from_hom(cls, hom, witnesses: CommutatorWitnesses) -> PatternReducer:
        """Prefer single short commutators found in the finite image."""
        forms = []
        for r, c in enumerate(witnesses.words):
            f = short_commutator_form(hom, r)
            forms.append(f if f is not None else commutator_form(c))
        return cls(forms)

    @property
    def k(self) -> int:
        return len(self.forms)

    def _combine(self, left: Sequence[Word], right: Sequence[Word]) -> list[Word]:
        return [evaluate_form(f, left, right) for f in self.forms]

    def plan(self, ctx: StageContext) -> ReductionPlan:
        k, s = self.k, ctx.stage
        K = ctx.rank // 2
        if K != s * k or ctx.target != (s + 1) * k:
            raise FactorizationError(
                f"pattern reduction expects {s * k} -> {(s + 1) * k} generators, "
                f"got {K} -> {ctx.target}",
                s,
            )
        ys0 = [Word.gen(K + r) for r in range(k)]
        elim = []
        for g in range(1, s):
            xs = [Word.gen(g * k + r) for r in range(k)]
            for r, w in enumerate(self._combine(xs, ys0)):
                elim.append((K + g * k + r, w))
        return ReductionPlan(
            eliminate=tuple(elim),
            dictionary=self.dictionary(s),
            note="pattern elimination",
        )

    def dictionary(self, s: int) -> CoordinateDictionary:
        """Factor ``j`` of ``G^(2^s)`` as an intersection of digit patterns."""
        k = self.k
        diag = [Word.gen(r) for r in range(k)]
        if s == 0:
            return CoordinateDictionary((tuple(diag),), k)

        def leaf(t, bit):
            e = [Word.gen((t + 1) * k + r) for r in range(k)]
            return e if bit == 0 else [diag[r] * e[r].inverse() for r in range(k)]

        cache = {}

        def meet(key):
            # key: tuple of (digit, bit)
            if key in cache:
                return cache[key]
            if len(key) == 1:
                out = leaf(*key[0])
            else:
                h = len(key) // 2
                out = self._combine(meet(key[:h]), meet(key[h:]))
            cache[key] = out
            return out

        rows = []
        for j in range(2**s):
            key = tuple((t, (j >> t) & 1) for t in range(s))
            rows.append(tuple(meet(key)))
        return CoordinateDictionary(tuple(rows), k)


def apply_plan(T: Tracked, plan: ReductionPlan, images=None, stage: int = 0):
    """Carry out ``plan`` on ``T``; returns ``(tracked, images)``.

    With ``images`` every expression is checked and the images follow the
    generators.  Unchecked plans drop the images.
    """
    from ..presentations import IncorrectExpressionError
    from ..permgrp import GroupHom

    if plan.kind == "rewrite":
        hom = None
        if images is not None and plan.checked:
            hom = GroupHom(tuple(Permutation._wrap(a) for a in images))
        try:
            T2 = T.rewrite(plan.new_gens, plan.old_in_new, hom)
        except IncorrectExpressionError as exc:
            raise FactorizationError(str(exc), stage) from None
        if images is not None and plan.checked:
            ev = WordEvaluator(images)
            images = [ev(w) for _, w in plan.new_gens]
        else:
            images = None
    else:
        ev = WordEvaluator(images) if images is not None else None
        T2 = T
        for idx, w in sorted(plan.eliminate, key=lambda e: -e[0]):
            if ev is not None and not np.array_equal(ev(w), images[idx]):
                raise FactorizationError(f"replacement for generator {idx} evaluates incorrectly", stage)
            T2 = T2.add_relator(Word.gen(idx, -1) * w)
            T2 = T2.remove_generator(idx, w)
        if images is not None:
            gone = {idx for idx, _ in plan.eliminate}
            images = [a for i, a in enumerate(images) if i not in gone]
    if plan.dictionary is not None:
        T2 = Tracked(T2.presentation, plan.dictionary, T2.witnesses)
    return T2, images
