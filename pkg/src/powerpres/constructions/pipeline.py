"""Iterated squaring: presentations of G^(2^n) and G^m."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import FactorizationError, MalformedInputError, PowerPresError
from ..permgrp import GroupHom, Permutation, WordEvaluator, schreier_sims
from ..presentations import (
    CommutatorWitnesses,
    CoordinateDictionary,
    Presentation,
    Tracked,
    to_json,
)
from ..words import Word
from .core import binary_generating_words, square_presentation
from .reducers import PatternReducer, StageContext, apply_plan
from .schedules import GeneratorBoundSchedule, simulate_counts

__all__ = ["PowerPipelineResult", "power_of_two_presentation", "power_presentation", "kill_words"]


@dataclass
class PowerPipelineResult:
    presentation: Presentation
    dictionary: CoordinateDictionary
    witnesses: CommutatorWitnesses
    predicted_relator_count: int
    stage_log: list[tuple[int, int]]
    factors: int
    schedule: str = ""
    images: list | None = None
    base_hom: GroupHom | None = None
    checked: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def counts(self) -> tuple[int, int]:
        return self.presentation.counts()

    def hom(self) -> GroupHom | None:
        """The tracked permutation image of the final generators, if any."""
        if self.images is None:
            return None
        return GroupHom(tuple(Permutation._wrap(a) for a in self.images))

    def verify(self, order: bool = True) -> dict:
        """Check relators, dictionary and witnesses against the tracked image."""
        if self.images is None or self.base_hom is None:
            raise MalformedInputError("no permutation image was tracked for this result")
        ev = WordEvaluator(self.images)
        deg = self.base_hom.degree
        ident = np.arange(len(self.images[0]))
        bad_rel = [i for i, r in enumerate(self.presentation.relators) if not ev.is_identity(r)]
        bad_dict = []
        for j, row in enumerate(self.dictionary.entries):
            for s, w in enumerate(row):
                want = ident.copy()
                want[j * deg : (j + 1) * deg] = self.base_hom.images[s].array + j * deg
                if not np.array_equal(ev(w), want):
                    bad_dict.append((j, s))
        bad_wit = [
            i for i, c in enumerate(self.witnesses.words) if not np.array_equal(ev(c), self.images[i])
        ]
        report = {
            "relators_trivial": not bad_rel,
            "failed_relators": bad_rel,
            "dictionary_ok": not bad_dict,
            "failed_dictionary": bad_dict,
            "witnesses_ok": not bad_wit,
            "failed_witnesses": bad_wit,
        }
        ok = not (bad_rel or bad_dict or bad_wit)
        if order:
            got = schreier_sims([Permutation._wrap(a) for a in self.images]).order()
            want = schreier_sims(list(self.base_hom.images)).order() ** self.factors
            report.update(order=got, expected_order=want, order_matches=got == want)
            ok = ok and got == want
        report["ok"] = ok
        return report

    def to_json(self) -> dict:
        P = self.presentation
        return to_json(
            P,
            stage_log=[list(c) for c in self.stage_log],
            predicted_relator_count=self.predicted_relator_count,
            factors=self.factors,
            schedule=self.schedule,
            checked=self.checked,
            witnesses=self.witnesses.to_json(P.names),
            dictionary=self.dictionary.to_json(P.names),
            notes=list(self.notes),
        )


def _square_images(images, deg_half):
    xs, ys = [], []
    shift = np.arange(deg_half, 2 * deg_half, dtype=np.intp)
    for a in images:
        xs.append(np.concatenate([a, a + deg_half]))
        ys.append(np.concatenate([a, shift]))
    return xs + ys


def _default_schedule(reducer, k):
    if reducer is None or isinstance(reducer, PatternReducer):
        return GeneratorBoundSchedule.patterns(k)
    return GeneratorBoundSchedule.binary(k)


def power_of_two_presentation(
    P: Presentation,
    w: CommutatorWitnesses,
    n: int,
    schedule: GeneratorBoundSchedule | None = None,
    reducer=None,
    hom: GroupHom | None = None,
    check_h1: bool = True,
) -> PowerPipelineResult:
    """Presentation of ``G^(2^n)`` by ``n`` rounds of squaring and reduction.

    After round ``s`` the presentation is cut to ``schedule.bound(2^s)``
    generators whenever squaring produced more.  The default reducer is
    :class:`PatternReducer`, which is constructive for every perfect group.
    With ``hom`` (a permutation image of ``G``) the generators' images are
    carried along and every checked step is verified against them.
    """
    if n < 0:
        raise MalformedInputError("n must be nonnegative")
    k = P.rank
    if reducer is None:
        reducer = PatternReducer.from_hom(hom, w) if hom is not None else PatternReducer.from_witnesses(w)
    if schedule is None:
        schedule = _default_schedule(reducer, k)
    if schedule.base_rank != k:
        raise MalformedInputError(f"schedule is for rank {schedule.base_rank}, presentation has {k}")
    w.check(k)
    images = None
    base_order = None
    if hom is not None:
        if hom.rank != k:
            raise MalformedInputError("hom rank does not match the presentation")
        images = [p.array.copy() for p in hom.images]
        base_order = schreier_sims(list(hom.images)).order()
    T = Tracked(P, CoordinateDictionary.identity(k), w)
    log = [P.counts()]
    notes = []
    checked = True
    for s in range(1, n + 1):
        Q, D, W = square_presentation(
            T.presentation, T.witnesses, T.dictionary, check_h1=check_h1 and s == 1
        )
        T = Tracked(Q, D, W)
        if images is not None:
            images = _square_images(images, len(images[0]))
        K2 = Q.rank
        t = schedule.bound(2**s)
        if t < K2:
            ctx = StageContext(s, 2**s, T, t, k, images, base_order)
            plan = reducer.plan(ctx)
            if plan.kind != getattr(reducer, "cost", plan.kind):
                raise PowerPresError(f"reducer announced {reducer.cost} but planned {plan.kind}")
            if not plan.checked:
                checked = False
                if images is not None:
                    notes.append(f"stage {s}: unchecked expressions, permutation image dropped")
            T, images = apply_plan(T, plan, images, s)
            if T.presentation.rank != t:
                raise FactorizationError(f"reduction left {T.presentation.rank} generators, wanted {t}", s)
            if plan.note:
                notes.append(f"stage {s}: {plan.note}")
        log.append(T.presentation.counts())
    predicted = simulate_counts(k, P.num_relators, n, schedule, getattr(reducer, "cost", "rewrite"))
    if log != predicted:
        raise PowerPresError(f"stage counts {log} differ from prediction {predicted}")
    return PowerPipelineResult(
        presentation=T.presentation,
        dictionary=T.dictionary,
        witnesses=T.witnesses,
        predicted_relator_count=predicted[-1][1],
        stage_log=log,
        factors=2**n,
        schedule=schedule.name,
        images=images,
        base_hom=hom if images is not None else None,
        checked=checked,
        notes=notes,
    )


def kill_words(dictionary: CoordinateDictionary, dead: range, mode: str = "diagonal") -> list[Word]:
    """Words whose normal closure is the product of the ``dead`` factors.

    ``diagonal``: one word per base generator, the product over dead factors.
    Its normal closure contains every commutator ``[a_r, g]`` placed in a
    single factor, hence (the group being perfect) each whole factor.
    ``binary``: the diagonal and binary-digit words of the dead factors.
    """
    k = dictionary.base_rank
    if mode == "diagonal":
        out = []
        for r in range(k):
            w = Word()
            for j in dead:
                w = w * dictionary.entry(j, r)
            out.append(w)
        return out
    if mode == "binary":
        sub = CoordinateDictionary(tuple(dictionary.entries[j] for j in dead), k)
        return binary_generating_words(sub, range(k), len(dead))
    raise MalformedInputError(f"unknown kill mode {mode!r}")


def power_presentation(
    P: Presentation,
    w: CommutatorWitnesses,
    m: int,
    schedule: GeneratorBoundSchedule | None = None,
    reducer=None,
    hom: GroupHom | None = None,
    kill: str = "diagonal",
    check_h1: bool = True,
) -> PowerPipelineResult:
    """Presentation of ``G^m``: build ``G^(2^n)`` with ``2^n >= m`` minimal,
    then kill the last ``2^n - m`` factors."""
    if not isinstance(m, int) or m < 1:
        raise MalformedInputError("m must be a positive integer")
    n = (m - 1).bit_length()
    R = power_of_two_presentation(P, w, n, schedule, reducer, hom, check_h1)
    if m == 2**n:
        return R
    dead = range(m, 2**n)
    words = kill_words(R.dictionary, dead, kill)
    T = Tracked(R.presentation, R.dictionary, R.witnesses).kill(words)
    images = R.images
    if images is not None:
        deg = R.base_hom.degree
        cut = m * deg
        images = [a[:cut].copy() for a in images]
    D = CoordinateDictionary(R.dictionary.entries[:m], R.dictionary.base_rank)
    return PowerPipelineResult(
        presentation=T.presentation,
        dictionary=D,
        witnesses=R.witnesses,
        predicted_relator_count=R.predicted_relator_count + len(words),
        stage_log=R.stage_log + [T.presentation.counts()],
        factors=m,
        schedule=R.schedule,
        images=images,
        base_hom=R.base_hom,
        checked=R.checked,
        notes=R.notes + [f"killed factors {m + 1}..{2**n} with {len(words)} {kill} words"],
    )
