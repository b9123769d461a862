"""Finite presentations, their text/JSON formats, and Tietze moves.

Text format::

    # comment
    gens: a b
    rel: a^2
    rel: [a, b]
    prov: {"op": "source", ...}

``rels:`` may list several relators separated by top-level commas or
semicolons.  Inverses are written ``a^-1`` (or, for one-letter names, as the
upper-case letter).  The empty relator is written ``1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    InvalidWitnessError,
    MalformedInputError,
    ParseError,
    TietzeError,
    VerificationError,
)
from .words import Word, commutator, cyclic_conjugates, cyclically_reduce, exponent_sum_vector, substitute

__all__ = [
    "Presentation",
    "CoordinateDictionary",
    "CommutatorWitnesses",
    "Tracked",
    "IncorrectExpressionError",
    "format_word",
    "parse_word",
    "parse_presentation",
    "to_text",
    "to_json",
    "from_json",
    "naive_product",
    "tietze_add_generator",
    "tietze_add_relator",
    "tietze_remove_generator",
    "rewrite_to_generating_set",
    "kill_generators",
    "rename_generators",
    "replay",
]


class IncorrectExpressionError(VerificationError):
    """An expression of an old generator in new generators evaluates wrongly."""

    def __init__(self, message, generator=None):
        self.generator = generator
        super().__init__(message)


# ---------------------------------------------------------------------------
# word syntax


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    out = []
    ints = w.ints
    i = 0
    while i < len(ints):
        x = ints[i]
        j = i
        while j < len(ints) and ints[j] == x:
            j += 1
        e = (j - i) * (1 if x > 0 else -1)
        name = names[abs(x) - 1]
        out.append(name if e == 1 else f"{name}^{e}")
        i = j
    return " ".join(out)


class _WordParser:
    def __init__(self, text: str, names: Sequence[str], line: int | None = None):
        self.text = text
        self.pos = 0
        self.line = line
        self.index = {nm: i for i, nm in enumerate(names)}
        self.by_length = sorted(names, key=len, reverse=True)

    def error(self, msg):
        raise ParseError(msg, self.line, self.pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t*.":
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Word:
        w = self.product()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return w

    def product(self) -> Word:
        w = Word()
        while True:
            c = self.peek()
            if not c or c in "),]":
                return w
            w = w * self.factor()

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.pos += 1
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        try:
            return int(self.text[start : self.pos])
        except ValueError:
            self.error("bad exponent")

    def factor(self) -> Word:
        c = self.peek()
        if c == "(":
            self.pos += 1
            w = self.product()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        elif c == "[":
            self.pos += 1
            u = self.product()
            if self.peek() != ",":
                self.error("expected ',' in commutator")
            self.pos += 1
            v = self.product()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            w = commutator(u, v)
        elif c == "1" and not any(self.text.startswith(nm, self.pos) for nm in self.index):
            self.pos += 1
            w = Word()
        else:
            w = self.symbol()
        return w ** self.exponent()

    def symbol(self) -> Word:
        for nm in self.by_length:
            if self.text.startswith(nm, self.pos):
                self.pos += len(nm)
                return Word.gen(self.index[nm])
        c = self.text[self.pos]
        if c.isupper() and c.lower() in self.index:
            self.pos += 1
            return Word.gen(self.index[c.lower()], -1)
        if c.isalpha() or c == "_":
            end = self.pos
            while end < len(self.text) and (self.text[end].isalnum() or self.text[end] in "_'"):
                end += 1
            self.error(f"undeclared generator {self.text[self.pos:end]!r}")
        self.error(f"unexpected {c!r}")


def parse_word(text: str, names: Sequence[str], line: int | None = None) -> Word:
    """Parse a word over ``names``.

    >>> parse_word("[a, b]", ["a", "b"]) == parse_word("a^-1 b^-1 a b", ["a", "b"])
    True
    """
    return _WordParser(text, names, line).parse()


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in ",;" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]


# ---------------------------------------------------------------------------
# data model


def _check_name(name: str):
    if not name or not (name[0].isalpha() or name[0] == "_"):
        raise MalformedInputError(f"bad generator name {name!r}")
    if not all(ch.isalnum() or ch in "_'" for ch in name):
        raise MalformedInputError(f"bad generator name {name!r}")


@dataclass(frozen=True)
class Presentation:
    """Generators, relators and a replayable construction trace.

    Relators are freely reduced words over ``range(len(names))``.  Trivial
    relators produced by substitution are kept so relator counts stay
    auditable.
    """

    names: tuple[str, ...]
    relators: tuple[Word, ...]
    provenance: tuple[dict, ...] = field(default=(), compare=True)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "relators", tuple(self.relators))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        for nm in self.names:
            _check_name(nm)
        if len(set(self.names)) != len(self.names):
            raise MalformedInputError("duplicate generator name")
        for r in self.relators:
            if not isinstance(r, Word):
                raise MalformedInputError(f"relator {r!r} is not a Word")
            if r.max_index() >= len(self.names):
                raise MalformedInputError("relator uses an undeclared generator")

    @classmethod
    def create(cls, names: Sequence[str], relators: Iterable, label: str | None = None) -> Presentation:
        """Build a presentation whose trace starts with a ``source`` step.

        Relators may be Words or strings in the word syntax.
        """
        names = tuple(names)
        rels = tuple(r if isinstance(r, Word) else parse_word(r, names) for r in relators)
        step = {
            "op": "source",
            "generators": list(names),
            "relators": [format_word(r, names) for r in rels],
        }
        if label:
            step["label"] = label
        return cls(names, rels, (step,))

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    def counts(self) -> tuple[int, int]:
        return (len(self.names), len(self.relators))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise MalformedInputError(f"no generator named {name!r}") from None

    def gen(self, name: str) -> Word:
        return Word.gen(self.index(name))

    def word(self, text: str) -> Word:
        return parse_word(text, self.names)

    def format(self, w: Word) -> str:
        return format_word(w, self.names)

    def exponent_matrix(self) -> list[list[int]]:
        return [list(exponent_sum_vector(r, self.rank)) for r in self.relators]

    def with_step(self, names, relators, step: dict) -> Presentation:
        return Presentation(tuple(names), tuple(relators), self.provenance + (step,))

    def __str__(self):
        return to_text(self, provenance=False)


@dataclass(frozen=True)
class CommutatorWitnesses:
    """For each generator ``x_i`` a word ``c_i`` in ``[F, F]`` with ``x_i = c_i``."""

    words: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))

    def __len__(self):
        return len(self.words)

    def __getitem__(self, i) -> Word:
        return self.words[i]

    def check(self, rank: int | None = None):
        """Raise :class:`InvalidWitnessError` unless every exponent sum vanishes."""
        k = len(self.words) if rank is None else rank
        if len(self.words) != k:
            raise InvalidWitnessError(f"expected {k} witnesses, got {len(self.words)}")
        for i, c in enumerate(self.words):
            if c.max_index() >= k:
                raise InvalidWitnessError(f"witness {i} uses a generator outside the alphabet")
            if any(exponent_sum_vector(c, k)):
                raise InvalidWitnessError(f"witness {i} has nonzero exponent sums")

    def substitute(self, mapping: Sequence[Word]) -> CommutatorWitnesses:
        return CommutatorWitnesses(tuple(substitute(c, mapping) for c in self.words))

    def relators(self) -> list[Word]:
        """The words ``x_i^-1 c_i``."""
        return [Word.gen(i, -1) * c for i, c in enumerate(self.words)]

    def to_json(self, names) -> list[str]:
        return [format_word(c, names) for c in self.words]


@dataclass(frozen=True)
class CoordinateDictionary:
    """``entries[j][s]`` is a word for base generator ``s`` placed in factor ``j``."""

    entries: tuple[tuple[Word, ...], ...]
    base_rank: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(row) for row in self.entries))
        if any(len(row) != self.base_rank for row in self.entries):
            raise MalformedInputError("dictionary rows must have base_rank entries")

    @classmethod
    def identity(cls, k: int) -> CoordinateDictionary:
        return cls(((tuple(Word.gen(s) for s in range(k))),), k)

    @property
    def num_factors(self) -> int:
        return len(self.entries)

    def entry(self, j: int, s: int) -> Word:
        return self.entries[j][s]

    def substitute(self, mapping: Sequence[Word]) -> CoordinateDictionary:
        cache = {}
        rows = []
        for row in self.entries:
            new = []
            for w in row:
                if w not in cache:
                    cache[w] = substitute(w, mapping)
                new.append(cache[w])
            rows.append(tuple(new))
        return CoordinateDictionary(tuple(rows), self.base_rank)

    def max_length(self) -> int:
        return max((len(w) for row in self.entries for w in row), default=0)

    def to_json(self, names) -> list[list[str]]:
        return [[format_word(w, names) for w in row] for row in self.entries]


# ---------------------------------------------------------------------------
# serialization


def to_text(P: Presentation, provenance: bool = True) -> str:
    lines = ["gens: " + " ".join(P.names)]
    lines += ["rel: " + format_word(r, P.names) for r in P.relators]
    if provenance:
        lines += ["prov: " + json.dumps(step, sort_keys=True) for step in P.provenance]
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    names = None
    rels: list[Word] = []
    prov: list[dict] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise ParseError("expected 'key: value'", lineno, 1)
        offset = len(raw) - len(raw.lstrip()) + len(key) + 2
        if key in ("gens", "generators"):
            if names is not None:
                raise ParseError("generators declared twice", lineno, 1)
            toks = [t for t in rest.replace(",", " ").split() if t]
            seen = set()
            for t in toks:
                if t in seen:
                    raise ParseError(f"duplicate generator name {t!r}", lineno)
                try:
                    _check_name(t)
                except MalformedInputError as exc:
                    raise ParseError(str(exc), lineno) from None
                seen.add(t)
            names = tuple(toks)
        elif key in ("rel", "rels", "relators"):
            if names is None:
                raise ParseError("relators before generators", lineno, 1)
            chunks = [rest] if key == "rel" else _split_top_level(rest)
            for chunk in chunks:
                try:
                    rels.append(parse_word(chunk, names, lineno))
                except ParseError as exc:
                    if exc.column is not None:
                        col = rest.find(chunk.strip()) + offset + exc.column - 1
                        raise ParseError(str(exc).rsplit(" (line", 1)[0], lineno, col) from None
                    raise
        elif key == "prov":
            try:
                prov.append(json.loads(rest))
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad provenance JSON: {exc.msg}", lineno) from None
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    if names is None:
        raise ParseError("missing 'gens:' line")
    return Presentation(names, tuple(rels), tuple(prov))


def to_json(P: Presentation, **extra) -> dict:
    d = {
        "generators": list(P.names),
        "relators": [format_word(r, P.names) for r in P.relators],
        "provenance": list(P.provenance),
    }
    d.update(extra)
    return d


def from_json(d: dict | str) -> Presentation:
    if isinstance(d, str):
        d = json.loads(d)
    try:
        names = tuple(d["generators"])
        rels = tuple(parse_word(r, names) for r in d["relators"])
    except KeyError as exc:
        raise MalformedInputError(f"missing field {exc}") from None
    return Presentation(names, rels, tuple(d.get("provenance", ())))


# ---------------------------------------------------------------------------
# constructions on presentations


def _fresh(name: str, taken: set[str]) -> str:
    if name not in taken:
        return name
    i = 2
    while f"{name}_{i}" in taken:
        i += 1
    return f"{name}_{i}"


def naive_product(A: Presentation, B: Presentation) -> Presentation:
    """The obvious presentation of ``A x B``: both relator sets plus all ``[x, y]``."""
    taken = set(A.names)
    bnames = []
    for nm in B.names:
        nm2 = _fresh(nm, taken)
        taken.add(nm2)
        bnames.append(nm2)
    k = A.rank
    shift = [Word.gen(k + i) for i in range(B.rank)]
    rels = list(A.relators) + [substitute(r, shift) for r in B.relators]
    rels += [commutator(Word.gen(i), Word.gen(k + j)) for i in range(A.rank) for j in range(B.rank)]
    step = {"op": "naive_product", "other": to_json(B)}
    return A.with_step(A.names + tuple(bnames), rels, step)


def rename_generators(P: Presentation, names: Sequence[str]) -> Presentation:
    if len(names) != P.rank:
        raise MalformedInputError("wrong number of names")
    return P.with_step(names, P.relators, {"op": "rename", "names": list(names)})


def tietze_add_generator(P: Presentation, name: str, definition: Word) -> Presentation:
    """Add generator ``name`` with defining relator ``name^-1 definition``."""
    if name in P.names:
        raise TietzeError(f"generator name {name!r} already in use")
    _check_name(name)
    if definition.max_index() >= P.rank:
        raise MalformedInputError("definition uses an undeclared generator")
    g = Word.gen(P.rank)
    step = {"op": "add_generator", "name": name, "definition": format_word(definition, P.names)}
    return P.with_step(P.names + (name,), P.relators + (g.inverse() * definition,), step)


def tietze_add_relator(P: Presentation, word: Word) -> Presentation:
    """Append ``word``, which the caller asserts is a consequence of the relators."""
    if word.max_index() >= P.rank:
        raise MalformedInputError("relator uses an undeclared generator")
    step = {"op": "add_relator", "word": format_word(word, P.names)}
    return P.with_step(P.names, P.relators + (word,), step)


def _find_defining_relator(P: Presentation, i: int, replacement: Word) -> int:
    target = Word.gen(i, -1) * replacement
    for idx in range(len(P.relators) - 1, -1, -1):
        if P.relators[idx] in (target, target.inverse()):
            return idx
    core = len(cyclically_reduce(target))
    candidates = set(cyclic_conjugates(target)) | set(cyclic_conjugates(target.inverse()))
    for idx, r in enumerate(P.relators):
        if len(cyclically_reduce(r)) == core and any(c in candidates for c in cyclic_conjugates(r)):
            return idx
    return -1


def removal_substitution(P: Presentation, i: int, replacement: Word) -> list[Word]:
    """Map from P's generators to words over the alphabet with generator ``i`` removed."""
    down = [Word.gen(j if j < i else j - 1) if j != i else None for j in range(P.rank)]
    rep = substitute(replacement, [w if w is not None else Word() for w in down])
    return [rep if j == i else down[j] for j in range(P.rank)]


def tietze_remove_generator(P: Presentation, gen, replacement: Word) -> Presentation:
    """Delete ``gen`` using a relator equivalent to ``gen^-1 replacement``.

    ``gen`` is a name or index.  The defining relator is matched up to cyclic
    rotation and inversion; every other relator has ``gen`` substituted.
    """
    i = P.index(gen) if isinstance(gen, str) else int(gen)
    if not 0 <= i < P.rank:
        raise TietzeError(f"no generator {gen!r}")
    if i in replacement.generators():
        raise TietzeError("replacement contains the generator being removed")
    if replacement.max_index() >= P.rank:
        raise MalformedInputError("replacement uses an undeclared generator")
    idx = _find_defining_relator(P, i, replacement)
    if idx < 0:
        raise TietzeError(f"no relator defines {P.names[i]} as {format_word(replacement, P.names)}")
    mapping = removal_substitution(P, i, replacement)
    rels = [substitute(r, mapping) for j, r in enumerate(P.relators) if j != idx]
    names = P.names[:i] + P.names[i + 1 :]
    step = {"op": "remove_generator", "name": P.names[i], "replacement": format_word(replacement, P.names)}
    return P.with_step(names, rels, step)


def kill_generators(P: Presentation, words: Sequence[Word]) -> Presentation:
    """Append each word as a relator."""
    for w in words:
        if w.max_index() >= P.rank:
            raise MalformedInputError("kill word uses an undeclared generator")
    step = {"op": "kill", "words": [format_word(w, P.names) for w in words]}
    return P.with_step(P.names, P.relators + tuple(words), step)


def _hom_arrays(hom) -> list[np.ndarray]:
    return [p.array for p in hom.images]


def rewrite_to_generating_set(
    P: Presentation,
    new_gens: Sequence[tuple[str, Word]],
    old_in_new: Sequence[Word],
    hom=None,
) -> Presentation:
    """Change generating set by Tietze moves.

    New generators ``a_j`` are defined by words over the old alphabet; each old
    generator ``b_i`` is expressed as ``old_in_new[i]``.  The result has the
    relators ``r(old_in_new)`` followed by ``a_j^-1 w_j(old_in_new)``.  With
    ``hom`` (images of the old generators) every expression is checked first.
    """
    from .permgrp import WordEvaluator

    if len(old_in_new) != P.rank:
        raise MalformedInputError(f"need {P.rank} old-generator expressions, got {len(old_in_new)}")
    names = tuple(nm for nm, _ in new_gens)
    if len(set(names)) != len(names):
        raise MalformedInputError("duplicate new generator name")
    for nm in names:
        _check_name(nm)
    for _, w in new_gens:
        if w.max_index() >= P.rank:
            raise MalformedInputError("new generator definition uses an undeclared generator")
    for u in old_in_new:
        if u.max_index() >= len(names):
            raise MalformedInputError("old-generator expression uses an undeclared new generator")
    verified = False
    if hom is not None:
        old_ev = WordEvaluator(_hom_arrays(hom))
        new_images = [old_ev(w) for _, w in new_gens]
        new_ev = WordEvaluator(new_images)
        for i, u in enumerate(old_in_new):
            if not np.array_equal(new_ev(u), old_ev.arrays[i]):
                raise IncorrectExpressionError(
                    f"expression for {P.names[i]} evaluates incorrectly", generator=P.names[i]
                )
        verified = True
    u = list(old_in_new)
    rels = [substitute(r, u) for r in P.relators]
    rels += [Word.gen(j, -1) * substitute(w, u) for j, (_, w) in enumerate(new_gens)]
    step = {
        "op": "rewrite",
        "new_generators": [[nm, format_word(w, P.names)] for nm, w in new_gens],
        "old_in_new": [format_word(w, names) for w in old_in_new],
        "verified": verified,
    }
    return P.with_step(names, rels, step)


# ---------------------------------------------------------------------------
# presentation + bookkeeping moved together


@dataclass(frozen=True)
class Tracked:
    """A presentation with its coordinate dictionary and witnesses.

    Every move rewrites the attached words through the same substitution the
    relators undergo.
    """

    presentation: Presentation
    dictionary: CoordinateDictionary | None = None
    witnesses: CommutatorWitnesses | None = None

    def add_generator(self, name: str, definition: Word) -> Tracked:
        P = tietze_add_generator(self.presentation, name, definition)
        w = self.witnesses
        if w is not None:
            w = CommutatorWitnesses(w.words + (substitute(definition, list(w.words)),))
        return Tracked(P, self.dictionary, w)

    def add_relator(self, word: Word) -> Tracked:
        return Tracked(tietze_add_relator(self.presentation, word), self.dictionary, self.witnesses)

    def remove_generator(self, gen, replacement: Word) -> Tracked:
        P0 = self.presentation
        i = P0.index(gen) if isinstance(gen, str) else int(gen)
        P = tietze_remove_generator(P0, i, replacement)
        mapping = removal_substitution(P0, i, replacement)
        d = self.dictionary.substitute(mapping) if self.dictionary is not None else None
        w = self.witnesses
        if w is not None:
            w = CommutatorWitnesses(
                tuple(substitute(c, mapping) for j, c in enumerate(w.words) if j != i)
            )
        return Tracked(P, d, w)

    def rewrite(self, new_gens, old_in_new, hom=None) -> Tracked:
        P = rewrite_to_generating_set(self.presentation, new_gens, old_in_new, hom)
        u = list(old_in_new)
        d = self.dictionary.substitute(u) if self.dictionary is not None else None
        w = self.witnesses
        if w is not None:
            # a_j = w_j(b) = w_j(c(b)) = w_j(c(u(a)))
            w = CommutatorWitnesses(
                tuple(substitute(substitute(wj, list(w.words)), u) for _, wj in new_gens)
            )
        return Tracked(P, d, w)

    def kill(self, words) -> Tracked:
        return Tracked(kill_generators(self.presentation, words), self.dictionary, self.witnesses)


# ---------------------------------------------------------------------------
# provenance replay

_REPLAY: dict[str, Callable[[Presentation, dict], Presentation]] = {}


def replay_step(op: str):
    def register(fn):
        _REPLAY[op] = fn
        return fn

    return register


@replay_step("naive_product")
def _(P, step):
    return naive_product(P, from_json(step["other"]))


@replay_step("rename")
def _(P, step):
    return rename_generators(P, step["names"])


@replay_step("add_generator")
def _(P, step):
    return tietze_add_generator(P, step["name"], P.word(step["definition"]))


@replay_step("add_relator")
def _(P, step):
    return tietze_add_relator(P, P.word(step["word"]))


@replay_step("remove_generator")
def _(P, step):
    return tietze_remove_generator(P, step["name"], P.word(step["replacement"]))


@replay_step("kill")
def _(P, step):
    return kill_generators(P, [P.word(w) for w in step["words"]])


@replay_step("rewrite")
def _(P, step):
    new = [(nm, P.word(w)) for nm, w in step["new_generators"]]
    names = [nm for nm, _ in new]
    old = [parse_word(w, names) for w in step["old_in_new"]]
    Q = rewrite_to_generating_set(P, new, old)
    if step.get("verified"):
        # the check ran when the trace was recorded; keep the flag
        Q = Presentation(Q.names, Q.relators, Q.provenance[:-1] + ({**Q.provenance[-1], "verified": True},))
    return Q


def replay(provenance: Sequence[dict]) -> Presentation:
    """Re-execute a construction trace from its ``source`` step."""
    if not provenance or provenance[0].get("op") != "source":
        raise MalformedInputError("provenance must start with a 'source' step")
    # constructions register their own replay handlers on import
    from . import constructions  # noqa: F401

    first = provenance[0]
    P = Presentation.create(first["generators"], first["relators"], first.get("label"))
    for step in provenance[1:]:
        fn = _REPLAY.get(step.get("op"))
        if fn is None:
            raise MalformedInputError(f"cannot replay step {step.get('op')!r}")
        P = fn(P, step)
    return P
