"""Words in a free group.

A word is stored as a tuple of nonzero integers: generator ``i`` (0-based) is
the integer ``i + 1`` and its inverse is ``-(i + 1)``.  Words are always kept
freely reduced and are immutable, so they can be shared between presentations.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import MalformedInputError

__all__ = [
    "Word",
    "free_reduce",
    "substitute",
    "commutator",
    "exponent_sum_vector",
    "cyclically_reduce",
    "cyclic_conjugates",
]


def _reduce_ints(ints: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in ints:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word over generators ``0, 1, 2, ...``.

    >>> a, b = Word.gen(0), Word.gen(1)
    >>> (a * b * b.inverse() * a).letters
    ((0, 1), (0, 1))
    """

    __slots__ = ("_ints", "_hash")

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        ints = []
        for letter in letters:
            try:
                index, sign = letter
            except (TypeError, ValueError):
                raise MalformedInputError(f"bad letter {letter!r}") from None
            if not isinstance(index, int) or index < 0 or sign not in (1, -1):
                raise MalformedInputError(f"bad letter {letter!r}")
            ints.append((index + 1) * sign)
        self._ints = _reduce_ints(ints)
        self._hash = None

    @classmethod
    def from_ints(cls, ints: Iterable[int]) -> Word:
        """Build from signed 1-based integers, reducing as needed."""
        w = cls.__new__(cls)
        ints = tuple(ints)
        if any(not isinstance(x, int) or x == 0 for x in ints):
            raise MalformedInputError("letters must be nonzero integers")
        w._ints = _reduce_ints(ints)
        w._hash = None
        return w

    @classmethod
    def _trusted(cls, ints: tuple[int, ...]) -> Word:
        w = cls.__new__(cls)
        w._ints = ints
        w._hash = None
        return w

    @classmethod
    def gen(cls, index: int, power: int = 1) -> Word:
        if index < 0:
            raise MalformedInputError(f"negative generator index {index}")
        x = index + 1 if power >= 0 else -(index + 1)
        return cls._trusted((x,) * abs(power))

    @classmethod
    def identity(cls) -> Word:
        return _EMPTY

    @property
    def ints(self) -> tuple[int, ...]:
        return self._ints

    @property
    def letters(self) -> tuple[tuple[int, int], ...]:
        return tuple((abs(x) - 1, 1 if x > 0 else -1) for x in self._ints)

    def max_index(self) -> int:
        """Largest generator index occurring, or -1 for the empty word."""
        return max((abs(x) for x in self._ints), default=0) - 1

    def generators(self) -> set[int]:
        return {abs(x) - 1 for x in self._ints}

    def inverse(self) -> Word:
        return Word._trusted(tuple(-x for x in reversed(self._ints)))

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        a, b = self._ints, other._ints
        i = 0
        n = min(len(a), len(b))
        while i < n and a[len(a) - 1 - i] == -b[i]:
            i += 1
        return Word._trusted(a[: len(a) - i] + b[i:])

    def __pow__(self, n: int) -> Word:
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0 or not self._ints:
            return _EMPTY
        # conjugate-reduce so the power stays reduced
        a = self._ints
        i = 0
        while i < len(a) - 1 - i and a[i] == -a[len(a) - 1 - i]:
            i += 1
        head, core, tail = a[:i], a[i : len(a) - i], a[len(a) - i :]
        return Word._trusted(head + core * n + tail)

    def __len__(self) -> int:
        return len(self._ints)

    def __bool__(self) -> bool:
        return bool(self._ints)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self._ints == other._ints

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("Word", self._ints))
        return self._hash

    def __repr__(self) -> str:
        return f"Word.from_ints({list(self._ints)!r})"

    def exponent_sums(self, k: int) -> tuple[int, ...]:
        return exponent_sum_vector(self, k)

    def substitute(self, mapping: Sequence[Word]) -> Word:
        return substitute(self, mapping)


_EMPTY = Word._trusted(())


def free_reduce(letters: Iterable[tuple[int, int]], rank: int | None = None) -> Word:
    """Return the freely reduced word equal to ``letters`` in the free group.

    ``rank``, when given, bounds the admissible generator indices.
    """
    w = Word(letters)
    if rank is not None and w.max_index() >= rank:
        raise MalformedInputError(f"generator index {w.max_index()} out of range for rank {rank}")
    return w


def substitute(u: Word, mapping: Sequence[Word]) -> Word:
    """Image of ``u`` under the homomorphism sending generator i to ``mapping[i]``."""
    images = {}
    out: list[int] = []
    for x in u.ints:
        i = abs(x) - 1
        if i >= len(mapping) or mapping[i] is None:
            raise MalformedInputError(f"generator {i} has no image")
        key = x
        img = images.get(key)
        if img is None:
            img = mapping[i].ints if x > 0 else mapping[i].inverse().ints
            images[key] = img
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return Word._trusted(tuple(out))


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def exponent_sum_vector(u: Word, k: int) -> tuple[int, ...]:
    vec = [0] * k
    for x in u.ints:
        i = abs(x) - 1
        if i >= k:
            raise MalformedInputError(f"generator {i} outside alphabet of size {k}")
        vec[i] += 1 if x > 0 else -1
    return tuple(vec)


def cyclically_reduce(u: Word) -> Word:
    a = u.ints
    i = 0
    while i < len(a) - 1 - i and a[i] == -a[len(a) - 1 - i]:
        i += 1
    return Word._trusted(a[i : len(a) - i])


def cyclic_conjugates(u: Word) -> list[Word]:
    """All cyclic rotations of the cyclic reduction of ``u`` (with repeats removed)."""
    a = cyclically_reduce(u).ints
    seen = []
    for i in range(len(a) or 1):
        r = Word._trusted(a[i:] + a[:i])
        if r not in seen:
            seen.append(r)
    return seen
