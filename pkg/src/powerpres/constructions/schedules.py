"""Generator-count schedules and closed-form relator counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from ..errors import MalformedInputError

__all__ = [
    "GeneratorBoundSchedule",
    "predicted_counts",
    "simulate_counts",
    "naive_counts",
    "sigma",
    "tau",
    "bp_counts",
]


def _ceil_log2(m: int) -> int:
    return (m - 1).bit_length() if m > 1 else 0


@dataclass(frozen=True)
class GeneratorBoundSchedule:
    """How many generators the pipeline keeps for ``G^m``.

    ``fn(m)`` must be nondecreasing with ``fn(1) == base_rank``.
    """

    base_rank: int
    fn: Callable[[int], int]
    name: str = "custom"

    def __post_init__(self):
        if self.base_rank < 1:
            raise MalformedInputError("base rank must be positive")
        if self.fn(1) != self.base_rank:
            raise MalformedInputError(f"bound(1) = {self.fn(1)}, expected {self.base_rank}")

    def bound(self, m: int) -> int:
        if m < 1:
            raise MalformedInputError("m must be positive")
        return self.fn(m)

    def __call__(self, m: int) -> int:
        return self.bound(m)

    @classmethod
    def binary(cls, r: int) -> GeneratorBoundSchedule:
        """``r (1 + ceil(log2(m + 1)))`` for ``m >= 2``; ``r`` at ``m = 1``."""
        return cls(r, lambda m: r if m == 1 else r * (1 + m.bit_length()), "binary")

    @classmethod
    def constant(cls, k: int) -> GeneratorBoundSchedule:
        return cls(k, lambda m: k, "constant")

    @classmethod
    def logarithmic(cls, k: int) -> GeneratorBoundSchedule:
        """``k ceil(log2 m)``, and ``k`` for ``m <= 2``."""
        return cls(k, lambda m: k * max(1, _ceil_log2(m)), "logarithmic")

    @classmethod
    def patterns(cls, k: int) -> GeneratorBoundSchedule:
        """``k (1 + ceil(log2 m))``: diagonal plus one group per binary digit."""
        return cls(k, lambda m: k * (1 + _ceil_log2(m)), "patterns")

    @classmethod
    def thresholds(cls, base_rank: int, table: Mapping[int, int], name: str = "table") -> GeneratorBoundSchedule:
        """Step function: ``bound(m)`` is the value of the least key ``>= m``.

        ``table`` maps an upper limit on ``m`` to a generator count, e.g.
        ``{1: 2, 19: 2, 1668: 3}``.  Beyond the last key the last value is used.
        """
        limits = sorted(table.items())
        if not limits:
            raise MalformedInputError("empty threshold table")

        def fn(m):
            if m == 1:
                return base_rank
            for lim, val in limits:
                if m <= lim:
                    return val
            return limits[-1][1]

        return cls(base_rank, fn, name)

    @classmethod
    def from_spec(cls, spec: str, k: int) -> GeneratorBoundSchedule:
        """Parse ``default``, ``binary``, ``constant``, ``logarithmic``,
        ``patterns`` or a table ``"19:2,1668:3"``."""
        spec = spec.strip()
        if spec in ("default", "binary"):
            return cls.binary(k)
        if spec in ("constant", "constant-k", "lemma"):
            return cls.constant(k)
        if spec in ("logarithmic", "theorem"):
            return cls.logarithmic(k)
        if spec == "patterns":
            return cls.patterns(k)
        try:
            table = {}
            for part in spec.split(","):
                lim, val = part.split(":")
                table[int(lim)] = int(val)
        except ValueError:
            raise MalformedInputError(f"unknown schedule {spec!r}") from None
        return cls.thresholds(k, table, "table:" + spec)


def sigma(n: int) -> int:
    """``1 + 1^2 + ... + (n-1)^2``."""
    return 1 + n * (n - 1) * (2 * n - 1) // 6


def tau(n: int) -> int:
    return n * n - 1


def predicted_counts(k: int, l: int, n: int, regime: str = "lemma") -> tuple[int, int]:
    """Closed-form ``(generators, relators)`` for ``G^(2^n)``.

    Regimes: ``lemma`` (constant ``k`` generators), ``theorem`` (``nk``
    generators, ``n >= 2``), ``patterns`` (diagonal plus one group per
    binary digit, pattern elimination) and ``naive`` (direct product of
    ``2^n`` copies).
    """
    if k < 1 or l < 0 or n < 0:
        raise MalformedInputError("need k >= 1, l >= 0, n >= 0")
    if regime == "lemma":
        return k, n * (k * k + 2 * k) + l
    if regime == "theorem":
        if n < 2:
            raise MalformedInputError("the theorem closed form needs n >= 2")
        return n * k, sigma(n) * k * k + tau(n) * k + l
    if regime == "patterns":
        return (n + 1) * k, l + k * k * n * (n + 1) * (2 * n + 1) // 6 + k * n * (n + 1) // 2
    if regime == "naive":
        return naive_counts(k, l, 2**n)
    raise MalformedInputError(f"unknown regime {regime!r}")


def naive_counts(k: int, l: int, m: int) -> tuple[int, int]:
    """Generators and relators of the direct product of ``m`` copies."""
    return k * m, m * l + k * k * m * (m - 1) // 2


def simulate_counts(
    k: int, l: int, n: int, schedule: GeneratorBoundSchedule, reduction_cost: str = "rewrite"
) -> list[tuple[int, int]]:
    """Stage-by-stage counts ``[(gens, rels)]`` for stages ``0..n``.

    Each stage squares (``+K^2 + K`` relators, ``2K`` generators) and then,
    if ``schedule.bound(2^s) < 2K``, cuts down to the bound.  A ``rewrite``
    costs one relator per new generator, an ``eliminate`` costs nothing.
    """
    if reduction_cost not in ("rewrite", "eliminate"):
        raise MalformedInputError(f"unknown reduction cost {reduction_cost!r}")
    K, R = k, l
    log = [(K, R)]
    for s in range(1, n + 1):
        R += K * K + K
        K *= 2
        t = schedule.bound(2**s)
        if t < K:
            if reduction_cost == "rewrite":
                R += t
            K = t
        log.append((K, R))
    return log


def bp_counts(n: int) -> tuple[int, int]:
    """``(4, 24n - 5)`` for ``B_p^(2^n)``, ``n >= 1``, and ``(3, 3)`` at ``n = 0``."""
    if n == 0:
        return 3, 3
    return 4, 24 * n - 5
