"""Todd-Coxeter coset enumeration (HLT with lookahead, and Felsch).

Cosets are numbered from 1; entry 0 means "undefined".  Column ``2i`` holds
generator ``i`` and column ``2i + 1`` its inverse.  Coincidences are
processed with a union-find forest and a queue of dead cosets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MalformedInputError
from .words import Word, cyclically_reduce

__all__ = ["todd_coxeter", "Completed", "Overflow", "CosetTable", "DEFAULT_MAX_COSETS"]

DEFAULT_MAX_COSETS = 5_000_000


@dataclass(frozen=True)
class Completed:
    index: int
    defined: int
    max_live: int
    strategy: str

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Overflow:
    live: int
    defined: int
    limit: int
    strategy: str
    reason: str = "max_cosets"

    def __bool__(self):
        return False


def _columns(w: Word) -> list[int]:
    return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w.ints]


class _Full(Exception):
    pass


class CosetTable:
    """Mutable coset table.  Use :func:`todd_coxeter` unless you need the table."""

    def __init__(self, rank: int, max_cosets: int):
        self.ncols = 2 * rank
        self.rows: list[list[int]] = [[0] * self.ncols, [0] * self.ncols]
        self.parent = [0, 1]
        self.live = 1
        self.max_live = 1
        self.max_cosets = max_cosets

    # -- union-find ---------------------------------------------------------

    def rep(self, c: int) -> int:
        p = self.parent
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    # -- basic operations ---------------------------------------------------

    def define(self, c: int, x: int) -> int:
        if self.live >= self.max_cosets:
            raise _Full
        n = len(self.rows)
        row = [0] * self.ncols
        row[x ^ 1] = c
        self.rows.append(row)
        self.parent.append(n)
        self.rows[c][x] = n
        self.live += 1
        if self.live > self.max_live:
            self.max_live = self.live
        return n

    def coincidence(self, a: int, b: int, deductions=None):
        rows, parent = self.rows, self.parent
        queue = []

        def merge(k, l):
            k, l = self.rep(k), self.rep(l)
            if k == l:
                return
            if k > l:
                k, l = l, k
            parent[l] = k
            queue.append(l)
            self.live -= 1

        merge(a, b)
        i = 0
        ncols = self.ncols
        while i < len(queue):
            g = queue[i]
            i += 1
            rg = rows[g]
            for x in range(ncols):
                d = rg[x]
                if d:
                    xi = x ^ 1
                    rows[d][xi] = 0
                    mu = self.rep(g)
                    nu = self.rep(d)
                    rmu, rnu = rows[mu], rows[nu]
                    if rmu[x]:
                        merge(nu, rmu[x])
                    elif rnu[xi]:
                        merge(mu, rnu[xi])
                    else:
                        rmu[x] = nu
                        rnu[xi] = mu
                        if deductions is not None:
                            deductions.append((mu, x))

    def scan_and_fill(self, c: int, w: list[int]):
        rows = self.rows
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j:
                nf = rows[f][w[i]]
                if not nf:
                    break
                f = nf
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i:
                nb = rows[b][w[j] ^ 1]
                if not nb:
                    break
                b = nb
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                rows[f][w[i]] = b
                rows[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])

    def scan(self, c: int, w: list[int], deductions=None):
        """Scan without defining; fill a gap of length one."""
        rows = self.rows
        f, b = c, c
        i, j = 0, len(w) - 1
        while i <= j:
            nf = rows[f][w[i]]
            if not nf:
                break
            f = nf
            i += 1
        if i > j:
            if f != b:
                self.coincidence(f, b, deductions)
            return
        while j >= i:
            nb = rows[b][w[j] ^ 1]
            if not nb:
                break
            b = nb
            j -= 1
        if j < i:
            self.coincidence(f, b, deductions)
        elif i == j:
            rows[f][w[i]] = b
            rows[b][w[i] ^ 1] = f
            if deductions is not None:
                deductions.append((f, w[i]))

    def compact(self):
        """Renumber live cosets consecutively, keeping their order."""
        parent = self.parent
        new = [0] * len(self.rows)
        k = 0
        for c in range(1, len(self.rows)):
            if parent[c] == c:
                k += 1
                new[c] = k
        rows = [[0] * self.ncols]
        for c in range(1, len(self.rows)):
            if parent[c] == c:
                rows.append([new[d] for d in self.rows[c]])
        self.rows = rows
        self.parent = list(range(k + 1))
        self.live = k
        return new

    def is_complete(self) -> bool:
        return all(all(self.rows[c]) for c in range(1, len(self.rows)) if self.parent[c] == c)


def _prepare(P, subgroup_gens):
    rels = []
    seen = set()
    for r in P.relators:
        r = cyclically_reduce(r)
        if r and r not in seen:
            seen.add(r)
            rels.append(r)
    rels.sort(key=len)
    for h in subgroup_gens:
        if h.max_index() >= P.rank:
            raise MalformedInputError("subgroup generator uses an undeclared generator")
    return [_columns(r) for r in rels], [_columns(h) for h in subgroup_gens if h]


def _hlt(P, subgroup_gens, max_cosets, max_defined):
    rels, subs = _prepare(P, subgroup_gens)
    T = CosetTable(P.rank, max_cosets)
    ncols = T.ncols

    def lookahead() -> list[int] | None:
        """Scan every relator at every coset without defining, then compact.

        Returns the renumbering, or ``None`` when nothing was freed."""
        before = T.live
        c = 1
        while c < len(T.rows):
            if T.parent[c] == c:
                for w in rels:
                    T.scan(c, w)
                    if T.parent[c] != c:
                        break
            c += 1
        if T.live >= before:
            return None
        return T.compact()

    def process(c):
        for w in rels:
            T.scan_and_fill(c, w)
            if T.parent[c] != c:
                return
        row = T.rows[c]
        for x in range(ncols):
            if not row[x]:
                T.define(c, x)

    def run_subgroup():
        for h in subs:
            T.scan_and_fill(1, h)

    while True:
        try:
            run_subgroup()
            break
        except _Full:
            if lookahead() is None:
                return T, False
    c = 1
    while c < len(T.rows):
        if len(T.rows) - 1 > max_defined:
            return T, False
        if T.parent[c] == c:
            try:
                process(c)
            except _Full:
                new = lookahead()
                if new is None:
                    return T, False
                # resume at the first surviving coset not yet finished
                nxt = next((new[d] for d in range(c, len(new)) if new[d]), len(T.rows))
                c = nxt
                continue
        c += 1
    return T, True


def _felsch(P, subgroup_gens, max_cosets, max_defined):
    rels, subs = _prepare(P, subgroup_gens)
    T = CosetTable(P.rank, max_cosets)
    ncols = T.ncols
    # every cyclic rotation of every relator and its inverse, keyed by first letter
    by_first: list[list[list[int]]] = [[] for _ in range(ncols)]
    for w in rels:
        inv = [x ^ 1 for x in reversed(w)]
        rots = set()
        for u in (w, inv):
            for i in range(len(u)):
                rots.add(tuple(u[i:] + u[:i]))
        for rot in sorted(rots):
            by_first[rot[0]].append(list(rot))
    deductions: list[tuple[int, int]] = []

    def process():
        while deductions:
            c, x = deductions.pop()
            c = T.rep(c)
            d = T.rows[c][x]
            for w in by_first[x]:
                T.scan(T.rep(c), w, deductions)
            if d:
                for w in by_first[x ^ 1]:
                    T.scan(T.rep(d), w, deductions)

    try:
        for h in subs:
            T.scan_and_fill(1, h)
    except _Full:
        return T, False
    for c0 in range(1, len(T.rows)):
        for x in range(ncols):
            if T.parent[c0] == c0 and T.rows[c0][x]:
                deductions.append((c0, x))
    for w in rels:
        T.scan(1, w, deductions)
    process()
    c = 1
    while c < len(T.rows):
        if T.parent[c] == c:
            for x in range(ncols):
                if T.parent[c] != c:
                    break
                if not T.rows[c][x]:
                    if len(T.rows) - 1 > max_defined:
                        return T, False
                    try:
                        T.define(c, x)
                    except _Full:
                        return T, False
                    deductions.append((c, x))
                    process()
        c += 1
    return T, True


def todd_coxeter(
    P,
    subgroup_gens: Sequence[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
    strategy: str = "hlt",
    max_defined: int | None = None,
) -> Completed | Overflow:
    """Index of ``<subgroup_gens>`` in the group presented by ``P``.

    ``max_cosets`` bounds the number of live cosets and ``max_defined`` the
    total number of definitions.  Returns :class:`Overflow` when a limit is
    hit.
    """
    if max_cosets < 1:
        raise MalformedInputError("max_cosets must be positive")
    if P.rank == 0:
        return Completed(1, 1, 1, strategy)
    if max_defined is None:
        max_defined = 20 * max_cosets
    if strategy == "hlt":
        T, ok = _hlt(P, subgroup_gens, max_cosets, max_defined)
    elif strategy == "felsch":
        T, ok = _felsch(P, subgroup_gens, max_cosets, max_defined)
    else:
        raise MalformedInputError(f"unknown strategy {strategy!r}")
    defined = len(T.rows) - 1
    if not ok:
        reason = "max_cosets" if T.live >= max_cosets else "max_defined"
        return Overflow(T.live, defined, max_cosets, strategy, reason)
    return Completed(T.live, defined, T.max_live, strategy)
