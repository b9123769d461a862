"""Permutation groups: word evaluation, Schreier-Sims, membership and factorization.

Permutations act on the right: ``p * q`` means "apply p, then q", so a word
``g1 g2 ... gn`` evaluates to the permutation sending ``i`` to
``gn(...g2(g1(i)))``.  Internally a permutation is a numpy integer array ``a``
with ``a[i]`` the image of point ``i``.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetExhausted, MalformedInputError, NotAMemberError
from .words import Word

__all__ = [
    "Permutation",
    "GroupHom",
    "StabilizerChain",
    "evaluate_word",
    "schreier_sims",
    "group_order",
    "verify_presentation_hom",
    "direct_power_hom",
    "embed_factor",
    "factor_element",
    "shortest_word",
]


def _as_array(images) -> np.ndarray:
    a = np.asarray(images, dtype=np.intp)
    if a.ndim != 1:
        raise MalformedInputError("permutation images must be one-dimensional")
    n = len(a)
    if n and (a.min() < 0 or a.max() >= n or len(np.unique(a)) != n):
        raise MalformedInputError("not a permutation")
    return a


class Permutation:
    """An immutable permutation of ``{0, ..., n-1}``."""

    __slots__ = ("array",)

    def __init__(self, images):
        a = _as_array(images)
        a.setflags(write=False)
        self.array = a

    @classmethod
    def _wrap(cls, a: np.ndarray) -> Permutation:
        p = cls.__new__(cls)
        a.setflags(write=False)
        p.array = a
        return p

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._wrap(np.arange(n, dtype=np.intp))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], n: int | None = None) -> Permutation:
        if n is None:
            n = 1 + max((max(c) for c in cycles if c), default=-1)
        a = np.arange(n, dtype=np.intp)
        seen = set()
        for c in cycles:
            for x in c:
                if x in seen or not 0 <= x < n:
                    raise MalformedInputError(f"bad cycle {c!r}")
                seen.add(x)
            for i, x in enumerate(c):
                a[x] = c[(i + 1) % len(c)]
        return cls._wrap(a)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Permutation:
        """Parse cycle notation such as ``(0 1 2)(3 4)``; ``()`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+([\s,]+\d+)*)?\s*\)\s*)+", text):
            raise MalformedInputError(f"cannot parse permutation {text!r}")
        cycles = [
            [int(x) for x in re.split(r"[\s,]+", body.strip())]
            for body in re.findall(r"\(([^)]*)\)", text)
            if body.strip()
        ]
        return cls.from_cycles(cycles, n)

    @property
    def degree(self) -> int:
        return len(self.array)

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation._wrap(other.array[self.array])

    def inverse(self) -> Permutation:
        inv = np.empty_like(self.array)
        inv[self.array] = np.arange(len(self.array), dtype=np.intp)
        return Permutation._wrap(inv)

    def __pow__(self, n: int) -> Permutation:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = Permutation.identity(self.degree)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, point: int) -> int:
        return int(self.array[point])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.array, np.arange(len(self.array))))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.array)):
            if i in seen or self.array[i] == i:
                continue
            c = [i]
            seen.add(i)
            j = int(self.array[i])
            while j != i:
                c.append(j)
                seen.add(j)
                j = int(self.array[j])
            out.append(tuple(c))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def support(self) -> set[int]:
        return set(np.nonzero(self.array != np.arange(len(self.array)))[0].tolist())

    def to_list(self) -> list[int]:
        return self.array.tolist()

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.array, other.array)

    def __hash__(self) -> int:
        return hash(self.array.tobytes())

    def __repr__(self) -> str:
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles()) or "()"
        return f"Permutation.parse({cyc!r}, {self.degree})"


@dataclass(frozen=True)
class GroupHom:
    """Images of the generators of a free group in a symmetric group."""

    images: tuple[Permutation, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        degrees = {p.degree for p in self.images}
        if len(degrees) > 1:
            raise MalformedInputError(f"generator images have different degrees {sorted(degrees)}")
        if self.names is not None and len(self.names) != len(self.images):
            raise MalformedInputError("names and images differ in length")

    @property
    def degree(self) -> int:
        return self.images[0].degree if self.images else 0

    @property
    def rank(self) -> int:
        return len(self.images)


def _evaluate_arrays(arrays, inverses, w: Word, degree: int) -> np.ndarray:
    cur = np.arange(degree, dtype=np.intp)
    ints = w.ints
    i = 0
    n = len(ints)
    while i < n:
        x = ints[i]
        j = i
        while j < n and ints[j] == x:
            j += 1
        g = arrays[x - 1] if x > 0 else inverses[-x - 1]
        run = j - i
        if run == 1:
            cur = g[cur]
        else:
            p = g
            while run:
                if run & 1:
                    cur = p[cur]
                p = p[p]
                run >>= 1
        i = j
    return cur


def evaluate_word(h: GroupHom, w: Word) -> Permutation:
    """Image of ``w`` under ``h``; ``evaluate(u*v) == evaluate(u) * evaluate(v)``."""
    if w.max_index() >= h.rank:
        raise MalformedInputError(f"word uses generator {w.max_index()} but hom has rank {h.rank}")
    arrays = [p.array for p in h.images]
    inverses = [p.inverse().array for p in h.images]
    return Permutation._wrap(_evaluate_arrays(arrays, inverses, w, h.degree))


class WordEvaluator:
    """Repeated word evaluation against fixed generator arrays."""

    def __init__(self, arrays: Sequence[np.ndarray]):
        self.arrays = [np.asarray(a, dtype=np.intp) for a in arrays]
        self.inverses = []
        for a in self.arrays:
            inv = np.empty_like(a)
            inv[a] = np.arange(len(a), dtype=np.intp)
            self.inverses.append(inv)
        self.degree = len(self.arrays[0]) if self.arrays else 0

    def __call__(self, w: Word) -> np.ndarray:
        if w.max_index() >= len(self.arrays):
            raise MalformedInputError("word uses a generator without an image")
        return _evaluate_arrays(self.arrays, self.inverses, w, self.degree)

    def is_identity(self, w: Word) -> bool:
        return bool(np.array_equal(self(w), np.arange(self.degree)))


# ---------------------------------------------------------------------------
# straight-line programs for word labels


class _Slp:
    """Words for chain elements, kept as references to avoid exponential blowup."""

    def __init__(self, rank: int):
        # node i: None for a generator leaf, else list of (node, sign)
        self.nodes: list = [None] * rank
        self._cache: dict[int, tuple[int, ...]] = {}

    def add(self, parts) -> int:
        self.nodes.append(list(parts))
        return len(self.nodes) - 1

    def expand(self, node: int, sign: int, budget: int) -> tuple[int, ...]:
        base = self._expand(node, budget)
        if sign > 0:
            return base
        return tuple(-x for x in reversed(base))

    def _expand(self, node: int, budget: int) -> tuple[int, ...]:
        hit = self._cache.get(node)
        if hit is not None:
            return hit
        parts = self.nodes[node]
        if parts is None:
            out = (node + 1,)
        else:
            acc: list[int] = []
            for child, sign in parts:
                for y in self.expand(child, sign, budget):
                    if acc and acc[-1] == -y:
                        acc.pop()
                    else:
                        acc.append(y)
                if len(acc) > budget:
                    raise BudgetExhausted(f"word label longer than budget {budget}")
            out = tuple(acc)
        self._cache[node] = out
        return out


@dataclass
class _Level:
    base_point: int
    gens: list = field(default_factory=list)  # (array, inverse array, slp node)
    orbit: dict = field(default_factory=dict)  # point -> (array u, inverse of u, slp node)
    queue: list = field(default_factory=list)  # orbit points in BFS order


class StabilizerChain:
    """Base and strong generating set produced by :func:`schreier_sims`."""

    def __init__(self, degree: int, rank: int, generators: Sequence[np.ndarray], track_words: bool):
        self.degree = degree
        self.rank = rank
        self.generators = [np.asarray(g, dtype=np.intp) for g in generators]
        self.levels: list[_Level] = []
        self.track_words = track_words
        self.slp = _Slp(rank) if track_words else None
        self._identity = np.arange(degree, dtype=np.intp)

    @property
    def base(self) -> list[int]:
        return [lv.base_point for lv in self.levels]

    def order(self) -> int:
        return math.prod(len(lv.orbit) for lv in self.levels)

    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    def strong_generators(self) -> list[Permutation]:
        seen = {}
        for lv in self.levels:
            for g, _, _ in lv.gens:
                seen.setdefault(g.tobytes(), g)
        return [Permutation._wrap(g.copy()) for g in seen.values()]

    def _sift(self, h: np.ndarray, start: int = 0):
        for j in range(start, len(self.levels)):
            lv = self.levels[j]
            pt = int(h[lv.base_point])
            entry = lv.orbit.get(pt)
            if entry is None:
                return h, j
            h = entry[1][h]
        return h, len(self.levels)

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        h, j = self._sift(p.array)
        return j == len(self.levels) and np.array_equal(h, self._identity)

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    def random_element(self, rng) -> Permutation:
        h = self._identity
        for lv in reversed(self.levels):
            pts = lv.queue
            u = lv.orbit[pts[rng.randrange(len(pts))]][0]
            h = u[h]
        return Permutation._wrap(h.copy())


def _extend_orbit(level: _Level, chain: StabilizerChain):
    """Grow the orbit/transversal of ``level`` under its current generators."""
    i = 0
    queue = level.queue
    while i < len(queue):
        pt = queue[i]
        u, uinv, node = level.orbit[pt]
        for g, ginv, gnode in level.gens:
            img = int(g[pt])
            if img not in level.orbit:
                v = g[u]
                vinv = uinv[ginv]
                vnode = None
                if chain.slp is not None:
                    vnode = chain.slp.add([(node, 1), (gnode, 1)]) if node is not None else gnode
                level.orbit[img] = (v, vinv, vnode)
                queue.append(img)
        i += 1


def _first_moved(a: np.ndarray) -> int:
    moved = np.nonzero(a != np.arange(len(a)))[0]
    return int(moved[0]) if len(moved) else -1


def _new_level(chain: StabilizerChain, point: int) -> _Level:
    lv = _Level(point)
    ident = chain._identity
    lv.orbit[point] = (ident, ident, None)
    lv.queue.append(point)
    return lv


def schreier_sims(gens: Sequence[Permutation], track_words: bool = False) -> StabilizerChain:
    """Deterministic Schreier-Sims.

    Base points are chosen as the first point moved by the element that forces
    a new level.  With ``track_words`` every transversal element remembers a
    word in ``gens`` (used by :func:`factor_element`).
    """
    gens = list(gens)
    if not gens:
        raise MalformedInputError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise MalformedInputError("generators have different degrees")
    arrays = [g.array for g in gens]
    chain = StabilizerChain(degree, len(gens), arrays, track_words)
    ident = chain._identity

    nontrivial = [(idx, a) for idx, a in enumerate(arrays) if not np.array_equal(a, ident)]
    for idx, a in nontrivial:
        if all(int(a[lv.base_point]) == lv.base_point for lv in chain.levels):
            chain.levels.append(_new_level(chain, _first_moved(a)))
    for idx, a in nontrivial:
        ainv = _inv(a)
        for lv in chain.levels:
            lv.gens.append((a, ainv, idx))
            if int(a[lv.base_point]) != lv.base_point:
                break
    if not chain.levels:
        return chain
    for lv in chain.levels:
        _extend_orbit(lv, chain)

    checked: list[set] = [set()]
    i = len(chain.levels) - 1
    while i >= 0:
        while len(checked) < len(chain.levels):
            checked.append(set())
        lv = chain.levels[i]
        restart = False
        for pt in list(lv.queue):
            u, uinv, unode = lv.orbit[pt]
            for gi in range(len(lv.gens)):
                if (pt, gi) in checked[i]:
                    continue
                checked[i].add((pt, gi))
                g, ginv, gnode = lv.gens[gi]
                img = int(g[pt])
                v, vinv, vnode = lv.orbit[img]
                sg = vinv[g[u]]
                if np.array_equal(sg, ident):
                    continue
                h, j = chain._sift(sg, i + 1)
                if j == len(chain.levels) and np.array_equal(h, ident):
                    continue
                # residue h is a new strong generator for levels i+1..j
                node = None
                if chain.slp is not None:
                    parts = [(gnode, 1)]
                    if unode is not None:
                        parts.insert(0, (unode, 1))
                    if vnode is not None:
                        parts.append((vnode, -1))
                    node = chain.slp.add(parts)
                    # account for the sifting that turned sg into h
                    node = _sift_node(chain, sg, i + 1, j, node)
                hinv = np.empty_like(h)
                hinv[h] = np.arange(degree, dtype=np.intp)
                if j == len(chain.levels):
                    chain.levels.append(_new_level(chain, _first_moved(h)))
                    checked.append(set())
                for t in range(i + 1, j + 1):
                    chain.levels[t].gens.append((h, hinv, node))
                    _extend_orbit(chain.levels[t], chain)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return chain


def _sift_node(chain: StabilizerChain, sg: np.ndarray, start: int, stop: int, node: int) -> int:
    """SLP node for the residue of sifting ``sg`` from level ``start`` to ``stop``."""
    parts = [(node, 1)]
    h = sg
    for t in range(start, stop):
        lv = chain.levels[t]
        pt = int(h[lv.base_point])
        u, uinv, unode = lv.orbit[pt]
        h = uinv[h]
        if unode is not None:
            parts.append((unode, -1))
    return chain.slp.add(parts) if len(parts) > 1 else node


def group_order(gens: Sequence[Permutation]) -> int:
    return schreier_sims(gens).order()


def factor_element(chain: StabilizerChain, target: Permutation, budget: int = 10**6) -> Word:
    """A word in the chain's original generators evaluating to ``target``.

    The chain must have been built with ``track_words=True``.  Raises
    :class:`NotAMemberError` for non-members and :class:`BudgetExhausted` when
    the word would exceed ``budget`` letters.
    """
    if chain.slp is None:
        raise MalformedInputError("chain was built without word tracking")
    if target.degree != chain.degree:
        raise NotAMemberError("degree mismatch")
    h = target.array
    nodes = []
    for lv in chain.levels:
        pt = int(h[lv.base_point])
        entry = lv.orbit.get(pt)
        if entry is None:
            raise NotAMemberError("target is not in the group")
        h = entry[1][h]
        nodes.append(entry[2])
    if not np.array_equal(h, chain._identity):
        raise NotAMemberError("target is not in the group")
    out: list[int] = []
    for node in reversed(nodes):
        if node is None:
            continue
        for y in chain.slp.expand(node, 1, budget):
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
        if len(out) > budget:
            raise BudgetExhausted(f"factorization longer than budget {budget}")
    w = Word.from_ints(out)
    check = _evaluate_arrays(
        chain.generators,
        [_inv(a) for a in chain.generators],
        w,
        chain.degree,
    )
    if not np.array_equal(check, target.array):
        raise AssertionError("factorization does not evaluate to the target")
    return w


def _inv(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    inv[a] = np.arange(len(a), dtype=np.intp)
    return inv


def shortest_word(gens: Sequence[Permutation], target: Permutation, budget: int = 200_000) -> Word:
    """Shortest word for ``target`` by bidirectional breadth-first search.

    ``budget`` caps the number of group elements stored on either side.
    """
    n = target.degree
    ident = np.arange(n, dtype=np.intp)
    moves = []
    for i, g in enumerate(gens):
        ginv = _inv(g.array)
        moves.append((i + 1, g.array, ginv))
        moves.append((-(i + 1), ginv, g.array))
    if np.array_equal(target.array, ident):
        return Word.identity()
    # forward: words w with value p; backward: words v with value target * v^-1
    fwd = {ident.tobytes(): ()}
    bwd = {target.array.tobytes(): ()}
    fq = deque([ident])
    bq = deque([target.array])
    while fq or bq:
        for q, seen, other, forward in ((fq, fwd, bwd, True), (bq, bwd, fwd, False)):
            for _ in range(len(q)):
                p = q.popleft()
                key = p.tobytes()
                w = seen[key]
                for x, g, ginv in moves:
                    np_ = g[p] if forward else ginv[p]
                    nw = w + (x,)
                    k = np_.tobytes()
                    if k in seen:
                        continue
                    seen[k] = nw
                    if k in other:
                        if forward:
                            fwdw, bwdw = nw, other[k]
                        else:
                            fwdw, bwdw = other[k], nw
                        # target = fwd * reverse(bwd)
                        return Word.from_ints(fwdw + tuple(reversed(bwdw)))
                    q.append(np_)
                    if len(seen) > budget:
                        raise BudgetExhausted(f"search exceeded {budget} elements")
    raise NotAMemberError("target is not in the group")


def verify_presentation_hom(presentation, h: GroupHom, expected_order: int | None = None) -> dict:
    """Check that ``h`` kills every relator and report the order of its image."""
    ev = WordEvaluator([p.array for p in h.images])
    failures = [i for i, r in enumerate(presentation.relators) if not ev.is_identity(r)]
    order = schreier_sims(list(h.images)).order() if h.images else 1
    report = {
        "relators_trivial": not failures,
        "failed_relators": failures,
        "order": order,
        "expected_order": expected_order,
    }
    report["order_matches"] = expected_order is None or order == expected_order
    report["ok"] = report["relators_trivial"] and report["order_matches"]
    return report


def embed_factor(p: Permutation, j: int, m: int) -> Permutation:
    """The permutation acting as ``p`` on block ``j`` of ``m`` disjoint copies."""
    n = p.degree
    a = np.arange(n * m, dtype=np.intp)
    a[j * n : (j + 1) * n] = p.array + j * n
    return Permutation._wrap(a)


def direct_power_hom(h: GroupHom, m: int) -> GroupHom:
    """Generators of ``G^m`` on ``m`` disjoint copies of the point set.

    Generator ``j * rank + s`` is generator ``s`` acting on block ``j``.
    """
    if m < 1:
        raise MalformedInputError("m must be positive")
    if m == 1:
        return h
    images = [embed_factor(p, j, m) for j in range(m) for p in h.images]
    names = None
    if h.names is not None:
        names = tuple(f"{nm}_{j + 1}" for j in range(m) for nm in h.names)
    return GroupHom(tuple(images), names)
