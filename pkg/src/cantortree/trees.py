"""Exact enumeration and counting of tree levels.

Levels are materialized as bit-packed integers in lexicographic order.
Counting never enumerates: it runs a per-level dynamic program over live
stepper states, which stays exact at depths far beyond the enumeration
limit and absorbs overlap between union branches for free (each word is
counted once, at the single state it drives the product automaton to).
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from . import dsl
from .classes import ClassExpr, RawTree, Stepper, compile_stepper, run_stepper
from .errors import DepthLimitError, NotExtendibleError
from .words import pack, unpack

DEFAULT_ENUM_LIMIT = 24
DEFAULT_COUNT_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Level:
    """The set of extendible nodes of one length, or just its size."""

    depth: int
    packed: Optional[tuple[int, ...]]
    cardinality: int

    @property
    def words(self) -> tuple[str, ...]:
        if self.packed is None:
            raise ValueError("counting-only level has no materialized words")
        return tuple(unpack(bits, self.depth) for bits in self.packed)


def _check_enum_limit(n: int, limit: int):
    if n > limit:
        raise DepthLimitError(f"depth {n} exceeds the enumeration limit {limit}")


@lru_cache(maxsize=16)
def _level_rows(e: ClassExpr, n: int) -> tuple[tuple[int, ...], tuple]:
    """Packed words and stepper states at depth n, both sorted lexicographically."""
    stepper = compile_stepper(e)
    words = [0]
    states = [stepper.initial]
    step = stepper.step
    for _ in range(n):
        nwords: list[int] = []
        nstates: list = []
        for bits, s in zip(words, states):
            base = bits << 1
            s0 = step(s, 0)
            if s0 is not None:
                nwords.append(base)
                nstates.append(s0)
            s1 = step(s, 1)
            if s1 is not None:
                nwords.append(base | 1)
                nstates.append(s1)
        words, states = nwords, nstates
    return tuple(words), tuple(states)


def levels(e: ClassExpr, n: int, limit: int = DEFAULT_ENUM_LIMIT) -> Level:
    """All extendible nodes of length n, lexicographically ordered."""
    _check_enum_limit(n, limit)
    words, _ = _level_rows(e, n)
    return Level(n, words, len(words))


def level_iter(e: ClassExpr, max_depth: int,
               limit: int = DEFAULT_ENUM_LIMIT) -> Iterator[tuple[tuple[int, ...], tuple]]:
    """Yield (packed words, states) for depths 0..max_depth without recomputing."""
    _check_enum_limit(max_depth, limit)
    stepper = compile_stepper(e)
    words: list[int] = [0]
    states: list = [stepper.initial]
    step = stepper.step
    yield tuple(words), tuple(states)
    for _ in range(max_depth):
        nwords: list[int] = []
        nstates: list = []
        for bits, s in zip(words, states):
            base = bits << 1
            s0 = step(s, 0)
            if s0 is not None:
                nwords.append(base)
                nstates.append(s0)
            s1 = step(s, 1)
            if s1 is not None:
                nwords.append(base | 1)
                nstates.append(s1)
        words, states = nwords, nstates
        yield tuple(words), tuple(states)


def theta_level_iter(e: ClassExpr, max_depth: int,
                     limit: int = DEFAULT_ENUM_LIMIT) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield (packed words, branching counts) per depth up to max_depth.

    The branching count of a word is the number of its nonempty prefixes
    whose sibling is extendible; it grows by one exactly when the sibling
    of the appended bit stays on the tree.
    """
    _check_enum_limit(max_depth, limit)
    stepper = compile_stepper(e)
    words: list[int] = [0]
    states: list = [stepper.initial]
    thetas: list[int] = [0]
    step = stepper.step
    yield tuple(words), tuple(thetas)
    for _ in range(max_depth):
        nwords: list[int] = []
        nstates: list = []
        nthetas: list[int] = []
        for bits, s, t in zip(words, states, thetas):
            base = bits << 1
            s0 = step(s, 0)
            s1 = step(s, 1)
            branch = (s0 is not None) and (s1 is not None)
            if s0 is not None:
                nwords.append(base)
                nstates.append(s0)
                nthetas.append(t + branch)
            if s1 is not None:
                nwords.append(base | 1)
                nstates.append(s1)
                nthetas.append(t + branch)
        words, states, thetas = nwords, nstates, nthetas
        yield tuple(words), tuple(thetas)


def _dp_count(stepper: Stepper, start_states: dict, steps: int) -> int:
    counts = start_states
    step = stepper.step
    for _ in range(steps):
        nxt: dict = {}
        for s, c in counts.items():
            s0 = step(s, 0)
            if s0 is not None:
                nxt[s0] = nxt.get(s0, 0) + c
            s1 = step(s, 1)
            if s1 is not None:
                nxt[s1] = nxt.get(s1, 0) + c
        counts = nxt
    return sum(counts.values())


@lru_cache(maxsize=4096)
def count(e: ClassExpr, n: int, limit: int = DEFAULT_COUNT_LIMIT) -> int:
    """The exact number of extendible nodes of length n."""
    if n > limit:
        raise DepthLimitError(f"depth {n} exceeds the counting limit {limit}")
    stepper = compile_stepper(e)
    return _dp_count(stepper, {stepper.initial: 1}, n)


def extensions_count(e: ClassExpr, sigma: str, n: int,
                     limit: int = DEFAULT_COUNT_LIMIT) -> int:
    """The number of length-n extendible nodes extending sigma."""
    if n < len(sigma):
        raise ValueError("n must be at least |sigma|")
    if n > limit:
        raise DepthLimitError(f"depth {n} exceeds the counting limit {limit}")
    stepper = compile_stepper(e)
    state = run_stepper(stepper, sigma)
    if state is None:
        raise NotExtendibleError(f"{sigma!r} is not extendible")
    return _dp_count(stepper, {state: 1}, n - len(sigma))


# ---------------------------------------------------------------------------
# Raw trees (dead ends allowed): membership-driven enumeration only.


def raw_levels(t: RawTree, n: int) -> Level:
    """Level n of a raw tree; valid because raw trees are downward closed."""
    if n > t.max_depth:
        raise DepthLimitError(f"depth {n} exceeds the tree's declared depth {t.max_depth}")
    words = [""]
    for _ in range(n):
        words = [w + b for w in words for b in "01" if t.membership(w + b)]
    packed = tuple(pack(w)[0] for w in words)
    return Level(n, packed, len(packed))


def raw_extensions_count(t: RawTree, sigma: str, n: int) -> int:
    """The number of length-n members of the raw tree extending sigma."""
    if n < len(sigma):
        raise ValueError("n must be at least |sigma|")
    if n > t.max_depth:
        raise DepthLimitError(f"depth {n} exceeds the tree's declared depth {t.max_depth}")
    if not t.membership(sigma):
        raise NotExtendibleError(f"{sigma!r} is not in the raw tree")
    words = [sigma]
    for _ in range(n - len(sigma)):
        words = [w + b for w in words for b in "01" if t.membership(w + b)]
    return len(words)


# ---------------------------------------------------------------------------
# Persistent count cache: one "hash depth count" record per line.


def expr_key(e: ClassExpr) -> str:
    """Stable content hash of an expression (over its canonical text)."""
    return hashlib.sha256(dsl.format_expr(e).encode()).hexdigest()[:16]


class CountCache:
    """Flat-file memo of level cardinalities keyed by expression hash and depth."""

    def __init__(self, path: str):
        self.path = path
        self._data: dict[tuple[str, int], int] = {}
        if os.path.exists(path):
            with open(path, "r", encoding="ascii") as fh:
                for line in fh:
                    parts = line.split()
                    if len(parts) != 3:
                        continue
                    key, depth, value = parts
                    self._data[(key, int(depth))] = int(value)

    def lookup(self, e: ClassExpr, n: int) -> Optional[int]:
        return self._data.get((expr_key(e), n))

    def counted(self, e: ClassExpr, n: int, limit: int = DEFAULT_COUNT_LIMIT,
                verify: bool = False) -> int:
        """count() through the cache; verify recomputes and checks hits."""
        key = (expr_key(e), n)
        hit = self._data.get(key)
        if hit is not None:
            if verify:
                fresh = count(e, n, limit)
                if fresh != hit:
                    raise RuntimeError(
                        f"count cache corrupt for {dsl.format_expr(e)} at depth {n}: "
                        f"cached {hit}, recomputed {fresh}")
            return hit
        value = count(e, n, limit)
        self._data[key] = value
        return value

    def save(self):
        records = sorted(self._data.items())
        with open(self.path, "w", encoding="ascii") as fh:
            for (key, depth), value in records:
                fh.write(f"{key} {depth} {value}\n")
