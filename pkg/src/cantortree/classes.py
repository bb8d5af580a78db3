"""Combinator algebra of nonempty effectively closed subsets of Cantor space.

Every expression denotes a nonempty closed subset of the space of infinite
binary sequences, presented through its tree of extendible nodes: the finite
words that extend to a member of the set.  Each constructor compiles to a
deterministic stepper (a word-consuming automaton) whose live states are
exactly the extendible words, so the tree it induces has no dead ends by
construction.  Expressions are immutable and steppers are pure, so everything
here is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .words import check_word, tracks


class ClassExpr:
    """Base class for expression nodes; all nodes are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Full(ClassExpr):
    """The full space of all infinite binary sequences."""


@dataclass(frozen=True)
class Point(ClassExpr):
    """A single eventually periodic sequence: preperiod then repeated period."""

    pre: str
    per: str

    def __post_init__(self):
        check_word(self.pre)
        check_word(self.per)
        if not self.per:
            raise ValueError("Point requires a nonempty period")

    def bit(self, i: int) -> int:
        if i < len(self.pre):
            return int(self.pre[i])
        return int(self.per[(i - len(self.pre)) % len(self.per)])


@dataclass(frozen=True)
class Sft(ClassExpr):
    """Sequences assembled from a fixed set of allowed equal-length blocks."""

    blocks: frozenset[str]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("Sft requires at least one block")
        lengths = {len(b) for b in self.blocks}
        if len(lengths) != 1 or 0 in lengths:
            raise ValueError("Sft blocks must share one positive length")
        for b in self.blocks:
            check_word(b)

    @property
    def block_len(self) -> int:
        return len(next(iter(self.blocks)))


@dataclass(frozen=True)
class Sep(ClassExpr):
    """Separating-set shape: positions in `ones` forced to 1, `zeros` to 0."""

    ones: frozenset[int]
    zeros: frozenset[int]

    def __post_init__(self):
        if self.ones & self.zeros:
            raise ValueError("Sep requires disjoint position sets")
        if any(i < 0 for i in self.ones | self.zeros):
            raise ValueError("Sep positions must be naturals")


@dataclass(frozen=True)
class Prod(ClassExpr):
    """Interleaved product: even positions from left, odd from right."""

    left: ClassExpr
    right: ClassExpr


@dataclass(frozen=True)
class DSum(ClassExpr):
    """Disjoint union: 0-prefixed copies of left, 1-prefixed copies of right."""

    left: ClassExpr
    right: ClassExpr


@dataclass(frozen=True)
class Union(ClassExpr):
    """Set union; overlap is permitted."""

    left: ClassExpr
    right: ClassExpr


@dataclass(frozen=True)
class Cyl(ClassExpr):
    """The members of body relocated under a fixed finite prefix."""

    prefix: str
    body: ClassExpr

    def __post_init__(self):
        check_word(self.prefix)


@dataclass(frozen=True)
class Diag(ClassExpr):
    """n interleaved copies of one arbitrary sequence."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Diag requires n >= 1")


@dataclass(frozen=True)
class Ex6(ClassExpr):
    """All sequences of zeros then ones: {0^n 1^inf : n} plus the zero sequence."""


@dataclass(frozen=True)
class AHomDiag(ClassExpr):
    """Level-by-level diagonal construction with theta spread at most 1.

    Below length 4 the tree is full.  For each n >= 2 the band of lengths
    n^2-n .. n^2 ends by forbidding the all-ones extension of the greatest
    node entering the band; at length n^2+1 the forbidden node's sibling gets
    both children while every other node keeps only its 0-child, which
    restores equal branching counts.  All other lengths branch fully.
    """


def ex3() -> ClassExpr:
    """Two glued 4-periodic constraint classes with oscillating level ratios.

    Under prefix 0 every 4-block of the remainder starts 00; under prefix 1
    every 4-block of the remainder ends 11.
    """
    zeros_side = Sft(frozenset({"0000", "0001", "0010", "0011"}))
    ones_side = Sft(frozenset({"0011", "0111", "1011", "1111"}))
    return Union(Cyl("0", zeros_side), Cyl("1", ones_side))


def ex6() -> ClassExpr:
    """The monotone class: all-zeros, or zeros switching permanently to ones."""
    return Ex6()


def ahomdiag() -> ClassExpr:
    """The bounded-theta-spread diagonal class; see AHomDiag."""
    return AHomDiag()


# ---------------------------------------------------------------------------
# Steppers: deterministic automata whose live states mark extendible words.

State = object
StepFn = Callable[[State, int], Optional[State]]


@dataclass(frozen=True)
class Stepper:
    initial: State
    step: StepFn


def _full_stepper() -> Stepper:
    return Stepper(0, lambda s, b: 0)


def _point_stepper(e: Point) -> Stepper:
    seq = e.pre + e.per
    wrap = len(e.pre)
    last = len(seq) - 1

    def step(s, b):
        if b != int(seq[s]):
            return None
        return wrap if s == last else s + 1

    return Stepper(0, step)


def _sft_stepper(e: Sft) -> Stepper:
    blen = e.block_len
    trans: dict[tuple[str, int], Optional[str]] = {}
    prefixes = {b[:i] for b in e.blocks for i in range(blen)}
    for q in prefixes:
        for bit in (0, 1):
            nxt = q + str(bit)
            if len(nxt) == blen:
                trans[(q, bit)] = "" if nxt in e.blocks else None
            else:
                trans[(q, bit)] = nxt if any(blk.startswith(nxt) for blk in e.blocks) else None

    def step(s, b):
        return trans[(s, b)]

    return Stepper("", step)


def _sep_stepper(e: Sep) -> Stepper:
    positions = e.ones | e.zeros
    cap = max(positions) + 1 if positions else 0
    ones, zeros = e.ones, e.zeros

    def step(s, b):
        if s < 0:
            return -1
        if s in ones and b != 1:
            return None
        if s in zeros and b != 0:
            return None
        nxt = s + 1
        return nxt if nxt < cap else -1

    return Stepper(0 if cap else -1, step)


def _prod_stepper(e: Prod) -> Stepper:
    left = compile_stepper(e.left)
    right = compile_stepper(e.right)

    def step(s, b):
        parity, sl, sr = s
        if parity == 0:
            nl = left.step(sl, b)
            return None if nl is None else (1, nl, sr)
        nr = right.step(sr, b)
        return None if nr is None else (0, sl, nr)

    return Stepper((0, left.initial, right.initial), step)


def _dsum_stepper(e: DSum) -> Stepper:
    left = compile_stepper(e.left)
    right = compile_stepper(e.right)

    def step(s, b):
        if s == "r":
            return ("L", left.initial) if b == 0 else ("R", right.initial)
        tag, sub = s
        if tag == "L":
            nxt = left.step(sub, b)
        else:
            nxt = right.step(sub, b)
        return None if nxt is None else (tag, nxt)

    return Stepper("r", step)


class _Dead:
    """Sentinel for a dead component inside a union state."""

    __slots__ = ()

    def __repr__(self):  # pragma: no cover
        return "DEAD"


_DEAD = _Dead()


def _union_stepper(e: Union) -> Stepper:
    left = compile_stepper(e.left)
    right = compile_stepper(e.right)

    def step(s, b):
        sl, sr = s
        nl = left.step(sl, b) if sl is not _DEAD else _DEAD
        nr = right.step(sr, b) if sr is not _DEAD else _DEAD
        nl = _DEAD if nl is None else nl
        nr = _DEAD if nr is None else nr
        if nl is _DEAD and nr is _DEAD:
            return None
        return (nl, nr)

    return Stepper((left.initial, right.initial), step)


def _cyl_stepper(e: Cyl) -> Stepper:
    body = compile_stepper(e.body)
    prefix = e.prefix
    plen = len(prefix)

    def step(s, b):
        tag, sub = s
        if tag == "p":
            if b != int(prefix[sub]):
                return None
            nxt = sub + 1
            return ("b", body.initial) if nxt == plen else ("p", nxt)
        nxt = body.step(sub, b)
        return None if nxt is None else ("b", nxt)

    initial = ("b", body.initial) if plen == 0 else ("p", 0)
    return Stepper(initial, step)


def _diag_stepper(e: Diag) -> Stepper:
    n = e.n
    if n == 1:
        return _full_stepper()

    def step(s, b):
        pos, rowbit = s
        if pos == 0:
            return (1, b)
        if b != rowbit:
            return None
        nxt = pos + 1
        return (0, None) if nxt == n else (nxt, rowbit)

    return Stepper((0, None), step)


def _ex6_stepper() -> Stepper:
    def step(s, b):
        if s == 0:
            return s if b == 0 else 1
        return 1 if b == 1 else None

    return Stepper(0, step)


def _is_band_end(length: int) -> bool:
    """Lengths n^2, n >= 2: the level where one node is forbidden."""
    if length < 4:
        return False
    r = math.isqrt(length)
    return r * r == length


def _is_rebalance(length: int) -> bool:
    """Lengths n^2+1, n >= 2: the level that restores equal branching."""
    return length >= 5 and _is_band_end(length - 1)


def _ahomdiag_stepper() -> Stepper:
    # State is (length, on_greatest): whether the word equals the running
    # lexicographic maximum of its level, which pins down both special rules.
    def step(s, b):
        length, on_g = s
        nxt = length + 1
        if _is_band_end(nxt):
            if on_g and b == 1:
                return None
            return (nxt, on_g and b == 0)
        if _is_rebalance(nxt):
            if b == 1 and not on_g:
                return None
            return (nxt, on_g and b == 1)
        return (nxt, on_g and b == 1)

    return Stepper((0, True), step)


@lru_cache(maxsize=None)
def compile_stepper(e: ClassExpr) -> Stepper:
    """Compile an expression to its extendibility stepper (cached)."""
    if isinstance(e, Full):
        return _full_stepper()
    if isinstance(e, Point):
        return _point_stepper(e)
    if isinstance(e, Sft):
        return _sft_stepper(e)
    if isinstance(e, Sep):
        return _sep_stepper(e)
    if isinstance(e, Prod):
        return _prod_stepper(e)
    if isinstance(e, DSum):
        return _dsum_stepper(e)
    if isinstance(e, Union):
        return _union_stepper(e)
    if isinstance(e, Cyl):
        return _cyl_stepper(e)
    if isinstance(e, Diag):
        return _diag_stepper(e)
    if isinstance(e, Ex6):
        return _ex6_stepper()
    if isinstance(e, AHomDiag):
        return _ahomdiag_stepper()
    raise TypeError(f"unknown expression node: {e!r}")


def run_stepper(stepper: Stepper, w: str) -> Optional[State]:
    """The state after consuming w, or None when w leaves the tree."""
    s = stepper.initial
    for c in w:
        s = stepper.step(s, c == "1")
        if s is None:
            return None
    return s


def extendible(e: ClassExpr, w: str) -> bool:
    """Whether w extends to a member of the denoted set."""
    check_word(w)
    return run_stepper(compile_stepper(e), w) is not None


def children_alive(stepper: Stepper, state: State) -> tuple[bool, bool]:
    """Which children of the node at `state` remain on the tree."""
    return (stepper.step(state, 0) is not None, stepper.step(state, 1) is not None)


# ---------------------------------------------------------------------------
# Raw trees: explicit membership oracles that may contain dead ends.


@dataclass(frozen=True)
class RawTree:
    """A downward-closed word set given by a membership oracle.

    Unlike ClassExpr trees this may have dead ends, so it supports only the
    raw level/count operations and the raw ratio comparison.
    """

    name: str
    membership: Callable[[str], bool]
    max_depth: int


def _ladder_member(w: str) -> bool:
    if "1" not in w:
        return True
    if w.startswith("0"):
        return False
    ones = w.find("0")
    if ones == -1:
        return True
    tail = w[ones:]
    return "1" not in tail and len(tail) <= ones


def ladder(max_depth: int = 128) -> RawTree:
    """The tree of all-zero words plus ones-then-zeros words with a short tail.

    Its infinite paths are just the two constant sequences, but the dead
    ends drag the relative weight of the zero branch to zero.
    """
    return RawTree("ladder", _ladder_member, max_depth)


def diag_tracks_equal(w: str, n: int) -> bool:
    """Test the defining property of Diag(n) words: all tracks compatible."""
    ts = tracks(w, n)
    return all(t == ts[0][: len(t)] for t in ts)
