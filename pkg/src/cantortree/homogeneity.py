"""Finite-depth homogeneity verdicts and lemma verification.

All verdicts are taken at an explicit depth: a passing verdict means "holds
up to this depth", while failures are final because any counterexample at
one depth persists at all greater depths.  The lemma verifiers encode the
theorem statements directly; a reported violation means an implementation
bug, not a mathematical discovery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .classes import ClassExpr, compile_stepper
from .trees import (DEFAULT_COUNT_LIMIT, DEFAULT_ENUM_LIMIT, count,
                    level_iter, theta_level_iter)
from .words import unpack


@dataclass(frozen=True)
class SsReport:
    depth: int
    ok: bool
    witness: Optional[tuple[str, str, int]]


@dataclass(frozen=True)
class NHomReport:
    n: int
    depth: int
    ok: bool
    witness: Optional[tuple[str, str, str]]


@dataclass(frozen=True)
class WeakNHomReport:
    n: int
    depth: int
    ok: bool
    counts: tuple[int, ...]
    witness: Optional[tuple[str, str, int, int]]


@dataclass(frozen=True)
class AHomReport:
    depth: int
    constant: int
    per_level: tuple[tuple[int, int], ...]
    bounded_trend: bool


@dataclass(frozen=True)
class VlReport:
    depth: int
    dagger: Fraction
    ddagger: Fraction


@dataclass(frozen=True)
class HomogeneityReport:
    depth: int
    ss: SsReport
    nhom: NHomReport
    weak: WeakNHomReport
    ahom: AHomReport
    vl: VlReport


def check_ss(e: ClassExpr, depth: int,
             limit: int = DEFAULT_ENUM_LIMIT) -> SsReport:
    """Do all same-length nodes share one child pattern, up to depth?"""
    stepper = compile_stepper(e)
    for d, (words, states) in enumerate(level_iter(e, depth, limit)):
        first_pattern = None
        first_word = None
        for bits, s in zip(words, states):
            pattern = (stepper.step(s, 0) is not None, stepper.step(s, 1) is not None)
            if first_pattern is None:
                first_pattern, first_word = pattern, bits
            elif pattern != first_pattern:
                i = 0 if pattern[0] != first_pattern[0] else 1
                return SsReport(depth, False,
                                (unpack(first_word, d), unpack(bits, d), i))
    return SsReport(depth, True, None)


def _live_suffixes(stepper, state, n: int) -> frozenset[int]:
    """Packed length-n words that stay on the tree when appended at state."""
    frontier = [(0, state)]
    for _ in range(n):
        nxt = []
        for bits, s in frontier:
            s0 = stepper.step(s, 0)
            if s0 is not None:
                nxt.append((bits << 1, s0))
            s1 = stepper.step(s, 1)
            if s1 is not None:
                nxt.append((bits << 1 | 1, s1))
        frontier = nxt
    return frozenset(bits for bits, _ in frontier)


def check_n_hom(e: ClassExpr, n: int, depth: int,
                limit: int = DEFAULT_ENUM_LIMIT) -> NHomReport:
    """Do all nodes at each level nk admit the same length-n extension set?"""
    if n < 1:
        raise ValueError("n must be at least 1")
    stepper = compile_stepper(e)
    for d, (words, states) in enumerate(level_iter(e, depth, limit)):
        if d % n != 0 or d + n > depth:
            continue
        first_set = None
        first_word = None
        for bits, s in zip(words, states):
            ext = _live_suffixes(stepper, s, n)
            if first_set is None:
                first_set, first_word = ext, bits
            elif ext != first_set:
                tau = min(first_set ^ ext)
                return NHomReport(n, depth, False,
                                  (unpack(first_word, d), unpack(bits, d),
                                   unpack(tau, n)))
    return NHomReport(n, depth, True, None)


def check_weak_n_hom(e: ClassExpr, n: int, depth: int,
                     limit: int = DEFAULT_ENUM_LIMIT) -> WeakNHomReport:
    """Do all nodes at each level nk have equally many length-n(k+1) extensions?

    On success, `counts` lists the common per-band extension count for the
    bands starting at levels n, 2n, ...; the root band is a single node whose
    extension count is just the level-n size.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    stepper = compile_stepper(e)
    step = stepper.step
    counts: list[int] = []
    for d, (words, states) in enumerate(level_iter(e, depth, limit)):
        if d % n != 0 or d + n > depth:
            continue
        first_count = None
        first_word = None
        for bits, s in zip(words, states):
            reach = {s: 1}
            for _ in range(n):
                nxt: dict = {}
                for st, c in reach.items():
                    s0 = step(st, 0)
                    if s0 is not None:
                        nxt[s0] = nxt.get(s0, 0) + c
                    s1 = step(st, 1)
                    if s1 is not None:
                        nxt[s1] = nxt.get(s1, 0) + c
                reach = nxt
            total = sum(reach.values())
            if first_count is None:
                first_count, first_word = total, bits
            elif total != first_count:
                return WeakNHomReport(n, depth, False, tuple(counts),
                                      (unpack(first_word, d), unpack(bits, d),
                                       first_count, total))
        if d >= n and first_count is not None:
            counts.append(first_count)
    return WeakNHomReport(n, depth, True, tuple(counts), None)


def a_hom_constant(e: ClassExpr, depth: int,
                   limit: int = DEFAULT_ENUM_LIMIT) -> AHomReport:
    """The exact maximal spread of branching counts within any one level."""
    per_level: list[tuple[int, int]] = []
    for _, thetas in theta_level_iter(e, depth, limit):
        per_level.append((min(thetas), max(thetas)))
    spreads = [mx - mn for mn, mx in per_level]
    constant = max(spreads)
    bounded_trend = max(spreads[: depth // 2 + 1]) == constant
    return AHomReport(depth, constant, tuple(per_level), bounded_trend)


class _MaxRatio:
    """Running maximum of exact ratios without Fraction overhead."""

    __slots__ = ("num", "den")

    def __init__(self):
        self.num, self.den = 0, 1

    def offer(self, num: int, den: int):
        if num * self.den > self.num * den:
            self.num, self.den = num, den

    def value(self) -> Fraction:
        return Fraction(self.num, self.den)


def vl_constants(e: ClassExpr, depth: int,
                 limit: int = DEFAULT_ENUM_LIMIT,
                 count_limit: int = DEFAULT_COUNT_LIMIT) -> VlReport:
    """Finite-depth branching-ratio constants for node-generated subclasses.

    dagger bounds how far a single node's extension share can exceed the
    whole tree's growth; ddagger bounds the reverse.  Both are exact maxima
    over all nodes sigma at levels 1..depth-1 and all deeper levels, and are
    lower bounds for the true constants.
    """
    level_words = [words for words, _ in level_iter(e, depth, limit)]
    sizes = [count(e, n, count_limit) for n in range(depth + 1)]
    dagger = _MaxRatio()
    ddagger = _MaxRatio()
    for k in range(2, depth + 1):
        ext = [1] * len(level_words[k])
        child_words = level_words[k]
        for n in range(k - 1, 0, -1):
            parents = level_words[n]
            rolled = [0] * len(parents)
            j = 0
            for bits, c in zip(child_words, ext):
                p = bits >> 1
                while parents[j] != p:
                    j += 1
                rolled[j] += c
            for c in rolled:
                dagger.offer(c * sizes[n], sizes[k])
                ddagger.offer(sizes[k], c * sizes[n])
            child_words, ext = parents, rolled
    return VlReport(depth, dagger.value(), ddagger.value())


@dataclass(frozen=True)
class BranchLemmaReport:
    depth: int
    pairs_checked: int
    violations: tuple[str, ...]


def verify_branch_lemma(e: ClassExpr, depth: int,
                        limit: int = DEFAULT_ENUM_LIMIT) -> BranchLemmaReport:
    """Check the branching lower bound and its equality case exhaustively.

    For every node sigma and deeper level n: if every length-n extension
    raises the branching count by at least l, there are at least 2^l
    extensions, with equality when the raise is exactly l throughout.
    """
    rows = list(theta_level_iter(e, depth, limit))
    violations: list[str] = []
    pairs = 0
    for k in range(1, depth + 1):
        words_k, thetas_k = rows[k]
        agg = [(1, t, t) for t in thetas_k]
        child_words = words_k
        for n in range(k - 1, -1, -1):
            parents, parent_thetas = rows[n]
            rolled: list[Optional[tuple[int, int, int]]] = [None] * len(parents)
            j = 0
            for bits, (c, lo, hi) in zip(child_words, agg):
                p = bits >> 1
                while parents[j] != p:
                    j += 1
                cur = rolled[j]
                rolled[j] = (c, lo, hi) if cur is None else (
                    cur[0] + c, min(cur[1], lo), max(cur[2], hi))
            agg = rolled  # every parent has a child: no dead ends
            for idx, (c, lo, hi) in enumerate(agg):
                pairs += 1
                t = parent_thetas[idx]
                lmin = lo - t
                if c < (1 << lmin):
                    violations.append(
                        f"lower bound: {unpack(parents[idx], n)} level {k}: "
                        f"{c} extensions < 2^{lmin}")
                if lo == hi and c != (1 << lmin):
                    violations.append(
                        f"equality case: {unpack(parents[idx], n)} level {k}: "
                        f"{c} extensions != 2^{lmin}")
            child_words = parents
    return BranchLemmaReport(depth, pairs, tuple(violations))


@dataclass(frozen=True)
class ImplicationsReport:
    depth: int
    weak: Optional[dict]
    ahom: Optional[dict]
    equivalence: Optional[dict]

    @property
    def ok(self) -> bool:
        parts = [p for p in (self.weak, self.ahom, self.equivalence) if p is not None]
        return all(p["ok"] for p in parts)


def _log_bound_constant(e: ClassExpr, depth: int, limit: int,
                        count_limit: int) -> int:
    """The least c with 2^(theta-c) <= #level <= 2^(theta+c) for all nodes."""
    c = 0
    for d, (_, thetas) in enumerate(theta_level_iter(e, depth, limit)):
        size = count(e, d, count_limit)
        bitlen = size.bit_length()
        ceil_log = bitlen - 1 if size == 1 << (bitlen - 1) else bitlen
        for t in (min(thetas), max(thetas)):
            c = max(c, t - (bitlen - 1), ceil_log - t)
    return c


def verify_implications(e: ClassExpr, depth: int,
                        weak_n: Optional[int] = None,
                        ahom_c: Optional[int] = None,
                        limit: int = DEFAULT_ENUM_LIMIT,
                        count_limit: int = DEFAULT_COUNT_LIMIT) -> ImplicationsReport:
    """Confirm the homogeneity implication bounds at a fixed depth.

    weak_n: verify weak homogeneity at that band width, then check both
    branching-ratio constants against 4^weak_n.  ahom_c: verify the spread
    is within ahom_c, then check the level-size logarithm bound with the
    same constant and the ratio constants against 2^(4*ahom_c).  The
    equivalence part checks that the minimal logarithm-bound constant and
    the spread constant agree within the provable factor of two.
    """
    weak_part = ahom_part = equiv_part = None
    vl: Optional[VlReport] = None
    if weak_n is not None:
        rep = check_weak_n_hom(e, weak_n, depth, limit)
        if not rep.ok:
            raise ValueError(
                f"hypothesis not established: not weakly {weak_n}-homogeneous "
                f"to depth {depth} (witness {rep.witness})")
        vl = vl_constants(e, depth, limit, count_limit)
        bound = Fraction(1 << (2 * weak_n))
        weak_part = {
            "ok": vl.dagger <= bound and vl.ddagger <= bound,
            "bound": bound,
            "dagger": vl.dagger,
            "ddagger": vl.ddagger,
        }
    if ahom_c is not None:
        arep = a_hom_constant(e, depth, limit)
        if arep.constant > ahom_c:
            raise ValueError(
                f"hypothesis not established: spread {arep.constant} exceeds "
                f"claimed constant {ahom_c} at depth {depth}")
        log_ok = _log_bound_constant(e, depth, limit, count_limit) <= ahom_c
        if vl is None:
            vl = vl_constants(e, depth, limit, count_limit)
        bound = Fraction(1 << (4 * ahom_c))
        ahom_part = {
            "ok": log_ok and vl.dagger <= bound and vl.ddagger <= bound,
            "log_bound_ok": log_ok,
            "bound": bound,
            "dagger": vl.dagger,
            "ddagger": vl.ddagger,
        }
    log_c = _log_bound_constant(e, depth, limit, count_limit)
    spread = a_hom_constant(e, depth, limit).constant
    equiv_part = {
        "ok": log_c <= spread and spread <= 2 * log_c,
        "log_constant": log_c,
        "spread_constant": spread,
    }
    return ImplicationsReport(depth, weak_part, ahom_part, equiv_part)


def homogeneity_report(e: ClassExpr, depth: int, n: int = 2,
                       weak_n: Optional[int] = None,
                       limit: int = DEFAULT_ENUM_LIMIT,
                       count_limit: int = DEFAULT_COUNT_LIMIT) -> HomogeneityReport:
    """All five verdicts at one depth; weak_n defaults to n."""
    return HomogeneityReport(
        depth,
        check_ss(e, depth, limit),
        check_n_hom(e, n, depth, limit),
        check_weak_n_hom(e, weak_n if weak_n is not None else n, depth, limit),
        a_hom_constant(e, depth, limit),
        vl_constants(e, depth, limit, count_limit),
    )
