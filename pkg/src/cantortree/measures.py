"""Branching counts, the induced measure, and relative-measure evidence.

The induced measure of an extendible word is 2^(-theta) where theta counts
the branching prefixes; it is exactly the distribution of the coin-tossing
path producer.  Limiting relative measures are reported as finite-depth
ratio series with running inf/sup and a stability window, never as claimed
limits, except where a certificate (separating-set shape, block structure,
products, single points) licenses an exact value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .classes import (ClassExpr, Cyl, Full, Point, Prod, RawTree, Sep, Sft,
                      compile_stepper, extendible, run_stepper)
from .errors import NotExtendibleError, SubsetViolationError
from .trees import (DEFAULT_COUNT_LIMIT, DEFAULT_ENUM_LIMIT, count,
                    extensions_count, level_iter, raw_extensions_count,
                    raw_levels)
from .words import deinterleave

DEFAULT_WINDOW = 8
DEFAULT_CERT_DEPTH = 12


def theta(e: ClassExpr, sigma: str) -> int:
    """The number of nonempty prefixes of sigma whose sibling is extendible."""
    stepper = compile_stepper(e)
    state = stepper.initial
    hits = 0
    for c in sigma:
        b = c == "1"
        if stepper.step(state, not b) is not None:
            hits += 1
        state = stepper.step(state, b)
        if state is None:
            raise NotExtendibleError(f"{sigma!r} is not extendible")
    return hits


def mu(e: ClassExpr, sigma: str) -> Fraction:
    """The induced measure of the cylinder at sigma: 2^(-theta), or 0 off the tree."""
    if not extendible(e, sigma):
        return Fraction(0)
    return Fraction(1, 1 << theta(e, sigma))


def phi_map(e: ClassExpr, sigma: str) -> str:
    """The canonical onto map from full-space words to tree words.

    Bits of sigma are spent at branching nodes; at forced nodes the image
    takes the only live child and the input bit is ignored.  The image always
    has the same length as sigma.
    """
    stepper = compile_stepper(e)
    state = stepper.initial
    out: list[str] = []
    for c in sigma:
        s0 = stepper.step(state, 0)
        s1 = stepper.step(state, 1)
        if s0 is not None and s1 is not None:
            bit = c == "1"
        else:
            bit = s0 is None
        out.append("1" if bit else "0")
        state = s1 if bit else s0
    return "".join(out)


def ratio(e: ClassExpr, sigma: str, n: int,
          limit: int = DEFAULT_COUNT_LIMIT) -> Fraction:
    """The fraction of depth-n tree nodes extending sigma, exactly."""
    if n < len(sigma):
        raise ValueError("n must be at least |sigma|")
    if not extendible(e, sigma):
        return Fraction(0)
    return Fraction(extensions_count(e, sigma, n, limit), count(e, n, limit))


@dataclass(frozen=True)
class RatioSeries:
    """A per-depth sequence of exact ratios with an inf/sup/stability summary."""

    label: str
    start: int
    ratios: tuple[Fraction, ...]
    window: int
    inf: Fraction
    sup: Fraction
    stable: bool
    exact: Optional[Fraction] = None
    certificate: Optional[str] = None

    @property
    def matches_exact(self) -> Optional[bool]:
        if self.exact is None or not self.ratios:
            return None
        return self.ratios[-1] == self.exact


def make_series(label: str, start: int, ratios: list[Fraction], window: int,
                exact: Optional[Fraction] = None,
                certificate: Optional[str] = None) -> RatioSeries:
    tail = ratios[-window:]
    stable = len(tail) == window and all(r == tail[0] for r in tail)
    return RatioSeries(label, start, tuple(ratios), window,
                       min(ratios), max(ratios), stable, exact, certificate)


def _ss_to_depth(e: ClassExpr, depth: int, limit: int) -> bool:
    """Whether all same-length nodes share a child pattern, up to depth."""
    stepper = compile_stepper(e)
    for _, states in level_iter(e, depth, limit):
        patterns = {
            (stepper.step(s, 0) is not None, stepper.step(s, 1) is not None)
            for s in states
        }
        if len(patterns) > 1:
            return False
    return True


def _structurally_ss(e: ClassExpr) -> bool:
    if isinstance(e, (Full, Sep, Point)):
        return True
    if isinstance(e, Cyl):
        return _structurally_ss(e.body)
    return False


def lambda_exact(e: ClassExpr, sigma: str,
                 cert_depth: int = DEFAULT_CERT_DEPTH,
                 enum_limit: int = DEFAULT_ENUM_LIMIT) -> Optional[tuple[Fraction, str]]:
    """The exact limiting relative measure, when a certificate applies.

    Returns (value, certificate) or None when no certificate covers the
    expression.  Certificates: off-tree words (0), the root (1), single
    points, block products for block-set classes, products, cylinders, and
    the separating-set identity 2^(-theta), either structural or verified
    level-by-level to cert_depth.
    """
    if not extendible(e, sigma):
        return Fraction(0), "off-tree"
    if sigma == "":
        return Fraction(1), "root"
    if isinstance(e, Point):
        return Fraction(1), "point-indicator"
    if isinstance(e, Sft):
        b = e.block_len
        j, r = divmod(len(sigma), b)
        m = len(e.blocks)
        if r == 0:
            return Fraction(1, m ** j), "block-product"
        tail = sigma[-r:]
        fitting = sum(1 for blk in e.blocks if blk.startswith(tail))
        return Fraction(fitting, m ** (j + 1)), "block-product"
    if isinstance(e, Cyl):
        p = e.prefix
        if len(sigma) <= len(p):
            return Fraction(1), "cylinder"
        sub = lambda_exact(e.body, sigma[len(p):], cert_depth, enum_limit)
        if sub is None:
            return None
        value, cert = sub
        return value, f"cylinder:{cert}"
    if isinstance(e, Prod):
        x, y = deinterleave(sigma)
        lx = lambda_exact(e.left, x, cert_depth, enum_limit)
        ly = lambda_exact(e.right, y, cert_depth, enum_limit)
        if lx is None or ly is None:
            return None
        return lx[0] * ly[0], f"product({lx[1]},{ly[1]})"
    if _structurally_ss(e):
        return Fraction(1, 1 << theta(e, sigma)), "ss"
    if _ss_to_depth(e, min(cert_depth, enum_limit), enum_limit):
        return Fraction(1, 1 << theta(e, sigma)), f"ss-verified@{cert_depth}"
    return None


def lambda_report(e: ClassExpr, sigma: str, max_depth: int,
                  window: int = DEFAULT_WINDOW,
                  count_limit: int = DEFAULT_COUNT_LIMIT,
                  cert_depth: int = DEFAULT_CERT_DEPTH,
                  enum_limit: int = DEFAULT_ENUM_LIMIT) -> RatioSeries:
    """The ratio series for sigma up to max_depth, with any exact certificate."""
    if max_depth < len(sigma) + window:
        raise ValueError("max_depth must be at least |sigma| + window")
    ratios = [ratio(e, sigma, n, count_limit) for n in range(len(sigma), max_depth + 1)]
    cert = lambda_exact(e, sigma, cert_depth, enum_limit)
    exact, name = cert if cert is not None else (None, None)
    return make_series(sigma, len(sigma), ratios, window, exact, name)


@dataclass(frozen=True)
class DsumLambdaReport:
    """Evidence for the relative measure of one side of a disjoint union."""

    side: int
    sigma: str
    series: RatioSeries
    count_series: RatioSeries
    limit: Optional[Fraction]
    limit_infinite_evidence: bool
    component_lambda: Optional[Fraction]
    predicted: Optional[Fraction]
    predicted_halved: Optional[Fraction]
    matched: Optional[str]


def dsum_lambda(left: ClassExpr, right: ClassExpr, side: int, sigma: str,
                max_depth: int, window: int = DEFAULT_WINDOW,
                count_limit: int = DEFAULT_COUNT_LIMIT) -> DsumLambdaReport:
    """Relative-measure evidence for side^sigma inside the disjoint union.

    Alongside the ratio series this reports the level-count ratio between
    the components and, when both stabilize, which closed form the series
    tail matches: weight L/(L+1) on the 0 side (1/(L+1) on the 1 side), or
    the same with an extra half.
    """
    from .classes import DSum  # local import keeps the module graph flat

    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")
    e = DSum(left, right)
    word = ("0" if side == 0 else "1") + sigma
    series = lambda_report(e, word, max_depth, window, count_limit)
    lratios = [Fraction(count(left, n, count_limit), count(right, n, count_limit))
               for n in range(max_depth)]
    count_series = make_series("#left/#right", 0, lratios, window)
    limit = count_series.ratios[-1] if count_series.stable else None
    nondecreasing = all(a <= b for a, b in zip(lratios, lratios[1:]))
    infinite = (not count_series.stable and nondecreasing
                and lratios[-1] >= (1 << window) * max(lratios[0], Fraction(1)))
    comp = lambda_exact(left if side == 0 else right, sigma)
    comp_value = comp[0] if comp is not None else None
    predicted = halved = matched = None
    if comp_value is not None and limit is not None:
        weight = limit / (limit + 1) if side == 0 else Fraction(1) / (limit + 1)
        predicted = comp_value * weight
        halved = predicted / 2
        if series.stable:
            tail = series.ratios[-1]
            if tail == predicted:
                matched = "L/(L+1)"
            elif tail == halved:
                matched = "L/(2(L+1))"
    return DsumLambdaReport(side, sigma, series, count_series, limit, infinite,
                            comp_value, predicted, halved, matched)


def subclass_series(sup: ClassExpr, sub: ClassExpr, max_depth: int,
                    window: int = DEFAULT_WINDOW,
                    enum_limit: int = DEFAULT_ENUM_LIMIT,
                    count_limit: int = DEFAULT_COUNT_LIMIT) -> RatioSeries:
    """The level-count ratio of a subclass inside a superclass.

    Verifies the subset relation on every level up to max_depth and, when
    the superclass has the separating-set shape, that the series is
    nondecreasing (a theorem; a violation means a bug).
    """
    sup_stepper = compile_stepper(sup)
    for depth, (words, _) in enumerate(level_iter(sub, max_depth, enum_limit)):
        for bits in words:
            w = format(bits, "b").zfill(depth) if depth else ""
            if run_stepper(sup_stepper, w) is None:
                raise SubsetViolationError(w, depth)
    ratios = [Fraction(count(sub, n, count_limit), count(sup, n, count_limit))
              for n in range(max_depth + 1)]
    if _structurally_ss(sup):
        if any(a > b for a, b in zip(ratios, ratios[1:])):
            raise RuntimeError("nondecreasing subclass ratio violated for a "
                               "separating-set superclass; this is a bug")
    return make_series("#sub/#super", 0, ratios, window)


@dataclass(frozen=True)
class ThresholdRow:
    """Per-depth threshold data: branching count and level-size logarithm."""

    n: int
    theta: int
    count: int
    log_floor: int
    log_ceil: int


@dataclass(frozen=True)
class ThresholdProfile:
    """Thresholds along a prefix; minus log of the induced measure is theta."""

    sigma: str
    rows: tuple[ThresholdRow, ...]


def threshold_profile(e: ClassExpr, prefix: str,
                      count_limit: int = DEFAULT_COUNT_LIMIT) -> ThresholdProfile:
    """Branching counts against level-size logarithms along a prefix."""
    stepper = compile_stepper(e)
    state = stepper.initial
    rows = [ThresholdRow(0, 0, 1, 0, 0)]
    t = 0
    for i, c in enumerate(prefix):
        b = c == "1"
        if stepper.step(state, not b) is not None:
            t += 1
        state = stepper.step(state, b)
        if state is None:
            raise NotExtendibleError(f"{prefix!r} is not extendible")
        n = i + 1
        c_n = count(e, n, count_limit)
        floor = c_n.bit_length() - 1
        ceil = floor if c_n == 1 << floor else floor + 1
        rows.append(ThresholdRow(n, t, c_n, floor, ceil))
    return ThresholdProfile(prefix, tuple(rows))


def raw_ratio_series(tree: RawTree, sigma: str, max_depth: int,
                     window: int = DEFAULT_WINDOW) -> RatioSeries:
    """The relative-weight series of sigma inside a raw tree (dead ends kept)."""
    ratios = [
        Fraction(raw_extensions_count(tree, sigma, n), raw_levels(tree, n).cardinality)
        for n in range(len(sigma), max_depth + 1)
    ]
    return make_series(sigma, len(sigma), ratios, window)
