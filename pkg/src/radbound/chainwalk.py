"""Antichain combinatorics and the stopped sign-walk.

Two families of exact checkers live here:

* The chain bound: if the k smallest of b_1 >= ... >= b_t sum to at least
  alpha, then for ANY extra weights and any center x the signed sums land in
  the open window (x - alpha, x + alpha) with probability at most
  f(k, t) / 2^t, where f(k, t) is the sum of the k largest binomial
  coefficients C(t, .).  The k = 2 and k = 3 specializations replace the
  chain premise with exact difference-set separation conditions and give
  window-mass bounds 1/4 and 1/8.

* The stopped walk W(S; x): signs are drawn one weight at a time and the
  walk freezes once |partial sum| >= x; p(S; x) is the probability this
  ever happens, under a stated ordering policy.  The hitting lemma bounds
  p(S; x) >= (c-1)/(c+3) whenever sum d_i^2 >= c x^2 with c > 1, and
  >= (c-1)/(c + eta^2 + 2 eta) when every weight is in (0, eta*x] or
  [x, inf).

Everything is exact rational arithmetic; Monte Carlo lives only in
simulate_walk and reports one-sided Wilson confidence bounds.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .reporting import VerificationReport

ENUMERATION_CAP = 24
WALK_STATE_CAP = 30
BEST_ORDER_CAP = 8


def f_largest_binomials(k: int, t: int) -> int:
    """Sum of the k largest binomial coefficients C(t, i), 0 <= i <= t.

    k > t + 1 is allowed for convenience and returns the full row sum 2^t.
    """
    if k <= 0:
        raise ValueError("need k > 0")
    if t < 0:
        raise ValueError("need t >= 0")
    row = sorted((math.comb(t, i) for i in range(t + 1)), reverse=True)
    return sum(row[:k])


def _as_fractions(ws) -> tuple:
    out = tuple(Fraction(w) for w in ws)
    if any(w <= 0 for w in out):
        raise ValueError("weights must be positive")
    return out


def _signed_sums(ws: Sequence[Fraction]) -> list:
    """Sorted list of all 2^n signed sums (with multiplicity)."""
    if len(ws) > ENUMERATION_CAP:
        raise ValueError(f"enumeration cap {ENUMERATION_CAP} exceeded")
    sums = [Fraction(0)]
    for w in ws:
        sums = [s + w for s in sums] + [s - w for s in sums]
    sums.sort()
    return sums


def max_window_mass(ws: Sequence[Fraction], alpha: Fraction) -> tuple:
    """Max over centers x of Pr[sum in (x - alpha, x + alpha)], exactly.

    The mass is piecewise constant in x with breakpoints at s +- alpha over
    the distinct signed sums s; testing every breakpoint and every midpoint
    of consecutive breakpoints covers all values the function takes.
    Returns (max mass as Fraction, a witness center).
    """
    sums = _signed_sums(ws)
    total = len(sums)
    distinct = sorted(set(sums))
    bps = sorted({s + alpha for s in distinct} | {s - alpha for s in distinct})
    centers = list(distinct) + bps
    centers += [(u + v) / 2 for u, v in zip(bps, bps[1:])]
    best = Fraction(0)
    witness = Fraction(0)
    for x in centers:
        cnt = bisect_left(sums, x + alpha) - bisect_right(sums, x - alpha)
        mass = Fraction(cnt, total)
        if mass > best:
            best, witness = mass, x
    return best, witness


@dataclass(frozen=True)
class ChainCertificate:
    b: tuple                 # b_1 >= ... >= b_t > 0 (Fractions)
    k: int
    alpha: Fraction
    tail_weights: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "b", _as_fractions(self.b))
        object.__setattr__(self, "tail_weights",
                           _as_fractions(self.tail_weights))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if any(x < y for x, y in zip(self.b, self.b[1:])):
            raise ValueError("b must be non-increasing")
        if not 0 < self.k <= len(self.b):
            raise ValueError("need 0 < k <= t")

    @property
    def t(self) -> int:
        return len(self.b)

    def premise_holds(self) -> bool:
        """Sum of the k smallest among b_1..b_t is at least alpha."""
        return sum(self.b[-self.k:]) >= self.alpha


def check_antichain_bound(c: ChainCertificate) -> VerificationReport:
    rep = VerificationReport("chain", config={
        "t": c.t, "k": c.k, "alpha": str(c.alpha),
        "tail": len(c.tail_weights)})
    if not rep.record("premise: sum of k smallest of b >= alpha",
                      c.premise_holds(),
                      f"sum={sum(c.b[-c.k:])} alpha={c.alpha}"):
        rep.note("premise violated: conclusion not claimed")
        return rep
    bound = Fraction(f_largest_binomials(c.k, c.t), 2 ** c.t)
    mass, x = max_window_mass(c.b + c.tail_weights, c.alpha)
    rep.check(f"max open-window mass <= f({c.k},{c.t})/2^{c.t} = {bound}",
              bound, mass, strict=False, slack=0.0,
              detail=f"max mass {mass} at center {x}")
    return rep


def check_obs_k2(b1, b2, delta, tail: Sequence = ()) -> VerificationReport:
    """Two separated weights force open 2*delta-window mass <= 1/4."""
    b1, b2, delta = Fraction(b1), Fraction(b2), Fraction(delta)
    rep = VerificationReport("obs-k2", config={
        "b1": str(b1), "b2": str(b2), "delta": str(delta),
        "tail": len(tuple(tail))})
    ok = rep.record(
        "premise: {b1+b2, b1, b2, |b1-b2|} all >= delta",
        delta > 0 and b1 >= delta and b2 >= delta and abs(b1 - b2) >= delta,
        f"differences {sorted({b1 + b2, b1, b2, abs(b1 - b2)})}")
    if not ok:
        rep.note("premise violated: conclusion not claimed")
        return rep
    mass, x = max_window_mass((b1, b2) + _as_fractions(tail), delta)
    rep.check("max open 2*delta-window mass <= 1/4", Fraction(1, 4), mass,
              strict=False, slack=0.0, detail=f"max mass {mass} at {x}")
    return rep


def check_obs_k3(c1, c2, c3, delta, tail: Sequence = ()) -> VerificationReport:
    """Three pairwise-separated weights force window mass <= 1/8."""
    c1, c2, c3, delta = (Fraction(c1), Fraction(c2), Fraction(c3),
                         Fraction(delta))
    rep = VerificationReport("obs-k3", config={
        "c1": str(c1), "c2": str(c2), "c3": str(c3), "delta": str(delta),
        "tail": len(tuple(tail))})
    diffs = {c1, c2, c3, c1 + c2, c1 - c2, c1 + c3, c1 - c3, c2 + c3,
             c2 - c3, c1 + c2 + c3, c1 + c2 - c3, c1 - c2 + c3,
             abs(c1 - c2 - c3)}
    ok = rep.record(
        "premise: c1 >= c2 >= c3 >= delta, c1-c2 >= delta, c2-c3 >= delta, "
        "|c1-c2-c3| >= delta",
        delta > 0 and c1 >= c2 >= c3 >= delta and c1 - c2 >= delta
        and c2 - c3 >= delta and abs(c1 - c2 - c3) >= delta,
        f"difference set {sorted(diffs)}")
    if not ok:
        rep.note("premise violated: conclusion not claimed")
        return rep
    mass, x = max_window_mass((c1, c2, c3) + _as_fractions(tail), delta)
    rep.check("max open 2*delta-window mass <= 1/8", Fraction(1, 8), mass,
              strict=False, slack=0.0, detail=f"max mass {mass} at {x}")
    return rep


# ---------------------------------------------------------------------------
# The stopped walk.
# ---------------------------------------------------------------------------

class Policy(Enum):
    FIXED_ORDER = "fixed"
    BEST_ORDER_EXHAUSTIVE = "best"
    HEURISTIC_DESCENDING = "heuristic"


@dataclass(frozen=True)
class WalkInstance:
    S: tuple                       # positive weights (Fractions)
    x: Fraction                    # absorption threshold > 0
    policy: Policy = Policy.HEURISTIC_DESCENDING
    eta: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "S", _as_fractions(self.S))
        object.__setattr__(self, "x", Fraction(self.x))
        if self.x <= 0:
            raise ValueError("threshold must be positive")
        if self.eta is not None:
            object.__setattr__(self, "eta", Fraction(self.eta))
            if not 0 < self.eta < 1:
                raise ValueError("eta must be in (0, 1)")

    @property
    def c(self) -> Fraction:
        """sum d_i^2 / x^2, the variance surplus parameter."""
        return sum(d * d for d in self.S) / (self.x * self.x)

    def eta_premise_holds(self) -> bool:
        """All weights in (0, eta*x] union [x, inf)."""
        if self.eta is None:
            return False
        return all(d <= self.eta * self.x or d >= self.x for d in self.S)


def _p_fixed(order: tuple, x: Fraction) -> Fraction:
    """Success probability of the frozen walk for one fixed ordering, by
    memoized recursion over (step index, current partial sum)."""

    @lru_cache(maxsize=None)
    def rec(i: int, w: Fraction) -> Fraction:
        if abs(w) >= x:
            return Fraction(1)
        if i == len(order):
            return Fraction(0)
        d = order[i]
        return (rec(i + 1, w + d) + rec(i + 1, w - d)) / 2

    try:
        return rec(0, Fraction(0))
    finally:
        rec.cache_clear()


def walk_success_probability(w: WalkInstance) -> Fraction:
    """Exact p(S; x) under the instance's ordering policy.

    BEST_ORDER_EXHAUSTIVE maximizes over all orderings (|S| <= 8);
    HEURISTIC_DESCENDING and FIXED_ORDER evaluate one ordering exactly
    (|S| <= 30); the descending heuristic is only ever used as a lower
    bound on the best-order probability.
    """
    n = len(w.S)
    if w.policy is Policy.BEST_ORDER_EXHAUSTIVE:
        if n > BEST_ORDER_CAP:
            raise ValueError(f"best-order search capped at {BEST_ORDER_CAP}")
        return max(_p_fixed(perm, w.x)
                   for perm in itertools.permutations(w.S))
    if n > WALK_STATE_CAP:
        raise ValueError(f"walk recursion capped at {WALK_STATE_CAP}")
    if w.policy is Policy.HEURISTIC_DESCENDING:
        return _p_fixed(tuple(sorted(w.S, reverse=True)), w.x)
    return _p_fixed(w.S, w.x)


def hitting_bound(c: Fraction, eta: Optional[Fraction] = None) -> Fraction:
    """(c-1)/(c+3), or (c-1)/(c+eta^2+2*eta) under the eta premise."""
    if c <= 1:
        raise ValueError("bound is vacuous for c <= 1")
    if eta is None:
        return (c - 1) / (c + 3)
    return (c - 1) / (c + eta * eta + 2 * eta)


def check_hitting_lemma(w: WalkInstance) -> VerificationReport:
    """Assert exact (or heuristic lower-bound) p(S; x) >= the lemma bound."""
    rep = VerificationReport("hitting-lemma", config={
        "n": len(w.S), "x": str(w.x), "policy": w.policy.value,
        "eta": None if w.eta is None else str(w.eta)})
    c = w.c
    rep.config["c"] = float(c)
    if c <= 1:
        rep.record("c > 1 (bound non-vacuous)", False,
                   f"c = {float(c):.6g}: bound vacuous, skipped")
        rep.note("skipped: c <= 1")
        return rep
    p = walk_success_probability(w)
    rep.check("p(S;x) >= (c-1)/(c+3)", p, hitting_bound(c),
              strict=False, slack=0.0,
              detail=f"exact p = {p} ({float(p):.6g})")
    if w.eta is not None:
        if rep.record("eta premise: weights in (0, eta*x] u [x, inf)",
                      w.eta_premise_holds()):
            rep.check("p(S;x) >= (c-1)/(c+eta^2+2*eta)", p,
                      hitting_bound(c, w.eta), strict=False, slack=0.0)
    return rep


def simulate_walk(w: WalkInstance, trials: int, seed: int) -> dict:
    """Monte Carlo estimate of p(S; x) with a 99% Wilson lower confidence
    bound; deterministic given the seed.  The ordering is the policy's
    (best-order falls back to descending, which only underestimates)."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if w.policy is Policy.FIXED_ORDER:
        order = w.S
    else:
        order = tuple(sorted(w.S, reverse=True))
    ds = np.array([float(d) for d in order])
    xf = float(w.x)
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 1 << 16
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        signs = rng.integers(0, 2, size=(b, len(ds))) * 2 - 1
        walks = np.cumsum(signs * ds, axis=1)
        hit = np.max(np.abs(walks), axis=1) >= xf - 1e-12
        hits += int(np.count_nonzero(hit))
        done += b
    phat = hits / trials
    z = 2.5758293035489004  # 99% two-sided normal quantile
    denom = 1.0 + z * z / trials
    center = phat + z * z / (2 * trials)
    rad = z * math.sqrt(phat * (1 - phat) / trials
                        + z * z / (4 * trials * trials))
    return {
        "trials": trials,
        "seed": seed,
        "hits": hits,
        "estimate": phat,
        "wilson_lcb_99": max(0.0, (center - rad) / denom),
        "wilson_ucb_99": min(1.0, (center + rad) / denom),
    }
