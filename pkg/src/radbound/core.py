"""Exact model of Rademacher sums: weight vectors, enumeration oracle, elimination.

A Rademacher sum is X = sum_i a_i * eps_i with independent uniform +-1 signs
eps_i and positive weights a_1 >= ... >= a_n, normalized to sum_i a_i^2 = 1.

Everything in this module is exact.  A weight vector keeps, next to its float
weights, an exact mirror (c_1, ..., c_n; r) of rationals with a_i = c_i*sqrt(r),
so any rational input remains exactly representable after normalization
(r = 1 / sum c_i^2).  Tail probabilities are dyadic rationals k / 2^n obtained
by full enumeration of sign vectors; threshold comparisons m*sqrt(r) >= t are
decided by integer sign tests and squaring, never by floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

ENUMERATION_CAP = 24


class EnumerationCapError(ValueError):
    """Instance requires enumerating more sign vectors than the configured cap."""


class ExactMirrorMissing(ValueError):
    """Operation needs the exact rational mirror, which this vector lacks."""


class Mode(Enum):
    GE = "ge"                    # Pr[X >= t]
    GT = "gt"                    # Pr[X > t]
    ABS_GE = "abs_ge"            # Pr[|X| >= t]
    ABS_IN_OPEN = "abs_in_open"  # Pr[|X| in (t1, t2)]


@dataclass(frozen=True)
class TailQuery:
    threshold: Fraction
    mode: Mode = Mode.GE
    second_threshold: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "threshold", Fraction(self.threshold))
        if self.mode is Mode.ABS_IN_OPEN:
            if self.second_threshold is None:
                raise ValueError("ABS_IN_OPEN needs a second threshold")
            object.__setattr__(
                self, "second_threshold", Fraction(self.second_threshold))
            if not self.threshold < self.second_threshold:
                raise ValueError("ABS_IN_OPEN needs t1 < t2")
        elif self.second_threshold is not None:
            raise ValueError("second_threshold only applies to ABS_IN_OPEN")


@dataclass(frozen=True)
class ExactMirror:
    """a_i = coeffs[i] * sqrt(scale); unit variance means sum(c^2) * scale == 1."""

    coeffs: tuple
    scale: Fraction

    def __post_init__(self):
        if sum(c * c for c in self.coeffs) * self.scale != 1:
            raise ValueError("exact mirror is not unit variance")


@dataclass(frozen=True)
class WeightVector:
    weights: tuple
    exact: Optional[ExactMirror] = None

    def __post_init__(self):
        w = self.weights
        if not w:
            raise ValueError("empty weight vector")
        if any(x <= 0 for x in w):
            raise ValueError("weights must be strictly positive")
        if any(w[i] < w[i + 1] for i in range(len(w) - 1)):
            raise ValueError("weights must be non-increasing")
        if abs(self.variance - 1.0) > 1e-12:
            raise ValueError("weights must be normalized to unit variance")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def variance(self) -> float:
        return math.fsum(x * x for x in self.weights)

    @property
    def max_weight(self) -> float:
        return self.weights[0]

    @property
    def partial_sigmas(self) -> tuple:
        """sigma_j = sqrt(1 - sum_{i<=j} a_i^2), j = 1..n; sigma_n = 0."""
        sigmas = []
        acc = 0.0
        for x in self.weights:
            acc += x * x
            sigmas.append(math.sqrt(max(0.0, 1.0 - acc)))
        return tuple(sigmas)


def normalize_weights(raw: Sequence) -> WeightVector:
    """Sort absolute values descending and rescale to unit variance.

    Rational inputs (int, Fraction, or 'p/q' strings) keep an exact mirror:
    the sorted magnitudes c_i are untouched and the normalization lives in the
    common factor sqrt(r) with r = 1/sum(c_i^2).
    """
    if not list(raw):
        raise ValueError("empty input")
    exact_vals = []
    all_rational = True
    for v in raw:
        f = _as_fraction(v)
        if f is None:
            all_rational = False
            break
        exact_vals.append(f)

    if all_rational:
        if any(v == 0 for v in exact_vals):
            raise ValueError("zero weight")
        coeffs = tuple(sorted((abs(v) for v in exact_vals), reverse=True))
        scale = 1 / sum(c * c for c in coeffs)
        weights = tuple(float(c) * math.sqrt(float(scale)) for c in coeffs)
        return WeightVector(weights, ExactMirror(coeffs, scale))

    vals = sorted((abs(float(v)) for v in raw), reverse=True)
    if any(v == 0 for v in vals):
        raise ValueError("zero weight")
    norm = math.sqrt(math.fsum(v * v for v in vals))
    return WeightVector(tuple(v / norm for v in vals), None)


def _as_fraction(v) -> Optional[Fraction]:
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return None


def sqrt_scaled_vector(count: int, square: Fraction) -> WeightVector:
    """count equal weights sqrt(square), e.g. six weights 1/sqrt(6)."""
    square = Fraction(square)
    if count * square != 1:
        raise ValueError("count * square must equal 1 for unit variance")
    w = math.sqrt(float(square))
    return WeightVector((w,) * count,
                        ExactMirror((Fraction(1),) * count, square))


# ---------------------------------------------------------------------------
# Exact comparisons of m*sqrt(r) against a rational threshold.
# ---------------------------------------------------------------------------

def _ge_sqrt(m: Fraction, r: Fraction, t: Fraction, strict: bool) -> bool:
    """Decide m*sqrt(r) > t (strict) or >= t, exactly.  Requires r > 0."""
    if m >= 0 and t < 0:
        return True
    if m >= 0 and t == 0:
        return m > 0 if strict else True
    if m <= 0 and t > 0:
        return False
    if m < 0 and t == 0:
        return False
    lhs = m * m * r
    rhs = t * t
    if m > 0:  # both sides positive
        return lhs > rhs if strict else lhs >= rhs
    # both sides negative: m*sqrt(r) >= t  <=>  |m|sqrt(r) <= |t|
    return lhs < rhs if strict else lhs <= rhs


def _min_int_with(r: Fraction, t: Fraction, strict: bool) -> int:
    """Smallest integer s with s*sqrt(r) > t (or >= t).  The predicate is
    monotone in s, so tail counts reduce to one cutoff."""
    if t == 0:
        return 1 if strict else 0
    # |t|/sqrt(r) has square K
    k = t * t / r
    u = math.isqrt(k.numerator // k.denominator)
    while (u + 1) * (u + 1) * k.denominator <= k.numerator:
        u += 1
    # now u = floor(sqrt(K))
    if t > 0:
        s = u if u * u * k.denominator == k.numerator else u + 1
        if strict and s * s * k.denominator == k.numerator:
            s += 1
        return s
    # t < 0: negative candidates -u..-1 satisfy s*sqrt(r) >= t iff s^2 <= K
    exact_hit = u * u * k.denominator == k.numerator
    s = -u
    if strict and exact_hit:
        s += 1
    return s


# ---------------------------------------------------------------------------
# Enumeration oracle.
# ---------------------------------------------------------------------------

def _integer_sums(coeffs: Sequence[Fraction]):
    """All 2^n signed sums of coeffs, scaled to integers.

    Returns (sums, den) where sums lists den * (sum eps_i c_i) over all sign
    vectors (with multiplicity).
    """
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    sums = [0]
    for c in ints:
        sums = [s - c for s in sums] + [s + c for s in sums]
    return sums, den

def _count_ge(sums, den: int, r: Fraction, t: Fraction, strict: bool,
              offset: Fraction = Fraction(0)) -> int:
    """Count sign vectors with (m + offset)*sqrt(r) >= t (or >), where the
    entries of `sums` are den*m."""
    # Bring the offset to the common denominator.
    d2 = den * offset.denominator // math.gcd(den, offset.denominator)
    mul = d2 // den
    off = int(offset * d2)
    cutoff = _min_int_with(r, t * d2, strict)
    return sum(1 for s in sums if s * mul + off >= cutoff)


def exact_tail(w: WeightVector, q: TailQuery,
               cap: int = ENUMERATION_CAP) -> Fraction:
    """Exact tail probability by enumeration of all 2^n sign vectors.

    Returns a dyadic rational with denominator 2^n.  Needs the exact mirror;
    vectors built from floats are rejected rather than approximated.
    """
    if w.exact is None:
        raise ExactMirrorMissing("exact_tail needs rational (or sqrt-rational) weights")
    if w.n > cap:
        raise EnumerationCapError(f"n={w.n} exceeds enumeration cap {cap}")
    sums, den = _integer_sums(w.exact.coeffs)
    r = w.exact.scale
    total = len(sums)
    if q.mode is Mode.GE:
        count = _count_ge(sums, den, r, q.threshold, strict=False)
    elif q.mode is Mode.GT:
        count = _count_ge(sums, den, r, q.threshold, strict=True)
    elif q.mode is Mode.ABS_GE:
        abss = [abs(s) for s in sums]
        count = _count_ge(abss, den, r, q.threshold, strict=False)
    else:  # ABS_IN_OPEN
        abss = [abs(s) for s in sums]
        above_t1 = _count_ge(abss, den, r, q.threshold, strict=True)
        above_t2 = _count_ge(abss, den, r, q.second_threshold, strict=False)
        count = above_t1 - above_t2
    return Fraction(count, total)


# ---------------------------------------------------------------------------
# Elimination.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EliminationScenario:
    """One of the 2^m branches after conditioning on the m leading signs.

    The residual vector is rescaled to unit variance; the original threshold t
    maps to (t - sum_{i<=m} a_i eps_i) / sigma_m.  `exact_tail` evaluates the
    residual probability without leaving exact arithmetic: with parent mirror
    (c, r) the residual condition (m' + shift)*sqrt(r) >= t is decided in the
    parent's field.
    """

    signs: tuple
    probability: Fraction
    residual: WeightVector
    _parent_mirror: Optional[ExactMirror] = field(default=None, repr=False)
    _shift: Fraction = field(default=Fraction(0), repr=False)
    _sigma: float = 1.0

    def threshold(self, t: float) -> float:
        """Float image of the shifted threshold (t - sum a_i eps_i)/sigma_m."""
        pm = self._parent_mirror
        shift = float(self._shift) * math.sqrt(float(pm.scale))
        return (t - shift) / self._sigma

    def exact_tail(self, t: Fraction, mode: Mode = Mode.GE,
                   cap: int = ENUMERATION_CAP) -> Fraction:
        """Pr over the residual signs, exact."""
        pm = self._parent_mirror
        if pm is None:
            raise ExactMirrorMissing("scenario lacks an exact mirror")
        if self.residual.n > cap:
            raise EnumerationCapError(
                f"n={self.residual.n} exceeds enumeration cap {cap}")
        t = Fraction(t)
        res_coeffs = pm.coeffs[len(self.signs):]
        sums, den = _integer_sums(res_coeffs)
        total = len(sums)
        if mode is Mode.GE:
            count = _count_ge(sums, den, pm.scale, t, False, offset=self._shift)
        elif mode is Mode.GT:
            count = _count_ge(sums, den, pm.scale, t, True, offset=self._shift)
        else:
            raise ValueError("elimination scenarios support GE/GT modes")
        return Fraction(count, total)


def eliminate(w: WeightVector, m: int) -> list:
    """Condition on the signs of the m largest weights.

    Returns 2^m scenarios, each with probability 2^-m and the residual sum
    rescaled to unit variance, so that for every threshold t
        Pr[X >= t] = 2^-m * sum_scenarios Pr[X' >= (t - sum a_i eps_i)/sigma_m].
    """
    if not 1 <= m < w.n:
        raise ValueError("need 1 <= m < n")
    sigma = w.partial_sigmas[m - 1]
    if sigma == 0.0:
        raise ValueError("cannot eliminate all of the variance")
    if w.exact is None:
        raise ExactMirrorMissing("eliminate needs the exact mirror")

    pm = w.exact
    sigma2 = 1 - pm.scale * sum(c * c for c in pm.coeffs[:m])
    if sigma2 <= 0:
        raise ValueError("cannot eliminate all of the variance")
    res_scale = pm.scale / sigma2
    res_coeffs = pm.coeffs[m:]
    res_mirror = ExactMirror(res_coeffs, res_scale)
    sigma_f = math.sqrt(float(sigma2))
    res_weights = tuple(float(c) * math.sqrt(float(res_scale))
                        for c in res_coeffs)
    residual = WeightVector(res_weights, res_mirror)

    scenarios = []
    for bits in range(2 ** m):
        signs = tuple(1 if (bits >> i) & 1 else -1 for i in range(m))
        shift = sum(s * c for s, c in zip(signs, pm.coeffs[:m]))
        scenarios.append(EliminationScenario(
            signs=signs,
            probability=Fraction(1, 2 ** m),
            residual=residual,
            _parent_mirror=pm,
            _shift=Fraction(shift),
            _sigma=sigma_f,
        ))
    return scenarios


# ---------------------------------------------------------------------------
# d-dimensional oracle.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqrtEntry:
    """A coordinate value sign * sqrt(square), with rational square >= 0."""

    sign: int
    square: Fraction

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        object.__setattr__(self, "square", Fraction(self.square))
        if self.square < 0:
            raise ValueError("square must be nonnegative")
        if (self.sign == 0) != (self.square == 0):
            raise ValueError("sign 0 iff square 0")

    def times(self, other: "SqrtEntry") -> Fraction:
        """Exact product; defined only when square*square' is a rational square."""
        prod = self.square * other.square
        if prod == 0:
            return Fraction(0)
        num_root = math.isqrt(prod.numerator)
        den_root = math.isqrt(prod.denominator)
        if num_root * num_root != prod.numerator or \
                den_root * den_root != prod.denominator:
            raise ValueError("coordinate product is irrational")
        return self.sign * other.sign * Fraction(num_root, den_root)

    def __float__(self) -> float:
        return self.sign * math.sqrt(float(self.square))


def sqrt_entry(value: Fraction) -> SqrtEntry:
    """Rational coordinate as a SqrtEntry."""
    value = Fraction(value)
    sign = (value > 0) - (value < 0)
    return SqrtEntry(sign, value * value)


class Direction(Enum):
    NORM_GE_1 = "norm_ge_1"
    NORM_LE_1 = "norm_le_1"


@dataclass(frozen=True)
class VectorWeightSet:
    """Vectors v_1..v_n in R^d with sum ||v_i||^2 = 1, coordinates sqrt-rational."""

    vectors: tuple  # tuple of tuples of SqrtEntry
    dimension: int

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("empty vector set")
        for v in self.vectors:
            if len(v) != self.dimension:
                raise ValueError("inconsistent dimension")
        if sum(e.square for v in self.vectors for e in v) != 1:
            raise ValueError("sum of squared norms must be exactly 1")

    @property
    def n(self) -> int:
        return len(self.vectors)

    def gram(self):
        """Exact rational Gram matrix of pairwise inner products."""
        n = self.n
        g = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                val = sum((self.vectors[i][k].times(self.vectors[j][k])
                           for k in range(self.dimension)), Fraction(0))
                g[i][j] = g[j][i] = val
        return g

    @staticmethod
    def from_rationals(rows: Iterable[Iterable[Fraction]]) -> "VectorWeightSet":
        vecs = tuple(tuple(sqrt_entry(Fraction(x)) for x in row) for row in rows)
        return VectorWeightSet(vecs, len(vecs[0]))

    @staticmethod
    def from_sqrt_entries(rows) -> "VectorWeightSet":
        """rows of (sign, square) pairs; e.g. (1, Fraction(7, 30)) for sqrt(7/30)."""
        vecs = tuple(tuple(SqrtEntry(s, Fraction(q)) for s, q in row)
                     for row in rows)
        return VectorWeightSet(vecs, len(vecs[0]))


def high_dim_exact_tail(vs: VectorWeightSet, direction: Direction,
                        cap: int = ENUMERATION_CAP) -> Fraction:
    """Pr[||sum eps_i v_i||_2 >= 1] (or <= 1), exact over 2^n sign vectors.

    The comparison is on the squared norm, a rational quadratic form in the
    signs, so no square roots are ever taken.
    """
    n = vs.n
    if n > cap:
        raise EnumerationCapError(f"n={n} exceeds enumeration cap {cap}")
    g = vs.gram()
    diag = sum((g[i][i] for i in range(n)), Fraction(0))
    count = 0
    for bits in range(2 ** n):
        signs = [1 if (bits >> i) & 1 else -1 for i in range(n)]
        cross = Fraction(0)
        for i in range(n):
            gi = g[i]
            si = signs[i]
            for j in range(i + 1, n):
                if signs[j] == si:
                    cross += gi[j]
                else:
                    cross -= gi[j]
        norm2 = diag + 2 * cross
        if direction is Direction.NORM_GE_1:
            count += norm2 >= 1
        else:
            count += norm2 <= 1
    return Fraction(count, 2 ** n)
