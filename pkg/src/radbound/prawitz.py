"""Smoothing lower bound F(a, x, T, q) on tail probabilities of Rademacher sums.

For any unit-variance Rademacher sum with largest weight <= a and any
q in [0, 1], T > 0,

    Pr[X > x]  >=  F(a, x, T, q)
              =  1/2 - int_0^q |k(u,x,T)| g(Tu, a) du
                     - int_q^1 |k(u,x,T)| h(Tu, a) du
                     - int_0^q  k(u,x,T)  exp(-(Tu)^2/2) du,

with the kernel k and the characteristic-function envelopes g, h defined
below.  The integrals are evaluated one-sidedly: every numeric error is
subtracted from the returned value, so the result is always a valid lower
bound (possibly a weak one, never a wrong one).

Two integrators are provided.  TRAPEZOID_CERTIFIED uses the composite
trapezoid rule with explicit Lipschitz constants for the integrands and
subtracts the implied worst-case error.  ADAPTIVE_DISCOUNTED uses
scipy.integrate.quad and subtracts a flat 0.01 discount, checking that
quad's own error estimate is far below that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

#: additive slack folded into every certified integral for floating-point
#: round-off (round-to-nearest double arithmetic on ~1e5 panel sums)
FP_SLACK = 1e-9


class Integrator(Enum):
    TRAPEZOID_CERTIFIED = "trapezoid"
    ADAPTIVE_DISCOUNTED = "adaptive"


ADAPTIVE_DISCOUNT = 0.01


@dataclass(frozen=True)
class ThetaConstant:
    """Bracket for the unique root of exp(-v^2/2) = -cos(v) in [0, pi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi <= math.pi):
            raise ValueError("bracket must sit inside [0, pi]")
        if self.hi - self.lo > 1e-10:
            raise ValueError("bracket too wide")

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _theta_residual(v: float) -> float:
    return math.exp(-v * v / 2.0) + math.cos(v)


def theta_root() -> ThetaConstant:
    """Bisect exp(-v^2/2) + cos(v) on [pi/2, pi] down to width 1e-10.

    The residual is positive at pi/2 and negative at pi, and the root is
    unique in [0, pi] (the residual is positive on [0, pi/2]).
    """
    lo, hi = math.pi / 2.0, math.pi
    flo = _theta_residual(lo)
    assert flo > 0.0 and _theta_residual(hi) < 0.0
    while hi - lo > 0.999e-10:
        mid = 0.5 * (lo + hi)
        if _theta_residual(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return ThetaConstant(lo, hi)


THETA = theta_root()


@dataclass(frozen=True)
class PrawitzParams:
    a: float
    x: float
    T: float
    q: float

    def __post_init__(self):
        if not 0.0 < self.a <= 1.0:
            raise ValueError("need a in (0, 1]")
        if self.T <= 0.0:
            raise ValueError("need T > 0")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("need q in [0, 1]")


def default_params(a: float, x: float) -> PrawitzParams:
    """The table-building protocol: T = pi/a and q = 1/2.

    This choice keeps the first integrand on the single smooth branch of g
    (a*T*u = pi*u <= pi/2 throughout [0, q]).
    """
    return PrawitzParams(a=a, x=x, T=math.pi / a, q=0.5)


@dataclass(frozen=True)
class PrawitzEvaluation:
    value: float            # lower bound, error budget already subtracted
    error_budget: float
    integrator: Integrator

    def __post_init__(self):
        if self.error_budget < 0.0:
            raise ValueError("error budget must be nonnegative")


# ---------------------------------------------------------------------------
# Kernel and envelopes.
# ---------------------------------------------------------------------------

def kernel_k(u: float, x: float, T: float) -> float:
    """k(u,x,T) = (1-u) sin(pi u + T u x)/sin(pi u) + sin(T u x)/pi,
    continued to k(0) = 1 + T x / pi and k(1) = 0."""
    if u == 0.0:
        return 1.0 + T * x / math.pi
    if u == 1.0:
        return 0.0
    piu = math.pi * u
    tux = T * u * x
    return (1.0 - u) * math.sin(piu + tux) / math.sin(piu) + math.sin(tux) / math.pi


def _kernel_k_grid(u: np.ndarray, c) -> np.ndarray:
    """k on a u-grid for c = T*x; c may be a scalar or a column for broadcasting.
    Endpoints u=0 and u=1 must be handled by the caller."""
    piu = math.pi * u
    cu = c * u
    return (1.0 - u) * np.sin(piu + cu) / np.sin(piu) + np.sin(cu) / math.pi


def _pow_inv_a2(base: np.ndarray, a: float) -> np.ndarray:
    """base ** (1/a^2) for base in [0, 1]; underflow of the log path goes to 0,
    which only weakens (never breaks) the one-sided bounds built on top."""
    base = np.asarray(base, dtype=float)
    out = np.zeros_like(base)
    pos = base > 0.0
    with np.errstate(under="ignore"):
        out[pos] = np.exp(np.log(base[pos]) / (a * a))
    return out


def envelope_g(v: float, a: float) -> float:
    """Upper bound on |phi_X(v) - phi_Z(v)| given a_1 <= a:
    exp(-v^2/2) - cos(a v)^(1/a^2) while a v <= pi/2, else exp(-v^2/2) + 1.
    At the branch point the larger branch is returned."""
    gauss = math.exp(-v * v / 2.0)
    av = a * v
    if av < math.pi / 2.0:
        return gauss - float(_pow_inv_a2(np.array(math.cos(av)), a))
    if av > math.pi / 2.0:
        return gauss + 1.0
    return max(gauss - 0.0, gauss + 1.0)


def envelope_h(v: float, a: float) -> float:
    """Upper bound on |phi_X(v)| given a_1 <= a: exp(-v^2/2) for a v <= theta,
    (-cos(a v))^(1/a^2) for theta <= a v <= pi, else 1.

    Theta is only known as a bracket; the exp branch is classified with the
    bracket's low end and the cosine branch with its high end, and the
    ambiguous sliver in between takes the max of both, so the result is an
    upper envelope for any true theta in the bracket.
    """
    av = a * v
    exp_branch = math.exp(-v * v / 2.0)
    if av <= THETA.lo:
        return exp_branch
    if av > math.pi:
        return 1.0
    cos_branch = float(_pow_inv_a2(np.array(max(0.0, -math.cos(av))), a))
    if av < THETA.hi:
        return max(exp_branch, cos_branch)
    if av == math.pi:
        return max(cos_branch, 1.0)
    return cos_branch


# ---------------------------------------------------------------------------
# Certified trapezoid integration.
# ---------------------------------------------------------------------------

def lipschitz_bounds(T: float, x: float) -> tuple:
    """Lipschitz constants (B1, B2, B3) in u for the three integrands of F.

    Conservative closed-form estimates assembled term by term:
    with c = |T x|,
      |k|  <= 1 + (2c + 1)/pi              (split (1-u)cot(pi*u)sin(cu) at u=1/2),
      |k'| <= T (1 + 2c/pi) + c^2/(2 pi) + pi,
      the envelopes are bounded by 2 and their u-derivatives by
      T * sup_v |d/dv envelope| <= T (1 + 1) plus the Gaussian factor's T v
      contribution, all folded into the additive pi + c^2/(2 pi) terms.
    A global safety factor 2 is applied on top.
    """
    c = abs(T * x)
    b1 = T * (1.0 + 2.0 * c / math.pi) + 1.1 * (c * c / TWO_PI + math.pi)
    b2 = T * (1.0 + 2.0 * c / math.pi) + c * c / TWO_PI + math.pi
    b3 = (2.0 * T / 3.0) * (1.0 + 2.0 * c / math.pi) + c * c / TWO_PI + math.pi
    return 2.0 * b1, 2.0 * b2, 2.0 * b3


def integrate_certified(f: Callable, lo: float, hi: float, panels: int,
                        lipschitz_bound: float,
                        breakpoints: Sequence[float] = ()) -> tuple:
    """Composite trapezoid rule with a certified error bound.

    Splits [lo, hi] at the given breakpoints (piecewise-branch boundaries of
    the integrand), applies `panels` panels proportionally per piece, and
    returns (value, err) with |value - true integral| <= err, using that a
    B-Lipschitz function deviates from its chord by at most B*h/2 on a panel
    of width h (error B*h^2/4 per panel).
    """
    if panels < 1:
        raise ValueError("need at least one panel")
    pieces = sorted({lo, hi, *(b for b in breakpoints if lo < b < hi)})
    total = 0.0
    err = 0.0
    for s, e in zip(pieces, pieces[1:]):
        n = max(1, int(round(panels * (e - s) / (hi - lo))))
        grid = np.linspace(s, e, n + 1)
        vals = _eval_on_grid(f, grid)
        if not np.all(np.isfinite(vals)):
            raise ArithmeticError("non-finite integrand value")
        h = (e - s) / n
        total += float(np.trapezoid(vals, dx=h))
        err += lipschitz_bound * (e - s) * h / 4.0
    return total, err + FP_SLACK


def _eval_on_grid(f: Callable, grid: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(grid), dtype=float)
        if vals.shape == grid.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([f(u) for u in grid], dtype=float)


# ---------------------------------------------------------------------------
# F itself.
# ---------------------------------------------------------------------------

def _branch_points(p: PrawitzParams) -> tuple:
    """Branch boundaries of the integrands, in the u variable."""
    at = p.a * p.T
    g_pts = ((math.pi / 2.0) / at,)
    h_pts = (THETA.lo / at, THETA.hi / at, math.pi / at)
    return g_pts, h_pts


def prawitz_F(p: PrawitzParams,
              mode: Integrator = Integrator.TRAPEZOID_CERTIFIED,
              panels: int = 20000) -> PrawitzEvaluation:
    """Evaluate F(a, x, T, q) as a certified lower bound on Pr[X > x].

    The returned value has the full error budget already subtracted; a
    non-finite intermediate aborts (it would mean the bound itself is wrong,
    which must never be papered over by clamping).
    """
    a, x, T, q = p.a, p.x, p.T, p.q
    g_pts, h_pts = _branch_points(p)

    def f1(u):
        u = np.asarray(u, dtype=float)
        k = _kernel_at(u, x, T)
        g = np.array([envelope_g(T * ui, a) for ui in np.atleast_1d(u)])
        return np.abs(k) * g.reshape(np.shape(k))

    def f2(u):
        u = np.asarray(u, dtype=float)
        k = _kernel_at(u, x, T)
        h = np.array([envelope_h(T * ui, a) for ui in np.atleast_1d(u)])
        return np.abs(k) * h.reshape(np.shape(k))

    def f3(u):
        u = np.asarray(u, dtype=float)
        k = _kernel_at(u, x, T)
        return k * np.exp(-np.square(T * u) / 2.0)

    if mode is Integrator.TRAPEZOID_CERTIFIED:
        b1, b2, b3 = lipschitz_bounds(T, x)
        i1 = i2 = (0.0, 0.0)
        if q > 0.0:
            i1 = integrate_certified(f1, 0.0, q, panels, b1, g_pts)
        if q < 1.0:
            i2 = integrate_certified(f2, q, 1.0, panels, b2, h_pts)
        i3 = integrate_certified(f3, 0.0, q, panels, b3) if q > 0.0 else (0.0, 0.0)
        budget = i1[1] + i2[1] + i3[1]
        value = 0.5 - (i1[0] + i2[0] + i3[0]) - budget
    else:
        from scipy.integrate import quad
        total = 0.0
        est = 0.0
        if q > 0.0:
            for f, pts in ((f1, g_pts), (f3, ())):
                v, e = quad(lambda u, f=f: float(np.atleast_1d(f(u))[0]), 0.0, q,
                            points=[b for b in pts if 0.0 < b < q], limit=200)
                total += v
                est += e
        if q < 1.0:
            v, e = quad(lambda u: float(np.atleast_1d(f2(u))[0]), q, 1.0,
                        points=[b for b in h_pts if q < b < 1.0], limit=200)
            total += v
            est += e
        if not math.isfinite(total):
            raise ArithmeticError("non-finite integral in Prawitz bound")
        if est > ADAPTIVE_DISCOUNT / 10.0:
            raise ArithmeticError(
                f"adaptive integrator error estimate {est:g} not well below "
                f"the {ADAPTIVE_DISCOUNT} discount")
        budget = ADAPTIVE_DISCOUNT
        value = 0.5 - total - budget
    if not math.isfinite(value):
        raise ArithmeticError("non-finite Prawitz value")
    return PrawitzEvaluation(value=value, error_budget=budget, integrator=mode)


def _kernel_at(u: np.ndarray, x: float, T: float) -> np.ndarray:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty_like(u)
    interior = (u > 0.0) & (u < 1.0)
    out[interior] = _kernel_k_grid(u[interior], T * x)
    out[u == 0.0] = 1.0 + T * x / math.pi
    out[u == 1.0] = 0.0
    return out


# ---------------------------------------------------------------------------
# Vectorized row evaluation used by the table build.
# ---------------------------------------------------------------------------

def prawitz_row(a: float, xs: np.ndarray, budget: float = 0.01,
                chunk: int = 64, max_panels: int = 200000) -> np.ndarray:
    """Certified-trapezoid F(a, x, pi/a, 1/2) for many x at once.

    Same bound as prawitz_F(..., TRAPEZOID_CERTIFIED) but evaluated with
    shared u-grids per chunk of thresholds; the per-x error budget is already
    subtracted from each entry.  Panel counts are sized from the Lipschitz
    constants so the subtracted budget stays below `budget` (a quarter per
    integral, mirroring the published 0.01-discount protocol), unless the
    max_panels cap bites first.  With T = pi/a the branch structure in u is
    x-independent: g stays on its smooth branch on [0, 1/2] and h switches at
    u = theta/pi and u = 1.
    """
    T = math.pi / a
    xs = np.asarray(xs, dtype=float)
    out = np.empty_like(xs)
    for s in range(0, len(xs), chunk):
        out[s:s + chunk] = _prawitz_chunk(a, T, xs[s:s + chunk],
                                          budget, max_panels)
    return out


def _env_g_grid(u: np.ndarray, a: float, T: float) -> np.ndarray:
    # valid on u in [0, 1/2] where a*T*u = pi*u <= pi/2
    return np.exp(-np.square(T * u) / 2.0) - _pow_inv_a2(np.cos(math.pi * u), a)


def _env_h_grid(u: np.ndarray, a: float) -> np.ndarray:
    # valid on u in [1/2, 1]; branch split handled via THETA bracket
    T = math.pi / a
    exp_part = np.exp(-np.square(T * u) / 2.0)
    cos_part = _pow_inv_a2(np.maximum(0.0, -np.cos(math.pi * u)), a)
    out = np.where(math.pi * u <= THETA.lo, exp_part, cos_part)
    sliver = (math.pi * u > THETA.lo) & (math.pi * u < THETA.hi)
    out[sliver] = np.maximum(exp_part[sliver], cos_part[sliver])
    return out


def _trap_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n + 1, h)
    w[0] = w[-1] = h / 2.0
    return w


def _prawitz_chunk(a: float, T: float, xs: np.ndarray,
                   budget: float, max_panels: int) -> np.ndarray:
    xmax = float(np.max(np.abs(xs)))
    b1, b2, b3 = lipschitz_bounds(T, xmax)

    # size each integral for error <= budget/4 (err = B * L^2 / (4n))
    def _size(b: float, length: float) -> int:
        return int(min(max_panels, max(32, math.ceil(b * length * length
                                                     / budget))))

    # [0, 1/2]: integrands 1 and 3 (g-branch smooth, Gaussian smooth)
    n1 = max(_size(b1, 0.5), _size(b3, 0.5))
    u1 = np.linspace(0.0, 0.5, n1 + 1)
    w1 = _trap_weights(n1, 0.5 / n1)
    g1 = _env_g_grid(u1, a, T)
    gauss1 = np.exp(-np.square(T * u1) / 2.0)

    # [1/2, 1]: integrand 2, split at u = theta/pi
    split = THETA.hi / math.pi
    n2 = _size(b2, 0.5)
    n2a = max(1, int(round(n2 * (split - 0.5) / 0.5)))
    n2b = max(1, n2 - n2a)
    u2a = np.linspace(0.5, split, n2a + 1)
    u2b = np.linspace(split, 1.0, n2b + 1)
    w2a = _trap_weights(n2a, (split - 0.5) / n2a)
    w2b = _trap_weights(n2b, (1.0 - split) / n2b)
    h2a = _env_h_grid(u2a, a)
    h2b = _env_h_grid(u2b, a)

    out = np.empty_like(xs)
    for i, x in enumerate(xs):
        c = T * x
        k1 = np.empty_like(u1)
        k1[0] = 1.0 + c / math.pi
        k1[1:] = _kernel_k_grid(u1[1:], c)
        i1 = float(np.dot(w1, np.abs(k1) * g1))
        i3 = float(np.dot(w1, k1 * gauss1))

        k2a = _kernel_k_grid(u2a, c)
        k2b = np.empty_like(u2b)
        k2b[:-1] = _kernel_k_grid(u2b[:-1], c)
        k2b[-1] = 0.0
        i2 = float(np.dot(w2a, np.abs(k2a) * h2a)) + \
            float(np.dot(w2b, np.abs(k2b) * h2b))

        bx1, bx2, bx3 = lipschitz_bounds(T, x)
        err = (bx1 * 0.5 * (0.5 / n1) / 4.0 +
               bx3 * 0.5 * (0.5 / n1) / 4.0 +
               bx2 * (split - 0.5) * ((split - 0.5) / n2a) / 4.0 +
               bx2 * (1.0 - split) * ((1.0 - split) / n2b) / 4.0 +
               3.0 * FP_SLACK)
        val = 0.5 - i1 - i2 - i3 - err
        if not math.isfinite(val):
            raise ArithmeticError("non-finite Prawitz value")
        out[i] = val
    return out
