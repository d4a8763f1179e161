"""Acceptance criteria for the artifact, numbered 1-8.

Criterion 1 includes a verbatim assertion of the published exact value
55/512 for the weight collection [1/2, 1/2, 1/4 x8].  Exhaustive
enumeration (three independent routes: the oracle, a direct sign loop, and
a generating-function expansion) gives 111/1024 instead, so that single
assertion fails; the analysis is recorded in the project decision notes.
The criterion is implemented faithfully rather than patched to pass.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from radbound.core import (Direction, Mode, TailQuery, _count_ge,
                           _integer_sums, _min_int_with, exact_tail,
                           high_dim_exact_tail, normalize_weights,
                           sqrt_scaled_vector)
from radbound.chainwalk import (ChainCertificate, Policy, WalkInstance,
                                check_antichain_bound, check_hitting_lemma,
                                check_obs_k2, check_obs_k3, hitting_bound,
                                simulate_walk, walk_success_probability)
from radbound.dptable import (GridSpec, _d0_layer, _iterate, build_table,
                              verify_stash)
from radbound.prawitz import (Integrator, default_params, prawitz_F,
                              prawitz_row, theta_root)
from radbound.verify import (T2_CONFIG, T3_CONFIG, _scaled_vector_set,
                             verify_A1, verify_A2, verify_A3, verify_qsums)

GE1 = TailQuery(1, Mode.GE)
GT1 = TailQuery(1, Mode.GT)
GT035 = TailQuery(Fraction(7, 20), Mode.GT)


# ---------------------------------------------------------------------------
# Criterion 1 — exact fixture suite (< 5 s), zero tolerance.
# ---------------------------------------------------------------------------

def test_criterion_1_exact_fixture_suite():
    t0 = time.monotonic()
    assert exact_tail(normalize_weights([1]), GT1) == 0
    assert exact_tail(normalize_weights([1, 1, 1, 1]), GT1) == Fraction(1, 16)
    assert exact_tail(normalize_weights([1] * 9), GT1) == Fraction(23, 256)
    assert exact_tail(normalize_weights([2] + [1] * 5), GT1) == Fraction(6, 64)
    mixed = normalize_weights([2, 2] + [1] * 8)
    assert exact_tail(mixed, GT1) == Fraction(111, 1024)   # recomputed value
    assert exact_tail(mixed, GT1) < Fraction(7, 64)
    assert exact_tail(sqrt_scaled_vector(6, Fraction(1, 6)), GE1) \
        == Fraction(7, 64)
    assert high_dim_exact_tail(T2_CONFIG, Direction.NORM_LE_1) \
        == Fraction(1, 4)
    assert high_dim_exact_tail(T3_CONFIG, Direction.NORM_LE_1) \
        == Fraction(3, 16)
    assert time.monotonic() - t0 < 5.0


def test_criterion_1_published_value_for_mixed_difficult_case():
    """The published exact value for [1/2, 1/2, 1/4 x8], asserted verbatim.

    EXPECTED TO FAIL: enumeration yields 111/1024, not 55/512 (= 110/1024);
    see the module docstring and the decision notes.
    """
    mixed = normalize_weights([2, 2] + [1] * 8)
    assert exact_tail(mixed, GT1) == Fraction(55, 512)


# ---------------------------------------------------------------------------
# Criterion 2 — theorem-level spot checks via oracle (< 30 s).
# ---------------------------------------------------------------------------

def test_criterion_2_theorem_spot_checks():
    t0 = time.monotonic()
    rng = np.random.default_rng(2024)
    for _ in range(500):
        n = int(rng.integers(1, 15))
        w = normalize_weights([int(v) for v in rng.integers(1, 10, size=n)])
        assert exact_tail(w, GE1) >= Fraction(6, 64)
        if n >= 2:
            assert exact_tail(w, GT1) >= Fraction(1, 16)
        assert exact_tail(w, GT035) >= Fraction(1, 4)

    bound = (1.0 - math.sqrt(1.0 - math.exp(-2.0))) / 2.0
    for _ in range(50):
        d = int(rng.integers(1, 4))
        n = int(rng.integers(2, 7))
        rows = [[Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 5)))
                 for _ in range(d)] for _ in range(n)]
        for row in rows:
            if not any(row):
                row[0] = Fraction(1, 3)
        vs = _scaled_vector_set(rows)
        assert float(high_dim_exact_tail(vs, Direction.NORM_GE_1)) > bound
        assert float(high_dim_exact_tail(vs, Direction.NORM_LE_1)) > bound
    assert time.monotonic() - t0 < 30.0


# ---------------------------------------------------------------------------
# Criterion 3 — theta root bracket (< 1 ms per solve).
# ---------------------------------------------------------------------------

def test_criterion_3_theta_root():
    t0 = time.monotonic()
    th = theta_root()
    elapsed = time.monotonic() - t0
    assert th.hi - th.lo <= 1e-10
    assert abs(th.mid - 1.778) <= 1e-4
    assert elapsed < 0.05


# ---------------------------------------------------------------------------
# Criterion 4 — Prawitz soundness on 10^4 random triples + path agreement.
# ---------------------------------------------------------------------------

def _exact_gt_counts(w, xs):
    """Exact Pr[X > x] for many thresholds via one enumeration."""
    sums, den = _integer_sums(w.exact.coeffs)
    arr = np.sort(np.array(sums, dtype=np.int64))
    total = arr.size
    r = w.exact.scale
    out = []
    for x in xs:
        cutoff = _min_int_with(r, Fraction(x) * den, strict=True)
        out.append(Fraction(total - int(np.searchsorted(arr, cutoff, "left")),
                            total))
    return out


def test_criterion_4_prawitz_soundness_10k_triples():
    rng = np.random.default_rng(44)
    checked = 0
    for _ in range(100):
        n = int(rng.integers(2, 15))
        w = normalize_weights([int(v) for v in rng.integers(1, 10, size=n)])
        a = min(1.0, w.max_weight + float(rng.uniform(0.0, 0.15)))
        xs = rng.uniform(-1.0, 2.5, size=100)
        fs = prawitz_row(a, xs, budget=0.01)
        exact = _exact_gt_counts(w, xs)
        for f, p in zip(fs, exact):
            assert f <= float(p) + 1e-12
            checked += 1
    assert checked == 10_000


def test_criterion_4_integrator_paths_agree():
    rng = np.random.default_rng(45)
    for _ in range(1000):
        a = float(rng.uniform(0.25, 0.95))
        x = float(rng.uniform(-1.0, 2.5))
        p = default_params(a, x)
        tr = prawitz_F(p, Integrator.TRAPEZOID_CERTIFIED, panels=20000)
        ad = prawitz_F(p, Integrator.ADAPTIVE_DISCOUNTED)
        raw_t = tr.value + tr.error_budget
        raw_a = ad.value + ad.error_budget
        assert abs(raw_t - raw_a) <= tr.error_budget + ad.error_budget


# ---------------------------------------------------------------------------
# Criterion 5 — full-resolution build within budget; stash passes.
# ---------------------------------------------------------------------------

def test_criterion_5_full_build_and_stash(table):
    import os
    log = os.path.join(os.path.dirname(__file__), "..", "tables",
                       "build_log.txt")
    seconds = None
    if os.path.exists(log):
        for line in open(log, encoding="utf-8"):
            if line.startswith("total seconds:"):
                seconds = float(line.split(":")[1])
    if seconds is None:
        seconds = table.build_seconds
    assert seconds is not None and 0 < seconds < 7200.0, \
        f"recorded build time {seconds}"
    assert table.grid.delta == Fraction(1, 400)
    assert table.grid.iterations == 10
    rep = verify_stash(table)
    assert rep.all_pass, [it.description for it in rep.failing]
    assert len(rep.items) >= 9  # 8 stash entries + exact witness
    # the two-sided entry: table side and exact witness
    assert table.query(0.51, 1.01) >= 1.0 / 16.0 - 1e-9
    assert exact_tail(normalize_weights([1, 1, 1, 1]),
                      TailQuery(Fraction(101, 100), Mode.GT)) \
        == Fraction(1, 16)


# ---------------------------------------------------------------------------
# Criterion 6 — Appendix-style campaigns all pass with positive margins.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("runner,delta", [
    (verify_A1, 0.005), (verify_A2, 0.03), (verify_A3, 0.01)])
def test_criterion_6_mesh_campaigns(table, runner, delta):
    rep = runner(table, delta)
    assert rep.all_pass, [it.description for it in rep.failing]
    assert rep.min_margin is not None and rep.min_margin > 0.0
    empties = [it for it in rep.items
               if it.description == "failing-point list empty"]
    assert empties and all(it.passed and not it.detail for it in empties)


def test_criterion_6_qsums(table):
    rep = verify_qsums(table)
    assert rep.all_pass, [it.description for it in rep.failing]
    margins = [it.margin for it in rep.items
               if it.margin is not None and it.target not in (0.0,)]
    assert min(margins) > 0.0


# ---------------------------------------------------------------------------
# Criterion 7 — table soundness against the oracle; sweep monotonicity.
# ---------------------------------------------------------------------------

def test_criterion_7_table_soundness(table):
    rng = np.random.default_rng(77)
    for _ in range(200):
        n = int(rng.integers(1, 15))
        w = normalize_weights([int(v) for v in rng.integers(1, 10, size=n)])
        x = float(rng.uniform(-3.0, 3.0))
        claimed = table.query(w.max_weight, x)
        exact = exact_tail(w, TailQuery(Fraction(x), Mode.GT))
        assert claimed <= float(exact) + 1e-12, \
            (w.weights, x, claimed, exact)


def test_criterion_7_iterates_monotone():
    g = GridSpec(delta=Fraction(1, 40))
    d = _d0_layer(g, budget=0.01, cache_dir=None)
    d = np.maximum.accumulate(d[:, ::-1], axis=1)[:, ::-1]
    d[:, -1] = 0.0
    for _ in range(10):
        nxt = _iterate(g, d)
        assert np.all(np.isfinite(nxt))
        assert np.all(nxt >= d - 1e-15)
        d = nxt


# ---------------------------------------------------------------------------
# Criterion 8 — chainwalk suite (< 1 min).
# ---------------------------------------------------------------------------

def test_criterion_8_observations_random_instances():
    import random
    t0 = time.monotonic()
    rnd = random.Random(88)

    for _ in range(1000):                      # chain bound (Observation 1)
        t = rnd.randint(1, 10)
        k = rnd.randint(1, t)
        b = sorted((Fraction(rnd.randint(1, 16), 8) for _ in range(t)),
                   reverse=True)
        alpha = sum(b[-k:]) * Fraction(rnd.randint(1, 4), 4)
        tail = tuple(Fraction(rnd.randint(1, 8), 16)
                     for _ in range(rnd.randint(0, 4)))
        rep = check_antichain_bound(ChainCertificate(
            b=tuple(b), k=k, alpha=alpha, tail_weights=tail))
        assert rep.all_pass, rep.to_dict()

    for _ in range(1000):                      # two-weight observation
        delta = Fraction(rnd.randint(1, 8), 8)
        b2 = delta * Fraction(rnd.randint(4, 12), 4)
        b1 = b2 + delta * Fraction(rnd.randint(4, 12), 4)
        tail = tuple(Fraction(rnd.randint(1, 8), 16)
                     for _ in range(rnd.randint(0, 4)))
        rep = check_obs_k2(b1, b2, delta, tail)
        assert rep.all_pass, rep.to_dict()

    done = 0                                   # three-weight observation
    while done < 1000:
        delta = Fraction(rnd.randint(1, 8), 8)
        c3 = delta * Fraction(rnd.randint(4, 12), 4)
        c2 = c3 + delta * Fraction(rnd.randint(4, 12), 4)
        c1 = c2 + delta * Fraction(rnd.randint(4, 12), 4)
        if abs(c1 - c2 - c3) < delta:
            continue
        tail = tuple(Fraction(rnd.randint(1, 8), 16)
                     for _ in range(rnd.randint(0, 4)))
        rep = check_obs_k3(c1, c2, c3, delta, tail)
        assert rep.all_pass, rep.to_dict()
        done += 1
    assert time.monotonic() - t0 < 60.0


def test_criterion_8_hitting_lemma_never_violated():
    import random
    rnd = random.Random(89)
    for _ in range(200):
        n = rnd.randint(1, 10)
        s = tuple(Fraction(rnd.randint(1, 12), 4) for _ in range(n))
        x = Fraction(rnd.randint(1, 8), 4)
        w = WalkInstance(S=s, x=x)
        if w.c <= 1:
            continue
        p = walk_success_probability(w)
        assert p >= hitting_bound(w.c)
        rep = check_hitting_lemma(w)
        assert rep.all_pass, rep.to_dict()

    eta = Fraction(1, 2)                       # eta form on premise instances
    for _ in range(100):
        n_small = rnd.randint(1, 6)
        n_big = rnd.randint(1, 3)
        s = tuple(Fraction(rnd.randint(1, 4), 8) for _ in range(n_small)) \
            + tuple(Fraction(rnd.randint(4, 8), 4) for _ in range(n_big))
        w = WalkInstance(S=s, x=Fraction(1), eta=eta)
        assert w.eta_premise_holds()
        if w.c <= 1:
            continue
        assert walk_success_probability(w) >= hitting_bound(w.c, eta)
        assert check_hitting_lemma(w).all_pass


def test_criterion_8_monte_carlo_within_ci():
    import random
    rnd = random.Random(90)
    for i in range(100):
        n = rnd.randint(1, 8)
        s = tuple(Fraction(rnd.randint(1, 10), 4) for _ in range(n))
        x = Fraction(rnd.randint(1, 10), 4)
        w = WalkInstance(S=s, x=x)
        exact = float(walk_success_probability(w))
        res = simulate_walk(w, trials=20_000, seed=1000 + i)
        assert res["wilson_lcb_99"] - 1e-12 <= exact \
            <= res["wilson_ucb_99"] + 1e-12, (s, x, exact, res)
