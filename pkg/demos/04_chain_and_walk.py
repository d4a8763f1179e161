"""Combinatorial side: antichain window bounds and the stopped sign-walk.

Two exact tools used by the large-weight case analysis:

* Chain bound.  If the k smallest of b_1 >= ... >= b_t sum to at least
  alpha, then no open window of width 2*alpha can capture more than
  f(k, t)/2^t of the signed sums of (b_1, ..., b_t, tail...), where
  f(k, t) is the sum of the k largest binomial coefficients in row t.

* Hitting lemma.  A sign-walk with steps S stopped on leaving (-x, x)
  succeeds with probability at least (c-1)/(c+3) where c = sum(d^2)/x^2,
  improving to (c-1)/(c+eta^2+2*eta) when every step is either tiny
  (<= eta*x) or large (>= x).

Run:  python3 demos/04_chain_and_walk.py
"""

from fractions import Fraction

from radbound.chainwalk import (ChainCertificate, Policy, WalkInstance,
                                check_antichain_bound, check_hitting_lemma,
                                f_largest_binomials, hitting_bound,
                                max_window_mass, simulate_walk,
                                walk_success_probability)


def main() -> None:
    print("f(k, t), the sum of the k largest binomials in row t:")
    for k, t, v in [(1, 4, 6), (2, 2, 3), (3, 4, 14)]:
        got = f_largest_binomials(k, t)
        print(f"  f({k}, {t}) = {got}")
        assert got == v

    b = (Fraction(3, 2), Fraction(1), Fraction(1, 2))
    mass, center = max_window_mass(b, Fraction(1, 2))
    print(f"\nweights {tuple(map(str, b))}: densest open window of width 1 "
          f"holds {mass} of the signed sums (centered at {center})")

    cert = ChainCertificate(b=b, k=2, alpha=Fraction(3, 2),
                            tail_weights=(Fraction(1, 4),))
    rep = check_antichain_bound(cert)
    print(f"chain certificate check: {rep.to_dict()['summary']}")

    # The stopped walk: exact success probability by memoized recursion.
    w = WalkInstance(S=(Fraction(3, 5), Fraction(3, 5)), x=Fraction(1),
                     policy=Policy.BEST_ORDER_EXHAUSTIVE)
    print(f"\np({{3/5, 3/5}}; 1) best order = {walk_success_probability(w)}")

    big = WalkInstance(S=tuple(Fraction(k, 4) for k in (6, 5, 4, 3, 2, 1)),
                       x=Fraction(2))
    c = big.c
    p = walk_success_probability(big)
    print(f"six-step walk: c = {c} = {float(c):.3f},  exact p = {p} "
          f"= {float(p):.4f},  lemma bound (c-1)/(c+3) = "
          f"{float(hitting_bound(c)):.4f}")
    print("lemma check:", check_hitting_lemma(big).to_dict()["summary"])

    # Monte Carlo agrees with the exact recursion.
    sim = simulate_walk(big, trials=200_000, seed=7)
    print(f"simulation: p_hat = {sim['estimate']:.4f}, 99% Wilson interval "
          f"[{sim['wilson_lcb_99']:.4f}, {sim['wilson_ucb_99']:.4f}]")


if __name__ == "__main__":
    main()
