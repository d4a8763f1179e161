"""Exact enumeration oracle: tail probabilities of Rademacher sums.

A Rademacher sum is X = sum a_i eps_i with independent uniform signs
eps_i in {-1, +1}.  When the weights a_i are rational multiples of a
common square root, every tail probability Pr[X > t] is a dyadic
rational k/2^n that the oracle computes exactly, with no floating point.

Run:  python3 demos/01_exact_oracle.py
"""

from fractions import Fraction

from radbound.core import (Direction, Mode, TailQuery, exact_tail,
                           high_dim_exact_tail, normalize_weights,
                           sqrt_scaled_vector)
from radbound.verify import T2_CONFIG, _scaled_vector_set


def main() -> None:
    # Weights are normalized to unit variance; input scale is irrelevant.
    w = normalize_weights([1, 1, 1, 1])             # each weight becomes 1/2
    print("four equal weights, Pr[X > 1]  =",
          exact_tail(w, TailQuery(1, Mode.GT)))     # 1/16
    print("four equal weights, Pr[X >= 1] =",
          exact_tail(w, TailQuery(1, Mode.GE)))     # 5/16

    # The hardest scalar configuration for the 6/64 lower bound on
    # Pr[X >= sqrt(Var)]: six weights equal to 1/sqrt(6).
    six = sqrt_scaled_vector(6, Fraction(1, 6))
    p = exact_tail(six, TailQuery(1, Mode.GE))
    print("six weights 1/sqrt(6), Pr[X >= 1] =", p, "(the extremal 7/64)")
    assert p == Fraction(7, 64) and p >= Fraction(6, 64)

    # A difficult mixed configuration: [1/2, 1/2, 1/4 x8].  Exhaustive
    # enumeration gives 111/1024, strictly below 7/64 = 112/1024.
    mixed = normalize_weights([2, 2] + [1] * 8)
    print("[1/2, 1/2, 1/4 x8], Pr[X > 1] =",
          exact_tail(mixed, TailQuery(1, Mode.GT)))

    # Two-sided and windowed queries use the same machinery.
    print("Pr[|X| >= 1] for four equal weights =",
          exact_tail(w, TailQuery(1, Mode.ABS_GE)))  # 5/8, by symmetry 2*GE

    # Vector-valued sums: X = sum v_i eps_i in R^d, compared by norm.
    print("planar configuration, Pr[|X| <= 1] =",
          high_dim_exact_tail(T2_CONFIG, Direction.NORM_LE_1))   # 1/4
    rows = [[Fraction(1, 2), 0], [Fraction(1, 2), 0],
            [0, Fraction(1, 2)], [0, Fraction(1, 2)]]
    vs = _scaled_vector_set(rows)
    print("axis-aligned pairs,   Pr[|X| >= 1] =",
          high_dim_exact_tail(vs, Direction.NORM_GE_1))


if __name__ == "__main__":
    main()
