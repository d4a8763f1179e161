"""radbound: certified lower bounds on tail probabilities of Rademacher sums.

Submodules:
  core      exact-arithmetic enumeration oracle and elimination identities
  prawitz   the smoothing lower bound F(a, x, T, q) with certified errors
  dptable   the iterated dynamic-programming table D(a, x)
  chainwalk antichain/binomial combinatorics and the stopped sign-walk
  verify    the mesh/stash/fixture verification campaigns
  reporting machine-readable verification reports
  cli       command-line entry point
"""

__version__ = "0.1.0"

__all__ = ["core", "prawitz", "dptable", "chainwalk", "verify",
           "reporting", "cli"]
