"""
Auditing classical bounds by brute force
========================================

A classical model is a mixture of deterministic response functions, where
either party may also fail to click. With two settings there are only 81 of
them, so every classical bound can be checked exhaustively.
"""

from causaldet.classical import DeterministicStrategy, audit_bound, strategy_to_distribution
from causaldet.distcore import ace
from causaldet.inequalities import InequalitySpec, eval_cace_rhs

# %%
# The identity strategy, where A repeats x and B repeats a, saturates the
# classical bound: the observational side equals its causal effect.
identity = DeterministicStrategy((0, 1), (0, 1))
d = strategy_to_distribution(identity, 1.0)
print(identity, "rhs", eval_cace_rhs(d), "ace", ace(d))

# %%
# Sweep every strategy over a grid of efficiencies, plus seeded random
# mixtures.
grid = [round(0.05 * i, 2) for i in range(21)]
for name, m in [("cace", 2), ("i222", 2), ("im22", 3)]:
    report = audit_bound(InequalitySpec.parse(name, m), grid, mixture_samples=2000, seed=0)
    print(report.summary())
    print()

# %%
# The quantum bound J222 is divided by eta, and it is only meaningful for
# models that click with probability eta**2 at every setting. A strategy
# that stays silent at one setting while the efficiency is 1 slips through.
spec = InequalitySpec.parse("j222")
print(audit_bound(spec, grid[1:]).summary())
print()
print(audit_bound(spec, grid[1:], 2000, detector_constraint=True).summary())
