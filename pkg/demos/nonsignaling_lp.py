"""
Largest nonsignaling violations by linear programming
=====================================================

Correlations limited only by the no-signaling principle can go further
than quantum ones. The optimum over that polytope is a small LP.
"""

import numpy as np

from causaldet.distcore import causal_from_bell
from causaldet.inequalities import InequalitySpec, violation
from causaldet.nonsignaling import build_ns_lp, canonical_ns, dump_tableau, ns_max_violation

# %%
# Maximal violations at perfect detection.
for name, m in [("cace", 2), ("i222", 2), ("im22", 3), ("im22", 4)]:
    spec = InequalitySpec.parse(name, m)
    _, t = ns_max_violation(spec, 1.0)
    witness = violation(causal_from_bell(canonical_ns(m)), spec, 1.0)
    print(f"{spec.label:10s} LP optimum {t:.6f}  canonical box {witness:.6f}")

# %%
# The LP itself, in plain text.
print(dump_tableau(build_ns_lp(InequalitySpec.parse("cace"), 1.0)))

# %%
# With lossy detectors the optimum shrinks and changes sign near 89.44%.
for eta in np.arange(0.88, 0.911, 0.005):
    print(f"eta={eta:.3f}  max violation {ns_max_violation(InequalitySpec.parse('cace'), eta)[1]:+.5f}")
