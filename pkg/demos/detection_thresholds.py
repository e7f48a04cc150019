"""
Detection-efficiency thresholds
===============================

How efficient do detectors have to be before a correlation can certify
causal influence? Each witness below is scaled by the detection model and
the efficiency where its violation crosses zero is located numerically.
"""

import numpy as np

from causaldet.inequalities import InequalitySpec
from causaldet.thresholds import closed_form_table, sweep, threshold_bisect, witness_curve

# %%
# The catalogue holds exact expressions; bisection on the witness curves
# should land on the same numbers.
for rec in closed_form_table([3, 4]):
    root = threshold_bisect(witness_curve(rec.spec, rec.family))
    print(f"{rec.label:10s} {rec.family:13s} {rec.closed_form:24s} {100 * rec.value:6.2f}%  bisected {root:.9f}")

# %%
# A closer look at the quantum causal bound against the canonical
# nonsignaling box. Below about 94.28% the violation is gone.
spec = InequalitySpec.parse("qace")
for eta, v in sweep(spec, "nonsignaling", 0.90, 1.0, 11):
    bar = "#" * int(max(v, 0) * 60)
    print(f"eta={eta:.2f}  violation={v:+.4f} {bar}")

# %%
# More settings for A make the nonsignaling violation smaller and the
# efficiency requirement stricter.
ms = np.arange(2, 9)
for rec in closed_form_table(ms)[6:]:
    print(f"M={rec.m_settings}: max violation {rec.max_violation:.4f}, threshold {rec.value:.4f}")
