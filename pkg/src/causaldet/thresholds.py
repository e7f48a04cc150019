"""Detection-efficiency thresholds: closed forms, witness curves and sweeps.

A threshold is the efficiency at which a witness correlation, scaled by the
detection model, stops violating a bound. Witnesses are the canonical
nonsignaling table and the reference quantum optimum; they are not
re-optimized per efficiency.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from .distcore import CausalDistribution, apply_efficiency, causal_from_bell
from .inequalities import InequalityId, InequalitySpec, violation
from .nonsignaling import canonical_ns
from .quantum import REFERENCE_OPTIMUM, correlation_from_params

QUANTUM = "quantum"
NONSIGNALING = "nonsignaling"
FAMILIES = (QUANTUM, NONSIGNALING)

SQRT2 = math.sqrt(2)


@dataclass(frozen=True)
class ThresholdRecord:
    inequality: InequalityId
    family: str
    closed_form: str
    value: float
    max_violation: float
    m_settings: int = 2

    @property
    def spec(self) -> InequalitySpec:
        return InequalitySpec(self.inequality, self.m_settings)

    @property
    def label(self) -> str:
        return self.spec.label


def closed_form_table(ms: Iterable[int] = ()) -> List[ThresholdRecord]:
    """The six reference thresholds, followed by I_M22 records for each M in ``ms``."""
    I = InequalityId
    records = [
        ThresholdRecord(I.CACE_CLASSICAL, QUANTUM, "sqrt(2/(5-2*sqrt(2)))",
                        math.sqrt(2 / (5 - 2 * SQRT2)), 3 - 2 * SQRT2),
        ThresholdRecord(I.CACE_CLASSICAL, NONSIGNALING, "sqrt(4/5)", math.sqrt(4 / 5), 0.5),
        ThresholdRecord(I.I222, NONSIGNALING, "sqrt(2/3)", math.sqrt(2 / 3), 0.5),
        ThresholdRecord(I.I222, QUANTUM, "sqrt(1/(4-2*sqrt(2)))",
                        math.sqrt(1 / (4 - 2 * SQRT2)), 3 - 2 * SQRT2),
        ThresholdRecord(I.QACE_QUANTUM, NONSIGNALING, "2*sqrt(2)/3", 2 * SQRT2 / 3, 0.5),
        ThresholdRecord(I.J222, NONSIGNALING, "sqrt(2*sqrt(2)-2)", math.sqrt(2 * SQRT2 - 2), 0.5),
    ]
    for m in ms:
        if m < 2:
            raise ValueError("M must be >= 2")
        records.append(ThresholdRecord(I.IM22, NONSIGNALING, f"sqrt({2 * m - 2}/{2 * m - 1})",
                                       math.sqrt((2 * m - 2) / (2 * m - 1)), 1 / (2 * m - 2), m))
    return records


def witness_distribution(spec: InequalitySpec, family: str) -> CausalDistribution:
    """Perfect-detection witness correlation for ``family``."""
    if family == NONSIGNALING:
        return causal_from_bell(canonical_ns(spec.m_settings))
    if family == QUANTUM:
        if spec.m_settings != 2:
            raise ValueError("no reference quantum witness for more than two settings")
        return correlation_from_params(REFERENCE_OPTIMUM)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def witness_curve(spec: InequalitySpec, family: str) -> Callable[[float], float]:
    """eta -> violation of ``spec`` by the scaled witness of ``family``."""
    base = witness_distribution(spec, family)

    def curve(eta: float) -> float:
        return violation(apply_efficiency(base, eta), spec, eta)

    return curve


def threshold_bisect(curve: Callable[[float], float], tol: float = 1e-8,
                     scan_step: float = 1e-3) -> float:
    """Efficiency where ``curve`` changes sign on (0, 1].

    The curve is first scanned on a grid of spacing ``scan_step`` starting at
    ``scan_step``; exactly one sign change must be found, and the bracketing
    interval is then bisected down to width ``tol``.
    """
    grid = np.linspace(scan_step, 1.0, int(round(1.0 / scan_step)))
    values = np.array([curve(e) for e in grid])
    if np.isnan(values).any():
        raise ValueError("curve is undefined somewhere on the scan grid")
    # an exact zero belongs to the violating side, so it is one crossing, not two
    signs = np.where(values >= 0, 1.0, -1.0)
    if values[-1] <= 0:
        raise ValueError("curve does not violate at eta = 1")
    changes = np.flatnonzero(signs[:-1] != signs[1:])
    if len(changes) == 0:
        raise ValueError("no sign change on (0, 1]")
    if len(changes) > 1:
        raise ValueError(f"{len(changes)} sign changes on (0, 1]; expected one crossing")
    i = changes[0]
    lo, hi = grid[i], grid[i + 1]
    if values[i] == 0.0:
        return float(lo)
    if values[i + 1] == 0.0:
        return float(hi)
    return float(bisect(curve, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200))


def sweep(spec: InequalitySpec, family: str, eta_min: float, eta_max: float,
          steps: int) -> List[Tuple[float, float]]:
    """Violation of the scaled witness at ``steps`` evenly spaced efficiencies."""
    if not 0 < eta_min < eta_max <= 1:
        raise ValueError("need 0 < eta_min < eta_max <= 1")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    curve = witness_curve(spec, family)
    rows = [(float(e), curve(float(e))) for e in np.linspace(eta_min, eta_max, steps)]
    if any(b[1] < a[1] - 1e-12 for a, b in zip(rows, rows[1:])):
        warnings.warn(f"sweep of {spec.label}/{family} is not monotone in eta")
    return rows


def sweep_csv(rows: Sequence[Tuple[float, float]], spec: InequalitySpec, family: str) -> str:
    """CSV text with header ``eta,violation,inequality,family``, 12 significant digits, LF endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eta", "violation", "inequality", "family"])
    for eta, v in rows:
        w.writerow([f"{eta:.12g}", f"{v:.12g}", spec.label, family])
    return buf.getvalue()
