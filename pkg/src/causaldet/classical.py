"""Deterministic classical strategies with a no-click outcome, and bound audits.

A deterministic strategy is a pair of response functions: A answers x with
0, 1 or no-click, and B answers a with 0, 1 or no-click. Every classical
correlation is a mixture of these, so auditing a bound means sweeping all
of them and, empirically, random mixtures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .distcore import CausalDistribution, ace_of_table
from .inequalities import InequalityId, InequalitySpec, rhs_array

NO_CLICK = 2  # sorts after the two click outcomes
_SYMBOL = {0: "0", 1: "1", NO_CLICK: "Φ"}


@dataclass(frozen=True, order=True)
class DeterministicStrategy:
    fa: Tuple[int, ...]
    fb: Tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "fa", tuple(int(v) for v in self.fa))
        object.__setattr__(self, "fb", tuple(int(v) for v in self.fb))
        if len(self.fb) != 2:
            raise ValueError("fb must assign a response to a = 0 and a = 1")
        if len(self.fa) < 2:
            raise ValueError("fa must cover at least two settings")
        if any(v not in _SYMBOL for v in self.fa + self.fb):
            raise ValueError("responses must be 0, 1 or NO_CLICK")

    @property
    def m_settings(self) -> int:
        return len(self.fa)

    @property
    def fully_clicking(self) -> bool:
        return NO_CLICK not in self.fa and NO_CLICK not in self.fb

    def __str__(self):
        fa = "".join(_SYMBOL[v] for v in self.fa)
        fb = "".join(_SYMBOL[v] for v in self.fb)
        return f"F_A={fa} F_B={fb}"

    @classmethod
    def parse(cls, text: str) -> "DeterministicStrategy":
        """Inverse of ``str()``: ``"F_A=01 F_B=0Φ"``."""
        rev = {v: k for k, v in _SYMBOL.items()}
        rev["P"] = NO_CLICK
        parts = dict(item.split("=") for item in text.split())
        return cls(tuple(rev[c] for c in parts["F_A"]), tuple(rev[c] for c in parts["F_B"]))


def enumerate_strategies(m: int) -> List[DeterministicStrategy]:
    """All 3**m * 9 strategies, lexicographic on (fa, fb) with no-click last."""
    if m < 2:
        raise ValueError("need at least two settings")
    return [DeterministicStrategy(fa, fb)
            for fa in itertools.product(range(3), repeat=m)
            for fb in itertools.product(range(3), repeat=2)]


def _tables(s: DeterministicStrategy):
    """Perfect-efficiency click tables of one strategy."""
    obs = np.zeros((2, 2, s.m_settings))
    do = np.zeros((2, 2))
    for a in range(2):
        if s.fb[a] != NO_CLICK:
            do[a, s.fb[a]] = 1.0
    for x, a in enumerate(s.fa):
        if a != NO_CLICK and s.fb[a] != NO_CLICK:
            obs[a, s.fb[a], x] = 1.0
    return obs, do


def strategy_to_distribution(s: DeterministicStrategy, eta: float) -> CausalDistribution:
    """Click tables of ``s`` under detection efficiency ``eta``.

    Joint entries carry eta**2 and interventional entries eta; a no-click
    response from either party contributes nothing to the click tables.
    """
    obs, do = _tables(s)
    return CausalDistribution(obs * eta ** 2, do * eta, eta, source="strategy")


@dataclass(frozen=True, eq=False)
class StrategyMixture:
    strategies: Tuple[DeterministicStrategy, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (len(self.strategies),):
            raise ValueError("one weight per strategy required")
        if (w < 0).any() or abs(w.sum() - 1) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def distribution(self, eta: float) -> CausalDistribution:
        obs = sum(w * _tables(s)[0] for s, w in zip(self.strategies, self.weights))
        do = sum(w * _tables(s)[1] for s, w in zip(self.strategies, self.weights))
        return CausalDistribution(obs * eta ** 2, do * eta, eta, source="mixture")


@dataclass
class AuditReport:
    spec: InequalitySpec
    eta_grid: Tuple[float, ...]
    n_strategies: int
    mixture_samples: int
    seed: int
    max_violation: float
    witness: DeterministicStrategy
    witness_eta: float
    ties: List[DeterministicStrategy] = field(default_factory=list)
    max_mixture_violation: float = float("-inf")
    mixture_click_mass: Tuple[float, float] = (float("nan"), float("nan"))
    counterexample: Optional[str] = None
    tol: float = 1e-9
    detector_constraint: bool = False

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAILED"

    def summary(self) -> str:
        lines = [
            f"{self.status}: {self.spec.label}, {self.n_strategies} strategies x {len(self.eta_grid)} eta values,"
            f" {self.mixture_samples} mixtures (seed {self.seed})"
            + (", detector constraint enforced" if self.detector_constraint else ""),
            f"max violation {self.max_violation:.12g} at {self.witness}, eta={self.witness_eta:g}",
        ]
        if len(self.ties) > 1:
            lines.append("also attained by: " + "; ".join(str(s) for s in self.ties if s != self.witness))
        if self.mixture_samples:
            lo, hi = self.mixture_click_mass
            lines.append(f"max mixture violation {self.max_mixture_violation:.12g}"
                         f" (mixture click mass / eta^2 in [{lo:.6g}, {hi:.6g}])")
        if self.counterexample:
            lines.append("counterexample: " + self.counterexample)
        return "\n".join(lines)

    def to_record(self) -> dict:
        return {
            "kind": "audit_report",
            "inequality": self.spec.id.value,
            "m_settings": self.spec.m_settings,
            "status": self.status,
            "eta_grid": list(self.eta_grid),
            "n_strategies": self.n_strategies,
            "mixture_samples": self.mixture_samples,
            "seed": self.seed,
            "tol": self.tol,
            "detector_constraint": self.detector_constraint,
            "max_violation": self.max_violation,
            "witness": str(self.witness),
            "witness_eta": self.witness_eta,
            "ties": [str(s) for s in self.ties],
            "max_mixture_violation": self.max_mixture_violation,
            "mixture_click_mass": list(self.mixture_click_mass),
            "counterexample": self.counterexample,
        }


def audit_bound(spec: InequalitySpec, eta_grid: Sequence[float], mixture_samples: int = 0,
                seed: int = 0, tol: float = 1e-9, detector_constraint: bool = False) -> AuditReport:
    """Check that no classical strategy, nor sampled mixture, violates ``spec``.

    Every deterministic strategy is evaluated at every efficiency in
    ``eta_grid``. Mixtures are drawn uniformly from the simplex (Dirichlet
    with unit concentration) using ``seed``; this part is a heuristic check,
    not a proof. Ties for the largest violation are broken in favour of the
    lexicographically first strategy, and all tied strategies are listed.

    With ``detector_constraint`` only models whose click mass is exactly
    eta**2 at every x are audited: fully clicking strategies, and mixtures
    eta**2 * (clicking mixture) + (1 - eta**2) * (mixture in which A never
    clicks).
    """
    grid = tuple(float(e) for e in eta_grid)
    if not grid or any(not 0.0 <= e <= 1.0 for e in grid):
        raise ValueError("eta_grid must be a non-empty subset of [0, 1]")
    if mixture_samples < 0:
        raise ValueError("mixture_samples must be >= 0")
    if spec.id is InequalityId.J222 and min(grid) <= 0:
        raise ValueError("j222 is undefined at eta = 0")

    strategies = enumerate_strategies(spec.m_settings)
    silent = [s for s in strategies if all(v == NO_CLICK for v in s.fa)]
    if detector_constraint:
        strategies = [s for s in strategies if s.fully_clicking]
    tabs = [_tables(s) for s in strategies]
    obs1 = np.stack([t[0] for t in tabs])  # [s, a, b, x]
    do1 = np.stack([t[1] for t in tabs])  # [s, a, b]

    # violation[e, s]
    viol = np.stack([rhs_array(obs1 * e ** 2, spec, e) - ace_of_table(do1 * e) for e in grid])
    viol = np.where(np.isnan(viol), -np.inf, viol)
    best = viol.max()
    # first strategy index attaining the max, then the first eta for it
    s_idx = int(np.argmax(viol.max(axis=0) == best))
    e_idx = int(np.argmax(viol[:, s_idx] == best))
    ties = [strategies[i] for i in np.flatnonzero((viol >= best - 1e-12).any(axis=0))]

    report = AuditReport(spec, grid, len(strategies), mixture_samples, seed, float(best),
                         strategies[s_idx], grid[e_idx], ties, tol=tol,
                         detector_constraint=detector_constraint)
    if best > tol:
        report.counterexample = (f"{strategies[s_idx]} at eta={grid[e_idx]:g} violates by {best:.12g}")
        return report

    if mixture_samples:
        rng = np.random.default_rng(seed)
        weights = rng.dirichlet(np.ones(len(strategies)), size=mixture_samples)
        mix_obs = np.einsum("ns,sabx->nabx", weights, obs1)
        mix_do = np.einsum("ns,sab->nab", weights, do1)
        if detector_constraint:
            quiet = np.stack([_tables(s)[1] for s in silent])
            quiet_do = np.einsum("ns,sab->nab", rng.dirichlet(np.ones(len(silent)), size=mixture_samples), quiet)
        mass = mix_obs.sum(axis=(1, 2))  # [n, x], in units of eta^2
        report.mixture_click_mass = (float(mass.min()), float(mass.max()))
        worst = -np.inf
        for e in grid:
            do_e = mix_do
            if detector_constraint:
                # A-silent components add interventional mass only
                do_e = e ** 2 * mix_do + (1 - e ** 2) * quiet_do
            mv = rhs_array(mix_obs * e ** 2, spec, e) - ace_of_table(do_e * e)
            mv = np.where(np.isnan(mv), -np.inf, mv)
            i = int(np.argmax(mv))
            worst = max(worst, float(mv[i]))
            if mv[i] > tol and report.counterexample is None:
                report.counterexample = f"mixture #{i} (seed {seed}) at eta={e:g} violates by {mv[i]:.12g}"
        report.max_mixture_violation = worst
    return report
