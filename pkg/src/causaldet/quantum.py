"""Two-qubit correlations of the form cos(alpha)|00> + sin(alpha)|11>.

A measures M^x with Bloch vector (sin theta_x, 0, cos theta_x); B, told the
value of a, measures N^a with Bloch vector (sin phi_a, 0, cos phi_a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .distcore import BellDistribution, CausalDistribution, ace_of_table, apply_efficiency
from .inequalities import InequalitySpec, rhs_array

IDENTITY = np.eye(2)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def _wrap(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    w = math.remainder(angle, 2 * math.pi)
    return math.pi if w == -math.pi else w


@dataclass(frozen=True)
class QubitCorrelationParams:
    alpha: float
    theta: Tuple[float, ...]
    phi: Tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        object.__setattr__(self, "phi", tuple(float(p) for p in self.phi))
        if len(self.phi) != 2 or len(self.theta) < 2:
            raise ValueError("need two phi angles and at least two theta angles")
        if not all(math.isfinite(v) for v in self.as_vector()):
            raise ValueError("angles must be finite")

    @property
    def m_settings(self) -> int:
        return len(self.theta)

    def normalized(self) -> "QubitCorrelationParams":
        return QubitCorrelationParams(_wrap(self.alpha), tuple(map(_wrap, self.theta)),
                                      tuple(map(_wrap, self.phi)))

    def as_vector(self) -> np.ndarray:
        return np.array([self.alpha, *self.theta, *self.phi])

    @classmethod
    def from_vector(cls, v: Sequence[float], m: int = 2) -> "QubitCorrelationParams":
        v = list(v)
        return cls(v[0], tuple(v[1:1 + m]), tuple(v[1 + m:3 + m]))

    def to_record(self) -> dict:
        """Angle record in radians rounded to 12 significant digits."""
        r = lambda v: float(f"{v:.12g}")  # noqa: E731
        return {"kind": "qubit_params", "alpha": r(self.alpha),
                "theta": [r(t) for t in self.theta], "phi": [r(p) for p in self.phi]}

    @classmethod
    def from_record(cls, rec: dict) -> "QubitCorrelationParams":
        return cls(rec["alpha"], tuple(rec["theta"]), tuple(rec["phi"]))


# Known optimum (rounded angles) for the classical bound with perfect detection.
REFERENCE_OPTIMUM = QubitCorrelationParams(0.7165, (0.2447, -math.pi / 2), (0.6750, -0.6750))


@dataclass(frozen=True, eq=False)
class MeasurementOperators:
    """``alice[x, a]`` and ``bob[y, b]`` are 2x2 effects; B's setting y is A's outcome."""

    alice: np.ndarray
    bob: np.ndarray

    def check(self, tol: float = 1e-12) -> list:
        problems = []
        for name, ops in (("alice", self.alice), ("bob", self.bob)):
            for s in range(ops.shape[0]):
                if np.abs(ops[s].sum(axis=0) - IDENTITY).max() > tol:
                    problems.append(f"{name} setting {s}: effects do not sum to identity")
                for o in range(2):
                    if np.abs(ops[s, o] - ops[s, o].conj().T).max() > tol:
                        problems.append(f"{name} setting {s} outcome {o}: not Hermitian")
                    elif np.linalg.eigvalsh(ops[s, o]).min() < -tol:
                        problems.append(f"{name} setting {s} outcome {o}: not positive semidefinite")
        return problems


def projector(angle: float) -> np.ndarray:
    """(1 + sin(angle) sigma_x + cos(angle) sigma_z) / 2."""
    return (IDENTITY + math.sin(angle) * SIGMA_X + math.cos(angle) * SIGMA_Z) / 2


def build_measurements(params: QubitCorrelationParams) -> MeasurementOperators:
    alice = np.array([[projector(t), IDENTITY - projector(t)] for t in params.theta])
    bob = np.array([[projector(p), IDENTITY - projector(p)] for p in params.phi])
    return MeasurementOperators(alice, bob)


def state_vector(alpha: float) -> np.ndarray:
    return np.array([math.cos(alpha), 0.0, 0.0, math.sin(alpha)])


def bell_completion(params: QubitCorrelationParams) -> BellDistribution:
    """Full Bell table p(a,b|x,y) = <psi| M^x_a (x) N^y_b |psi>."""
    ops = build_measurements(params)
    psi = state_vector(params.alpha).reshape(2, 2)
    # <psi| A (x) B |psi> = sum psi[i,j] A[i,k] B[j,l] psi[k,l]
    table = np.einsum("ij,xaik,ybjl,kl->abxy", psi, ops.alice, ops.bob, psi)
    return BellDistribution(table)


def correlation_from_params(params: QubitCorrelationParams) -> CausalDistribution:
    """Causal distribution at perfect detection, computed from the trace formulas."""
    ops = build_measurements(params)
    psi = state_vector(params.alpha).reshape(2, 2)
    obs = np.einsum("ij,xaik,abjl,kl->abx", psi, ops.alice, ops.bob, psi)
    do = np.einsum("ij,abjl,il->ab", psi, ops.bob, psi)
    return CausalDistribution(obs, do, 1.0, source="quantum")


_SA = np.array([1.0, -1.0]).reshape(2, 1, 1)
_SB = _SA.reshape(1, 2, 1)
_SIGN = np.array([1.0, -1.0])


def _tables_closed_form(v: np.ndarray, m: int):
    """Same tables as ``correlation_from_params`` from Bloch-vector algebra.

    For this state <s_z (x) 1> = <1 (x) s_z> = cos 2alpha, <s_z (x) s_z> = 1,
    <s_x (x) s_x> = sin 2alpha, and every other one- or two-body term vanishes.
    """
    c, s = np.cos(v), np.sin(v)
    c2 = c[0] * c[0] - s[0] * s[0]
    s2 = 2 * s[0] * c[0]
    ct, st = c[1:1 + m], s[1:1 + m]
    cp, sp = c[1 + m:3 + m], s[1 + m:3 + m]
    corr = np.outer(cp, ct) + s2 * np.outer(sp, st)  # [a, x]
    bob_z = c2 * cp  # [a]
    obs = 0.25 * (1 + c2 * _SA * ct + _SB * bob_z[:, None, None] + _SA * _SB * corr[:, None, :])
    do = 0.5 * (1 + np.outer(bob_z, _SIGN))
    return obs, do


def tight_quantum_distribution() -> CausalDistribution:
    """Quantum table at which the quantum causal bound holds with equality.

    Only the observational part is fixed by the construction; the
    interventional table is set uniform so that ACE = 0.
    """
    obs = np.zeros((2, 2, 2))
    obs[1, 1, :] = 0.5
    obs[0, 0, 0] = math.sqrt(2) - 1
    obs[0, 0, 1] = 0.0
    obs[0, 1, :] = 0.5 - obs[0, 0, :]
    return CausalDistribution(obs, np.full((2, 2), 0.5), 1.0, source="quantum")


# -- optimization -------------------------------------------------------------------

class OptimizationResult(NamedTuple):
    params: QubitCorrelationParams
    violation: float


def pattern_search(f: Callable[[np.ndarray], float], x0: np.ndarray, step: float = 0.3,
                   shrink: float = 0.5, min_step: float = 1e-6,
                   max_evals: int = 4_000) -> Tuple[np.ndarray, float]:
    """Maximize ``f`` with Hooke-Jeeves pattern search.

    Exploratory moves try +-step along each axis in turn; after a successful
    exploration the search jumps along the direction just travelled. The step
    shrinks when exploration around the base point fails.
    """
    evals = 0

    def fe(y):
        nonlocal evals
        evals += 1
        return f(y)

    def explore(base, fbase):
        y, fy = base.copy(), fbase
        for i in range(len(y)):
            for d in (step, -step):
                y[i] += d
                ft = fe(y)
                if ft > fy:
                    fy = ft
                    break
                y[i] -= d
        return y, fy

    x = np.array(x0, dtype=float)
    fx = fe(x)
    while step >= min_step and evals < max_evals:
        y, fy = explore(x, fx)
        if fy <= fx:
            step *= shrink
            continue
        # pattern moves while they keep paying off
        while evals < max_evals:
            x_old, x, fx = x, y, fy
            y, fy = explore(x + (x - x_old), fe(x + (x - x_old)))
            if fy <= fx:
                break
    return x, fx


def _objective(spec: InequalitySpec, eta: float):
    m = spec.m_settings

    def f(v):
        obs, do = _tables_closed_form(v, m)
        val = rhs_array(obs * eta ** 2, spec, eta) - ace_of_table(do * eta)
        return -math.inf if np.isnan(val) else float(val)

    return f


def optimize_violation(spec: InequalitySpec, eta: float = 1.0, restarts: int = 32,
                       seed: int = 0, starts: Optional[Sequence[QubitCorrelationParams]] = None
                       ) -> OptimizationResult:
    """Largest violation of ``spec`` found within the qubit family.

    Multi-start pattern search. The first start is the reference optimum
    (padded with theta = 0 for extra settings), the rest are uniform random
    angles drawn from per-restart generators spawned from ``seed``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    m = spec.m_settings
    f = _objective(spec, eta)
    seeds = np.random.SeedSequence(seed).spawn(restarts)

    if starts is None:
        p = REFERENCE_OPTIMUM
        starts = [QubitCorrelationParams(p.alpha, p.theta + (0.0,) * (m - 2), p.phi)]
    initial = [s.as_vector() for s in starts]
    for ss in seeds[len(initial):]:
        initial.append(np.random.default_rng(ss).uniform(-math.pi, math.pi, m + 3))

    best_v, best_f = None, -math.inf
    for v0 in initial[:restarts]:
        v, fv = pattern_search(f, v0)
        if fv > best_f:
            best_v, best_f = v, fv
    params = QubitCorrelationParams.from_vector(best_v, m).normalized()
    dist = apply_efficiency(correlation_from_params(params), eta)
    val = rhs_array(dist.obs, spec, eta) - ace_of_table(dist.do)
    return OptimizationResult(params, float(val))
