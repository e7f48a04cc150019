"""Right-hand sides of the causal bounds and the violation functional.

Every bound has the form ``ACE >= RHS(p)``; a positive ``RHS - ACE`` is a
violation. The private ``_*`` helpers operate on raw ``obs`` arrays with
trailing shape (2, 2, M) and broadcast over any leading batch axes, which
the classical audit relies on.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .distcore import CausalDistribution, ace_of_table


class InequalityId(enum.Enum):
    CACE_CLASSICAL = "cace"
    I222 = "i222"
    IM22 = "im22"
    QACE_QUANTUM = "qace"
    J222 = "j222"


LINEAR_IDS = (InequalityId.CACE_CLASSICAL, InequalityId.I222, InequalityId.IM22)


@dataclass(frozen=True)
class InequalitySpec:
    id: InequalityId
    m_settings: int = 2

    def __post_init__(self):
        if self.m_settings < 2:
            raise ValueError(f"m_settings must be >= 2, got {self.m_settings}")
        if self.id is not InequalityId.IM22 and self.m_settings != 2:
            raise ValueError(f"{self.id.value} is only defined for two settings of x")

    @classmethod
    def parse(cls, name: str, m: int = 2) -> "InequalitySpec":
        """Build a spec from a case-insensitive identifier such as ``"I222"``."""
        try:
            ident = InequalityId(name.strip().lower())
        except ValueError:
            choices = ", ".join(i.value for i in InequalityId)
            raise ValueError(f"unknown inequality {name!r}; expected one of {choices}") from None
        return cls(ident, m if ident is InequalityId.IM22 else 2)

    @property
    def is_linear(self) -> bool:
        return self.id in LINEAR_IDS

    @property
    def label(self) -> str:
        if self.id is InequalityId.IM22:
            return f"im22(M={self.m_settings})"
        return self.id.value


class XiUndefinedError(ValueError):
    """Both sign branches of xi have a negative radicand."""


@dataclass(frozen=True)
class XiValue:
    xi: float
    s0: float
    s1: float


def _require_two(dist: CausalDistribution, name: str):
    if dist.m_settings != 2:
        raise ValueError(f"{name} needs m_settings = 2, got {dist.m_settings}")


# -- vectorized kernels -------------------------------------------------------

def _cace_rhs(obs):
    return 2 * obs[..., 0, 0, 0] + obs[..., 1, 1, 0] + obs[..., 0, 1, 1] + obs[..., 1, 1, 1] - 2


def _i222(obs, eta):
    return 2 * obs[..., 0, 0, 0] + obs[..., 1, 1, 0] + obs[..., 0, 1, 1] + obs[..., 1, 1, 1] - 1 - eta ** 2


def _im22(obs, eta):
    m = obs.shape[-1]
    return (m / (m - 1) * obs[..., 0, 0, 0]
            + obs[..., 0, 1, 1] / (m - 1)
            + obs[..., 1, 1, :].sum(axis=-1) / (m - 1)
            - 1 - eta ** 2 / (m - 1))


def _signed_sums(obs):
    sign = np.array([1.0, -1.0])
    diff = obs[..., :, 0, :] - obs[..., :, 1, :]  # [..., a, x]
    s = (diff * sign).sum(axis=-1)
    return s[..., 0], s[..., 1]


# rounding slack on the radicand factors; e.g. 1 - s0 = -1e-16 must not drop a branch
_XI_SLACK = 1e-12


def _xi(obs):
    """xi and the two signed sums; xi is NaN where both branches are excluded."""
    s0, s1 = _signed_sums(obs)
    plus = (1 + s0) * (1 + s1)
    minus = (1 - s0) * (1 - s1)
    # a branch with a negative factor is excluded
    plus_ok = (1 + s0 >= -_XI_SLACK) & (1 + s1 >= -_XI_SLACK)
    minus_ok = (1 - s0 >= -_XI_SLACK) & (1 - s1 >= -_XI_SLACK)
    cand_p = np.where(plus_ok, np.sqrt(np.clip(plus, 0.0, None)), np.inf)
    cand_m = np.where(minus_ok, np.sqrt(np.clip(minus, 0.0, None)), np.inf)
    xi = np.minimum(cand_p, cand_m)
    xi = np.where(np.isinf(xi), np.nan, xi)
    return xi, s0, s1


def _qace_rhs(obs):
    xi = _xi(obs)[0]
    return obs[..., 0, 0, :].sum(axis=-1) + obs[..., 1, 1, :].sum(axis=-1) - xi - 1


def _j222(obs, eta):
    xi = _xi(obs)[0]
    return (obs[..., 0, 0, 0] + obs[..., 1, 1, 0] - obs[..., 0, 1, 1] - obs[..., 1, 0, 1] - xi) / eta


def rhs_array(obs, spec: InequalitySpec, eta: float) -> np.ndarray:
    """RHS of ``spec`` for one or many observational tables (NaN where xi is undefined)."""
    obs = np.asarray(obs, dtype=float)
    if obs.shape[-1] != spec.m_settings:
        raise ValueError(f"{spec.label} expects M={spec.m_settings}, table has M={obs.shape[-1]}")
    ident = spec.id
    if ident is InequalityId.CACE_CLASSICAL:
        return _cace_rhs(obs)
    if ident is InequalityId.I222:
        return _i222(obs, eta)
    if ident is InequalityId.IM22:
        return _im22(obs, eta)
    if ident is InequalityId.QACE_QUANTUM:
        return _qace_rhs(obs)
    if eta <= 0:
        raise ValueError("j222 is undefined at eta = 0")
    return _j222(obs, eta)


def linear_form(spec: InequalitySpec, eta: float) -> Tuple[np.ndarray, float]:
    """Coefficients ``c[a, b, x]`` and constant ``k`` with RHS = sum(c * obs) + k.

    Only defined for the linear (classical) bounds.
    """
    m = spec.m_settings
    coef = np.zeros((2, 2, m))
    ident = spec.id
    if ident in (InequalityId.CACE_CLASSICAL, InequalityId.I222):
        coef[0, 0, 0] = 2
        coef[1, 1, 0] = coef[0, 1, 1] = coef[1, 1, 1] = 1
        const = -2.0 if ident is InequalityId.CACE_CLASSICAL else -1.0 - eta ** 2
    elif ident is InequalityId.IM22:
        coef[0, 0, 0] = m / (m - 1)
        coef[0, 1, 1] += 1 / (m - 1)
        coef[1, 1, :] += 1 / (m - 1)
        const = -1.0 - eta ** 2 / (m - 1)
    else:
        raise ValueError(f"{spec.label} is not linear in the probabilities")
    return coef, const


# -- public evaluators ----------------------------------------------------------

def eval_cace_rhs(dist: CausalDistribution) -> float:
    _require_two(dist, "eval_cace_rhs")
    return float(_cace_rhs(dist.obs))


def eval_i222(dist: CausalDistribution, eta: float) -> float:
    _require_two(dist, "eval_i222")
    return float(_i222(dist.obs, eta))


def eval_im22(dist: CausalDistribution, eta: float) -> float:
    return float(_im22(dist.obs, eta))


def eval_xi(dist: CausalDistribution) -> XiValue:
    _require_two(dist, "eval_xi")
    xi, s0, s1 = _xi(dist.obs)
    if np.isnan(xi):
        raise XiUndefinedError(f"xi undefined: both sign branches negative (s0={s0:.6g}, s1={s1:.6g})")
    return XiValue(float(xi), float(s0), float(s1))


def eval_qace_rhs(dist: CausalDistribution) -> float:
    xi = eval_xi(dist).xi
    obs = dist.obs
    return float(obs[0, 0, :].sum() + obs[1, 1, :].sum() - xi - 1)


def eval_j222(dist: CausalDistribution, eta: float) -> float:
    if eta <= 0:
        raise ValueError("j222 is undefined at eta = 0")
    xi = eval_xi(dist).xi
    obs = dist.obs
    return float((obs[0, 0, 0] + obs[1, 1, 0] - obs[0, 1, 1] - obs[1, 0, 1] - xi) / eta)


def evaluate_rhs(dist: CausalDistribution, spec: InequalitySpec, eta: float) -> float:
    """Dispatch to the evaluator for ``spec``."""
    ident = spec.id
    if ident is InequalityId.CACE_CLASSICAL:
        return eval_cace_rhs(dist)
    if ident is InequalityId.I222:
        return eval_i222(dist, eta)
    if ident is InequalityId.IM22:
        if dist.m_settings != spec.m_settings:
            raise ValueError(f"{spec.label} expects M={spec.m_settings}, got M={dist.m_settings}")
        return eval_im22(dist, eta)
    if ident is InequalityId.QACE_QUANTUM:
        return eval_qace_rhs(dist)
    return eval_j222(dist, eta)


def violation(dist: CausalDistribution, spec: InequalitySpec, eta: float) -> float:
    """``RHS - ACE``; positive means the bound is violated.

    ``eta`` is the constraint level the bound is evaluated at and need not
    match ``dist.eta``; a warning is emitted when they differ.
    """
    if abs(dist.eta - eta) > 1e-12:
        warnings.warn(f"evaluating at eta={eta:g} a distribution stated at eta={dist.eta:g}",
                      stacklevel=2)
    return evaluate_rhs(dist, spec, eta) - float(ace_of_table(dist.do))


# -- the xi maximization lemma ------------------------------------------------------

def xi_lemma_closed_form(xp: float, yp: float) -> float:
    """Closed-form maximum of ``-a*xp - b*yp - |a + b|`` with b = (1+a)/(1+2a)."""
    plus = (1 + xp) * (1 + yp)
    minus = (1 - xp) * (1 - yp)
    return 0.5 * (xp - yp) - min(np.sqrt(max(plus, 0.0)), np.sqrt(max(minus, 0.0)))


def xi_lemma_grid(xp: float, yp: float, span: float = 50.0, step: float = 1e-3) -> float:
    """Brute-force maximum of the same objective over a uniform grid of ``a``.

    Grid points with ``|1 + 2a| < 1e-6`` (the pole of b) are skipped.
    """
    alpha = np.arange(-span, span + step / 2, step)
    denom = 1 + 2 * alpha
    alpha = alpha[np.abs(denom) >= 1e-6]
    beta = (1 + alpha) / (1 + 2 * alpha)
    return float(np.max(-alpha * xp - beta * yp - np.abs(alpha + beta)))
