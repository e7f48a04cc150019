"""Nonsignaling correlations: the canonical witness family and LP maxima.

The LP variables are the perfect-detection Bell table p(a,b|x,y), flattened
row-major over (a, b, x, y), followed by ``t+`` and ``t-`` with the
violation t = t+ - t-. Detection efficiency enters only through the
coefficients: eta**2 on observational terms, eta on interventional terms.
"""

from __future__ import annotations

import itertools
from typing import List, Tuple

import numpy as np

from .distcore import BellDistribution
from .inequalities import InequalitySpec, linear_form
from .lp import OPTIMAL, LinearProgram, dump_tableau, solve_lp  # noqa: F401


def canonical_ns(m: int = 2) -> BellDistribution:
    """Perfectly correlated outcomes (mass 1/2 each) at every setting pair
    except (x, y) = (1, 0), where they are perfectly anticorrelated."""
    if m < 2:
        raise ValueError("need at least two settings")
    table = np.zeros((2, 2, m, 2))
    for a, x, y in itertools.product(range(2), range(m), range(2)):
        b = 1 - a if (x, y) == (1, 0) else a
        table[a, b, x, y] = 0.5
    return BellDistribution(table)


def _var_names(m: int) -> List[str]:
    names = [f"p{a}{b}|{x}{y}" for a, b, x, y in itertools.product(range(2), range(2), range(m), range(2))]
    return names + ["t+", "t-"]


def build_ns_lp(spec: InequalitySpec, eta: float) -> LinearProgram:
    """LP whose optimum is the largest ``RHS - ACE`` over nonsignaling tables."""
    if not spec.is_linear:
        raise ValueError(f"{spec.label} is not linear; no LP formulation")
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    m = spec.m_settings
    shape = (2, 2, m, 2)
    n_p = 8 * m
    n = n_p + 2

    def unit(*idx):
        row = np.zeros(n)
        row[np.ravel_multi_index(idx, shape)] = 1.0
        return row

    A_eq, b_eq = [], []
    for x, y in itertools.product(range(m), range(2)):
        A_eq.append(sum(unit(a, b, x, y) for a in range(2) for b in range(2)))
        b_eq.append(1.0)
    # B's marginal does not depend on x
    for y, b, x in itertools.product(range(2), range(2), range(1, m)):
        A_eq.append(sum(unit(a, b, x, y) - unit(a, b, 0, y) for a in range(2)))
        b_eq.append(0.0)
    # A's marginal does not depend on y
    for x, a in itertools.product(range(m), range(2)):
        A_eq.append(sum(unit(a, b, x, 0) - unit(a, b, x, 1) for b in range(2)))
        b_eq.append(0.0)

    coef, const = linear_form(spec, eta)
    rhs_row = sum(eta ** 2 * coef[a, b, x] * unit(a, b, x, a)
                  for a, b, x in itertools.product(range(2), range(2), range(m)))

    def do_row(b, a):
        # p(b|do(a)) read at x = 0; nonsignaling makes every x agree
        return sum(unit(ap, b, 0, a) for ap in range(2))

    A_ub, b_ub = [], []
    for b, a, ap in itertools.product(range(2), repeat=3):
        row = -rhs_row + eta * (do_row(b, a) - do_row(b, ap))
        row[n_p], row[n_p + 1] = 1.0, -1.0
        A_ub.append(row)
        b_ub.append(const)

    c = np.zeros(n)
    c[n_p], c[n_p + 1] = 1.0, -1.0
    return LinearProgram(c, np.array(A_eq), np.array(b_eq), np.array(A_ub), np.array(b_ub),
                         names=_var_names(m))


def ns_max_violation(spec: InequalitySpec, eta: float = 1.0) -> Tuple[BellDistribution, float]:
    """Maximal violation of a classical bound by nonsignaling correlations.

    Returns the optimal perfect-detection Bell table (any optimal vertex)
    and the optimal violation at efficiency ``eta``.
    """
    res = solve_lp(build_ns_lp(spec, eta))
    if res.status != OPTIMAL:
        raise RuntimeError(f"nonsignaling LP for {spec.label} at eta={eta:g} is {res.status}")
    n_p = 8 * spec.m_settings
    table = np.clip(res.x[:n_p], 0.0, None).reshape(2, 2, spec.m_settings, 2)
    return BellDistribution(table), res.objective
