"""Small dense linear programs solved by a two-phase tableau simplex.

Bland's rule (lowest-index entering and leaving variable) is used in both
phases, so the solver cannot cycle and its pivot sequence, hence the
returned vertex, is fully determined by the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_TOL = 1e-11
_COST_TOL = 1e-11


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """maximize c @ x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x >= lb.

    ``lb`` defaults to zero for every variable.
    """

    c: np.ndarray
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    A_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    lb: Optional[np.ndarray] = None
    names: Optional[Sequence[str]] = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        n = c.size
        object.__setattr__(self, "c", c)
        for A, b, tag in (("A_eq", "b_eq", "equality"), ("A_ub", "b_ub", "inequality")):
            mat = getattr(self, A)
            if mat is None:
                mat, rhs = np.zeros((0, n)), np.zeros(0)
            else:
                mat = np.atleast_2d(np.asarray(mat, dtype=float))
                rhs = np.asarray(getattr(self, b), dtype=float).reshape(-1)
            if mat.shape[1] != n or mat.shape[0] != rhs.size:
                raise ValueError(f"{tag} constraints have inconsistent dimensions {mat.shape} / {rhs.shape}")
            object.__setattr__(self, A, mat)
            object.__setattr__(self, b, rhs)
        lb = np.zeros(n) if self.lb is None else np.asarray(self.lb, dtype=float)
        if lb.shape != (n,) or not np.isfinite(lb).all():
            raise ValueError("lb must give a finite lower bound for every variable")
        object.__setattr__(self, "lb", lb)
        if self.names is not None and len(self.names) != n:
            raise ValueError("one name per variable required")

    @property
    def n_vars(self) -> int:
        return self.c.size


class LPResult(NamedTuple):
    x: Optional[np.ndarray]
    objective: float
    status: str


def _simplex(T: np.ndarray, b: np.ndarray, basis: List[int], cost: np.ndarray, allowed: int) -> str:
    """Maximize ``cost @ z`` on tableau (T, b) in place; only the first
    ``allowed`` columns may enter the basis."""
    m = T.shape[0]
    while True:
        reduced = cost - cost[basis] @ T
        enter = next((j for j in range(allowed) if reduced[j] > _COST_TOL), None)
        if enter is None:
            return OPTIMAL
        col = T[:, enter]
        rows = [i for i in range(m) if col[i] > _PIVOT_TOL]
        if not rows:
            return UNBOUNDED
        ratios = [b[i] / col[i] for i in rows]
        best = min(ratios)
        # Bland: among minimum-ratio rows, the one whose basic variable has the lowest index
        leave = min((basis[i], i) for i, r in zip(rows, ratios) if r <= best + _PIVOT_TOL)[1]
        _pivot(T, b, basis, leave, enter)


def _pivot(T, b, basis, i, j):
    piv = T[i, j]
    T[i] /= piv
    b[i] /= piv
    for k in range(T.shape[0]):
        if k != i and T[k, j] != 0.0:
            f = T[k, j]
            T[k] -= f * T[i]
            b[k] -= f * b[i]
    basis[i] = j


def solve_lp(lp: LinearProgram) -> LPResult:
    n = lp.n_vars
    # shift x = z + lb so that z >= 0
    b_ub = lp.b_ub - lp.A_ub @ lp.lb
    b_eq = lp.b_eq - lp.A_eq @ lp.lb
    m_ub, m_eq = lp.A_ub.shape[0], lp.A_eq.shape[0]
    m = m_ub + m_eq

    # columns: z (n) | slack (m_ub) | artificial (m)
    ncol = n + m_ub + m
    T = np.zeros((m, ncol))
    b = np.concatenate([b_ub, b_eq])
    T[:m_ub, :n] = lp.A_ub
    T[:m_ub, n:n + m_ub] = np.eye(m_ub)
    T[m_ub:, :n] = lp.A_eq
    neg = b < 0
    T[neg] *= -1
    b[neg] *= -1
    T[:, n + m_ub:] = np.eye(m)
    basis = list(range(n + m_ub, ncol))

    cost1 = np.zeros(ncol)
    cost1[n + m_ub:] = -1.0
    _simplex(T, b, basis, cost1, ncol)
    if b[[i for i, j in enumerate(basis) if j >= n + m_ub]].sum() > 1e-9:
        return LPResult(None, float("nan"), INFEASIBLE)

    # drive remaining artificial variables out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n + m_ub:
            j = next((j for j in range(n + m_ub) if abs(T[i, j]) > _PIVOT_TOL), None)
            if j is None:
                continue
            _pivot(T, b, basis, i, j)
        keep.append(i)
    T = T[keep, :n + m_ub]
    b = b[keep]
    basis = [basis[i] for i in keep]

    cost2 = np.zeros(n + m_ub)
    cost2[:n] = lp.c
    status = _simplex(T, b, basis, cost2, n + m_ub)
    if status == UNBOUNDED:
        return LPResult(None, float("inf"), UNBOUNDED)
    z = np.zeros(n + m_ub)
    z[basis] = b
    x = z[:n] + lp.lb
    return LPResult(x, float(lp.c @ x), OPTIMAL)


def dump_tableau(lp: LinearProgram) -> str:
    """Plain-text listing of the LP.

    Columns are the structural variables in their given order; the last
    column after ``|`` is the right-hand side. Sections: ``max`` (objective
    row), ``eq`` rows, ``le`` rows, ``lb`` (lower bounds).
    """
    names = list(lp.names) if lp.names is not None else [f"x{j}" for j in range(lp.n_vars)]
    fmt = lambda v: f"{v:.12g}"  # noqa: E731
    out = ["# columns: " + " ".join(names) + " | rhs"]
    out.append("max " + " ".join(fmt(v) for v in lp.c))
    for row, rhs in zip(lp.A_eq, lp.b_eq):
        out.append("eq  " + " ".join(fmt(v) for v in row) + " | " + fmt(rhs))
    for row, rhs in zip(lp.A_ub, lp.b_ub):
        out.append("le  " + " ".join(fmt(v) for v in row) + " | " + fmt(rhs))
    out.append("lb  " + " ".join(fmt(v) for v in lp.lb))
    return "\n".join(out) + "\n"
