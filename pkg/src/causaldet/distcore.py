"""Probability tables for the instrumental causal scenario and its Bell mapping.

Index conventions used throughout the package:

* causal observational table ``obs[a, b, x]`` holds p(a, b | x)
* interventional table ``do[a, b]`` holds p(b | do(a))
* Bell table ``table[a, b, x, y]`` holds p_Bell(a, b | x, y)

Only click outcomes are stored. The no-click outcome is the residual mass
``1 - sum(click entries)`` of each setting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

import numpy as np

TOL = 1e-9

# Sources whose responses may be the no-click outcome; their interventional
# rows are allowed to carry less than the full detection mass.
_LOSSY_SOURCES = ("strategy", "mixture")


def _frozen(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DetectionEfficiency:
    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"detection efficiency must lie in [0, 1], got {self.eta}")

    def __float__(self):
        return float(self.eta)


@dataclass(frozen=True, eq=False)
class CausalDistribution:
    """Observational table p(a,b|x) plus interventional table p(b|do(a)).

    :param obs: array of shape (2, 2, M), indexed ``[a, b, x]``
    :param do: array of shape (2, 2), indexed ``[a, b]``
    :param eta: detection efficiency the tables are stated at
    :param source: provenance tag, e.g. ``"explicit"``, ``"bell"``,
        ``"quantum"``, ``"strategy"``, ``"efficiency"``
    """

    obs: np.ndarray
    do: np.ndarray
    eta: float = 1.0
    source: str = "explicit"

    def __post_init__(self):
        obs = np.array(self.obs, dtype=float)
        if obs.ndim != 3 or obs.shape[:2] != (2, 2) or obs.shape[2] < 2:
            raise ValueError(f"obs must have shape (2, 2, M) with M >= 2, got {obs.shape}")
        object.__setattr__(self, "obs", _frozen(obs))
        object.__setattr__(self, "do", _frozen(self.do, (2, 2)))
        object.__setattr__(self, "eta", float(DetectionEfficiency(float(self.eta))))

    @property
    def m_settings(self) -> int:
        return self.obs.shape[2]

    def click_mass(self) -> np.ndarray:
        """Total click probability for each value of x."""
        return self.obs.sum(axis=(0, 1))

    def relabeled(self, flip_a: bool = False, flip_b: bool = False) -> "CausalDistribution":
        """Return the table with outcomes a -> 1-a and/or b -> 1-b."""
        sa = slice(None, None, -1) if flip_a else slice(None)
        sb = slice(None, None, -1) if flip_b else slice(None)
        return CausalDistribution(self.obs[sa, sb, :], self.do[sa, sb], self.eta, self.source)

    def __repr__(self):
        return f"CausalDistribution(M={self.m_settings}, eta={self.eta:g}, source={self.source!r})"


@dataclass(frozen=True, eq=False)
class BellDistribution:
    """Click entries p_Bell(a,b|x,y) of the mapped Bell scenario, shape (2, 2, M, 2)."""

    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        if table.ndim != 4 or table.shape[:2] != (2, 2) or table.shape[3] != 2 or table.shape[2] < 2:
            raise ValueError(f"Bell table must have shape (2, 2, M, 2) with M >= 2, got {table.shape}")
        object.__setattr__(self, "table", _frozen(table))

    @property
    def m_settings(self) -> int:
        return self.table.shape[2]

    def click_mass(self) -> np.ndarray:
        """Click mass per setting pair, shape (M, 2)."""
        return self.table.sum(axis=(0, 1))

    def no_click(self) -> np.ndarray:
        """Implicit mass of the no-click outcome per setting pair."""
        return 1.0 - self.click_mass()

    def __repr__(self):
        return f"BellDistribution(M={self.m_settings})"


def validate(dist: CausalDistribution, detector_constraint: bool = False,
             tol: float = TOL) -> List[str]:
    """Check the invariants of a causal distribution.

    Returns one human-readable finding per failed invariant; an empty list
    means the distribution is valid. With ``detector_constraint`` the
    untrusted-detector condition sum_{a,b} p(a,b|x) = eta**2 is also checked.
    """
    findings = []
    if (dist.obs < -tol).any() or (dist.do < -tol).any():
        worst = min(dist.obs.min(), dist.do.min())
        findings.append(f"negativity: smallest entry is {worst:.6g}")

    mass = dist.click_mass()
    over = [x for x in range(dist.m_settings) if mass[x] > 1 + tol]
    if over:
        findings.append("observational mass exceeds 1 at x=" + ",".join(map(str, over)))
    if detector_constraint:
        off = [x for x in range(dist.m_settings) if abs(mass[x] - dist.eta ** 2) > tol]
        if off:
            findings.append(
                f"detector constraint: click mass differs from eta^2={dist.eta ** 2:.6g} at x="
                + ",".join(map(str, off)))

    rows = dist.do.sum(axis=1)
    over = [a for a in range(2) if rows[a] > 1 + tol]
    if over:
        findings.append("interventional mass exceeds 1 at a=" + ",".join(map(str, over)))
    if dist.source not in _LOSSY_SOURCES and (dist.eta == 1.0 or dist.source == "efficiency"):
        off = [a for a in range(2) if abs(rows[a] - dist.eta) > tol]
        if off:
            findings.append(
                f"interventional rows do not sum to eta={dist.eta:g} at a=" + ",".join(map(str, off)))
    return findings


def causal_to_bell(dist: CausalDistribution,
                   completion: Union[BellDistribution, np.ndarray],
                   tol: float = TOL) -> BellDistribution:
    """Embed a causal table into a Bell table on the diagonal y = a.

    Entries with y != a are taken from ``completion``; its diagonal entries are
    ignored. Raises ``ValueError`` if any setting pair ends up with click mass
    above 1.
    """
    comp = completion.table if isinstance(completion, BellDistribution) else np.asarray(completion, float)
    m = dist.m_settings
    if comp.shape != (2, 2, m, 2):
        raise ValueError(f"completion must have shape {(2, 2, m, 2)}, got {comp.shape}")
    table = comp.copy()
    for a in range(2):
        table[a, :, :, a] = dist.obs[a]
    mass = table.sum(axis=(0, 1))
    bad = np.argwhere(mass > 1 + tol)
    if len(bad):
        x, y = bad[0]
        raise ValueError(f"merged Bell table is unnormalized at (x={x}, y={y}): mass {mass[x, y]:.6g}")
    return BellDistribution(table)


def is_nonsignaling(bell: BellDistribution, tol: float = TOL) -> bool:
    """True iff neither party's marginal depends on the other party's setting."""
    t = bell.table
    bob = t.sum(axis=0)  # [b, x, y]
    alice = t.sum(axis=1)  # [a, x, y]
    bob_ok = np.all(np.abs(bob - bob[:, :1, :]) <= tol)
    alice_ok = np.all(np.abs(alice - alice[:, :, :1]) <= tol)
    return bool(bob_ok and alice_ok)


def do_from_bell(bell: BellDistribution, tol: float = TOL) -> np.ndarray:
    """Interventional table p(b|do(a)) = sum_{a'} p_Bell(a', b | x, a).

    Evaluated at x = 0; raises ``ValueError`` if any other x gives a
    different value (the table signals from x to B).
    """
    bob = bell.table.sum(axis=0)  # [b, x, y]
    spread = np.abs(bob - bob[:, :1, :]).max()
    if spread > tol:
        raise ValueError(f"B's marginal depends on x (spread {spread:.3g}); table is signaling")
    return bob[:, 0, :].T.copy()  # [a=y, b]


def causal_from_bell(bell: BellDistribution, eta: float = 1.0, tol: float = TOL) -> CausalDistribution:
    """Causal distribution induced by a nonsignaling Bell table (diagonal y = a)."""
    obs = np.stack([bell.table[a, :, :, a] for a in range(2)])
    return CausalDistribution(obs, do_from_bell(bell, tol), eta, source="bell")


def apply_efficiency(dist: CausalDistribution, eta: Union[float, DetectionEfficiency]) -> CausalDistribution:
    """Scale a perfect-detection distribution to efficiency ``eta``.

    Joint probabilities pick up a factor eta**2 (both detectors must click),
    interventional probabilities a factor eta.
    """
    eta = float(DetectionEfficiency(float(eta)))
    if dist.eta != 1.0:
        raise ValueError(f"apply_efficiency expects a table stated at eta=1, got eta={dist.eta}")
    return CausalDistribution(dist.obs * eta ** 2, dist.do * eta, eta, source="efficiency")


def ace_of_table(do: np.ndarray) -> np.ndarray:
    """ACE of interventional tables with trailing shape (2, 2); broadcasts over leading axes."""
    do = np.asarray(do, dtype=float)
    return (do.max(axis=-2) - do.min(axis=-2)).max(axis=-1)


def ace(dist: CausalDistribution) -> float:
    """Average causal effect: max over b, a, a' of p(b|do(a)) - p(b|do(a'))."""
    return float(ace_of_table(dist.do))


def uniform_distribution(m: int = 2) -> CausalDistribution:
    return CausalDistribution(np.full((2, 2, m), 0.25), np.full((2, 2), 0.5))
