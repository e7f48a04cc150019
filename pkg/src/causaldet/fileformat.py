"""JSON text format for distributions and the records that travel with them.

Distribution documents::

    {"kind": "causal", "m_settings": 2, "eta": 1.0,
     "obs": [...],   # 4*M values, row-major over (a, b, x)
     "do":  [...],   # 4 values, row-major over (a, b): p(b|do(a))
     "source": "explicit"}            # optional

    {"kind": "bell", "m_settings": 2, "eta": 1.0,
     "table": [...]}  # 8*M values, row-major over (a, b, x, y)

Only click entries are listed; the no-click mass of a setting is the
remainder up to 1. Audit reports (``"kind": "audit_report"``) and qubit
angle records (``"kind": "qubit_params"``) use the same envelope.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .distcore import TOL, BellDistribution, CausalDistribution, validate

Distribution = Union[CausalDistribution, BellDistribution]


class DistributionFormatError(ValueError):
    pass


def _digits(values) -> list:
    return [float(f"{v:.17g}") for v in np.asarray(values, dtype=float).ravel()]


def to_record(dist: Distribution) -> dict:
    if isinstance(dist, CausalDistribution):
        return {"kind": "causal", "m_settings": dist.m_settings, "eta": dist.eta,
                "obs": _digits(dist.obs), "do": _digits(dist.do), "source": dist.source}
    return {"kind": "bell", "m_settings": dist.m_settings, "eta": 1.0, "table": _digits(dist.table)}


def dumps(dist: Distribution) -> str:
    return json.dumps(to_record(dist), indent=2) + "\n"


def _array(rec, key, size):
    try:
        arr = np.asarray(rec[key], dtype=float)
    except KeyError:
        raise DistributionFormatError(f"missing field {key!r}") from None
    except (TypeError, ValueError):
        raise DistributionFormatError(f"field {key!r} must be a list of numbers") from None
    if arr.size != size:
        raise DistributionFormatError(f"field {key!r} has {arr.size} values, expected {size}")
    return arr


def from_record(rec: dict, tol: float = TOL) -> Distribution:
    """Parse a record, rejecting negative or unnormalized tables."""
    if not isinstance(rec, dict):
        raise DistributionFormatError("document must be a JSON object")
    kind = rec.get("kind")
    try:
        m = int(rec["m_settings"])
        eta = float(rec.get("eta", 1.0))
    except (KeyError, TypeError, ValueError):
        raise DistributionFormatError("fields 'm_settings' (int) and 'eta' (number) are required") from None
    if m < 2:
        raise DistributionFormatError("m_settings must be >= 2")
    if not 0 <= eta <= 1:
        raise DistributionFormatError(f"eta={eta} outside [0, 1]")

    if kind == "causal":
        obs = _array(rec, "obs", 4 * m).reshape(2, 2, m)
        do = _array(rec, "do", 4).reshape(2, 2)
        dist = CausalDistribution(obs, do, eta, str(rec.get("source", "explicit")))
        problems = validate(dist, detector_constraint=bool(rec.get("detector_constraint", False)), tol=tol)
        if eta == 1.0 and dist.source not in ("strategy", "mixture"):
            mass = dist.click_mass()
            problems += [f"observational table unnormalized at setting x={x}: mass {mass[x]:.6g}"
                         for x in range(m) if abs(mass[x] - 1) > tol]
        if problems:
            raise DistributionFormatError("; ".join(problems))
        return dist
    if kind == "bell":
        table = _array(rec, "table", 8 * m).reshape(2, 2, m, 2)
        if (table < -tol).any():
            raise DistributionFormatError(f"negative Bell entry {table.min():.6g}")
        mass = table.sum(axis=(0, 1))
        for x in range(m):
            for y in range(2):
                if mass[x, y] > 1 + tol or (eta == 1.0 and abs(mass[x, y] - 1) > tol):
                    raise DistributionFormatError(
                        f"Bell table unnormalized at setting (x={x}, y={y}): click mass {mass[x, y]:.6g}")
        return BellDistribution(table)
    raise DistributionFormatError(f"unknown kind {kind!r}; expected 'causal' or 'bell'")


def loads(text: str, tol: float = TOL) -> Distribution:
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DistributionFormatError(f"not valid JSON: {exc}") from None
    return from_record(rec, tol)


def load(path: Union[str, Path], tol: float = TOL) -> Distribution:
    return loads(Path(path).read_text(), tol)


def dump(dist: Distribution, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(dist))
