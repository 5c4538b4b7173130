from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class CheckReport:
    """Both sides of one inequality and the verdict.

    ``slack`` is oriented so that a valid inequality has ``slack >= 0``
    and is divided by ``max(1, |lhs|, |rhs|)``, which makes ``tol`` an
    absolute tolerance for quantities of order one and a relative one
    beyond.  ``passed`` is exactly ``slack >= -tol``.
    """

    check_id: str
    params: dict
    lhs: float
    rhs: float
    slack: float
    tol: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": _plain(self.params),
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "slack": _num(self.slack),
            "tol": _num(self.tol),
            "pass": self.passed,
            "details": _plain(self.details),
        }


def _num(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x + 0.0  # no negative zero in output


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def report(check_id, params, lhs, rhs, tol, relation="le", details=None) -> CheckReport:
    """Build a report for ``lhs <= rhs`` (``relation="le"``) or ``lhs >= rhs``."""
    lhs, rhs = float(lhs), float(rhs)
    raw = rhs - lhs if relation == "le" else lhs - rhs
    scale = max(1.0, abs(lhs), abs(rhs))
    slack = raw / scale if math.isfinite(scale) else raw
    return CheckReport(check_id, dict(params), lhs, rhs, slack, float(tol), bool(slack >= -tol), details or {})


def equality_report(check_id, params, lhs, rhs, tol, details=None) -> CheckReport:
    """Relative equality ``|lhs - rhs| / |rhs| <= tol``."""
    lhs, rhs = float(lhs), float(rhs)
    rel = abs(lhs - rhs) / abs(rhs) if rhs else abs(lhs)
    return CheckReport(check_id, dict(params), lhs, rhs, -rel, float(tol), bool(rel <= tol), details or {})


@dataclass(frozen=True, eq=False)
class DiscreteRV:
    """Finitely supported real random variable."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).ravel()
        q = np.array(self.probs, dtype=np.float64).ravel()
        if v.shape != q.shape or v.size == 0:
            raise ValueError("values and probs must be nonempty and equally long")
        if np.any(q <= 0):
            raise ValueError("probabilities must be positive")
        if abs(q.sum() - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {q.sum()!r}, not 1")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "probs", q)

    @classmethod
    def from_atoms(cls, atoms):
        atoms = list(atoms)
        return cls([a for a, _ in atoms], [b for _, b in atoms])

    @property
    def atoms(self):
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def expect(self, g=None) -> float:
        v = self.values if g is None else g(self.values)
        return float(np.dot(self.probs, v))

    def pos_moment(self, s) -> float:
        """``E X_+^s``."""
        return self.expect(lambda v: np.maximum(v, 0.0) ** s)

    def neg_moment(self, s) -> float:
        """``E X_-^s``."""
        return self.expect(lambda v: np.maximum(-v, 0.0) ** s)

    def abs_moment(self, p) -> float:
        return self.expect(lambda v: np.abs(v) ** p)

    def scaled(self, c) -> "DiscreteRV":
        return DiscreteRV(self.values * c, self.probs)
