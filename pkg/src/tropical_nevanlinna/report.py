"""Verification reports shared by all verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

DEFAULT_REL_TOL = 1e-8


def inequality_tol(lhs, rhs, rel: float = DEFAULT_REL_TOL):
    """Tolerance ``rel * max(1, |lhs|, |rhs|)`` used for inequality verdicts."""
    return rel * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


@dataclass
class VerificationReport:
    """LHS, RHS and slack (= rhs - lhs) of one inequality at sampled radii.

    ``tol`` holds the per-radius tolerance; the verdict is ``slack >= -tol``
    everywhere. Identities are reported with ``two_sided=True`` and pass when
    ``|slack| <= tol``. ``components`` carries sub-reports for composite checks
    and ``terms`` an optional per-radius breakdown of the right-hand side.
    """

    theorem_id: str
    radii: list[float]
    lhs: list[float]
    rhs: list[float]
    tol: list[float]
    two_sided: bool = False
    notes: str = ""
    instance: Any = None
    components: dict[str, "VerificationReport"] = field(default_factory=dict)
    terms: dict[str, list[float]] = field(default_factory=dict)

    @property
    def slack(self) -> list[float]:
        return [r - l for l, r in zip(self.lhs, self.rhs)]

    @property
    def own_pass(self) -> bool:
        s = np.asarray(self.slack, dtype=float)
        t = np.asarray(self.tol, dtype=float)
        if s.size == 0:
            return True
        if self.two_sided:
            return bool(np.all(np.abs(s) <= t))
        return bool(np.all(s >= -t))

    @property
    def passed(self) -> bool:
        return self.own_pass and all(c.passed for c in self.components.values())

    @property
    def min_slack(self) -> float:
        values = list(self.slack) + [c.min_slack for c in self.components.values()]
        return min(values) if values else 0.0

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "instance": self.instance,
            "radii": [float(r) for r in self.radii],
            "lhs": [float(v) for v in self.lhs],
            "rhs": [float(v) for v in self.rhs],
            "slack": [float(v) for v in self.slack],
            "pass": self.passed,
        }
        if self.notes:
            out["notes"] = self.notes
        if self.terms:
            out["terms"] = {k: [float(v) for v in vs] for k, vs in self.terms.items()}
        if self.components:
            out["components"] = {k: c.to_json() for k, c in self.components.items()}
        return out


def inequality_report(
    theorem_id: str,
    radii: Sequence[float],
    lhs: Sequence[float],
    rhs: Sequence[float],
    rel_tol: float = DEFAULT_REL_TOL,
    **kwargs,
) -> VerificationReport:
    """Report for ``lhs <= rhs`` with the default relative tolerance."""
    lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    tol = inequality_tol(lhs, rhs, rel_tol)
    return VerificationReport(
        theorem_id,
        [float(r) for r in np.atleast_1d(radii)],
        lhs.tolist(),
        rhs.tolist(),
        tol.tolist(),
        **kwargs,
    )


def merge_reports(theorem_id: str, reports: dict[str, VerificationReport], **kwargs) -> VerificationReport:
    """A composite report whose verdict is the conjunction of its parts."""
    return VerificationReport(theorem_id, [], [], [], [], components=dict(reports), **kwargs)
