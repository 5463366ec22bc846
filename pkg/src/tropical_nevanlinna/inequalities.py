"""Finite-radius verifiers for the shift, first-main and second-main inequalities.

Every verifier returns a :class:`~tropical_nevanlinna.report.VerificationReport`
with the raw LHS, RHS and slack at each radius. Hypotheses that can be
checked are checked up front and raise :class:`PreconditionViolated`.

Notation: ``f_c`` is ``x -> f(x + c)``, ``-g`` is the tropical reciprocal,
``max(f, a)`` is ``f (+) a`` and a sum of functions is their tropical product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidParameters, PreconditionViolated
from .nevanlinna import (
    _radii,
    characteristic_value,
    counting,
    pole_floor,
    proximity,
)
from .pl_core import DEFAULT_EPS, TropicalPL, tropical_max, tropical_plus
from .report import DEFAULT_REL_TOL, VerificationReport, inequality_report, merge_reports


def _positive_max(targets: Sequence[float]) -> float:
    return max(max(a, 0.0) for a in targets)


def negative_target_term(targets: Sequence[float]) -> float:
    """``(p-1) * max_k max(-a_k, 0)``.

    Bounding ``max_k (b_k + h_k)`` with ``b_k = -(p-1) a_k`` needs
    ``max_k b_k = -(p-1) min_k a_k``, which the positive-part term
    ``(p-1) max_k a_k+`` does not dominate once some target is negative.
    Adding this term restores a valid bound.
    """
    return (len(targets) - 1) * max(max(-a, 0.0) for a in targets)


def shift_quotient(f: TropicalPL, c: float) -> TropicalPL:
    """``x -> f(x + c) - f(x)``."""
    return f.shift(c) - f


def verify_shift_quotient_bound(
    f: TropicalPL,
    c: float,
    alpha: float,
    r,
    rel_tol: float = DEFAULT_REL_TOL,
    corrected: bool = False,
) -> VerificationReport:
    """``m(r, f_c - f) <= 12|c| / ((alpha-1)(r+|c|)) * (T(alpha(r+|c|), f) + f(0)/2)``.

    A negative constant ``f`` already breaks this bound. With
    ``corrected=True`` the last term is ``-f(0)/2``, which is what the
    estimate ``N(R, -f) <= T(R, -f) = T(R, f) - f(0)`` actually gives.
    """
    if not alpha > 1:
        raise InvalidParameters("alpha must exceed 1")
    rs, _ = _radii(r)
    lhs = proximity(shift_quotient(f, c), rs)
    big = alpha * (rs + abs(c))
    sign = -1.0 if corrected else 1.0
    rhs = 12.0 * abs(c) / (alpha - 1.0) / (rs + abs(c)) * (characteristic_value(f, big) + sign * f(0.0) / 2.0)
    name = "shift-quotient-corrected" if corrected else "shift-quotient"
    return inequality_report(name, rs, lhs, rhs, rel_tol, instance={"c": c, "alpha": alpha})


def verify_exp_shift_identity(e: TropicalPL, alpha: float, r, rel_tol: float = 1e-9) -> VerificationReport:
    """``m(r, e(x+1) - e(x)) = (alpha - 1) T(r, e)`` for the tropical exponential ``e``."""
    rs, _ = _radii(r)
    lhs = proximity(shift_quotient(e, 1.0), rs)
    rhs = (alpha - 1.0) * characteristic_value(e, rs)
    tol = rel_tol * np.maximum(1.0, np.abs(rhs))
    return VerificationReport("exp-shift-identity", rs.tolist(), lhs.tolist(), rhs.tolist(), tol.tolist(), two_sided=True)


# --------------------------------------------------------------------------
# second main theorem


@dataclass
class SmtInstance:
    """``f``, shift ``c > 0``, distinct targets ``a_1..a_q`` and window radius ``R``.

    The targets must lie below every pole value of ``f`` on the padded window
    ``[-R-|c|, R+|c|]``.
    """

    f: TropicalPL
    c: float
    targets: list[float]
    R: float
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return len(self.targets)

    def check(self, eps: float = DEFAULT_EPS) -> None:
        if not self.c > 0:
            raise PreconditionViolated(f"shift c must be positive, got {self.c}")
        if self.q == 0:
            raise PreconditionViolated("need at least one target")
        if len(set(self.targets)) != self.q:
            raise PreconditionViolated(f"targets must be distinct, got {self.targets}")
        floor = pole_floor(self.f, self.R + abs(self.c), eps)
        if max(self.targets) >= floor:
            raise PreconditionViolated(f"max target {max(self.targets)} is not below the pole floor {floor}")


def n1_counting(f: TropicalPL, c: float, r):
    """``N(r, -f_c) + 2 N(r, f) - N(r, f_c)``; may be negative."""
    fc = f.shift(c)
    return counting(-fc, r) + 2.0 * counting(f, r) - counting(fc, r)


def second_main_terms(inst: SmtInstance, r) -> dict[str, np.ndarray]:
    """Every term of the second main inequality at the radii ``r``."""
    rs, _ = _radii(r)
    f, c, a = inst.f, inst.c, inst.targets
    fc = f.shift(c)
    M = _positive_max(a)
    f0 = f(0.0)
    terms = {
        "qT": inst.q * characteristic_value(f, rs),
        "sum_N_targets": sum(counting(-tropical_max(f, aj), rs) for aj in a),
        "T_shift": characteristic_value(fc, rs),
        "N_shift_recip": counting(-fc, rs),
        "m_quotient": proximity(shift_quotient(f, c), rs),
        "f_c": np.full(rs.shape, f(c)),
        "target_max": np.full(rs.shape, (2 * inst.q - 1) * M),
        "target_sum": np.full(rs.shape, sum(max(f0, aj) for aj in a)),
    }
    terms["rhs"] = (
        terms["sum_N_targets"]
        + terms["T_shift"]
        - terms["N_shift_recip"]
        + terms["m_quotient"]
        - terms["f_c"]
        + terms["target_max"]
        + terms["target_sum"]
    )
    return terms


def verify_second_main(inst: SmtInstance, r, rel_tol: float = DEFAULT_REL_TOL, corrected: bool = False) -> VerificationReport:
    """``q T(r, f) <= sum_j N(r, -max(f, a_j)) + T(r, f_c) - N(r, -f_c)
    + m(r, f_c - f) - f(c) + (2q-1) max_j a_j+ + sum_j max(f(0), a_j)``.

    As stated this fails whenever negative targets dominate, e.g. ``f = -1``,
    ``a = (-3, -5)``. ``corrected=True`` adds :func:`negative_target_term`.
    """
    inst.check()
    rs, _ = _radii(r)
    if np.any(rs > inst.R):
        raise PreconditionViolated(f"radii exceed the instance window R={inst.R}")
    t = second_main_terms(inst, rs)
    rhs = t["rhs"] + (negative_target_term(inst.targets) if corrected else 0.0)
    return inequality_report(
        "second-main-corrected" if corrected else "second-main", rs, t["qT"], rhs, rel_tol,
        instance={"label": inst.label, "c": inst.c, "targets": list(inst.targets)},
        terms={k: np.broadcast_to(v, rs.shape).tolist() for k, v in t.items()},
    )


def verify_second_main_rearranged(inst: SmtInstance, r, rel_tol: float = DEFAULT_REL_TOL, corrected: bool = False) -> VerificationReport:
    """Sum-of-proximities form: ``sum_k m(r, -max(f, a_k)) <= m(r, -f_c)
    + m(r, max_k(f_c - max(f, a_k))) + (2q-1) max_k a_k+ + sum_k a_k+``."""
    inst.check()
    rs, _ = _radii(r)
    f, c, a = inst.f, inst.c, inst.targets
    fc = f.shift(c)
    lifted = [tropical_max(f, ak) for ak in a]
    lhs = sum(proximity(-g, rs) for g in lifted)
    quotient = tropical_max(*[fc - g for g in lifted])
    rhs = (
        proximity(-fc, rs)
        + proximity(quotient, rs)
        + (2 * inst.q - 1) * _positive_max(a)
        + sum(max(ak, 0.0) for ak in a)
    )
    if corrected:
        rhs = rhs + negative_target_term(a)
    name = "second-main-rearranged-corrected" if corrected else "second-main-rearranged"
    return inequality_report(name, rs, lhs, rhs, rel_tol, instance={"label": inst.label})


def second_main_trend(inst: SmtInstance, radii) -> dict[str, np.ndarray]:
    """Raw ``q T - sum_j N(r, -max(f, a_j)) + N(r, -f)`` for plotting; no verdict."""
    rs, _ = _radii(radii)
    f = inst.f
    qT = inst.q * characteristic_value(f, rs)
    sumN = sum(counting(-tropical_max(f, aj), rs) for aj in inst.targets)
    return {"r": rs, "qT": qT, "sum_N": sumN, "N_recip": counting(-f, rs), "difference": qT - sumN + counting(-f, rs), "T": qT / inst.q}


# --------------------------------------------------------------------------
# scalar lemmas


def prod_sum_margin(targets, x):
    """``sum_k max(x, a_k) - min_k(max(x, a_k) + (p-1) a_k)``; vectorized over leading axes."""
    a = np.asarray(targets, dtype=float)
    x = np.asarray(x, dtype=float)[..., None]
    p = a.shape[-1]
    lifted = np.maximum(x, a)
    return lifted.sum(axis=-1) - np.min(lifted + (p - 1) * a, axis=-1)


def check_prod_sum_inequality(targets: Sequence[float], x: float, rel_tol: float = 1e-12) -> bool:
    """``sum_k max(x, a_k) >= min_k(max(x, a_k) + (p-1) a_k)``."""
    a = np.asarray(targets, dtype=float)
    if a.size == 0:
        raise InvalidParameters("need at least one target")
    scale = max(1.0, abs(x), float(np.max(np.abs(a)))) * a.size
    return bool(prod_sum_margin(a, x) >= -rel_tol * scale)


def max_identity_gap(f_value, targets):
    """``max(sum_k max(f, a_k), p max a) - p max(f, max a)``; vectorized."""
    a = np.asarray(targets, dtype=float)
    f = np.asarray(f_value, dtype=float)[..., None]
    p = a.shape[-1]
    top = a.max(axis=-1)
    left = np.maximum(np.maximum(f, a).sum(axis=-1), p * top)
    return left - p * np.maximum(f[..., 0], top)


def check_max_identity(f_value: float, targets: Sequence[float], rel_tol: float = 1e-12) -> bool:
    """``max(sum_k max(f, a_k), p max a) == p max(f, max a)``."""
    a = np.asarray(targets, dtype=float)
    if a.size == 0:
        raise InvalidParameters("need at least one target")
    scale = max(1.0, abs(f_value), float(np.max(np.abs(a)))) * a.size
    return bool(abs(max_identity_gap(f_value, a)) <= rel_tol * scale)


# --------------------------------------------------------------------------
# characteristic of a product of lifts


def lifted_product(f: TropicalPL, targets: Sequence[float]) -> TropicalPL:
    """``sum_k max(f, a_k)``."""
    return tropical_plus(*[tropical_max(f, ak) for ak in targets])


def verify_characteristic_sandwich(
    f: TropicalPL,
    targets: Sequence[float],
    r,
    rel_tol: float = DEFAULT_REL_TOL,
    require_lower: bool = False,
) -> VerificationReport:
    """``p T - p M <= T(r, sum_k max(f, a_k)) <= p T + sum_k a_k+`` with ``M = max_k a_k+``.

    The lower bound needs every target below the pole values of ``f`` on
    ``[-r, r]``; without it the lower bound is skipped, or an error raised if
    ``require_lower``. With the hypothesis and all targets ``<= 0`` the two
    bounds meet and equality is checked.
    """
    rs, _ = _radii(r)
    p = len(targets)
    if p == 0:
        raise InvalidParameters("need at least one target")
    T_f = characteristic_value(f, rs)
    T_g = characteristic_value(lifted_product(f, targets), rs)
    parts = {
        "upper": inequality_report("sandwich-upper", rs, T_g, p * T_f + sum(max(a, 0.0) for a in targets), rel_tol),
    }
    notes = ""
    below = max(targets) < pole_floor(f, float(rs.max()))
    if below:
        parts["lower"] = inequality_report("sandwich-lower", rs, p * T_f - p * _positive_max(targets), T_g, rel_tol)
        if max(targets) <= 0:
            tol = rel_tol * np.maximum(1.0, np.abs(p * T_f))
            parts["equality"] = VerificationReport(
                "sandwich-equality", rs.tolist(), T_g.tolist(), (p * T_f).tolist(), tol.tolist(), two_sided=True
            )
    elif require_lower:
        raise PreconditionViolated("targets are not below the pole floor; the lower bound does not apply")
    else:
        notes = "lower bound skipped: targets not below the pole floor"
    return merge_reports("characteristic-sandwich", parts, notes=notes, instance={"targets": list(targets)})


def verify_lemma_chain(
    f: TropicalPL,
    c: float,
    targets: Sequence[float],
    r,
    rel_tol: float = DEFAULT_REL_TOL,
    corrected: bool = False,
) -> VerificationReport:
    """The three inequalities feeding the second main theorem, each on its own.

    * ``m(r, -g) <= T(r, f_c) - N(r, -f_c) + m(r, f_c - g) - f(c)``
    * ``m(r, f_c - g) <= m(r, max_k(f_c - max(f, a_k))) + (p-1) M``
    * ``N(r, -g) <= sum_k N(r, -max(f, a_k))``

    where ``g = sum_k max(f, a_k)`` and ``M = max_k a_k+``. The middle one
    fails for negative targets; ``corrected=True`` adds
    :func:`negative_target_term` to its right-hand side.
    """
    rs, _ = _radii(r)
    p = len(targets)
    if p == 0:
        raise InvalidParameters("need at least one target")
    fc = f.shift(c)
    lifted = [tropical_max(f, ak) for ak in targets]
    g = tropical_plus(*lifted)
    m_quot = proximity(fc - g, rs)
    reciprocal = inequality_report(
        "chain-reciprocal-proximity",
        rs,
        proximity(-g, rs),
        characteristic_value(fc, rs) - counting(-fc, rs) + m_quot - f(c),
        rel_tol,
    )
    quotient = inequality_report(
        "chain-quotient-proximity",
        rs,
        m_quot,
        proximity(tropical_max(*[fc - h for h in lifted]), rs)
        + (p - 1) * _positive_max(targets)
        + (negative_target_term(targets) if corrected else 0.0),
        rel_tol,
    )
    count = inequality_report(
        "chain-counting",
        rs,
        counting(-g, rs),
        sum(counting(-h, rs) for h in lifted),
        rel_tol,
    )
    return merge_reports(
        "lemma-chain",
        {"reciprocal": reciprocal, "quotient": quotient, "counting": count},
        instance={"c": c, "targets": list(targets)},
    )


def target_max(targets: Sequence[float]) -> float:
    """``max_k max(a_k, 0)``."""
    return _positive_max(targets)


__all__ = [
    "SmtInstance",
    "check_max_identity",
    "check_prod_sum_inequality",
    "lifted_product",
    "max_identity_gap",
    "negative_target_term",
    "n1_counting",
    "prod_sum_margin",
    "second_main_terms",
    "second_main_trend",
    "shift_quotient",
    "target_max",
    "verify_characteristic_sandwich",
    "verify_exp_shift_identity",
    "verify_lemma_chain",
    "verify_second_main",
    "verify_second_main_rearranged",
    "verify_shift_quotient_bound",
]
