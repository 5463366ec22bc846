"""Tropical difference Laurent polynomials in ``f`` and its shifts.

A polynomial is a finite max of terms::

    P(x, f) = max_lam ( a_lam(x) + sum_j lam_j * f(x + c_j) )

with shifts ``c_0 = 0 <= c_1, ..., c_m`` and real multi-indices ``lam``.
Its degree is ``max_lam |lam|`` where ``|lam| = sum_j lam_j``.

The verifiers compare proximity functions of ``P`` against bounds made of
the coefficient extrema ``Omega = max a_lam``, ``OmegaBar = max(-a_lam)``,
``Upsilon = max over top-degree terms of a_lam`` and the shift ratios
``D(x) = max_lam sum_j lam_j (f(x + c_j) - f(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidParameters, InvalidSpec, NotASolution, PreconditionViolated
from .nevanlinna import _radii, proximity
from .pl_core import DEFAULT_EPS, TropicalPL, constant, event_arrays, tropical_max, tropical_plus
from .report import DEFAULT_REL_TOL, VerificationReport, inequality_report, merge_reports

_NORM_TOL = 1e-12
GRID_PER_UNIT = 1000


def _as_coeff(a) -> TropicalPL:
    if isinstance(a, TropicalPL):
        return a
    if isinstance(a, Real):
        return constant(float(a))
    raise InvalidSpec(f"coefficient must be a number or a TropicalPL, got {type(a).__name__}")


class DifferenceLaurentPolynomial:
    """``max_lam (a_lam(x) + sum_j lam_j f(x + c_j))``.

    ``shifts`` must start with 0 and be non-negative; ``terms`` maps
    multi-indices (tuples of length ``len(shifts)``) to coefficients, given
    as numbers or :class:`TropicalPL` functions.
    """

    def __init__(self, shifts: Sequence[float], terms: Mapping[Sequence[float], object]):
        shifts = tuple(float(c) for c in shifts)
        if not shifts or shifts[0] != 0.0:
            raise InvalidSpec("shifts must start with c_0 = 0")
        if any(c < 0 for c in shifts):
            raise InvalidSpec("shifts must be non-negative")
        if len(set(shifts)) != len(shifts):
            raise InvalidSpec("shifts must be distinct")
        if not terms:
            raise InvalidSpec("a polynomial needs at least one term")
        self.shifts = shifts
        self.terms: dict[tuple[float, ...], TropicalPL] = {}
        for lam, a in terms.items():
            lam = tuple(float(v) for v in lam)
            if len(lam) != len(shifts):
                raise InvalidSpec(f"multi-index {lam} does not match {len(shifts)} shifts")
            if lam in self.terms:
                raise InvalidSpec(f"duplicate multi-index {lam}")
            self.terms[lam] = _as_coeff(a)

    @staticmethod
    def norm(lam: Sequence[float]) -> float:
        return float(sum(lam))

    @property
    def degree(self) -> float:
        return max(self.norm(lam) for lam in self.terms)

    def top_indices(self) -> list[tuple[float, ...]]:
        """``{lam : |lam| = deg P}``."""
        d = self.degree
        return [lam for lam in self.terms if abs(self.norm(lam) - d) <= _NORM_TOL * max(1.0, abs(d))]

    def __call__(self, f: TropicalPL, x):
        return eval_poly(self, f, x)

    def to_spec(self) -> dict:
        return {
            "shifts": list(self.shifts),
            "terms": [{"lambda": list(lam), "coeff": a.to_spec()} for lam, a in self.terms.items()],
        }

    @classmethod
    def from_spec(cls, spec: dict) -> "DifferenceLaurentPolynomial":
        from .specs import function_from_spec

        try:
            shifts = spec["shifts"]
            raw = spec["terms"]
        except (KeyError, TypeError) as exc:
            raise InvalidSpec(f"polynomial spec needs 'shifts' and 'terms': {exc}") from None
        terms = {}
        for t in raw:
            coeff = t.get("coeff", 0.0)
            terms[tuple(t["lambda"])] = coeff if isinstance(coeff, Real) else function_from_spec(coeff)
        return cls(shifts, terms)

    def __repr__(self) -> str:
        return f"DifferenceLaurentPolynomial(shifts={self.shifts}, indices={list(self.terms)})"


def _shifted_values(P: DifferenceLaurentPolynomial, f: TropicalPL, x: np.ndarray) -> np.ndarray:
    """Array of shape ``(len(shifts), len(x))`` holding ``f(x + c_j)``."""
    return np.stack([f(x + c) for c in P.shifts])


def term_values(P: DifferenceLaurentPolynomial, f: TropicalPL, x) -> np.ndarray:
    """``a_lam(x) + sum_j lam_j f(x + c_j)`` for every term; shape ``(terms, len(x))``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    fv = _shifted_values(P, f, x)
    return np.stack([a(x) + np.asarray(lam) @ fv for lam, a in P.terms.items()])


def eval_poly(P: DifferenceLaurentPolynomial, f: TropicalPL, x):
    """``P(x, f)``."""
    scalar = np.ndim(x) == 0
    out = term_values(P, f, x).max(axis=0)
    return float(out[0]) if scalar else out


def as_function(P: DifferenceLaurentPolynomial, f: TropicalPL) -> TropicalPL:
    """``x -> P(x, f)`` as a :class:`TropicalPL` expression."""
    terms = []
    for lam, a in P.terms.items():
        parts = [a] + [f.shift(c) * l for c, l in zip(P.shifts, lam) if l != 0]
        terms.append(tropical_plus(*parts))
    return tropical_max(*terms)


@dataclass
class PolyStats:
    degree: float
    Omega: TropicalPL
    OmegaBar: TropicalPL
    Upsilon: TropicalPL
    top_indices: list


def poly_stats(P: DifferenceLaurentPolynomial) -> PolyStats:
    """Degree and the coefficient extrema ``Omega``, ``OmegaBar``, ``Upsilon``."""
    coeffs = list(P.terms.values())
    top = P.top_indices()
    return PolyStats(
        P.degree,
        tropical_max(*coeffs),
        tropical_max(*[-a for a in coeffs]),
        tropical_max(*[P.terms[lam] for lam in top]),
        top,
    )


def poly_product(P: DifferenceLaurentPolynomial, Q: DifferenceLaurentPolynomial) -> DifferenceLaurentPolynomial:
    """``P (x) Q``: Minkowski sum of indices over the union of shifts.

    Coefficients of colliding indices are merged by max.
    """
    shifts = tuple(sorted(set(P.shifts) | set(Q.shifts)))
    pos = {c: i for i, c in enumerate(shifts)}

    def lift(poly):
        out = {}
        for lam, a in poly.terms.items():
            v = [0.0] * len(shifts)
            for c, l in zip(poly.shifts, lam):
                v[pos[c]] += l
            out[tuple(v)] = a
        return out

    merged: dict[tuple[float, ...], TropicalPL] = {}
    for lam, a in lift(P).items():
        for mu, b in lift(Q).items():
            key = tuple(x + y for x, y in zip(lam, mu))
            coeff = a + b
            merged[key] = tropical_max(merged[key], coeff) if key in merged else coeff
    return DifferenceLaurentPolynomial(shifts, merged)


def shift_ratio_max(P: DifferenceLaurentPolynomial, f: TropicalPL, x, sign: float = 1.0, indices=None):
    """``max_lam sum_j (sign * lam_j) (f(x + c_j) - f(x))`` over ``indices`` (default all)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    fv = _shifted_values(P, f, x)
    diffs = fv - fv[0]
    lams = np.array(list(P.terms) if indices is None else list(indices), dtype=float)
    return (sign * lams @ diffs).max(axis=0)


def _m_of_values(vals_pos: np.ndarray, vals_neg: np.ndarray) -> np.ndarray:
    return 0.5 * (np.maximum(vals_pos, 0.0) + np.maximum(vals_neg, 0.0))


def _m_pointwise(fn, rs: np.ndarray) -> np.ndarray:
    """Proximity ``m(r, g)`` of any pointwise function ``g`` given as a callable."""
    return _m_of_values(fn(rs), fn(-rs))


def _m_coeff_max(coeffs: Sequence[TropicalPL], rs: np.ndarray, sign: float = 1.0) -> np.ndarray:
    return _m_pointwise(lambda x: np.max([sign * a(x) for a in coeffs], axis=0), rs)


# --------------------------------------------------------------------------
# verifiers


def verify_ptof(P: DifferenceLaurentPolynomial, f: TropicalPL, lam: Sequence[float], r, rel_tol: float = DEFAULT_REL_TOL) -> VerificationReport:
    """``|lam| m(r, f) <= sum_j [lam_j+ m(r, f - f_j) + lam_j- m(r, f_j - f)] + m(r, -a_lam) + m(r, P)``."""
    lam = tuple(float(v) for v in lam)
    if lam not in P.terms:
        raise InvalidParameters(f"{lam} is not an index of the polynomial")
    norm = P.norm(lam)
    if not norm > 0:
        raise PreconditionViolated(f"|lam| = {norm} must be positive")
    rs, _ = _radii(r)
    rhs = proximity(-P.terms[lam], rs) + _m_pointwise(lambda x: eval_poly(P, f, x), rs)
    for c, l in zip(P.shifts, lam):
        if c == 0.0 or l == 0:
            continue
        fc = f.shift(c)
        rhs = rhs + max(l, 0.0) * proximity(f - fc, rs) + max(-l, 0.0) * proximity(fc - f, rs)
    return inequality_report("ptof", rs, norm * proximity(f, rs), rhs, rel_tol, instance={"lambda": list(lam)})


def negative_norm_term(P: DifferenceLaurentPolynomial, f: TropicalPL, r) -> np.ndarray:
    """``max(-min_lam |lam|, 0) * m(r, -f)``.

    Where ``f < 0``, ``|lam| f`` is bounded by ``deg(P) f`` only if no term
    has negative norm; in general the bound is ``max(-|lam|, 0) * (-f)``.
    """
    rs, _ = _radii(r)
    kappa = max(-min(P.norm(lam) for lam in P.terms), 0.0)
    return kappa * proximity(-f, rs)


def valiron_mohonko_terms(P: DifferenceLaurentPolynomial, f: TropicalPL, r) -> dict[str, np.ndarray]:
    rs, _ = _radii(r)
    coeffs = list(P.terms.values())
    m_P = _m_pointwise(lambda x: eval_poly(P, f, x), rs)
    m_deg = proximity(f, rs) * P.degree if P.degree >= 0 else proximity(-f, rs) * -P.degree
    upper = _m_coeff_max(coeffs, rs) + _m_pointwise(lambda x: shift_ratio_max(P, f, x, 1.0), rs)
    lower = _m_coeff_max(coeffs, rs, -1.0) + _m_pointwise(lambda x: shift_ratio_max(P, f, x, -1.0), rs)
    return {"m_P": m_P, "m_deg_f": m_deg, "upper": upper, "lower": lower}


def verify_valiron_mohonko(
    P: DifferenceLaurentPolynomial,
    f: TropicalPL,
    r,
    rel_tol: float = DEFAULT_REL_TOL,
    corrected: bool = False,
) -> VerificationReport:
    """``|m(r, P) - m(r, deg(P) f)| <= max(m(Omega) + m(D+), m(OmegaBar) + m(D-))``.

    The bound on ``m(P) - m(deg f)`` fails when a term has negative norm and
    ``f < 0`` at ``r`` or ``-r``; the opposite direction always holds.
    ``corrected=True`` adds :func:`negative_norm_term` to the first branch.
    """
    t = valiron_mohonko_terms(P, f, r)
    rs, _ = _radii(r)
    upper = t["upper"] + (negative_norm_term(P, f, rs) if corrected else 0.0)
    return inequality_report(
        "valiron-mohonko-corrected" if corrected else "valiron-mohonko",
        rs,
        np.abs(t["m_P"] - t["m_deg_f"]),
        np.maximum(upper, t["lower"]),
        rel_tol,
        instance={"degree": P.degree},
    )


def zero_check_grid(P: DifferenceLaurentPolynomial, f: TropicalPL, lo: float, hi: float, per_unit: int = GRID_PER_UNIT) -> np.ndarray:
    """Uniform grid of ``per_unit`` points per unit plus breakpoints of ``f`` and its shifts."""
    n = max(2, int(np.ceil((hi - lo) * per_unit)) + 1)
    pts = [np.linspace(lo, hi, n)]
    for c in P.shifts:
        xs, _, _ = event_arrays(f, lo + c, hi + c)
        pts.append(xs - c)
    for a in P.terms.values():
        xs, _, _ = event_arrays(a, lo, hi)
        pts.append(xs)
    grid = np.concatenate(pts)
    return np.unique(grid[(grid >= lo) & (grid <= hi)])


def _grid_scale(P: DifferenceLaurentPolynomial, f: TropicalPL, x: np.ndarray) -> float:
    fv = np.abs(_shifted_values(P, f, x)).max()
    lam = max(np.abs(np.asarray(l)).sum() for l in P.terms)
    coeff = max(np.abs(a(x)).max() for a in P.terms.values())
    return max(1.0, fv * lam, coeff)


def check_identically_zero(P: DifferenceLaurentPolynomial, f: TropicalPL, lo: float, hi: float, eps: float = DEFAULT_EPS) -> float:
    """Raise :class:`NotASolution` unless ``P(x, f) = 0`` on ``[lo, hi]``; returns the max residual."""
    x = zero_check_grid(P, f, lo, hi)
    res = float(np.max(np.abs(eval_poly(P, f, x))))
    if res > eps * _grid_scale(P, f, x):
        raise NotASolution(f"max |P(x, f)| = {res} on [{lo}, {hi}]")
    return res


def verify_mohonko(P: DifferenceLaurentPolynomial, f: TropicalPL, a: float, r, rel_tol: float = DEFAULT_REL_TOL) -> VerificationReport:
    """Bound on ``m(r, f)`` and ``m(r, -max(f, a))`` for a solution of ``P(x, f) = 0``.

    Both are checked against
    ``max_lam |1/|lam|| (m(Omega) + m(OmegaBar)) + sum_j max_lam |lam_j/|lam|| (m(f_j - f) + m(f - f_j))``.
    """
    norms = [P.norm(lam) for lam in P.terms]
    if any(abs(n) <= _NORM_TOL for n in norms):
        raise PreconditionViolated("every multi-index needs a nonzero norm")
    rs, _ = _radii(r)
    R = float(rs.max())
    check_identically_zero(P, f, -R, R)
    coeffs = list(P.terms.values())
    bound = max(abs(1.0 / n) for n in norms) * (_m_coeff_max(coeffs, rs) + _m_coeff_max(coeffs, rs, -1.0))
    for j, c in enumerate(P.shifts):
        if c == 0.0:
            continue
        weight = max(abs(lam[j] / P.norm(lam)) for lam in P.terms)
        if weight:
            fc = f.shift(c)
            bound = bound + weight * (proximity(fc - f, rs) + proximity(f - fc, rs))
    notes = ""
    if min(norms) < 1:
        notes = f"some |lam| < 1 (min {min(norms)}); only the general nonzero-norm clause applies"
    parts = {
        "proximity": inequality_report("mohonko-f", rs, proximity(f, rs), bound, rel_tol),
        "reciprocal": inequality_report("mohonko-reciprocal", rs, proximity(-tropical_max(f, a), rs), bound, rel_tol),
    }
    return merge_reports("mohonko", parts, notes=notes, instance={"a": float(a)})


def verify_clunie(
    H: DifferenceLaurentPolynomial,
    P: DifferenceLaurentPolynomial,
    Q: DifferenceLaurentPolynomial,
    f: TropicalPL,
    r,
    rel_tol: float = DEFAULT_REL_TOL,
    eps: float = DEFAULT_EPS,
    corrected: bool = False,
) -> VerificationReport:
    """Six-term bound on ``m(r, P)`` for a solution of ``H (x) P = Q``.

    Needs ``deg P >= 0`` and ``deg Q <= deg H``. Where ``f < 0`` the bound
    silently uses ``|lam| f <= deg(P) f``, false for terms of ``P`` with
    smaller norm; ``corrected=True`` adds :func:`negative_norm_term` of ``P``.
    """
    if P.degree < -_NORM_TOL:
        raise PreconditionViolated(f"deg P = {P.degree} must be >= 0")
    if Q.degree > H.degree + _NORM_TOL * max(1.0, abs(H.degree)):
        raise PreconditionViolated(f"deg Q = {Q.degree} exceeds deg H = {H.degree}")
    rs, _ = _radii(r)
    R = float(rs.max())
    x = zero_check_grid(Q, f, -R, R)
    gap = eval_poly(H, f, x) + eval_poly(P, f, x) - eval_poly(Q, f, x)
    scale = max(_grid_scale(H, f, x), _grid_scale(P, f, x), _grid_scale(Q, f, x))
    if np.max(np.abs(gap)) > eps * scale:
        raise NotASolution(f"H (x) P differs from Q by up to {np.max(np.abs(gap))}")
    stats_H = poly_stats(H)
    rhs = (
        _m_coeff_max(list(P.terms.values()), rs)
        + _m_coeff_max(list(Q.terms.values()), rs)
        + proximity(-stats_H.Upsilon, rs)
        + _m_pointwise(lambda x: shift_ratio_max(P, f, x, 1.0), rs)
        + _m_pointwise(lambda x: shift_ratio_max(Q, f, x, 1.0), rs)
        + _m_pointwise(lambda x: shift_ratio_max(H, f, x, -1.0, stats_H.top_indices), rs)
    )
    if corrected:
        rhs = rhs + negative_norm_term(P, f, rs)
    lhs = _m_pointwise(lambda x: eval_poly(P, f, x), rs)
    return inequality_report("clunie-corrected" if corrected else "clunie", rs, lhs, rhs, rel_tol, instance={"deg_H": H.degree, "deg_P": P.degree, "deg_Q": Q.degree})
