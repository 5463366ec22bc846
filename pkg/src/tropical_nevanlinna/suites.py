"""Named verifier suites: random instance generators plus JSON-instance runners.

Every suite turns a JSON instance into a :class:`VerificationReport`. Random
instances are generated as the same JSON, so ``--random`` runs and ``--input``
files go through one code path, and every report echoes a reproducible
instance. Instance ``i`` of a seeded run uses ``default_rng([seed, i])``, so it
does not depend on how many other instances are drawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .diff_poly import (
    DifferenceLaurentPolynomial,
    poly_product,
    verify_clunie,
    verify_mohonko,
    verify_ptof,
    verify_valiron_mohonko,
)
from .errors import InvalidSpec, NotASolution, PreconditionViolated
from .inequalities import (
    SmtInstance,
    max_identity_gap,
    verify_characteristic_sandwich,
    verify_exp_shift_identity,
    verify_lemma_chain,
    verify_second_main,
    verify_second_main_rearranged,
    verify_shift_quotient_bound,
)
from .nevanlinna import verify_first_main, verify_jensen, verify_poisson_jensen
from .pl_core import DEFAULT_EPS, Exponential
from .random_instances import (
    random_annihilator,
    random_degree_zero_poly,
    random_finite,
    random_function,
    random_poly,
    random_targets,
)
from .report import DEFAULT_REL_TOL, VerificationReport, inequality_report, merge_reports
from .special_functions import casoratian_2x2
from .specs import function_from_spec

SCALAR_REL_TOL = 1e-12


@dataclass(frozen=True)
class Suite:
    theorem_id: str
    summary: str
    generate: Callable[[np.random.Generator, "np.ndarray | None"], dict]
    run: Callable[[dict, float, bool], VerificationReport]
    has_corrected: bool = False
    default_tol: float = DEFAULT_REL_TOL


def _radii_list(rng: np.random.Generator, grid, n: int, lo: float, hi: float) -> list[float]:
    if grid is not None:
        return [float(r) for r in grid]
    return np.sort(rng.uniform(lo, hi, n)).tolist()


def _f(inst: dict, key: str = "f"):
    try:
        return function_from_spec(inst[key])
    except KeyError:
        raise InvalidSpec(f"instance is missing {key!r}") from None


def _poly(inst: dict, key: str) -> DifferenceLaurentPolynomial:
    try:
        return DifferenceLaurentPolynomial.from_spec(inst[key])
    except KeyError:
        raise InvalidSpec(f"instance is missing {key!r}") from None


def _radii(inst: dict) -> np.ndarray:
    try:
        return np.asarray(inst["radii"], dtype=float)
    except KeyError:
        raise InvalidSpec("instance is missing 'radii'") from None


def _with_instance(report: VerificationReport, inst: dict) -> VerificationReport:
    report.instance = {**inst, **(report.instance or {})}
    return report


# --------------------------------------------------------------------------
# first main theorem and Jensen


def _gen_jensen(rng, grid):
    f = random_finite(rng)
    return {"f": f.to_spec(), "radii": _radii_list(rng, grid, 20, 0.05, 20.0)}


def _run_jensen(inst, tol, corrected):
    return _with_instance(verify_jensen(_f(inst), _radii(inst), tol), inst)


def _gen_poisson(rng, grid):
    f = random_finite(rng)
    r = float(grid[int(rng.integers(len(grid)))]) if grid is not None else float(rng.uniform(0.5, 20.0))
    return {"f": f.to_spec(), "points": [[r, float(rng.uniform(-0.999, 0.999) * r)]]}


def _run_poisson(inst, tol, corrected):
    f = _f(inst)
    points = inst.get("points")
    if not points:
        raise InvalidSpec("poisson-jensen instance needs 'points': [[r, x], ...]")
    parts = {}
    for i, (r, x) in enumerate(points):
        if not -r < x < r:
            raise PreconditionViolated(f"x = {x} is not inside (-{r}, {r})")
        parts[str(i)] = verify_poisson_jensen(f, float(r), float(x), tol)
    if len(parts) == 1:
        return _with_instance(parts["0"], inst)
    return _with_instance(merge_reports("poisson-jensen", parts), inst)


def _gen_first_main(rng, grid):
    return {
        "f": random_function(rng).to_spec(),
        "a": float(rng.uniform(-5, 5)),
        "radii": _radii_list(rng, grid, 10, 0.1, 20.0),
    }


def _run_first_main(inst, tol, corrected):
    return _with_instance(verify_first_main(_f(inst), float(inst["a"]), _radii(inst), tol), inst)


# --------------------------------------------------------------------------
# second main theorem and its lemmas


def _gen_smt(rng, grid):
    f = random_function(rng)
    c = float(rng.uniform(0.1, 3.0))
    R = float(rng.uniform(5.0, 30.0)) if grid is None else float(np.max(grid))
    q = int(rng.integers(1, 5))
    targets = random_targets(rng, f, q, R + c)
    radii = np.linspace(R / 10, R, 10).tolist() if grid is None else [float(r) for r in grid]
    return {"f": f.to_spec(), "c": c, "targets": targets, "R": R, "radii": radii}


def _smt(inst) -> SmtInstance:
    radii = _radii(inst)
    R = float(inst.get("R", radii.max()))
    return SmtInstance(_f(inst), float(inst["c"]), [float(a) for a in inst["targets"]], max(R, float(radii.max())))


def _run_smt(inst, tol, corrected):
    return _with_instance(verify_second_main(_smt(inst), _radii(inst), tol, corrected=corrected), inst)


def _run_smt_rearranged(inst, tol, corrected):
    return _with_instance(verify_second_main_rearranged(_smt(inst), _radii(inst), tol, corrected=corrected), inst)


def _gen_shift_quotient(rng, grid):
    return {
        "f": random_function(rng).to_spec(),
        "c": float(rng.uniform(-3.0, 3.0)),
        "alpha": float(rng.uniform(1.1, 4.0)),
        "radii": _radii_list(rng, grid, 10, 0.1, 20.0),
    }


def _run_shift_quotient(inst, tol, corrected):
    rep = verify_shift_quotient_bound(_f(inst), float(inst["c"]), float(inst["alpha"]), _radii(inst), tol, corrected=corrected)
    return _with_instance(rep, inst)


def _gen_exp_shift(rng, grid):
    return {"alpha": float(rng.choice([2.0, 3.0])), "radii": _radii_list(rng, grid, 20, 0.1, 15.0)}


def _run_exp_shift(inst, tol, corrected):
    alpha = float(inst["alpha"])
    rep = verify_exp_shift_identity(Exponential(alpha), alpha, _radii(inst), rel_tol=min(tol, 1e-9))
    return _with_instance(rep, inst)


def _gen_sandwich(rng, grid):
    f = random_function(rng)
    radii = _radii_list(rng, grid, 10, 0.1, 20.0)
    targets = random_targets(rng, f, int(rng.integers(1, 5)), max(radii))
    return {"f": f.to_spec(), "targets": targets, "radii": radii}


def _run_sandwich(inst, tol, corrected):
    rep = verify_characteristic_sandwich(_f(inst), [float(a) for a in inst["targets"]], _radii(inst), tol)
    return _with_instance(rep, inst)


def _gen_chain(rng, grid):
    inst = _gen_smt(rng, grid)
    inst.pop("R")
    return inst


def _run_chain(inst, tol, corrected):
    rep = verify_lemma_chain(_f(inst), float(inst["c"]), [float(a) for a in inst["targets"]], _radii(inst), tol, corrected=corrected)
    return _with_instance(rep, inst)


def _scalar_samples(seed: int, n: int, max_targets: int = 6):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, max_targets + 1))
    a = rng.uniform(-10, 10, (n, p))
    x = rng.uniform(-10, 10, n)
    return a, x


def _gen_scalar(rng, grid):
    return {"seed": int(rng.integers(2**31)), "samples": 1000}


def _run_prod_sum(inst, tol, corrected):
    a, x = _scalar_samples(int(inst["seed"]), int(inst["samples"]))
    p = a.shape[1]
    lifted = np.maximum(x[:, None], a)
    lhs = np.min(lifted + (p - 1) * a, axis=1)
    rhs = lifted.sum(axis=1)
    rep = inequality_report("prod-sum", x, lhs, rhs, tol)
    return _with_instance(rep, inst)


def _run_max_identity(inst, tol, corrected):
    a, x = _scalar_samples(int(inst["seed"]), int(inst["samples"]))
    p = a.shape[1]
    rhs = p * np.maximum(x, a.max(axis=1))
    lhs = rhs + max_identity_gap(x, a)
    scale = np.maximum(1.0, np.maximum(np.abs(x), np.abs(a).max(axis=1))) * p
    return _with_instance(
        VerificationReport("max-identity", x.tolist(), lhs.tolist(), rhs.tolist(), (tol * scale).tolist(), two_sided=True),
        inst,
    )


# --------------------------------------------------------------------------
# difference Laurent polynomials


def _gen_ptof(rng, grid):
    f = random_finite(rng)
    P = random_poly(rng, int(rng.integers(1, 3)), int(rng.integers(1, 5)))
    positive = [lam for lam in P.terms if P.norm(lam) > 0]
    lam = list(positive[int(rng.integers(len(positive)))]) if positive else list(next(iter(P.terms)))
    return {"f": f.to_spec(), "P": P.to_spec(), "lambda": lam, "radii": _radii_list(rng, grid, 20, 0.1, 15.0)}


def _run_ptof(inst, tol, corrected):
    return _with_instance(verify_ptof(_poly(inst, "P"), _f(inst), inst["lambda"], _radii(inst), tol), inst)


def _gen_valiron(rng, grid):
    f = random_finite(rng)
    P = random_poly(rng, int(rng.integers(1, 3)), int(rng.integers(1, 5)))
    return {"f": f.to_spec(), "P": P.to_spec(), "radii": _radii_list(rng, grid, 10, 0.1, 15.0)}


def _run_valiron(inst, tol, corrected):
    return _with_instance(verify_valiron_mohonko(_poly(inst, "P"), _f(inst), _radii(inst), tol, corrected=corrected), inst)


def _gen_mohonko(rng, grid):
    f = random_finite(rng)
    P = random_annihilator(rng, f, int(rng.integers(1, 4)))
    return {"f": f.to_spec(), "P": P.to_spec(), "a": float(rng.uniform(-3, 3)), "radii": _radii_list(rng, grid, 8, 0.1, 12.0)}


def _run_mohonko(inst, tol, corrected):
    return _with_instance(verify_mohonko(_poly(inst, "P"), _f(inst), float(inst["a"]), _radii(inst), tol), inst)


def _gen_clunie(rng, grid):
    f = random_finite(rng)
    H = random_poly(rng, 2, int(rng.integers(1, 4)))
    P = random_degree_zero_poly(rng, int(rng.integers(1, 4)))
    Q = poly_product(H, P)
    return {"f": f.to_spec(), "H": H.to_spec(), "P": P.to_spec(), "Q": Q.to_spec(), "radii": _radii_list(rng, grid, 10, 0.1, 15.0)}


def _run_clunie(inst, tol, corrected):
    rep = verify_clunie(_poly(inst, "H"), _poly(inst, "P"), _poly(inst, "Q"), _f(inst), _radii(inst), tol, corrected=corrected)
    return _with_instance(rep, inst)


# --------------------------------------------------------------------------
# Casoratian of dependent exponential solutions


def _gen_casoratian(rng, grid):
    alpha = float(rng.uniform(1.2, 4.0)) * (1 if rng.uniform() < 0.5 else -1)
    return {"alpha": alpha, "s": float(rng.uniform(-5, 5)), "seed": int(rng.integers(2**31)), "points": 1000}


def _run_casoratian(inst, tol, corrected):
    # both columns solve y(x+1) = alpha y(x), so the determinant vanishes for every s
    alpha, s = float(inst["alpha"]), float(inst["s"])
    x = np.sort(np.random.default_rng(int(inst["seed"])).uniform(-10, 10, int(inst["points"])))
    e = Exponential(alpha)
    g = e.shift(-s)
    det = casoratian_2x2(e, g, x)
    # relative to the two products; a floor of 1 would hide everything where e is small
    scale = np.maximum(np.abs(e(x) * g(x + 1)), np.abs(e(x + 1) * g(x)))
    eps = max(tol, DEFAULT_EPS)
    return _with_instance(
        VerificationReport("casoratian", x.tolist(), det.tolist(), np.zeros_like(x).tolist(), (eps * scale).tolist(), two_sided=True),
        inst,
    )


SUITES: dict[str, Suite] = {
    s.theorem_id: s
    for s in [
        Suite("jensen", "T(r,f) - T(r,-f) = f(0)", _gen_jensen, _run_jensen),
        Suite("poisson-jensen", "Poisson-Jensen formula at (r, x)", _gen_poisson, _run_poisson),
        Suite("first-main", "first main theorem with defect band", _gen_first_main, _run_first_main),
        Suite("second-main", "second main inequality", _gen_smt, _run_smt, True),
        Suite("second-main-rearranged", "second main inequality, proximity form", _gen_smt, _run_smt_rearranged, True),
        Suite("lemma-chain", "three inequalities feeding the second main inequality", _gen_chain, _run_chain, True),
        Suite("sandwich", "T of a product of lifts", _gen_sandwich, _run_sandwich),
        Suite("shift-quotient", "proximity of f(x+c) - f(x)", _gen_shift_quotient, _run_shift_quotient, True),
        Suite("exp-shift", "m(r, e(x+1) - e(x)) = (alpha-1) T(r, e)", _gen_exp_shift, _run_exp_shift),
        Suite("prod-sum", "scalar sum/min inequality for lifted targets", _gen_scalar, _run_prod_sum, default_tol=SCALAR_REL_TOL),
        Suite("max-identity", "scalar max identity for lifted targets", _gen_scalar, _run_max_identity, default_tol=SCALAR_REL_TOL),
        Suite("ptof", "|lam| m(r, f) bound from one term", _gen_ptof, _run_ptof),
        Suite("valiron-mohonko", "|m(r, P) - m(r, deg(P) f)| bound", _gen_valiron, _run_valiron, True),
        Suite("mohonko", "proximity bound for solutions of P(x, f) = 0", _gen_mohonko, _run_mohonko),
        Suite("clunie", "proximity bound for solutions of H P = Q", _gen_clunie, _run_clunie, True),
        Suite("casoratian", "Casoratian of e_alpha(x) and e_alpha(x - s) vanishes", _gen_casoratian, _run_casoratian),
    ]
}

ALIASES = {"smt": "second-main", "fmt": "first-main", "chain": "lemma-chain", "vm": "valiron-mohonko"}


def get_suite(name: str) -> Suite:
    key = ALIASES.get(name, name)
    try:
        return SUITES[key]
    except KeyError:
        raise InvalidSpec(f"unknown theorem id {name!r}; known: {', '.join(sorted(SUITES))}") from None


@dataclass
class Outcome:
    """One instance: a report, or the reason it was skipped."""

    index: int
    report: VerificationReport | None
    skipped: str = ""

    @property
    def passed(self) -> bool | None:
        return None if self.report is None else self.report.passed

    def to_json(self) -> dict:
        if self.report is None:
            return {"index": self.index, "skipped": self.skipped}
        return {"index": self.index, **self.report.to_json()}


def run_instance(suite: Suite, inst: dict, index: int = 0, tol: float | None = None, corrected: bool = False) -> Outcome:
    """Run one instance; ``tol=None`` uses the suite's default relative tolerance."""
    try:
        return Outcome(index, suite.run(inst, suite.default_tol if tol is None else tol, corrected))
    except PreconditionViolated as exc:
        return Outcome(index, None, str(exc))
    except NotASolution as exc:
        return Outcome(index, None, f"not a solution: {exc}")


def random_instances(suite: Suite, n: int, seed: int, grid: Sequence[float] | None = None) -> list[dict]:
    grid = None if grid is None else np.asarray(grid, dtype=float)
    return [suite.generate(np.random.default_rng([seed, i]), grid) for i in range(n)]


def run_random(
    name: str,
    n: int,
    seed: int,
    tol: float | None = None,
    grid: Sequence[float] | None = None,
    corrected: bool = False,
) -> list[Outcome]:
    suite = get_suite(name)
    return [run_instance(suite, inst, i, tol, corrected) for i, inst in enumerate(random_instances(suite, n, seed, grid))]


def tally(outcomes: Sequence[Outcome]) -> dict[str, int]:
    passed = sum(o.passed is True for o in outcomes)
    failed = sum(o.passed is False for o in outcomes)
    return {"passed": passed, "failed": failed, "skipped": len(outcomes) - passed - failed, "total": len(outcomes)}


def worst_slack(outcomes: Sequence[Outcome]) -> float:
    slacks = [o.report.min_slack for o in outcomes if o.report is not None]
    return min(slacks) if slacks else math.nan
