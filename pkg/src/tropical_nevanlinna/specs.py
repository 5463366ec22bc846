"""JSON specs for functions, polynomials and equations.

Function spec nodes (``kind`` selects the node type)::

    {"kind": "finite", "points": [[x, y], ...], "slope_left": s, "slope_right": s}
    {"kind": "constant", "value": a}
    {"kind": "linear", "slope": s, "intercept": b}
    {"kind": "periodic", "points": [[x, y], ...], "multiplier": mu}
    {"kind": "exponential", "alpha": a}
    {"kind": "pi", "a": a, "b": b}
    {"kind": "trig", "theta": t, "which": 1 | 2}
    {"kind": "shift", "arg": node, "c": c}
    {"kind": "scale", "arg": node, "alpha": a}
    {"kind": "neg", "arg": node}
    {"kind": "reflect", "arg": node}
    {"kind": "sum", "args": [node, ...]}
    {"kind": "max", "args": [node, ...]}

Equation specs for the solvers::

    {"order": 1, "c": c, "events": [[x, omega], ...], "normalization": "events" | "classic"}
    {"order": 2, "c": 2, "slope": s, "periodic": periodic}
    {"order": 2, "c": -2, "xi_terms": [{"x": x_j, "xi": periodic}, ...]}
    {"order": 2, "c": c, "forward": [[y_j, alpha_j], ...], "backward": [[x_j, beta_j], ...]}    # |c| > 2
    {"order": 2, "c": c, "trig_terms": [[1 | 2 | "delta", shift, weight], ...]}               # |c| < 2

where ``periodic`` is either a function spec or event data
``{"events": [[c, omega], ...], "anchor": a, "period": p}``.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import InvalidSpec, TropicalError
from .pl_core import (
    Exponential,
    FinitePL,
    Negated,
    PeriodicExtension,
    Reflected,
    Scaled,
    Shifted,
    Sum,
    TropicalPL,
    constant,
    linear,
    tropical_max,
)


class SpecParseError(InvalidSpec):
    """Malformed JSON text; carries the line and column of the problem."""

    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.column = column


def parse_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, exc.lineno, exc.colno) from None


def _need(node: dict, key: str):
    try:
        return node[key]
    except KeyError:
        raise InvalidSpec(f"{node.get('kind', '?')} node is missing {key!r}") from None


def function_from_spec(node: Any) -> TropicalPL:
    """Build a :class:`TropicalPL` from a parsed function spec."""
    if isinstance(node, (int, float)) and not isinstance(node, bool):
        return constant(float(node))
    if not isinstance(node, dict):
        raise InvalidSpec(f"function spec must be an object, got {type(node).__name__}")
    kind = node.get("kind")
    try:
        if kind == "finite":
            return FinitePL(_need(node, "points"), float(_need(node, "slope_left")), float(_need(node, "slope_right")))
        if kind == "constant":
            return constant(float(_need(node, "value")))
        if kind == "linear":
            return linear(float(_need(node, "slope")), float(node.get("intercept", 0.0)))
        if kind == "periodic":
            return PeriodicExtension(_need(node, "points"), float(node.get("multiplier", 1.0)))
        if kind == "exponential":
            return Exponential(float(_need(node, "alpha")))
        if kind == "pi":
            from .special_functions import make_pi

            return make_pi(float(_need(node, "a")), float(_need(node, "b")))
        if kind == "trig":
            from .special_functions import make_trig_solution

            return make_trig_solution(float(_need(node, "theta")), int(_need(node, "which")))
        if kind == "shift":
            return Shifted(function_from_spec(_need(node, "arg")), float(_need(node, "c")))
        if kind == "scale":
            return Scaled(function_from_spec(_need(node, "arg")), float(_need(node, "alpha")))
        if kind == "neg":
            return Negated(function_from_spec(_need(node, "arg")))
        if kind == "reflect":
            return Reflected(function_from_spec(_need(node, "arg")))
        if kind in ("sum", "max"):
            args = [function_from_spec(a) for a in _need(node, "args")]
            if not args:
                raise InvalidSpec(f"{kind} node needs at least one argument")
            return Sum(args) if kind == "sum" else tropical_max(*args)
    except TropicalError:
        raise
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidSpec(f"bad {kind} node: {exc}") from None
    raise InvalidSpec(f"unknown function kind {kind!r}")


def function_to_spec(f: TropicalPL) -> dict:
    return f.to_spec()


def load_function(text: str) -> TropicalPL:
    return function_from_spec(parse_json(text))


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, round-trip floats, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def periodic_from_spec(node: Any) -> TropicalPL:
    """A function spec, or ``{"events", "anchor", "period"}`` data for :func:`build_periodic`."""
    from .special_functions import PeriodicSpec, build_periodic

    if isinstance(node, dict) and "events" in node:
        events = [(float(c), float(w)) for c, w in node["events"]]
        return build_periodic(PeriodicSpec(events, float(node.get("anchor", 0.0)), float(node.get("period", 1.0))))
    return function_from_spec(node)


def solve_from_spec(eq: Any):
    """Dispatch an equation spec to the first- or second-order solver."""
    from .special_functions import solve_first_order, solve_second_order

    if not isinstance(eq, dict):
        raise InvalidSpec("equation spec must be an object")
    try:
        order = int(eq["order"])
        c = float(eq["c"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"equation spec needs numeric 'order' and 'c': {exc}") from None
    try:
        if order == 1:
            events = [(float(x), float(w)) for x, w in eq.get("events", [])]
            return solve_first_order(c, events, eq.get("normalization", "events"))
        if order == 2:
            periodic = eq.get("periodic")
            return solve_second_order(
                c,
                slope=float(eq.get("slope", 0.0)),
                periodic=None if periodic is None else periodic_from_spec(periodic),
                xi_terms=[(float(t["x"]), periodic_from_spec(t["xi"])) for t in eq.get("xi_terms", [])],
                forward=[(float(y), float(w)) for y, w in eq.get("forward", [])],
                backward=[(float(x), float(w)) for x, w in eq.get("backward", [])],
                trig_terms=[(k if k == "delta" else int(k), float(s), float(w)) for k, s, w in eq.get("trig_terms", [])],
            )
    except TropicalError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad equation spec: {exc}") from None
    raise InvalidSpec(f"order must be 1 or 2, got {order}")
