"""Custom betrayal expressions in the single variable ``x``.

An expression is parsed into an ``ast`` tree and checked before anything is
evaluated. Allowed nodes are the name ``x``, the constants ``pi`` and ``e``,
numeric literals, arithmetic, unary signs, comparisons and calls to the
functions in ``FUNCTIONS`` by bare name. Attributes, subscripts, keyword
arguments and any other node are rejected with InvalidSpec, and the tree is
walked here instead of being handed to ``eval``.
"""

import ast
import operator
from collections.abc import Callable
from typing import Any

import numpy as np

from src.voting.errors import InvalidSpec

Curve = Callable[[np.ndarray], np.ndarray]

MAX_LENGTH = 512

# name -> (function, number of positional arguments)
FUNCTIONS: dict[str, tuple[Callable[..., Any], int]] = {
    "sqrt": (np.sqrt, 1),
    "exp": (np.exp, 1),
    "log": (np.log, 1),
    "log2": (np.log2, 1),
    "sin": (np.sin, 1),
    "cos": (np.cos, 1),
    "tanh": (np.tanh, 1),
    "abs": (np.abs, 1),
    "power": (np.power, 2),
    "minimum": (np.minimum, 2),
    "maximum": (np.maximum, 2),
    "where": (np.where, 3),
}

CONSTANTS: dict[str, float] = {"pi": float(np.pi), "e": float(np.e)}

_BINARY: dict[type[ast.operator], Callable[[Any, Any], Any]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.Mod: operator.mod,
}

_UNARY: dict[type[ast.unaryop], Callable[[Any], Any]] = {
    ast.UAdd: operator.pos,
    ast.USub: operator.neg,
}

_COMPARE: dict[type[ast.cmpop], Callable[[Any, Any], Any]] = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}


def _check(node: ast.expr, text: str) -> None:
    match node:
        case ast.Constant(value=value) if type(value) in (int, float):
            return
        case ast.Name(id=name, ctx=ast.Load()):
            if name != "x" and name not in CONSTANTS:
                raise InvalidSpec(f"unknown name {name!r} in expression", expression=text)
        case ast.BinOp(left=left, op=op, right=right) if type(op) in _BINARY:
            _check(left, text)
            _check(right, text)
        case ast.UnaryOp(op=op, operand=operand) if type(op) in _UNARY:
            _check(operand, text)
        case ast.Compare(left=left, ops=ops, comparators=rest) if all(
            type(op) in _COMPARE for op in ops
        ):
            for part in (left, *rest):
                _check(part, text)
        case ast.Call(func=ast.Name(id=name), args=args, keywords=[]):
            if name not in FUNCTIONS:
                raise InvalidSpec(f"unknown function {name!r} in expression", expression=text)
            if len(args) != FUNCTIONS[name][1]:
                raise InvalidSpec(f"{name} takes {FUNCTIONS[name][1]} argument(s)",
                                  expression=text, given=len(args))
            for arg in args:
                _check(arg, text)
        case _:
            raise InvalidSpec(f"{type(node).__name__} is not allowed in an expression",
                              expression=text)


def _evaluate(node: ast.expr, x: np.ndarray) -> Any:
    match node:
        case ast.Constant(value=value):
            return np.float64(value)
        case ast.Name(id="x"):
            return x
        case ast.Name(id=name):
            return np.float64(CONSTANTS[name])
        case ast.BinOp(left=left, op=op, right=right):
            return _BINARY[type(op)](_evaluate(left, x), _evaluate(right, x))
        case ast.UnaryOp(op=op, operand=operand):
            return _UNARY[type(op)](_evaluate(operand, x))
        case ast.Compare(left=left, ops=ops, comparators=rest):
            current = _evaluate(left, x)
            result: Any = np.True_
            for op, part in zip(ops, rest):
                following = _evaluate(part, x)
                result = np.logical_and(result, _COMPARE[type(op)](current, following))
                current = following
            return result
        case ast.Call(func=ast.Name(id=name), args=args):
            function, _ = FUNCTIONS[name]
            return function(*(_evaluate(arg, x) for arg in args))
    raise InvalidSpec(f"{type(node).__name__} is not allowed in an expression")


def compile_expression(text: str) -> Curve:
    """Checked curve for ``text``; raises InvalidSpec on any disallowed construct."""
    if len(text) > MAX_LENGTH:
        raise InvalidSpec(f"expression longer than {MAX_LENGTH} characters", size=len(text))
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InvalidSpec("expression does not parse", expression=text) from exc
    _check(tree.body, text)

    def curve(x: np.ndarray) -> np.ndarray:
        try:
            with np.errstate(all="ignore"):
                value = _evaluate(tree.body, x)
            out = np.broadcast_to(np.asarray(value, dtype=np.float64), x.shape).copy()
        except (ArithmeticError, TypeError, ValueError) as exc:
            raise InvalidSpec(f"expression failed to evaluate: {exc}", expression=text) from exc
        # points outside [0, 1] only feed finite differences at the ends
        inside = (x >= 0.0) & (x <= 1.0)
        if not np.all(np.isfinite(out[inside])):
            raise InvalidSpec("expression is not finite on [0, 1]", expression=text)
        return out

    return curve
