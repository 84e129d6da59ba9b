"""Safe arithmetic expression compiler for user-supplied functions.

Grammar: +, -, *, /, ^ (power), unary minus, parentheses, the functions
ln/log, exp, sqrt, abs, sin, cos, tan, the constants e and pi, numeric
literals, and a caller-declared set of variable names. Anything else is
rejected with the offending token named.
"""

from __future__ import annotations

import ast
import math
from typing import Callable

from .errors import ExpressionError

_FUNCTIONS = {
    "ln": math.log,
    "log": math.log,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
}

_CONSTANTS = {"e": math.e, "pi": math.pi}

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.USub, ast.UAdd)


def _validate(node: ast.AST, variables: tuple[str, ...]) -> None:
    if isinstance(node, ast.Expression):
        _validate(node.body, variables)
    elif isinstance(node, ast.BinOp):
        if not isinstance(node.op, _ALLOWED_BINOPS):
            raise ExpressionError(
                f"operator {type(node.op).__name__!r} is not allowed",
                token=type(node.op).__name__,
            )
        _validate(node.left, variables)
        _validate(node.right, variables)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, _ALLOWED_UNARY):
            raise ExpressionError(
                f"operator {type(node.op).__name__!r} is not allowed",
                token=type(node.op).__name__,
            )
        _validate(node.operand, variables)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise ExpressionError("only plain calls to named functions are allowed")
        name = node.func.id
        if name not in _FUNCTIONS:
            raise ExpressionError(f"unknown function {name!r}", token=name)
        for arg in node.args:
            _validate(arg, variables)
    elif isinstance(node, ast.Name):
        if node.id not in variables and node.id not in _CONSTANTS:
            raise ExpressionError(f"unknown name {node.id!r}", token=node.id)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExpressionError(f"literal {node.value!r} is not numeric",
                                  token=repr(node.value))
    else:
        raise ExpressionError(
            f"syntax element {type(node).__name__!r} is not allowed",
            token=type(node).__name__,
        )


def compile_expression(text: str, variables: tuple[str, ...]) -> Callable[..., float]:
    """Compile ``text`` into a positional-argument callable over ``variables``.

    Raises ExpressionError naming the offending token on any parse or
    validation failure.
    """
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        bad = exc.text.strip() if exc.text else text
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}", token=bad) from None
    _validate(tree, variables)
    code = compile(tree, "<expression>", "eval")
    namespace = {**_FUNCTIONS, **_CONSTANTS, "__builtins__": {}}

    def evaluate(*args: float) -> float:
        scope = dict(zip(variables, args))
        try:
            return float(eval(code, namespace, scope))
        except (ArithmeticError, ValueError) as exc:
            where = ", ".join(f"{n}={v!r}" for n, v in scope.items())
            raise ExpressionError(f"cannot evaluate {text!r} at {where}: {exc}")

    evaluate.__name__ = f"expr({text})"
    evaluate.expression = text  # type: ignore[attr-defined]
    return evaluate
