"""The closed operation set: 10 unary and 4 binary column transformations.

Domain guards reject invalid inputs instead of patching them (no silent
log(|x|+eps) tricks), so every generated feature keeps its plain
mathematical meaning.  A rejected application raises DomainViolation and
is reported back to the proposing agent as feedback.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainViolation, LengthMismatch, UnknownOperation

#: smallest magnitude accepted as a divisor (also guards tan poles)
EPS_DIV = 1e-12
#: largest exponent before exp() overflows float64
EXP_MAX = 700.0


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    fn: Callable[..., np.ndarray]
    guard: Callable[..., np.ndarray] | None = None
    guard_desc: str = ""


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


_UNARY = [
    Operation("sqrt", 1, np.sqrt, lambda x: x < 0, "requires x >= 0"),
    Operation("square", 1, lambda x: x * x),
    Operation("cos", 1, np.cos),
    Operation("sin", 1, np.sin),
    Operation("tan", 1, np.tan, lambda x: np.abs(np.cos(x)) < EPS_DIV, "pole: |cos x| < eps"),
    Operation("exp", 1, np.exp, lambda x: x > EXP_MAX, f"overflow: requires x <= {EXP_MAX:g}"),
    Operation("cube", 1, lambda x: x * x * x),
    Operation("log", 1, np.log, lambda x: x <= 0, "requires x > 0"),
    Operation(
        "reciprocal", 1, lambda x: 1.0 / x, lambda x: np.abs(x) < EPS_DIV, "divisor near zero"
    ),
    Operation("sigmoid", 1, _sigmoid),
]

_BINARY = [
    Operation("plus", 2, lambda x, y: x + y),
    Operation("subtract", 2, lambda x, y: x - y),
    Operation("multiply", 2, lambda x, y: x * y),
    Operation(
        "divide", 2, lambda x, y: x / y, lambda x, y: np.abs(y) < EPS_DIV, "divisor near zero"
    ),
]

REGISTRY: dict[str, Operation] = {op.name: op for op in _UNARY + _BINARY}
UNARY_NAMES: tuple[str, ...] = tuple(op.name for op in _UNARY)
BINARY_NAMES: tuple[str, ...] = tuple(op.name for op in _BINARY)
ALL_NAMES: tuple[str, ...] = UNARY_NAMES + BINARY_NAMES

#: operations whose operand order does not matter (used for canonical naming)
COMMUTATIVE: frozenset[str] = frozenset({"plus", "multiply"})


def lookup(name: str) -> Operation:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownOperation(name) from None


def _check_guard(op: Operation, *arrays):
    if op.guard is None:
        return
    bad = op.guard(*arrays)
    if bad.any():
        raise DomainViolation(op.name, float(bad.mean()), op.guard_desc)


def _check_finite(op: Operation, out: np.ndarray) -> np.ndarray:
    finite = np.isfinite(out)
    if not finite.all():
        raise DomainViolation(op.name, float(1.0 - finite.mean()), "non-finite result")
    return out


def apply_unary(op: Operation, x) -> np.ndarray:
    if op.arity != 1:
        raise ValueError(f"{op.name} is not unary")
    x = np.asarray(x, dtype=np.float64)
    _check_guard(op, x)
    with np.errstate(all="ignore"):
        out = op.fn(x)
    return _check_finite(op, out)


def apply_binary(op: Operation, x, y) -> np.ndarray:
    if op.arity != 2:
        raise ValueError(f"{op.name} is not binary")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatch(f"{op.name}: operand lengths {x.shape} vs {y.shape}")
    _check_guard(op, x, y)
    with np.errstate(all="ignore"):
        out = op.fn(x, y)
    return _check_finite(op, out)
