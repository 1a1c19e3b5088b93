"""Feature expression trees: evaluation, canonical names, lineage.

The canonical name is the unit of explainability and the wire token for
agents.  Grammar (no whitespace): ``name := column | op "(" name {"," name} ")"``.
Operands of plus/multiply are stored sorted by canonical name, so
structurally equal features always share one name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ops
from .data import Dataset
from .errors import ExprSyntaxError

_NAME_STOP = set("(),")


class FeatureExpr:
    """Base class; concrete nodes are Base, Unary and Binary."""

    canonical_name: str
    depth: int

    def __str__(self):
        return self.canonical_name


@dataclass(frozen=True)
class Base(FeatureExpr):
    column: str

    @cached_property
    def canonical_name(self) -> str:
        return self.column

    @property
    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Unary(FeatureExpr):
    op: str
    child: FeatureExpr

    def __post_init__(self):
        if ops.lookup(self.op).arity != 1:
            raise ValueError(f"{self.op} is not unary")

    @cached_property
    def canonical_name(self) -> str:
        return f"{self.op}({self.child.canonical_name})"

    @cached_property
    def depth(self) -> int:
        return 1 + self.child.depth


@dataclass(frozen=True)
class Binary(FeatureExpr):
    op: str
    left: FeatureExpr
    right: FeatureExpr

    def __post_init__(self):
        if ops.lookup(self.op).arity != 2:
            raise ValueError(f"{self.op} is not binary")
        if (
            self.op in ops.COMMUTATIVE
            and self.left.canonical_name > self.right.canonical_name
        ):
            left, right = self.right, self.left
            object.__setattr__(self, "left", left)
            object.__setattr__(self, "right", right)

    @cached_property
    def canonical_name(self) -> str:
        return f"{self.op}({self.left.canonical_name},{self.right.canonical_name})"

    @cached_property
    def depth(self) -> int:
        return 1 + max(self.left.depth, self.right.depth)


def canonical_name(e: FeatureExpr) -> str:
    return e.canonical_name


def evaluate(e: FeatureExpr, d: Dataset, cache: dict | None = None) -> np.ndarray:
    """Bottom-up evaluation of an expression over a dataset's columns.

    The optional cache maps (dataset uid, canonical name) to a computed
    column; identical values may be written concurrently without harm.
    """
    key = (d.uid, e.canonical_name)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    if isinstance(e, Base):
        out = d.column(e.column)
    elif isinstance(e, Unary):
        out = ops.apply_unary(ops.lookup(e.op), evaluate(e.child, d, cache))
    elif isinstance(e, Binary):
        out = ops.apply_binary(
            ops.lookup(e.op), evaluate(e.left, d, cache), evaluate(e.right, d, cache)
        )
    else:
        raise TypeError(f"not a FeatureExpr: {e!r}")
    if cache is not None:
        cache[key] = out
    return out


def _read_name_token(text: str, pos: int) -> tuple[str, int]:
    start = pos
    while pos < len(text) and text[pos] not in _NAME_STOP and not text[pos].isspace():
        pos += 1
    if pos == start:
        raise ExprSyntaxError(f"expected a name at position {start} in {text!r}")
    return text[start:pos], pos


def _parse(text: str, pos: int) -> tuple[FeatureExpr, int]:
    token, pos = _read_name_token(text, pos)
    if pos < len(text) and text[pos] == "(":
        op = ops.lookup(token)
        args = []
        pos += 1
        while True:
            node, pos = _parse(text, pos)
            args.append(node)
            if pos >= len(text):
                raise ExprSyntaxError(f"unterminated call in {text!r}")
            if text[pos] == ",":
                pos += 1
                continue
            if text[pos] == ")":
                pos += 1
                break
            raise ExprSyntaxError(f"unexpected {text[pos]!r} at {pos} in {text!r}")
        if op.arity != len(args):
            raise ExprSyntaxError(f"{op.name} takes {op.arity} operand(s), got {len(args)}")
        if op.arity == 1:
            return Unary(op.name, args[0]), pos
        return Binary(op.name, args[0], args[1]), pos
    return Base(token), pos


def parse_name(text: str) -> FeatureExpr:
    """Parse a canonical name back into an expression tree."""
    node, pos = _parse(text, 0)
    if pos != len(text):
        raise ExprSyntaxError(f"trailing characters at {pos} in {text!r}")
    return node


def dedupe(exprs) -> list[FeatureExpr]:
    """Drop later duplicates (by canonical name), keeping order."""
    seen = set()
    out = []
    for e in exprs:
        name = e.canonical_name
        if name not in seen:
            seen.add(name)
            out.append(e)
    return out


_INFIX_BINARY = {"plus": "+", "subtract": "-", "multiply": "*", "divide": "/"}


def _infix(e: FeatureExpr, top: bool) -> str:
    if isinstance(e, Base):
        return e.column
    if isinstance(e, Binary):
        sym = _INFIX_BINARY[e.op]
        left = _infix(e.left, False)
        right = _infix(e.right, False)
        return f"{left} {sym} {right}" if top else f"({left}{sym}{right})"
    if e.op == "square":
        return f"{_infix(e.child, False)}^2"
    if e.op == "cube":
        return f"{_infix(e.child, False)}^3"
    if e.op == "reciprocal":
        return f"1/{_infix(e.child, False)}"
    return f"{e.op}({_infix(e.child, True)})"


def lineage(e: FeatureExpr) -> list[str]:
    """Human-readable derivation: base columns first, then one line per
    internal node bottom-up."""
    bases: list[str] = []
    internal: list[str] = []
    seen = set()

    def walk(node: FeatureExpr):
        if node.canonical_name in seen:
            return
        if isinstance(node, Base):
            seen.add(node.canonical_name)
            bases.append(f"{node.column} (base)")
            return
        children = [node.child] if isinstance(node, Unary) else [node.left, node.right]
        for child in children:
            walk(child)
        seen.add(node.canonical_name)
        internal.append(f"{node.canonical_name} = {_infix(node, True)}")

    walk(e)
    return bases + internal


@dataclass(frozen=True)
class FeatureSubset:
    """An ordered, duplicate-free set of feature expressions.

    ``origin`` records the search-tree node that produced the subset.
    """

    exprs: tuple[FeatureExpr, ...]
    origin: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "exprs", tuple(self.exprs))
        names = [e.canonical_name for e in self.exprs]
        if len(set(names)) != len(names):
            raise ValueError("duplicate canonical names in subset")

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(e.canonical_name for e in self.exprs)

    def __len__(self):
        return len(self.exprs)

    def __iter__(self):
        return iter(self.exprs)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def get(self, name: str) -> FeatureExpr:
        for e in self.exprs:
            if e.canonical_name == name:
                return e
        raise KeyError(name)

    def base_names(self) -> tuple[str, ...]:
        return tuple(e.canonical_name for e in self.exprs if isinstance(e, Base))

    def with_changes(self, add=(), drop=(), origin=None) -> "FeatureSubset":
        """New subset: current order minus drops, new expressions appended."""
        dropped = set(drop)
        kept = [e for e in self.exprs if e.canonical_name not in dropped]
        names = {e.canonical_name for e in kept}
        for e in add:
            if e.canonical_name not in names:
                names.add(e.canonical_name)
                kept.append(e)
        return FeatureSubset(tuple(kept), origin=origin)


def from_dataset(d: Dataset) -> FeatureSubset:
    """The raw feature set: one Base expression per dataset column."""
    return FeatureSubset(tuple(Base(c) for c in d.columns), origin=None)
