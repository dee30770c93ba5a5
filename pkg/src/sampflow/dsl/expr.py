"""Constraint expressions: AST, type checking and evaluation.

Evaluation is two-valued. A comparison or membership test whose field is
missing on the artifact is false; ``not`` then simply negates that leaf.
"""
from __future__ import annotations

import datetime as dt
import operator
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Union

from ..errors import SourcePos, TypeMismatchError, UnknownFieldError
from ..model import Artifact, FieldKind, MetadataSchema

CMP_OPS = ("<", "<=", ">", ">=", "==", "!=")
_OP_FUNCS = {"<": operator.lt, "<=": operator.le, ">": operator.gt,
             ">=": operator.ge, "==": operator.eq, "!=": operator.ne}


def literal_kind(value) -> FieldKind:
    if isinstance(value, bool):
        return FieldKind.BOOL
    if isinstance(value, int):
        return FieldKind.INT
    if isinstance(value, float):
        return FieldKind.REAL
    if isinstance(value, str):
        return FieldKind.TEXT
    if isinstance(value, dt.date) and not isinstance(value, dt.datetime):
        return FieldKind.DATE
    raise TypeError(f"unsupported literal {value!r}")


@dataclass(frozen=True)
class Literal:
    value: object
    kind: FieldKind

    @classmethod
    def of(cls, value) -> "Literal":
        return cls(value, literal_kind(value))


@dataclass(frozen=True)
class FieldRef:
    name: str


Operand = Union[Literal, FieldRef]


@dataclass(frozen=True)
class Compare:
    op: str
    left: Operand
    right: Operand


@dataclass(frozen=True)
class InList:
    field: FieldRef
    items: tuple[Literal, ...]


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


Expr = Union[Compare, InList, And, Or, Not]


def referenced_fields(e: Expr) -> frozenset[str]:
    if isinstance(e, Compare):
        return frozenset(o.name for o in (e.left, e.right) if isinstance(o, FieldRef))
    if isinstance(e, InList):
        return frozenset((e.field.name,))
    if isinstance(e, Not):
        return referenced_fields(e.operand)
    return referenced_fields(e.left) | referenced_fields(e.right)


# -- type checking -----------------------------------------------------------


def _compatible(a: FieldKind, b: FieldKind) -> bool:
    return a == b or (a.is_numeric and b.is_numeric)


def check_compare(op: str, lkind: FieldKind, rkind: FieldKind,
                  pos: SourcePos | None = None) -> None:
    if not _compatible(lkind, rkind):
        raise TypeMismatchError(
            f"cannot compare {lkind.value} with {rkind.value}", pos)
    if op not in ("==", "!=") and not lkind.is_orderable:
        raise TypeMismatchError(
            f"operator {op} is not defined on {lkind.value} values", pos)


def check_item(field_kind: FieldKind, lit: Literal, pos: SourcePos | None = None) -> None:
    if not _compatible(field_kind, lit.kind):
        raise TypeMismatchError(
            f"list item of kind {lit.kind.value} in a test on a {field_kind.value} field", pos)


def typecheck(e: Expr, schema: MetadataSchema) -> None:
    """Check an expression built outside the parser against ``schema``."""
    if isinstance(e, Compare):
        ops = (e.left, e.right)
        if all(isinstance(o, FieldRef) for o in ops):
            raise TypeMismatchError("comparisons between two fields are not supported")
        kinds = []
        for o in ops:
            if isinstance(o, FieldRef):
                if o.name not in schema:
                    raise UnknownFieldError(o.name)
                kinds.append(schema.kind(o.name))
            else:
                kinds.append(o.kind)
        check_compare(e.op, kinds[0], kinds[1])
    elif isinstance(e, InList):
        if e.field.name not in schema:
            raise UnknownFieldError(e.field.name)
        for item in e.items:
            check_item(schema.kind(e.field.name), item)
    elif isinstance(e, Not):
        typecheck(e.operand, schema)
    else:
        typecheck(e.left, schema)
        typecheck(e.right, schema)


# -- evaluation --------------------------------------------------------------

Predicate = Callable[[Mapping], bool]


def _compile_compare(e: Compare) -> Predicate:
    fn = _OP_FUNCS[e.op]
    left, right = e.left, e.right
    if isinstance(left, FieldRef) and isinstance(right, Literal):
        name, lit = left.name, right.value

        def pred(vals):
            v = vals[name]
            return v is not None and fn(v, lit)
    elif isinstance(left, Literal) and isinstance(right, FieldRef):
        name, lit = right.name, left.value

        def pred(vals):
            v = vals[name]
            return v is not None and fn(lit, v)
    elif isinstance(left, Literal) and isinstance(right, Literal):
        const = bool(fn(left.value, right.value))

        def pred(vals):
            return const
    else:
        a, b = left.name, right.name

        def pred(vals):
            x, y = vals[a], vals[b]
            return x is not None and y is not None and fn(x, y)
    return pred


@lru_cache(maxsize=1024)
def compile_constraint(e: Expr) -> Predicate:
    """Turn ``e`` into a predicate over an artifact's value mapping."""
    if isinstance(e, Compare):
        return _compile_compare(e)
    if isinstance(e, InList):
        name = e.field.name
        items = frozenset(i.value for i in e.items)

        def member(vals):
            v = vals[name]
            return v is not None and v in items
        return member
    if isinstance(e, Not):
        inner = compile_constraint(e.operand)
        return lambda vals: not inner(vals)
    left = compile_constraint(e.left)
    right = compile_constraint(e.right)
    if isinstance(e, And):
        return lambda vals: left(vals) and right(vals)
    return lambda vals: left(vals) or right(vals)


def eval_constraint(e: Expr, a: Artifact | Mapping) -> bool:
    vals = a.values if isinstance(a, Artifact) else a
    return compile_constraint(e)(vals)
