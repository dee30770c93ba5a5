from .expr import (And, Compare, FieldRef, InList, Literal, Not, Or,
                   compile_constraint, eval_constraint, referenced_fields, typecheck)
from .parser import parse_constraint, parse_workflow
from .printer import format_constraint, pretty_print

__all__ = [
    "And", "Compare", "FieldRef", "InList", "Literal", "Not", "Or",
    "compile_constraint", "eval_constraint", "format_constraint",
    "parse_constraint", "parse_workflow", "pretty_print", "referenced_fields",
    "typecheck",
]
