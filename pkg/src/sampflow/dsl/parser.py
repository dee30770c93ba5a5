"""Recursive-descent parser for workflow documents and constraints.

Besides syntax, the parser checks every field reference against the
schema in scope (the input block, extended by ``add_metadata`` field
blocks) and tracks set depth so that, e.g., ``union`` after a plain
filter is rejected before anything runs.
"""
from __future__ import annotations

import datetime as dt

from ..errors import (DslSyntaxError, DuplicateLabelError, InvalidValueError,
                      SourcePos, TypeMismatchError, UnknownFieldError)
from ..model import FieldKind, MetadataSchema
from ..workflow import (AddMetadata, Branch, Cluster, Filter, Group, InputDecl,
                        Intersection, Manual, Quota, QuotaStratum, Random,
                        Stratified, Stratum, Systematic, Union_, Workflow)
from .expr import (CMP_OPS, And, Compare, FieldRef, InList, Literal, Not, Or,
                   check_compare, check_item)
from .lexer import Token, tokenize

RESERVED = frozenset({"and", "or", "not", "in", "true", "false"})
LOADER_KINDS = ("csv", "json")
FIELD_KINDS = {k.value: k for k in FieldKind}
STEP_KEYWORDS = ("filter", "random", "systematic", "manual", "group", "stratified",
                 "cluster", "quota", "union", "intersection", "add_metadata")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at_word(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value in words

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == ch

    def fail(self, expected, tok: Token | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise DslSyntaxError(f"unexpected {found}", tok.pos, frozenset(expected))

    def word(self, *words: str) -> Token:
        if not self.at_word(*words):
            self.fail(words)
        return self.advance()

    def punct(self, ch: str) -> Token:
        if not self.at_punct(ch):
            self.fail([ch])
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail([what])
        return self.advance()

    def int_lit(self, what: str = "integer") -> tuple[int, SourcePos]:
        tok = self.peek()
        if tok.kind != "int":
            self.fail([what])
        self.advance()
        return tok.value, tok.pos

    def count(self, what: str, minimum: int = 0) -> int:
        value, pos = self.int_lit(what)
        if value < minimum:
            raise InvalidValueError(f"{what} must be >= {minimum}, got {value}", pos)
        return value

    def string_lit(self) -> str:
        tok = self.peek()
        if tok.kind != "string":
            self.fail(["string"])
        self.advance()
        return tok.value

    # -- document ----------------------------------------------------------

    def document(self) -> Workflow:
        inp = self.input_block()
        steps, _, _ = self.steps(inp.schema, 0, closing=None)
        if self.peek().kind != "eof":
            self.fail(STEP_KEYWORDS)
        return Workflow(inp, steps)

    def field_decls(self, existing: set[str]) -> list[tuple[str, FieldKind]]:
        self.punct("{")
        decls = []
        while True:
            name_tok = self.ident("field name")
            name = name_tok.value
            if name in RESERVED:
                raise InvalidValueError(f"{name!r} is reserved and cannot name a field",
                                        name_tok.pos)
            if name in existing:
                raise InvalidValueError(f"field {name!r} declared twice", name_tok.pos)
            existing.add(name)
            self.punct(":")
            kind_tok = self.word(*FIELD_KINDS)
            decls.append((name, FIELD_KINDS[kind_tok.value]))
            if self.at_punct(","):
                self.advance()
                continue
            break
        self.punct("}")
        return decls

    def input_block(self) -> InputDecl:
        self.word("input")
        kind = self.word(*LOADER_KINDS).value
        path = self.string_lit()
        self.word("key")
        key_tok = self.ident("key field")
        entries = self.field_decls(set())
        kinds = dict(entries)
        if key_tok.value not in kinds:
            raise UnknownFieldError(key_tok.value, key_tok.pos)
        if kinds[key_tok.value] not in (FieldKind.TEXT, FieldKind.INT):
            raise TypeMismatchError("the key field must be of kind text or int", key_tok.pos)
        return InputDecl(kind, path, MetadataSchema(tuple(entries), key_tok.value))

    def steps(self, schema: MetadataSchema, depth: int, closing: str | None):
        out = []
        while True:
            tok = self.peek()
            if closing is not None and self.at_punct(closing):
                break
            if tok.kind == "eof" or not self.at_word(*STEP_KEYWORDS):
                if closing is None and tok.kind == "eof":
                    break
                self.fail(STEP_KEYWORDS + ((closing,) if closing else ()))
            step, schema, depth = self.step(schema, depth)
            out.append(step)
        return tuple(out), schema, depth

    def need_artifacts(self, tok: Token, depth: int) -> None:
        if depth != 0:
            raise TypeMismatchError(
                f"{tok.value} needs a set of artifacts but receives a set of depth {depth}; "
                "add a union or intersection first", tok.pos)

    def step(self, schema: MetadataSchema, depth: int):
        tok = self.advance()
        kw = tok.value
        if kw in ("union", "intersection"):
            if depth < 1:
                raise TypeMismatchError(f"{kw} needs a set of sets (after a grouping step)",
                                        tok.pos)
            return (Union_() if kw == "union" else Intersection()), schema, depth - 1
        self.need_artifacts(tok, depth)
        if kw == "filter":
            return Filter(self.constraint(schema)), schema, 0
        if kw == "random":
            n = self.count("sample size")
            self.word("seed")
            seed, _ = self.int_lit("seed")
            return Random(n, seed), schema, 0
        if kw == "systematic":
            n = self.count("sample size", 1)
            self.word("order_by")
            ftok = self.ident("field name")
            if ftok.value not in schema:
                raise UnknownFieldError(ftok.value, ftok.pos)
            if not schema.kind(ftok.value).is_orderable:
                raise TypeMismatchError(
                    f"systematic sampling needs a numeric or date field, "
                    f"{ftok.value!r} is {schema.kind(ftok.value).value}", ftok.pos)
            direction = self.word("asc", "desc").value
            self.word("seed")
            seed, _ = self.int_lit("seed")
            return Systematic(n, ftok.value, direction, seed), schema, 0
        if kw == "manual":
            return Manual(self.id_list()), schema, 0
        if kw == "group":
            return self.group(schema)
        if kw in ("stratified", "cluster"):
            strata = self.strata(schema, with_ids=False)
            if kw == "stratified":
                self.word("take")
                take = self.count("per-stratum sample size")
                self.word("seed")
                seed, _ = self.int_lit("seed")
                return Stratified(strata, take, seed), schema, 1
            self.word("pick")
            pick, ppos = self.int_lit("cluster count")
            if not 0 <= pick <= len(strata):
                raise InvalidValueError(
                    f"cannot pick {pick} clusters out of {len(strata)}", ppos)
            self.word("seed")
            seed, _ = self.int_lit("seed")
            return Cluster(strata, pick, seed), schema, 1
        if kw == "quota":
            return Quota(self.strata(schema, with_ids=True)), schema, 1
        if kw == "add_metadata":
            kind = self.word(*LOADER_KINDS).value
            path = self.string_lit()
            self.word("join")
            jtok = self.ident("join field")
            if jtok.value not in schema:
                raise UnknownFieldError(jtok.value, jtok.pos)
            fields = None
            if self.at_punct("{"):
                fields = tuple(self.field_decls(set(schema.names)))
                schema = schema.extend(fields)
            return AddMetadata(kind, path, jtok.value, fields), schema, 0
        raise AssertionError(kw)  # pragma: no cover

    def id_list(self) -> tuple[str, ...]:
        self.punct("[")
        ids = []
        if not self.at_punct("]"):
            ids.append(self.string_lit())
            while self.at_punct(","):
                self.advance()
                ids.append(self.string_lit())
        self.punct("]")
        return tuple(ids)

    def group(self, schema: MetadataSchema):
        self.punct("{")
        branches = []
        seen = set()
        result = None
        while True:
            btok = self.word("branch")
            label_tok = self.ident("branch label")
            if label_tok.value in seen:
                raise DuplicateLabelError(f"duplicate branch label {label_tok.value!r}",
                                          label_tok.pos)
            seen.add(label_tok.value)
            self.punct("{")
            steps, bschema, bdepth = self.steps(schema, 0, closing="}")
            self.punct("}")
            if result is None:
                result = (bschema, bdepth)
            elif result != (bschema, bdepth):
                raise TypeMismatchError(
                    "all branches of a group must end with the same set depth and fields",
                    btok.pos)
            branches.append(Branch(label_tok.value, steps))
            if not self.at_word("branch"):
                break
        self.punct("}")
        return Group(tuple(branches)), result[0], result[1] + 1

    def strata(self, schema: MetadataSchema, with_ids: bool):
        self.punct("{")
        out = []
        seen = set()
        while True:
            self.word("stratum")
            label_tok = self.ident("stratum label")
            if label_tok.value in seen:
                raise DuplicateLabelError(f"duplicate stratum label {label_tok.value!r}",
                                          label_tok.pos)
            seen.add(label_tok.value)
            self.word("where")
            c = self.constraint(schema)
            if with_ids:
                self.word("take")
                out.append(QuotaStratum(label_tok.value, c, self.id_list()))
            else:
                out.append(Stratum(label_tok.value, c))
            if not self.at_word("stratum"):
                break
        self.punct("}")
        return tuple(out)

    # -- constraints ---------------------------------------------------------

    def constraint(self, schema: MetadataSchema | None):
        left = self.and_expr(schema)
        while self.at_word("or"):
            self.advance()
            left = Or(left, self.and_expr(schema))
        return left

    def and_expr(self, schema):
        left = self.not_expr(schema)
        while self.at_word("and"):
            self.advance()
            left = And(left, self.not_expr(schema))
        return left

    def not_expr(self, schema):
        if self.at_word("not"):
            self.advance()
            return Not(self.not_expr(schema))
        return self.cmp(schema)

    def cmp(self, schema):
        if self.at_punct("("):
            self.advance()
            e = self.constraint(schema)
            self.punct(")")
            return e
        left, lkind, ltok = self.operand(schema)
        if self.at_word("in"):
            in_tok = self.advance()
            if not isinstance(left, FieldRef):
                raise TypeMismatchError("the left side of 'in' must be a field", ltok.pos)
            items = self.literal_list()
            for lit, pos in items:
                if lkind is not None:
                    check_item(lkind, lit, pos)
            return InList(left, tuple(lit for lit, _ in items))
        op_tok = self.peek()
        if op_tok.kind != "op":
            self.fail(CMP_OPS + ("in",))
        self.advance()
        right, rkind, rtok = self.operand(schema)
        first = self.make_compare(op_tok, left, lkind, right, rkind)
        if self.peek().kind != "op":
            return first
        op2_tok = self.advance()
        if not isinstance(right, FieldRef):
            raise TypeMismatchError("the middle of a chained comparison must be a field",
                                    rtok.pos)
        third, tkind, _ = self.operand(schema)
        second = self.make_compare(op2_tok, right, rkind, third, tkind)
        return And(first, second)

    def make_compare(self, op_tok, left, lkind, right, rkind) -> Compare:
        if isinstance(left, FieldRef) and isinstance(right, FieldRef):
            raise TypeMismatchError("comparisons between two fields are not supported",
                                    op_tok.pos)
        if lkind is not None and rkind is not None:
            check_compare(op_tok.value, lkind, rkind, op_tok.pos)
        return Compare(op_tok.value, left, right)

    def operand(self, schema):
        """Return ``(operand, kind or None, token)``."""
        tok = self.peek()
        if tok.kind in ("int", "real", "string", "date"):
            self.advance()
            lit = Literal.of(tok.value)
            return lit, lit.kind, tok
        if tok.kind == "ident":
            if tok.value in ("true", "false"):
                self.advance()
                return Literal(tok.value == "true", FieldKind.BOOL), FieldKind.BOOL, tok
            if tok.value == "date" and self.peek(1).kind == "punct" and self.peek(1).value == "(":
                lit = self.date_call()
                return lit, FieldKind.DATE, tok
            if tok.value in RESERVED:
                self.fail(["field", "literal"])
            self.advance()
            if schema is None:
                return FieldRef(tok.value), None, tok
            if tok.value not in schema:
                raise UnknownFieldError(tok.value, tok.pos)
            return FieldRef(tok.value), schema.kind(tok.value), tok
        self.fail(["field", "literal", "("])

    def date_call(self) -> Literal:
        tok = self.advance()
        self.punct("(")
        y, _ = self.int_lit("year")
        self.punct(",")
        m, _ = self.int_lit("month")
        self.punct(",")
        d, _ = self.int_lit("day")
        self.punct(")")
        try:
            return Literal(dt.date(y, m, d), FieldKind.DATE)
        except ValueError:
            raise DslSyntaxError(f"invalid date date({y},{m},{d})", tok.pos) from None

    def literal_list(self):
        self.punct("[")
        items = []
        if not self.at_punct("]"):
            items.append(self.list_item())
            while self.at_punct(","):
                self.advance()
                items.append(self.list_item())
        self.punct("]")
        return items

    def list_item(self):
        tok = self.peek()
        lit, _, _ = self.operand(None)
        if not isinstance(lit, Literal):
            raise DslSyntaxError("list items must be literals", tok.pos)
        return lit, tok.pos


def parse_workflow(text: str) -> Workflow:
    """Parse and check a workflow document."""
    return _Parser(text).document()


def parse_constraint(text: str, schema: MetadataSchema | None = None):
    """Parse a standalone constraint; field references are checked when a
    schema is given."""
    p = _Parser(text)
    e = p.constraint(schema)
    if p.peek().kind != "eof":
        p.fail(["and", "or", "end of input"])
    return e
