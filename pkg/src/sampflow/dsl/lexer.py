"""Tokenizer for workflow documents."""
from __future__ import annotations

import bisect
import datetime as dt
import json
import re
from dataclasses import dataclass

from ..errors import DslSyntaxError, SourcePos

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<date>\d{4}-\d{2}-\d{2})(?![\w.])
  | (?P<number>[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<op><=|>=|==|!=|<|>)
  | (?P<punct>[{}\[\](),:])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, real, string, date, op, punct, eof
    value: object
    text: str
    pos: SourcePos


class SourceMap:
    """Offset to (line, column) conversion for one document."""

    def __init__(self, text: str):
        self.text = text
        self.starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def pos(self, offset: int) -> SourcePos:
        line = bisect.bisect_right(self.starts, offset) - 1
        return SourcePos(line + 1, offset - self.starts[line] + 1)

    def end(self) -> SourcePos:
        return self.pos(len(self.text))


def tokenize(text: str) -> list[Token]:
    smap = SourceMap(text)
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        m = _TOKEN_RE.match(text, i)
        if m is None:
            ch = text[i]
            what = "unterminated string" if ch == '"' else f"unexpected character {ch!r}"
            raise DslSyntaxError(what, smap.pos(i))
        kind = m.lastgroup
        raw = m.group(kind)
        pos = smap.pos(i)
        i = m.end()
        if kind == "ws":
            continue
        if kind == "date":
            try:
                value = dt.date(int(raw[:4]), int(raw[5:7]), int(raw[8:10]))
            except ValueError:
                raise DslSyntaxError(f"invalid date {raw}", pos) from None
            tokens.append(Token("date", value, raw, pos))
        elif kind == "number":
            if any(c in raw for c in ".eE"):
                value = float(raw)
                if value in (float("inf"), float("-inf")):
                    raise DslSyntaxError(f"real literal {raw} is out of range", pos)
                tokens.append(Token("real", value, raw, pos))
            else:
                value = int(raw)
                if not INT64_MIN <= value <= INT64_MAX:
                    raise DslSyntaxError(f"integer literal {raw} is out of range", pos)
                tokens.append(Token("int", value, raw, pos))
        elif kind == "string":
            try:
                value = json.loads(raw, strict=False)
            except json.JSONDecodeError:
                raise DslSyntaxError("invalid escape in string literal", pos) from None
            tokens.append(Token("string", value, raw, pos))
        else:
            tokens.append(Token(kind, raw, raw, pos))
    tokens.append(Token("eof", None, "", smap.end()))
    return tokens
