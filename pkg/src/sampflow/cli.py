"""Command-line entry point: ``sampflow validate | run | diagram``.

Exit codes: 0 success, 1 execution error, 2 parse or usage error,
3 when ``--strict`` is set and an indicator fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from dataclasses import dataclass

from .dsl import parse_workflow
from .errors import ParseError, SampflowError
from .model import DataSet, FieldKind
from .operators import default_summary_fields, execute
from .report import auto_indicators, emit_dot, emit_json, emit_markdown, emit_workflow_dot

EXIT_OK, EXIT_EXEC, EXIT_PARSE, EXIT_STRICT = 0, 1, 2, 3
FORMATS = ("json", "md", "dot")
OUTPUT_NAMES = {"json": "report.json", "md": "report.md", "dot": "workflow.dot"}


@dataclass(frozen=True)
class RunConfig:
    workflow_path: str
    output_dir: str
    formats: tuple[str, ...] = FORMATS
    fields_of_interest: tuple[str, ...] | None = None
    confidence: float = 0.95
    margin: float = 0.05
    seed_override: int | None = None
    sample_export: str | None = None
    strict: bool = False

    def __post_init__(self):
        if not self.formats:
            raise ValueError("at least one output format is required")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ValueError(f"unknown format(s): {', '.join(bad)}")
        if not 0 < self.confidence < 1:
            raise ValueError("confidence must lie in (0, 1)")
        if not 0 < self.margin < 1:
            raise ValueError("margin must lie in (0, 1)")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def diagnostic(path: str, exc: ParseError) -> str:
    where = f"{path}:{exc.pos.line}:{exc.pos.column}" if exc.pos else path
    return f"{where}: {exc.kind}: {exc.message}"


def load_workflow(path: str):
    """Parse ``path``; return (workflow, None) or (None, diagnostic)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        return None, f"{path}: io-error: {exc}"
    try:
        return parse_workflow(text), None
    except ParseError as exc:
        return None, diagnostic(path, exc)


def write_atomic(path: str, text: str, newline: str | None = None) -> None:
    """Write via a temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".sampflow-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline=newline) as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_value(kind: FieldKind, v) -> str:
    if v is None:
        return ""
    if kind is FieldKind.BOOL:
        return "true" if v else "false"
    if kind is FieldKind.DATE:
        return v.isoformat()
    if kind is FieldKind.REAL:
        return repr(float(v))
    return str(v)


def sample_csv(d: DataSet) -> str:
    """RFC 4180 text (CRLF line ends) with columns in schema order."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    entries = d.schema.entries
    w.writerow([n for n, _ in entries])
    for a in d.members:
        w.writerow([format_value(k, a.values[n]) for n, k in entries])
    return buf.getvalue()


def cmd_validate(path: str) -> int:
    w, diag = load_workflow(path)
    if w is None:
        _err(diag)
        return EXIT_PARSE
    print("OK")
    return EXIT_OK


def cmd_run(cfg: RunConfig) -> int:
    w, diag = load_workflow(cfg.workflow_path)
    if w is None:
        _err(diag)
        return EXIT_PARSE
    base = os.path.dirname(os.path.abspath(cfg.workflow_path))
    fields = (list(cfg.fields_of_interest) if cfg.fields_of_interest is not None
              else default_summary_fields(w))
    try:
        result = execute(w, base_dir=base, seed_override=cfg.seed_override,
                         summary_fields=fields)
        known = {n for node in result.trace.nodes for n, _ in node.fields}
        unknown = [f for f in fields if f not in known]
        if unknown:
            raise SampflowError(f"unknown field(s) of interest: {', '.join(unknown)}")
        indicators = auto_indicators(result.trace, result.datasets, fields,
                                     cfg.confidence, cfg.margin)
        outputs = {}
        if "json" in cfg.formats:
            outputs["json"] = emit_json(result.trace, indicators)
        if "md" in cfg.formats:
            outputs["md"] = emit_markdown(result.trace, indicators)
        if "dot" in cfg.formats:
            outputs["dot"] = emit_dot(result.trace)
        export = None
        if cfg.sample_export is not None:
            if result.final.depth != 0:
                raise SampflowError(
                    f"cannot export a set of depth {result.final.depth}; "
                    "end the workflow with union or intersection")
            export = sample_csv(result.final)
    except (SampflowError, OSError) as exc:
        kind = getattr(exc, "kind", "io-error")
        _err(f"{cfg.workflow_path}: {kind}: {exc}")
        return EXIT_EXEC
    try:
        for fmt, text in outputs.items():
            write_atomic(os.path.join(cfg.output_dir, OUTPUT_NAMES[fmt]), text)
        if export is not None:
            write_atomic(cfg.sample_export, export, newline="")
    except OSError as exc:
        _err(f"io-error: {exc}")
        return EXIT_EXEC
    final = result.final
    size = len(final) if final.depth == 0 else sum(len(x) for x in final.leaves())
    print(f"{len(result.trace.nodes)} sets traced; final sample: {size} artifacts")
    failed = [i for i in indicators if i.verdict == "fail"]
    for i in failed:
        _err(f"fail: {i.kind} Set #{i.edge[0]} -> Set #{i.edge[1]}"
             + (f" [{i.field}]" if i.field else "") + f": {i.explanation}")
    if cfg.strict and failed:
        return EXIT_STRICT
    return EXIT_OK


def cmd_diagram(path: str, out: str) -> int:
    w, diag = load_workflow(path)
    if w is None:
        _err(diag)
        return EXIT_PARSE
    try:
        write_atomic(out, emit_workflow_dot(w))
    except OSError as exc:
        _err(f"io-error: {exc}")
        return EXIT_EXEC
    return EXIT_OK


def _probability(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 1")
    return v


def _formats(text: str) -> tuple[str, ...]:
    items = tuple(dict.fromkeys(s.strip() for s in text.split(",") if s.strip()))
    bad = [f for f in items if f not in FORMATS]
    if not items or bad:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}")
    return items


def _fields(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not -(1 << 63) <= v < (1 << 64):
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sampflow",
                                 description="Run and analyse multistage sampling workflows.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse and schema-check a workflow file")
    v.add_argument("file")

    r = sub.add_parser("run", help="execute a workflow and write reports")
    r.add_argument("file")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--format", type=_formats, default=FORMATS,
                   help="comma-separated subset of json,md,dot (default: all)")
    r.add_argument("--fields", type=_fields, default=None,
                   help="fields of interest (default: non-key, non-text input fields)")
    r.add_argument("--confidence", type=_probability, default=0.95)
    r.add_argument("--margin", type=_probability, default=0.05)
    r.add_argument("--strict", action="store_true",
                   help="exit 3 when any indicator fails")
    r.add_argument("--seed-override", type=_seed, default=None,
                   help="replace every seed, deriving one per seeded step")
    r.add_argument("--export-sample", default=None, metavar="PATH",
                   help="write the final sample as CSV")

    d = sub.add_parser("diagram", help="write the static workflow shape as DOT")
    d.add_argument("file")
    d.add_argument("--out", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args.file)
    if args.command == "diagram":
        return cmd_diagram(args.file, args.out)
    cfg = RunConfig(args.file, args.out, args.format, args.fields, args.confidence,
                    args.margin, args.seed_override, args.export_sample, args.strict)
    return cmd_run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
