from .dot import emit_dot, emit_workflow_dot
from .indicators import Indicator, auto_indicators
from .render import SCHEMA_VERSION, emit_json, emit_markdown, emit_report, report_object

__all__ = [
    "Indicator", "SCHEMA_VERSION", "auto_indicators", "emit_dot", "emit_json",
    "emit_markdown", "emit_report", "emit_workflow_dot", "report_object",
]
