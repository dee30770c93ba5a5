"""Representativeness indicators computed over the edges of a trace.

Verdict rule shared by the tests: ``pass`` when the p-value reaches the
significance level, ``warn`` when it does not but a test assumption is
flagged (small KS sample, expected chi-square count below 5), ``fail``
otherwise. Cochran checks pass when the drawn size reaches the minimum.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from ..model import DataSet, FieldKind, numeric_view
from ..operators.trace import ExecutionTrace
from ..stats import (CochranParams, chi_square_gof, cochran_min_sample, coverage,
                     ks_two_sample)

SELECTION_KINDS = ("filter", "stratum", "random", "systematic", "manual")
COVERAGE_BINS = 10
SIGNIFICANCE = 0.05

PASS, WARN, FAIL, NA = "pass", "warn", "fail", "not-applicable"


@dataclass
class Indicator:
    kind: str
    edge: tuple[int, int]
    field: str | None
    payload: dict[str, Any] = field(default_factory=dict)
    verdict: str = NA
    explanation: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "edge": list(self.edge), "field": self.field,
                "payload": self.payload, "verdict": self.verdict,
                "explanation": self.explanation}


def cochran_indicator(edge: tuple[int, int], N: int, n: int, confidence: float,
                      margin: float) -> Indicator:
    if N < 1:
        return Indicator("cochran-check", edge, None, {"N": N, "n": n}, NA,
                         "input set is empty")
    params = CochranParams(N, confidence, margin)
    n_min = cochran_min_sample(params)
    payload = {"N": N, "confidence": confidence, "margin": margin, "p": params.p,
               "z": params.z, "n0": params.n0, "n_min": n_min, "n": n}
    if n >= n_min:
        return Indicator("cochran-check", edge, None, payload, PASS,
                         f"sample of {n} reaches the minimum of {n_min} for N={N}")
    return Indicator("cochran-check", edge, None, payload, FAIL,
                     f"sample of {n} is below the minimum of {n_min} for N={N}")


def _test_verdict(p: float, flagged: bool, alpha: float) -> str:
    if p >= alpha:
        return PASS
    return WARN if flagged else FAIL


def ks_indicator(edge, name: str, kind: FieldKind, sample: list, frame: list,
                 alpha: float = SIGNIFICANCE) -> Indicator:
    xs, s_missing = numeric_view(kind, sample)
    ys, f_missing = numeric_view(kind, frame)
    base = {"sample_missing": s_missing, "frame_missing": f_missing}
    if xs.size == 0 or ys.size == 0:
        return Indicator("ks-comparison", edge, name, base, NA,
                         "no non-missing values on one side")
    r = ks_two_sample(xs, ys)
    payload = {"D": r.D, "n1": r.n1, "n2": r.n2, "n_e": r.n_e, "p_value": r.p_value,
               "small_sample": r.small_sample, **base}
    verdict = _test_verdict(r.p_value, r.small_sample, alpha)
    note = " (fewer than 25 values, asymptotic p-value)" if r.small_sample else ""
    return Indicator("ks-comparison", edge, name, payload, verdict,
                     f"D={r.D:.4g}, p={r.p_value:.4g}{note}")


def chi_square_indicator(edge, name: str, sample: list, frame: list,
                         alpha: float = SIGNIFICANCE) -> Indicator:
    f_counts = Counter(v for v in frame if v is not None)
    s_counts = Counter(v for v in sample if v is not None)
    n = sum(s_counts.values())
    total = sum(f_counts.values())
    base = {"sample_missing": sum(v is None for v in sample),
            "frame_missing": sum(v is None for v in frame)}
    if len(f_counts) < 2 or n == 0:
        return Indicator("chi-square-comparison", edge, name,
                         {**base, "categories": len(f_counts), "n": n}, NA,
                         "needs at least two frame categories and a non-empty sample")
    cats = sorted(f_counts)
    observed = [s_counts.get(c, 0) for c in cats]
    expected = [n * f_counts[c] / total for c in cats]
    r = chi_square_gof(observed, expected)
    payload = {"statistic": r.statistic, "df": r.df, "p_value": r.p_value,
               "min_expected": r.min_expected, "low_expected": r.low_expected,
               "categories": len(cats), "n": n, **base}
    verdict = _test_verdict(r.p_value, r.low_expected, alpha)
    note = " (expected count below 5)" if r.low_expected else ""
    return Indicator("chi-square-comparison", edge, name, payload, verdict,
                     f"chi2={r.statistic:.4g}, df={r.df}, p={r.p_value:.4g}{note}")


def coverage_indicator(edge, name: str, kind: FieldKind, sample: list,
                       frame: list) -> Indicator:
    if all(v is None for v in frame):
        return Indicator("coverage", edge, name, {}, NA, "frame has no values")
    bins = COVERAGE_BINS if kind.is_orderable else None
    c = coverage(sample, frame, bins)
    payload = {"ratio": c.ratio, "frame_classes": c.frame_classes,
               "covered_classes": c.covered_classes, "binning":
               f"equal-width({COVERAGE_BINS})" if bins else "distinct",
               "sample_missing": c.sample_missing, "frame_missing": c.frame_missing}
    verdict = PASS if c.covered_classes == c.frame_classes else WARN
    return Indicator("coverage", edge, name, payload, verdict,
                     f"{c.covered_classes} of {c.frame_classes} classes covered")


def _delta(a, b):
    if a is None or b is None or isinstance(a, str):
        return None
    return a - b


def descriptive_delta(edge, name: str, sample_summary: dict, frame_summary: dict) -> Indicator:
    payload = {}
    for key in ("mean", "median", "std"):
        payload[key] = {"sample": sample_summary.get(key), "frame": frame_summary.get(key),
                        "delta": _delta(sample_summary.get(key), frame_summary.get(key))}
    return Indicator("descriptive-delta", edge, name, payload, NA,
                     "informational; practical significance is judged by the analyst")


def auto_indicators(trace: ExecutionTrace, datasets: Mapping[int, DataSet],
                    fields_of_interest: Iterable[str], confidence: float = 0.95,
                    margin: float = 0.05, significance: float = SIGNIFICANCE
                    ) -> list[Indicator]:
    """Indicators for every random edge, selection edge and the final sample."""
    fields = list(fields_of_interest)
    out: list[Indicator] = []
    for parent, child, node in trace.edges():
        if node.kind not in SELECTION_KINDS:
            continue
        edge = (parent, child)
        if node.kind == "random":
            out.append(cochran_indicator(edge, trace.node(parent).size, node.size,
                                         confidence, margin))
        src, dst = datasets[parent], datasets[child]
        for name in fields:
            if name not in dst.schema:
                continue
            kind = dst.schema.kind(name)
            sample, frame = dst.values(name), src.values(name)
            if kind is FieldKind.TEXT or kind is FieldKind.BOOL:
                out.append(chi_square_indicator(edge, name, sample, frame, significance))
            else:
                out.append(ks_indicator(edge, name, kind, sample, frame, significance))
    if trace.nodes:
        frame = datasets[0]
        for final_id in trace.final:
            edge = (0, final_id)
            final = datasets[final_id]
            for name in fields:
                if name not in frame.schema:
                    continue
                kind = frame.schema.kind(name)
                out.append(coverage_indicator(edge, name, kind, final.values(name),
                                              frame.values(name)))
                fs, ss = trace.node(0).summaries, trace.node(final_id).summaries
                if name in fs and name in ss and kind.is_numeric:
                    out.append(descriptive_delta(edge, name, ss[name], fs[name]))
    return out
