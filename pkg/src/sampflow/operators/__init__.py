from .engine import ExecutionResult, apply_seed_override, default_summary_fields, execute
from .grouping import (check_partition, cluster_op, grouping_op, quota_op,
                       stratified_random_op, stratum_seed)
from .selection import filter_op, manual_op, random_op, systematic_op
from .setops import add_metadata_op, intersection_op, union_op
from .trace import ExecutionTrace, GroupRecord, TraceNode, Tracer

__all__ = [
    "ExecutionResult", "ExecutionTrace", "GroupRecord", "TraceNode", "Tracer",
    "add_metadata_op", "apply_seed_override", "check_partition", "cluster_op",
    "default_summary_fields", "execute", "filter_op", "grouping_op",
    "intersection_op", "manual_op", "quota_op", "random_op", "stratified_random_op",
    "stratum_seed", "systematic_op", "union_op",
]
