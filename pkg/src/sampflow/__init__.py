"""Multistage sampling workflows: a textual DSL, a deterministic engine,
and representativeness indicators for every intermediate set."""

from .dsl import parse_constraint, parse_workflow, pretty_print
from .model import Artifact, DataSet, FieldKind, MetadataSchema, dataset_summary, validate_dataset
from .operators import execute

__version__ = "0.1.0"

__all__ = [
    "Artifact", "DataSet", "FieldKind", "MetadataSchema", "dataset_summary", "execute",
    "parse_constraint", "parse_workflow", "pretty_print", "validate_dataset",
]
