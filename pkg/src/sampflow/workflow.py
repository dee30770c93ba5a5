"""Workflow AST: an input declaration followed by a chain of operator steps.

Steps are frozen dataclasses, so two workflows compare equal exactly
when they are structurally identical.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from .model import FieldKind, MetadataSchema

if TYPE_CHECKING:
    from .dsl.expr import Expr


@dataclass(frozen=True)
class InputDecl:
    kind: str  # loader kind: csv | json
    path: str
    schema: MetadataSchema


@dataclass(frozen=True)
class Filter:
    constraint: Expr


@dataclass(frozen=True)
class Random:
    n: int
    seed: int


@dataclass(frozen=True)
class Systematic:
    n: int
    order_by: str
    direction: str  # asc | desc
    seed: int


@dataclass(frozen=True)
class Manual:
    ids: tuple[str, ...]


@dataclass(frozen=True)
class Branch:
    label: str
    steps: tuple["Step", ...]


@dataclass(frozen=True)
class Group:
    branches: tuple[Branch, ...]


@dataclass(frozen=True)
class Stratum:
    label: str
    constraint: Expr


@dataclass(frozen=True)
class Stratified:
    strata: tuple[Stratum, ...]
    take: int
    seed: int


@dataclass(frozen=True)
class Cluster:
    strata: tuple[Stratum, ...]
    pick: int
    seed: int


@dataclass(frozen=True)
class QuotaStratum:
    label: str
    constraint: Expr
    ids: tuple[str, ...]


@dataclass(frozen=True)
class Quota:
    strata: tuple[QuotaStratum, ...]


@dataclass(frozen=True)
class Union_:
    pass


@dataclass(frozen=True)
class Intersection:
    pass


@dataclass(frozen=True)
class AddMetadata:
    kind: str
    path: str
    join: str
    # declared new fields; None means "every other column, as text"
    fields: tuple[tuple[str, FieldKind], ...] | None = None


Step = Union[Filter, Random, Systematic, Manual, Group, Stratified, Cluster,
             Quota, Union_, Intersection, AddMetadata]

SEEDED = (Random, Systematic, Stratified, Cluster)


@dataclass(frozen=True)
class Workflow:
    input: InputDecl
    steps: tuple[Step, ...] = ()


def iter_steps(steps):
    """Pre-order walk over steps, descending into group branches."""
    for step in steps:
        yield step
        if isinstance(step, Group):
            for branch in step.branches:
                yield from iter_steps(branch.steps)
