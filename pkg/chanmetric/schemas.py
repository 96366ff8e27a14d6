"""Pydantic mirrors of command output, used for ``--json`` and certificate files.

Rationals travel as reduced ``p/q`` strings and points as 1-based integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from .errors import MalformedCertificate
from .metrization import ZERO, Certificate, Node, PairVar, Step
from .utils import format_rat

Grid = List[List[str]]


def rat_grid(rows: Sequence[Sequence[Fraction]]) -> Grid:
    return [[format_rat(value) for value in row] for row in rows]


def rat_list(values: Sequence[Fraction]) -> List[str]:
    return [format_rat(value) for value in values]


class StepModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    source: List[int] = Field(alias="from", min_length=2, max_length=2)
    rel: Literal["<", "="]
    to: List[int] = Field(min_length=2, max_length=2)
    column: int
    rows: List[int] = Field(min_length=2, max_length=2)


class CertificateModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["cycle", "diagonal"]
    steps: List[StepModel] = Field(default_factory=list)
    index: Optional[int] = None
    witness: Optional[List[int]] = None
    text: Optional[str] = None


class MetrizeOutput(BaseModel):
    feasible: bool
    mode: str
    distance: Optional[Grid] = None
    class_values: Optional[List[Dict[str, Any]]] = None
    certificate: Optional[CertificateModel] = None


class OrderOutput(BaseModel):
    direction: str
    ranks: List[List[int]]


class EquivOutput(BaseModel):
    kind: str
    equivalent: bool
    witness: Optional[Dict[str, Any]] = None


class MatchedOutput(BaseModel):
    matched: bool
    oracle: Optional[bool] = None
    codes_checked: Optional[int] = None
    witness: Optional[Dict[str, Any]] = None


class DecodeOutput(BaseModel):
    kind: str
    code: List[int]
    received: int
    decoded: List[int]


class GenOutput(BaseModel):
    kind: str
    n: int
    seed: int
    entries: Grid


class ScalingModel(BaseModel):
    m: int
    r: str
    k: str
    x_prime: List[str]
    sym: List[str]


class PatternOutput(BaseModel):
    kind: str
    n: int
    x: List[str]
    cap: List[str]
    realizable: bool
    realization: Optional[List[str]] = None
    scaling: Optional[ScalingModel] = None


class OptimalityModel(BaseModel):
    N_star: int
    incumbent: int
    nodes_explored: int
    method: str


class EmbeddingOutput(BaseModel):
    kind: Literal["generators", "images"]
    n: int
    N: int
    m: Optional[str] = None
    k: Optional[str] = None
    words: List[str]
    optimality: Optional[OptimalityModel] = None


class ViolationModel(BaseModel):
    at: str
    target: str
    expected: str
    observed: int


class VerifyOutput(BaseModel):
    ok: bool
    m: Optional[str] = None
    k: Optional[str] = None
    order_preserved: bool
    injective: bool
    matches_declared: bool
    violations: List[ViolationModel] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


def _pair(node: Node, column: int) -> List[int]:
    if node == ZERO:
        return [column + 1, column + 1]
    assert isinstance(node, PairVar)
    return [node.i + 1, node.j + 1]


def _node(pair: Sequence[int]) -> Node:
    a, b = pair
    if a == b:
        return ZERO
    if a < 1 or b < 1:
        raise MalformedCertificate(f"pair {list(pair)} must use 1-based points")
    return PairVar.of(a - 1, b - 1)


def certificate_to_model(certificate: Certificate, text: Optional[str] = None) -> CertificateModel:
    steps = [
        StepModel(
            source=_pair(step.source, step.column),
            rel=step.rel,
            to=_pair(step.target, step.column),
            column=step.column + 1,
            rows=[step.rows[0] + 1, step.rows[1] + 1],
        )
        for step in certificate.steps
    ]
    return CertificateModel(
        kind=certificate.kind,
        steps=steps,
        index=None if certificate.index is None else certificate.index + 1,
        witness=None if certificate.witness is None else [p + 1 for p in certificate.witness],
        text=text,
    )


def certificate_from_model(model: CertificateModel) -> Certificate:
    steps = tuple(
        Step(
            source=_node(step.source),
            rel=step.rel,
            target=_node(step.to),
            column=step.column - 1,
            rows=(step.rows[0] - 1, step.rows[1] - 1),
        )
        for step in model.steps
    )
    witness = None
    if model.witness is not None:
        if len(model.witness) != 2:
            raise MalformedCertificate("diagonal witness needs two points")
        witness = (model.witness[0] - 1, model.witness[1] - 1)
    return Certificate(
        kind=model.kind,
        steps=steps,
        index=None if model.index is None else model.index - 1,
        witness=witness,
    )


def dump(model: BaseModel) -> str:
    """Deterministic JSON: aliases, sorted keys, two-space indent."""

    return json.dumps(model.model_dump(by_alias=True, exclude_none=True), indent=2, sort_keys=True)


__all__ = [
    "CertificateModel",
    "DecodeOutput",
    "EmbeddingOutput",
    "EquivOutput",
    "GenOutput",
    "MatchedOutput",
    "MetrizeOutput",
    "OptimalityModel",
    "OrderOutput",
    "PatternOutput",
    "ScalingModel",
    "StepModel",
    "VerifyOutput",
    "ViolationModel",
    "certificate_from_model",
    "certificate_to_model",
    "dump",
    "rat_grid",
    "rat_list",
]
