"""Find a distance matched to a channel, or prove that none exists.

Each column ``j`` of ``O-P`` yields a chain on the pair variables ``d(i, j)``:
equal ranks give equalities, lower ranks give strictly smaller distances.
Equalities are contracted with a union-find, the strict edges between the
resulting classes form a digraph, and the channel is metrizable exactly when
no strict edge lies inside a class and that digraph is acyclic. Canonical
values are longest-path lengths from the diagonal class ``ZERO``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Hashable, Iterable, List, Literal, Optional, Tuple, Union

import networkx as nx

from .errors import DimensionError, MalformedCertificate, ValidationError
from .orders import Channel, DistanceMatrix, WeakOrderMatrix, to_metric, weak_order
from .utils import dense_ranks, log_fields

Mode = Literal["distance", "semimetric", "metric"]
Relation = Literal["<", "="]
MODES: Tuple[Mode, ...] = ("distance", "semimetric", "metric")

ZERO = "ZERO"


@dataclass(frozen=True, order=True)
class PairVar:
    """Unordered pair ``{i, j}`` with ``i < j`` (0-indexed)."""

    i: int
    j: int

    @classmethod
    def of(cls, a: int, b: int) -> "PairVar":
        if a == b:
            raise ValueError("pair variables need distinct points")
        return cls(min(a, b), max(a, b))

    def label(self) -> str:
        return f"{{{self.i + 1},{self.j + 1}}}"


Node = Union[PairVar, str]


def node_of(row: int, column: int) -> Node:
    """Variable holding ``d(row, column)``; the diagonal maps to ``ZERO``."""
    return ZERO if row == column else PairVar.of(row, column)


@dataclass(frozen=True)
class Step:
    """``d(rows[0], column) rel d(rows[1], column)``, read off column ``column`` of ``O-P``."""

    source: Node
    rel: Relation
    target: Node
    column: int
    rows: Tuple[int, int]


@dataclass
class ConstraintGraph:
    n: int
    mode: Mode
    equalities: List[Step] = field(default_factory=list)
    stricts: List[Step] = field(default_factory=list)
    zero_steps: List[Step] = field(default_factory=list)
    diagonal_ok: bool = True
    diagonal_strict: bool = True
    bad_diagonal: Optional[int] = None
    diagonal_tie: Optional[Tuple[int, int]] = None

    def nodes(self) -> List[Node]:
        return [ZERO] + [PairVar(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def all_steps(self) -> List[Step]:
        return [*self.zero_steps, *self.equalities, *self.stricts]


@dataclass(frozen=True)
class Certificate:
    """Why no matched distance exists.

    ``cycle``: a closed chain of derivable steps with at least one ``<``.
    ``diagonal``: ``index`` has ``O-P[index][index] != 1``, or (semimetric and
    metric modes) ``witness`` is an off-diagonal entry of rank 1.
    """

    kind: Literal["cycle", "diagonal"]
    steps: Tuple[Step, ...] = ()
    index: Optional[int] = None
    witness: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class Matched:
    distance: DistanceMatrix
    class_values: Dict[FrozenSet[PairVar], int]
    canonical: DistanceMatrix

    @property
    def feasible(self) -> bool:
        return True


@dataclass(frozen=True)
class Infeasible:
    certificate: Certificate

    @property
    def feasible(self) -> bool:
        return False


MetrizationResult = Union[Matched, Infeasible]


class UnionFind:
    """Union-find with path compression and union by rank."""

    def __init__(self, elements: Iterable[Hashable]) -> None:
        self.parent = {el: el for el in elements}
        self.rank = dict.fromkeys(self.parent, 0)

    def find(self, item: Hashable) -> Hashable:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: Hashable, b: Hashable) -> None:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return
        if self.rank[root_a] < self.rank[root_b]:
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        if self.rank[root_a] == self.rank[root_b]:
            self.rank[root_a] += 1


def _column_step(ranks: WeakOrderMatrix, column: int, first: int, second: int) -> Step:
    """Step comparing rows ``first`` and ``second`` of ``column``, oriented small to large."""

    a, b = ranks[first, column], ranks[second, column]
    if a > b:
        first, second = second, first
    rel: Relation = "=" if a == b else "<"
    return Step(node_of(first, column), rel, node_of(second, column), column, (first, second))


def extract_constraints(channel: Channel, mode: Mode = "distance") -> ConstraintGraph:
    """Equalities and strict edges between pair variables implied by ``O-P``."""

    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}")
    ranks = weak_order(channel, "descending")
    n = channel.n
    graph = ConstraintGraph(n=n, mode=mode)
    for j in range(n):
        if ranks[j, j] != 1:
            graph.diagonal_ok = False
            if graph.bad_diagonal is None:
                graph.bad_diagonal = j
        for i in range(n):
            if i != j and ranks[i, j] == 1:
                graph.diagonal_strict = False
                if graph.diagonal_tie is None:
                    graph.diagonal_tie = (i, j)
    for j in range(n):
        others = [i for i in range(n) if i != j]
        for i in others:
            step = _column_step(ranks, j, j, i)
            if step.rel == "<" and step.source == ZERO:
                graph.zero_steps.append(step)
            elif step.rel == "=" and mode == "distance":
                graph.zero_steps.append(step)
        for pos, i in enumerate(others):
            for k in others[pos + 1 :]:
                step = _column_step(ranks, j, i, k)
                (graph.equalities if step.rel == "=" else graph.stricts).append(step)
    log_fields(
        logging.DEBUG,
        "constraints_extracted",
        n=n,
        mode=mode,
        equalities=len(graph.equalities),
        stricts=len(graph.stricts),
        diagonal_ok=graph.diagonal_ok,
        diagonal_strict=graph.diagonal_strict,
    )
    return graph


def _equality_path(equalities: nx.Graph, start: Node, goal: Node) -> List[Step]:
    """Chain of ``=`` steps leading from ``start`` to ``goal`` inside one class."""

    if start == goal:
        return []
    path = nx.shortest_path(equalities, start, goal)
    steps: List[Step] = []
    for a, b in zip(path, path[1:]):
        step: Step = equalities.edges[a, b]["step"]
        if step.source != a:
            step = Step(a, "=", b, step.column, (step.rows[1], step.rows[0]))
        steps.append(step)
    return steps


def _rotate(steps: List[Step]) -> Tuple[Step, ...]:
    """Start a cycle at its smallest pair variable for stable output."""

    def key(step: Step) -> Tuple[int, PairVar]:
        return (0, step.source) if isinstance(step.source, PairVar) else (1, PairVar(-1, -1))

    start = min(range(len(steps)), key=lambda idx: key(steps[idx]))
    return tuple(steps[start:] + steps[:start])


def metrize(channel: Channel, mode: Mode = "distance") -> MetrizationResult:
    """Matched distance with canonical integer values, or a certificate of infeasibility."""

    graph = extract_constraints(channel, mode)
    log_fields(logging.INFO, "metrize_start", n=channel.n, mode=mode)
    if not graph.diagonal_ok:
        return _infeasible(Certificate(kind="diagonal", index=graph.bad_diagonal))
    if mode != "distance" and not graph.diagonal_strict:
        return _infeasible(
            Certificate(kind="diagonal", index=None, witness=graph.diagonal_tie)
        )

    equal_graph = nx.Graph()
    equal_graph.add_nodes_from(graph.nodes())
    classes = UnionFind(graph.nodes())
    for step in [s for s in graph.zero_steps if s.rel == "="] + graph.equalities:
        if not equal_graph.has_edge(step.source, step.target):
            equal_graph.add_edge(step.source, step.target, step=step)
        classes.union(step.source, step.target)

    strict_steps = [s for s in graph.zero_steps if s.rel == "<"] + graph.stricts
    for step in strict_steps:
        if classes.find(step.source) == classes.find(step.target):
            cycle = [step, *_equality_path(equal_graph, step.target, step.source)]
            return _infeasible(Certificate(kind="cycle", steps=_rotate(cycle)))

    order = nx.DiGraph()
    order.add_nodes_from(dict.fromkeys(classes.find(node) for node in graph.nodes()))
    for step in strict_steps:
        a, b = classes.find(step.source), classes.find(step.target)
        if not order.has_edge(a, b):
            order.add_edge(a, b, step=step)
    try:
        class_cycle = nx.find_cycle(order)
    except nx.NetworkXNoCycle:
        class_cycle = None
    if class_cycle is not None:
        steps: List[Step] = []
        hops = [order.edges[a, b]["step"] for a, b in class_cycle]
        for current, following in zip(hops, hops[1:] + hops[:1]):
            steps.append(current)
            steps.extend(_equality_path(equal_graph, current.target, following.source))
        return _infeasible(Certificate(kind="cycle", steps=_rotate(steps)))

    zero_class = classes.find(ZERO)
    level: Dict[Hashable, int] = {}
    for node in nx.topological_sort(order):
        preds = [level[p] + 1 for p in order.predecessors(node)]
        level[node] = max(preds, default=0 if node == zero_class else 1)

    members: Dict[Hashable, List[PairVar]] = {}
    for node in graph.nodes():
        if isinstance(node, PairVar):
            members.setdefault(classes.find(node), []).append(node)
    class_values = {frozenset(pairs): level[root] for root, pairs in members.items()}

    n = channel.n
    values = {pair: level[classes.find(pair)] for pair in graph.nodes() if isinstance(pair, PairVar)}
    canonical = DistanceMatrix(
        tuple(
            tuple(Fraction(0) if i == j else Fraction(values[PairVar.of(i, j)]) for j in range(n))
            for i in range(n)
        )
    )
    distance = to_metric(canonical) if mode == "metric" else canonical
    log_fields(logging.INFO, "metrize_done", feasible=True, classes=len(class_values))
    return Matched(distance=distance, class_values=class_values, canonical=canonical)


def _infeasible(certificate: Certificate) -> Infeasible:
    log_fields(
        logging.INFO,
        "metrize_done",
        feasible=False,
        kind=certificate.kind,
        steps=len(certificate.steps),
    )
    return Infeasible(certificate)


def _check_point(value: int, n: int) -> None:
    if not isinstance(value, int) or not 0 <= value < n:
        raise MalformedCertificate(f"index {value!r} outside 0..{n - 1}")


def _step_holds(ranks: WeakOrderMatrix, step: Step) -> bool:
    first, second = step.rows
    column = step.column
    if step.source != node_of(first, column) or step.target != node_of(second, column):
        return False
    a, b = ranks[first, column], ranks[second, column]
    return a == b if step.rel == "=" else a < b


def check_certificate(channel: Channel, certificate: Certificate) -> bool:
    """Re-derive every step from ``O-P`` and confirm the statement is contradictory."""

    n = channel.n
    ranks = weak_order(channel, "descending")
    if certificate.kind == "diagonal":
        if certificate.index is not None:
            _check_point(certificate.index, n)
            return ranks[certificate.index, certificate.index] != 1
        if certificate.witness is None:
            raise MalformedCertificate("diagonal certificate without index or witness")
        i, j = certificate.witness
        _check_point(i, n)
        _check_point(j, n)
        return i != j and ranks[i, j] == 1
    if certificate.kind != "cycle":
        raise MalformedCertificate(f"unknown certificate kind {certificate.kind!r}")
    steps = certificate.steps
    if not steps:
        raise MalformedCertificate("empty cycle")
    for step in steps:
        _check_point(step.column, n)
        for row in step.rows:
            _check_point(row, n)
        if step.rel not in ("<", "="):
            raise MalformedCertificate(f"unknown relation {step.rel!r}")
    if not all(_step_holds(ranks, step) for step in steps):
        return False
    closed = all(a.target == b.source for a, b in zip(steps, steps[1:] + steps[:1]))
    return closed and any(step.rel == "<" for step in steps)


def cycle_pairs(certificate: Certificate) -> List[Node]:
    """Variables visited by a cycle certificate, in order."""
    return [step.source for step in certificate.steps]


def describe_certificate(certificate: Certificate) -> str:
    """Human-readable chain such as ``{1,2} < {1,3} < {2,3} < {1,2}``."""

    def label(node: Node) -> str:
        return "0" if node == ZERO else node.label()  # type: ignore[union-attr]

    if certificate.kind == "diagonal":
        if certificate.index is not None:
            point = certificate.index + 1
            return f"O-P[{point}][{point}] != 1: d({point},{point}) cannot be 0"
        i, j = certificate.witness or (0, 0)
        return f"O-P[{i + 1}][{j + 1}] = 1 off the diagonal: d({i + 1},{j + 1}) would be 0"
    parts = [label(certificate.steps[0].source)]
    for step in certificate.steps:
        parts.extend([step.rel, label(step.target)])
    return " ".join(parts)


def brute_force_metrizable(channel: Channel, mode: Mode = "distance") -> Optional[DistanceMatrix]:
    """Try every weak order of the pair variables (small ``n`` only)."""

    n = channel.n
    pairs = [PairVar(i, j) for i in range(n) for j in range(i + 1, n)]
    if len(pairs) > 6:
        raise DimensionError("brute-force metrization is limited to n <= 4")
    target = weak_order(channel, "descending")
    wanted = [[target[i, j] for i in range(n)] for j in range(n)]
    slot = {(i, j): pairs.index(PairVar.of(i, j)) for i in range(n) for j in range(n) if i != j}
    low = 0 if mode == "distance" else 1
    for values in product(range(low, len(pairs) + 1), repeat=len(pairs)):
        if all(
            dense_ranks([0 if i == j else values[slot[i, j]] for i in range(n)]) == wanted[j]
            for j in range(n)
        ):
            candidate = DistanceMatrix(
                tuple(
                    tuple(Fraction(0) if i == j else Fraction(values[slot[i, j]]) for j in range(n))
                    for i in range(n)
                )
            )
            return to_metric(candidate) if mode == "metric" else candidate
    return None


__all__ = [
    "Certificate",
    "ConstraintGraph",
    "Infeasible",
    "MODES",
    "Matched",
    "MetrizationResult",
    "Mode",
    "PairVar",
    "Step",
    "UnionFind",
    "ZERO",
    "brute_force_metrizable",
    "check_certificate",
    "cycle_pairs",
    "describe_certificate",
    "extract_constraints",
    "metrize",
    "node_of",
]
