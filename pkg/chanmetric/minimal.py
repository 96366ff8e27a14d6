"""Smallest Hamming cube embedding inside a decoding-equivalence class.

For a weight ``delta`` the reachable symmetric-difference vectors are ``T x``
with ``x`` a nonnegative integer minterm vector and ``T[J][I] = 1`` iff
``|I & J|`` is odd. The embedding dimension is ``sum(x)``, so the task is the
integer program

    minimise sum(x)  subject to  T x has the weak order of delta, T x >= 1.

Ties between optima are broken towards the lexicographically smallest ``x``
in mask order. The branch-and-bound folds that tie-break into one objective:
inside the budget ``sum(x) <= N0`` every ``x_I < B = N0 + 1``, so
``sum(x) B^K + sum_i x_i B^(K-1-i)`` orders integer points by
``(sum(x), x_1, x_2, ...)``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

from .embedding import CubeWord, LinearEmbedding, PointEmbedding, generators_of, padded_weight
from .errors import GuardExceeded, ValidationError
from .orders import DistanceMatrix, classify_distance
from .patterns import SubsetVector, mask_label, mask_of, masks, realize, scale_shift, solve_sym, sym_transform
from .simplex import Row, solve_lp
from .utils import dense_ranks, log_fields, popcount

MINIMIZE_MAX_N = 4
POINTS_MAX_N = 4


def sym_matrix(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Matrix of :func:`sym_transform`, rows ``J`` and columns ``I`` in mask order."""

    return tuple(tuple(popcount(i & j) % 2 for i in masks(n)) for j in masks(n))


def inverse_sym_matrix(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    scale = Fraction(1, 1 << (n - 1))
    return tuple(
        tuple(scale * (1 if popcount(i & j) % 2 else -1) for j in masks(n)) for i in masks(n)
    )


@dataclass(frozen=True)
class OrderCone:
    """Equality classes of masks, smallest value first."""

    n: int
    classes: Tuple[Tuple[int, ...], ...]

    def contains(self, vector: SubsetVector) -> bool:
        if vector.n != self.n or not vector.is_positive():
            return False
        return cone_of(vector).classes == self.classes

    def labels(self) -> List[List[str]]:
        return [[mask_label(mask) for mask in group] for group in self.classes]


def cone_of(delta: SubsetVector) -> OrderCone:
    if not delta.is_positive():
        raise ValidationError("cone of a weight needs strictly positive entries")
    groups: Dict[Fraction, List[int]] = {}
    for mask, value in delta.items():
        groups.setdefault(value, []).append(mask)
    return OrderCone(delta.n, tuple(tuple(groups[value]) for value in sorted(groups)))


def _difference(a: Sequence[int], b: Sequence[int]) -> List[int]:
    return [x - y for x, y in zip(a, b)]


@dataclass(frozen=True)
class IlpInstance:
    """Rows on the minterm vector ``x`` (one variable per mask); ``x >= 0`` integer."""

    n: int
    equalities: Tuple[Row, ...]
    stricts: Tuple[Row, ...]
    positivity: Tuple[Row, ...]

    @property
    def size(self) -> int:
        return (1 << self.n) - 1

    def rows(self) -> List[Row]:
        return [*self.equalities, *self.stricts, *self.positivity]

    def feasible(self, x: SubsetVector) -> bool:
        if not (x.is_integral() and x.is_nonnegative()):
            return False
        return all(row.holds(x.values) for row in self.rows())


def _chain_rows(
    matrix: Sequence[Sequence[int]], classes: Sequence[Sequence[int]]
) -> Tuple[List[Row], List[Row]]:
    """Equal rows inside each class, ``>= 1`` gaps between consecutive classes."""

    equalities: List[Row] = []
    stricts: List[Row] = []
    for group in classes:
        for a, b in zip(group, group[1:]):
            equalities.append(Row.of(_difference(matrix[b - 1], matrix[a - 1]), "=", 0))
    for lower, upper in zip(classes, classes[1:]):
        stricts.append(Row.of(_difference(matrix[upper[0] - 1], matrix[lower[0] - 1]), ">=", 1))
    return equalities, stricts


def build_ilp(cone: OrderCone) -> IlpInstance:
    matrix = sym_matrix(cone.n)
    equalities, stricts = _chain_rows(matrix, cone.classes)
    positivity = [Row.of(matrix[cone.classes[0][0] - 1], ">=", 1)]
    return IlpInstance(cone.n, tuple(equalities), tuple(stricts), tuple(positivity))


@dataclass(frozen=True)
class BranchResult:
    x: Tuple[int, ...]
    nodes_explored: int


def _lex_objective(size: int, base: int) -> List[Fraction]:
    return [Fraction(base**size + base ** (size - 1 - idx)) for idx in range(size)]


def branch_and_bound(
    rows: Sequence[Row],
    size: int,
    incumbent: Sequence[int],
    *,
    progress: bool = False,
) -> BranchResult:
    """Lexicographically smallest minimum-sum integer point, starting from a feasible ``incumbent``."""

    budget = sum(incumbent)
    objective = _lex_objective(size, budget + 1)

    def score(point: Sequence[int]) -> Fraction:
        return sum((c * v for c, v in zip(objective, point)), Fraction(0))

    best = tuple(int(v) for v in incumbent)
    best_score = score(best)
    base_rows = [*rows, Row.of([1] * size, "<=", budget)]
    stack: List[List[Row]] = [[]]
    nodes = 0
    bar = tqdm(desc="branch and bound", unit="node", disable=not progress, leave=False)
    try:
        while stack:
            extra = stack.pop()
            nodes += 1
            bar.update(1)
            relaxed = solve_lp(objective, base_rows + extra)
            if relaxed.status != "optimal" or relaxed.value is None or relaxed.x is None:
                continue
            if relaxed.value >= best_score:
                continue
            fractional = next((idx for idx, v in enumerate(relaxed.x) if v.denominator != 1), None)
            if fractional is None:
                best = tuple(int(v) for v in relaxed.x)
                best_score = relaxed.value
                log_fields(logging.DEBUG, "bnb_incumbent", N=sum(best), nodes=nodes)
                continue
            value = relaxed.x[fractional]
            unit = [0] * size
            unit[fractional] = 1
            down = Row.of(unit, "<=", floor(value))
            up = Row.of(unit, ">=", floor(value) + 1)
            stack.append(extra + [up])
            stack.append(extra + [down])
    finally:
        bar.close()
    return BranchResult(best, nodes)


@dataclass(frozen=True)
class OptimalEmbedding:
    x_star: SubsetVector
    n_star: int
    embedding: LinearEmbedding
    nodes_explored: int
    incumbent_n: int
    method: str = "branch-and-bound"

    @property
    def optimal(self) -> bool:
        return self.method != "heuristic"


def _check_weight(weight: SubsetVector) -> None:
    if weight.n > MINIMIZE_MAX_N:
        raise GuardExceeded(f"minimal embedding search is limited to n <= {MINIMIZE_MAX_N}, got {weight.n}")
    if not weight.is_positive():
        raise ValidationError("minimal embedding needs a strictly positive weight")


def _linear(x: SubsetVector) -> LinearEmbedding:
    family = realize(x)
    return LinearEmbedding(x.n, family.ground_size, generators_of(family))


def _rescaled_incumbent(weight: SubsetVector) -> SubsetVector:
    return scale_shift(solve_sym(SubsetVector(weight.n, tuple(weight.values)))).x_prime


def _solve(
    weight: SubsetVector,
    rows: Sequence[Row],
    method: str,
    progress: bool,
) -> OptimalEmbedding:
    start = _rescaled_incumbent(weight)
    size = (1 << weight.n) - 1
    log_fields(logging.INFO, "minimize_start", n=weight.n, method=method, incumbent=int(start.total()))
    result = branch_and_bound(rows, size, [int(v) for v in start.values], progress=progress)
    x_star = SubsetVector.of(weight.n, result.x)
    n_star = int(x_star.total())
    log_fields(logging.INFO, "minimize_done", N_star=n_star, nodes=result.nodes_explored)
    return OptimalEmbedding(
        x_star=x_star,
        n_star=n_star,
        embedding=_linear(x_star),
        nodes_explored=result.nodes_explored,
        incumbent_n=int(start.total()),
        method=method,
    )


def minimize_dimension(weight: SubsetVector, *, progress: bool = False) -> OptimalEmbedding:
    """Exact minimum-dimension linear embedding whose weights keep the weak order of ``weight``."""

    _check_weight(weight)
    return _solve(weight, build_ilp(cone_of(weight)).rows(), "branch-and-bound", progress)


def heuristic_minimize(weight: SubsetVector, *, progress: bool = False) -> OptimalEmbedding:
    """Same program, additionally forcing ``x`` into the weak order of the rescaled solution.

    Its optimum can exceed the true one; compare against :func:`minimize_dimension`.
    """

    _check_weight(weight)
    start = _rescaled_incumbent(weight)
    identity = [[1 if i == j else 0 for i in masks(weight.n)] for j in masks(weight.n)]
    equalities, stricts = _chain_rows(identity, cone_of_values(start))
    rows = [*build_ilp(cone_of(weight)).rows(), *equalities, *stricts]
    return _solve(weight, rows, "heuristic", progress)


def cone_of_values(vector: SubsetVector) -> Tuple[Tuple[int, ...], ...]:
    """Equality classes of any vector (zeros allowed), smallest value first."""

    groups: Dict[Fraction, List[int]] = {}
    for mask, value in vector.items():
        groups.setdefault(value, []).append(mask)
    return tuple(tuple(groups[value]) for value in sorted(groups))


def _compositions(size: int, total: int, prefix: Tuple[int, ...] = ()) -> Iterator[Tuple[int, ...]]:
    """All nonnegative integer vectors of ``size`` entries summing to ``total``, in lex order."""

    if size == 1:
        yield prefix + (total,)
        return
    for value in range(total + 1):
        yield from _compositions(size - 1, total - value, prefix + (value,))


def exhaustive_minimum(
    feasible: Callable[[SubsetVector], bool],
    n: int,
    limit: int,
    *,
    progress: bool = False,
) -> Optional[SubsetVector]:
    """First feasible ``x`` by increasing ``sum(x)``, then lexicographically; ``None`` past ``limit``."""

    size = (1 << n) - 1
    for total in tqdm(range(limit + 1), desc="exhaustive", disable=not progress, leave=False):
        for values in _compositions(size, total):
            candidate = SubsetVector.of(n, values)
            if feasible(candidate):
                return candidate
    return None


def dimension_feasible(weight: SubsetVector) -> Callable[[SubsetVector], bool]:
    """Predicate: ``sym_transform(x)`` is positive with the weak order of ``weight``."""

    target = dense_ranks(weight.values)

    def check(x: SubsetVector) -> bool:
        image = sym_transform(x)
        return image.is_positive() and dense_ranks(image.values) == target

    return check


def _pair_mask(i: int, j: int) -> int:
    return mask_of([i + 1, j + 1])


def build_points_ilp(distance: DistanceMatrix) -> IlpInstance:
    """Rows making the pair coordinates of ``T x`` decoding-equivalent to ``distance``.

    Each column ``c`` of ``distance`` orders the pairs ``{i, c}``; every pair
    coordinate is at least 1, the other coordinates are free.
    """

    n = distance.n
    matrix = sym_matrix(n)
    equalities: List[Row] = []
    stricts: List[Row] = []
    for c in range(n):
        column = {i: distance.entries[i][c] for i in range(n) if i != c}
        groups: Dict[Fraction, List[int]] = {}
        for i, value in column.items():
            groups.setdefault(value, []).append(_pair_mask(i, c))
        classes = [groups[value] for value in sorted(groups)]
        eq, st = _chain_rows(matrix, classes)
        equalities.extend(eq)
        stricts.extend(st)
    positivity = [
        Row.of(matrix[_pair_mask(i, j) - 1], ">=", 1) for i, j in itertools.combinations(range(n), 2)
    ]
    return IlpInstance(n, tuple(equalities), tuple(stricts), tuple(positivity))


@dataclass(frozen=True)
class OptimalPoints:
    x_star: SubsetVector
    n_star: int
    embedding: PointEmbedding
    nodes_explored: int
    incumbent_n: int


def minimize_dimension_points(distance: DistanceMatrix, *, progress: bool = False) -> OptimalPoints:
    """Fewest cube coordinates for ``n`` point images decoding-equivalent to ``distance``."""

    n = distance.n
    if n > POINTS_MAX_N:
        raise GuardExceeded(f"minimal point embedding is limited to n <= {POINTS_MAX_N}, got {n}")
    if not classify_distance(distance).is_semimetric:
        raise ValidationError("minimal point embedding needs a semimetric")
    if n == 1:
        word = CubeWord(0)
        return OptimalPoints(SubsetVector.zeros(1), 0, PointEmbedding(1, 0, (word,)), 0, 0)
    start = scale_shift(solve_sym(padded_weight(distance))).x_prime
    size = (1 << n) - 1
    rows = build_points_ilp(distance).rows()
    log_fields(logging.INFO, "minimize_points_start", n=n, incumbent=int(start.total()))
    result = branch_and_bound(rows, size, [int(v) for v in start.values], progress=progress)
    x_star = SubsetVector.of(n, result.x)
    linear = _linear(x_star)
    log_fields(logging.INFO, "minimize_points_done", N_star=linear.length, nodes=result.nodes_explored)
    return OptimalPoints(
        x_star=x_star,
        n_star=linear.length,
        embedding=PointEmbedding(n, linear.length, linear.generators),
        nodes_explored=result.nodes_explored,
        incumbent_n=int(start.total()),
    )


__all__ = [
    "BranchResult",
    "IlpInstance",
    "MINIMIZE_MAX_N",
    "OptimalEmbedding",
    "OptimalPoints",
    "OrderCone",
    "POINTS_MAX_N",
    "branch_and_bound",
    "build_ilp",
    "build_points_ilp",
    "cone_of",
    "cone_of_values",
    "dimension_feasible",
    "exhaustive_minimum",
    "heuristic_minimize",
    "inverse_sym_matrix",
    "minimize_dimension",
    "minimize_dimension_points",
    "sym_matrix",
]
