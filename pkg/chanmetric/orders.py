"""Channels, distances, decoders and decoding equivalence.

Points are 0-indexed inside the library; files, certificates and CLI output use
1-indexed points. Every value is an exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from .errors import DimensionError, GuardExceeded, ValidationError
from .patterns import SubsetVector, masks
from .utils import RatLike, dense_ranks, format_rat, log_fields, popcount, to_rat

ORACLE_MAX_N = 20

Direction = Literal["descending", "ascending"]
Rows = Tuple[Tuple[Fraction, ...], ...]
Code = FrozenSet[int]


def _square(rows: Iterable[Iterable[RatLike]]) -> Rows:
    grid = tuple(tuple(to_rat(value) for value in row) for row in rows)
    if not grid:
        raise DimensionError("matrix must have at least one row")
    for idx, row in enumerate(grid):
        if len(row) != len(grid):
            raise DimensionError(
                f"matrix is not square: row {idx + 1} has {len(row)} entries, expected {len(grid)}"
            )
    return grid


@dataclass(frozen=True)
class Channel:
    """Row-stochastic ``P[i][j] = P(j received | i sent)``."""

    entries: Rows

    def __post_init__(self) -> None:
        grid = _square(self.entries)
        object.__setattr__(self, "entries", grid)
        for i, row in enumerate(grid):
            for j, value in enumerate(row):
                if not 0 <= value <= 1:
                    raise ValidationError(
                        f"channel entry ({i + 1},{j + 1}) = {format_rat(value)} outside [0, 1]"
                    )
            total = sum(row, Fraction(0))
            if total != 1:
                raise ValidationError(f"channel row {i + 1} sums to {format_rat(total)}, not 1")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RatLike]]) -> "Channel":
        return cls(_square(rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative matrix with a zero diagonal."""

    entries: Rows

    def __post_init__(self) -> None:
        grid = _square(self.entries)
        object.__setattr__(self, "entries", grid)
        for i, row in enumerate(grid):
            if row[i] != 0:
                raise ValidationError(f"distance diagonal ({i + 1},{i + 1}) is {format_rat(row[i])}")
            for j, value in enumerate(row):
                if value < 0:
                    raise ValidationError(f"distance entry ({i + 1},{j + 1}) is negative")
                if value != grid[j][i]:
                    raise ValidationError(f"distance is not symmetric at ({i + 1},{j + 1})")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RatLike]]) -> "DistanceMatrix":
        return cls(_square(rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def off_diagonal(self) -> List[Fraction]:
        return [value for i, row in enumerate(self.entries) for j, value in enumerate(row) if i != j]


@dataclass(frozen=True)
class WeakOrderMatrix:
    """Column-wise dense ranks (``O-`` for descending, ``O+`` for ascending)."""

    ranks: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.ranks)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.ranks[i][j]

    def as_lists(self) -> List[List[int]]:
        return [list(row) for row in self.ranks]


class WeightVector(SubsetVector):
    """``omega`` over F_2^n: value at mask ``I`` is ``omega(sum of e_i for i in I)``."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.is_nonnegative():
            raise ValidationError("weights must be nonnegative")

    @classmethod
    def from_vector(cls, vector: SubsetVector) -> "WeightVector":
        return cls(vector.n, vector.values)

    @property
    def is_semimetric(self) -> bool:
        return self.is_positive()


@dataclass(frozen=True)
class DistanceClass:
    is_semimetric: bool
    is_metric: bool


@dataclass(frozen=True)
class AgreementReport:
    """Outcome of an exhaustive decoder comparison; falsy when a witness exists."""

    agree: bool
    codes_checked: int
    witness: Optional[Tuple[Code, int]] = None

    def __bool__(self) -> bool:
        return self.agree


MatrixLike = Union[Channel, DistanceMatrix, Sequence[Sequence[RatLike]]]


def _rows_of(matrix: MatrixLike) -> Rows:
    if isinstance(matrix, (Channel, DistanceMatrix)):
        return matrix.entries
    return _square(matrix)


def weak_order(matrix: MatrixLike, direction: Direction = "descending") -> WeakOrderMatrix:
    """Dense ranks of every column; ``descending`` ranks the largest entry 1."""

    rows = _rows_of(matrix)
    if direction not in ("descending", "ascending"):
        raise ValueError(f"unknown direction {direction!r}")
    size = len(rows)
    columns = [dense_ranks([rows[i][j] for i in range(size)], direction == "descending") for j in range(size)]
    return WeakOrderMatrix(tuple(tuple(columns[j][i] for j in range(size)) for i in range(size)))


def _check_code(code: Iterable[int], j: int, n: int) -> Code:
    members = frozenset(code)
    if not members:
        raise ValidationError("code must be nonempty")
    if any(not 0 <= c < n for c in members):
        raise DimensionError(f"code {sorted(members)} has points outside 0..{n - 1}")
    if not 0 <= j < n:
        raise DimensionError(f"received symbol {j} outside 0..{n - 1}")
    return members


def mld_decode(channel: Channel, code: Iterable[int], j: int) -> Code:
    """Maximum-likelihood decode set: every codeword maximising ``P(j | c)``."""

    members = _check_code(code, j, channel.n)
    best = max(channel.entries[c][j] for c in members)
    return frozenset(c for c in members if channel.entries[c][j] == best)


def mdd_decode(distance: DistanceMatrix, code: Iterable[int], j: int) -> Code:
    """Minimum-distance decode set: every codeword minimising ``d(c, j)``."""

    members = _check_code(code, j, distance.n)
    best = min(distance.entries[c][j] for c in members)
    return frozenset(c for c in members if distance.entries[c][j] == best)


def same_weak_order(first: MatrixLike, second: MatrixLike, direction: Direction = "ascending") -> bool:
    a, b = _rows_of(first), _rows_of(second)
    if len(a) != len(b):
        raise DimensionError(f"size mismatch: {len(a)} vs {len(b)}")
    return weak_order(a, direction) == weak_order(b, direction)


def decoding_equivalent(first: DistanceMatrix, second: DistanceMatrix) -> bool:
    return same_weak_order(first, second, "ascending")


def channel_equivalent(first: Channel, second: Channel) -> bool:
    return same_weak_order(first, second, "descending")


def matched(channel: Channel, distance: DistanceMatrix) -> bool:
    """Maximum-likelihood and minimum-distance decoding coincide for every code."""

    if channel.n != distance.n:
        raise DimensionError(f"channel has {channel.n} symbols, distance has {distance.n}")
    return weak_order(channel, "descending") == weak_order(distance, "ascending")


def _codes(n: int, progress: bool, label: str) -> Iterable[Code]:
    if n > ORACLE_MAX_N:
        raise GuardExceeded(f"exhaustive decoder comparison is limited to n <= {ORACLE_MAX_N}, got {n}")
    for mask in tqdm(masks(n), desc=label, unit="code", disable=not progress, leave=False):
        yield frozenset(bit for bit in range(n) if mask >> bit & 1)


def decoder_agreement_oracle(
    channel: Channel, distance: DistanceMatrix, *, progress: bool = False
) -> AgreementReport:
    """Compare the two decoders on every nonempty code and every received symbol."""

    if channel.n != distance.n:
        raise DimensionError(f"channel has {channel.n} symbols, distance has {distance.n}")
    n = channel.n
    checked = 0
    for code in _codes(n, progress, "decoder oracle"):
        checked += 1
        for j in range(n):
            if mld_decode(channel, code, j) != mdd_decode(distance, code, j):
                log_fields(logging.DEBUG, "oracle_witness", code=sorted(code), received=j)
                return AgreementReport(False, checked, (code, j))
    return AgreementReport(True, checked)


def first_disagreement(
    first: DistanceMatrix, second: DistanceMatrix, *, progress: bool = False
) -> Optional[Tuple[Code, int]]:
    """Exhaustive witness that two distances decode differently, or ``None``."""

    if first.n != second.n:
        raise DimensionError(f"size mismatch: {first.n} vs {second.n}")
    for code in _codes(first.n, progress, "distance oracle"):
        for j in range(first.n):
            if mdd_decode(first, code, j) != mdd_decode(second, code, j):
                return code, j
    return None


def ball_family(distance: DistanceMatrix, x0: int) -> List[FrozenSet[int]]:
    """Distinct balls ``B(x0, r)`` as ``r`` sweeps the distinct distances from ``x0``."""

    if not 0 <= x0 < distance.n:
        raise DimensionError(f"center {x0} outside 0..{distance.n - 1}")
    column = distance.column(x0)
    balls: List[FrozenSet[int]] = []
    for radius in sorted(set(column)):
        balls.append(frozenset(y for y, value in enumerate(column) if value <= radius))
    return balls


def classify_distance(distance: DistanceMatrix) -> DistanceClass:
    semimetric = all(value > 0 for value in distance.off_diagonal())
    if not semimetric:
        return DistanceClass(False, False)
    d = distance.entries
    n = distance.n
    metric = all(d[i][k] <= d[i][j] + d[j][k] for i, j, k in itertools.product(range(n), repeat=3))
    return DistanceClass(True, metric)


def to_metric(distance: DistanceMatrix) -> DistanceMatrix:
    """Squeeze a semimetric into ``(1, 2]`` off the diagonal; the result is a metric."""

    if not classify_distance(distance).is_semimetric:
        raise ValidationError("to_metric needs a semimetric (positive off-diagonal entries)")
    if distance.n == 1:
        return distance
    top = max(distance.off_diagonal())
    return DistanceMatrix(
        tuple(
            tuple(Fraction(0) if i == j else 1 + value / top for j, value in enumerate(row))
            for i, row in enumerate(distance.entries)
        )
    )


def weight_to_distance(weight: SubsetVector) -> DistanceMatrix:
    """Translation-invariant distance ``d(x, y) = omega(x XOR y)`` on F_2^n."""

    size = 1 << weight.n
    return DistanceMatrix(
        tuple(
            tuple(Fraction(0) if x == y else weight[x ^ y] for y in range(size))
            for x in range(size)
        )
    )


def hamming_distance(bits: int) -> DistanceMatrix:
    size = 1 << bits
    return DistanceMatrix(tuple(tuple(Fraction(popcount(x ^ y)) for y in range(size)) for x in range(size)))


def bsc_channel(bits: int, p: RatLike) -> Channel:
    """Message-level binary symmetric channel on F_2^bits with crossover ``p``."""

    p = to_rat(p)
    if not 0 <= p <= 1:
        raise ValidationError("crossover probability must lie in [0, 1]")
    size = 1 << bits
    return Channel(
        tuple(
            tuple(p ** popcount(x ^ y) * (1 - p) ** (bits - popcount(x ^ y)) for y in range(size))
            for x in range(size)
        )
    )


def channel_from_distance(distance: DistanceMatrix) -> Channel:
    """A channel whose ``O-`` equals ``O+`` of ``distance``.

    Off-diagonal entries are ``q^(rank - 1)`` with ``q = 1/(n + 1)``, the diagonal
    takes the remaining mass and stays the strict column maximum.
    """

    if not classify_distance(distance).is_semimetric:
        raise ValidationError("channel_from_distance needs a semimetric")
    n = distance.n
    q = Fraction(1, n + 1)
    ranks = weak_order(distance, "ascending")
    rows: List[List[Fraction]] = []
    for i in range(n):
        row = [Fraction(0) if i == j else q ** (ranks[i, j] - 1) for j in range(n)]
        row[i] = 1 - sum(row, Fraction(0))
        rows.append(row)
    return Channel.from_rows(rows)


__all__ = [
    "AgreementReport",
    "Channel",
    "Code",
    "Direction",
    "DistanceClass",
    "DistanceMatrix",
    "ORACLE_MAX_N",
    "WeakOrderMatrix",
    "WeightVector",
    "ball_family",
    "bsc_channel",
    "channel_equivalent",
    "channel_from_distance",
    "classify_distance",
    "decoder_agreement_oracle",
    "decoding_equivalent",
    "first_disagreement",
    "hamming_distance",
    "matched",
    "mdd_decode",
    "mld_decode",
    "same_weak_order",
    "to_metric",
    "weak_order",
    "weight_to_distance",
]
