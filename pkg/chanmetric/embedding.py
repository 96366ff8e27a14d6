"""Embeddings into the Hamming cube.

A translation-invariant weight ``omega`` over F_2^n becomes a family of sets
whose symmetric differences reproduce ``m * omega + k``; the indicator words of
those sets generate a linear map into ``H^N``. Arbitrary semimetrics on ``n``
points go through the same pipeline after padding every non-pair subset with
weight 1.

Cube positions are 1-based: position ``p`` is bit ``p - 1`` of the word and is
printed leftmost-first.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from .errors import DimensionError, GuardExceeded, NotRealizableError, ValidationError
from .orders import DistanceMatrix, classify_distance
from .patterns import (
    SEARCH_MAX_N,
    PatternConstraint,
    ScalingWitness,
    SetFamily,
    SubsetVector,
    mask_label,
    mask_of,
    masks,
    realize,
    scale_shift,
    search_realization,
    solve_sym,
)
from .utils import RatLike, dense_ranks, format_rat, log_fields, popcount

EXACT_MAX_N = SEARCH_MAX_N


@dataclass(frozen=True)
class CubeWord:
    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DimensionError("cube words need a nonnegative length")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits {self.bits:b} do not fit in length {self.length}")

    @classmethod
    def from_string(cls, text: str) -> "CubeWord":
        if any(ch not in "01" for ch in text):
            raise ValidationError(f"cube word {text!r} must contain only 0 and 1")
        return cls(len(text), sum(1 << pos for pos, ch in enumerate(text) if ch == "1"))

    @classmethod
    def from_positions(cls, length: int, positions: Sequence[int]) -> "CubeWord":
        """Word with the given 1-based positions set."""
        bits = 0
        for position in positions:
            if not 1 <= position <= length:
                raise DimensionError(f"position {position} outside 1..{length}")
            bits |= 1 << (position - 1)
        return cls(length, bits)

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    def support(self) -> frozenset[int]:
        return frozenset(pos + 1 for pos in range(self.length) if self.bits >> pos & 1)

    def __xor__(self, other: "CubeWord") -> "CubeWord":
        if other.length != self.length:
            raise DimensionError(f"words of length {self.length} and {other.length}")
        return CubeWord(self.length, self.bits ^ other.bits)

    def hamming(self, other: "CubeWord") -> int:
        return (self ^ other).weight

    def flip(self, position: int) -> "CubeWord":
        if not 1 <= position <= self.length:
            raise DimensionError(f"position {position} outside 1..{self.length}")
        return CubeWord(self.length, self.bits ^ 1 << (position - 1))

    def to_string(self) -> str:
        return "".join("1" if self.bits >> pos & 1 else "0" for pos in range(self.length))

    def __str__(self) -> str:
        return self.to_string()


def _check_words(words: Sequence[CubeWord], length: int) -> Tuple[CubeWord, ...]:
    for idx, word in enumerate(words):
        if word.length != length:
            raise DimensionError(f"word {idx + 1} has length {word.length}, expected {length}")
    return tuple(words)


@dataclass(frozen=True)
class LinearEmbedding:
    """``f(v)`` is the XOR of ``generators[i - 1]`` over the ``i`` in ``v``."""

    n: int
    length: int
    generators: Tuple[CubeWord, ...]
    m: Optional[Fraction] = None
    k: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if len(self.generators) != self.n:
            raise DimensionError(f"expected {self.n} generators, got {len(self.generators)}")
        object.__setattr__(self, "generators", _check_words(self.generators, self.length))

    def image(self, v: int) -> CubeWord:
        if not 0 <= v < 1 << self.n:
            raise DimensionError(f"vector {v} outside F_2^{self.n}")
        word = CubeWord(self.length)
        for bit in range(self.n):
            if v >> bit & 1:
                word = word ^ self.generators[bit]
        return word

    def weights(self) -> SubsetVector:
        """``weight(f(v))`` for every nonzero ``v``."""
        return SubsetVector.of(self.n, [self.image(v).weight for v in masks(self.n)])


@dataclass(frozen=True)
class PointEmbedding:
    n: int
    length: int
    images: Tuple[CubeWord, ...]
    m: Optional[Fraction] = None
    k: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if len(self.images) != self.n:
            raise DimensionError(f"expected {self.n} images, got {len(self.images)}")
        object.__setattr__(self, "images", _check_words(self.images, self.length))


Embedding = Union[LinearEmbedding, PointEmbedding]


@dataclass(frozen=True)
class Violation:
    """A vector (mask) or point pair whose cube weight misses the affine law."""

    label: str
    target: Fraction
    expected: Fraction
    observed: int


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    m: Optional[Fraction]
    k: Optional[Fraction]
    violations: Tuple[Violation, ...] = ()
    order_preserved: bool = True
    injective: bool = True
    matches_declared: bool = True
    notes: Tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def generators_of(family: SetFamily) -> Tuple[CubeWord, ...]:
    words = []
    for index in range(1, family.n + 1):
        bits = sum(1 << element for element in family.members(index))
        words.append(CubeWord(family.ground_size, bits))
    return tuple(words)


def embed_weight(
    weight: SubsetVector,
    m: Optional[int] = None,
    r: Optional[RatLike] = None,
) -> LinearEmbedding:
    """Linear cube embedding with ``weight(f(v)) = m * weight[v] + k``.

    Without ``m`` the smallest integral rescaling of the solved minterm vector
    is used; an explicit ``(m, r)`` pair must make ``m x + r`` a nonnegative
    integer vector.
    """

    delta = SubsetVector(weight.n, tuple(weight.values))
    if not delta.is_positive():
        raise ValidationError("linear embedding needs a strictly positive weight")
    x = solve_sym(delta)
    if m is None:
        witness = scale_shift(x)
    else:
        witness = ScalingWitness.from_parameters(x, m, 0 if r is None else r)
        if not witness.is_valid():
            raise NotRealizableError(
                f"m={m}, r={format_rat(witness.r)} leaves ({witness.x_prime.render()}) non-integral or negative"
            )
    family = realize(witness.x_prime)
    log_fields(
        logging.INFO,
        "embed_weight",
        n=weight.n,
        N=family.ground_size,
        m=witness.m,
        r=format_rat(witness.r),
        k=format_rat(witness.k),
    )
    return LinearEmbedding(
        n=weight.n,
        length=family.ground_size,
        generators=generators_of(family),
        m=Fraction(witness.m),
        k=witness.k,
    )


def padded_weight(distance: DistanceMatrix) -> SubsetVector:
    """Pair subsets carry ``d(i, j)``; every other nonempty subset carries 1."""

    n = distance.n
    values = {}
    for mask in masks(n):
        if popcount(mask) == 2:
            i, j = (bit for bit in range(n) if mask >> bit & 1)
            values[mask] = distance.entries[i][j]
        else:
            values[mask] = Fraction(1)
    return SubsetVector.from_mapping(n, values)


def embed_points(
    distance: DistanceMatrix,
    m: Optional[int] = None,
    r: Optional[RatLike] = None,
) -> PointEmbedding:
    """Images of the ``n`` points with Hamming distances ``m * d(i, j) + k``."""

    if not classify_distance(distance).is_semimetric:
        raise ValidationError("point embedding needs a semimetric")
    linear = embed_weight(padded_weight(distance), m, r)
    return PointEmbedding(
        n=distance.n,
        length=linear.length,
        images=linear.generators,
        m=linear.m,
        k=linear.k,
    )


def induced_distance(images: Sequence[CubeWord]) -> DistanceMatrix:
    return DistanceMatrix(tuple(tuple(Fraction(a.hamming(b)) for b in images) for a in images))


def pullback_distance(embedding: LinearEmbedding) -> DistanceMatrix:
    """``Hamming(f(u), f(v))`` over all of F_2^n."""

    words = [embedding.image(v) for v in range(1 << embedding.n)]
    return induced_distance(words)


def _observations(
    embedding: Embedding, target: Union[SubsetVector, DistanceMatrix]
) -> List[Tuple[str, Fraction, int]]:
    if isinstance(embedding, LinearEmbedding):
        if not isinstance(target, SubsetVector) or target.n != embedding.n:
            raise DimensionError("a linear embedding is checked against a weight over the same F_2^n")
        return [(mask_label(v), target[v], embedding.image(v).weight) for v in masks(embedding.n)]
    if not isinstance(target, DistanceMatrix) or target.n != embedding.n:
        raise DimensionError("a point embedding is checked against a distance on the same points")
    rows: List[Tuple[str, Fraction, int]] = []
    for i, j in itertools.combinations(range(embedding.n), 2):
        observed = embedding.images[i].hamming(embedding.images[j])
        rows.append((f"{{{i + 1},{j + 1}}}", target.entries[i][j], observed))
    return rows


def verify_embedding(
    embedding: Embedding,
    target: Union[SubsetVector, DistanceMatrix],
) -> EmbeddingReport:
    """Recompute every cube weight and test the affine law against ``target``.

    ``(m, k)`` is solved from the first two distinct target values; when all
    targets coincide the declared ``m`` of the embedding is used (1 when none is
    declared). Embeddings that only preserve order report violations but keep
    ``order_preserved``.
    """

    rows = _observations(embedding, target)
    if not rows:
        return EmbeddingReport(ok=True, m=embedding.m, k=embedding.k)
    _, first_target, first_seen = rows[0]
    other = next((row for row in rows if row[1] != first_target), None)
    if other is None:
        m = embedding.m if embedding.m is not None else Fraction(1)
    else:
        m = Fraction(other[2] - first_seen) / (other[1] - first_target)
    k = first_seen - m * first_target

    violations = tuple(
        Violation(label, value, m * value + k, seen)
        for label, value, seen in rows
        if m * value + k != seen
    )
    order_preserved = dense_ranks([row[1] for row in rows]) == dense_ranks(
        [Fraction(row[2]) for row in rows]
    )
    if isinstance(embedding, LinearEmbedding):
        injective = all(seen > 0 for _, _, seen in rows)
    else:
        injective = len({word.bits for word in embedding.images}) == embedding.n
    notes: List[str] = []
    if m <= 0:
        notes.append(f"solved scale m={format_rat(m)} is not positive")
    if not injective:
        notes.append("embedding is not injective")
    declared = (embedding.m, embedding.k)
    matches_declared = None in declared or (m, k) == declared
    if not matches_declared:
        notes.append(
            f"declared (m, k) = ({format_rat(declared[0])}, {format_rat(declared[1])}),"  # type: ignore[arg-type]
            f" observed ({format_rat(m)}, {format_rat(k)})"
        )
    ok = not violations and m > 0 and injective
    log_fields(logging.DEBUG, "verify_embedding", ok=ok, violations=len(violations))
    return EmbeddingReport(
        ok=ok,
        m=m,
        k=k,
        violations=violations,
        order_preserved=order_preserved,
        injective=injective,
        matches_declared=matches_declared,
        notes=tuple(notes),
    )


def _integral_entries(distance: DistanceMatrix) -> bool:
    return all(value.denominator == 1 for row in distance.entries for value in row)


def exact_embed(distance: DistanceMatrix, *, progress: bool = False) -> Optional[PointEmbedding]:
    """Isometric embedding (``m = 1``, ``k = 0``) into some ``H^N``, or ``None``.

    Point ``n`` goes to the zero word and point ``i`` to the indicator of a set
    ``A_i`` with ``|A_i| = d(i, n)`` and
    ``|A_i & A_j| = (d(i, n) + d(j, n) - d(i, j)) / 2``.
    """

    n = distance.n
    if n > EXACT_MAX_N:
        raise GuardExceeded(f"exact embedding is limited to n <= {EXACT_MAX_N}, got {n}")
    if not classify_distance(distance).is_semimetric:
        raise ValidationError("exact embedding needs a semimetric")
    if not _integral_entries(distance):
        return None
    d = distance.entries
    if n == 1:
        return PointEmbedding(1, 0, (CubeWord(0),), Fraction(1), Fraction(0))
    last = n - 1
    constraints = [PatternConstraint(mask_of([i + 1]), "cap", d[i][last]) for i in range(last)]
    for i, j in itertools.combinations(range(last), 2):
        shared = (d[i][last] + d[j][last] - d[i][j]) / 2
        if shared.denominator != 1 or shared < 0:
            return None
        constraints.append(PatternConstraint(mask_of([i + 1, j + 1]), "cap", shared))
    family = search_realization(last, constraints, progress=progress)
    if family is None:
        log_fields(logging.INFO, "exact_embed", n=n, found=False)
        return None
    images = (*generators_of(family), CubeWord(family.ground_size))
    log_fields(logging.INFO, "exact_embed", n=n, found=True, N=family.ground_size)
    return PointEmbedding(n, family.ground_size, images, Fraction(1), Fraction(0))


def brute_force_exact_embed(
    distance: DistanceMatrix, max_length: int = 6, *, progress: bool = False
) -> Optional[Tuple[CubeWord, ...]]:
    """Place the points in ``H^N`` for ``N = 0..max_length``, last point at the origin."""

    n = distance.n
    if not _integral_entries(distance):
        return None
    d = distance.entries
    for length in range(max_length + 1):
        words = range(1 << length)
        total = (1 << length) ** (n - 1)
        for placement in tqdm(
            itertools.product(words, repeat=n - 1),
            total=total,
            desc=f"H^{length}",
            disable=not progress,
            leave=False,
        ):
            points = (*placement, 0)
            if all(
                popcount(points[i] ^ points[j]) == d[i][j]
                for i, j in itertools.combinations(range(n), 2)
            ):
                return tuple(CubeWord(length, bits) for bits in points)
    return None


__all__ = [
    "CubeWord",
    "EXACT_MAX_N",
    "Embedding",
    "EmbeddingReport",
    "LinearEmbedding",
    "PointEmbedding",
    "Violation",
    "brute_force_exact_embed",
    "embed_points",
    "embed_weight",
    "exact_embed",
    "generators_of",
    "induced_distance",
    "padded_weight",
    "pullback_distance",
]
