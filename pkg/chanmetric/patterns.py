"""Set patterns over the subset lattice of [n].

Nonempty subsets ``I`` of ``[n]`` are addressed by bitmask: bit ``i - 1`` is set
iff ``i`` is in ``I``. A :class:`SubsetVector` stores one rational per mask in
ascending mask order, which is also the order of every vector file.

The two transforms used throughout are the ``J``-wise intersection counts
(superset sums of minterm cardinalities) and the ``J``-wise symmetric
difference counts built from them by alternating ``(-2)^(l-1)`` weights.
Both are computed with the ``O(n 2^n)`` zeta/Moebius sweeps over the lattice.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Literal, Mapping, Optional, Sequence, Tuple

from tqdm import tqdm

from .errors import DimensionError, GuardExceeded, NotRealizableError, ValidationError
from .utils import RatLike, dense_ranks, format_rat, lcm_of, log_fields, popcount, to_rat

SEARCH_MAX_N = 5

PatternKind = Literal["cap", "sym"]


def masks(n: int) -> range:
    """All nonempty subsets of ``[n]`` in ascending mask order."""
    return range(1, 1 << n)


def graded_masks(n: int) -> List[int]:
    """Nonempty subsets ordered by size, then lexicographically (x1, x2, x3, x12, ...)."""

    ordered: List[int] = []
    for size in range(1, n + 1):
        for members in itertools.combinations(range(1, n + 1), size):
            ordered.append(mask_of(members))
    return ordered


def mask_of(members: Iterable[int]) -> int:
    """Mask of a set of 1-indexed elements."""
    mask = 0
    for member in members:
        mask |= 1 << (member - 1)
    return mask


def members_of(mask: int) -> Tuple[int, ...]:
    """1-indexed elements of ``mask`` in ascending order."""
    return tuple(bit + 1 for bit in range(mask.bit_length()) if mask >> bit & 1)


def mask_label(mask: int) -> str:
    return "".join(str(member) for member in members_of(mask))


@dataclass(frozen=True)
class SubsetVector:
    """One rational per nonempty subset of ``[n]``; ``values[mask - 1]``."""

    n: int
    values: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DimensionError("subset vectors need n >= 1")
        if len(self.values) != (1 << self.n) - 1:
            raise DimensionError(
                f"expected {(1 << self.n) - 1} values for n={self.n}, got {len(self.values)}"
            )

    @classmethod
    def of(cls, n: int, values: Iterable[RatLike]) -> "SubsetVector":
        return cls(n, tuple(to_rat(value) for value in values))

    @classmethod
    def zeros(cls, n: int) -> "SubsetVector":
        return cls(n, (Fraction(0),) * ((1 << n) - 1))

    @classmethod
    def ones(cls, n: int) -> "SubsetVector":
        return cls(n, (Fraction(1),) * ((1 << n) - 1))

    @classmethod
    def unit(cls, n: int, mask: int) -> "SubsetVector":
        values = [Fraction(0)] * ((1 << n) - 1)
        values[mask - 1] = Fraction(1)
        return cls(n, tuple(values))

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, RatLike]) -> "SubsetVector":
        """Build from ``{mask: value}``; missing masks are zero."""
        values = [Fraction(0)] * ((1 << n) - 1)
        for mask, value in mapping.items():
            if not 1 <= mask < 1 << n:
                raise DimensionError(f"mask {mask} outside 1..{(1 << n) - 1}")
            values[mask - 1] = to_rat(value)
        return cls(n, tuple(values))

    @classmethod
    def from_graded(cls, n: int, values: Sequence[RatLike]) -> "SubsetVector":
        """Build from values listed in :func:`graded_masks` order."""
        order = graded_masks(n)
        if len(values) != len(order):
            raise DimensionError(f"expected {len(order)} values for n={n}, got {len(values)}")
        return cls.from_mapping(n, dict(zip(order, values)))

    def to_graded(self) -> Tuple[Fraction, ...]:
        return tuple(self[mask] for mask in graded_masks(self.n))

    def __getitem__(self, mask: int) -> Fraction:
        if not 1 <= mask < 1 << self.n:
            raise DimensionError(f"mask {mask} outside 1..{(1 << self.n) - 1}")
        return self.values[mask - 1]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return zip(masks(self.n), self.values)

    def _check_same(self, other: "SubsetVector") -> None:
        if other.n != self.n:
            raise DimensionError(f"vectors over n={self.n} and n={other.n}")

    def __add__(self, other: "SubsetVector") -> "SubsetVector":
        self._check_same(other)
        return SubsetVector(self.n, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "SubsetVector") -> "SubsetVector":
        self._check_same(other)
        return SubsetVector(self.n, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, factor: RatLike) -> "SubsetVector":
        factor = to_rat(factor)
        return SubsetVector(self.n, tuple(factor * value for value in self.values))

    def shift(self, amount: RatLike) -> "SubsetVector":
        amount = to_rat(amount)
        return SubsetVector(self.n, tuple(value + amount for value in self.values))

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def is_integral(self) -> bool:
        return all(value.denominator == 1 for value in self.values)

    def is_nonnegative(self) -> bool:
        return all(value >= 0 for value in self.values)

    def is_positive(self) -> bool:
        return all(value > 0 for value in self.values)

    def ranks(self) -> List[int]:
        """Ascending dense ranks of the entries, as a single-column weak order."""
        return dense_ranks(self.values)

    def render(self) -> str:
        return " ".join(format_rat(value) for value in self.values)


@dataclass(frozen=True)
class SetFamily:
    """Sets ``A_1..A_n`` over ground ``[N]``; ``membership[e]`` is the mask of sets holding ``e``."""

    n: int
    membership: Tuple[int, ...]

    def __post_init__(self) -> None:
        for element, mask in enumerate(self.membership):
            if not 1 <= mask < 1 << self.n:
                raise ValidationError(
                    f"ground element {element + 1} has membership mask {mask} (must be a nonempty subset)"
                )

    @classmethod
    def from_sets(cls, n: int, sets: Sequence[Iterable[int]]) -> "SetFamily":
        """Family from explicit sets; ground elements are numbered in first-seen order."""
        if len(sets) != n:
            raise DimensionError(f"expected {n} sets, got {len(sets)}")
        membership: Dict[object, int] = {}
        for idx, members in enumerate(sets):
            for element in members:
                membership[element] = membership.get(element, 0) | 1 << idx
        return cls(n, tuple(membership.values()))

    @property
    def ground_size(self) -> int:
        return len(self.membership)

    def members(self, index: int) -> frozenset[int]:
        """Ground elements (0-indexed) of ``A_index`` (1-indexed)."""
        bit = 1 << (index - 1)
        return frozenset(e for e, mask in enumerate(self.membership) if mask & bit)

    def sets(self) -> List[frozenset[int]]:
        return [self.members(index) for index in range(1, self.n + 1)]

    def intersection_size(self, mask: int) -> int:
        return sum(1 for member in self.membership if member & mask == mask)

    def symmetric_difference_size(self, mask: int) -> int:
        return sum(1 for member in self.membership if popcount(member & mask) % 2 == 1)

    def render(self) -> List[str]:
        """One binary string of width ``n`` per ground element (set ``n`` leftmost)."""
        return [format(mask, f"0{self.n}b") for mask in self.membership]


@dataclass(frozen=True)
class ScalingWitness:
    """``x_prime = m * x + r``; symmetric differences scale by ``m`` and shift by ``k = r 2^(n-1)``."""

    m: int
    r: Fraction
    k: Fraction
    x_prime: SubsetVector

    @classmethod
    def from_parameters(cls, x: SubsetVector, m: int, r: RatLike) -> "ScalingWitness":
        r = to_rat(r)
        if m <= 0:
            raise ValidationError("scaling factor m must be positive")
        return cls(m=m, r=r, k=r * (1 << (x.n - 1)), x_prime=x.scale(m).shift(r))

    def is_valid(self) -> bool:
        return self.m > 0 and self.x_prime.is_integral() and self.x_prime.is_nonnegative()


@dataclass(frozen=True)
class PatternConstraint:
    """``Cap_J(x) = value`` or ``Sym_J(x) = value`` for the subset with mask ``mask``."""

    mask: int
    kind: PatternKind
    value: Fraction

    def support(self, n: int) -> List[int]:
        """Masks ``I`` whose minterm count enters this constraint with coefficient one."""
        if self.kind == "cap":
            return [item for item in masks(n) if item & self.mask == self.mask]
        return [item for item in masks(n) if popcount(item & self.mask) % 2 == 1]


def _padded(x: SubsetVector) -> List[Fraction]:
    return [Fraction(0), *x.values]


def _superset_zeta(table: List[Fraction], n: int, sign: int) -> None:
    for bit in range(n):
        step = 1 << bit
        for mask in range(1 << n):
            if not mask & step:
                table[mask] += sign * table[mask | step]


def _subset_zeta(table: List[Fraction], n: int, sign: int) -> None:
    for bit in range(n):
        step = 1 << bit
        for mask in range(1 << n):
            if mask & step:
                table[mask] += sign * table[mask ^ step]


def _sym_weight(mask: int) -> Fraction:
    return Fraction(-2) ** (popcount(mask) - 1)


def minterm_vector(family: SetFamily) -> SubsetVector:
    """Minterm cardinalities ``x_I``: ground elements whose membership mask is exactly ``I``."""

    counts = Counter(family.membership)
    return SubsetVector.from_mapping(family.n, counts)


def cap_transform(x: SubsetVector) -> SubsetVector:
    """``Cap_J(x)``: sum of ``x_I`` over ``I`` containing ``J``."""

    table = _padded(x)
    _superset_zeta(table, x.n, +1)
    return SubsetVector(x.n, tuple(table[1:]))


def solve_cap(c: SubsetVector) -> SubsetVector:
    """Unique ``x`` with ``cap_transform(x) == c`` (Moebius inversion over supersets)."""

    table = _padded(c)
    _superset_zeta(table, c.n, -1)
    return SubsetVector(c.n, tuple(table[1:]))


def cap_to_sym(c: SubsetVector) -> SubsetVector:
    table = [Fraction(0)] + [_sym_weight(mask) * value for mask, value in c.items()]
    _subset_zeta(table, c.n, +1)
    return SubsetVector(c.n, tuple(table[1:]))


def sym_to_cap(delta: SubsetVector) -> SubsetVector:
    """Recover intersection counts from symmetric-difference counts, smallest subsets first."""

    table = _padded(delta)
    _subset_zeta(table, delta.n, -1)
    return SubsetVector(
        delta.n, tuple(table[mask] / _sym_weight(mask) for mask in masks(delta.n))
    )


def sym_transform(x: SubsetVector) -> SubsetVector:
    """Symmetric-difference counts ``|A_j1 ^ ... ^ A_jl|`` generalised to any real ``x``."""

    return cap_to_sym(cap_transform(x))


def solve_sym(delta: SubsetVector) -> SubsetVector:
    """Unique ``x`` with ``sym_transform(x) == delta``."""

    return solve_cap(sym_to_cap(delta))


def check_realizable(x: SubsetVector) -> bool:
    """A minterm vector is realised by actual sets iff it is a nonnegative integer vector."""

    return x.is_integral() and x.is_nonnegative()


def realize(x: SubsetVector) -> SetFamily:
    """Family with minterm vector ``x``; minterms are laid out in ascending mask order."""

    if not check_realizable(x):
        raise NotRealizableError(f"minterm vector ({x.render()}) is not a nonnegative integer vector")
    membership: List[int] = []
    for mask, count in x.items():
        membership.extend([mask] * int(count))
    return SetFamily(x.n, tuple(membership))


def scale_shift(x: SubsetVector) -> ScalingWitness:
    """Smallest integral rescaling ``m x + r`` that is a nonnegative integer vector.

    ``m`` is the lcm of the denominators, ``r = max(0, -min(m x))``.
    """

    m = lcm_of(value.denominator for value in x.values)
    lowest = min(m * value for value in x.values)
    return ScalingWitness.from_parameters(x, m, max(Fraction(0), -lowest))


def _natural_bounds(n: int, constraints: Sequence[PatternConstraint]) -> Dict[int, Fraction]:
    bounds: Dict[int, Fraction] = {}
    for constraint in constraints:
        for item in constraint.support(n):
            current = bounds.get(item)
            if current is None or constraint.value < current:
                bounds[item] = constraint.value
    return bounds


def search_realization(
    n: int,
    constraints: Sequence[PatternConstraint],
    predicate: Optional[Callable[[SubsetVector], bool]] = None,
    bound: Optional[int] = None,
    *,
    progress: bool = False,
) -> Optional[SetFamily]:
    """Bounded exhaustive search for a nonnegative integer solution of a set pattern.

    Candidates are visited in lexicographic order of ``(x_1, x_2, ..., x_{2^n - 1})``
    and the first one satisfying every constraint and ``predicate`` is realised.
    Every minterm count must be bounded, either by ``bound`` or by an equality
    constraint whose support contains it. Without a predicate a minterm no
    constraint touches is free, and its lexicographically first value is 0.
    """

    if n > SEARCH_MAX_N:
        raise GuardExceeded(f"set-pattern search is limited to n <= {SEARCH_MAX_N}, got {n}")
    for constraint in constraints:
        if not 1 <= constraint.mask < 1 << n:
            raise DimensionError(f"constraint mask {constraint.mask} outside 1..{(1 << n) - 1}")
    if any(c.value.denominator != 1 or c.value < 0 for c in constraints):
        log_fields(logging.DEBUG, "pattern_search_trivial", reason="non-integer target")
        return None

    natural = _natural_bounds(n, constraints)
    limits: List[int] = []
    for item in masks(n):
        caps = [int(natural[item])] if item in natural else []
        if bound is not None:
            caps.append(bound)
        elif predicate is None and not caps:
            caps.append(0)
        if not caps:
            raise GuardExceeded(f"minterm {mask_label(item)} is unbounded; pass bound=")
        limits.append(min(caps))

    size = (1 << n) - 1
    targets = [int(c.value) for c in constraints]
    membership = [[item - 1 for item in c.support(n)] for c in constraints]
    last_index = [max(members, default=-1) for members in membership]
    touching: List[List[int]] = [[] for _ in range(size)]
    for idx, members in enumerate(membership):
        for item in members:
            touching[item].append(idx)
    closing: List[List[int]] = [[] for _ in range(size)]
    for idx, last in enumerate(last_index):
        if last >= 0:
            closing[last].append(idx)
    if any(last < 0 and target != 0 for last, target in zip(last_index, targets)):
        return None

    log_fields(logging.INFO, "pattern_search_start", n=n, constraints=len(constraints))
    partial = [0] * len(constraints)
    current = [0] * size
    visited = 0
    bar = tqdm(desc="pattern search", unit="node", disable=not progress, leave=False)

    def descend(position: int) -> bool:
        nonlocal visited
        visited += 1
        bar.update(1)
        if position == size:
            candidate = SubsetVector(n, tuple(Fraction(v) for v in current))
            return predicate is None or predicate(candidate)
        room = limits[position]
        for idx in touching[position]:
            room = min(room, targets[idx] - partial[idx])
        for value in range(room + 1):
            current[position] = value
            for idx in touching[position]:
                partial[idx] += value
            ok = all(partial[idx] == targets[idx] for idx in closing[position])
            if ok and descend(position + 1):
                return True
            for idx in touching[position]:
                partial[idx] -= value
        current[position] = 0
        return False

    try:
        found = descend(0)
    finally:
        bar.close()
    log_fields(logging.INFO, "pattern_search_done", found=found, visited=visited)
    if not found:
        return None
    return realize(SubsetVector(n, tuple(Fraction(v) for v in current)))


__all__ = [
    "PatternConstraint",
    "PatternKind",
    "SEARCH_MAX_N",
    "ScalingWitness",
    "SetFamily",
    "SubsetVector",
    "cap_to_sym",
    "cap_transform",
    "check_realizable",
    "graded_masks",
    "mask_label",
    "mask_of",
    "masks",
    "members_of",
    "minterm_vector",
    "realize",
    "scale_shift",
    "search_realization",
    "solve_cap",
    "solve_sym",
    "sym_to_cap",
    "sym_transform",
]
