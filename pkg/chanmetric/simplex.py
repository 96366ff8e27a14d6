"""Exact two-phase simplex over ``Fraction``.

Minimises ``c . x`` subject to ``x >= 0`` and rows ``a . x (<=|>=|=) b``.
Bland's rule keeps degenerate problems from cycling. Problems here have a
few dozen rows at most, so a dense tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple

from .utils import RatLike, to_rat

Sense = Literal["<=", ">=", "="]
Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class Row:
    coeffs: Tuple[Fraction, ...]
    sense: Sense
    rhs: Fraction

    @classmethod
    def of(cls, coeffs: Sequence[RatLike], sense: Sense, rhs: RatLike) -> "Row":
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"unknown row sense {sense!r}")
        return cls(tuple(to_rat(c) for c in coeffs), sense, to_rat(rhs))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((a * v for a, v in zip(self.coeffs, x)), Fraction(0))
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LpResult:
    status: Status
    x: Optional[Tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None


class _Tableau:
    def __init__(self, rows: List[List[Fraction]], basis: List[int]) -> None:
        self.rows = rows
        self.basis = basis

    def pivot(self, r: int, col: int) -> None:
        pivot_row = self.rows[r]
        factor = pivot_row[col]
        self.rows[r] = pivot_row = [value / factor for value in pivot_row]
        for idx, row in enumerate(self.rows):
            if idx != r and row[col] != 0:
                scale = row[col]
                self.rows[idx] = [a - scale * b for a, b in zip(row, pivot_row)]
        self.basis[r] = col

    def reduced_costs(self, cost: Sequence[Fraction], columns: Sequence[int]) -> List[Fraction]:
        reduced = []
        for col in columns:
            value = cost[col]
            for r, basic in enumerate(self.basis):
                value -= cost[basic] * self.rows[r][col]
            reduced.append(value)
        return reduced

    def run(self, cost: Sequence[Fraction], columns: Sequence[int]) -> bool:
        """Pivot to optimality over ``columns``; ``False`` when unbounded."""

        while True:
            reduced = self.reduced_costs(cost, columns)
            entering = next((col for col, rc in zip(columns, reduced) if rc < 0), None)
            if entering is None:
                return True
            best: Optional[Tuple[Fraction, int, int]] = None
            for r, row in enumerate(self.rows):
                if row[entering] > 0:
                    candidate = (row[-1] / row[entering], self.basis[r], r)
                    if best is None or candidate < best:
                        best = candidate
            if best is None:
                return False
            self.pivot(best[2], entering)

    def value(self, cost: Sequence[Fraction]) -> Fraction:
        return sum((cost[b] * self.rows[r][-1] for r, b in enumerate(self.basis)), Fraction(0))


def solve_lp(objective: Sequence[RatLike], rows: Sequence[Row]) -> LpResult:
    """Minimise ``objective . x`` over ``x >= 0`` and ``rows``."""

    c = [to_rat(value) for value in objective]
    size = len(c)
    normalised: List[Tuple[List[Fraction], Sense, Fraction]] = []
    for row in rows:
        if len(row.coeffs) != size:
            raise ValueError(f"row has {len(row.coeffs)} coefficients, expected {size}")
        coeffs, sense, rhs = list(row.coeffs), row.sense, row.rhs
        if rhs < 0:
            coeffs = [-a for a in coeffs]
            rhs = -rhs
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]  # type: ignore[assignment]
        normalised.append((coeffs, sense, rhs))

    slack_count = sum(1 for _, sense, _ in normalised if sense != "=")
    artificial_count = sum(1 for _, sense, _ in normalised if sense != "<=")
    width = size + slack_count + artificial_count
    first_artificial = size + slack_count

    table: List[List[Fraction]] = []
    basis: List[int] = []
    slack = size
    artificial = first_artificial
    for coeffs, sense, rhs in normalised:
        line = coeffs + [Fraction(0)] * (width - size) + [rhs]
        if sense == "<=":
            line[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        else:
            if sense == ">=":
                line[slack] = Fraction(-1)
                slack += 1
            line[artificial] = Fraction(1)
            basis.append(artificial)
            artificial += 1
        table.append(line)

    tableau = _Tableau(table, basis)
    if artificial_count:
        phase_one = [Fraction(0)] * first_artificial + [Fraction(1)] * artificial_count
        tableau.run(phase_one, range(width))
        if tableau.value(phase_one) != 0:
            return LpResult("infeasible")
        for r in reversed(range(len(tableau.rows))):
            if tableau.basis[r] < first_artificial:
                continue
            col = next(
                (j for j in range(first_artificial) if tableau.rows[r][j] != 0),
                None,
            )
            if col is None:
                del tableau.rows[r]
                del tableau.basis[r]
            else:
                tableau.pivot(r, col)

    cost = c + [Fraction(0)] * (width - size)
    if not tableau.run(cost, range(first_artificial)):
        return LpResult("unbounded")
    x = [Fraction(0)] * size
    for r, basic in enumerate(tableau.basis):
        if basic < size:
            x[basic] = tableau.rows[r][-1]
    return LpResult("optimal", tuple(x), tableau.value(cost))


__all__ = ["LpResult", "Row", "Sense", "Status", "solve_lp"]
