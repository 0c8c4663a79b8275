"""Exact rational simplex for box-bounded equality systems.

Solves  min c.x  s.t.  A x = b,  0 <= x_j <= u_j  (u_j may be infinite)
with a dense two-phase tableau over Fractions.  Bland's rule picks entering
and leaving variables, and bound-to-bound moves strictly improve the
objective, so the method terminates on any input.  No floating point.

Upper bounds are handled by the complement substitution x_j -> u_j - x_j,
tracked per column, which keeps every nonbasic variable at zero in the
working coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


class SimplexError(Exception):
    pass


class Infeasible(SimplexError):
    pass


class Unbounded(SimplexError):
    pass


class _Tableau:
    def __init__(
        self,
        rows: Sequence[Sequence[Fraction]],
        rhs: Sequence[Fraction],
        upper: Sequence[Optional[Fraction]],
    ):
        self.nrows = len(rows)
        self.nstruct = len(upper)
        self.ncols = self.nstruct + self.nrows  # artificials appended
        self.upper: list[Optional[Fraction]] = list(upper) + [None] * self.nrows
        self.flipped = [False] * self.ncols
        self.rows: list[list[Fraction]] = []
        self.rhs: list[Fraction] = []
        for i, row in enumerate(rows):
            r = [Fraction(v) for v in row] + [Fraction(0)] * self.nrows
            b = Fraction(rhs[i])
            if b < 0:
                r = [-v for v in r]
                b = -b
            r[self.nstruct + i] = Fraction(1)
            self.rows.append(r)
            self.rhs.append(b)
        self.basis = [self.nstruct + i for i in range(self.nrows)]
        self.zrow: list[Fraction] = []

    def _effective_cost(self, cost: Sequence[Fraction], j: int) -> Fraction:
        return -cost[j] if self.flipped[j] else cost[j]

    def _reset_objective(self, cost: Sequence[Fraction]) -> None:
        self.zrow = [self._effective_cost(cost, j) for j in range(self.ncols)]
        for i, bj in enumerate(self.basis):
            cb = self.zrow[bj]
            if cb == 0:
                continue
            row = self.rows[i]
            for j in range(self.ncols):
                if row[j] != 0:
                    self.zrow[j] -= cb * row[j]

    def _flip(self, j: int) -> None:
        bound = self.upper[j]
        assert bound is not None
        for i in range(self.nrows):
            coeff = self.rows[i][j]
            if coeff != 0:
                self.rhs[i] -= bound * coeff
                self.rows[i][j] = -coeff
        self.zrow[j] = -self.zrow[j]
        self.flipped[j] = not self.flipped[j]

    def _pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        inv = 1 / row[j]
        if inv != 1:
            for col in range(self.ncols):
                if row[col] != 0:
                    row[col] *= inv
            self.rhs[r] *= inv
        for i in range(self.nrows):
            if i == r:
                continue
            factor = self.rows[i][j]
            if factor == 0:
                continue
            other = self.rows[i]
            for col in range(self.ncols):
                if row[col] != 0:
                    other[col] -= factor * row[col]
            self.rhs[i] -= factor * self.rhs[r]
        factor = self.zrow[j]
        if factor != 0:
            for col in range(self.ncols):
                if row[col] != 0:
                    self.zrow[col] -= factor * row[col]
        self.basis[r] = j

    def _iterate(self, allowed: int) -> None:
        """Run Bland-rule iterations until no allowed column improves."""
        in_basis = set(self.basis)
        while True:
            enter = -1
            for j in range(allowed):
                if j not in in_basis and self.zrow[j] < 0:
                    enter = j
                    break
            if enter == -1:
                return

            limit: Optional[Fraction] = self.upper[enter]
            best_row = -1
            leave_at_upper = False
            for i in range(self.nrows):
                d = self.rows[i][enter]
                if d > 0:
                    t = self.rhs[i] / d
                    at_upper = False
                elif d < 0 and self.upper[self.basis[i]] is not None:
                    t = (self.upper[self.basis[i]] - self.rhs[i]) / (-d)
                    at_upper = True
                else:
                    continue
                if (
                    limit is None
                    or t < limit
                    or (t == limit and (best_row == -1 or self.basis[i] < self.basis[best_row]))
                ):
                    limit = t
                    best_row = i
                    leave_at_upper = at_upper

            if best_row == -1:
                if limit is None:
                    raise Unbounded("objective unbounded below")
                self._flip(enter)
                continue

            leaving = self.basis[best_row]
            self._pivot(best_row, enter)
            in_basis.discard(leaving)
            in_basis.add(enter)
            if leave_at_upper:
                self._flip(leaving)

    def solve(self, cost: Sequence[Fraction]) -> list[Fraction]:
        # Phase 1: drive the artificial variables to zero.
        phase1 = [Fraction(0)] * self.nstruct + [Fraction(1)] * self.nrows
        self._reset_objective(phase1)
        self._iterate(self.ncols)
        residue = sum(
            (self.rhs[i] for i in range(self.nrows) if self.basis[i] >= self.nstruct),
            Fraction(0),
        )
        if residue != 0:
            raise Infeasible("equality system has no solution within the bounds")

        # Kick leftover artificials out of the basis so phase 2 cannot move
        # them off zero; a row with no structural entries is inert and may
        # keep its artificial (no structural pivot can ever touch it).
        for i in range(self.nrows):
            if self.basis[i] < self.nstruct:
                continue
            in_basis = set(self.basis)
            for j in range(self.nstruct):
                if j not in in_basis and self.rows[i][j] != 0:
                    self._pivot(i, j)
                    break

        # Phase 2: real objective; artificials stay frozen out.
        phase2 = list(cost) + [Fraction(0)] * self.nrows
        self._reset_objective(phase2)
        self._iterate(self.nstruct)

        values = [Fraction(0)] * self.ncols
        for i, bj in enumerate(self.basis):
            values[bj] = self.rhs[i]
        out = []
        for j in range(self.nstruct):
            v = values[j]
            if self.flipped[j]:
                v = self.upper[j] - v
            out.append(v)
        return out


def solve_lp(
    cost: Sequence[Fraction],
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    upper: Sequence[Optional[Fraction]],
) -> tuple[Fraction, list[Fraction]]:
    """Minimize cost.x over {A x = b, 0 <= x <= upper}; exact optimum and point."""
    if len(rows) != len(rhs):
        raise SimplexError("rows and rhs must align")
    for row in rows:
        if len(row) != len(upper):
            raise SimplexError("row width must match variable count")
    if len(cost) != len(upper):
        raise SimplexError("cost width must match variable count")
    tableau = _Tableau(rows, rhs, upper)
    x = tableau.solve([Fraction(v) for v in cost])
    value = sum((Fraction(c) * v for c, v in zip(cost, x)), Fraction(0))
    return value, x
