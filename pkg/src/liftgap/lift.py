"""One-round lift-and-project certificates.

A point x survives one round of the Lovasz-Schrijver N operator over a
relaxation R exactly when some symmetric (m+1)x(m+1) matrix X has row 0 and
diagonal equal to (1, x) and every row X_e and complement X_0 - X_e inside
cone(R).  `verify_one_round` checks those three conditions exactly and
collects every violation it finds (one round of Sherali-Adams accepts the
same certificates).  The matrix itself is a plain dense list of Fractions.

The certificate for the looped recursive family assigns 2/3 everywhere and
protects with 1/3 on frame members, 1/2 off them; its rows rescale to the
fixed value tables (1, 1/2, 3/4) and (0, 1, 1/2) produced by
`derive_row_vectors`, which is the independent route the tests compare
against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .frames import FrameFamily, FrameSymmetryError
from .graphs import EdgeVector, GraphError, LabeledGraph
from .polytopes import ConstraintWitness, PolytopeKind, check_cone_vector
from .rational import format_rational, parse_rational

Matrix = tuple[tuple[Fraction, ...], ...]


class ProjectionError(GraphError):
    """A projection precondition failed; carries the offending (row, edge)."""

    def __init__(self, row: int, edge: int, message: str):
        super().__init__(message)
        self.row = row
        self.edge = edge


def matrix_from_rows(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    out = tuple(tuple(Fraction(v) for v in row) for row in rows)
    dim = len(out)
    for row in out:
        if len(row) != dim:
            raise GraphError("matrix must be square")
    return out


def matrix_to_json(matrix: Matrix) -> str:
    return json.dumps(
        [[format_rational(v) for v in row] for row in matrix], sort_keys=True
    )


def matrix_from_json(text: str) -> Matrix:
    rows = json.loads(text)
    return matrix_from_rows(
        [[parse_rational(cell) for cell in row] for row in rows]
    )


def build_cgk_matrix(g: LabeledGraph, family: FrameFamily) -> tuple[EdgeVector, Matrix]:
    """The all-2/3 point on the looped family and its frame-derived matrix.

    Off-diagonal entries are 1/3 on frame members and 1/2 elsewhere, so the
    family's membership symmetry is what makes the matrix symmetric; an
    asymmetric family is rejected outright.
    """
    m = g.m
    if len(family.frames) != m:
        raise GraphError("frame family does not match the graph")
    membership = family.membership
    for e1 in range(m):
        for e2 in membership[e1]:
            if e1 not in membership[e2]:
                raise FrameSymmetryError(e1, e2)

    two_thirds = Fraction(2, 3)
    third = Fraction(1, 3)
    half = Fraction(1, 2)
    x = tuple([two_thirds] * m)
    rows = [[Fraction(1)] + [two_thirds] * m]
    for e1 in range(m):
        row = [two_thirds] * (m + 1)
        row[0] = two_thirds
        row[e1 + 1] = two_thirds
        for e2 in range(m):
            if e2 == e1:
                continue
            row[e2 + 1] = third if e2 in membership[e1] else half
        rows.append(row)
    return x, matrix_from_rows(rows)


@dataclass(frozen=True)
class RowDerivedVectors:
    """The fixed value tables a matrix row and its complement rescale to."""

    row_point: EdgeVector  # 1 on the edge, 1/2 on its frame, 3/4 elsewhere
    complement_point: EdgeVector  # 0 on the edge, 1 on its frame, 1/2 elsewhere


def derive_row_vectors(g: LabeledGraph, family: FrameFamily, edge: int) -> RowDerivedVectors:
    members = family.membership[edge]
    row = []
    comp = []
    for f in range(g.m):
        if f == edge:
            row.append(Fraction(1))
            comp.append(Fraction(0))
        elif f in members:
            row.append(Fraction(1, 2))
            comp.append(Fraction(1))
        else:
            row.append(Fraction(3, 4))
            comp.append(Fraction(1, 2))
    return RowDerivedVectors(tuple(row), tuple(comp))


@dataclass(frozen=True)
class Violation:
    condition: str  # "shape" | "symmetry" | "row0" | "diagonal" | "row-cone" | "complement-cone"
    row: Optional[int] = None
    column: Optional[int] = None
    witness: Optional[ConstraintWitness] = None

    def to_json_obj(self) -> dict:
        return {
            "condition": self.condition,
            "row": self.row,
            "column": self.column,
            "witness": self.witness.to_json_obj() if self.witness else None,
        }


@dataclass(frozen=True)
class CertificateReport:
    certified: bool
    violations: tuple[Violation, ...]

    def to_json_obj(self) -> dict:
        return {
            "certified": self.certified,
            "violations": [v.to_json_obj() for v in self.violations],
        }


def verify_one_round(
    kind: PolytopeKind,
    g: LabeledGraph,
    x: Sequence[Fraction],
    matrix: Matrix,
) -> CertificateReport:
    """Check a protection matrix for x over the given polytope, exactly.

    Conditions: (i) symmetry, (ii) row 0 = diagonal = (1, x), (iii) every row
    and its complement against row 0 lie in the cone of the polytope.  All
    violations found are collected, never swallowed; an empty list certifies
    x in N(polytope).  When (i) or (ii) already failed the matrix is not a
    protection matrix and the per-row cone sweeps are skipped (their meaning
    presupposes the structure), which also keeps mutation sweeps cheap.
    """
    m = g.m
    violations: list[Violation] = []
    if len(matrix) != m + 1 or any(len(row) != m + 1 for row in matrix):
        return CertificateReport(False, (Violation("shape"),))
    if len(x) != m:
        raise GraphError("point must assign a value to every edge")

    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            if matrix[i][j] != matrix[j][i]:
                violations.append(Violation("symmetry", row=i, column=j))

    if matrix[0][0] != 1:
        violations.append(Violation("row0", row=0, column=0))
    for e in range(m):
        if matrix[0][e + 1] != x[e]:
            violations.append(Violation("row0", row=0, column=e + 1))
        if matrix[e + 1][e + 1] != matrix[0][e + 1]:
            violations.append(Violation("diagonal", row=e + 1, column=e + 1))
    if violations:
        return CertificateReport(False, tuple(violations))

    row0 = matrix[0]
    for e in range(m):
        row = matrix[e + 1]
        witness = check_cone_vector(kind, g, row)
        if witness is not None:
            violations.append(Violation("row-cone", row=e + 1, witness=witness))
        complement = [a - b for a, b in zip(row0, row)]
        witness = check_cone_vector(kind, g, complement)
        if witness is not None:
            violations.append(Violation("complement-cone", row=e + 1, witness=witness))

    return CertificateReport(certified=not violations, violations=tuple(violations))


def project_tour_to_path(matrix: Matrix, removed: Sequence[int]) -> Matrix:
    """Drop the rows/columns of edges pinned to 1, after checking they are.

    Every removed edge e must have X[0][e] = 1, and then every row must agree
    with its own 0th entry at e (the basic property of protection matrices a
    pinned coordinate forces).  Both are checked; a failure names (row, edge).
    """
    dim = len(matrix)
    cols = sorted(set(removed))
    for e in cols:
        if not (0 <= e < dim - 1):
            raise GraphError(f"removed edge {e} out of range")
    for e in cols:
        if matrix[0][e + 1] != 1:
            raise ProjectionError(
                0, e, f"edge {e} is not pinned: X[0][{e + 1}] != 1"
            )
    for i in range(dim):
        for e in cols:
            if matrix[i][e + 1] != matrix[i][0]:
                raise ProjectionError(
                    i, e,
                    f"row {i} disagrees at pinned edge {e}: "
                    f"X[{i}][{e + 1}] != X[{i}][0]",
                )
    drop = {e + 1 for e in cols}
    keep = [i for i in range(dim) if i not in drop]
    return tuple(tuple(matrix[i][j] for j in keep) for i in keep)


def moment_matrix(
    points: Sequence[Sequence[Fraction]], weights: Sequence[Fraction]
) -> tuple[EdgeVector, Matrix]:
    """Convex combination of outer products (1,p)(1,p)^T over 0/1 points."""
    if len(points) != len(weights) or not points:
        raise ValueError("need one weight per point")
    weights = [Fraction(w) for w in weights]
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    if sum(weights) != 1:
        raise ValueError("weights must sum to 1")
    m = len(points[0])
    for p in points:
        if len(p) != m:
            raise ValueError("points must share a dimension")
        if any(v not in (0, 1) for v in p):
            raise ValueError("points must be 0/1 vectors")

    x = [Fraction(0)] * m
    rows = [[Fraction(0)] * (m + 1) for _ in range(m + 1)]
    for p, w in zip(points, weights):
        lifted = [Fraction(1)] + [Fraction(v) for v in p]
        for i in range(m + 1):
            if lifted[i] == 0:
                continue
            wi = w * lifted[i]
            row = rows[i]
            for j in range(m + 1):
                if lifted[j] != 0:
                    row[j] += wi
        for e in range(m):
            x[e] += w * Fraction(p[e])
    return tuple(x), matrix_from_rows(rows)


def psd_check(matrix: Matrix) -> bool:
    """Exact positive-semidefiniteness via symmetric elimination."""
    dim = len(matrix)
    for i in range(dim):
        if len(matrix[i]) != dim:
            raise GraphError("matrix must be square")
        for j in range(i + 1, dim):
            if matrix[i][j] != matrix[j][i]:
                raise GraphError("psd check needs a symmetric matrix")
    work = [list(row) for row in matrix]
    for i in range(dim):
        pivot = work[i][i]
        if pivot < 0:
            return False
        if pivot == 0:
            if any(work[i][j] != 0 for j in range(i + 1, dim)):
                return False
            continue
        for a in range(i + 1, dim):
            if work[a][i] == 0:
                continue
            factor = work[a][i] / pivot
            row_i = work[i]
            row_a = work[a]
            for b in range(i, dim):
                row_a[b] -= factor * row_i[b]
    return True
