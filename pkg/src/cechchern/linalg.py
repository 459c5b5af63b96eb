"""Matrices over the rational-function field.

Inverses go through adjugate/determinant so entries stay inside the field;
determinants are computed by cofactor expansion, which is fine at the
small ranks this library works with.
"""

from __future__ import annotations

from typing import Callable, List, Sequence

from .ratfunc import RationalFunction


class SingularMatrixError(ValueError):
    pass


class RFMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[RationalFunction]]):
        rows = len(entries)
        if rows == 0:
            raise ValueError("empty matrix")
        cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        grid = tuple(tuple(_coerce(x) for x in row) for row in entries)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", grid)

    def __setattr__(self, name, value):
        raise AttributeError("RFMatrix is immutable")

    @staticmethod
    def identity(n: int) -> "RFMatrix":
        one = RationalFunction.one()
        zero = RationalFunction.zero()
        return RFMatrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def diagonal(values: Sequence[RationalFunction]) -> "RFMatrix":
        zero = RationalFunction.zero()
        n = len(values)
        return RFMatrix([[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __add__(self, other: "RFMatrix") -> "RFMatrix":
        self._shape_match(other)
        return RFMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "RFMatrix") -> "RFMatrix":
        self._shape_match(other)
        return RFMatrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __mul__(self, other):
        if isinstance(other, RFMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
            return RFMatrix(
                [
                    [
                        sum(
                            (self.entries[i][k] * other.entries[k][j] for k in range(self.cols)),
                            RationalFunction.zero(),
                        )
                        for j in range(other.cols)
                    ]
                    for i in range(self.rows)
                ]
            )
        return self.map_entries(lambda e: e * other)

    def __rmul__(self, other):
        return self.map_entries(lambda e: _coerce(other) * e)

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def map_entries(self, fn: Callable[[RationalFunction], RationalFunction]) -> "RFMatrix":
        return RFMatrix([[fn(e) for e in row] for row in self.entries])

    def transpose(self) -> "RFMatrix":
        return RFMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def det(self) -> RationalFunction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        return _det(self.entries)

    def adjugate(self) -> "RFMatrix":
        if not self.is_square:
            raise ValueError("adjugate of a non-square matrix")
        n = self.rows
        if n == 1:
            return RFMatrix([[RationalFunction.one()]])
        cof: List[List[RationalFunction]] = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [
                    [self.entries[r][c] for c in range(n) if c != j]
                    for r in range(n)
                    if r != i
                ]
                sign = -1 if (i + j) % 2 else 1
                row.append(_det(tuple(tuple(r) for r in minor)) * sign)
            cof.append(row)
        return RFMatrix(cof).transpose()

    def inverse(self) -> "RFMatrix":
        """Exact inverse via adjugate/determinant."""
        d = self.det()
        if d.is_zero:
            raise SingularMatrixError("matrix has identically zero determinant")
        inv = d.inverse()
        return self.adjugate().map_entries(lambda e: e * inv)

    def trace(self) -> RationalFunction:
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), RationalFunction.zero())

    def substitute(self, mapping) -> "RFMatrix":
        return self.map_entries(lambda e: e.substitute(mapping))

    @property
    def is_identity(self) -> bool:
        if not self.is_square:
            return False
        for i in range(self.rows):
            for j in range(self.cols):
                e = self.entries[i][j]
                if (i == j and not e.is_one) or (i != j and not e.is_zero):
                    return False
        return True

    def _shape_match(self, other: "RFMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("matrix shape mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RFMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        rows = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"RFMatrix[{rows}]"


def _coerce(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction.const(x) if not hasattr(x, "num") else x


def _det(grid) -> RationalFunction:
    n = len(grid)
    if n == 1:
        return grid[0][0]
    if n == 2:
        return grid[0][0] * grid[1][1] - grid[0][1] * grid[1][0]
    total = RationalFunction.zero()
    rest = [row[1:] for row in grid]
    for i in range(n):
        if grid[i][0].is_zero:
            continue
        minor = tuple(tuple(rest[r]) for r in range(n) if r != i)
        term = grid[i][0] * _det(minor)
        total = total + (term if i % 2 == 0 else -term)
    return total


def matrix_inverse(m: RFMatrix) -> RFMatrix:
    """Function-style alias: exact inverse of a square invertible matrix."""
    return m.inverse()
