"""Immutable dense matrices over an exact field."""

from __future__ import annotations

from typing import Iterable, Sequence

from .fields import Field, FieldError, Scalar


class ShapeError(ValueError):
    """Operand sizes or fields do not match."""


class Matrix:
    __slots__ = ("field", "rows", "cols", "data", "_hash")

    def __init__(self, field: Field, rows: int, cols: int, data: tuple[tuple, ...]):
        # trusted constructor: entries must already be field elements
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data
        self._hash = None

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(field.coerce(x.value if isinstance(x, Scalar) else x) for x in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise ShapeError("ragged rows")
        return cls(field, len(data), cols, data)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, field: Field, values: Iterable) -> "Matrix":
        vals = [field.coerce(v) for v in values]
        return cls(field, len(vals), 1, tuple((v,) for v in vals))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls(field, rows, len(columns), tuple(tuple(col[i] for col in columns) for i in range(rows)))

    # -- access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.data[i][j])

    def row(self, i: int) -> tuple:
        return self.data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.data == other.data
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.data)
        return f"Matrix[{self.field.name}]({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic -----------------------------------------------------------
    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.field != other.field:
            raise FieldError(f"field mismatch {self.field.name} vs {other.field.name}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        add = self.field.add
        return Matrix(
            self.field, self.rows, self.cols,
            tuple(tuple(add(x, y) for x, y in zip(r, s)) for r, s in zip(self.data, other.data)),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        sub = self.field.sub
        return Matrix(
            self.field, self.rows, self.cols,
            tuple(tuple(sub(x, y) for x, y in zip(r, s)) for r, s in zip(self.data, other.data)),
        )

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(neg(x) for x in r) for r in self.data))

    def scale(self, a) -> "Matrix":
        F = self.field
        a = F.coerce(a.value if isinstance(a, Scalar) else a)
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(F.mul(a, x) for x in r) for r in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.field != other.field:
            raise FieldError(f"field mismatch {self.field.name} vs {other.field.name}")
        F = self.field
        add, mul, zero = F.add, F.mul, F.zero
        cols = other.columns()
        out = []
        for r in self.data:
            row = []
            for col in cols:
                acc = zero
                for x, y in zip(r, col):
                    if x != zero and y != zero:
                        acc = add(acc, mul(x, y))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(F, self.rows, other.cols, tuple(out))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.rows != self.rows for m in mats):
            raise ShapeError("hstack needs equal row counts")
        data = tuple(sum((m.data[i] for m in mats), ()) for i in range(self.rows))
        return Matrix(self.field, self.rows, sum(m.cols for m in mats), data)

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.cols != self.cols for m in mats):
            raise ShapeError("vstack needs equal column counts")
        return Matrix(self.field, sum(m.rows for m in mats), self.cols, sum((m.data for m in mats), ()))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def select_columns(self, cols: Sequence[int]) -> "Matrix":
        return self.submatrix(range(self.rows), cols)

    def map(self, func, field: Field | None = None) -> "Matrix":
        """Apply ``func`` entrywise, optionally landing in another field (embeddings)."""
        return Matrix(field or self.field, self.rows, self.cols, tuple(tuple(func(x) for x in r) for r in self.data))

    def format_rows(self) -> list[list[str]]:
        return [[self.field.format(x) for x in r] for r in self.data]


def block(field: Field, grid: Sequence[Sequence[Matrix]]) -> Matrix:
    rows = [grid_row[0].hstack(*grid_row[1:]) for grid_row in grid]
    return rows[0].vstack(*rows[1:])
