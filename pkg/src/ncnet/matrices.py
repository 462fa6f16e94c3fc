"""Matrices over the path algebra, including boundary measurement matrices."""

from __future__ import annotations

from .scalars import SpectralScalar
from .words import CompositionError, Element, LoopMix


class ElementMatrix:
    """Dense matrix of Elements; rows/cols carry the boundary object ids."""

    __slots__ = ("row_objs", "col_objs", "entries")

    def __init__(self, row_objs: list, col_objs: list, entries: list):
        self.row_objs = list(row_objs)
        self.col_objs = list(col_objs)
        self.entries = entries
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                if e.source != self.row_objs[i] or e.target != self.col_objs[j]:
                    raise CompositionError(
                        f"entry ({i + 1},{j + 1}) endpoints {e.source}->{e.target} do"
                        f" not match {self.row_objs[i]}->{self.col_objs[j]}"
                    )

    @property
    def nrows(self) -> int:
        return len(self.row_objs)

    @property
    def ncols(self) -> int:
        return len(self.col_objs)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i - 1][j - 1]

    @staticmethod
    def identity(objs: list) -> "ElementMatrix":
        n = len(objs)
        entries = [
            [
                Element.one(objs[i]) if i == j else Element.zero(objs[i], objs[j])
                for j in range(n)
            ]
            for i in range(n)
        ]
        return ElementMatrix(objs, objs, entries)

    @staticmethod
    def zero(row_objs: list, col_objs: list) -> "ElementMatrix":
        entries = [
            [Element.zero(r, c) for c in col_objs] for r in row_objs
        ]
        return ElementMatrix(row_objs, col_objs, entries)

    def __add__(self, other: "ElementMatrix") -> "ElementMatrix":
        entries = [
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.entries, other.entries)
        ]
        return ElementMatrix(self.row_objs, self.col_objs, entries)

    def __sub__(self, other: "ElementMatrix") -> "ElementMatrix":
        entries = [
            [a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.entries, other.entries)
        ]
        return ElementMatrix(self.row_objs, self.col_objs, entries)

    def __mul__(self, other: "ElementMatrix") -> "ElementMatrix":
        if self.ncols != other.nrows:
            raise CompositionError(
                f"matrix shapes {self.nrows}x{self.ncols} and"
                f" {other.nrows}x{other.ncols} do not compose"
            )
        out = ElementMatrix.zero(self.row_objs, other.col_objs)
        for i in range(self.nrows):
            for j in range(other.ncols):
                acc = out.entries[i][j]
                for k in range(self.ncols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                out.entries[i][j] = acc
        return out

    def scale(self, c: SpectralScalar) -> "ElementMatrix":
        entries = [[e.scale(c) for e in row] for row in self.entries]
        return ElementMatrix(self.row_objs, self.col_objs, entries)

    def map_entries(self, f) -> "ElementMatrix":
        entries = [[f(e) for e in row] for row in self.entries]
        return ElementMatrix(self.row_objs, self.col_objs, entries)

    def power(self, k: int) -> "ElementMatrix":
        if self.row_objs != self.col_objs:
            raise CompositionError("powers need a square matrix on one object list")
        out = ElementMatrix.identity(self.row_objs)
        for _ in range(k):
            out = out * self
        return out

    def substitute(self, mapping) -> "ElementMatrix":
        return self.map_entries(lambda e: e.substitute(mapping))

    def trace_mix(self) -> LoopMix:
        if self.row_objs != self.col_objs:
            raise CompositionError("trace needs a square matrix")
        out = LoopMix()
        for i in range(self.nrows):
            for w, c in self.entries[i][i].terms.items():
                out._add_term(w, c)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, ElementMatrix)
            and self.row_objs == other.row_objs
            and self.col_objs == other.col_objs
            and self.entries == other.entries
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __str__(self):
        rows = []
        for row in self.entries:
            rows.append("[" + ", ".join(str(e) for e in row) + "]")
        return "[" + ",\n ".join(rows) + "]"

    def __repr__(self):
        return f"ElementMatrix({self.nrows}x{self.ncols})"
