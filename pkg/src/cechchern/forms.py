"""Holomorphic differential forms with rational-function coefficients.

A HoloForm lives on a named chart and stores coefficients keyed by the
strictly increasing tuple of coordinate indices spanning each wedge
monomial dz_{i1} ^ ... ^ dz_{ik}.  The holomorphic de Rham operator, the
wedge product, pullback along rational maps and the induced connection on
Hom-bundles all act on this representation.

Sign conventions: wedge merging counts transpositions of the index
tuples; the induced connection on a degree-0 morphism f is
nabla(f) = d(f) + A_dst * f - f * A_src.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Sequence, Tuple

from .linalg import RFMatrix
from .ratfunc import RationalFunction

IndexTuple = Tuple[int, ...]


@dataclass(frozen=True)
class Chart:
    """A coordinate chart: a name plus an ordered tuple of coordinates."""

    name: str
    coordinates: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.coordinates)) != len(self.coordinates):
            raise ValueError(f"duplicate coordinates in chart {self.name}")

    def index_of(self, coordinate: str) -> int:
        return self.coordinates.index(coordinate)


class ChartMismatchError(ValueError):
    pass


def _merge_wedge(a: IndexTuple, b: IndexTuple):
    """Merge two strictly increasing index tuples; None when they collide.

    Returns (merged tuple, Koszul sign from sorting the concatenation).
    """
    if set(a) & set(b):
        return None, 0
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining len(a) - i entries of a
            if (len(a) - i) % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


class HoloForm:
    """A holomorphic form on a chart; mixed degrees are allowed."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Mapping[IndexTuple, RationalFunction]):
        clean: Dict[IndexTuple, RationalFunction] = {}
        n = len(chart.coordinates)
        for idx, coeff in terms.items():
            idx = tuple(idx)
            if any(i < 0 or i >= n for i in idx) or list(idx) != sorted(set(idx)):
                raise ValueError(f"bad wedge index tuple {idx} on chart {chart.name}")
            if not coeff.is_zero:
                clean[idx] = coeff
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("HoloForm is immutable")

    # -- construction -----------------------------------------------------------

    @staticmethod
    def zero(chart: Chart) -> "HoloForm":
        return HoloForm(chart, {})

    @staticmethod
    def function(chart: Chart, f: RationalFunction) -> "HoloForm":
        return HoloForm(chart, {(): f})

    @staticmethod
    def constant(chart: Chart, c) -> "HoloForm":
        return HoloForm.function(chart, RationalFunction.const(c))

    @staticmethod
    def d_coord(chart: Chart, coordinate: str) -> "HoloForm":
        return HoloForm(chart, {(chart.index_of(coordinate),): RationalFunction.one()})

    # -- queries ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(i) for i in self.terms}

    def degree(self) -> int:
        """The degree of a pure-degree form (zero counts as degree 0)."""
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) > 1:
            raise ValueError(f"mixed-degree form: degrees {sorted(ds)}")
        return ds.pop()

    @property
    def is_pure(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, idx: IndexTuple) -> RationalFunction:
        return self.terms.get(tuple(idx), RationalFunction.zero())

    # -- linear structure --------------------------------------------------------

    def _check_chart(self, other: "HoloForm"):
        if self.chart != other.chart:
            raise ChartMismatchError(
                f"forms live on different charts: {self.chart.name} vs {other.chart.name}"
            )

    def __add__(self, other: "HoloForm") -> "HoloForm":
        self._check_chart(other)
        terms = dict(self.terms)
        for idx, c in other.terms.items():
            s = terms.get(idx, RationalFunction.zero()) + c
            if s.is_zero:
                terms.pop(idx, None)
            else:
                terms[idx] = s
        return HoloForm(self.chart, terms)

    def __sub__(self, other: "HoloForm") -> "HoloForm":
        return self + (-other)

    def __neg__(self) -> "HoloForm":
        return HoloForm(self.chart, {i: -c for i, c in self.terms.items()})

    def scale(self, c) -> "HoloForm":
        if not isinstance(c, RationalFunction):
            c = RationalFunction.const(c)
        return HoloForm(self.chart, {i: x * c for i, x in self.terms.items()})

    # -- multiplicative structure ---------------------------------------------------

    def wedge(self, other: "HoloForm") -> "HoloForm":
        self._check_chart(other)
        out: Dict[IndexTuple, RationalFunction] = {}
        for ia, ca in self.terms.items():
            for ib, cb in other.terms.items():
                merged, sign = _merge_wedge(ia, ib)
                if merged is None:
                    continue
                c = ca * cb
                if sign < 0:
                    c = -c
                s = out.get(merged, RationalFunction.zero()) + c
                if s.is_zero:
                    out.pop(merged, None)
                else:
                    out[merged] = s
        return HoloForm(self.chart, out)

    def d(self) -> "HoloForm":
        """The holomorphic exterior derivative (coefficient-wise d)."""
        out: Dict[IndexTuple, RationalFunction] = {}
        for idx, c in self.terms.items():
            for j, coord in enumerate(self.chart.coordinates):
                if j in idx:
                    continue
                dc = c.derivative(coord)
                if dc.is_zero:
                    continue
                merged, sign = _merge_wedge((j,), idx)
                if sign < 0:
                    dc = -dc
                s = out.get(merged, RationalFunction.zero()) + dc
                if s.is_zero:
                    out.pop(merged, None)
                else:
                    out[merged] = s
        return HoloForm(self.chart, out)

    def pullback(self, target: Chart, mapping: Mapping[str, RationalFunction]) -> "HoloForm":
        """Pull back along the rational map target -> self.chart.

        mapping supplies, for each coordinate of self.chart, its expression
        in the coordinates of the target chart.
        """
        subs = {}
        for coord in self.chart.coordinates:
            if coord not in mapping:
                raise ValueError(f"pullback map missing coordinate {coord!r}")
            subs[coord] = mapping[coord]
        d_images = {}
        for coord in self.chart.coordinates:
            img = HoloForm.zero(target)
            expr = subs[coord]
            for j, tcoord in enumerate(target.coordinates):
                dc = expr.derivative(tcoord)
                if not dc.is_zero:
                    img = img + HoloForm(target, {(j,): dc})
            d_images[coord] = img
        out = HoloForm.zero(target)
        for idx, c in self.terms.items():
            term = HoloForm.function(target, c.substitute(subs))
            for i in idx:
                term = term.wedge(d_images[self.chart.coordinates[i]])
            out = out + term
        return out

    # -- equality / display -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, HoloForm):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        return form_str(self)

    def __repr__(self):
        return f"HoloForm<{form_str(self)} on {self.chart.name}>"


def form_str(form: HoloForm) -> str:
    """Canonical rendering: terms sorted by wedge index tuple."""
    if form.is_zero:
        return "0"
    pieces = []
    for idx in sorted(form.terms, key=lambda t: (len(t), t)):
        c = form.terms[idx]
        body = f"({c})"
        if idx:
            wedge = "^".join("d" + form.chart.coordinates[i] for i in idx)
            body = f"{body}*{wedge}"
        pieces.append(body)
    return " + ".join(pieces)


def partial_d(form: HoloForm) -> HoloForm:
    """Function-style alias for the holomorphic exterior derivative."""
    return form.d()


def wedge(a: HoloForm, b: HoloForm) -> HoloForm:
    return a.wedge(b)


def pullback(form: HoloForm, target: Chart, mapping: Mapping[str, RationalFunction]) -> HoloForm:
    return form.pullback(target, mapping)


class MatrixForm:
    """A rectangular matrix of HoloForms on a common chart."""

    __slots__ = ("chart", "rows", "cols", "entries")

    def __init__(self, chart: Chart, entries: Sequence[Sequence[HoloForm]]):
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix of forms")
        for row in entries:
            for e in row:
                if e.chart != chart:
                    raise ChartMismatchError("matrix entry on a different chart")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(tuple(row) for row in entries))

    def __setattr__(self, name, value):
        raise AttributeError("MatrixForm is immutable")

    @staticmethod
    def zero(chart: Chart, rows: int, cols: int) -> "MatrixForm":
        z = HoloForm.zero(chart)
        return MatrixForm(chart, [[z] * cols for _ in range(rows)])

    @staticmethod
    def identity(chart: Chart, n: int) -> "MatrixForm":
        one = HoloForm.constant(chart, 1)
        z = HoloForm.zero(chart)
        return MatrixForm(chart, [[one if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_rfmatrix(chart: Chart, m: RFMatrix) -> "MatrixForm":
        return MatrixForm(
            chart, [[HoloForm.function(chart, e) for e in row] for row in m.entries]
        )

    def to_rfmatrix(self) -> RFMatrix:
        """Extract the degree-0 part as a plain function matrix."""
        grid = []
        for row in self.entries:
            out = []
            for e in row:
                if any(idx for idx in e.terms):
                    raise ValueError("matrix has positive-degree entries")
                out.append(e.coefficient(()))
            grid.append(out)
        return RFMatrix(grid)

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __add__(self, other: "MatrixForm") -> "MatrixForm":
        self._shape_match(other)
        return MatrixForm(
            self.chart,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, other: "MatrixForm") -> "MatrixForm":
        return self + (-other)

    def __neg__(self) -> "MatrixForm":
        return MatrixForm(self.chart, [[-e for e in row] for row in self.entries])

    def __mul__(self, other: "MatrixForm") -> "MatrixForm":
        if not isinstance(other, MatrixForm):
            return NotImplemented
        if self.chart != other.chart:
            raise ChartMismatchError("matrix product across charts")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        z = HoloForm.zero(self.chart)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    acc = acc + self.entries[i][k].wedge(other.entries[k][j])
                row.append(acc)
            out.append(row)
        return MatrixForm(self.chart, out)

    def scale(self, c) -> "MatrixForm":
        return MatrixForm(self.chart, [[e.scale(c) for e in row] for row in self.entries])

    def map_entries(self, fn: Callable[[HoloForm], HoloForm]) -> "MatrixForm":
        grid = [[fn(e) for e in row] for row in self.entries]
        chart = grid[0][0].chart if grid and grid[0] else self.chart
        return MatrixForm(chart, grid)

    def d(self) -> "MatrixForm":
        return MatrixForm(self.chart, [[e.d() for e in row] for row in self.entries])

    def pullback(self, target: Chart, mapping) -> "MatrixForm":
        return MatrixForm(
            target, [[e.pullback(target, mapping) for e in row] for row in self.entries]
        )

    def trace(self) -> HoloForm:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix of forms")
        acc = HoloForm.zero(self.chart)
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.entries for e in row)

    def degrees(self) -> set:
        out = set()
        for row in self.entries:
            for e in row:
                out |= e.degrees()
        return out

    def _shape_match(self, other: "MatrixForm"):
        if self.rows != other.rows or self.cols != other.cols or self.chart != other.chart:
            raise ValueError("matrix shape or chart mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixForm):
            return NotImplemented
        return self.chart == other.chart and self.entries == other.entries

    def __repr__(self):
        return f"MatrixForm({self.rows}x{self.cols} on {self.chart.name})"


@dataclass(frozen=True)
class ConnectionMatrix:
    """Local connection nabla = d + A; A is an r x r matrix of 1-forms."""

    chart: Chart
    matrix: MatrixForm

    def __post_init__(self):
        if self.matrix.chart != self.chart:
            raise ChartMismatchError("connection matrix on the wrong chart")
        degs = self.matrix.degrees()
        if degs - {1}:
            raise ValueError(f"connection matrix must be pure degree 1, found degrees {sorted(degs)}")

    @staticmethod
    def zero(chart: Chart, rank: int) -> "ConnectionMatrix":
        return ConnectionMatrix(chart, MatrixForm.zero(chart, rank, rank))

    @property
    def rank(self) -> int:
        return self.matrix.rows

    def pullback(self, target: Chart, mapping) -> "ConnectionMatrix":
        return ConnectionMatrix(target, self.matrix.pullback(target, mapping))


def apply_connection(f: MatrixForm, a_src: ConnectionMatrix, a_dst: ConnectionMatrix) -> MatrixForm:
    """Induced connection on Hom: nabla(f) = d(f) + A_dst f - f A_src.

    f must be a degree-0 matrix (a morphism in local frames); the result is
    the degree-1 matrix of its covariant derivative.
    """
    if f.degrees() - {0}:
        raise ValueError("apply_connection expects a degree-0 matrix")
    if a_dst.rank != f.rows or a_src.rank != f.cols:
        raise ValueError("connection rank does not match morphism shape")
    if a_src.chart != f.chart or a_dst.chart != f.chart:
        raise ChartMismatchError("connections and morphism must share a chart")
    return f.d() + a_dst.matrix * f - f * a_src.matrix


def trace_form(m: MatrixForm) -> HoloForm:
    return m.trace()
