"""Classifying-space data, the universal Chern form, and the maps
gamma / iota / beta, plus the finite-group equivariant checks.

A multi-level transition datum (n+1 cocycle families g^(p) plus
intertwiners f^p) determines transitions between any two slots
(level, chart) of the (n+1)-fold cover: horizontal moves use the active
level's cocycle, vertical moves compose intertwiners, and the
square-commutation law makes the result path-independent.  gamma applies
the bare trace word with the operator d (no connection) to those slot
transitions; iota integrates over the fiber and attaches u-powers; beta
interprets the same data as product bundles with the flat local
connections, feeding the closed-formula cocycles.
"""

from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cech import CechCochain, Cover, ProductLevelCover, UPolyCochain
from .chern import (
    BundlePathData,
    BundleVertexData,
    _word_trace,
    tot_ch_table,
)
from .fiber import lift_tuple, step_positions, step_sign
from .forms import Chart, ConnectionMatrix, HoloForm, MatrixForm
from .linalg import RFMatrix
from .ratfunc import RationalFunction
from .report import Report
from .simplicial import Generator, nondegenerate_generators


class BGMapData:
    """n+1 transition families plus intertwiners, no connection choices.

    This is exactly the data of a simplicial map into the classifying
    object; beta() equips it with the flat local connections.
    """

    def __init__(
        self,
        cover: Cover,
        rank: int,
        level_transitions: Sequence[Mapping[Tuple[int, int], RFMatrix]],
        intertwiners: Optional[Mapping[Tuple[int, int], RFMatrix]] = None,
    ):
        levels = [BundleVertexData(cover, rank, dict(t)) for t in level_transitions]
        self._path = BundlePathData(levels, dict(intertwiners or {}))
        self.cover = cover
        self.rank = rank

    @property
    def n(self) -> int:
        return self._path.n

    def validate(self) -> Report:
        return self._path.validate()

    def beta(self) -> BundlePathData:
        """Product bundles with the flat connection on every level."""
        return self._path

    def slot_transition_form(self, x, y, anchor: int) -> MatrixForm:
        """The frame change from slot x = (level a, chart i) to slot
        y = (level b, chart j), a <= b, in the given anchor chart."""
        (a, i), (b, j) = x, y
        if b < a:
            raise ValueError("slot transitions go to weakly higher levels")
        horizontal = self._path.levels[a].transition_form(i, j, anchor) if i != j else None
        vertical = (
            self._path.intertwiner_form(b, a, j, anchor) if b > a else None
        )
        if horizontal is None and vertical is None:
            chart = self.cover.charts[anchor]
            return MatrixForm.identity(chart, self.rank)
        if horizontal is None:
            return vertical
        if vertical is None:
            return horizontal
        return vertical * horizontal


def beta(h: BGMapData) -> BundlePathData:
    return h.beta()


def gamma(h: BGMapData, max_tuple_len: Optional[int] = None) -> CechCochain:
    """The closed even cochain on the multi-level cover.

    Component on a slot tuple T: tr(H(T_0,T_r)^{-1} dH(T_{r-1},T_r) ^ ... ^
    dH(T_0,T_1)), Čech degree r, form degree r.
    """
    cover = ProductLevelCover(h.cover, h.n)
    if max_tuple_len is None:
        max_tuple_len = h.cover.max_tuple_len() + h.n
    comps: Dict[Tuple, HoloForm] = {}
    for t in cover.all_tuples(max_tuple_len):
        anchor = t[0][1]
        chart = h.cover.charts[anchor]
        if len(t) == 1:
            comps[t] = HoloForm.constant(chart, h.rank)
            continue
        zero = ConnectionMatrix.zero(chart, h.rank)
        word = [
            (h.slot_transition_form(t[m], t[m + 1], anchor), zero, zero)
            for m in range(len(t) - 1)
        ]
        form = _word_trace(word)
        if not form.is_zero:
            comps[t] = form
    return CechCochain(cover, comps)


def iota(
    c: CechCochain, max_level: Optional[int] = None
) -> Dict[Generator, UPolyCochain]:
    """Integrate a closed even cochain on the multi-level cover down to a
    chain-map table over the normalized chains of the level simplex."""
    if not isinstance(c.cover, ProductLevelCover):
        raise ValueError("iota expects a cochain on a product-level cover")
    for t, v in c.components.items():
        if (len(t) - 1 + v.degree()) % 2:
            raise ValueError(f"component on {t} has odd total degree")
    n = c.cover.k
    base = c.cover.base
    if max_level is None:
        max_level = base.max_tuple_len() - 1
    table: Dict[Generator, UPolyCochain] = {}
    for ell in range(n + 1):
        gen_sign = -1 if (ell * (ell - 1) // 2) % 2 else 1
        for g in nondegenerate_generators(n, ell):
            js = g.indices
            slices: Dict[int, Dict[Tuple, HoloForm]] = {}
            for t in base.all_tuples(max_level + 1):
                q = len(t) - 1
                acc: Dict[int, HoloForm] = {}
                for steps in step_positions(ell, q):
                    lifted = lift_tuple(t, steps)
                    relabeled = tuple((js[lvl], i) for lvl, i in lifted)
                    comp = c.component(relabeled)
                    if comp is None:
                        continue
                    m = (q + ell + comp.degree()) // 2
                    term = comp if step_sign(steps) > 0 else -comp
                    acc[m] = acc[m] + term if m in acc else term
                for m, form in acc.items():
                    if gen_sign < 0:
                        form = -form
                    if not form.is_zero:
                        slices.setdefault(m, {})[t] = form
            table[g] = UPolyCochain(
                base, {m: CechCochain(base, comps) for m, comps in slices.items()}
            )
    return table


def verify_square(h: BGMapData, max_level: Optional[int] = None) -> Report:
    """Exact equality of the two routes: integrate-the-closed-cochain versus
    the closed-formula cocycles of the flat-connection bundle data."""
    report = Report()
    validation = h.validate()
    report.add("square.data_valid", validation.ok, "" if validation.ok else validation.to_text())
    if not validation.ok:
        return report
    if max_level is None:
        max_level = h.cover.max_tuple_len() - 1
    closed = gamma(h, max_tuple_len=max_level + h.n + 1)
    left = iota(closed, max_level)
    right = tot_ch_table(h.beta(), max_level)
    for g in sorted(right, key=lambda g: (g.dim, g.indices)):
        diff = left[g] - right[g]
        witness = ""
        if not diff.is_zero:
            t, m, v = diff.items()[0]
            witness = f"tuple {t}, u^{m}: {v}"
        report.add(f"square.e{list(g.indices)}", diff.is_zero, witness)
    return report


# -- the universal Chern form ------------------------------------------------------


def matrix_group_chart(ell: int, n: int) -> Tuple[Chart, List[RFMatrix]]:
    """The chart of an ell-fold product of symbolic invertible n x n
    matrices, with the matrices themselves."""
    names = [f"g{m}_{r}{c}" for m in range(1, ell + 1) for r in range(1, n + 1) for c in range(1, n + 1)]
    chart = Chart(f"G{ell}", tuple(sorted(names)))
    mats = []
    for m in range(1, ell + 1):
        grid = [
            [RationalFunction.variable(f"g{m}_{r}{c}") for c in range(1, n + 1)]
            for r in range(1, n + 1)
        ]
        mats.append(RFMatrix(grid))
    return chart, mats


def universal_chern(ell: int, n: int) -> HoloForm:
    """The ell-form tr(g_1 .. g_ell d(g_ell^-1) ^ .. ^ d(g_1^-1)) on the
    chart of ell symbolic group elements; ell = 0 gives the constant n."""
    if ell < 0 or n < 1:
        raise ValueError("need ell >= 0 and n >= 1")
    chart, mats = matrix_group_chart(ell, n)
    if ell == 0:
        return HoloForm.constant(chart, n)
    product = MatrixForm.from_rfmatrix(chart, mats[0])
    for g in mats[1:]:
        product = product * MatrixForm.from_rfmatrix(chart, g)
    out = product
    for g in reversed(mats):
        out = out * MatrixForm.from_rfmatrix(chart, g.inverse()).d()
    return out.trace()


# -- finite-group actions ------------------------------------------------------------


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, elements: Sequence[str], identity: str, table: Mapping[Tuple[str, str], str]):
        self.elements = list(elements)
        self.identity = identity
        self.table = {tuple(k): v for k, v in table.items()}
        if identity not in self.elements:
            raise ValueError("identity not among elements")

    def mul(self, a: str, b: str) -> str:
        try:
            return self.table[(a, b)]
        except KeyError:
            raise ValueError(f"multiplication table missing ({a},{b})") from None

    def validate(self) -> Report:
        report = Report()
        closed = all(
            self.mul(a, b) in self.elements for a in self.elements for b in self.elements
        )
        report.add("group.closure", closed)
        ident = all(
            self.mul(self.identity, a) == a and self.mul(a, self.identity) == a
            for a in self.elements
        )
        report.add("group.identity", ident)
        assoc = all(
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
            for a in self.elements
            for b in self.elements
            for c in self.elements
        )
        report.add("group.associativity", assoc)
        inverses = all(
            any(self.mul(a, b) == self.identity for b in self.elements)
            for a in self.elements
        )
        report.add("group.inverses", inverses)
        return report


CoordMap = Mapping[str, RationalFunction]


class EquivariantBundleData:
    """A finite-group action lifted to a trivialized bundle with connection.

    action[(g, chart)] gives the coordinates of x.g in the chart's own
    coordinates (charts are assumed action-stable); lifts[(g, chart)] is
    the frame matrix of the action on fibers over that chart.
    """

    def __init__(
        self,
        cover: Cover,
        rank: int,
        group: FiniteGroup,
        action: Mapping[Tuple[str, int], CoordMap],
        lifts: Mapping[Tuple[str, int], RFMatrix],
        connections: Optional[Mapping[int, ConnectionMatrix]] = None,
    ):
        self.cover = cover
        self.rank = rank
        self.group = group
        self.action = {}
        self.lifts = {}
        for g in group.elements:
            for i in range(cover.n_charts):
                chart = cover.charts[i]
                if g == group.identity:
                    default_map = {c: RationalFunction.variable(c) for c in chart.coordinates}
                    self.action[(g, i)] = dict(action.get((g, i), default_map))
                    self.lifts[(g, i)] = lifts.get((g, i), RFMatrix.identity(rank))
                else:
                    self.action[(g, i)] = dict(action[(g, i)])
                    self.lifts[(g, i)] = lifts[(g, i)]
        self.connections = {}
        for i in range(cover.n_charts):
            if connections and i in connections:
                self.connections[i] = connections[i]
            else:
                self.connections[i] = ConnectionMatrix.zero(cover.charts[i], rank)

    def act_pullback(self, value, g: str, i: int):
        """Pull a form/matrix on chart i back along the action of g."""
        chart = self.cover.charts[i]
        return value.pullback(chart, self.action[(g, i)])

    def compose_actions(self, h: str, g: str, i: int) -> CoordMap:
        """The coordinate map of first h then g, i.e. of the element h*g."""
        fh = self.action[(h, i)]
        fg = self.action[(g, i)]
        return {v: expr.substitute(fh) for v, expr in fg.items()}

    def validate(self) -> Report:
        report = Report()
        report.extend(self.group.validate())
        bad_action = []
        bad_lifts = []
        for h in self.group.elements:
            for g in self.group.elements:
                hg = self.group.mul(h, g)
                for i in range(self.cover.n_charts):
                    composed = self.compose_actions(h, g, i)
                    direct = self.action[(hg, i)]
                    if any(direct[v] != composed[v] for v in direct):
                        bad_action.append((h, g, i))
                    chart = self.cover.charts[i]
                    lift_g = MatrixForm.from_rfmatrix(chart, self.lifts[(g, i)])
                    pulled = self.act_pullback(lift_g, h, i)
                    lift_h = MatrixForm.from_rfmatrix(chart, self.lifts[(h, i)])
                    lift_hg = MatrixForm.from_rfmatrix(chart, self.lifts[(hg, i)])
                    if not (pulled * lift_h - lift_hg).is_zero:
                        bad_lifts.append((h, g, i))
        report.add(
            "equivariant.action_composition",
            not bad_action,
            "" if not bad_action else f"violated at {bad_action}",
        )
        report.add(
            "equivariant.lift_composition",
            not bad_lifts,
            "" if not bad_lifts else f"violated at {bad_lifts}",
        )
        invertible = all(not m.det().is_zero for m in self.lifts.values())
        report.add("equivariant.lifts_invertible", invertible)
        return report

    def nabla_phi(self, g: str, i: int) -> MatrixForm:
        """The invariance defect d(phi_g) + (rho_g^* A) phi_g - phi_g A."""
        chart = self.cover.charts[i]
        phi = MatrixForm.from_rfmatrix(chart, self.lifts[(g, i)])
        a = self.connections[i].matrix
        pulled_a = self.act_pullback(a, g, i)
        return phi.d() + pulled_a * phi - phi * a

    def word_component(self, word: Sequence[str], i: int) -> HoloForm:
        """The trace word of the action lifts along a group word, over one
        chart: the group-direction Chern component of u-power len(word)."""
        chart = self.cover.charts[i]
        a0 = self.connections[i]
        entries = []
        prefix = self.group.identity
        conn_prev = a0
        for g in word:
            phi = MatrixForm.from_rfmatrix(chart, self.lifts[(g, i)])
            h = self.act_pullback(phi, prefix, i)
            prefix = self.group.mul(prefix, g)
            conn_next = ConnectionMatrix(
                chart, self.act_pullback(a0.matrix, prefix, i)
            )
            entries.append((h, conn_prev, conn_next))
            conn_prev = conn_next
        return _word_trace(entries)


def equivariant_check(data: EquivariantBundleData, word_bound: Optional[int] = None) -> Report:
    """Report the invariance defects and the vanishing of all
    positive-u-degree components when the connection is invariant."""
    report = data.validate()
    if not report.ok:
        return report
    nontrivial = [g for g in data.group.elements if g != data.group.identity]
    defects = []
    for g in nontrivial:
        for i in range(data.cover.n_charts):
            defect = data.nabla_phi(g, i)
            if not defect.is_zero:
                witness = "; ".join(
                    str(defect[r, c]) for r in range(data.rank) for c in range(data.rank)
                    if not defect[r, c].is_zero
                )
                defects.append((g, i, witness))
    report.add(
        "equivariant.connection_invariant",
        not defects,
        "" if not defects else "; ".join(f"nabla(phi_{g}) on chart {i}: {w}" for g, i, w in defects),
    )
    if word_bound is None:
        word_bound = len(data.group.elements)
    words: List[Tuple[str, ...]] = [()]
    nonzero = []
    for _ in range(word_bound):
        words = [w + (g,) for w in words for g in data.group.elements]
        for w in words:
            for i in range(data.cover.n_charts):
                form = data.word_component(w, i)
                if not form.is_zero:
                    nonzero.append((w, i, str(form)))
    if not defects:
        report.add(
            "equivariant.positive_components_zero",
            not nonzero,
            "" if not nonzero else f"first: word {nonzero[0][0]} chart {nonzero[0][1]}: {nonzero[0][2]}",
        )
    else:
        report.add(
            "equivariant.components_computed",
            True,
            f"{len(nonzero)} nonzero positive-degree components",
        )
    return report
