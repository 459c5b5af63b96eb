"""Chern character cocycles from transition-function data.

Storage convention: trans[(a, b)] is the frame change FROM chart a TO
chart b over the overlap, expressed in the anchor chart min(a, b); with
this orientation the rank-one cocycle with trans[(0, 1)] = z^n produces
the component n * dz/z * u on the pair (0, 1).  Cocycle law:
trans[(b, c)] * trans[(a, b)] = trans[(a, c)].  Intertwiners f^p_i sit
over single charts and satisfy the square-commutation law
f^p_b * trans^{(p-1)}[(a, b)] = trans^{(p)}[(a, b)] * f^p_a.

The trace words follow the master pattern

    tr( (w_L ... w_1)^{-1} nabla(w_L) ^ ... ^ nabla(w_1) ) * u^L

with nabla the induced Hom-connection of each factor's endpoints.
"""

from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cech import CechCochain, Cover, UPolyCochain
from .forms import ConnectionMatrix, HoloForm, MatrixForm, apply_connection, trace_form
from .linalg import RFMatrix
from .fiber import step_positions
from .report import Report
from .simplicial import Generator, nondegenerate_generators, shuffles


class BundleDataError(ValueError):
    pass


class BundleVertexData:
    """Rank-r transition data with per-chart holomorphic connections."""

    def __init__(
        self,
        cover: Cover,
        rank: int,
        transitions: Mapping[Tuple[int, int], RFMatrix],
        connections: Optional[Mapping[int, ConnectionMatrix]] = None,
    ):
        self.cover = cover
        self.rank = rank
        trans: Dict[Tuple[int, int], RFMatrix] = {}
        for (a, b), m in transitions.items():
            if a == b:
                raise BundleDataError("transitions are stored for distinct chart pairs")
            if not cover.is_declared(tuple(sorted((a, b)))):
                raise BundleDataError(f"transition on undeclared overlap ({a},{b})")
            if m.rows != rank or m.cols != rank:
                raise BundleDataError(f"transition ({a},{b}) has wrong shape")
            trans[(a, b)] = m
        # complete the reverse directions (g_{ii} = identity is implicit)
        for (a, b), m in list(trans.items()):
            if (b, a) not in trans:
                trans[(b, a)] = m.inverse()
        self.transitions = trans
        conns: Dict[int, ConnectionMatrix] = {}
        for i in range(cover.n_charts):
            if connections and i in connections:
                c = connections[i]
                if c.rank != rank:
                    raise BundleDataError(f"connection on chart {i} has wrong rank")
                if c.chart != cover.charts[i]:
                    raise BundleDataError(f"connection on chart {i} lives on the wrong chart")
                conns[i] = c
            else:
                conns[i] = ConnectionMatrix.zero(cover.charts[i], rank)
        self.connections = conns
        # anchored transitions and connections are pure lookups; memoize
        self._tform_cache: Dict[Tuple[int, int, int], MatrixForm] = {}
        self._conn_cache: Dict[Tuple[int, int], ConnectionMatrix] = {}

    def transition(self, a: int, b: int) -> RFMatrix:
        """The frame change from chart a to chart b, in chart min(a,b)."""
        if a == b:
            return RFMatrix.identity(self.rank)
        try:
            return self.transitions[(a, b)]
        except KeyError:
            raise BundleDataError(f"no transition for pair ({a},{b})") from None

    def transition_form(self, a: int, b: int, anchor: int) -> MatrixForm:
        """The transition as a degree-0 matrix form in a given anchor chart."""
        key = (a, b, anchor)
        if key not in self._tform_cache:
            m = self.transition(a, b)
            src = min(a, b)
            form = MatrixForm.from_rfmatrix(self.cover.charts[src], m)
            self._tform_cache[key] = _pull_matrix(self.cover, form, src, anchor)
        return self._tform_cache[key]

    def connection_in(self, i: int, anchor: int) -> ConnectionMatrix:
        if i == anchor:
            return self.connections[i]
        key = (i, anchor)
        if key not in self._conn_cache:
            a = self.connections[i]
            self._conn_cache[key] = ConnectionMatrix(
                self.cover.charts[anchor],
                a.matrix.pullback(self.cover.charts[anchor], self.cover.change_map(i, anchor)),
            )
        return self._conn_cache[key]

    def validate(self) -> Report:
        report = Report()
        bad_inv = []
        for (a, b), m in sorted(self.transitions.items()):
            if m.det().is_zero:
                bad_inv.append((a, b))
        report.add(
            "bundle.transitions_invertible",
            not bad_inv,
            "" if not bad_inv else f"singular at {bad_inv}",
        )
        bad_pairs = []
        for (a, b) in sorted(self.transitions):
            if a < b:
                prod = self.transitions[(b, a)] * self.transitions[(a, b)]
                if not prod.is_identity:
                    bad_pairs.append((a, b))
        report.add(
            "bundle.inverse_pairs",
            not bad_pairs,
            "" if not bad_pairs else f"g_ba * g_ab != 1 at {bad_pairs}",
        )
        bad_triples = []
        for t in self.cover.all_tuples():
            if len(t) != 3:
                continue
            a, b, c = t
            anchor = a
            gab = self.transition_form(a, b, anchor)
            gbc = self.transition_form(b, c, anchor)
            gac = self.transition_form(a, c, anchor)
            if not (gbc * gab - gac).is_zero:
                bad_triples.append(t)
        report.add(
            "bundle.cocycle",
            not bad_triples,
            "" if not bad_triples else f"violated at {bad_triples}",
        )
        return report


class BundlePathData:
    """n+1 transition families on one cover plus intertwiners f^p_i.

    Level p data describes the bundle E^(p); f^p_i : E^(p-1)_i -> E^(p)_i
    over chart i, subject to the square-commutation law with both levels.
    """

    def __init__(
        self,
        levels: Sequence[BundleVertexData],
        intertwiners: Mapping[Tuple[int, int], RFMatrix],
    ):
        if not levels:
            raise BundleDataError("at least one level required")
        covers = {id(v.cover) for v in levels}
        if len(covers) != 1:
            raise BundleDataError("levels must share one cover")
        ranks = {v.rank for v in levels}
        if len(ranks) != 1:
            raise BundleDataError("levels must share one rank")
        self.levels = list(levels)
        self.cover = levels[0].cover
        self.rank = levels[0].rank
        self.intertwiners = {}
        for p in range(1, len(levels)):
            for i in range(self.cover.n_charts):
                try:
                    f = intertwiners[(p, i)]
                except KeyError:
                    raise BundleDataError(f"missing intertwiner f^{p} on chart {i}") from None
                if f.rows != self.rank or f.cols != self.rank:
                    raise BundleDataError(f"intertwiner f^{p}_{i} has wrong shape")
                self.intertwiners[(p, i)] = f
        self._iform_cache: Dict[Tuple[int, int, int, int], MatrixForm] = {}

    @property
    def n(self) -> int:
        return len(self.levels) - 1

    def intertwiner_range(self, p_hi: int, p_lo: int, i: int) -> RFMatrix:
        """f^(p_hi, p_lo)_i = f^{p_hi} ... f^{p_lo + 1} on chart i."""
        out = RFMatrix.identity(self.rank)
        for p in range(p_lo + 1, p_hi + 1):
            out = self.intertwiners[(p, i)] * out
        return out

    def intertwiner_form(self, p_hi: int, p_lo: int, i: int, anchor: int) -> MatrixForm:
        key = (p_hi, p_lo, i, anchor)
        if key not in self._iform_cache:
            m = self.intertwiner_range(p_hi, p_lo, i)
            form = MatrixForm.from_rfmatrix(self.cover.charts[i], m)
            self._iform_cache[key] = _pull_matrix(self.cover, form, i, anchor)
        return self._iform_cache[key]

    def validate(self) -> Report:
        report = Report()
        for p, vertex in enumerate(self.levels):
            sub = vertex.validate()
            for item in sub.items:
                report.add(f"level{p}.{item.name}", item.ok, item.witness)
        bad_f = []
        for (p, i), f in sorted(self.intertwiners.items()):
            if f.det().is_zero:
                bad_f.append((p, i))
        report.add(
            "path.intertwiners_invertible",
            not bad_f,
            "" if not bad_f else f"singular at {bad_f}",
        )
        bad_squares = []
        for p in range(1, self.n + 1):
            for t in self.cover.all_tuples():
                if len(t) != 2:
                    continue
                a, b = t
                anchor = a
                f_a = self.intertwiner_form(p, p - 1, a, anchor)
                f_b = self.intertwiner_form(p, p - 1, b, anchor)
                g_lo = self.levels[p - 1].transition_form(a, b, anchor)
                g_hi = self.levels[p].transition_form(a, b, anchor)
                if not (f_b * g_lo - g_hi * f_a).is_zero:
                    bad_squares.append((p, a, b))
        report.add(
            "path.intertwining",
            not bad_squares,
            "" if not bad_squares else f"violated at (level, a, b) = {bad_squares}",
        )
        return report


def _pull_matrix(cover: Cover, form: MatrixForm, src: int, dst: int) -> MatrixForm:
    if src == dst:
        return form
    return form.pullback(cover.charts[dst], cover.change_map(src, dst))


# -- the presheaf-level Chern character (composable morphisms on one chart) ------------


class NerveInstance:
    """A composable sequence of degree-0 morphisms on one chart, with
    memoized segment composites, inverses and covariant derivatives.

    morphisms[t] maps object t to object t+1; connections[t] belongs to
    object t.
    """

    def __init__(self, morphisms: Sequence[MatrixForm], connections: Sequence[ConnectionMatrix]):
        if len(connections) != len(morphisms) + 1:
            raise ValueError("need one connection per object")
        self.morphisms = list(morphisms)
        self.connections = list(connections)
        self.chart = connections[0].chart
        self.rank = connections[0].rank
        self.k = len(morphisms)
        self._segments: Dict[Tuple[int, int], MatrixForm] = {}
        self._inverses: Dict[Tuple[int, int], MatrixForm] = {}
        self._nablas: Dict[Tuple[int, int], MatrixForm] = {}

    def segment(self, lo: int, hi: int) -> MatrixForm:
        """The composite morphism from object lo to object hi."""
        if lo == hi:
            return MatrixForm.identity(self.chart, self.rank)
        key = (lo, hi)
        if key not in self._segments:
            self._segments[key] = self.morphisms[hi - 1] * self.segment(lo, hi - 1)
        return self._segments[key]

    def segment_inverse(self, lo: int, hi: int) -> MatrixForm:
        key = (lo, hi)
        if key not in self._inverses:
            self._inverses[key] = MatrixForm.from_rfmatrix(
                self.chart, self.segment(lo, hi).to_rfmatrix().inverse()
            )
        return self._inverses[key]

    def segment_nabla(self, lo: int, hi: int) -> MatrixForm:
        key = (lo, hi)
        if key not in self._nablas:
            self._nablas[key] = apply_connection(
                self.segment(lo, hi), self.connections[lo], self.connections[hi]
            )
        return self._nablas[key]

    def face_value(self, face: Tuple[int, ...]) -> Tuple[int, HoloForm]:
        """(u-power, form) assigned to the face e_{i_0..i_l}: the constant
        rank on vertices, tr(composite^-1 nabla(seg_l) ^ .. ^ nabla(seg_1))
        in general."""
        if list(face) != sorted(set(face)) or face[0] < 0 or face[-1] > self.k:
            raise ValueError(f"bad face tuple {face}")
        ell = len(face) - 1
        if ell == 0:
            return 0, HoloForm.constant(self.chart, self.rank)
        prod = self.segment_inverse(face[0], face[-1])
        for m in reversed(range(ell)):
            prod = prod * self.segment_nabla(face[m], face[m + 1])
        return ell, trace_form(prod)

    def boundary_sum(self, face: Tuple[int, ...]) -> HoloForm:
        """The image of the alternating face sum of e_face."""
        acc = HoloForm.zero(self.chart)
        for j in range(len(face)):
            _, form = self.face_value(face[:j] + face[j + 1:])
            acc = acc - form if j % 2 else acc + form
        return acc


def ch_nerve_simplex(
    morphisms: Sequence[MatrixForm],
    connections: Sequence[ConnectionMatrix],
    face: Tuple[int, ...],
) -> Tuple[int, HoloForm]:
    """The form assigned to one face of a composable sequence; see
    NerveInstance.face_value."""
    return NerveInstance(morphisms, connections).face_value(face)


def verify_face_sum_vanishing(
    morphisms: Sequence[MatrixForm],
    connections: Sequence[ConnectionMatrix],
    face: Tuple[int, ...],
) -> Report:
    """The alternating face sum of the assigned forms vanishes exactly."""
    report = Report()
    if len(face) < 2:
        raise ValueError("need a face of length at least 2")
    acc = NerveInstance(morphisms, connections).boundary_sum(face)
    report.add(
        f"face_sum.face{list(face)}",
        acc.is_zero,
        "" if acc.is_zero else f"residual {acc}",
    )
    return report


# -- Tot(Ch) on vertices and higher simplices ----------------------------------------


def _word_trace(
    word: List[Tuple[MatrixForm, ConnectionMatrix, ConnectionMatrix]]
) -> HoloForm:
    """tr((w_L..w_1)^{-1} nabla(w_L) ^ ... ^ nabla(w_1)) for a composable word.

    Each entry is (matrix, source connection, target connection), listed
    first-applied first.
    """
    chart = word[0][0].chart
    composite = word[0][0]
    for m, _, _ in word[1:]:
        composite = m * composite
    inverse = MatrixForm.from_rfmatrix(chart, composite.to_rfmatrix().inverse())
    prod = inverse
    for m, a_src, a_dst in reversed(word):
        prod = prod * apply_connection(m, a_src, a_dst)
    return trace_form(prod)


def tot_ch_vertex(data: BundleVertexData, max_level: Optional[int] = None) -> UPolyCochain:
    """The degree-0 cocycle: rank on vertices and the trace words on tuples."""
    cover = data.cover
    if max_level is None:
        max_level = cover.max_tuple_len() - 1
    slices: Dict[int, Dict[Tuple, HoloForm]] = {}
    for t in cover.all_tuples(max_level + 1):
        ell = len(t) - 1
        anchor = t[0]
        if ell == 0:
            form = HoloForm.constant(cover.charts[anchor], data.rank)
        else:
            word = []
            for m in range(ell):
                a, b = t[m], t[m + 1]
                word.append(
                    (
                        data.transition_form(a, b, anchor),
                        data.connection_in(a, anchor),
                        data.connection_in(b, anchor),
                    )
                )
            form = _word_trace(word)
        if not form.is_zero:
            slices.setdefault(ell, {})[t] = form
    return UPolyCochain(
        cover, {m: CechCochain(cover, comps) for m, comps in slices.items()}
    )


def tot_ch_simplex(
    data: BundlePathData, generator: Generator, max_level: Optional[int] = None
) -> UPolyCochain:
    """The cochain assigned to a generator e_{j_0..j_p} of the n-simplex.

    Sums over step positions s_1 <= ... <= s_p the signed trace word with
    vertical factors f^(j_m, j_{m-1}) inserted at the step indices and
    horizontal factors from the level active between consecutive steps;
    the global sign is (-1)^(p(p-1)/2) and each term carries
    (-1)^(s_1+...+s_p) u^(l+p).
    """
    cover = data.cover
    if generator.ambient != data.n:
        raise BundleDataError(
            f"generator ambient {generator.ambient} does not match path length {data.n}"
        )
    if max_level is None:
        max_level = cover.max_tuple_len() - 1
    js = generator.indices
    p = generator.dim
    global_sign = -1 if (p * (p - 1) // 2) % 2 else 1
    slices: Dict[int, Dict[Tuple, HoloForm]] = {}
    for t in cover.all_tuples(max_level + 1):
        ell = len(t) - 1
        anchor = t[0]
        chart = cover.charts[anchor]
        if p == 0 and ell == 0:
            form = HoloForm.constant(chart, data.rank)
        else:
            acc = HoloForm.zero(chart)
            for steps in step_positions(p, ell):
                word = _simplex_word(data, js, t, steps, anchor)
                term = _word_trace(word)
                if sum(steps) % 2:
                    term = -term
                acc = acc + term
            form = acc if global_sign > 0 else -acc
        if not form.is_zero:
            slices.setdefault(ell + p, {})[t] = form
    return UPolyCochain(
        cover, {m: CechCochain(cover, comps) for m, comps in slices.items()}
    )


def _simplex_word(
    data: BundlePathData,
    js: Tuple[int, ...],
    t: Tuple[int, ...],
    steps: Tuple[int, ...],
    anchor: int,
) -> List[Tuple[MatrixForm, ConnectionMatrix, ConnectionMatrix]]:
    """The staircase word for tuple t, levels js, vertical steps at `steps`."""
    p = len(js) - 1
    ell = len(t) - 1
    word = []
    level = 0
    for pos in range(ell + 1):
        # all vertical factors stepping at this position, in level order
        while level < p and steps[level] == pos:
            lo, hi = js[level], js[level + 1]
            word.append(
                (
                    data.intertwiner_form(hi, lo, t[pos], anchor),
                    _level_connection(data, lo, t[pos], anchor),
                    _level_connection(data, hi, t[pos], anchor),
                )
            )
            level += 1
        if pos < ell:
            a, b = t[pos], t[pos + 1]
            j = js[level]
            word.append(
                (
                    data.levels[j].transition_form(a, b, anchor),
                    _level_connection(data, j, a, anchor),
                    _level_connection(data, j, b, anchor),
                )
            )
    if len(word) != ell + p:
        raise AssertionError("staircase word has the wrong length")
    return word


def _level_connection(data: BundlePathData, level: int, i: int, anchor: int) -> ConnectionMatrix:
    return data.levels[level].connection_in(i, anchor)


def tot_ch_table(data: BundlePathData, max_level: Optional[int] = None) -> Dict[Generator, UPolyCochain]:
    """The full chain-map table over N(Z Delta^n)."""
    table = {}
    for ell in range(data.n + 1):
        for g in nondegenerate_generators(data.n, ell):
            table[g] = tot_ch_simplex(data, g, max_level)
    return table


def tot_ch_simplex_via_ez(
    data: BundlePathData, generator: Generator, max_level: Optional[int] = None
) -> UPolyCochain:
    """Independent route to the same cochain: apply the presheaf-level Chern
    map to every shuffle staircase of the prism and add the
    totalization-to-Čech sign.

    Shares only the composable-word evaluator with the closed formula; the
    enumeration, signs and u-powers come from the shuffle description.
    """
    cover = data.cover
    if max_level is None:
        max_level = cover.max_tuple_len() - 1
    js = generator.indices
    p = generator.dim
    tot_sign = -1 if (p * (p - 1) // 2) % 2 else 1
    slices: Dict[int, Dict[Tuple, HoloForm]] = {}
    for t in cover.all_tuples(max_level + 1):
        ell = len(t) - 1
        anchor = t[0]
        chart = cover.charts[anchor]
        if p == 0 and ell == 0:
            form = HoloForm.constant(chart, data.rank)
        else:
            acc = HoloForm.zero(chart)
            for mu, nu, sign in shuffles(p, ell):
                morphisms = []
                connections = [_level_connection(data, js[0], t[0], anchor)]
                li = ti = 0
                for step in range(p + ell):
                    if step in mu:
                        lo, hi = js[li], js[li + 1]
                        morphisms.append(data.intertwiner_form(hi, lo, t[ti], anchor))
                        li += 1
                    else:
                        a, b = t[ti], t[ti + 1]
                        morphisms.append(data.levels[js[li]].transition_form(a, b, anchor))
                        ti += 1
                    connections.append(_level_connection(data, js[li], t[ti], anchor))
                upow, term = ch_nerve_simplex(
                    morphisms, connections, tuple(range(p + ell + 1))
                )
                assert upow == p + ell
                acc = acc + (term if sign > 0 else -term)
            form = acc if tot_sign > 0 else -acc
        if not form.is_zero:
            slices.setdefault(ell + p, {})[t] = form
    return UPolyCochain(
        cover, {m: CechCochain(cover, comps) for m, comps in slices.items()}
    )


def validate_bundle_data(data) -> Report:
    """Validate vertex or path data: cocycle, invertibility, intertwining."""
    return data.validate()
