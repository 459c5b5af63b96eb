"""Manifest ingestion: JSON-shaped run descriptions into domain objects.

All mathematical content enters as expression strings and is parsed with
the chart-appropriate variable scope; transitions for a pair (a, b) are
read in the coordinates of chart min(a, b), connections, intertwiners,
action maps and lifts in the coordinates of their own chart.
"""

from __future__ import annotations

import json
from typing import Dict, Optional, Tuple

from .bg import BGMapData, EquivariantBundleData, FiniteGroup
from .cech import Cover
from .chern import BundlePathData, BundleVertexData
from .exprparse import ExprError, parse_expr
from .forms import Chart, ConnectionMatrix, HoloForm, MatrixForm
from .linalg import RFMatrix


class ManifestError(ValueError):
    pass


class Manifest:
    def __init__(self, raw: dict, source: str = "<memory>"):
        self.raw = raw
        self.source = source
        try:
            self.cover = self._build_cover()
        except (KeyError, TypeError, ValueError) as err:
            if isinstance(err, ManifestError):
                raise
            raise ManifestError(f"{source}: {err}") from err
        self.run = dict(raw.get("run", {}))

    @staticmethod
    def load(path: str) -> "Manifest":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as err:
            raise ManifestError(f"cannot read manifest: {err}") from err
        except json.JSONDecodeError as err:
            raise ManifestError(f"manifest is not valid JSON: {err}") from err
        return Manifest(raw, source=path)

    # -- cover ------------------------------------------------------------------

    def _build_cover(self) -> Cover:
        raw = self.raw
        if "charts" not in raw:
            raise ManifestError(f"{self.source}: missing 'charts'")
        charts = []
        for entry in raw["charts"]:
            charts.append(Chart(entry["name"], tuple(entry.get("coordinates", ()))))
        overlaps = [tuple(t) for t in raw.get("overlaps", [])]
        if not overlaps:
            overlaps = [tuple(range(len(charts)))]
        change = {}
        for cm in raw.get("change_maps", []):
            src = int(cm["chart"])
            dst = int(cm["in_chart"])
            target = charts[dst]
            exprs = {}
            for coord, text in cm["exprs"].items():
                exprs[coord] = self._parse(text, target.coordinates)
            missing = set(charts[src].coordinates) - set(exprs)
            if missing:
                raise ManifestError(
                    f"{self.source}: change map {src}->{dst} missing coordinates {sorted(missing)}"
                )
            change[(src, dst)] = exprs
        return Cover(charts, overlaps, change)

    def _parse(self, text: str, variables):
        try:
            return parse_expr(str(text), list(variables))
        except ExprError as err:
            raise ManifestError(f"{self.source}: bad expression {text!r}: {err}") from err

    # -- bundle sections ----------------------------------------------------------

    def _parse_matrix(self, entries, variables, what: str) -> RFMatrix:
        if not isinstance(entries, list) or not entries:
            raise ManifestError(f"{self.source}: {what} must be a nonempty matrix")
        grid = []
        for row in entries:
            grid.append([self._parse(e, variables) for e in row])
        return RFMatrix(grid)

    def _parse_transitions(self, mapping) -> Dict[Tuple[int, int], RFMatrix]:
        out = {}
        for key, entries in mapping.items():
            parts = [p.strip() for p in str(key).split(",")]
            if len(parts) != 2:
                raise ManifestError(f"{self.source}: bad transition key {key!r}")
            a, b = int(parts[0]), int(parts[1])
            anchor = self.cover.charts[min(a, b)]
            out[(a, b)] = self._parse_matrix(entries, anchor.coordinates, f"transition {key}")
        return out

    def _parse_connections(self, mapping, rank) -> Dict[int, ConnectionMatrix]:
        out = {}
        for key, entries in (mapping or {}).items():
            i = int(key)
            chart = self.cover.charts[i]
            rows = []
            for row in entries:
                cells = []
                for cell in row:
                    form = HoloForm.zero(chart)
                    for coord, text in cell.items():
                        coeff = self._parse(text, chart.coordinates)
                        form = form + HoloForm.d_coord(chart, coord).scale(coeff)
                    cells.append(form)
                rows.append(cells)
            matrix = MatrixForm(chart, rows)
            if matrix.rows != rank or matrix.cols != rank:
                raise ManifestError(f"{self.source}: connection on chart {i} has wrong shape")
            out[i] = ConnectionMatrix(chart, matrix)
        return out

    def bundle_rank(self) -> int:
        bundle = self.raw.get("bundle")
        if not bundle:
            raise ManifestError(f"{self.source}: missing 'bundle' section")
        return int(bundle["rank"])

    def vertex_data(self) -> BundleVertexData:
        bundle = self.raw.get("bundle")
        if not bundle:
            raise ManifestError(f"{self.source}: missing 'bundle' section")
        rank = int(bundle["rank"])
        levels = bundle.get("levels")
        if levels:
            trans = self._parse_transitions(levels[0].get("transitions", {}))
        else:
            trans = self._parse_transitions(bundle.get("transitions", {}))
        conns = self._parse_connections(bundle.get("connections"), rank)
        try:
            return BundleVertexData(self.cover, rank, trans, conns)
        except ValueError as err:
            raise ManifestError(f"{self.source}: {err}") from err

    def _intertwiners(self, bundle, n_levels: int) -> Dict[Tuple[int, int], RFMatrix]:
        raw_inter = bundle.get("intertwiners", {})
        out = {}
        for level_key, per_chart in raw_inter.items():
            p = int(level_key)
            for chart_key, entries in per_chart.items():
                i = int(chart_key)
                chart = self.cover.charts[i]
                out[(p, i)] = self._parse_matrix(
                    entries, chart.coordinates, f"intertwiner level {p} chart {i}"
                )
        return out

    def path_data(self) -> BundlePathData:
        bundle = self.raw.get("bundle")
        if not bundle:
            raise ManifestError(f"{self.source}: missing 'bundle' section")
        rank = int(bundle["rank"])
        levels_raw = bundle.get("levels")
        if not levels_raw:
            # a vertex manifest is a path of length zero
            return BundlePathData([self.vertex_data()], {})
        levels = []
        for entry in levels_raw:
            trans = self._parse_transitions(entry.get("transitions", {}))
            conns = self._parse_connections(entry.get("connections"), rank)
            try:
                levels.append(BundleVertexData(self.cover, rank, trans, conns))
            except ValueError as err:
                raise ManifestError(f"{self.source}: {err}") from err
        inter = self._intertwiners(bundle, len(levels_raw))
        try:
            return BundlePathData(levels, inter)
        except ValueError as err:
            raise ManifestError(f"{self.source}: {err}") from err

    def bg_data(self) -> BGMapData:
        bundle = self.raw.get("bundle")
        if not bundle:
            raise ManifestError(f"{self.source}: missing 'bundle' section")
        rank = int(bundle["rank"])
        levels_raw = bundle.get("levels")
        if levels_raw:
            level_transitions = [
                self._parse_transitions(entry.get("transitions", {})) for entry in levels_raw
            ]
        else:
            level_transitions = [self._parse_transitions(bundle.get("transitions", {}))]
        inter = self._intertwiners(bundle, len(level_transitions))
        try:
            return BGMapData(self.cover, rank, level_transitions, inter)
        except ValueError as err:
            raise ManifestError(f"{self.source}: {err}") from err

    def equivariant_data(self) -> EquivariantBundleData:
        group_raw = self.raw.get("group")
        if not group_raw:
            raise ManifestError(f"{self.source}: missing 'group' section")
        bundle = self.raw.get("bundle")
        if not bundle:
            raise ManifestError(f"{self.source}: missing 'bundle' section")
        rank = int(bundle["rank"])
        table = {}
        for key, val in group_raw["table"].items():
            a, b = [p.strip() for p in str(key).split(",")]
            table[(a, b)] = val
        group = FiniteGroup(group_raw["elements"], group_raw["identity"], table)
        action = {}
        for g, per_chart in group_raw.get("action", {}).items():
            for chart_key, exprs in per_chart.items():
                i = int(chart_key)
                chart = self.cover.charts[i]
                action[(g, i)] = {
                    coord: self._parse(text, chart.coordinates) for coord, text in exprs.items()
                }
        lifts = {}
        for g, per_chart in group_raw.get("lifts", {}).items():
            for chart_key, entries in per_chart.items():
                i = int(chart_key)
                chart = self.cover.charts[i]
                lifts[(g, i)] = self._parse_matrix(
                    entries, chart.coordinates, f"lift of {g} on chart {i}"
                )
        conns = self._parse_connections(bundle.get("connections"), rank)
        try:
            return EquivariantBundleData(self.cover, rank, group, action, lifts, conns)
        except (KeyError, ValueError) as err:
            raise ManifestError(f"{self.source}: {err}") from err

    def max_level(self, override: Optional[int] = None) -> Optional[int]:
        if override is not None:
            return override
        value = self.run.get("max_level")
        return int(value) if value is not None else None
