"""Canonical text format for u-graded cochains.

One component per line:

    (i0,...,il) | u^m | (coeff)*dz^dw + (coeff)

Tuples are sorted lexicographically (length first), coefficients use the
canonical expression strings, wedge factors are written d<coordinate>.
Parsing is exact, so files round-trip bit-for-bit.
"""

from __future__ import annotations

import ast
from typing import List, Tuple

from .cech import CechCochain, UPolyCochain
from .exprparse import parse_expr
from .forms import Chart, HoloForm


def form_to_text(form: HoloForm) -> str:
    if form.is_zero:
        return "0"
    pieces = []
    for idx in sorted(form.terms, key=lambda t: (len(t), t)):
        coeff = form.terms[idx]
        body = f"({coeff})"
        if idx:
            body += "*" + "^".join("d" + form.chart.coordinates[i] for i in idx)
        pieces.append(body)
    return " + ".join(pieces)


def _split_top_level(text: str, sep: str) -> List[str]:
    parts = []
    depth = 0
    current = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            parts.append("".join(current))
            current = []
            i += len(sep)
            continue
        current.append(ch)
        i += 1
    parts.append("".join(current))
    return parts


def text_to_form(text: str, chart: Chart) -> HoloForm:
    text = text.strip()
    if text == "0":
        return HoloForm.zero(chart)
    out = HoloForm.zero(chart)
    for piece in _split_top_level(text, " + "):
        piece = piece.strip()
        if not piece.startswith("("):
            raise ValueError(f"bad form component {piece!r}")
        depth = 0
        close = -1
        for i, ch in enumerate(piece):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    close = i
                    break
        coeff = parse_expr(piece[1:close], list(chart.coordinates))
        rest = piece[close + 1:].strip()
        idx: Tuple[int, ...] = ()
        if rest:
            if not rest.startswith("*"):
                raise ValueError(f"bad wedge part {rest!r}")
            names = rest[1:].split("^")
            indices = []
            for name in names:
                if not name.startswith("d"):
                    raise ValueError(f"bad wedge factor {name!r}")
                indices.append(chart.index_of(name[1:]))
            idx = tuple(indices)
        out = out + HoloForm(chart, {idx: coeff})
    return out


def _tuple_to_text(t: Tuple) -> str:
    return repr(tuple(t)).replace(" ", "")


def cochain_to_text(c: UPolyCochain) -> str:
    lines = []
    for t, m, form in c.items():
        lines.append(f"{_tuple_to_text(t)} | u^{m} | {form_to_text(form)}")
    return "\n".join(lines) + ("\n" if lines else "")


def text_to_cochain(text: str, cover) -> UPolyCochain:
    slices = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tuple_part, u_part, form_part = [p.strip() for p in line.split("|", 2)]
        t = ast.literal_eval(tuple_part)
        if not isinstance(t, tuple):
            t = (t,)
        m = int(u_part.removeprefix("u^"))
        chart = cover.anchor(t)
        form = text_to_form(form_part, chart)
        slices.setdefault(m, {})[t] = form
    return UPolyCochain(
        cover, {m: CechCochain(cover, comps) for m, comps in slices.items()}
    )


def table_to_text(table) -> str:
    lines = []
    for g in sorted(table, key=lambda g: (g.dim, g.indices)):
        lines.append(f"# generator {_tuple_to_text(g.indices)}")
        body = cochain_to_text(table[g])
        if body:
            lines.append(body.rstrip("\n"))
    return "\n".join(lines) + "\n"
