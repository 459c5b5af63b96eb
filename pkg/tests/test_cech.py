"""Čech complex mechanics: restriction, delta, total differentials, truncation."""

import random
from itertools import combinations

import pytest

from cechchern import parse_expr
from cechchern.cech import (
    CechCochain,
    Cover,
    CoverError,
    FormalSection,
    cech_delta,
    tot_differential,
    tot_to_cech,
    total_differential,
    u_truncate,
    validate_chain_map,
)
from cechchern.forms import Chart, HoloForm


def cp1_cover():
    u0 = Chart("U0", ("z",))
    u1 = Chart("U1", ("w",))
    change = {(1, 0): {"w": parse_expr("1/z", ["z"])}, (0, 1): {"z": parse_expr("1/w", ["w"])}}
    return Cover([u0, u1], [(0, 1)], change)


def formal_cochain(cover, degree, rng=None, form_degree=0):
    rng = rng or random.Random(0)
    comps = {}
    for t in cover.tuples_of_length(degree + 1):
        comps[t] = FormalSection(form_degree, {("x", t): rng.randint(1, 7)})
    return CechCochain(cover, comps)


def test_cover_declaration_and_closure():
    cover = Cover([Chart(f"U{i}", ("z",)) for i in range(3)], [(0, 1, 2)])
    assert cover.is_declared((0, 2))
    assert cover.is_declared((1,))
    with pytest.raises(CoverError):
        Cover([Chart("A", ("z",))], [(1, 0)])


def test_cover_validation_change_maps():
    cover = cp1_cover()
    assert cover.validate().ok
    broken = Cover([Chart("U0", ("z",)), Chart("U1", ("w",))], [(0, 1)])
    assert not broken.validate().ok


def test_restrict_identity_and_pullback():
    cover = cp1_cover()
    # same anchor: unchanged
    f = HoloForm.function(cover.charts[0], parse_expr("z^2", ["z"]))
    assert cover.restrict(f, (0,), (0, 1)) == f
    # anchor moves from chart 1 to chart 0: dw pulls back to -z^-2 dz
    dw = HoloForm.d_coord(cover.charts[1], "w")
    got = cover.restrict(dw, (1,), (0, 1))
    assert got == HoloForm(cover.charts[0], {(0,): parse_expr("-1/z^2", ["z"])})
    # formal values restrict by relabeling only
    s = FormalSection.generator("a", 1)
    assert cover.restrict(s, (1,), (0, 1)) is s


def test_delta_examples():
    cover = Cover.formal(3)
    # constant presheaf value on vertices dies on pairs
    ones = CechCochain(
        cover, {(i,): FormalSection(0, {"c": 1}) for i in range(3)}
    )
    assert ones.delta().is_zero
    # a single generator on (0,): (delta x)_{(0,1)} = -x, zero where (0) is not a face
    x = FormalSection.generator("x")
    c = CechCochain(cover, {(0,): x})
    d = c.delta()
    assert d.component((0, 1)) == -x
    assert d.component((0, 2)) == -x
    assert d.component((1, 2)) is None


def test_delta_squared_zero_exhaustive():
    rng = random.Random(42)
    for n in range(2, 5):
        cover = Cover.formal(n)
        for degree in range(0, n - 1):
            for fdeg in range(4):
                c = formal_cochain(cover, degree, rng, form_degree=fdeg)
                assert cech_delta(cech_delta(c)).is_zero


def test_restrict_functorial_on_towers():
    # consistent change maps: chart k carries the coordinate of chart 0
    # composed through w = 1/z, v = 1/w = z, y = 1/v
    cover = Cover(
        [Chart("U0", ("z",)), Chart("U1", ("w",)), Chart("U2", ("v",)), Chart("U3", ("y",))],
        [(0, 1, 2, 3)],
        {
            (1, 0): {"w": parse_expr("1/z", ["z"])},
            (2, 0): {"v": parse_expr("z", ["z"])},
            (3, 0): {"y": parse_expr("1/z", ["z"])},
            (2, 1): {"v": parse_expr("1/w", ["w"])},
            (3, 1): {"y": parse_expr("w", ["w"])},
            (3, 2): {"y": parse_expr("1/v", ["v"])},
        },
    )
    assert cover.validate().ok
    forms = {
        i: HoloForm.function(cover.charts[i], parse_expr(f"{c}^2 + {c}", [c])).d()
        for i, c in [(1, "w"), (2, "v"), (3, "y")]
    }
    # every tower T'' strictly between T' and T, all lengths up to 4
    for small in combinations(range(4), 1):
        if small == (0,):
            continue
        form = forms[small[0]]
        for big in combinations(range(4), 3):
            if not set(small) <= set(big):
                continue
            for midlen in (1, 2):
                for mid in combinations(big, midlen):
                    if not set(small) <= set(mid):
                        continue
                    direct = cover.restrict(form, small, big)
                    via = cover.restrict(cover.restrict(form, small, mid), mid, big)
                    assert direct == via, (small, mid, big)
    full = (0, 1, 2, 3)
    for small in [(1,), (2,), (3,)]:
        for mid in combinations(range(4), 2):
            if not set(small) <= set(mid):
                continue
            direct = cover.restrict(forms[small[0]], small, full)
            via = cover.restrict(cover.restrict(forms[small[0]], small, mid), mid, full)
            assert direct == via


def test_total_differential_forms_is_delta():
    cover = cp1_cover()
    f = HoloForm.function(cover.charts[0], parse_expr("z", ["z"]))
    g = HoloForm.function(cover.charts[1], parse_expr("w^2", ["w"]))
    c = CechCochain(cover, {(0,): f, (1,): g})
    assert total_differential(c) == c.delta()


def test_total_differential_formal_sign_rule():
    cover = Cover.formal(3)
    x = FormalSection.generator("x", 1)  # odd form degree
    y = FormalSection.generator("y", 2)

    def d_a(sym):
        return FormalSection(2, {"y": 1}) if sym == "x" else FormalSection(3, {})

    c = CechCochain(cover, {(0,): x})
    out = total_differential(c, d_a)
    # |x| = 0 + 1 odd: D(x) = delta(x) + d_a(x)
    assert out.component((0,)) == y
    assert out.component((0, 1)) == -x


def test_total_differential_squares_to_zero_random():
    rng = random.Random(5)
    cover = Cover.formal(4)
    # d_a sends x-generators to y-generators and kills y: d_a^2 = 0
    def d_a(sym):
        kind, t = sym
        if kind == "x":
            return FormalSection(2, {("y", t): 1})
        return FormalSection(3, {})

    for degree in range(0, 3):
        comps = {}
        for t in cover.tuples_of_length(degree + 1):
            comps[t] = FormalSection(1, {("x", t): rng.randint(1, 5)})
        c = CechCochain(cover, comps)
        assert total_differential(total_differential(c, d_a), d_a).is_zero


def test_tot_to_cech_signs_and_conjugation():
    cover = Cover.formal(4)
    # degree 0: unchanged; degree 1: negated
    c0 = CechCochain(cover, {(0,): FormalSection.generator("a", 0)})
    assert tot_to_cech(c0) == c0
    c1 = CechCochain(cover, {(0,): FormalSection.generator("a", 1)})
    assert tot_to_cech(c1) == c1.scale(-1)

    def d_a(sym):
        kind, t = sym
        if kind == "x":
            return FormalSection(2, {("y", t): 1})
        return FormalSection(3, {})

    rng = random.Random(9)
    for degree in range(0, 4):
        for fdeg in range(0, 3):
            comps = {
                t: FormalSection(fdeg, {(("x" if fdeg == 1 else "z"), t): rng.randint(1, 5)})
                for t in cover.tuples_of_length(degree + 1)
            }
            c = CechCochain(cover, comps)
            lhs = tot_to_cech(tot_differential(c, d_a))
            rhs = total_differential(tot_to_cech(c), d_a)
            assert lhs == rhs


def test_u_truncate():
    cover = cp1_cover()
    two_form_chart = Chart("P", ("z", "w"))
    flat = Cover([two_form_chart], [(0,)])
    omega = CechCochain(
        flat, {(0,): HoloForm(two_form_chart, {(0, 1): parse_expr("1", [])})}
    )
    assert not u_truncate(omega, 1).is_zero  # k=2 <= 2m=2
    assert u_truncate(omega, 0).is_zero  # k=2 > 0
    const = CechCochain(flat, {(0,): HoloForm.constant(two_form_chart, 3)})
    assert not u_truncate(const, 0).is_zero
    three = CechCochain(
        flat, {(0,): HoloForm(two_form_chart, {(0,): parse_expr("z", ["z"])}).wedge(
            HoloForm.d_coord(two_form_chart, "w")
        ).wedge(HoloForm.function(two_form_chart, parse_expr("1", [])))}
    )
    # degree-2 form at m=1 survives; at m=0 it is truncated away
    assert u_truncate(three, 1).slices


def test_validate_chain_map_constant_and_flipped():
    from cechchern.simplicial import Generator, nondegenerate_generators
    from cechchern.cech import UPolyCochain

    cover = Cover.formal(3)
    closed = CechCochain(cover, {(i,): FormalSection(0, {"r": 2}) for i in range(3)})
    zero = UPolyCochain.zero(cover)
    table = {}
    for ell in range(0, 3):
        for g in nondegenerate_generators(2, ell):
            table[g] = UPolyCochain.single(cover, 0, closed) if ell == 0 else zero
    report = validate_chain_map(table)
    assert report.ok, report.to_text()

    # flip one vertex value: the e[j0,j1] conditions must locate it
    bad = dict(table)
    flipped = CechCochain(cover, {(i,): FormalSection(0, {"r": -2 if i == 1 else 2}) for i in range(3)})
    bad[Generator((1,), 2)] = UPolyCochain.single(cover, 0, flipped)
    report = validate_chain_map(bad)
    assert not report.ok
    names = [item.name for item in report.failures()]
    assert any("e[0, 1]" in n or "e[0,1]" in n.replace(" ", "") for n in names)
