"""Normalized chains on standard simplices, shuffles, and the EZ/AW maps.

Generators e_{i0..il} of N(Z Delta^n) are strictly increasing index
tuples; the boundary is the alternating face sum.  Nondegenerate cells of
a product Delta^n x Delta^m are stored as staircase paths (a pair of
nondecreasing vertex tuples that never stall simultaneously), which is
exactly the shuffle description: degenerate simplices never materialize.

The shuffle sign is sgn(mu, nu) = (-1)^(mu_1 + (mu_2 - 1) + ... + (mu_p - p + 1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Tuple


@dataclass(frozen=True)
class Generator:
    """A nondegenerate cell e_{i0..il} of the standard ambient-simplex."""

    indices: Tuple[int, ...]
    ambient: int

    def __post_init__(self):
        idx = self.indices
        if not idx:
            raise ValueError("empty generator")
        if list(idx) != sorted(set(idx)):
            raise ValueError(f"indices must be strictly increasing: {idx}")
        if idx[0] < 0 or idx[-1] > self.ambient:
            raise ValueError(f"indices {idx} out of range for ambient {self.ambient}")

    @property
    def degree(self) -> int:
        """Cochain degree: -(dimension)."""
        return -(len(self.indices) - 1)

    @property
    def dim(self) -> int:
        return len(self.indices) - 1

    def face(self, j: int) -> "Generator":
        return Generator(self.indices[:j] + self.indices[j + 1:], self.ambient)

    def __repr__(self):
        return "e[" + ",".join(map(str, self.indices)) + "]"


class Chain:
    """Integer combination of generators of a single degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict = None):
        clean = {g: c for g, c in (coeffs or {}).items() if c}
        degs = {self._degree_of(g) for g in clean}
        if len(degs) > 1:
            raise ValueError("mixed-degree chain")
        object.__setattr__(self, "coeffs", clean)

    @staticmethod
    def _degree_of(g):
        if isinstance(g, Generator):
            return g.dim
        if isinstance(g, ProductGenerator):
            return g.dim
        if isinstance(g, tuple):  # tensor generator (left, right)
            return g[0].dim + g[1].dim
        raise TypeError(f"unsupported chain generator {g!r}")

    def __setattr__(self, name, value):
        raise AttributeError("Chain is immutable")

    @staticmethod
    def of(g, coeff: int = 1) -> "Chain":
        return Chain({g: coeff})

    @staticmethod
    def zero() -> "Chain":
        return Chain({})

    def __add__(self, other: "Chain") -> "Chain":
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            s = out.get(g, 0) + c
            if s:
                out[g] = s
            else:
                out.pop(g, None)
        return Chain(out)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + other.scale(-1)

    def scale(self, k: int) -> "Chain":
        return Chain({g: k * c for g, c in self.coeffs.items()})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __iter__(self):
        return iter(sorted(self.coeffs.items(), key=lambda kv: repr(kv[0])))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{g!r}" for g, c in self)


def nondegenerate_generators(n: int, ell: int) -> List[Generator]:
    """All C(n+1, ell+1) generators of N(Z Delta^n) in dimension ell."""
    if ell < 0 or ell > n:
        return []
    return [Generator(tuple(c), n) for c in combinations(range(n + 1), ell + 1)]


def boundary(g) -> Chain:
    """Alternating face sum; degenerate faces of product cells are dropped."""
    if isinstance(g, Generator):
        if g.dim == 0:
            return Chain.zero()
        out = Chain.zero()
        for j in range(len(g.indices)):
            out = out + Chain.of(g.face(j), -1 if j % 2 else 1)
        return out
    if isinstance(g, ProductGenerator):
        if g.dim == 0:
            return Chain.zero()
        out = Chain.zero()
        for j in range(g.dim + 1):
            face = g.face(j)
            if face is not None:
                out = out + Chain.of(face, -1 if j % 2 else 1)
        return out
    raise TypeError(f"unsupported generator {g!r}")


def boundary_chain(ch: Chain) -> Chain:
    out = Chain.zero()
    for g, c in ch.coeffs.items():
        out = out + boundary(g).scale(c)
    return out


def shuffles(p: int, q: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], int]]:
    """All (p,q)-shuffles (mu, nu, sign), mu of size p, nu its complement."""
    out = []
    universe = range(p + q)
    for mu in combinations(universe, p):
        nu = tuple(sorted(set(universe) - set(mu)))
        exponent = sum(m - t for t, m in enumerate(mu))
        sign = -1 if exponent % 2 else 1
        out.append((mu, nu, sign))
    return out


@dataclass(frozen=True)
class ProductGenerator:
    """A nondegenerate cell of Delta^n x Delta^m as a staircase path.

    left/right are nondecreasing vertex tuples of equal length; at every
    step at least one of them advances.
    """

    left: Tuple[int, ...]
    right: Tuple[int, ...]
    left_ambient: int
    right_ambient: int

    def __post_init__(self):
        if len(self.left) != len(self.right) or not self.left:
            raise ValueError("paths must be nonempty and of equal length")
        for t in range(len(self.left) - 1):
            da = self.left[t + 1] - self.left[t]
            db = self.right[t + 1] - self.right[t]
            if da < 0 or db < 0:
                raise ValueError("paths must be nondecreasing")
            if da == 0 and db == 0:
                raise ValueError("degenerate product cell")

    @property
    def dim(self) -> int:
        return len(self.left) - 1

    def face(self, j: int):
        """Delete position j; None when the result is degenerate."""
        left = self.left[:j] + self.left[j + 1:]
        right = self.right[:j] + self.right[j + 1:]
        for t in range(len(left) - 1):
            if left[t] == left[t + 1] and right[t] == right[t + 1]:
                return None
        return ProductGenerator(left, right, self.left_ambient, self.right_ambient)

    def __repr__(self):
        pairs = ",".join(f"({a},{b})" for a, b in zip(self.left, self.right))
        return f"P[{pairs}]"


def ez_map(left: Generator, right: Generator) -> Chain:
    """Eilenberg-Zilber: e_J (x) e_I -> signed sum over (p,q)-shuffles.

    The left path advances at the mu positions, the right at the nu
    positions, producing the staircase (s_nu e_J, s_mu e_I).
    """
    p, q = left.dim, right.dim
    out = Chain.zero()
    for mu, nu, sign in shuffles(p, q):
        lpath = [left.indices[0]]
        rpath = [right.indices[0]]
        li = ri = 0
        for t in range(p + q):
            if t in mu:
                li += 1
            else:
                ri += 1
            lpath.append(left.indices[li])
            rpath.append(right.indices[ri])
        out = out + Chain.of(
            ProductGenerator(tuple(lpath), tuple(rpath), left.ambient, right.ambient), sign
        )
    return out


def aw_map(g: ProductGenerator) -> Chain:
    """Alexander-Whitney: front face of the left path (x) back face of the right."""
    out = Chain.zero()
    r = g.dim
    for s in range(r + 1):
        front = g.left[: s + 1]
        back = g.right[s:]
        if len(set(front)) != len(front) or len(set(back)) != len(back):
            continue  # degenerate tensor factor: zero in normalized chains
        out = out + Chain.of(
            (Generator(front, g.left_ambient), Generator(back, g.right_ambient))
        )
    return out


def aw_chain(ch: Chain) -> Chain:
    out = Chain.zero()
    for g, c in ch.coeffs.items():
        out = out + aw_map(g).scale(c)
    return out


def tensor_boundary(pair: Tuple[Generator, Generator]) -> Chain:
    """Koszul boundary on N (x) N: d(a (x) b) = da (x) b + (-1)^dim(a) a (x) db."""
    a, b = pair
    out = Chain.zero()
    for g, c in boundary(a).coeffs.items():
        out = out + Chain.of((g, b), c)
    sign = -1 if a.dim % 2 else 1
    for g, c in boundary(b).coeffs.items():
        out = out + Chain.of((a, g), sign * c)
    return out


def tensor_boundary_chain(ch: Chain) -> Chain:
    out = Chain.zero()
    for pair, c in ch.coeffs.items():
        out = out + tensor_boundary(pair).scale(c)
    return out


def brute_force_shuffle_sign(mu: Iterable[int], nu: Iterable[int]) -> int:
    """Parity of the permutation word mu ++ nu, counted by inversions."""
    word = list(mu) + list(nu)
    inversions = sum(
        1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j]
    )
    return -1 if inversions % 2 else 1


def shuffle_count(p: int, q: int) -> int:
    return comb(p + q, p)
