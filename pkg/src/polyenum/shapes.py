"""Generators for polytope families with known combinatorics, and the
McMullen upper bound on output size."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .polyio import Representation


def ubt_bound(m: int, n: int) -> int:
    """Upper bound on vertices of a polytope given by m inequalities in n-1 variables.

    By polarity the same number bounds the facets of the convex hull of m
    points in dimension n-1.  Tight for cyclic polytopes.
    """
    if n < 2 or m < n:
        raise ValueError(f"ubt_bound needs m >= n >= 2, got m={m}, n={n}")
    k = m - n + 1
    return comb(m - n // 2, k) + comb(m - (n + 1) // 2, k)


def cyclic(m: int, d: int) -> Representation:
    """m points ``(t, t^2, ..., t^d)`` on the moment curve with t = 1..m."""
    if d < 1 or m < d + 1:
        raise ValueError(f"cyclic polytope needs m >= d+1 >= 2, got m={m}, d={d}")
    rows = [[1] + [t**k for k in range(1, d + 1)] for t in range(1, m + 1)]
    return Representation.make("V", rows, name=f"cyclic-{m}-{d}")


def permutahedron(N: int) -> Representation:
    """Permutahedron of order N: one equation plus 2^N - 2 subset inequalities.

    Row 1 is the linearity ``sum x_i = N(N+1)/2``; then for every proper
    nonempty subset S (by increasing bitmask) ``sum_{i in S} x_i >= 1 + ... + |S|``.
    """
    if N < 2:
        raise ValueError("permutahedron needs N >= 2")
    rows = [[-N * (N + 1) // 2] + [1] * N]
    for mask in range(1, 2**N - 1):
        members = [(mask >> i) & 1 for i in range(N)]
        k = sum(members)
        rows.append([-k * (k + 1) // 2] + members)
    return Representation.make("H", rows, linearity=[1], name=f"perm{N}")


def cut_vectors(N: int) -> Representation:
    """The 2^(N-1) cut vectors of the complete graph K_N.

    Coordinates are the edges (i, j), i < j, in lexicographic order; a cut
    is the set S containing vertex N-1 (0-based) and the subsets of the rest.
    """
    if N < 2:
        raise ValueError("cut vectors need N >= 2")
    edges = list(itertools.combinations(range(N), 2))
    rows = []
    for mask in range(2 ** (N - 1)):
        side = [(mask >> i) & 1 for i in range(N - 1)] + [0]
        rows.append([1] + [int(side[i] != side[j]) for i, j in edges])
    return Representation.make("V", rows, name=f"cut{N}")


def hypercube(d: int) -> Representation:
    """[0,1]^d: rows ``x_i >= 0`` then ``1 - x_i >= 0`` for each i."""
    if d < 1:
        raise ValueError("hypercube needs d >= 1")
    rows = []
    for i in range(d):
        e = [int(j == i) for j in range(d)]
        rows.append([0] + e)
        rows.append([1] + [-x for x in e])
    return Representation.make("H", rows, name=f"cube{d}")


def cross_polytope(d: int) -> Representation:
    if d < 1:
        raise ValueError("cross polytope needs d >= 1")
    rows = []
    for i in range(d):
        for s in (1, -1):
            rows.append([1] + [s * int(j == i) for j in range(d)])
    return Representation.make("V", rows, name=f"cross{d}")


def cut_polytope_h(N: int) -> Representation:
    """H-representation of the cut polytope, obtained by facet enumeration.

    Only small N are supported; there is no closed-form facet list here.
    """
    if N > 4:
        raise ValueError("cut polytope H-representation is only generated for N <= 4")
    from .revsearch import solve

    result = solve(cut_vectors(N))
    rep = result.representation(name=f"cut{N}-h")
    return rep


FAMILIES = {
    "cyclic": (cyclic, 2),
    "permutahedron": (permutahedron, 1),
    "perm": (permutahedron, 1),
    "cutvectors": (cut_vectors, 1),
    "cutpolytope": (cut_polytope_h, 1),
    "hypercube": (hypercube, 1),
    "cube": (hypercube, 1),
    "crosspolytope": (cross_polytope, 1),
    "cross": (cross_polytope, 1),
}


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: tuple[int, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        arity = FAMILIES[self.family][1]
        if len(self.params) != arity:
            raise ValueError(f"family {self.family} takes {arity} parameter(s)")

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        """Read ``family:p1[:p2]`` (or whitespace separated)."""
        parts = text.replace(":", " ").split()
        if not parts:
            raise ValueError("empty generator spec")
        try:
            params = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise ValueError(f"generator parameters must be integers: {text!r}") from None
        return cls(parts[0].lower(), params)

    def generate(self) -> Representation:
        return FAMILIES[self.family][0](*self.params)

