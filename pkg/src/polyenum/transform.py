"""Reduce any input to a full-rank integer inequality system.

Both engines only ever see a system ``b + A z >= 0`` of integer rows in
``dim`` free variables.  For vertex enumeration this is the H input with
its linearities eliminated.  For facet enumeration the points are
projected onto their affine hull, translated so the centroid sits at the
origin, and the polar ``{y : 1 - w.y >= 0}`` is formed; its vertices are
the facets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact
from .exact import AffineMap, check64, integer_row, primitive_rational
from .errors import InfeasibleError
from .polyio import Representation, validate


@dataclass
class System:
    rows: list[list[int]]
    dim: int
    source: Representation
    output_kind: str
    # H input
    back_map: AffineMap | None = None
    # V input
    coords: list[int] = field(default_factory=list)
    centroid: tuple[Fraction, ...] = ()
    equations: list[tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.rows)

    def check64(self) -> None:
        """Raise ArithmeticOverflow if any coefficient needs more than 64 bits."""
        for row in self.rows:
            for x in row:
                check64(x)

    def output_row(self, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if self.output_kind == "V":
            return (Fraction(1),) + self.back_map(point)
        const = 1 + sum((y * c for y, c in zip(point, self.centroid)), Fraction(0))
        full = [Fraction(0)] * (self.source.n - 1)
        for y, j in zip(point, self.coords):
            full[j] = -y
        return primitive_rational([const] + full)

    def trivial_outputs(self) -> list[tuple[Fraction, ...]]:
        """Outputs of a zero-dimensional system."""
        assert self.dim == 0
        if self.output_kind == "H":
            return []
        if any(row[0] < 0 for row in self.rows):
            raise InfeasibleError("equations admit a single point violating an inequality")
        return [self.output_row(())]

    def representation(self, outputs, name: str = "") -> Representation:
        """Package enumeration output as a representation of the other kind."""
        name = name or self.source.name
        if self.output_kind == "V":
            return Representation.make("V", sorted(outputs), name=name)
        eqs = list(self.equations)
        rows = eqs + sorted(outputs)
        return Representation.make("H", rows, linearity=range(1, len(eqs) + 1), name=name)


def prepare(rep: Representation) -> System:
    validate(rep).raise_for_errors()
    if rep.kind == "H":
        return _prepare_h(rep)
    return _prepare_v(rep)


def _prepare_h(rep: Representation) -> System:
    reduced, back = exact.eliminate_linearities(rep)
    dim = back.source_dim
    rows = [integer_row(r) for r in reduced.rows]
    return System(rows=rows, dim=dim, source=rep, output_kind="V", back_map=back)


def _prepare_v(rep: Representation) -> System:
    points = [r[1:] for r in rep.rows]
    equations, coords = exact.affine_hull(points)
    proj = [[p[j] for j in coords] for p in points]
    k = len(proj)
    centroid = tuple(sum(col, Fraction(0)) / k for col in zip(*proj)) if coords else ()
    rows = []
    for p in proj:
        rows.append(integer_row([Fraction(1)] + [c - x for x, c in zip(p, centroid)]))
    return System(
        rows=rows,
        dim=len(coords),
        source=rep,
        output_kind="H",
        coords=list(coords),
        centroid=centroid,
        equations=equations,
    )
