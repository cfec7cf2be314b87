"""Incremental double description method.

The polytope ``{z : b + A z >= 0}`` is homogenized to the cone
``{(t, z) : t >= 0, b t + A z >= 0}``.  Generators are primitive integer
vectors ``(t, z)``; at the end every one must have ``t > 0`` and ``z / t``
is a vertex.  Incidences are bitmasks over row slots, slot 0 being
``t >= 0`` and slot ``k + 1`` the k-th system row.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import EnumerationTimeout, InfeasibleError, InvariantViolation, ResourceCapError, UnboundedError
from .exact import primitive
from .polyio import Representation
from .revsearch import EnumerationResult
from .transform import System, prepare

log = logging.getLogger(__name__)

STRATEGIES = ("asgiven", "lexmin", "maxcutoff", "random")


@dataclass(frozen=True)
class InsertionOrder:
    strategy: str = "asgiven"
    seed: int | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown insertion order {self.strategy!r}; choose from {STRATEGIES}")
        if self.strategy == "random" and self.seed is None:
            raise ValueError("random insertion order needs an explicit seed")

    @classmethod
    def parse(cls, text: str, seed: int | None = None) -> "InsertionOrder":
        """``asgiven``, ``lexmin``, ``maxcutoff`` or ``random[:seed]``."""
        name, _, s = text.lower().partition(":")
        name = name.replace("_", "").replace("-", "")
        if s:
            seed = int(s)
        if name == "random" and seed is None:
            seed = 0
        return cls(name, seed if name == "random" else None)


AS_GIVEN = InsertionOrder()


def _dot(a: Sequence[int], g: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, g))


def _int_rank(rows: list[list[int]], stop: int | None = None) -> int:
    """Bareiss rank of an integer matrix; may stop early once ``stop`` is reached."""
    rows = [r[:] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    prev, r = 1, 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        p = pr[c]
        for i in range(r + 1, len(rows)):
            ri = rows[i]
            a = ri[c]
            if a == 0:
                if p != prev:
                    rows[i] = [x * p // prev for x in ri]
            else:
                rows[i] = [(x * p - a * y) // prev for x, y in zip(ri, pr)]
        prev = p
        r += 1
        if r == len(rows) or (stop is not None and r >= stop):
            break
    return r


def _bits(mask: int) -> list[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


@dataclass
class DDState:
    """Generators of the cone cut out by the processed rows."""

    slots: list[list[int]]
    processed: list[int] = field(default_factory=list)
    generators: list[list[int]] = field(default_factory=list)
    incidence: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        """Homogenized dimension."""
        return len(self.slots[0])

    def value(self, k: int, g: Sequence[int]) -> int:
        return _dot(self.slots[k + 1], g)

    def vertices(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(x, g[0]) for x in g[1:]) for g in self.generators if g[0] > 0]

    def rays(self) -> list[list[int]]:
        return [g for g in self.generators if g[0] == 0]

    def check(self) -> None:
        """Soundness and incidence exactness; raises InvariantViolation."""
        active = [0] + [k + 1 for k in self.processed]
        for g, inc in zip(self.generators, self.incidence):
            mask = 0
            for slot in active:
                v = _dot(self.slots[slot], g)
                if v < 0:
                    raise InvariantViolation(f"generator {g} violates slot {slot}")
                if v == 0:
                    mask |= 1 << slot
            if mask != inc:
                raise InvariantViolation(f"incidence of {g} is stale")

    def copy(self) -> "DDState":
        return DDState(self.slots, self.processed[:], [g[:] for g in self.generators], self.incidence[:])


def _slots(system: System) -> list[list[int]]:
    return [[1] + [0] * system.dim] + [list(r) for r in system.rows]


def _as_system(source) -> System:
    if isinstance(source, System):
        return source
    return prepare(source)


def dd_init(source, order: Sequence[int] | None = None) -> DDState:
    """Simplex cone from the first ``dim`` linearly independent rows in ``order``."""
    system = _as_system(source)
    slots = _slots(system)
    d = system.dim
    order = list(range(system.m)) if order is None else list(order)
    chosen = []
    for k in order:
        if _int_rank([slots[j + 1][1:] for j in chosen + [k]]) > len(chosen):
            chosen.append(k)
            if len(chosen) == d:
                break
    if len(chosen) < d:
        raise UnboundedError("constraint rows have rank < dimension: polytope cannot be bounded")
    basis_slots = [0] + [k + 1 for k in chosen]
    gens, incs = [], []
    full = 0
    for s in basis_slots:
        full |= 1 << s
    for i, si in enumerate(basis_slots):
        others = [slots[s] for s in basis_slots if s != si]
        g = _kernel_vector(others, d + 1)
        if _dot(slots[si], g) < 0:
            g = [-x for x in g]
        gens.append(g)
        incs.append(full & ~(1 << si))
    return DDState(slots, chosen, gens, incs)


def _kernel_vector(rows: list[list[int]], n: int) -> list[int]:
    """Primitive integer generator of the 1-dimensional kernel of ``rows``."""
    from .exact import integer_row, nullspace

    ker = nullspace([[Fraction(x) for x in r] for r in rows], n)
    if len(ker) != 1:
        raise InvariantViolation("initial rows are not independent")
    return primitive(integer_row(ker[0]))


def _candidate_pairs(S: DDState, pos: list[int], neg: list[int]) -> list[tuple[int, int]]:
    need = S.n - 2
    if not pos or not neg:
        return []
    nslots = len(S.slots)
    # incidence counts via a dense 0/1 product; float32 is exact for these sizes
    def mat(idx):
        M = np.zeros((len(idx), nslots), dtype=np.float32)
        for r, gi in enumerate(idx):
            for b in _bits(S.incidence[gi]):
                M[r, b] = 1.0
        return M

    counts = mat(pos) @ mat(neg).T
    ii, jj = np.nonzero(counts >= need)
    return [(pos[a], neg[b]) for a, b in zip(ii.tolist(), jj.tolist())]


def adjacency_test(S: DDState, i: int, j: int, method: str = "rank") -> bool:
    """Whether generators i and j span an edge (2-face) of the current cone."""
    if i == j:
        raise ValueError("adjacency needs two distinct generators")
    common = S.incidence[i] & S.incidence[j]
    need = S.n - 2
    bits = _bits(common)
    if len(bits) < need:
        return False
    if method == "rank":
        return _int_rank([S.slots[b] for b in bits], stop=need) == need
    if method == "combinatorial":
        return not any(
            k != i and k != j and (inc & common) == common for k, inc in enumerate(S.incidence)
        )
    raise ValueError(f"unknown adjacency method {method!r}")


def insert_halfspace(S: DDState, k: int, method: str = "rank", max_generators: int | None = None) -> DDState:
    """Intersect the cone with system row k (``slots[k + 1] . g >= 0``)."""
    slot = k + 1
    a = S.slots[slot]
    vals = [_dot(a, g) for g in S.generators]
    pos = [i for i, v in enumerate(vals) if v > 0]
    zero = [i for i, v in enumerate(vals) if v == 0]
    neg = [i for i, v in enumerate(vals) if v < 0]
    if not pos and not zero:
        raise InfeasibleError("the inequality system has no solution")
    bit = 1 << slot
    gens = [S.generators[i] for i in pos] + [S.generators[i] for i in zero]
    incs = [S.incidence[i] for i in pos] + [S.incidence[i] | bit for i in zero]
    for p, q in _candidate_pairs(S, pos, neg):
        if not adjacency_test(S, p, q, method):
            continue
        vp, vq = vals[p], vals[q]
        g = primitive([vp * y - vq * x for x, y in zip(S.generators[p], S.generators[q])])
        gens.append(g)
        incs.append((S.incidence[p] & S.incidence[q]) | bit)
        if max_generators is not None and len(gens) > max_generators:
            raise ResourceCapError(f"double description exceeded {max_generators} generators")
    if not any(g[0] > 0 for g in gens):
        raise InfeasibleError("the inequality system has no solution")
    return DDState(S.slots, S.processed + [k], gens, incs)


def _lex_order(rows: Sequence[Sequence]) -> list[int]:
    return sorted(range(len(rows)), key=lambda i: tuple(rows[i]))


def _random_order(m: int, seed: int) -> list[int]:
    perm = list(range(m))
    random.Random(seed).shuffle(perm)
    return perm


def choose_order(source, strategy: InsertionOrder = AS_GIVEN) -> list[int]:
    """Insertion permutation of the (inequality) rows of ``source``.

    MaxCutoff is dynamic: it is computed by running the method and picking,
    at each step, the pending row violated by the most generators (ties to
    the least index).  The first rows are those used by :func:`dd_init`.
    """
    if strategy.strategy in ("asgiven", "lexmin", "random"):
        if isinstance(source, Representation):
            rows = source.inequalities()
        else:
            rows = source.rows
        if strategy.strategy == "asgiven":
            return list(range(len(rows)))
        if strategy.strategy == "lexmin":
            return _lex_order(rows)
        return _random_order(len(rows), strategy.seed)
    order = []
    _run(_as_system(source), strategy, trace=order)
    return order


def _run(system: System, strategy: InsertionOrder, method="rank", max_generators=None, debug=False, deadline=None, trace=None) -> DDState:
    m = system.m
    if strategy.strategy == "lexmin":
        base = _lex_order(system.rows)
    elif strategy.strategy == "random":
        base = _random_order(m, strategy.seed)
    else:
        base = list(range(m))
    S = dd_init(system, base)
    if debug:
        S.check()
    pending = [k for k in base if k not in set(S.processed)]
    if trace is not None:
        trace.extend(S.processed)
    while pending:
        if strategy.strategy == "maxcutoff":
            def cut(k):
                return sum(1 for g in S.generators if S.value(k, g) < 0)
            k = max(sorted(pending), key=cut)
        else:
            k = pending[0]
        pending.remove(k)
        if trace is not None:
            trace.append(k)
        S = insert_halfspace(S, k, method, max_generators)
        if debug:
            S.check()
        if deadline is not None and time.monotonic() > deadline:
            raise EnumerationTimeout("time limit reached during double description")
        log.debug("dd: inserted row %d, %d generators", k, len(S.generators))
    if S.rays():
        raise UnboundedError("polyhedron is unbounded")
    return S


def dd_enumerate(
    source,
    order: InsertionOrder = AS_GIVEN,
    *,
    adjacency: str = "rank",
    max_generators: int | None = None,
    debug: bool = False,
    deadline: float | None = None,
    sink=None,
) -> EnumerationResult:
    """Vertices of an H input or facets of a V input; ``bases`` is always 0."""
    system = _as_system(source)
    if system.dim == 0:
        outs = system.trivial_outputs()
    else:
        S = _run(system, order, adjacency, max_generators, debug, deadline)
        outs = [system.output_row(v) for v in S.vertices()]
    res = EnumerationResult(n_outputs=len(outs), system=system)
    if sink is None:
        res.outputs = outs
    else:
        for row in outs:
            sink(row)
    return res
