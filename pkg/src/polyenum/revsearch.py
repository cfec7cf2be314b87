"""Reverse-search vertex/facet enumeration over integer simplex dictionaries.

A dictionary for the system ``s_i = b_i + A_i x >= 0`` (i = 0..m-1) uses
variable indices ``0..d-1`` for the free decision variables and ``d + i``
for slack ``s_i``.  Decision variables are pivoted into the basis once and
never leave, so every cobasis is a set of d slack indices.

The tableau is fraction free: row 0 is the objective, column 0 the
constants, the real coefficient at (i, j) is ``A[i][j] / det`` and all
entries stay integral (they are minors of the input matrix).  A basic row
reads ``x_B = A[r][0]/det + sum_j A[r][j]/det * x_C[j]``.

Degeneracy is resolved by the symbolic perturbation ``b_i + eps^(d+i)``
where smaller slack indices dominate.  Every vertex of the perturbed
polytope is one lex-feasible basis of the original system; these are the
"bases" counted by :func:`enumerate`.  An output row is emitted only at
the lexicographically smallest basis of its vertex, which is always
lex-feasible and can be recognised locally.

The reverse-search tree is induced by Bland's rule (least index entering
variable, lex ratio test for the leaving one) applied to the objective
``-sum of the root cobasic slacks``, whose unique optimum is the root.
"""

from __future__ import annotations

import builtins
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    EnumerationTimeout,
    InfeasibleError,
    InvalidJobError,
    InvariantViolation,
    PivotError,
    UnboundedError,
)
from .errors import ArithmeticOverflow
from .exact import INT64_MAX, ArithmeticMode, check64, run_with_mode
from .transform import System, prepare


@dataclass(frozen=True)
class Budget:
    max_nodes: int | None = None
    max_depth: int | None = None

    def __post_init__(self):
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be >= 1 when finite")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")


UNLIMITED = Budget()


@dataclass(frozen=True)
class CobasisRecord:
    cobasis: tuple[int, ...]
    depth: int
    emits_output: bool | None = None

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.cobasis, self.cobasis[1:])):
            raise ValueError("cobasis indices must be strictly increasing")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")


@dataclass
class EnumerationResult:
    outputs: list[tuple[Fraction, ...]] = field(default_factory=list)
    bases: int = 0
    max_depth_seen: int = 0
    unexplored: list[CobasisRecord] = field(default_factory=list)
    n_outputs: int = 0
    system: System | None = field(default=None, repr=False)

    @property
    def complete(self) -> bool:
        return not self.unexplored

    def representation(self, name: str = ""):
        return self.system.representation(self.outputs, name=name)


class Tableau:
    """Fraction-free simplex tableau with basis/cobasis labels."""

    __slots__ = ("A", "det", "basis", "cobasis", "row_of", "col_of", "checked")

    def __init__(self, A, det, basis, cobasis, checked=False):
        self.A = A
        self.det = det
        self.basis = basis
        self.cobasis = cobasis
        self.checked = checked
        self._relabel()

    def _relabel(self):
        # module-level enumerate() shadows the builtin
        self.row_of = {v: r for r, v in builtins.enumerate(self.basis) if v is not None}
        self.col_of = {v: s for s, v in builtins.enumerate(self.cobasis) if v is not None}

    def value(self, r: int, s: int = 0) -> Fraction:
        return Fraction(self.A[r][s], self.det)

    def _mul(self, a: int, b: int) -> int:
        if self.checked:
            return check64(a * b)
        return a * b

    def _check_pivot(self, r: int, s: int) -> None:
        A = self.A
        Ar = A[r]
        p = Ar[s]
        ap = abs(p)
        mr = max(map(abs, Ar))
        check64(-mr)
        for i, Ai in zip(range(len(A)), A):
            if i == r:
                continue
            a = Ai[s]
            if max(map(abs, Ai)) * ap + abs(a) * mr <= INT64_MAX:
                continue
            for x, y in zip(Ai, Ar):
                check64(check64(x * p) - check64(a * y))

    def pivot_at(self, r: int, s: int) -> None:
        """Exchange basic row r with cobasic column s, in place."""
        A = self.A
        Ar = A[r]
        p = Ar[s]
        if p == 0:
            raise PivotError(f"zero pivot element at row {r}, column {s}")
        if self.checked:
            self._check_pivot(r, s)
        det = self.det
        for i in range(len(A)):
            if i == r:
                continue
            Ai = A[i]
            a = Ai[s]
            if a == 0:
                if p != det:
                    A[i] = [x * p for x in Ai] if det == 1 else [x * p // det for x in Ai]
            else:
                if det == 1:
                    new = [x * p - a * y for x, y in zip(Ai, Ar)]
                else:
                    new = [(x * p - a * y) // det for x, y in zip(Ai, Ar)]
                new[s] = a
                A[i] = new
        new = [-y for y in Ar]
        new[s] = det
        A[r] = new
        if p < 0:
            for i in range(len(A)):
                A[i] = [-x for x in A[i]]
            p = -p
        self.det = p
        leave, enter = self.basis[r], self.cobasis[s]
        self.basis[r], self.cobasis[s] = enter, leave
        del self.row_of[leave], self.col_of[enter]
        self.row_of[enter] = r
        self.col_of[leave] = s

    def bland_maximize(self, rows: Sequence[int], prefer: int | None = None) -> str:
        """Maximise the row-0 objective with Bland's rule.

        Only ``rows`` take part in ratio tests.  Returns ``"optimal"``,
        ``"unbounded"``, or ``"left"`` once variable ``prefer`` becomes
        cobasic (it is chosen to leave whenever it ties).
        """
        A = self.A
        while True:
            A0 = A[0]
            cols = sorted(range(1, len(self.cobasis)), key=self.cobasis.__getitem__)
            s = next((c for c in cols if A0[c] > 0), None)
            if s is None:
                return "optimal"
            best = None
            for r in rows:
                ars = A[r][s]
                if ars >= 0:
                    continue
                if best is None:
                    best = r
                    continue
                lhs = self._mul(A[r][0], -A[best][s])
                rhs = self._mul(A[best][0], -ars)
                if lhs < rhs:
                    best = r
                elif lhs == rhs:
                    if self.basis[r] == prefer or (self.basis[best] != prefer and self.basis[r] < self.basis[best]):
                        best = r
            if best is None:
                return "unbounded"
            self.pivot_at(best, s)
            if prefer is not None and prefer in self.col_of:
                return "left"


class Dictionary(Tableau):
    """Reverse-search node: a lex-feasible dictionary of a :class:`System`."""

    __slots__ = ("m", "d", "depth", "srows")

    def __init__(self, A, det, basis, cobasis, m, d, srows, depth=0, checked=False):
        super().__init__(A, det, basis, cobasis, checked)
        self.m = m
        self.d = d
        self.srows = srows
        self.depth = depth

    def copy(self) -> "Dictionary":
        return Dictionary(
            [row[:] for row in self.A],
            self.det,
            self.basis[:],
            self.cobasis[:],
            self.m,
            self.d,
            self.srows,
            self.depth,
            self.checked,
        )

    @property
    def objective_row(self) -> list[Fraction]:
        return [Fraction(x, self.det) for x in self.A[0]]

    def cobasis_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.cobasis[1:]))

    def record(self) -> CobasisRecord:
        return CobasisRecord(self.cobasis_sorted(), self.depth)

    def child_cobasis(self, enter: int, leave: int) -> tuple[int, ...]:
        return tuple(sorted([v for v in self.cobasis[1:] if v != enter] + [leave]))

    def point(self) -> tuple[Fraction, ...]:
        """Values of the decision variables at this basis."""
        A, det = self.A, self.det
        return tuple(Fraction(A[self.row_of[j]][0], det) for j in range(self.d))

    def tight_slacks(self) -> list[int]:
        tight = [v for v in self.cobasis[1:]]
        tight += [self.basis[r] for r in self.srows if self.A[r][0] == 0]
        return sorted(tight)

    def __eq__(self, other):
        if not isinstance(other, Dictionary):
            return NotImplemented
        return self.cobasis_sorted() == other.cobasis_sorted() and self._canonical() == other._canonical()

    def _canonical(self):
        rows = sorted(range(len(self.A)), key=lambda r: -1 if r == 0 else self.basis[r])
        cols = sorted(range(len(self.cobasis)), key=lambda s: -1 if s == 0 else self.cobasis[s])
        return self.det, tuple(tuple(self.A[r][s] for s in cols) for r in rows)

    __hash__ = None

    # -- lexicographic machinery -------------------------------------------

    def lex_ratio(self, s: int) -> int | None:
        """Leaving row for entering column s under the perturbation, or None."""
        A = self.A
        cands = [r for r in self.srows if A[r][s] < 0]
        if not cands:
            return None
        mul = self._mul
        best = [cands[0]]
        bn, bd = A[cands[0]][0], -A[cands[0]][s]
        for r in cands[1:]:
            n_, d_ = A[r][0], -A[r][s]
            lhs, rhs = mul(n_, bd), mul(bn, d_)
            if lhs < rhs:
                best = [r]
                bn, bd = n_, d_
            elif lhs == rhs:
                best.append(r)
        if len(best) == 1:
            return best[0]
        keys = sorted(set(self.cobasis[1:]) | {self.basis[r] for r in best})
        det = self.det
        for k in keys:
            col = self.col_of.get(k)
            vals = []
            for r in best:
                if col is not None:
                    num = -A[r][col]
                else:
                    num = det if self.basis[r] == k else 0
                vals.append((num, -A[r][s], r))
            bnum, bden, _ = vals[0]
            keep = [vals[0][2]]
            for num, den, r in vals[1:]:
                lhs, rhs = mul(num, bden), mul(bnum, den)
                if lhs < rhs:
                    keep = [r]
                    bnum, bden = num, den
                elif lhs == rhs:
                    keep.append(r)
            best = keep
            if len(best) == 1:
                return best[0]
        raise InvariantViolation("lexicographic ratio test left a tie")

    def is_lex_feasible(self) -> bool:
        A = self.A
        for r in self.srows:
            c = A[r][0]
            if c > 0:
                continue
            if c < 0:
                return False
            own = self.basis[r]
            for k in sorted(v for v in self.cobasis[1:] if v < own):
                e = A[r][self.col_of[k]]
                if e != 0:
                    if e > 0:
                        return False
                    break
        return True

    def is_lexmin(self) -> bool:
        """True iff this is the lexicographically least basis of its vertex."""
        A = self.A
        cob = self.cobasis
        for r in self.srows:
            Ar = A[r]
            if Ar[0] != 0:
                continue
            br = self.basis[r]
            for s in range(1, len(cob)):
                if cob[s] < br and Ar[s] != 0:
                    return False
        return True

    # -- tree structure -------------------------------------------------------

    def _cols_by_index(self) -> list[int]:
        cob = self.cobasis
        return sorted(range(1, len(cob)), key=cob.__getitem__)

    def forward_pivot(self) -> tuple[int, int] | None:
        """Parent move ``(enter, leave)`` by Bland's rule; None at the root."""
        A0 = self.A[0]
        for s in self._cols_by_index():
            if A0[s] > 0:
                r = self.lex_ratio(s)
                if r is None:
                    raise UnboundedError("unbounded edge in the reverse-search tree")
                return self.cobasis[s], self.basis[r]
        return None

    def reverse_children(self) -> list[tuple[int, int]]:
        """Pivots ``(enter, leave)`` leading to the children of this node."""
        A = self.A
        A0 = A[0]
        cob = self.cobasis
        cols = self._cols_by_index()
        mul = self._mul
        out = []
        for s in cols:
            if A0[s] >= 0:
                continue
            r = self.lex_ratio(s)
            if r is None:
                raise UnboundedError("polyhedron is unbounded")
            u = self.basis[r]
            Ar = A[r]
            ars, a0s = Ar[s], A0[s]
            # u must be the least index with positive reduced cost after the pivot
            if all(j == s or mul(A0[j], ars) - mul(a0s, Ar[j]) >= 0 for j in cols if cob[j] < u):
                out.append((cob[s], u))
        return out

    def pivot_vars(self, enter: int, leave: int) -> None:
        try:
            s = self.col_of[enter]
            r = self.row_of[leave]
        except KeyError:
            raise PivotError(f"cannot pivot {enter} in / {leave} out of this basis") from None
        self.pivot_at(r, s)


# ---------------------------------------------------------------------------
# Root construction


def _initial_tableau(rows: list[list[int]], d: int, checked: bool) -> Tableau:
    m = len(rows)
    A = [[0] * (d + 1)] + [list(r) for r in rows]
    tab = Tableau(A, 1, [None] + [d + i for i in range(m)], [None] + list(range(d)), checked)
    for j in range(d):
        s = tab.col_of[j]
        cands = [r for r in range(1, m + 1) if tab.basis[r] >= d and tab.A[r][s] != 0]
        if not cands:
            raise UnboundedError("constraint matrix has rank < dimension: polyhedron is unbounded or not pointed")
        tab.pivot_at(min(cands, key=tab.basis.__getitem__), s)
    return tab


def _find_feasible(tab: Tableau, m: int, d: int) -> None:
    """Phase 1 with a single artificial variable; leaves ``tab`` feasible."""
    A = tab.A
    slack_rows = [r for r in range(1, m + 1) if tab.basis[r] >= d]
    if not slack_rows:
        return
    r0 = min(slack_rows, key=lambda r: (A[r][0], tab.basis[r]))
    if A[r0][0] >= 0:
        return
    art = m + d
    for r in range(len(A)):
        A[r].append(tab.det if r in slack_rows else 0)
    tab.cobasis.append(art)
    tab._relabel()
    tab.pivot_at(r0, tab.col_of[art])
    A = tab.A
    A[0] = [-x for x in A[tab.row_of[art]]]
    status = tab.bland_maximize(slack_rows, prefer=art)
    if status == "unbounded":
        raise InvariantViolation("phase one objective is bounded by construction")
    if art in tab.row_of:
        r = tab.row_of[art]
        if A[r][0] > 0:
            raise InfeasibleError("the inequality system has no solution")
        s = next(c for c in sorted(range(1, len(tab.cobasis)), key=tab.cobasis.__getitem__) if A[r][c] != 0)
        tab.pivot_at(r, s)
    s = tab.col_of[art]
    for row in tab.A:
        del row[s]
    del tab.cobasis[s]
    tab.A[0] = [0] * len(tab.cobasis)
    tab._relabel()


def _check_bounded(rows: list[list[int]], d: int, checked: bool) -> None:
    """Raise UnboundedError unless ``{x : A x >= 0} = {0}``.

    Maximises ``sum_i A_i x`` over ``{A x >= 0, sum_i A_i x <= 1}``, which is
    bounded when A has full column rank; a positive optimum is a ray.
    """
    m = len(rows)
    homog = [[0] + list(r[1:]) for r in rows]
    cap = [1] + [-sum(r[1 + j] for r in rows) for j in range(d)]
    tab = _initial_tableau(homog + [cap], d, checked)
    last = tab.row_of[d + m]
    det = tab.det
    tab.A[0] = [det - tab.A[last][0]] + [-x for x in tab.A[last][1:]]
    srows = [r for r in range(1, m + 2) if tab.basis[r] >= d]
    status = tab.bland_maximize(srows)
    if status != "optimal":
        raise InvariantViolation("boundedness test LP must have an optimum")
    if tab.A[0][0] > 0:
        raise UnboundedError("polyhedron is unbounded")


def _lexmin_exchange(tab: Tableau, srows: Sequence[int]) -> None:
    """Degenerate pivots until the basis is the lex-min basis of its vertex."""
    A = tab.A
    while True:
        moved = False
        for r in sorted((r for r in srows if A[r][0] == 0), key=lambda r: -tab.basis[r]):
            br = tab.basis[r]
            for s in sorted(range(1, len(tab.cobasis)), key=tab.cobasis.__getitem__):
                if tab.cobasis[s] >= br:
                    break
                if A[r][s] != 0:
                    tab.pivot_at(r, s)
                    moved = True
                    break
            if moved:
                break
        if not moved:
            return


def build_root(system: System, checked: bool = False) -> Dictionary:
    rows, d, m = system.rows, system.dim, system.m
    if checked:
        system.check64()
    if d == 0:
        raise ValueError("zero-dimensional systems have no dictionary")
    tab = _initial_tableau(rows, d, checked)
    _find_feasible(tab, m, d)
    _check_bounded(rows, d, checked)
    srows = tuple(r for r in range(1, m + 1) if tab.basis[r] >= d)
    _lexmin_exchange(tab, srows)
    tab.A[0] = [0] + [-tab.det] * d
    D = Dictionary(tab.A, tab.det, tab.basis, tab.cobasis, m, d, srows, 0, checked)
    if not D.is_lex_feasible() or D.forward_pivot() is not None:
        raise InvariantViolation("root dictionary is not a lex-feasible optimum")
    return D


class Problem:
    """A prepared system together with its (cached) reverse-search root."""

    def __init__(self, system: System, checked: bool = False):
        self.system = system
        self.checked = checked
        self._root = None

    @classmethod
    def from_representation(cls, rep, checked: bool = False) -> "Problem":
        return cls(prepare(rep), checked)

    @property
    def trivial(self) -> bool:
        return self.system.dim == 0

    def root(self) -> Dictionary:
        if self._root is None:
            self._root = build_root(self.system, self.checked)
        return self._root.copy()

    def dictionary_at(self, record: CobasisRecord) -> Dictionary:
        """Rebuild the dictionary with the given cobasis by pivoting from the root."""
        D = self.root()
        target = set(record.cobasis)
        d = D.d
        if len(target) != d or any(not d <= v < d + D.m for v in target):
            raise InvalidJobError(f"not a cobasis of this system: {record.cobasis}")
        while True:
            out_cols = [s for s in D._cols_by_index() if D.cobasis[s] not in target]
            if not out_cols:
                break
            s = out_cols[0]
            rows = [r for r in D.srows if D.basis[r] in target and D.A[r][s] != 0]
            if not rows:
                raise InvalidJobError(f"cobasis {record.cobasis} is singular")
            D.pivot_at(min(rows, key=D.basis.__getitem__), s)
        if not D.is_lex_feasible():
            raise InvalidJobError(f"cobasis {record.cobasis} is not lex-feasible")
        D.depth = record.depth
        return D

    def output_row(self, D: Dictionary) -> tuple[Fraction, ...]:
        return self.system.output_row(D.point())


# ---------------------------------------------------------------------------
# Operations


def initial_dictionary(rep, checked: bool = False) -> Dictionary:
    """Root dictionary of an H-representation (linearities are eliminated first)."""
    return Problem.from_representation(rep, checked).root()


def pivot(D: Dictionary, enter: int, leave: int) -> Dictionary:
    """New dictionary with ``enter`` made basic and ``leave`` cobasic."""
    E = D.copy()
    E.pivot_vars(enter, leave)
    return E


def lex_ratio_test(D: Dictionary, enter: int) -> int:
    """Basic variable leaving when ``enter`` increases."""
    r = D.lex_ratio(D.col_of[enter])
    if r is None:
        raise UnboundedError(f"no leaving variable for entering {enter}")
    return D.basis[r]


def reverse_children(D: Dictionary) -> list[tuple[int, int]]:
    return D.reverse_children()


def enumerate(
    D: Dictionary,
    budget: Budget | None = None,
    *,
    output_row: Callable[[Dictionary], tuple] | None = None,
    sink: Callable[[tuple], None] | None = None,
    deadline: float | None = None,
) -> EnumerationResult:
    """Depth-first reverse search from D.

    Nodes at relative depth >= ``budget.max_depth`` and every node met after
    ``budget.max_nodes`` bases were visited are not visited; they are
    returned in ``unexplored``.  If ``sink`` is given, output rows are passed
    to it instead of being collected.
    """
    budget = budget or UNLIMITED
    D = D.copy()
    res = EnumerationResult()
    row_of = output_row or (lambda X: X.point())
    start = D.depth
    max_nodes, max_depth = budget.max_nodes, budget.max_depth
    if max_depth is not None and max_depth <= 0:
        res.unexplored.append(D.record())
        return res

    def visit():
        res.bases += 1
        if D.depth > res.max_depth_seen:
            res.max_depth_seen = D.depth
        if D.is_lexmin():
            row = row_of(D)
            res.n_outputs += 1
            if sink is None:
                res.outputs.append(row)
            else:
                sink(row)
        if deadline is not None and res.bases % 64 == 0 and time.monotonic() > deadline:
            raise EnumerationTimeout("time limit reached during reverse search")

    res.max_depth_seen = D.depth
    visit()
    stack = [[D.reverse_children(), 0]]
    path = []
    while stack:
        frame = stack[-1]
        children, k = frame
        if k == len(children):
            stack.pop()
            if path:
                v, u = path.pop()
                D.pivot_vars(u, v)
                D.depth -= 1
            continue
        frame[1] = k + 1
        v, u = children[k]
        child_depth = D.depth + 1
        if (max_nodes is not None and res.bases >= max_nodes) or (
            max_depth is not None and child_depth - start >= max_depth
        ):
            res.unexplored.append(CobasisRecord(D.child_cobasis(v, u), child_depth))
            continue
        D.pivot_vars(v, u)
        D.depth = child_depth
        path.append((v, u))
        visit()
        stack.append([D.reverse_children(), 0])
    return res


def probe(D: Dictionary, choose: Callable[[int], int], emits=None) -> tuple[int, int]:
    """One random root-to-leaf walk of the tree below D.

    ``choose(k)`` picks a child index in ``range(k)``.  Returns the path
    estimates of the number of bases and of outputs.
    """
    D = D.copy()
    is_out = emits or Dictionary.is_lexmin
    weight = 1
    bases = 1
    outs = int(is_out(D))
    while True:
        children = D.reverse_children()
        if not children:
            return bases, outs
        weight *= len(children)
        v, u = children[choose(len(children))]
        D.pivot_vars(v, u)
        bases += weight
        if is_out(D):
            outs += weight


@dataclass(frozen=True)
class Estimate:
    bases: Fraction
    outputs: Fraction
    variance: Fraction
    probes: int


def estimate(D: Dictionary, probes: int, seed: int = 0) -> Estimate:
    """Mean of ``probes`` random-path estimates of the tree size below D."""
    if probes < 1:
        raise ValueError("probes must be >= 1")
    rng = random.Random(seed)
    samples = [probe(D, rng.randrange) for _ in range(probes)]
    bs = [b for b, _ in samples]
    mean_b = Fraction(sum(bs), probes)
    mean_o = Fraction(sum(o for _, o in samples), probes)
    var = sum(((b - mean_b) ** 2 for b in bs), Fraction(0)) / (probes - 1) if probes > 1 else Fraction(0)
    return Estimate(mean_b, mean_o, var, probes)


@dataclass(frozen=True)
class DegeneracyReport:
    bases_seen: int
    outputs_seen: int
    ratio: Fraction
    complete: bool


def degeneracy_report(rep, stop_after_bases: int, arith="big") -> DegeneracyReport:
    """Partial run: bases visited per output row within the first bases."""
    if stop_after_bases < 1:
        raise ValueError("stop_after_bases must be >= 1")

    def compute(checked):
        problem = Problem.from_representation(rep, checked)
        if problem.trivial:
            outs = len(problem.system.trivial_outputs())
            return DegeneracyReport(0, outs, Fraction(0), True)
        res = enumerate(problem.root(), Budget(max_nodes=stop_after_bases), sink=lambda row: None)
        ratio = Fraction(res.bases, max(res.n_outputs, 1))
        return DegeneracyReport(res.bases, res.n_outputs, ratio, res.complete)

    return run_with_mode(arith, compute)


def solve(rep, budget: Budget | None = None, *, arith="big", sink=None, deadline=None) -> EnumerationResult:
    """Convert a representation: vertices of an H input, facets of a V input."""

    def compute(checked):
        problem = Problem.from_representation(rep, checked)
        if problem.trivial:
            outs = problem.system.trivial_outputs()
            res = EnumerationResult(n_outputs=len(outs))
            if sink is None:
                res.outputs = outs
            else:
                for row in outs:
                    out(row)
            res.system = problem.system
            return res
        res = enumerate(problem.root(), budget, output_row=problem.output_row, sink=out, deadline=deadline)
        res.system = problem.system
        return res

    mode = ArithmeticMode.parse(arith)
    if mode is not ArithmeticMode.HYBRID or sink is None:
        out = sink
        return run_with_mode(mode, compute)
    # hold rows back until the checked attempt has finished without overflow
    held = []
    out = held.append
    try:
        res = compute(True)
    except ArithmeticOverflow:
        out = sink
        return compute(False)
    for row in held:
        sink(row)
    return res
