"""Brute-force reference computations, independent of the package engines.

Everything here uses plain Fraction Gaussian elimination over all
subsets, so it is slow but easy to trust.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction


def _int_row(row):
    den = 1
    for x in row:
        q = Fraction(x).denominator
        den = den * q // math.gcd(den, q)
    return [int(Fraction(x) * den) for x in row]


def _gauss_jordan(rows, n):
    """Integer Gauss-Jordan on the first n columns; None if they are singular."""
    A = [_int_row(r) for r in rows]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        pr = A[c]
        p = pr[c]
        for r in range(n):
            a = A[r][c]
            if r != c and a != 0:
                new = [x * p - a * y for x, y in zip(A[r], pr)]
                g = 0
                for x in new:
                    g = math.gcd(g, x)
                A[r] = [x // g for x in new] if g > 1 else new
    return A


def solve(M, rhs):
    """Unique solution of the square system M x = rhs, or None if singular."""
    n = len(M)
    A = _gauss_jordan([list(row) + [b] for row, b in zip(M, rhs)], n)
    if A is None:
        return None
    return [Fraction(A[r][n], A[r][r]) for r in range(n)]


def inverse(M):
    n = len(M)
    A = _gauss_jordan([list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)], n)
    if A is None:
        return None
    return [[Fraction(A[r][n + j], A[r][r]) for j in range(n)] for r in range(n)]


def canonical_facet(row):
    """Scale an inequality row to coprime integers (positive multiple)."""
    den = 1
    for x in row:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in row]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(Fraction(x // g) for x in ints)


def brute_vertices(rows, linearity=()):
    """Vertices of ``{x : r0 + r.x >= 0, equality for linearity rows (1-based)}``.

    Returns V rows ``(1, x)``.  Equations are handled by always including
    them in the square subsystem, a rank assumption that holds for the
    instances we feed in (independent equations, full-dimensional slice).
    """
    rows = [tuple(Fraction(x) for x in r) for r in rows]
    d = len(rows[0]) - 1
    eqs = [rows[i - 1] for i in sorted(linearity)]
    ineqs = [r for i, r in enumerate(rows, start=1) if i not in linearity]
    out = set()
    for sub in itertools.combinations(ineqs, d - len(eqs)):
        tight = eqs + list(sub)
        x = solve([r[1:] for r in tight], [-r[0] for r in tight])
        if x is None:
            continue
        if all(r[0] + sum(a * b for a, b in zip(r[1:], x)) >= 0 for r in ineqs) and all(
            r[0] + sum(a * b for a, b in zip(r[1:], x)) == 0 for r in eqs
        ):
            out.add((Fraction(1),) + tuple(x))
    return out


def brute_facets(points):
    """Facets of the convex hull of full-dimensional points, as canonical H rows."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    d = len(pts[0])
    out = set()
    for sub in itertools.combinations(pts, d):
        # hyperplane a0 + a.x = 0 through sub: fix it via the nullspace of [1 | p]
        M = [[Fraction(1)] + list(p) for p in sub]
        normal = _null_vector(M, d + 1)
        if normal is None:
            continue
        pos = neg = False
        for p in pts:
            v = normal[0] + sum(a * b for a, b in zip(normal[1:], p))
            pos, neg = pos or v > 0, neg or v < 0
            if pos and neg:
                break
        else:
            out.add(canonical_facet(normal if not neg else [-x for x in normal]))
    return out


def _null_vector(M, n):
    """The null vector of a (n-1) x n matrix of rank n-1, else None."""
    for drop in range(n):
        sub = [[row[j] for j in range(n) if j != drop] for row in M]
        rhs = [-row[drop] for row in M]
        x = solve(sub, rhs)
        if x is not None:
            v = list(x)
            v.insert(drop, Fraction(1))
            return v
    return None


# -- explicit perturbation ---------------------------------------------------


def _lex_positive(vec):
    for x in vec:
        if x != 0:
            return x > 0
    return False


def perturbed_slacks(rows, cobasis, stop_on_negative=False):
    """Perturbed slack values at the basis whose tight rows are ``cobasis``.

    Row i (0-based) gets ``+eps^(i+1)``.  Each slack is the coefficient
    vector over ``(1, eps, eps^2, ..., eps^m)``.  Returns None if singular,
    or (with ``stop_on_negative``) as soon as one slack is lex-negative.
    """
    m = len(rows)
    A = [[Fraction(x) for x in r[1:]] for r in rows]
    b = [Fraction(r[0]) for r in rows]
    C = list(cobasis)
    inv = inverse([A[i] for i in C])
    if inv is None:
        return None
    k = len(C)
    out = {}
    for i in range(m):
        if i in C:
            continue
        w = [sum(A[i][t] * inv[t][j] for t in range(k)) for j in range(k)]
        vec = [Fraction(0)] * (m + 1)
        vec[0] = b[i] - sum(w[j] * b[C[j]] for j in range(k))
        vec[i + 1] += 1
        for j, c in enumerate(C):
            vec[c + 1] -= w[j]
        if stop_on_negative and not _lex_positive(vec):
            return None
        out[i] = vec
    return out


def lex_feasible_bases(rows):
    """All cobases (0-based row subsets) feasible under the perturbation."""
    d = len(rows[0]) - 1
    return [C for C in itertools.combinations(range(len(rows)), d) if perturbed_slacks(rows, C, True) is not None]


def degeneracy_ratio(rows):
    """(lex-feasible bases, vertices, ratio) by brute force."""
    bases = lex_feasible_bases(rows)
    verts = set()
    for C in bases:
        x = solve([[Fraction(v) for v in rows[i][1:]] for i in C], [-Fraction(rows[i][0]) for i in C])
        verts.add(tuple(x))
    return len(bases), len(verts), Fraction(len(bases), len(verts))


def explicit_eps_leaving(rows, cobasis, enter, eps=Fraction(1, 10**6)):
    """Leaving row when row ``enter`` (in cobasis) is relaxed, by plain ratio test
    on the numerically perturbed system ``b_i + eps^(i+1)``."""
    A = [[Fraction(x) for x in r[1:]] for r in rows]
    b = [Fraction(r[0]) + eps ** (i + 1) for i, r in enumerate(rows)]
    C = list(cobasis)
    x = solve([A[i] for i in C], [-b[i] for i in C])
    # direction: slack of `enter` grows at unit rate, other tight slacks stay 0
    dx = solve([A[i] for i in C], [Fraction(int(i == enter)) for i in C])
    best, arg = None, None
    for i in range(len(rows)):
        if i in C:
            continue
        rate = sum(a * v for a, v in zip(A[i], dx))
        if rate >= 0:
            continue
        t = (b[i] + sum(a * v for a, v in zip(A[i], x))) / -rate
        if best is None or t < best:
            best, arg = t, i
        elif t == best:
            raise AssertionError("explicit eps too large: tie survived")
    return arg


# -- closed forms --------------------------------------------------------------


def permutation_points(N):
    return {(Fraction(1),) + tuple(Fraction(x) for x in p) for p in itertools.permutations(range(1, N + 1))}


def cube_vertices(d):
    return {(Fraction(1),) + tuple(Fraction(x) for x in p) for p in itertools.product((0, 1), repeat=d)}


def cross_facets(d):
    return {tuple(Fraction(x) for x in (1,) + tuple(-s for s in signs)) for signs in itertools.product((1, -1), repeat=d)}


def gale_facet_count(m, d):
    """Number of d-subsets of 1..m satisfying Gale's evenness condition."""
    count = 0
    for S in itertools.combinations(range(1, m + 1), d):
        s = set(S)
        ok = True
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                if i in s or j in s:
                    continue
                between = sum(1 for k in range(i + 1, j) if k in s)
                if between % 2:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


def ubt_direct(m, d):
    """Facets of the cyclic d-polytope with m vertices, by the classical formula."""
    if d % 2 == 0:
        k = d // 2
        return m * math.comb(m - k - 1, k - 1) // k
    k = (d - 1) // 2
    return 2 * math.comb(m - k - 1, k)


# -- random instances ---------------------------------------------------------


def random_polytope_h(seed):
    """A small bounded, full-dimensional H-polytope, often degenerate."""
    rng = random.Random(seed)
    d = rng.choice([2, 3, 3, 4])
    R = rng.choice([1, 2])
    rows = []
    for i in range(d):
        e = [int(j == i) for j in range(d)]
        rows.append([R] + e)
        rows.append([R] + [-x for x in e])
    for _ in range(rng.randint(1, 5)):
        a = [rng.randint(-2, 2) for _ in range(d)]
        if not any(a):
            a[0] = 1
        rows.append([rng.randint(1, 2 * R)] + a)
    rng.shuffle(rows)
    return rows


def random_points(seed):
    """Small full-dimensional integer point sets, with repeated coplanarity."""
    rng = random.Random(seed)
    d = rng.choice([2, 3])
    while True:
        pts = {tuple(rng.randint(0, 2) for _ in range(d)) for _ in range(rng.randint(d + 2, 9))}
        pts = sorted(pts)
        if len(pts) > d and _full_dim(pts):
            return [[1] + list(p) for p in pts]


def _full_dim(pts):
    base = pts[0]
    diffs = [[Fraction(a - b) for a, b in zip(p, base)] for p in pts[1:]]
    d = len(base)
    for sub in itertools.combinations(diffs, d):
        if solve(list(sub), [0] * d) is not None:
            return True
    return False


# -- estimator ----------------------------------------------------------------


def probe_expectation(run_probe):
    """Exact expectation of a random-path estimator over all its paths.

    ``run_probe(choose)`` must perform one probe, calling ``choose(k)`` for
    each branching, and return the estimate (any tuple of numbers).  Every
    choice sequence is replayed and weighted by ``prod 1/k``.
    """
    total = None
    prefix: list[int] = []
    npaths = 0
    while True:
        ks: list[int] = []

        def choose(k):
            i = len(ks)
            ks.append(k)
            return prefix[i] if i < len(prefix) else 0

        est = run_probe(choose)
        choices = prefix + [0] * (len(ks) - len(prefix))
        weight = Fraction(1)
        for k in ks:
            weight /= k
        term = tuple(weight * e for e in est)
        total = term if total is None else tuple(a + b for a, b in zip(total, term))
        npaths += 1
        # odometer step to the next untried choice sequence
        i = len(ks) - 1
        while i >= 0 and choices[i] + 1 >= ks[i]:
            i -= 1
        if i < 0:
            return total, npaths
        prefix = choices[:i] + [choices[i] + 1]
