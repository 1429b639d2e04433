"""Exact rational linear feasibility and integer affine-system solving.

Two engines, both exact:

* `solve_linear_diophantine` solves A x = b over the integers by a
  Hermite-normal-form style column reduction (unimodular column ops).
* `lp_feasible_point` / `lp_positive_support` solve rational feasibility
  with nonnegativity constraints by a dense phase-1 simplex using Bland's
  rule.  `Fraction` arithmetic throughout; returned points re-substitute
  to exact equality.

Rational numbers are `fractions.Fraction` (always in lowest terms with a
positive denominator, which is exactly the invariant the rest of the
package needs).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Rational = Fraction


class Infeasible(Exception):
    pass


@dataclass(frozen=True)
class LinearSystem:
    """Equalities `coeffs . x = const` plus a set of variables pinned >= 0."""

    variables: tuple
    equalities: tuple = ()  # tuple of (coeff tuple, constant)
    nonneg: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for coeffs, _ in self.equalities:
            if len(coeffs) != len(self.variables):
                raise ValueError("coefficient vector length != variable count")
        if not self.nonneg <= set(self.variables):
            raise ValueError("nonneg names must be variables")

    def check(self, assignment) -> bool:
        """Exact re-substitution check (no tolerance)."""
        for v in self.nonneg:
            if assignment[v] < 0:
                return False
        for coeffs, const in self.equalities:
            total = sum(c * assignment[v] for c, v in zip(coeffs, self.variables) if c)
            if total != const:
                return False
        return True


def linear_system(variables, equalities, nonneg=()):
    eqs = tuple(
        (tuple(Fraction(c) for c in coeffs), Fraction(const)) for coeffs, const in equalities
    )
    return LinearSystem(tuple(variables), eqs, frozenset(nonneg))


# ---------------------------------------------------------------------------
# integer equalities: HNF-style elimination
# ---------------------------------------------------------------------------


def _integerize(sys: LinearSystem):
    rows = []
    for coeffs, const in sys.equalities:
        dens = [Fraction(c).denominator for c in coeffs] + [Fraction(const).denominator]
        m = 1
        for d in dens:
            m = m * d // _gcd(m, d)
        rows.append(([int(c * m) for c in coeffs], int(const * m)))
    return rows


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def solve_linear_diophantine(sys: LinearSystem):
    """Integer solution of the equalities, or None.

    Requires `nonneg` to be empty (this engine has no sign handling: the
    affine relaxations use unbounded integer variables only).
    """
    if sys.nonneg:
        raise ValueError("diophantine solver does not support nonneg constraints")
    rows = _integerize(sys)
    n = len(sys.variables)
    A = [list(r) for r, _ in rows]
    b = [c for _, c in rows]
    m = len(A)

    # Column reduction: unimodular ops tracked in V, so A_orig @ V == A.
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_addmul(dst, src, q):
        for i in range(m):
            A[i][dst] -= q * A[i][src]
        for i in range(n):
            V[i][dst] -= q * V[i][src]

    def col_swap(j, k):
        for i in range(m):
            A[i][j], A[i][k] = A[i][k], A[i][j]
        for i in range(n):
            V[i][j], V[i][k] = V[i][k], V[i][j]

    col = 0
    pivots = []  # (row, col)
    for i in range(m):
        if col >= n:
            pivots.append((i, None))
            continue
        while True:
            nz = [j for j in range(col, n) if A[i][j] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(A[i][j]))
            j0 = nz[0]
            for k in nz[1:]:
                q = A[i][k] // A[i][j0]
                if q:
                    col_addmul(k, j0, q)
        nz = [j for j in range(col, n) if A[i][j] != 0]
        if nz:
            if nz[0] != col:
                col_swap(nz[0], col)
            pivots.append((i, col))
            col += 1
        else:
            pivots.append((i, None))

    y = [0] * n
    for i, pc in pivots:
        resid = b[i] - sum(A[i][j] * y[j] for j in range(n) if A[i][j] and y[j])
        if pc is None:
            if resid != 0:
                return None
        else:
            p = A[i][pc]
            if resid % p != 0:
                return None
            y[pc] = resid // p

    x = {v: sum(V[i][j] * y[j] for j in range(n)) for i, v in enumerate(sys.variables)}
    assert sys.check(x), "diophantine solution failed re-substitution"
    return x


# ---------------------------------------------------------------------------
# rational feasibility: phase-1 simplex, Bland's rule
# ---------------------------------------------------------------------------


class _Tableau:
    """Dense simplex tableau over Fractions for `A x = b, x >= 0`."""

    def __init__(self, A, b):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        self.A = [row[:] for row in A]
        self.b = b[:]
        for i in range(self.m):
            if self.b[i] < 0:
                self.A[i] = [-c for c in self.A[i]]
                self.b[i] = -self.b[i]
        # artificial variables n .. n+m-1 form the initial basis
        for i in range(self.m):
            for k in range(self.m):
                self.A[i].append(Fraction(1 if k == i else 0))
        self.basis = [self.n + i for i in range(self.m)]
        self.total = self.n + self.m

    def _pivot(self, r, c):
        piv = self.A[r][c]
        prow = self.A[r]
        if piv != 1:
            self.A[r] = prow = [x / piv for x in prow]
            self.b[r] /= piv
        nz = [j for j in range(self.total) if prow[j]]
        for i in range(self.m):
            if i != r:
                f = self.A[i][c]
                if f:
                    row = self.A[i]
                    for j in nz:
                        row[j] -= f * prow[j]
                    if self.b[r]:
                        self.b[i] -= f * self.b[r]
        self.basis[r] = c

    def _reduced_costs(self, cost):
        # cost over all columns; reduced = cost - cB . column
        red = list(cost)
        for r, bc in enumerate(self.basis):
            cb = cost[bc]
            if cb:
                for j in range(self.total):
                    if self.A[r][j]:
                        red[j] -= cb * self.A[r][j]
        return red

    def maximize(self, cost, stop_when_positive=False, forbid=(), stop_at_zero=False):
        """Simplex with Bland's rule.  Returns ('optimal'|'unbounded', value)."""
        forbid = set(forbid)
        red = self._reduced_costs(cost)
        value = sum(cost[bc] * self.b[r] for r, bc in enumerate(self.basis) if cost[bc])
        while True:
            if stop_when_positive and value > 0:
                return "optimal", value
            if stop_at_zero and value == 0:
                return "optimal", value
            enter = None
            for j in range(self.total):
                if red[j] > 0 and j not in forbid:
                    enter = j
                    break
            if enter is None:
                return "optimal", value
            leave, best = None, None
            for r in range(self.m):
                a = self.A[r][enter]
                if a > 0:
                    ratio = self.b[r] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[r] < self.basis[leave]
                    ):
                        best, leave = ratio, r
            if leave is None:
                return "unbounded", None
            value += red[enter] * best
            self._pivot(leave, enter)
            prow = self.A[leave]
            rc = red[enter]
            for j in range(self.total):
                if prow[j]:
                    red[j] -= rc * prow[j]

    def point(self):
        x = [Fraction(0)] * self.total
        for r, bc in enumerate(self.basis):
            x[bc] = self.b[r]
        return x

    def clone(self):
        new = object.__new__(_Tableau)
        new.m, new.n, new.total = self.m, self.n, self.total
        new.A = [row[:] for row in self.A]
        new.b = self.b[:]
        new.basis = self.basis[:]
        return new


def _standard_form(sys: LinearSystem):
    """Columns for each variable: nonneg vars one column, free vars two."""
    cols = {}
    ncols = 0
    for v in sys.variables:
        if v in sys.nonneg:
            cols[v] = (ncols, None)
            ncols += 1
        else:
            cols[v] = (ncols, ncols + 1)
            ncols += 2
    A, b = [], []
    for coeffs, const in sys.equalities:
        row = [Fraction(0)] * ncols
        for c, v in zip(coeffs, sys.variables):
            if c:
                p, m = cols[v]
                row[p] += c
                if m is not None:
                    row[m] -= c
        A.append(row)
        b.append(Fraction(const))
    return cols, ncols, A, b


def _phase1(sys: LinearSystem):
    cols, ncols, A, b = _standard_form(sys)
    tab = _Tableau(A, b)
    cost = [Fraction(0)] * tab.total
    for j in range(ncols, tab.total):
        cost[j] = Fraction(-1)
    status, value = tab.maximize(cost, stop_at_zero=True)
    assert status == "optimal"
    if value != 0:
        return None, None, None
    # drive artificials out of the basis where possible
    for r in range(tab.m):
        if tab.basis[r] >= ncols:
            for j in range(ncols):
                if tab.A[r][j] != 0:
                    tab._pivot(r, j)
                    break
    return cols, ncols, tab

def _extract(sys, cols, tab):
    x = tab.point()
    out = {}
    for v in sys.variables:
        p, m = cols[v]
        out[v] = x[p] - (x[m] if m is not None else 0)
    return out


def lp_feasible_point(sys: LinearSystem):
    """A rational point satisfying all equalities and nonneg constraints, or None."""
    cols, ncols, tab = _phase1(sys)
    if tab is None:
        return None
    point = _extract(sys, cols, tab)
    assert sys.check(point), "simplex point failed re-substitution"
    return point


def lp_positive_support(sys: LinearSystem):
    """Variables attaining a strictly positive value somewhere in the feasible set.

    One maximisation per variable; a positive objective at any simplex
    iterate (or unboundedness) certifies membership in the support.
    """
    cols, ncols, tab0 = _phase1(sys)
    if tab0 is None:
        raise Infeasible("support of an infeasible system")
    support = set()
    artificials = range(ncols, tab0.total)

    def positives(point):
        return {v for v in sys.variables if point[v] > 0}

    support |= positives(_extract(sys, cols, tab0))
    for v in sys.variables:
        if v in support:
            continue
        tab = tab0.clone()
        cost = [Fraction(0)] * tab.total
        p, m = cols[v]
        cost[p] = Fraction(1)
        if m is not None:
            cost[m] = Fraction(-1)  # objective is x itself, not the split part
        status, value = tab.maximize(cost, stop_when_positive=True, forbid=artificials)
        if status == "unbounded" or value > 0:
            support.add(v)
            # any variable positive at the reached point is in the support too
            if status == "optimal":
                support |= positives(_extract(sys, cols, tab))
    return support
