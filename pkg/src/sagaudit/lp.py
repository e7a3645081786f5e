"""Dense two-phase simplex solver.

Small, self-contained, and deterministic: Bland's rule throughout, so the
solver terminates on degenerate problems without perturbation tricks.  The
problems handled here are tiny (a few dozen variables), so tableau density
is a feature, not a bug.
"""

import numpy as np

EPS_LP = 1e-7
_PIVOT_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LpError(Exception):
    pass


class MalformedProgram(LpError):
    """Dimension mismatch between objective, constraints and bounds."""


class CycleLimit(LpError):
    """Pivot count exceeded the anti-cycling guard."""


class LinearProgram:
    """max c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lo <= x <= hi."""

    def __init__(self, objective, a_ub=None, b_ub=None, a_eq=None, b_eq=None,
                 bounds=None):
        self.c = np.asarray(objective, dtype=float)
        n = self.c.size
        self.a_ub = np.zeros((0, n)) if a_ub is None else np.asarray(a_ub, dtype=float)
        self.b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
        self.a_eq = np.zeros((0, n)) if a_eq is None else np.asarray(a_eq, dtype=float)
        self.b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
        if bounds is None:
            bounds = [(0.0, None)] * n
        self.bounds = [(float(lo), None if hi is None else float(hi))
                       for lo, hi in bounds]
        self._validate()

    def _validate(self):
        n = self.c.size
        if self.a_ub.ndim != 2 or self.a_eq.ndim != 2:
            raise MalformedProgram("constraint matrices must be 2-D")
        if self.a_ub.shape[1] != n or self.a_eq.shape[1] != n:
            raise MalformedProgram("constraint column count != objective length")
        if self.a_ub.shape[0] != self.b_ub.size:
            raise MalformedProgram("a_ub rows != b_ub length")
        if self.a_eq.shape[0] != self.b_eq.size:
            raise MalformedProgram("a_eq rows != b_eq length")
        if len(self.bounds) != n:
            raise MalformedProgram("bounds length != objective length")
        for lo, _hi in self.bounds:
            if lo < 0:
                raise MalformedProgram("lower bounds must be >= 0")


class LpOutcome:
    def __init__(self, status, x=None, objective_value=None, reduced_costs=None):
        self.status = status
        self.x = x
        self.objective_value = objective_value
        self.reduced_costs = reduced_costs

    @property
    def is_optimal(self):
        return self.status == OPTIMAL


def _pivot(T, i, j):
    T[i] /= T[i, j]
    col = T[:, j].copy()
    col[i] = 0.0
    # rank-1 update clears column j everywhere but the pivot row
    T -= np.outer(col, T[i])
    T[:, j] = 0.0
    T[i, j] = 1.0


def _run_simplex(T, basis, limit):
    """Iterate on tableau T (last row = reduced costs, last col = rhs)."""
    m = T.shape[0] - 1
    pivots = 0
    while True:
        improving = np.nonzero(T[-1, :-1] > _PIVOT_TOL)[0]
        if improving.size == 0:
            return OPTIMAL, pivots
        j = improving[0]  # Bland: lowest improving index
        col = T[:m, j]
        pos = col > _PIVOT_TOL
        if not pos.any():
            return UNBOUNDED, pivots
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        rmin = ratios.min()
        ties = np.nonzero(ratios <= rmin + 1e-12)[0]
        i = ties[np.argmin(basis[ties])]
        _pivot(T, i, j)
        basis[i] = j
        pivots += 1
        if pivots > limit:
            raise CycleLimit(f"pivot limit {limit} exceeded")


def solve(lp: LinearProgram) -> LpOutcome:
    """Two-phase simplex; optimal results are basic feasible solutions."""
    n = lp.c.size
    lo = np.array([b[0] for b in lp.bounds])
    hi = [b[1] for b in lp.bounds]

    # shift x = y + lo so all variables are nonnegative
    a_ub = lp.a_ub
    b_ub = lp.b_ub - (a_ub @ lo if a_ub.size else 0.0)
    a_eq = lp.a_eq
    b_eq = lp.b_eq - (a_eq @ lo if a_eq.size else 0.0)

    # finite upper bounds become explicit rows
    ub_rows, ub_rhs = [], []
    for k, h in enumerate(hi):
        if h is None:
            continue
        span = h - lo[k]
        if span < -EPS_LP:
            return LpOutcome(INFEASIBLE)
        row = np.zeros(n)
        row[k] = 1.0
        ub_rows.append(row)
        ub_rhs.append(max(span, 0.0))
    if ub_rows:
        a_ub = np.vstack([a_ub, ub_rows]) if a_ub.size else np.array(ub_rows)
        b_ub = np.concatenate([b_ub, ub_rhs])

    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq
    limit = 50 * (m + n)

    # columns: [y | slacks | artificials], rows normalised to rhs >= 0
    A = np.zeros((m, n + m_ub))
    rhs = np.zeros(m)
    if m_ub:
        A[:m_ub, :n] = a_ub
        A[np.arange(m_ub), n + np.arange(m_ub)] = 1.0
        rhs[:m_ub] = b_ub
    if m_eq:
        A[m_ub:, :n] = a_eq
        rhs[m_ub:] = b_eq
    neg = rhs < 0
    A[neg] *= -1.0
    rhs[neg] *= -1.0

    basis = np.empty(m, dtype=int)
    art_rows = []
    for r in range(m_ub):
        if neg[r]:
            art_rows.append(r)
        else:
            basis[r] = n + r
    art_rows.extend(range(m_ub, m))

    ncols = n + m_ub + len(art_rows)
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :n + m_ub] = A
    T[:m, -1] = rhs
    for k, r in enumerate(art_rows):
        T[r, n + m_ub + k] = 1.0
        basis[r] = n + m_ub + k

    if art_rows:
        # phase 1: maximize -(sum of artificials)
        T[-1, :-1] = T[np.array(art_rows), :-1].sum(axis=0)
        T[-1, n + m_ub:ncols] = 0.0
        T[-1, -1] = T[np.array(art_rows), -1].sum()
        status, _ = _run_simplex(T, basis, limit)
        if status != OPTIMAL or T[-1, -1] > EPS_LP:
            return LpOutcome(INFEASIBLE)
        # pivot lingering artificials out of the basis where possible
        for r in range(m):
            if basis[r] >= n + m_ub:
                cols = np.nonzero(np.abs(T[r, :n + m_ub]) > _PIVOT_TOL)[0]
                if cols.size:
                    _pivot(T, r, cols[0])
                    basis[r] = cols[0]
        keep = basis < n + m_ub
        T = np.hstack([T[:, :n + m_ub], T[:, -1:]])
        T = np.vstack([T[:m][keep], T[-1:]])
        basis = basis[keep]
        m = basis.size

    # phase 2 objective row: reduced costs of the current basis
    c_ext = np.zeros(n + m_ub)
    c_ext[:n] = lp.c
    cB = c_ext[basis]
    T[-1, :-1] = c_ext - cB @ T[:m, :-1]
    T[-1, -1] = -(cB @ T[:m, -1])

    status, _ = _run_simplex(T, basis, limit)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED)

    y = np.zeros(n + m_ub)
    y[basis] = T[:m, -1]
    x = y[:n] + lo
    return LpOutcome(OPTIMAL, x=x, objective_value=float(lp.c @ x),
                     reduced_costs=T[-1, :n].copy())
