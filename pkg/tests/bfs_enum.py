"""Independent check for the simplex solver: enumerate basic feasible
solutions of a standard-form LP by brute force."""

import itertools

import numpy as np

from sagaudit.lp import LinearProgram

FEAS_TOL = 1e-8


def random_bounded_lp(rng, max_vars=8):
    """A random LP that is always feasible (x = 0 works) and bounded.

    Nonnegative constraint matrices plus a simplex-style row keep the
    feasible region inside a box, so the optimum exists and enumeration
    has something to find.
    """
    n = int(rng.integers(2, max_vars + 1))
    m = int(rng.integers(1, 4))
    a_ub = rng.uniform(0.0, 2.0, size=(m, n))
    b_ub = rng.uniform(0.5, 5.0, size=m)
    # bounding row: sum(x) <= U guarantees a finite optimum
    a_ub = np.vstack([a_ub, np.ones(n)])
    b_ub = np.append(b_ub, rng.uniform(1.0, 10.0))
    c = rng.uniform(-3.0, 3.0, size=n)
    a_eq = b_eq = None
    if rng.random() < 0.3:
        # equality row through a feasible point, so the LP stays feasible
        x0 = rng.uniform(0.0, 0.2, size=n)
        row = rng.uniform(0.0, 1.0, size=n)
        a_eq = row[None, :]
        b_eq = np.array([row @ x0])
    return LinearProgram(objective=c, a_ub=a_ub, b_ub=b_ub,
                         a_eq=a_eq, b_eq=b_eq)


def best_bfs_objective(lp):
    """Max objective over all basic feasible solutions, or None if none.

    Standard form: slacks appended for <= rows, all variables >= 0 (the
    generator never sets finite upper bounds or nonzero lower bounds).
    """
    n = lp.c.size
    n_slack = lp.a_ub.shape[0]
    rows, rhs = [], []
    for i in range(n_slack):
        slack = np.zeros(n_slack)
        slack[i] = 1.0
        rows.append(np.concatenate([lp.a_ub[i], slack]))
        rhs.append(lp.b_ub[i])
    for i in range(lp.a_eq.shape[0]):
        rows.append(np.concatenate([lp.a_eq[i], np.zeros(n_slack)]))
        rhs.append(lp.b_eq[i])
    a = np.array(rows)
    b = np.array(rhs)
    m, total = a.shape
    c_ext = np.concatenate([lp.c, np.zeros(n_slack)])

    best = None
    for cols in itertools.combinations(range(total), m):
        sub = a[:, cols]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x_b = np.linalg.solve(sub, b)
        if np.any(x_b < -FEAS_TOL):
            continue
        x = np.zeros(total)
        x[list(cols)] = x_b
        # basic solutions satisfy the equations by construction; re-check
        # to weed out badly conditioned bases
        if np.max(np.abs(a @ x - b)) > 1e-6:
            continue
        val = float(c_ext @ x)
        if best is None or val > best:
            best = val
    return best
