"""Dense linear programming by the two-phase simplex method.

One implementation serves two arithmetic modes: exact Fractions (every
comparison is exact, results are rationals) and floats with tolerance-based
pivoting.  Bland's rule is used throughout, so degenerate instances cannot
cycle.  Problems are stated with equality rows plus per-variable bounds and
are converted internally to standard form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = ["LpResult", "solve_lp"]


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: object = None
    x: list | None = None
    y: list | None = None  # multipliers for the equality rows, sense-oriented
    diagnostics: dict = field(default_factory=dict)


def _fraction_solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination with partial (nonzero) pivoting."""
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular basis matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _simplex(tab, basis, cost, limit_col, eps):
    """Bland-rule simplex on an in-place tableau; columns >= limit_col barred.

    tab rows are [coefficients..., rhs]; cost is the reduced-cost row with
    the negated objective in its last slot.  Returns "optimal" or
    "unbounded".
    """
    while True:
        enter = None
        for j in range(limit_col):
            if cost[j] < -eps:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > eps:
                ratio = row[-1] / a
                if (
                    best is None
                    or ratio < best - eps
                    or (abs(ratio - best) <= eps and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot(tab, basis, cost, leave, enter)


def _pivot(tab, basis, cost, row, col):
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    prow = tab[row]
    for i, other in enumerate(tab):
        if i != row and other[col] != 0:
            f = other[col]
            tab[i] = [a - f * b for a, b in zip(other, prow)]
    if cost[col] != 0:
        f = cost[col]
        for j in range(len(cost)):
            cost[j] -= f * prow[j]
    basis[row] = col


def solve_lp(
    c: Sequence,
    a_eq: Sequence[Sequence] | None = None,
    b_eq: Sequence | None = None,
    bounds: Sequence[tuple] | None = None,
    sense: str = "max",
    exact: bool = False,
    eps: float = 1e-9,
) -> LpResult:
    """Optimize c'x subject to a_eq x = b_eq and per-variable bounds.

    bounds entries are (lo, hi) with None for unbounded; the default is
    (0, None).  In exact mode all data is converted to Fractions and eps is
    ignored.  Returns the optimum, a basic optimal point, and multipliers
    for the equality rows oriented so they price the stated sense.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    nv = len(c)
    a_eq = [list(row) for row in (a_eq or [])]
    b_eq = list(b_eq or [])
    if len(a_eq) != len(b_eq):
        raise ValueError("a_eq and b_eq sizes disagree")
    for row in a_eq:
        if len(row) != nv:
            raise ValueError("a_eq row length does not match c")
    if bounds is None:
        bounds = [(0, None)] * nv
    bounds = list(bounds)
    if len(bounds) != nv:
        raise ValueError("bounds length does not match c")

    conv = Fraction if exact else float
    if exact:
        eps = 0
    zero, one = conv(0), conv(1)
    cvec = [conv(v) for v in c]
    amat = [[conv(v) for v in row] for row in a_eq]
    bvec = [conv(v) for v in b_eq]
    m0 = len(amat)

    # Standard-form columns: x_j = base_j + sum(sign_k * u_k).
    col_var: list[tuple[int, int]] = []  # (orig var, sign)
    base = [zero] * nv
    chat = []
    ub_rows: list[tuple[int, object]] = []
    for j in range(nv):
        lo, hi = bounds[j]
        lo = conv(lo) if lo is not None else None
        hi = conv(hi) if hi is not None else None
        if lo is not None:
            if hi is not None and hi < lo:
                return LpResult("infeasible")
            base[j] = lo
            col_var.append((j, 1))
            chat.append(cvec[j])
            if hi is not None:
                ub_rows.append((len(col_var) - 1, hi - lo))
        elif hi is not None:
            base[j] = hi
            col_var.append((j, -1))
            chat.append(-cvec[j])
        else:
            base[j] = zero
            col_var.append((j, 1))
            chat.append(cvec[j])
            col_var.append((j, -1))
            chat.append(-cvec[j])

    nprim = len(col_var)
    nslack = len(ub_rows)
    ncols = nprim + nslack

    rows = []
    rhs = []
    for i in range(m0):
        row = [zero] * ncols
        for k, (j, sg) in enumerate(col_var):
            if amat[i][j] != 0:
                row[k] = amat[i][j] * sg
        rows.append(row)
        rhs.append(bvec[i] - sum((amat[i][j] * base[j] for j in range(nv)), zero))
    for t, (k, ub) in enumerate(ub_rows):
        row = [zero] * ncols
        row[k] = one
        row[nprim + t] = one
        rows.append(row)
        rhs.append(ub)
    chat = chat + [zero] * nslack
    if sense == "max":
        cmin = [-v for v in chat]
    else:
        cmin = list(chat)

    nrows = len(rows)
    signs = [one] * nrows
    for i in range(nrows):
        if rhs[i] < 0:
            signs[i] = -one
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    a0 = [row[:] for row in rows]  # frozen post-flip matrix, for duals

    # Phase 1: artificial basis.
    tab = [rows[i] + [zero] * nrows + [rhs[i]] for i in range(nrows)]
    for i in range(nrows):
        tab[i][ncols + i] = one
    basis = [ncols + i for i in range(nrows)]
    cost = [zero] * (ncols + nrows + 1)
    for i in range(nrows):
        for j in range(ncols):
            cost[j] -= tab[i][j]
        cost[-1] -= tab[i][-1]
    status = _simplex(tab, basis, cost, ncols, eps)
    scale_b = max([abs(v) for v in rhs], default=zero)
    tol_inf = zero if exact else 1e-7 * (1 + float(scale_b))
    if -cost[-1] > tol_inf:
        return LpResult("infeasible")

    # Drive artificials out of the basis; all-zero rows are redundant.
    kept_rows = list(range(nrows))
    i = 0
    while i < len(tab):
        if basis[i] >= ncols:
            piv_col = next(
                (j for j in range(ncols) if abs(tab[i][j]) > (eps or 0)), None
            )
            if piv_col is None and not exact:
                piv_col = next(
                    (j for j in range(ncols) if abs(tab[i][j]) > 1e-11), None
                )
            if piv_col is None:
                tab.pop(i)
                basis.pop(i)
                kept_rows.pop(i)
                continue
            _pivot(tab, basis, cost, i, piv_col)
        i += 1

    # Phase 2 on the artificial-free tableau.
    tab = [row[:ncols] + [row[-1]] for row in tab]
    cost = list(cmin) + [zero]
    for i, b in enumerate(basis):
        if cost[b] != 0:
            f = cost[b]
            for j in range(ncols + 1):
                cost[j] -= f * tab[i][j]
    status = _simplex(tab, basis, cost, ncols, eps)
    if status == "unbounded":
        return LpResult("unbounded")

    u = [zero] * ncols
    for i, b in enumerate(basis):
        u[b] = tab[i][-1]
    x = [base[j] for j in range(nv)]
    for k, (j, sg) in enumerate(col_var):
        x[j] = x[j] + sg * u[k]
    value = sum((cvec[j] * x[j] for j in range(nv)), zero)

    # Multipliers: solve B' y = c_B over the surviving rows.
    y_rows = [zero] * nrows
    dual_ok = True
    if basis:
        # bt = B-transpose: bt[r][i] is the basis-column r entry of kept row i
        bt = [[a0[kept_rows[i]][basis[r]] for i in range(len(basis))] for r in range(len(basis))]
        cb = [cmin[b] for b in basis]
        try:
            if exact:
                ysm = _fraction_solve([row[:] for row in bt], cb)
            else:
                ysm = list(np.linalg.solve(np.array(bt, dtype=float), np.array(cb, dtype=float)))
                ysm = [float(v) for v in ysm]
        except (ValueError, np.linalg.LinAlgError):
            ysm = None
            dual_ok = False
        if ysm is not None:
            for i, ri in enumerate(kept_rows):
                y_rows[ri] = ysm[i]

    diagnostics = {}
    if dual_ok:
        red = [
            cmin[j] - sum((a0[i][j] * y_rows[i] for i in range(nrows)), zero)
            for j in range(ncols)
        ]
        cs = max((abs(u[j] * red[j]) for j in range(ncols)), default=zero)
        dfeas = min((red[j] for j in range(ncols)), default=zero)
        diagnostics["cs_residual"] = float(cs)
        diagnostics["dual_feasibility"] = float(dfeas)
        y_eq = [y_rows[i] * signs[i] for i in range(m0)]
        if sense == "max":
            y_eq = [-v for v in y_eq]
    else:
        y_eq = None

    return LpResult("optimal", value, x, y_eq, diagnostics)
