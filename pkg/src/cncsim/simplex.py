"""Deterministic two-phase revised simplex for equality-form programs

    min c.x   s.t.  A x = b,  x >= 0.

Columns are supplied through an oracle so that sign-split l1 problems
([M, -M]) never materialize twice.  Degeneracy (endemic in these highly
symmetric programs) is broken by perturbing the rhs along the starting
basis; the returned solution is re-solved against the true rhs, with a
pure Bland's-rule restart if the perturbed basis turns out infeasible for
it.  All tie-breaks are by fixed index order, so runs are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SolverError

TOL_PIVOT = 1e-9
TOL_COST = 1e-9
TOL_FEAS = 1e-7
STALL_LIMIT = 60
PERTURB = 1e-9  # anti-degeneracy ramp added to the rhs in basis coordinates


class DenseColumns:
    """Column oracle over an explicit dense matrix."""

    def __init__(self, a: np.ndarray):
        self.a = np.ascontiguousarray(a, dtype=float)
        self.nrows, self.ncols = self.a.shape

    def price(self, y: np.ndarray) -> np.ndarray:
        return y @ self.a

    def column(self, j: int) -> np.ndarray:
        return self.a[:, j]


class SignSplitColumns:
    """Columns [M, -M] without storing the negated copy."""

    def __init__(self, m: np.ndarray):
        self.m = np.ascontiguousarray(m, dtype=float)
        self.nrows = self.m.shape[0]
        self.half = self.m.shape[1]
        self.ncols = 2 * self.half

    def price(self, y: np.ndarray) -> np.ndarray:
        ym = y @ self.m
        return np.concatenate([ym, -ym])

    def column(self, j: int) -> np.ndarray:
        if j < self.half:
            return self.m[:, j]
        return -self.m[:, j - self.half]

    def merge(self, x: dict[int, float]) -> dict[int, float]:
        """Fold split variables back to signed coefficients per column."""
        out: dict[int, float] = {}
        for j, v in x.items():
            col = j if j < self.half else j - self.half
            sign = 1.0 if j < self.half else -1.0
            out[col] = out.get(col, 0.0) + sign * v
        return out


@dataclass
class LPSolution:
    status: str
    objective: float
    x: dict[int, float]
    iterations: int
    basis: list[int] = field(default_factory=list)
    phase1_objective: float = 0.0


class _Simplex:
    def __init__(self, cols, b: np.ndarray, max_iter: int, perturb: float = PERTURB):
        self.cols = cols
        self.m = len(b)
        self.n = cols.ncols
        self.row_sign = np.where(b < 0, -1.0, 1.0)
        self.b = b * self.row_sign
        self.active = list(range(self.m))  # rows kept after redundancy removal
        self.basis = [self.n + i for i in range(self.m)]  # start all-artificial
        self.max_iter = max_iter
        self.perturb = perturb
        self.iterations = 0

    # artificial n + i is the unit column on row i (after the sign flip)
    def _column(self, j: int) -> np.ndarray:
        if j < self.n:
            full = self.cols.column(j) * self.row_sign
        else:
            full = np.zeros(self.m)
            full[j - self.n] = 1.0
        return full[self.active]

    def _basis_matrix(self) -> np.ndarray:
        mat = np.empty((len(self.active), len(self.basis)))
        for k, j in enumerate(self.basis):
            mat[:, k] = self._column(j)
        return mat

    def _price_real(self, y: np.ndarray) -> np.ndarray:
        """y^T A over all real columns, undoing the sign flip and row mask."""
        full = np.zeros(self.m)
        full[self.active] = y
        return self.cols.price(full * self.row_sign)

    def run(self, cost_of, reduced_costs) -> tuple[np.ndarray, float]:
        """Iterate to optimality for the given cost structure.

        Works on a rhs perturbed along the current basis, which breaks the
        degenerate plateaus these highly symmetric programs are full of;
        optimality is certified by reduced costs alone, and the returned
        solution is re-solved against the true rhs.
        """
        bmat = self._basis_matrix()
        ramp = self.perturb * np.arange(1, len(self.basis) + 1)
        b_pert = self.b[self.active] + bmat @ ramp
        bland = self.perturb == 0.0
        stall = 0
        last_obj = np.inf
        while True:
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise SolverError(f"iteration limit {self.max_iter} exceeded")
            bmat = self._basis_matrix()
            cb = np.array([cost_of(j) for j in self.basis])
            try:
                xb = np.linalg.solve(bmat, b_pert)
                y = np.linalg.solve(bmat.T, cb)
            except np.linalg.LinAlgError as exc:
                raise SolverError(f"singular basis: {exc}") from exc
            obj = float(cb @ xb)
            if obj > last_obj - 1e-13:
                stall += 1
                if stall > STALL_LIMIT:
                    bland = True  # escape the plateau with Bland's rule
            else:
                stall = 0
                bland = False
            last_obj = obj

            rc = reduced_costs(y)
            basic = set(j for j in self.basis if j < self.n)
            enter = -1
            if bland:
                for j in np.nonzero(rc < -TOL_COST)[0]:
                    if int(j) not in basic:
                        enter = int(j)
                        break
            else:
                j = int(np.argmin(rc))
                if rc[j] < -TOL_COST:
                    if j not in basic:
                        enter = j
                    else:
                        # noise made a basic column price negative; scan
                        order = np.argsort(rc, kind="stable")
                        for jj in order:
                            if rc[jj] >= -TOL_COST:
                                break
                            if int(jj) not in basic:
                                enter = int(jj)
                                break
            if enter < 0:
                xb_true = np.linalg.solve(bmat, self.b[self.active])
                if float(xb_true.min()) < -1e-9:
                    # the perturbed optimum is not a feasible basis for the
                    # true rhs; the caller restarts without perturbation
                    raise _PerturbationFailed()
                return xb_true, float(cb @ xb_true)

            d = np.linalg.solve(bmat, self._column(enter))
            leave, best = -1, np.inf
            for k in range(len(self.basis)):
                if d[k] > TOL_PIVOT:
                    ratio = xb[k] / d[k]
                    if ratio < best - 1e-12 or (
                        ratio <= best + 1e-12
                        and leave >= 0
                        and self._leave_rank(k) < self._leave_rank(leave)
                    ):
                        best = ratio
                        leave = k
            if leave < 0:
                raise SolverError("unbounded direction encountered")
            self.basis[leave] = enter

    def _leave_rank(self, k: int) -> tuple[int, int]:
        # on ratio ties kick artificials first, then the lowest column index
        j = self.basis[k]
        return (0 if j >= self.n else 1, j)

    def drop_redundant_rows(self):
        """Pivot zero-level artificials out; drop rows no column can serve."""
        while True:
            art_pos = [k for k, j in enumerate(self.basis) if j >= self.n]
            if not art_pos:
                return
            bmat = self._basis_matrix()
            xb = np.linalg.solve(bmat, self.b[self.active])
            if any(abs(xb[k]) > TOL_FEAS for k in art_pos):
                raise SolverError("positive artificial variable after phase 1")
            k = art_pos[0]
            binv_row = np.linalg.inv(bmat)[k]
            in_basis = set(self.basis)
            vals = np.abs(self._price_real(binv_row))
            pivoted = False
            for cand in np.nonzero(vals > 1e-7)[0]:
                if int(cand) not in in_basis:
                    self.basis[k] = int(cand)
                    pivoted = True
                    break
            if not pivoted:
                row = self.basis[k] - self.n
                self.active.remove(row)
                del self.basis[k]


class _PerturbationFailed(Exception):
    pass


def solve_lp(cols, c: np.ndarray, b: np.ndarray, max_iter: int = 200_000) -> LPSolution:
    """Two-phase simplex; returns a basic optimal solution or infeasibility."""
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)
    try:
        return _solve_two_phase(cols, c, b, max_iter, PERTURB)
    except _PerturbationFailed:
        return _solve_two_phase(cols, c, b, max_iter, 0.0)


def _solve_two_phase(cols, c, b, max_iter, perturb) -> LPSolution:
    sx = _Simplex(cols, b, max_iter, perturb)

    xb, obj1 = sx.run(
        cost_of=lambda j: 0.0 if j < sx.n else 1.0,
        reduced_costs=lambda y: -sx._price_real(y),
    )
    if obj1 > TOL_FEAS:
        return LPSolution(
            "infeasible", np.inf, {}, sx.iterations, list(sx.basis), obj1
        )
    sx.drop_redundant_rows()

    xb, obj2 = sx.run(
        cost_of=lambda j: float(c[j]) if j < sx.n else 0.0,
        reduced_costs=lambda y: c - sx._price_real(y),
    )
    x: dict[int, float] = {}
    for k, j in enumerate(sx.basis):
        if j < sx.n and xb[k] != 0.0:
            x[j] = x.get(j, 0.0) + float(xb[k])
    return LPSolution("optimal", float(obj2), x, sx.iterations, list(sx.basis), obj1)
