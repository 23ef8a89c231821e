"""Linear-programming layer: positive representability, phase-space
robustness, robustness over stabilizer-type points, tensor composition.

The constraint system is Pauli-expectation matching: column j holds the
dual values of phase point alpha_j against every label, the right-hand
side holds the state's Pauli expectations.  Minimal l1 solutions come from
the in-package revised simplex as basic (vertex) solutions, so supports
never exceed the number of labels.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, InvalidStateError
from .pauli import PauliLabel, label_index, parse_pauli
from .phasespace import (
    Catalog,
    PhasePoint,
    ValueAssignment,
    cached_catalog,
    tensor_points,
)
from .simplex import DenseColumns, SignSplitColumns, solve_lp
from .simulator import TOL_ZERO, WRep

TOL_EQ = 1e-7


@dataclass
class ExpectationVector:
    """Pauli expectations of a state, indexed like `all_labels`."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (4**self.n,):
            raise InvalidStateError(f"need {4 ** self.n} expectation values")
        if abs(self.values[0] - 1.0) > 1e-8:
            raise InvalidStateError("identity expectation must be 1 (trace)")
        if np.abs(self.values).max() > 1 + 1e-8:
            raise InvalidStateError("Pauli expectations must lie in [-1, 1]")

    @staticmethod
    def from_dense(rho: np.ndarray) -> "ExpectationVector":
        from .oracle import pauli_basis

        rho = np.asarray(rho, dtype=complex)
        n = int(round(np.log2(rho.shape[0])))
        vals = np.einsum("kij,ji->k", pauli_basis(n), rho).real
        return ExpectationVector(n, vals)

    @staticmethod
    def from_pauli_map(n: int, mapping: dict[str, float]) -> "ExpectationVector":
        vals = np.zeros(4**n)
        vals[0] = 1.0
        for text, v in mapping.items():
            vals[label_index(parse_pauli(text, n))] = float(v)
        return ExpectationVector(n, vals)


@dataclass
class LPResult:
    objective: float
    solution: WRep | None
    residual: float
    support_size: int
    status: str
    iterations: int
    wall_time: float


def dual_value(point: PhasePoint, a: PauliLabel) -> int:
    """Dual expansion value: (-1)^gamma(a) inside the set, 0 outside.

    Equals the trace pairing of the point's operator with T_a.
    """
    dec = point.omega.decompose(a)
    if dec is None:
        return 0
    return -1 if point._fold(dec) else 1


class DualColumns:
    """Constraint columns M[i, j] = dual pairing of point j with label i."""

    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self.nrows = 4**catalog.n
        self.ncols = len(catalog.points)

    @cached_property
    def dense(self) -> np.ndarray:
        m = np.zeros((self.nrows, self.ncols))
        for omega in self.catalog.sets:
            start, stop = self.catalog.set_ranges[omega]
            rows, signs = _set_block(omega)
            m[rows, start:stop] = signs
        return m

    def column_sparse(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """(row indices, +-1 values); exactly |Omega| nonzeros."""
        p = self.catalog.points[j]
        rows, vals = [], []
        for key in p.omega.element_keys():
            dec = p.omega.decompose(
                PauliLabel(p.n, key >> p.n, key & ((1 << p.n) - 1))
            )
            rows.append(key)
            vals.append(-1.0 if p._fold(dec) else 1.0)
        return np.array(rows), np.array(vals)


def _set_block(omega) -> tuple[np.ndarray, np.ndarray]:
    """Rows and sign matrix for all assignments of one set, vectorized.

    gamma is affine in the assignment bits: gamma(e) = phi(e) + <coeff(e), bits>,
    where phi folds the beta corrections along the decomposition of e.
    """
    g = len(omega.isotropic_gens)
    r = len(omega.reps)
    zero = PhasePoint(omega, ValueAssignment((0,) * g, (0,) * r))
    keys = list(omega.element_keys())
    phi = np.empty(len(keys))
    coeff = np.zeros((len(keys), g + r))
    for row, key in enumerate(keys):
        a = PauliLabel(omega.n, key >> omega.n, key & ((1 << omega.n) - 1))
        dec = omega.decompose(a)
        phi[row] = zero._fold(dec)
        mask = dec.gen_mask
        i = 0
        while mask:
            if mask & 1:
                coeff[row, i] = 1
            mask >>= 1
            i += 1
        if dec.rep_index is not None:
            coeff[row, g + dec.rep_index] = 1
    bits = np.array(
        list(itertools.product((0, 1), repeat=g + r)), dtype=float
    ).T  # (g+r, n_assignments), ordered like gamma_set
    signs = np.where((phi[:, None] + coeff @ bits) % 2 == 0, 1.0, -1.0)
    return np.array(keys), signs


def build_columns(catalog: Catalog) -> DualColumns:
    cached = getattr(catalog, "_columns_cache", None)
    if cached is None:
        cached = DualColumns(catalog)
        catalog._columns_cache = cached
    return cached


def _wrep_from_x(x: dict[int, float], catalog: Catalog) -> WRep:
    return WRep(catalog.n, {catalog.points[j]: v for j, v in x.items() if v != 0.0})


def feasibility(
    b: ExpectationVector, catalog: Catalog, solver=solve_lp
) -> WRep | None:
    """A non-negative expansion matching the expectations, or None if the
    phase-1 program certifies that none exists."""
    if b.n != catalog.n:
        raise DomainError("expectation vector and catalog disagree on n")
    cols = DenseColumns(build_columns(catalog).dense)
    sol = solver(cols, np.zeros(cols.ncols), b.values)
    if sol.status != "optimal":
        return None
    return _wrep_from_x(sol.x, catalog)


def robustness(
    b: ExpectationVector, catalog: Catalog, solver=solve_lp
) -> LPResult:
    """Minimal l1 norm over expansions of the state in catalog points."""
    if b.n != catalog.n:
        raise DomainError("expectation vector and catalog disagree on n")
    t0 = time.perf_counter()
    mat = build_columns(catalog).dense
    cols = SignSplitColumns(mat)
    sol = solver(cols, np.ones(cols.ncols), b.values)
    wall = time.perf_counter() - t0
    if sol.status != "optimal":
        return LPResult(np.inf, None, np.inf, 0, sol.status, sol.iterations, wall)
    q = cols.merge(sol.x)
    w = _wrep_from_x(q, catalog)
    qvec = np.zeros(mat.shape[1])
    for j, v in q.items():
        qvec[j] = v
    residual = float(np.abs(mat @ qvec - b.values).max())
    support = sum(1 for v in q.values() if abs(v) > TOL_ZERO)
    return LPResult(
        sol.objective, w, residual, support, "optimal", sol.iterations, wall
    )


def robustness_of_magic(
    b: ExpectationVector, catalog: Catalog | None = None, solver=solve_lp
) -> LPResult:
    """Minimal l1 norm over stabilizer-state expansions (isotropic points)."""
    if catalog is None:
        catalog = cached_catalog(b.n, {0})
    if any(s.xi != 0 for s in catalog.sets):
        raise DomainError("stabilizer robustness needs an isotropic catalog")
    return robustness(b, catalog, solver)


def sandwich_gap(
    b: ExpectationVector,
    catalog: Catalog,
    catalog0: Catalog | None = None,
    tol: float = 1e-6,
) -> tuple[float, float, bool]:
    """Both robustness values and whether the two-sided bound holds."""
    r = robustness(b, catalog).objective
    rs = robustness_of_magic(b, catalog0).objective
    ok = (r <= rs + tol) and (rs <= (4 * b.n + 1) * r + tol)
    return r, rs, ok


def tensor_compose(w: WRep, w0: WRep) -> WRep:
    """Expansion of the tensor product; the second factor must be supported
    on isotropic (stabilizer-type) points.  1-norms multiply."""
    bad = [p for p in w0.entries if p.omega.xi != 0]
    if bad:
        raise DomainError(
            "second factor must be supported on isotropic points only"
        )
    entries: dict[PhasePoint, float] = {}
    for p1, c1 in w.entries.items():
        for p2, c2 in w0.entries.items():
            q = tensor_points(p1, p2)
            entries[q] = entries.get(q, 0.0) + c1 * c2
    return WRep(w.n + w0.n, entries)
