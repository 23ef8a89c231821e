"""Dense-matrix reference implementation for small systems (n <= 4).

Everything here is intentionally naive: explicit Kronecker products,
projector chains, full spectra.  The combinatorial layer is tested against
these matrices, never the other way around.
"""
from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .errors import DimensionMismatch, InvalidStateError, ParseError, ResourceCapError
from .pauli import PauliLabel, all_labels, parse_signed_pauli
from .phasespace import PhasePoint

DENSE_CAP = 4  # largest n for which dense matrices are built
ATOL = 1e-10

_SINGLE = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_cap(n: int):
    if n > DENSE_CAP:
        raise ResourceCapError(f"dense oracle capped at n <= {DENSE_CAP}")


def pauli_matrix(a: PauliLabel) -> np.ndarray:
    """Hermitian matrix of T_a under the fixed i^(x.z) X Z convention."""
    _check_cap(a.n)
    m = np.eye(1, dtype=complex)
    for i in range(a.n):
        m = np.kron(m, _SINGLE[(a.x >> i) & 1, (a.z >> i) & 1])
    # per-qubit factors already carry i per Y, which is exactly i^(x.z)
    return m


def pauli_basis(n: int) -> np.ndarray:
    """Stack of all 4^n Pauli matrices, indexed like `all_labels`."""
    _check_cap(n)
    return np.stack([pauli_matrix(a) for a in all_labels(n)])


def phase_point_matrix(p: PhasePoint) -> np.ndarray:
    """A = 2^-n sum over Omega of (-1)^gamma(b) T_b; Hermitian, trace one."""
    _check_cap(p.n)
    d = 2**p.n
    acc = np.zeros((d, d), dtype=complex)
    for label, bit in p.items():
        acc += (-1.0) ** bit * pauli_matrix(label)
    return acc / d


def wrep_matrix(entries: Mapping[PhasePoint, float], n: int) -> np.ndarray:
    """Dense reconstruction of a weighted phase-point expansion."""
    _check_cap(n)
    d = 2**n
    acc = np.zeros((d, d), dtype=complex)
    for p, w in entries.items():
        if p.n != n:
            raise DimensionMismatch("mixed qubit counts in expansion")
        acc += w * phase_point_matrix(p)
    return acc


def projector(a: PauliLabel, outcome: int) -> np.ndarray:
    d = 2**a.n
    return (np.eye(d) + (-1.0) ** outcome * pauli_matrix(a)) / 2


def check_state(rho: np.ndarray) -> np.ndarray:
    """Validate a density matrix; returns it unchanged."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError("state matrix must be square")
    if not np.allclose(rho, rho.conj().T, atol=ATOL):
        raise InvalidStateError("state matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise InvalidStateError(f"state trace is {np.trace(rho):.6g}, not 1")
    ev = np.linalg.eigvalsh(rho)
    if ev.min() < -ATOL:
        raise InvalidStateError(f"state has negative eigenvalue; spectrum {ev}")
    return rho


def ket_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def h_state(phi: float) -> np.ndarray:
    """Equatorial state (|0> + e^{-i phi} |1>)/sqrt(2)."""
    return ket_density([1.0, np.exp(-1j * phi)])


def t_state() -> np.ndarray:
    """Single-qubit state with Bloch vector (1,1,1)/sqrt(3)."""
    r = 1 / math.sqrt(3)
    return bloch_density((r, r, r))


def bloch_density(r) -> np.ndarray:
    rx, ry, rz = r
    if rx * rx + ry * ry + rz * rz > 1 + 1e-9:
        raise InvalidStateError(f"Bloch vector {r} lies outside the ball")
    x = _SINGLE[1, 0]
    y = _SINGLE[1, 1]
    z = _SINGLE[0, 1]
    return (np.eye(2) + rx * x + ry * y + rz * z) / 2


def hoggar_state() -> np.ndarray:
    """Three-qubit SIC fiducial proportional to (-1+2i, 1, 1, 1, 1, 1, 1, 1)."""
    return ket_density([-1 + 2j, 1, 1, 1, 1, 1, 1, 1])


def stabilizer_density(signed_gens, n: int | None = None) -> np.ndarray:
    """Density matrix of the state stabilized by signed Pauli strings."""
    parsed = [parse_signed_pauli(s) for s in signed_gens]
    if n is None:
        n = parsed[0][1].n
    _check_cap(n)
    d = 2**n
    rho = np.eye(d, dtype=complex)
    for sign, g in parsed:
        if g.n != n:
            raise DimensionMismatch("mixed qubit counts in stabilizer spec")
        rho = rho @ (np.eye(d) + (-1.0) ** sign * pauli_matrix(g)) / 2
    tr = np.trace(rho).real
    if tr < 1e-12:
        raise InvalidStateError("stabilizer generators are inconsistent")
    return rho / tr


def cross_section_state(x: float, y: float) -> np.ndarray:
    """Two-qubit family rho(x,y) = I/4 + x(XX+ZZ-YY) + y(Z1+Z2)."""
    from .pauli import parse_pauli

    terms = {
        "XX": x,
        "ZZ": x,
        "YY": -x,
        "ZI": y,
        "IZ": y,
    }
    rho = np.eye(4, dtype=complex) / 4
    for text, coef in terms.items():
        rho = rho + coef * pauli_matrix(parse_pauli(text))
    return rho


def is_physical(rho: np.ndarray, tol: float = ATOL) -> bool:
    ev = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    return bool(ev.min() >= -tol)


def named_state(spec: str) -> np.ndarray:
    """Reference states by name.

    Supported: "H", "T", "H(phi=...)", "hoggar", "mixed", "stab:<strings>",
    and any of these with a tensor-power suffix like "H^3" or "mixed^2".
    """
    spec = spec.strip()
    power = 1
    if "^" in spec and not spec.startswith("stab:"):
        spec, _, pw = spec.rpartition("^")
        try:
            power = int(pw)
        except ValueError:
            raise ParseError(f"bad tensor power {pw!r}") from None
        if power < 1:
            raise ParseError("tensor power must be >= 1")

    low = spec.lower()
    if low == "h":
        rho = h_state(-math.pi / 4)
    elif low == "t":
        rho = t_state()
    elif low.startswith("h(phi=") and low.endswith(")"):
        try:
            phi = float(spec[6:-1])
        except ValueError:
            raise ParseError(f"bad angle in {spec!r}") from None
        rho = h_state(phi)
    elif low == "hoggar":
        rho = hoggar_state()
    elif low == "mixed":
        rho = np.eye(2, dtype=complex) / 2
    elif spec.startswith("stab:"):
        rho = stabilizer_density(spec[5:].split(","))
    else:
        raise ParseError(f"unknown state name {spec!r}")

    out = rho
    for _ in range(power - 1):
        out = np.kron(out, rho)
    if out.shape[0] > 2**DENSE_CAP:
        raise ResourceCapError("named state exceeds the dense cap")
    return check_state(out)


def born_rule(rho: np.ndarray, a: PauliLabel, outcome: int) -> float:
    return float(np.trace(projector(a, outcome) @ rho).real)


def dense_sequence_distribution(rho: np.ndarray, program) -> dict[str, float]:
    """Exact joint outcome distribution of a measurement program by
    projector chains (program length capped at 10)."""
    from .simulator import ProgramExecutor

    rho = np.asarray(rho, dtype=complex)
    n = int(round(math.log2(rho.shape[0])))
    _check_cap(n)
    if len(program.steps) > 10:
        raise ResourceCapError("dense sequence distribution capped at 10 steps")

    out: dict[str, float] = {}

    def walk(state, history: tuple[int, ...], weight: float, execu):
        if weight <= 1e-15:
            return
        if execu.done(history):
            out["".join(map(str, history))] = weight
            return
        a, flip = execu.resolve(history)
        for s in (0, 1):
            pr = projector(a, s ^ flip)
            post = pr @ state @ pr
            p = float(np.trace(post).real)
            if p <= 1e-15:
                continue
            walk(post / p, history + (s,), weight * p, execu)

    walk(rho, (), 1.0, ProgramExecutor(program, n))
    return out
