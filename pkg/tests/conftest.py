import numpy as np
import pytest

from cncsim.phasespace import cached_catalog


@pytest.fixture(scope="session")
def cat_n1():
    return cached_catalog(1, {1})


@pytest.fixture(scope="session")
def cat_n2():
    """Full n=2 catalog including the stabilizer-type sets."""
    return cached_catalog(2, {0, 1, 2})


@pytest.fixture(scope="session")
def cat_n2_max():
    return cached_catalog(2, {1, 2})


@pytest.fixture(scope="session")
def cat_n2_stab():
    return cached_catalog(2, {0})


@pytest.fixture(scope="session")
def cat_n2_rebit():
    return cached_catalog(2, {0, 1, 2}, rebit=True)


GATE_POOL = {
    1: ["H 1", "S 1", "X 1", "Y 1", "Z 1"],
    2: ["H 1", "H 2", "S 1", "S 2", "CX 1 2", "CX 2 1", "CZ 1 2", "X 1",
        "Z 2", "SWAP 1 2"],
    3: ["H 1", "H 2", "H 3", "S 1", "S 2", "S 3", "CX 1 2", "CX 2 3",
        "CX 3 1", "CZ 1 3", "X 2", "Z 1", "SWAP 2 3"],
}


def random_gates(rng, n, length=10):
    pool = GATE_POOL[n]
    return [pool[int(rng.integers(len(pool)))] for _ in range(length)]


_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_S = np.diag([1, 1j])
_X = np.array([[0, 1], [1, 0]])
_Y = np.array([[0, -1j], [1j, 0]])
_Z = np.diag([1, -1])


def _lift(m, q, n):
    out = np.eye(1)
    for i in range(n):
        out = np.kron(out, m if i == q else np.eye(2))
    return out


def dense_unitary(gates, n):
    """Reference matrix of a gate list, independent of the tableau code."""
    u = np.eye(2**n, dtype=complex)
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    for text in gates:
        parts = text.split()
        name, qs = parts[0], [int(x) - 1 for x in parts[1:]]
        if name in ("H", "S", "X", "Y", "Z"):
            g = _lift({"H": _H, "S": _S, "X": _X, "Y": _Y, "Z": _Z}[name], qs[0], n)
        elif name == "CX":
            a, b = qs
            g = _lift(p0, a, n) + _lift(p1, a, n) @ _lift(_X, b, n)
        elif name == "CZ":
            a, b = qs
            g = _lift(p0, a, n) + _lift(p1, a, n) @ _lift(_Z, b, n)
        elif name == "SWAP":
            a, b = qs
            c1 = _lift(p0, a, n) + _lift(p1, a, n) @ _lift(_X, b, n)
            c2 = _lift(p0, b, n) + _lift(p1, b, n) @ _lift(_X, a, n)
            g = c1 @ c2 @ c1
        else:
            raise ValueError(name)
        u = g @ u
    return u


def random_density(rng, n):
    """Hilbert-Schmidt random mixed state."""
    d = 2**n
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, n):
    """Fubini-Study random pure state."""
    d = 2**n
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())
