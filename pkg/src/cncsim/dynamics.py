"""State-update rules for phase points: Pauli measurements and Clifford
conjugation.

Measurement of T_a on a point (Omega, gamma):

  a in Omega:   outcome gamma(a) is certain; gamma branches uniformly
                between itself and gamma + [a, .].
  a not in Omega: both outcomes have probability 1/2; the set becomes
                Omega x a = Omega_a union (a + Omega_a) and gamma is
                extended by the observed outcome.

All updates act on the stored generators and representatives only, so a
step costs O(n) word operations regardless of the size of Omega.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConstructionError, DimensionMismatch, DomainError, ParseError
from .pauli import PauliLabel, product_phase_int, symp_int
from .phasespace import (
    CncSet,
    PhasePoint,
    ValueAssignment,
    assemble_phase_point,
    make_cnc,
)


@dataclass(frozen=True)
class UpdateBranch:
    """Probability of an outcome and the weighted successor points."""

    probability: float
    successors: tuple[tuple[PhasePoint, float], ...]


def _updated_presentation(omega: CncSet, a: PauliLabel):
    """Generators and reps presenting Omega x a, for a outside Omega.

    Every returned element except `a` itself lies in Omega and commutes
    with a, so old gamma values remain valid on it.
    """
    n = omega.n
    ak = a.key
    gens = list(omega.isotropic_gens)
    reps = list(omega.reps)
    sigma = [symp_int(ak, g.key, n) for g in gens]
    tau = [symp_int(ak, r.key, n) for r in reps]

    if any(sigma):
        p = sigma.index(1)
        gp = gens[p]
        new_gens = [
            (g ^ gp if sigma[i] else g) for i, g in enumerate(gens) if i != p
        ]
        new_reps = [(r ^ gp if tau[k] else r) for k, r in enumerate(reps)]
        new_gens.append(a)
        return new_gens, new_reps
    if any(tau):
        return gens + [a], [r for k, r in enumerate(reps) if tau[k] == 0]
    return gens + [a], reps


def omega_times_a(omega: CncSet, a: PauliLabel) -> CncSet:
    """The derived set Omega x a, in canonical form; requires a not in Omega."""
    if a.n != omega.n:
        raise DimensionMismatch(f"qubit counts differ: {a.n} != {omega.n}")
    if a in omega:
        raise DomainError("a is in the set; the derived set is defined for a outside")
    gens, reps = _updated_presentation(omega, a)
    return make_cnc(gens, reps, n=omega.n, validate=False)


def gamma_times_s(point: PhasePoint, a: PauliLabel, s: int) -> PhasePoint:
    """Post-measurement point (Omega x a, gamma x s); requires a not in Omega."""
    omega = point.omega
    if a.n != omega.n:
        raise DimensionMismatch(f"qubit counts differ: {a.n} != {omega.n}")
    if a in omega:
        raise DomainError("a is in the set; use the gamma-branch update instead")
    gens, reps = _updated_presentation(omega, a)
    gbits = [s if g == a else point.gamma_of(g) for g in gens]
    rbits = [point.gamma_of(r) for r in reps]
    return assemble_phase_point(gens, gbits, reps, rbits, n=omega.n, validate=False)


def gamma_plus_bracket(point: PhasePoint, a: PauliLabel) -> PhasePoint:
    """The point (Omega, gamma + [a, .]), for a inside Omega."""
    omega = point.omega
    n = omega.n
    ak = a.key
    gb = tuple(
        b ^ symp_int(ak, g.key, n)
        for b, g in zip(point.gamma.gen_bits, omega.isotropic_gens)
    )
    rb = tuple(
        b ^ symp_int(ak, r.key, n)
        for b, r in zip(point.gamma.rep_bits, omega.reps)
    )
    return PhasePoint(omega, ValueAssignment(gb, rb))


def measure_update(point: PhasePoint, a: PauliLabel, s: int) -> UpdateBranch:
    """Effect of measuring T_a with outcome s on a phase point."""
    if a.n != point.n:
        raise DimensionMismatch(f"qubit counts differ: {a.n} != {point.n}")
    dec = point.omega.decompose(a)
    if dec is not None:
        prob = 1.0 if s == point._fold(dec) else 0.0
        flipped = gamma_plus_bracket(point, a)
        return UpdateBranch(prob, ((point, 0.5), (flipped, 0.5)))
    return UpdateBranch(0.5, ((gamma_times_s(point, a, s), 1.0),))


# --- Clifford tableaus --------------------------------------------------------

_SingleImage = tuple[PauliLabel, int]  # (label, sign bit)


@dataclass(frozen=True)
class CliffordTableau:
    """Images of the generators X_i, Z_i under conjugation, with sign bits."""

    n: int
    x_images: tuple[_SingleImage, ...]
    z_images: tuple[_SingleImage, ...]

    @staticmethod
    def identity(n: int) -> "CliffordTableau":
        xs = tuple((PauliLabel(n, 1 << i, 0), 0) for i in range(n))
        zs = tuple((PauliLabel(n, 0, 1 << i), 0) for i in range(n))
        return CliffordTableau(n, xs, zs)

    def image_of(self, a: PauliLabel) -> tuple[int, PauliLabel]:
        """(phase bit, image label) with h T_a h^dag = (-1)^phase T_image."""
        if a.n != self.n:
            raise DimensionMismatch(f"qubit counts differ: {a.n} != {self.n}")
        k = a.y_count() % 4
        acc = 0
        for i in range(self.n):
            if (a.x >> i) & 1:
                lab, s = self.x_images[i]
                k = (k + 2 * s + product_phase_int(acc, lab.key, self.n)) % 4
                acc ^= lab.key
        for i in range(self.n):
            if (a.z >> i) & 1:
                lab, s = self.z_images[i]
                k = (k + 2 * s + product_phase_int(acc, lab.key, self.n)) % 4
                acc ^= lab.key
        from .pauli import label_from_key

        if k % 2:
            raise ConstructionError("tableau is not a valid Clifford image set")
        return (k // 2) % 2, label_from_key(self.n, acc)

    def then(self, nxt: "CliffordTableau") -> "CliffordTableau":
        """Tableau of (nxt after self) in circuit order."""
        if nxt.n != self.n:
            raise DimensionMismatch("qubit counts differ in composition")

        def push(img: _SingleImage) -> _SingleImage:
            lab, s = img
            s2, lab2 = nxt.image_of(lab)
            return (lab2, (s + s2) % 2)

        return CliffordTableau(
            self.n,
            tuple(push(e) for e in self.x_images),
            tuple(push(e) for e in self.z_images),
        )

    def preserves_symplectic(self) -> bool:
        basis = [lab for lab, _ in self.x_images] + [lab for lab, _ in self.z_images]
        src = [PauliLabel(self.n, 1 << i, 0) for i in range(self.n)] + [
            PauliLabel(self.n, 0, 1 << i) for i in range(self.n)
        ]
        for i in range(2 * self.n):
            for j in range(i + 1, 2 * self.n):
                if symp_int(basis[i].key, basis[j].key, self.n) != symp_int(
                    src[i].key, src[j].key, self.n
                ):
                    return False
        return True


_TWO_QUBIT = {"CX", "CZ", "SWAP"}
_ONE_QUBIT = {"H", "S", "X", "Y", "Z"}


def _gate_tableau(n: int, name: str, qubits: tuple[int, ...]) -> CliffordTableau:
    xs = [(PauliLabel(n, 1 << i, 0), 0) for i in range(n)]
    zs = [(PauliLabel(n, 0, 1 << i), 0) for i in range(n)]
    if name in _ONE_QUBIT:
        (q,) = qubits
        i = q - 1
        if name == "H":
            xs[i] = (PauliLabel(n, 0, 1 << i), 0)
            zs[i] = (PauliLabel(n, 1 << i, 0), 0)
        elif name == "S":
            xs[i] = (PauliLabel(n, 1 << i, 1 << i), 0)
        elif name == "X":
            zs[i] = (PauliLabel(n, 0, 1 << i), 1)
        elif name == "Y":
            xs[i] = (PauliLabel(n, 1 << i, 0), 1)
            zs[i] = (PauliLabel(n, 0, 1 << i), 1)
        elif name == "Z":
            xs[i] = (PauliLabel(n, 1 << i, 0), 1)
    else:
        qa, qb = qubits
        i, j = qa - 1, qb - 1
        if name == "CX":
            xs[i] = (PauliLabel(n, (1 << i) | (1 << j), 0), 0)
            zs[j] = (PauliLabel(n, 0, (1 << i) | (1 << j)), 0)
        elif name == "CZ":
            xs[i] = (PauliLabel(n, 1 << i, 1 << j), 0)
            xs[j] = (PauliLabel(n, 1 << j, 1 << i), 0)
        elif name == "SWAP":
            xs[i], xs[j] = xs[j], xs[i]
            zs[i], zs[j] = zs[j], zs[i]
    return CliffordTableau(n, tuple(xs), tuple(zs))


def parse_gate(text: str) -> tuple[str, tuple[int, ...]]:
    parts = text.split()
    if not parts:
        raise ParseError("empty gate line")
    name = parts[0].upper()
    try:
        qubits = tuple(int(p) for p in parts[1:])
    except ValueError:
        raise ParseError(f"bad qubit index in {text!r}") from None
    if name in _ONE_QUBIT and len(qubits) != 1:
        raise ParseError(f"{name} takes one qubit: {text!r}")
    if name in _TWO_QUBIT and (len(qubits) != 2 or qubits[0] == qubits[1]):
        raise ParseError(f"{name} takes two distinct qubits: {text!r}")
    if name not in _ONE_QUBIT | _TWO_QUBIT:
        raise ParseError(f"unknown gate {name!r}")
    return name, qubits


def invert_gates(gates: Sequence[str]) -> list[str]:
    """Gate list realizing the inverse circuit."""
    out = []
    for text in reversed([g for g in gates]):
        name, qubits = parse_gate(text)
        if name == "S":
            # S^dag = Z then S
            q = qubits[0]
            out.append(f"Z {q}")
            out.append(f"S {q}")
        else:
            out.append(text)
    return out


def clifford_from_gates(n: int, gates: Sequence[str]) -> CliffordTableau:
    """Tableau of the circuit given as gate lines, composed left to right."""
    acc = CliffordTableau.identity(n)
    for text in gates:
        name, qubits = parse_gate(text)
        for q in qubits:
            if not 1 <= q <= n:
                raise ParseError(f"qubit {q} out of range 1..{n}")
        acc = acc.then(_gate_tableau(n, name, qubits))
    return acc


def clifford_act(h: CliffordTableau, point: PhasePoint) -> PhasePoint:
    """Conjugated phase point (h.Omega, h.gamma); exact covariance."""
    if h.n != point.n:
        raise DimensionMismatch(f"qubit counts differ: {h.n} != {point.n}")
    gens, gbits, reps, rbits = [], [], [], []
    for g, b in zip(point.omega.isotropic_gens, point.gamma.gen_bits):
        phase, img = h.image_of(g)
        gens.append(img)
        gbits.append(b ^ phase)
    for r, b in zip(point.omega.reps, point.gamma.rep_bits):
        phase, img = h.image_of(r)
        reps.append(img)
        rbits.append(b ^ phase)
    return assemble_phase_point(gens, gbits, reps, rbits, n=point.n, validate=False)
