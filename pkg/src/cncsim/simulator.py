"""Weak simulation of Pauli-measurement programs on phase-space expansions.

The sampling algorithm draws a phase point from a non-negative expansion W,
then walks the measurement sequence: a measured label inside the current
set returns its assigned value and branches the assignment on a coin flip;
a label outside returns a fair coin and deterministically updates the set.
Exact small-scale propagation replaces the coins with weighted branch
ensembles and reproduces the full joint outcome distribution.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .dynamics import (
    CliffordTableau,
    clifford_from_gates,
    gamma_plus_bracket,
    gamma_times_s,
    invert_gates,
    measure_update,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    InvalidStateError,
    ParseError,
    ResourceCapError,
)
from .pauli import PauliLabel, parse_pauli
from .phasespace import (
    PhasePoint,
    ValueAssignment,
    assemble_phase_point,
    gamma_set,
    make_cnc,
    tensor_points,
)

TOL_ZERO = 1e-10  # positivity / probability threshold; LP outputs carry noise


@dataclass
class WRep:
    """Sparse signed expansion of a state over phase points."""

    n: int
    entries: dict[PhasePoint, float]

    def __post_init__(self):
        for p in self.entries:
            if p.n != self.n:
                raise DimensionMismatch("entry qubit count differs from WRep n")

    def norm1(self) -> float:
        return float(sum(abs(w) for w in self.entries.values()))

    def total(self) -> float:
        return float(sum(self.entries.values()))

    def is_positive(self, tol: float = TOL_ZERO) -> bool:
        return all(w >= -tol for w in self.entries.values())

    def support_size(self, tol: float = TOL_ZERO) -> int:
        return sum(1 for w in self.entries.values() if abs(w) > tol)

    def clipped(self, tol: float = TOL_ZERO) -> "WRep":
        """Positive part, renormalized; refuses genuinely negative entries."""
        if not self.is_positive(tol):
            raise DomainError(
                "expansion has negative weights; decompose the state first"
            )
        pos = {p: w for p, w in self.entries.items() if w > 0}
        z = sum(pos.values())
        return WRep(self.n, {p: w / z for p, w in pos.items()})


class AliasSampler:
    """Vose alias table for O(1) draws from a fixed discrete distribution."""

    def __init__(self, items: Sequence, weights: Sequence[float]):
        if len(items) != len(weights) or not items:
            raise ValueError("need matching, non-empty items and weights")
        w = np.asarray(weights, dtype=float)
        if w.min() < 0:
            raise ValueError("negative weight")
        w = w / w.sum()
        k = len(w)
        self.items = list(items)
        scaled = w * k
        self.prob = np.ones(k)
        self.alias = np.arange(k)
        small = [i for i in range(k) if scaled[i] < 1.0]
        large = [i for i in range(k) if scaled[i] >= 1.0]
        while small and large:
            s, l = small.pop(), large.pop()
            self.prob[s] = scaled[s]
            self.alias[s] = l
            scaled[l] = scaled[l] + scaled[s] - 1.0
            (small if scaled[l] < 1.0 else large).append(l)

    def draw(self, rng: np.random.Generator):
        i = int(rng.integers(len(self.items)))
        if float(rng.random()) < self.prob[i]:
            return self.items[i]
        return self.items[int(self.alias[i])]


# --- measurement programs -----------------------------------------------------

@dataclass(frozen=True)
class FixedStep:
    label: PauliLabel


@dataclass(frozen=True)
class AdaptiveStep:
    table: Mapping[str, PauliLabel]


@dataclass(frozen=True)
class CliffordStep:
    gates: tuple[str, ...]


Step = FixedStep | AdaptiveStep | CliffordStep


@dataclass(frozen=True)
class MeasurementProgram:
    steps: tuple[Step, ...]

    @property
    def measurement_count(self) -> int:
        return sum(1 for s in self.steps if not isinstance(s, CliffordStep))

    @staticmethod
    def from_labels(labels: Sequence[str | PauliLabel]) -> "MeasurementProgram":
        steps = []
        for lab in labels:
            if isinstance(lab, str):
                lab = parse_pauli(lab)
            steps.append(FixedStep(lab))
        return MeasurementProgram(tuple(steps))

    @staticmethod
    def from_json(data) -> "MeasurementProgram":
        if isinstance(data, str):
            data = json.loads(data)
        steps: list[Step] = []
        for entry in data:
            if not isinstance(entry, dict) or len(entry) != 1:
                raise ParseError(f"bad program step {entry!r}")
            (kind, payload), = entry.items()
            if kind == "measure":
                steps.append(FixedStep(parse_pauli(payload)))
            elif kind == "adaptive":
                table = {k: parse_pauli(v) for k, v in payload.items()}
                steps.append(AdaptiveStep(table))
            elif kind == "clifford":
                steps.append(CliffordStep(tuple(payload)))
            else:
                raise ParseError(f"unknown program step kind {kind!r}")
        return MeasurementProgram(tuple(steps))

    def to_json(self) -> list:
        out = []
        for s in self.steps:
            if isinstance(s, FixedStep):
                out.append({"measure": str(s.label)})
            elif isinstance(s, AdaptiveStep):
                out.append({"adaptive": {k: str(v) for k, v in s.table.items()}})
            else:
                out.append({"clifford": list(s.gates)})
        return out


class ProgramExecutor:
    """Resolves each measurement slot to a concrete label and sign flip.

    Interspersed Clifford steps are propagated forward: measuring T_b after
    a circuit h equals measuring the preimage of T_b under h on the
    unevolved state, with the outcome flipped by the conjugation sign.
    """

    def __init__(self, program: MeasurementProgram, n: int):
        self.n = n
        self.slots: list[tuple[Step, Optional[CliffordTableau]]] = []
        inv: Optional[CliffordTableau] = None
        for step in program.steps:
            if isinstance(step, CliffordStep):
                ginv = clifford_from_gates(n, invert_gates(step.gates))
                inv = ginv if inv is None else ginv.then(inv)
            else:
                self._check_step(step)
                self.slots.append((step, inv))

    def _check_step(self, step: Step):
        labels = [step.label] if isinstance(step, FixedStep) else step.table.values()
        for lab in labels:
            if lab.n != self.n:
                raise DimensionMismatch(
                    f"program measures {lab.n} qubits; state has {self.n}"
                )

    def done(self, history: Sequence[int]) -> bool:
        return len(history) >= len(self.slots)

    def resolve(self, history: Sequence[int]) -> tuple[PauliLabel, int]:
        step, inv = self.slots[len(history)]
        if isinstance(step, FixedStep):
            raw = step.label
        else:
            key = "".join(map(str, history))
            try:
                raw = step.table[key]
            except KeyError:
                raise ParseError(
                    f"adaptive step has no entry for history {key!r}"
                ) from None
        if inv is None:
            return raw, 0
        flip, lab = inv.image_of(raw)
        return lab, flip


@dataclass
class TrajectoryRecord:
    outcomes: tuple[int, ...]
    final_point: Optional[PhasePoint]
    seed: object


def sample_trajectory(
    w: WRep, program: MeasurementProgram, seed, keep_final: bool = False
) -> TrajectoryRecord:
    """One sample from the joint outcome distribution (weak simulation)."""
    rng = np.random.default_rng(seed)
    pos = w.clipped()
    items = list(pos.entries.keys())
    sampler = AliasSampler(items, [pos.entries[p] for p in items])
    point = sampler.draw(rng)
    execu = ProgramExecutor(program, w.n)
    outcomes: list[int] = []
    while not execu.done(outcomes):
        lab, flip = execu.resolve(outcomes)
        dec = point.omega.decompose(lab)
        if dec is not None:
            s_int = point._fold(dec)
            if int(rng.integers(2)):
                point = gamma_plus_bracket(point, lab)
        else:
            s_int = int(rng.integers(2))
            point = gamma_times_s(point, lab, s_int)
        outcomes.append(s_int ^ flip)
    return TrajectoryRecord(tuple(outcomes), point if keep_final else None, seed)


def born_probability(w: WRep, a: PauliLabel, s: int) -> float:
    """Outcome probability from the expansion: certain value inside the set,
    a fair coin outside."""
    total = 0.0
    for point, wgt in w.entries.items():
        dec = point.omega.decompose(a)
        if dec is not None:
            if point._fold(dec) == s:
                total += wgt
        else:
            total += 0.5 * wgt
    return total


def propagate_wrep(w: WRep, a: PauliLabel, s: int) -> tuple[float, WRep]:
    """Post-measurement expansion; weights stay non-negative when w does."""
    p = born_probability(w, a, s)
    if p <= TOL_ZERO:
        raise DomainError(f"outcome {s} of {a} has probability {p:.3g}")
    out: dict[PhasePoint, float] = {}
    for point, wgt in w.entries.items():
        branch = measure_update(point, a, s)
        if branch.probability == 0.0:
            continue
        for succ, sw in branch.successors:
            out[succ] = out.get(succ, 0.0) + wgt * branch.probability * sw / p
    return p, WRep(w.n, out)


def exact_outcome_distribution(
    w: WRep, program: MeasurementProgram, budget: int = 1_000_000
) -> dict[str, float]:
    """Exact joint distribution by propagating the weighted branch tree."""
    execu = ProgramExecutor(program, w.n)
    frontier: dict[tuple[int, ...], dict[PhasePoint, float]] = {
        (): dict(w.entries)
    }
    work = 0
    for _ in range(len(execu.slots)):
        nxt: dict[tuple[int, ...], dict[PhasePoint, float]] = {}
        for hist, ens in frontier.items():
            lab, flip = execu.resolve(hist)
            for s_rep in (0, 1):
                s_int = s_rep ^ flip
                acc: dict[PhasePoint, float] = {}
                for point, wgt in ens.items():
                    branch = measure_update(point, lab, s_int)
                    scale = wgt * branch.probability
                    if scale == 0.0:
                        continue
                    for succ, sw in branch.successors:
                        acc[succ] = acc.get(succ, 0.0) + scale * sw
                work += len(acc)
                if work > budget:
                    raise ResourceCapError(
                        f"branch tree exceeded budget of {budget} nodes"
                    )
                if acc and abs(sum(acc.values())) > 1e-15:
                    nxt[hist + (s_rep,)] = acc
        frontier = nxt
    return {
        "".join(map(str, hist)): sum(ens.values())
        for hist, ens in frontier.items()
    }


def hvm_distribution(point: PhasePoint, context) -> dict[tuple[int, ...], float]:
    """Outcome distribution a phase point assigns to an isotropic context.

    Deterministic exactly when the context lies inside the point's set;
    otherwise uniform over the undetermined directions.
    """
    if context.xi != 0:
        raise DomainError("context must be an isotropic subspace")
    if context.n != point.n:
        raise DimensionMismatch("context qubit count differs from the point")
    members = [a for a in context.elements() if a in point.omega]
    frac = len(members) / context.size()
    out: dict[tuple[int, ...], float] = {}
    for gam in gamma_set(context):
        trial = PhasePoint(context, gam)
        if all(trial.gamma_of(a) == point.gamma_of(a) for a in members):
            out[gam.gen_bits] = frac
        else:
            out[gam.gen_bits] = 0.0
    return out


# --- building product-form expansions ------------------------------------------

_AXES = ("X", "Y", "Z")


def _single_qubit_factor(r, tol=1e-9) -> list[tuple[PhasePoint, float]]:
    rx, ry, rz = (float(v) for v in r)
    if rx * rx + ry * ry + rz * rz > 1 + 1e-9:
        raise InvalidStateError(f"Bloch vector {r!r} lies outside the ball")
    l1 = abs(rx) + abs(ry) + abs(rz)
    comps = dict(zip(_AXES, (rx, ry, rz)))
    if l1 <= 1 + tol:
        # inside the stabilizer octahedron: mixture of axis states
        slack = max(1 - l1, 0.0)
        out = []
        for axis, val in comps.items():
            g = parse_pauli(axis)
            for bit in (0, 1):
                wgt = (max(val, 0.0) if bit == 0 else max(-val, 0.0)) + slack / 6
                if wgt > 0:
                    out.append(
                        (assemble_phase_point([g], [bit], n=1), wgt)
                    )
        return out
    # genuinely magic factor: the full single-qubit point with free signs
    omega = make_cnc([], [parse_pauli(a) for a in _AXES], n=1)
    out = []
    for bits in itertools.product((0, 1), repeat=3):
        point = PhasePoint(omega, ValueAssignment((), bits))
        wgt = 1.0
        for rep, bit in zip(omega.reps, bits):
            wgt *= (1 + (-1.0) ** bit * comps[str(rep)]) / 2
        if wgt > 0:
            out.append((point, wgt))
    return out


def product_wrep(
    bloch: Sequence, stab: Optional[PhasePoint] = None
) -> WRep:
    """Non-negative expansion of a product state: single-qubit factors given
    by Bloch vectors, optionally tensored with a stabilizer-type point.

    At most one factor may lie outside the stabilizer octahedron; every
    other factor composes through its stabilizer mixture, which keeps the
    result a valid expansion for any total qubit count.
    """
    factors: list[list[tuple[PhasePoint, float]]] = []
    magic = 0
    for r in bloch:
        f = _single_qubit_factor(r)
        if any(p.omega.xi > 0 for p, _ in f):
            magic += 1
        factors.append(f)
    if stab is not None:
        if stab.omega.xi != 0:
            raise DomainError("stabilizer factor must be isotropic")
        factors.append([(stab, 1.0)])
    if magic > 1:
        raise DomainError(
            "only one factor outside the stabilizer octahedron is composable"
        )
    if not factors:
        raise ValueError("no factors given")

    acc = factors[0]
    for nxt in factors[1:]:
        acc = [
            (tensor_points(p1, p2), w1 * w2)
            for p1, w1 in acc
            for p2, w2 in nxt
        ]
    n = acc[0][0].n
    entries: dict[PhasePoint, float] = {}
    for p, wgt in acc:
        entries[p] = entries.get(p, 0.0) + wgt
    return WRep(n, entries)
