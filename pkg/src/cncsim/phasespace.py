"""Construction, validation and enumeration of cnc sets and phase points.

A cnc set (closed under inference, noncontextual) is stored structurally as
an isotropic subspace spanned by `isotropic_gens` together with `reps`, a
list of pairwise-anticommuting coset representatives that commute with the
subspace.  The point set is

    Omega = span(gens)  union  (rep_k + span(gens))  for each k,

and a value assignment gamma is determined by its bits on the generators
and representatives; all other values follow from the sign rule
gamma(a) + gamma(b) + beta(a, b) = gamma(a + b) on commuting pairs.

Canonical form: generators in reduced row echelon form, representatives
reduced modulo the subspace to the least coset member and sorted. A single
representative is folded into the generators (the set is then isotropic).
"""
from __future__ import annotations

import itertools
import pickle
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from . import gf2
from .errors import (
    ConstructionError,
    DimensionMismatch,
    DomainError,
    ResourceCapError,
)
from .pauli import (
    PauliLabel,
    beta_int,
    label_from_key,
    parse_pauli,
    real_labels,
    symp_int,
)

FORMAT_VERSION = 1

# caps: full qubit enumeration cost grows steeply, rebit mode is exhaustive
DEFAULT_ENUM_CAP = 4
REBIT_ENUM_CAP = 2
ELEMENT_CAP = 1 << 16


class Decomposition(NamedTuple):
    """Expansion a = reps[rep_index] + sum of gens[i] over gen_mask bits."""

    rep_index: Optional[int]
    gen_mask: int


@dataclass(frozen=True)
class CncSet:
    n: int
    isotropic_gens: tuple[PauliLabel, ...]
    reps: tuple[PauliLabel, ...]
    rebit: bool = False

    @property
    def m(self) -> int:
        return self.n - len(self.isotropic_gens)

    @property
    def xi(self) -> int:
        return len(self.reps)

    @cached_property
    def _gen_keys(self) -> tuple[int, ...]:
        return tuple(g.key for g in self.isotropic_gens)

    @cached_property
    def _rep_keys(self) -> tuple[int, ...]:
        return tuple(r.key for r in self.reps)

    @cached_property
    def _identity(self) -> tuple:
        return (self.n, self._gen_keys, self._rep_keys)

    def __eq__(self, other) -> bool:
        return isinstance(other, CncSet) and self._identity == other._identity

    def __hash__(self) -> int:
        return hash(self._identity)

    def size(self) -> int:
        """Number of points in Omega: (1 + xi) * 2^(n - m)."""
        return (1 + self.xi) << len(self.isotropic_gens)

    def decompose(self, a: PauliLabel) -> Optional[Decomposition]:
        """Membership test with expansion over the stored generators.

        Gaussian elimination per coset; None if a is not in Omega.
        """
        if a.n != self.n:
            raise DimensionMismatch(f"qubit counts differ: {a.n} != {self.n}")
        res, combo = gf2.reduce_track(a.key, self._gen_keys)
        if res == 0:
            return Decomposition(None, combo)
        for k, rk in enumerate(self._rep_keys):
            res, combo = gf2.reduce_track(a.key ^ rk, self._gen_keys)
            if res == 0:
                return Decomposition(k, combo)
        return None

    def __contains__(self, a: PauliLabel) -> bool:
        return self.decompose(a) is not None

    def element_keys(self) -> Iterator[int]:
        if self.size() > ELEMENT_CAP:
            raise ResourceCapError(f"set has {self.size()} elements; cap {ELEMENT_CAP}")
        for v in gf2.span(self._gen_keys):
            yield v
        for rk in self._rep_keys:
            for v in gf2.span(self._gen_keys):
                yield rk ^ v

    def elements(self) -> list[PauliLabel]:
        return [label_from_key(self.n, v) for v in self.element_keys()]

    def __str__(self) -> str:
        gens = ",".join(str(g) for g in self.isotropic_gens) or "-"
        reps = ",".join(str(r) for r in self.reps) or "-"
        return f"CncSet(n={self.n}, gens=[{gens}], reps=[{reps}])"


def make_cnc(
    isotropic_gens: Sequence[PauliLabel],
    reps: Sequence[PauliLabel] = (),
    n: int | None = None,
    rebit: bool | None = None,
    validate: bool = True,
) -> CncSet:
    """Validated, canonical cnc set from generators and representatives.

    `validate=False` skips the pairwise commutation checks; measurement and
    conjugation updates use it because their outputs are valid by the
    closure properties (which the test suite verifies independently).
    """
    labels = list(isotropic_gens) + list(reps)
    if not labels and n is None:
        raise ConstructionError("empty construction needs an explicit qubit count")
    n = n if n is not None else labels[0].n
    for a in labels:
        if a.n != n:
            raise DimensionMismatch("mixed qubit counts in construction")
        if a.is_identity:
            raise ConstructionError("the zero label cannot be a generator or rep")

    gens = list(isotropic_gens)
    rep_list = list(reps)
    if len(rep_list) == 1:
        # a single coset makes the whole set an isotropic subspace
        gens.append(rep_list.pop())

    if validate:
        for i, a in enumerate(gens):
            for b in gens[i + 1 :]:
                if symp_int(a.key, b.key, n):
                    raise ConstructionError(
                        f"generators {a} and {b} anticommute", pair=(a, b)
                    )
    gen_basis = gf2.rref(g.key for g in gens)
    if len(gen_basis) != len(gens):
        raise ConstructionError("dependent generators", pair=tuple(gens))

    if validate:
        for r in rep_list:
            for g in gens:
                if symp_int(r.key, g.key, n):
                    raise ConstructionError(
                        f"rep {r} anticommutes with generator {g}", pair=(r, g)
                    )
        for i, r in enumerate(rep_list):
            for s in rep_list[i + 1 :]:
                if symp_int(r.key, s.key, n) == 0:
                    raise ConstructionError(f"reps {r} and {s} commute", pair=(r, s))

    reduced = []
    for r in rep_list:
        rk = gf2.reduce_vector(r.key, gen_basis)
        if rk == 0:
            raise ConstructionError(f"rep {r} lies in the isotropic subspace", pair=(r,))
        reduced.append(rk)
    if len(set(reduced)) != len(reduced):
        raise ConstructionError("reps share a coset", pair=tuple(rep_list))
    xi = len(reduced)
    m = n - len(gen_basis)
    if xi > 2 * m + 1:
        raise ConstructionError(f"xi={xi} exceeds 2m+1={2*m+1}")

    canon_gens = tuple(label_from_key(n, v) for v in gen_basis)
    canon_reps = tuple(label_from_key(n, v) for v in sorted(reduced))
    if rebit is None:
        rebit = all(g.is_real() for g in canon_gens) and all(
            r.is_real() for r in canon_reps
        )
    return CncSet(n, canon_gens, canon_reps, rebit)


class ValueAssignment(NamedTuple):
    """Bits of gamma on the canonical generators and representatives."""

    gen_bits: tuple[int, ...]
    rep_bits: tuple[int, ...]


@dataclass(frozen=True)
class PhasePoint:
    omega: CncSet
    gamma: ValueAssignment

    def __post_init__(self):
        if len(self.gamma.gen_bits) != len(self.omega.isotropic_gens) or len(
            self.gamma.rep_bits
        ) != len(self.omega.reps):
            raise ConstructionError("assignment shape does not match the set")

    @property
    def n(self) -> int:
        return self.omega.n

    def gamma_of(self, a: PauliLabel) -> int:
        """Value gamma(a); raises if a is outside Omega."""
        dec = self.omega.decompose(a)
        if dec is None:
            raise DomainError(f"{a} is not in the set")
        return self._fold(dec)

    def _fold(self, dec: Decomposition) -> int:
        omega = self.omega
        n = omega.n
        if dec.rep_index is None:
            e, v = 0, 0
        else:
            e = omega._rep_keys[dec.rep_index]
            v = self.gamma.rep_bits[dec.rep_index]
        mask = dec.gen_mask
        i = 0
        while mask:
            if mask & 1:
                g = omega._gen_keys[i]
                v ^= self.gamma.gen_bits[i] ^ beta_int(e, g, n)
                e ^= g
            mask >>= 1
            i += 1
        return v

    def items(self) -> Iterator[tuple[PauliLabel, int]]:
        """(label, gamma value) for every element of Omega (small sets only)."""
        for key in self.omega.element_keys():
            a = label_from_key(self.n, key)
            yield a, self.gamma_of(a)

    def __str__(self) -> str:
        parts = [f"{g}:{b}" for g, b in zip(self.omega.isotropic_gens, self.gamma.gen_bits)]
        parts += [f"{r}:{b}" for r, b in zip(self.omega.reps, self.gamma.rep_bits)]
        return "PhasePoint(" + " ".join(parts) + ")"


def gamma_set(omega: CncSet) -> list[ValueAssignment]:
    """All value assignments on omega: 2^((n-m) + xi) of them."""
    g, r = len(omega.isotropic_gens), len(omega.reps)
    out = []
    for bits in itertools.product((0, 1), repeat=g + r):
        out.append(ValueAssignment(tuple(bits[:g]), tuple(bits[g:])))
    return out


def phase_points(omega: CncSet) -> list[PhasePoint]:
    return [PhasePoint(omega, gam) for gam in gamma_set(omega)]


def gamma_eval(point: PhasePoint, a: PauliLabel) -> int:
    return point.gamma_of(a)


# --- building points from an arbitrary presentation -------------------------

class _Presentation:
    """Evaluate a value assignment given on independent generators and reps
    that are not necessarily in canonical form."""

    def __init__(self, n, gen_keys, gen_bits, rep_keys, rep_bits):
        self.n = n
        self.gen_keys = list(gen_keys)
        self.gen_bits = list(gen_bits)
        self.rep_keys = list(rep_keys)
        self.rep_bits = list(rep_bits)
        # echelon rows tracking their composition over the original gens
        self.rows: list[tuple[int, int]] = []
        for i, g in enumerate(self.gen_keys):
            v, combo = g, 1 << i
            for row, rc in self.rows:
                lead = 1 << (row.bit_length() - 1)
                if v & lead:
                    v ^= row
                    combo ^= rc
            if v == 0:
                raise ConstructionError("dependent generators in presentation")
            self.rows.append((v, combo))
            self.rows.sort(key=lambda rc: rc[0], reverse=True)

    def _reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        for row, rc in self.rows:
            lead = 1 << (row.bit_length() - 1)
            if v & lead:
                v ^= row
                combo ^= rc
        return v, combo

    def eval(self, key: int) -> int:
        res, combo = self._reduce(key)
        if res == 0:
            return self._fold(None, combo)
        for k, rk in enumerate(self.rep_keys):
            res, combo = self._reduce(key ^ rk)
            if res == 0:
                return self._fold(k, combo)
        raise DomainError("element outside the presented set")

    def _fold(self, rep_index, combo) -> int:
        if rep_index is None:
            e, v = 0, 0
        else:
            e, v = self.rep_keys[rep_index], self.rep_bits[rep_index]
        i = 0
        while combo:
            if combo & 1:
                g = self.gen_keys[i]
                v ^= self.gen_bits[i] ^ beta_int(e, g, self.n)
                e ^= g
            combo >>= 1
            i += 1
        return v


def assemble_phase_point(
    gens: Sequence[PauliLabel],
    gen_bits: Sequence[int],
    reps: Sequence[PauliLabel] = (),
    rep_bits: Sequence[int] = (),
    n: int | None = None,
    validate: bool = True,
) -> PhasePoint:
    """Phase point from any valid presentation; converts to canonical form."""
    omega = make_cnc(gens, reps, n=n, validate=validate)
    pres = _Presentation(
        omega.n,
        [g.key for g in gens],
        list(gen_bits),
        [r.key for r in reps],
        list(rep_bits),
    )
    cg = tuple(pres.eval(k) for k in omega._gen_keys)
    cr = tuple(pres.eval(k) for k in omega._rep_keys)
    return PhasePoint(omega, ValueAssignment(cg, cr))


def stabilizer_point(signed_gens: Sequence[str], n: int | None = None) -> PhasePoint:
    """Isotropic phase point from signed Pauli strings like '+ZI', '-IZ'.

    With all n independent generators this is the phase-space image of the
    stabilizer state they define.
    """
    from .pauli import parse_signed_pauli

    gens, bits = [], []
    for text in signed_gens:
        s, g = parse_signed_pauli(text)
        gens.append(g)
        bits.append(s)
    return assemble_phase_point(gens, bits, n=n)


# --- brute-force checks ------------------------------------------------------

@dataclass
class CncCheckResult:
    closed: bool
    noncontextual: bool
    witness: object = None


def brute_force_cnc_check(subset: Iterable[PauliLabel]) -> CncCheckResult:
    """Check Defs. of closure and noncontextuality by exhaustion.

    Closure: commuting pairs must have their sum inside.  Noncontextuality:
    the Z2 linear system for gamma over the commuting pairs must be solvable.
    """
    labels = list(subset)
    if not labels:
        return CncCheckResult(True, True)
    n = labels[0].n
    keys = frozenset(a.key for a in labels)
    closed, nc, witness = _check_cnc_keys(keys, n)
    if witness is not None:
        witness = tuple(label_from_key(n, k) for k in witness)
    return CncCheckResult(closed, nc, witness)


def _check_cnc_keys(keys: frozenset[int], n: int):
    elems = sorted(keys - {0})
    if len(elems) ** 2 > (1 << 16):
        raise ResourceCapError("subset too large for exhaustive checking")
    closed = 0 in keys
    witness = None
    if not closed:
        witness = (elems[0], elems[0]) if elems else None
    if closed:
        for i, a in enumerate(elems):
            for b in elems[i + 1 :]:
                if symp_int(a, b, n) == 0 and (a ^ b) not in keys:
                    closed = False
                    witness = (a, b)
                    break
            if not closed:
                break

    index = {a: i for i, a in enumerate(elems)}
    rows, rhs, pairs = [], [], []
    for i, a in enumerate(elems):
        for b in elems[i + 1 :]:
            if symp_int(a, b, n) == 0 and (a ^ b) in index:
                mask = (1 << index[a]) | (1 << index[b])
                c = a ^ b
                mask |= 1 << index[c]
                rows.append(mask)
                rhs.append(beta_int(a, b, n))
                pairs.append((a, b))
    solution = gf2.solve(rows, rhs)
    noncontextual = solution is not None
    if not noncontextual and witness is None:
        # find the first constraint whose addition breaks consistency
        for stop in range(1, len(rows) + 1):
            if gf2.solve(rows[:stop], rhs[:stop]) is None:
                witness = pairs[stop - 1]
                break
    return closed, noncontextual, witness


# --- enumeration -------------------------------------------------------------

def _isotropic_bases(n: int, dim: int, candidates: Sequence[int]) -> list[tuple[int, ...]]:
    """All isotropic subspaces of the given dimension, as canonical bases.

    Levelwise extension with canonical-form dedup at every level.
    """
    level: set[tuple[int, ...]] = {()}
    for _ in range(dim):
        nxt: set[tuple[int, ...]] = set()
        for basis in level:
            for v in candidates:
                if gf2.reduce_vector(v, basis) == 0:
                    continue
                if any(symp_int(v, g, n) for g in basis):
                    continue
                nxt.add(gf2.rref(basis + (v,)))
        level = nxt
    return sorted(level)


def _anticommuting_coset_sets(n: int, gen_basis: tuple[int, ...], size: int) -> list[tuple[int, ...]]:
    """All `size`-subsets of pairwise-anticommuting coset representatives
    in the symplectic complement of the subspace, ordered and deduplicated."""
    seen = set()
    for v in range(1, 1 << (2 * n)):
        if any(symp_int(v, g, n) for g in gen_basis):
            continue
        r = gf2.reduce_vector(v, gen_basis)
        if r:
            seen.add(r)
    cands = sorted(seen)
    out: list[tuple[int, ...]] = []

    def extend(chosen: list[int], start: int):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        need = size - len(chosen)
        for i in range(start, len(cands) - need + 1):
            v = cands[i]
            if all(symp_int(v, c, n) for c in chosen):
                chosen.append(v)
                extend(chosen, i + 1)
                chosen.pop()

    extend([], 0)
    return out


def _rebit_maximal_cnc(n: int) -> list[frozenset[int]]:
    """All maximal cnc subsets of the real labels, by exhaustive search."""
    nz = [a.key for a in real_labels(n) if a.key != 0]
    if len(nz) > 16:
        raise ResourceCapError("rebit brute force limited to <= 16 nonzero labels")
    cnc: list[frozenset[int]] = []
    for mask in range(1, 1 << len(nz)):
        keys = frozenset(
            [0] + [nz[i] for i in range(len(nz)) if (mask >> i) & 1]
        )
        closed, nc, _ = _check_cnc_keys(keys, n)
        if closed and nc:
            cnc.append(keys)
    return [s for s in cnc if not any(s < t for t in cnc)]


def _structure_from_keys(keys: frozenset[int], n: int) -> CncSet:
    elems = sorted(keys - {0})
    commutant = [
        v for v in elems if all(symp_int(v, w, n) == 0 for w in elems)
    ]
    gen_basis = gf2.rref(commutant)
    reps = sorted({gf2.reduce_vector(v, gen_basis) for v in elems} - {0})
    omega = make_cnc(
        [label_from_key(n, g) for g in gen_basis],
        [label_from_key(n, r) for r in reps],
        n=n,
    )
    if frozenset(omega.element_keys()) != keys:
        raise ConstructionError("point set is not of coset-union form")
    return omega


@dataclass
class Catalog:
    """Enumerated phase space for fixed n, m values, and mode."""

    n: int
    m_set: frozenset[int]
    rebit: bool
    sets: tuple[CncSet, ...]
    points: tuple[PhasePoint, ...]
    set_ranges: dict[CncSet, tuple[int, int]] = field(repr=False)

    def points_of(self, omega: CncSet) -> tuple[PhasePoint, ...]:
        start, stop = self.set_ranges[omega]
        return self.points[start:stop]

    def sets_with_m(self, m: int) -> list[CncSet]:
        return [s for s in self.sets if s.m == m]

    def count_rows(self) -> list[dict]:
        mode = "rebits" if self.rebit else "qubits"
        rows = []
        for m in sorted(self.m_set):
            sets = self.sets_with_m(m)
            pts = sum(len(gamma_set(s)) for s in sets)
            rows.append({"mode": mode, "m": m, "sets": len(sets), "points": pts})
        rows.append(
            {
                "mode": mode,
                "m": "total",
                "sets": len(self.sets),
                "points": len(self.points),
            }
        )
        return rows

    def to_json(self) -> dict:
        pts = []
        for p in self.points:
            gamma = {
                str(g): b
                for g, b in zip(p.omega.isotropic_gens, p.gamma.gen_bits)
            }
            gamma.update(
                {str(r): b for r, b in zip(p.omega.reps, p.gamma.rep_bits)}
            )
            pts.append(
                {
                    "isotropic_gens": [str(g) for g in p.omega.isotropic_gens],
                    "reps": [str(r) for r in p.omega.reps],
                    "gamma": gamma,
                }
            )
        return {
            "format_version": FORMAT_VERSION,
            "n": self.n,
            "mode": "rebits" if self.rebit else "qubits",
            "m_set": sorted(self.m_set),
            "points": pts,
        }

    def save(self, path) -> None:
        payload = {
            "format_version": FORMAT_VERSION,
            "n": self.n,
            "m_set": sorted(self.m_set),
            "rebit": self.rebit,
            "sets": [
                (
                    [g.key for g in s.isotropic_gens],
                    [r.key for r in s.reps],
                )
                for s in self.sets
            ],
        }
        with open(path, "wb") as fh:
            pickle.dump(payload, fh)

    @staticmethod
    def load(path) -> "Catalog":
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        if payload.get("format_version") != FORMAT_VERSION:
            raise ValueError("catalog file has an incompatible format version")
        n = payload["n"]
        sets = [
            make_cnc(
                [label_from_key(n, g) for g in gens],
                [label_from_key(n, r) for r in reps],
                n=n,
            )
            for gens, reps in payload["sets"]
        ]
        return _catalog_from_sets(
            n, frozenset(payload["m_set"]), payload["rebit"], sets
        )

    @staticmethod
    def cache_name(n: int, m_set: Iterable[int], rebit: bool) -> str:
        ms = "".join(str(m) for m in sorted(m_set))
        mode = "rebit" if rebit else "qubit"
        return f"catalog_v{FORMAT_VERSION}_{mode}_n{n}_m{ms}.pkl"


def _catalog_from_sets(n, m_set, rebit, sets) -> Catalog:
    sets = sorted(sets, key=lambda s: (s.m, s._gen_keys, s._rep_keys))
    points: list[PhasePoint] = []
    ranges: dict[CncSet, tuple[int, int]] = {}
    for s in sets:
        start = len(points)
        points.extend(phase_points(s))
        ranges[s] = (start, len(points))
    return Catalog(n, frozenset(m_set), rebit, tuple(sets), tuple(points), ranges)


def enumerate_catalog(
    n: int,
    m_set: Iterable[int],
    rebit: bool = False,
    enum_cap: int = DEFAULT_ENUM_CAP,
    cache_dir=None,
) -> Catalog:
    """Enumerate all phase points with the requested m values.

    Qubit mode uses the classification of maximal sets (isotropic subspace
    of dimension n-m plus 2m+1 pairwise-anticommuting cosets); m=0 yields
    the maximal isotropic subspaces.  Rebit mode brute-forces the defining
    conditions over the real labels.
    """
    m_set = frozenset(m_set)
    if not m_set or any(m < 0 or m > n for m in m_set):
        raise ValueError(f"m values must lie in 0..{n}")
    if rebit:
        if n > REBIT_ENUM_CAP:
            raise ResourceCapError(
                f"rebit enumeration is exhaustive; capped at n <= {REBIT_ENUM_CAP}"
            )
    elif n > enum_cap:
        raise ResourceCapError(f"qubit enumeration capped at n <= {enum_cap}")

    if cache_dir is not None:
        import os

        path = os.path.join(cache_dir, Catalog.cache_name(n, m_set, rebit))
        if os.path.exists(path):
            return Catalog.load(path)

    sets: list[CncSet] = []
    if rebit:
        cands = [a.key for a in real_labels(n) if a.key != 0]
        if 0 in m_set:
            for basis in _isotropic_bases(n, n, cands):
                sets.append(
                    make_cnc([label_from_key(n, g) for g in basis], n=n)
                )
        wanted = m_set - {0}
        if wanted:
            for keys in _rebit_maximal_cnc(n):
                omega = _structure_from_keys(keys, n)
                if omega.m in wanted:
                    sets.append(omega)
    else:
        cands = list(range(1, 1 << (2 * n)))
        for m in sorted(m_set):
            if m == 0:
                for basis in _isotropic_bases(n, n, cands):
                    sets.append(
                        make_cnc([label_from_key(n, g) for g in basis], n=n)
                    )
                continue
            for basis in _isotropic_bases(n, n - m, cands):
                gens = [label_from_key(n, g) for g in basis]
                for rep_keys in _anticommuting_coset_sets(n, basis, 2 * m + 1):
                    reps = [label_from_key(n, r) for r in rep_keys]
                    sets.append(make_cnc(gens, reps, n=n))

    catalog = _catalog_from_sets(n, m_set, rebit, sets)
    if cache_dir is not None:
        import os

        os.makedirs(cache_dir, exist_ok=True)
        catalog.save(os.path.join(cache_dir, Catalog.cache_name(n, m_set, rebit)))
    return catalog


_CATALOG_MEMO: dict[tuple, Catalog] = {}


def cached_catalog(
    n: int, m_set: Iterable[int], rebit: bool = False, cache_dir=None
) -> Catalog:
    """Process-wide memoized enumeration (catalogs are immutable)."""
    key = (n, frozenset(m_set), rebit)
    if key not in _CATALOG_MEMO:
        _CATALOG_MEMO[key] = enumerate_catalog(
            n, m_set, rebit=rebit, cache_dir=cache_dir
        )
    return _CATALOG_MEMO[key]


# --- relations between points ------------------------------------------------

def lift_to_maximal(point: PhasePoint, catalog: Catalog) -> list[PhasePoint]:
    """Extensions of `point` to the first catalog set containing its Omega.

    Averaging the returned points' operators reproduces the original
    operator; a point whose set is already in the catalog lifts to itself.
    """
    own = list(point.omega.isotropic_gens) + list(point.omega.reps)
    for omega_t in catalog.sets:
        if point.omega == omega_t:
            return [point]
        if all(a in omega_t for a in own):
            out = [
                q
                for q in catalog.points_of(omega_t)
                if all(q.gamma_of(a) == point.gamma_of(a) for a in own)
            ]
            if out:
                return out
    raise DomainError("no catalog set contains the given point's set")


def cnc_to_stabilizer_mix(point: PhasePoint) -> list[tuple[PhasePoint, float]]:
    """Signed expansion of a phase point over isotropic (stabilizer-type)
    points: one +1 term per coset subspace and one -(xi-1) term for the
    shared isotropic part.  Coefficient 1-norm is 2*xi - 1 <= 4n + 1.
    """
    omega = point.omega
    gens = list(omega.isotropic_gens)
    gbits = list(point.gamma.gen_bits)
    if omega.xi == 0:
        return [(point, 1.0)]
    terms: list[tuple[PhasePoint, float]] = []
    for k, rep in enumerate(omega.reps):
        sub = assemble_phase_point(
            gens + [rep], gbits + [point.gamma.rep_bits[k]], n=omega.n
        )
        terms.append((sub, 1.0))
    core = assemble_phase_point(gens, gbits, n=omega.n)
    terms.append((core, -(omega.xi - 1.0)))
    return terms


def tensor_points(p1: PhasePoint, p2: PhasePoint) -> PhasePoint:
    """Block composition of two phase points on disjoint qubit registers.

    Valid whenever at least one factor is isotropic; the composed set is
    the coset union over the combined isotropic subspace and the value
    assignment is additive over blocks.
    """
    from .pauli import embed

    if p1.omega.xi > 0 and p2.omega.xi > 0:
        raise DomainError(
            "tensor composition requires one isotropic (stabilizer-type) factor"
        )
    n1, n2 = p1.n, p2.n
    n = n1 + n2
    gens = [embed(g, n, 0) for g in p1.omega.isotropic_gens]
    gens += [embed(g, n, n1) for g in p2.omega.isotropic_gens]
    gbits = list(p1.gamma.gen_bits) + list(p2.gamma.gen_bits)
    reps = [embed(r, n, 0) for r in p1.omega.reps]
    reps += [embed(r, n, n1) for r in p2.omega.reps]
    rbits = list(p1.gamma.rep_bits) + list(p2.gamma.rep_bits)
    return assemble_phase_point(gens, gbits, reps, rbits, n=n)


def parse_cnc(gen_strings: Sequence[str], rep_strings: Sequence[str], n=None) -> CncSet:
    return make_cnc(
        [parse_pauli(s) for s in gen_strings],
        [parse_pauli(s) for s in rep_strings],
        n=n,
    )
