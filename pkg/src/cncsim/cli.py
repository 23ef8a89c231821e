"""Command-line interface.

Subcommands: catalog, decompose, simulate, scan, oracle, verify.
Exit codes: 0 ok, 2 input error, 3 resource cap, 4 verification failure.
Catalog caching honors --cache-dir or the CNCSIM_CATALOG_DIR variable.
"""
from __future__ import annotations

import functools
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import __version__
from .decomposer import (
    ExpectationVector,
    feasibility,
    robustness,
    robustness_of_magic,
    sandwich_gap,
)
from .errors import CncsimError, ParseError, ResourceCapError
from .pauli import all_labels, beta, parse_pauli, symplectic
from .phasespace import assemble_phase_point, cached_catalog, enumerate_catalog
from .simulator import (
    MeasurementProgram,
    WRep,
    exact_outcome_distribution,
    sample_trajectory,
)

CACHE_ENV = "CNCSIM_CATALOG_DIR"


def _mapped_errors(fn):
    """Translate package exceptions into the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ResourceCapError as exc:
            click.echo(f"resource cap: {exc}", err=True)
            sys.exit(3)
        except (CncsimError, OSError, json.JSONDecodeError, KeyError) as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _provenance(config: dict) -> str:
    return f"# cncsim={__version__} config={_config_hash(config)}"


def _write_csv(path, header_cols, rows, config):
    lines = [_provenance(config), ",".join(header_cols)]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        click.echo(text, nl=False)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_json(path, payload, config):
    payload = dict(payload)
    payload["provenance"] = {"version": __version__, "config": _config_hash(config)}
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None:
        click.echo(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _cache_dir(opt):
    return opt or os.environ.get(CACHE_ENV) or None


def _parse_m_set(text: str) -> frozenset[int]:
    try:
        return frozenset(int(p) for p in text.split(",") if p != "")
    except ValueError:
        raise ParseError(f"bad m list {text!r}") from None


def _load_state_spec(spec: str):
    """Return (n, kind, payload).  kind is dense | expectations | wrep."""
    from .oracle import named_state

    if spec.startswith("named:"):
        rho = named_state(spec[6:])
        n = int(round(math.log2(rho.shape[0])))
        return n, "dense", rho
    with open(spec) as fh:
        data = json.load(fh)
    n = int(data["n"])
    kind = data["kind"]
    if kind == "named":
        rho = named_state(data["payload"])
        if rho.shape[0] != 2**n:
            raise ParseError("named state size disagrees with n")
        return n, "dense", rho
    if kind == "dense":
        flat = data["payload"]
        d = 2**n
        if len(flat) != d * d:
            raise ParseError(f"dense payload must have {d * d} entries")
        mat = np.array([complex(re, im) for re, im in flat]).reshape(d, d)
        return n, "dense", mat
    if kind == "pauli_expectations":
        return n, "expectations", ExpectationVector.from_pauli_map(n, data["payload"])
    if kind == "wrep":
        entries = {}
        for item in data["payload"]:
            gens = item["isotropic_gens"]
            reps = item["reps"]
            gamma = item["gamma"]
            labels = [parse_pauli(s) for s in gens + reps]
            bits = [int(gamma[s]) for s in gens + reps]
            point = assemble_phase_point(
                labels[: len(gens)],
                bits[: len(gens)],
                labels[len(gens):],
                bits[len(gens):],
                n=n,
            )
            entries[point] = entries.get(point, 0.0) + float(item["weight"])
        return n, "wrep", WRep(n, entries)
    raise ParseError(f"unknown state kind {kind!r}")


def _expectations_of(spec: str) -> ExpectationVector:
    n, kind, payload = _load_state_spec(spec)
    if kind == "dense":
        return ExpectationVector.from_dense(payload)
    if kind == "expectations":
        return payload
    raise ParseError("this subcommand needs a dense or expectation state")


@click.group()
@click.version_option(version=__version__)
def main():
    """Phase-space toolkit: catalogs, decompositions, weak simulation."""


# --- catalog -------------------------------------------------------------------

@main.command()
@click.option("--n", type=int, required=True)
@click.option("--m", "m_text", default=None, help="comma list, e.g. 1,2")
@click.option("--rebit", is_flag=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--export", type=click.Path(), default=None, help="full JSON export")
@click.option("--cache-dir", default=None)
@_mapped_errors
def catalog(n, m_text, rebit, out, export, cache_dir):
    """Enumerate phase-space points; emit a CSV count table."""
    m_set = _parse_m_set(m_text) if m_text else frozenset(range(1, n + 1))
    cat = enumerate_catalog(n, m_set, rebit=rebit, cache_dir=_cache_dir(cache_dir))
    config = {"cmd": "catalog", "n": n, "m": sorted(m_set), "rebit": rebit}
    m_label = "{" + ";".join(str(m) for m in sorted(m_set)) + "}"
    rows = [
        (r["mode"], m_label, r["m"], r["sets"], r["points"])
        for r in cat.count_rows()
    ]
    _write_csv(out, ["mode", "m_set", "m", "sets", "points"], rows, config)
    if export:
        with open(export, "w") as fh:
            json.dump(cat.to_json(), fh)


# --- decompose -----------------------------------------------------------------

@main.command()
@click.option("--state", required=True, help="named:SPEC or a state JSON file")
@click.option(
    "--mode",
    type=click.Choice(["feasibility", "robustness", "robustness_s"]),
    default="robustness",
)
@click.option("--m", "m_text", default=None, help="m values for the catalog")
@click.option("--out", type=click.Path(), default=None)
@click.option("--cache-dir", default=None)
@_mapped_errors
def decompose(state, mode, m_text, out, cache_dir):
    """Positive representability and robustness measures via LP."""
    b = _expectations_of(state)
    config = {"cmd": "decompose", "state": state, "mode": mode, "m": m_text}
    cache = _cache_dir(cache_dir)
    if mode == "robustness_s":
        res = robustness_of_magic(b, cached_catalog(b.n, {0}, cache_dir=cache))
    else:
        m_set = _parse_m_set(m_text) if m_text else frozenset(range(1, b.n + 1))
        cat = cached_catalog(b.n, m_set, cache_dir=cache)
        if mode == "feasibility":
            w = feasibility(b, cat)
            payload = {
                "feasible": w is not None,
                "support_size": w.support_size() if w is not None else 0,
            }
            _write_json(out, payload, config)
            return
        res = robustness(b, cat)
    payload = {
        "mode": mode,
        "robustness": res.objective,
        "support_size": res.support_size,
        "residual": res.residual,
        "iterations": res.iterations,
        "wall_time": res.wall_time,
        "status": res.status,
    }
    _write_json(out, payload, config)


# --- simulate ------------------------------------------------------------------

def _shot_worker(args):
    idx, seed, wrep, program = args
    rec = sample_trajectory(wrep, program, seed=[seed, idx])
    return idx, "".join(map(str, rec.outcomes))


@main.command()
@click.option("--state", required=True, help="named:SPEC or a state JSON file")
@click.option("--program", "program_path", required=True, type=click.Path(exists=True))
@click.option("--shots", type=int, default=1)
@click.option("--seed", type=int, default=None)
@click.option("--exact", is_flag=True, help="exact distribution instead of sampling")
@click.option("--m", "m_text", default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--threads", type=int, default=1)
@click.option("--cache-dir", default=None)
@_mapped_errors
def simulate(state, program_path, shots, seed, exact, m_text, out, threads, cache_dir):
    """Sample measurement outcomes, or propagate the exact distribution."""
    with open(program_path) as fh:
        program = MeasurementProgram.from_json(json.load(fh))
    n, kind, payload = _load_state_spec(state)
    config = {
        "cmd": "simulate", "state": state, "program": program.to_json(),
        "shots": shots, "seed": seed, "exact": exact,
    }
    if kind == "wrep":
        w = payload
    else:
        b = (
            ExpectationVector.from_dense(payload)
            if kind == "dense"
            else payload
        )
        m_set = _parse_m_set(m_text) if m_text else frozenset(range(1, n + 1))
        cat = cached_catalog(n, m_set, cache_dir=_cache_dir(cache_dir))
        w = feasibility(b, cat)
        if w is None:
            raise ParseError(
                "state is not positively representable; use `decompose` to "
                "inspect its robustness"
            )
    if exact:
        dist = exact_outcome_distribution(w, program)
        rows = sorted((k, f"{v:.12g}") for k, v in dist.items())
        _write_csv(out, ["outcomes", "probability"], rows, config)
        return
    if seed is None:
        raise ParseError("--seed is required for sampling runs")
    jobs = [(i, seed, w, program) for i in range(shots)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_shot_worker, jobs, chunksize=64))
    else:
        results = [_shot_worker(j) for j in jobs]
    results.sort()
    rows = [(seed, idx, bits) for idx, bits in results]
    _write_csv(out, ["seed", "shot", "outcomes"], rows, config)


# --- scan ----------------------------------------------------------------------

def _parse_range(text: str) -> np.ndarray:
    try:
        lo, hi, k = text.split(":")
        return np.linspace(float(lo), float(hi), int(k))
    except ValueError:
        raise ParseError(f"bad range {text!r}; expected lo:hi:count") from None


def _volume_worker(args):
    idx, seed, n, m_set, measure = args
    rng = np.random.default_rng([seed, idx])
    d = 2**n
    if measure == "hs":
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
    else:
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        v /= np.linalg.norm(v)
        rho = np.outer(v, v.conj())
    b = ExpectationVector.from_dense(rho)
    cat = cached_catalog(n, m_set)
    return idx, feasibility(b, cat) is not None


@main.command()
@click.option("--plane", is_flag=True, help="two-parameter cross-section scan")
@click.option("--x-range", default="-0.1:0.26:41")
@click.option("--y-range", default="-0.13:0.13:41")
@click.option("--phi-range", default=None, help="scan of two-copy equatorial states")
@click.option("--copies", type=int, default=2)
@click.option("--volume", type=int, default=None, help="sample count")
@click.option("--measure", type=click.Choice(["hs", "fs"]), default="hs")
@click.option("--mode", type=click.Choice(["feasibility", "robustness"]), default="feasibility")
@click.option("--n", "n_opt", type=int, default=2)
@click.option("--m", "m_text", default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--threads", type=int, default=1)
@click.option("--cache-dir", default=None)
@_mapped_errors
def scan(plane, x_range, y_range, phi_range, copies, volume, measure, mode,
         n_opt, m_text, seed, out, threads, cache_dir):
    """Plot-ready grids: cross-section plane, angle scans, volume fractions."""
    from .oracle import cross_section_state, h_state, is_physical

    cache = _cache_dir(cache_dir)
    if plane:
        m_set = _parse_m_set(m_text) if m_text else frozenset({1, 2})
        cat = cached_catalog(2, m_set, cache_dir=cache)
        config = {"cmd": "scan-plane", "x": x_range, "y": y_range, "m": sorted(m_set)}
        rows = []
        for x in _parse_range(x_range):
            for y in _parse_range(y_range):
                rho = cross_section_state(x, y)
                phys = is_physical(rho)
                feas = ""
                if phys:
                    feas = int(
                        feasibility(ExpectationVector.from_dense(rho), cat)
                        is not None
                    )
                rows.append((f"{x:.6g}", f"{y:.6g}", int(phys), feas))
        _write_csv(out, ["x", "y", "physical", "feasible"], rows, config)
        return

    if phi_range is not None:
        n = copies
        m_set = _parse_m_set(m_text) if m_text else frozenset(range(1, n + 1))
        cat = cached_catalog(n, m_set, cache_dir=cache)
        config = {"cmd": "scan-phi", "range": phi_range, "copies": copies, "mode": mode}
        rows = []
        for phi in _parse_range(phi_range):
            rho1 = h_state(phi)
            rho = rho1
            for _ in range(copies - 1):
                rho = np.kron(rho, rho1)
            b = ExpectationVector.from_dense(rho)
            if mode == "feasibility":
                val = int(feasibility(b, cat) is not None)
            else:
                val = f"{robustness(b, cat).objective:.6f}"
            rows.append((f"{phi:.6g}", val))
        _write_csv(out, ["phi", mode], rows, config)
        return

    if volume is not None:
        if seed is None:
            raise ParseError("--seed is required for volume scans")
        n = n_opt
        m_set = _parse_m_set(m_text) if m_text else frozenset(range(1, n + 1))
        cached_catalog(n, m_set, cache_dir=cache)  # warm before forking
        config = {
            "cmd": "scan-volume", "samples": volume, "measure": measure,
            "m": sorted(m_set), "seed": seed, "n": n,
        }
        jobs = [(i, seed, n, m_set, measure) for i in range(volume)]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_volume_worker, jobs, chunksize=16))
        else:
            results = [_volume_worker(j) for j in jobs]
        good = sum(1 for _, ok in results if ok)
        rows = [(
            "qubits", measure, "{" + ";".join(str(m) for m in sorted(m_set)) + "}",
            volume, good, f"{good / volume:.6f}",
        )]
        _write_csv(
            out,
            ["mode", "measure", "m_set", "samples", "feasible", "fraction"],
            rows,
            config,
        )
        return

    raise ParseError("choose one of --plane, --phi-range, --volume")


# --- oracle (golden files) -------------------------------------------------------

def _matrix_json(mat: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(mat).ravel()]


def golden_payload() -> dict:
    """Reference matrices pinning the operator conventions."""
    from .oracle import named_state, pauli_matrix, phase_point_matrix
    from .phasespace import make_cnc, phase_points

    out = {}
    for text in ("I", "X", "Y", "Z", "XZ", "YY"):
        lab = parse_pauli(text)
        out[f"pauli_{text}"] = {"n": lab.n, "matrix": _matrix_json(pauli_matrix(lab))}
    omega = make_cnc([], [parse_pauli(a) for a in "XYZ"], n=1)
    point = phase_points(omega)[0]
    out["phase_point_xyz_all_zero"] = {
        "n": 1,
        "matrix": _matrix_json(phase_point_matrix(point)),
    }
    for name in ("H", "T", "hoggar"):
        mat = named_state(name)
        out[f"named_{name}"] = {"n": int(math.log2(mat.shape[0])), "matrix": _matrix_json(mat)}
    out["named_stab_00"] = {
        "n": 2,
        "matrix": _matrix_json(named_state("stab:+ZI,+IZ")),
    }
    return out


@main.command()
@click.option("--out", type=click.Path(), required=True)
@_mapped_errors
def oracle(out):
    """Regenerate the golden reference matrices as JSON."""
    payload = golden_payload()
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
    click.echo(f"wrote {len(payload)} golden matrices to {out}")


# --- verify --------------------------------------------------------------------

def _verify_fast() -> list[tuple[str, bool, str]]:
    checks = []
    n = 2
    labels = list(all_labels(n))
    ok = True
    for a in labels:
        for b_lab in labels:
            if symplectic(a, b_lab) == 0:
                if beta(a, b_lab) != beta(b_lab, a) or beta(a, b_lab) != beta(a, a ^ b_lab):
                    ok = False
    checks.append(("beta symmetry and reflection identities (n=2)", ok, ""))
    ok = True
    for a in labels:
        for b_lab in labels:
            for c in labels:
                if (
                    symplectic(a, b_lab) or symplectic(a, c) or symplectic(b_lab, c)
                ):
                    continue
                s = (
                    beta(a, b_lab) + beta(a ^ b_lab, c) + beta(b_lab, c) + beta(a, b_lab ^ c)
                ) % 2
                if s:
                    ok = False
    checks.append(("beta cocycle identity (n=2)", ok, ""))

    expected = {
        (1, frozenset({1}), False): 8,
        (2, frozenset({0}), False): 60,
        (2, frozenset({1}), False): 240,
        (2, frozenset({1, 2}), False): 432,
        (2, frozenset({0}), True): 24,
        (2, frozenset({1}), True): 72,
        (2, frozenset({1, 2}), True): 120,
    }
    for (cn, m_set, rebit), count in expected.items():
        cat = cached_catalog(cn, m_set, rebit=rebit)
        got = len(cat.points)
        checks.append(
            (
                f"catalog count n={cn} m={sorted(m_set)} {'rebit' if rebit else 'qubit'}",
                got == count,
                f"expected {count}, got {got}",
            )
        )
    return checks


def _verify_full() -> list[tuple[str, bool, str]]:
    from .dynamics import measure_update
    from .oracle import phase_point_matrix, projector

    checks = _verify_fast()
    cat = cached_catalog(2, {0, 1, 2})
    worst = 0.0
    for point in cat.points:
        a_mat = phase_point_matrix(point)
        for a in all_labels(2):
            if a.is_identity:
                continue
            for s in (0, 1):
                branch = measure_update(point, a, s)
                pr = projector(a, s)
                lhs = pr @ a_mat @ pr
                rhs = branch.probability * sum(
                    w * phase_point_matrix(q) for q, w in branch.successors
                )
                worst = max(worst, float(np.abs(lhs - rhs).max()))
    checks.append(
        ("measurement update matches dense projection (n=2)", worst < 1e-10,
         f"max deviation {worst:.3g}")
    )
    return checks


def _verify_lp() -> list[tuple[str, bool, str]]:
    from .oracle import named_state

    checks = []
    cat2 = cached_catalog(2, {1, 2})
    table = [
        ("H^2", 1.0, 1.7472),
        ("T^2", 1.0, 2.23205),
    ]
    for name, r_exp, rs_exp in table:
        b = ExpectationVector.from_dense(named_state(name))
        r = robustness(b, cat2).objective
        rs = robustness_of_magic(b).objective
        checks.append(
            (f"robustness {name}", abs(r - r_exp) < 5e-3, f"{r:.5f} vs {r_exp}")
        )
        checks.append(
            (f"stabilizer robustness {name}", abs(rs - rs_exp) < 2e-3, f"{rs:.5f} vs {rs_exp}")
        )
    rng = np.random.default_rng(7)
    ok = True
    detail = ""
    for _ in range(20):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        r, rs, bound = sandwich_gap(ExpectationVector.from_dense(rho), cat2)
        if not bound:
            ok = False
            detail = f"violated at R={r}, R_S={rs}"
    checks.append(("two-sided robustness bound on random states", ok, detail))
    return checks


@main.command()
@click.option("--level", type=click.Choice(["fast", "full", "lp"]), default="fast")
@_mapped_errors
def verify(level):
    """Run the built-in property suites; exit 4 on any failure."""
    t0 = time.perf_counter()
    runner = {"fast": _verify_fast, "full": _verify_full, "lp": _verify_lp}[level]
    checks = runner()
    failed = 0
    for name, ok, detail in checks:
        mark = "PASS" if ok else "FAIL"
        extra = f"  ({detail})" if detail and not ok else ""
        click.echo(f"[{mark}] {name}{extra}")
        failed += 0 if ok else 1
    click.echo(f"{len(checks) - failed}/{len(checks)} checks passed in "
               f"{time.perf_counter() - t0:.1f}s")
    if failed:
        sys.exit(4)


if __name__ == "__main__":
    main()
