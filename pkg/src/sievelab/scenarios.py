"""Reproducible experiment scenarios behind the CLI `run` subcommand.

Each scenario consumes a validated ScenarioConfig, draws all randomness from
a single seed through spawned child streams, and produces one JSON report
plus one CSV table.  Reports embed the library version and the config hash;
nothing time- or host-dependent is written, so identical configs give
byte-identical outputs.

Grid-shaped scenarios fan their cells out to a thread pool sized by the
SIEVELAB_WORKERS environment variable (default 1); results are merged in
input order, so the worker count never changes the report.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bounds import large_sieve_bound, larger_sieve_bound, LargerSieveInput
from .configfile import REQUIRED, ScenarioConfig
from .energy import differenced_larger_sieve, intersecting_process, lift_inequality_check
from .fourier import dense_subinterval
from .numtheory import jacobi, primes_up_to
from .quadratics import (
    RationalQuadratic,
    integer_value_containment,
    quadratic_image_set,
    quasisquares,
    split_discriminant_primes,
    stability_classifier,
    verify_reduction_agreement,
    goldbach_obstruction,
)
from .residues import (
    IntegerSet,
    InvariantViolationError,
    family_from_reductions,
    progression_family,
    quadratic_residue_family,
    random_constrained_set,
    squares_set,
)

__all__ = ["SCHEMAS", "ScenarioResult", "run_scenario", "scenario_names"]


def _worker_count() -> int:
    raw = os.environ.get("SIEVELAB_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ValueError(f"SIEVELAB_WORKERS must be an integer, got {raw!r}") from exc


def _ordered_map(fn, items):
    items = list(items)
    workers = _worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _child_rng(seed: int, index: int) -> np.random.Generator:
    child = np.random.SeedSequence(seed).spawn(index + 1)[index]
    return np.random.Generator(np.random.Philox(child))


def _random_subset(rng: np.random.Generator, x: int, size: int) -> IntegerSet:
    elements = rng.choice(x, size=size, replace=False) + 1
    return IntegerSet.from_iterable(x, (int(v) for v in elements))


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    report: dict
    csv_header: tuple
    csv_rows: list


# ---------------------------------------------------------------------------
# scenario: large-sieve-sharpness


def _run_large_sieve_sharpness(cfg: ScenarioConfig) -> ScenarioResult:
    def cell(x: int):
        q = math.isqrt(x)
        family = quadratic_residue_family(primes_up_to(q))
        a = squares_set(x)
        report = large_sieve_bound(family, x, q)
        return {
            "x": x,
            "q": q,
            "size": len(a),
            "bound": report.bound,
            "crude_bound": report.crude_bound,
            "ratio": report.bound / len(a),
        }
    cells = _ordered_map(cell, cfg.params["x_grid"])
    rows = [
        (c["x"], c["q"], c["size"], c["bound"], c["crude_bound"], c["ratio"])
        for c in cells
    ]
    return ScenarioResult(
        name=cfg.name,
        report={"cells": cells},
        csv_header=("x", "q", "size", "bound", "crude_bound", "ratio"),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------
# scenario: energy-audit


_DEMO_STEP = 30030  # 2*3*5*7*11*13; reductions collapse mod every small prime


def _run_energy_audit(cfg: ScenarioConfig) -> ScenarioResult:
    x, count, size = cfg.params["x"], cfg.params["count"], cfg.params["size"]
    if not 1 <= size <= x:
        raise ValueError(f"size must lie in [1, {x}], got {size}")

    def cell(index: int):
        rng = _child_rng(cfg.seed, index)
        a = _random_subset(rng, x, size)
        check = lift_inequality_check(a)
        if not check.holds:
            raise InvariantViolationError(
                f"lift comparison failed at seed index {index}: "
                f"{check.lhs} > {check.rhs}"
            )
        return {
            "index": index,
            "size": check.size,
            "energy": check.energy,
            "lhs": check.lhs,
            "rhs": check.rhs,
            "slack": check.slack,
        }

    cells = _ordered_map(cell, range(count))
    report = {"cells": cells, "all_hold": True}

    if cfg.params["differenced_demo"]:
        demo_x = 100_000
        demo = IntegerSet.from_iterable(
            demo_x, (_DEMO_STEP, 2 * _DEMO_STEP, 3 * _DEMO_STEP)
        )
        q = int(demo_x ** (0.5 - 0.05 / 2))
        fam = family_from_reductions(demo, primes_up_to(q))
        pipeline = differenced_larger_sieve(demo, fam)
        report["differenced_demo"] = pipeline.to_json_dict()

    rows = [
        (c["index"], c["size"], c["energy"], c["lhs"], c["rhs"], c["slack"])
        for c in cells
    ]
    return ScenarioResult(
        name=cfg.name,
        report=report,
        csv_header=("index", "size", "energy", "lift_lhs", "lift_rhs", "slack"),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------
# scenario: interval-iteration


def _run_interval_iteration(cfg: ScenarioConfig) -> ScenarioResult:
    x = cfg.params["x"]
    rounds = cfg.params["rounds"]
    min_length = cfg.params["min_length"]
    size = max(1, int(cfg.params["density"] * x))
    rng = _child_rng(cfg.seed, 0)
    current = _random_subset(rng, x, size)

    rows = []
    cur_x = x
    for i in range(1, rounds + 1):
        length = int(math.ceil(math.exp(math.log(cur_x) ** 0.7)))
        length = min(max(length, min_length), cur_x)
        start, count = dense_subinterval(current, length)
        before = len(current) / cur_x
        after = count / length
        rows.append(
            (i, cur_x, length, start, count, after, after / before if before else 0.0)
        )
        if count == 0 or length <= min_length or length == cur_x:
            break
        kept = [n - start + 1 for n in current.elements if start <= n < start + length]
        current = IntegerSet.from_iterable(length, kept)
        cur_x = length
    return ScenarioResult(
        name=cfg.name,
        report={
            "rounds": [
                {
                    "round": r[0],
                    "x": r[1],
                    "window_length": r[2],
                    "start": r[3],
                    "count": r[4],
                    "density": r[5],
                    "gain": r[6],
                }
                for r in rows
            ]
        },
        csv_header=("round", "x", "window_length", "start", "count", "density", "gain"),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------
# scenario: progression-intersection


def _run_progression_intersection(cfg: ScenarioConfig) -> ScenarioResult:
    x = cfg.params["x"]
    step = cfg.params["step"]
    frac = cfg.params["length_fraction"]
    eps, c = cfg.params["eps"], cfg.params["c"]
    lo, hi = cfg.params["window"]
    if not 0 < frac <= 1 - eps:
        raise ValueError(
            f"length_fraction must lie in (0, 1-eps] = (0, {1 - eps}], got {frac}"
        )
    window = [p for p in primes_up_to(hi) if p >= lo]
    if not window:
        raise ValueError(f"no primes in window [{lo}, {hi}]")

    def rule(p: int):
        if step % p == 0:
            return (1 % p, 1, 1)
        return (1 % p, step % p, max(1, int(frac * p)))

    family = progression_family(window, rule)
    a = random_constrained_set(family, x, cfg.params["size"], seed=cfg.seed)
    trace = intersecting_process(
        a, family, eps=eps, c=c, max_rounds=cfg.params["rounds"]
    )
    rows = [
        (r.index, "" if r.h is None else r.h, r.size, r.weighted_sum, r.sizes_digest)
        for r in trace.rounds
    ]
    return ScenarioResult(
        name=cfg.name,
        report={"trace": trace.to_json_dict(), "initial_size": len(a)},
        csv_header=("round", "h", "size", "weighted_sum", "sizes_digest"),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------
# scenario: quasisquare-census


def _run_quasisquare_census(cfg: ScenarioConfig) -> ScenarioResult:
    lo, hi = cfg.params["window"]
    primes = [p for p in primes_up_to(hi) if p >= lo and p > 2]
    mode = cfg.params["mode"]
    theta = cfg.params["theta"] if mode == "fraction" else None
    census = quasisquares(cfg.params["y"], primes, mode=mode, theta=theta)
    rows = []
    for q in census.hits:
        good = sum(1 for p in primes if jacobi(q, p) == 1)
        rows.append((q, good / len(primes)))
    report = census.to_json_dict()
    report["count_le_bound"] = census.count <= census.bound_value
    return ScenarioResult(
        name=cfg.name,
        report=report,
        csv_header=("q", "window_residue_fraction"),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------
# scenario: stability-classify


def _run_stability_classify(cfg: ScenarioConfig) -> ScenarioResult:
    psi = RationalQuadratic.from_string(cfg.params["psi"])
    x = cfg.params["x"]
    base = quadratic_image_set(psi, x)
    extras = [int(v) for v in cfg.params["extras"]]
    for v in extras:
        if not 1 <= v <= x:
            raise ValueError(f"extra element {v} outside [1, {x}]")
    a = IntegerSet.from_iterable(x, set(base.elements) | set(extras))
    report = stability_classifier(
        a, psi, cfg.params["window"], threshold=cfg.params["threshold"]
    )
    explained = set(report.explained.elements)
    rows = [
        (xv, frac, "explained" if xv in explained else "exceptional")
        for xv, frac in report.fractions
    ]
    return ScenarioResult(
        name=cfg.name,
        report=report.to_json_dict(),
        csv_header=("x", "image_fraction", "class"),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------
# scenario: goldbach-obstruction


def _run_goldbach_obstruction(cfg: ScenarioConfig) -> ScenarioResult:
    psi_a = RationalQuadratic.from_string(cfg.params["psi_a"])
    psi_b = RationalQuadratic.from_string(cfg.params["psi_b"])
    x, y = cfg.params["x"], cfg.params["y"]
    a = quadratic_image_set(psi_a, x)
    b = quadratic_image_set(psi_b, x)
    rows = []
    obstructed = 0
    for p in primes_up_to(y):
        check = goldbach_obstruction(a, b, p)
        if not check.has_multiple:
            obstructed += 1
        rows.append(
            (p, check.has_multiple, check.occupancy_sum, check.occupancy_sum <= p)
        )
    split = split_discriminant_primes(psi_a, psi_b, y)
    return ScenarioResult(
        name=cfg.name,
        report={
            "split_discriminant_primes": list(split),
            "obstructed_count": obstructed,
            "checked_primes": len(rows),
            "sizes": {"a": len(a), "b": len(b)},
        },
        csv_header=("p", "has_multiple", "occupancy_sum", "occupancy_le_p"),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------
# scenario: quadratic-reduction-verify


def _random_quadratic(rng: np.random.Generator, height: int) -> RationalQuadratic:
    while True:
        a, b, c, d = (int(v) for v in rng.integers(-height, height + 1, size=4))
        if a != 0 and d != 0:
            return RationalQuadratic(a, b, c, d)


def _run_quadratic_reduction_verify(cfg: ScenarioConfig) -> ScenarioResult:
    count = cfg.params["count"]
    height = cfg.params["height"]
    p_max = cfg.params["p_max"]
    radius = cfg.params["containment_radius"]

    def cell(index: int):
        rng = _child_rng(cfg.seed, index)
        psi = _random_quadratic(rng, height)
        bad_containment = integer_value_containment(psi, radius)
        window = [
            p
            for p in primes_up_to(p_max)
            if p > 2 * psi.height**2 and (2 * psi.a * psi.d) % p != 0
        ]
        checks = [verify_reduction_agreement(psi, p) for p in window]
        return {
            "psi": str(psi),
            "height": psi.height,
            "containment_failures": list(bad_containment),
            "primes_checked": len(checks),
            "all_ok": all(ch.ok for ch in checks),
            "vacuous": bool(checks) and checks[0].vacuous,
            "failing_primes": [ch.modulus for ch in checks if not ch.ok],
        }

    cells = _ordered_map(cell, range(count))
    rows = [
        (
            c["psi"],
            c["height"],
            c["primes_checked"],
            c["all_ok"],
            c["vacuous"],
            len(c["containment_failures"]),
        )
        for c in cells
    ]
    return ScenarioResult(
        name=cfg.name,
        report={
            "cells": cells,
            "all_ok": all(c["all_ok"] and not c["containment_failures"] for c in cells),
        },
        csv_header=(
            "psi",
            "height",
            "primes_checked",
            "all_ok",
            "vacuous",
            "containment_failures",
        ),
        csv_rows=rows,
    )


# ---------------------------------------------------------------------------


SCHEMAS: dict[str, dict] = {
    "large-sieve-sharpness": {"x_grid": ("int_list", REQUIRED)},
    "energy-audit": {
        "x": ("int", 10_000),
        "count": ("int", 20),
        "size": ("int", 200),
        "differenced_demo": ("bool", True),
    },
    "interval-iteration": {
        "x": ("int", 100_000),
        "density": ("float", 0.05),
        "rounds": ("int", 6),
        "min_length": ("int", 16),
    },
    "progression-intersection": {
        "x": ("int", 10_000),
        "size": ("int", 120),
        "step": ("int", 7),
        "length_fraction": ("float", 0.6),
        "eps": ("float", 0.2),
        "c": ("float", 0.05),
        "window": ("int_pair", (11, 31)),
        "rounds": ("int", 12),
    },
    "quasisquare-census": {
        "y": ("int", 10_000),
        "window": ("int_pair", (50, 100)),
        "mode": ("str", "all"),
        "theta": ("float", 0.95),
    },
    "stability-classify": {
        "psi": ("str", "(1*x^2+0*x+0)/1"),
        "x": ("int", 400),
        "extras": ("int_list", (3,)),
        "window": ("int_pair", (11, 97)),
        "threshold": ("float", 0.97),
    },
    "goldbach-obstruction": {
        "psi_a": ("str", "(1*x^2+0*x+0)/1"),
        "psi_b": ("str", "(1*x^2+0*x+0)/1"),
        "x": ("int", 10_000),
        "y": ("int", 100),
    },
    "quadratic-reduction-verify": {
        "count": ("int", 100),
        "height": ("int", 10),
        "p_max": ("int", 200),
        "containment_radius": ("int", 100_000),
    },
}

_RUNNERS = {
    "large-sieve-sharpness": _run_large_sieve_sharpness,
    "energy-audit": _run_energy_audit,
    "interval-iteration": _run_interval_iteration,
    "progression-intersection": _run_progression_intersection,
    "quasisquare-census": _run_quasisquare_census,
    "stability-classify": _run_stability_classify,
    "goldbach-obstruction": _run_goldbach_obstruction,
    "quadratic-reduction-verify": _run_quadratic_reduction_verify,
}


def scenario_names() -> list[str]:
    return sorted(SCHEMAS)


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    result = _RUNNERS[cfg.name](cfg)
    envelope = {
        "scenario": cfg.name,
        "version": __version__,
        "config_hash": cfg.config_hash,
        "seed": cfg.seed,
        "params": {k: list(v) if isinstance(v, tuple) else v for k, v in cfg.params.items()},
        "results": result.report,
    }
    return ScenarioResult(
        name=cfg.name,
        report=envelope,
        csv_header=result.csv_header,
        csv_rows=result.csv_rows,
    )
