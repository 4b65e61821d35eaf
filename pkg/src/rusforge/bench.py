"""Benchmark harness: batches of syntheses, CSV rows and regression fits."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .angles import Angle
from .pipeline import SearchParams
from .rng import stream

log = logging.getLogger(__name__)

MODES = ("random", "fourier")


@dataclass
class BenchRecord:
    theta: str
    epsilon: float
    achievedDistance: float
    designTcount: int
    successProb: float
    expectedTcount: float
    pslqIterations: int
    normEquationsSolved: int
    wallTimeMs: float
    valid: bool = True
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.valid and not self.error


def bench_angles(mode: str, count: int, seed: int) -> list[Angle]:
    if mode == "random":
        rng = stream(seed, "bench:angles")
        return [Angle.from_float(rng.uniform(0, 2 * math.pi)) for _ in range(count)]
    if mode == "fourier":
        # pi/2^k for k = 2, 3, ...
        return [Angle.parse(f"pi/2^{k}") for k in range(2, count + 2)]
    raise ValueError(f"unknown bench mode {mode!r}")


def run_one(job) -> BenchRecord:
    """One synthesis plus validation; failures become error rows."""
    from .rus2q import synthesize
    from .verify import validate_protocol

    theta, eps, params, variant = job
    t0 = time.perf_counter()
    try:
        proto, _ = synthesize(theta, eps, params, variant)
        r0, r1 = validate_protocol(proto, theta, eps, raise_on_fail=False)
        dist = proto.success_distance(theta)
        return BenchRecord(
            str(theta),
            eps,
            dist,
            proto.design_tcount,
            proto.p,
            proto.expected_tcount,
            int(proto.info.get("pslq_iterations", 0)),
            int(proto.info.get("norm_equations_solved", 0)),
            (time.perf_counter() - t0) * 1000,
            r0.matches_expected and r1.matches_expected,
        )
    except Exception as exc:  # logged and kept as a row, never fatal
        log.warning("bench row theta=%s eps=%g failed: %s", theta, eps, exc)
        nan = float("nan")
        return BenchRecord(str(theta), eps, nan, -1, nan, nan, -1, -1, (time.perf_counter() - t0) * 1000, False, f"{type(exc).__name__}: {exc}")


def run_bench(
    mode: str,
    count: int,
    epsilons: list[float],
    seed: int,
    params: SearchParams | None = None,
    variant: str = "auto",
    workers: int | None = None,
) -> list[BenchRecord]:
    """All (angle, epsilon) rows, sorted by (theta, epsilon).

    Each row gets its own seed derived from ``seed`` and the row index, so the
    output does not depend on scheduling."""
    base = params or SearchParams(seed=seed)
    angles = bench_angles(mode, count, seed)
    jobs, order = [], []
    for i, a in enumerate(angles):
        for j, e in enumerate(epsilons):
            p = SearchParams(base.delta, base.sz, base.p_min, stream(seed, f"bench:row:{i}:{j}").getrandbits(63), base.budget_ms)
            jobs.append((a, float(e), p, variant))
            order.append((float(a), float(e), i, j))
    workers = workers if workers is not None else min(len(jobs), os.cpu_count() or 1)
    if workers <= 1:
        rows = [run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(run_one, jobs, chunksize=1))
    keyed = sorted(zip(order, rows), key=lambda t: t[0])
    return [r for _, r in keyed]


@dataclass
class Regression:
    slope: float
    intercept: float
    points: list[tuple[float, float]]  # (log10(1/eps), mean)


def fit_means(records: list[BenchRecord], attr: str = "expectedTcount") -> Regression:
    """Least-squares line through the per-epsilon means of ``attr`` against log10(1/eps)."""
    groups: dict[float, list[float]] = {}
    for r in records:
        if r.ok:
            groups.setdefault(r.epsilon, []).append(float(getattr(r, attr)))
    pts = sorted((math.log10(1 / e), float(np.mean(v))) for e, v in groups.items())
    if len(pts) < 2:
        raise ValueError("need at least two precisions for a fit")
    x, y = zip(*pts)
    slope, icpt = np.polyfit(x, y, 1)
    return Regression(float(slope), float(icpt), pts)


def reference_cost(epsilon: float) -> float:
    """Ancilla-free reference 3 log2(1/eps)."""
    return 3 * math.log2(1 / epsilon)


def summary(records: list[BenchRecord]) -> dict:
    out: dict = {"rows": len(records), "failed": sum(not r.ok for r in records)}
    try:
        cost = fit_means(records)
        out["expected_tcount_fit"] = {"slope": cost.slope, "intercept": cost.intercept}
        out["means"] = [{"log10_inv_eps": x, "mean_expected_tcount": m, "reference": 3 * x * math.log2(10)} for x, m in cost.points]
        it = fit_means(records, "pslqIterations")
        out["pslq_iterations_fit"] = {"slope": it.slope, "intercept": it.intercept}
    except ValueError:
        pass
    return out


def to_csv(records: list[BenchRecord], wall_time: bool = True) -> str:
    names = [f.name for f in fields(BenchRecord) if wall_time or f.name != "wallTimeMs"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    w.writeheader()
    for r in records:
        row = asdict(r)
        if not wall_time:
            row.pop("wallTimeMs")
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
