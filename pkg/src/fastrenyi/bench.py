"""Synthetic data and the MRE benchmark harness.

Trial ``t`` of every grid point uses seed ``master_seed + t``; the exact
oracle is computed once per alpha and reused. Records are streamed to CSV
as they complete, so a long run can be inspected while it is going.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .blocklr import build_block_lowrank
from .errors import NumericalError
from .exact import eigen_spectrum, spectrum_entropy
from .kernels import KernelSpec, build_gram
from .measures import METHODS, estimate_entropy
from .sketch import EstimatorConfig

log = logging.getLogger(__name__)

__all__ = [
    "generate_mixture",
    "BenchmarkSpec",
    "BenchmarkRecord",
    "CSV_FIELDS",
    "run_benchmark",
    "write_csv",
    "read_csv",
    "write_json",
    "mean_relative_error",
]

CSV_FIELDS = ("method", "alpha", "s", "m", "c", "k", "seed", "estimate", "exact", "rel_error", "time_s")
DEFAULT_DEGREE = {"trace": None, "taylor": 30, "chebyshev": 30, "lanczos": 15}


def generate_mixture(n: int, d: int, seed: int = 0) -> np.ndarray:
    """Draw ``n`` samples from ``N(-1, I_d)/2 + N(+1, I_d)/2`` (all-minus-one / all-one means)."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    rng = np.random.default_rng(seed)
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return sign[:, None] + rng.standard_normal((n, d))


@dataclass
class BenchmarkSpec:
    n: int = 2000
    d: int = 10
    kernel: KernelSpec = field(default_factory=KernelSpec)
    alphas: Sequence[float] = (2.0,)
    methods: Sequence[str] = ("trace",)
    s_start: int = 20
    s_stop: int = 200
    s_step: int = 20
    degrees: dict = field(default_factory=dict)
    blocking: Sequence[tuple[int, int] | None] = (None,)  # None = dense operator
    trials: int = 100
    master_seed: int = 0
    output: str | Path | None = None
    data: np.ndarray | None = None  # overrides the Gaussian mixture when given

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.alphas or not self.methods or not self.blocking:
            raise ValueError("alpha, method and blocking lists must be non-empty")
        if self.s_start < 1 or self.s_stop < self.s_start or self.s_step < 1:
            raise ValueError("invalid sketch-count range")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")

    @property
    def s_values(self) -> list[int]:
        return list(range(self.s_start, self.s_stop + 1, self.s_step))

    def degree(self, method: str) -> int | None:
        return self.degrees.get(method, DEFAULT_DEGREE.get(method))


@dataclass
class BenchmarkRecord:
    method: str
    alpha: float
    s: int | None
    m: int | None
    c: int | None
    k: int | None
    seed: int
    estimate: float
    exact: float | None
    rel_error: float | None
    time_s: float


def _grid(spec: BenchmarkSpec):
    for alpha in spec.alphas:
        for method in spec.methods:
            if method == "trace" and (alpha != int(alpha) or alpha < 2):
                log.info("skipping trace estimator for non-integer alpha=%s", alpha)
                continue
            for blocking in spec.blocking:
                if method == "exact":
                    if blocking is None:
                        yield alpha, method, blocking, None
                    continue
                for s in spec.s_values:
                    yield alpha, method, blocking, s


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _row(rec: BenchmarkRecord) -> list[str]:
    return [_fmt(getattr(rec, f)) for f in CSV_FIELDS]


def run_benchmark(spec: BenchmarkSpec) -> list[BenchmarkRecord]:
    data = spec.data if spec.data is not None else generate_mixture(spec.n, spec.d, spec.master_seed)
    t0 = time.perf_counter()
    g = build_gram(data, spec.kernel)
    log.info("gram build: n=%d in %.3fs", len(g), time.perf_counter() - t0)

    t0 = time.perf_counter()
    lam = eigen_spectrum(g)
    oracle = {a: spectrum_entropy(lam, a) for a in spec.alphas}
    log.info("oracle eigendecomposition in %.3fs", time.perf_counter() - t0)

    operators = {None: g}
    for blocking in spec.blocking:
        if blocking is not None and blocking not in operators:
            t0 = time.perf_counter()
            c, k = blocking
            operators[blocking] = build_block_lowrank(data, spec.kernel, c=c, k=k, seed=spec.master_seed)
            log.info("block low-rank build c=%d k=%d in %.3fs", c, k, time.perf_counter() - t0)

    records: list[BenchmarkRecord] = []
    fh = writer = None
    if spec.output is not None and Path(spec.output).suffix.lower() != ".json":
        fh = open(spec.output, "w", newline="", encoding="utf-8")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
    try:
        for alpha, method, blocking, s in _grid(spec):
            m = spec.degree(method)
            if method == "trace":
                m = int(alpha)
            c, k = blocking if blocking is not None else (None, None)
            trials = 1 if method == "exact" else spec.trials
            for t in range(trials):
                seed = spec.master_seed + t
                config = EstimatorConfig(alpha=alpha, s=s or 1, m=m if m is not None else 0, seed=seed)
                exact = oracle[alpha]
                try:
                    est = estimate_entropy(operators[blocking], method, config)
                    value, elapsed = est.value, est.elapsed
                    rel = abs(value - exact) / abs(exact) if exact != 0 else abs(value - exact)
                except (NumericalError, ArithmeticError, ValueError) as exc:
                    log.warning("%s alpha=%s s=%s seed=%d failed: %s", method, alpha, s, seed, exc)
                    value, rel, elapsed = math.nan, math.nan, math.nan
                rec = BenchmarkRecord(method, float(alpha), s, m if method != "exact" else None, c, k,
                                      seed, value, exact, rel, elapsed)
                records.append(rec)
                if writer is not None:
                    writer.writerow(_row(rec))
                    fh.flush()
    finally:
        if fh is not None:
            fh.close()
    if spec.output is not None and Path(spec.output).suffix.lower() == ".json":
        write_json(records, spec.output)
    return records


def write_csv(records: Iterable[BenchmarkRecord], path_or_file) -> None:
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for rec in records:
            w.writerow(_row(rec))

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            _write(fh)


def _parse(name: str, raw: str):
    if raw == "":
        return None
    if name == "method":
        return raw
    if name in ("s", "m", "c", "k", "seed"):
        return int(raw)
    return float(raw)


def read_csv(path) -> list[BenchmarkRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [BenchmarkRecord(**{f: _parse(f, row[f]) for f in CSV_FIELDS}) for row in reader]


def write_json(records: Iterable[BenchmarkRecord], path_or_file) -> None:
    payload = [dataclasses.asdict(r) for r in records]
    if hasattr(path_or_file, "write"):
        json.dump(payload, path_or_file, indent=1)
    else:
        with open(path_or_file, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)


def mean_relative_error(records: Iterable[BenchmarkRecord]) -> tuple[float, float]:
    """MRE and its standard deviation over the given records."""
    errs = np.array([r.rel_error for r in records], dtype=float)
    return float(np.mean(errs)), float(np.std(errs))
