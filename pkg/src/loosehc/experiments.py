"""Seeded experiment sweeps with deterministic CSV output."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from pathlib import Path

import numpy as np

from .constructions import GeneratorSpec, generate, make_L29
from .exact import EXACT_GUARD, SearchTimeout, exact_loose_hc
from .fractional import HMIN_FLOOR, TARGET_WEIGHT, search_L29_fractional, validate_fractional_tiling
from .hypergraph import validate_loose_cycle
from .pipeline import assemble_hamilton_cycle

OPERATIONS = ("exact", "pipeline", "l29")
TIMING_COLUMNS = ("runtime_ms",)
COLUMNS = (
    "config_hash", "grid_index", "params", "replicate", "seed", "n", "edges", "min_degree",
    "degree_ratio", "outcome", "metric", "certificate", "runtime_ms",
)


@dataclass
class ExperimentConfig:
    name: str
    family: str
    grid: dict
    operation: str = "exact"
    op_params: dict = field(default_factory=dict)
    base_seed: int = 0
    replicates: int = 1
    out: str | None = None
    certificates: str | None = None
    threads: int = 1

    @classmethod
    def from_json(cls, data) -> "ExperimentConfig":
        if isinstance(data, (str, Path)) and Path(data).exists():
            data = json.loads(Path(data).read_text())
        elif isinstance(data, str):
            data = json.loads(data)
        return cls(**data)

    def to_json(self) -> dict:
        return asdict(self)

    @property
    def hash(self) -> str:
        """Digest of everything that affects results (not paths or thread count)."""
        core = {k: v for k, v in asdict(self).items() if k not in ("out", "certificates", "threads")}
        blob = json.dumps(core, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def grid_points(self) -> list[dict]:
        keys = sorted(self.grid)
        vals = [v if isinstance(v, list) else [v] for v in (self.grid[k] for k in keys)]
        return [dict(zip(keys, combo)) for combo in itertools.product(*vals)]


@dataclass
class ResultRow:
    config_hash: str
    grid_index: int
    params: str
    replicate: int
    seed: int
    n: int
    edges: int
    min_degree: int
    degree_ratio: str
    outcome: str
    metric: str
    certificate: str
    runtime_ms: int


def instance_seed(base: int, grid_index: int, rep: int) -> int:
    return int(np.random.SeedSequence([base, grid_index, rep]).generate_state(1, dtype=np.uint64)[0] >> 1)


def _run_one(task) -> ResultRow:
    cfg, gi, params, rep, cert_dir = task
    seed = instance_seed(cfg.base_seed, gi, rep)
    t0 = time.perf_counter()
    op = cfg.op_params
    cert_path = ""
    metric = ""
    if cfg.operation == "l29":
        L = make_L29(None, seed)
        H = L.host
        T = search_L29_fractional(L, float(op.get("budget", 5.0)))
        rep_ = validate_fractional_tiling(T)
        good = rep_.valid and rep_.h_min >= HMIN_FLOOR and rep_.weight >= TARGET_WEIGHT
        outcome = "success" if good else "failure(validation)"
        metric = str(rep_.weight)
        cert = {"kind": "fractional", "tiling": T.to_json()}
    else:
        H = generate(GeneratorSpec(cfg.family, params, seed))
        cert = None
        if cfg.operation == "exact":
            if H.n > EXACT_GUARD:
                raise ValueError(f"n={H.n} exceeds the exact solver guard {EXACT_GUARD}")
            try:
                C = exact_loose_hc(H, time_budget=op.get("budget"))
                outcome = "success" if C else "failure(no-cycle)"
                if C:
                    cert = {"kind": "cycle", "order": list(C.order)}
            except SearchTimeout:
                outcome = "timeout"
        elif cfg.operation == "pipeline":
            r = assemble_hamilton_cycle(H, float(op.get("gamma", 0.3)), seed, op.get("budget", 30.0))
            outcome = "success" if r.ok else f"failure({r.stage})"
            if r.ok:
                cert = {"kind": "cycle", "order": list(r.cycle.order)}
        else:
            raise ValueError(f"unknown operation {cfg.operation!r}")
        if cert is not None and not validate_loose_cycle(H, cert["order"], hamilton=True):
            raise AssertionError("solver returned an invalid certificate")
    if cert is not None and cert_dir is not None:
        name = f"{cfg.name}-{gi}-{rep}.json"
        cert_path = name
        cert.update({"instance": H.to_json(), "seed": seed})
        Path(cert_dir, name).write_text(json.dumps(cert, sort_keys=True) + "\n")
    dmin = H.min_degree(1) if H.n >= 3 else 0
    ratio = f"{dmin / comb(H.n, 2):.6f}" if H.n >= 2 else "0"
    return ResultRow(
        cfg.hash, gi, json.dumps(params, sort_keys=True), rep, seed, H.n, len(H.edges), dmin,
        ratio, outcome, metric, cert_path, int(1000 * (time.perf_counter() - t0)),
    )


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> list[ResultRow]:
    """Run every (grid point, replicate); rows come back in that order whatever the pool size."""
    if cfg.operation not in OPERATIONS:
        raise ValueError(f"operation must be one of {OPERATIONS}")
    cert_dir = cfg.certificates
    if cert_dir is not None:
        Path(cert_dir).mkdir(parents=True, exist_ok=True)
    tasks = [
        (cfg, gi, params, rep, cert_dir)
        for gi, params in enumerate(cfg.grid_points())
        for rep in range(cfg.replicates)
    ]
    threads = cfg.threads if threads is None else threads
    if threads <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_one, tasks, chunksize=1))


def rows_to_csv(rows, cfg: ExperimentConfig, timing: bool = True) -> str:
    cols = [c for c in COLUMNS if timing or c not in TIMING_COLUMNS]
    buf = io.StringIO()
    buf.write(f"# config_hash={cfg.hash} name={cfg.name}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        d = asdict(r)
        w.writerow([d[c] for c in cols])
    return buf.getvalue()


def strip_timing(text: str) -> str:
    """Drop the timing columns from CSV text produced by :func:`rows_to_csv`."""
    lines = text.splitlines(keepends=True)
    head = [ln for ln in lines if ln.startswith("#")]
    body = list(csv.reader(ln for ln in lines if not ln.startswith("#")))
    if not body:
        return "".join(head)
    keep = [i for i, c in enumerate(body[0]) if c not in TIMING_COLUMNS]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in body:
        w.writerow([row[i] for i in keep])
    return "".join(head) + buf.getvalue()


def threshold_sweep(cfg: ExperimentConfig, threads: int | None = None) -> str:
    """Loose Hamilton cycle existence against the normalised minimum degree.

    Returns raw rows as CSV (written to ``cfg.out`` when set). No trend is
    asserted; at these sizes the frequencies are noisy.
    """
    if cfg.operation != "exact":
        raise ValueError("threshold sweeps use the exact solver")
    for p in cfg.grid_points():
        if int(p.get("n", 0)) > EXACT_GUARD:
            raise ValueError(f"n={p['n']} exceeds the exact solver guard {EXACT_GUARD}")
    rows = run_experiment(cfg, threads)
    text = rows_to_csv(rows, cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    return text


def frequencies(rows) -> dict:
    """Fraction of success rows per grid point."""
    out: dict = {}
    for r in rows:
        s, t = out.get(r.params, (0, 0))
        out[r.params] = (s + (r.outcome == "success"), t + 1)
    return {k: s / t for k, (s, t) in out.items()}
