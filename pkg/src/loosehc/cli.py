"""Command line: gen, solve, tile, verify, experiment."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .constructions import FAMILIES, GeneratorSpec, L29Instance, generate
from .exact import EXACT_GUARD, SearchTimeout, exact_loose_hc
from .experiments import ExperimentConfig, rows_to_csv, run_experiment
from .fractional import (
    HMIN_FLOOR, TARGET_WEIGHT, FractionalTiling, search_L29_fractional, validate_fractional_tiling,
)
from .hypergraph import Hypergraph3, LoosePath, load, save, validate_loose_cycle, validate_loose_path
from .pipeline import assemble_hamilton_cycle
from .tiling import MTiling, max_M_tiling, path_tile, validate_m_tiling

log = logging.getLogger("loosehc")
FAMILY_ALIASES = {f.lower(): f for f in FAMILIES}
OUTDIR_ENV = "LOOSEHC_OUT"


def _out_path(p: str | None, default: str) -> Path:
    if p:
        return Path(p)
    return Path(os.environ.get(OUTDIR_ENV, ".")) / default


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def cmd_gen(a) -> int:
    fam = FAMILY_ALIASES.get(a.family.lower())
    if fam is None:
        raise UsageError(f"unknown family {a.family!r}")
    params = {}
    for key in ("n", "k", "t", "p", "target", "ratio", "d"):
        val = getattr(a, key)
        if val is not None:
            params[key] = val
    if a.sizes:
        params["sizes"] = [int(x) for x in a.sizes.split(",")]
    if a.crossing:
        params["crossing"] = [tuple(int(x) for x in c.split(":")) for c in a.crossing.split(",")]
    try:
        H = generate(GeneratorSpec(fam, params, a.seed))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"gen {fam}: {exc}") from exc
    out = _out_path(a.out, f"{fam.lower()}.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    save(H, out)
    if out.suffix != ".json":
        _write_json(out.with_name(out.name + ".meta.json"), H.meta)
    print(f"wrote {out}: n={H.n} edges={len(H.edges)}")
    return 0


def cmd_solve(a) -> int:
    H = load(a.instance)
    budget = None if a.budget_ms is None else a.budget_ms / 1000
    cert = {"kind": "cycle", "mode": a.mode, "seed": a.seed, "instance": str(a.instance)}
    if a.mode == "exact":
        if H.n > EXACT_GUARD:
            raise UsageError(f"exact mode is limited to n <= {EXACT_GUARD}")
        try:
            C = exact_loose_hc(H, time_budget=budget)
            outcome = "success" if C else "failure(no-cycle)"
        except SearchTimeout:
            C, outcome = None, "timeout"
        cert["stage_log"] = [{"stage": "exact", "outcome": outcome}]
    else:
        r = assemble_hamilton_cycle(H, a.gamma, a.seed, budget if budget is not None else 30.0)
        C = r.cycle
        outcome = "success" if r.ok else f"failure({r.stage})"
        cert["stage_log"] = r.log
    cert["outcome"] = outcome
    cert["order"] = list(C.order) if C else None
    if a.certificate:
        _write_json(Path(a.certificate), cert)
    print(f"outcome={outcome}")
    return 0


def cmd_tile(a) -> int:
    H = load(a.instance)
    out = _out_path(a.out, f"tiling-{a.what}.json")
    if a.what == "m":
        T = max_M_tiling(H, budget=a.budget)
        obj = {"kind": "m-tiling", "copies": [list(c) for c in T.copies], "exact": T.meta.get("exact")}
        msg = f"copies={len(T)}"
    elif a.what == "path":
        PT = path_tile(H, a.gamma, a.alpha, seed=a.seed)
        obj = {"kind": "paths", "paths": [list(p.order) for p in PT.paths], "uncovered": PT.uncovered,
               "route": PT.route}
        msg = f"paths={len(PT.paths)} uncovered={len(PT.uncovered)}"
    else:
        crossing = H.meta.get("params", {}).get("crossing")
        if H.n != 18 or crossing is None:
            raise UsageError("fractional tiling needs an L29 instance (gen --family l29)")
        crossing = frozenset(tuple(p) for p in crossing)
        T = search_L29_fractional(L29Instance(crossing, H), a.budget)
        rep = validate_fractional_tiling(T)
        obj = {"kind": "fractional", "tiling": T.to_json(), "weight": str(rep.weight), "h_min": str(rep.h_min)}
        msg = f"weight={rep.weight} h_min={rep.h_min}"
    _write_json(out, obj)
    print(f"wrote {out}: {msg}")
    return 0


def verify_certificate(H: Hypergraph3, cert: dict) -> tuple[bool, str]:
    kind = cert.get("kind")
    if kind == "cycle":
        if cert.get("order") is None:
            return False, "certificate holds no cycle"
        v = validate_loose_cycle(H, cert["order"], hamilton=True)
        return v.ok, v.reason or "ok"
    if kind == "fractional":
        rep = validate_fractional_tiling(FractionalTiling.from_json(H, cert["tiling"]))
        ok = rep.valid and rep.h_min >= HMIN_FLOOR and rep.weight >= TARGET_WEIGHT
        return ok, f"weight={rep.weight} h_min={rep.h_min} violations={rep.violations[:3]}"
    if kind == "m-tiling":
        probs = validate_m_tiling(H, MTiling([tuple(c) for c in cert["copies"]]))
        return not probs, "; ".join(probs) or "ok"
    if kind == "paths":
        seen: set[int] = set()
        for order in cert["paths"]:
            v = validate_loose_path(H, LoosePath(order))
            if not v:
                return False, v.reason
            if seen & set(order):
                return False, "paths overlap"
            seen |= set(order)
        return True, "ok"
    return False, f"unknown certificate kind {kind!r}"


def cmd_verify(a) -> int:
    cert = json.loads(Path(a.certificate).read_text())
    inst = a.instance or cert.get("instance")
    if isinstance(inst, dict):
        H = Hypergraph3.from_json(inst)
    elif inst:
        H = load(inst)
    else:
        raise UsageError("no instance given and none recorded in the certificate")
    ok, why = verify_certificate(H, cert)
    print(("valid" if ok else "INVALID") + f": {why}")
    return 0 if ok else 1


def cmd_experiment(a) -> int:
    cfg = ExperimentConfig.from_json(a.config)
    if a.out:
        cfg.out = a.out
    rows = run_experiment(cfg, a.threads)
    text = rows_to_csv(rows, cfg)
    out = _out_path(cfg.out, f"{cfg.name}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(f"wrote {out}: {len(rows)} rows")
    return 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loosehc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", required=True, help=", ".join(sorted(FAMILY_ALIASES)))
    for name, typ in (("n", int), ("k", int), ("t", int), ("target", int), ("p", float), ("ratio", float), ("d", float)):
        g.add_argument(f"--{name}", type=typ)
    g.add_argument("--sizes", help="class sizes, e.g. 8,8,8")
    g.add_argument("--crossing", help="L29 role pairs a:b, comma separated")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="look for a loose Hamilton cycle")
    s.add_argument("instance")
    s.add_argument("--mode", choices=("exact", "pipeline"), default="exact")
    s.add_argument("--gamma", type=float, default=0.3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget-ms", type=int)
    s.add_argument("--certificate")
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("tile", help="M-tiling, path tiling or L29 fractional tiling")
    t.add_argument("instance")
    t.add_argument("--what", choices=("m", "path", "fractional"), default="m")
    t.add_argument("--gamma", type=float, default=0.3)
    t.add_argument("--alpha", type=float, default=0.25)
    t.add_argument("--budget", type=float, default=10.0)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out")
    t.set_defaults(func=cmd_tile)

    v = sub.add_parser("verify", help="re-validate a certificate against its instance")
    v.add_argument("certificate")
    v.add_argument("--instance")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a JSON experiment config to CSV")
    e.add_argument("config")
    e.add_argument("--threads", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return a.func(a)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure
        log.exception("internal failure")
        print(f"internal failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
