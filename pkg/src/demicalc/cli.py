"""``verify`` command: run the registered numerical checks and write a report.

    verify run --config cfg.json [--suite ode] [--seed 0] [--out dir] [--samples N] [--jobs N]
    verify describe fourier

``run`` writes ``report.json`` (a list of check results, sorted keys, no
timestamps) and ``residuals.csv``.  Exit status is 0 when every check passes,
1 when any check fails (the report is still written) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .quadrature import QuadratureConfig
from .suites import REGISTRY, Context, resolve_suite

log = logging.getLogger("demicalc.verify")

ALL_SUITES = tuple(REGISTRY)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    samples_per_check: int | None = None
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    tolerance_overrides: dict = field(default_factory=dict)
    suites: tuple = ALL_SUITES
    output_path: str = "verify-out"
    jobs: int = 1

    def __post_init__(self):
        if self.samples_per_check is not None and self.samples_per_check < 1:
            raise UsageError("samples_per_check must be at least 1")
        if self.jobs < 1:
            raise UsageError("jobs must be at least 1")
        try:
            object.__setattr__(self, "suites", tuple(dict.fromkeys(resolve_suite(s) for s in self.suites)))
        except KeyError as exc:
            raise UsageError(f"unknown suite {exc.args[0]!r}; choose from {', '.join(ALL_SUITES)}") from None
        known = {c.check_id for checks in REGISTRY.values() for c in checks}
        unknown = set(self.tolerance_overrides) - known
        if unknown:
            raise UsageError(f"tolerance override for unknown check(s): {', '.join(sorted(unknown))}")

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        data = dict(data)
        allowed = {f for f in cls.__dataclass_fields__}
        extra = set(data) - allowed
        if extra:
            raise UsageError(f"unknown config keys: {', '.join(sorted(extra))}")
        if "quadrature" in data:
            try:
                data["quadrature"] = QuadratureConfig(**data["quadrature"])
            except TypeError as exc:
                raise UsageError(f"bad quadrature section: {exc}") from None
        if "suites" in data:
            data["suites"] = tuple(data["suites"])
        return cls(**data)


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    suite: str
    paper_anchor: str
    n_samples: int
    max_residual: float
    tolerance: float
    passed: bool
    worst_sample: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["max_residual"] = _json_float(self.max_residual)
        return d


def _json_float(v: float):
    return v if math.isfinite(v) else repr(v)


def check_seed(seed: int, check_id: str) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, zlib.crc32(check_id.encode())])


def _find(check_id: str):
    for checks in REGISTRY.values():
        for c in checks:
            if c.check_id == check_id:
                return c
    raise KeyError(check_id)


def run_check(check_id: str, cfg: SuiteConfig) -> tuple[CheckResult, list]:
    """Run one check; exceptions count as an infinite residual, not a crash."""
    check = _find(check_id)
    n = cfg.samples_per_check or check.default_samples
    tol = float(cfg.tolerance_overrides.get(check_id, check.tolerance))
    ctx = Context(np.random.default_rng(check_seed(cfg.seed, check_id)), n, cfg.quadrature)
    try:
        rows = [(float(r), str(d)) for r, d in check.run(ctx)]
    except Exception as exc:  # reported, so one broken check does not hide the others
        log.exception("check %s raised", check_id)
        rows = [(math.inf, f"{type(exc).__name__}: {exc}")]
    residuals = [r if math.isfinite(r) else math.inf for r, _ in rows]
    worst = int(np.argmax(residuals)) if residuals else 0
    max_res = residuals[worst] if residuals else 0.0
    result = CheckResult(check_id, check.suite, check.anchor, len(rows), max_res, tol,
                         bool(max_res <= tol), rows[worst][1] if rows else "")
    return result, residuals


def run_suites(cfg: SuiteConfig) -> list[tuple[CheckResult, list]]:
    ids = [c.check_id for s in cfg.suites for c in REGISTRY[s]]
    if cfg.jobs == 1:
        return [run_check(i, cfg) for i in ids]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(run_check, ids, [cfg] * len(ids)))


def write_report(results, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = [r.to_dict() for r, _ in results]
    (out_dir / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n",
                                         encoding="utf-8")
    with open(out_dir / "residuals.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["check_id", "sample_index", "residual"])
        for r, residuals in results:
            for i, v in enumerate(residuals):
                w.writerow([r.check_id, i, repr(v)])


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return data


def build_config(args: argparse.Namespace) -> SuiteConfig:
    data = load_config(args.config)
    if args.suite:
        data["suites"] = args.suite
    if args.seed is not None:
        data["seed"] = args.seed
    if args.out is not None:
        data["output_path"] = args.out
    if args.samples is not None:
        data["samples_per_check"] = args.samples
    if args.jobs is not None:
        data["jobs"] = args.jobs
    return SuiteConfig.from_dict(data)


def cmd_run(args) -> int:
    cfg = build_config(args)
    results = run_suites(cfg)
    write_report(results, Path(cfg.output_path))
    for r, _ in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.check_id:36s} max_residual={r.max_residual:.3e}  tol={r.tolerance:.1e}  [{r.paper_anchor}]")
    failed = sum(not r.passed for r, _ in results)
    print(f"{len(results) - failed}/{len(results)} checks passed; report in {cfg.output_path}")
    return 0 if failed == 0 else 1


def cmd_describe(args) -> int:
    try:
        suite = resolve_suite(args.suite)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(ALL_SUITES)}") from None
    print(f"suite {suite}")
    for c in REGISTRY[suite]:
        print(f"  {c.check_id}")
        print(f"    anchor:    {c.anchor}")
        print(f"    checks:    {c.formula}")
        print(f"    samples:   {c.default_samples}   tolerance: {c.tolerance:g}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Numerical checks for the demi-distribution calculus.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run suites and write report.json / residuals.csv")
    r.add_argument("--config", help="JSON file with SuiteConfig fields")
    r.add_argument("--suite", action="append", help="suite to run (repeatable); default: config or all")
    r.add_argument("--seed", type=int)
    r.add_argument("--out", help="output directory")
    r.add_argument("--samples", type=int, help="samples per check (overrides per-check defaults)")
    r.add_argument("--jobs", type=int, help="worker processes")
    r.set_defaults(func=cmd_run)
    d = sub.add_parser("describe", help="list the checks and anchors of a suite")
    d.add_argument("suite")
    d.set_defaults(func=cmd_describe)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
