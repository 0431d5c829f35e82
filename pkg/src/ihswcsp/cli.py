"""Command-line front end: solve single instances, generate benchmark
families, run configuration matrices under timeouts, and render ratio tables.

Exit codes for ``solve``: 0 optimal, 2 timeout, 3 infeasible, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import multiprocessing
import sys
from pathlib import Path

from .driver import HV_STRATEGIES, RunReport, SolverConfig, solve
from .improve import STRATEGIES as CORE_STRATEGIES
from .wcsp_io import GeneratorParams, gen_scale_free, gen_uniform, parse_wcsp, write_wcsp

CSV_FIELDS = [
    "instance",
    "hv",
    "core",
    "merge",
    "disjoint",
    "status",
    "optimum",
    "lb",
    "ub",
    "iterations",
    "core_set_size",
    "hv_time_ms",
    "sat_time_ms",
    "improve_time_ms",
    "total_time_ms",
    "seed",
]


def _onoff(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ihswcsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance")
    p_solve.add_argument("--instance", required=True)
    p_solve.add_argument("--hv", choices=HV_STRATEGIES, default="lb")
    p_solve.add_argument("--core", choices=CORE_STRATEGIES, default="maximal")
    p_solve.add_argument("--merge", type=_onoff, default=False)
    p_solve.add_argument("--disjoint", type=_onoff, default=False)
    p_solve.add_argument("--merge-cap", type=int, default=4096)
    p_solve.add_argument("--timeout", type=float, default=3600.0)
    p_solve.add_argument("--seed", type=int, default=0)

    p_gen = sub.add_parser("generate", help="generate a random instance family")
    p_gen.add_argument("--class", dest="family", choices=("uniform", "scale-free"), required=True)
    p_gen.add_argument("--params", required=True, help="n,d,m,w,t")
    p_gen.add_argument("--count", type=int, required=True)
    p_gen.add_argument("--out", default=".")
    p_gen.add_argument("--seed", type=int, default=0, help="seed of the first instance")
    p_gen.add_argument("--name", default=None, help="file-name stem (defaults to the class)")

    p_bench = sub.add_parser("bench", help="run a configuration matrix over instances")
    p_bench.add_argument("--instance", required=True, help="a .wcsp file or a directory of them")
    p_bench.add_argument("--out", required=True, help="output CSV path")
    p_bench.add_argument("--matrix", default=None, help="e.g. hv=lb,ub;core=maximal;merge=on")
    p_bench.add_argument("--timeout", type=float, default=3600.0)
    p_bench.add_argument("--merge-cap", type=int, default=4096)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--jobs", type=int, default=1)

    p_table = sub.add_parser("table", help="render ratio tables from a bench CSV")
    p_table.add_argument("--csv", required=True)
    p_table.add_argument("--kind", choices=("time-ratio", "core-ratio", "speedup"), default="time-ratio")
    p_table.add_argument("--timeout", type=float, default=3600.0, help="per-run limit used for clamping")
    p_table.add_argument("--timeout-mode", choices=("clamp", "exclude"), default="clamp")
    p_table.add_argument("--out", default=None, help="also write the table to this path")
    return parser


# ---------------------------------------------------------------------------
# solve


def _cmd_solve(args) -> int:
    try:
        instance = parse_wcsp(Path(args.instance).read_text())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = SolverConfig(
        hv=args.hv,
        core=args.core,
        merge=args.merge,
        disjoint=args.disjoint,
        merge_cap=args.merge_cap,
        time_limit=args.timeout,
        seed=args.seed,
    )
    try:
        report = solve(instance, cfg)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for key, value in _report_fields(report).items():
        print(f"{key}={value}")
    return {"optimal": 0, "timeout": 2, "infeasible": 3}[report.status]


def _report_fields(report: RunReport) -> dict[str, object]:
    def fmt(x):
        return "" if x is None else x

    return {
        "status": report.status,
        "optimum": fmt(report.optimum),
        "lb": fmt(report.final_lb),
        "ub": fmt(report.final_ub),
        "iterations": report.iterations,
        "hv_calls": report.hv_calls,
        "sat_calls": report.sat_calls,
        "improve_probes": report.improve_probes,
        "core_set_size": report.core_set_size,
        "components": report.components,
        "hv_time_ms": round(report.hv_time * 1000),
        "sat_time_ms": round(report.sat_time * 1000),
        "improve_time_ms": round(report.improve_time * 1000),
        "total_time_ms": round(report.total_time * 1000),
    }


# ---------------------------------------------------------------------------
# generate


def _cmd_generate(args) -> int:
    try:
        n, d, m, w, t = (int(x) for x in args.params.split(","))
    except ValueError:
        print("error: --params must be five comma-separated integers n,d,m,w,t", file=sys.stderr)
        return 1
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    stem = args.name or args.family
    gen = gen_uniform if args.family == "uniform" else gen_scale_free
    for i in range(args.count):
        seed = args.seed + i
        try:
            instance = gen(GeneratorParams(n, d, m, w, t, seed))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        path = out_dir / f"{stem}_{seed}.wcsp"
        text = write_wcsp(instance).replace(instance.name, f"{stem}_{seed}", 1)
        path.write_text(text)
        print(path)
    return 0


# ---------------------------------------------------------------------------
# bench


def parse_matrix(spec: str | None) -> list[tuple[str, str, bool, bool]]:
    dims: dict[str, list[str]] = {
        "hv": list(HV_STRATEGIES),
        "core": list(CORE_STRATEGIES),
        "merge": ["on", "off"],
        "disjoint": ["off"],
    }
    if spec:
        for part in spec.split(";"):
            if "=" not in part:
                raise ValueError(f"bad matrix entry {part!r}")
            key, _, values = part.partition("=")
            key = key.strip()
            if key not in dims:
                raise ValueError(f"unknown matrix dimension {key!r}")
            dims[key] = [v.strip() for v in values.split(",") if v.strip()]
    for hv in dims["hv"]:
        if hv not in HV_STRATEGIES:
            raise ValueError(f"unknown hv strategy {hv!r}")
    for core in dims["core"]:
        if core not in CORE_STRATEGIES:
            raise ValueError(f"unknown core strategy {core!r}")
    for key in ("merge", "disjoint"):
        for v in dims[key]:
            if v not in ("on", "off"):
                raise ValueError(f"{key} must be on or off, got {v!r}")
    return [
        (hv, core, merge == "on", disjoint == "on")
        for hv in dims["hv"]
        for core in dims["core"]
        for merge in dims["merge"]
        for disjoint in dims["disjoint"]
    ]


def _bench_one(task: tuple) -> dict[str, object]:
    path, hv, core, merge, disjoint, merge_cap, timeout, seed = task
    name = Path(path).stem
    row: dict[str, object] = {
        "instance": name,
        "hv": hv,
        "core": core,
        "merge": "on" if merge else "off",
        "disjoint": "on" if disjoint else "off",
        "status": "error",
        "optimum": "",
        "lb": "",
        "ub": "",
        "iterations": "",
        "core_set_size": "",
        "hv_time_ms": "",
        "sat_time_ms": "",
        "improve_time_ms": "",
        "total_time_ms": "",
        "seed": seed,
    }
    try:
        instance = parse_wcsp(Path(path).read_text())
        cfg = SolverConfig(
            hv=hv,
            core=core,
            merge=merge,
            disjoint=disjoint,
            merge_cap=merge_cap,
            time_limit=timeout,
            seed=seed,
        )
        report = solve(instance, cfg)
    except Exception:  # noqa: BLE001 - a failed run must not abort the batch
        return row
    row.update(
        status=report.status,
        optimum="" if report.optimum is None else report.optimum,
        lb="" if report.final_lb is None else report.final_lb,
        ub="" if report.final_ub is None else report.final_ub,
        iterations=report.iterations,
        core_set_size=report.core_set_size,
        hv_time_ms=round(report.hv_time * 1000),
        sat_time_ms=round(report.sat_time * 1000),
        improve_time_ms=round(report.improve_time * 1000),
        total_time_ms=round(report.total_time * 1000),
    )
    return row


def _cmd_bench(args) -> int:
    root = Path(args.instance)
    if root.is_dir():
        paths = sorted(str(p) for p in root.glob("*.wcsp"))
    elif root.is_file():
        paths = [str(root)]
    else:
        print(f"error: no such instance path {root}", file=sys.stderr)
        return 1
    if not paths:
        print(f"error: no .wcsp files under {root}", file=sys.stderr)
        return 1
    try:
        matrix = parse_matrix(args.matrix)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    tasks = [
        (path, hv, core, merge, disjoint, args.merge_cap, args.timeout, args.seed)
        for path in paths
        for hv, core, merge, disjoint in matrix
    ]
    if args.jobs > 1:
        with multiprocessing.Pool(args.jobs) as pool:
            rows = pool.map(_bench_one, tasks)
    else:
        rows = [_bench_one(t) for t in tasks]
    rows.sort(key=lambda r: (r["instance"], r["hv"], r["core"], r["merge"], r["disjoint"]))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


# ---------------------------------------------------------------------------
# table


def _benchmark_of(instance: str) -> str:
    head = instance.rpartition("_")[0]
    return head if head else instance


def _config_key(row: dict[str, str]) -> tuple[str, str, str, str]:
    return (row["hv"], row["core"], row["merge"], row["disjoint"])


def _config_label(cfg: tuple[str, str, str, str]) -> str:
    hv, core, merge, disjoint = cfg
    label = core
    if merge == "on":
        label += "+merge"
    if disjoint == "on":
        label += "+disjoint"
    return label


def render_table(
    rows: list[dict[str, str]], kind: str, timeout: float, timeout_mode: str
) -> str:
    """Aggregate bench rows into per-benchmark ratio tables.

    time-ratio: mean solving time per config over the benchmark's instances
    (unsolved runs clamp to the time limit or are excluded per mode), each
    cell divided by the benchmark's best mean, with the unsolved count in
    parentheses.  core-ratio: the same over the core-set size.  speedup: the
    best merge-off mean divided by the best merge-on mean.
    """
    benchmarks: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        benchmarks.setdefault(_benchmark_of(row["instance"]), []).append(row)

    out: list[str] = []
    for bench in sorted(benchmarks):
        brows = benchmarks[bench]
        if kind == "speedup":
            out.extend(_render_speedup(bench, brows, timeout, timeout_mode))
            continue
        stats: dict[tuple[str, str, str, str], tuple[float | None, int]] = {}
        for cfg, cfg_rows in _group_by_config(brows).items():
            stats[cfg] = _aggregate(cfg_rows, kind, timeout, timeout_mode)
        means = [m for m, _ in stats.values() if m is not None]
        best = min(means) if means else None
        hvs = sorted({cfg[0] for cfg in stats}, key=HV_STRATEGIES.index)
        row_keys = sorted({(cfg[1], cfg[2], cfg[3]) for cfg in stats})
        out.append(f"# benchmark: {bench}  kind={kind}  timeout-mode={timeout_mode}")
        header = ["config".ljust(24)] + [hv.rjust(14) for hv in hvs]
        out.append(" ".join(header))
        for core, merge, disjoint in row_keys:
            label = _config_label(("", core, merge, disjoint))
            cells = [label.ljust(24)]
            for hv in hvs:
                cfg = (hv, core, merge, disjoint)
                if cfg not in stats:
                    cells.append("-".rjust(14))
                    continue
                mean, unsolved = stats[cfg]
                if mean is None or best is None:
                    cells.append(f"- ({unsolved})".rjust(14))
                else:
                    if mean == best:
                        ratio = 1.0
                    elif best > 0:
                        ratio = mean / best
                    else:
                        ratio = float("inf")
                    cells.append(f"{ratio:.2f} ({unsolved})".rjust(14))
            out.append(" ".join(cells))
        out.append("")
    return "\n".join(out)


def _group_by_config(rows: list[dict[str, str]]):
    grouped: dict[tuple[str, str, str, str], list[dict[str, str]]] = {}
    for row in rows:
        grouped.setdefault(_config_key(row), []).append(row)
    return grouped


def _aggregate(
    rows: list[dict[str, str]], kind: str, timeout: float, timeout_mode: str
) -> tuple[float | None, int]:
    values: list[float] = []
    unsolved = 0
    for row in rows:
        solved = row["status"] == "optimal"
        if not solved:
            unsolved += 1
        if kind == "core-ratio":
            if row["core_set_size"] != "":
                values.append(float(row["core_set_size"]))
            continue
        if solved:
            values.append(float(row["total_time_ms"]) / 1000.0)
        elif timeout_mode == "clamp" and row["status"] == "timeout":
            values.append(timeout)
    if not values:
        return None, unsolved
    return sum(values) / len(values), unsolved


def _render_speedup(
    bench: str, rows: list[dict[str, str]], timeout: float, timeout_mode: str
) -> list[str]:
    best: dict[str, float] = {}
    for merge in ("on", "off"):
        means = [
            _aggregate(cfg_rows, "time-ratio", timeout, timeout_mode)[0]
            for cfg, cfg_rows in _group_by_config(rows).items()
            if cfg[2] == merge
        ]
        means = [m for m in means if m is not None]
        if means:
            best[merge] = min(means)
    out = [f"# benchmark: {bench}  kind=speedup  timeout-mode={timeout_mode}"]
    if "on" in best and "off" in best and best["on"] > 0:
        out.append(f"speedup = {best['off'] / best['on']:.2f}  (best-off {best['off']:.3f}s / best-on {best['on']:.3f}s)")
    else:
        out.append("speedup = -  (needs solved runs with merge on and off)")
    out.append("")
    return out


def _cmd_table(args) -> int:
    path = Path(args.csv)
    try:
        with path.open() as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or set(CSV_FIELDS) - set(reader.fieldnames):
                print("error: CSV schema mismatch", file=sys.stderr)
                return 1
            rows = list(reader)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = render_table(rows, args.kind, args.timeout, args.timeout_mode)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return 0


# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if args.command == "solve":
        return _cmd_solve(args)
    if args.command == "generate":
        return _cmd_generate(args)
    if args.command == "bench":
        return _cmd_bench(args)
    return _cmd_table(args)


if __name__ == "__main__":
    sys.exit(main())
