"""Command-line interface: ``hypercompress <command> [flags]``."""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .annealing import ChainConfig, Schedule, run_all_restarts, select_best
from .entropy import ObjectiveKind, check_objective
from .evaluation import adjusted_rand_index, contingency_table, multi_projection, simple_projection
from .generator import HEATMAP_COLUMNS, PlantedConfig, format_row, generate, read_heatmap, sweep_grid
from .io import (
    FormatError,
    dumps_manifest,
    file_sha256,
    format_edge_list,
    format_label_tsv,
    load_manifest,
    read_edge_list,
    read_label_tsv,
    write_outputs,
)
from .mdl import LN2, mdl_sweep

OBJECTIVES = [k.value for k in ObjectiveKind]


class CliError(Exception):
    pass


def _add_chain_flags(p: argparse.ArgumentParser, objective_default: str = "degree-corrected") -> None:
    p.add_argument("--steps", type=int, default=20000, help="proposals per chain (default 20000)")
    p.add_argument("--restarts", type=int, default=1, help="independent chains; the lowest-entropy one wins")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objective", choices=OBJECTIVES, default=objective_default)
    p.add_argument("--schedule", choices=["constant", "geometric", "linear"], default="geometric")
    p.add_argument("--beta0", type=float, default=0.1, help="initial inverse temperature (constant: the value)")
    p.add_argument("--beta-final", type=float, default=10.0, help="inverse temperature at the last step")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel processes for restarts (default: $HYPERCOMPRESS_WORKERS or 1)")


def _schedule(args) -> Schedule:
    if args.schedule == "constant":
        return Schedule.constant(args.beta0)
    if args.schedule == "linear":
        return Schedule.linear(args.beta0, args.beta_final, args.steps)
    return Schedule.geometric_to(args.beta0, args.beta_final, args.steps)


def _check_chain_args(args) -> None:
    if args.steps < 0:
        raise CliError("--steps must be nonnegative")
    if args.restarts < 1:
        raise CliError("--restarts must be at least 1")
    if args.beta0 < 0 or args.beta_final < 0:
        raise CliError("inverse temperatures must be nonnegative")
    if args.schedule == "geometric" and args.beta0 == 0:
        raise CliError("geometric schedule needs --beta0 > 0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypercompress", description="Hypergraph clustering by compression.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster an edge-list hypergraph")
    p.add_argument("--input", help="edge-list file")
    p.add_argument("--clusters", "-m", type=int, help="number of cluster labels")
    _add_chain_flags(p)
    p.add_argument("--out-prefix", help="writes <prefix>.assignments.tsv and <prefix>.manifest.json")
    p.add_argument("--trace", action="store_true", help="also write <prefix>.trace.csv for the best chain")
    p.add_argument("--trace-every", type=int, default=100)
    p.add_argument("--dedupe", action="store_true", help="drop repeated hyperedges")
    p.add_argument("--allow-multi-inclusion", action="store_true", help="permit a vertex twice in one edge")
    p.add_argument("--universe", help="TSV whose first column lists vertex labels to include (e.g. a truth file)")
    p.add_argument("--manifest", help="rerun with the parameters stored in a manifest; explicit flags override")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("generate", help="sample a planted-partition hypergraph")
    p.add_argument("--n", type=int, default=200, help="vertices per block")
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--p3", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="edge-list path; truth goes to <out>.truth.tsv")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="mean-ARI heatmap over (p2, p3)")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--resolution", type=int, default=51)
    p.add_argument("--graphs-per-cell", type=int, default=5)
    p.add_argument("--projection", choices=["none", "simple", "multi"], default="none")
    _add_chain_flags(p)
    p.set_defaults(restarts=20)
    p.add_argument("--out", required=True, help="heatmap CSV; existing cells are kept and skipped")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mdl", help="description length for a range of cluster counts")
    p.add_argument("--input", required=True)
    p.add_argument("--m-min", type=int, default=1)
    p.add_argument("--m-max", type=int, required=True)
    _add_chain_flags(p)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--dedupe", action="store_true")
    p.set_defaults(func=cmd_mdl)

    p = sub.add_parser("project", help="clique projection of a hypergraph")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["simple", "multi"], required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("score", help="ARI and contingency table of two assignment files")
    p.add_argument("--truth", required=True)
    p.add_argument("--predicted", required=True)
    p.set_defaults(func=cmd_score)
    return parser


_MANIFEST_FLAGS = {
    "input": ("input", "path"),
    "clusters": ("m",),
    "steps": ("steps",),
    "restarts": ("restarts",),
    "seed": ("seed",),
    "objective": ("objective",),
    "schedule": ("cli", "schedule"),
    "beta0": ("cli", "beta0"),
    "beta_final": ("cli", "beta_final"),
    "dedupe": ("dedupe",),
    "allow_multi_inclusion": ("allow_multi_inclusion",),
    "universe": ("universe",),
}


def _apply_manifest(args, argv) -> None:
    manifest = load_manifest(args.manifest)
    explicit = {a.split("=")[0] for a in argv if a.startswith("-")}
    for dest, path in _MANIFEST_FLAGS.items():
        flag = "--" + dest.replace("_", "-")
        if flag in explicit or (dest == "clusters" and "-m" in explicit):
            continue
        value = manifest
        for key in path:
            value = value[key]
        setattr(args, dest, value)


def cmd_cluster(args, argv) -> int:
    if args.manifest:
        _apply_manifest(args, argv)
    if not args.input:
        raise CliError("--input is required")
    if args.clusters is None or args.clusters < 1:
        raise CliError("--clusters must be a positive integer")
    if not args.out_prefix:
        raise CliError("--out-prefix is required")
    _check_chain_args(args)
    universe = [lab for lab, _ in read_label_tsv(args.universe)] if args.universe else []
    data = read_edge_list(args.input, allow_multi_inclusion=args.allow_multi_inclusion,
                          dedupe=args.dedupe, universe=universe)
    H = data.hypergraph
    kind = ObjectiveKind.parse(args.objective)
    try:
        check_objective(H, kind)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    schedule = _schedule(args)
    config = ChainConfig(m=args.clusters, steps=args.steps, seed=args.seed, objective=kind,
                         schedule=schedule, trace_every=args.trace_every if args.trace else 0)
    started = time.perf_counter()
    results = run_all_restarts(H, config, args.restarts, workers=args.workers)
    best = select_best(results)
    wall = time.perf_counter() - started

    manifest = {
        "version": __version__,
        "command": "cluster",
        "input": {"path": str(args.input), "sha256": file_sha256(args.input)},
        "objective": kind.value,
        "m": args.clusters,
        "steps": args.steps,
        "restarts": args.restarts,
        "seed": args.seed,
        "schedule": schedule.to_dict(),
        "cli": {"schedule": args.schedule, "beta0": args.beta0, "beta_final": args.beta_final},
        "dedupe": args.dedupe,
        "allow_multi_inclusion": args.allow_multi_inclusion,
        "universe": args.universe,
        "rng": "PCG64(SeedSequence(seed, spawn_key=(restart,)))",
        "best_restart": best.stream,
        "best_ln_z_nats": best.best_ln_z,
        "best_ln_z_bits": best.best_ln_z / LN2,
        "restart_best_ln_z_nats": [r.best_ln_z for r in results],
        "accepted_count": best.accepted_count,
        "wall_time_s": wall,
        "vertex_labels": data.labels,
    }
    prefix = args.out_prefix
    files = {
        f"{prefix}.assignments.tsv": format_label_tsv(data.labels, best.best_clustering.labels),
        f"{prefix}.manifest.json": dumps_manifest(manifest),
    }
    if args.trace:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "current_ln_z", "best_ln_z"])
        for t, cur, bst in best.trace or []:
            w.writerow([t, repr(cur), repr(bst)])
        files[f"{prefix}.trace.csv"] = buf.getvalue()
    write_outputs(files)
    print(f"best ln Z = {best.best_ln_z!r} nats ({best.best_ln_z / LN2!r} bits), restart {best.stream}")
    return 0


def cmd_generate(args, argv) -> int:
    try:
        config = PlantedConfig(args.n, args.p2, args.p3, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    H, truth = generate(config)
    labels = [str(v) for v in range(H.n)]
    write_outputs({
        args.out: format_edge_list(H, labels),
        f"{args.out}.truth.tsv": format_label_tsv(labels, truth.labels),
    })
    return 0


def cmd_sweep(args, argv) -> int:
    _check_chain_args(args)
    if args.resolution < 2:
        raise CliError("--resolution must be at least 2")
    if args.graphs_per_cell < 1:
        raise CliError("--graphs-per-cell must be at least 1")
    try:
        PlantedConfig(args.n)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    out = Path(args.out)
    done = []
    if out.exists() and out.stat().st_size > 0:
        done = [(r["p2"], r["p3"]) for r in read_heatmap(out)]
    else:
        with open(out, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerow(HEATMAP_COLUMNS)
    config = ChainConfig(m=2, steps=args.steps, seed=args.seed, objective=args.objective, schedule=_schedule(args))

    def append(row):
        with open(out, "a", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerow(format_row(row))

    projection = None if args.projection == "none" else args.projection
    rows = sweep_grid(args.n, args.resolution, args.graphs_per_cell, config, args.restarts,
                      seed=args.seed, projection=projection, skip=done, on_row=append, workers=args.workers)
    print(f"{len(rows)} cells computed, {len(done)} already present")
    return 0


def cmd_mdl(args, argv) -> int:
    _check_chain_args(args)
    if args.m_min < 1 or args.m_max < args.m_min:
        raise CliError("need 1 <= --m-min <= --m-max")
    H = read_edge_list(args.input, dedupe=args.dedupe).hypergraph
    kind = ObjectiveKind.parse(args.objective)
    try:
        check_objective(H, kind)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    config = ChainConfig(m=1, steps=args.steps, seed=args.seed, objective=kind, schedule=_schedule(args))
    report = mdl_sweep(H, (args.m_min, args.m_max), config, args.restarts, workers=args.workers)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "partition_bits", "conditional_bits", "total_bits"])
    for rec in report.records:
        w.writerow([rec.m, repr(rec.partition_bits), repr(rec.conditional_bits), repr(rec.total_bits)])
    if args.out:
        write_outputs({args.out: buf.getvalue()})
    else:
        sys.stdout.write(buf.getvalue())
    print(f"m* = {report.m_star}")
    print(report.caveat)
    return 0


def cmd_project(args, argv) -> int:
    data = read_edge_list(args.input)
    proj = simple_projection(data.hypergraph) if args.mode == "simple" else multi_projection(data.hypergraph)
    write_outputs({args.out: format_edge_list(proj, data.labels)})
    return 0


def cmd_score(args, argv) -> int:
    truth = read_label_tsv(args.truth)
    predicted = read_label_tsv(args.predicted)
    if len(truth) != len(predicted):
        raise CliError(f"length mismatch: {len(truth)} truth rows vs {len(predicted)} predicted rows")
    t_map = dict(truth)
    p_map = dict(predicted)
    if len(t_map) != len(truth) or len(p_map) != len(predicted):
        raise CliError("duplicate vertex label in an assignment file")
    if set(t_map) != set(p_map):
        raise CliError("truth and predicted files label different vertex sets")
    order = [lab for lab, _ in truth]
    t = [t_map[lab] for lab in order]
    p = [p_map[lab] for lab in order]
    ari = adjusted_rand_index(t, p)
    table, rows, cols = contingency_table(t, p)
    print(f"ARI\t{ari!r}")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["truth\\predicted"] + cols)
    for r, row in zip(rows, table.tolist()):
        w.writerow([r] + row)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (CliError, FormatError, ValueError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"hypercompress {args.command}: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
