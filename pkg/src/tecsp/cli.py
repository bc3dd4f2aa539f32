"""Command-line driver: generate, solve, verify, report."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

from .copar import dimension
from .corpus import complete, cpci_graph, cci_graph, cycle, random_2ec_graph
from .graph import Graph, is_two_edge_connected
from .instances import (
    Complete,
    InstanceFormatError,
    InstanceSpec,
    KnCycles,
    SparsifiedKnn,
    generate,
    read_instance,
    write_instance,
)
from .oracle import (
    BudgetExceeded,
    LATTICE_BUDGET,
    affine_dimension,
    check_theorems,
    enumerate_2ec,
    lattice_report,
)
from .report import CSV_COLUMNS, ReportError, aggregate, read_records, render_svg, write_aggregate
from .rng import Xoshiro256, derive_seed
from .solver import VARIANTS, Model, ModelConfig, SeparationMode, Status, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2
EXIT_TIME_LIMIT = 3
TRIVIAL_RETRIES = 50


# ---------------------------------------------------------------- generate


def _kind_from_args(args) -> tuple[object, str]:
    if args.family == "knn":
        return SparsifiedKnn(args.n, args.k, args.alpha), f"knn-n{args.n}-k{args.k}-a{args.alpha:g}"
    if args.family == "kncycles":
        return KnCycles(args.ell), f"kncycles-l{args.ell}"
    return (
        Complete(args.n, args.weight_lo, args.weight_hi),
        f"complete-n{args.n}",
    )


def _is_trivial(g: Graph, w: list[int], time_limit: float) -> bool:
    rep = solve(g, w, ModelConfig(time_limit=time_limit))
    if rep.objective == 0:
        return True
    if len(rep.incumbent.edges) == g.m:
        return True
    return len(rep.incumbent.vertices) == g.n


def cmd_generate(args) -> int:
    kind, stem = _kind_from_args(args)
    os.makedirs(args.out, exist_ok=True)
    manifest = []
    for i in range(args.count):
        seed = derive_seed(args.seed, i)
        for attempt in range(TRIVIAL_RETRIES):
            spec = InstanceSpec(kind, seed)
            g, w = generate(spec)
            if not args.reject_trivial or not _is_trivial(g, w, args.time_limit):
                break
            seed = derive_seed(seed, attempt + 1)
        else:
            print(f"warning: instance {i} stayed trivial after {TRIVIAL_RETRIES} draws", file=sys.stderr)
        name = f"{stem}-{i:03d}.tecs"
        path = os.path.join(args.out, name)
        write_instance(path, g, w, comments=[json.dumps(spec.describe(), sort_keys=True)])
        manifest.append({"file": name, **spec.describe()})
        print(path)
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------- solve


def run_record(name: str, g: Graph, cfg: ModelConfig, rep) -> dict:
    cuts = rep.stats.cuts
    return {
        "instance": name,
        "n": g.n,
        "m": g.m,
        "dim": dimension(g),
        "model": cfg.model.value,
        "separation": cfg.separation.value,
        "objective": rep.objective,
        "bound": str(rep.dual_bound),
        "status": rep.status.value,
        "seconds": f"{rep.stats.seconds:.6f}",
        "nodes": rep.stats.nodes,
        "cuts_asym": cuts["asymmetric"],
        "cuts_conn": cuts["connectivity"],
        "cuts_cpc": cuts["coparallel"],
        "cuts_star": cuts["odd_star"],
    }


def cmd_solve(args) -> int:
    if args.all_variants:
        variants = VARIANTS
    else:
        variants = [(Model(args.model), SeparationMode(args.separation))]
    records = []
    code = EXIT_OK
    for path in sorted(args.instances):
        try:
            g, w = read_instance(path)
        except (OSError, UnicodeDecodeError, InstanceFormatError) as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_ERROR
        name = os.path.basename(path)
        for model, sep in variants:
            cfg = ModelConfig(
                model=model,
                separation=sep,
                time_limit=args.time_limit,
                cut_cap_per_round=args.cut_cap,
                seed=args.seed,
            )
            rep = solve(g, w, cfg)
            rec = run_record(name, g, cfg, rep)
            records.append(rec)
            if rep.status is Status.TIME_LIMIT:
                code = EXIT_TIME_LIMIT
    writer = csv.DictWriter(sys.stdout, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            w.writeheader()
            w.writerows(records)
    return code


# ---------------------------------------------------------------- verify


def default_corpus(random_count: int = 10, seed: int = 2024) -> list[tuple[str, Graph]]:
    graphs = [(f"C{n}", cycle(n)) for n in range(3, 9)]
    graphs += [(f"K{n}", complete(n)) for n in range(4, 8)]
    graphs += [("cci", cci_graph().graph), ("cpci", cpci_graph().graph)]
    rng = Xoshiro256(seed)
    while sum(1 for name, _ in graphs if name.startswith("random")) < random_count:
        g = random_2ec_graph(rng, rng.randint(5, 9), extra=rng.randint(0, 4))
        if dimension(g) <= 14 and g.m <= 16:
            graphs.append((f"random{len(graphs)}", g))
    return graphs


def cmd_verify(args) -> int:
    corpus = default_corpus(args.random, args.seed)
    for path in args.instances:
        try:
            g, _ = read_instance(path)
        except (OSError, InstanceFormatError) as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_ERROR
        corpus.append((os.path.basename(path), g))
    suites = [args.only] if args.only else ["dimension", "lattice", "facets"]
    failures = 0
    records = []
    for name, g in corpus:
        if not is_two_edge_connected(g):
            print(f"{name}: skipped (not 2-edge-connected)")
            continue
        try:
            vs = enumerate_2ec(g)
        except BudgetExceeded as exc:
            print(f"{name}: skipped ({exc})")
            continue
        if "dimension" in suites:
            d_aff, d_cp = affine_dimension(vs.vectors), dimension(g)
            ok = d_aff == d_cp
            failures += not ok
            print(f"{name}: dimension {'PASS' if ok else 'FAIL'} vertices={len(vs)} "
                  f"affine_dim={d_aff} |CP|={d_cp}")
            records.append({"graph": name, "suite": "dimension", "ok": ok,
                            "vertices": len(vs), "affine_dim": d_aff, "cp": d_cp})
        if "lattice" in suites:
            if g.m > LATTICE_BUDGET:
                print(f"{name}: lattice skipped (|E|={g.m} > {LATTICE_BUDGET})")
            else:
                rep = lattice_report(g)
                failures += not rep.ok
                print(f"{name}: lattice {'PASS' if rep.ok else 'FAIL'} feasible={rep.feasible} "
                      f"enumerated={rep.enumerated}")
                records.append({"graph": name, "suite": "lattice", "ok": rep.ok,
                                "extra": rep.extra[:5], "missing": rep.missing[:5]})
        if "facets" in suites:
            try:
                rep = check_theorems(g, vs=vs)
            except BudgetExceeded as exc:
                print(f"{name}: facets skipped ({exc})")
                continue
            for fam, res in rep.results.items():
                failures += not res.ok
                print(f"{name}: facets/{fam} {'PASS' if res.ok else 'FAIL'} checked={res.checked} "
                      f"facets={res.facets} skipped={res.skipped}")
                records.append({"graph": name, "suite": f"facets/{fam}", "ok": res.ok,
                                "checked": res.checked, "facets": res.facets,
                                "mismatches": res.mismatches[:5]})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(records, fh, indent=2, default=str)
            fh.write("\n")
    print(f"verify: {'all pass' if failures == 0 else f'{failures} failing checks'}")
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


# ---------------------------------------------------------------- report


def cmd_report(args) -> int:
    try:
        rows = read_records(args.csv)
        aggs = aggregate(rows, args.group_by)
    except (OSError, ReportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    label = "floor(dim / 10)" if args.group_by == "dim" else "n"
    with open(args.svg, "w") as fh:
        fh.write(render_svg(aggs, label))
    if args.table:
        write_aggregate(args.table, aggs)
    for a in aggs:
        med = "-" if a.median_seconds is None else f"{a.median_seconds:.3f}"
        print(f"group={a.group} {a.model}/{a.separation} runs={a.runs} finished={a.finished} median={med}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tecsp", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a batch of seeded instances")
    g.add_argument("family", choices=["knn", "kncycles", "complete"])
    g.add_argument("--n", type=int, default=150)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--alpha", type=float, default=0.8)
    g.add_argument("--ell", type=int, default=10)
    g.add_argument("--weight-lo", type=int, default=-10, help="complete graphs only")
    g.add_argument("--weight-hi", type=int, default=3, help="complete graphs only")
    g.add_argument("--count", type=_positive_int, default=15)
    g.add_argument("--seed", type=_u64, default=0)
    g.add_argument("--out", default="instances")
    g.add_argument("--reject-trivial", action="store_true",
                   help="redraw instances whose optimum is empty, all of G, or spanning")
    g.add_argument("--time-limit", type=_positive_float, default=60.0,
                   help="solve budget per triviality check")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve instances, print CSV records")
    s.add_argument("instances", nargs="+")
    s.add_argument("--model", choices=[m.value for m in Model], default="basic")
    s.add_argument("--separation", choices=[m.value for m in SeparationMode], default="integer")
    s.add_argument("--all-variants", action="store_true")
    s.add_argument("--time-limit", type=_positive_float, default=600.0)
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--cut-cap", type=_positive_int, default=20)
    s.add_argument("--csv", help="also write the records to this file")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run the brute-force theorem checks")
    v.add_argument("instances", nargs="*")
    v.add_argument("--only", choices=["dimension", "lattice", "facets"])
    v.add_argument("--random", type=int, default=10, help="number of random corpus graphs")
    v.add_argument("--seed", type=_u64, default=2024)
    v.add_argument("--json", help="write machine-readable results here")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="aggregate CSV records into an SVG plot")
    r.add_argument("csv", nargs="+")
    r.add_argument("--svg", default="report.svg")
    r.add_argument("--table", help="aggregated CSV output")
    r.add_argument("--group-by", choices=["dim", "n"], default="dim")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
