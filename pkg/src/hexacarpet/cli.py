"""Command-line front end.

One subcommand per experiment; each writes plain CSV/JSON files plus a
``manifest.json`` recording the command, its configuration, library versions
and wall time.  ``hexacarpet rerun manifest.json`` repeats a run from its
manifest.

Exit codes: 0 success, 1 a checked invariant failed, 2 resource cap
exceeded, 3 checksum failure, 4 eigensolver did not converge, 5 bad input,
64 command-line usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import platform
import sys
import time
from pathlib import Path
from typing import Callable

import numpy as np

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CAP = 2
EXIT_CHECKSUM = 3
EXIT_CONVERGENCE = 4
EXIT_INPUT = 5
EXIT_USAGE = 64

OUT_ENV = "HEXACARPET_OUT"

log = logging.getLogger("hexacarpet")


class InvariantFailure(RuntimeError):
    pass


def _fmt(x) -> str:
    # 12 significant digits: stable across runs, far below any tolerance in use
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _versions() -> dict:
    import scipy

    from . import __version__, _kernels

    return {
        "hexacarpet": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "kernel_backend": _kernels.BACKEND,
    }


# -- subcommands ---------------------------------------------------------------


def cmd_build(args, out: Path) -> list[str]:
    from .graphs import build_geometry_graph, build_word_graph, census, compare_graphs, write_edge_list

    written = []
    graphs = {}
    if args.source in ("words", "both"):
        graphs["words"] = build_word_graph(args.level)
    if args.source in ("geometry", "both"):
        graphs["geometry"] = build_geometry_graph(args.level)
    for name, g in graphs.items():
        path = out / f"G{args.level}_{name}.edges"
        write_edge_list(g, path)
        written.append(path.name)
        c = census(g)
        print(f"{name}: {g.vertex_count} vertices, {g.edge_count} edges")
        bad = [k for k, ok in c.matches.items() if not ok]
        if bad:
            raise InvariantFailure(f"{name} census mismatch: {', '.join(bad)}")
    if args.source == "both":
        rep = compare_graphs(graphs["words"], graphs["geometry"])
        if not rep.equal_edge_sets:
            for u, v, side in rep.mismatches[:20]:
                print(f"  {u} {v} ({side})")
            raise InvariantFailure(f"isomorphism: FAILED ({len(rep.mismatches)} mismatched edges)")
        print("isomorphism: OK")
    return written


def cmd_check(args, out: Path) -> list[str]:
    from .graphs import census, read_edge_list

    g = read_edge_list(args.path)
    c = census(g)
    print(f"level {g.n}: {g.edge_count} edges, checksum OK")
    bad = [k for k, ok in c.matches.items() if not ok]
    if bad:
        raise InvariantFailure(f"census mismatch: {', '.join(bad)}")
    return []


def cmd_distances(args, out: Path) -> list[str]:
    from .metrics import conjecture_tables, pinn_formula

    reps = conjecture_tables(args.max_level, mode=args.mode, threads=args.threads,
                             exhaustive_max=args.exhaustive_max)
    by_n = {r.n: r for r in reps}
    _write_csv(
        out / "radius_relation.csv",
        ["n", "R(G_n+1)", "PInn_n+1", "D(G_n)", "Dadj_n"],
        [(n, by_n[n + 1].radius, pinn_formula(n + 1), by_n[n].diameter, by_n[n].dadj)
         for n in sorted(by_n) if n + 1 in by_n],
    )
    _write_csv(
        out / "diameter_relation.csv",
        ["n", "D(G_n)", "2R(G_n)", "Radj_n"],
        [(r.n, r.diameter, 2 * r.radius, r.radj) for r in reps],
    )
    keys = sorted({k for r in reps for k in r.conjecture_residuals})
    _write_csv(
        out / "distances.csv",
        ["n", "radius", "diameter", "central", "peripheral", "inn", "out", "pinn_measured", "mode", "bfs"]
        + [f"res_{k}" for k in keys],
        [(r.n, r.radius, r.diameter, r.central_count, r.peripheral_count, r.inn_len, r.out_len,
          r.pinn_len, r.mode, r.bfs_count, *[r.conjecture_residuals.get(k) for k in keys]) for r in reps],
    )
    for r in reps:
        print(f"n={r.n} R={r.radius} D={r.diameter} ({r.mode}, {r.bfs_count} BFS)")
    nonzero = [(r.n, k, v) for r in reps for k, v in r.conjecture_residuals.items() if v]
    if nonzero:
        raise InvariantFailure(f"nonzero residuals: {nonzero}")
    print("residuals: all zero")
    return ["radius_relation.csv", "diameter_relation.csv", "distances.csv"]


def cmd_spectrum(args, out: Path) -> list[str]:
    from .spectral import renormalized_spectrum

    rep = renormalized_spectrum(args.level, args.k, tol=args.tol, seed=args.seed)
    _write_csv(
        out / f"spectrum_n{args.level}.csv",
        ["j", "lambda", "renormalized", "residual"],
        [(j, lam, r, res) for j, (lam, r, res) in
         enumerate(zip(rep.eigenvalues, rep.renormalized, rep.residual_norms), start=1)],
    )
    d = rep.to_dict()
    d.pop("residual_norms")
    d["eigenvalues"] = [_fmt(v) for v in rep.eigenvalues]
    d["renormalized"] = [_fmt(v) for v in rep.renormalized]
    d["counting_gaps"] = [[_fmt(a), _fmt(b)] for a, b in rep.counting_gaps]
    _write_json(out / f"spectrum_n{args.level}.json", d)
    if len(rep.renormalized) >= 4:
        print(f"lambda_4/lambda_2 = {rep.renormalized[3]:.4f}")
    for a, b in rep.counting_gaps:
        print(f"gap ({a:.4f}, {b:.4f}) ratio {b / a:.3f}")
    return [f"spectrum_n{args.level}.csv", f"spectrum_n{args.level}.json"]


def cmd_rho(args, out: Path) -> list[str]:
    from .spectral import rho_estimates

    est = rho_estimates(args.max_level, args.k, tol=args.tol, seed=args.seed)
    cols = list(range(1, args.max_level))
    rows = [[j] + [est.table.get(j, {}).get(n) for n in cols] for j in range(1, args.k + 1)]
    _write_csv(out / "rho.csv", ["j"] + [f"n={n}" for n in cols], rows)
    _write_json(out / "rho.json", {
        "headline_rho": _fmt(est.headline),
        "tau": _fmt(est.tau),
        "d_s": _fmt(est.d_s),
        "levels": cols,
        "k": args.k,
        "label": "evidence",
    })
    print(f"rho = {est.headline:.4f}, tau = {est.tau:.4f}, d_s = {est.d_s:.4f}")
    return ["rho.csv", "rho.json"]


def cmd_coords(args, out: Path) -> list[str]:
    from .spectral import eigenmap_coords
    from .words import format_word, index_word

    idx = [int(s) for s in args.indices.split(",")]
    xy = eigenmap_coords(args.level, idx, tol=args.tol, seed=args.seed)
    name = f"coords_n{args.level}_{'_'.join(map(str, idx))}.csv"
    _write_csv(
        out / name,
        ["word"] + [f"phi_{i}" for i in idx],
        ([format_word(index_word(v, args.level)), *row] for v, row in enumerate(xy.tolist())),
    )
    print(f"{xy.shape[0]} rows x {xy.shape[1]} columns")
    return [name]


def cmd_walk(args, out: Path) -> list[str]:
    from .graphs import build_word_graph
    from .walks import default_start_vertices, estimate_ds, exact_return_probability, monte_carlo_walk

    g = build_word_graph(args.level)
    starts = default_start_vertices(g)
    chosen = list(starts) if args.start == "both" else [args.start]
    written, summary = [], {}
    for name in chosen:
        x = starts[name]
        runs = []
        if args.method in ("exact", "both"):
            runs.append(exact_return_probability(g, x, args.t_max))
        if args.method in ("mc", "both"):
            runs.append(monte_carlo_walk(g, x, args.t_max, args.trials, seed=args.seed, threads=args.threads))
        for st in runs:
            tag = "exact" if st.method == "exact" else "mc"
            lo, hi = args.fit_window or (min(10, args.t_max), args.t_max)
            try:
                estimate_ds(st, (lo, hi))
            except ValueError as exc:
                log.warning("no d_s estimate: %s", exc)
            fname = f"walk_n{args.level}_{name}_{tag}.csv"
            _write_csv(out / fname, ["t", "p_t", "stderr"], st.csv_rows())
            written.append(fname)
            summary[f"{name}/{tag}"] = {
                "vertex": g.word(x),
                "d_s_estimate": _fmt(st.d_s_estimate),
                "fit_window": [lo, hi],
                "label": "evidence",
            }
            if st.d_s_estimate is not None:
                print(f"{name} ({g.word(x)}) {tag}: d_s ~ {st.d_s_estimate:.3f} [evidence]")
    _write_json(out / f"walk_n{args.level}.json", summary)
    return written + [f"walk_n{args.level}.json"]


# -- plumbing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(s: str) -> float:
    v = float(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _window(s: str) -> tuple[int, int]:
    a, b = s.split(",")
    return int(a), int(b)


COMMANDS: dict[str, Callable] = {
    "build": cmd_build,
    "check": cmd_check,
    "distances": cmd_distances,
    "spectrum": cmd_spectrum,
    "rho": cmd_rho,
    "coords": cmd_coords,
    "walk": cmd_walk,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hexacarpet", description="Hexacarpet graph experiments.")
    p.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or the current directory)")
    p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("build", help="build G_n and write its edge list")
    s.add_argument("--level", type=_positive_int, required=True)
    s.add_argument("--source", choices=["words", "geometry", "both"], default="words")

    s = sub.add_parser("check", help="re-read an edge list, verifying checksum and counts")
    s.add_argument("path")

    s = sub.add_parser("distances", help="radius/diameter tables with conjecture residuals")
    s.add_argument("--max-level", type=_positive_int, required=True)
    s.add_argument("--mode", choices=["auto", "exhaustive", "bounded"], default="auto")
    s.add_argument("--exhaustive-max", type=_positive_int, default=6)

    s = sub.add_parser("spectrum", help="smallest Laplacian eigenvalues, renormalized")
    s.add_argument("--level", type=_positive_int, required=True)
    s.add_argument("--k", type=_positive_int, default=20)
    s.add_argument("--tol", type=_positive_float, default=1e-10)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("rho", help="resistance scaling estimates across levels")
    s.add_argument("--max-level", type=_positive_int, required=True)
    s.add_argument("--k", type=_positive_int, default=20)
    s.add_argument("--tol", type=_positive_float, default=1e-10)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("coords", help="eigenfunction coordinates for every vertex")
    s.add_argument("--level", type=_positive_int, required=True)
    s.add_argument("--indices", default="2,3")
    s.add_argument("--tol", type=_positive_float, default=1e-10)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("walk", help="return probabilities of the simple random walk")
    s.add_argument("--level", type=_positive_int, required=True)
    s.add_argument("--t-max", type=_positive_int, default=1000)
    s.add_argument("--trials", type=_positive_int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--start", choices=["boundary", "interior", "both"], default="both")
    s.add_argument("--method", choices=["exact", "mc", "both"], default="exact")
    s.add_argument("--fit-window", type=_window, default=None, metavar="LO,HI")

    s = sub.add_parser("rerun", help="repeat a run from its manifest.json")
    s.add_argument("manifest")
    return p


def _run(command: str, config: dict, out: Path) -> int:
    from .geometry import GeometryError
    from .graphs import ChecksumError, ResourceCapError
    from .spectral import ConvergenceError
    from .words import WordError

    out.mkdir(parents=True, exist_ok=True)
    args = argparse.Namespace(**config)
    t0 = time.perf_counter()
    code = EXIT_OK
    files: list[str] = []
    try:
        files = COMMANDS[command](args, out)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        code = EXIT_CAP
    except ChecksumError as exc:
        print(f"checksum failure: {exc}", file=sys.stderr)
        code = EXIT_CHECKSUM
    except ConvergenceError as exc:
        print(f"eigensolver: {exc}", file=sys.stderr)
        code = EXIT_CONVERGENCE
    except InvariantFailure as exc:
        print(str(exc), file=sys.stderr)
        code = EXIT_INVARIANT
    except (WordError, GeometryError, ValueError, FileNotFoundError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    manifest = {
        "command": command,
        "config": config,
        "versions": _versions(),
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "exit_code": code,
        "outputs": files,
    }
    if command != "check":
        _write_json(out / "manifest.json", manifest)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Path(args.out or os.environ.get(OUT_ENV) or ".")
    if args.command == "rerun":
        try:
            m = json.loads(Path(args.manifest).read_text())
            command, config = m["command"], m["config"]
        except (OSError, ValueError, KeyError) as exc:
            print(f"bad manifest: {exc}", file=sys.stderr)
            return EXIT_INPUT
        if command not in COMMANDS:
            print(f"bad manifest: unknown command {command!r}", file=sys.stderr)
            return EXIT_INPUT
        if "fit_window" in config and config["fit_window"] is not None:
            config["fit_window"] = tuple(config["fit_window"])
        return _run(command, config, out)
    config = {k: v for k, v in vars(args).items() if k not in ("command", "out", "verbose")}
    return _run(args.command, config, out)


if __name__ == "__main__":
    sys.exit(main())
