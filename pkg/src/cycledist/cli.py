"""Command-line front end: ``cycledist <subcommand> ...``.

Every subcommand accepts ``--config FILE`` with ``key = value`` lines; keys
are flag names (dashes or underscores) and explicit flags win. Commands that
write files also write a JSON manifest listing each output with its sha256.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from collections import Counter
from dataclasses import asdict
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Sequence

import numpy as np

from . import construct as cons
from . import sim
from .errors import CycleDistError, InvalidInputError
from .ets import (SET_TAGS, classify, enumerate_ets, turan_bruteforce, turan_exact, turan_regime,
                  turan_value)
from .graphs import format_edge_line, parse_pattern, read_graphs, to_graph6
from .qc import FIXTURES, format_exponent_matrix, girth_qc, lift, load_fixture, read_exponent_matrix
from .statespace import system_radius
from .tables import Fig5Config, fig5, fig5_single, table1, table2, table34
from .tanner import (TannerGraph, cycle_pairs_sharing_nodes, ets_of_variables, format_alist, read_alist,
                     six_cycles, tanner_girth)

FIG5_FILES = {tag: f"fig5_{tag.replace('-', '_')}.csv" for tag in SET_TAGS}


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def load_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidInputError(f"{path}:{n}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.lstrip("-").replace("-", "_")] = v
    return out


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(path: Path, command: str, args: argparse.Namespace, files: Sequence[Path]) -> Path:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
    manifest = {
        "command": command,
        "parameters": params,
        "seed": params.get("seed"),
        "version": _version(),
        "outputs": {str(f): _sha256(f) for f in files},
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return path


def _write_csv(path: Path, rows: list[dict], columns: Sequence[str] | None = None) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = list(columns or (rows[0].keys() if rows else []))
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns)
        w.writeheader()
        for r in rows:
            w.writerow({k: (f"{v:.10g}" if isinstance(v, float) else v) for k, v in r.items()})
    return path


def _emit(args: argparse.Namespace, files: list[Path]) -> None:
    if getattr(args, "manifest", None):
        write_manifest(Path(args.manifest), args.command, args, files)


# ---------------------------------------------------------------- code loading


def _load_code(args: argparse.Namespace) -> tuple[TannerGraph, object]:
    """(Tanner graph, exponent matrix or None) from --fixture, --expmat or --alist."""
    if getattr(args, "fixture", None):
        e = load_fixture(args.fixture)
        return lift(e), e
    if getattr(args, "expmat", None):
        e = read_exponent_matrix(args.expmat)
        return lift(e), e
    if getattr(args, "alist", None):
        return read_alist(args.alist), None
    raise InvalidInputError("give one of --fixture, --expmat or --alist")


def _add_code_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fixture", choices=sorted(FIXTURES), help="bundled exponent matrix")
    p.add_argument("--expmat", help="exponent-matrix text file")
    p.add_argument("--alist", help="alist parity-check file")


def _out_text(path: str | None, text: str) -> list[Path]:
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
        return [Path(path)]
    sys.stdout.write(text)
    return []


# ---------------------------------------------------------------- subcommands


def _build(args: argparse.Namespace):
    if args.type in ("qc-peg-cycle", "qc-peg"):
        if args.base:
            base = (read_exponent_matrix(args.base).base() if args.base.endswith(".exp")
                    else np.loadtxt(args.base, dtype=np.int64, ndmin=2))
        elif args.gamma and args.eta:
            base = cons.regular_base(args.gamma, args.eta)
        else:
            raise InvalidInputError("qc construction needs --base FILE or --gamma and --eta")
        if not args.p:
            raise InvalidInputError("qc construction needs --p")
        return cons.qc_peg_cycle(base, args.p, args.seed, cycle_aware=args.type == "qc-peg-cycle")
    if not (args.nv and args.nc and args.degrees):
        raise InvalidInputError("peg construction needs --nv, --nc and --degrees")
    if args.degrees.isdigit():
        degs = [int(args.degrees)] * args.nv
    else:
        degs = [int(x) for x in Path(args.degrees).read_text().split()]
    cfg = cons.ConstructionConfig(args.nv, args.nc, degs, args.seed)
    t = cons.peg_cycle(cfg) if args.type == "peg-cycle" else cons.peg_classic(cfg)
    return None, t


def cmd_construct(args: argparse.Namespace) -> int:
    e, t = _build(args)
    if args.out == "expmat":
        if e is None:
            raise InvalidInputError("--out expmat needs a quasi-cyclic construction")
        files = _out_text(args.output, format_exponent_matrix(e))
    else:
        files = _out_text(args.output, format_alist(t))
    _emit(args, files)
    return 0


def cmd_lift(args: argparse.Namespace) -> int:
    t, _ = _load_code(args)
    _emit(args, _out_text(args.output, format_alist(t)))
    return 0


def _census(t: TannerGraph) -> dict:
    cycles = six_cycles(t)
    ets = Counter()
    for cyc in cycles:
        try:
            e = ets_of_variables(t, cyc[0::2])   # variables sit at even positions
        except InvalidInputError:
            ets["non-elementary"] += 1
            continue
        ets[f"({e.a},{e.b})"] += 1
    return {"six_cycles": len(cycles), "six_cycle_pairs_dist_le_0": cycle_pairs_sharing_nodes(cycles),
            "six_cycle_ets": dict(sorted(ets.items()))}


def cmd_girth(args: argparse.Namespace) -> int:
    t, e = _load_code(args)
    report = {"n_v": t.n_v, "n_c": t.n_c, "girth_bfs": tanner_girth(t)}
    if e is not None:
        report["girth_qc"] = girth_qc(e, args.k_max)
    if args.census:
        report.update(_census(t))
    text = json.dumps({k: (None if v == math.inf else v) for k, v in report.items()}, indent=2) + "\n"
    _emit(args, _out_text(args.output, text))
    return 0


def cmd_ets_enumerate(args: argparse.Namespace) -> int:
    pop = enumerate_ets(args.a, args.b, args.gamma, connected=not args.disconnected, strict=not args.lenient)
    fmt = to_graph6 if args.format == "graph6" else format_edge_line
    lines = [fmt(g) for g in pop.members]
    _emit(args, _out_text(args.output, "".join(x + "\n" for x in lines)))
    return 0


def cmd_ets_classify(args: argparse.Namespace) -> int:
    rows = [{"index": i, "graph": format_edge_line(g), "set": classify(g, args.gamma)}
            for i, g in enumerate(read_graphs(args.input))]
    if args.output:
        _emit(args, [_write_csv(Path(args.output), rows, ["index", "graph", "set"])])
    else:
        for r in rows:
            print(f"{r['index']},{r['set']},{r['graph']}")
    return 0


def cmd_radius(args: argparse.Namespace) -> int:
    if args.pattern:
        graphs = [parse_pattern(args.pattern).graph()]
    elif args.input:
        graphs = read_graphs(args.input)
    else:
        raise InvalidInputError("give --pattern or --input")
    for g in graphs:
        print(f"{system_radius(g, args.gamma):.{args.digits}f}")
    return 0


def cmd_turan(args: argparse.Namespace) -> int:
    p = parse_pattern(args.pattern)
    for n in range(args.n_min or args.n, args.n + 1):
        if args.bruteforce:
            val, _ = turan_bruteforce(p, n)
            print(f"{n},{val},bruteforce")
        elif args.exact:
            print(f"{n},{turan_exact(p, n)},{turan_regime(p, n)}")
        else:
            print(f"{n},{turan_value(p, n)},{turan_regime(p, n)}")
    return 0


def _fig5_rows(tr, iters: int) -> list[dict]:
    return [{"iteration": l, "error_prob": float(np.exp(tr.log_error_prob[l])),
             "log10_error_prob": float(tr.log_error_prob[l] / np.log(10)),
             "min_soft_mean": float(tr.min_soft_mean[l])} for l in range(iters + 1)]


def cmd_trajectory(args: argparse.Namespace) -> int:
    cfg = Fig5Config(args.a, args.b, args.gamma, args.dc, args.sigma, args.lambda_mean, args.iterations)
    outdir = Path(args.outdir)
    files = []
    if args.single is not None:
        members = enumerate_ets(cfg.a, cfg.b, cfg.gamma).members
        if not 0 <= args.single < len(members):
            raise InvalidInputError(f"--single must be in [0, {len(members)})")
        tr = fig5_single(members[args.single], cfg)
        files.append(_write_csv(outdir / f"trajectory_member_{args.single}.csv", _fig5_rows(tr, cfg.iterations)))
    else:
        for tag, tr in fig5(cfg).items():
            files.append(_write_csv(outdir / FIG5_FILES[tag], _fig5_rows(tr, cfg.iterations)))
    write_manifest(Path(args.manifest) if args.manifest else outdir / "manifest.json", args.command, args, files)
    for f in files:
        print(f)
    return 0


def _fer_points(args: argparse.Namespace) -> list[sim.ChannelConfig]:
    if args.sigma:
        return [sim.ChannelConfig(sigma=s) for s in args.sigma]
    if args.ebn0:
        return [sim.ChannelConfig(ebn0_db=x) for x in args.ebn0]
    raise InvalidInputError("give --ebn0 or --sigma values")


def _run_fer(t: TannerGraph, args: argparse.Namespace) -> list[dict]:
    stop = sim.StopRule(args.min_errors, args.max_frames, args.chunk)
    res = sim.fer_sweep(t, _fer_points(args), stop, args.seed, args.workers, args.max_iter)
    return sim.fer_rows(res)


def cmd_fer(args: argparse.Namespace) -> int:
    t, _ = _load_code(args)
    rows = _run_fer(t, args)
    if args.output:
        _emit(args, [_write_csv(Path(args.output), rows, sim.FER_COLUMNS)])
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=sim.FER_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    outdir = Path(args.outdir)
    if args.name == "table1":
        rows = table1()
    elif args.name == "table2":
        rows = table2()
    else:
        rows = [asdict(r) for r in table34(3 if args.name == "table3" else 4)]
    path = _write_csv(outdir / f"{args.name}.csv", rows)
    write_manifest(Path(args.manifest) if args.manifest else outdir / f"{args.name}.manifest.json",
                   args.command, args, [path])
    print(path)
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    outdir = Path(args.outdir)
    manifest = Path(args.manifest) if args.manifest else outdir / "manifest.json"
    if args.dry_run:
        write_manifest(manifest, args.command, args, [])
        print(manifest)
        return 0
    files: list[Path] = []
    stage = "construct"
    try:
        if args.fixture or args.expmat or args.alist:
            t, e = _load_code(args)
        else:
            e, t = _build(args)
        files += _out_text(str(outdir / "code.alist"), format_alist(t))
        if e is not None:
            files += _out_text(str(outdir / "code.exp"), format_exponent_matrix(e))
        stage = "analyze"
        report = {"girth_bfs": tanner_girth(t)}
        if e is not None:
            report["girth_qc"] = girth_qc(e, args.k_max)
        report.update(_census(t))
        text = json.dumps({k: (None if v == math.inf else v) for k, v in report.items()}, indent=2) + "\n"
        files += _out_text(str(outdir / "analysis.json"), text)
        if not args.analyze_only:
            stage = "simulate"
            files.append(_write_csv(outdir / "fer.csv", _run_fer(t, args), sim.FER_COLUMNS))
    except CycleDistError as exc:
        exc.args = (f"[{stage}] {exc}",)
        raise
    write_manifest(manifest, args.command, args, files)
    print(manifest)
    return 0


# ---------------------------------------------------------------- parser


def _add_fer_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ebn0", type=_float_list, help="Eb/N0 points in dB, comma separated")
    p.add_argument("--sigma", type=_float_list, help="noise standard deviations, comma separated")
    p.add_argument("--min-errors", type=int, default=100, help="frame errors per point before stopping")
    p.add_argument("--max-frames", type=int, default=10 ** 6, help="frame cap per point")
    p.add_argument("--chunk", type=int, default=500, help="frames per deterministic work unit")
    p.add_argument("--max-iter", type=int, default=20, help="decoder iterations")
    p.add_argument("--seed", type=int, default=0)


def _add_construct_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type", choices=["peg", "peg-cycle", "qc-peg-cycle", "qc-peg"], default="qc-peg-cycle")
    p.add_argument("--nv", type=int, help="number of variable nodes (peg types)")
    p.add_argument("--nc", type=int, help="number of check nodes (peg types)")
    p.add_argument("--degrees", help="an integer for a regular code, or a file of per-variable degrees")
    p.add_argument("--p", type=int, help="lifting degree (qc types)")
    p.add_argument("--base", help="base matrix file (0/1 rows, or an exponent matrix named *.exp)")
    p.add_argument("--gamma", type=int, help="rows of an all-ones base matrix")
    p.add_argument("--eta", type=int, help="columns of an all-ones base matrix")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cycledist", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=_version())
    ap.add_argument("--replay", metavar="MANIFEST", help="re-run a recorded manifest (must be the only argument)")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name: str, func, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--config", help="key = value file; explicit flags override it")
        p.add_argument("--manifest", help="write a JSON run manifest here")
        p.set_defaults(func=func)
        return p

    p = cmd("construct", cmd_construct, "build a code with PEG, PEG-CYCLE or QC-PEG-CYCLE")
    _add_construct_args(p)
    p.add_argument("--out", choices=["alist", "expmat"], default="alist")
    p.add_argument("--output", help="output file (default stdout)")

    p = cmd("lift", cmd_lift, "lift an exponent matrix to an alist parity-check matrix")
    _add_code_source(p)
    p.add_argument("--output")

    p = cmd("girth", cmd_girth, "girth by BFS (and by the block-walk test for QC codes)")
    _add_code_source(p)
    p.add_argument("--k-max", type=int, default=6, help="longest block walk is 2*k_max")
    p.add_argument("--census", action="store_true", help="also count 6-cycles, overlapping pairs, induced ETSs")
    p.add_argument("--output")

    p = cmd("ets-enumerate", cmd_ets_enumerate, "list non-isomorphic VN graphs of (a,b)-ETSs")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--format", choices=["edges", "graph6"], default="edges")
    p.add_argument("--disconnected", action="store_true", help="include disconnected VN graphs")
    p.add_argument("--lenient", action="store_true", help="allow VN degree ceil(gamma/2)")
    p.add_argument("--output")

    p = cmd("ets-classify", cmd_ets_classify, "tag VN graphs with their structure-free set")
    p.add_argument("--input", required=True, help="edge-line or graph6 file")
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--output", help="CSV output (default stdout)")

    p = cmd("radius", cmd_radius, "spectral radius of the system matrix of VN graphs")
    p.add_argument("--pattern", help="theta122, db330, db331, theta:l1,l2,l3 or db:r1,r2,q")
    p.add_argument("--input", help="edge-line or graph6 file")
    p.add_argument("--gamma", type=int, help="variable degree (default: max degree)")
    p.add_argument("--digits", type=int, default=4)

    p = cmd("turan", cmd_turan, "Turán numbers of theta and dumbbell patterns")
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n-min", type=int, help="print a range n_min..n")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="closed formulas only")
    g.add_argument("--bruteforce", action="store_true", help="exhaustive search only")

    p = cmd("trajectory", cmd_trajectory, "set-average ETS error-probability trajectories")
    p.add_argument("--a", type=int, default=10)
    p.add_argument("--b", type=int, default=4)
    p.add_argument("--gamma", type=int, default=4)
    p.add_argument("--dc", type=int, default=8, help="check degree of the ensemble")
    p.add_argument("--sigma", type=float, default=0.83, help="channel noise standard deviation")
    p.add_argument("--lambda-mean", type=float, default=0.01, help="channel LLR mean inside the ETS")
    p.add_argument("--iterations", type=int, default=60)
    p.add_argument("--single", type=int, help="trajectory of one population member (by index)")
    p.add_argument("--outdir", default="out")

    p = cmd("fer", cmd_fer, "Monte-Carlo frame error rate with the sum-product decoder")
    _add_code_source(p)
    _add_fer_args(p)
    p.add_argument("--workers", type=int, default=None, help=f"processes (default ${sim.WORKERS_ENV} or 1)")
    p.add_argument("--output", help="CSV output (default stdout)")

    p = cmd("table", cmd_table, "reproduce a table as CSV")
    p.add_argument("name", choices=["table1", "table2", "table3", "table4"])
    p.add_argument("--outdir", default="out")

    p = cmd("pipeline", cmd_pipeline, "construct, analyze and simulate in one run")
    _add_construct_args(p)
    _add_code_source(p)
    p.add_argument("--ebn0", type=_float_list)
    p.add_argument("--sigma", type=_float_list)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-frames", type=int, default=10 ** 6)
    p.add_argument("--chunk", type=int, default=500)
    p.add_argument("--max-iter", type=int, default=20)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--analyze-only", action="store_true")
    p.add_argument("--dry-run", action="store_true", help="write the manifest only")
    p.add_argument("--outdir", default="out")
    return ap


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        cfg = load_config(args.config)
        subparser = ap._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in subparser._actions}
        unknown = sorted(set(cfg) - set(known))
        if unknown:
            raise InvalidInputError(f"unknown config keys: {', '.join(unknown)}")
        defaults = {}
        for k, v in cfg.items():
            act = known[k]
            if act.nargs == 0:       # store_true flags
                defaults[k] = v.lower() in ("1", "true", "yes", "on")
            else:
                defaults[k] = v
        subparser.set_defaults(**defaults)
        args = ap.parse_args(argv)
    return args


COMMANDS = {
    "construct": cmd_construct, "lift": cmd_lift, "girth": cmd_girth, "ets-enumerate": cmd_ets_enumerate,
    "ets-classify": cmd_ets_classify, "radius": cmd_radius, "turan": cmd_turan, "trajectory": cmd_trajectory,
    "fer": cmd_fer, "table": cmd_table, "pipeline": cmd_pipeline,
}


def replay(manifest_path: str) -> int:
    """Re-run the command recorded in a manifest with exactly its parameters."""
    data = json.loads(Path(manifest_path).read_text())
    params = dict(data["parameters"])
    params.update(config=None, manifest=None)
    if data["command"] not in COMMANDS:
        raise InvalidInputError(f"unknown command {data['command']!r} in manifest")
    args = argparse.Namespace(**params)
    return COMMANDS[data["command"]](args)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv[:1] == ["--replay"]:
            if len(argv) != 2:
                raise InvalidInputError("usage: cycledist --replay MANIFEST")
            return replay(argv[1])
        args = parse_args(argv)
        return args.func(args)
    except CycleDistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
