"""Command-line entry point: ``rmnk {gen,eval,enum,walk,grid,report}``.

Data goes to files or stdout, diagnostics to stderr. Exit status is 0 on
success, 1 on a domain error (bad rho, malformed file, ...) and 2 on a usage
error.
"""

import argparse
import os
import secrets
import sys

from . import experiments, report
from .enumeration import ENUMERATION_LIMIT, enumerate_plo
from .errors import RMNKError
from .landscape import evaluate, from_string, generate_instance, read_instance, to_string, write_instance
from .walker import walk_campaign


def _seed(value):
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def _positive(value):
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _note(msg):
    print(msg, file=sys.stderr)


def _resolve_seed(seed):
    seed = secrets.randbits(64) if seed is None else seed
    _note(f"master seed: {seed}")
    return seed


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def cmd_gen(args):
    seed = _resolve_seed(args.seed)
    inst = generate_instance(args.n, args.k, args.m, args.rho, seed)
    out, close = _open_out(args.out)
    try:
        write_instance(inst, out)
    finally:
        if close:
            out.close()


def cmd_eval(args):
    inst = read_instance(args.instance)
    _note(f"master seed: {inst.seed}")
    bits = args.x or [line for line in sys.stdin.read().split() if line]
    out, close = _open_out(args.out)
    try:
        out.write("x," + ",".join(f"f{i + 1}" for i in range(inst.m)) + "\n")
        for b in bits:
            x = from_string(b)
            vals = evaluate(inst, x)
            out.write(to_string(x) + "," + ",".join(repr(float(v)) for v in vals) + "\n")
    finally:
        if close:
            out.close()


def cmd_enum(args):
    limit = None if args.force_enum else args.limit
    out, close = _open_out(args.out)
    try:
        out.write("file,N,K,M,rho,seed,n_plo,plo_fraction,n_pareto\n")
        for path in args.instance:
            inst = read_instance(path)
            _note(f"master seed: {inst.seed}")
            s = enumerate_plo(inst, threads=args.threads, limit=limit)
            out.write(
                f"{path},{inst.n},{inst.k},{inst.m},{inst.rho!r},{inst.seed},"
                f"{s.n_plo},{s.plo_fraction!r},{s.n_pareto}\n"
            )
    finally:
        if close:
            out.close()


def cmd_walk(args):
    inst = read_instance(args.instance)
    seed = _resolve_seed(args.seed)
    stats = walk_campaign(inst, args.walks, seed, threads=args.threads, keep_lengths=args.lengths)
    out, close = _open_out(args.out)
    try:
        out.write("N,K,M,rho,n_walks,mean_walk,sd_walk\n")
        out.write(f"{inst.n},{inst.k},{inst.m},{inst.rho!r},{stats.n_walks},"
                  f"{stats.mean_length!r},{stats.sd_length!r}\n")
        if args.lengths:
            out.write("walk,length\n")
            out.writelines(f"{i},{v}\n" for i, v in enumerate(stats.lengths))
    finally:
        if close:
            out.close()


def cmd_grid(args):
    cfg = experiments.GridConfig.from_file(args.config) if args.config else experiments.GridConfig()
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.instances is not None:
        overrides["instances_per_cell"] = args.instances
    if args.walks is not None:
        overrides["walks_per_instance"] = args.walks
    if overrides:
        cfg = experiments.GridConfig(**{**cfg.__dict__, **overrides})
    _note(f"master seed: {cfg.master_seed}")
    total = len(cfg.cells()) * cfg.instances_per_cell
    done = [0]

    def progress(row):
        done[0] += 1
        if args.verbose:
            _note(f"[{done[0]}/{total}] N={row.n} K={row.k} M={row.m} rho={row.rho} #{row.instance_id}")

    rows = experiments.run_grid(cfg, threads=args.threads, progress=progress)
    experiments.write_rows(rows, args.out)
    bad = [r for r in rows if r.error and r.error != "SpaceTooLarge"]
    for r in bad:
        _note(f"error in N={r.n} K={r.k} M={r.m} rho={r.rho} #{r.instance_id}: {r.error}")


def cmd_report(args):
    out_dir = args.out_dir if args.out_dir is not None else (os.path.dirname(args.results) or ".")
    paths = report.write_report(args.results, out_dir)
    for p in paths:
        _note(f"wrote {p}")
    with open(paths[0], encoding="utf-8") as fh:
        sys.stdout.write(fh.read())


def build_parser():
    parser = argparse.ArgumentParser(prog="rmnk", description="rho-MNK landscapes: Pareto local optima and adaptive walks")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="{gen,eval,enum,walk,grid,report}")

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--seed", type=_seed, help="instance seed (random if omitted)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="evaluate bit strings on an instance")
    p.add_argument("instance")
    p.add_argument("--x", action="append", help="bit string, x[0] first; repeatable (default: read stdin)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("enum", help="count Pareto local optima and Pareto optimal solutions")
    p.add_argument("instance", nargs="+")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--limit", type=_positive, default=ENUMERATION_LIMIT, help="largest N to enumerate")
    p.add_argument("--force-enum", action="store_true", help="ignore the N limit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("walk", help="run a Pareto adaptive-walk campaign")
    p.add_argument("instance")
    p.add_argument("--walks", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, help="campaign seed (random if omitted)")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--lengths", action="store_true", help="also print every walk length")
    p.add_argument("--out")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("grid", help="run the experiment grid and write results CSV")
    p.add_argument("--config", help="flat 'key = value' config (default: the N=18 parameter table)")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--seed", type=_seed, help="override master_seed")
    p.add_argument("--instances", type=_positive, help="override instances_per_cell")
    p.add_argument("--walks", type=int, help="override walks_per_instance")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("report", help="regression summary and plot scripts from results CSV")
    p.add_argument("results")
    p.add_argument("--out-dir", help="where to write summary.txt and plot scripts (default: next to the CSV)")
    p.set_defaults(func=cmd_report)
    parser.verbs = sub.choices
    return parser


def _reject_unknown_flags(parser, argv):
    # argparse reports missing required options before unknown ones; name the bad flag first
    verb = next((a for a in argv if not a.startswith("-")), None)
    sub = parser.verbs.get(verb)
    if sub is None:
        return
    known = {s for action in sub._actions for s in action.option_strings}
    for tok in argv:
        if tok.startswith("-") and len(tok) > 1 and not tok[1:2].isdigit():
            if tok.split("=", 1)[0] not in known:
                sub.error(f"unrecognized arguments: {tok}")


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    _reject_unknown_flags(parser, argv)
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (RMNKError, OSError, ValueError) as exc:
        _note(f"rmnk {args.verb}: {type(exc).__name__}: {exc}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
