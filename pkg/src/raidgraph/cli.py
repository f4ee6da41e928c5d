"""``raidgraph`` command line.

Exit codes: 0 success (including "no derangement" answers), 1 when
``nash-verify`` finds a profile that is not a strict equilibrium or
``theorem`` finds a violation, 2 for usage, input and guard errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import derangement as der
from . import game
from .exp3 import LearningRun, exp3_run
from .formats import MapFormatError, format_map_text, load_map
from .graph import (
    FAMILIES,
    Graph,
    GraphFormatError,
    generate,
    is_connected,
    parse_edge_list,
    random_connected,
    serialize_edge_list,
)


class CliError(Exception):
    pass


def _fmt_set(vs) -> str:
    return "{" + ",".join(str(v) for v in sorted(vs)) + "}"


def _fmt_map(image) -> str:
    return " ".join(str(w) for w in image)


def _load_graph(args) -> Graph:
    if args.graph is not None:
        try:
            text = Path(args.graph).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read graph file: {exc}") from None
        return parse_edge_list(text)
    if args.family is None or args.size is None:
        raise CliError("give --graph PATH or both --family and --size")
    return generate(args.family, args.size)


def _load_profile(args, g: Graph) -> game.Profile:
    if args.profile is None:
        raise CliError("--profile is required")
    try:
        text = Path(args.profile).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read profile file: {exc}") from None
    f = game.Profile(load_map(text))
    f.check(g)
    return f


def _h_values(args) -> list[game.GameParams]:
    return [game.GameParams(h) for h in game.parse_h_list(args.h)]


def _write_json(args, doc) -> None:
    if getattr(args, "json", None):
        Path(args.json).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _game_graph(args) -> Graph:
    g = _load_graph(args)
    game._require_game_graph(g)
    return g


def cmd_parse_check(args, out):
    g = _load_graph(args)
    conn = is_connected(g)
    out.write(f"ok n={g.n} m={g.m} connected={'yes' if conn else 'no'}\n")
    out.write(serialize_edge_list(g))
    _write_json(args, {"n": g.n, "m": g.m, "connected": conn, "edges": [list(e) for e in g.edges]})
    return 0


def cmd_derange(args, out):
    g = _load_graph(args)
    d = der.find_derangement(g)
    doc = {"exists": d is not None, "map": list(d.map) if d else None, "hall_witness": None}
    if d is not None:
        out.write("derangement\n")
        out.write(format_map_text(d.map))
    else:
        out.write("no derangement\n")
        if g.n <= der.HALL_MAX_N:
            w = der.hall_witness(g)
            doc["hall_witness"] = sorted(w.w)
            out.write(f"hall witness: W={_fmt_set(w.w)} N(W)={_fmt_set(w.neighborhood)}\n")
    _write_json(args, doc)
    return 0


def cmd_qfactor(args, out):
    g = _load_graph(args)
    if args.profile is not None:
        d = der.Derangement(_load_profile(args, g).map)
    else:
        d = der.find_derangement(g)
    if d is None:
        out.write("no derangement\n")
        _write_json(args, {"components": None})
        return 0
    qf = der.q_factor(g, d)
    comps = []
    for c in qf.components:
        kind = "pair" if isinstance(c, der.Pair) else "cycle"
        comps.append({"type": kind, "vertices": list(c.vertices)})
        out.write(f"{kind} {_fmt_map(c.vertices)}\n")
    _write_json(args, {"components": comps})
    return 0


def cmd_hall(args, out):
    g = _load_graph(args)
    w = der.hall_witness(g)
    if w is None:
        out.write("hall condition holds\n")
        _write_json(args, {"holds": True, "w": None, "neighborhood": None})
    else:
        out.write(f"hall condition fails: W={_fmt_set(w.w)} N(W)={_fmt_set(w.neighborhood)}\n")
        _write_json(args, {"holds": False, "w": sorted(w.w), "neighborhood": sorted(w.neighborhood)})
    return 0


def cmd_count(args, out):
    g = _load_graph(args)
    count = der.count_derangements(g)
    bound = der.derangement_upper_bound(g.n)
    out.write(f"derangements: {count}\nupper bound: {bound}\n")
    _write_json(args, {"n": g.n, "count": count, "upper_bound": bound})
    return 0


def cmd_payoffs(args, out):
    g = _load_graph(args)
    f = _load_profile(args, g)
    rows = []
    for params in _h_values(args):
        pv = game.payoff_vector(g, f, params)
        out.write(f"h={params.h}: {_fmt_map(pv)}\n")
        rows.append({"h": str(params.h), "payoffs": [str(x) for x in pv]})
    _write_json(args, {"profile": list(f.map), "results": rows})
    return 0


def cmd_nash_verify(args, out):
    g = _load_graph(args)
    f = _load_profile(args, g)
    rows, code = [], 0
    for params in _h_values(args):
        ok, dev = game.is_strict_nash(g, f, params)
        if ok:
            out.write(f"h={params.h}: strict NE\n")
            rows.append({"h": str(params.h), "strict": True, "counterexample": None})
        else:
            code = 1
            out.write(
                f"h={params.h}: not strict; player {dev.player} -> {dev.new_strategy} "
                f"moves {dev.old_payoff} -> {dev.new_payoff}\n"
            )
            rows.append({
                "h": str(params.h), "strict": False,
                "counterexample": {"player": dev.player, "new_strategy": dev.new_strategy,
                                   "old_payoff": str(dev.old_payoff), "new_payoff": str(dev.new_payoff)},
            })
    _write_json(args, {"profile": list(f.map), "results": rows})
    return code


def cmd_nash_enumerate(args, out):
    g = _game_graph(args)
    rows = []
    for params in _h_values(args):
        ne = game.enumerate_strict_nash(g, params, force=args.force, jobs=args.jobs)
        out.write(f"h={params.h}: {len(ne)} strict NE\n")
        for f in ne:
            out.write(f"  {_fmt_map(f.map)}\n")
        rows.append({"h": str(params.h), "profiles": [list(f.map) for f in ne]})
    _write_json(args, {"results": rows})
    return 0


def cmd_theorem(args, out):
    g = _game_graph(args)
    report = game.verify_equivalence(g, _h_values(args), force=args.force, jobs=args.jobs)
    out.write(report.to_text())
    _write_json(args, report.to_json())
    return 0 if report.holds else 1


def cmd_learn(args, out):
    g = _game_graph(args)
    hs = _h_values(args)
    if len(hs) != 1:
        raise CliError("learn takes a single --h value")
    run = LearningRun(
        hs[0], rounds=args.rounds, gamma=args.gamma, seed=args.seed,
        window=args.window, threshold=args.threshold, record_history=args.log is not None,
    )
    res = exp3_run(g, run)
    if res.certified:
        out.write(f"certified strict NE: {_fmt_map(res.profile.map)}\n")
    elif res.converged:
        out.write(f"converged to {_fmt_map(res.modal_profile.map)} but certification failed\n")
    else:
        out.write("no convergence\n")
    out.write(f"rounds used: {res.rounds_used}\n")
    if args.log is not None:
        Path(args.log).write_text(res.round_log_csv(), encoding="utf-8")
    _write_json(args, res.to_json())
    return 0


def cmd_generate(args, out):
    if args.random is not None:
        if args.family is not None:
            raise CliError("--random and --family are mutually exclusive")
        if args.seed is None:
            raise CliError("--random requires --seed")
        g = random_connected(args.random, args.p, args.seed)
    elif args.family is not None and args.size is not None:
        g = generate(args.family, args.size)
    else:
        raise CliError("give --family and --size, or --random N --p P --seed S")
    out.write(serialize_edge_list(g))
    return 0


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raidgraph",
        description="Graph derangements and strict equilibria of the Territorial Raider game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_opts(p, required=True):
        grp = p.add_mutually_exclusive_group(required=required)
        grp.add_argument("--graph", metavar="PATH", help="edge-list file")
        grp.add_argument("--family", choices=FAMILIES)
        p.add_argument("--size", type=_pos_int)
        p.add_argument("--json", metavar="PATH", help="also write a JSON document")

    def enum_opts(p):
        p.add_argument("--force", action="store_true", help="override the enumeration guard")
        p.add_argument("--jobs", type=_pos_int, default=1)

    specs = [
        ("parse-check", cmd_parse_check, "validate a graph and print its canonical form"),
        ("derange", cmd_derange, "find a derangement or a Hall witness"),
        ("qfactor", cmd_qfactor, "Q-factor from a derangement"),
        ("hall", cmd_hall, "exhaustive Hall-condition check"),
        ("count", cmd_count, "count derangements and print the n!/e bound"),
        ("payoffs", cmd_payoffs, "exact payoffs of a profile"),
        ("nash-verify", cmd_nash_verify, "check a profile is a strict NE"),
        ("nash-enumerate", cmd_nash_enumerate, "list all strict NE"),
        ("theorem", cmd_theorem, "check derangements and strict NE coincide"),
        ("learn", cmd_learn, "multi-agent Exp3 search, certified exactly"),
    ]
    for name, fn, help_ in specs:
        p = sub.add_parser(name, help=help_)
        graph_opts(p)
        p.set_defaults(func=fn)
        if name in ("qfactor", "payoffs", "nash-verify"):
            p.add_argument("--profile", metavar="PATH")
        if name in ("payoffs", "nash-verify", "nash-enumerate", "theorem"):
            p.add_argument("--h", default="1/2", help="comma-separated decimals or fractions")
        if name in ("nash-enumerate", "theorem"):
            enum_opts(p)
        if name == "learn":
            p.add_argument("--h", default="1/2")
            p.add_argument("--seed", type=_nonneg_int, required=True)
            p.add_argument("--gamma", type=float, default=0.1)
            p.add_argument("--rounds", type=_pos_int, default=20_000)
            p.add_argument("--window", type=_pos_int, default=500)
            p.add_argument("--threshold", type=float, default=0.95)
            p.add_argument("--log", metavar="PATH", help="per-round CSV log")

    p = sub.add_parser("generate", help="print a generated graph as an edge list")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--size", type=_pos_int)
    p.add_argument("--random", type=int, metavar="N", help="seeded connected G(N, p)")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=_nonneg_int)
    p.set_defaults(func=cmd_generate)
    return parser


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (CliError, GraphFormatError, MapFormatError, game.InadmissibleProfileError,
            game.GameInputError, der.InvalidDerangementError, ValueError, RuntimeError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
