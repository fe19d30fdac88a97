"""Command line interface.

Subcommands mirror the library modules: gasket (graph export), sandpile
(stabilize / identity / burn), selfsim (id / verify), group (snf /
check-theorem / tau), spectral (eigs / distance), markov (simulate / report),
and render.  Exit status is 0 on success, 1 when a verification-style
subcommand reports failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import group, markov, render, selfsim, spectral
from .gasket import (
    CORNER_NAMES,
    GasketGraph,
    build_gasket,
    graph_to_json,
    parse_boundary,
    reduced_laplacian,
)
from .sandpile import (
    burning_odometer,
    config_from_json,
    config_from_text,
    config_to_json,
    config_to_text,
    identity,
    stabilize,
)


def _read_config(path: str):
    text = sys.stdin.read() if path == "-" else open(path).read()
    stripped = text.strip()
    if stripped.startswith("{"):
        return config_from_json(json.loads(stripped))
    return config_from_text(stripped)


def _graph_arg(args) -> GasketGraph:
    return build_gasket(args.level, parse_boundary(args.boundary))


def _print(data: dict, as_json: bool, human: list[str]):
    if as_json:
        print(json.dumps(data))
    else:
        for line in human:
            print(line)


def _add_level(p, required=True):
    p.add_argument("--level", type=int, required=required)


def _check_level(parser, args, cap=8):
    if args.level < 0 or args.level > cap:
        parser.error(f"--level must be between 0 and {cap}")


def cmd_gasket(parser, args) -> int:
    _check_level(parser, args)
    graph = _graph_arg(args)
    data = graph_to_json(graph)
    human = [
        f"level {graph.level} boundary {graph.boundary.token()}",
        f"vertices {graph.n_vertices} gasket-edges {len(graph.edges)} sink-degree {graph.sink_degree}",
    ]
    _print(data, args.json, human)
    return 0


def cmd_sandpile_stabilize(parser, args) -> int:
    conf = _read_config(args.input)
    frozen = []
    for name in args.frozen or []:
        idx = conf.graph.corner_index(name)
        if idx is None:
            parser.error(f"corner {name} is the sink")
        frozen.append(idx)
    result, odometer = stabilize(conf, frozen=frozen)
    data = {"config": config_to_json(result), "odometer": list(odometer)}
    _print(data, args.json, [config_to_text(result), "odometer " + " ".join(map(str, odometer))])
    return 0


def cmd_sandpile_identity(parser, args) -> int:
    _check_level(parser, args)
    graph = _graph_arg(args)
    conf = identity(graph)
    if args.render:
        spec = render.RenderSpec(fmt="svg" if args.render.endswith(".svg") else "ppm")
        with open(args.render, "wb") as fh:
            fh.write(render.render(conf, spec))
    _print(config_to_json(conf), args.json, [config_to_text(conf)])
    return 0


def cmd_sandpile_burn(parser, args) -> int:
    conf = _read_config(args.input)
    recurrent, odometer = burning_odometer(conf)
    data = {"recurrent": recurrent, "odometer": list(odometer)}
    _print(data, args.json, [f"recurrent {recurrent}"])
    return 0 if recurrent else 1


def cmd_selfsim_id(parser, args) -> int:
    _check_level(parser, args)
    if args.level < 2:
        parser.error("the tile construction needs --level >= 2")
    conf = selfsim.identity_from_tiles(args.level)
    _print(config_to_json(conf), args.json, [config_to_text(conf)])
    return 0


def cmd_selfsim_verify(parser, args) -> int:
    _check_level(parser, args)
    if args.level < 1:
        parser.error("verification checks need --level >= 1")
    if args.check == "doubling":
        report = selfsim.verify_doubling(args.level)
    elif args.check == "transport":
        report = selfsim.verify_corner_transport(args.level)
    else:
        conf = selfsim.build_tile(args.level, 2, 2, 2)
        report = selfsim.verify_junction_invariance(args.level, conf)
    data = report.to_json()
    _print(data, args.json, [f"{data['check']} level {args.level}: {'pass' if data['pass'] else 'FAIL'}"])
    return 0 if data["pass"] else 1


def cmd_group_snf(parser, args) -> int:
    _check_level(parser, args)
    graph = _graph_arg(args)
    data_l = group.lattice_data(graph)
    det = group.determinant(reduced_laplacian(graph))
    data = {
        "level": graph.level,
        "boundary": graph.boundary.token(),
        "invariant_factors": [str(d) for d in data_l.nontrivial],
        "determinant": str(det),
    }
    human = [
        f"group order {data_l.order}",
        "invariant factors " + " ".join(str(d) for d in data_l.nontrivial),
    ]
    _print(data, args.json, human)
    return 0


def cmd_group_check_theorem(parser, args) -> int:
    _check_level(parser, args)
    if args.level < 1:
        parser.error("--level must be >= 1")
    report = group.check_group_theorem(args.level)
    data = report.to_json()
    human = [
        f"decomposition level {args.level}: {'pass' if report.passed else 'FAIL'} "
        f"(convention {report.convention})"
    ]
    _print(data, args.json, human)
    return 0 if report.passed else 1


def cmd_group_tau(parser, args) -> int:
    _check_level(parser, args)
    if args.method == "recursion":
        value = group.tau_recursion(args.level)
    else:
        value = group.tau_matrix_tree(args.level)
    data = {"level": args.level, "method": args.method, "spanning_trees": str(value)}
    _print(data, args.json, [str(value)])
    return 0


def cmd_spectral_eigs(parser, args) -> int:
    _check_level(parser, args)
    if args.level < 1:
        parser.error("--level must be >= 1 for cell harmonics")
    graph = build_gasket(args.level)
    n = graph.n_vertices
    cell_eig = Fraction(n - 5, n + 1)
    pair_eig = Fraction(n - 11, n + 1)
    data = {
        "level": args.level,
        "cells": 3 ** (args.level - 1),
        "cell_eigenvalue": str(cell_eig),
        "pair_eigenvalue": str(pair_eig),
    }
    human = [
        f"cell harmonic eigenvalue {cell_eig} ({float(cell_eig):.6f})",
        f"pair product eigenvalue {pair_eig} ({float(pair_eig):.6f})",
    ]
    if args.all:
        chars = spectral.enumerate_characters(graph, cap=args.cap)
        eigs = []
        for h in chars:
            lam = spectral.eigenvalue(h)
            eigs.append(str(lam) if isinstance(lam, Fraction) else f"{lam.real}{lam.imag:+}j")
        data["eigenvalues"] = eigs
        human.append(f"enumerated {len(eigs)} characters")
    _print(data, args.json, human)
    return 0


def cmd_spectral_distance(parser, args) -> int:
    _check_level(parser, args)
    graph = build_gasket(args.level)
    result = spectral.exact_distance(graph, args.t, cap=args.cap)
    data = {
        "level": result.level,
        "t": result.t,
        "group_order": str(result.group_order),
        "l2": result.l2,
        "tv_upper": result.tv_upper,
    }
    _print(data, args.json, [f"t={args.t} l2={result.l2:.6g} tv_upper={result.tv_upper:.6g}"])
    return 0


def cmd_markov_simulate(parser, args) -> int:
    _check_level(parser, args)
    if args.level < 1:
        parser.error("--level must be >= 1")
    seed = markov.master_seed(args.seed)
    if args.trials > 1:
        est = markov.estimate_chi_decay(args.level, args.steps, args.trials, seed=seed)
        data = {"seed": seed, **est.to_json()}
        human = [
            f"chi mean {est.mean:.6f} stderr {est.stderr:.6f} expected {est.expected:.6f}"
        ]
    else:
        state = markov.run_chain(build_gasket(args.level), args.steps, seed=seed)
        chi = spectral.distinguishing_statistic(state.config.graph, state.config.chips)
        data = {
            "seed": seed,
            "level": args.level,
            "steps": args.steps,
            "chi": chi,
            "config": config_to_json(state.config),
        }
        human = [config_to_text(state.config), f"chi {chi:.6f}"]
    _print(data, args.json, human)
    return 0


def cmd_markov_report(parser, args) -> int:
    _check_level(parser, args)
    if args.level < 1:
        parser.error("--level must be >= 1")
    report = markov.mixing_report(
        args.level,
        chi_trials=args.trials,
        seed=markov.master_seed(args.seed),
        with_group_order=args.level <= 3,
    )
    human = [
        f"level {report.level} vertices {report.n_vertices}",
        f"lower bound t {report.lower_bound_t} (raw {report.lower_bound_raw:.2f})",
        f"upper bound t {report.upper_bound_t}",
    ]
    _print(report.to_json(), args.json, human)
    return 0


def cmd_render(parser, args) -> int:
    conf = _read_config(args.input)
    fmt = args.format or ("svg" if args.out.endswith(".svg") else "ppm")
    spec = render.RenderSpec(fmt=fmt, scale=args.scale)
    with open(args.out, "wb") as fh:
        fh.write(render.render(conf, spec))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gasketpile")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gasket", help="export a gasket graph")
    _add_level(p)
    p.add_argument("--boundary", default="normal")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gasket)

    sp = sub.add_parser("sandpile", help="sandpile dynamics")
    ssub = sp.add_subparsers(dest="subcommand", required=True)
    p = ssub.add_parser("stabilize")
    p.add_argument("--input", default="-")
    p.add_argument("--frozen", action="append", choices=CORNER_NAMES)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sandpile_stabilize)
    p = ssub.add_parser("identity")
    _add_level(p)
    p.add_argument("--boundary", default="normal")
    p.add_argument("--render")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sandpile_identity)
    p = ssub.add_parser("burn")
    p.add_argument("--input", default="-")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sandpile_burn)

    sp = sub.add_parser("selfsim", help="self-similar structure")
    ssub = sp.add_subparsers(dest="subcommand", required=True)
    p = ssub.add_parser("id")
    _add_level(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_selfsim_id)
    p = ssub.add_parser("verify")
    _add_level(p)
    p.add_argument("--check", choices=("doubling", "transport", "junction"), required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_selfsim_verify)

    sp = sub.add_parser("group", help="sandpile group structure")
    ssub = sp.add_subparsers(dest="subcommand", required=True)
    p = ssub.add_parser("snf")
    _add_level(p)
    p.add_argument("--boundary", default="normal")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_group_snf)
    p = ssub.add_parser("check-theorem")
    _add_level(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_group_check_theorem)
    p = ssub.add_parser("tau")
    _add_level(p)
    p.add_argument("--method", choices=("recursion", "matrix-tree"), default="recursion")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_group_tau)

    sp = sub.add_parser("spectral", help="harmonic functions and distances")
    ssub = sp.add_subparsers(dest="subcommand", required=True)
    p = ssub.add_parser("eigs")
    _add_level(p)
    p.add_argument("--all", action="store_true")
    p.add_argument("--cap", type=int, default=spectral.DEFAULT_CHARACTER_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spectral_eigs)
    p = ssub.add_parser("distance")
    _add_level(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--cap", type=int, default=spectral.DEFAULT_CHARACTER_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spectral_distance)

    sp = sub.add_parser("markov", help="the chip-adding walk")
    ssub = sp.add_subparsers(dest="subcommand", required=True)
    p = ssub.add_parser("simulate")
    _add_level(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_markov_simulate)
    p = ssub.add_parser("report")
    _add_level(p)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_markov_report)

    p = sub.add_parser("render", help="draw a configuration")
    p.add_argument("--input", default="-")
    p.add_argument("--out", required=True)
    p.add_argument("--scale", type=int, default=12)
    p.add_argument("--format", choices=("ppm", "svg"))
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
