"""Command-line entry point: ``rewritelab <command> [options]``.

Exit status is 0 on success, 1 on bad input, and 2 when ``--strict`` is
given and the result was truncated or diverged.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import alignment, formats, statmech
from .core import render_object
from .evolution import EvolutionConfig, evolution_partition_function
from .graph import BoundsError, ExplorationBounds, build_graph, export_dot

EXIT_INPUT = 1
EXIT_STRICT = 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1, not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(parser, path: str):
    try:
        return parser(_read(path))
    except formats.FormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def parse_mode(text: str) -> statmech.SumMode:
    kind, _, arg = text.partition(":")
    try:
        if kind == "trunc":
            return statmech.Truncated(int(arg))
        if kind == "iter":
            tol, _, maxit = arg.partition(",")
            return statmech.Converge(float(tol), int(maxit) if maxit else 10_000)
    except ValueError as exc:
        raise InputError(f"bad --mode {text!r}: {exc}") from None
    raise InputError(f"bad --mode {text!r}: expected trunc:L or iter:TOL,MAXIT")


def parse_fitness(text: str):
    kind, _, rest = text.partition(":")
    try:
        if kind == "const":
            return statmech.Const(float(rest))
        if kind in ("count", "dist"):
            arg, sep, c = rest.rpartition(":")
            if not sep:
                raise ValueError("missing coefficient")
            if kind == "count":
                return statmech.Count(arg, float(c))
            return statmech.Dist(_load(formats.parse_object_file, arg), float(c))
    except ValueError as exc:
        raise InputError(f"bad --fitness {text!r}: {exc}") from None
    raise InputError(f"bad --fitness {text!r}: expected const:A, count:WORD:C or dist:PATH:C")


def parse_betas(text: str) -> list[float]:
    try:
        betas = [float(b) for b in text.split(",") if b.strip()]
    except ValueError:
        raise InputError(f"bad --betas {text!r}") from None
    if not betas or any(not b > 0 for b in betas):
        raise InputError("--betas needs positive values")
    return betas


def _bounds(args, prefix: str = "") -> ExplorationBounds:
    try:
        return ExplorationBounds(
            max_depth=getattr(args, prefix + "max_depth"),
            max_vertices=getattr(args, prefix + "max_vertices"),
            max_word_len=getattr(args, prefix + "max_word_len"),
            max_total_symbols=getattr(args, prefix + "max_symbols"),
        )
    except BoundsError as exc:
        raise InputError(str(exc)) from None


def _check_beta(value: float, flag: str) -> float:
    if not value > 0:
        raise InputError(f"{flag} must be positive")
    return value


def _inputs(args):
    genome = _load(formats.parse_genome_file, args.genome)
    v0 = _load(formats.parse_object_file, args.object)
    try:
        graph = build_graph(genome, v0, _bounds(args))
    except BoundsError as exc:
        raise InputError(str(exc)) from None
    return genome, v0, graph


def cmd_graph(args):
    _, _, graph = _inputs(args)
    if args.dot:
        Path(args.dot).write_text(export_dot(graph))
    return formats.render(formats.graph_payload(graph), args.format), graph.truncated


def cmd_z(args):
    _, _, graph = _inputs(args)
    beta = _check_beta(args.beta, "--beta")
    res = statmech.partition_function(graph, parse_fitness(args.fitness), beta, parse_mode(args.mode))
    payload = formats.partition_payload(res, graph.num_vertices, graph.truncated)
    return formats.render(payload, args.format), graph.truncated or res.diverged


def cmd_sweep(args):
    _, _, graph = _inputs(args)
    rows = statmech.beta_sweep(graph, parse_fitness(args.fitness), parse_betas(args.betas), parse_mode(args.mode))
    for r in rows:
        if r.diverged:
            print(f"warning: walk sum diverged at beta={r.beta!r}", file=sys.stderr)
    return formats.render_sweep_csv(rows), graph.truncated or any(r.diverged for r in rows)


def cmd_mincost(args):
    _, _, graph = _inputs(args)
    mc = statmech.min_total_cost(graph, parse_fitness(args.fitness))
    payload = {
        "best_vertex": mc.best_vertex,
        "best_value": formats.num(mc.best_value),
        "best_object": render_object(graph.vertices[mc.best_vertex]),
        "num_vertices": graph.num_vertices,
        "truncated": graph.truncated,
        "distances": [formats.num(d) for d in mc.distances],
    }
    return formats.render(payload, args.format), graph.truncated


def cmd_align(args):
    try:
        scheme = alignment.ScoreScheme(args.mu, args.sigma)
        aln, score = alignment.align_dp(args.v, args.w, scheme)
        brute = alignment.brute_force_min_score(args.v, args.w, scheme) if args.brute_check else None
    except alignment.AlignmentError as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        payload = {"top": aln.top, "bottom": aln.bottom, "score": score}
        if brute is not None:
            payload["brute_force"] = brute
        out = formats.to_json(payload)
    else:
        out = f"{aln.top}\n{aln.bottom}\nscore: {score!r}\n"
        if brute is not None:
            out += f"brute-force: {brute!r}\n"
    if brute is not None and brute != score:
        raise InputError(f"dynamic programming score {score!r} disagrees with brute force {brute!r}")
    return out, False


def cmd_evolve(args):
    g0 = _load(formats.parse_genome_file, args.genome)
    v0 = _load(formats.parse_object_file, args.object)
    egenome = _load(formats.parse_genome_file, args.egenome)
    config = EvolutionConfig(
        evolution_genome=egenome,
        v0=v0,
        fitness=parse_fitness(args.fitness),
        beta=_check_beta(args.beta, "--beta"),
        beta_prime=_check_beta(args.beta_prime, "--beta-prime"),
        inner_bounds=_bounds(args, "inner_"),
        inner_mode=parse_mode(args.inner_mode),
        outer_bounds=_bounds(args),
        outer_mode=parse_mode(args.mode),
    )
    try:
        res = evolution_partition_function(g0, config)
    except BoundsError as exc:
        raise InputError(str(exc)) from None
    return formats.render(formats.evolution_payload(res), args.format), res.truncated or res.diverged


def _add_bounds(p, prefix=""):
    d = ExplorationBounds()
    p.add_argument(f"--{prefix}max-depth", type=int, default=d.max_depth)
    p.add_argument(f"--{prefix}max-vertices", type=int, default=d.max_vertices)
    p.add_argument(f"--{prefix}max-word-len", type=int, default=d.max_word_len)
    p.add_argument(f"--{prefix}max-symbols", type=int, default=d.max_total_symbols)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rewritelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--strict", action="store_true", help="exit 2 on truncation or divergence")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--genome", required=True)
    model.add_argument("--object", required=True)
    _add_bounds(model)

    stat = argparse.ArgumentParser(add_help=False)
    stat.add_argument("--beta", type=float, default=1.0)
    stat.add_argument("--mode", default="iter:1e-12,10000")
    stat.add_argument("--fitness", default="const:0")

    p = sub.add_parser("graph", parents=[common, model], help="build the reduction graph")
    p.add_argument("--dot", help="also write Graphviz DOT here")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("z", parents=[common, model, stat], help="partition sum")
    p.set_defaults(func=cmd_z)

    p = sub.add_parser("sweep", parents=[common, model, stat], help="free energy over a beta grid (CSV)")
    p.add_argument("--betas", required=True, help="comma-separated inverse temperatures")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mincost", parents=[common, model], help="zero-temperature limit")
    p.add_argument("--fitness", default="const:0")
    p.set_defaults(func=cmd_mincost)

    p = sub.add_parser("align", parents=[common], help="global alignment")
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--brute-check", action="store_true")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("evolve", parents=[common, model, stat], help="partition sum over evolved genomes")
    p.add_argument("--egenome", required=True)
    p.add_argument("--beta-prime", type=float, default=1.0)
    p.add_argument("--inner-mode", default="iter:1e-12,10000")
    _add_bounds(p, "inner-")
    p.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    try:
        out, flagged = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    if args.strict and flagged:
        return EXIT_STRICT
    return 0


if __name__ == "__main__":
    sys.exit(main())
