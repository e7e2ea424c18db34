"""Command-line interface: ``specdist <command> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 bad input data,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .distance import DEFAULT_SIGMA, build_density, classify, default_grid, spectral_distance
from .eigen import EigensolverError
from .experiments import (DistanceMatrix, SpectrumCache, experiment_growth, experiment_rate,
                          experiment_trees, load_graph, matrix_from_directory)
from .generators import SpecParseError, generate, parse_spec
from .graph import GraphError, average_degree, read_labeled_edge_list, write_edge_list, write_label_map
from .spectral import edge_laplacian_spectrum, spectrum, write_spectrum

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("specdist")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA, help="kernel bandwidth (default 0.05)")
    p.add_argument("--grid-step", type=float, default=None, help="quadrature step (default sigma/20)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    return p


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="specdist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"specdist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="write a graph as an edge list")
    p.add_argument("spec", help='e.g. "complete:n=4", "tree:k=4,depth=6", "ba:n=1000,m=2,init=5"')

    p = sub.add_parser("spectrum", parents=[common], help="normalized-Laplacian spectrum as CSV")
    p.add_argument("graph")
    p.add_argument("--edge", action="store_true", help="edge-Laplacian spectrum instead")

    p = sub.add_parser("distance", parents=[common], help="spectral distance between two graphs")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--density-out", default=None, metavar="PREFIX",
                   help="also write PREFIX_a.csv and PREFIX_b.csv density samples")

    p = sub.add_parser("matrix", parents=[common], help="distance matrix over a directory of edge lists")
    p.add_argument("directory")
    p.add_argument("--pattern", default="*", help="glob for graph files (default *)")

    p = sub.add_parser("classify", parents=[common], help="rank spectral class templates")
    p.add_argument("graph")
    p.add_argument("--semicircle", action="store_true",
                   help="include the semicircle template for the graph's average degree")

    p = sub.add_parser("ingest", parents=[common],
                       help="relabel an arbitrary-label edge list to the canonical format")
    p.add_argument("source")
    p.add_argument("--label-map", required=True, help="where to write the index->label map")

    exp = sub.add_parser("experiment", help="reproduction experiments")
    esub = exp.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    p = esub.add_parser("growth", parents=[common], help="distance vs size for growing random graphs")
    p.add_argument("--model", choices=["ba", "er"], default="ba")
    p.add_argument("--base-n", type=int, default=1000)
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--step-size", type=int, default=1000)
    p.add_argument("--avg-degree", type=float, default=4.0)
    p.add_argument("--m", type=int, default=None, help="BA edges per step (default avg-degree/2)")
    p.add_argument("--init", type=int, default=5, help="size of the initial complete graph")

    p = esub.add_parser("trees", parents=[common], help="distance vs size for k-regular trees")
    p.add_argument("--k", type=_int_list, default=[3, 4], help="comma-separated degrees (default 3,4)")
    p.add_argument("--base-size", type=int, default=100)
    p.add_argument("--steps", type=int, default=10)

    p = esub.add_parser("rate", parents=[common], help="log-log convergence rate of D")
    p.add_argument("family", choices=["complete", "bipartite", "star", "path", "cycle", "cube", "er"])
    p.add_argument("--sizes", type=_int_list, required=True, help="comma-separated sizes")
    p.add_argument("--edit", choices=["succ", "delete-edge"], default="succ")
    p.add_argument("--avg-degree", type=float, default=10.0)
    return parser


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _grid(args):
    try:
        grid = default_grid(args.sigma, args.grid_step)
        grid.check(args.sigma)
        return grid
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_generate(args) -> int:
    try:
        spec = parse_spec(args.spec)
    except SpecParseError as exc:
        raise UsageError(str(exc)) from None
    try:
        g = generate(spec, args.seed)
    except GraphError as exc:
        raise UsageError(f"invalid parameters: {exc}") from None
    _emit(write_edge_list(g), args.output)
    print(f"n {g.n} edges {g.num_edges} average_degree {average_degree(g):.6g}",
          file=sys.stderr if args.output is None else sys.stdout)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g = load_graph(Path(args.graph))
    s = edge_laplacian_spectrum(g) if args.edge else spectrum(g)
    _emit(write_spectrum(s), args.output)
    return EXIT_OK


def cmd_distance(args) -> int:
    grid = _grid(args)
    cache = SpectrumCache()
    da = build_density(cache.get(Path(args.graph_a)), args.sigma, grid)
    db = build_density(cache.get(Path(args.graph_b)), args.sigma, grid)
    d = spectral_distance(da, db)
    _emit(f"D {d:.17g} sigma {args.sigma!r} grid_step {grid.h!r}\n", args.output)
    if args.density_out:
        Path(f"{args.density_out}_a.csv").write_text(da.to_csv(), encoding="utf-8")
        Path(f"{args.density_out}_b.csv").write_text(db.to_csv(), encoding="utf-8")
    return EXIT_OK


def cmd_matrix(args) -> int:
    grid = _grid(args)
    directory = Path(args.directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    dm = matrix_from_directory(directory, args.sigma, grid, pattern=args.pattern)
    header = [f"specdist {__version__}", f"directory {directory}", f"sigma {args.sigma!r}",
              f"grid_step {grid.h!r}"]
    csv_text = dm.to_csv(header)
    if args.output:
        stem = Path(args.output)
        stem = stem.with_suffix("") if stem.suffix in (".csv", ".svg") else stem
        stem.with_suffix(".csv").write_text(csv_text, encoding="utf-8")
        stem.with_suffix(".svg").write_text(dm.to_svg(), encoding="utf-8")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_classify(args) -> int:
    g = load_graph(Path(args.graph))
    s = spectrum(g)
    w = average_degree(g) if args.semicircle else None
    lines = [f"# sigma {args.sigma!r}"]
    for c in classify(s, args.sigma, _grid(args), avg_degree=w):
        extra = f" dropped_mass {c.dropped_mass:.6g}" if c.dropped_mass else ""
        lines.append(f"{c.template.name} {c.distance:.17g}{extra}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_ingest(args) -> int:
    g, labels = read_labeled_edge_list(Path(args.source).read_text(encoding="utf-8"))
    _emit(write_edge_list(g), args.output)
    Path(args.label_map).write_text(write_label_map(labels), encoding="utf-8")
    return EXIT_OK


def cmd_experiment(args) -> int:
    grid = _grid(args)
    if args.experiment == "growth":
        table = experiment_growth(args.model, args.base_n, args.steps, args.step_size, args.avg_degree,
                                  args.m, args.init, args.seed, args.sigma, grid)
    elif args.experiment == "trees":
        table = experiment_trees(args.k, args.base_size, args.steps, args.seed, args.sigma, grid)
    else:
        table, fit = experiment_rate(args.family, args.sizes, args.edit, args.avg_degree, args.seed,
                                     args.sigma, grid)
        if fit is None:
            print("rate fit skipped: need >= 4 sizes and all distances > 0", file=sys.stderr)
        else:
            print(f"slope {fit.slope:.6g} intercept {fit.intercept:.6g} residual {fit.residual:.3g}",
                  file=sys.stderr)
    _emit(table.to_csv(), args.output)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate, "spectrum": cmd_spectrum, "distance": cmd_distance,
    "matrix": cmd_matrix, "classify": cmd_classify, "ingest": cmd_ingest,
    "experiment": cmd_experiment,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"specdist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EigensolverError as exc:
        print(f"specdist: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GraphError, OSError, ValueError) as exc:
        print(f"specdist: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
