"""Command-line interface: ``pottsmix {lattice,sample,gap,verify}``.

Exit status: 0 ok, 1 configuration error, 2 state-space cap exceeded,
3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dynamics import ALL_DYNAMICS, RestrictedContext
from .exact import (
    DEFAULT_CAP,
    ChainMatrixError,
    build_hb_matrix,
    build_modified_sw_matrix,
    build_Q_matrix,
    build_restricted_hb_matrix,
    build_sw_matrix,
    build_sw_rc_matrix,
    pinned_states,
    spectral_gap,
)
from .exact.suites import SUITES, run_suite, run_tasks
from .exact.verify import (
    pinned_conditional,
    spanning_subsets,
    verify_duality,
    verify_lemma_spanning,
    verify_lemma_vertex,
    verify_prop_modified,
    verify_theorem_main,
    verify_theorem_main_prime,
    verify_tree_gap,
)
from .graph import (
    DualMap,
    Graph,
    GraphError,
    build_dual_square_lattice,
    build_square_lattice,
    build_tree_dual,
    is_tree,
)
from .io import dumps, dumps_lines, format_dual_map, format_edge_list, read_graph_file
from .model import CapExceededError, ModelParams, exact_distribution
from .rng import DEFAULT_SEED, RngStream
from .stats import HISTOGRAM_CAP, run_chain, tv_distance

EXIT_CONFIG, EXIT_CAP, EXIT_VERIFY = 1, 2, 3
CHAINS = ("hb", "sw", "swrc", "msw", "q", "rhb")


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    graph: Graph | None
    dmap: DualMap | None
    params: ModelParams | None
    pin: RestrictedContext | None
    seed: int
    out: str | None
    cap: int
    threads: int


def _pin(text: str) -> RestrictedContext:
    try:
        v, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'v,k'") from None
    return RestrictedContext(v, k)


def _add_graph_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--L", type=int, help="square lattice side length")
    src.add_argument("--graph", help="edge-list file (as written by `lattice`)")


def _add_model_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--q", type=int, required=required)
    temp = p.add_mutually_exclusive_group(required=required)
    temp.add_argument("--beta", type=float)
    temp.add_argument("--p", type=float, help="edge probability; beta = -log(1-p)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pottsmix", description="Potts / random-cluster chains and exact spectral checks.")
    ap.add_argument("--version", action="version", version=f"pottsmix {__version__}")
    ap.add_argument("--list-suites", action="store_true", help="list verification suites and exit")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max states per exact matrix factor")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("lattice", help="emit the L x L lattice (and its dual) as an edge list")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--dual", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("sample", help="run a Markov chain and write its trajectory")
    p.add_argument("--dynamics", choices=ALL_DYNAMICS, required=True)
    _add_graph_args(p)
    _add_model_args(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burnin", type=int, default=0)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--pin", type=_pin, default=None, help="v,k for rhb (default 0,0)")
    p.add_argument("--out", help="trajectory CSV path")

    p = sub.add_parser("gap", help="exact spectral gap of one chain")
    _add_graph_args(p)
    _add_model_args(p)
    p.add_argument("--chain", choices=CHAINS, required=True)
    p.add_argument("--pin", type=_pin, default=None, help="v,k for rhb (default 0,0)")
    p.add_argument("--top", type=int, default=10, help="number of leading eigenvalues to report")
    p.add_argument("--out", help="JSON output path (default stdout)")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_graph_args(p, required=False)
    _add_model_args(p, required=False)
    p.add_argument("--pin", type=_pin, default=None)
    p.add_argument("--out", help="JSON output path (default stdout)")
    return ap


# ----------------------------------------------------------------------------


def _load_graph(args) -> tuple[Graph, DualMap | None]:
    if args.L is not None:
        if args.L < 1:
            raise ConfigError("--L must be >= 1")
        g = build_square_lattice(args.L)
        return g, (build_dual_square_lattice(args.L) if args.L >= 2 else build_tree_dual(g))
    g, dmap = read_graph_file(args.graph)
    if dmap is None and is_tree(g):
        dmap = build_tree_dual(g)
    return g, dmap


def _params(args) -> ModelParams:
    if args.q is None or (args.beta is None and args.p is None):
        raise ConfigError("--q and one of --beta/--p are required")
    return ModelParams(args.q, args.beta) if args.beta is not None else ModelParams.from_p(args.q, args.p)


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_lattice(args) -> int:
    if args.dual:
        text = format_dual_map(build_dual_square_lattice(args.L))
    else:
        text = format_edge_list(build_square_lattice(args.L))
    _write(text, args.out)
    return 0


def cmd_sample(args) -> int:
    g, dmap = _load_graph(args)
    params = _params(args)
    ctx = (args.pin or RestrictedContext(0, 0)) if args.dynamics == "rhb" else None
    if args.dynamics == "msw" and dmap is None:
        raise ConfigError("msw needs a square lattice, a tree, or a graph file with a dual section")
    rng = RngStream(args.seed)
    summary = run_chain(g, params, args.dynamics, args.steps, args.burnin, rng, dmap=dmap, ctx=ctx,
                        thin=args.thin, record_histogram=True, record_states=True)
    if args.out:
        with open(args.out, "w") as fh:
            header = "step,energy,state_index" if summary.states is not None else "step,energy"
            fh.write(header + "\n")
            for i, e in enumerate(summary.energy_series):
                step = args.burnin + 1 + i * args.thin
                if summary.states is not None:
                    fh.write(f"{step},{e},{summary.states[i]}\n")
                else:
                    fh.write(f"{step},{e}\n")
    report = {"dynamics": args.dynamics, "graph": g.name, "q": params.q, "beta": params.beta,
              "steps": args.steps, "burnin": args.burnin, "thin": args.thin, "seed": args.seed,
              "recorded": summary.n_steps, "mean_energy": summary.mean_energy,
              "iat": summary.iat, "iat_stderr": summary.iat_stderr, "notes": summary.notes}
    if summary.state_histogram is not None:
        if args.dynamics == "swrc":
            exact = exact_distribution(g, params, "rc", cap=HISTOGRAM_CAP)
        elif args.dynamics == "rhb":
            exact = np.zeros(params.q**g.n_vertices)
            exact[pinned_states(g, params.q, ctx)] = pinned_conditional(g, params, ctx)
        else:
            exact = exact_distribution(g, params, "potts", cap=HISTOGRAM_CAP)
        report["tv_vs_exact"] = tv_distance(summary.state_histogram, exact)
    sys.stdout.write(dumps(report) + "\n")
    return 0


def build_chain(chain: str, g: Graph, dmap: DualMap | None, params: ModelParams,
                pin: RestrictedContext | None, cap: int):
    if chain == "hb":
        return build_hb_matrix(g, params, cap)
    if chain == "sw":
        return build_sw_matrix(g, params, cap)
    if chain == "swrc":
        return build_sw_rc_matrix(g, params, cap)
    if chain == "q":
        return build_Q_matrix(g, params, cap)
    if chain == "msw":
        if dmap is None:
            raise ConfigError("msw needs a square lattice, a tree, or a graph file with a dual section")
        return build_modified_sw_matrix(dmap, params, cap)
    if chain == "rhb":
        return build_restricted_hb_matrix(g, params, pin or RestrictedContext(0, 0), cap)
    raise ConfigError(f"unknown chain {chain!r}")


def cmd_gap(args) -> int:
    g, dmap = _load_graph(args)
    params = _params(args)
    m = build_chain(args.chain, g, dmap, params, args.pin, args.cap)
    result = spectral_gap(m)
    report = {"chain": args.chain, "graph": g.name, "q": params.q, "beta": params.beta,
              "dim": m.dim, "eigenvalues": result.eigenvalues[: max(args.top, 0)].tolist(),
              "gap": result.gap}
    _write(dumps(report) + "\n", args.out)
    return 0


def _single_instance_rows(suite: str, cfg: RunConfig) -> list[dict]:
    g, dmap, params, cap = cfg.graph, cfg.dmap, cfg.params, cfg.cap
    tasks = []
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name == "lemma3":
            subsets = spanning_subsets(g, None if g.n_edges <= 4 else 10, RngStream(cfg.seed))
            tasks += [lambda E0=E0: verify_lemma_spanning(g, E0, params, cap) for E0 in subsets]
        elif name == "lemma4":
            tasks.append(lambda: verify_lemma_vertex(g, params, cap=cap))
        elif name == "thm1":
            tasks.append(lambda: verify_theorem_main(g, params, cap))
        elif name == "thm1p":
            tasks.append(lambda: verify_theorem_main_prime(g, params, cfg.pin or RestrictedContext(0, 0), cap))
        elif name in ("duality", "prop5", "tree"):
            if dmap is None:
                if suite == "all":
                    continue
                raise ConfigError(f"suite {name} needs a planar dual (lattice, tree, or dual file)")
            if name == "duality":
                tasks.append(lambda: [verify_duality(dmap, params)])
            elif name == "prop5":
                tasks.append(lambda: verify_prop_modified(dmap, params, cap))
            elif is_tree(g):
                tasks.append(lambda: [verify_tree_gap(dmap, params, cap)])
            elif suite != "all":
                raise ConfigError("suite tree needs a tree")
    return run_tasks(tasks, cfg.threads)


def cmd_verify(args) -> int:
    single = args.L is not None or args.graph is not None
    if single:
        g, dmap = _load_graph(args)
        cfg = RunConfig(g, dmap, _params(args), args.pin, args.seed, args.out, args.cap, args.threads)
        rows = _single_instance_rows(args.suite, cfg)
        for r in rows:
            r.setdefault("suite", args.suite)
    else:
        if args.q is not None or args.beta is not None or args.p is not None:
            raise ConfigError("--q/--beta/--p need a graph (--L or --graph)")
        rows = run_suite(args.suite, args.seed, args.threads)
    _write(dumps_lines(rows), args.out)
    failed = [r for r in rows if not r["pass"]]
    for r in failed:
        print(f"FAILED {r['check']} on {r['instance']}: slack {r['slack']:.3g}", file=sys.stderr)
    return EXIT_VERIFY if failed else 0


COMMANDS = {"lattice": cmd_lattice, "sample": cmd_sample, "gap": cmd_gap, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_suites:
        for name, desc in SUITES.items():
            print(f"{name:8s} {desc}")
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except CapExceededError as exc:
        print(f"pottsmix: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConfigError, GraphError, ChainMatrixError, ValueError, OSError) as exc:
        print(f"pottsmix: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
