"""Named verification suites over the standard instance matrix."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

from ..dynamics import RestrictedContext
from ..graph import (
    Graph,
    build_dual_square_lattice,
    build_square_lattice,
    build_tree_dual,
    cycle_graph,
    path_graph,
    star_graph,
)
from ..model import ModelParams, critical_beta, self_dual_p
from ..rng import RngStream
from .verify import (
    spanning_subsets,
    verify_duality,
    verify_lemma_spanning,
    verify_lemma_vertex,
    verify_prop_modified,
    verify_theorem_main,
    verify_theorem_main_prime,
    verify_tree_gap,
)

Task = Callable[[], list[dict]]


def _k2() -> Graph:
    g = path_graph(2)
    return Graph(g.n_vertices, g.edges, "K2")


def comparison_instances() -> list[tuple[Graph, ModelParams]]:
    """{K2, P3, G2, C4} x {q=2,3} x {beta=0.3, beta_c(q), 1.5}."""
    graphs = [_k2(), path_graph(3), build_square_lattice(2), cycle_graph(4)]
    return [(g, ModelParams(q, b)) for g in graphs for q in (2, 3)
            for b in (0.3, critical_beta(q), 1.5)]


def _lemma3_tasks(rng: RngStream) -> list[Task]:
    tasks = []
    for q in (2, 3):
        for beta in (0.5, 1.0):
            params = ModelParams(q, beta)
            k2, g2 = _k2(), build_square_lattice(2)
            for E0 in spanning_subsets(k2, None, rng):
                tasks.append(lambda g=k2, E0=E0, pr=params: verify_lemma_spanning(g, E0, pr))
            for E0 in spanning_subsets(g2, 10, rng):
                tasks.append(lambda g=g2, E0=E0, pr=params: verify_lemma_spanning(g, E0, pr))
    return tasks


def _lemma4_tasks() -> list[Task]:
    g2 = build_square_lattice(2)
    return [lambda b=b: verify_lemma_vertex(g2, ModelParams(2, b)) for b in (0.5, 1.0)]


def _thm1_tasks() -> list[Task]:
    return [lambda g=g, pr=pr: verify_theorem_main(g, pr) for g, pr in comparison_instances()]


def _thm1p_tasks() -> list[Task]:
    cases = [(star_graph(4), RestrictedContext(0, 0)), (build_square_lattice(2), RestrictedContext(0, 0))]
    return [lambda g=g, c=c, b=b: verify_theorem_main_prime(g, ModelParams(2, b), c)
            for g, c in cases for b in (0.5, 1.0)]


def _prop5_tasks() -> list[Task]:
    dmap = build_dual_square_lattice(2)
    return [lambda p=p: verify_prop_modified(dmap, ModelParams.from_p(2, p))
            for p in (0.4, self_dual_p(2), 0.7)]


def _tree_tasks() -> list[Task]:
    dmaps = [build_tree_dual(path_graph(4)), build_tree_dual(star_graph(3))]
    return [lambda d=d, q=q, b=b: [verify_tree_gap(d, ModelParams(q, b))]
            for d in dmaps for q in (2, 3) for b in (0.5, 2.0)]


def _duality_tasks() -> list[Task]:
    dmap = build_dual_square_lattice(3)
    return [lambda q=q, p=p: [verify_duality(dmap, ModelParams.from_p(q, p))]
            for q in (2, 3) for p in (0.3, self_dual_p(q), 0.7)]


SUITES: dict[str, str] = {
    "duality": "mu_p(A) = mu*_{p*}(A_D) on G3 for all 4096 RC states",
    "lemma3": "spanning-subgraph sandwich on K2 (all E0) and G2 (10 random E0)",
    "lemma4": "single-vertex recoloring bound on G2, q=2",
    "thm1": "SW vs heat-bath gap comparison, the intermediate Q chain and spin/RC gap equality",
    "thm1p": "pinned-vertex comparison on K1_4 (center) and G2 (corner)",
    "prop5": "modified SW gap dominates primal and dual SW gaps on G2",
    "tree": "modified SW on trees has gap 1",
}


def suite_tasks(name: str, seed: int) -> list[Task]:
    if name == "duality":
        return _duality_tasks()
    if name == "lemma3":
        return _lemma3_tasks(RngStream(seed))
    if name == "lemma4":
        return _lemma4_tasks()
    if name == "thm1":
        return _thm1_tasks()
    if name == "thm1p":
        return _thm1p_tasks()
    if name == "prop5":
        return _prop5_tasks()
    if name == "tree":
        return _tree_tasks()
    raise ValueError(f"unknown suite {name!r}")


def run_tasks(tasks: list[Task], threads: int = 1) -> list[dict]:
    """Run tasks, concatenating their rows in task order regardless of threading."""
    if threads <= 1:
        results = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda t: t(), tasks))
    return [row for rows in results for row in rows]


def run_suite(name: str, seed: int, threads: int = 1) -> list[dict]:
    names = list(SUITES) if name == "all" else [name]
    rows = []
    for n in names:
        for row in run_tasks(suite_tasks(n, seed), threads):
            rows.append(dict(row, suite=n))
    return rows
