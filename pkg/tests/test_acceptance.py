"""Acceptance gate.

Each test runs one acceptance check, exact unless noted, under its
wall-clock limit and prints a single PASS/FAIL line to the terminal.
"""

import itertools
import math
import os
import subprocess
import sys
import time
from functools import lru_cache

import networkx as nx
import pytest

from ellipsing import graph as gr
from ellipsing.classes import Cu, El, No, T, Ta, Tr, canonical_cycle, degree, graph_of, t1_dim_hypersurface_cusp
from ellipsing.deform import adjacency_dag, check_balance, constant_moves, lowering_moves_from, reach
from ellipsing.hj import ell_invariant, hj_eval, hj_expand, recognize_wahl, wahl_chains
from ellipsing.quotients import mu3_checks, mu3_fixtures, z2_cusp_graphs


@pytest.fixture
def gate(capsys):
    """Run ``check`` under a wall-clock limit and print one verdict line."""
    def run(title, limit, check):
        start = time.perf_counter()
        error = None
        try:
            check()
        except AssertionError as exc:
            error = exc
        elapsed = time.perf_counter() - start
        ok = error is None and elapsed < limit
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s, limit {limit}s)")
        if error is not None:
            raise error
        assert elapsed < limit, f"{title}: took {elapsed:.2f}s, limit {limit}s"
    return run


def cusp_tuples():
    """Canonical cusp cycles with entries 2..6, length 2..8, some entry > 2."""
    out = []
    for r in range(2, 9):
        for first in range(2, 7):
            for rest in itertools.product(range(first, 7), repeat=r - 1):
                t = (first, *rest)
                if max(t) > 2 and canonical_cycle(t) == t:
                    out.append(t)
    return out


def degree_sweep():
    classes = [Cu(*t) for t in cusp_tuples()]
    classes += [Cu(d) for d in range(1, 10)]
    classes += [No(d) for d in range(1, 11)]
    classes += [Ta(a, b) for a in range(2, 9) for b in range(a, 9) if a + b >= 5]
    classes += [Tr(a, b, c) for a in range(2, 7) for b in range(a, 7) for c in range(b, 7) if a + b + c >= 7]
    return classes


def z2_inputs():
    for k in range(2, 6):
        for e in itertools.product(range(2, 6), repeat=k):
            if max(e) > 2:
                yield e


def laufer_degree(g):
    return -gr.self_intersection(g, gr.fundamental_cycle(g))


def test_degree_table_matches_laufer_oracle(gate):
    def check():
        n = 0
        for c in degree_sweep():
            assert laufer_degree(graph_of(c)) == degree(c), c
            n += 1
        assert n > 33000

    gate("degree table: family formula = Laufer -Z.Z on every template in the sweep", 5, check)


def test_published_point_values(gate):
    def check():
        assert degree(Cu(2, 5)) == degree(Cu(3)) == 3
        assert laufer_degree(graph_of(Cu(2, 5))) == laufer_degree(graph_of(Cu(3))) == 3
        d237 = gr.star_graph(-1, [-2, -3, -7])
        z = gr.fundamental_cycle(d237)
        assert z == (6, 3, 2, 1) and gr.self_intersection(d237, z) == -1
        dims = [t1_dim_hypersurface_cusp(T(*p)) for p in ((3, 3, 5), (3, 3, 4), (2, 3, 12), (2, 3, 9))]
        assert dims == [12, 11, 18, 15]

    gate("point values: -C^2 = 3, Z(D(2,3,7)) = (6,3,2,1), T1 dims 12/11/18/15", 1, check)


def test_hj_round_trip_and_wahl_recognition(gate):
    def check():
        for n in range(2, 201):
            for q in range(1, n):
                if math.gcd(n, q) == 1:
                    assert hj_eval(hj_expand(n, q)) == (n, q)
        for n in range(2, 13):
            for q in range(1, n):
                if math.gcd(n, q) == 1:
                    w = recognize_wahl(hj_expand(n * n, n * q - 1))
                    assert (w.n, w.q) == (n, q)
        for n in range(2, 51):
            for q in range(1, n):
                if math.gcd(n, q) == 1:
                    assert hj_expand(n, pow(q, -1, n)) == hj_expand(n, q).reversed()

    gate("continued fractions: round trip n <= 200, Wahl n <= 12, reversal duality n <= 50", 5, check)


def test_move_engine_invariants(gate):
    oracle = lru_cache(maxsize=None)(lambda c: laufer_degree(graph_of(c)))
    catalog = wahl_chains(6)

    def check():
        n_const = n_low = 0
        for src in degree_sweep():
            for mv in constant_moves(src):
                assert mv.degree_drop == 0 and check_balance(mv)
                assert oracle(mv.source) == degree(mv.source) == degree(mv.target) == oracle(mv.target)
                n_const += 1
            for mv in lowering_moves_from(src, catalog):
                (chain,) = mv.chains
                assert check_balance(mv)
                assert mv.degree_drop == ell_invariant(chain) == sum(b - 2 for b in chain) - 1
                assert oracle(mv.source) == degree(mv.source)
                assert oracle(mv.target) == degree(mv.target) == degree(mv.source) - mv.degree_drop
                n_low += 1
        assert n_const > 0 and n_low > 0

    gate("move engine: constant moves keep degree, Wahl moves (n <= 6) balance, graph oracle agrees", 30, check)


def test_mu3_fixture_suite(gate):
    def check():
        checks = mu3_checks()
        assert all(ok for _, ok in checks), [name for name, ok in checks if not ok]
        big, small = mu3_fixtures()
        path = reach(big.cover, small.cover, 1)
        assert path is not None and len(path) == 1
        assert small.t1_cover < big.t1_cover and small.t1_quotient < big.t1_quotient
        assert (small.t1_cover, big.t1_cover, small.t1_quotient, big.t1_quotient) == (11, 12, 15, 18)
        assert degree(big.cover) == degree(small.cover) == 3

    gate("mu3 fixtures: self-checks, Cu(2,5) -> Cu(3) at depth 1, 11 < 12 and 15 < 18", 1, check)


def quotient_template(e):
    G = nx.Graph()
    k = len(e)
    G.add_nodes_from((("e", i), {"w": -x}) for i, x in enumerate(e))
    G.add_edges_from((("e", i), ("e", i + 1)) for i in range(k - 1))
    for end, tag in ((0, "l"), (k - 1, "r")):
        for j in range(2):
            G.add_node((tag, j), w=-2)
            G.add_edge(("e", end), (tag, j))
    return G


def as_nx(g):
    G = nx.Graph()
    G.add_nodes_from((i, {"w": v.weight}) for i, v in enumerate(g.vertices))
    G.add_edges_from((i, j) for i, j, m in g.edges if m == 1)
    assert all(m == 1 for _, _, m in g.edges)
    return G


def test_z2_quotient_construction(gate):
    def check():
        n = 0
        for e in z2_inputs():
            cover, quot = z2_cusp_graphs(e)
            assert gr.is_negative_definite(cover.matrix) and gr.is_minimally_elliptic(cover)
            expected = 2 * ((e[0] - 2) + (e[-1] - 2) + sum(x - 2 for x in e[1:-1]))
            assert laufer_degree(cover) == expected
            assert gr.is_negative_definite(quot.matrix) and not gr.is_minimally_elliptic(quot)
            assert nx.is_isomorphic(as_nx(quot), quotient_template(e), node_match=lambda a, b: a["w"] == b["w"])
            n += 1
        assert n == sum(4 ** k - 1 for k in range(2, 6))

    gate("Z/2 quotients: cover elliptic with degree 2*sum, quotient matches chain+4 leaves template", 5, check)


def test_negative_definiteness_discrimination(gate):
    matrices = [graph_of(c).matrix for c in degree_sweep()]
    for e in z2_inputs():
        cover, quot = z2_cusp_graphs(e)
        matrices += [cover.matrix, quot.matrix]
    bad = [gr.cycle_graph([-2] * r).matrix for r in range(2, 9)]

    def check():
        assert all(gr.is_negative_definite(M) for M in matrices)
        assert not any(gr.is_negative_definite(M) for M in bad)

    gate(f"negative definiteness: {len(matrices)} templates pass, all-(-2) cycles r = 2..8 fail", 1, check)


DAG_ARGS = ["dag", "--max-degree", "8", "--max-length", "6", "--wahl-max-n", "4"]


def test_dag_termination_and_determinism(gate, tmp_path):
    def check():
        dag = adjacency_dag(8, 6, wahl_chains(4))
        assert dag.is_acyclic()
        G = nx.DiGraph()
        G.add_nodes_from(map(str, dag.nodes))
        G.add_edges_from((str(mv.source), str(mv.target)) for mv in dag.edges)
        assert nx.is_directed_acyclic_graph(G)
        again = adjacency_dag(8, 6, wahl_chains(4))
        assert again.to_dot() == dag.to_dot() and again.to_json() == dag.to_json()
        # separate interpreters with different hash seeds
        for seed in ("0", "4242"):
            dot, js = tmp_path / f"{seed}.dot", tmp_path / f"{seed}.json"
            env = dict(os.environ, PYTHONHASHSEED=seed)
            proc = subprocess.run([sys.executable, "-m", "ellipsing", *DAG_ARGS, "--dot", str(dot), "--json", str(js)],
                                  env=env, capture_output=True, text=True, check=False)
            assert proc.returncode == 0, proc.stderr
            assert dot.read_text(encoding="utf-8") == dag.to_dot()
            assert js.read_text(encoding="utf-8") == dag.to_json()

    gate("adjacency DAG (degree 8, length 6, Wahl n <= 4): acyclic, byte-identical DOT/JSON", 60, check)


def test_reach_paths_terminate():
    # outside the gate: the worked shortest path and the terminal case
    assert len(reach(Tr(3, 3, 3), El(3), 4)) == 4
    assert reach(El(3), Cu(3), 5) is None
