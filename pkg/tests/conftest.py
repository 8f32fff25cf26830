import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ellipsing import graph as gr


def brute_fundamental_cycle(g, bound):
    """Componentwise-minimal positive anti-nef cycle, by exhaustive search."""
    M = g.matrix
    n = len(M)
    hits = []
    for D in itertools.product(range(1, bound + 1), repeat=n):
        if all(sum(M[i][j] * D[j] for j in range(n)) <= 0 for i in range(n)):
            hits.append(D)
    assert hits, "bound too small"
    lows = [D for D in hits if all(all(a <= b for a, b in zip(D, E)) for E in hits)]
    assert len(lows) == 1
    return lows[0]


def cf_value(terms):
    """Top-down Fraction evaluation of b1 - 1/(b2 - 1/(...))."""
    if len(terms) == 1:
        return Fraction(terms[0])
    return terms[0] - 1 / cf_value(terms[1:])


@st.composite
def small_graphs(draw, max_vertices=5, allow_minus_one=True, max_genus=1):
    n = draw(st.integers(1, max_vertices))
    lo = -1 if allow_minus_one else -2
    vs = []
    for i in range(n):
        w = draw(st.integers(-6, lo))
        genus = draw(st.sampled_from([0, 0, 0, 0, max_genus]))
        nodes = draw(st.sampled_from([0, 0, 0, 1]))
        vs.append(gr.Vertex(f"v{i}", w, genus, nodes))
    edges = [(draw(st.integers(0, i - 1)), i, draw(st.sampled_from([1, 1, 1, 2]))) for i in range(1, n)]
    if n >= 3 and draw(st.booleans()):
        i, j = draw(st.sampled_from([(a, b) for a in range(n) for b in range(a + 1, n)]))
        edges.append((i, j, 1))
    return gr.DualGraph.build(vs, edges)


@pytest.fixture
def d237():
    return gr.star_graph(-1, [-2, -3, -7])
