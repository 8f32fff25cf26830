"""Resolution dual graphs and cycle arithmetic on them.

A :class:`DualGraph` is a connected weighted graph whose vertices are the
exceptional curves of a resolution. Each vertex carries its self-intersection
(``weight``), geometric genus and a count of self-nodes; edges carry
intersection multiplicities. All arithmetic is over Python integers.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import GraphFormatError, NotNegativeDefiniteError

#: Upper bound on the number of cycles enumerated by :func:`is_minimally_elliptic`.
BRUTE_FORCE_LIMIT = 10**7

_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


@dataclass(frozen=True)
class Vertex:
    name: str
    weight: int
    genus: int = 0
    nodes: int = 0

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise GraphFormatError(f"invalid vertex name {self.name!r}")
        if self.weight > -1:
            raise GraphFormatError(f"vertex {self.name}: weight must be <= -1, got {self.weight}")
        if self.genus < 0 or self.nodes < 0:
            raise GraphFormatError(f"vertex {self.name}: genus and nodes must be >= 0")


@dataclass(frozen=True)
class DualGraph:
    """Weighted dual graph.

    ``edges`` is stored normalized: one ``(i, j, mult)`` triple per adjacent
    pair with ``i < j``, sorted. Use :meth:`build` to construct from loose
    edge lists (repeated pairs add up).
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        n = len(self.vertices)
        if n == 0:
            raise GraphFormatError("graph has no vertices")
        names = [v.name for v in self.vertices]
        if len(set(names)) != n:
            raise GraphFormatError("duplicate vertex names")
        seen = set()
        for i, j, mult in self.edges:
            if not (0 <= i < j < n):
                raise GraphFormatError(f"bad edge ({i}, {j}); self-loops belong in Vertex.nodes")
            if mult < 1:
                raise GraphFormatError(f"edge ({i}, {j}) has multiplicity {mult}")
            if (i, j) in seen:
                raise GraphFormatError(f"edge ({i}, {j}) listed twice")
            seen.add((i, j))
        if not self._connected():
            raise GraphFormatError("graph is not connected")

    @classmethod
    def build(cls, vertices: Iterable[Vertex], edges: Iterable[tuple] = ()) -> "DualGraph":
        """Build a graph, accepting ``(i, j)`` or ``(i, j, mult)`` edges in any order."""
        vertices = tuple(vertices)
        acc: dict[tuple[int, int], int] = {}
        for e in edges:
            i, j = e[0], e[1]
            mult = e[2] if len(e) > 2 else 1
            if i == j:
                raise GraphFormatError(f"self-loop at vertex {i}; use the nodes counter")
            key = (min(i, j), max(i, j))
            acc[key] = acc.get(key, 0) + mult
        return cls(vertices, tuple((i, j, m) for (i, j), m in sorted(acc.items())))

    def _connected(self) -> bool:
        adj = self.adjacency
        seen = {0}
        todo = deque([0])
        while todo:
            v = todo.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in self.vertices]
        for i, j, _ in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.vertices)
        rows = [[0] * n for _ in range(n)]
        for i, v in enumerate(self.vertices):
            rows[i][i] = v.weight
        for i, j, mult in self.edges:
            rows[i][j] = rows[j][i] = mult
        return tuple(tuple(r) for r in rows)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.weight for v in self.vertices)

    def index(self, name: str) -> int:
        for i, v in enumerate(self.vertices):
            if v.name == name:
                return i
        raise KeyError(name)


class Cycle(tuple):
    """Nonnegative integer divisor, one coefficient per vertex of a graph."""

    def __new__(cls, coefficients: Iterable[int]):
        coeffs = tuple(int(c) for c in coefficients)
        if any(c < 0 for c in coeffs):
            raise ValueError(f"cycle coefficients must be nonnegative: {coeffs}")
        return super().__new__(cls, coeffs)

    def is_zero(self) -> bool:
        return not any(self)

    def __repr__(self):
        return f"Cycle({tuple(self)!r})"


def _check_cycle(g: DualGraph, D: Sequence[int]) -> Cycle:
    D = D if isinstance(D, Cycle) else Cycle(D)
    if len(D) != len(g):
        raise ValueError(f"cycle has {len(D)} coefficients, graph has {len(g)} vertices")
    return D


def intersection_matrix(g: DualGraph) -> list[list[int]]:
    """Symmetric matrix with vertex weights on the diagonal, multiplicities off it."""
    return [list(row) for row in g.matrix]


def is_negative_definite(M: Sequence[Sequence[int]]) -> bool:
    """Exact negative-definiteness test via signs of leading principal minors.

    Uses fraction-free (Bareiss) elimination: after step ``k`` the pivot is
    exactly the leading ``(k+1)``-minor, so no rational arithmetic is lost.
    """
    n = len(M)
    A = [list(map(int, row)) for row in M]
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    if A != [list(col) for col in zip(*A)]:
        i, j = next((i, j) for i in range(n) for j in range(n) if A[i][j] != A[j][i])
        raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    if _dominant_negative(A):
        return True
    prev = 1
    for k in range(n):
        pivot = A[k][k]
        # Minor of order k+1 must have sign (-1)^(k+1).
        if pivot == 0 or (pivot > 0) == (k % 2 == 0):
            return False
        tail = A[k][k + 1:]
        for i in range(k + 1, n):
            ri = A[i]
            a = ri[k]
            ri[k + 1:] = [(x * pivot - a * y) // prev for x, y in zip(ri[k + 1:], tail)]
        prev = pivot
    return True


def _dominant_negative(A: list[list[int]]) -> bool:
    """Sufficient test: negative diagonal, weakly dominant rows, a strict row per block.

    A symmetric matrix like this is negative semidefinite by Gershgorin and
    nonsingular by Taussky's theorem on each irreducible block.
    """
    n = len(A)
    strict = []
    for i, row in enumerate(A):
        off = sum(abs(x) for x in row) - abs(row[i])
        if row[i] >= 0 or off > -row[i]:
            return False
        strict.append(off < -row[i])
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack, found = [start], False
        while stack:
            i = stack.pop()
            found = found or strict[i]
            for j, x in enumerate(A[i]):
                if x and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        if not found:
            return False
    return True


def canonical_pairing(g: DualGraph) -> list[int]:
    """K.E_i for each vertex, by adjunction with arithmetic genus ``genus + nodes``."""
    return [-v.weight - 2 + 2 * v.genus + 2 * v.nodes for v in g.vertices]


def self_intersection(g: DualGraph, D: Sequence[int]) -> int:
    D = _check_cycle(g, D)
    M = g.matrix
    return sum(D[i] * sum(M[i][j] * D[j] for j in range(len(D))) for i in range(len(D)))


def chi(g: DualGraph, D: Sequence[int]) -> int:
    """Holomorphic Euler characteristic ``-(D.D + D.K) / 2`` of a nonzero cycle."""
    D = _check_cycle(g, D)
    if D.is_zero():
        raise ValueError("chi is undefined on the zero cycle")
    K = canonical_pairing(g)
    total = self_intersection(g, D) + sum(d * k for d, k in zip(D, K))
    if total % 2:
        raise AssertionError(f"adjunction parity violated for {D}")
    return -total // 2


def require_negative_definite(g: DualGraph) -> None:
    if not is_negative_definite(g.matrix):
        raise NotNegativeDefiniteError("intersection form is not negative definite")


def fundamental_cycle(g: DualGraph) -> Cycle:
    """Laufer's computation sequence.

    Starts from the reduced cycle and repeatedly adds the lowest-index curve
    ``E_i`` with ``Z.E_i > 0``.
    """
    require_negative_definite(g)
    M = g.matrix
    n = len(M)
    Z = [1] * n
    ZE = [sum(row) for row in M]
    while True:
        for i in range(n):
            if ZE[i] > 0:
                break
        else:
            return Cycle(Z)
        Z[i] += 1
        col = M[i]
        for j in range(n):
            ZE[j] += col[j]


def solve_exact(M: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    """Solve ``M x = b`` over the rationals for nonsingular integer ``M``.

    Fraction-free elimination keeps every entry an integer; rationals only
    appear in the back substitution.
    """
    n = len(M)
    A = [list(map(int, row)) + [int(b[i])] for i, row in enumerate(M)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k]), None)
        if p is None:
            raise ValueError("matrix is singular")
        A[k], A[p] = A[p], A[k]
        pivot, tail = A[k][k], A[k][k + 1:]
        for i in range(k + 1, n):
            ri = A[i]
            a = ri[k]
            ri[k + 1:] = [(x * pivot - a * y) // prev for x, y in zip(ri[k + 1:], tail)]
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        row = A[i]
        acc = row[n] - sum(row[j] * x[j] for j in range(i + 1, n))
        x[i] = Fraction(acc) / row[i]
    return x


def anticanonical_cycle(g: DualGraph) -> Optional[Cycle]:
    """The cycle Z_K with ``Z_K.E_i = -K.E_i``, or None if it is not integral."""
    require_negative_definite(g)
    x = solve_exact(g.matrix, [-k for k in canonical_pairing(g)])
    if any(c.denominator != 1 for c in x):
        return None
    coeffs = [int(c) for c in x]
    if any(c < 0 for c in coeffs):
        return None
    return Cycle(coeffs)


def _all_subcycles_positive(g: DualGraph, top: Sequence[int]) -> bool:
    """chi(D) > 0 for every cycle with 0 < D < top (componentwise)."""
    size = 1
    for z in top:
        size *= z + 1
    if size > BRUTE_FORCE_LIMIT:
        raise ValueError(f"subcycle search space {size} exceeds {BRUTE_FORCE_LIMIT}")
    M = g.matrix
    K = canonical_pairing(g)
    n = len(top)
    top = tuple(top)
    for D in itertools.product(*(range(z + 1) for z in top)):
        if D == top or not any(D):
            continue
        total = 0
        for i in range(n):
            di = D[i]
            if di:
                total += di * (sum(M[i][j] * D[j] for j in range(n)) + K[i])
        if total >= 0:  # chi(D) = -total/2 <= 0
            return False
    return True


def laufer_criterion(g: DualGraph) -> bool:
    """chi(Z) = 0 and chi(D) > 0 for every 0 < D < Z.

    Only meaningful on a minimal resolution: blowing up a point adds cycles
    ``Z - E`` with ``chi = chi(Z)``.
    """
    Z = fundamental_cycle(g)
    return chi(g, Z) == 0 and _all_subcycles_positive(g, Z)


def is_minimally_elliptic(g: DualGraph) -> bool:
    """Minimal ellipticity, stable under blow-ups.

    The anticanonical cycle Z_K must be integral and nonzero with chi(D) > 0
    for every ``0 < D < Z_K``. On a minimal resolution Z_K is anti-nef, so
    this forces Z_K = Z and agrees with :func:`laufer_criterion`; unlike
    that test it also accepts non-minimal good resolutions such as stars
    with a (-1)-centre.
    """
    fundamental_cycle(g)
    ZK = anticanonical_cycle(g)
    if ZK is None or ZK.is_zero():
        return False
    return _all_subcycles_positive(g, ZK)


def singular_point_count(g: DualGraph) -> int:
    """Number of singular points of the reduced exceptional curve."""
    return sum(m for _, _, m in g.edges) + sum(v.nodes for v in g.vertices)


# -- text format -------------------------------------------------------------

def parse_graph(text: str) -> DualGraph:
    """Parse the line-based graph format.

    ::

        # comment
        vertex <name> weight=<int> [genus=<int>] [nodes=<int>]
        edge <name> <name> [mult=<int>]
    """
    vertices: list[Vertex] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        positional = [t for t in rest if "=" not in t]
        opts = {}
        for tok in rest:
            if "=" in tok:
                key, _, val = tok.partition("=")
                if key in opts:
                    raise GraphFormatError(f"duplicate option {key!r}", lineno)
                try:
                    opts[key] = int(val)
                except ValueError:
                    raise GraphFormatError(f"option {key!r} needs an integer, got {val!r}", lineno) from None
        if head == "vertex":
            if len(positional) != 1:
                raise GraphFormatError("expected: vertex <name> weight=<int> [genus=<int>] [nodes=<int>]", lineno)
            unknown = set(opts) - {"weight", "genus", "nodes"}
            if unknown:
                raise GraphFormatError(f"unknown vertex option(s) {sorted(unknown)}", lineno)
            if "weight" not in opts:
                raise GraphFormatError("vertex needs weight=<int>", lineno)
            name = positional[0]
            if name in index:
                raise GraphFormatError(f"duplicate vertex {name!r}", lineno)
            try:
                v = Vertex(name, opts["weight"], opts.get("genus", 0), opts.get("nodes", 0))
            except GraphFormatError as exc:
                raise GraphFormatError(str(exc), lineno) from None
            index[name] = len(vertices)
            vertices.append(v)
        elif head == "edge":
            if len(positional) != 2:
                raise GraphFormatError("expected: edge <name> <name> [mult=<int>]", lineno)
            unknown = set(opts) - {"mult"}
            if unknown:
                raise GraphFormatError(f"unknown edge option(s) {sorted(unknown)}", lineno)
            a, b = positional
            for name in (a, b):
                if name not in index:
                    raise GraphFormatError(f"edge references undeclared vertex {name!r}", lineno)
            if a == b:
                raise GraphFormatError("self-loop edge; use nodes=<int> on the vertex", lineno)
            mult = opts.get("mult", 1)
            if mult < 1:
                raise GraphFormatError("mult must be >= 1", lineno)
            edges.append((index[a], index[b], mult))
        else:
            raise GraphFormatError(f"unknown directive {head!r}", lineno)
    return DualGraph.build(vertices, edges)


def read_graph(path) -> DualGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def format_graph(g: DualGraph) -> str:
    lines = []
    for v in g.vertices:
        parts = [f"vertex {v.name} weight={v.weight}"]
        if v.genus:
            parts.append(f"genus={v.genus}")
        if v.nodes:
            parts.append(f"nodes={v.nodes}")
        lines.append(" ".join(parts))
    for i, j, m in g.edges:
        tail = f" mult={m}" if m != 1 else ""
        lines.append(f"edge {g.vertices[i].name} {g.vertices[j].name}{tail}")
    return "\n".join(lines) + "\n"


# -- small constructors used by the class templates ----------------------------

def chain_graph(weights: Sequence[int]) -> DualGraph:
    vs = [Vertex(f"E{i + 1}", w) for i, w in enumerate(weights)]
    return DualGraph.build(vs, [(i, i + 1) for i in range(len(vs) - 1)])


def cycle_graph(weights: Sequence[int]) -> DualGraph:
    """Cycle of rational curves; length 1 is a nodal curve, length 2 a double edge."""
    r = len(weights)
    if r == 1:
        return DualGraph((Vertex("E1", weights[0], nodes=1),))
    vs = [Vertex(f"E{i + 1}", w) for i, w in enumerate(weights)]
    if r == 2:
        return DualGraph.build(vs, [(0, 1, 2)])
    return DualGraph.build(vs, [(i, (i + 1) % r) for i in range(r)])


def star_graph(center: int, arms: Sequence[int]) -> DualGraph:
    vs = [Vertex("E0", center)] + [Vertex(f"E{i + 1}", w) for i, w in enumerate(arms)]
    return DualGraph.build(vs, [(0, i + 1) for i in range(len(arms))])
