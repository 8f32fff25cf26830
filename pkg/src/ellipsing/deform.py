"""Deformation-adjacency rules as a rewrite system on singularity classes.

Two kinds of move:

* degree-constant moves (cusp fusion, Cu -> El, and the No/Ta/Tr
  degenerations), which keep ``-Z.Z`` fixed;
* degree-lowering moves, which absorb a Wahl chain sitting inside a cusp
  cycle. Absorbing a chain lowers the degree by its l-invariant.

Every move strictly decreases ``(degree, family rank, cycle length)``
lexicographically, so searches over the rules terminate.
"""

from __future__ import annotations

import graphlib
import json
import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

from .classes import (
    FAMILY_RANK,
    Cu,
    El,
    No,
    SingularityClass,
    Ta,
    Tr,
    canonical_cycle,
    degree,
    named,
    parse_class,
    split_args,
)
from .errors import ClassExpressionError
from .hj import HJExpansion, ell_invariant, hj_eval, parse_chain, recognize_wahl

logger = logging.getLogger(__name__)

CONSTANT_RULES = (
    "cu-fuse", "cu-fuse-pair", "cu-el", "no-cu", "ta-cu", "ta-no", "tr-cu", "tr-ta",
)
LOWERING_RULES = ("wahl-fuse", "wahl-fuse-pair", "wahl-el")

MAX_DAG_DEGREE = 12
MAX_DAG_LENGTH = 8


@dataclass(frozen=True)
class Move:
    source: SingularityClass
    target: SingularityClass
    rule: str
    chains: tuple[HJExpansion, ...] = ()
    degree_drop: int = 0

    def __str__(self):
        via = "".join(f" {c}" for c in self.chains)
        return f"{self.source} -> {self.target}  ({self.rule}{via}, l={self.degree_drop})"

    @property
    def label(self) -> str:
        return f"{self.rule} [ℓ={self.degree_drop}]"

    def sort_key(self):
        return (str(self.source), str(self.target), self.rule, tuple(str(c) for c in self.chains))

    def to_dict(self) -> dict:
        return {
            "source": str(self.source),
            "target": str(self.target),
            "rule": self.rule,
            "chains": [str(c) for c in self.chains],
            "degree_drop": self.degree_drop,
        }


def measure(c: SingularityClass) -> tuple[int, int, int]:
    """Termination measure; every move strictly decreases it."""
    c = named(c)
    return degree(c), FAMILY_RANK[c.family], c.length


def _try(build, *args) -> Optional[SingularityClass]:
    try:
        return build(*args)
    except ClassExpressionError as exc:
        logger.debug("suppressed invalid target: %s", exc)
        return None


def _dedup(moves: Iterable[Move]) -> list[Move]:
    out = {}
    for mv in moves:
        out.setdefault(mv.sort_key(), mv)
    return [out[k] for k in sorted(out)]


def constant_moves(c: SingularityClass) -> list[Move]:
    """All degree-constant rule instances with source ``c``."""
    c = named(c)
    fam, p = c.family, c.params
    out: list[tuple[str, Optional[SingularityClass]]] = []
    if fam == "Cu":
        r = len(p)
        if r == 1:
            out.append(("cu-el", _try(El, p[0])))
        elif r == 2:
            out.append(("cu-fuse-pair", _try(Cu, p[0] + p[1] - 4)))
        else:
            for i in range(r):
                rot = p[i:] + p[:i]
                out.append(("cu-fuse", _try(Cu, rot[0] + rot[1] - 2, *rot[2:])))
    elif fam == "No":
        out.append(("no-cu", _try(Cu, p[0])))
    elif fam == "Ta":
        out.append(("ta-cu", _try(Cu, *p)))
        out.append(("ta-no", _try(No, p[0] + p[1] - 4)))
    elif fam == "Tr":
        out.append(("tr-cu", _try(Cu, *p)))
        for k in range(3):
            i, j = [x for x in range(3) if x != k]
            out.append(("tr-ta", _try(Ta, p[i] + p[j] - 2, p[k])))
    return _dedup(Move(c, t, rule) for rule, t in out if t is not None)


# -- marked cusps ----------------------------------------------------------------

Item = Union[int, HJExpansion]


@dataclass(frozen=True)
class MarkedClass:
    """A cusp cycle whose entries are degree entries or bracketed chains.

    Chains must sit between two degree entries (cyclically).
    """

    items: tuple[Item, ...]

    def __post_init__(self):
        items = tuple(x if isinstance(x, int) else HJExpansion(x) for x in self.items)
        object.__setattr__(self, "items", items)
        if not any(isinstance(x, int) for x in items):
            raise ClassExpressionError("a marked class needs at least one degree entry")
        n = len(items)
        for i, x in enumerate(items):
            if isinstance(x, HJExpansion) and n > 1 and isinstance(items[(i + 1) % n], HJExpansion):
                raise ClassExpressionError("two chains are adjacent; chains must sit between degree entries")
        if self.chain_positions and self.degree_entries == 1 and len(self.chain_positions) > 1:
            raise ClassExpressionError("a single degree entry can border only one chain")
        self.source

    def __str__(self):
        return "Cu(" + ",".join(str(x) for x in self.items) + ")"

    @property
    def chain_positions(self) -> list[int]:
        return [i for i, x in enumerate(self.items) if isinstance(x, HJExpansion)]

    @property
    def degree_entries(self) -> int:
        return sum(isinstance(x, int) for x in self.items)

    def flat(self) -> tuple[int, ...]:
        out: list[int] = []
        for x in self.items:
            out.extend([x] if isinstance(x, int) else x.terms)
        return tuple(out)

    @cached_property
    def source(self) -> SingularityClass:
        """The plain cusp obtained by reading every chain as ordinary entries."""
        return Cu(*self.flat())


def parse_marked(text: str) -> MarkedClass:
    """Parse ``Cu(2,[5,2],3,4,5)``."""
    m = re.match(r"^\s*Cu\s*\((.*)\)\s*$", text)
    if not m:
        raise ClassExpressionError(f"marked class must look like Cu(d1,[b1,...],d2,...), got {text!r}")
    items: list[Item] = []
    for arg in split_args(m.group(1)):
        if arg.startswith("["):
            items.append(parse_chain(arg))
        else:
            try:
                items.append(int(arg))
            except ValueError:
                raise ClassExpressionError(f"bad entry {arg!r} in {text!r}") from None
    return MarkedClass(tuple(items))


@lru_cache(maxsize=1024)
def _require_wahl(chain: HJExpansion) -> None:
    if recognize_wahl(chain) is None:
        n, q = hj_eval(chain)
        raise ClassExpressionError(f"chain {chain} is not a Wahl chain: it resolves {n}/{q}, not n^2/(nq-1)")


def lowering_moves(m: MarkedClass) -> list[Move]:
    """Absorb each marked chain in turn (one move per chain)."""
    source = m.source
    r = m.degree_entries
    moves = []
    for p in m.chain_positions:
        rot = m.items[p:] + m.items[:p]
        chain = rot[0]
        _require_wahl(chain)
        ell = ell_invariant(chain)
        if r == 1:
            rule, target = "wahl-el", _try(El, rot[1] - 1)
        else:
            d1, d2 = rot[-1], rot[1]
            rest: list[int] = []
            for x in rot[2:-1]:
                rest.extend([x] if isinstance(x, int) else x.terms)
            if rest:
                rule, target = "wahl-fuse", _try(Cu, d1 + d2 - 1, *rest)
            else:
                rule, target = "wahl-fuse-pair", _try(Cu, d1 + d2 - 3)
        if target is not None:
            moves.append(Move(source, target, rule, (chain,), ell))
    return _dedup(moves)


def placements(c: SingularityClass, chain: HJExpansion) -> list[MarkedClass]:
    """Every way to read ``chain`` as a contiguous run of the cusp cycle ``c``."""
    c = named(c)
    if c.family != "Cu" or c.length < 2:
        return []
    t, k = c.params, len(chain)
    if len(t) <= k or not set(chain.terms) <= set(t):
        return []
    found = {}
    for seq in (t, t[::-1]):
        for s in range(len(t)):
            rot = seq[s:] + seq[:s]
            if rot[:k] == chain.terms:
                mc = MarkedClass((chain,) + rot[k:])
                found.setdefault(str(mc), mc)
    return [found[key] for key in sorted(found)]


def _check_catalog(catalog: Iterable) -> tuple[HJExpansion, ...]:
    chains = tuple(ch if isinstance(ch, HJExpansion) else HJExpansion(ch) for ch in catalog)
    for ch in chains:
        _require_wahl(ch)
    return chains


def lowering_moves_from(c: SingularityClass, chain_catalog: Iterable = ()) -> list[Move]:
    chains = _check_catalog(chain_catalog)
    moves = []
    for ch in chains:
        for mc in placements(c, ch):
            moves.extend(lowering_moves(mc))
    return _dedup(moves)


def successors(c: SingularityClass, chain_catalog: Sequence = ()) -> list[Move]:
    """Constant and lowering moves out of ``c``, in canonical order."""
    moves = constant_moves(c) + lowering_moves_from(c, chain_catalog)
    return sorted(_dedup(moves), key=lambda mv: (str(mv.target), mv.rule, tuple(map(str, mv.chains))))


def check_balance(mv: Move) -> bool:
    """Balance of the fundamental cycle: source degree minus absorbed l equals target degree."""
    ell = sum(ell_invariant(ch) for ch in mv.chains)
    if any(recognize_wahl(ch) is None for ch in mv.chains):
        return False
    return degree(mv.source) - ell == degree(mv.target) and mv.degree_drop == ell


def blowdown_degree(base_degree: int, mults: Sequence[int]) -> int:
    """Degree ``-Z.Z - sum(m_i - 3)`` of the generic fiber after blowing down."""
    if base_degree < 1:
        raise ValueError(f"base degree must be >= 1, got {base_degree}")
    if any(m < 3 for m in mults):
        raise ValueError(f"multiplicities must be >= 3, got {list(mults)}")
    d = base_degree - sum(m - 3 for m in mults)
    if d < 1:
        raise ValueError(f"resulting degree {d} < 1: no minimally elliptic target")
    return d


# -- search ------------------------------------------------------------------------

def reach(src: SingularityClass, tgt: SingularityClass, max_steps: int,
          chain_catalog: Sequence = ()) -> Optional[list[Move]]:
    """Shortest move sequence from ``src`` to ``tgt`` within ``max_steps``, or None.

    Breadth-first; each level is expanded in canonical string order and a
    node keeps the first parent that discovers it.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    chains = _check_catalog(chain_catalog)
    src, tgt = named(src), named(tgt)
    if src == tgt:
        return []
    if not (src.is_elliptic and tgt.is_elliptic):
        return None
    floor = degree(tgt)
    parent: dict[SingularityClass, Move] = {}
    frontier = [src]
    for _ in range(max_steps):
        found = []
        for node in frontier:
            if degree(node) < floor:
                continue
            for mv in successors(node, chains):
                t = mv.target
                if t == src or t in parent:
                    continue
                parent[t] = mv
                if t == tgt:
                    path = [mv]
                    while path[-1].source != src:
                        path.append(parent[path[-1].source])
                    return path[::-1]
                found.append(t)
        if not found:
            break
        frontier = sorted(found, key=str)
    return None


def _cusp_tuples(max_degree: int, length: int) -> list[tuple[int, ...]]:
    """Canonical cusp cycles of a given length with 1 <= degree <= max_degree."""
    out = []

    def grow(prefix, budget, lo):
        if len(prefix) == length:
            if budget < max_degree and canonical_cycle(prefix) == tuple(prefix):
                out.append(tuple(prefix))
            return
        for e in range(lo, budget + 3):
            prefix.append(e)
            grow(prefix, budget - (e - 2), lo)
            prefix.pop()

    for first in range(2, max_degree + 3):
        grow([first], max_degree - (first - 2), first)
    return out


def class_universe(max_degree: int, max_length: int) -> list[SingularityClass]:
    """Elliptic classes of degree <= max_degree and cusp length <= max_length."""
    out: list[SingularityClass] = []
    for d in range(1, max_degree + 1):
        out += [El(d), Cu(d), No(d)]
    for r in range(2, max_length + 1):
        out += [Cu(*t) for t in _cusp_tuples(max_degree, r)]
    for a in range(2, max_degree + 3):
        for b in range(a, max_degree + 3):
            if 5 <= a + b <= max_degree + 4:
                out.append(Ta(a, b))
            for c in range(b, max_degree + 3):
                if 7 <= a + b + c <= max_degree + 6:
                    out.append(Tr(a, b, c))
    return sorted(set(out), key=str)


@dataclass(frozen=True)
class AdjacencyGraph:
    nodes: tuple[SingularityClass, ...]
    edges: tuple[Move, ...]

    def is_acyclic(self) -> bool:
        ts = graphlib.TopologicalSorter()
        for n in self.nodes:
            ts.add(n)
        for mv in self.edges:
            ts.add(mv.target, mv.source)
        try:
            ts.prepare()
        except graphlib.CycleError:
            return False
        return True

    def to_dot(self) -> str:
        lines = ["digraph adjacency {"]
        lines += [f'  "{n}";' for n in self.nodes]
        lines += [f'  "{mv.source}" -> "{mv.target}" [label="{mv.label}"];' for mv in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "nodes": [str(n) for n in self.nodes],
            "edges": [mv.to_dict() for mv in self.edges],
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def adjacency_dag(max_degree: int, max_length: int, chain_catalog: Sequence = ()) -> AdjacencyGraph:
    """Materialize the move relation on the bounded class universe and its closure."""
    if not (1 <= max_degree <= MAX_DAG_DEGREE) or not (1 <= max_length <= MAX_DAG_LENGTH):
        raise ValueError(
            f"bounds out of range: need 1 <= max_degree <= {MAX_DAG_DEGREE}, "
            f"1 <= max_length <= {MAX_DAG_LENGTH}"
        )
    chains = _check_catalog(chain_catalog)
    seen = set(class_universe(max_degree, max_length))
    todo = sorted(seen, key=str)
    edges = []
    while todo:
        node = todo.pop()
        for mv in successors(node, chains):
            edges.append(mv)
            if mv.target not in seen:
                seen.add(mv.target)
                todo.append(mv.target)
    return AdjacencyGraph(
        nodes=tuple(sorted(seen, key=str)),
        edges=tuple(sorted(edges, key=Move.sort_key)),
    )


def parse_class_or_marked(text: str) -> Union[SingularityClass, MarkedClass]:
    """Class expression, or a marked cusp when it contains bracketed chains."""
    if "[" in text:
        return parse_marked(text)
    return parse_class(text)
