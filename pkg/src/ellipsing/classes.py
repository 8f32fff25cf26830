"""Named singularity families and the bridge to their dual graphs.

Families: simple elliptic ``El(d)``, cusps ``Cu(d1,...,dr)``, the Dolgachev
stars ``D(b1,b2,b3)`` with their Node/Tacnode/Triangle names ``No``, ``Ta``,
``Tr``, cyclic quotients ``CQ(n/q)`` and ``Unknown`` for everything else.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import asdict, dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from . import graph as gr
from .errors import ClassExpressionError, NotNegativeDefiniteError
from .hj import hj_eval, hj_expand, parse_fraction

ELLIPTIC_FAMILIES = ("El", "Cu", "No", "Ta", "Tr", "D")
#: Rank used by the termination measure of the adjacency rules.
FAMILY_RANK = {"Tr": 4, "Ta": 3, "No": 2, "Cu": 1, "El": 0}


def canonical_cycle(entries: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation or reflection of a cyclic tuple."""
    return _canonical_cycle(tuple(entries))


@lru_cache(maxsize=65536)
def _canonical_cycle(t: tuple[int, ...]) -> tuple[int, ...]:
    r = len(t)
    best = t
    for seq in (t, t[::-1]):
        lo = min(seq)
        for s in range(r):
            if seq[s] != lo:
                continue
            cand = seq[s:] + seq[:s]
            if cand < best:
                best = cand
    return best


def _fail(msg):
    raise ClassExpressionError(msg)


@dataclass(frozen=True, order=True)
class SingularityClass:
    """A named family plus its parameters, always held in canonical form."""

    family: str
    params: tuple

    def __post_init__(self):
        fam, p = self.family, tuple(self.params)
        if fam == "Unknown":
            if len(p) != 1 or not isinstance(p[0], str):
                _fail("Unknown takes a single fingerprint string")
            object.__setattr__(self, "params", p)
            return
        if not all(isinstance(x, int) for x in p):
            _fail(f"{fam} parameters must be integers")
        if fam == "El":
            if len(p) != 1 or p[0] < 1:
                _fail(f"El(d) needs d >= 1, got {p}")
        elif fam == "Cu":
            if not p:
                _fail("Cu needs at least one entry")
            if len(p) == 1:
                if p[0] < 1:
                    _fail(f"Cu(d) needs d >= 1, got {p}")
            else:
                if min(p) < 2 or max(p) == 2:
                    _fail(f"Cu{p}: entries must be >= 2 with at least one > 2")
                p = canonical_cycle(p)
        elif fam == "No":
            if len(p) != 1 or p[0] < 1:
                _fail(f"No(d) needs d >= 1, got {p}")
        elif fam == "Ta":
            if len(p) != 2 or min(p) < 2 or sum(p) < 5:
                _fail(f"Ta(d1,d2) needs d_i >= 2 and d1+d2 >= 5, got {p}")
            p = tuple(sorted(p))
        elif fam == "Tr":
            if len(p) != 3 or min(p) < 2 or sum(p) < 7:
                _fail(f"Tr(d1,d2,d3) needs d_i >= 2 and d1+d2+d3 >= 7, got {p}")
            p = tuple(sorted(p))
        elif fam == "D":
            if len(p) != 3 or min(p) < 2:
                _fail(f"D(b1,b2,b3) needs three entries >= 2, got {p}")
            b1, b2, b3 = p
            # star with a -1 centre is negative definite iff 1/b1 + 1/b2 + 1/b3 < 1
            if b1 * b2 + b1 * b3 + b2 * b3 >= b1 * b2 * b3:
                _fail(f"D{p} is not negative definite (1/b1+1/b2+1/b3 >= 1)")
            p = tuple(sorted(p))
        elif fam == "CQ":
            if len(p) != 2:
                _fail("CQ takes (n, q)")
            try:
                hj_expand(*p)
            except ValueError as exc:
                _fail(str(exc))
        else:
            _fail(f"unknown family {fam!r}")
        object.__setattr__(self, "params", p)

    def __str__(self):
        if self.family == "CQ":
            return f"CQ({self.params[0]}/{self.params[1]})"
        return f"{self.family}({','.join(map(str, self.params))})"

    @property
    def length(self) -> int:
        """Cycle length r for cusps, 0 otherwise."""
        return len(self.params) if self.family == "Cu" else 0

    @property
    def is_elliptic(self) -> bool:
        return self.family in ELLIPTIC_FAMILIES


def El(d: int) -> SingularityClass:
    return SingularityClass("El", (d,))


def Cu(*entries: int) -> SingularityClass:
    return SingularityClass("Cu", tuple(entries))


def No(d: int) -> SingularityClass:
    return SingularityClass("No", (d,))


def Ta(d1: int, d2: int) -> SingularityClass:
    return SingularityClass("Ta", (d1, d2))


def Tr(d1: int, d2: int, d3: int) -> SingularityClass:
    return SingularityClass("Tr", (d1, d2, d3))


def Dolgachev(b1: int, b2: int, b3: int) -> SingularityClass:
    return SingularityClass("D", (b1, b2, b3))


def CyclicQuotient(n: int, q: int) -> SingularityClass:
    return SingularityClass("CQ", (n, q))


def Unknown(fingerprint: str) -> SingularityClass:
    return SingularityClass("Unknown", (fingerprint,))


def dolgachev_of(c: SingularityClass) -> SingularityClass:
    """Star parameters: No(d)=D(2,3,6+d), Ta=D(2,d1+2,d2+2), Tr=D(d1+1,d2+1,d3+1)."""
    p = c.params
    if c.family == "D":
        return c
    if c.family == "No":
        return Dolgachev(2, 3, 6 + p[0])
    if c.family == "Ta":
        return Dolgachev(2, p[0] + 2, p[1] + 2)
    if c.family == "Tr":
        return Dolgachev(*(d + 1 for d in p))
    raise ClassExpressionError(f"{c} is not a Dolgachev star")


def named(c: SingularityClass) -> SingularityClass:
    """Rename a Dolgachev star as No/Ta/Tr; other classes pass through."""
    if c.family != "D":
        return c
    b1, b2, b3 = c.params
    if b1 == 2 and b2 == 3:
        return No(b3 - 6)
    if b1 == 2:
        return Ta(b2 - 2, b3 - 2)
    return Tr(b1 - 1, b2 - 1, b3 - 1)


def _star_arms(c: SingularityClass) -> tuple[int, ...]:
    p = c.params
    if c.family == "No":
        return (2, 3, 6 + p[0])
    if c.family == "Ta":
        return (2, p[0] + 2, p[1] + 2)
    if c.family == "Tr":
        return tuple(d + 1 for d in p)
    return p


def graph_of(c: SingularityClass) -> gr.DualGraph:
    fam, p = c.family, c.params
    if fam == "El":
        return gr.DualGraph((gr.Vertex("E1", -p[0], genus=1),))
    if fam == "Cu":
        return gr.cycle_graph([-d for d in p])
    if fam in ("No", "Ta", "Tr", "D"):
        return gr.star_graph(-1, [-b for b in _star_arms(c)])
    if fam == "CQ":
        return gr.chain_graph([-b for b in hj_expand(*p)])
    raise ClassExpressionError(f"no graph template for {c}")


def degree(c: SingularityClass) -> int:
    """-Z.Z from the family formula."""
    fam, p = c.family, c.params
    if fam == "D":
        return degree(named(c))
    if fam in ("El", "No"):
        return p[0]
    if fam == "Cu":
        return p[0] if len(p) == 1 else sum(d - 2 for d in p)
    if fam == "Ta":
        return p[0] + p[1] - 4
    if fam == "Tr":
        return sum(p) - 6
    raise ClassExpressionError(f"{c} is not minimally elliptic; no degree")


def graph_fingerprint(g: gr.DualGraph) -> str:
    parts = [f"{v.weight}:{v.genus}:{v.nodes}" for v in g.vertices]
    parts += [f"{i}-{j}x{m}" for i, j, m in g.edges]
    return hashlib.sha1("|".join(parts).encode()).hexdigest()[:12]


def _plain_rational(v: gr.Vertex) -> bool:
    return v.genus == 0 and v.nodes == 0


def _walk_cycle(g: gr.DualGraph) -> list[int] | None:
    adj = g.adjacency
    n = len(g)
    if any(len(a) != 2 for a in adj) or any(m != 1 for _, _, m in g.edges):
        return None
    order, prev, cur = [0], None, 0
    while True:
        a, b = adj[cur]
        nxt = b if a == prev else a
        if nxt == 0:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order if len(order) == n else None


def _walk_chain(g: gr.DualGraph) -> list[int] | None:
    adj = g.adjacency
    n = len(g)
    if any(m != 1 for _, _, m in g.edges) or len(g.edges) != n - 1:
        return None
    ends = [i for i in range(n) if len(adj[i]) == 1]
    if len(ends) != 2 or any(len(a) > 2 for a in adj):
        return None
    start = min(ends)
    order, prev = [start], None
    while len(order) < n:
        cur = order[-1]
        nxt = [w for w in adj[cur] if w != prev][0]
        prev = cur
        order.append(nxt)
    return order


def classify_graph(g: gr.DualGraph) -> SingularityClass:
    """Recognize the family a resolution graph belongs to."""
    if not gr.is_negative_definite(g.matrix):
        raise NotNegativeDefiniteError("intersection form is not negative definite")
    vs = g.vertices
    unknown = Unknown(graph_fingerprint(g))
    try:
        if len(vs) == 1:
            v = vs[0]
            if v.genus == 1 and v.nodes == 0:
                return El(-v.weight)
            if v.genus == 0 and v.nodes == 1:
                return Cu(-v.weight)
            if _plain_rational(v):
                return CyclicQuotient(*hj_eval([-v.weight]))
            return unknown
        if not all(_plain_rational(v) for v in vs):
            return unknown
        if len(vs) == 2 and g.edges == ((0, 1, 2),):
            return Cu(-vs[0].weight, -vs[1].weight)
        if len(vs) >= 3:
            order = _walk_cycle(g)
            if order is not None:
                return Cu(*(-vs[i].weight for i in order))
        star = _star(g)
        if star is not None:
            return star
        order = _walk_chain(g)
        if order is not None:
            return CyclicQuotient(*hj_eval([-vs[i].weight for i in order]))
    except (ClassExpressionError, ValueError):
        pass
    return unknown


def _star(g: gr.DualGraph) -> SingularityClass | None:
    if len(g) != 4 or len(g.edges) != 3 or any(m != 1 for _, _, m in g.edges):
        return None
    adj = g.adjacency
    centers = [i for i in range(4) if len(adj[i]) == 3]
    if len(centers) != 1 or g.vertices[centers[0]].weight != -1:
        return None
    arms = [-g.vertices[i].weight for i in adj[centers[0]]]
    return named(Dolgachev(*arms))


# -- predicates ---------------------------------------------------------------

@dataclass(frozen=True)
class Predicates:
    is_lci: bool
    is_hypersurface: bool
    el_smoothable: bool
    nf_component: bool
    fc_chi_smooth: bool

    def to_dict(self) -> dict:
        return asdict(self)


def predicates(c: SingularityClass) -> Predicates:
    """Degree thresholds for lci, hypersurface, smoothability and NF components."""
    if not c.is_elliptic:
        raise ClassExpressionError(f"predicates need a minimally elliptic class, got {c}")
    d = degree(c)
    return Predicates(
        is_lci=d <= 4,
        is_hypersurface=d <= 3,
        el_smoothable=1 <= d <= 9,
        nf_component=d >= 10,
        fc_chi_smooth=d in (1, 2),
    )


# -- lci cusp equations ----------------------------------------------------------

@dataclass(frozen=True)
class CuspEquation:
    """``T(p,q,r): x^p+y^q+z^r-xyz`` or ``Pi(p,q,r,s): x^p+w^r=yz, y^q+z^s=xw``."""

    variant: str
    params: tuple[int, ...]

    def __post_init__(self):
        want = {"T": 3, "Pi": 4}.get(self.variant)
        if want is None:
            raise ClassExpressionError(f"unknown cusp equation variant {self.variant!r}")
        if len(self.params) != want or any(not isinstance(x, int) or x <= 1 for x in self.params):
            raise ClassExpressionError(f"{self.variant} needs {want} integers > 1, got {self.params}")

    def __str__(self):
        return f"{self.variant}({','.join(map(str, self.params))})"

    def equation(self) -> str:
        if self.variant == "T":
            p, q, r = self.params
            return f"x^{p}+y^{q}+z^{r}-xyz"
        p, q, r, s = self.params
        return f"x^{p}+w^{r}-yz, y^{q}+z^{s}-xw"


def T(p: int, q: int, r: int) -> CuspEquation:
    return CuspEquation("T", (p, q, r))


def Pi(p: int, q: int, r: int, s: int) -> CuspEquation:
    return CuspEquation("Pi", (p, q, r, s))


def is_lci_cusp(eq: CuspEquation) -> bool:
    if eq.variant == "T":
        return sum(Fraction(1, x) for x in eq.params) < 1
    p, q, r, s = eq.params
    return (Fraction(1, p) + Fraction(1, r)) * (Fraction(1, q) + Fraction(1, s)) < 1


def t1_dim_hypersurface_cusp(eq: CuspEquation) -> int:
    """dim T^1 of the hypersurface cusp T(p,q,r), which is p+q+r+1."""
    if eq.variant != "T":
        raise ClassExpressionError("T^1 dimension is only available for T(p,q,r)")
    if not is_lci_cusp(eq):
        raise ClassExpressionError(f"{eq} is not a cusp: 1/p+1/q+1/r must be < 1")
    return sum(eq.params) + 1


def delta_dimension(dim_M: int, m: int) -> int:
    """Dimension of the simple-elliptic stratum of multiplicity ``m <= 4``."""
    if m > 4:
        raise ValueError(f"delta_dimension requires multiplicity m <= 4, got {m}")
    return dim_M + m - 10


# -- expression grammar ----------------------------------------------------------

_EXPR_RE = re.compile(r"^\s*([A-Za-z]+)\s*\((.*)\)\s*$")


def split_args(body: str) -> list[str]:
    """Split on top-level commas, leaving bracketed chains intact."""
    out, depth, cur = [], 0, []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ClassExpressionError("unbalanced ']'")
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ClassExpressionError("unbalanced '['")
    out.append("".join(cur).strip())
    return out


def parse_class(text: str) -> SingularityClass:
    """Parse ``El(d)``, ``Cu(d1,...)``, ``No(d)``, ``Ta(..)``, ``Tr(..)``, ``D(..)``, ``CQ(n/q)``."""
    m = _EXPR_RE.match(text)
    if not m:
        raise ClassExpressionError(f"malformed class expression {text!r}")
    fam, body = m.group(1), m.group(2)
    if fam == "CQ":
        return CyclicQuotient(*parse_fraction(body))
    if fam not in ELLIPTIC_FAMILIES:
        raise ClassExpressionError(f"unknown family {fam!r} in {text!r}")
    args = split_args(body)
    try:
        params = tuple(int(a) for a in args)
    except ValueError:
        raise ClassExpressionError(f"non-integer parameter in {text!r}") from None
    return SingularityClass(fam, params)
