"""Explicit group-quotient constructions.

* the Z/2 quotient of a cusp whose cycle is symmetric under a reflection,
* the mu_n family ``xz - y^n`` whose quotient is the Wahl singularity
  of type n^2/(nq-1),
* the two mu_3 cusp quotients (with their T(p,q,r) equations), used as a
  self-checking fixture table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import graph as gr
from .classes import Cu, CuspEquation, SingularityClass, T, degree, graph_of, is_lci_cusp, t1_dim_hypersurface_cusp
from .deform import constant_moves, reach
from .errors import ClassExpressionError, FixtureError
from .hj import HJExpansion, hj_expand


def _check_z2_input(e: Sequence[int]) -> tuple[int, ...]:
    e = tuple(int(x) for x in e)
    if len(e) < 2:
        raise ClassExpressionError(f"need k >= 2 entries, got {list(e)}")
    if min(e) < 2 or max(e) == 2:
        raise ClassExpressionError(f"need all e_i >= 2 and some e_j > 2, got {list(e)}")
    return e


def z2_cover_tuple(e: Sequence[int]) -> tuple[int, ...]:
    """Cusp cycle of the cover, read around the cycle."""
    e = _check_z2_input(e)
    mid = e[1:-1]
    return (2 * e[0] - 2, *mid, 2 * e[-1] - 2, *mid[::-1])


def z2_cusp_graphs(e: Sequence[int]) -> tuple[gr.DualGraph, gr.DualGraph]:
    """Resolution graphs of the cusp and of its Z/2 quotient.

    The cover has end curves of weight ``2-2e_1`` and ``2-2e_k`` joined by
    two parallel chains ``-e_2, ..., -e_{k-1}``. The quotient is the chain
    ``-e_1, ..., -e_k`` with two ``-2`` leaves on each end curve.
    """
    e = _check_z2_input(e)
    k = len(e)
    mid = e[1:-1]
    vs = [gr.Vertex("A", 2 - 2 * e[0])]
    vs += [gr.Vertex(f"T{i + 2}", -x) for i, x in enumerate(mid)]
    vs.append(gr.Vertex("B", 2 - 2 * e[-1]))
    vs += [gr.Vertex(f"U{i + 2}", -x) for i, x in reversed(list(enumerate(mid)))]
    if k == 2:
        cover = gr.DualGraph.build(vs, [(0, 1, 2)])
    else:
        n = len(vs)
        cover = gr.DualGraph.build(vs, [(i, (i + 1) % n) for i in range(n)])

    qv = [gr.Vertex(f"E{i + 1}", -x) for i, x in enumerate(e)]
    qv += [gr.Vertex(name, -2) for name in ("L1", "L2", "R1", "R2")]
    qedges = [(i, i + 1) for i in range(k - 1)]
    qedges += [(0, k), (0, k + 1), (k - 1, k + 2), (k - 1, k + 3)]
    quotient = gr.DualGraph.build(qv, qedges)
    return cover, quotient


@dataclass(frozen=True)
class WahlFamily:
    n: int
    q: int
    cover_equation: str
    quotient_type: tuple[int, int]
    chain: HJExpansion


def wahl_family(n: int, q: int) -> WahlFamily:
    """mu_n acting on the A_{n-1} surface ``xz - y^n`` with weights (1, q, -1)."""
    if n < 2 or not (0 < q < n) or math.gcd(q, n) != 1:
        raise ValueError(f"need n >= 2, 0 < q < n, gcd(q, n) = 1; got n={n}, q={q}")
    quot = (n * n, n * q - 1)
    return WahlFamily(n, q, f"xz - y^{n}", quot, hj_expand(*quot))


# -- mu_3 cusp quotients -----------------------------------------------------------

@dataclass(frozen=True)
class QuotientFixture:
    cover: SingularityClass
    cover_equation: CuspEquation
    quotient: SingularityClass
    quotient_equation: CuspEquation
    group: str
    t1_cover: int
    t1_quotient: int

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "cover": str(self.cover),
            "cover_equation": self.cover_equation.equation(),
            "quotient": str(self.quotient),
            "quotient_equation": self.quotient_equation.equation(),
            "t1_cover": self.t1_cover,
            "t1_quotient": self.t1_quotient,
        }


# (cover, T-params, quotient, T-params, printed dim T^1 of cover, of quotient)
_MU3_TABLE = (
    (Cu(2, 5), (3, 3, 5), Cu(3, 2, 2, 2, 2, 2), (2, 3, 12), 12, 18),
    (Cu(3), (3, 3, 4), Cu(2, 2, 3), (2, 3, 9), 11, 15),
)


def _build_mu3() -> list[QuotientFixture]:
    out = []
    for cover, tc, quot, tq, _, _ in _MU3_TABLE:
        ce, qe = T(*tc), T(*tq)
        out.append(QuotientFixture(cover, ce, quot, qe, "mu3",
                                   t1_dim_hypersurface_cusp(ce), t1_dim_hypersurface_cusp(qe)))
    return out


def mu3_checks() -> list[tuple[str, bool]]:
    """Named verification verdicts for the mu_3 fixture table."""
    fx = _build_mu3()
    checks: list[tuple[str, bool]] = []
    for f, row in zip(fx, _MU3_TABLE):
        checks.append((f"T1 {f.cover_equation} = {row[4]}", f.t1_cover == row[4]))
        checks.append((f"T1 {f.quotient_equation} = {row[5]}", f.t1_quotient == row[5]))
        checks.append((f"{f.cover_equation} and {f.quotient_equation} are lci cusps",
                       is_lci_cusp(f.cover_equation) and is_lci_cusp(f.quotient_equation)))
        z = gr.fundamental_cycle(graph_of(f.cover))
        graph_deg = -gr.self_intersection(graph_of(f.cover), z)
        checks.append((f"degree {f.cover} = 3", degree(f.cover) == 3 and graph_deg == 3))
        checks.append((f"{f.quotient} is a hypersurface cusp (degree <= 3)", degree(f.quotient) <= 3))
    big, small = fx
    checks.append((f"{big.cover} -> {small.cover} is a constant move",
                   any(mv.target == small.cover for mv in constant_moves(big.cover))))
    path = reach(big.cover, small.cover, 1)
    checks.append((f"{big.cover} reaches {small.cover} at depth 1", path is not None and len(path) == 1))
    checks.append(("T1 of covers: 11 < 12", small.t1_cover < big.t1_cover))
    checks.append(("T1 of quotients: 15 < 18", small.t1_quotient < big.t1_quotient))
    checks.append((f"{big.quotient} reaches {small.quotient}",
                   reach(big.quotient, small.quotient, 8) is not None))
    return checks


def mu3_fixtures() -> list[QuotientFixture]:
    """The two mu_3 fixtures; raises :class:`FixtureError` if any check fails."""
    for name, ok in mu3_checks():
        if not ok:
            raise FixtureError(f"mu3 fixture check failed: {name}")
    return _build_mu3()
