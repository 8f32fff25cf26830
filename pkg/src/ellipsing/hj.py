"""Hirzebruch-Jung continued fractions for cyclic quotient singularities.

``n/q = b1 - 1/(b2 - 1/(... - 1/bk))`` with every ``b_j >= 2``; the chain of
curves with self-intersections ``-b1, ..., -bk`` resolves the ``n/q``
cyclic quotient singularity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ClassExpressionError


@dataclass(frozen=True)
class HJExpansion:
    terms: tuple[int, ...]

    def __init__(self, terms: Iterable[int]):
        terms = tuple(int(b) for b in terms)
        if not terms:
            raise ValueError("an expansion needs at least one term")
        if any(b < 2 for b in terms):
            raise ValueError(f"every term must be >= 2: {list(terms)}")
        object.__setattr__(self, "terms", terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def __str__(self):
        return "[" + ",".join(map(str, self.terms)) + "]"

    def reversed(self) -> "HJExpansion":
        return HJExpansion(self.terms[::-1])


@dataclass(frozen=True)
class WahlData:
    n: int
    q: int


def _check_fraction(n: int, q: int) -> None:
    if not (0 < q < n):
        raise ValueError(f"need 0 < q < n, got {n}/{q}")
    if math.gcd(n, q) != 1:
        raise ValueError(f"{n}/{q} is not in lowest terms")


def hj_expand(n: int, q: int) -> HJExpansion:
    _check_fraction(n, q)
    terms = []
    while q:
        b = -(-n // q)
        terms.append(b)
        n, q = q, b * q - n
    return HJExpansion(terms)


def hj_eval(e) -> tuple[int, int]:
    """Evaluate an expansion bottom-up to ``(n, q)``."""
    e = e if isinstance(e, HJExpansion) else HJExpansion(e)
    n, q = e[-1], 1
    for b in reversed(e.terms[:-1]):
        n, q = b * n - q, n
    return n, q


def cq_multiplicity(e) -> tuple[int, int]:
    """Multiplicity and embedding dimension: ``sum(b_j - 2) = m - 2 = embdim - 3``."""
    e = e if isinstance(e, HJExpansion) else HJExpansion(e)
    m = sum(b - 2 for b in e) + 2
    return m, m + 1


def ell_invariant(e) -> int:
    m, _ = cq_multiplicity(e)
    return max(0, m - 3)


def recognize_wahl(e) -> Optional[WahlData]:
    """Return ``(n, q)`` if the chain resolves a singularity of type n^2/(nq-1)."""
    N, Q = hj_eval(e)
    n = math.isqrt(N)
    if n < 2 or n * n != N or (Q + 1) % n:
        return None
    q = (Q + 1) // n
    if not (0 < q < n) or math.gcd(q, n) != 1:
        return None
    return WahlData(n, q)


def wahl_chain(n: int, q: int) -> HJExpansion:
    if n < 2 or not (0 < q < n) or math.gcd(q, n) != 1:
        raise ValueError(f"invalid Wahl parameters n={n}, q={q}")
    return hj_expand(n * n, n * q - 1)


def wahl_chains(max_n: int) -> list[HJExpansion]:
    """All Wahl chains with ``2 <= n <= max_n``, ordered by (n, q)."""
    return [
        wahl_chain(n, q)
        for n in range(2, max_n + 1)
        for q in range(1, n)
        if math.gcd(q, n) == 1
    ]


def artin_dims(e) -> tuple[int, int, int]:
    """Tangent dimension ``t`` and the two smoothing-component dimensions.

    Only defined for multiplicity 4, where the versal base has exactly the
    Artin component (dimension ``t-1``) and one other (``t-3``).
    """
    m, _ = cq_multiplicity(e)
    if m != 4:
        raise ValueError(f"artin_dims requires multiplicity 4, got m={m}")
    t = sum(b - 1 for b in e) + 1
    return t, t - 1, t - 3


# -- CLI syntax ----------------------------------------------------------------

_FRACTION_RE = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")
_CHAIN_RE = re.compile(r"^\s*\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]\s*$")


def parse_fraction(text: str) -> tuple[int, int]:
    m = _FRACTION_RE.match(text)
    if not m:
        raise ClassExpressionError(f"expected n/q, got {text!r}")
    n, q = int(m.group(1)), int(m.group(2))
    try:
        _check_fraction(n, q)
    except ValueError as exc:
        raise ClassExpressionError(str(exc)) from None
    return n, q


def parse_chain(text: str) -> HJExpansion:
    m = _CHAIN_RE.match(text)
    if not m:
        raise ClassExpressionError(f"expected [b1,b2,...], got {text!r}")
    try:
        return HJExpansion(int(t) for t in m.group(1).split(","))
    except ValueError as exc:
        raise ClassExpressionError(str(exc)) from None


def parse_chain_list(text: str) -> list[HJExpansion]:
    """Parse ``[4];[5,2]`` style lists; empty text gives an empty list."""
    return [parse_chain(part) for part in text.split(";") if part.strip()]
