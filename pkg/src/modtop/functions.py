"""Piecewise-constant functions on an interval, plus the stacked-step
catalog function used by the unbounded-exponent counterexample scenarios.

The catalog function on (0, 1) takes the value ``coef * n**(1/n)`` on the
piece ``(1/(n+1), 1/n)`` for every n at or beyond ``start_n``; the region
to the right of ``1/start_n`` is held as explicit constant pieces.  Keeping
the tail symbolic is what lets the modular evaluator attach analytic
summability/divergence rules instead of integrating infinitely many pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainMismatchError

_EDGE_TOL = 1e-12


def step_height(n: int) -> float:
    """Height n**(1/n) of the n-th catalog step."""
    return math.exp(math.log(n) / n)


def _refine(pieces_a, pieces_b):
    cuts = sorted({p[0] for p in pieces_a} | {p[1] for p in pieces_a}
                  | {p[0] for p in pieces_b} | {p[1] for p in pieces_b})
    out = []
    for x0, x1 in zip(cuts, cuts[1:]):
        xm = 0.5 * (x0 + x1)
        va = _value_on(pieces_a, xm)
        vb = _value_on(pieces_b, xm)
        out.append((x0, x1, va - vb))
    return tuple(out)


def _value_on(pieces, x):
    for x0, x1, v in pieces:
        if x0 <= x < x1:
            return v
    return 0.0


@dataclass(frozen=True)
class PiecewiseConstFunction:
    """Finitely many constant pieces partitioning ``domain`` up to null sets."""

    domain: tuple[float, float]
    pieces: tuple[tuple[float, float, float], ...]

    def __init__(self, domain, pieces):
        a, b = float(domain[0]), float(domain[1])
        if not a < b:
            raise DomainMismatchError("empty domain")
        norm = sorted(((float(x0), float(x1), float(v)) for x0, x1, v in pieces),
                      key=lambda p: p[0])
        cursor = a
        for x0, x1, _v in norm:
            if x0 < cursor - _EDGE_TOL or x1 <= x0:
                raise DomainMismatchError("pieces overlap or are degenerate")
            cursor = x1
        if norm and (abs(norm[0][0] - a) > _EDGE_TOL or abs(cursor - b) > _EDGE_TOL):
            raise DomainMismatchError("pieces do not partition the domain")
        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "pieces", tuple(norm))

    @classmethod
    def const(cls, value: float, domain=(0.0, 0.5)) -> "PiecewiseConstFunction":
        a, b = domain
        return cls((a, b), ((a, b, float(value)),))

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for _, _, v in self.pieces)

    def scale(self, factor: float) -> "PiecewiseConstFunction":
        f = float(factor)
        return PiecewiseConstFunction(
            self.domain, tuple((x0, x1, f * v) for x0, x1, v in self.pieces))

    def __sub__(self, other):
        if isinstance(other, CatalogVTail):
            return (other.scale(-1.0)).add_pieces(self)
        if self.domain != other.domain:
            raise DomainMismatchError("functions live on different intervals")
        return PiecewiseConstFunction(self.domain, _refine(self.pieces, other.pieces))

    def __neg__(self):
        return self.scale(-1.0)


@dataclass(frozen=True)
class CatalogVTail:
    """Catalog steps ``coef * n**(1/n)`` on ``(1/(n+1), 1/n)`` for n >= start_n,
    with explicit constant pieces on the remaining region (1/start_n, 1)."""

    coef: float
    start_n: int
    head: tuple[tuple[float, float, float], ...] = ()

    def __init__(self, coef: float, start_n: int = 1, head=()):
        if start_n < 1:
            raise ValueError("start_n must be >= 1")
        object.__setattr__(self, "coef", float(coef))
        object.__setattr__(self, "start_n", int(start_n))
        object.__setattr__(self, "head", tuple(
            (float(x0), float(x1), float(v)) for x0, x1, v in head))

    domain = (0.0, 1.0)

    def tail_piece(self, n: int) -> tuple[float, float, float]:
        return (1.0 / (n + 1), 1.0 / n, self.coef * step_height(n))

    def scale(self, factor: float) -> "CatalogVTail":
        f = float(factor)
        return CatalogVTail(f * self.coef, self.start_n,
                            tuple((x0, x1, f * v) for x0, x1, v in self.head))

    def promote_head(self, upto_n: int) -> "CatalogVTail":
        """Convert tail steps below ``upto_n`` into explicit head pieces."""
        if upto_n <= self.start_n:
            return self
        if upto_n - self.start_n > 100_000:
            raise DomainMismatchError("head promotion would enumerate too many steps")
        extra = tuple(self.tail_piece(n) for n in range(upto_n - 1, self.start_n - 1, -1))
        return CatalogVTail(self.coef, upto_n, extra + self.head)

    def add_pieces(self, other: PiecewiseConstFunction) -> "CatalogVTail":
        """Add a piecewise-constant function whose support avoids the symbolic
        tail; tail steps are promoted into the head as needed."""
        if other.domain != self.domain:
            raise DomainMismatchError("functions live on different intervals")
        lo = min((x0 for x0, x1, v in other.pieces if v != 0.0), default=1.0)
        base = self
        if lo < 1.0 / self.start_n - _EDGE_TOL:
            base = self.promote_head(int(round(1.0 / lo)))
            if lo < 1.0 / base.start_n - _EDGE_TOL:
                raise DomainMismatchError(
                    "explicit pieces are not aligned with the catalog steps")
        edge = 1.0 / base.start_n
        head = base.head if base.head else (((edge, 1.0, 0.0),) if edge < 1.0 else ())
        trimmed = tuple(p for p in other.pieces if p[1] > edge + _EDGE_TOL)
        if not trimmed:
            return base
        neg = tuple((x0, x1, -v) for x0, x1, v in trimmed)
        return CatalogVTail(base.coef, base.start_n, _refine(head, neg))

    def __sub__(self, other):
        if isinstance(other, CatalogVTail):
            if other.start_n != self.start_n:
                raise DomainMismatchError("catalog tails start at different steps")
            head = _refine(self.head, other.head)
            return CatalogVTail(self.coef - other.coef, self.start_n, head)
        return self.add_pieces(other.scale(-1.0))

    def __neg__(self):
        return self.scale(-1.0)


def catalog_v(coef: float = 1.0) -> CatalogVTail:
    """The full stacked-step function (scaled by ``coef``) on (0, 1)."""
    return CatalogVTail(coef, 1, ())


def catalog_v_truncated(k: int) -> PiecewiseConstFunction:
    """First k steps as an ordinary piecewise function, zero on (0, 1/(k+1))."""
    pieces = [(0.0, 1.0 / (k + 1), 0.0)]
    for n in range(k, 0, -1):
        pieces.append((1.0 / (n + 1), 1.0 / n, step_height(n)))
    return PiecewiseConstFunction((0.0, 1.0), pieces)


def catalog_v_beyond(k: int, coef: float = 1.0) -> CatalogVTail:
    """``coef * (v - v_k)``: steps beyond the k-th only."""
    head = ((1.0 / (k + 1), 1.0, 0.0),) if k >= 1 else ()
    return CatalogVTail(coef, k + 1, head)
