"""Variable exponent specifications.

A spec is either a sequence exponent (one value per coordinate index
``n = 1, 2, ...``) or a function exponent on an interval.  Every queried
value must be >= 1; growth metadata (monotonicity, boundedness) feeds the
certified tail rules and the doubling diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainMismatchError, InvalidExponentError


class ExponentSpec:
    """Common interface for exponent specs.

    ``monotone`` means nondecreasing in the index / variable; ``unbounded``
    is the declared growth class (``None`` when the spec cannot declare it).
    """

    is_sequence: bool = False
    is_function: bool = False
    monotone: bool = False
    unbounded: bool | None = None

    def describe(self) -> str:
        raise NotImplementedError


class SequenceExponent(ExponentSpec):
    is_sequence = True

    def value(self, n: int) -> float:
        raise NotImplementedError

    def values(self, start: int, stop: int) -> np.ndarray:
        """Exponent values for indices start..stop inclusive (1-based)."""
        raise NotImplementedError


class FunctionExponent(ExponentSpec):
    is_function = True
    domain: tuple[float, float]

    def __call__(self, x: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class TableExponent(SequenceExponent):
    """Finite table of exponents; the space is finite-dimensional and
    vectors must be supported on the first ``len(table)`` coordinates."""

    table: tuple[float, ...]

    def __init__(self, values: Sequence[float]):
        tup = tuple(float(v) for v in values)
        if not tup:
            raise InvalidExponentError("exponent table must be nonempty")
        if min(tup) < 1.0:
            raise InvalidExponentError(f"exponent below 1 in table: {min(tup)}")
        object.__setattr__(self, "table", tup)

    is_sequence = True
    monotone = False
    unbounded = False

    @property
    def dimension(self) -> int:
        return len(self.table)

    @property
    def p_sup(self) -> float:
        return max(self.table)

    def value(self, n: int) -> float:
        return self.table[n - 1]

    def values(self, start: int, stop: int) -> np.ndarray:
        return np.asarray(self.table[start - 1:stop], dtype=float)

    def describe(self) -> str:
        return "table:" + ",".join(repr(v) for v in self.table)


@dataclass(frozen=True)
class AffineExponent(SequenceExponent):
    """p_n = slope * n + intercept on all of the naturals."""

    slope: float
    intercept: float = 0.0

    def __post_init__(self):
        if self.slope < 0:
            raise InvalidExponentError("affine exponent needs slope >= 0")
        if self.slope + self.intercept < 1.0:
            raise InvalidExponentError("affine exponent has p_1 < 1")

    is_sequence = True
    monotone = True

    @property
    def unbounded(self) -> bool:  # type: ignore[override]
        return self.slope > 0

    @property
    def p_sup(self) -> float:
        return math.inf if self.slope > 0 else self.intercept

    def value(self, n: int) -> float:
        return self.slope * n + self.intercept

    def values(self, start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, stop + 1, dtype=float)
        return self.slope * idx + self.intercept

    def describe(self) -> str:
        return f"affine:{self.slope!r},{self.intercept!r}"


class CustomExponent(SequenceExponent):
    """Sequence exponent backed by an arbitrary evaluator.

    The evaluator maps a 1-based index (or an integer numpy array) to the
    exponent value(s).  Growth flags must be declared by the caller; leaving
    ``unbounded`` as ``None`` makes growth-sensitive diagnostics refuse with
    ``UndeclaredGrowthError``.  Values are validated lazily.
    """

    def __init__(self, evaluator: Callable, monotone: bool = False,
                 unbounded: bool | None = None, name: str = "custom"):
        self._fn = evaluator
        self.monotone = bool(monotone)
        self.unbounded = unbounded
        self.name = name

    def value(self, n: int) -> float:
        v = float(self._fn(n))
        if v < 1.0:
            raise InvalidExponentError(f"custom exponent gave p_{n} = {v} < 1")
        return v

    def values(self, start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, stop + 1)
        try:
            out = np.asarray(self._fn(idx), dtype=float)
            if out.shape != idx.shape:
                raise TypeError
        except (TypeError, ValueError):
            out = np.array([float(self._fn(int(n))) for n in idx], dtype=float)
        if out.size and out.min() < 1.0:
            bad = int(idx[int(np.argmin(out))])
            raise InvalidExponentError(f"custom exponent gave p_{bad} < 1")
        return out

    def describe(self) -> str:
        return f"custom:{self.name}"


@dataclass(frozen=True)
class ReciprocalExponent(FunctionExponent):
    """p(x) = 1/x on an interval (a, b) with 0 <= a < b <= 1.

    With a = 0 the exponent is unbounded toward the left endpoint; this is
    the canonical unbounded function exponent of the toolkit.
    """

    a: float = 0.0
    b: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.a < self.b):
            raise InvalidExponentError("reciprocal exponent needs 0 <= a < b")
        if self.b > 1.0:
            raise InvalidExponentError("reciprocal exponent exceeds domain where p >= 1")

    is_function = True

    @property
    def domain(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def unbounded(self) -> bool:  # type: ignore[override]
        return self.a == 0.0

    @property
    def p_sup(self) -> float:
        return math.inf if self.a == 0.0 else 1.0 / self.a

    def __call__(self, x: float) -> float:
        return 1.0 / x

    def describe(self) -> str:
        return f"reciprocal:{self.a!r},{self.b!r}"


class PiecewiseConstExponent(FunctionExponent):
    """Piecewise-constant function exponent given by breakpoints and values."""

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        bp = [float(b) for b in breakpoints]
        vals = [float(v) for v in values]
        if len(bp) != len(vals) + 1 or len(vals) == 0:
            raise InvalidExponentError("need k+1 breakpoints for k values")
        if any(b1 <= b0 for b0, b1 in zip(bp, bp[1:])):
            raise InvalidExponentError("breakpoints must be strictly increasing")
        if min(vals) < 1.0:
            raise InvalidExponentError("piecewise exponent value below 1")
        self.breakpoints = tuple(bp)
        self.values_ = tuple(vals)

    is_function = True
    monotone = False
    unbounded = False

    @property
    def domain(self) -> tuple[float, float]:
        return (self.breakpoints[0], self.breakpoints[-1])

    @property
    def p_sup(self) -> float:
        return max(self.values_)

    def cells(self):
        for (x0, x1), v in zip(zip(self.breakpoints, self.breakpoints[1:]), self.values_):
            yield x0, x1, v

    def __call__(self, x: float) -> float:
        for x0, x1, v in self.cells():
            if x0 <= x < x1:
                return v
        if x == self.breakpoints[-1]:
            return self.values_[-1]
        raise DomainMismatchError(f"{x} outside domain {self.domain}")

    def describe(self) -> str:
        segs = ";".join(f"{x0!r},{x1!r},{v!r}" for x0, x1, v in self.cells())
        return f"piecewise:{segs}"


def parse_exponent(text: str) -> ExponentSpec:
    """Parse the CLI exponent grammar.

    ``table:2,3,2.5`` | ``affine:1,0`` | ``identity`` (alias for affine:1,0)
    | ``const:2`` (alias for affine:0,2) | ``reciprocal:0,0.5``
    | ``piecewise:x0,x1,v;x1,x2,v``
    """
    text = text.strip()
    if text == "identity":
        return AffineExponent(1.0, 0.0)
    kind, _, rest = text.partition(":")
    if kind == "table":
        return TableExponent([float(t) for t in rest.split(",") if t])
    if kind == "affine":
        parts = [float(t) for t in rest.split(",")]
        if len(parts) != 2:
            raise InvalidExponentError("affine grammar is affine:slope,intercept")
        return AffineExponent(parts[0], parts[1])
    if kind == "const":
        return AffineExponent(0.0, float(rest))
    if kind == "reciprocal":
        parts = [float(t) for t in rest.split(",")]
        if len(parts) != 2:
            raise InvalidExponentError("reciprocal grammar is reciprocal:a,b")
        return ReciprocalExponent(parts[0], parts[1])
    if kind == "piecewise":
        segs = [s for s in rest.split(";") if s]
        trip = [tuple(float(t) for t in s.split(",")) for s in segs]
        if any(len(t) != 3 for t in trip):
            raise InvalidExponentError("piecewise grammar is piecewise:x0,x1,v;...")
        bps = [trip[0][0]] + [t[1] for t in trip]
        for (x0, x1, _v), b in zip(trip, bps):
            if x0 != b:
                raise InvalidExponentError("piecewise segments must be contiguous")
        return PiecewiseConstExponent(bps, [t[2] for t in trip])
    raise InvalidExponentError(f"unknown exponent grammar: {text!r}")
