"""Run-length encoded elements of R^N.

A vector is finitely many constant runs over an initial segment of the
indices plus a symbolic tail (zero or a constant).  Runs are kept sorted,
disjoint and gap-free so that subtraction and scaling stay exact; exactness
of the run/tail algebra is what keeps the closed-form tail sums honest.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompatibleTailError


@dataclass(frozen=True)
class SequenceVec:
    # runs: ((start, stop, value), ...) with 1-based inclusive indices
    runs: tuple[tuple[int, int, float], ...]
    tail: float = 0.0  # constant value from (last stop + 1) onward

    def __init__(self, runs=(), tail: float = 0.0):
        norm = sorted(((int(s), int(e), float(v)) for s, e, v in runs),
                      key=lambda r: r[0])
        filled: list[tuple[int, int, float]] = []
        cursor = 1
        for s, e, v in norm:
            if s < cursor:
                raise ValueError(f"overlapping runs at index {s}")
            if e < s:
                raise ValueError("run with stop < start")
            if s > cursor:
                filled.append((cursor, s - 1, 0.0))
            filled.append((s, e, v))
            cursor = e + 1
        object.__setattr__(self, "runs", tuple(filled))
        object.__setattr__(self, "tail", float(tail))

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "SequenceVec":
        return cls((), 0.0)

    @classmethod
    def from_values(cls, values) -> "SequenceVec":
        """Finite-support vector from an explicit prefix of values."""
        return cls(tuple((i + 1, i + 1, float(v)) for i, v in enumerate(values)), 0.0)

    @classmethod
    def constant(cls, c: float) -> "SequenceVec":
        """The constant vector (c, c, c, ...)."""
        return cls((), float(c))

    @classmethod
    def sparse(cls, entries: dict[int, float]) -> "SequenceVec":
        """Vector with the given nonzero entries, zero elsewhere."""
        return cls(tuple((n, n, float(v)) for n, v in sorted(entries.items())), 0.0)

    # -- queries ------------------------------------------------------

    @property
    def tail_start(self) -> int:
        return self.runs[-1][1] + 1 if self.runs else 1

    @property
    def is_zero(self) -> bool:
        return self.tail == 0.0 and all(v == 0.0 for _, _, v in self.runs)

    @property
    def finite_support(self) -> bool:
        return self.tail == 0.0

    @property
    def support_max(self) -> int:
        """Largest index with a (possibly) nonzero entry; 0 for the zero
        vector.  Meaningless for vectors with a nonzero tail."""
        m = 0
        for s, e, v in self.runs:
            if v != 0.0:
                m = e
        return m

    def value_at(self, n: int) -> float:
        for s, e, v in self.runs:
            if s <= n <= e:
                return v
        return self.tail

    def sup_abs(self) -> float:
        m = abs(self.tail)
        for _, _, v in self.runs:
            m = max(m, abs(v))
        return m

    # -- exact algebra ------------------------------------------------

    def scale(self, factor: float) -> "SequenceVec":
        f = float(factor)
        return SequenceVec(tuple((s, e, f * v) for s, e, v in self.runs), f * self.tail)

    def __neg__(self) -> "SequenceVec":
        return self.scale(-1.0)

    def __sub__(self, other: "SequenceVec") -> "SequenceVec":
        n = max(self.tail_start, other.tail_start) - 1
        cuts = sorted({e for s, e, v in self.runs} | {e for s, e, v in other.runs} | {n})
        runs = []
        start = 1
        for cut in cuts:
            if cut < start:
                continue
            runs.append((start, cut, self.value_at(start) - other.value_at(start)))
            start = cut + 1
        return SequenceVec(tuple(runs), self.tail - other.tail)

    def __add__(self, other: "SequenceVec") -> "SequenceVec":
        return self - (-other)

    def prefix(self, n: int) -> "SequenceVec":
        """Truncation to the first n coordinates (zero beyond)."""
        if n < 1:
            return SequenceVec.zero()
        runs = []
        for s, e, v in self.runs:
            if s > n:
                break
            runs.append((s, min(e, n), v))
        if self.tail != 0.0 and self.tail_start <= n:
            runs.append((self.tail_start, n, self.tail))
        return SequenceVec(tuple(runs), 0.0)

    def check_against_dimension(self, dim: int) -> None:
        """Reject support outside the first ``dim`` coordinates."""
        if self.tail != 0.0:
            raise IncompatibleTailError(
                "nonzero constant tail is not admissible against a finite table")
        for s, e, v in self.runs:
            if v != 0.0 and e > dim:
                raise IncompatibleTailError(
                    f"nonzero entries beyond table dimension {dim}")
