"""Levenshtein alignment with backtrace over arbitrary token sequences."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence


class OpKind(enum.Enum):
    MATCH = "M"
    SUBSTITUTE = "S"
    DELETE = "D"
    INSERT = "I"


MATCH, SUBSTITUTE, DELETE, INSERT = OpKind.MATCH, OpKind.SUBSTITUTE, OpKind.DELETE, OpKind.INSERT


class EditOp(NamedTuple):
    kind: OpKind
    ref_index: int | None
    hyp_index: int | None


@dataclass(frozen=True)
class AlignmentResult:
    S: int
    D: int
    I: int  # noqa: E741
    N: int
    path: tuple[EditOp, ...] = ()

    @property
    def errors(self) -> int:
        return self.S + self.D + self.I

    @property
    def hits(self) -> int:
        return self.N - self.S - self.D

    @property
    def hyp_length(self) -> int:
        return self.hits + self.S + self.I

    def ops(self) -> str:
        """Compact path string, e.g. ``"MMSDI"``."""
        return "".join(op.kind.value for op in self.path)


def align(
    ref: Sequence,
    hyp: Sequence,
    equals: Callable[[object, object], bool] | None = None,
) -> AlignmentResult:
    """Minimum edit distance alignment under unit costs.

    Ties in the backtrace resolve to the diagonal move first, then deletion,
    then insertion, so the path is a deterministic function of the inputs.
    """
    n, m = len(ref), len(hyp)
    if equals is None:
        equals = _eq
    # cost[i][j]: distance between ref[:i] and hyp[:j]
    cost = [list(range(m + 1))]
    for i in range(1, n + 1):
        r = ref[i - 1]
        prev = cost[i - 1]
        row = [i]
        left = i
        for j in range(1, m + 1):
            diag = prev[j - 1] if equals(r, hyp[j - 1]) else prev[j - 1] + 1
            up = prev[j] + 1
            left += 1
            if up < diag:
                diag = up
            if left < diag:
                diag = left
            row.append(diag)
            left = diag
        cost.append(row)

    path = []
    s = d = ins = 0
    i, j = n, m
    while i or j:
        here = cost[i][j]
        if i and j:
            if equals(ref[i - 1], hyp[j - 1]):
                if cost[i - 1][j - 1] == here:
                    i -= 1
                    j -= 1
                    path.append(EditOp(MATCH, i, j))
                    continue
            elif cost[i - 1][j - 1] + 1 == here:
                i -= 1
                j -= 1
                s += 1
                path.append(EditOp(SUBSTITUTE, i, j))
                continue
        if i and cost[i - 1][j] + 1 == here:
            i -= 1
            d += 1
            path.append(EditOp(DELETE, i, None))
        else:
            j -= 1
            ins += 1
            path.append(EditOp(INSERT, None, j))
    path.reverse()
    return AlignmentResult(s, d, ins, n, tuple(path))


def _eq(a, b) -> bool:
    return a == b


class _Undefined:
    """Rate of a non-empty error count over an empty reference."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        return (_Undefined, ())


UNDEFINED = _Undefined()


def error_rate(S: int, D: int, I: int, N: int):  # noqa: E741
    """``(S + D + I) / N``; ``UNDEFINED`` if errors occur against ``N == 0``."""
    if min(S, D, I, N) < 0:
        raise ValueError("counts must be non-negative")
    errors = S + D + I
    if N == 0:
        return 0.0 if errors == 0 else UNDEFINED
    return errors / N


def exact_rate(S: int, D: int, I: int, N: int) -> Fraction | None:  # noqa: E741
    """Same as :func:`error_rate` but as a ``Fraction`` (``None`` if undefined)."""
    errors = S + D + I
    if N == 0:
        return Fraction(0) if errors == 0 else None
    return Fraction(errors, N)
