# Smith normal form of integer matrices with unimodular transforms, on exact sympy matrices.
import logging
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, eye, zeros

logger = logging.getLogger(__name__)


class SmithNormalForm:
    """
    Computes U, D, V with U·A·V = D, U and V unimodular and d_1 | d_2 | ... on the diagonal.

    Pivoting follows the extended Euclidean scheme: move the smallest nonzero entry of the
    trailing block to (s, s), clear its row and column by floor division, and repair
    divisibility by adding an offending row before moving on.
    """

    def __init__(self, a: Sequence[Sequence[int]], columns: Optional[int] = None):
        rows = [list(r) for r in a]
        n = columns if columns is not None else (len(rows[0]) if rows else 0)
        self.original = Matrix(len(rows), n, [int(x) for r in rows for x in r]) if rows else zeros(0, n)
        self.d = self.original.copy()
        self.u = eye(self.d.rows)
        self.v = eye(self.d.cols)

    def _pivot(self, s: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(s, self.d.rows):
            for j in range(s, self.d.cols):
                value = abs(self.d[i, j])
                if value and (best is None or value < best[0]):
                    best = (value, i, j)
        return None if best is None else (best[1], best[2])

    def _add_row(self, target: int, source: int, k: int) -> None:
        d, u = self.d, self.u
        d.row_op(target, lambda val, col: val + k * d[source, col])
        u.row_op(target, lambda val, col: val + k * u[source, col])

    def _add_col(self, target: int, source: int, k: int) -> None:
        d, v = self.d, self.v
        d.col_op(target, lambda val, row: val + k * d[row, source])
        v.col_op(target, lambda val, row: val + k * v[row, source])

    def _non_divisible_row(self, s: int) -> Optional[int]:
        pivot = self.d[s, s]
        for i in range(s + 1, self.d.rows):
            for j in range(s + 1, self.d.cols):
                if self.d[i, j] % pivot != 0:
                    return i
        return None

    def compute(self) -> Tuple[Matrix, Matrix, Matrix]:
        s = 0
        while s < min(self.d.rows, self.d.cols):
            position = self._pivot(s)
            if position is None:
                break
            i, j = position
            if i != s:
                self.d.row_swap(s, i)
                self.u.row_swap(s, i)
            if j != s:
                self.d.col_swap(s, j)
                self.v.col_swap(s, j)

            pivot = self.d[s, s]
            for i in range(s + 1, self.d.rows):
                if self.d[i, s]:
                    self._add_row(i, s, -(self.d[i, s] // pivot))
            for j in range(s + 1, self.d.cols):
                if self.d[s, j]:
                    self._add_col(j, s, -(self.d[s, j] // pivot))

            if any(self.d[i, s] for i in range(s + 1, self.d.rows)) or \
                    any(self.d[s, j] for j in range(s + 1, self.d.cols)):
                # remainders are smaller than the pivot; pick again
                continue

            offending = self._non_divisible_row(s)
            if offending is not None:
                self._add_row(s, offending, 1)
                continue

            if self.d[s, s] < 0:
                self.d.row_op(s, lambda val, col: -val)
                self.u.row_op(s, lambda val, col: -val)
            s += 1

        return self.u, self.d, self.v

    @property
    def invariants(self) -> List[int]:
        return [int(self.d[i, i]) for i in range(min(self.d.rows, self.d.cols)) if self.d[i, i] != 0]

    def verify(self) -> bool:
        """U·A·V = D, both transforms unimodular, diagonal divisibility chain"""
        if self.u * self.original * self.v != self.d:
            return False
        if self.u.rows and abs(self.u.det()) != 1:
            return False
        if self.v.rows and abs(self.v.det()) != 1:
            return False
        for i in range(self.d.rows):
            for j in range(self.d.cols):
                if i != j and self.d[i, j] != 0:
                    return False
        chain = self.invariants
        return all(b % a == 0 for a, b in zip(chain, chain[1:]))


def smith_normal_form(a: Sequence[Sequence[int]], columns: Optional[int] = None) -> Tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U·a·V = D"""
    snf = SmithNormalForm(a, columns)
    result = snf.compute()
    logger.debug(f"SNF of {snf.original.rows}x{snf.original.cols} matrix: invariants {snf.invariants}")
    return result
