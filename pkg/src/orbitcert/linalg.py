"""Exact nullspace computation over the Gaussian rationals.

Rows are cleared to Gaussian integers, eliminated fraction-free (Bareiss, so
every intermediate division is exact), and the nullspace basis is then read
off by back substitution over the field.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List

from orbitcert.exact import ComplexRational

Matrix = List[List[ComplexRational]]


def _clear_row(row: List[ComplexRational]) -> List[ComplexRational]:
    denom = 1
    for c in row:
        denom = lcm(denom, c.re.denominator, c.im.denominator)
    return [c * denom for c in row]


def fraction_free_echelon(rows: Matrix) -> tuple[Matrix, List[int]]:
    """Bareiss row echelon form; returns the reduced rows and pivot columns."""
    m = [_clear_row(list(r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivot_cols: List[int] = []
    prev = ComplexRational(1)
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            for j in range(c + 1, ncols):
                m[i][j] = (piv * m[i][j] - m[i][c] * m[r][j]) / prev
            m[i][c] = ComplexRational(0)
        prev = piv
        pivot_cols.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivot_cols


def nullspace(rows: Matrix, ncols: int) -> List[List[ComplexRational]]:
    """Basis of {v : rows @ v = 0}, deterministic, each vector normalized to
    leading coefficient 1 (in the free-column order)."""
    ech, pivot_cols = fraction_free_echelon(rows)
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        v = [ComplexRational(0)] * ncols
        v[f] = ComplexRational(1)
        # Back-substitute pivots in reverse order.
        for r in range(len(pivot_cols) - 1, -1, -1):
            pc = pivot_cols[r]
            s = ComplexRational(0)
            for j in range(pc + 1, ncols):
                if not v[j].is_zero():
                    s = s + ech[r][j] * v[j]
            v[pc] = ComplexRational(0) - s / ech[r][pc]
        basis.append(v)
    return basis


def row_reduce_basis(vectors: List[List[ComplexRational]]) -> List[List[ComplexRational]]:
    """Independent subset of the given vectors, reduced and normalized so the
    result is deterministic: ordinary exact Gauss-Jordan on the stacked rows."""
    if not vectors:
        return []
    ncols = len(vectors[0])
    rows = [list(v) for v in vectors]
    out: List[List[ComplexRational]] = []
    for row in rows:
        cur = list(row)
        for prev in out:
            pc = next(j for j in range(ncols) if not prev[j].is_zero())
            if not cur[pc].is_zero():
                f = cur[pc]
                cur = [a - f * b for a, b in zip(cur, prev)]
        lead = next((j for j in range(ncols) if not cur[j].is_zero()), None)
        if lead is None:
            continue
        inv = cur[lead]
        cur = [a / inv for a in cur]
        out.append(cur)
    out.sort(key=lambda v: next(j for j in range(ncols) if not v[j].is_zero()))
    return out
