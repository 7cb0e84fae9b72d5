"""Exact row reduction over a scalar domain, sparse and dense.

Rows are dicts mapping hashable column labels to nonzero scalars.  All
pivoting is resolved by an explicit column ranking, so every reduction is
deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _reduce_row(row, pivots, domain):
    """Eliminate all pivot columns from ``row`` (returns a new dict)."""
    row = dict(row)
    for col, prow in pivots.items():
        c = row.get(col)
        if c is None or c == 0:
            continue
        for k, v in prow.items():
            s = domain.sub(row.get(k, domain.zero), domain.mul(c, v))
            if s == 0:
                row.pop(k, None)
            else:
                row[k] = s
    return {k: v for k, v in row.items() if v != 0}


def sparse_rref(rows, domain, col_rank):
    """Full reduced row echelon form.

    Returns ``(pivots, kept)`` where ``pivots`` maps a pivot column to its
    normalized row (pivot coefficient 1) and ``kept`` lists the indices of
    the input rows that contributed a new pivot, in input order.
    """
    pivots: dict = {}
    kept = []
    for idx, row in enumerate(rows):
        red = _reduce_row(row, pivots, domain)
        if not red:
            continue
        col = min(red, key=col_rank)
        inv = domain.inv(red[col])
        norm = {k: domain.mul(v, inv) for k, v in red.items()}
        for pcol, prow in pivots.items():
            c = prow.get(col)
            if c is None:
                continue
            newrow = dict(prow)
            for k, v in norm.items():
                s = domain.sub(newrow.get(k, domain.zero), domain.mul(c, v))
                if s == 0:
                    newrow.pop(k, None)
                else:
                    newrow[k] = s
            pivots[pcol] = newrow
        pivots[col] = norm
        kept.append(idx)
    return pivots, kept


def independent_rows(rows, domain, col_rank):
    """Indices of a maximal independent subset of ``rows``, greedily."""
    pivots: dict = {}
    kept = []
    for idx, row in enumerate(rows):
        red = _reduce_row(row, pivots, domain)
        if not red:
            continue
        col = min(red, key=col_rank)
        inv = domain.inv(red[col])
        pivots[col] = {k: domain.mul(v, inv) for k, v in red.items()}
        kept.append(idx)
    return kept


def substitution_map(pivots):
    """From RREF pivot rows, the map pivot -> minus the non-pivot tail.

    Each pivot row reads ``pivot + sum(tail) = 0`` after moving the pivot to
    one side, i.e. pivot = -tail.
    """
    out = {}
    pivot_cols = set(pivots)
    for col, row in pivots.items():
        out[col] = {k: v for k, v in row.items() if k != col}
        assert not (set(out[col]) & pivot_cols - {col}), "rows not fully reduced"
    return out


def dense_rref(mat):
    """RREF of a dense Fraction matrix; returns (rows, pivot_cols)."""
    rows = [list(map(Fraction, r)) for r in mat]
    ncols = len(rows[0]) if rows else 0
    pivot_cols = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivot_cols


def dense_nullspace(mat):
    """Basis of the right kernel of a dense Fraction matrix."""
    if not mat:
        return []
    ncols = len(mat[0])
    rref, pivots = dense_rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in zip(rref, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def primitive_integer_vector(vec):
    """Scale a rational vector to coprime integers (sign preserved)."""
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g:
        ints = [v // g for v in ints]
    return ints
