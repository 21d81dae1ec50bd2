"""Exact Gaussian elimination over Q or Q(zeta_n).

Matrices are lists of rows; entries are Fraction, int or CycScalar.  Only
the operations the oracles need are provided: rank, row echelon form,
nullspace and solving a linear system.
"""

from __future__ import annotations

from fractions import Fraction


def _is_zero(v):
    return not v


def row_echelon(rows, ncols=None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(M)):
            if not _is_zero(M[i][c]):
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv if v else v for v in M[r]]
        for i in range(len(M)):
            if i != r and not _is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [a - f * b if b else a for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows):
    return len(row_echelon(rows)[1]) if rows else 0


def sparse_rank(rows, zero=0):
    """Rank of a matrix given as a list of {column: value} dicts.

    Sparse elimination: each row is reduced against the pivots found so far.
    """
    pivots = {}
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            if c not in pivots:
                inv = 1 / row[c]
                pivots[c] = {k: v * inv for k, v in row.items()}
                break
            p = pivots[c]
            f = row[c]
            for k, v in p.items():
                s = row.get(k, zero) - f * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
    return len(pivots)


def nullspace(rows, ncols):
    """Basis of {v : M v = 0} as a list of column vectors."""
    R, piv = row_echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    one = _one_like(rows)
    basis = []
    for f in free:
        v = [0 * one] * ncols
        v[f] = one
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution x of M x = rhs, or None when the system is inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, piv = row_echelon(aug, ncols + 1)
    if ncols in piv:
        return None
    one = _one_like(rows)
    x = [0 * one] * ncols
    for i, c in enumerate(piv):
        x[c] = R[i][ncols]
    return x


def _one_like(rows):
    for r in rows:
        for v in r:
            if hasattr(v, "order"):
                from .scalars import CycScalar
                return CycScalar.one(v.order)
    return Fraction(1)
