"""Exact integer/rational linear algebra for small stoichiometric problems.

Everything here works on Python ``int`` and ``fractions.Fraction`` so that
rank and support statements are decided without floating tolerances.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple

Vector = List[int]
Matrix = List[List[int]]


def _as_integer_rows(rows: Sequence[Sequence]) -> Matrix:
    """Scale each row by the lcm of its denominators so it becomes integral."""
    out = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
        out.append([int(f * den) for f in fr])
    return out


def primitive(vec: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries; first non-zero entry made positive."""
    g = reduce(gcd, (abs(int(v)) for v in vec), 0)
    if g == 0:
        return [0] * len(vec)
    out = [int(v) // g for v in vec]
    for v in out:
        if v != 0:
            if v < 0:
                out = [-w for w in out]
            break
    return out


def echelon(rows: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Fraction-free reduced row echelon form.

    Rows are combined by integer cross-multiplication and kept primitive, so
    every output row is an integer combination of the input rows. Returns the
    non-zero rows and their pivot columns.
    """
    mat = [row[:] for row in _as_integer_rows(rows)]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        p = mat[rank]
        for i in range(len(mat)):
            if i == rank or mat[i][col] == 0:
                continue
            c = mat[i][col]
            row = [p[col] * a - c * b for a, b in zip(mat[i], p)]
            g = reduce(gcd, (abs(v) for v in row), 0)
            mat[i] = [v // g for v in row] if g > 1 else row
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return [primitive(r) for r in mat[:rank]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(echelon(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Integer basis of ``{x : rows @ x = 0}``; each basis vector is primitive."""
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(rows[0])
    ech, pivots = echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(ech, pivots):
            vec[p] = Fraction(-row[f], row[p])
        basis.append(primitive(_as_integer_rows([vec])[0]))
    return basis


def transpose(mat: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*mat)]


def fourier_motzkin(
    constraints: Sequence[Tuple[Sequence, object]], nvars: int
) -> Optional[List[Fraction]]:
    """Find a rational point satisfying ``coeffs . x >= rhs`` for every constraint.

    Variables are eliminated last-to-first; a feasible point is rebuilt by
    back-substitution, picking the tightest lower bound (else upper bound,
    else zero) for each variable. Returns ``None`` when infeasible.
    """
    stages: List[List[Tuple[List[Fraction], Fraction]]] = []
    current = [([Fraction(c) for c in coeffs], Fraction(rhs)) for coeffs, rhs in constraints]
    for v in range(nvars - 1, -1, -1):
        current = _dedupe(current)
        stages.append(current)
        pos = [c for c in current if c[0][v] > 0]
        neg = [c for c in current if c[0][v] < 0]
        nxt = [c for c in current if c[0][v] == 0]
        for cp, bp in pos:
            for cn, bn in neg:
                a, b = -cn[v], cp[v]
                coeffs = [a * x + b * y for x, y in zip(cp, cn)]
                nxt.append((coeffs, a * bp + b * bn))
        current = nxt
    if any(rhs > 0 for _, rhs in current):
        return None

    values = [Fraction(0)] * nvars
    for v, stage in zip(range(nvars), reversed(stages)):
        lo: Optional[Fraction] = None
        hi: Optional[Fraction] = None
        for coeffs, rhs in stage:
            c = coeffs[v]
            if c == 0:
                continue
            rest = sum((coeffs[j] * values[j] for j in range(v)), Fraction(0))
            bound = (rhs - rest) / c
            if c > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None:
            values[v] = lo
        elif hi is not None:
            values[v] = hi
    return values


def _dedupe(cons):
    seen = {}
    for coeffs, rhs in cons:
        if all(c == 0 for c in coeffs):
            key = None
        else:
            scale = max(abs(c) for c in coeffs)
            key = tuple(c / scale for c in coeffs)
            rhs = rhs / scale
        if key is None:
            # trivial row: keep only the tightest infeasibility witness
            seen[None] = max(seen.get(None, rhs), rhs)
            continue
        if key not in seen or rhs > seen[key]:
            seen[key] = rhs
    out = []
    for key, rhs in seen.items():
        if key is None:
            if rhs > 0:
                out.append(([Fraction(0)] * len(cons[0][0]), rhs))
        else:
            out.append((list(key), rhs))
    return out


def nonnegative_combination(
    basis: Sequence[Sequence[int]], n: int, lower: int = 0
) -> Optional[Vector]:
    """Search the span of ``basis`` for a vector ``a`` with every entry ``>= lower``.

    With ``lower == 0`` the result is additionally required to be non-zero.
    Returns a primitive integer vector or ``None``.
    """
    m = len(basis)
    if m == 0:
        return None
    # a = sum_k c_k basis[k]; row j of the constraint system is a_j >= lower
    cons = []
    for j in range(n):
        cons.append(([basis[k][j] for k in range(m)], lower))
    if lower == 0:
        total = [sum(basis[k][j] for j in range(n)) for k in range(m)]
        if all(t == 0 for t in total):
            return None
        cons.append((total, 1))
        cons.append(([-t for t in total], -1))
    sol = fourier_motzkin(cons, m)
    if sol is None:
        return None
    vec = [sum((sol[k] * basis[k][j] for k in range(m)), Fraction(0)) for j in range(n)]
    ints = _as_integer_rows([vec])[0]
    g = reduce(gcd, (abs(v) for v in ints), 0)
    return [v // g for v in ints] if g else None
