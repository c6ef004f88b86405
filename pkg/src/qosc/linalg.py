"""Exact sparse linear algebra over the coefficient fields.

Vectors are sparse dicts keyed by basis labels; pivoting is deterministic
(first nonzero position in label order), so kernel bases and expansions
are reproducible across runs.
"""

from __future__ import annotations

from .fockmod import label_key
from .scalars import ONE, ZERO


def vaxpy(u, c, v):
    """u - c*v (sparse dicts), in a fresh dict."""
    out = dict(u)
    for k, x in v.items():
        p = c * x
        s = out.get(k)
        s = -p if s is None else s - p
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


class RowBasis:
    """Incremental echelon row space remembering original-vector coordinates.

    Rows are normalized at their pivot (the minimal label of the row), so
    every row's support lies at or above its pivot; a single ascending
    sweep therefore fully reduces any vector and rows never get rewritten.
    add(v) either accepts v as a new independent row or returns the exact
    coordinates of v in terms of the previously accepted originals.
    """

    def __init__(self, key=label_key):
        self.key = key
        self.rows = {}  # pivot -> (normalized row dict, comb dict idx->coeff)
        self.pivots = []  # pivots sorted by key
        self.count = 0

    def _reduce(self, v):
        v = dict(v)
        comb = {}
        for pivot in self.pivots:
            c = v.get(pivot)
            if c is None:
                continue
            row, rcomb = self.rows[pivot]
            v = vaxpy(v, c, row)
            for j, x in rcomb.items():
                p = c * x
                s = comb.get(j)
                s = p if s is None else s + p
                if s.is_zero():
                    comb.pop(j, None)
                else:
                    comb[j] = s
        return v, comb

    def reduce(self, v):
        """(residual, coords): v = residual + sum coords[j]*original_j."""
        return self._reduce(v)

    def express(self, v):
        """Coordinates of v in the accepted originals; None if outside."""
        r, comb = self._reduce(v)
        return comb if not r else None

    def add(self, v):
        """Returns (accepted, coords-if-dependent-else-None)."""
        from bisect import insort

        r, comb = self._reduce(v)
        if not r:
            return False, comb
        pivot = min(r, key=self.key)
        inv = r[pivot].inverse()
        row = {k: c * inv for k, c in r.items()}
        rcomb = {self.count: inv}
        for j, x in comb.items():
            rcomb[j] = -(x * inv)
        self.rows[pivot] = (row, rcomb)
        insort(self.pivots, pivot, key=self.key)
        self.count += 1
        return True, None

    @property
    def dim(self):
        return len(self.rows)

    def contains(self, v):
        r, _ = self._reduce(v)
        return not r


def nullspace(rows, columns):
    """Deterministic kernel basis of the linear map given by equation rows.

    rows: sparse dicts {column label: coeff}; columns: ordered unknowns.
    Each kernel vector carries coefficient 1 at its free column; free
    columns are taken in increasing order.
    """
    col_index = {c: i for i, c in enumerate(columns)}
    echelon = []  # (pivot column index, fully reduced row over indices)
    for row in rows:
        r = {}
        for c, x in row.items():
            if not x.is_zero():
                r[col_index[c]] = x
        for pc, er in echelon:
            c = r.get(pc)
            if c is not None:
                r = vaxpy(r, c, er)
        if not r:
            continue
        pc = min(r)
        inv = r[pc].inverse()
        r = {k: v * inv for k, v in r.items()}
        for t in range(len(echelon)):
            p2, er = echelon[t]
            c = er.get(pc)
            if c is not None:
                echelon[t] = (p2, vaxpy(er, c, r))
        echelon.append((pc, r))
    pivots = {pc for pc, _ in echelon}
    basis = []
    for fc in range(len(columns)):
        if fc in pivots:
            continue
        vec = {columns[fc]: ONE}
        for pc, er in echelon:
            c = er.get(fc)
            if c is not None:
                vec[columns[pc]] = -c
        basis.append(vec)
    return basis


def solve_unique(equations, columns):
    """Solve a (possibly overdetermined) linear system exactly.

    equations: list of (coeff dict over columns, rhs value); columns: the
    ordered unknowns.  Returns (solution dict, status) where status is
    'unique', 'inconsistent' or 'underdetermined'.
    """
    RHS = ("#rhs",)
    col_index = {c: i for i, c in enumerate(columns)}
    echelon = []
    for coeffs, rhs in equations:
        r = {col_index[c]: x for c, x in coeffs.items() if not x.is_zero()}
        if not (hasattr(rhs, "is_zero") and rhs.is_zero()):
            r[RHS] = rhs
        for pc, er in echelon:
            c = r.get(pc)
            if c is not None:
                r = vaxpy(r, c, er)
        main = [k for k in r if k != RHS]
        if not main:
            if r:
                return None, "inconsistent"
            continue
        pc = min(main)
        inv = r[pc].inverse()
        r = {k: v * inv for k, v in r.items()}
        for t in range(len(echelon)):
            p2, er = echelon[t]
            c = er.get(pc)
            if c is not None:
                echelon[t] = (p2, vaxpy(er, c, r))
        echelon.append((pc, r))
    pivots = {pc for pc, _ in echelon}
    if len(pivots) < len(columns):
        return None, "underdetermined"
    sol = {c: ZERO for c in columns}
    for pc, er in echelon:
        rhs = er.get(RHS)
        # row is x_pc - rhs = 0 after full reduction (no other unknowns left)
        leftovers = [k for k in er if k != RHS and k != pc]
        assert not leftovers
        sol[columns[pc]] = rhs if rhs is not None else ZERO
    return sol, "unique"


def mat_inverse(mat):
    """Inverse of a dense square matrix (list of lists) over a field."""
    n = len(mat)
    a = [list(row) for row in mat]
    inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                piv = r
                break
        if piv is None:
            raise ArithmeticError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col].inverse()
        a[col] = [x * d for x in a[col]]
        inv[col] = [x * d for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            c = a[r][col]
            if c.is_zero():
                continue
            a[r] = [x - c * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - c * y for x, y in zip(inv[r], inv[col])]
    return inv


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for t in range(k):
                x = a[i][t]
                y = b[t][j]
                if x.is_zero() or y.is_zero():
                    continue
                acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out
