"""Sparse integer matrices and Smith normal form.

Entries are Python ints, so coefficient growth during elimination is
harmless.  Pivoting prefers entries of absolute value 1 with a low
Markowitz fill estimate; boundary matrices are extremely sparse and
almost all their pivots are units, which keeps fill-in small.

`smith_normal_form` returns the full diagonal (including 1s and
trailing 0s) normalized to a divisibility chain, and optionally the
unimodular transforms U, V with U*M*V = S.  Transforms are kept as
dense row lists; request them only for matrices where that is sane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArgumentError


class SparseIntMatrix:
    """Row-major sparse integer matrix with a column occupancy index."""

    __slots__ = ("nrows", "ncols", "rows", "col_rows")

    def __init__(self, nrows, ncols):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}  # i -> {j: value}
        self.col_rows = {}  # j -> set of i

    @classmethod
    def from_columns(cls, columns, nrows):
        """Build from an iterable of {row: value} dicts, one per column."""
        columns = list(columns)
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    m.set(i, j, v)
        return m

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        m = cls(len(rows), ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ArgumentError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    m.set(i, j, v)
        return m

    def copy(self):
        m = SparseIntMatrix(self.nrows, self.ncols)
        m.rows = {i: dict(r) for i, r in self.rows.items()}
        m.col_rows = {j: set(s) for j, s in self.col_rows.items()}
        return m

    def get(self, i, j):
        return self.rows.get(i, {}).get(j, 0)

    def set(self, i, j, v):
        row = self.rows.setdefault(i, {})
        if v:
            row[j] = v
            self.col_rows.setdefault(j, set()).add(i)
        else:
            if j in row:
                del row[j]
                self.col_rows[j].discard(i)
                if not self.col_rows[j]:
                    del self.col_rows[j]
            if not row:
                del self.rows[i]

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def to_dense(self):
        return [
            [self.get(i, j) for j in range(self.ncols)] for i in range(self.nrows)
        ]

    def column(self, j):
        return {i: self.rows[i][j] for i in self.col_rows.get(j, ())}

    def mul_vector(self, vec):
        """Matrix times a {col: value} vector, as a {row: value} dict."""
        out = {}
        for j, c in vec.items():
            if not c:
                continue
            for i in self.col_rows.get(j, ()):
                out[i] = out.get(i, 0) + c * self.rows[i][j]
        return {i: v for i, v in out.items() if v}

    def rank(self):
        return sum(1 for d in smith_normal_form(self).diagonal if d)

    def add_row_multiple(self, target, source, factor):
        """row[target] += factor * row[source]."""
        if not factor:
            return
        src = self.rows.get(source)
        if not src:
            return
        tgt = self.rows.setdefault(target, {})
        for j, v in src.items():
            nv = tgt.get(j, 0) + factor * v
            if nv:
                tgt[j] = nv
                self.col_rows.setdefault(j, set()).add(target)
            elif j in tgt:
                del tgt[j]
                self.col_rows[j].discard(target)
                if not self.col_rows[j]:
                    del self.col_rows[j]
        if not tgt:
            del self.rows[target]

    def add_col_multiple(self, target, source, factor):
        """col[target] += factor * col[source]."""
        if not factor:
            return
        for i in list(self.col_rows.get(source, ())):
            v = self.rows[i][source]
            nv = self.rows[i].get(target, 0) + factor * v
            self.set(i, target, nv)

    def swap_rows(self, a, b):
        if a == b:
            return
        ra = self.rows.pop(a, None)
        rb = self.rows.pop(b, None)
        cols_a = set(ra) if ra else set()
        cols_b = set(rb) if rb else set()
        if rb is not None:
            self.rows[a] = rb
        if ra is not None:
            self.rows[b] = ra
        for j in cols_a - cols_b:
            s = self.col_rows[j]
            s.discard(a)
            s.add(b)
        for j in cols_b - cols_a:
            s = self.col_rows[j]
            s.discard(b)
            s.add(a)

    def swap_cols(self, a, b):
        if a == b:
            return
        rows_a = self.col_rows.pop(a, set())
        rows_b = self.col_rows.pop(b, set())
        for i in rows_a | rows_b:
            row = self.rows[i]
            va = row.pop(a, None)
            vb = row.pop(b, None)
            if vb is not None:
                row[a] = vb
            if va is not None:
                row[b] = va
        if rows_b:
            self.col_rows[a] = set(rows_b)
        if rows_a:
            self.col_rows[b] = set(rows_a)

    def scale_row(self, i, factor):
        row = self.rows.get(i)
        if not row:
            return
        for j in row:
            row[j] *= factor


@dataclass
class SNFResult:
    """diagonal: full min(m,n) diagonal, divisibility chain, trailing zeros."""

    diagonal: list
    U: list | None = None
    V: list | None = None

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d)

    @property
    def nontrivial_factors(self):
        return [d for d in self.diagonal if d > 1]


class _Transform:
    """A dense unimodular matrix tracked alongside the elimination."""

    def __init__(self, n):
        self.n = n
        self.rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def add_row_multiple(self, target, source, factor):
        if not factor:
            return
        tr = self.rows[target]
        sr = self.rows[source]
        for k in range(self.n):
            tr[k] += factor * sr[k]

    def swap(self, a, b):
        self.rows[a], self.rows[b] = self.rows[b], self.rows[a]

    def scale(self, i, factor):
        self.rows[i] = [factor * v for v in self.rows[i]]

    def combine_two(self, a, b, p, q, r, s):
        """rows[a], rows[b] <- p*rows[a]+q*rows[b], r*rows[a]+s*rows[b]."""
        ra, rb = self.rows[a], self.rows[b]
        self.rows[a] = [p * x + q * y for x, y in zip(ra, rb)]
        self.rows[b] = [r * x + s * y for x, y in zip(ra, rb)]


def smith_normal_form(matrix, transforms=False):
    """Diagonalize over the integers by unimodular row/column operations.

    Returns an SNFResult whose diagonal d satisfies d[i] >= 0 and
    d[i] | d[i+1].  With transforms=True also returns dense U (m x m)
    and V (n x n) with U * M * V = diag(d).
    """
    if isinstance(matrix, list):
        matrix = SparseIntMatrix.from_dense(matrix)
    work = matrix.copy()
    m, n = work.nrows, work.ncols
    u = _Transform(m) if transforms else None
    vt = _Transform(n) if transforms else None  # tracks V as column ops = row ops on V^T

    unit_queue = [
        (i, j)
        for i in sorted(work.rows)
        for j, v in sorted(work.rows[i].items())
        if v in (1, -1)
    ]
    qhead = 0

    def find_pivot(start):
        nonlocal qhead, unit_queue
        best = None
        while qhead < len(unit_queue):
            i, j = unit_queue[qhead]
            qhead += 1
            if i < start or j < start:
                continue
            v = work.get(i, j)
            if v in (1, -1):
                return i, j
        # no unit entry known; scan for the minimal absolute value
        for i in sorted(work.rows):
            if i < start:
                continue
            for j, v in sorted(work.rows[i].items()):
                if j < start:
                    continue
                a = abs(v)
                if a == 1:
                    return i, j
                if best is None or a < best[0] or (a == best[0] and (i, j) < best[1:]):
                    best = (a, i, j)
        if best is None:
            return None
        return best[1], best[2]

    def record_units(i):
        row = work.rows.get(i)
        if row:
            for j, v in row.items():
                if v in (1, -1):
                    unit_queue.append((i, j))

    diag = []
    step = 0
    limit = min(m, n)
    while step < limit:
        piv = find_pivot(step)
        if piv is None:
            break
        i0, j0 = piv
        work.swap_rows(step, i0)
        work.swap_cols(step, j0)
        if u:
            u.swap(step, i0)
        if vt:
            vt.swap(step, j0)
        while True:
            v0 = work.get(step, step)
            assert v0 != 0
            # clear the pivot column
            col = [i for i in work.col_rows.get(step, ()) if i > step]
            restart = False
            for i in sorted(col):
                q = work.rows[i][step] // v0
                work.add_row_multiple(i, step, -q)
                if u:
                    u.add_row_multiple(i, step, -q)
                rem = work.get(i, step)
                if rem:
                    # remainder strictly smaller: swap it up and restart
                    work.swap_rows(step, i)
                    if u:
                        u.swap(step, i)
                    restart = True
                    break
                record_units(i)
            if restart:
                continue
            # clear the pivot row
            v0 = work.get(step, step)
            row = [j for j in work.rows.get(step, {}) if j > step]
            restart = False
            for j in sorted(row):
                q = work.rows[step][j] // v0
                work.add_col_multiple(j, step, -q)
                if vt:
                    vt.add_row_multiple(j, step, -q)
                rem = work.get(step, j)
                if rem:
                    work.swap_cols(step, j)
                    if vt:
                        vt.swap(step, j)
                    restart = True
                    break
                for i in work.col_rows.get(j, ()):
                    if work.rows[i][j] in (1, -1):
                        unit_queue.append((i, j))
            if restart:
                continue
            break
        v0 = work.get(step, step)
        if v0 < 0:
            work.scale_row(step, -1)
            if u:
                u.scale(step, -1)
            v0 = -v0
        diag.append(v0)
        step += 1

    diag += [0] * (limit - len(diag))

    # enforce the divisibility chain d[i] | d[i+1]
    k = len([d for d in diag if d])
    changed = True
    while changed:
        changed = False
        for a in range(k):
            for b in range(a + 1, k):
                if diag[b] % diag[a]:
                    changed = True
                    da, db = diag[a], diag[b]
                    g = math.gcd(da, db)
                    if transforms:
                        # col a += col b ; then 2x2 row reduction ; then fix col b
                        vt.add_row_multiple(a, b, 1)
                        x, y = _bezout(da, db)
                        u.combine_two(a, b, x, y, -(db // g), da // g)
                        vt.add_row_multiple(b, a, -(y * (db // g)))
                    diag[a], diag[b] = g, da * db // g
    result = SNFResult(diag)
    if transforms:
        result.U = u.rows
        result.V = _transpose(vt.rows)
    return result


def _bezout(a, b):
    """x, y with x*a + y*b = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def _transpose(rows):
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def _mat_mul(a, b):
    if not a or not b:
        return []
    bt = _transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def det_unimodular(rows):
    """Determinant by fraction-free elimination; used to assert |det| = 1."""
    n = len(rows)
    a = [list(r) for r in rows]
    det = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        for i in range(col + 1, n):
            while a[i][col]:
                if abs(a[i][col]) < abs(a[col][col]):
                    a[col], a[i] = a[i], a[col]
                    det = -det
                q = a[i][col] // a[col][col]
                a[i] = [x - q * y for x, y in zip(a[i], a[col])]
    for i in range(n):
        det *= a[i][i]
    return det


def verify_snf(matrix, result):
    """U*M*V == diag check for transform-bearing results."""
    if isinstance(matrix, SparseIntMatrix):
        dense = matrix.to_dense()
    else:
        dense = [list(r) for r in matrix]
    prod = _mat_mul(_mat_mul(result.U, dense), result.V)
    m = len(dense)
    n = len(dense[0]) if dense else 0
    for i in range(m):
        for j in range(n):
            want = result.diagonal[i] if i == j and i < len(result.diagonal) else 0
            if prod[i][j] != want:
                return False
    return True


def solve_integer(matrix, rhs, snf=None):
    """An integer solution x of M x = rhs, or None.

    rhs is a {row: value} dict; the result is a {col: value} dict.
    Requires transforms, so only use on matrices of moderate size.
    """
    if snf is None:
        snf = smith_normal_form(matrix, transforms=True)
    m = matrix.nrows
    n = matrix.ncols
    c = [0] * m
    for i, v in rhs.items():
        c[i] = v
    uc = [sum(snf.U[i][k] * c[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if i < n and d:
            if uc[i] % d:
                return None
            y[i] = uc[i] // d
        elif uc[i]:
            return None
    x = [sum(snf.V[i][k] * y[k] for k in range(n)) for i in range(n)]
    return {i: v for i, v in enumerate(x) if v}


def kernel_basis(matrix, snf=None):
    """Columns spanning the integer kernel of M (a primitive basis)."""
    if snf is None:
        snf = smith_normal_form(matrix, transforms=True)
    n = matrix.ncols
    rank = snf.rank
    basis = []
    for k in range(rank, n):
        basis.append({i: snf.V[i][k] for i in range(n) if snf.V[i][k]})
    return basis
