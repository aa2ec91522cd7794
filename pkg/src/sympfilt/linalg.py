"""Dense exact linear algebra over the scalar kinds in sympfilt.scalars.

Matrices are immutable by convention: no public operation mutates its
inputs, so values can be shared freely between workers.  Row reduction uses
plain exact pivoting with first-nonzero pivot selection; there are no
tolerances anywhere.
"""

from .errors import InvalidInput
from .scalars import QQ


class Matrix:
    """Row-major dense matrix over a field object (QQ by default)."""

    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, nrows, ncols, rows, field=QQ):
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise InvalidInput("ragged matrix data")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows
        self.field = field

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_rows(cls, rows, field=QQ):
        rows = [[field.coerce(x) for x in r] for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return cls(n, m, rows, field)

    @classmethod
    def zeros(cls, nrows, ncols, field=QQ):
        z = field.zero
        return cls(nrows, ncols, [[z] * ncols for _ in range(nrows)], field)

    @classmethod
    def identity(cls, n, field=QQ):
        z, o = field.zero, field.one
        rows = [[o if i == j else z for j in range(n)] for i in range(n)]
        return cls(n, n, rows, field)

    @classmethod
    def column(cls, entries, field=QQ):
        entries = [field.coerce(x) for x in entries]
        return cls(len(entries), 1, [[x] for x in entries], field)

    @classmethod
    def from_columns(cls, nrows, cols, field=QQ):
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls(nrows, len(cols), rows, field)

    # -- basic accessors ----------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def copy_rows(self):
        return [list(r) for r in self.rows]

    def is_square(self):
        return self.nrows == self.ncols

    def is_zero(self):
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols,
                     tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: {body})"

    # -- arithmetic ----------------------------------------------------------
    def _check_same_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise InvalidInput("shape mismatch")

    def __add__(self, other):
        self._check_same_shape(other)
        add = self.field.add
        return Matrix(self.nrows, self.ncols,
                      [[add(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)], self.field)

    def __sub__(self, other):
        self._check_same_shape(other)
        sub = self.field.sub
        return Matrix(self.nrows, self.ncols,
                      [[sub(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)], self.field)

    def __neg__(self):
        neg = self.field.neg
        return Matrix(self.nrows, self.ncols,
                      [[neg(a) for a in r] for r in self.rows], self.field)

    def scale(self, c):
        mul = self.field.mul
        c = self.field.coerce(c)
        return Matrix(self.nrows, self.ncols,
                      [[mul(c, a) for a in r] for r in self.rows], self.field)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.ncols != other.nrows:
            raise InvalidInput("shape mismatch in product")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [zero] * other.ncols
            for k, a in enumerate(r):
                if a == zero:
                    continue
                rk = orows[k]
                for j, b in enumerate(rk):
                    if b != zero:
                        acc[j] = add(acc[j], mul(a, b))
            out.append(acc)
        return Matrix(self.nrows, other.ncols, out, f)

    def transpose(self):
        return Matrix(self.ncols, self.nrows,
                      [[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)], self.field)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise InvalidInput("row count mismatch in hstack")
        return Matrix(self.nrows, self.ncols + other.ncols,
                      [r1 + r2 for r1, r2 in zip(self.rows, other.rows)],
                      self.field)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise InvalidInput("column count mismatch in vstack")
        return Matrix(self.nrows + other.nrows, self.ncols,
                      self.copy_rows() + other.copy_rows(), self.field)

    def take_columns(self, idxs):
        return Matrix(self.nrows, len(idxs),
                      [[r[j] for j in idxs] for r in self.rows], self.field)

    def map(self, fn, field=None):
        field = field or self.field
        return Matrix(self.nrows, self.ncols,
                      [[fn(x) for x in r] for r in self.rows], field)

    def to_field(self, field):
        return self.map(field.coerce, field)

    def mul_vec(self, v):
        """Matrix * column (as plain list) -> plain list."""
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        out = []
        for r in self.rows:
            acc = zero
            for a, x in zip(r, v):
                if a != zero and x != zero:
                    acc = add(acc, mul(a, x))
            out.append(acc)
        return out

    def power(self, k):
        if not self.is_square():
            raise InvalidInput("power of a non-square matrix")
        acc = Matrix.identity(self.nrows, self.field)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def row_echelon(rows, field=QQ):
    """In-place forward elimination with first-nonzero pivots.

    Returns (rows, pivot_cols).  rows become an echelon (not reduced) form.
    """
    zero = field.zero
    sub, mul, div = field.sub, field.mul, field.div
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    piv_cols = []
    pr = 0
    for pc in range(nc):
        pivot_row = None
        for i in range(pr, nr):
            if rows[i][pc] != zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != pr:
            rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
        piv = rows[pr][pc]
        prow = rows[pr]
        for i in range(pr + 1, nr):
            ri = rows[i]
            c = ri[pc]
            if c == zero:
                continue
            factor = div(c, piv)
            for j in range(pc, nc):
                pj = prow[j]
                if pj != zero:
                    ri[j] = sub(ri[j], mul(factor, pj))
        piv_cols.append(pc)
        pr += 1
        if pr == nr:
            break
    return rows, piv_cols


def rref(rows, field=QQ):
    """Reduced row echelon form, in place; returns (rows, pivot_cols)."""
    rows, piv_cols = row_echelon(rows, field)
    zero, one = field.zero, field.one
    sub, mul, div = field.sub, field.mul, field.div
    nc = len(rows[0]) if rows else 0
    for k in range(len(piv_cols) - 1, -1, -1):
        pc = piv_cols[k]
        prow = rows[k]
        piv = prow[pc]
        if piv != one:
            inv = div(one, piv)
            for j in range(pc, nc):
                if prow[j] != zero:
                    prow[j] = mul(inv, prow[j])
        for i in range(k):
            c = rows[i][pc]
            if c == zero:
                continue
            ri = rows[i]
            for j in range(pc, nc):
                if prow[j] != zero:
                    ri[j] = sub(ri[j], mul(c, prow[j]))
    return rows, piv_cols


def rank(M):
    _, piv = row_echelon(M.copy_rows(), M.field)
    return len(piv)


def kernel_basis(M):
    """Columns spanning ker(M); column count = ncols - rank(M)."""
    field = M.field
    rows, piv_cols = rref(M.copy_rows(), field)
    zero, one = field.zero, field.one
    neg = field.neg
    piv_set = set(piv_cols)
    free_cols = [j for j in range(M.ncols) if j not in piv_set]
    cols = []
    for fc in free_cols:
        v = [zero] * M.ncols
        v[fc] = one
        for k, pc in enumerate(piv_cols):
            v[pc] = neg(rows[k][fc])
        cols.append(v)
    return Matrix.from_columns(M.ncols, cols, field) if cols else \
        Matrix(M.ncols, 0, [[] for _ in range(M.ncols)], field)


def solve_linear(A, b):
    """One solution of A x = b, or None if inconsistent.

    b is a column Matrix (or a plain list).  Free variables are set to zero
    (minimal-pivot solution), which makes underdetermined solves
    deterministic."""
    field = A.field
    if isinstance(b, Matrix):
        if b.ncols != 1 or b.nrows != A.nrows:
            raise InvalidInput("right-hand side shape mismatch")
        bcol = b.col(0)
    else:
        bcol = list(b)
        if len(bcol) != A.nrows:
            raise InvalidInput("right-hand side shape mismatch")
    X = solve_many(A, Matrix.from_columns(A.nrows, [bcol], field))
    if X is None:
        return None
    return X


def solve_many(A, B):
    """Solve A X = B column-wise with a single elimination; None if any
    column is inconsistent."""
    field = A.field
    if B.nrows != A.nrows:
        raise InvalidInput("right-hand side shape mismatch")
    zero = field.zero
    aug = [list(r) + list(br) for r, br in zip(A.rows, B.rows)]
    rows, piv_cols = rref(aug, field)
    n = A.ncols
    piv_in_rhs = [pc for pc in piv_cols if pc >= n]
    if piv_in_rhs:
        return None
    sols = []
    for col in range(B.ncols):
        x = [zero] * n
        for k, pc in enumerate(piv_cols):
            x[pc] = rows[k][n + col]
        sols.append(x)
    return Matrix.from_columns(n, sols, field)


def inverse(M):
    """Inverse, or None if singular."""
    if not M.is_square():
        raise InvalidInput("inverse of a non-square matrix")
    # for singular square M some identity column lies outside the column
    # span, so solve_many reports the inconsistency
    return solve_many(M, Matrix.identity(M.nrows, M.field))


def det(M):
    if not M.is_square():
        raise InvalidInput("determinant of a non-square matrix")
    field = M.field
    rows = M.copy_rows()
    zero = field.zero
    sub, mul, div = field.sub, field.mul, field.div
    n = M.nrows
    sign_flip = False
    d = field.one
    pr = 0
    for pc in range(n):
        pivot_row = None
        for i in range(pr, n):
            if rows[i][pc] != zero:
                pivot_row = i
                break
        if pivot_row is None:
            return zero
        if pivot_row != pr:
            rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
            sign_flip = not sign_flip
        piv = rows[pr][pc]
        d = mul(d, piv)
        prow = rows[pr]
        for i in range(pr + 1, n):
            c = rows[i][pc]
            if c == zero:
                continue
            factor = div(c, piv)
            ri = rows[i]
            for j in range(pc, n):
                if prow[j] != zero:
                    ri[j] = sub(ri[j], mul(factor, prow[j]))
        pr += 1
    return field.neg(d) if sign_flip else d


def is_invertible(M):
    return M.is_square() and rank(M) == M.nrows


# ---------------------------------------------------------------------------
# column-span (subspace) utilities
# ---------------------------------------------------------------------------

class SpanReducer:
    """Incremental row-reduction of a growing set of vectors: each added
    vector is reduced against the stored pivots; membership tests and
    greedy basis extraction are O(len^2) per vector instead of a fresh
    elimination per query."""

    __slots__ = ("field", "pivots")

    def __init__(self, field=QQ):
        self.field = field
        self.pivots = {}  # pivot index -> reduced vector (list)

    def _reduce(self, vec):
        f = self.field
        zero = f.zero
        sub, mul, div = f.sub, f.mul, f.div
        v = list(vec)
        for i, p in self.pivots.items():
            c = v[i]
            if c == zero:
                continue
            factor = div(c, p[i])
            for j in range(i, len(v)):
                pj = p[j]
                if pj != zero:
                    v[j] = sub(v[j], mul(factor, pj))
        return v

    def contains(self, vec):
        v = self._reduce(vec)
        zero = self.field.zero
        return all(x == zero for x in v)

    def add(self, vec):
        """Returns True if vec enlarged the span."""
        v = self._reduce(vec)
        zero = self.field.zero
        for i, x in enumerate(v):
            if x != zero:
                self.pivots[i] = v
                return True
        return False

    @property
    def dim(self):
        return len(self.pivots)


def column_space_basis(M):
    """Greedy independent column selection (lowest index first); returns the
    selected original columns as a matrix."""
    red = SpanReducer(M.field)
    sel = []
    for j in range(M.ncols):
        if red.add(M.col(j)):
            sel.append(j)
    return M.take_columns(sel)


def echelon_extend(base, candidates):
    """Extend the columns of `base` by greedily chosen columns of
    `candidates` until the span of `candidates` is covered.  Pivot choice is
    by lowest column index, making the result deterministic."""
    red = SpanReducer(base.field)
    for j in range(base.ncols):
        red.add(base.col(j))
    out = base
    for j in range(candidates.ncols):
        col = candidates.col(j)
        if red.add(col):
            out = out.hstack(Matrix.from_columns(base.nrows, [col], base.field))
    return out


def in_span(basis, vec):
    """Is the column vector (list or 1-col Matrix) in the column span?"""
    col = vec.col(0) if isinstance(vec, Matrix) else list(vec)
    red = SpanReducer(basis.field)
    for j in range(basis.ncols):
        red.add(basis.col(j))
    return red.contains(col)


def span_contains(big, small):
    """Column span of `small` contained in column span of `big`?"""
    if small.ncols == 0:
        return True
    red = SpanReducer(big.field)
    for j in range(big.ncols):
        red.add(big.col(j))
    return all(red.contains(small.col(j)) for j in range(small.ncols))


def span_eq(A, B):
    return span_contains(A, B) and span_contains(B, A)


def intersect_columns(A, B):
    """Basis of (col span A) `intersect` (col span B)."""
    field = A.field
    if A.ncols == 0 or B.ncols == 0:
        return Matrix(A.nrows, 0, [[] for _ in range(A.nrows)], field)
    stacked = A.hstack(B.map(field.neg))
    K = kernel_basis(stacked)
    if K.ncols == 0:
        return Matrix(A.nrows, 0, [[] for _ in range(A.nrows)], field)
    coeffs_a = Matrix(A.ncols, K.ncols,
                      [K.rows[i] for i in range(A.ncols)], field)
    return column_space_basis(A * coeffs_a)


def sum_columns(A, B):
    return column_space_basis(A.hstack(B))


def annihilator(M):
    """Basis (as columns in dual coordinates) of {phi : phi^T M = 0}."""
    return kernel_basis(M.transpose())
