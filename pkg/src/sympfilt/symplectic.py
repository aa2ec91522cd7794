"""Symplectic vector spaces over exact fields.

Conventions (fixed once here, used everywhere):

  * the form is Q(x, y) = x^T G y with G invertible and G^T = -G;
  * h(x) is the functional y -> Q(x, y), so the matrix of h is G^T;
  * the adjoint of an endomorphism is mu(f) = h^{-1} f^vee h, and f is
    self-adjoint when mu(f) = -f, equivalently G f symmetric;
  * the standard form J_std is block antidiagonal, +I upper right and
    -I lower left.
"""

from dataclasses import dataclass

from .errors import InvalidInput, Unsupported
from .linalg import Matrix, kernel_basis, rank, is_invertible, span_eq, solve_linear
from .scalars import QQ, DualNumbers


@dataclass(frozen=True)
class SymplecticSpace:
    gram: Matrix

    def __post_init__(self):
        if not is_symplectic(self.gram):
            raise InvalidInput("gram matrix is not symplectic")

    @property
    def dim(self):
        return self.gram.nrows

    @property
    def field(self):
        return self.gram.field

    def form(self, x, y):
        """Q(x, y) for column vectors given as lists."""
        gx = self.gram.mul_vec(y)
        f = self.field
        acc = f.zero
        for a, b in zip(x, gx):
            if a != f.zero and b != f.zero:
                acc = f.add(acc, f.mul(a, b))
        return acc


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: Matrix  # columns are independent generators

    def __post_init__(self):
        if self.basis.nrows != self.ambient:
            raise InvalidInput("basis rows must match ambient dimension")
        if self.basis.ncols > self.ambient:
            raise InvalidInput("more generators than ambient dimension")
        if rank(self.basis) != self.basis.ncols:
            raise InvalidInput("basis columns must be independent")

    @property
    def dim(self):
        return self.basis.ncols

    def equals(self, other):
        return self.ambient == other.ambient and span_eq(self.basis, other.basis)


@dataclass(frozen=True)
class SelfAdjointEndo:
    space: SymplecticSpace
    matrix: Matrix

    def __post_init__(self):
        if not is_self_adjoint(self.space, self.matrix):
            raise InvalidInput("endomorphism is not self-adjoint")


def is_symplectic(G):
    """Invertible, antisymmetric, zero diagonal."""
    if not isinstance(G, Matrix) or not G.is_square():
        raise InvalidInput("gram matrix must be square")
    f = G.field
    n = G.nrows
    for i in range(n):
        if G.rows[i][i] != f.zero:
            return False
        for j in range(i + 1, n):
            if G.rows[i][j] != f.neg(G.rows[j][i]):
                return False
    return is_invertible(G)


def perp(S, W):
    """{x : Q(x, w) = 0 for all w in W}; rank = dim - rank(W)."""
    if W.ambient != S.dim:
        raise InvalidInput("subspace ambient dimension mismatch")
    if W.basis.ncols == 0:
        return Subspace(S.dim, Matrix.identity(S.dim, S.field))
    # Q(x, w) = x^T G w; conditions are rows (G w)^T
    gw = S.gram * W.basis
    return Subspace(S.dim, kernel_basis(gw.transpose()))


def is_self_adjoint(S, theta):
    """G theta symmetric  <=>  mu(theta) = -theta."""
    if theta.nrows != S.dim or theta.ncols != S.dim:
        raise InvalidInput("endomorphism shape mismatch")
    gt = S.gram * theta
    n = gt.nrows
    for i in range(n):
        for j in range(i + 1, n):
            if gt.rows[i][j] != gt.rows[j][i]:
                return False
    return True


def mu(S, f):
    """The adjoint mu(f) = h^{-1} f^vee h; in matrices G^{-1} f^T G."""
    from .linalg import inverse
    gi = inverse(S.gram)
    return gi * f.transpose() * S.gram


def darboux_basis(S):
    """Invertible P with P^T G P = J_std (the pivot-pair sweep; ties broken
    by lowest index)."""
    f = S.field
    n = S.dim
    remaining = [[f.one if i == j else f.zero for i in range(n)]
                 for j in range(n)]  # candidate vectors (as lists)
    us, vs = [], []
    while remaining:
        u = remaining.pop(0)
        # find first candidate pairing nontrivially with u
        idx = None
        for k, w in enumerate(remaining):
            if S.form(u, w) != f.zero:
                idx = k
                break
        if idx is None:
            raise InvalidInput("degenerate form in darboux sweep")
        v = remaining.pop(idx)
        c = S.form(u, v)
        v = [f.div(x, c) for x in v]  # Q(u, v) = 1
        new_remaining = []
        for w in remaining:
            a = S.form(u, w)
            b = S.form(v, w)
            # w' = w - a*v + b*u  kills pairings with u and v
            w2 = [f.add(f.sub(wi, f.mul(a, vi)), f.mul(b, ui))
                  for wi, vi, ui in zip(w, v, u)]
            if any(x != f.zero for x in w2):
                new_remaining.append(w2)
        remaining = new_remaining
        us.append(u)
        vs.append(v)
    P = Matrix.from_columns(n, us + vs, f)
    return P


def standard_j(n, field=QQ):
    """J_std in dimension 2r = n: +I upper right, -I lower left."""
    if n % 2 != 0:
        raise InvalidInput("symplectic dimension must be even")
    r = n // 2
    rows = []
    z, o = field.zero, field.one
    for i in range(n):
        row = [z] * n
        if i < r:
            row[i + r] = o
        else:
            row[i - r] = field.neg(o)
        rows.append(row)
    return Matrix(n, n, rows, field)


def antisymmetrize(h):
    """(h - h^T)/2; the antisymmetric projection used when lifting forms."""
    if not h.is_square():
        raise InvalidInput("antisymmetrize needs a square matrix")
    f = h.field
    if f.char == 2:
        raise Unsupported("antisymmetrization needs 2 invertible")
    half = f.div(f.one, f.from_int(2))
    diff = h - h.transpose()
    return diff.scale(half)


def tangent_automorphism_check(S, theta):
    """Does Id + theta*eps preserve the form over the dual numbers?

    Agrees with is_self_adjoint(S, theta) -- this routes the check through
    an independent computation with eps^2 = 0."""
    if theta.nrows != S.dim or theta.ncols != S.dim:
        raise InvalidInput("endomorphism shape mismatch")
    D = DualNumbers(S.field)
    lift = lambda x: (x, S.field.zero)
    g_d = S.gram.map(lift, D)
    t_d = theta.map(lift, D)
    a = Matrix.identity(S.dim, D) + t_d.scale(D.eps)
    return a.transpose() * g_d * a == g_d


def random_symplectic(n, rng, field=QQ, steps=6):
    """Random integer symplectic matrix w.r.t. J_std, as a product of
    standard generators (unipotent shears and GL-block embeddings)."""
    r = n // 2
    J = standard_j(n, field)
    acc = Matrix.identity(n, field)
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 0:
            # [[I, B], [0, I]] with B symmetric
            B = [[0] * r for _ in range(r)]
            for i in range(r):
                for j in range(i, r):
                    B[i][j] = B[j][i] = rng.randrange(-2, 3)
            rows = []
            for i in range(n):
                row = [field.zero] * n
                row[i] = field.one
                if i < r:
                    for j in range(r):
                        row[r + j] = field.coerce(B[i][j])
                rows.append(row)
            gmat = Matrix(n, n, rows, field)
        elif kind == 1:
            # [[I, 0], [C, I]] with C symmetric
            C = [[0] * r for _ in range(r)]
            for i in range(r):
                for j in range(i, r):
                    C[i][j] = C[j][i] = rng.randrange(-2, 3)
            rows = []
            for i in range(n):
                row = [field.zero] * n
                row[i] = field.one
                if i >= r:
                    for j in range(r):
                        row[j] = field.coerce(C[i - r][j])
                rows.append(row)
            gmat = Matrix(n, n, rows, field)
        else:
            # [[A, 0], [0, A^{-T}]] with A a random unimodular integer matrix
            A = Matrix.identity(r, field)
            for _ in range(r + 2):
                i, j = rng.randrange(r), rng.randrange(r)
                if i == j:
                    continue
                c = rng.randrange(-2, 3)
                rows_a = A.copy_rows()
                for k in range(r):
                    rows_a[i][k] = field.add(rows_a[i][k], field.mul(field.coerce(c), rows_a[j][k]))
                A = Matrix(r, r, rows_a, field)
            from .linalg import inverse
            Ait = inverse(A).transpose()
            rows = []
            for i in range(n):
                row = [field.zero] * n
                for j in range(n):
                    if i < r and j < r:
                        row[j] = A.rows[i][j]
                    elif i >= r and j >= r:
                        row[j] = Ait.rows[i - r][j - r]
                rows.append(row)
            gmat = Matrix(n, n, rows, field)
        acc = acc * gmat
    assert acc.transpose() * J * acc == J
    return acc
