"""Finite-dimensional associative algebras with involution over Q and
their right modules.

An algebra is given by structure constants on a basis, the unit's
coordinates and the involution as a linear map.  Modules are given by
explicit action matrices; projectivity at desk scale is certified by
exhibiting a module as e*A^n for a lifted idempotent e, which is how
suite instances are constructed.
"""

from dataclasses import dataclass, field as dc_field

from .errors import InternalError, InvalidInput, Unsupported
from .linalg import (Matrix, column_space_basis, echelon_extend, inverse,
                     is_invertible, kernel_basis, rank, solve_many,
                     solve_linear, span_eq)
from .scalars import QQ


class AlgebraWithInvolution:
    """Structure constants mul[i][j] = coordinates of b_i * b_j, a unit
    vector, and an involution matrix mu with mu(xy) = mu(y) mu(x)."""

    def __init__(self, mul, unit, involution, field=QQ, name=""):
        self.field = field
        self.dim = len(mul)
        if any(len(row) != self.dim for row in mul) or \
           any(len(v) != self.dim for row in mul for v in row):
            raise InvalidInput("ragged structure constants")
        self.mul_table = mul
        self.unit = list(unit)
        if len(self.unit) != self.dim:
            raise InvalidInput("unit coordinate length mismatch")
        if involution.nrows != self.dim or involution.ncols != self.dim:
            raise InvalidInput("involution matrix shape mismatch")
        self.involution = involution
        self.name = name or f"algebra(dim={self.dim})"
        self._left_mats = None
        self._right_mats = None

    # -- arithmetic on coordinate vectors ---------------------------------
    def mul(self, x, y):
        f = self.field
        out = [f.zero] * self.dim
        table = self.mul_table
        for i, xi in enumerate(x):
            if xi == f.zero:
                continue
            row = table[i]
            for j, yj in enumerate(y):
                if yj == f.zero:
                    continue
                c = f.mul(xi, yj)
                tij = row[j]
                for k, t in enumerate(tij):
                    if t != f.zero:
                        out[k] = f.add(out[k], f.mul(c, t))
        return out

    def involve(self, x):
        return self.involution.mul_vec(x)

    def basis_vector(self, k):
        f = self.field
        v = [f.zero] * self.dim
        v[k] = f.one
        return v

    def scalar(self, c):
        f = self.field
        return [f.mul(f.coerce(c), u) for u in self.unit]

    def left_mult_matrix(self, x):
        f = self.field
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(self.dim, cols, f)

    def right_mult_matrix(self, x):
        f = self.field
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return Matrix.from_columns(self.dim, cols, f)

    def left_mults(self):
        if self._left_mats is None:
            self._left_mats = [self.left_mult_matrix(self.basis_vector(k))
                               for k in range(self.dim)]
        return self._left_mats

    def right_mults(self):
        if self._right_mats is None:
            self._right_mats = [self.right_mult_matrix(self.basis_vector(k))
                                for k in range(self.dim)]
        return self._right_mats

    def is_unit_element(self, x):
        return inverse(self.left_mult_matrix(x)) is not None

    def inv(self, x):
        L = self.left_mult_matrix(x)
        sol = solve_linear(L, self.unit)
        if sol is None:
            raise InvalidInput("element is not invertible")
        return sol.col(0)

    def __repr__(self):
        return self.name


def check_algebra(A):
    """Validate all algebra-with-involution laws on basis tuples; returns
    (ok, diagnostics) with the first failing law named."""
    f = A.field
    n = A.dim
    basis = [A.basis_vector(k) for k in range(n)]
    for i in range(n):
        if A.mul(A.unit, basis[i]) != basis[i]:
            return False, f"unit law fails on the left at basis {i}"
        if A.mul(basis[i], A.unit) != basis[i]:
            return False, f"unit law fails on the right at basis {i}"
    for i in range(n):
        for j in range(n):
            ij = A.mul(basis[i], basis[j])
            for k in range(n):
                lhs = A.mul(ij, basis[k])
                rhs = A.mul(basis[i], A.mul(basis[j], basis[k]))
                if lhs != rhs:
                    return False, f"associativity fails at ({i},{j},{k})"
    mu2 = A.involution * A.involution
    if mu2 != Matrix.identity(n, f):
        return False, "involution is not an involution (mu^2 != id)"
    for i in range(n):
        for j in range(n):
            lhs = A.involve(A.mul(basis[i], basis[j]))
            rhs = A.mul(A.involve(basis[j]), A.involve(basis[i]))
            if lhs != rhs:
                return False, f"anti-automorphism law fails at ({i},{j})"
    if A.involve(A.unit) != A.unit:
        return False, "involution moves the unit"
    return True, "ok"


# ---------------------------------------------------------------------------
# constructions of concrete algebras
# ---------------------------------------------------------------------------

def algebra_from_matrix_basis(mats, involution_on_matrices, field=QQ, name=""):
    """Subalgebra of a matrix algebra spanned by `mats` (must be closed
    under product and contain the identity); the involution is given as a
    function on matrices and must preserve the span."""
    n = len(mats)
    size = mats[0].nrows
    flat = Matrix.from_columns(size * size,
                               [[M.rows[r][c] for r in range(size) for c in range(size)]
                                for M in mats], field)

    def coords(M):
        v = [M.rows[r][c] for r in range(size) for c in range(size)]
        sol = solve_linear(flat, v)
        if sol is None:
            raise InvalidInput("matrix outside the span (not closed)")
        return sol.col(0)

    mul = [[coords(mats[i] * mats[j]) for j in range(n)] for i in range(n)]
    unit = coords(Matrix.identity(size, field))
    inv_cols = [coords(involution_on_matrices(M)) for M in mats]
    mu = Matrix.from_columns(n, inv_cols, field)
    return AlgebraWithInvolution(mul, unit, mu, field, name)


def full_matrix_algebra(n, involution_on_matrices=None, field=QQ, name=""):
    """M_n over the base field; default involution is transpose."""
    mats = []
    for u in range(n):
        for v in range(n):
            rows = [[field.one if (r == u and c == v) else field.zero
                     for c in range(n)] for r in range(n)]
            mats.append(Matrix(n, n, rows, field))
    inv = involution_on_matrices or (lambda M: M.transpose())
    return algebra_from_matrix_basis(mats, inv, field,
                                     name or f"M_{n}(Q)")


def upper_triangular_symplectic_algebra(field=QQ):
    """Upper triangular 2x2 matrices with the symplectic-adjoint
    involution mu(X) = J^{-1} X^T J, which preserves the subalgebra."""
    from .symplectic import standard_j
    J = standard_j(2, field)
    Jinv = inverse(J)
    mats = [Matrix.from_rows([[1, 0], [0, 0]]),
            Matrix.from_rows([[0, 1], [0, 0]]),
            Matrix.from_rows([[0, 0], [0, 1]])]
    return algebra_from_matrix_basis(
        mats, lambda M: Jinv * M.transpose() * J, field,
        "upper-triangular 2x2 with symplectic adjoint")


def dual_numbers_algebra(field=QQ):
    """Q[x]/(x^2) with the trivial involution."""
    z, o = field.zero, field.one
    mul = [[[o, z], [z, o]], [[z, o], [z, z]]]
    return AlgebraWithInvolution(mul, [o, z], Matrix.identity(2, field),
                                 field, "Q[x]/(x^2)")


def group_algebra_c2(field=QQ):
    """Q[C_2] with g -> g^{-1} (= g), i.e. the identity involution."""
    z, o = field.zero, field.one
    mul = [[[o, z], [z, o]], [[z, o], [o, z]]]
    return AlgebraWithInvolution(mul, [o, z], Matrix.identity(2, field),
                                 field, "Q[C2]")


def product_algebra(A1, A2, name=""):
    """(A1 x A2, mu1 x mu2); returns (algebra, central idempotents)."""
    f = A1.field
    n1, n2 = A1.dim, A2.dim
    n = n1 + n2

    def emb1(v):
        return list(v) + [f.zero] * n2

    def emb2(v):
        return [f.zero] * n1 + list(v)

    mul = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < n1 and j < n1:
                row.append(emb1(A1.mul_table[i][j]))
            elif i >= n1 and j >= n1:
                row.append(emb2(A2.mul_table[i - n1][j - n1]))
            else:
                row.append([f.zero] * n)
        mul.append(row)
    unit = emb1(A1.unit)
    unit = [f.add(a, b) for a, b in zip(unit, emb2(A2.unit))]
    rows = []
    for r in range(n):
        rows.append([f.zero] * n)
    for c in range(n1):
        mv = A1.involve(A1.basis_vector(c))
        for r in range(n1):
            rows[r][c] = mv[r]
    for c in range(n2):
        mv = A2.involve(A2.basis_vector(c))
        for r in range(n2):
            rows[n1 + r][n1 + c] = mv[r]
    mu = Matrix(n, n, rows, f)
    alg = AlgebraWithInvolution(mul, unit, mu, f,
                                name or f"({A1.name}) x ({A2.name})")
    e1 = emb1(A1.unit)
    e2 = emb2(A2.unit)
    return alg, e1, e2


def swap_product_algebra(A, name=""):
    """(A x A, swap involution); mu(a, b) = (b, a).  Only valid when A
    carries the identity involution composed in (used for Q x Q swap)."""
    alg, e1, e2 = product_algebra(A, A)
    f = A.field
    n = A.dim
    rows = [[f.zero] * (2 * n) for _ in range(2 * n)]
    for c in range(n):
        for r in range(n):
            rows[n + r][c] = f.one if r == c else f.zero
            rows[r][n + c] = f.one if r == c else f.zero
    mu = Matrix(2 * n, 2 * n, rows, f)
    out = AlgebraWithInvolution(alg.mul_table, alg.unit, mu, f,
                                name or f"({A.name})x({A.name}) swap")
    return out, e1, e2


# ---------------------------------------------------------------------------
# radicals and quotients
# ---------------------------------------------------------------------------

def jacobson_radical(A):
    """Dickson's trace-form criterion, valid in characteristic 0: the
    radical is {x : Tr(L_{x a}) = 0 for all a}.  Verifies that the result
    is a nilpotent two-sided ideal with mu(J) = J."""
    if A.field.char != 0:
        raise Unsupported("trace-form radical criterion needs characteristic 0")
    f = A.field
    n = A.dim
    lefts = A.left_mults()
    tr = [sum_diag(L, f) for L in lefts]

    # gram[i][j] = Tr(L_{b_i b_j})
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = A.mul_table[i][j]
            acc = f.zero
            for k, c in enumerate(prod):
                if c != f.zero:
                    acc = f.add(acc, f.mul(c, tr[k]))
            row.append(acc)
        rows.append(row)
    J = kernel_basis(Matrix(n, n, rows, f))
    _verify_radical(A, J)
    return J


def sum_diag(M, f):
    acc = f.zero
    for i in range(M.nrows):
        acc = f.add(acc, M.rows[i][i])
    return acc


def _verify_radical(A, J):
    if J.ncols == 0:
        return
    # two-sided ideal
    for k in range(A.dim):
        bk = A.basis_vector(k)
        for c in range(J.ncols):
            x = J.col(c)
            from .linalg import in_span
            if not in_span(J, A.mul(x, bk)) or not in_span(J, A.mul(bk, x)):
                raise InternalError("radical candidate is not an ideal")
    # nilpotent
    power = J
    for _ in range(A.dim + 1):
        if power.ncols == 0:
            break
        prods = []
        for c in range(power.ncols):
            for d in range(J.ncols):
                prods.append(A.mul(power.col(c), J.col(d)))
        power = column_space_basis(
            Matrix.from_columns(A.dim, prods, A.field)) if prods else power
        if power.ncols == 0:
            break
    else:
        raise InternalError("radical candidate is not nilpotent")
    # mu(J) = J
    muJ = A.involution * J
    if not span_eq(J, muJ):
        raise InternalError("involution does not preserve the radical")


@dataclass
class QuotientData:
    """A -> A/J bookkeeping: the quotient algebra, the projection matrix
    (quotient coords of an A element) and the linear section."""

    algebra: AlgebraWithInvolution
    quotient: AlgebraWithInvolution
    radical: Matrix
    projection: Matrix  # q x n
    section: Matrix     # n x q


def quotient_algebra(A):
    """A/J with its induced involution; returns QuotientData."""
    f = A.field
    n = A.dim
    J = jacobson_radical(A)
    qdim = n - J.ncols
    # basis: [J | complement]; complement represents A/J
    full = echelon_extend(J, Matrix.identity(n, f))
    comp = full.take_columns(range(J.ncols, n))
    full_inv = inverse(full)
    # projection: coordinates in `full`, keep the complement part
    proj_rows = [full_inv.rows[J.ncols + i] for i in range(qdim)]
    projection = Matrix(qdim, n, proj_rows, f)
    section = comp

    def project(x):
        return projection.mul_vec(x)

    mul = []
    for i in range(qdim):
        row = []
        for j in range(qdim):
            row.append(project(A.mul(comp.col(i), comp.col(j))))
        mul.append(row)
    unit = project(A.unit)
    mu_cols = [project(A.involve(comp.col(i))) for i in range(qdim)]
    mu = Matrix.from_columns(qdim, mu_cols, f)
    Aq = AlgebraWithInvolution(mul, unit, mu, f, f"{A.name}/J")
    return QuotientData(A, Aq, J, projection, section)


def lift_idempotent(A, qd, ebar):
    """Newton lift e <- 3e^2 - 2e^3 of an idempotent of A/J to an exact
    idempotent of A mapping onto it; converges because J is nilpotent."""
    if qd.quotient.mul(ebar, ebar) != list(ebar):
        raise InvalidInput("input is not idempotent in A/J")
    e = qd.section.mul_vec(ebar)
    for _ in range(64):
        e2 = A.mul(e, e)
        if e2 == e:
            if qd.projection.mul_vec(e) != list(ebar):
                raise InternalError("idempotent lift drifted")
            return e
        e3 = A.mul(e2, e)
        f = A.field
        e = [f.sub(f.mul(f.from_int(3), a), f.mul(f.from_int(2), b))
             for a, b in zip(e2, e3)]
    raise InternalError("idempotent iteration did not stabilize")


# ---------------------------------------------------------------------------
# right modules
# ---------------------------------------------------------------------------

class RightModule:
    """Right A-module by action matrices: act(v, b_k) = action[k] * v.

    Composition law: action[b_i b_j] = action[j] . action[i]."""

    def __init__(self, algebra, action, name=""):
        self.algebra = algebra
        self.action = action
        self.dim = action[0].nrows if action else 0
        self.name = name or f"module(dim={self.dim})"

    @property
    def field(self):
        return self.algebra.field

    def action_matrix(self, a):
        f = self.field
        out = Matrix.zeros(self.dim, self.dim, f)
        for k, c in enumerate(a):
            if c != f.zero:
                out = out + self.action[k].scale(c)
        return out

    def act(self, v, a):
        return self.action_matrix(a).mul_vec(v)

    def check_laws(self):
        A = self.algebra
        f = self.field
        if self.action_matrix(A.unit) != Matrix.identity(self.dim, f):
            return False, "unit does not act as identity"
        for i in range(A.dim):
            for j in range(A.dim):
                prod = self.action_matrix(A.mul_table[i][j])
                if self.action[j] * self.action[i] != prod:
                    return False, f"action law fails at ({i},{j})"
        return True, "ok"

    def __repr__(self):
        return self.name


def free_module(A, n_copies):
    """A^n with the stacked right-multiplication action."""
    f = A.field
    rights = A.right_mults()
    action = []
    dim = A.dim * n_copies
    for k in range(A.dim):
        R = rights[k]
        rows = []
        for b in range(n_copies):
            for r in range(A.dim):
                row = [f.zero] * dim
                for c in range(A.dim):
                    v = R.rows[r][c]
                    if v != f.zero:
                        row[b * A.dim + c] = v
                rows.append(row)
        action.append(Matrix(dim, dim, rows, f))
    return RightModule(A, action, f"{A.name}^{n_copies}")


@dataclass
class PresentedModule:
    """e A^n for an idempotent matrix e over A: the abstract module plus
    the embedding of its basis into A^n coordinates."""

    module: RightModule
    embedding: Matrix      # (n*dimA) x dimM
    idempotent: list       # n x n matrix of A-coordinate vectors
    copies: int


def amatrix_mul(A, E1, E2):
    """Product of matrices over A (lists of lists of coordinate vectors)."""
    n = len(E1)
    p = len(E2[0])
    f = A.field
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = [f.zero] * A.dim
            for k in range(len(E2)):
                prod = A.mul(E1[i][k], E2[k][j])
                acc = [f.add(a, b) for a, b in zip(acc, prod)]
            row.append(acc)
        out.append(row)
    return out


def amatrix_eq(E1, E2):
    return E1 == E2


def amatrix_involve_transpose(A, E):
    """mu applied entrywise to the transpose (the adjoint of an A-matrix)."""
    n, p = len(E), len(E[0])
    return [[A.involve(E[j][i]) for j in range(n)] for i in range(p)]


def lift_idempotent_matrix(A, qd, Ebar):
    """Newton lift of an idempotent matrix over A/J to one over A."""
    Aq = qd.quotient
    if amatrix_mul(Aq, Ebar, Ebar) != Ebar:
        raise InvalidInput("matrix is not idempotent over A/J")
    E = [[qd.section.mul_vec(x) for x in row] for row in Ebar]
    f = A.field
    for _ in range(64):
        E2 = amatrix_mul(A, E, E)
        if E2 == E:
            red = [[qd.projection.mul_vec(x) for x in row] for row in E]
            if red != Ebar:
                raise InternalError("idempotent matrix lift drifted")
            return E
        E3 = amatrix_mul(A, E2, E)
        E = [[[f.sub(f.mul(f.from_int(3), a), f.mul(f.from_int(2), b))
               for a, b in zip(x2, x3)]
              for x2, x3 in zip(r2, r3)] for r2, r3 in zip(E2, E3)]
    raise InternalError("idempotent matrix iteration did not stabilize")


def presented_module(A, E, n_copies, name=""):
    """The module e A^n for an idempotent n x n matrix e over A."""
    f = A.field
    dim_amb = A.dim * n_copies
    # the Q-linear projector x -> E x on A^n
    lefts = {}
    rows = [[f.zero] * dim_amb for _ in range(dim_amb)]
    for i in range(n_copies):
        for j in range(n_copies):
            key = tuple(E[i][j])
            if key not in lefts:
                lefts[key] = A.left_mult_matrix(list(key))
            L = lefts[key]
            for r in range(A.dim):
                for c in range(A.dim):
                    v = L.rows[r][c]
                    if v != f.zero:
                        rows[i * A.dim + r][j * A.dim + c] = \
                            f.add(rows[i * A.dim + r][j * A.dim + c], v)
    P = Matrix(dim_amb, dim_amb, rows, f)
    if P * P != P:
        raise InvalidInput("presentation matrix is not idempotent")
    emb = column_space_basis(P)
    free = free_module(A, n_copies)
    action = []
    for k in range(A.dim):
        img = free.action[k] * emb
        sol = solve_many(emb, img)
        if sol is None:
            raise InternalError("action does not preserve the presented module")
        action.append(sol)
    mod = RightModule(A, action, name or f"e*{A.name}^{n_copies}")
    return PresentedModule(mod, emb, E, n_copies)


def module_hom_space(M, N):
    """Basis of Hom_A(M, N) as Q-matrices N.dim x M.dim."""
    f = M.field
    A = M.algebra
    dm, dn = M.dim, N.dim
    nun = dn * dm
    rows = []
    for k in range(A.dim):
        rhoM = M.action[k]
        rhoN = N.action[k]
        # constraint: Phi rhoM - rhoN Phi = 0
        for r in range(dn):
            for c in range(dm):
                row = [f.zero] * nun
                for t in range(dm):
                    v = rhoM.rows[t][c]
                    if v != f.zero:
                        row[r * dm + t] = f.add(row[r * dm + t], v)
                for s in range(dn):
                    v = rhoN.rows[r][s]
                    if v != f.zero:
                        row[s * dm + c] = f.sub(row[s * dm + c], v)
                rows.append(row)
    K = kernel_basis(Matrix(len(rows), nun, rows, f)) if rows else \
        Matrix.identity(nun, f)
    out = []
    for c in range(K.ncols):
        col = K.col(c)
        out.append(Matrix(dn, dm, [col[r * dm:(r + 1) * dm] for r in range(dn)], f))
    return out


def is_module_isomorphism(M, N, F):
    """F: M -> N an A-linear bijection?"""
    if F.nrows != N.dim or F.ncols != M.dim:
        return False
    for k in range(M.algebra.dim):
        if F * M.action[k] != N.action[k] * F:
            return False
    return is_invertible(F)


def find_module_isomorphism(M, N, rng=None):
    """Search the hom space for an invertible element (deterministic
    sweep, then seeded random combinations); None if not found."""
    homs = module_hom_space(M, N)
    if M.dim != N.dim:
        return None
    for F in homs:
        if is_invertible(F):
            return F
    if rng is not None and homs:
        f = M.field
        for _ in range(200):
            coeffs = [rng.randrange(-3, 4) for _ in homs]
            F = Matrix.zeros(N.dim, M.dim, f)
            for c, H in zip(coeffs, homs):
                if c:
                    F = F + H.scale(c)
            if is_invertible(F):
                return F
    return None


def quotient_module(M, qd):
    """Q(M) = M / MJ as a module over A/J, with the projection map."""
    A, f = M.algebra, M.field
    J = qd.radical
    prods = []
    for c in range(J.ncols):
        act = M.action_matrix(J.col(c))
        for s in range(M.dim):
            prods.append(act.col(s))
    MJ = column_space_basis(Matrix.from_columns(M.dim, prods, f)) if prods \
        else Matrix(M.dim, 0, [[] for _ in range(M.dim)], f)
    full = echelon_extend(MJ, Matrix.identity(M.dim, f))
    comp = full.take_columns(range(MJ.ncols, M.dim))
    qdim = comp.ncols
    full_inv = inverse(full)
    proj = Matrix(qdim, M.dim, [full_inv.rows[MJ.ncols + i] for i in range(qdim)], f)
    Aq = qd.quotient
    action = []
    for k in range(Aq.dim):
        a_lift = qd.section.col(k)
        act = M.action_matrix(a_lift)
        action.append(proj * act * comp)
    Qm = RightModule(Aq, action, f"Q({M.name})")
    return Qm, proj, comp


def quotient_morphism(Fmat, projM, compM, projN):
    """Q(f) for f: M -> N given the quotient projections/sections."""
    return projN * Fmat * compM
