"""epsilon-hermitian modules over algebras with involution: duals and the
canonical double-dual identification, the radical-quotient functor on
hermitian objects, symmetrized lifting, hyperbolic rings and modules, the
H-functor equivalence, product splitting and diagonalization over fields.

Conventions: M* = Hom_A(M, A) with right action (f.a)(m) = mu(a) f(m);
can_M(m)(f) = mu(f(m)); a sesquilinear form twists its first slot,
b(xa, ya') = mu(a) b(x, y) a'; epsilon-hermitian means
b(x, y) = epsilon mu(b(y, x)).
"""

from dataclasses import dataclass

from .errors import (InternalError, InvalidIdempotents, InvalidInput, NoLift,
                     Singular, Unsupported)
from .algebra import (AlgebraWithInvolution, PresentedModule, RightModule,
                      amatrix_mul, free_module, lift_idempotent_matrix,
                      module_hom_space, presented_module, quotient_module,
                      find_module_isomorphism)
from .linalg import (Matrix, column_space_basis, inverse, is_invertible,
                     kernel_basis, rank, solve_many, solve_linear)


# ---------------------------------------------------------------------------
# duals and the canonical map
# ---------------------------------------------------------------------------

@dataclass
class DualModule:
    """M* = Hom_A(M, A): `funcs[s]` is the matrix of the s-th basis
    functional (A-coordinates of f(x) = funcs[s] * x)."""

    base: RightModule
    module: RightModule
    funcs: list

    @property
    def dim(self):
        return len(self.funcs)

    def eval(self, fcoords, x):
        """A-coordinates of f(x) for f given in dual-basis coordinates."""
        f = self.base.field
        A = self.base.algebra
        out = [f.zero] * A.dim
        for s, c in enumerate(fcoords):
            if c == f.zero:
                continue
            val = self.funcs[s].mul_vec(x)
            for k, v in enumerate(val):
                if v != f.zero:
                    out[k] = f.add(out[k], f.mul(c, v))
        return out

    def func_matrix(self, fcoords):
        f = self.base.field
        out = Matrix.zeros(self.funcs[0].nrows, self.funcs[0].ncols, f) \
            if self.funcs else Matrix.zeros(self.base.algebra.dim, self.base.dim, f)
        for s, c in enumerate(fcoords):
            if c != f.zero:
                out = out + self.funcs[s].scale(c)
        return out

    def coords_of(self, func_mat):
        """Dual-basis coordinates of an explicit functional matrix."""
        f = self.base.field
        cols = [[Phi.rows[r][c] for r in range(Phi.nrows) for c in range(Phi.ncols)]
                for Phi in self.funcs]
        target = [func_mat.rows[r][c] for r in range(func_mat.nrows)
                  for c in range(func_mat.ncols)]
        B = Matrix.from_columns(len(target), cols, f)
        sol = solve_linear(B, target)
        if sol is None:
            raise InternalError("functional outside the dual module")
        return sol.col(0)


def build_dual(M):
    """Compute M* with its twisted right action."""
    A = M.algebra
    f = M.field
    na, dm = A.dim, M.dim
    nun = na * dm
    rights = A.right_mults()
    rows = []
    # constraint: Phi rho(b_k) = R_{b_k} Phi  (A-linearity of functionals)
    for k in range(na):
        rho = M.action[k]
        R = rights[k]
        for r in range(na):
            for c in range(dm):
                row = [f.zero] * nun
                for t in range(dm):
                    v = rho.rows[t][c]
                    if v != f.zero:
                        row[r * dm + t] = f.add(row[r * dm + t], v)
                for s in range(na):
                    v = R.rows[r][s]
                    if v != f.zero:
                        row[s * dm + c] = f.sub(row[s * dm + c], v)
                rows.append(row)
    K = kernel_basis(Matrix(len(rows), nun, rows, f)) if rows else \
        Matrix.identity(nun, f)
    funcs = []
    for c in range(K.ncols):
        col = K.col(c)
        funcs.append(Matrix(na, dm, [col[r * dm:(r + 1) * dm] for r in range(na)], f))
    # right action (f.a) = L_{mu(a)} o f
    dstar = len(funcs)
    flat_cols = [[Phi.rows[r][c] for r in range(na) for c in range(dm)]
                 for Phi in funcs]
    B = Matrix.from_columns(na * dm, flat_cols, f) if funcs else \
        Matrix(na * dm, 0, [[] for _ in range(na * dm)], f)
    action = []
    for k in range(na):
        Lmu = A.left_mult_matrix(A.involve(A.basis_vector(k)))
        imgs = []
        for Phi in funcs:
            img = Lmu * Phi
            imgs.append([img.rows[r][c] for r in range(na) for c in range(dm)])
        sol = solve_many(B, Matrix.from_columns(na * dm, imgs, f)) if funcs else \
            Matrix(0, 0, [], f)
        if sol is None:
            raise InternalError("dual action does not preserve the dual module")
        action.append(sol)
    mod = RightModule(A, action if funcs else
                      [Matrix(0, 0, [], f) for _ in range(na)],
                      f"({M.name})*")
    mod.dim = dstar
    return DualModule(M, mod, funcs)


def can_map(M, dd=None, ddd=None):
    """The canonical isomorphism can_M : M -> M**, can(m)(f) = mu(f(m)).

    Returns (matrix dimM** x dimM, dual of M, dual of M*)."""
    A = M.algebra
    dd = dd or build_dual(M)
    ddd = ddd or build_dual(dd.module)
    cols = []
    for t in range(M.dim):
        x = [M.field.zero] * M.dim
        x[t] = M.field.one
        # functional on M*: f_s -> mu(f_s(x))
        colvals = [A.involve(dd.funcs[s].mul_vec(x)) for s in range(dd.dim)]
        Psi = Matrix.from_columns(A.dim, colvals, M.field) if dd.dim else \
            Matrix(A.dim, 0, [[] for _ in range(A.dim)], M.field)
        cols.append(ddd.coords_of(Psi))
    can = Matrix.from_columns(ddd.dim, cols, M.field)
    return can, dd, ddd


def dual_morphism(Fmat, ddM, ddN):
    """f* : N* -> M* for f : M -> N, f*(g) = g o f."""
    cols = []
    for s in range(ddN.dim):
        cols.append(ddM.coords_of(ddN.funcs[s] * Fmat))
    if not cols:
        return Matrix(ddM.dim, 0, [[] for _ in range(ddM.dim)], ddM.base.field)
    return Matrix.from_columns(ddM.dim, cols, ddM.base.field)


# ---------------------------------------------------------------------------
# hermitian modules
# ---------------------------------------------------------------------------

@dataclass
class HermitianModule:
    module: RightModule
    form: list          # form[i][j] = A-coordinates of b(x_i, x_j)
    epsilon: int = 1

    @property
    def dim(self):
        return self.module.dim

    def value(self, x, y):
        """b(x, y) by bilinear expansion (the mu-twist is already encoded
        in the tensor)."""
        A = self.module.algebra
        f = self.module.field
        out = [f.zero] * A.dim
        for i, xi in enumerate(x):
            if xi == f.zero:
                continue
            row = self.form[i]
            for j, yj in enumerate(y):
                if yj == f.zero:
                    continue
                c = f.mul(xi, yj)
                for k, v in enumerate(row[j]):
                    if v != f.zero:
                        out[k] = f.add(out[k], f.mul(c, v))
        return out

    def twisted_value(self, x, y):
        """b(x, y) where x, y are coordinate vectors: the form tensor is
        Q-bilinear in the chosen basis, but for non-basis arguments the
        first slot must be twisted through mu; values on coordinate
        vectors are still correct because coordinates are rational."""
        return self.value(x, y)


def hermitian_check(hm, dd=None):
    """Verify sesquilinearity on basis triples, the epsilon-symmetry, and
    nonsingularity of the adjoint; returns (ok, diagnostics)."""
    M = hm.module
    A = M.algebra
    f = M.field
    dm = M.dim
    basis = [[f.one if i == t else f.zero for i in range(dm)] for t in range(dm)]
    for t in range(dm):
        for k in range(A.dim):
            xk = M.action[k].mul_vec(basis[t])
            for j in range(dm):
                lhs = hm.value(xk, basis[j])
                rhs = A.mul(A.involve(A.basis_vector(k)), hm.form[t][j])
                if lhs != rhs:
                    return False, f"first-slot sesquilinearity fails at ({t},{k},{j})"
            for j in range(dm):
                lhs = hm.value(basis[j], xk)
                rhs = A.mul(hm.form[j][t], A.basis_vector(k))
                if lhs != rhs:
                    return False, f"second-slot linearity fails at ({j},{k},{t})"
    for i in range(dm):
        for j in range(dm):
            rhs = A.involve(hm.form[j][i])
            if hm.epsilon == -1:
                rhs = [f.neg(v) for v in rhs]
            if hm.form[i][j] != rhs:
                return False, f"epsilon-symmetry fails at ({i},{j})"
    ok, msg = adjoint_is_isomorphism(hm, dd)
    if not ok:
        return False, msg
    return True, "ok"


def adjoint_matrix(hm, dd=None):
    """h_b : M -> M* in the computed dual basis."""
    M = hm.module
    dd = dd or build_dual(M)
    A = M.algebra
    f = M.field
    cols = []
    for i in range(M.dim):
        Phi = Matrix.from_columns(A.dim, [hm.form[i][j] for j in range(M.dim)], f)
        cols.append(dd.coords_of(Phi))
    H = Matrix.from_columns(dd.dim, cols, f) if cols else \
        Matrix(dd.dim, 0, [[] for _ in range(dd.dim)], f)
    return H, dd


def adjoint_is_isomorphism(hm, dd=None):
    try:
        H, dd = adjoint_matrix(hm, dd)
    except InternalError:
        return False, "adjoint does not land in the dual module"
    if H.nrows != H.ncols:
        return False, "dim M* != dim M"
    if not is_invertible(H):
        return False, "adjoint h_b is singular"
    return True, "ok"


def symmetrize_form(hm):
    """The projection b -> (b + eps mu(b)^T)/2; hermitian forms are fixed
    points."""
    M = hm.module
    A = M.algebra
    f = M.field
    half = f.div(f.one, f.from_int(2))
    out = []
    for i in range(M.dim):
        row = []
        for j in range(M.dim):
            other = A.involve(hm.form[j][i])
            if hm.epsilon == -1:
                other = [f.neg(v) for v in other]
            row.append([f.mul(half, f.add(a, b))
                        for a, b in zip(hm.form[i][j], other)])
        out.append(row)
    return HermitianModule(M, out, hm.epsilon)


def is_isometry(hm_src, hm_dst, Fmat):
    """F: (M, b) -> (N, b') with b'(Fx, Fy) = b(x, y), A-linear, bijective."""
    M, N = hm_src.module, hm_dst.module
    if Fmat.nrows != N.dim or Fmat.ncols != M.dim:
        return False
    for k in range(M.algebra.dim):
        if Fmat * M.action[k] != N.action[k] * Fmat:
            return False
    if not is_invertible(Fmat):
        return False
    f = M.field
    for i in range(M.dim):
        xi = Fmat.col(i)
        for j in range(M.dim):
            yj = Fmat.col(j)
            if hm_dst.value(xi, yj) != hm_src.form[i][j]:
                return False
    return True


# ---------------------------------------------------------------------------
# the radical-quotient functor on hermitian modules
# ---------------------------------------------------------------------------

def quotient_hermitian(hm, qd):
    """Q_herm(M, b) = (M/MJ, q o b); returns (hermitian module over A/J,
    projection, section)."""
    Qm, proj, comp = quotient_module(hm.module, qd)
    form = []
    for i in range(Qm.dim):
        row = []
        for j in range(Qm.dim):
            v = hm.value(comp.col(i), comp.col(j))
            row.append(qd.projection.mul_vec(v))
        form.append(row)
    return HermitianModule(Qm, form, hm.epsilon), proj, comp


@dataclass
class PresentedHermitian:
    """(e A^n, b) with b(x, y) = sum mu(x_i) C[i][j] y_j on e A^n."""

    presented: PresentedModule
    cmatrix: list  # n x n matrix of A-coordinate vectors

    def to_hermitian(self, epsilon=1):
        A = self.presented.module.algebra
        f = A.field
        emb = self.presented.embedding
        n = self.presented.copies
        na = A.dim
        dm = self.presented.module.dim
        form = []
        for s in range(dm):
            xs = emb.col(s)
            row = []
            for t in range(dm):
                yt = emb.col(t)
                acc = [f.zero] * na
                for i in range(n):
                    xi = A.involve(xs[i * na:(i + 1) * na])
                    for j in range(n):
                        yj = yt[j * na:(j + 1) * na]
                        v = A.mul(A.mul(xi, self.cmatrix[i][j]), yj)
                        acc = [f.add(a, b) for a, b in zip(acc, v)]
                row.append(acc)
            form.append(row)
        return HermitianModule(self.presented.module, form, epsilon)


def symmetrize_and_lift(A, qd, ebar_matrix, cbar_matrix, epsilon=1):
    """Lift a presented hermitian module over A/J to one over A:
    idempotent lifting for the module, any linear lift of the form,
    then the symmetrization (h' + eps (h')* can)/2.

    Returns (hermitian module over A, PresentedHermitian, reduction
    isometry onto the input)."""
    Aq = qd.quotient
    f = A.field
    if f.char == 2:
        raise Unsupported("symmetrized lifting needs 2 invertible")
    n = len(ebar_matrix)
    E = lift_idempotent_matrix(A, qd, ebar_matrix)
    # entrywise section lift of the form matrix, then symmetrize:
    # C <- (C + eps mu(C)^T)/2
    C = [[qd.section.mul_vec(c) for c in row] for row in cbar_matrix]
    half = f.div(f.one, f.from_int(2))
    Csym = []
    for i in range(n):
        row = []
        for j in range(n):
            other = A.involve(C[j][i])
            if epsilon == -1:
                other = [f.neg(v) for v in other]
            row.append([f.mul(half, f.add(a, b))
                        for a, b in zip(C[i][j], other)])
        Csym.append(row)
    pm = presented_module(A, E, n)
    ph = PresentedHermitian(pm, Csym)
    hm = ph.to_hermitian(epsilon)
    ok, msg = adjoint_is_isomorphism(hm)
    if not ok:
        raise NoLift(f"lifted form is singular: {msg} "
                     "(impossible for a nonsingular input)")
    # reduction isometry onto the input presentation over A/J
    qm_pres = presented_module(Aq, ebar_matrix, n)
    target = PresentedHermitian(qm_pres, cbar_matrix).to_hermitian(epsilon)
    Qhm, proj, comp = quotient_hermitian(hm, qd)
    # map Q(M) -> e(Aq)^n: reduce ambient coordinates entrywise
    cols = []
    for s in range(Qhm.module.dim):
        amb = pm.embedding * Matrix.column(comp.col(s), f)
        vec = amb.col(0)
        red = []
        for i in range(n):
            red.extend(qd.projection.mul_vec(vec[i * A.dim:(i + 1) * A.dim]))
        sol = solve_linear(qm_pres.embedding, red)
        if sol is None:
            raise InternalError("reduced module does not land in the target")
        cols.append(sol.col(0))
    nu = Matrix.from_columns(qm_pres.module.dim, cols, f)
    if not is_isometry(Qhm, target, nu):
        raise InternalError("reduction is not an isometry")
    return hm, ph, (Qhm, target, nu)


def lift_isometry(A, qd, hmM, compM, hmN, projN, fj):
    """Lift an isometry f_J : Q(M) -> Q(N) to an isometry f : M -> N via
    f = (f' + (h^N)^{-1} (f')^{*-1} h^M)/2 for any A-linear lift f'."""
    M, N = hmM.module, hmN.module
    f = M.field
    dm, dn = M.dim, N.dim
    # solve for f': A-linear with projN f' compM = fj
    nun = dn * dm
    rows, rhs = [], []
    for k in range(A.dim):
        rhoM, rhoN = M.action[k], N.action[k]
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
                rhs.append(f.zero)
    # reduction condition
    for r in range(fj.nrows):
        for c in range(compM.ncols):
            row = [f.zero] * nun
            for s in range(dn):
                for t in range(dm):
                    v = f.mul(projN.rows[r][s], compM.rows[t][c])
                    if v != f.zero:
                        row[s * dm + t] = f.add(row[s * dm + t], v)
            rows.append(row)
            rhs.append(fj.rows[r][c])
    sol = solve_linear(Matrix(len(rows), nun, rows, f), rhs)
    if sol is None:
        raise NoLift("no A-linear lift of the isometry exists "
                     "(impossible by fullness)")
    col = sol.col(0)
    fprime = Matrix(dn, dm, [col[r * dm:(r + 1) * dm] for r in range(dn)], f)
    ddM = build_dual(M)
    ddN = build_dual(N)
    HM, _ = adjoint_matrix(hmM, ddM)
    HN, _ = adjoint_matrix(hmN, ddN)
    fstar = dual_morphism(fprime, ddM, ddN)
    fstar_inv = inverse(fstar)
    if fstar_inv is None:
        raise NoLift("dual of the lift is singular")
    half = f.div(f.one, f.from_int(2))
    favg = (fprime + inverse(HN) * fstar_inv * HM).scale(half)
    if not is_isometry(hmM, hmN, favg):
        raise InternalError("averaged lift is not an isometry")
    return favg


# ---------------------------------------------------------------------------
# hyperbolic rings and modules
# ---------------------------------------------------------------------------

def hyperbolic_algebra(A):
    """H(A) = A x A^op with the swap involution mu(a, b^op) = (b, a^op)."""
    f = A.field
    n = A.dim
    N = 2 * n
    zero = [f.zero] * N

    def emb1(v):
        return list(v) + [f.zero] * n

    def emb2(v):
        return [f.zero] * n + list(v)

    mul = []
    for i in range(N):
        row = []
        for j in range(N):
            if i < n and j < n:
                row.append(emb1(A.mul_table[i][j]))
            elif i >= n and j >= n:
                # (0, x^op)(0, y^op) = (0, (y x)^op)
                row.append(emb2(A.mul_table[j - n][i - n]))
            else:
                row.append(list(zero))
        mul.append(row)
    unit = [f.add(a, b) for a, b in zip(emb1(A.unit), emb2(A.unit))]
    rows = [[f.zero] * N for _ in range(N)]
    for k in range(n):
        rows[n + k][k] = f.one
        rows[k][n + k] = f.one
    mu = Matrix(N, N, rows, f)
    return AlgebraWithInvolution(mul, unit, mu, f, f"H({A.name})")


@dataclass
class HyperbolicModule:
    """H(M) = M + M* over H(A), with the block form
    b((m,f),(m',f')) = (f(m'), f'(m)^op)."""

    hermitian: HermitianModule
    halg: AlgebraWithInvolution
    base: RightModule
    dual: DualModule

    @property
    def dim(self):
        return self.hermitian.dim


def hyperbolic_module(HA, M, dd=None):
    """Build H(M) over the hyperbolic algebra HA = H(M.algebra)."""
    A = M.algebra
    f = M.field
    dd = dd or build_dual(M)
    dm, ds = M.dim, dd.dim
    n = A.dim
    dim = dm + ds
    # action of (b_k, 0): (m, f) -> (m b_k, 0-part on functionals)
    # action of (0, b_k^op): (m, f) -> (0, L_{b_k} o f)
    flat_cols = [[Phi.rows[r][c] for r in range(n) for c in range(M.dim)]
                 for Phi in dd.funcs]
    B = Matrix.from_columns(n * dm, flat_cols, f) if dd.funcs else \
        Matrix(n * dm, 0, [[] for _ in range(n * dm)], f)
    action = []
    for k in range(n):
        rows = [[f.zero] * dim for _ in range(dim)]
        rho = M.action[k]
        for r in range(dm):
            for c in range(dm):
                rows[r][c] = rho.rows[r][c]
        action.append(Matrix(dim, dim, rows, f))
    for k in range(n):
        Lk = A.left_mult_matrix(A.basis_vector(k))
        imgs = []
        for Phi in dd.funcs:
            img = Lk * Phi
            imgs.append([img.rows[r][c] for r in range(n) for c in range(dm)])
        sol = solve_many(B, Matrix.from_columns(n * dm, imgs, f)) if dd.funcs \
            else Matrix(0, 0, [], f)
        if sol is None:
            raise InternalError("left action does not preserve the dual")
        rows = [[f.zero] * dim for _ in range(dim)]
        for r in range(ds):
            for c in range(ds):
                rows[dm + r][dm + c] = sol.rows[r][c]
        action.append(Matrix(dim, dim, rows, f))
    mod = RightModule(HA, action, f"H({M.name})")
    # the block form
    zero = [f.zero] * HA.dim
    form = [[list(zero) for _ in range(dim)] for _ in range(dim)]
    for i in range(dm):
        x = [f.one if t == i else f.zero for t in range(dm)]
        for s in range(ds):
            fs = [f.one if t == s else f.zero for t in range(ds)]
            val = dd.eval(fs, x)
            # b((m_i,0),(0,f_s)) = (0, (f_s(m_i))^op)
            form[i][dm + s] = [f.zero] * n + list(val)
            # b((0,f_s),(m_i,0)) = (f_s(m_i), 0)
            form[dm + s][i] = list(val) + [f.zero] * n
    hm = HermitianModule(mod, form, 1)
    return HyperbolicModule(hm, HA, M, dd)


def hyperbolic_morphism(HA, hmod_src, hmod_dst, Fmat):
    """H(f) = diag(f, (f*)^{-1}) : H(M1) -> H(M2) for an iso f."""
    dd1, dd2 = hmod_src.dual, hmod_dst.dual
    fstar = dual_morphism(Fmat, dd1, dd2)  # M2* -> M1*
    fstar_inv = inverse(fstar)
    if fstar_inv is None:
        raise InvalidInput("morphism is not invertible")
    f = Fmat.field
    d1, s1 = hmod_src.base.dim, dd1.dim
    d2, s2 = hmod_dst.base.dim, dd2.dim
    rows = [[f.zero] * (d1 + s1) for _ in range(d2 + s2)]
    for r in range(d2):
        for c in range(d1):
            rows[r][c] = Fmat.rows[r][c]
    for r in range(s2):
        for c in range(s1):
            rows[d2 + r][d1 + c] = fstar_inv.rows[r][c]
    return Matrix(d2 + s2, d1 + s1, rows, f)


def decompose_hyperbolic(HA, A, hm):
    """Invert the H-functor: split a hermitian module over H(A) through
    the idempotents (1,0), (0,1) and rebuild it as H(M1).

    Returns (M1 as an A-module, the model H(M1), the isometry hm -> model)."""
    f = hm.module.field
    n = A.dim
    e1 = list(A.unit) + [f.zero] * n
    e2 = [f.zero] * n + list(A.unit)
    P1 = hm.module.action_matrix(e1)
    P2 = hm.module.action_matrix(e2)
    emb1 = column_space_basis(P1)
    emb2 = column_space_basis(P2)
    # M1 as an A-module: a acts as (a, 0)
    action1 = []
    for k in range(n):
        a_in_h = [f.zero] * (2 * n)
        a_in_h[k] = f.one
        act = hm.module.action_matrix(a_in_h) * emb1
        sol = solve_many(emb1, act)
        if sol is None:
            raise InternalError("A-action does not preserve M(1,0)")
        action1.append(sol)
    M1 = RightModule(A, action1, "M.(1,0)")
    dd1 = build_dual(M1)
    # psi : M2 -> M1*, psi(x2)(m1) = first component of b(x2, m1)
    psi_cols = []
    for s in range(emb2.ncols):
        x2 = emb2.col(s)
        cols = []
        for t in range(emb1.ncols):
            v = hm.value(x2, emb1.col(t))
            cols.append(v[:n])
        Phi = Matrix.from_columns(n, cols, f)
        psi_cols.append(dd1.coords_of(Phi))
    psi = Matrix.from_columns(dd1.dim, psi_cols, f) if psi_cols else \
        Matrix(dd1.dim, 0, [[] for _ in range(dd1.dim)], f)
    model = hyperbolic_module(HA, M1, dd1)
    # the isometry u : hm -> H(M1): p -> (coords of p.e1, psi(coords of p.e2))
    sol1 = solve_many(emb1, P1)
    sol2 = solve_many(emb2, P2)
    if sol1 is None or sol2 is None:
        raise InternalError("projection coordinates failed")
    d1 = emb1.ncols
    rows = []
    for r in range(d1):
        rows.append(list(sol1.rows[r]))
    psi_part = psi * sol2
    for r in range(psi_part.nrows):
        rows.append(list(psi_part.rows[r]))
    u = Matrix(d1 + dd1.dim, hm.module.dim, rows, f)
    if not is_isometry(hm, model.hermitian, u):
        raise InternalError("hyperbolic decomposition is not an isometry")
    return M1, model, u


def hyperbolic_isometry(HA, A, hm1, hm2, rng=None):
    """Constructive isometry between two hermitian modules over H(A) of
    the same dimension (the rank-based extension corollary)."""
    M1, model1, u1 = decompose_hyperbolic(HA, A, hm1)
    M2, model2, u2 = decompose_hyperbolic(HA, A, hm2)
    g = find_module_isomorphism(M1, M2, rng)
    if g is None:
        raise InvalidInput("underlying A-modules are not isomorphic")
    Hg = hyperbolic_morphism(HA, model1, model2, g)
    iso = inverse(u2) * Hg * u1
    if not is_isometry(hm1, hm2, iso):
        raise InternalError("assembled hyperbolic isometry fails")
    return iso


# ---------------------------------------------------------------------------
# products, classification, diagonalization
# ---------------------------------------------------------------------------

def _central_orthogonal(A, idems):
    f = A.field
    total = [f.zero] * A.dim
    for e in idems:
        if A.mul(e, e) != list(e):
            return False, "not idempotent"
        for k in range(A.dim):
            bk = A.basis_vector(k)
            if A.mul(e, bk) != A.mul(bk, e):
                return False, "not central"
        total = [f.add(a, b) for a, b in zip(total, e)]
    for i, e in enumerate(idems):
        for j, e2 in enumerate(idems):
            if i != j and any(v != f.zero for v in A.mul(e, e2)):
                return False, "not orthogonal"
    if total != A.unit:
        return False, "do not sum to 1"
    return True, "ok"


def corner_algebra(A, e, name=""):
    """The unital algebra A e (= e A e for central e), with basis a chosen
    column basis of the right-multiplication image."""
    f = A.field
    Re = A.right_mult_matrix(e)
    emb = column_space_basis(Re)
    d = emb.ncols
    coords = lambda v: solve_linear(emb, v).col(0)
    mul = [[coords(A.mul(emb.col(i), emb.col(j))) for j in range(d)]
           for i in range(d)]
    unit = coords(e)
    mu_cols = [coords(A.involve(emb.col(i))) for i in range(d)]
    mu = Matrix.from_columns(d, mu_cols, f)
    alg = AlgebraWithInvolution(mul, unit, mu, f, name or f"{A.name}.e")
    return alg, emb


def product_split(A, hm, e1, e2):
    """Split a hermitian module along central orthogonal idempotents
    fixed by the involution; returns ((A1, hm1), (A2, hm2)) plus the
    reassembly isometry data."""
    ok, msg = _central_orthogonal(A, [e1, e2])
    if not ok:
        raise InvalidIdempotents(msg)
    if A.involve(e1) != list(e1) or A.involve(e2) != list(e2):
        raise InvalidIdempotents("involution does not fix the idempotents")
    out = []
    for e in (e1, e2):
        alg, emb = corner_algebra(A, e)
        act_e = hm.module.action_matrix(e)
        memb = column_space_basis(act_e)
        action = []
        for k in range(alg.dim):
            a_in_A = emb.col(k)
            act = hm.module.action_matrix(a_in_A) * memb
            sol = solve_many(memb, act)
            if sol is None:
                raise InternalError("corner action does not restrict")
            action.append(sol)
        Mi = RightModule(alg, action, f"M.e")
        form = []
        for i in range(memb.ncols):
            row = []
            for j in range(memb.ncols):
                v = hm.value(memb.col(i), memb.col(j))
                sol = solve_linear(emb, v)
                if sol is None:
                    raise InternalError("restricted form leaves the corner")
                row.append(sol.col(0))
            form.append(row)
        out.append((alg, HermitianModule(Mi, form, hm.epsilon), memb))
    # cross terms must vanish: b(M e1, M e2) = 0
    f = A.field
    m1, m2 = out[0][2], out[1][2]
    for i in range(m1.ncols):
        for j in range(m2.ncols):
            if any(v != f.zero for v in hm.value(m1.col(i), m2.col(j))):
                raise InternalError("cross block of a product split is nonzero")
    if m1.ncols + m2.ncols != hm.module.dim or \
            not is_invertible(m1.hstack(m2)):
        raise InternalError("product split does not reassemble the module")
    return (out[0][0], out[0][1]), (out[1][0], out[1][1])


def classify_involution_factors(A, idems):
    """Label the mu-orbits on a central orthogonal decomposition: fixed
    factors are 'preserved'; swapped pairs are exhibited as hyperbolic
    via (x, y^op) -> x + mu(y)."""
    ok, msg = _central_orthogonal(A, idems)
    if not ok:
        raise InvalidIdempotents(msg)
    f = A.field
    images = []
    for e in idems:
        me = A.involve(e)
        match = None
        for j, e2 in enumerate(idems):
            if me == list(e2):
                match = j
                break
        if match is None:
            raise InvalidIdempotents("involution does not permute the idempotents")
        images.append(match)
    seen = set()
    out = []
    for i, j in enumerate(images):
        if i in seen:
            continue
        if j == i:
            seen.add(i)
            out.append(("preserved", i))
        else:
            if images[j] != i:
                raise InvalidIdempotents("involution orbit is not an involution")
            seen.add(i)
            seen.add(j)
            _verify_swap_is_hyperbolic(A, idems[i], idems[j])
            out.append(("hyperbolic_pair", i, j))
    return out


def _verify_swap_is_hyperbolic(A, ei, ej):
    """Check (x, y^op) -> x + mu(y) is an isomorphism of algebras with
    involution H(A ei) -> A (ei + ej)."""
    f = A.field
    alg_i, emb_i = corner_algebra(A, ei)
    eij = [f.add(a, b) for a, b in zip(ei, ej)]
    alg_ij, emb_ij = corner_algebra(A, eij)
    HAi = hyperbolic_algebra(alg_i)
    d = alg_i.dim
    # the map on basis vectors of H(A ei)
    cols = []
    for k in range(d):
        x = emb_i.col(k)  # in A
        cols.append(solve_linear(emb_ij, x).col(0))
    for k in range(d):
        y = emb_i.col(k)
        cols.append(solve_linear(emb_ij, A.involve(y)).col(0))
    phi = Matrix.from_columns(alg_ij.dim, cols, f)
    if not is_invertible(phi):
        raise InvalidIdempotents("swap pair is not hyperbolic (map singular)")
    # multiplicativity and involution intertwine on basis pairs
    for i in range(HAi.dim):
        for j in range(HAi.dim):
            lhs = phi.mul_vec(HAi.mul(HAi.basis_vector(i), HAi.basis_vector(j)))
            rhs = alg_ij.mul(phi.mul_vec(HAi.basis_vector(i)),
                             phi.mul_vec(HAi.basis_vector(j)))
            if lhs != rhs:
                raise InvalidIdempotents("swap map is not multiplicative")
    for i in range(HAi.dim):
        lhs = phi.mul_vec(HAi.involve(HAi.basis_vector(i)))
        rhs = alg_ij.involve(phi.mul_vec(HAi.basis_vector(i)))
        if lhs != rhs:
            raise InvalidIdempotents("swap map does not intertwine involutions")


def diagonalize_form(b):
    """Congruent diagonalization of a nonsingular symmetric matrix over a
    field of characteristic != 2: returns P with P^T b P diagonal,
    diagonal entries nonzero."""
    f = b.field
    if f.char == 2:
        raise Unsupported("diagonalization needs 2 invertible")
    if not b.is_square() or b.transpose() != b:
        raise InvalidInput("form must be square symmetric")
    if not is_invertible(b):
        raise Singular("form is singular")
    n = b.nrows
    vecs = [[f.one if i == j else f.zero for i in range(n)] for j in range(n)]

    def bval(x, y):
        gx = b.mul_vec(y)
        acc = f.zero
        for a, c in zip(x, gx):
            if a != f.zero and c != f.zero:
                acc = f.add(acc, f.mul(a, c))
        return acc

    out = []
    rest = vecs
    while rest:
        pivot_idx = None
        for i, v in enumerate(rest):
            if bval(v, v) != f.zero:
                pivot_idx = i
                break
        if pivot_idx is None:
            # hyperbolic-pair seed: some pair must pair nontrivially
            found = False
            for i in range(len(rest)):
                for j in range(i + 1, len(rest)):
                    if bval(rest[i], rest[j]) != f.zero:
                        rest[i] = [f.add(a, c) for a, c in zip(rest[i], rest[j])]
                        found = True
                        break
                if found:
                    break
            if not found:
                raise Singular("form is singular on the remaining space")
            continue
        v = rest.pop(pivot_idx)
        d = bval(v, v)
        new_rest = []
        for w in rest:
            c = f.div(bval(v, w), d)
            new_rest.append([f.sub(a, f.mul(c, e)) for a, e in zip(w, v)])
        rest = new_rest
        out.append(v)
    P = Matrix.from_columns(n, out, f)
    D = P.transpose() * b * P
    for i in range(n):
        for j in range(n):
            if i != j and D.rows[i][j] != f.zero:
                raise InternalError("diagonalization failed")
        if D.rows[i][i] == f.zero:
            raise InternalError("zero diagonal entry after diagonalization")
    return P


# ---------------------------------------------------------------------------
# auxiliary checks used by the suites
# ---------------------------------------------------------------------------

def jm_iso(M, dd, qd):
    """The natural map Q(M*) -> Q(M)* (reduce a functional mod J);
    returns (matrix in the quotient dual bases, data).  Naturality in M is
    what the suites check."""
    A = M.algebra
    f = M.field
    Qm, projM, compM = quotient_module(M, qd)
    Qdual, projD, compD = quotient_module(dd.module, qd)
    dd_q = build_dual(Qm)
    cols = []
    for s in range(Qdual.dim):
        fcoords = compD.col(s)  # an element of M*
        Phi = dd.func_matrix(fcoords)
        # reduced functional: m-bar -> q(f(comp(m-bar)))
        red_cols = []
        for t in range(Qm.dim):
            x = compM.col(t)
            red_cols.append(qd.projection.mul_vec(Phi.mul_vec(x)))
        red = Matrix.from_columns(qd.quotient.dim, red_cols, f)
        cols.append(dd_q.coords_of(red))
    J = Matrix.from_columns(dd_q.dim, cols, f) if cols else \
        Matrix(dd_q.dim, 0, [[] for _ in range(dd_q.dim)], f)
    return J, (Qm, projM, compM, Qdual, projD, compD, dd_q)


def left_module_from_right_bar(M):
    """The left action matrices of bar(M): a . m = m . mu(a)."""
    A = M.algebra
    return [M.action_matrix(A.involve(A.basis_vector(k))) for k in range(A.dim)]


def dual_tensor_hom_check(M, N_left_action, N_dim):
    """dim(M* tensor_A N) = dim Hom_A(M, N-bar) and the canonical map
    phi(f, n)(m) = n . f(m) is a bijection.  N is a left module given by
    action matrices."""
    A = M.algebra
    f = M.field
    dd = build_dual(M)
    ds = dd.dim
    # tensor relations: f.a (x) n - f (x) a.n
    rel = []
    for s in range(ds):
        base_f = [f.one if t == s else f.zero for t in range(ds)]
        for k in range(A.dim):
            fa = dd.module.action[k].mul_vec(base_f)
            for t in range(N_dim):
                base_n = [f.one if u == t else f.zero for u in range(N_dim)]
                an = N_left_action[k].mul_vec(base_n)
                vec = [f.zero] * (ds * N_dim)
                for u, c in enumerate(fa):
                    if c != f.zero:
                        vec[u * N_dim + t] = f.add(vec[u * N_dim + t], c)
                for u, c in enumerate(an):
                    if c != f.zero:
                        vec[s * N_dim + u] = f.sub(vec[s * N_dim + u], c)
                rel.append(vec)
    RelM = Matrix.from_columns(ds * N_dim, rel, f) if rel else \
        Matrix(ds * N_dim, 0, [[] for _ in range(ds * N_dim)], f)
    rel_rank = rank(RelM)
    tensor_dim = ds * N_dim - rel_rank
    # Hom_A(M, N-bar): N-bar has right action via mu
    nbar_action = [Matrix(N_dim, N_dim,
                          [list(r) for r in N_left_action_mu(N_left_action, A, k).rows], f)
                   for k in range(A.dim)]
    Nbar = RightModule(A, nbar_action, "N-bar")
    homs = module_hom_space(M, Nbar)
    hom_dim = len(homs)
    # the canonical map on pure tensors, as a matrix into hom coordinates
    hom_flat = Matrix.from_columns(
        N_dim * M.dim,
        [[H.rows[r][c] for r in range(N_dim) for c in range(M.dim)] for H in homs],
        f) if homs else Matrix(N_dim * M.dim, 0, [[] for _ in range(N_dim * M.dim)], f)
    cols = []
    for s in range(ds):
        for t in range(N_dim):
            # phi(f_s, n_t)(m) = n_t . f_s(m) = mu(f_s(m)) acting on n_t (left)
            Hcols = []
            for c in range(M.dim):
                x = [f.one if u == c else f.zero for u in range(M.dim)]
                a = A.involve(dd.funcs[s].mul_vec(x))
                acted = [f.zero] * N_dim
                for k, ak in enumerate(a):
                    if ak != f.zero:
                        contrib = N_left_action[k].col(t)
                        for u, v in enumerate(contrib):
                            if v != f.zero:
                                acted[u] = f.add(acted[u], f.mul(ak, v))
                Hcols.append(acted)
            Hm = Matrix.from_columns(N_dim, Hcols, f)
            sol = solve_linear(hom_flat,
                               [Hm.rows[r][c] for r in range(N_dim)
                                for c in range(M.dim)])
            if sol is None:
                return tensor_dim, hom_dim, False
            cols.append(sol.col(0))
    phi = Matrix.from_columns(hom_dim, cols, f) if cols else \
        Matrix(hom_dim, 0, [[] for _ in range(hom_dim)], f)
    # phi must kill the relations and have rank = tensor_dim = hom_dim
    if rel and not (phi * RelM).is_zero():
        return tensor_dim, hom_dim, False
    return tensor_dim, hom_dim, (tensor_dim == hom_dim == rank(phi))


def N_left_action_mu(N_left_action, A, k):
    return N_left_action_cache(N_left_action, A, k)


def N_left_action_cache(N_left_action, A, k):
    """Right action of b_k on N-bar: m . a = mu(a) . m."""
    mu_bk = A.involve(A.basis_vector(k))
    f = A.field
    out = None
    for i, c in enumerate(mu_bk):
        if c == f.zero:
            continue
        term = N_left_action[i].scale(c)
        out = term if out is None else out + term
    if out is None:
        dim = N_left_action[0].nrows
        out = Matrix.zeros(dim, dim, f)
    return out
