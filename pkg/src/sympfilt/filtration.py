"""Filtrations on symplectic spaces, their associated graded structure, and
the constructive splitting of a filtered symplectic space.

A filtration is stored as a single invertible basis matrix together with
cut points: the first cuts[k] columns span the k-th step.  Each step's
basis therefore extends the previous one, which makes quotient and graded
computations pivot-column bookkeeping.
"""

from dataclasses import dataclass

from .errors import InvalidInput, NotFilteredSymplectic
from .linalg import (Matrix, column_space_basis, echelon_extend, inverse,
                     is_invertible, rank, solve_many, span_contains, span_eq)
from .symplectic import SymplecticSpace, Subspace, perp


@dataclass(frozen=True)
class Filtration:
    """Nested chain F^lo <= ... <= F^hi = full space.

    Outside [lo, hi] the filtration extends by 0 below and the full space
    above.  `basis` is square invertible; `cuts[k]` says how many of its
    columns span F^{lo+k}."""

    ambient: int
    lo: int
    hi: int
    basis: Matrix
    cuts: tuple

    def __post_init__(self):
        if self.hi < self.lo:
            raise InvalidInput("empty filtration range")
        if len(self.cuts) != self.hi - self.lo + 1:
            raise InvalidInput("cut count does not match amplitude")
        if any(self.cuts[i] > self.cuts[i + 1] for i in range(len(self.cuts) - 1)):
            raise InvalidInput("filtration steps must be nested")
        if self.cuts[-1] != self.ambient:
            raise InvalidInput("top step must be the full space")
        if self.basis.nrows != self.ambient or not is_invertible(self.basis):
            raise InvalidInput("filtration basis must be square invertible")

    @property
    def field(self):
        return self.basis.field

    def cut(self, i):
        if i < self.lo:
            return 0
        if i >= self.hi:
            return self.ambient
        return self.cuts[i - self.lo]

    def step(self, i):
        """Basis matrix of F^i (columns)."""
        return self.basis.take_columns(range(self.cut(i)))

    def subspace(self, i):
        return Subspace(self.ambient, self.step(i))

    def step_rank(self, i):
        return self.cut(i)

    def graded_rank(self, i):
        return self.cut(i) - self.cut(i - 1)

    def graded_reps(self, i):
        """Columns representing Gr^i = F^i / F^{i-1}."""
        return self.basis.take_columns(range(self.cut(i - 1), self.cut(i)))

    def shift(self, n):
        """(F[n])^i = F^{i+n}."""
        return Filtration(self.ambient, self.lo - n, self.hi - n,
                          self.basis, self.cuts)

    def trim(self):
        """Drop outer indices where the step is 0 (below) or already full
        (above); keeps at least one step."""
        lo, hi = self.lo, self.hi
        cuts = list(self.cuts)
        while len(cuts) > 1 and cuts[0] == 0:
            cuts.pop(0)
            lo += 1
        while len(cuts) > 1 and cuts[-2] == self.ambient:
            cuts.pop()
            hi -= 1
        return Filtration(self.ambient, lo, hi, self.basis, tuple(cuts))

    @classmethod
    def from_subspaces(cls, ambient, lo, mats, field=None):
        """Build from nested step subspaces (list of column matrices for
        indices lo, lo+1, ...).  The stored basis extends step bases
        greedily, so representations are deterministic."""
        if not mats:
            raise InvalidInput("need at least one step")
        field = field or mats[0].field
        basis = Matrix(ambient, 0, [[] for _ in range(ambient)], field)
        cuts = []
        prev_rank = 0
        for M in mats:
            if M.nrows != ambient:
                raise InvalidInput("step has wrong ambient dimension")
            if not span_contains(M, basis):
                raise InvalidInput("steps are not nested")
            basis = echelon_extend(basis, M)
            if basis.ncols != rank(M):
                raise InvalidInput("steps are not nested")
            prev_rank = basis.ncols
            cuts.append(prev_rank)
        if prev_rank != ambient:
            # final step must be the whole space
            raise InvalidInput("top step must be the full space")
        return cls(ambient, lo, lo + len(mats) - 1, basis, tuple(cuts))


@dataclass(frozen=True)
class FilteredSymplecticSpace:
    space: SymplecticSpace
    filtration: Filtration

    def __post_init__(self):
        if self.space.dim != self.filtration.ambient:
            raise InvalidInput("space and filtration dimensions differ")
        if self.filtration.lo != -self.filtration.hi:
            raise InvalidInput("amplitude must be symmetric [1-n, n-1]")

    @property
    def n(self):
        return self.filtration.hi + 1

    @property
    def dim(self):
        return self.space.dim


@dataclass(frozen=True)
class GradedSymplecticSpace:
    """Graded pieces r_i for i in [lo, hi] with pairing matrices h_i.

    h_i is the matrix of the pairing between piece i and piece -i
    (Q(x, y) = x^T h_i y for x in piece i, y in piece -i), so
    h_i^T = -h_{-i} and each h_i is invertible."""

    lo: int
    hi: int
    dims: tuple
    pairings: dict  # i -> Matrix, present whenever dims[i] > 0

    def __post_init__(self):
        if self.lo != -self.hi:
            raise InvalidInput("graded range must be symmetric")
        if len(self.dims) != self.hi - self.lo + 1:
            raise InvalidInput("dims length does not match range")
        for i in range(self.lo, self.hi + 1):
            if self.dim_at(i) != self.dim_at(-i):
                raise InvalidInput("graded ranks must satisfy r_i = r_{-i}")
            if self.dim_at(i) > 0:
                H = self.pairings.get(i)
                Hm = self.pairings.get(-i)
                if H is None or Hm is None:
                    raise InvalidInput(f"missing pairing at degree {i}")
                if H.nrows != self.dim_at(i) or H.ncols != self.dim_at(-i):
                    raise InvalidInput(f"pairing shape mismatch at degree {i}")
                if H.transpose() != -Hm:
                    raise InvalidInput("pairings must satisfy h_i^T = -h_{-i}")
                if not is_invertible(H):
                    raise InvalidInput(f"pairing at degree {i} is singular")

    @property
    def field(self):
        for H in self.pairings.values():
            return H.field
        from .scalars import QQ
        return QQ

    def dim_at(self, i):
        if i < self.lo or i > self.hi:
            return 0
        return self.dims[i - self.lo]

    @property
    def total_dim(self):
        return sum(self.dims)

    def offset(self, i):
        """Column offset of piece i in the assembled model (ascending
        degree order)."""
        return sum(self.dim_at(j) for j in range(self.lo, i))

    def gram(self):
        """Assembled Gram matrix: block (i, -i) equals h_i."""
        m = self.total_dim
        f = self.field
        rows = [[f.zero] * m for _ in range(m)]
        for i in range(self.lo, self.hi + 1):
            r = self.dim_at(i)
            if r == 0:
                continue
            H = self.pairings[i]
            oi, oj = self.offset(i), self.offset(-i)
            for a in range(r):
                for b in range(self.dim_at(-i)):
                    rows[oi + a][oj + b] = H.rows[a][b]
        return Matrix(m, m, rows, f)

    def degrees(self):
        out = []
        for i in range(self.lo, self.hi + 1):
            out.extend([i] * self.dim_at(i))
        return out


@dataclass(frozen=True)
class SplittingIsometry:
    source: FilteredSymplecticSpace
    target: GradedSymplecticSpace
    phi: Matrix  # columns, grouped by ascending degree, give the new basis

    def degree_prefix(self, i):
        """Columns of phi of degree <= i."""
        k = sum(self.target.dim_at(j) for j in range(self.target.lo, i + 1))
        return self.phi.take_columns(range(k))


def dual_filtration(F):
    """The dual filtration F^{vee,-i} = ann(F^i).

    Stored on the window [1-hi, 1-lo] so the top stored step is the full
    dual space; under the extension convention the identity
    F^{vee,-i} = ann(F^i) holds for every i."""
    from .linalg import annihilator
    mats = []
    for j in range(1 - F.hi, 1 - F.lo + 1):
        mats.append(annihilator(F.step(-j)))
    return Filtration.from_subspaces(F.ambient, 1 - F.hi, mats, F.field)


def is_filtered_symplectic(S, F):
    """Does F^j = perp(F^{-j-1}) hold at every index?"""
    if F.lo != -F.hi:
        raise InvalidInput("amplitude must be symmetric [1-n, n-1]")
    if S.dim != F.ambient:
        raise InvalidInput("dimension mismatch")
    for j in range(F.lo, F.hi + 1):
        target = perp(S, Subspace(F.ambient, F.step(-j - 1)))
        if not span_eq(F.step(j), target.basis):
            return False
    return True


def associated_graded(fs):
    """Graded ranks and induced pairings h_i of a filtered symplectic
    space; raises NotFilteredSymplectic when the compatibility fails."""
    S, F = fs.space, fs.filtration
    if not is_filtered_symplectic(S, F):
        raise NotFilteredSymplectic("perp compatibility fails")
    dims = tuple(F.graded_rank(i) for i in range(F.lo, F.hi + 1))
    pairings = {}
    for i in range(F.lo, F.hi + 1):
        r = dims[i - F.lo]
        if r == 0:
            continue
        reps_i = F.graded_reps(i)
        reps_mi = F.graded_reps(-i)
        rows = [[S.form(reps_i.col(a), reps_mi.col(b))
                 for b in range(reps_mi.ncols)] for a in range(reps_i.ncols)]
        pairings[i] = Matrix(r, reps_mi.ncols, rows, S.field)
    return GradedSymplecticSpace(F.lo, F.hi, dims, pairings)


def build_from_graded(G):
    """Assemble the split model: E = direct sum of the pieces in ascending
    degree order, F^k = span of pieces <= k."""
    gram = G.gram()
    space = SymplecticSpace(gram)
    m = G.total_dim
    cuts = []
    acc = 0
    for i in range(G.lo, G.hi + 1):
        acc += G.dim_at(i)
        cuts.append(acc)
    F = Filtration(m, G.lo, G.hi, Matrix.identity(m, G.field), tuple(cuts))
    fs = FilteredSymplecticSpace(space, F)
    assert is_filtered_symplectic(space, F)
    return fs


def _split_columns(S, F):
    """Recursive outer-layer peeling; returns (columns, degrees) in the
    ambient coordinates of (S, F)."""
    m = F.ambient
    f = F.field
    if m == 0:
        return [], []
    if F.lo == F.hi:
        # single step: everything sits in degree F.lo (= 0 when symmetric)
        ident = Matrix.identity(m, f)
        return ident.columns(), [F.lo] * m

    lo, hi = F.lo, F.hi
    w_cut = F.cut(lo)
    mid_cut = F.cut(hi - 1)
    W = F.basis.take_columns(range(w_cut))
    V_reps = F.basis.take_columns(range(w_cut, mid_cut))
    tops = [F.basis.col(j) for j in range(mid_cut, m)]
    s = len(tops)
    if s != w_cut:
        raise NotFilteredSymplectic("bottom and top layers have unequal rank")

    # the quotient W^perp / W in the coordinates of V_reps
    mV = V_reps.ncols
    gv_rows = [[S.form(V_reps.col(a), V_reps.col(b)) for b in range(mV)]
               for a in range(mV)]
    G_V = Matrix(mV, mV, gv_rows, f)
    sub_cuts = tuple(F.cut(i) - w_cut for i in range(lo + 1, hi))
    if mV > 0:
        SV = SymplecticSpace(G_V)
        FV = Filtration(mV, lo + 1, hi - 1, Matrix.identity(mV, f), sub_cuts)
        psi_cols, mid_degrees = _split_columns(SV, FV)
        mid_cols = [V_reps.mul_vec(c) for c in psi_cols]
    else:
        mid_cols, mid_degrees = [], []
        if hi - 1 >= lo + 1 and any(c != 0 for c in sub_cuts):
            raise NotFilteredSymplectic("inconsistent middle layer")

    if s == 0:
        return mid_cols, mid_degrees

    # make the top representatives pair to zero with the middle
    if mV > 0:
        gvt = G_V.transpose()
        rhs_cols = []
        for t in tops:
            rhs_cols.append([S.form(t, V_reps.col(b)) for b in range(mV)])
        # columns c with G_V^T c = rhs  give  Q(t - V_reps c, v_b) = 0
        C = solve_many(gvt, Matrix.from_columns(mV, rhs_cols, f))
        assert C is not None
        corrected = []
        for k, t in enumerate(tops):
            adj = V_reps.mul_vec(C.col(k))
            corrected.append([f.sub(a, b) for a, b in zip(t, adj)])
        tops = corrected

    # dual vectors e_k in W with Q(e_k, top_j) = delta_kj
    mwf_rows = [[S.form(W.col(i), t) for t in tops] for i in range(s)]
    Mwf = Matrix(s, s, mwf_rows, f)
    D = inverse(Mwf.transpose())
    if D is None:
        raise NotFilteredSymplectic("bottom/top pairing is singular")
    E_cols = [W.mul_vec(D.col(k)) for k in range(s)]

    # Gram-Schmidt pass making the corrected tops mutually isotropic
    bars = []
    for j, t in enumerate(tops):
        acc = list(t)
        for k in range(j):
            q = S.form(t, tops[k])
            if q != f.zero:
                ek = E_cols[k]
                acc = [f.sub(a, f.mul(q, b)) for a, b in zip(acc, ek)]
        bars.append(acc)

    cols = [W.col(i) for i in range(s)] + mid_cols + bars
    degrees = [lo] * s + mid_degrees + [hi] * s
    return cols, degrees


def split_filtration(fs):
    """Constructive splitting: phi with phi(F^i-prefix) = F^i and
    phi^T G phi exactly block-antidiagonal in the graded pairings."""
    S, F = fs.space, fs.filtration
    if not is_filtered_symplectic(S, F):
        raise NotFilteredSymplectic("perp compatibility fails")
    cols, degrees = _split_columns(S, F)
    phi = Matrix.from_columns(F.ambient, cols, F.field)
    assert is_invertible(phi)
    transported = phi.transpose() * S.gram * phi
    # read off graded data and verify the block support
    dims = [0] * (F.hi - F.lo + 1)
    for d in degrees:
        dims[d - F.lo] += 1
    offsets = {}
    acc = 0
    for i in range(F.lo, F.hi + 1):
        offsets[i] = acc
        acc += dims[i - F.lo]
    pairings = {}
    f = F.field
    for i in range(F.lo, F.hi + 1):
        ri = dims[i - F.lo]
        if ri == 0:
            continue
        oi, oj = offsets[i], offsets[-i]
        rows = [[transported.rows[oi + a][oj + b]
                 for b in range(dims[-i - F.lo])] for a in range(ri)]
        pairings[i] = Matrix(ri, dims[-i - F.lo], rows, f)
    # all blocks away from the (i, -i) antidiagonal must vanish
    for i in range(F.lo, F.hi + 1):
        for j in range(F.lo, F.hi + 1):
            if j == -i:
                continue
            for a in range(dims[i - F.lo]):
                for b in range(dims[j - F.lo]):
                    if transported.rows[offsets[i] + a][offsets[j] + b] != f.zero:
                        raise AssertionError("splitting produced a stray block")
    target = GradedSymplecticSpace(F.lo, F.hi, tuple(dims), pairings)
    split = SplittingIsometry(fs, target, phi)
    # filtration compatibility: degree prefix spans F^i
    for i in range(F.lo, F.hi):
        assert span_eq(split.degree_prefix(i), F.step(i))
    return split
