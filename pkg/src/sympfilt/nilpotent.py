"""The canonical filtration attached to a nilpotent self-adjoint
endomorphism of a symplectic space.

For theta of nilpotency order n the filtration is

    C^l = sum over i - j = l, 0 <= i <= n, 1 <= j <= n+1
          of  ker(theta^i) `intersect` im(theta^{j-1}).

The stated index ranges include vacuous terms (ker theta^0 = 0,
im theta^n = 0); they are kept as stated and drop out by vacuity.
"""

from dataclasses import dataclass

from .errors import (HypothesisViolated, InvalidInput, NotNilpotent,
                     NotSelfAdjoint)
from .filtration import Filtration, FilteredSymplecticSpace, is_filtered_symplectic
from .linalg import (Matrix, column_space_basis, intersect_columns,
                     is_invertible, kernel_basis, rank, solve_many,
                     span_contains, span_eq, sum_columns)
from .symplectic import SymplecticSpace, is_self_adjoint, perp, Subspace


@dataclass(frozen=True)
class RankVector:
    """Graded ranks r_i of the canonical filtration, i in [1-n, n-1]."""

    n: int
    ranks: tuple

    def __post_init__(self):
        if len(self.ranks) != 2 * self.n - 1:
            raise InvalidInput("rank vector length must be 2n-1")
        if any(r < 0 for r in self.ranks):
            raise InvalidInput("ranks must be nonnegative")
        for i in range(1, self.n):
            if self.r(i) != self.r(-i):
                raise InvalidInput("ranks must satisfy r_i = r_{-i}")
        if self.n > 1 and self.r(self.n - 1) < 1:
            raise InvalidInput("outermost rank must be positive")

    def r(self, i):
        if abs(i) > self.n - 1:
            return 0
        return self.ranks[i + self.n - 1]

    @property
    def total(self):
        return sum(self.ranks)


def order_of_nilpotency(theta):
    """Least n >= 1 with theta^n = 0; NotNilpotent if theta^m != 0."""
    if not theta.is_square():
        raise InvalidInput("endomorphism must be square")
    m = theta.nrows
    if m == 0:
        return 1
    power = Matrix.identity(m, theta.field)
    for n in range(1, m + 1):
        power = power * theta
        if power.is_zero():
            return n
    raise NotNilpotent("theta^dim != 0")


def canonical_filtration(S, theta):
    """The filtration C^l = sum_{i-j=l} ker theta^i `cap` im theta^{j-1},
    computed by exact subspace intersections and sums."""
    if not is_self_adjoint(S, theta):
        raise NotSelfAdjoint("theta is not self-adjoint")
    n = order_of_nilpotency(theta)
    m = S.dim
    f = S.field
    # cache kernels and images of powers 0..n
    powers = [Matrix.identity(m, f)]
    for _ in range(n):
        powers.append(powers[-1] * theta)
    kers = [kernel_basis(powers[i]) for i in range(n + 1)]
    ims = [column_space_basis(powers[i]) for i in range(n + 1)]
    steps = []
    for l in range(1 - n, n):
        acc = Matrix(m, 0, [[] for _ in range(m)], f)
        for i in range(0, n + 1):
            j = i - l
            if j < 1 or j > n + 1:
                continue
            piece = intersect_columns(kers[i], ims[min(j - 1, n)])
            if piece.ncols:
                acc = sum_columns(acc, piece)
        steps.append(acc)
    return Filtration.from_subspaces(m, 1 - n, steps, f)


def rank_vector(C):
    """r_i = rank C^i - rank C^{i-1}; n recovered from the amplitude."""
    n = C.hi + 1
    ranks = tuple(C.graded_rank(i) for i in range(C.lo, C.hi + 1))
    return RankVector(n, ranks)


def _induced_graded_map(F, power, src, dst):
    """Matrix of the map Gr^src -> Gr^dst induced by `power`, in the
    graded representative bases of F; None if power does not map
    F^src into F^dst + F^{src-1}-compatible data."""
    reps = F.graded_reps(src)
    if reps.ncols == 0:
        return Matrix(F.graded_rank(dst), 0,
                      [[] for _ in range(F.graded_rank(dst))], F.field)
    images = power * reps
    # express image columns in [Gr^dst reps | F^{dst-1} basis]
    dst_reps = F.graded_reps(dst)
    lower = F.step(dst - 1)
    basis = dst_reps.hstack(lower)
    sol = solve_many(basis, images)
    if sol is None:
        return None
    rows = [sol.rows[a] for a in range(dst_reps.ncols)]
    return Matrix(dst_reps.ncols, reps.ncols, rows, F.field)


def graded_power_iso_check(S, theta, C):
    """theta^l : Gr^l -> Gr^{-l} an isomorphism for 0 <= l <= n-1, and
    theta : Gr^l -> Gr^{l-2} injective for l >= 1."""
    n = C.hi + 1
    m = S.dim
    power = Matrix.identity(m, S.field)
    for l in range(0, n):
        M = _induced_graded_map(C, power, l, -l)
        if M is None or M.nrows != M.ncols or not is_invertible(M):
            if C.graded_rank(l) > 0 or C.graded_rank(-l) > 0:
                return False
        power = power * theta
    for l in range(1, n):
        M = _induced_graded_map(C, theta, l, l - 2)
        if M is None:
            return False
        if M.ncols and rank(M) != M.ncols:
            return False
    return True


def characterization_check(S, theta, F):
    """The characterization lemma: if (S, F) is filtered symplectic,
    theta(F^i) <= F^{i-2}, and the induced theta^l : Gr^l -> Gr^{-l} are
    injective, then F must equal the canonical filtration.  Returns the
    step-by-step equality verdict after verifying the hypotheses."""
    if not is_filtered_symplectic(S, F):
        raise HypothesisViolated("filtered-symplectic",
                                 "F is not a symplectic filtration")
    n = F.hi + 1
    for i in range(F.lo, F.hi + 1):
        img = theta * F.step(i)
        if not span_contains(F.step(i - 2), img):
            raise HypothesisViolated("(1)", f"theta(F^{i}) not inside F^{i-2}")
    power = Matrix.identity(S.dim, S.field)
    for l in range(0, n):
        M = _induced_graded_map(F, power, l, -l)
        if M is None:
            raise HypothesisViolated("(2)", f"theta^{l} not defined on Gr^{l}")
        if M.ncols and rank(M) != M.ncols:
            raise HypothesisViolated("(2)", f"theta^{l} not injective on Gr^{l}")
        power = power * theta
    C = canonical_filtration(S, theta)
    if C.hi != F.hi:
        return False
    return all(span_eq(C.step(i), F.step(i)) for i in range(F.lo, F.hi + 1))


def perp_identity_check(S, C):
    """C^l-perp = C^{-l-1} for all l (exact subspace equality)."""
    for l in range(C.lo - 1, C.hi + 1):
        lhs = perp(S, Subspace(C.ambient, C.step(l))).basis
        if not span_eq(lhs, C.step(-l - 1)):
            return False
    return True


def lowers_filtration_by_two(theta, F):
    """theta(F^l) <= F^{l-2} for all l."""
    for l in range(F.lo, F.hi + 1):
        if not span_contains(F.step(l - 2), theta * F.step(l)):
            return False
    return True


@dataclass(frozen=True)
class NilpotentSelfAdjoint:
    space: SymplecticSpace
    theta: Matrix

    def __post_init__(self):
        if not is_self_adjoint(self.space, self.theta):
            raise NotSelfAdjoint("theta is not self-adjoint")
        order_of_nilpotency(self.theta)  # raises NotNilpotent if not

    @property
    def order(self):
        return order_of_nilpotency(self.theta)

    def filtered_space(self):
        C = canonical_filtration(self.space, self.theta)
        return FilteredSymplecticSpace(self.space, C)
