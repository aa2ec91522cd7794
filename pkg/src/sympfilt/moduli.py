"""Closed-form calculators: formal (rank, degree) bundle calculus, Euler
characteristics on a genus-g curve, the dimension bound for the stack of
filtered nilpotents, and the essential-dimension formulas.

Everything here is integer/rational arithmetic; the linear-algebra route
to the same numbers lives in gradedhom and is compared in the test suites.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, InvalidShape, OutOfHypothesis


@dataclass(frozen=True)
class BundleClass:
    rank: int
    degree: int

    def __post_init__(self):
        if self.rank < 0:
            raise InvalidInput("rank must be nonnegative")


def hom_class(a, b):
    """Hom bundle: rank r_a r_b, degree r_a d_b - d_a r_b."""
    return BundleClass(a.rank * b.rank, a.rank * b.degree - a.degree * b.rank)


def sym2_class(a):
    """Symmetric square: rank r(r+1)/2, degree (r+1) d."""
    return BundleClass(a.rank * (a.rank + 1) // 2, (a.rank + 1) * a.degree)


def euler_char(c, g):
    """chi = degree + rank (1 - g) on a genus-g curve."""
    return c.degree + c.rank * (1 - g)


@dataclass(frozen=True)
class DecoratedRankVector:
    """Graded ranks r_i with formal degrees d_i, i in [1-n, n-1];
    d_i = -d_{-i} is forced by Gr^i being dual to Gr^{-i}."""

    n: int
    ranks: tuple
    degrees: tuple

    def __post_init__(self):
        if len(self.ranks) != 2 * self.n - 1 or len(self.degrees) != 2 * self.n - 1:
            raise InvalidInput("rank/degree vectors must have length 2n-1")
        for i in range(self.n):
            if self.r(i) != self.r(-i):
                raise InvalidInput("ranks must satisfy r_i = r_{-i}")
            if self.d(i) != -self.d(-i):
                raise InvalidInput("degrees must satisfy d_i = -d_{-i}")

    def r(self, i):
        if abs(i) > self.n - 1:
            return 0
        return self.ranks[i + self.n - 1]

    def d(self, i):
        if abs(i) > self.n - 1:
            return 0
        return self.degrees[i + self.n - 1]

    def piece(self, i):
        return BundleClass(self.r(i), self.d(i))


def _rank_fn(rv):
    """Uniform accessor for RankVector / DecoratedRankVector / plain dict."""
    return rv.r


def graded_hom_rank(rv, a):
    """Formal rank of the degree-a self-adjoint hom piece:
    odd a: sum_{i > -a/2} r_i r_{i+a}; even a = 2m: r_m(r_m+1)/2 +
    sum_{i > -m} r_i r_{i+2m}."""
    r = _rank_fn(rv)
    n = rv.n
    rng = range(1 - n, n)
    if a % 2 != 0:
        return sum(r(i) * r(i + a) for i in rng if 2 * i > -a)
    m = a // 2
    return r(m) * (r(m) + 1) // 2 + sum(r(i) * r(i + a) for i in rng if i > -m)


def graded_hom_degree(drv, a):
    """Formal degree of the degree-a self-adjoint hom piece, from the
    block decomposition: hom blocks for the free pairs, a symmetric square
    for the middle block of even a."""
    n = drv.n
    rng = range(1 - n, n)
    if a % 2 != 0:
        return sum(hom_class(drv.piece(i), drv.piece(i + a)).degree
                   for i in rng if 2 * i > -a)
    m = a // 2
    # middle: Hom_s(E_{-m}, E_m) ~ Sym^2(E_m) via the pairing E_{-m} ~ E_m^vee
    total = sym2_class(drv.piece(m)).degree
    total += sum(hom_class(drv.piece(i), drv.piece(i + a)).degree
                 for i in rng if i > -m)
    return total


def selfadj_rank_counts(rv):
    """(rank Gr^0, rank Gr^{-1}) of the self-adjoint hom filtration:
    Gr^0 = r_0(r_0+1)/2 + sum_{i>=1} r_i^2;  Gr^{-1} = sum_{i>=1} r_i r_{i-1}."""
    r = rv.r
    n = rv.n
    gr0 = r(0) * (r(0) + 1) // 2 + sum(r(i) * r(i) for i in range(1, n))
    grm1 = sum(r(i) * r(i - 1) for i in range(1, n))
    return gr0, grm1


def degree_identities(drv):
    """Formal identities of the hom filtration of a decorated rank vector:

      (1) deg Gr^0 = 0
      (2) deg Gr^1 = -deg Gr^{-1}   and   deg F^1 - deg F^{-2} = 0
      (3) rank Gr^i = rank Gr^{-i}
      (4) rank F^{-i-1} + rank F^i = total rank

    Returns a report dict; all entries must be True."""
    n = drv.n
    lo, hi = 2 - 2 * n, 2 * n - 2
    ranks = {a: graded_hom_rank(drv, a) for a in range(lo, hi + 1)}
    degs = {a: graded_hom_degree(drv, a) for a in range(lo, hi + 1)}
    total = sum(ranks.values())
    m = sum(drv.ranks)

    def rank_f(j):  # rank F^j = sum of graded ranks up to j
        return sum(ranks[a] for a in range(lo, min(j, hi) + 1))

    report = {
        "deg_gr0_zero": degs[0] == 0,
        "deg_gr1_antisymmetric": degs.get(1, 0) == -degs.get(-1, 0),
        "deg_f1_equals_f_minus2":
            degs.get(-1, 0) + degs.get(0, 0) + degs.get(1, 0) == 0,
        "rank_gr_symmetric": all(ranks[a] == ranks[-a]
                                 for a in range(1, hi + 1)),
        "rank_complement": all(rank_f(-i - 1) + rank_f(i) == total
                               for i in range(lo - 1, hi + 1)),
        "total_is_selfadj_dim": total == m * (m + 1) // 2,
    }
    report["all"] = all(report.values())
    return report


def dim_bound(g, rv):
    """(g-1)(sum_{i>=1} r_i^2 + sum_{i>=1} r_i r_{i-1} + (r_0^2+r_0)/2):
    the upper bound for the dimension of the filtered-nilpotent stack at a
    point with canonical graded ranks rv."""
    if g < 0:
        raise InvalidInput("genus must be nonnegative")
    r = rv.r
    n = rv.n
    s = (r(0) * r(0) + r(0)) // 2
    s += sum(r(i) * r(i) for i in range(1, n))
    s += sum(r(i) * r(i - 1) for i in range(1, n))
    return (g - 1) * s


def dim_sp(two_r):
    """dim Sp_{2r} = 2r^2 + r for even total rank 2r."""
    if two_r % 2 != 0:
        raise InvalidInput("symplectic rank must be even")
    r = two_r // 2
    return 2 * r * r + r


def two_adic_valuation(n):
    if n <= 0:
        raise InvalidInput("2-adic valuation of a nonpositive integer")
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def ed_formula(g, r):
    """Essential dimension of the stack of rank-2r symplectic bundles on a
    genus-g curve: (g-1)(2r^2+r) + 2^{v_2(2r)}; needs g >= 2."""
    if g < 2:
        raise OutOfHypothesis("formula requires genus at least 2")
    if r < 1:
        raise OutOfHypothesis("formula requires r >= 1")
    return (g - 1) * dim_sp(2 * r) + 2 ** two_adic_valuation(2 * r)


def trdeg_and_aux_bounds(g, r):
    """Auxiliary bounds: the transcendence-degree bound, the non-simple
    chain and its cap, and the simple-case value."""
    if g < 2:
        raise OutOfHypothesis("bounds require genus at least 2")
    if r < 1:
        raise OutOfHypothesis("bounds require r >= 1")
    d = dim_sp(2 * r)
    out = {
        "trdeg_bound": (g - 1) * d,
        "nonsimple_chain": (g - 1) * (d - 2 * r + 1) + 2 * r,
        "nonsimple_bound": (g - 1) * d + 1,
        "simple_bound": ed_formula(g, r),
    }
    if out["nonsimple_chain"] > out["nonsimple_bound"]:
        raise InvalidInput("chain inequality violated (cannot happen for g >= 2)")
    return out


@dataclass(frozen=True)
class DecompositionShape:
    """Semisimple decomposition bookkeeping: parts (multiplicity n_i,
    endomorphism dimension dim D_i, kind); d the splitting degree."""

    d: int
    parts: tuple  # of (multiplicity, dim, kind) with kind in {simple, hyperbolic}

    def __post_init__(self):
        if self.d < 1:
            raise InvalidShape("d must be >= 1")
        for mult, dim, kind in self.parts:
            if mult < 1 or dim < 1:
                raise InvalidShape("multiplicities and dims must be >= 1")
            if kind not in ("simple", "hyperbolic"):
                raise InvalidShape(f"unknown part kind {kind!r}")


def gerbe_bound(shape, r):
    """sum of multiplicity*dim/d over the parts; when the rank bookkeeping
    sum(multiplicity*dim) <= 2r*d holds, the result is <= 2r."""
    total = sum(Fraction(mult * dim, shape.d) for mult, dim, _ in shape.parts)
    weight = sum(mult * dim for mult, dim, _ in shape.parts)
    if weight <= 2 * r * shape.d and total > 2 * r:
        raise InvalidShape("bound arithmetic violated (cannot happen)")
    return total
