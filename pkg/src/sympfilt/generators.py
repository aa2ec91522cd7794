"""Seeded random instance generation for the verification suites.

Nilpotent instances are built from a Jordan type: the standard sp-model
pairs each even block with itself and odd blocks in twos, then the model
is conjugated by a random symplectic transformation.  This covers every
self-adjoint nilpotent orbit while keeping self-adjointness exact.
"""

import random

from .errors import InvalidInput
from .filtration import (Filtration, FilteredSymplecticSpace,
                         GradedSymplecticSpace, build_from_graded)
from .linalg import Matrix, column_space_basis, inverse, is_invertible
from .nilpotent import RankVector
from .scalars import QQ
from .symplectic import (SymplecticSpace, darboux_basis, random_symplectic,
                         standard_j)


def make_rng(seed, trial=None):
    """Deterministic cross-platform RNG; trial seeds derive from the
    master seed by integer arithmetic."""
    if trial is None:
        return random.Random(seed)
    return random.Random(seed * 1_000_003 + trial)


def symplectic_jordan_types(m):
    """Partitions of m in which odd parts occur with even multiplicity
    (the Jordan types of nilpotents in sp_m)."""
    out = []

    def rec(remaining, max_part, acc):
        if remaining == 0:
            counts = {}
            for p in acc:
                counts[p] = counts.get(p, 0) + 1
            if all(p % 2 == 0 or c % 2 == 0 for p, c in counts.items()):
                out.append(tuple(acc))
            return
        for p in range(min(max_part, remaining), 0, -1):
            rec(remaining - p, p, acc + [p])

    rec(m, m, [])
    return out


def rank_vector_of_jordan_type(jt):
    """r_i = #\\{parts d : d > |i|, d = |i| + 1 mod 2\\}."""
    n = max(jt)
    ranks = []
    for i in range(1 - n, n):
        ranks.append(sum(1 for d in jt if d > abs(i) and (d - abs(i)) % 2 == 1))
    return RankVector(n, tuple(ranks))


def sp_model(jt):
    """The standard model (S, theta) for a Jordan type: theta is the
    direct sum of lowering blocks, the Gram pairs v_k with v_{d-1-k}
    inside each even block and across each odd pair."""
    parts = sorted(jt, reverse=True)
    m = sum(parts)
    gram = [[0] * m for _ in range(m)]
    theta = [[0] * m for _ in range(m)]
    odd_pending = {}
    offset = 0
    blocks = []
    for d in parts:
        blocks.append((d, offset))
        for k in range(d - 1):
            theta[offset + k][offset + k + 1] = 1
        offset += d
    for d, off in blocks:
        if d % 2 == 0:
            for k in range(d):
                gram[off + k][off + d - 1 - k] = (-1) ** k
        else:
            if d in odd_pending:
                off2 = odd_pending.pop(d)
                for k in range(d):
                    gram[off2 + k][off + d - 1 - k] = (-1) ** k
                    gram[off + d - 1 - k][off2 + k] = -((-1) ** k)
            else:
                odd_pending[d] = off
    if odd_pending:
        raise InvalidInput("odd parts must occur with even multiplicity")
    S = SymplecticSpace(Matrix.from_rows(gram))
    return S, Matrix.from_rows(theta)


def random_antisymmetric_invertible(m, rng, spread=3):
    while True:
        A = Matrix.from_rows([[rng.randrange(-spread, spread + 1)
                               for _ in range(m)] for _ in range(m)])
        G = A - A.transpose()
        if is_invertible(G):
            return G


def random_nilpotent_instance(m, rng, random_form=False, jordan_type=None):
    """A random self-adjoint nilpotent on a symplectic space of dim m.

    The model nilpotent is moved to J_std coordinates via a Darboux basis
    and conjugated by a random symplectic matrix; with random_form=True
    the result is additionally transported onto the Darboux frame of a
    random antisymmetric form."""
    if jordan_type is None:
        jordan_type = rng.choice(symplectic_jordan_types(m))
    Smodel, theta = sp_model(jordan_type)
    P = darboux_basis(Smodel)
    theta_j = inverse(P) * theta * P
    Srand = random_symplectic(m, rng)
    theta_j = Srand * theta_j * inverse(Srand)
    if random_form:
        G = random_antisymmetric_invertible(m, rng)
        D = darboux_basis(SymplecticSpace(G))
        theta_out = D * theta_j * inverse(D)
        return SymplecticSpace(G), theta_out, jordan_type
    return SymplecticSpace(standard_j(m)), theta_j, jordan_type


def random_graded_model(m, rng, spread=2):
    """Random graded symplectic model of total dimension m: random
    symmetric dims (r_0 even) and random invertible integer pairings."""
    while True:
        n = rng.randrange(1, max(2, m // 2 + 2))
        r0 = rng.choice([r for r in range(0, m + 1, 2)])
        rest = [rng.randrange(0, m // 2 + 1) for _ in range(n - 1)]
        if r0 + 2 * sum(rest) == m and (n == 1 or rest[-1] > 0):
            break
    dims = [0] * (2 * n - 1)
    dims[n - 1] = r0
    pairings = {}
    for k, r in enumerate(rest, start=1):
        dims[n - 1 + k] = r
        dims[n - 1 - k] = r
        if r:
            while True:
                H = Matrix.from_rows([[rng.randrange(-spread, spread + 1)
                                       for _ in range(r)] for _ in range(r)])
                if is_invertible(H):
                    break
            pairings[k] = H
            pairings[-k] = -H.transpose()
    if r0:
        pairings[0] = random_antisymmetric_invertible(r0, rng, spread)
    return GradedSymplecticSpace(-(n - 1), n - 1, tuple(dims), pairings)


def random_filtered_symplectic(m, rng, spread=2):
    """Random filtered symplectic space: a random graded model conjugated
    by a random symplectic transformation of its own form."""
    G = random_graded_model(m, rng, spread)
    fs = build_from_graded(G)
    D = darboux_basis(fs.space)
    S = random_symplectic(m, rng)
    T = D * S * inverse(D)  # preserves fs.space.gram
    F = fs.filtration
    steps = [column_space_basis(T * F.step(i)) for i in range(F.lo, F.hi + 1)]
    newF = Filtration.from_subspaces(m, F.lo, steps, F.field)
    return FilteredSymplecticSpace(fs.space, newF)


def random_selfadjoint(S, rng, spread=3):
    """Random self-adjoint endomorphism: G^{-1} (A + A^T)."""
    m = S.dim
    A = Matrix.from_rows([[rng.randrange(-spread, spread + 1)
                           for _ in range(m)] for _ in range(m)])
    return inverse(S.gram) * (A + A.transpose())
