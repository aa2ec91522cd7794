"""Exact scalar arithmetic.

Four scalar kinds, each packaged as a small "field" object that the dense
linear-algebra kernel is generic over:

  * Rationals        -- elements are int or Fraction (ints preferred; a
                        Fraction with denominator 1 is normalised back to
                        int, which keeps integer-heavy eliminations fast);
  * NumberField      -- Q[x]/(f) for a monic polynomial f asserted
                        irreducible by the caller; elements are coefficient
                        tuples of length deg(f);
  * PrimeField       -- Z/p for an odd prime p.  Outside the char-0
                        hypotheses of the constructions built on top; kept
                        for fast enumeration experiments;
  * DualNumbers      -- k[eps]/(eps^2) over another scalar kind, used for
                        tangent-space computations.

All representations are canonical, so == is semantic equality.
"""

from fractions import Fraction

from .errors import InvalidInput, Unsupported


def as_rational(x):
    """Coerce int / Fraction / 'p/q' string to a normalised rational."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        f = Fraction(x)
        return f.numerator if f.denominator == 1 else f
    raise InvalidInput(f"not a rational: {x!r}")


def rat_str(x):
    """Encode a rational as the JSON string form 'p' or 'p/q'."""
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


class Rationals:
    """The field Q.  Elements: int | Fraction, Fractions always in lowest
    terms with positive denominator (guaranteed by fractions.Fraction)."""

    name = "Q"
    char = 0

    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        c = a + b
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    @staticmethod
    def sub(a, b):
        c = a - b
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    @staticmethod
    def mul(a, b):
        c = a * b
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    @staticmethod
    def div(a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        c = Fraction(a) / Fraction(b)
        return c.numerator if c.denominator == 1 else c

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def from_int(n):
        return n

    @staticmethod
    def coerce(x):
        return as_rational(x)

    def __repr__(self):
        return "QQ"


QQ = Rationals()


# ---------------------------------------------------------------------------
# polynomial helpers over Q (dense coefficient lists, index = degree)
# ---------------------------------------------------------------------------

def poly_trim(p):
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                      for i in range(n)])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p, q):
    q = poly_trim(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    lead = Fraction(q[-1])
    quot = [0] * max(0, len(p) - len(q) + 1)
    while len(poly_trim(p)) >= len(q):
        p = poly_trim(p)
        shift = len(p) - len(q)
        c = Fraction(p[-1]) / lead
        quot[shift] = c
        for i, b in enumerate(q):
            p[shift + i] -= c * b
        p = p[:-1]
    return poly_trim(quot), poly_trim(p)


def poly_gcd_ext(p, q):
    """Extended gcd in Q[x]: returns (g, s, t) with s*p + t*q = g."""
    r0, r1 = poly_trim(list(p)), poly_trim(list(q))
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        qt, rm = poly_divmod(r0, r1)
        r0, r1 = r1, rm
        s0, s1 = s1, poly_add(s0, [-c for c in poly_mul(qt, s1)])
        t0, t1 = t1, poly_add(t0, [-c for c in poly_mul(qt, t1)])
    return r0, s0, t0


def _poly_derivative(p):
    return poly_trim([i * p[i] for i in range(1, len(p))])


def _rational_roots(p):
    """Rational roots of a polynomial with rational coefficients."""
    p = poly_trim([Fraction(c) for c in p])
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    roots = set()
    if ints and ints[0] == 0:
        roots.add(Fraction(0))
        while ints and ints[0] == 0:
            ints = ints[1:]  # factor out x
    if not ints:
        return sorted(roots)
    a0, an = abs(ints[0]), abs(ints[-1])
    for r in _divisors(a0):
        for s in _divisors(an):
            for cand in (Fraction(r, s), Fraction(-r, s)):
                if _poly_eval(p, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _is_irreducible_mod_p(coeffs, p):
    """Brute-force irreducibility of a monic integer polynomial mod p."""
    f = [c % p for c in coeffs]
    d = len(f) - 1
    if d <= 1:
        return d == 1
    # try all monic divisors of degree 1..d//2
    for deg in range(1, d // 2 + 1):
        for code in range(p ** deg):
            g = []
            c = code
            for _ in range(deg):
                g.append(c % p)
                c //= p
            g.append(1)
            if _poly_divmod_mod(f, g, p)[1] == []:
                return False
    return True


def _poly_divmod_mod(p_, q_, p):
    q_ = [c % p for c in q_]
    while q_ and q_[-1] == 0:
        q_.pop()
    r = [c % p for c in p_]
    inv_lead = pow(q_[-1], p - 2, p)
    quot = [0] * max(0, len(r) - len(q_) + 1)
    while True:
        while r and r[-1] % p == 0:
            r.pop()
        if len(r) < len(q_):
            break
        shift = len(r) - len(q_)
        c = (r[-1] * inv_lead) % p
        quot[shift] = c
        for i, b in enumerate(q_):
            r[shift + i] = (r[shift + i] - c * b) % p
    while r and r[-1] % p == 0:
        r.pop()
    return quot, r


class NumberField:
    """Q[x]/(f) for monic f.  Irreducibility is asserted by the caller and
    sanity-checked (squarefree, no rational root for deg >= 2, reduction mod
    a few small primes); a failed check raises, a passed check is accepted
    without full factorization.

    Elements are tuples of length deg(f) of rationals (coefficients of
    1, x, ..., x^{d-1})."""

    char = 0

    def __init__(self, min_poly):
        coeffs = [as_rational(c) for c in min_poly]
        coeffs = poly_trim(coeffs)
        if len(coeffs) < 2:
            raise InvalidInput("defining polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise InvalidInput("defining polynomial must be monic")
        self.min_poly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self._sanity_check_irreducible()
        d = self.degree
        self.zero = tuple([0] * d)
        self.one = tuple([1] + [0] * (d - 1)) if d >= 1 else ()
        self.name = "Q[x]/(" + "+".join(
            f"{rat_str(c)}*x^{i}" for i, c in enumerate(coeffs) if c != 0) + ")"
        # reduction table: x^k for k in [d, 2d-2] as length-d coefficient rows
        self._xpow = []
        cur = [QQ.neg(c) for c in coeffs[:-1]]  # x^d = -(c_0 + ... + c_{d-1}x^{d-1})
        self._xpow.append(list(cur))
        for _ in range(d - 2):
            nxt = [0] * d
            # multiply cur by x and reduce
            carry = cur[-1]
            for i in range(d - 1, 0, -1):
                nxt[i] = cur[i - 1]
            if carry != 0:
                top = self._xpow[0]
                for i in range(d):
                    nxt[i] = QQ.add(nxt[i], QQ.mul(carry, top[i]))
            self._xpow.append(nxt)
            cur = nxt

    def _sanity_check_irreducible(self):
        f = list(self.min_poly)
        if self.degree == 1:
            return
        g, _, _ = poly_gcd_ext(f, _poly_derivative(f))
        if len(g) > 1:
            raise InvalidInput("defining polynomial is not squarefree")
        if _rational_roots(f):
            raise InvalidInput("defining polynomial has a rational root")
        # scale to integer coefficients and look for an irreducibility witness
        den = 1
        for c in f:
            fc = Fraction(c)
            den = den * fc.denominator // _gcd(den, fc.denominator)
        ints = [int(Fraction(c) * den) for c in f]
        for p in (3, 5, 7):
            if ints[-1] % p != 0 and _is_irreducible_mod_p(ints, p):
                return  # certified irreducible
        # no witness found: accepted on the caller's assertion

    # -- field operations on coefficient tuples ---------------------------
    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == self.degree:
            return tuple(as_rational(c) for c in x)
        if isinstance(x, (int, Fraction, str)):
            r = as_rational(x)
            return tuple([r] + [0] * (self.degree - 1))
        if isinstance(x, (list,)):
            if len(x) > self.degree:
                raise InvalidInput("coefficient vector too long")
            xs = [as_rational(c) for c in x] + [0] * (self.degree - len(x))
            return tuple(xs)
        raise InvalidInput(f"cannot coerce {x!r} into {self.name}")

    def gen(self):
        d = self.degree
        if d == 1:
            # x == -c0 in Q[x]/(x + c0)
            return (QQ.neg(self.min_poly[0]),)
        return tuple([0, 1] + [0] * (d - 2))

    def add(self, a, b):
        return tuple(QQ.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(QQ.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(QQ.neg(x) for x in a)

    def mul(self, a, b):
        d = self.degree
        raw = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y != 0:
                    raw[i + j] = QQ.add(raw[i + j], QQ.mul(x, y))
        out = list(raw[:d])
        for k in range(d, 2 * d - 1):
            c = raw[k]
            if c != 0:
                row = self._xpow[k - d]
                for i in range(d):
                    out[i] = QQ.add(out[i], QQ.mul(c, row[i]))
        return tuple(out)

    def inv(self, a):
        pa = poly_trim(list(a))
        if not pa:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        g, s, _ = poly_gcd_ext(pa, list(self.min_poly))
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible (polynomial not irreducible?)")
        c = g[0]
        s = [QQ.div(x, c) for x in s]
        s = s + [0] * (self.degree - len(s))
        return tuple(s[:self.degree])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n):
        return tuple([n] + [0] * (self.degree - 1))

    def mult_matrix(self, a):
        """Regular-representation rows of multiplication by a on the power
        basis; row k = coefficients of a * x^k."""
        if self.degree == 1:
            return [[a[0]]]
        out = [list(a)]
        cur = a
        gen = self.gen()
        for _ in range(self.degree - 1):
            cur = self.mul(cur, gen)
            out.append(list(cur))
        return out

    def trace(self, a):
        m = self.mult_matrix(a)
        t = 0
        for i in range(self.degree):
            t = QQ.add(t, m[i][i])
        return t

    def __repr__(self):
        return f"NumberField({[rat_str(c) for c in self.min_poly]})"


def _is_odd_prime(p):
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """Z/p for an odd prime p.  Outside the char-0 hypotheses of the
    constructions above this layer; suites needing division by 2 or a
    Jacobson-Morozov solve require p > 2 * (max nilpotency order)."""

    def __init__(self, p):
        if not _is_odd_prime(p):
            raise Unsupported("prime fields are restricted to odd primes")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1 % p
        self.name = f"GF({p})"

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            return (x.numerator * pow(x.denominator, self.p - 2, self.p)) % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise InvalidInput(f"cannot coerce {x!r} into {self.name}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return (a * pow(b, self.p - 2, self.p)) % self.p

    def neg(self, a):
        return (-a) % self.p

    def from_int(self, n):
        return n % self.p

    def __repr__(self):
        return self.name


class DualNumbers:
    """base[eps]/(eps^2): elements are pairs (a, b) standing for a + b*eps."""

    def __init__(self, base=QQ):
        self.base = base
        self.char = base.char
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        self.eps = (base.zero, base.one)
        self.name = f"{getattr(base, 'name', repr(base))}[eps]"

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == 2:
            return (self.base.coerce(x[0]), self.base.coerce(x[1]))
        return (self.base.coerce(x), self.base.zero)

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def sub(self, a, b):
        return (self.base.sub(a[0], b[0]), self.base.sub(a[1], b[1]))

    def mul(self, a, b):
        # (a0 + a1 eps)(b0 + b1 eps) = a0 b0 + (a0 b1 + a1 b0) eps
        f = self.base
        return (f.mul(a[0], b[0]),
                f.add(f.mul(a[0], b[1]), f.mul(a[1], b[0])))

    def div(self, a, b):
        f = self.base
        if b[0] == f.zero:
            raise ZeroDivisionError("division by a non-unit dual number")
        c0 = f.div(a[0], b[0])
        # (a0 + a1 e)/(b0 + b1 e) = a0/b0 + (a1 b0 - a0 b1)/b0^2 e
        c1 = f.div(f.sub(f.mul(a[1], b[0]), f.mul(a[0], b[1])), f.mul(b[0], b[0]))
        return (c0, c1)

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero)

    def __repr__(self):
        return self.name


def trace_form(K):
    """Gram matrix of (x, y) -> Tr(xy) on the power basis of K.

    Entry (i, j) is the trace of the regular representation of x^{i+j};
    nondegenerate for every separable K (char 0)."""
    from .linalg import Matrix
    d = K.degree
    # traces of x^k for k = 0 .. 2d-2
    traces = []
    cur = K.one
    for _ in range(2 * d - 1):
        traces.append(K.trace(cur))
        cur = K.mul(cur, K.gen())
    rows = [[traces[i + j] for j in range(d)] for i in range(d)]
    return Matrix(d, d, rows, QQ)
