"""Fractional ideals of O_K as Hermite-normal-form lattices.

An ideal is stored as (1/d) * L where d is a positive integer and L is a
full-rank integer lattice in coordinates of the field's integral basis,
canonicalised as a row HNF with minimal d.  All operations are exact and
factorization-free except ``factor``/``ideal_sqrt`` themselves.
"""

from fractions import Fraction
from math import gcd, isqrt, lcm
import random

from .linalg import det_fraction, kernel_image, lattice_solve, row_hnf
from .numfield import FieldElement, FieldError


class IdealError(ValueError):
    pass


class FactorBoundError(IdealError):
    """Norm has a factor beyond the configured trial-division bound."""


class UnsupportedPrimeError(IdealError):
    """Rational prime divides the index of the power order in O_K."""


class NotASquareError(IdealError):
    pass


class FractionalIdeal:
    __slots__ = ("field", "den", "rows", "pivots", "is_zero")

    def __init__(self, field, den, rows, is_zero=False, _canonical=False):
        self.field = field
        self.is_zero = is_zero
        if is_zero:
            self.den = 1
            self.rows = ()
            self.pivots = ()
            return
        n = field.degree
        if not _canonical:
            hnf, pivots = row_hnf(rows)
            if len(hnf) != n:
                raise IdealError("lattice does not have full rank")
            den, hnf = _reduce_content(den, hnf)
            self.den = den
            self.rows = tuple(tuple(r) for r in hnf)
            self.pivots = tuple(pivots)
        else:
            self.den = den
            self.rows = tuple(tuple(r) for r in rows)
            self.pivots = tuple(range(n))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field, 1, (), is_zero=True)

    @classmethod
    def unit(cls, field):
        n = field.degree
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(field, 1, eye)

    @classmethod
    def from_generators(cls, gens):
        if not gens:
            raise IdealError("need at least one generator")
        field = gens[0].field
        for g in gens:
            if not isinstance(g, FieldElement):
                raise IdealError(f"not a field element: {g!r}")
            if g.field is not field:
                raise FieldError("mixed owning fields")
        nz = [g for g in gens if not g.is_zero()]
        if not nz:
            return cls.zero(field)
        raw = []
        for g in nz:
            for b in field.integral_basis:
                raw.append(field.to_integral_coords(b * g))
        d = 1
        for row in raw:
            for c in row:
                d = lcm(d, c.denominator)
        rows = [[int(c * d) for c in row] for row in raw]
        return cls(field, d, rows)

    @classmethod
    def principal(cls, elt):
        return cls.from_generators([elt])

    @classmethod
    def from_integer(cls, field, k):
        return cls.from_generators([field.from_rational(k)])

    # -- canonical data ----------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FractionalIdeal)
            and self.field is other.field
            and self.is_zero == other.is_zero
            and self.den == other.den
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((id(self.field), self.is_zero, self.den, self.rows))

    def __repr__(self):
        if self.is_zero:
            return f"<ideal 0 of {self.field.name}>"
        return f"<ideal of {self.field.name} den={self.den} rows={self.rows}>"

    def basis_elements(self):
        """The lattice rows as field elements (scaled by 1/den)."""
        out = []
        for row in self.rows:
            e = self.field.from_integral_coords([Fraction(c) for c in row])
            out.append(e / self.den)
        return out

    def norm(self):
        if self.is_zero:
            return Fraction(0)
        n = self.field.degree
        prod = 1
        for i, row in enumerate(self.rows):
            prod *= row[self.pivots[i]]
        return Fraction(abs(prod), self.den ** n)

    def is_integral_ideal(self):
        return self.is_zero or self.den == 1

    def is_unit_ideal(self):
        return (not self.is_zero) and self.norm() == 1

    def contains(self, elt):
        """Exact membership of a field element."""
        if self.is_zero:
            return elt.is_zero()
        w = self.field.to_integral_coords(elt)
        scaled = [c * self.den for c in w]
        if any(c.denominator != 1 for c in scaled):
            return False
        return lattice_solve(self.rows, self.pivots, [int(c) for c in scaled]) is not None

    def scaled(self, q):
        """The ideal q*I for a nonzero rational q."""
        q = Fraction(q)
        if q == 0:
            raise IdealError("scaling by zero")
        if self.is_zero:
            return self
        num, den = abs(q.numerator), q.denominator
        rows = [[c * num for c in row] for row in self.rows]
        d, rows = _reduce_content(self.den * den, rows)
        return FractionalIdeal(self.field, d, rows, _canonical=True)

    def to_json_dict(self):
        d = {"field": self.field.name, "zero": self.is_zero}
        if not self.is_zero:
            d["denominator"] = str(self.den)
            # serialized column-wise
            n = self.field.degree
            d["hnf_columns"] = [[str(self.rows[i][j]) for i in range(n)] for j in range(n)]
        return d


def _reduce_content(den, rows):
    g = den
    for row in rows:
        for c in row:
            g = gcd(g, c)
            if g == 1:
                return den, [list(r) for r in rows]
    return den // g, [[c // g for c in row] for row in rows]


# -- arithmetic -------------------------------------------------------------


def ideal_sum(I, J):
    _same_field(I, J)
    if I.is_zero:
        return J
    if J.is_zero:
        return I
    d = lcm(I.den, J.den)
    rows = [[c * (d // I.den) for c in row] for row in I.rows]
    rows += [[c * (d // J.den) for c in row] for row in J.rows]
    return FractionalIdeal(I.field, d, rows)


def ideal_product(I, J):
    _same_field(I, J)
    if I.is_zero or J.is_zero:
        return FractionalIdeal.zero(I.field)
    field = I.field
    ei = [field.from_integral_coords([Fraction(c) for c in row]) for row in I.rows]
    ej = [field.from_integral_coords([Fraction(c) for c in row]) for row in J.rows]
    rows = []
    for a in ei:
        for b in ej:
            coords = field.to_integral_coords(a * b)
            assert all(c.denominator == 1 for c in coords)
            rows.append([int(c) for c in coords])
    return FractionalIdeal(field, I.den * J.den, rows)


def ideal_quotient(I, J):
    """(I : J) = {x in K : xJ <= I}."""
    _same_field(I, J)
    if J.is_zero:
        raise IdealError("quotient by the zero ideal")
    if I.is_zero:
        return I
    field = I.field
    n = field.degree
    A = FractionalIdeal(field, 1, I.rows, _canonical=True)  # dI * I
    B_rows = J.rows
    b0 = FractionalIdeal(field, 1, B_rows, _canonical=True).norm()
    assert b0.denominator == 1
    b0 = int(b0)
    # variables: w (n coords of x*b0) then y_j blocks (n coords each)
    nvars = n + n * n
    top = []
    Ht = [[A.rows[k][i] for k in range(n)] for i in range(n)]  # columns = lattice basis
    for j, brow in enumerate(B_rows):
        v = field.from_integral_coords([Fraction(c) for c in brow])
        M = _mult_matrix_integral(field, v)
        for i in range(n):
            row = [0] * nvars
            for k in range(n):
                row[k] = M[i][k]
                row[n + j * n + k] = -b0 * Ht[i][k]
            top.append(row)
    bottom = []
    for k in range(n):
        row = [0] * nvars
        row[k] = 1
        bottom.append(row)
    w_rows = kernel_image(top, bottom)
    Q = FractionalIdeal(field, b0, w_rows)
    return Q.scaled(Fraction(J.den, I.den))


def ideal_intersection(I, J):
    _same_field(I, J)
    if I.is_zero or J.is_zero:
        return FractionalIdeal.zero(I.field)
    field = I.field
    n = field.degree
    d = lcm(I.den, J.den)
    ri = [[c * (d // I.den) for c in row] for row in I.rows]
    rj = [[c * (d // J.den) for c in row] for row in J.rows]
    # x = sum a_k ri_k = sum b_k rj_k ; variables (a, b)
    top = []
    for i in range(n):
        row = [ri[k][i] for k in range(n)] + [-rj[k][i] for k in range(n)]
        top.append(row)
    bottom = []
    for i in range(n):
        bottom.append([ri[k][i] for k in range(n)] + [0] * n)
    rows = kernel_image(top, bottom)
    return FractionalIdeal(field, d, rows)


def ideal_combine(I, J, op):
    if op == "sum":
        return ideal_sum(I, J)
    if op == "product":
        return ideal_product(I, J)
    if op == "quotient":
        return ideal_quotient(I, J)
    if op == "intersection":
        return ideal_intersection(I, J)
    raise IdealError(f"unknown op {op!r}")


def divides(I, J):
    """True iff J <= I as lattices (I nonzero); every ideal divides the zero ideal."""
    _same_field(I, J)
    if I.is_zero:
        raise IdealError("divides undefined for zero divisor ideal")
    if J.is_zero:
        return True
    for row in J.rows:
        target = [c * I.den for c in row]
        sol = lattice_solve(I.rows, I.pivots, target)
        if sol is None:
            return False
        if any(c % J.den for c in sol):
            return False
    return True


def _same_field(I, J):
    if I.field is not J.field:
        raise FieldError("mismatched owning fields")


def _mult_matrix_integral(field, v):
    """Multiplication-by-v matrix in integral-basis coordinates (integer for integral v)."""
    n = field.degree
    cols = []
    for b in field.integral_basis:
        coords = field.to_integral_coords(v * b)
        assert all(c.denominator == 1 for c in coords), "element not integral"
        cols.append([int(c) for c in coords])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# -- denominator / numerator ideals -----------------------------------------


def den_ideal(t):
    """den(t) = {b in O_K : bt in O_K}; den(0) = (1) by convention."""
    field = t.field
    if t.is_zero():
        return FractionalIdeal.unit(field)
    inv = FractionalIdeal.principal(t.inverse())
    return ideal_intersection(inv, FractionalIdeal.unit(field))


def num_ideal(t):
    """num(t) = den(1/t); num(0) is the zero ideal."""
    field = t.field
    if t.is_zero():
        return FractionalIdeal.zero(field)
    return ideal_intersection(FractionalIdeal.principal(t), FractionalIdeal.unit(field))


# -- prime factorization -----------------------------------------------------


class PrimeIdeal:
    """Maximal ideal above a rational prime, from Kummer-Dedekind."""

    __slots__ = ("field", "p", "f", "e", "poly", "gens", "ideal", "_powers")

    def __init__(self, field, p, f, e, poly, gens, ideal):
        self.field = field
        self.p = p
        self.f = f
        self.e = e
        self.poly = tuple(poly)  # monic residue polynomial mod p, low-first
        self.gens = gens
        self.ideal = ideal
        self._powers = [FractionalIdeal.unit(field), ideal]
        assert ideal.norm() == p ** f

    def power(self, k):
        while len(self._powers) <= k:
            self._powers.append(ideal_product(self._powers[-1], self.ideal))
        return self._powers[k]

    def norm(self):
        return self.p ** self.f

    def __repr__(self):
        return f"<prime ({self.p}, f={self.f}, e={self.e}) of {self.field.name}>"

    def key(self):
        return (self.p, self.ideal.rows)

    def to_json_dict(self):
        return {
            "p": str(self.p),
            "residue_degree": self.f,
            "ramification": self.e,
            "two_element_generators": [
                [str(c) for c in g.coords] for g in self.gens
            ],
        }


class PrimeFactorization:
    def __init__(self, factors):
        self.factors = list(factors)  # (PrimeIdeal, nonzero int exponent)

    def reconstruct(self, field):
        acc = FractionalIdeal.unit(field)
        for P, e in self.factors:
            if e > 0:
                acc = ideal_product(acc, P.power(e))
            else:
                acc = ideal_quotient(acc, P.power(-e))
        return acc

    def to_json_dict(self):
        return [
            dict(P.to_json_dict(), exponent=e)
            for P, e in self.factors
        ]


def _trial_factor_int(N, bound):
    """Prime factorization of |N| by trial division; error past the bound."""
    N = abs(N)
    if N == 0:
        raise IdealError("factoring zero")
    out = {}
    d = 2
    while d * d <= N:
        if d > bound:
            raise FactorBoundError(f"cofactor {N} exceeds trial bound {bound}")
        while N % d == 0:
            out[d] = out.get(d, 0) + 1
            N //= d
        d += 1 if d == 2 else 2
    if N > 1:
        out[N] = out.get(N, 0) + 1
    return out


def power_basis_index_squared(field):
    """disc(f)/disc(O_K) = index(Z[theta] : O_K)^2, as an exact integer."""
    disc_f = poly_discriminant(field.poly)
    q, r = divmod(disc_f, field.discriminant)
    if r != 0:
        raise IdealError("polynomial discriminant not divisible by field discriminant")
    return q


def poly_discriminant(poly):
    """Discriminant of a monic integer polynomial via the Sylvester resultant."""
    n = len(poly) - 1
    if n == 1:
        return 1
    f = list(poly)
    fp = [i * poly[i] for i in range(1, n + 1)]
    m = n + (n - 1)
    S = [[0] * m for _ in range(m)]
    for i in range(n - 1):
        for j, c in enumerate(reversed(f)):
            S[i][i + j] = c
    for i in range(n):
        for j, c in enumerate(reversed(fp)):
            S[n - 1 + i][i + j] = c
    res = det_fraction(S)
    assert res.denominator == 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * int(res)


def kummer_dedekind(field, p):
    """Primes of O_K above p via factorization of f mod p.

    Only valid when p does not divide the index of Z[theta] in O_K;
    UnsupportedPrimeError otherwise.
    """
    idx2 = power_basis_index_squared(field)
    if idx2 % p == 0:
        raise UnsupportedPrimeError(f"prime {p} divides the power-order index")
    fbar = [c % p for c in field.poly]
    factors = factor_poly_mod_p(fbar, p)
    primes = []
    for g, e in factors:
        theta_val = field.zero
        for k, c in enumerate(g):
            if c:
                if k == 0:
                    theta_val = theta_val + field.from_rational(c)
                else:
                    theta_val = theta_val + (field.gen ** k) * c
        pel = field.from_rational(p)
        lattice = FractionalIdeal.from_generators([pel, theta_val])
        primes.append(PrimeIdeal(field, p, len(g) - 1, e, (pel, theta_val), lattice))
    return primes


def ideal_valuation(I, P):
    """v_P(I) for a nonzero fractional ideal, by exact power divisibility."""
    if I.is_zero:
        raise IdealError("valuation of the zero ideal")
    num = FractionalIdeal(I.field, 1, I.rows, _canonical=True)
    v = _integral_valuation(num, P) - P.e * _int_valuation(I.den, P.p)
    return v


def _int_valuation(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _integral_valuation(A, P):
    v = 0
    while divides(P.power(v + 1), A):
        v += 1
        if v > 10_000:
            raise IdealError("runaway valuation")
    return v


def element_valuation(t, P):
    """v_P(t) for a nonzero field element."""
    if t.is_zero():
        raise IdealError("valuation of zero")
    field = t.field
    m = 1
    for c in field.to_integral_coords(t):
        m = lcm(m, c.denominator)
    w = t * m
    return _integral_valuation(FractionalIdeal.principal(w), P) - P.e * _int_valuation(m, P.p)


def factor(I, trial_bound=10 ** 6):
    """Exact prime factorization of a nonzero fractional ideal."""
    if I.is_zero:
        raise IdealError("cannot factor the zero ideal")
    field = I.field
    nrm = I.norm()
    rational_primes = sorted(
        set(_trial_factor_int(nrm.numerator, trial_bound)) | set(_trial_factor_int(nrm.denominator, trial_bound))
    )
    factors = []
    for p in rational_primes:
        for P in kummer_dedekind(field, p):
            v = ideal_valuation(I, P)
            if v != 0:
                factors.append((P, v))
    fact = PrimeFactorization(factors)
    if fact.reconstruct(field) != I:
        raise IdealError("factorization failed to reconstruct the ideal")
    return fact


def ideal_sqrt(I, trial_bound=10 ** 6):
    """The ideal J with J^2 = I, via halving factorization exponents."""
    if I.is_zero:
        raise IdealError("sqrt of the zero ideal")
    fact = factor(I, trial_bound)
    for P, e in fact.factors:
        if e % 2:
            raise NotASquareError(f"odd exponent {e} at prime over {P.p}")
    half = PrimeFactorization([(P, e // 2) for P, e in fact.factors])
    J = half.reconstruct(I.field)
    assert ideal_product(J, J) == I
    return J


def sqrt_of_point_denominator(den_x, den_y):
    """sqrt(den(x(P))) computed as (den(y) : den(x)), verified by squaring.

    For an affine point on an integral short Weierstrass model every prime
    has v(den x) = 2k and v(den y) = 3k, so the quotient has valuation k.
    Raises NotASquareError when the square check fails.
    """
    A = ideal_quotient(den_y, den_x)
    if ideal_product(A, A) != den_x:
        raise NotASquareError("denominator ideal is not the square of the y/x quotient")
    return A


# -- extension / restriction along F <= K ------------------------------------


def extend_ideal(I, ext):
    """I * O_K for an ideal I of O_F."""
    if I.field is not ext.base:
        raise FieldError("ideal does not belong to the base field")
    if I.is_zero:
        return FractionalIdeal.zero(ext.top)
    gens = [ext.embed(e) for e in I.basis_elements()]
    return FractionalIdeal.from_generators(gens)


def restrict_ideal(I, ext):
    """I intersected with (the embedded copy of) O_F, over F's integral basis."""
    if I.field is not ext.top:
        raise FieldError("ideal does not belong to the top field")
    if I.is_zero:
        return FractionalIdeal.zero(ext.base)
    K, F = ext.top, ext.base
    n, dF = K.degree, F.degree
    emb_rows = []
    for b in F.integral_basis:
        coords = K.to_integral_coords(ext.embed(b))
        assert all(c.denominator == 1 for c in coords)
        emb_rows.append([int(c) for c in coords])
    # x = sum y_j emb_j must satisfy den * x in L_I
    top = []
    for i in range(n):
        row = [I.den * emb_rows[j][i] for j in range(dF)] + [-I.rows[k][i] for k in range(n)]
        top.append(row)
    bottom = []
    for j in range(dF):
        r = [0] * (dF + n)
        r[j] = 1
        bottom.append(r)
    y_rows = kernel_image(top, bottom)
    return FractionalIdeal(F, 1, y_rows)


def extend_restrict(I, ext, direction):
    if direction == "extend":
        return extend_ideal(I, ext)
    if direction == "restrict":
        return restrict_ideal(I, ext)
    raise IdealError(f"unknown direction {direction!r}")


# -- polynomial factorization mod p ------------------------------------------


def _pp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pp_trim(out)


def _pp_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = (a[i] * inv) % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _pp_trim(q), _pp_trim(a)


def _pp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        _, r = _pp_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _pp_powmod(a, e, mod, p):
    result = [1]
    base = _pp_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = _pp_divmod(_pp_mul(result, base, p), mod, p)[1]
        base = _pp_divmod(_pp_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def factor_poly_mod_p(poly, p):
    """Monic irreducible factors with multiplicity of a monic poly mod p.

    Trial division over F_p for small p; distinct-degree plus Cantor-
    Zassenhaus splitting for larger p.  Returns [(coeff_list, multiplicity)].
    """
    f = _pp_trim([c % p for c in poly])
    assert f and f[-1] == 1
    if len(f) == 2:
        return [(f, 1)]
    if p <= 30:
        return _factor_trial(f, p)
    return _factor_cz(f, p)


def _factor_trial(f, p):
    out = []
    work = list(f)
    deg = len(work) - 1
    d = 1
    while d <= (len(work) - 1) // 2:
        for tail in _monic_tails(d, p):
            g = tail + [1]
            mult = 0
            while len(work) - 1 >= d:
                q, r = _pp_divmod(work, g, p)
                if r:
                    break
                work = q
                mult += 1
            if mult:
                out.append((g, mult))
        d += 1
    if len(work) > 1:
        out.append((work, 1))
    assert sum((len(g) - 1) * m for g, m in out) == deg
    return sorted(out, key=lambda gm: (len(gm[0]), gm[0]))


def _monic_tails(d, p):
    if d == 0:
        yield []
        return
    for rest in _monic_tails(d - 1, p):
        for c in range(p):
            yield [c] + rest


def _factor_cz(f, p):
    rng = random.Random(0xC0FFEE ^ p)
    sq = _pp_gcd(f, _pp_trim([(i * c) % p for i, c in enumerate(f)][1:]), p)
    radical = _pp_divmod(f, sq, p)[0] if len(sq) > 1 else list(f)
    irreducibles = []
    # distinct degree
    pieces = []
    h = list(radical)
    x = [0, 1]
    w = list(x)
    d = 0
    while len(h) - 1 > 0:
        d += 1
        if 2 * d > len(h) - 1:
            pieces.append((h, len(h) - 1))
            break
        w = _pp_powmod(w, p, h, p)
        g = _pp_gcd(h, _pp_trim([(a - b) % p for a, b in _zip_pad(w, x)]), p)
        if len(g) > 1:
            pieces.append((g, d))
            h = _pp_divmod(h, g, p)[0]
            w = _pp_divmod(w, h, p)[1]
    for piece, d in pieces:
        irreducibles.extend(_cz_split(piece, d, p, rng))
    out = []
    for g in sorted(irreducibles, key=lambda g: (len(g), g)):
        mult = 0
        work = f
        while True:
            q, r = _pp_divmod(work, g, p)
            if r:
                break
            work = q
            mult += 1
        out.append((g, mult))
    assert sum((len(g) - 1) * m for g, m in out) == len(f) - 1
    return out


def _zip_pad(a, b):
    m = max(len(a), len(b))
    return zip(a + [0] * (m - len(a)), b + [0] * (m - len(b)))


def _cz_split(piece, d, p, rng):
    k = (len(piece) - 1) // d
    if k == 1:
        return [piece]
    exp = (p ** d - 1) // 2
    while True:
        a = [rng.randrange(p) for _ in range(len(piece) - 1)] + [1]
        t = _pp_powmod(a, exp, piece, p)
        t = _pp_trim([(c - (1 if i == 0 else 0)) % p for i, c in enumerate(t + [0])])
        g = _pp_gcd(piece, t, p)
        if 1 < len(g) < len(piece):
            left = _cz_split(g, d, p, rng)
            right = _cz_split(_pp_divmod(piece, g, p)[0], d, p, rng)
            return left + right
