"""Exact arithmetic in a number field K = Q[x]/(f) with a supplied integral basis.

Elements are coordinate vectors over the power basis of the defining
polynomial; integrality is tested against the configured integral basis.
All coefficients are Fractions, so every operation is exact.
"""

from fractions import Fraction

from .linalg import (
    det_fraction,
    generic_det,
    invert_fraction_matrix,
    mat_vec,
    solve_fraction,
)


class FieldError(ValueError):
    pass


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise FieldError(f"not an exact rational: {x!r}")


class FieldElement:
    """Element of a NumberField, stored as power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        if len(coords) != field.degree:
            raise FieldError("coordinate length does not match field degree")
        self.field = field
        self.coords = tuple(_as_fraction(c) for c in coords)

    def __repr__(self):
        return f"<{self.field.name}: {self.coords}>"

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field is other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def _check_same(self, other):
        if not isinstance(other, FieldElement):
            raise FieldError(f"not a field element: {other!r}")
        if other.field is not self.field:
            raise FieldError("mismatched owning fields")

    def __add__(self, other):
        self._check_same(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check_same(other)
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        self._check_same(other)
        return self.field.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, [a / other for a in self.coords])
        self._check_same(other)
        return self.field.mul(self, other.inverse())

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self):
        return self.field.inverse(self)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def norm(self):
        return self.field.norm_to_Q(self)

    def trace(self):
        return self.field.trace_to_Q(self)

    def is_integral(self):
        return self.field.is_integral(self)


def _poly_divmod(num, den):
    """Division with remainder in Q[x]; polynomials as low-first Fraction lists."""
    num = list(num)
    dden = len(den) - 1
    while den and den[-1] == 0:
        den = den[:-1]
        dden -= 1
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(num) - dden)
    inv_lead = 1 / den[-1]
    for i in range(len(num) - 1, dden - 1, -1):
        c = num[i] * inv_lead
        if c:
            q[i - dden] = c
            for j in range(dden + 1):
                num[i - dden + j] -= c * den[j]
    while num and num[-1] == 0:
        num.pop()
    return q, num


class NumberField:
    """Number field defined by a monic irreducible integer polynomial.

    ``poly`` is constant-coefficient-first.  ``integral_basis`` is a list of
    power-basis coordinate vectors; it must span a ring containing 1 (these
    invariants are checked on construction).
    """

    def __init__(self, name, poly, integral_basis=None):
        self.name = name
        poly = [int(c) for c in poly]
        if len(poly) < 2:
            raise FieldError("defining polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise FieldError("defining polynomial must be monic")
        self.poly = tuple(poly)
        self.degree = len(poly) - 1
        n = self.degree
        self._check_no_small_factors()
        # reductions of theta^k for k = n .. 2n-2 (integer coords since f is monic integral)
        self._theta_pow = []
        cur = [-c for c in poly[:-1]]
        self._theta_pow.append(tuple(cur))
        for _ in range(n - 2):
            cur = self._shift_reduce(cur)
            self._theta_pow.append(tuple(cur))
        self.zero = FieldElement(self, [0] * n)
        self.one = FieldElement(self, [1] + [0] * (n - 1))
        # for n = 1 the generator is the root of the linear polynomial itself
        self.gen = (
            FieldElement(self, [0, 1] + [0] * (n - 2))
            if n >= 2
            else FieldElement(self, [-poly[0]])
        )
        if integral_basis is None:
            integral_basis = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
        self.integral_basis = tuple(
            FieldElement(self, [_as_fraction(c) for c in row]) for row in integral_basis
        )
        if len(self.integral_basis) != n:
            raise FieldError("integral basis must have n elements")
        # columns are the basis vectors
        self._basis_matrix = [[self.integral_basis[j].coords[i] for j in range(n)] for i in range(n)]
        if det_fraction(self._basis_matrix) == 0:
            raise FieldError("integral basis matrix is singular")
        self._inv_basis_matrix = invert_fraction_matrix(self._basis_matrix)
        self._check_basis_ring()
        self.discriminant = self._compute_discriminant()

    # -- construction-time invariants -------------------------------------

    def _check_no_small_factors(self):
        n = self.degree
        if n == 1:
            return
        a0 = self.poly[0]
        # integer roots would divide the constant term (monic polynomial)
        candidates = set()
        if a0 == 0:
            raise FieldError("defining polynomial has root 0")
        for d in range(1, min(abs(a0), 1000) + 1):
            if a0 % d == 0:
                candidates.update((d, -d, a0 // d, -(a0 // d)))
        for r in candidates:
            if self._eval_int(r) == 0:
                raise FieldError(f"defining polynomial has rational root {r}")
        if n == 4:
            # trial monic quadratic factors with small coefficients
            bound = 60
            for b in range(-bound, bound + 1):
                for c in range(-bound, bound + 1):
                    if c == 0:
                        continue
                    if self._divisible_by_quadratic(b, c):
                        raise FieldError("defining polynomial has a small quadratic factor")

    def _eval_int(self, x):
        acc = 0
        for c in reversed(self.poly):
            acc = acc * x + c
        return acc

    def _divisible_by_quadratic(self, b, c):
        _, rem = _poly_divmod([Fraction(x) for x in self.poly], [Fraction(c), Fraction(b), Fraction(1)])
        return not rem

    def _check_basis_ring(self):
        n = self.degree
        one_coords = self.to_integral_coords(self.one)
        if any(c.denominator != 1 for c in one_coords):
            raise FieldError("integral-basis lattice does not contain 1")
        for i in range(n):
            for j in range(i, n):
                prod = self.integral_basis[i] * self.integral_basis[j]
                if not self.is_integral(prod):
                    raise FieldError("integral basis is not closed under multiplication")

    def _compute_discriminant(self):
        n = self.degree
        T = [[(self.integral_basis[i] * self.integral_basis[j]).trace() for j in range(n)] for i in range(n)]
        d = det_fraction(T)
        if d.denominator != 1:
            raise FieldError("discriminant of integral basis is not an integer")
        return int(d)

    # -- arithmetic --------------------------------------------------------

    def _shift_reduce(self, coords):
        """coords of theta*e given coords of e (integer or Fraction lists)."""
        n = self.degree
        lead = coords[-1]
        out = [0] + list(coords[:-1])
        if lead:
            for i in range(n):
                out[i] -= lead * self.poly[i]
        return out

    def element(self, coords):
        return FieldElement(self, coords)

    def from_rational(self, q):
        n = self.degree
        return FieldElement(self, [_as_fraction(q)] + [Fraction(0)] * (n - 1))

    def mul(self, a, b):
        n = self.degree
        if n == 1:
            return FieldElement(self, [a.coords[0] * b.coords[0]])
        ac, bc = a.coords, b.coords
        conv = [Fraction(0)] * (2 * n - 1)
        for i, ai in enumerate(ac):
            if ai:
                for j, bj in enumerate(bc):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:n])
        for k in range(n, 2 * n - 1):
            ck = conv[k]
            if ck:
                red = self._theta_pow[k - n]
                for i in range(n):
                    if red[i]:
                        out[i] += ck * red[i]
        return FieldElement(self, out)

    def inverse(self, a):
        if a.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        n = self.degree
        if n == 1:
            return FieldElement(self, [1 / a.coords[0]])
        # extended Euclid in Q[x]: u*a + v*f = 1 modulo f
        f = [Fraction(c) for c in self.poly]
        r0, r1 = f, list(a.coords)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                inv = 1 / r1[0]
                u = [c * inv for c in s1]
                u = (u + [Fraction(0)] * n)[:n]
                return FieldElement(self, u)
            if not r1:
                raise FieldError("element not invertible: defining polynomial is reducible")
            q, r2 = _poly_divmod(r0, r1)
            s2 = self._poly_sub(s0, self._poly_mul_trunc(q, s1))
            r0, r1 = r1, r2
            s0, s1 = s1, s2

    @staticmethod
    def _poly_sub(p, q):
        m = max(len(p), len(q))
        p = list(p) + [Fraction(0)] * (m - len(p))
        q = list(q) + [Fraction(0)] * (m - len(q))
        return [a - b for a, b in zip(p, q)]

    @staticmethod
    def _poly_mul_trunc(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a:
                for j, b in enumerate(q):
                    if b:
                        out[i + j] += a * b
        return out

    def mult_matrix(self, a):
        """Matrix of multiplication by ``a`` on the power basis (columns = a*theta^j)."""
        n = self.degree
        cols = []
        cur = list(a.coords)
        cols.append(tuple(cur))
        for _ in range(n - 1):
            cur = self._shift_reduce(cur)
            cols.append(tuple(cur))
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm_to_Q(self, a):
        if self.degree == 1:
            return a.coords[0]
        return det_fraction(self.mult_matrix(a))

    def trace_to_Q(self, a):
        if self.degree == 1:
            return a.coords[0]
        M = self.mult_matrix(a)
        return sum(M[i][i] for i in range(self.degree))

    # -- integrality -------------------------------------------------------

    def to_integral_coords(self, a):
        return mat_vec(self._inv_basis_matrix, a.coords)

    def from_integral_coords(self, v):
        return FieldElement(self, mat_vec(self._basis_matrix, v))

    def is_integral(self, a):
        return all(c.denominator == 1 for c in self.to_integral_coords(a))


def element_arith(a, b, op):
    """Dispatch basic arithmetic; op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown op {op!r}")


class RelativeExtension:
    """K as an extension of F via an embedding and a power basis 1, alpha, ..., alpha^(s-1)."""

    def __init__(self, base, top, embedding_image, alpha):
        self.base = base
        self.top = top
        self.embedding_image = embedding_image
        self.alpha = alpha
        if top.degree % base.degree:
            raise FieldError("[K:Q] not divisible by [F:Q]")
        self.s = top.degree // base.degree
        if not alpha.is_integral():
            raise FieldError("alpha must be integral")
        self._img_powers = [top.one]
        for _ in range(base.degree - 1):
            self._img_powers.append(self._img_powers[-1] * embedding_image)
        # the embedding must send the generator of F to a root of F's polynomial
        acc = top.zero
        for j, c in enumerate(base.poly):
            if j < len(self._img_powers):
                acc = acc + self._img_powers[j] * c
            else:
                acc = acc + (embedding_image ** j) * c
        if not acc.is_zero():
            raise FieldError("embedding image is not a root of the base polynomial")
        self._alpha_powers = [top.one]
        for _ in range(self.s - 1):
            self._alpha_powers.append(self._alpha_powers[-1] * alpha)
        n = top.degree
        # columns indexed by (i, j) -> alpha^i * img^j
        cols = []
        for i in range(self.s):
            for j in range(base.degree):
                cols.append((self._alpha_powers[i] * self._img_powers[j]).coords)
        M = [[cols[k][row] for k in range(n)] for row in range(n)]
        try:
            self._Minv = invert_fraction_matrix(M)
        except ZeroDivisionError:
            raise FieldError("1, alpha, ..., alpha^(s-1) is not a basis of K over F") from None
        self.D_base = self._compute_relative_discriminant()
        if self.D_base.is_zero():
            raise FieldError("relative basis discriminant vanishes")
        if not self.base.is_integral(self.D_base):
            raise FieldError("relative discriminant is not integral in F")
        self.D = self.embed(self.D_base)

    def embed(self, a):
        if a.field is not self.base:
            raise FieldError("element does not belong to the base field")
        acc = self.top.zero
        for c, ip in zip(a.coords, self._img_powers):
            if c:
                acc = acc + ip * c
        return acc

    def relative_coordinates(self, mu):
        if mu.field is not self.top:
            raise FieldError("element does not belong to the top field")
        v = mat_vec(self._Minv, mu.coords)
        dF = self.base.degree
        return [FieldElement(self.base, v[i * dF : (i + 1) * dF]) for i in range(self.s)]

    def trace_to_base(self, x):
        """Tr_{K/F}(x) computed from the relative multiplication matrix."""
        tr = self.base.zero
        for i in range(self.s):
            tr = tr + self.relative_coordinates(x * self._alpha_powers[i])[i]
        return tr

    def _compute_relative_discriminant(self):
        s = self.s
        powers = [self.top.one]
        for _ in range(2 * s - 1):
            powers.append(powers[-1] * self.alpha)
        T = [[self.trace_to_base(powers[i + j]) for j in range(s)] for i in range(s)]
        return generic_det(T, self.base.zero, self.base.one)

    def is_in_base(self, mu):
        coords = self.relative_coordinates(mu)
        return all(c.is_zero() for c in coords[1:])
