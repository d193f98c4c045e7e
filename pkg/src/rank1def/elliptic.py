"""Exact chord-tangent arithmetic on y^2 = x^3 + ax + b, instance validation,
the z = -x/y parameter, and truncated formal-group series.

Point coordinates are FieldElements, so the group law is exact; all series
are truncated polynomials with integral coefficients in O_K.
"""

from fractions import Fraction
from math import gcd, lcm

from .ideals import (
    FractionalIdeal,
    IdealError,
    den_ideal,
    element_valuation,
    kummer_dedekind,
)
from .numfield import FieldError


class CurveError(ValueError):
    pass


class WeierstrassCurve:
    """Short Weierstrass model with coefficients in the embedded base ring."""

    def __init__(self, ext, a, b):
        self.ext = ext
        K = ext.top
        if a.field is not K or b.field is not K:
            raise CurveError("curve coefficients must live in K")
        self.field = K
        self.a = a
        self.b = b
        four_a3 = (a * a * a) * 4
        twentyseven_b2 = (b * b) * 27
        self.discriminant = (four_a3 + twentyseven_b2) * (-16)
        if self.discriminant.is_zero():
            raise CurveError("singular curve: discriminant vanishes")
        if not (a.is_integral() and b.is_integral()):
            raise CurveError("curve coefficients must be integral")
        if not (ext.is_in_base(a) and ext.is_in_base(b)):
            raise CurveError("curve coefficients must lie in the embedded base field")

    def on_curve(self, x, y):
        return (y * y - (x * x * x + self.a * x + self.b)).is_zero()

    def infinity(self):
        return CurvePoint(self, None, None)

    def point(self, x, y):
        return CurvePoint(self, x, y)

    def __repr__(self):
        return f"<curve y^2 = x^3 + ax + b over {self.field.name}>"


class CurvePoint:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        self.curve = curve
        self.x = x
        self.y = y
        if x is not None and not curve.on_curve(x, y):
            raise CurveError("point is not on the curve")

    @property
    def is_infinity(self):
        return self.x is None

    def __eq__(self, other):
        return (
            isinstance(other, CurvePoint)
            and self.curve is other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash((id(self.curve), self.x, self.y))

    def __repr__(self):
        if self.is_infinity:
            return "<point at infinity>"
        return f"<point x={self.x.coords} y={self.y.coords}>"

    def __neg__(self):
        if self.is_infinity:
            return self
        return CurvePoint(self.curve, self.x, -self.y)

    def __add__(self, other):
        return point_add(self, other)

    def __sub__(self, other):
        return point_add(self, -other)

    def __rmul__(self, m):
        return scalar_mul(m, self)


def point_add(P, Q):
    if P.curve is not Q.curve:
        raise CurveError("points on different curves")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    curve = P.curve
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return curve.infinity()
        # tangent
        lam = (P.x * P.x * 3 + curve.a) / (P.y * 2)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return CurvePoint(curve, x3, y3)


def point_double(P):
    return point_add(P, P)


def point_op(P, Q, op):
    if op == "add":
        return point_add(P, Q)
    if op == "negate_first":
        return -P
    if op == "double_first":
        return point_add(P, P)
    raise CurveError(f"unknown op {op!r}")


def scalar_mul(m, P):
    """m-fold sum by double-and-add; exact."""
    if m == 0 or P.is_infinity:
        return P.curve.infinity()
    if m < 0:
        return scalar_mul(-m, -P)
    result = None
    base = P
    while m:
        if m & 1:
            result = base if result is None else point_add(result, base)
        m >>= 1
        if m:
            base = point_add(base, base)
    return result


def z_parameter(P):
    """z = -x/y, the formal-group parameter near the origin."""
    if P.is_infinity:
        raise CurveError("z undefined at the point at infinity")
    if P.y.is_zero():
        raise CurveError("z undefined at 2-torsion (y = 0)")
    return -(P.x / P.y)


def x_denominator(P):
    if P.is_infinity:
        raise CurveError("denominator ideal undefined at infinity")
    return den_ideal(P.x)


def local_point_valuation(P, prime):
    """n = v_P(z(P)) for a point close to the origin at `prime`.

    Computed as -v_P(x(P))/2 and cross-checked against the direct valuation
    of -x/y.  Returns None when v_P(x(P)) >= 0 (the point is not P-adically
    close to the origin).
    """
    if P.is_infinity:
        raise CurveError("valuation undefined at infinity")
    if P.x.is_zero():
        raise CurveError("x(P) = 0 has no pole structure")
    vx = element_valuation(P.x, prime)
    if vx >= 0:
        return None
    if vx % 2:
        raise CurveError(f"odd pole order {vx} at prime over {prime.p}")
    n = -vx // 2
    vz = element_valuation(z_parameter(P), prime)
    if vz != n:
        raise CurveError(f"inconsistent valuations: v(z)={vz} but -v(x)/2={n}")
    return n


# -- truncated multivariate series -------------------------------------------


class TruncPoly:
    """Sparse truncated polynomial over a number field: terms of total degree <= prec."""

    __slots__ = ("field", "nvars", "prec", "terms")

    def __init__(self, field, nvars, prec, terms=None):
        self.field = field
        self.nvars = nvars
        self.prec = prec
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if sum(e) <= prec and not c.is_zero():
                    self.terms[e] = c

    @classmethod
    def var(cls, field, nvars, prec, idx, coeff=None):
        e = tuple(1 if k == idx else 0 for k in range(nvars))
        return cls(field, nvars, prec, {e: coeff if coeff is not None else field.one})

    @classmethod
    def const(cls, field, nvars, prec, c):
        return cls(field, nvars, prec, {tuple([0] * nvars): c})

    def copy_meta(self, terms):
        return TruncPoly(self.field, self.nvars, self.prec, terms)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return self.copy_meta(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = -c if s is None else s - c
        return self.copy_meta(out)

    def __neg__(self):
        return self.copy_meta({e: -c for e, c in self.terms.items()})

    def scale(self, c):
        return self.copy_meta({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > self.prec:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                s = out.get(e)
                out[e] = p if s is None else s + p
        return self.copy_meta(out)

    def coeff(self, e):
        return self.terms.get(tuple(e), self.field.zero)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, TruncPoly) and self.terms == other.terms

    def order(self):
        if not self.terms:
            return self.prec + 1
        return min(sum(e) for e in self.terms)

    def inverse(self):
        """Inverse of a series with constant term 1."""
        one = TruncPoly.const(self.field, self.nvars, self.prec, self.field.one)
        t = one - self
        if t.order() < 1:
            raise CurveError("inverse requires constant term 1")
        acc = one
        pw = one
        for _ in range(self.prec // max(t.order(), 1) + 1):
            pw = pw * t
            if pw.is_zero():
                break
            acc = acc + pw
        return acc

    def substitute(self, subs):
        """Substitute subs[i] (a TruncPoly over the same field) for variable i."""
        target = subs[0]
        out = TruncPoly(self.field, target.nvars, target.prec, {})
        pow_cache = [{} for _ in range(self.nvars)]

        def var_power(i, k):
            if k == 0:
                return TruncPoly.const(self.field, target.nvars, target.prec, self.field.one)
            cache = pow_cache[i]
            if k in cache:
                return cache[k]
            half = var_power(i, k // 2)
            res = half * half
            if k % 2:
                res = res * subs[i]
            cache[k] = res
            return res

        for e, c in self.terms.items():
            term = TruncPoly.const(self.field, target.nvars, target.prec, c)
            for i, k in enumerate(e):
                if k:
                    term = term * var_power(i, k)
            out = out + term
        return out

    def all_coefficients_integral(self):
        return all(c.is_integral() for c in self.terms.values())


class FormalGroupSeries:
    """Truncated formal-group data: group law, multiplication, or Laurent x/y."""

    def __init__(self, kind, precision, data, shift=0):
        self.kind = kind
        self.precision = precision
        self.data = data
        self.shift = shift  # Laurent pole order: value = z^(-shift) * data

    def all_coefficients_integral(self):
        return self.data.all_coefficients_integral()


def _w_series(curve, prec):
    """w(z) with w = z^3 + a z w^2 + b w^3, truncated past degree `prec`."""
    K = curve.field
    z = TruncPoly.var(K, 1, prec, 0)
    z3 = z * z * z
    a, b = curve.a, curve.b
    w = z3
    while True:
        w2 = w * w
        nxt = z3 + (z * w2).scale(a) + (w2 * w).scale(b)
        if nxt == w:
            return w
        w = nxt


def formal_series(curve, kind, precision, m=None):
    """Series for the formal group of the curve in the parameter z = -x/y."""
    if precision < 3:
        raise CurveError("precision too small (need N >= 3)")
    K = curve.field
    N = precision
    if kind == "group_law":
        return FormalGroupSeries("group_law", N, _group_law(curve, N))
    if kind == "mult":
        if m is None:
            raise CurveError("mult series needs the integer m")
        return FormalGroupSeries(("mult", m), N, _mult_series(curve, N, m))
    if kind in ("laurent_x", "laurent_y"):
        w = _w_series(curve, N + 5)
        # w = z^3 * u with u a unit power series
        u_terms = {(e[0] - 3,): c for e, c in w.terms.items()}
        u = TruncPoly(K, 1, N + 2, u_terms)
        uinv = u.inverse()
        if kind == "laurent_x":
            # x = z/w = z^{-2} u^{-1}
            return FormalGroupSeries("laurent_x", N, uinv, shift=2)
        # y = -1/w = -z^{-3} u^{-1}
        return FormalGroupSeries("laurent_y", N, -uinv, shift=3)
    raise CurveError(f"unknown series kind {kind!r}")


def _group_law(curve, N):
    """F(z1, z2) = z1 + z2 + ... via the chord construction on the (z, w) chart."""
    K = curve.field
    w = _w_series(curve, N + 5)
    wc = {e[0]: c for e, c in w.terms.items()}
    prec = N
    lam = TruncPoly(K, 2, prec, {})
    # lambda = (w(z2) - w(z1))/(z2 - z1) = sum_k w_k * sum_{i+j=k-1} z1^i z2^j
    for k, c in wc.items():
        for i in range(k):
            j = k - 1 - i
            if i + j <= prec:
                e = (i, j)
                cur = lam.terms.get(e)
                lam.terms[e] = c if cur is None else cur + c
    lam = lam.copy_meta(lam.terms)
    z1 = TruncPoly.var(K, 2, prec, 0)
    z2 = TruncPoly.var(K, 2, prec, 1)
    w1 = TruncPoly(K, 2, prec, {(k, 0): c for k, c in wc.items()})
    nu = w1 - lam * z1
    a, b = curve.a, curve.b
    lam2 = lam * lam
    lam3 = lam2 * lam
    one = TruncPoly.const(K, 2, prec, K.one)
    A = one + lam2.scale(a) + lam3.scale(b)
    B = (lam * nu).scale(a * 2) + (lam2 * nu).scale(b * 3)
    z3p = B * A.inverse()  # -(z1 + z2 + z3') with sign handled below
    # roots of the cubic sum to -B/A, so the third chord point is -B/A - z1 - z2
    # and the group law is its formal inverse i(z) = -z:
    return z3p + z1 + z2


def _mult_series(curve, N, m):
    K = curve.field
    z = TruncPoly.var(K, 1, N, 0)
    if m == 0:
        return TruncPoly(K, 1, N, {})
    neg = m < 0
    m = abs(m)
    F = _group_law(curve, N)
    cur = z
    for _ in range(m - 1):
        cur = F.substitute([z, cur])
    return -cur if neg else cur


# -- rank-one instance --------------------------------------------------------


class RankOneInstance:
    """Full configuration of a rank-one pair (E/F, K) with attested data."""

    def __init__(
        self,
        name,
        ext,
        curve,
        P1,
        r,
        ell,
        torsion_order,
        index_EK_EF,
        tamagawa_indices,
        c,
        c_prime,
        bounds,
        provenance,
    ):
        self.name = name
        self.ext = ext
        self.curve = curve
        self.P1 = P1
        self.r = r
        self.ell = ell
        self.torsion_order = torsion_order
        self.index_EK_EF = index_EK_EF
        self.tamagawa_indices = tuple(tamagawa_indices)
        self.c = Fraction(c)
        self.c_prime = Fraction(c_prime)
        self.bounds = dict(bounds)
        self.provenance = dict(provenance)
        self._rP1 = None
        self._multiples = {}

    def base_point(self):
        """r * P1, the generator of the working subgroup r E(K)."""
        if self._rP1 is None:
            self._rP1 = scalar_mul(self.r, self.P1)
        return self._rP1

    def multiple(self, k):
        """k * (r P1), cached incrementally so scans stay cheap."""
        if k == 0:
            return self.curve.infinity()
        if k < 0:
            return -self.multiple(-k)
        P = self._multiples.get(k)
        if P is not None:
            return P
        base = self.base_point()
        if k == 1:
            self._multiples[1] = base
            return base
        if k - 1 in self._multiples:
            P = point_add(self._multiples[k - 1], base)
        else:
            P = scalar_mul(k, base)
        self._multiples[k] = P
        return P


def validate_instance(inst):
    """Computable invariant checks; failures are report entries, not errors."""
    checks = []

    def add(name, ok, detail=""):
        checks.append({"check": name, "pass": bool(ok), "detail": detail})

    curve, ext = inst.curve, inst.ext
    add("curve-coefficients-integral", curve.a.is_integral() and curve.b.is_integral())
    add(
        "curve-coefficients-in-base",
        ext.is_in_base(curve.a) and ext.is_in_base(curve.b),
    )
    add("discriminant-nonzero", not curve.discriminant.is_zero())
    on = not inst.P1.is_infinity and curve.on_curve(inst.P1.x, inst.P1.y)
    add("generator-on-curve", on)
    if on:
        rP = inst.base_point()
        add("r-multiple-nonzero", not rP.is_infinity)
        if not rP.is_infinity:
            in_base = ext.is_in_base(rP.x) and ext.is_in_base(rP.y)
            add("r-multiple-in-base-field", in_base)
    add(
        "r-divisible-by-torsion",
        inst.r % inst.torsion_order == 0,
        f"r={inst.r}, torsion={inst.torsion_order}",
    )
    add(
        "r-divisible-by-index",
        inst.r % inst.index_EK_EF == 0,
        f"r={inst.r}, index={inst.index_EK_EF}",
    )
    for tag, idx in inst.tamagawa_indices:
        add(f"r-divisible-by-tamagawa-{tag}", inst.r % idx == 0, f"index={idx}")
    ok, detail = _torsion_sanity(inst)
    add("torsion-divides-point-count-gcd", ok, detail)
    report = {
        "instance": inst.name,
        "checks": checks,
        "verdict": "pass" if all(c["pass"] for c in checks) else "fail",
    }
    return report


def _torsion_sanity(inst, want=2):
    """Torsion must divide gcd of #E(F_P) over a couple of good primes."""
    K = inst.curve.field
    counts = []
    used = []
    p = 2
    while len(counts) < want and p < 200:
        p = _next_prime(p)
        try:
            primes = kummer_dedekind(K, p)
        except IdealError:
            continue
        for P in primes:
            if P.e != 1 or P.f > 2:
                continue
            try:
                cnt = count_points_mod(inst.curve, P)
            except CurveError:
                continue
            counts.append(cnt)
            used.append((p, P.f, cnt))
            break
    if len(counts) < want:
        return False, "could not find enough good primes"
    g = 0
    for c in counts:
        g = gcd(g, c)
    return g % inst.torsion_order == 0, f"counts={used}, gcd={g}"


def _next_prime(p):
    q = p + 1
    while True:
        if all(q % d for d in range(2, int(q ** 0.5) + 1)):
            return q
        q += 1


def count_points_mod(curve, prime):
    """#E(O_K/P) for a good prime P of residue degree <= 2, by enumeration."""
    K = curve.field
    p, f = prime.p, prime.f
    red_a = _reduce_element(K, curve.a, prime)
    red_b = _reduce_element(K, curve.b, prime)
    gf = _GF(p, prime)
    disc = gf.add(
        gf.scale(gf.mul(gf.mul(red_a, red_a), red_a), 4),
        gf.scale(gf.mul(red_b, red_b), 27),
    )
    if gf.is_zero(disc):
        raise CurveError("bad reduction at this prime")
    count = 1  # infinity
    for x in gf.elements():
        rhs = gf.add(gf.add(gf.mul(gf.mul(x, x), x), gf.mul(red_a, x)), red_b)
        if gf.is_zero(rhs):
            count += 1
        elif gf.is_square(rhs):
            count += 2
    return count


def _reduce_element(K, elt, prime):
    """Reduce an integral element mod P into F_p[x]/(g_P) coordinates."""
    p = prime.p
    g = [c % p for c in _gen_poly_coords(prime)]
    coords = []
    for c in elt.coords:
        if c.denominator % p == 0:
            raise CurveError("element not p-integral in power coordinates")
        coords.append(c.numerator * pow(c.denominator, -1, p) % p)
    # reduce the power-basis polynomial mod (p, g)
    from .ideals import _pp_divmod, _pp_trim

    _, rem = _pp_divmod(_pp_trim(list(coords)), g, p)
    rem = rem + [0] * (len(g) - 1 - len(rem))
    return tuple(rem)


def _gen_poly_coords(prime):
    """Monic polynomial of the prime's second generator in the power basis."""
    theta_gen = prime.gens[1]
    # reconstruct g from the stored generator value: the element was built as
    # g(theta); recover its coefficient list from power-basis coordinates,
    # then append the leading term implied by the residue degree.
    coords = [int(c) for c in theta_gen.coords]
    g = coords[: prime.f] + [1]
    return g


class _GF:
    """Tiny F_{p^f} arithmetic (f <= 2) for point counting."""

    def __init__(self, p, prime):
        self.p = p
        self.f = prime.f
        self.g = [c % p for c in _gen_poly_coords(prime)]

    def elements(self):
        if self.f == 1:
            for a in range(self.p):
                yield (a,)
        else:
            for a in range(self.p):
                for b in range(self.p):
                    yield (a, b)

    def is_zero(self, x):
        return all(c == 0 for c in x)

    def add(self, x, y):
        return tuple((a + b) % self.p for a, b in zip(self._pad(x), self._pad(y)))

    def scale(self, x, k):
        return tuple((a * k) % self.p for a in self._pad(x))

    def _pad(self, x):
        return tuple(x) + (0,) * (self.f - len(x))

    def mul(self, x, y):
        if self.f == 1:
            return ((x[0] * y[0]) % self.p,)
        x, y = self._pad(x), self._pad(y)
        c0 = x[0] * y[0]
        c1 = x[0] * y[1] + x[1] * y[0]
        c2 = x[1] * y[1]
        # reduce c2 * t^2 using t^2 = -g1 t - g0
        c1 -= c2 * self.g[1]
        c0 -= c2 * self.g[0]
        return (c0 % self.p, c1 % self.p)

    def pow(self, x, e):
        result = (1,) + (0,) * (self.f - 1)
        base = self._pad(x)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_square(self, x):
        if self.is_zero(x):
            return True
        q = self.p ** self.f
        return self.pow(x, (q - 1) // 2) == (1,) + (0,) * (self.f - 1)
