"""Exact arithmetic in Q(w) and its extensions by spectral variables.

The coefficient field is realized as Q(w) with q = -w**2, so that
v = w satisfies v**2 = -q and qt := -1/q = w**-2.  Every element is a
reduced fraction of integer Laurent polynomials in w; equality is
structural.  Spectral elements adjoin up to two Laurent variables
(z1, z2) with coefficients in Q(w).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd as _igcd

# ---------------------------------------------------------------------------
# integer polynomials in w: dense tuples, cs[0] != 0 and cs[-1] != 0 unless ()

_PZERO = ()
_PONE = (1,)


def _ptrim(cs):
    i, j = 0, len(cs)
    while j > i and cs[j - 1] == 0:
        j -= 1
    while i < j and cs[i] == 0:
        i += 1
    return i, tuple(cs[i:j])


def _padd(a_off, a, b_off, b):
    if not a:
        return b_off, b
    if not b:
        return a_off, a
    off = min(a_off, b_off)
    top = max(a_off + len(a), b_off + len(b))
    cs = [0] * (top - off)
    for i, c in enumerate(a):
        cs[a_off - off + i] += c
    for i, c in enumerate(b):
        cs[b_off - off + i] += c
    doff, cs = _ptrim(cs)
    return off + doff, cs


def _pmul(a_off, a, b_off, b):
    if not a or not b:
        return 0, _PZERO
    if len(a) == 1:
        return a_off + b_off, tuple(a[0] * c for c in b)
    if len(b) == 1:
        return a_off + b_off, tuple(b[0] * c for c in a)
    cs = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                cs[i + j] += x * y
    doff, cs = _ptrim(cs)
    return a_off + b_off + doff, cs


def _pneg(cs):
    return tuple(-c for c in cs)


def _pcontent(cs):
    g = 0
    for c in cs:
        g = _igcd(g, abs(c))
        if g == 1:
            return 1
    return g


def _pprim(cs):
    g = _pcontent(cs)
    if g <= 1:
        return cs, g if cs else 0
    return tuple(c // g for c in cs), g


def _pdiv_exact(a, b):
    """Exact division of integer polynomials (no offsets), a = q*b."""
    if not a:
        return _PZERO
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    lb = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1]
        if c % lb != 0:
            raise ArithmeticError("inexact polynomial division")
        c //= lb
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    _, qt = _ptrim(q)
    return qt


def _prem(a, b):
    """Integer pseudo-remainder of a by b (lists, b nonzero)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while True:
        while r and r[-1] == 0:
            r.pop()
        dr = len(r) - 1
        if not r or dr < db:
            return r
        lr = r[-1]
        r = [lb * c for c in r]
        for i in range(db + 1):
            r[dr - db + i] -= lr * b[i]


@lru_cache(maxsize=1 << 16)
def _pgcd_prim(a, b):
    """gcd of two primitive integer polynomials via a primitive PRS."""
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _pprim(tuple(r))[0]
    return a if a[-1] > 0 else _pneg(a)


def _pgcd(a, b):
    """gcd of integer polynomials (no offsets), primitive with lc > 0."""
    a, _ = _pprim(a)
    b, _ = _pprim(b)
    if not a:
        return b if (not b or b[-1] > 0) else _pneg(b)
    if not b:
        return a if a[-1] > 0 else _pneg(a)
    return _pgcd_prim(a, b)


class Scalar:
    """Element of Q(w), a reduced fraction of integer Laurent polynomials.

    Canonical form: numerator and denominator are coprime over Q[w], the
    denominator has lowest exponent 0, positive leading coefficient and
    integer content coprime to the numerator's.  Hence Scalar equality and
    hashing are structural.
    """

    __slots__ = ("noff", "num", "den", "_hash")

    def __init__(self, noff, num, den, _reduced=False):
        if not _reduced:
            noff, num, den = _reduce(noff, num, den)
        self.noff = noff
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n):
        if n == 0:
            return ZERO
        return Scalar(0, (n,), _PONE, _reduced=True)

    @staticmethod
    def from_fraction(fr):
        fr = Fraction(fr)
        return Scalar(0, (fr.numerator,), (fr.denominator,), _reduced=True)

    @staticmethod
    def monomial(coeff, exp):
        """coeff * w**exp with integer coeff."""
        if coeff == 0:
            return ZERO
        return Scalar(exp, (coeff,), _PONE, _reduced=True)

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.noff == 0 and self.num == _PONE and self.den == _PONE

    def is_laurent(self):
        """True when the denominator is a rational constant."""
        return len(self.den) == 1

    def is_monomial(self):
        return len(self.num) == 1 and len(self.den) == 1

    def monomial_parts(self):
        """(Fraction coefficient, exponent) for a monomial; None otherwise."""
        if not self.num:
            return Fraction(0), 0
        if self.is_monomial():
            return Fraction(self.num[0], self.den[0]), self.noff
        return None

    def coeffs(self):
        """Laurent coefficients {exponent: Fraction}; requires is_laurent()."""
        if not self.is_laurent():
            raise ValueError("not a Laurent polynomial: %s" % self)
        d = self.den[0]
        return {self.noff + i: Fraction(c, d) for i, c in enumerate(self.num) if c}

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            noff, num = _padd(self.noff, self.num, other.noff, other.num)
            if not num:
                return ZERO
            return Scalar(noff, num, self.den)
        noff1, num1 = _pmul(self.noff, self.num, 0, other.den)
        noff2, num2 = _pmul(other.noff, other.num, 0, self.den)
        noff, num = _padd(noff1, num1, noff2, num2)
        _, den = _pmul(0, self.den, 0, other.den)
        return Scalar(noff, num, den)

    def __neg__(self):
        if not self.num:
            return self
        return Scalar(self.noff, _pneg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.is_one():
            return other
        if other.is_one():
            return self
        noff, num = _pmul(self.noff, self.num, other.noff, other.num)
        if self.den == _PONE and other.den == _PONE:
            return Scalar(noff, num, _PONE)
        _, den = _pmul(0, self.den, 0, other.den)
        return Scalar(noff, num, den)

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(-self.noff, self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n):
        if n == 0:
            return ONE
        if n < 0:
            return self.inverse() ** (-n)
        r, b, e = ONE, self, n
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return (
            self.noff == other.noff and self.num == other.num and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.noff, self.num, self.den))
        return self._hash

    def bar(self):
        """The involution w -> 1/w (hence q -> 1/q)."""
        num = tuple(reversed(self.num))
        den = tuple(reversed(self.den))
        # w^noff * num(w) -> w^(-noff-deg) * rev(num); den likewise
        noff = -(self.noff + len(self.num) - 1) if self.num else 0
        doff = -(len(self.den) - 1)
        return Scalar(noff - doff, num, den)

    def subs_int(self, wval: Fraction):
        """Evaluate at a rational w = wval (diagnostic use)."""
        wval = Fraction(wval)
        nv = sum(Fraction(c) * wval ** (self.noff + i) for i, c in enumerate(self.num))
        dv = sum(Fraction(c) * wval**i for i, c in enumerate(self.den))
        return nv / dv

    def __repr__(self):
        return "Scalar(%s)" % self.to_str()

    def to_str(self, var="w"):
        return "(%s)/(%s)" % (
            _poly_str(self.noff, self.num, var),
            _poly_str(0, self.den, var),
        )


def _reduce(noff, num, den):
    i, num = _ptrim(num)
    noff += i
    j, den = _ptrim(den)
    noff -= j
    if not num:
        return 0, _PZERO, _PONE
    if not den:
        raise ZeroDivisionError("zero denominator")
    if len(den) > 1 and len(num) > 1:
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdiv_exact(num, g)
            den = _pdiv_exact(den, g)
    num, cn = _pprim(num)
    den, cd = _pprim(den)
    g = _igcd(cn, cd)
    cn //= g
    cd //= g
    if den[-1] < 0:
        den = _pneg(den)
        num = _pneg(num)
    num = tuple(c * cn for c in num)
    den = tuple(c * cd for c in den)
    return noff, num, den


def _poly_str(off, cs, var):
    if not cs:
        return "0"
    parts = []
    for i, c in enumerate(cs):
        if not c:
            continue
        e = off + i
        if e == 0:
            parts.append("%d" % c)
        else:
            mono = var if e == 1 else "%s^%d" % (var, e)
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%d*%s" % (c, mono))
    out = parts[0]
    for p in parts[1:]:
        out += ("+" + p) if not p.startswith("-") else p
    return out


ZERO = Scalar(0, _PZERO, _PONE, _reduced=True)
ONE = Scalar(0, _PONE, _PONE, _reduced=True)
MINUS_ONE = Scalar(0, (-1,), _PONE, _reduced=True)
W = Scalar.monomial(1, 1)  # v
Q = Scalar.monomial(-1, 2)  # q = -w^2
QINV = Scalar.monomial(-1, -2)
QTILDE = Scalar.monomial(1, -2)  # -1/q = w^-2


def bar(s: Scalar) -> Scalar:
    """The involution w -> 1/w as a function."""
    return s.bar()


def q_power(k):
    """q**k as a Scalar."""
    return Scalar.monomial(-1 if k % 2 else 1, 2 * k)


def as_q_power(s: Scalar):
    """Return k with s == q**k, or None."""
    mp = s.monomial_parts()
    if mp is None:
        return None
    c, e = mp
    if e % 2 != 0:
        return None
    k = e // 2
    if c == (-1 if k % 2 else 1):
        return k
    return None


@lru_cache(maxsize=None)
def qint(m: int) -> Scalar:
    """Quantum integer [m] = (q^m - q^-m)/(q - q^-1), expanded in w."""
    if m == 0:
        return ZERO
    if m < 0:
        return -qint(-m)
    # [m] = (-1)^(m-1) * sum_j w^(2(m-1) - 4j), j = 0..m-1
    cs = [0] * (4 * (m - 1) + 1)
    for j in range(m):
        cs[4 * j] = 1
    off, cs = _ptrim(cs)
    s = Scalar(-2 * (m - 1) + off, cs, _PONE, _reduced=True)
    return s if (m - 1) % 2 == 0 else -s


@lru_cache(maxsize=None)
def qfact(m: int) -> Scalar:
    """[m]! = [m][m-1]...[1]."""
    if m < 0:
        raise ValueError("qfact of negative integer")
    if m == 0:
        return ONE
    return qfact(m - 1) * qint(m)


def qbinom(m: int, k: int) -> Scalar:
    """Quantum binomial [m k] for 0 <= k <= m."""
    if not (0 <= k <= m):
        raise ValueError("qbinom out of range: (%d, %d)" % (m, k))
    return qfact(m) / (qfact(k) * qfact(m - k))


def qint_at(p: Scalar, m: int) -> Scalar:
    """[m] evaluated at base p, i.e. (p^m - p^-m)/(p - p^-1)."""
    if m == 0:
        return ZERO
    if m < 0:
        return -qint_at(p, -m)
    acc = ZERO
    pw = p ** (m - 1)
    p2inv = (p * p).inverse()
    for _ in range(m):
        acc = acc + pw
        pw = pw * p2inv
    return acc


def qfact_at(p: Scalar, m: int) -> Scalar:
    acc = ONE
    for i in range(1, m + 1):
        acc = acc * qint_at(p, i)
    return acc


def qbinom_at(p: Scalar, m: int, k: int) -> Scalar:
    if not (0 <= k <= m):
        raise ValueError("qbinom out of range: (%d, %d)" % (m, k))
    return qfact_at(p, m) / (qfact_at(p, k) * qfact_at(p, m - k))


# ---------------------------------------------------------------------------
# spectral extension: fractions of Laurent polynomials in z1, z2 over Q(w)


class PoleError(ArithmeticError):
    """Specialization hit a pole; carries the vanishing denominator."""

    def __init__(self, var, value, denominator, q_exponent=None):
        self.var = var
        self.value = value
        self.denominator = denominator
        self.q_exponent = q_exponent
        msg = "pole at %s = %s" % (var, value.to_str() if isinstance(value, Scalar) else value)
        if q_exponent is not None:
            msg += " (factor z - q^%d)" % q_exponent
        super().__init__(msg)


def _ztrim(d):
    return {e: c for e, c in d.items() if not c.is_zero()}


def _zshift(d, s1, s2):
    if s1 == 0 and s2 == 0:
        return d
    return {(e1 + s1, e2 + s2): c for (e1, e2), c in d.items()}


def _znormal(d):
    """Shift exponents so minima are 0; return (shift1, shift2, dict)."""
    if not d:
        return 0, 0, {}
    m1 = min(e1 for e1, _ in d)
    m2 = min(e2 for _, e2 in d)
    return m1, m2, _zshift(d, -m1, -m2)


def _zadd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        out[e] = c if s is None else s + c
    return _ztrim(out)


def _zmul(a, b):
    if not a or not b:
        return {}
    out = {}
    for (e1, e2), c in a.items():
        for (f1, f2), d in b.items():
            k = (e1 + f1, e2 + f2)
            s = out.get(k)
            p = c * d
            out[k] = p if s is None else s + p
    return _ztrim(out)


def _zscale(a, s: Scalar):
    if s.is_zero():
        return {}
    if s.is_one():
        return a
    return _ztrim({e: c * s for e, c in a.items()})


def _zvars(d):
    v1 = any(e1 for (e1, _) in d)
    v2 = any(e2 for (_, e2) in d)
    return v1, v2


def _to_list1(d, axis):
    """Nonneg-exponent dict -> dense list along axis (other exponent 0)."""
    deg = max(e[axis] for e in d) if d else -1
    out = [ZERO] * (deg + 1)
    for e, c in d.items():
        out[e[axis]] = c
    return out


def _from_list1(cs, axis):
    out = {}
    for i, c in enumerate(cs):
        if not c.is_zero():
            out[(i, 0) if axis == 0 else (0, i)] = c
    return out


def _l1trim(cs):
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _l1gcd(a, b):
    """Monic gcd of dense Scalar-coefficient lists (univariate Euclid)."""
    a, b = list(a), list(b)
    _l1trim(a)
    _l1trim(b)
    while b:
        # a mod b
        inv = b[-1].inverse()
        while len(a) >= len(b):
            c = a[-1] * inv
            k = len(a) - len(b)
            for i in range(len(b)):
                a[k + i] = a[k + i] - c * b[i]
            a.pop()
            _l1trim(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return []
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _l1div_exact(a, b):
    a = list(a)
    q = [ZERO] * (len(a) - len(b) + 1)
    inv = b[-1].inverse()
    while _l1trim(a) and len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i in range(len(b)):
            a[k + i] = a[k + i] - c * b[i]
        a.pop()
    if any(not c.is_zero() for c in a):
        raise ArithmeticError("inexact division in K0[z]")
    return q


def _zgcd(a, b):
    """gcd of nonneg-exponent z-polynomials over Q(w), 1 if coprime."""
    if not a or not b:
        return {(0, 0): ONE}
    a1, a2 = _zvars(a)
    b1, b2 = _zvars(b)
    if not (a1 or a2) or not (b1 or b2):
        return {(0, 0): ONE}
    if not a2 and not b2:
        g = _l1gcd(_to_list1(a, 0), _to_list1(b, 0))
        return _from_list1(g, 0) if len(g) > 1 else {(0, 0): ONE}
    if not a1 and not b1:
        g = _l1gcd(_to_list1(a, 1), _to_list1(b, 1))
        return _from_list1(g, 1) if len(g) > 1 else {(0, 0): ONE}
    # genuinely bivariate: poly in z2 with coefficients in Q(w)[z1]
    return _zgcd2(a, b)


def _as_nested(d):
    """dict -> list over z2 of dense z1-lists."""
    deg2 = max(e2 for (_, e2) in d)
    rows = [dict() for _ in range(deg2 + 1)]
    for (e1, e2), c in d.items():
        rows[e2][(e1, 0)] = c
    return [_to_list1(r, 0) if r else [] for r in rows]


def _nested_to_dict(rows):
    out = {}
    for e2, cs in enumerate(rows):
        for e1, c in enumerate(cs):
            if not c.is_zero():
                out[(e1, e2)] = c
    return out


def _n_trim(rows):
    rows = [_l1trim(list(cs)) for cs in rows]
    while rows and not rows[-1]:
        rows.pop()
    return rows


def _n_content(rows):
    g = []
    for cs in rows:
        cs = _l1trim(list(cs))
        if cs:
            g = _l1gcd(g, cs) if g else [c * cs[-1].inverse() for c in cs]
        if len(g) == 1:
            break
    return g or [ONE]


def _n_scale_div(rows, g):
    if len(g) == 1 and g[0].is_one():
        return rows
    return [_l1div_exact(_l1trim(list(cs)), g) if _l1trim(list(cs)) else [] for cs in rows]


def _l1mul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _l1trim(out)


def _l1sub(a, b):
    out = list(a) + [ZERO] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = out[i] - y
    return _l1trim(out)


def _prem2(fa, fb):
    """Pseudo-remainder along z2, coefficients are z1-poly lists."""
    r = [list(cs) for cs in fa]
    db = len(fb) - 1
    lb = fb[-1]
    while True:
        r = _n_trim(r)
        dr = len(r) - 1
        if not r or dr < db:
            return r
        lr = r[-1]
        r = [_l1mul(cs, lb) for cs in r]
        for i in range(db + 1):
            r[dr - db + i] = _l1sub(r[dr - db + i], _l1mul(lr, fb[i]))


def _zgcd2(a, b):
    fa = _n_trim(_as_nested(a))
    fb = _n_trim(_as_nested(b))
    ca = _n_content(fa)
    cb = _n_content(fb)
    fa = _n_scale_div(fa, ca)
    fb = _n_scale_div(fb, cb)
    gc = _l1gcd(ca, cb)
    if len(fa) < len(fb):
        fa, fb = fb, fa
    while fb:
        r = _prem2(fa, fb)
        if r:
            r = _n_scale_div(r, _n_content(r))
        fa, fb = fb, r
    fa = _n_scale_div(fa, _n_content(fa))
    prim = _nested_to_dict(fa)
    prim_trivial = len(prim) == 1 and (0, 0) in prim
    gch = _from_list1(gc, 0)
    if prim_trivial:
        return gch if len(gc) > 1 else {(0, 0): ONE}
    out = _zmul(gch, prim)
    return out if out else {(0, 0): ONE}


VAR_NAMES = ("z1", "z2")


class SpectralScalar:
    """Rational function in z1, z2 over Q(w), as a reduced fraction.

    The denominator is normalized with minimum exponents 0 and leading
    coefficient 1 under lexicographic (z2, z1) ordering, so equality is
    structural.  A single spectral variable z is z1.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den, _reduced=False):
        if not _reduced:
            num, den = _sreduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def from_scalar(s: Scalar):
        if s.is_zero():
            return SZERO
        return SpectralScalar({(0, 0): s}, {(0, 0): ONE}, _reduced=True)

    @staticmethod
    def variable(axis=0):
        e = (1, 0) if axis == 0 else (0, 1)
        return SpectralScalar({e: ONE}, {(0, 0): ONE}, _reduced=True)

    @staticmethod
    def monomial(s: Scalar, e1: int, e2: int = 0):
        if s.is_zero():
            return SZERO
        return SpectralScalar({(e1, e2): s}, {(0, 0): ONE}, _reduced=True)

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == {(0, 0): ONE} and self.den == {(0, 0): ONE}

    def is_polynomial(self):
        return self.den == {(0, 0): ONE} and all(
            e1 >= 0 and e2 >= 0 for (e1, e2) in self.num
        )

    def as_scalar(self):
        """Return the underlying Scalar when no spectral variable occurs."""
        nv1, nv2 = _zvars(self.num)
        dv1, dv2 = _zvars(self.den)
        if nv1 or nv2 or dv1 or dv2:
            raise ValueError("spectral variable present: %s" % self)
        if not self.num:
            return ZERO
        return self.num[(0, 0)] / self.den[(0, 0)]

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return SpectralScalar(_zadd(self.num, other.num), self.den)
        num = _zadd(_zmul(self.num, other.den), _zmul(other.num, self.den))
        return SpectralScalar(num, _zmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return SpectralScalar(
            {e: -c for e, c in self.num.items()}, self.den, _reduced=True
        )

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return SZERO
        if self.is_one():
            return other
        if other.is_one():
            return self
        return SpectralScalar(
            _zmul(self.num, other.num), _zmul(self.den, other.den)
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero SpectralScalar")
        return SpectralScalar(dict(self.den), dict(self.num))

    def __truediv__(self, other):
        other = _coerce(other)
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = SONE
        b, e = self, n
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (frozenset(self.num.items()), frozenset(self.den.items()))
            )
        return self._hash

    def specialize(self, axis, value):
        """Exact substitution z_axis = value (a Scalar or SpectralScalar)."""
        if isinstance(value, Scalar):
            value = SpectralScalar.from_scalar(value)
        num = _zeval(self.num, axis, value)
        den = _zeval(self.den, axis, value)
        if den.is_zero():
            k = None
            if isinstance(value, SpectralScalar):
                try:
                    k = as_q_power(value.as_scalar())
                except ValueError:
                    k = None
            raise PoleError(VAR_NAMES[axis], value, self.den_str(), k)
        return num / den

    def den_poly_coeffs(self, axis=0):
        """Denominator as {exponent: Scalar} in the given variable."""
        v1, v2 = _zvars(self.den)
        if (axis == 0 and v2) or (axis == 1 and v1):
            raise ValueError("denominator involves the other variable")
        return {e[axis]: c for e, c in self.den.items()}

    def num_str(self, names=VAR_NAMES):
        return _zstr(self.num, names)

    def den_str(self, names=VAR_NAMES):
        return _zstr(self.den, names)

    def to_str(self, names=VAR_NAMES):
        return "(%s)/(%s)" % (self.num_str(names), self.den_str(names))

    def __repr__(self):
        return "SpectralScalar(%s)" % self.to_str()


def _coerce(x):
    if isinstance(x, SpectralScalar):
        return x
    if isinstance(x, Scalar):
        return SpectralScalar.from_scalar(x)
    if isinstance(x, int):
        return SpectralScalar.from_scalar(Scalar.from_int(x))
    return NotImplemented


def _zeval(d, axis, value):
    out = SZERO
    for (e1, e2), c in d.items():
        e = e1 if axis == 0 else e2
        rest = (0, e2) if axis == 0 else (e1, 0)
        term = SpectralScalar.monomial(c, *rest) * (value**e)
        out = out + term
    return out


def _sreduce(num, den):
    num = _ztrim(num)
    den = _ztrim(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return {}, {(0, 0): ONE}
    # clear Laurent shifts
    n1, n2, num = _znormal(num)
    d1, d2, den = _znormal(den)
    s1, s2 = n1 - d1, n2 - d2
    if len(den) > 1 or den.get((0, 0)) is None:
        g = _zgcd(num, den)
        if not (len(g) == 1 and (0, 0) in g and g[(0, 0)].is_one()):
            num = _zdiv_exact(num, g)
            den = _zdiv_exact(den, g)
    # monic denominator under lex (e2, e1)
    lead = max(den, key=lambda e: (e[1], e[0]))
    lc = den[lead]
    if not lc.is_one():
        inv = lc.inverse()
        num = _zscale(num, inv)
        den = _zscale(den, inv)
    num = _zshift(num, s1, s2)
    return num, den


def _zdiv_exact(a, b):
    """Exact division of nonneg z-polynomials over Q(w)."""
    bv1, bv2 = _zvars(b)
    if not bv1 and not bv2:
        return _zscale(a, b[(0, 0)].inverse())
    if not bv2 and not _zvars(a)[1]:
        q = _l1div_exact(_to_list1(a, 0), _to_list1(b, 0))
        return _from_list1(q, 0)
    if not bv1 and not _zvars(a)[0]:
        q = _l1div_exact(_to_list1(a, 1), _to_list1(b, 1))
        return _from_list1(q, 1)
    # bivariate long division along z2 with z1-list coefficients
    ra = _n_trim(_as_nested(a))
    rb = _n_trim(_as_nested(b))
    qout = [[] for _ in range(len(ra) - len(rb) + 1)]
    while ra and len(ra) >= len(rb):
        k = len(ra) - len(rb)
        c = _l1div_exact(_l1trim(list(ra[-1])), _l1trim(list(rb[-1])))
        qout[k] = c
        for i in range(len(rb)):
            ra[k + i] = _l1sub(ra[k + i], _l1mul(c, rb[i]))
        ra = _n_trim(ra)
    if ra:
        raise ArithmeticError("inexact bivariate division")
    return _nested_to_dict(qout)


def _zstr(d, names):
    if not d:
        return "0"
    parts = []
    for e in sorted(d, key=lambda e: (e[1], e[0])):
        c = d[e]
        mono = []
        if e[0]:
            mono.append(names[0] if e[0] == 1 else "%s^%d" % (names[0], e[0]))
        if e[1]:
            mono.append(names[1] if e[1] == 1 else "%s^%d" % (names[1], e[1]))
        cs = c.to_str()
        parts.append("*".join([cs] + mono) if mono else cs)
    return " + ".join(parts)


SZERO = SpectralScalar({}, {(0, 0): ONE}, _reduced=True)
SONE = SpectralScalar({(0, 0): ONE}, {(0, 0): ONE}, _reduced=True)
Z1 = SpectralScalar.variable(0)
Z2 = SpectralScalar.variable(1)


def factor_q_poles(den, bound):
    """Split a z-polynomial over Q(w) into q-power roots.

    den: {exponent: Scalar} in one variable z.  Trial-divides by (z - q^k)
    for |k| <= bound and returns (multiset of exponents k as a sorted list,
    leftover factor as {exponent: Scalar}).
    """
    cs = [ZERO] * (max(den) + 1 if den else 0)
    for e, c in den.items():
        cs[e] = c
    cs = _l1trim(cs)
    found = []
    k = -bound
    while k <= bound and len(cs) > 1:
        qk = q_power(k)
        # evaluate at z = q^k
        acc = ZERO
        for c in reversed(cs):
            acc = acc * qk + c
        if acc.is_zero():
            cs = _l1div_exact(cs, [-qk, ONE])
            found.append(k)
            continue  # same k again (multiplicity)
        k += 1
    leftover = {i: c for i, c in enumerate(cs) if not c.is_zero()}
    return sorted(found), leftover


# ---------------------------------------------------------------------------
# tiny expression grammar for CLI scalars: integers, w, q, z, ^, *, /, +, -


def parse_scalar(text: str):
    """Parse an expression over {q, w, z, integers, ^, *, /, +, -, ()}.

    Returns a SpectralScalar when z occurs, else a Scalar.
    """
    toks = _tokenize(text)
    val, pos = _parse_sum(toks, 0)
    if pos != len(toks):
        raise ValueError("trailing input in scalar expression: %r" % text)
    try:
        return val.as_scalar()
    except ValueError:
        return val


def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j])))
            i = j
        elif c in "qwz":
            toks.append(("var", c))
            i += 1
        elif c in "+-*/^()":
            toks.append((c, c))
            i += 1
        else:
            raise ValueError("bad character %r in scalar expression" % c)
    return toks


def _parse_sum(toks, pos):
    val, pos = _parse_term(toks, pos)
    while pos < len(toks) and toks[pos][0] in "+-":
        op = toks[pos][0]
        rhs, pos = _parse_term(toks, pos + 1)
        val = val + rhs if op == "+" else val - rhs
    return val, pos


def _parse_term(toks, pos):
    val, pos = _parse_factor(toks, pos)
    while pos < len(toks) and toks[pos][0] in "*/":
        op = toks[pos][0]
        rhs, pos = _parse_factor(toks, pos + 1)
        val = val * rhs if op == "*" else val / rhs
    return val, pos


def _parse_factor(toks, pos):
    neg = False
    while pos < len(toks) and toks[pos][0] in "+-":
        if toks[pos][0] == "-":
            neg = not neg
        pos += 1
    val, pos = _parse_atom(toks, pos)
    if pos < len(toks) and toks[pos][0] == "^":
        pos += 1
        sign = 1
        while pos < len(toks) and toks[pos][0] in "+-":
            if toks[pos][0] == "-":
                sign = -sign
            pos += 1
        if pos >= len(toks) or toks[pos][0] != "int":
            raise ValueError("expected integer exponent")
        val = val ** (sign * toks[pos][1])
        pos += 1
    return (-val if neg else val), pos


def _parse_atom(toks, pos):
    if pos >= len(toks):
        raise ValueError("unexpected end of scalar expression")
    kind, payload = toks[pos]
    if kind == "int":
        return SpectralScalar.from_scalar(Scalar.from_int(payload)), pos + 1
    if kind == "var":
        if payload == "w":
            return SpectralScalar.from_scalar(W), pos + 1
        if payload == "q":
            return SpectralScalar.from_scalar(Q), pos + 1
        return Z1, pos + 1
    if kind == "(":
        val, pos = _parse_sum(toks, pos + 1)
        if pos >= len(toks) or toks[pos][0] != ")":
            raise ValueError("unbalanced parenthesis")
        return val, pos + 1
    raise ValueError("unexpected token %r" % kind)
