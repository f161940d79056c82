"""Exact coefficient arithmetic.

Three layers live here:

* Gaussian rationals ``a + b i`` with ``a, b`` in Q.  Purely real values are
  stored as plain :class:`gmpy2.mpq` objects; :class:`GaussRational` only
  appears when the imaginary part is nonzero.  The two interoperate through
  the usual operator protocol.
* Dense univariate polynomials in ``q`` over Q(i) (tuples, lowest degree
  first, no trailing zeros).
* :class:`QScalar`, an element of the rational function field Q(i)(q) kept in
  a canonical reduced form, with the star involution ``q -> 1/q`` combined
  with complex conjugation of the coefficients.
"""

from __future__ import annotations

import cmath
import re
from functools import reduce
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

__all__ = [
    "GaussRational",
    "QScalar",
    "PoleError",
    "gauss",
    "conj",
    "star",
    "eval_at",
    "taylor_at_one",
    "q",
    "ZERO",
    "ONE",
    "I_UNIT",
]


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at (or expanded around) a pole."""


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussRational:
    """Gaussian rational ``re + im*i``.

    Instances with ``im == 0`` are normally demoted to ``mpq`` by :func:`gauss`,
    so a ``GaussRational`` found inside a polynomial always has ``im != 0``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    # conversions --------------------------------------------------------
    def conjugate(self):
        return gauss(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        return coeff_text(self)

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, GaussRational):
            return gauss(self.re + other.re, self.im + other.im)
        try:
            return GaussRational(self.re + other, self.im)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussRational):
            return gauss(self.re - other.re, self.im - other.im)
        try:
            return GaussRational(self.re - other, self.im)
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return GaussRational(other - self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussRational):
            return gauss(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)
        try:
            return gauss(self.re * other, self.im * other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def _inverse(self):
        d = self.re * self.re + self.im * self.im
        return GaussRational(self.re / d, -self.im / d)

    def __truediv__(self, other):
        if isinstance(other, GaussRational):
            return self * other._inverse()
        if not other:
            raise ZeroDivisionError("division by zero")
        return gauss(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        return self._inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self._inverse() ** (-k)
        out = mpq(1)
        for _ in range(k):
            out = out * self
        return out

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        try:
            return self.im == 0 and self.re == other
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))


Coeff = Union[mpq, GaussRational]


def gauss(re, im=0) -> Coeff:
    """Canonical Gaussian rational: ``mpq`` when real, else :class:`GaussRational`."""
    if im:
        return GaussRational(re, im)
    return mpq(re)


def as_coeff(c) -> Coeff:
    if isinstance(c, GaussRational):
        return gauss(c.re, c.im)
    if isinstance(c, complex):
        raise TypeError("floating complex values are not exact")
    return mpq(c)


def conj(c: Coeff) -> Coeff:
    if isinstance(c, GaussRational):
        return GaussRational(c.re, -c.im)
    return c


def coeff_text(c: Coeff) -> str:
    """``a+bi`` text form with ``a, b`` in lowest terms."""
    if isinstance(c, GaussRational):
        re_, im_ = c.re, c.im
    else:
        re_, im_ = mpq(c), mpq(0)
    sign = "-" if im_ < 0 else "+"
    return f"{re_}{sign}{abs(im_)}i"


_COEFF_RE = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)([+-])(\d+(?:/\d+)?)i\s*$")


def parse_coeff(text: str) -> Coeff:
    m = _COEFF_RE.match(text)
    if not m:
        raise ValueError(f"bad coefficient text {text!r}")
    re_ = mpq(m.group(1))
    im_ = mpq(m.group(3))
    if m.group(2) == "-":
        im_ = -im_
    return gauss(re_, im_)


# ---------------------------------------------------------------------------
# Dense polynomials over Q(i): tuples, constant term first.

Poly = tuple

P_ONE: Poly = (mpq(1),)
P_ZERO: Poly = ()


def _trim(c: list) -> Poly:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def p_add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _trim(out)


def p_sub(a: Poly, b: Poly) -> Poly:
    out = list(a) + [mpq(0)] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = out[i] - c
    return _trim(out)


def p_neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def p_scale(a: Poly, c) -> Poly:
    if not c:
        return P_ZERO
    return tuple(x * c for x in a)


def p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return P_ZERO
    if len(a) == 1:
        return p_scale(b, a[0])
    if len(b) == 1:
        return p_scale(a, b[0])
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def p_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return P_ZERO, a
    rem = list(a)
    lead_inv = 1 / b[-1]
    db = len(b) - 1
    quot = [mpq(0)] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        f = c * lead_inv
        quot[k - db] = f
        for j in range(db + 1):
            rem[k - db + j] = rem[k - db + j] - f * b[j]
    return _trim(quot), _trim(rem[:db])


def p_monic(a: Poly) -> Poly:
    lc = a[-1]
    if lc == 1:
        return a
    inv = 1 / lc
    return tuple(c * inv for c in a[:-1]) + (mpq(1),)


def p_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (Euclid)."""
    while b:
        a, b = b, p_divmod(a, b)[1]
    if not a:
        return P_ONE
    return p_monic(a)


def p_eval(a: Poly, z):
    acc = 0
    for c in reversed(a):
        acc = acc * z + c
    return acc


def p_taylor_shift(a: Poly) -> Poly:
    """Coefficients of ``a(1 + t)`` in ``t``."""
    out = list(a)
    n = len(out)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + out[j + 1]
    return _trim(out)


def _low_order(a: Poly) -> int:
    k = 0
    while k < len(a) and not a[k]:
        k += 1
    return k


# ---------------------------------------------------------------------------
# Rational functions


class QScalar:
    """Exact element of Q(i)(q).

    Stored as ``q**e * num / den`` with ``num`` and ``den`` coprime, neither
    divisible by ``q``, and ``den`` monic.  Zero is ``num == ()``, ``e == 0``.
    Equality is structural.
    """

    __slots__ = ("num", "den", "e", "_hash")

    def __init__(self, num: Poly, den: Poly = P_ONE, e: int = 0, _canonical: bool = False):
        if _canonical:
            self.num, self.den, self.e = num, den, e
        else:
            self.num, self.den, self.e = _canon(tuple(as_coeff(c) for c in num),
                                                tuple(as_coeff(c) for c in den), e)
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "QScalar":
        c = as_coeff(c)
        if not c:
            return ZERO
        return cls((c,), P_ONE, 0, _canonical=True)

    @classmethod
    def monomial(cls, k: int, c=1) -> "QScalar":
        c = as_coeff(c)
        if not c:
            return ZERO
        return cls((c,), P_ONE, k, _canonical=True)

    @classmethod
    def laurent(cls, terms: dict) -> "QScalar":
        """Build from ``{exponent: coefficient}``."""
        out = ZERO
        for k, c in terms.items():
            out = out + cls.monomial(k, c)
        return out

    @classmethod
    def from_polys(cls, num: Sequence, den: Sequence = (1,)) -> "QScalar":
        return cls(tuple(num), tuple(den))

    @staticmethod
    def coerce(x) -> "QScalar":
        if isinstance(x, QScalar):
            return x
        return QScalar.const(x)

    # predicates ---------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_laurent(self) -> bool:
        return self.den == P_ONE

    def is_constant(self) -> bool:
        return self.e == 0 and len(self.num) <= 1 and self.den == P_ONE

    def constant_value(self) -> Coeff:
        if not self.num:
            return mpq(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0]

    def is_real(self) -> bool:
        return not any(isinstance(c, GaussRational) for c in self.num + self.den)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QScalar):
            other = QScalar.const(other)
        if not self.num:
            return other
        if not other.num:
            return self
        a, b = self, other
        if a.e > b.e:
            a, b = b, a
        shift = b.e - a.e
        if a.den == b.den:
            bn = (mpq(0),) * shift + b.num if shift else b.num
            num = p_add(a.num, bn)
            if not num:
                return ZERO
            if a.den == P_ONE:
                k = _low_order(num)
                return QScalar(num[k:], P_ONE, a.e + k, _canonical=True)
            return QScalar(*_canon(num, a.den, a.e), _canonical=True)
        bn = (mpq(0),) * shift + b.num if shift else b.num
        num = p_add(p_mul(a.num, b.den), p_mul(bn, a.den))
        if not num:
            return ZERO
        return QScalar(*_canon(num, p_mul(a.den, b.den), a.e), _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        if not self.num:
            return self
        return QScalar(p_neg(self.num), self.den, self.e, _canonical=True)

    def __sub__(self, other):
        if not isinstance(other, QScalar):
            other = QScalar.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return QScalar.const(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, QScalar):
            c = as_coeff(other)
            if not c or not self.num:
                return ZERO
            return QScalar(p_scale(self.num, c), self.den, self.e, _canonical=True)
        if not self.num or not other.num:
            return ZERO
        e = self.e + other.e
        if self.den == P_ONE and other.den == P_ONE:
            return QScalar(p_mul(self.num, other.num), P_ONE, e, _canonical=True)
        if len(self.num) == 1 and self.den == P_ONE:
            return QScalar(p_scale(other.num, self.num[0]), other.den, e, _canonical=True)
        if len(other.num) == 1 and other.den == P_ONE:
            return QScalar(p_scale(self.num, other.num[0]), self.den, e, _canonical=True)
        # cross-cancel before multiplying keeps degrees small
        g1 = p_gcd(self.num, other.den)
        g2 = p_gcd(other.num, self.den)
        n1 = p_divmod(self.num, g1)[0] if len(g1) > 1 else self.num
        d2 = p_divmod(other.den, g1)[0] if len(g1) > 1 else other.den
        n2 = p_divmod(other.num, g2)[0] if len(g2) > 1 else other.num
        d1 = p_divmod(self.den, g2)[0] if len(g2) > 1 else self.den
        num = p_mul(n1, n2)
        den = p_mul(d1, d2)
        lc = den[-1]
        if lc != 1:
            inv = 1 / lc
            num = p_scale(num, inv)
            den = p_scale(den, inv)
        return QScalar(num, den, e, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if not self.num:
            raise ZeroDivisionError("QScalar division by zero")
        lc = self.num[-1]
        inv = 1 / lc
        return QScalar(p_scale(self.den, inv), p_scale(self.num, inv), -self.e, _canonical=True)

    def __truediv__(self, other):
        if not isinstance(other, QScalar):
            c = as_coeff(other)
            if not c:
                raise ZeroDivisionError("QScalar division by zero")
            return self * (1 / c)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QScalar.const(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # structure ----------------------------------------------------------
    def numerator(self) -> Poly:
        """Full numerator polynomial (``q`` power folded in when nonnegative)."""
        if self.e > 0:
            return (mpq(0),) * self.e + self.num
        return self.num

    def denominator(self) -> Poly:
        if self.e < 0:
            return (mpq(0),) * (-self.e) + self.den
        return self.den

    def degree_size(self) -> int:
        """Crude complexity measure used for pivot selection."""
        return len(self.num) + len(self.den) + abs(self.e)

    def star(self) -> "QScalar":
        return star(self)

    def subs(self, value) -> "QScalar":
        """Exact substitution ``q := value`` (a Gaussian rational)."""
        return QScalar.const(self.value_at(value))

    def value_at(self, value) -> Coeff:
        z = as_coeff(value)
        d = p_eval(self.den, z)
        if not d or (self.e < 0 and not z):
            raise PoleError(f"pole of {self} at q={coeff_text(z)}")
        return p_eval(self.num, z) * (z ** self.e if self.e >= 0 else 1 / z ** (-self.e)) / d

    def __eq__(self, other):
        if not isinstance(other, QScalar):
            try:
                other = QScalar.const(other)
            except TypeError:
                return NotImplemented
        return self.e == other.e and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den, self.e))
        return self._hash

    def __repr__(self):
        return f"QScalar({self})"

    def __str__(self):
        num = _poly_str(self.numerator())
        den = self.denominator()
        if den == P_ONE:
            return num
        return f"({num})/({_poly_str(den)})"

    # serialization ------------------------------------------------------
    def to_text(self) -> str:
        """``[n0, n1, ...] / [d0, d1, ...]`` with coefficients as ``a+bi``."""
        n = ", ".join(coeff_text(c) for c in self.numerator())
        d = ", ".join(coeff_text(c) for c in self.denominator())
        return f"[{n}] / [{d}]"

    @classmethod
    def from_text(cls, text: str) -> "QScalar":
        left, right = _split_fraction(text)
        return cls(_parse_list(left), _parse_list(right))


def _split_fraction(text: str):
    i = text.index("]")
    j = text.index("/", i)
    return text[: i + 1], text[j + 1:]


def _parse_list(s: str) -> Poly:
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"bad coefficient list {s!r}")
    body = s[1:-1].strip()
    if not body:
        return P_ZERO
    return tuple(parse_coeff(t) for t in body.split(","))


def _poly_str(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p):
        if not c:
            continue
        if isinstance(c, GaussRational):
            cs = f"({c.re}{'+' if c.im >= 0 else '-'}{abs(c.im)}*i)"
        else:
            cs = str(c)
        if k == 0:
            parts.append(cs)
        else:
            mon = "q" if k == 1 else f"q^{k}"
            parts.append(mon if cs == "1" else ("-" + mon if cs == "-1" else f"{cs}*{mon}"))
    return " + ".join(parts).replace("+ -", "- ")


def _canon(num: Poly, den: Poly, e: int):
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return P_ZERO, P_ONE, 0
    k = _low_order(num)
    if k:
        num, e = num[k:], e + k
    k = _low_order(den)
    if k:
        den, e = den[k:], e - k
    if len(den) > 1 and len(num) > 1:
        g = p_gcd(num, den)
        if len(g) > 1:
            num = p_divmod(num, g)[0]
            den = p_divmod(den, g)[0]
    lc = den[-1]
    if lc != 1:
        inv = 1 / lc
        num = p_scale(num, inv)
        den = p_scale(den, inv)
    return num, den, e


ZERO = QScalar(P_ZERO, P_ONE, 0, _canonical=True)
ONE = QScalar(P_ONE, P_ONE, 0, _canonical=True)
I_UNIT = QScalar((GaussRational(0, 1),), P_ONE, 0, _canonical=True)


def q(power: int = 1) -> QScalar:
    """The deformation parameter raised to an integer power."""
    return QScalar.monomial(power)


# ---------------------------------------------------------------------------
# Public operations


def star(f: QScalar) -> QScalar:
    """``q -> 1/q`` combined with complex conjugation of every coefficient."""
    if not f.num:
        return f
    num = tuple(conj(c) for c in reversed(f.num))
    den = tuple(conj(c) for c in reversed(f.den))
    e = -f.e - (len(f.num) - 1) + (len(f.den) - 1)
    lc = den[-1]
    if lc != 1:
        inv = 1 / lc
        num = p_scale(num, inv)
        den = p_scale(den, inv)
    return QScalar(num, den, e, _canonical=True)


POLE_THRESHOLD = 1e-12


def eval_at(f: QScalar, z: complex) -> complex:
    """Floating evaluation of ``f`` at the complex point ``z``."""
    z = complex(z)
    d = p_eval(tuple(complex(c) for c in f.den), z)
    scale = max(1.0, sum(abs(complex(c)) for c in f.den))
    if abs(d) < POLE_THRESHOLD * scale or (f.e < 0 and abs(z) < POLE_THRESHOLD):
        raise PoleError(f"pole of {f} at q={z}")
    n = p_eval(tuple(complex(c) for c in f.num), z)
    return n * z ** f.e / d


def taylor_at_one(f: QScalar, order: int) -> list:
    """Coefficients of ``f`` in powers of ``(q - 1)`` up to and including ``order``."""
    num = f.num
    den = f.den
    if f.e >= 0:
        num = (mpq(0),) * f.e + num
    else:
        den = (mpq(0),) * (-f.e) + den
    n = list(p_taylor_shift(num)) + [mpq(0)] * (order + 1)
    d = list(p_taylor_shift(den)) + [mpq(0)] * (order + 1)
    if not d[0]:
        raise PoleError(f"{f} has a pole at q=1")
    inv = 1 / d[0]
    out = []
    for k in range(order + 1):
        acc = n[k]
        for j in range(k):
            acc = acc - out[j] * d[k - j]
        out.append(as_coeff(acc * inv))
    return out


def qsum(values: Iterable[QScalar]) -> QScalar:
    return reduce(lambda a, b: a + b, values, ZERO)


def to_complex(c: Coeff) -> complex:
    return complex(c) if isinstance(c, GaussRational) else complex(float(c))


def unit_circle_point(theta: float) -> complex:
    return cmath.exp(1j * theta)
