"""Exact arithmetic in Q(beta) on the power basis 1, beta, ..., beta^(m-1)."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MixedFields, ParseError, PrecisionCapExceeded
from .polynomial import PRECISION_CAP, START_BITS, PisotPolynomial, parse_terms, trace_powers

LT, EQ, GT = -1, 0, 1


@dataclass(frozen=True)
class CertifiedInterval:
    lower: Fraction
    upper: Fraction
    precision: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= Fraction(x) <= self.upper

    @property
    def midpoint(self) -> float:
        return float((self.lower + self.upper) / 2)


class AlgebraicNumber:
    """An element ``sum(num[i] * beta**i) / den`` of Q(beta).

    Stored in lowest terms with ``den > 0``; instances are immutable.
    """

    __slots__ = ("poly", "num", "den", "_hash")

    def __init__(self, poly: PisotPolynomial, num: Sequence[int], den: int = 1, _normalized: bool = False):
        m = poly.m
        num = tuple(int(c) for c in num)
        if len(num) != m:
            raise ValueError(f"expected {m} coefficients, got {len(num)}")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if den < 0:
                num, den = tuple(-c for c in num), -den
            g = math.gcd(den, *num)
            if g > 1:
                num, den = tuple(c // g for c in num), den // g
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicNumber is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def from_int(cls, poly: PisotPolynomial, n: int) -> "AlgebraicNumber":
        return cls(poly, (n,) + (0,) * (poly.m - 1), 1, _normalized=True)

    @classmethod
    def from_fraction(cls, poly: PisotPolynomial, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls(poly, (q.numerator,) + (0,) * (poly.m - 1), q.denominator)

    @classmethod
    def from_coeffs(cls, poly: PisotPolynomial, coeffs: Iterable) -> "AlgebraicNumber":
        """From rational power-basis coefficients; longer lists are reduced mod g."""
        fr = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        ints = [int(c * den) for c in fr]
        return cls(poly, _reduce(poly.k, ints), den)

    @classmethod
    def zero(cls, poly: PisotPolynomial) -> "AlgebraicNumber":
        return cls.from_int(poly, 0)

    @classmethod
    def one(cls, poly: PisotPolynomial) -> "AlgebraicNumber":
        return cls.from_int(poly, 1)

    @classmethod
    def beta(cls, poly: PisotPolynomial) -> "AlgebraicNumber":
        return cls(poly, (0, 1) + (0,) * (poly.m - 2), 1, _normalized=True)

    @classmethod
    def beta_power(cls, poly: PisotPolynomial, n: int) -> "AlgebraicNumber":
        x = cls.one(poly)
        if n >= 0:
            for _ in range(n):
                x = x.mul_beta()
        else:
            for _ in range(-n):
                x = x.div_beta()
        return x

    # protocol -----------------------------------------------------------

    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicNumber):
            return self.poly.k == other.poly.k and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == AlgebraicNumber.from_fraction(self.poly, other)
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.poly.k, self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"AlgebraicNumber({format_element(self)})"

    def __str__(self) -> str:
        return format_element(self)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_integer(self) -> bool:
        return self.den == 1 and not any(self.num[1:])

    def _coerce(self, other) -> "AlgebraicNumber":
        if isinstance(other, AlgebraicNumber):
            if other.poly.k != self.poly.k:
                raise MixedFields(f"elements of different fields: {self.poly} vs {other.poly}")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber.from_fraction(self.poly, other)
        raise TypeError(f"cannot combine AlgebraicNumber with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        if o.den == self.den:
            return AlgebraicNumber(self.poly, [a + b for a, b in zip(self.num, o.num)], self.den)
        return AlgebraicNumber(
            self.poly, [a * o.den + b * self.den for a, b in zip(self.num, o.num)], self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.poly, [-a for a in self.num], self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraicNumber(self.poly, [a * other for a in self.num], self.den)
        if isinstance(other, Fraction):
            return AlgebraicNumber(
                self.poly, [a * other.numerator for a in self.num], self.den * other.denominator
            )
        o = self._coerce(other)
        m = self.poly.m
        prod = [0] * (2 * m - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    prod[i + j] += a * b
        return AlgebraicNumber(self.poly, _reduce(self.poly.k, prod), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            return AlgebraicNumber(self.poly, self.num, self.den * other)
        if isinstance(other, Fraction):
            return self * (1 / other)
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = AlgebraicNumber.one(self.poly)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_beta(self) -> "AlgebraicNumber":
        k = self.poly.k
        m = len(k)
        top = self.num[-1]
        new = [0] + list(self.num[:-1])
        if top:
            for i in range(1, m + 1):
                new[m - i] += k[i - 1] * top
        # beta is a unit of Z[beta]: content and denominator are unchanged
        return AlgebraicNumber(self.poly, new, self.den, _normalized=True)

    def div_beta(self) -> "AlgebraicNumber":
        # beta^-1 = (beta^(m-1) - k1 beta^(m-2) - ... - k_{m-1}) / k_m with k_m = +-1
        k = self.poly.k
        m = len(k)
        km = k[-1]
        c0 = self.num[0] * km
        new = list(self.num[1:]) + [0]
        # a0 * beta^-1 = a0*km*(beta^(m-1) - sum_{i<m} k_i beta^(m-1-i))
        new[m - 1] += c0
        for i in range(1, m):
            new[m - 1 - i] -= k[i - 1] * c0
        return AlgebraicNumber(self.poly, new, self.den, _normalized=True)

    def inverse(self) -> "AlgebraicNumber":
        return inverse(self)

    # numeric ------------------------------------------------------------

    def enclosure(self, bits: int) -> tuple[int, int]:
        """Integers ``lo <= hi`` with ``lo <= value * den * 2**bits <= hi``."""
        los, his = self.poly.power_bounds(bits)
        lo = hi = 0
        for c, pl, ph in zip(self.num, los, his):
            if c >= 0:
                lo += c * pl
                hi += c * ph
            else:
                lo += c * ph
                hi += c * pl
        return lo, hi

    def __float__(self) -> float:
        iv = evaluate(self, 64)
        return float((iv.lower + iv.upper) / 2)


def _reduce(k: Sequence[int], coeffs: Sequence[int]) -> list[int]:
    """Reduce an integer coefficient list (low degree first) mod g."""
    m = len(k)
    c = list(coeffs)
    if len(c) < m:
        return c + [0] * (m - len(c))
    for d in range(len(c) - 1, m - 1, -1):
        top = c[d]
        if top:
            c[d] = 0
            for i in range(1, m + 1):
                c[d - i] += k[i - 1] * top
    return c[:m]


def _same_field(a: AlgebraicNumber, b: AlgebraicNumber) -> None:
    if a.poly.k != b.poly.k:
        raise MixedFields(f"elements of different fields: {a.poly} vs {b.poly}")


def add(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    _same_field(a, b)
    return a + b


def sub(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    _same_field(a, b)
    return a - b


def mul(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    _same_field(a, b)
    return a * b


def inverse(a: AlgebraicNumber) -> AlgebraicNumber:
    """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero")
    poly = a.poly
    g = [Fraction(c) for c in reversed(poly.coefficients)]  # low degree first
    f = [Fraction(c) for c in a.num]
    # invariant: s * f_orig == r (mod g)
    r0, r1 = g, _trim(f)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        q, r = _divmod_low(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    # r1 is a nonzero constant
    c = r1[0]
    inv = [x / c for x in s1]
    den = math.lcm(*(x.denominator for x in inv))
    ints = [int(x * den) * a.den for x in inv]
    return AlgebraicNumber(poly, _reduce(poly.k, ints), den)


def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _divmod_low(a: list, b: list) -> tuple[list, list]:
    a = _trim(a)
    b = _trim(b)
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = r[i + len(b) - 1] / lead
        q[i] = f
        if f:
            for j, y in enumerate(b):
                r[i + j] -= f * y
    return _trim(q), _trim(r[: len(b) - 1] or [Fraction(0)])


# ---------------------------------------------------------------------------
# certified numerics

def evaluate(a: AlgebraicNumber, precision: int = 64) -> CertifiedInterval:
    """Interval enclosing the real value of ``a`` using a ``precision``-bit bracket of beta."""
    if a.is_zero():
        return CertifiedInterval(Fraction(0), Fraction(0), precision)
    lo, hi = a.enclosure(precision)
    scale = a.den << precision
    return CertifiedInterval(Fraction(lo, scale), Fraction(hi, scale), precision)


def enclose(a: AlgebraicNumber, abs_bits: int, cap: int = 1 << 16) -> CertifiedInterval:
    """Enclosure of width at most ``2**-abs_bits``, raising precision as needed."""
    bits = max(START_BITS, abs_bits + 8)
    while True:
        iv = evaluate(a, bits)
        if iv.width <= Fraction(1, 1 << abs_bits):
            return iv
        bits *= 2
        if bits > cap:
            raise PrecisionCapExceeded(f"could not reach 2^-{abs_bits} absolute accuracy")


def floor_of(a: AlgebraicNumber, cap: int = PRECISION_CAP) -> int:
    if a.is_integer():
        # the only case intervals cannot settle; non-integers separate eventually
        return a.num[0]
    bits = START_BITS
    scale_den = a.den
    while bits <= cap:
        lo, hi = a.enclosure(bits)
        s = scale_den << bits
        f_lo, f_hi = lo // s, hi // s
        if f_lo == f_hi:
            return f_lo
        bits *= 2
    raise PrecisionCapExceeded("floor undecided at precision cap")


def sign(a: AlgebraicNumber, cap: int = PRECISION_CAP) -> int:
    if a.is_zero():
        return 0
    bits = START_BITS
    while bits <= cap:
        lo, hi = a.enclosure(bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    raise PrecisionCapExceeded("sign undecided at precision cap")


def compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Exact ordering: ``LT`` (-1), ``EQ`` (0) or ``GT`` (1)."""
    _same_field(a, b)
    return sign(a - b)


def fractional_part(a: AlgebraicNumber) -> AlgebraicNumber:
    return a - floor_of(a)


def nearest_integer(a: AlgebraicNumber) -> int:
    """Closest integer; an exact half-integer is refused rather than guessed."""
    shifted = a + Fraction(1, 2)
    if shifted.is_integer():
        raise PrecisionCapExceeded(f"{a} is an exact half-integer")
    return floor_of(shifted)


def trace_of(a: AlgebraicNumber) -> Fraction:
    p = trace_powers(a.poly, a.poly.m - 1)
    return Fraction(sum(c * t for c, t in zip(a.num, p)), a.den)


# ---------------------------------------------------------------------------
# text / json

def format_element(a: AlgebraicNumber, var: str = "b") -> str:
    terms = []
    for i, c in enumerate(a.num):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        mag = abs(c)
        body = (str(mag) if (mag != 1 or i == 0) else "") + mono
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1] + "".join(f"{sg}{b}" for sg, b in terms[1:])
    if a.den != 1:
        s = f"({s})/{a.den}" if len(terms) > 1 or terms[0][0] == "-" else f"{s}/{a.den}"
    return s


def element_to_json(a: AlgebraicNumber) -> dict:
    return {"num": [str(c) for c in a.num], "den": str(a.den)}


def element_from_json(poly: PisotPolynomial, obj: dict) -> AlgebraicNumber:
    try:
        num = [int(c) for c in obj["num"]]
        den = int(obj.get("den", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad element JSON: {exc}") from None
    if len(num) != poly.m:
        raise ParseError(f"element needs {poly.m} numerator coefficients, got {len(num)}")
    return AlgebraicNumber(poly, num, den)


def parse_element(poly: PisotPolynomial, text: str) -> AlgebraicNumber:
    """Parse ``"1/2"``, ``"(1+9b-4b^2)/22"``, ``"b^-1"``-free expressions or element JSON.

    The symbol ``b`` (or ``beta``) stands for beta; powers above ``m-1`` are reduced.
    """
    try:
        return _parse_element(poly, text.strip())
    except ZeroDivisionError:
        raise ParseError(f"division by zero in {text!r}") from None


def _parse_element(poly: PisotPolynomial, text: str) -> AlgebraicNumber:
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad element JSON: {exc}") from None
        return element_from_json(poly, obj)
    body, den = text, Fraction(1)
    if body.startswith("(") and ")" in body:
        close = body.rindex(")")
        rest = body[close + 1 :].strip()
        body = body[1:close]
        if rest:
            if not rest.startswith("/"):
                raise ParseError(f"cannot parse {text!r}")
            try:
                den = Fraction(rest[1:].strip())
            except ValueError:
                raise ParseError(f"bad denominator in {text!r}") from None
    body = body.replace("beta", "b")
    terms = parse_terms(body, "b")
    deg = max(terms) if terms else 0
    coeffs = [terms.get(i, Fraction(0)) / den for i in range(deg + 1)]
    if len(coeffs) < poly.m:
        coeffs += [Fraction(0)] * (poly.m - len(coeffs))
    return AlgebraicNumber.from_coeffs(poly, coeffs)
