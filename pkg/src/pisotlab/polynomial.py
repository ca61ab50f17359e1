"""Pisot unit polynomials: parsing, certified roots and power sums.

A polynomial is stored through its recurrence coefficients ``k = (k1, ..., km)``
so that ``g(x) = x^m - k1 x^(m-1) - ... - km``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath

from .errors import (
    NotMonic,
    NotPisot,
    NotUnit,
    ParseError,
    PrecisionCapExceeded,
    Reducible,
)

START_BITS = 64
PRECISION_CAP = 8192


@dataclass(frozen=True)
class RootDisc:
    """Closed disc ``|z - center| <= radius`` holding exactly one root."""

    re: Fraction
    im: Fraction
    radius: Fraction

    @property
    def center(self) -> complex:
        return complex(float(self.re), float(self.im))

    def modulus_bounds(self) -> tuple[float, float]:
        c = abs(self.center)
        r = float(self.radius)
        return max(c - r, 0.0), c + r

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im), "radius": str(self.radius)}


@dataclass(frozen=True)
class PisotCertificate:
    roots: tuple[RootDisc, ...]
    dominant: int
    bits: int
    irreducible: bool = True

    @property
    def beta_disc(self) -> RootDisc:
        return self.roots[self.dominant]

    def to_json(self) -> dict:
        d = self.beta_disc
        return {
            "bits": self.bits,
            "beta_lower": str(d.re - d.radius),
            "beta_upper": str(d.re + d.radius),
            "beta_approx": mpmath.nstr(mpmath.mpf(d.re.numerator) / d.re.denominator, 15),
            "max_conjugate_modulus": f"{max(r.modulus_bounds()[1] for i, r in enumerate(self.roots) if i != self.dominant):.6g}",
            "irreducible": self.irreducible,
        }


@dataclass(frozen=True)
class PisotPolynomial:
    k: tuple[int, ...]
    certificate: PisotCertificate = field(compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def m(self) -> int:
        return len(self.k)

    @property
    def degree(self) -> int:
        return len(self.k)

    @property
    def coefficients(self) -> list[int]:
        """Integer coefficients of g, leading first."""
        return [1] + [-c for c in self.k]

    @property
    def root_data(self) -> tuple[RootDisc, ...]:
        return self.certificate.roots

    @property
    def beta_float(self) -> float:
        return float(self.certificate.beta_disc.re)

    def __str__(self) -> str:
        return format_polynomial(self.coefficients)

    def beta_bracket(self, bits: int) -> tuple[int, int]:
        """Integers ``L < U`` with ``L / 2**bits < beta < U / 2**bits``."""
        key = ("bracket", bits)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        coeffs = self.coefficients
        with mpmath.workprec(bits + 32):
            poly = lambda x: mpmath.polyval(coeffs, x)
            b0 = mpmath.mpf(self.certificate.beta_disc.re.numerator) / self.certificate.beta_disc.re.denominator
            b = mpmath.findroot(poly, b0)
            centre = int(mpmath.floor(b * mpmath.mpf(2) ** bits))
        slack = 1
        while True:
            lo, hi = centre - slack, centre + slack
            if _sign_at_dyadic(coeffs, lo, bits) < 0 < _sign_at_dyadic(coeffs, hi, bits):
                break
            slack *= 2
            if slack > 1 << 24:
                raise PrecisionCapExceeded("could not bracket the dominant root")
        self._cache[key] = (lo, hi)
        return lo, hi

    def power_bounds(self, bits: int) -> tuple[list[int], list[int]]:
        """Scaled integer bounds of ``beta**i``, ``0 <= i < m``, at ``2**bits``."""
        key = ("powers", bits)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        lo, hi = self.beta_bracket(bits)
        one = 1 << bits
        los, his = [one], [one]
        for _ in range(1, self.m):
            los.append((los[-1] * lo) >> bits)
            his.append(-((-his[-1] * hi) >> bits))
        self._cache[key] = (los, his)
        return los, his


def _sign_at_dyadic(coeffs: Sequence[int], num: int, bits: int) -> int:
    # sign of 2**(bits*n) * g(num / 2**bits)
    n = len(coeffs) - 1
    total = sum((c * num ** (n - i)) << (bits * i) for i, c in enumerate(coeffs))
    return (total > 0) - (total < 0)


# ---------------------------------------------------------------------------
# parsing

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+(?:/\d+)?)?\s*\*?\s*
        (?P<var>[a-zA-Z]\w*(?:\s*(?:\^|\*\*)\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_terms(text: str, variable: str) -> dict[int, Fraction]:
    """Parse a sum of monomials ``c*var^e`` into ``{e: c}``."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty expression")
    out: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse {text!r} near {s[pos:]!r}")
        sign, coef, var, exp = m.group("sign", "coef", "var", "exp")
        if sign is None and not first:
            raise ParseError(f"missing operator in {text!r}")
        if coef is None and var is None:
            raise ParseError(f"dangling sign in {text!r}")
        if var is not None:
            name = re.match(r"[a-zA-Z]\w*", var).group(0)
            if name != variable:
                raise ParseError(f"unknown symbol {name!r} (expected {variable!r})")
            e = int(exp) if exp is not None else 1
        else:
            e = 0
        c = Fraction(coef) if coef is not None else Fraction(1)
        if sign == "-":
            c = -c
        out[e] = out.get(e, Fraction(0)) + c
        pos = m.end()
        first = False
    return out


def coefficients_from_text(text: str) -> list[int]:
    """Integer coefficients (leading first) from either accepted text format."""
    text = text.strip()
    if text.startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON coefficient array: {exc}") from None
        if not isinstance(raw, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in raw):
            raise ParseError("coefficient array must contain integers only")
        coeffs = list(raw)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        return coeffs
    terms = parse_terms(text, "x")
    if any(c.denominator != 1 for c in terms.values()):
        raise ParseError("polynomial coefficients must be integers")
    deg = max((e for e, c in terms.items() if c != 0), default=0)
    return [int(terms.get(deg - i, 0)) for i in range(deg + 1)]


def format_polynomial(coeffs: Sequence[int], var: str = "x") -> str:
    n = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = n - i
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        mag = abs(c)
        body = (str(mag) if (mag != 1 or e == 0) else "") + mono
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f"{s}{b}" for s, b in parts[1:])


def parse_polynomial(text, precision_cap: int = PRECISION_CAP) -> PisotPolynomial:
    """Parse and certify a Pisot unit polynomial.

    ``text`` is ``"x^3-x^2-x-1"``, a JSON array ``"[1,-1,-1,-1]"`` or a list of
    integers, leading coefficient first.
    """
    coeffs = list(text) if isinstance(text, (list, tuple)) else coefficients_from_text(str(text))
    if len(coeffs) < 3:
        raise ParseError("degree must be at least 2")
    if coeffs[0] != 1:
        raise NotMonic(f"leading coefficient is {coeffs[0]}, expected 1")
    if abs(coeffs[-1]) != 1:
        raise NotUnit(f"constant term is {coeffs[-1]}; a unit needs +-1")
    k = tuple(-c for c in coeffs[1:])
    cert = verify_pisot(coeffs, precision_cap)
    return PisotPolynomial(k=k, certificate=cert)


def from_k(k: Sequence[int], precision_cap: int = PRECISION_CAP) -> PisotPolynomial:
    """Polynomial for ``beta^m = k1 beta^(m-1) + ... + km``."""
    return parse_polynomial([1] + [-c for c in k], precision_cap)


# ---------------------------------------------------------------------------
# exact polynomial helpers over Q (coefficients leading first)

def _strip(p: list) -> list:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = [Fraction(x) for x in _strip(list(a))]
    b = [Fraction(x) for x in _strip(list(b))]
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = a[:]
    for i in range(len(q)):
        f = r[i] / b[0]
        q[i] = f
        if f:
            for j, bj in enumerate(b):
                r[i + j] -= f * bj
    rem = _strip(r[len(q):]) if len(r) > len(q) else [Fraction(0)]
    return q, rem


def poly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    a = [Fraction(x) for x in _strip(list(a))]
    b = [Fraction(x) for x in _strip(list(b))]
    while any(b):
        _, r = poly_divmod(a, b)
        a, b = b, r
    return [c / a[0] for c in a]


def derivative(coeffs: Sequence[int]) -> list[int]:
    n = len(coeffs) - 1
    return [c * (n - i) for i, c in enumerate(coeffs[:-1])]


# ---------------------------------------------------------------------------
# certified roots

def _dyadic(x, bits: int) -> Fraction:
    return Fraction(int(mpmath.nint(x * mpmath.mpf(2) ** bits)), 1 << bits)


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _abs2(a) -> Fraction:
    return a[0] * a[0] + a[1] * a[1]


def _sqrt_upper(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    n = (q.numerator * scale * scale) // q.denominator
    return Fraction(math.isqrt(n) + 1, scale)


def inclusion_discs(coeffs: Sequence[int], centres: Sequence[tuple[Fraction, Fraction]], bits: int) -> list[RootDisc]:
    """Weierstrass inclusion discs ``|z - z_i| <= m |W_i|``.

    The union contains every root and a connected component made of ``j``
    discs holds exactly ``j`` roots, so pairwise disjoint discs isolate.
    """
    m = len(coeffs) - 1
    discs = []
    for i, z in enumerate(centres):
        val = (Fraction(0), Fraction(0))
        for c in coeffs:
            val = _cmul(val, z)
            val = (val[0] + c, val[1])
        num = _abs2(val)
        den = Fraction(1)
        for j, w in enumerate(centres):
            if j != i:
                den *= _abs2((z[0] - w[0], z[1] - w[1]))
        if den == 0:
            raise PrecisionCapExceeded("coincident root approximations")
        r = m * _sqrt_upper(num / den, 2 * bits)
        discs.append(RootDisc(z[0], z[1], r))
    return discs


def _disjoint(discs: Sequence[RootDisc]) -> bool:
    for a, b in combinations(discs, 2):
        d2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
        if d2 <= (a.radius + b.radius) ** 2:
            return False
    return True


def _outside(d: RootDisc) -> bool:
    return d.re * d.re + d.im * d.im > (1 + d.radius) ** 2


def _inside(d: RootDisc) -> bool:
    return d.radius < 1 and d.re * d.re + d.im * d.im < (1 - d.radius) ** 2


def _approximate_roots(coeffs: Sequence[int], bits: int) -> list:
    with mpmath.workprec(bits + 32):
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=100 + bits // 4, extraprec=bits)
        except mpmath.libmp.NoConvergence:
            return []
        return [mpmath.mpc(r) for r in roots]


def verify_pisot(coeffs: Sequence[int], precision_cap: int = PRECISION_CAP) -> PisotCertificate:
    """Certify that a monic integer polynomial defines a Pisot unit.

    Exact pre-checks rule out repeated roots and roots on the unit circle
    (which never separate from it numerically); then root discs are tightened
    by doubling the working precision until every disc is decided.
    """
    coeffs = [int(c) for c in coeffs]
    m = len(coeffs) - 1
    if m < 2:
        raise ParseError("degree must be at least 2")
    if coeffs[0] != 1:
        raise NotMonic(f"leading coefficient is {coeffs[0]}, expected 1")
    if coeffs[-1] == 0:
        raise Reducible("x divides the polynomial", factor=[1, 0])
    sq = poly_gcd(coeffs, derivative(coeffs))
    if len(sq) > 1:
        raise Reducible("polynomial has a repeated root", factor=[str(c) for c in sq])
    recip = list(reversed(coeffs))
    common = poly_gcd(coeffs, recip)
    if len(common) > 1:
        self_reciprocal = all(a == recip[0] * b for a, b in zip(recip, coeffs)) and abs(recip[0]) == 1
        if not self_reciprocal:
            raise Reducible("shares a self-reciprocal factor with its reciprocal", factor=[str(c) for c in common])
        if m > 2:
            raise NotPisot("self-reciprocal of degree > 2: conjugates come in pairs z, 1/z")

    bits = START_BITS
    while bits <= precision_cap:
        approx = _approximate_roots(coeffs, bits)
        if len(approx) == m:
            centres = []
            for z in approx:
                im = z.imag
                if abs(im) < mpmath.mpf(2) ** (-(bits // 2)):
                    im = 0
                centres.append((_dyadic(z.real, bits + 8), _dyadic(im, bits + 8)))
            discs = inclusion_discs(coeffs, centres, bits)
            if _disjoint(discs):
                verdict = _classify(discs)
                if verdict is not None:
                    dominant = verdict
                    _check_irreducible(coeffs, discs)
                    return PisotCertificate(tuple(discs), dominant, bits)
        bits *= 2
    raise PrecisionCapExceeded(f"roots not separated from the unit circle at {precision_cap} bits")


def _classify(discs: list[RootDisc]) -> int | None:
    outside = [i for i, d in enumerate(discs) if _outside(d)]
    undecided = [i for i, d in enumerate(discs) if not _outside(d) and not _inside(d)]
    if len(outside) >= 2:
        raise NotPisot("more than one root outside the unit disc", root=discs[outside[1]].to_json())
    if undecided:
        return None
    if not outside:
        raise NotPisot("no root outside the unit disc")
    d = discs[outside[0]]
    # the lone outside root is real (its conjugate would be a second one)
    if d.re < 0:
        raise NotPisot("dominant root is negative", root=d.to_json())
    if d.im != 0:
        # re-centre on the axis; the real root lies in the original disc
        d = RootDisc(d.re, Fraction(0), d.radius + abs(d.im))
        discs[outside[0]] = d
    if d.re - d.radius <= 1:
        return None
    return outside[0]


def _check_irreducible(coeffs: Sequence[int], discs: Sequence[RootDisc]) -> None:
    m = len(coeffs) - 1
    if m > 10:
        return
    centres = [mpmath.mpc(float(d.re), float(d.im)) for d in discs]
    for size in range(1, m // 2 + 1):
        for subset in combinations(range(m), size):
            prod = [mpmath.mpc(1)]
            for i in subset:
                nxt = prod + [mpmath.mpc(0)]
                for j in range(len(prod)):
                    nxt[j + 1] -= centres[i] * prod[j]
                prod = nxt
            if any(abs(c.imag) > 0.25 for c in prod):
                continue
            cand = [int(mpmath.nint(c.real)) for c in prod]
            if any(abs(c.real - r) > 0.25 for c, r in zip(prod, cand)):
                continue
            _, rem = poly_divmod(coeffs, cand)
            if not any(rem):
                raise Reducible(f"factor {format_polynomial(cand)}", factor=cand)


# ---------------------------------------------------------------------------
# power sums

def trace_powers(poly: PisotPolynomial | Sequence[int], n: int) -> list[int]:
    """Power sums ``p_j = Tr(beta**j)`` for ``0 <= j <= n`` (Newton's identities)."""
    k = poly.k if isinstance(poly, PisotPolynomial) else tuple(poly)
    if isinstance(poly, PisotPolynomial):
        cached = poly._cache.get("traces")
        if cached is not None and len(cached) > n:
            return cached[: n + 1]
    m = len(k)
    p = [m]
    for j in range(1, n + 1):
        if j <= m:
            s = sum(k[i - 1] * p[j - i] for i in range(1, j)) + j * k[j - 1]
        else:
            s = sum(k[i - 1] * p[j - i] for i in range(1, m + 1))
        p.append(s)
    if isinstance(poly, PisotPolynomial):
        poly._cache["traces"] = p
    return p
