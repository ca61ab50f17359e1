from fractions import Fraction

import mpmath
import pytest

import oracles
from pisotlab.errors import NotMonic, NotPisot, NotUnit, ParseError, Reducible
from pisotlab.polynomial import (
    PRECISION_CAP,
    coefficients_from_text,
    format_polynomial,
    from_k,
    parse_polynomial,
    poly_gcd,
    trace_powers,
)


@pytest.mark.parametrize(
    "text, k",
    [
        ("x^2-x-1", (1, 1)),
        ("x^3-x^2-x-1", (1, 1, 1)),
        ("x^3 - x - 1", (0, 1, 1)),
        ("[1, -1, -1, -1]", (1, 1, 1)),
        ("x^4-x^3-1", (1, 0, 0, 1)),
        ("x^2-3x+1", (3, -1)),
        ("x^3-3x^2+2x-1", (3, -2, 1)),
    ],
)
def test_accepts_pisot_units(text, k):
    p = parse_polynomial(text)
    assert p.k == k
    b = oracles.beta(k)
    lo, hi = p.beta_bracket(200)
    assert Fraction(lo, 1 << 200) <= Fraction(str(mpmath.nstr(b, 80))) <= Fraction(hi, 1 << 200)


def test_list_input_is_leading_first():
    assert parse_polynomial([1, -1, -1]).k == (1, 1)
    assert from_k((1, 1)) == parse_polynomial("x^2-x-1")


@pytest.mark.parametrize(
    "text, exc",
    [
        ("x^2-4", NotUnit),
        ("x^2-2", NotUnit),
        ("2x^2-x-1", NotMonic),
        ("x^2+x-1", NotPisot),
        ("x^4-x^3-x^2-x+1", NotPisot),
        ("x^3-x^2-x+1", Reducible),
        ("x^2-2x+1", Reducible),
        ("x^2 + y", ParseError),
        ("", ParseError),
        ("x", ParseError),
    ],
)
def test_rejections(text, exc):
    with pytest.raises(exc):
        parse_polynomial(text)


def test_salem_is_not_pisot():
    # Lehmer's polynomial: one root on the unit circle pair structure
    with pytest.raises(NotPisot):
        parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")


def test_certificate_discs_separate_beta():
    p = parse_polynomial("x^3-x^2-x-1")
    cert = p.certificate
    assert len(cert.roots) == 3
    others = [r for i, r in enumerate(cert.roots) if i != cert.dominant]
    assert all(r.modulus_bounds()[1] < 1 for r in others)
    assert cert.beta_disc.re - cert.beta_disc.radius > 1
    assert cert.bits <= PRECISION_CAP


@pytest.mark.parametrize("k", [(1, 1), (1, 1, 1), (0, 1, 1), (2, 1), (1, 0, 0, 1), (3, 2, 1)])
def test_power_sums_match_oracle(k):
    p = from_k(k)
    assert trace_powers(p, 12) == [oracles.power_sum(k, n) for n in range(13)]


def test_tribonacci_power_sums():
    p = parse_polynomial("x^3-x^2-x-1")
    assert trace_powers(p, 6) == [3, 1, 3, 7, 11, 21, 39]


def test_format_round_trip():
    for text in ["x^3-x^2-x-1", "x^2-3x+1", "x^4-x^3-1"]:
        c = coefficients_from_text(text)
        assert coefficients_from_text(format_polynomial(c)) == c


def test_gcd_detects_common_root():
    assert len(poly_gcd([1, 0, -1], [1, -1])) == 2
