"""Acceptance criteria 1-11.

Run under pytest (one PASS/FAIL line per criterion in the terminal summary)
or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import random
import sys
import time
import traceback
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from pisotlab.coding import (  # noqa: E402
    endomorphism_A,
    tolerance,
    verify_factorization,
    verify_kernel,
    verify_semiconjugacy,
    CodingMapSpec,
)
from pisotlab.errors import InputRefused  # noqa: E402
from pisotlab.field import AlgebraicNumber, compare  # noqa: E402
from pisotlab.finitary import PROVEN_FINITARY, PROVEN_NOT_FINITARY, finitary_classify, search_witness  # noqa: E402
from pisotlab.lattice import derivative_at_beta, discriminant, group_structure, is_in_pbeta, xi0  # noqa: E402
from pisotlab.matrices import determinant  # noqa: E402
from pisotlab.numeration import evaluate_expansion, expand_positive, expansion_admissible, greedy_expand, rotate  # noqa: E402
from pisotlab.polynomial import from_k, parse_polynomial  # noqa: E402
from pisotlab.symbolic import PeriodicWord, class_add, enumerate_group  # noqa: E402

PRECISION = 128
TOL = Fraction(1, 2**64)
assert tolerance(PRECISION) == TOL

TEST_POLYS = ["x^2-x-1", "x^2-2x-1", "x^3-x^2-x-1", "x^3-x-1"]


def quadratic_family():
    for k in range(1, 13):
        for s in (1, -1):
            if s == -1 and k < 3:
                continue
            yield k, s, parse_polynomial([1, -k, -s])


# ---------------------------------------------------------------------------

def criterion_1():
    cases = {
        "x^2-x-1": (5, [[2, 1], [1, 3]]),
        "x^3-x^2-x-1": (-44, [[3, 1, 3], [1, 3, 7], [3, 7, 11]]),
        "x^3-x-1": (-23, [[3, 0, 2], [0, 2, 3], [2, 3, 2]]),
    }
    for text, (D, M) in cases.items():
        gs = group_structure(parse_polynomial(text))
        assert gs.D == D, (text, gs.D)
        assert gs.M_beta == M, (text, gs.M_beta)
        assert oracles.discriminant(parse_polynomial(text).k) == D
    for k, s, p in quadratic_family():
        assert group_structure(p).M_beta == [[2, k], [k, k * k + 2 * s]]
    return "D = 5, -44, -23 and M_beta match the printed matrices"


def criterion_2():
    assert group_structure(parse_polynomial("x^3-x-1")).nontrivial_factors == (23,)
    assert group_structure(parse_polynomial("x^3-x^2-x-1")).nontrivial_factors == (2, 22)
    n = 0
    for k, s, p in quadratic_family():
        gs = group_structure(p)
        D = abs(gs.D)
        assert D == k * k + 4 * s
        want = (D,) if k % 2 else (2, D // 2)
        assert gs.nontrivial_factors == want, (k, s, gs.invariant_factors)
        assert gs.invariant_factors == oracles.invariants(p.k)
        n += 1
    return f"Z/23, Z/22 x Z/2 and {n} quadratics k <= 12 as predicted"


def criterion_3():
    polys = [parse_polynomial(t) for t in TEST_POLYS + ["x^4-x^3-1", "x^2-3x+1", "x^3-3x^2+2x-1"]]
    for p in polys:
        assert xi0(p) * derivative_at_beta(p) == 1
        assert list(xi0(p).coeffs()) == oracles.dual_basis_last_row(p.k)
    trib = parse_polynomial("x^3-x^2-x-1")
    assert xi0(trib) == AlgebraicNumber(trib, (1, 9, -4), 22)
    return f"xi0 * g'(beta) = 1 on {len(polys)} polynomials; tribonacci xi0 = (1+9b-4b^2)/22"


def criterion_4():
    G = enumerate_group(parse_polynomial("x^2-x-1"))
    assert sorted(c.canonical_tail.padded(4) for c in G) == sorted(["0000", "1000", "0100", "0010", "0001"])
    assert all(len(c.tails) == 1 for c in G)
    G = enumerate_group(parse_polynomial("x^2-2x-1"))
    assert sorted(c.canonical_tail.padded(4) for c in G) == sorted(
        ["0000", "1010", "0101", "2000", "0200", "0020", "0002", "1111"]
    )
    G = enumerate_group(parse_polynomial("x^3-x^2-x-1"))
    assert len(G) == 44
    assert Counter(c.canonical_tail.period for c in G) == {10: 40, 2: 2, 3: 1, 1: 1}
    printed = ["1000110000", "1010000110", "1001011000", "1001101100"]
    period10 = {c.canonical_tail.word for c in G if c.canonical_tail.period == 10}
    assert period10 == {rotate(tuple(map(int, s)), r) for s in printed for r in range(10)}
    assert {c.canonical_tail.word for c in G if c.canonical_tail.period == 2} == {(0, 1), (1, 0)}
    (three,) = [c for c in G if c.canonical_tail.period == 3]
    assert {w.word for w in three.tails} == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    return "golden 5, silver 8, tribonacci 44 = 40 + 2 + 1 + zero"


def criterion_5():
    p = parse_polynomial("x^3-x-1")
    G = enumerate_group(p, 2)
    nonzero = [c for c in G if not c.is_zero]
    assert len(nonzero) == 22
    pinned = tuple(map(int, "0000010000100000000100"))
    assert {c.canonical_tail.word for c in nonzero} == {rotate(pinned, r) for r in range(22)}
    # float oracle: 300 greedy digits of xi0, period 22
    x = xi0(p)
    digits = oracles.greedy_digits(p.k, oracles.value(p.k, x.num, x.den), 300)
    assert all(digits[i] == digits[i + 22] for i in range(278))
    assert not all(digits[i] == digits[i + 23] for i in range(277))
    printed = tuple(map(int, "10000100000000100000000"))
    assert len(printed) == 23 and not is_in_pbeta(PeriodicWord(printed).value(p))
    fixed = tuple(map(int, "1000010000000010000000"))
    assert fixed in {rotate(pinned, r) for r in range(22)}
    return "22 shifts of one period-22 word; the printed 23-symbol word fails the trace test (one zero too many)"


def criterion_6():
    for k, s, p in quadratic_family():
        A = endomorphism_A(p)
        assert A == [[k, 2 * s], [2, -k]]
        assert determinant(A) == -discriminant(p)
    trib = parse_polynomial("x^3-x^2-x-1")
    assert endomorphism_A(trib) == [[3, 4, 1], [1, 2, 3], [3, -2, -1]]
    assert determinant(endomorphism_A(trib)) == 44
    rng = random.Random(2024)
    seen = set()
    while len(seen) < 20:
        m = rng.randint(2, 5)
        if rng.random() < 0.5:
            k = tuple(sorted((rng.randint(1, 4) for _ in range(m - 1)), reverse=True)) + (1,)
        else:
            m = 3
            a = rng.randint(0, 4)
            k = (a, rng.randint(-1, a + 1), 1)
        if k in seen:
            continue
        try:
            p = from_k(k)
        except InputRefused:
            continue
        assert finitary_classify(p).verdict == PROVEN_FINITARY, k
        seen.add(k)
        assert abs(determinant(endomorphism_A(p))) == abs(oracles.discriminant(k)), k
    return "quadratic and tribonacci A exact; |det A| = |D| on 20 random finitary units"


def criterion_7():
    out = []
    for text in TEST_POLYS:
        p = parse_polynomial(text)
        G = enumerate_group(p, 2)
        rep = verify_kernel(p, G.classes, PRECISION, converse_samples=25)
        assert rep.in_kernel == abs(discriminant(p)) == len(G)
        assert rep.max_error < TOL
        for c in G:
            for w in c.tails:
                v = w.value(p)
                assert is_in_pbeta(v) and oracles.in_dual(p.k, v.num, v.den)
        out.append(f"{rep.in_kernel}")
    return "kernel sizes " + "/".join(out) + " = |D|, all within 2^-64"


def criterion_8():
    worst = Fraction(0)
    for text in TEST_POLYS + ["x^2-3x+1"]:
        p = parse_polynomial(text)
        for spec in (CodingMapSpec.phi0(p), CodingMapSpec.phi(p)):
            r = verify_semiconjugacy(p, spec, samples=100, precision=PRECISION)
            assert r.samples >= 100 and r.max_error < TOL
            worst = max(worst, r.max_error)
        r = verify_factorization(p, samples=100, precision=PRECISION)
        assert r.samples >= 100 and r.max_error < TOL
        worst = max(worst, r.max_error)
    return f"max torus error {float(worst):.2e} < 2^-64 over 100 samples per map and polynomial"


def criterion_9():
    rng = random.Random(9)
    for text in ["x^2-x-1", "x^3-x^2-x-1", "x^3-x-1", "x^2-3x+1"]:
        p = parse_polynomial(text)
        zero = AlgebraicNumber.zero(p)
        for i in range(1000):
            x = AlgebraicNumber(p, [rng.randint(-30, 30) for _ in range(p.m)])
            if i % 2:
                x = x * xi0(p)
            if compare(x, zero) < 0:
                x = -x
            e = expand_positive(x)
            assert evaluate_expansion(e) == x, (text, x)
            assert expansion_admissible(e), (text, x)
    golden = parse_polynomial("x^2-x-1")
    for k in range(1, 31):
        e = expand_positive(AlgebraicNumber.from_int(golden, oracles.fibonacci(k)))
        assert e.is_finite
        exponents = [-pos for pos in range(1 - len(e.int_digits), len(e.frac_pre) + 1) if e.digit(pos)]
        assert sorted(exponents) == sorted(oracles.fibonacci_exponents(k)), k
    quartic = parse_polynomial("x^4-x^3-1")
    b = AlgebraicNumber.beta(quartic)
    e = greedy_expand(b**-2 + b**-3)
    assert [e.digit(i) for i in range(1, 21)] == [1, 0, 0, 0, 0] * 4
    return "4000 round trips exact and admissible; F_1..F_30 closed forms; x^4 example 4 periods"


def criterion_10():
    for text in ["x^3-x^2-x-1", "x^3-x-1"]:
        assert finitary_classify(parse_polynomial(text)).verdict == PROVEN_FINITARY
    for text in ["x^3-3x^2+2x-1", "x^2-3x+1", "x^2-4x+1", "x^2-5x+1"]:
        rep = finitary_classify(parse_polynomial(text))
        assert rep.verdict == PROVEN_NOT_FINITARY and rep.witness is not None
        assert not rep.witness_expansion.is_finite
        assert evaluate_expansion(rep.witness_expansion) == rep.witness
    family = 0
    for m in (2, 3, 4):
        for k in itertools.product(range(1, 4), repeat=m - 1):
            if list(k) != sorted(k, reverse=True):
                continue
            p = from_k(k + (1,))
            assert finitary_classify(p).verdict == PROVEN_FINITARY
            assert search_witness(p, 2)[0] is None, k
            family += 1
    return f"verdicts and witnesses as expected; {family} descending units (k_m = 1) finitary, search confirms"


def criterion_11():
    candidates = ["x^2-x-1", "x^2-2x-1", "x^2-3x-1", "x^2-4x-1", "x^2-5x-1", "x^2-6x-1",
                  "x^3-x-1", "x^3-x^2-1", "x^3-x^2-x-1", "x^3-2x^2-1", "x^3-2x^2-x-1"]
    checks = 0
    used = []
    for text in candidates:
        p = parse_polynomial(text)
        if abs(discriminant(p)) > 50:
            continue
        G = enumerate_group(p, 1)
        for a, b in itertools.product(G.classes, G.classes):
            s = class_add(G, a, b)
            assert s.coords == G.class_of(a.rep + b.rep).coords
            assert (a.rep + b.rep - s.rep).den == 1
            checks += 1
        used.append(f"{abs(discriminant(p))}")
    return f"{checks} exact sums over |D| in {{{', '.join(used)}}}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def run_criterion(fn):
    n = fn.__name__.split("_")[1]
    t0 = time.time()
    try:
        detail = fn()
    except Exception as exc:
        return False, f"criterion {n:>2}: FAIL  {type(exc).__name__}: {exc}", traceback.format_exc()
    return True, f"criterion {n:>2}: PASS  {detail} ({time.time() - t0:.1f}s)", ""


@pytest.mark.parametrize("fn", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(fn):
    from conftest import ACCEPTANCE_LINES

    ok, line, tb = run_criterion(fn)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, tb


if __name__ == "__main__":
    failed = 0
    for fn in CRITERIA:
        ok, line, tb = run_criterion(fn)
        print(line, flush=True)
        if not ok:
            failed += 1
            print(tb, file=sys.stderr)
    sys.exit(1 if failed else 0)
