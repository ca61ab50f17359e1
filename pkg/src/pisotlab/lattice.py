"""The dual lattice of Z[beta] under the trace form and the quotient group.

``P_beta = xi0 * Z[beta]`` with ``xi0 = 1 / g'(beta)``; the quotient
``P_beta / Z[beta]`` is presented through the Smith form of the matrix of
multiplication by ``g'(beta)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInconsistency, NotInPisotGroup
from .field import AlgebraicNumber, element_to_json, floor_of, trace_of
from .matrices import (
    Matrix,
    SmithDecomposition,
    determinant,
    matvec,
    rational_inverse,
    smith_normal_form,
)
from .polynomial import PisotPolynomial, trace_powers


def trace_matrix(poly: PisotPolynomial) -> Matrix:
    m = poly.m
    p = trace_powers(poly, 2 * m - 2)
    return [[p[i + j] for j in range(m)] for i in range(m)]


def discriminant(poly: PisotPolynomial) -> int:
    return determinant(trace_matrix(poly))


def derivative_at_beta(poly: PisotPolynomial) -> AlgebraicNumber:
    """``g'(beta)`` in the power basis (integer coefficients)."""
    m, k = poly.m, poly.k
    coeffs = [0] * m
    coeffs[m - 1] = m
    for i in range(1, m):
        coeffs[m - 1 - i] = -(m - i) * k[i - 1]
    return AlgebraicNumber(poly, coeffs)


def xi0(poly: PisotPolynomial) -> AlgebraicNumber:
    hit = poly._cache.get("xi0")
    if hit is None:
        hit = derivative_at_beta(poly).inverse()
        poly._cache["xi0"] = hit
    return hit


def multiplication_matrix(a: AlgebraicNumber) -> list[list[Fraction]]:
    """Columns are the power-basis coordinates of ``a * beta**j``."""
    cols = []
    x = a
    for _ in range(a.poly.m):
        cols.append(x.coeffs())
        x = x.mul_beta()
    return [list(r) for r in zip(*cols)]


def is_in_zbeta(a: AlgebraicNumber) -> bool:
    return a.den == 1


def is_in_pbeta(a: AlgebraicNumber) -> bool:
    """Trace test: ``Tr(a * beta**j)`` integral for ``0 <= j < m``."""
    x = a
    for _ in range(a.poly.m):
        if trace_of(x).denominator != 1:
            return False
        x = x.mul_beta()
    return True


def coset_equal(a: AlgebraicNumber, b: AlgebraicNumber) -> bool:
    for x in (a, b):
        if not is_in_pbeta(x):
            raise NotInPisotGroup(f"{x} is not in P_beta")
    return is_in_zbeta(a - b)


@dataclass(frozen=True)
class PisotGroupStructure:
    poly: PisotPolynomial
    D: int
    invariant_factors: tuple[int, ...]
    d: int
    is_cyclic: bool
    xi0: AlgebraicNumber
    M_beta: Matrix
    snf: SmithDecomposition
    U_inv: Matrix
    dual_entries_coprime: bool
    lemma_pattern: str

    @property
    def order(self) -> int:
        return abs(self.D)

    @property
    def nontrivial_factors(self) -> tuple[int, ...]:
        return tuple(s for s in self.invariant_factors if s > 1)

    def describe(self) -> str:
        f = self.nontrivial_factors
        if not f:
            return "trivial"
        return " x ".join(f"Z/{s}" for s in reversed(f))

    def coordinates(self, a: AlgebraicNumber) -> tuple[int, ...]:
        """Coordinates of the class of ``a`` in ``prod Z/s_i``."""
        y = (a * derivative_at_beta(a.poly))
        if y.den != 1:
            raise NotInPisotGroup(f"{a} is not in P_beta")
        u = matvec(self.snf.U, y.num)
        return tuple(c % s for c, s in zip(u, self.invariant_factors))

    def element(self, coords) -> AlgebraicNumber:
        """Canonical representative in ``[0, 1)`` of the class with these coordinates."""
        y = matvec(self.U_inv, [int(c) for c in coords])
        x = self.xi0 * AlgebraicNumber(self.poly, y)
        return x - floor_of(x)

    def canonical(self, a: AlgebraicNumber) -> AlgebraicNumber:
        return self.element(self.coordinates(a))

    def order_of(self, coords) -> int:
        o = 1
        for c, s in zip(coords, self.invariant_factors):
            o = math.lcm(o, s // math.gcd(s, c))
        return o

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "invariant_factors": list(self.invariant_factors),
            "d": self.d,
            "cyclic": self.is_cyclic,
            "xi0": element_to_json(self.xi0),
            "M_beta": self.M_beta,
        }


def lemma_exponent(M: Matrix) -> int:
    """``min{l >= 1 : l * M^-1 integral}``."""
    inv = rational_inverse(M)
    return math.lcm(*(x.denominator for row in inv for x in row))


def group_structure(poly: PisotPolynomial) -> PisotGroupStructure:
    hit = poly._cache.get("group")
    if hit is not None:
        return hit
    M = trace_matrix(poly)
    D = determinant(M)
    G = [[int(x) for x in row] for row in multiplication_matrix(derivative_at_beta(poly))]
    snf = smith_normal_form(G)
    factors = tuple(snf.invariant_factors)
    snf_m = smith_normal_form(M).invariant_factors
    if list(factors) != snf_m:
        raise InternalInconsistency(f"Smith forms disagree: {factors} vs {snf_m}")
    if math.prod(factors) != abs(D):
        raise InternalInconsistency(f"group order {math.prod(factors)} != |D| = {abs(D)}")
    d = lemma_exponent(M)
    if d != factors[-1]:
        raise InternalInconsistency(f"exponent {d} != largest invariant factor {factors[-1]}")
    cyclic = sum(1 for s in factors if s > 1) <= 1
    inv = rational_inverse(M)
    coprime = math.gcd(*(int(x * D) for row in inv for x in row)) == 1
    if coprime and not cyclic:
        raise InternalInconsistency("coprime D*M^-1 entries but non-cyclic group")
    nontrivial = sorted(s for s in factors if s > 1)
    if d == abs(D):
        pattern = "cyclic (d = |D|)"
        ok = cyclic
    elif _is_prime(abs(D) // d):
        pattern = f"Z/{d} x Z/{abs(D) // d}"
        ok = nontrivial == sorted([d, abs(D) // d])
    else:
        pattern = f"contains Z/{d}"
        ok = True
    if not ok:
        raise InternalInconsistency(f"exponent pattern {pattern} disagrees with factors {factors}")
    U_inv = [[int(x) for x in row] for row in rational_inverse(snf.U)]
    result = PisotGroupStructure(
        poly=poly,
        D=D,
        invariant_factors=factors,
        d=d,
        is_cyclic=cyclic,
        xi0=xi0(poly),
        M_beta=M,
        snf=snf,
        U_inv=U_inv,
        dual_entries_coprime=coprime,
        lemma_pattern=pattern,
    )
    poly._cache["group"] = result
    return result


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def coset_representatives(poly: PisotPolynomial) -> list[AlgebraicNumber]:
    """One representative in ``[0, 1)`` per class, ordered by SNF coordinates."""
    gs = group_structure(poly)
    return [gs.element(c) for c in itertools.product(*(range(s) for s in gs.invariant_factors))]
