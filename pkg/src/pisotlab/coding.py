"""Arithmetic coding of the beta-compactum onto the torus R^m / Z^m.

``T`` is the companion matrix; ``t = (1, b^-1, ..., b^-m+1)`` spans its
unstable line and ``t0 = xi0 * t``.  Because ``T^-k t = b^-k t`` the coding
of a sequence reduces to one number ``u = sum eps_k b^-k`` of Q(beta):

    phi_xi(eps) = (u xi, u xi b^-1, ..., u xi b^-m+1)  mod Z^m.

For a purely periodic two-sided sequence with aligned value ``alpha`` the
left-infinite sum converges on the torus, and its coordinates are exactly
``frac(Tr(xi alpha b^-j))``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DeterminantMismatch,
    FactorizationViolation,
    KernelViolation,
    NotAdmissible,
    SemiconjugacyViolation,
)
from .field import AlgebraicNumber, CertifiedInterval, enclose, trace_of
from .lattice import derivative_at_beta, discriminant, is_in_pbeta, xi0
from .matrices import Matrix, determinant, identity, matadd, matmul, scale
from .numeration import is_admissible, is_admissible_periodic, parry_sequence, periodic_value
from .polynomial import PisotPolynomial

DEFAULT_PRECISION = 128


def companion_matrix(poly: PisotPolynomial) -> Matrix:
    m = poly.m
    M = [[0] * m for _ in range(m)]
    M[0] = list(poly.k)
    for i in range(1, m):
        M[i][i - 1] = 1
    return M


def endomorphism_A(poly: PisotPolynomial) -> Matrix:
    """``A = sum a_k T^k`` for ``g'(beta) = sum a_k beta^k``; ``|det A| = |D|`` is checked."""
    M = companion_matrix(poly)
    a = derivative_at_beta(poly).num
    A = [[0] * poly.m for _ in range(poly.m)]
    power = identity(poly.m)
    for c in a:
        A = matadd(A, scale(power, c))
        power = matmul(power, M)
    det = determinant(A)
    D = discriminant(poly)
    if abs(det) != abs(D):
        raise DeterminantMismatch(f"det A = {det}, D = {D}", witness={"A": A, "detA": det, "D": D})
    return A


@dataclass(frozen=True)
class CodingMapSpec:
    """Scaling of the homoclinic point: ``xi0`` gives phi0, ``1`` gives phi."""

    poly: PisotPolynomial
    xi: AlgebraicNumber

    @classmethod
    def phi(cls, poly: PisotPolynomial) -> "CodingMapSpec":
        return cls(poly, AlgebraicNumber.one(poly))

    @classmethod
    def phi0(cls, poly: PisotPolynomial) -> "CodingMapSpec":
        return cls(poly, xi0(poly))

    def __post_init__(self):
        if not is_in_pbeta(self.xi):
            raise ValueError("homoclinic scaling must lie in P_beta")


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple[CertifiedInterval, ...]
    precision: int

    @classmethod
    def exact(cls, values: Sequence[Fraction], precision: int) -> "TorusPoint":
        return cls(tuple(CertifiedInterval(v, v, precision) for v in (_frac(Fraction(x)) for x in values)), precision)

    @property
    def midpoints(self) -> tuple[Fraction, ...]:
        return tuple((c.lower + c.upper) / 2 for c in self.coords)

    def to_json(self) -> list:
        return [[str(c.lower), str(c.upper)] for c in self.coords]


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _reduce(lo: Fraction, hi: Fraction, precision: int) -> CertifiedInterval:
    n = math.floor((lo + hi) / 2)
    return CertifiedInterval(lo - n, hi - n, precision)


def torus_distance(p: TorusPoint, q: TorusPoint) -> Fraction:
    """Upper bound on the sup-norm distance on R^m / Z^m."""
    worst = Fraction(0)
    for a, b in zip(p.coords, q.coords):
        diff = (a.lower + a.upper - b.lower - b.upper) / 2
        diff -= round(diff)
        worst = max(worst, abs(diff) + (a.width + b.width) / 2)
    return worst


def origin(poly: PisotPolynomial, precision: int = DEFAULT_PRECISION) -> TorusPoint:
    return TorusPoint.exact([0] * poly.m, precision)


def word_value(poly: PisotPolynomial, digits: Sequence[int], start: int = 1) -> AlgebraicNumber:
    """``sum digits[i] * b^-(start + i)``: a finite word whose first digit sits at position ``start``."""
    x = AlgebraicNumber.zero(poly)
    for d in digits:
        x = x.mul_beta() + d
    return x * AlgebraicNumber.beta_power(poly, -(start + len(digits) - 1))


def project(spec: CodingMapSpec, u: AlgebraicNumber, precision: int = DEFAULT_PRECISION) -> TorusPoint:
    """Torus point ``(u xi b^-j)_j mod 1`` with certified coordinates."""
    x = u * spec.xi
    coords = []
    for _ in range(spec.poly.m):
        iv = enclose(x, precision)
        coords.append(_reduce(iv.lower, iv.upper, precision))
        x = x.div_beta()
    return TorusPoint(tuple(coords), precision)


def phi_finite(spec: CodingMapSpec, digits: Sequence[int], start: int = 1, precision: int = DEFAULT_PRECISION) -> TorusPoint:
    """Coding of the sequence that is ``digits`` from position ``start`` on and zero elsewhere."""
    if not is_admissible(spec.poly, list(digits)):
        raise NotAdmissible(f"word {list(digits)} is not admissible")
    return project(spec, word_value(spec.poly, digits, start), precision)


def periodic_coordinates(spec: CodingMapSpec, word: Sequence[int]) -> tuple[Fraction, ...]:
    """Exact torus coordinates of the two-sided periodic sequence with aligned word ``word``."""
    x = periodic_value(spec.poly, word) * spec.xi
    out = []
    for _ in range(spec.poly.m):
        out.append(_frac(trace_of(x)))
        x = x.div_beta()
    return tuple(out)


def truncation_depth(poly: PisotPolynomial, period: int, precision: int) -> int:
    """Multiple of ``period`` past which the dropped left tail is below ``2**-precision``."""
    cert = poly.certificate
    r = max(disc.modulus_bounds()[1] for i, disc in enumerate(cert.roots) if i != cert.dominant)
    n = math.ceil((precision + 16 + 4 * poly.m) / -math.log2(r))
    return period * max(1, -(-n // period))


def phi_periodic(spec: CodingMapSpec, word: Sequence[int], precision: int = DEFAULT_PRECISION, numeric: bool = False) -> TorusPoint:
    """Coding of a purely periodic sequence.

    Exact by default; ``numeric=True`` sums the truncation at depth ``N`` instead,
    which agrees with the exact point up to the conjugate contributions.
    """
    if not is_admissible_periodic(spec.poly, list(word)):
        raise NotAdmissible(f"periodic word {list(word)} is not admissible")
    if not numeric:
        return TorusPoint.exact(periodic_coordinates(spec, word), precision)
    N = truncation_depth(spec.poly, len(word), precision)
    V = periodic_value(spec.poly, word) * AlgebraicNumber.beta_power(spec.poly, N)
    return project(spec, V, precision)


def apply_matrix(M: Matrix, p: TorusPoint) -> TorusPoint:
    coords = []
    for row in M:
        lo = hi = Fraction(0)
        for c, iv in zip(row, p.coords):
            a, b = c * iv.lower, c * iv.upper
            lo += min(a, b)
            hi += max(a, b)
        coords.append(_reduce(lo, hi, p.precision))
    return TorusPoint(tuple(coords), p.precision)


def random_admissible_word(poly: PisotPolynomial, length: int, rng: random.Random) -> list[int]:
    """Uniform choice among admissible continuations at each step (0 is always allowed)."""
    top = parry_sequence(poly).top_digit
    word: list[int] = []
    for _ in range(length):
        choices = [d for d in range(top + 1) if is_admissible(poly, word + [d])]
        word.append(rng.choice(choices))
    return word


def tolerance(precision: int) -> Fraction:
    return Fraction(1, 1 << (precision // 2))


def _samples(poly: PisotPolynomial, count: int, length: int, seed: int) -> list[list[int]]:
    rng = random.Random(seed)
    out = [[0] * length, [1] + [0] * (length - 1)]
    while len(out) < count:
        out.append(random_admissible_word(poly, length, rng))
    return out[:count]


@dataclass(frozen=True)
class KernelReport:
    classes: int
    tails: int
    in_kernel: int
    max_error: Fraction
    converse_checked: int
    converse_min_distance: Fraction | None


def verify_kernel(poly: PisotPolynomial, classes, precision: int = DEFAULT_PRECISION, converse_samples: int = 50, seed: int = 0) -> KernelReport:
    """Every tail of every class codes to the origin under phi (exact and numeric)."""
    spec = CodingMapSpec.phi(poly)
    tol = tolerance(precision)
    zero = origin(poly, precision)
    tails = 0
    worst = Fraction(0)
    for c in classes:
        for w in c.tails:
            tails += 1
            alpha = w.value(poly)
            if not is_in_pbeta(alpha):
                raise KernelViolation(f"tail {w} has value outside P_beta", witness={"word": list(w.word)})
            if any(periodic_coordinates(spec, w.word)):
                raise KernelViolation(f"tail {w} does not code to the origin", witness={"word": list(w.word)})
            err = torus_distance(phi_periodic(spec, w.word, precision, numeric=True), zero)
            worst = max(worst, err)
            if err >= tol:
                raise KernelViolation(f"tail {w}: numeric coding is {float(err):.3g} from the origin", witness={"word": list(w.word)})
    rng = random.Random(seed)
    top = parry_sequence(poly).top_digit
    checked = 0
    nearest = None
    for _ in range(converse_samples * 20):
        if checked >= converse_samples:
            break
        w = [rng.randint(0, top) for _ in range(rng.randint(1, 8))]
        if not any(w) or not is_admissible_periodic(poly, w) or is_in_pbeta(periodic_value(poly, w)):
            continue
        checked += 1
        dist = torus_distance(phi_periodic(spec, w, precision), zero)
        nearest = dist if nearest is None else min(nearest, dist)
        if dist < tol:
            raise KernelViolation(f"periodic word {w} outside P_beta codes to the origin", witness={"word": w})
    return KernelReport(len(classes), tails, len(classes), worst, checked, nearest)


@dataclass(frozen=True)
class SampleReport:
    samples: int
    max_error: Fraction
    collisions: int = 0


def verify_semiconjugacy(poly: PisotPolynomial, spec: CodingMapSpec | None = None, samples: int = 100, precision: int = DEFAULT_PRECISION, length: int = 30, seed: int = 0) -> SampleReport:
    """``phi(shift eps) == T phi(eps)`` on random finite admissible words."""
    spec = spec or CodingMapSpec.phi0(poly)
    T = companion_matrix(poly)
    tol = tolerance(precision)
    worst = Fraction(0)
    images = []
    for w in _samples(poly, samples, length, seed):
        p = phi_finite(spec, w, 1, precision)
        shifted = phi_finite(spec, w, 0, precision)
        err = torus_distance(shifted, apply_matrix(T, p))
        worst = max(worst, err)
        if err >= tol:
            raise SemiconjugacyViolation(f"error {float(err):.3g} on word {w}", witness={"word": w})
        images.append((tuple(w), p))
    collisions = sum(
        1
        for i in range(len(images))
        for j in range(i)
        if images[i][0] != images[j][0] and torus_distance(images[i][1], images[j][1]) < tol
    )
    return SampleReport(len(images), worst, collisions)


def verify_factorization(poly: PisotPolynomial, samples: int = 100, precision: int = DEFAULT_PRECISION, length: int = 30, seed: int = 1) -> SampleReport:
    """``phi(eps) == A phi0(eps)`` on random finite admissible words."""
    A = endomorphism_A(poly)
    f, f0 = CodingMapSpec.phi(poly), CodingMapSpec.phi0(poly)
    tol = tolerance(precision)
    worst = Fraction(0)
    words = _samples(poly, samples, length, seed)
    for w in words:
        err = torus_distance(phi_finite(f, w, 1, precision), apply_matrix(A, phi_finite(f0, w, 1, precision)))
        worst = max(worst, err)
        if err >= tol:
            raise FactorizationViolation(f"error {float(err):.3g} on word {w}", witness={"word": w})
    return SampleReport(len(words), worst)


def eigenvector_check(poly: PisotPolynomial, precision: int = DEFAULT_PRECISION) -> Fraction:
    """Bound on ``|T t - beta t|`` for ``t = (1, b^-1, ...)``."""
    t = []
    x = AlgebraicNumber.one(poly)
    for _ in range(poly.m):
        t.append(enclose(x, precision))
        x = x.div_beta()
    bt = [enclose(AlgebraicNumber.beta_power(poly, 1 - j), precision) for j in range(poly.m)]
    worst = Fraction(0)
    for row, b in zip(companion_matrix(poly), bt):
        lo = sum(min(c * iv.lower, c * iv.upper) for c, iv in zip(row, t))
        hi = sum(max(c * iv.lower, c * iv.upper) for c, iv in zip(row, t))
        worst = max(worst, hi - b.lower, b.upper - lo)
    return worst


@dataclass(frozen=True)
class CodingReport:
    A: Matrix
    detA: int
    D: int
    kernel: KernelReport
    semiconjugacy: SampleReport
    factorization: SampleReport
    precision: int

    def to_json(self) -> dict:
        return {
            "A": self.A,
            "detA": self.detA,
            "kernel_classes": self.kernel.in_kernel,
            "semiconjugacy_max_err": error_bound(self.semiconjugacy.max_error),
            "factorization_max_err": error_bound(self.factorization.max_error),
        }


def error_bound(x: Fraction) -> str:
    """Power-of-two upper bound for a small error, e.g. ``2^-130``."""
    if x == 0:
        return "0"
    return f"2^{math.floor(math.log2(x.numerator) - math.log2(x.denominator)) + 1}"


def coding_report(poly: PisotPolynomial, classes, samples: int = 100, precision: int = DEFAULT_PRECISION, length: int = 30) -> CodingReport:
    A = endomorphism_A(poly)
    return CodingReport(
        A=A,
        detA=determinant(A),
        D=discriminant(poly),
        kernel=verify_kernel(poly, classes, precision),
        semiconjugacy=verify_semiconjugacy(poly, None, samples, precision, length),
        factorization=verify_factorization(poly, samples, precision, length),
        precision=precision,
    )
