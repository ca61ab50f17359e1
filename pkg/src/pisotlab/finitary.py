"""Finitary classification (Fin(beta) = Z[beta] cap [0,1)) and carry waiting times."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import NotFinitary
from .field import AlgebraicNumber, element_to_json, floor_of
from .numeration import DEFAULT_STEPS, BetaExpansion, add_expansions, greedy_expand
from .polynomial import PisotPolynomial

PROVEN_FINITARY = "ProvenFinitary"
PROVEN_NOT_FINITARY = "ProvenNotFinitary"
NO_COUNTEREXAMPLE = "NoCounterexampleUpTo"


@dataclass(frozen=True)
class FinitaryReport:
    verdict: str
    criterion: str
    height: int
    witness: AlgebraicNumber | None = None
    witness_expansion: BetaExpansion | None = None
    checked: int = 0

    @property
    def finitary(self) -> bool | None:
        if self.verdict == PROVEN_FINITARY:
            return True
        if self.verdict == PROVEN_NOT_FINITARY:
            return False
        return None

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "criterion": self.criterion,
            "height": self.height,
            "checked": self.checked,
        }
        if self.witness is not None:
            out["witness"] = element_to_json(self.witness)
            out["witness_expansion"] = self.witness_expansion.to_json()
        return out


def known_criterion(poly: PisotPolynomial) -> tuple[bool, str] | None:
    """Closed-form criteria; ``None`` when none applies."""
    k = poly.k
    m = poly.m
    if k[-1] >= 1 and all(a >= b for a, b in zip(k, k[1:])):
        return True, "descending coefficients k1 >= ... >= km >= 1"
    if m == 2:
        if k[1] == 1:
            return True, "quadratic with beta^2 = k beta + 1"
        return False, "quadratic with beta^2 = k beta - 1"
    if m == 3:
        if k[2] != 1:
            return False, "cubic with beta^3 = ... - 1 (Akiyama: constant must be +1)"
        if k[0] >= 0 and -1 <= k[1] <= k[0] + 1:
            return True, "cubic Akiyama criterion k1 >= 0, -1 <= k2 <= k1 + 1"
        return False, "cubic Akiyama criterion fails"
    return None


def zbeta_unit_interval(poly: PisotPolynomial, height: int) -> list[AlgebraicNumber]:
    """Elements of Z[beta] cap [0, 1) with coefficient height <= ``height``.

    Sorted by height, then lexicographically by coefficients. An element is
    fixed by its non-constant coefficients (the constant term is minus the
    floor of the rest), so the candidates never repeat.
    """
    out = []
    for tail in itertools.product(range(-height, height + 1), repeat=poly.m - 1):
        partial = AlgebraicNumber(poly, (0,) + tail)
        x = partial - floor_of(partial)
        h = max(abs(c) for c in x.num)
        if h <= height:
            out.append((h, x.num, x))
    out.sort(key=lambda t: (t[0], t[1]))
    return [x for _, _, x in out]


def search_witness(poly: PisotPolynomial, height: int, step_cap: int = DEFAULT_STEPS):
    """First element of Z[beta] cap [0,1) (height order) with infinite expansion."""
    checked = 0
    for x in zbeta_unit_interval(poly, height):
        checked += 1
        e = greedy_expand(x, step_cap)
        if not e.is_finite:
            return x, e, checked
    return None, None, checked


def finitary_classify(poly: PisotPolynomial, height: int = 10, step_cap: int = DEFAULT_STEPS) -> FinitaryReport:
    known = known_criterion(poly)
    if known is not None and known[0]:
        return FinitaryReport(PROVEN_FINITARY, known[1], height)
    x, e, checked = search_witness(poly, height, step_cap)
    if x is not None:
        crit = known[1] if known is not None else "infinite expansion found"
        return FinitaryReport(PROVEN_NOT_FINITARY, crit, height, x, e, checked)
    if known is not None:
        return FinitaryReport(PROVEN_NOT_FINITARY, known[1] + " (no witness up to height)", height, checked=checked)
    return FinitaryReport(NO_COUNTEREXAMPLE, f"no infinite expansion up to height {height}", height, checked=checked)


def require_finitary(poly: PisotPolynomial, height: int = 10) -> FinitaryReport:
    rep = poly._cache.get(("finitary", height))
    if rep is None:
        rep = finitary_classify(poly, height)
        poly._cache[("finitary", height)] = rep
    if rep.verdict == PROVEN_NOT_FINITARY:
        raise NotFinitary(f"{poly} is not finitary: {rep.criterion}")
    return rep


def random_zbeta_unit(poly: PisotPolynomial, height: int, rng: random.Random) -> AlgebraicNumber:
    tail = tuple(rng.randint(-height, height) for _ in range(poly.m - 1))
    partial = AlgebraicNumber(poly, (0,) + tail)
    return partial - floor_of(partial)


def measure_carry_bound(poly: PisotPolynomial, sample_count: int = 1000, height: int = 20, seed: int = 0) -> int:
    """Largest observed growth of the fractional length when adding two finite expansions."""
    rng = random.Random(seed)
    worst = 0
    for _ in range(sample_count):
        x = random_zbeta_unit(poly, height, rng)
        y = random_zbeta_unit(poly, height, rng)
        ex, ey = greedy_expand(x), greedy_expand(y)
        if not (ex.is_finite and ey.is_finite):
            raise NotFinitary(f"{poly}: infinite expansion among samples")
        s = add_expansions(ex, ey)
        if not s.is_finite:
            raise NotFinitary(f"{poly}: sum of finite expansions is infinite")
        k = max(ex.frac_length, ey.frac_length)
        worst = max(worst, s.frac_length - k)
    return worst


def carry_overshoot(ex: BetaExpansion, ey: BetaExpansion) -> int:
    s = add_expansions(ex, ey)
    return max(0, s.frac_length - max(ex.frac_length, ey.frac_length))
