"""Greedy beta-expansions, the Parry condition and exact expansion values."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DigitOutOfRange, MaxStepsExceeded, NegativeDifference, OutOfRange
from .field import AlgebraicNumber, compare, floor_of, sign
from .polynomial import PisotPolynomial

DEFAULT_STEPS = 1_000_000

Word = tuple[int, ...]


def lex_compare(pre_a: Sequence[int], per_a: Sequence[int], pre_b: Sequence[int], per_b: Sequence[int]) -> int:
    """Lexicographic order of two eventually periodic sequences.

    An empty period stands for the zero tail.
    """
    per_a = tuple(per_a) or (0,)
    per_b = tuple(per_b) or (0,)
    horizon = max(len(pre_a), len(pre_b)) + math.lcm(len(per_a), len(per_b))
    la, lb = len(pre_a), len(pre_b)
    for i in range(horizon):
        x = pre_a[i] if i < la else per_a[(i - la) % len(per_a)]
        y = pre_b[i] if i < lb else per_b[(i - lb) % len(per_b)]
        if x != y:
            return -1 if x < y else 1
    return 0


def drop(pre: Sequence[int], per: Sequence[int], n: int) -> tuple[Word, Word]:
    """The eventually periodic sequence with its first ``n`` terms removed."""
    pre, per = tuple(pre), tuple(per)
    if n <= len(pre):
        return pre[n:], per
    if not per:
        return (), ()
    r = (n - len(pre)) % len(per)
    return (), per[r:] + per[:r]


def minimal_period(word: Sequence[int]) -> Word:
    w = tuple(word)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w == w[:p] * (n // p):
            return w[:p]
    return w


def rotate(word: Sequence[int], r: int) -> Word:
    w = tuple(word)
    if not w:
        return w
    r %= len(w)
    return w[r:] + w[:r]


@dataclass(frozen=True)
class ParrySequence:
    greedy_pre: Word
    greedy_period: Word
    pre: Word
    period: Word

    @property
    def finite(self) -> bool:
        return not self.greedy_period

    @property
    def greedy(self) -> Word:
        """``d'``: digits of 1 (preperiod only when finite)."""
        return self.greedy_pre

    @property
    def period_length(self) -> int | None:
        return len(self.period) or None

    @property
    def top_digit(self) -> int:
        return self.greedy_pre[0] if self.greedy_pre else self.greedy_period[0]

    def prefix(self, n: int) -> Word:
        out = list(self.pre[:n])
        i = 0
        while len(out) < n:
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)


def _orbit(poly: PisotPolynomial, x: AlgebraicNumber, max_steps: int):
    """Greedy orbit ``x -> beta x - floor(beta x)``.

    Returns ``(digits, cycle_start)``; ``cycle_start`` is None when the orbit
    reaches 0 (finite expansion).
    """
    seen: dict[AlgebraicNumber, int] = {}
    digits: list[int] = []
    state = x
    for step in range(max_steps + 1):
        if state.is_zero():
            return digits, None
        prev = seen.get(state)
        if prev is not None:
            return digits, prev
        seen[state] = step
        if step == max_steps:
            break
        y = state.mul_beta()
        d = floor_of(y)
        digits.append(d)
        state = y - d
    raise MaxStepsExceeded(f"no period within {max_steps} steps")


def parry_sequence(poly: PisotPolynomial, max_len: int = DEFAULT_STEPS) -> ParrySequence:
    """Greedy expansion ``d'`` of 1 and its quasi-greedy adjustment ``d``."""
    hit = poly._cache.get("parry")
    if hit is not None:
        return hit
    digits, start = _orbit(poly, AlgebraicNumber.one(poly), max_len)
    if start is None:
        # the initial state 1 never recurs, so a finite d' is exactly `digits`
        last = max(i for i, v in enumerate(digits) if v)
        body = digits[: last + 1]
        d = tuple(body[:-1]) + (body[-1] - 1,)
        res = ParrySequence(tuple(body), (), (), d)
    else:
        pre, per = tuple(digits[:start]), tuple(digits[start:])
        res = ParrySequence(pre, per, pre, per)
    poly._cache["parry"] = res
    return res


def _check_digits(poly: PisotPolynomial, word: Sequence[int]) -> None:
    top = parry_sequence(poly).top_digit
    for c in word:
        if not (0 <= c <= top):
            raise DigitOutOfRange(f"digit {c} outside 0..{top}")


def is_admissible(poly: PisotPolynomial, word: Sequence[int], period: Sequence[int] = ()) -> bool:
    """Parry condition for a one-sided sequence ``word + period^inf``.

    With an empty ``period`` the word is followed by zeros. Every suffix must
    be strictly below the quasi-greedy expansion of 1.
    """
    word, period = tuple(word), tuple(period)
    _check_digits(poly, word + period)
    ps = parry_sequence(poly)
    starts = len(word) + max(len(period), 1)
    for n in range(starts):
        pre, per = drop(word, period, n)
        if lex_compare(pre, per, ps.pre, ps.period) >= 0:
            return False
    return True


def is_admissible_periodic(poly: PisotPolynomial, word: Sequence[int]) -> bool:
    """Whether the two-sided repetition of ``word`` lies in the two-sided compactum."""
    word = tuple(word)
    _check_digits(poly, word)
    ps = parry_sequence(poly)
    return all(lex_compare((), rotate(word, r), ps.pre, ps.period) < 0 for r in range(len(word)))


@dataclass(frozen=True)
class BetaExpansion:
    """``int_digits`` (most significant first, exponents N-1..0), then
    fractional digits ``frac_pre`` followed by ``frac_period`` repeated."""

    poly: PisotPolynomial
    int_digits: Word = ()
    frac_pre: Word = ()
    frac_period: Word = ()

    @property
    def is_finite(self) -> bool:
        return not self.frac_period

    @property
    def frac_length(self) -> int:
        """Position of the last nonzero fractional digit (finite expansions)."""
        if self.frac_period:
            raise ValueError("infinite expansion")
        nz = [i for i, v in enumerate(self.frac_pre) if v]
        return nz[-1] + 1 if nz else 0

    def digit(self, position: int) -> int:
        """Digit multiplying ``beta**(-position)``."""
        n = len(self.int_digits)
        if position <= 0:
            idx = n - 1 + position
            return self.int_digits[idx] if 0 <= idx < n else 0
        if position <= len(self.frac_pre):
            return self.frac_pre[position - 1]
        if not self.frac_period:
            return 0
        return self.frac_period[(position - 1 - len(self.frac_pre)) % len(self.frac_period)]

    def aligned_tail(self) -> Word:
        """Period word read at positions 1..p of its two-sided periodic extension."""
        if not self.frac_period:
            return (0,)
        p = len(self.frac_period)
        shift = (-len(self.frac_pre)) % p
        return rotate(self.frac_period, shift)

    def stream(self) -> tuple[Word, Word]:
        """The full digit stream as an eventually periodic sequence."""
        return self.int_digits + self.frac_pre, self.frac_period

    def value(self) -> AlgebraicNumber:
        return evaluate_expansion(self)

    def to_json(self) -> dict:
        return {
            "int": list(self.int_digits),
            "frac_pre": list(self.frac_pre),
            "frac_period": list(self.frac_period),
        }

    def __str__(self) -> str:
        ip = "".join(map(str, self.int_digits)) or "0"
        fp = "".join(map(str, self.frac_pre))
        per = "".join(map(str, self.frac_period))
        sep = "," if any(c > 9 for c in self.int_digits + self.frac_pre + self.frac_period) else ""
        if sep:
            ip = ",".join(map(str, self.int_digits)) or "0"
            fp = ",".join(map(str, self.frac_pre))
            per = ",".join(map(str, self.frac_period))
        s = f"{ip}.{fp}"
        if per:
            s += f"({per})"
        return s


def greedy_expand(x: AlgebraicNumber, max_steps: int = DEFAULT_STEPS) -> BetaExpansion:
    """Beta-expansion of ``x`` in ``[0, 1)`` by the greedy algorithm, exactly."""
    if sign(x) < 0 or compare(x, AlgebraicNumber.one(x.poly)) >= 0:
        raise OutOfRange(f"{x} is not in [0, 1)")
    digits, start = _orbit(x.poly, x, max_steps)
    if start is None:
        return BetaExpansion(x.poly, (), tuple(digits), ())
    return BetaExpansion(x.poly, (), tuple(digits[:start]), tuple(digits[start:]))


def scale_into_unit(x: AlgebraicNumber) -> tuple[AlgebraicNumber, int]:
    """Minimal ``N >= 0`` with ``x * beta**-N < 1``, and that scaled value."""
    one = AlgebraicNumber.one(x.poly)
    n = 0
    y = x
    while compare(y, one) >= 0:
        y = y.div_beta()
        n += 1
    return y, n


def expand_positive(x: AlgebraicNumber, max_steps: int = DEFAULT_STEPS) -> BetaExpansion:
    if sign(x) < 0:
        raise OutOfRange(f"{x} is negative")
    if x.is_zero():
        return BetaExpansion(x.poly)
    y, n = scale_into_unit(x)
    e = greedy_expand(y, max_steps)
    stream_pre, stream_per = e.frac_pre, e.frac_period
    head = []
    for i in range(n):
        if i < len(stream_pre):
            head.append(stream_pre[i])
        elif stream_per:
            head.append(stream_per[(i - len(stream_pre)) % len(stream_per)])
        else:
            head.append(0)
    pre, per = drop(stream_pre, stream_per, n)
    return BetaExpansion(x.poly, tuple(head), pre, per)


def _series_value(poly: PisotPolynomial, word: Sequence[int]) -> AlgebraicNumber:
    """``sum(word[j-1] * beta**-j)`` for ``j = 1..len(word)``."""
    acc = AlgebraicNumber.zero(poly)
    for c in reversed(word):
        acc = (acc + c).div_beta()
    return acc


def geometric_factor(poly: PisotPolynomial, p: int) -> AlgebraicNumber:
    """``1 / (1 - beta**-p)``, cached per period length."""
    key = ("geom", p)
    hit = poly._cache.get(key)
    if hit is None:
        hit = (1 - AlgebraicNumber.beta_power(poly, -p)).inverse()
        poly._cache[key] = hit
    return hit


def periodic_value(poly: PisotPolynomial, word: Sequence[int]) -> AlgebraicNumber:
    """Value of ``0.(word)`` i.e. the closed form of the purely periodic tail."""
    word = tuple(word)
    if not any(word):
        return AlgebraicNumber.zero(poly)
    return _series_value(poly, word) * geometric_factor(poly, len(word))


def evaluate_expansion(e: BetaExpansion) -> AlgebraicNumber:
    poly = e.poly
    val = _series_value(poly, e.frac_pre)
    if e.frac_period:
        tail = periodic_value(poly, e.frac_period)
        val = val + tail * AlgebraicNumber.beta_power(poly, -len(e.frac_pre))
    ip = AlgebraicNumber.zero(poly)
    for c in e.int_digits:
        ip = ip.mul_beta() + c
    return ip + val


def add_expansions(e: BetaExpansion, f: BetaExpansion, max_steps: int = DEFAULT_STEPS) -> BetaExpansion:
    return expand_positive(evaluate_expansion(e) + evaluate_expansion(f), max_steps)


def sub_expansions(e: BetaExpansion, f: BetaExpansion, max_steps: int = DEFAULT_STEPS) -> BetaExpansion:
    diff = evaluate_expansion(e) - evaluate_expansion(f)
    if sign(diff) < 0:
        raise NegativeDifference("difference of the two values is negative")
    return expand_positive(diff, max_steps)


def expansion_from_word(poly: PisotPolynomial, int_digits: Sequence[int], frac: Sequence[int] = (), period: Sequence[int] = ()) -> BetaExpansion:
    """Wrap a digit string (not re-normalised); strips leading integer zeros."""
    ints = list(int_digits)
    while ints and ints[0] == 0:
        ints.pop(0)
    return BetaExpansion(poly, tuple(ints), tuple(frac), tuple(period))


def expansion_admissible(e: BetaExpansion) -> bool:
    pre, per = e.stream()
    return is_admissible(e.poly, pre, per)


def greedy_maximal(e: BetaExpansion, x: AlgebraicNumber) -> bool:
    """Incrementing any fractional prefix's last digit overshoots ``x``."""
    poly = e.poly
    n = len(e.frac_pre) + len(e.frac_period)
    prefix = [e.digit(i) for i in range(1, n + 1)]
    ip = AlgebraicNumber.zero(poly)
    for c in e.int_digits:
        ip = ip.mul_beta() + c
    for j in range(1, n + 1):
        bumped = prefix[: j - 1] + [prefix[j - 1] + 1]
        if compare(ip + _series_value(poly, bumped), x) <= 0:
            return False
    return True
