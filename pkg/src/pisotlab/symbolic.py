"""Symbolic representation of the Pisot group by periodic tails.

Tails are identified by their *aligned* word: the digits at positions
1..p of the two-sided periodic sequence that extends the tail to the left.
Two rotations of one word are different two-sided sequences.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    InternalInconsistency,
    NotEventuallyRecurrent,
    NotInPisotGroup,
    NotRecurrent,
    OutOfRange,
    ReconstructionFailed,
)
from .field import AlgebraicNumber, element_to_json, floor_of, nearest_integer, sign
from .finitary import require_finitary
from .lattice import PisotGroupStructure, group_structure, is_in_pbeta
from .matrices import solve_rational
from .numeration import (
    DEFAULT_STEPS,
    expand_positive,
    minimal_period,
    periodic_value,
    rotate,
    scale_into_unit,
)
from .polynomial import PisotPolynomial, trace_powers

ZERO_WORD = (0,)


@dataclass(frozen=True, order=True)
class PeriodicWord:
    """A purely periodic two-sided sequence, stored by its aligned word."""

    word: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", minimal_period(self.word) if any(self.word) else ZERO_WORD)

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def canonical(self) -> tuple[int, ...]:
        return min(rotate(self.word, r) for r in range(len(self.word)))

    @property
    def offset(self) -> int:
        c = self.canonical
        return next(r for r in range(len(c)) if rotate(c, r) == self.word)

    @property
    def is_zero(self) -> bool:
        return self.word == ZERO_WORD

    def shifted(self, n: int = 1) -> "PeriodicWord":
        """The shift applied ``n`` times (position k takes the digit of k + n)."""
        return PeriodicWord(rotate(self.word, n))

    def value(self, poly: PisotPolynomial) -> AlgebraicNumber:
        """Closed form of ``sum_{k >= 1} eps_k beta**-k``."""
        return periodic_value(poly, self.word)

    def padded(self, length: int) -> str:
        return "".join(map(str, (self.word * (length // len(self.word) + 1))[:length]))

    def __str__(self) -> str:
        return "".join(map(str, self.word)) if max(self.word) < 10 else ",".join(map(str, self.word))

    def to_json(self) -> dict:
        return {"word": list(self.canonical), "offset": self.offset}


class TailMemo:
    """Memoised aligned tails of greedy orbit states in ``[0, 1)``."""

    def __init__(self, poly: PisotPolynomial, max_steps: int = DEFAULT_STEPS):
        self.poly = poly
        self.max_steps = max_steps
        self._memo: dict[AlgebraicNumber, tuple[int, ...]] = {}

    def unit(self, x: AlgebraicNumber) -> tuple[int, ...]:
        memo = self._memo
        hit = memo.get(x)
        if hit is not None:
            return hit
        path: list[AlgebraicNumber] = []
        index: dict[AlgebraicNumber, int] = {}
        digits: list[int] = []
        state = x
        known = None
        while True:
            if state.is_zero():
                known = ZERO_WORD
                break
            hit = memo.get(state)
            if hit is not None:
                known = hit
                break
            if state in index:
                start = index[state]
                cyc = minimal_period(digits[start:])
                # aligned word of the cycle entry state is its own period word
                w = cyc
                for i in range(start, len(path)):
                    memo[path[i]] = w
                    w = rotate(w, 1)
                path = path[:start]
                known = memo[state]
                break
            if len(path) >= self.max_steps:
                raise InternalInconsistency(f"no period within {self.max_steps} steps")
            index[state] = len(path)
            path.append(state)
            y = state.mul_beta()
            d = floor_of(y)
            digits.append(d)
            state = y - d
        w = known
        for s in reversed(path):
            w = rotate(w, -1) if w != ZERO_WORD else w
            memo[s] = w
        return memo[x] if x in memo else known

    def positive(self, x: AlgebraicNumber) -> tuple[int, ...]:
        """Aligned tail of the expansion of ``x >= 0``."""
        if sign(x) < 0:
            raise OutOfRange(f"{x} is negative")
        y, n = scale_into_unit(x)
        w = self.unit(y)
        return rotate(w, n) if w != ZERO_WORD else w


def tail_memo(poly: PisotPolynomial) -> TailMemo:
    memo = poly._cache.get("tailmemo")
    if memo is None:
        memo = TailMemo(poly)
        poly._cache["tailmemo"] = memo
    return memo


def tail_of_coset(xi: AlgebraicNumber) -> PeriodicWord:
    """Periodic tail of the ``[0, 1)`` representative ``xi - floor(xi)``."""
    if not is_in_pbeta(xi):
        raise NotInPisotGroup(f"{xi} is not in P_beta")
    y = xi - floor_of(xi)
    return PeriodicWord(tail_memo(xi.poly).unit(y))


def tail_of_positive(x: AlgebraicNumber) -> PeriodicWord:
    return PeriodicWord(tail_memo(x.poly).positive(x))


@dataclass(frozen=True)
class GroupClass:
    coords: tuple[int, ...]
    rep: AlgebraicNumber
    canonical_tail: PeriodicWord
    tails: frozenset = field(default_factory=frozenset)
    order: int = 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> dict:
        return {
            "rep": element_to_json(self.rep),
            "tails": [t.to_json() for t in sorted(self.tails, key=lambda t: (t.period, t.canonical, t.offset))],
            "canonical_tail": self.canonical_tail.to_json(),
            "order": self.order,
        }


class SymbolicGroup:
    """All classes of the Pisot group with their tail sets."""

    def __init__(self, structure: PisotGroupStructure, classes: list[GroupClass]):
        self.structure = structure
        self.poly = structure.poly
        self.classes = classes
        self.by_coords = {c.coords: c for c in classes}
        self.by_tail: dict[PeriodicWord, GroupClass] = {}
        for c in classes:
            for t in c.tails:
                other = self.by_tail.get(t)
                if other is not None and other.coords != c.coords:
                    raise InternalInconsistency(f"tail {t} lies in two classes")
                self.by_tail[t] = c

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def zero(self) -> GroupClass:
        return self.by_coords[tuple(0 for _ in self.structure.invariant_factors)]

    def class_of(self, xi: AlgebraicNumber) -> GroupClass:
        return self.by_coords[self.structure.coordinates(xi)]

    def class_of_tail(self, w: PeriodicWord) -> GroupClass:
        hit = self.by_tail.get(w)
        if hit is not None:
            return hit
        return self.class_of(w.value(self.poly))

    def to_json(self) -> list:
        return [c.to_json() for c in self.classes]


def _translates(m: int, height: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(-height, height + 1), repeat=m))


def enumerate_group(poly: PisotPolynomial, extension_height: int = 6, finitary_height: int = 10) -> SymbolicGroup:
    """Classes of ``P_beta / Z[beta]`` with tails of translates up to ``extension_height``."""
    require_finitary(poly, finitary_height)
    key = ("symgroup", extension_height)
    hit = poly._cache.get(key)
    if hit is not None:
        return hit
    gs = group_structure(poly)
    memo = tail_memo(poly)
    shifts = [AlgebraicNumber(poly, t) for t in _translates(poly.m, extension_height)]
    classes = []
    for coords in itertools.product(*(range(s) for s in gs.invariant_factors)):
        rep = gs.element(coords)
        canon = PeriodicWord(memo.unit(rep))
        tails = {canon}
        for l in shifts:
            x = rep + l
            if sign(x) >= 0:
                tails.add(PeriodicWord(memo.positive(x)))
        classes.append(GroupClass(tuple(coords), rep, canon, frozenset(tails), gs.order_of(coords)))
    group = SymbolicGroup(gs, classes)
    poly._cache[key] = group
    return group


def _truncated_value(poly: PisotPolynomial, w: PeriodicWord, n: int) -> AlgebraicNumber:
    """Value of the two-sided sequence cut to positions ``>= 1 - n`` (``n`` a multiple of the period)."""
    return w.value(poly) * AlgebraicNumber.beta_power(poly, n)


def _truncation_length(*words: PeriodicWord) -> int:
    p = math.lcm(*(w.period for w in words))
    return p * max(2, -(-24 // p))


def class_add(group: SymbolicGroup, a: GroupClass, b: GroupClass, verify: bool = True) -> GroupClass:
    """Sum of two classes; optionally re-derived by adding truncated sequences."""
    s = tuple((x + y) % f for x, y, f in zip(a.coords, b.coords, group.structure.invariant_factors))
    result = group.by_coords[s]
    if verify:
        n = _truncation_length(a.canonical_tail, b.canonical_tail)
        total = _truncated_value(group.poly, a.canonical_tail, n) + _truncated_value(group.poly, b.canonical_tail, n)
        tail = PeriodicWord(tail_memo(group.poly).positive(total))
        via = group.class_of_tail(tail)
        if via.coords != result.coords:
            raise InternalInconsistency(f"symbolic sum lands in {via.coords}, coset sum is {result.coords}")
    return result


def class_neg(group: SymbolicGroup, a: GroupClass, verify: bool = True) -> GroupClass:
    s = tuple((-x) % f for x, f in zip(a.coords, group.structure.invariant_factors))
    result = group.by_coords[s]
    if verify:
        n = _truncation_length(a.canonical_tail)
        # a single 1 at position -n, minus the truncated sequence
        total = AlgebraicNumber.beta_power(group.poly, n + 1) - _truncated_value(group.poly, a.canonical_tail, n)
        tail = PeriodicWord(tail_memo(group.poly).positive(total))
        via = group.class_of_tail(tail)
        if via.coords != result.coords:
            raise InternalInconsistency(f"symbolic negation lands in {via.coords}, expected {result.coords}")
    return result


def class_sub(group: SymbolicGroup, a: GroupClass, b: GroupClass) -> GroupClass:
    return class_add(group, a, class_neg(group, b, verify=False), verify=False)


def class_shift(group: SymbolicGroup, a: GroupClass) -> GroupClass:
    """Class of ``beta * rep``: the shift acting on every tail."""
    return group.class_of(a.rep.mul_beta())


def class_multiple(group: SymbolicGroup, a: GroupClass, n: int) -> GroupClass:
    s = tuple((n * x) % f for x, f in zip(a.coords, group.structure.invariant_factors))
    return group.by_coords[s]


# ---------------------------------------------------------------------------
# recurrent sequences

def recurrent_sequence(xi: AlgebraicNumber, n_max: int) -> list[int]:
    """``T_n`` = nearest integer to ``xi * beta**n`` for ``n = 1..n_max``."""
    if not is_in_pbeta(xi):
        raise NotInPisotGroup(f"{xi} is not in P_beta")
    out = []
    x = xi
    for _ in range(n_max):
        x = x.mul_beta()
        out.append(nearest_integer(x))
    return out


def satisfies_recurrence(k: Sequence[int], T: Sequence[int], n: int) -> bool:
    """Whether ``T[n+m] == sum k_i T[n+m-i]`` (0-based list index ``n``)."""
    m = len(k)
    return T[n + m] == sum(k[i - 1] * T[n + m - i] for i in range(1, m + 1))


def recurrence_onset(poly: PisotPolynomial, T: Sequence[int]) -> int | None:
    """Smallest 1-based index ``j`` such that the recurrence holds for all
    ``n >= j`` within the data, or None when it fails at the very end."""
    m = poly.m
    last = len(T) - m - 1  # last 0-based start with a full window
    if last < 0:
        return None
    if not satisfies_recurrence(poly.k, T, last):
        return None
    j = last
    while j > 0 and satisfies_recurrence(poly.k, T, j - 1):
        j -= 1
    return j + 1


@dataclass(frozen=True)
class Recognition:
    xi: AlgebraicNumber
    onset: int
    agreement_from: int


def recognize_xi(T: Sequence[int], poly: PisotPolynomial) -> AlgebraicNumber:
    return recognize(T, poly).xi


def recognize(T: Sequence[int], poly: PisotPolynomial) -> Recognition:
    """Recover ``xi = lim beta**-n T_n`` exactly from the recurrent tail of ``T``.

    On the recurrent part ``T_n = Tr(xi beta**n)``; the last ``m`` terms give a
    Hankel system in the power sums whose determinant is ``+-D``.
    """
    T = [int(t) for t in T]
    m = poly.m
    onset = recurrence_onset(poly, T)
    if onset is None or len(T) - onset + 1 < m + 1:
        raise NotRecurrent("sequence does not satisfy the recurrence on its tail")
    if not any(T[onset - 1 :]):
        return Recognition(AlgebraicNumber.zero(poly), onset, onset)
    N = len(T)
    first = N - m + 1  # 1-based index of the first equation
    p = trace_powers(poly, N + m)
    H = [[p[i + n] for i in range(m)] for n in range(first, N + 1)]
    c = solve_rational(H, T[first - 1 :])
    xi = AlgebraicNumber.from_coeffs(poly, c)
    regen = recurrent_sequence(xi, N)
    if regen[first - 1 :] != T[first - 1 :]:
        raise ReconstructionFailed("nearest integers of xi*beta^n do not reproduce the data; extend the sequence")
    agree = N
    while agree > 1 and regen[agree - 2] == T[agree - 2]:
        agree -= 1
    return Recognition(xi, onset, agree)


def partial_limit_tails(T: Sequence[int], poly: PisotPolynomial) -> set[PeriodicWord]:
    """Limits of the expansions of ``T_n`` along residue classes of ``n``.

    The digits at positions 1..p of the expansion of ``T_n`` must stabilise
    along each residue class mod ``p`` (the tail period of ``xi``).
    """
    try:
        rec = recognize(T, poly)
    except NotRecurrent as exc:
        raise NotEventuallyRecurrent(str(exc)) from None
    xi = rec.xi
    if sign(xi) < 0:
        raise NotEventuallyRecurrent("sequence is eventually negative")
    if xi.is_zero() or is_in_zbeta_quick(xi):
        return {PeriodicWord(ZERO_WORD)}
    p = tail_of_positive(xi).period
    N = len(T)
    out = set()
    for j in range(p):
        idx = [n for n in range(max(rec.onset, 1), N + 1) if n % p == j]
        if len(idx) < 2:
            raise ReconstructionFailed("sequence too short to observe a limit along every residue")
        windows = []
        for n in idx[-2:]:
            e = expand_positive(AlgebraicNumber.from_int(poly, T[n - 1]))
            windows.append(tuple(e.digit(k) for k in range(1 - p, p + 1)))
        if windows[0] != windows[1]:
            raise ReconstructionFailed(f"digits near position 0 have not stabilised along n = {j} mod {p}")
        win = windows[1]
        word = win[p:]
        if win[:p] != word:
            raise ReconstructionFailed("limit window is not periodic")
        out.add(PeriodicWord(word))
    return out


def is_in_zbeta_quick(x: AlgebraicNumber) -> bool:
    return x.den == 1
