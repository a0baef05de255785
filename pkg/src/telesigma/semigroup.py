"""Combinatorics of the numerical semigroup generated by a telescopic sequence.

Exponent vectors are plain tuples of non-negative ints.  The monomial order
used throughout the package is the one induced by the weight map
``psi(m) = sum(a_i * m_i)`` with ties broken so that the vector whose first
differing coordinate is *larger* is the *smaller* element.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Iterator

ExponentVector = tuple[int, ...]


class SequenceError(ValueError):
    """Raised for sequences the Miura construction cannot use."""

    def __init__(self, reason: str, index: int | None = None):
        super().__init__(reason)
        self.reason = reason
        self.index = index


def _representable(target: int, gens: list[int]) -> bool:
    """Exact membership of ``target`` in the semigroup spanned by ``gens``."""
    if target == 0:
        return True
    reach = [False] * (target + 1)
    reach[0] = True
    for v in range(1, target + 1):
        reach[v] = any(g <= v and reach[v - g] for g in gens)
    return reach[target]


@dataclass(frozen=True)
class TelescopicSequence:
    a: tuple[int, ...]
    d: tuple[int, ...] = field(init=False)
    is_telescopic: bool = field(init=False, default=True)

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        if len(a) < 2 or any(v < 1 for v in a):
            raise SequenceError("need t >= 2 positive integers")
        object.__setattr__(self, "a", a)
        d = tuple(reduce(gcd, a[: i + 1]) for i in range(len(a)))
        object.__setattr__(self, "d", d)
        if d[-1] != 1:
            raise SequenceError("gcd != 1")
        for i in range(1, len(a)):
            gens = [a[k] // d[i - 1] for k in range(i)]
            if not _representable(a[i] // d[i], gens):
                # 1-based index, as in the literature
                raise SequenceError(f"telescopic condition fails at index {i + 1}", i + 1)

    @property
    def t(self) -> int:
        return len(self.a)

    @cached_property
    def e(self) -> tuple[int, ...]:
        """Ratios d_{i-1}/d_i; ``e[0]`` is a placeholder 0 for the first slot."""
        return (0,) + tuple(self.d[i - 1] // self.d[i] for i in range(1, self.t))

    @cached_property
    def genus(self) -> int:
        return genus_formula(self)

    @cached_property
    def gaps(self) -> tuple[int, ...]:
        return tuple(sieve_gaps(self.a))

    def psi(self, m: Iterable[int]) -> int:
        return sum(ai * mi for ai, mi in zip(self.a, m))

    def key(self, m: ExponentVector):
        """Sort key realizing the monomial order."""
        return (self.psi(m), tuple(-v for v in m))

    def __str__(self):
        return "(" + ",".join(map(str, self.a)) + ")"


def check_telescopic(a: Iterable[int]) -> TelescopicSequence:
    """Validate ``a`` and return the sequence object, or raise SequenceError."""
    return TelescopicSequence(tuple(a))


def is_telescopic(a: Iterable[int]) -> bool:
    try:
        check_telescopic(a)
    except SequenceError:
        return False
    return True


def psi(a: Iterable[int], m: Iterable[int]) -> int:
    return sum(ai * mi for ai, mi in zip(a, m))


def compare(seq: TelescopicSequence, m: ExponentVector, n: ExponentVector) -> int:
    """Three-way comparison in the monomial order: -1, 0 or 1."""
    if len(m) != len(n):
        raise ValueError("exponent vectors of different length")
    km, kn = seq.key(m), seq.key(n)
    return (km > kn) - (km < kn)


def representations(a: tuple[int, ...], s: int) -> Iterator[ExponentVector]:
    """All exponent vectors m with psi(m) == s (bounded knapsack enumeration)."""
    t = len(a)

    def rec(i: int, rest: int) -> Iterator[list[int]]:
        if i == t - 1:
            if rest % a[i] == 0:
                yield [rest // a[i]]
            return
        for k in range(rest // a[i] + 1):
            for tail in rec(i + 1, rest - k * a[i]):
                yield [k] + tail

    for m in rec(0, s):
        yield tuple(m)


def min_representative(seq: TelescopicSequence, s: int) -> ExponentVector:
    """The order-minimal exponent vector of weight ``s``."""
    reps = list(representations(seq.a, s))
    if not reps:
        raise ValueError(f"{s} is not in the semigroup generated by {seq.a}")
    return min(reps, key=seq.key)


def basis_B(seq: TelescopicSequence, bound: int) -> list[ExponentVector]:
    """Monomial basis exponents with weight <= bound, sorted by the order.

    Uses the closed form: m_i < d_{i-1}/d_i for i >= 2, m_1 unrestricted.
    """
    if bound < 0:
        return []
    out = []
    ranges = [range(seq.e[i]) for i in range(1, seq.t)]
    for upper in itertools.product(*ranges):
        w = psi(seq.a[1:], upper)
        for m1 in range((bound - w) // seq.a[0] + 1) if w <= bound else ():
            out.append((m1,) + upper)
    return sorted(out, key=seq.key)


def basis_B_generic(seq: TelescopicSequence, bound: int) -> list[ExponentVector]:
    """Same set as :func:`basis_B`, straight from the definition."""
    elems = [s for s in range(bound + 1) if in_semigroup(seq.a, s)]
    return sorted((min_representative(seq, s) for s in elems), key=seq.key)


def in_basis(seq: TelescopicSequence, m: ExponentVector) -> bool:
    return all(m[i] < seq.e[i] for i in range(1, seq.t))


def generators_V(seq: TelescopicSequence) -> list[ExponentVector]:
    out = []
    for i in range(1, seq.t):
        v = [0] * seq.t
        v[i] = seq.e[i]
        out.append(tuple(v))
    return out


def in_semigroup(a: Iterable[int], s: int) -> bool:
    return s >= 0 and _representable(s, list(a))


def apery_elements(a: tuple[int, ...]) -> list[int]:
    """b_r = least element of a_2 N + ... + a_t N congruent to r mod a_1.

    Shortest paths on the residue graph mod a_1.
    """
    n = a[0]
    dist = [None] * n
    heap = [(0, 0)]
    while heap:
        w, r = heapq.heappop(heap)
        if dist[r] is not None:
            continue
        dist[r] = w
        for g in a[1:]:
            r2 = (r + g) % n
            if dist[r2] is None:
                heapq.heappush(heap, (w + g, r2))
    return dist


def apery_and_T(seq: TelescopicSequence) -> list[tuple[int, int, ExponentVector]]:
    """(residue, b_residue, M(b_residue)) for each residue class mod a_1."""
    b = apery_elements(seq.a)
    return [(r, br, min_representative(seq, br)) for r, br in enumerate(b)]


def sieve_gaps(a: Iterable[int]) -> list[int]:
    """Gaps of the semigroup, found by sieving until min(a) consecutive members."""
    a = list(a)
    if reduce(gcd, a) != 1:
        raise SequenceError("gcd != 1")
    run_needed = min(a)
    member = [True]
    gaps = []
    run = 1
    s = 0
    while run < run_needed:
        s += 1
        hit = any(g <= s and member[s - g] for g in a)
        member.append(hit)
        if hit:
            run += 1
        else:
            run = 0
            gaps.append(s)
    return gaps


def genus_formula(seq: TelescopicSequence) -> int:
    num = (1 - seq.a[0]) + sum((seq.e[i] - 1) * seq.a[i] for i in range(1, seq.t))
    if num % 2:
        raise ArithmeticError("odd numerator in genus formula")
    return num // 2


def gaps_and_genus(seq: TelescopicSequence) -> tuple[list[int], int]:
    gaps = list(seq.gaps)
    g = genus_formula(seq)
    if len(gaps) != g:
        raise ArithmeticError(f"gap count {len(gaps)} disagrees with genus formula {g}")
    return gaps, g


def gap_partition(gaps: list[int]) -> tuple[int, ...]:
    """Partition lambda_i = w_{g+1-i} - (g - i) attached to the gap sequence."""
    g = len(gaps)
    w = sorted(gaps)
    return tuple(w[g - i] - (g - i) for i in range(1, g + 1))
