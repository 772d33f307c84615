"""Planar signatures and the Riemann-Hurwitz equation, in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import GenusTooSmall, PlanarActionsError


@dataclass(frozen=True, order=True)
class Signature:
    """Branching datum ``(0; m_1, ..., m_r)`` with nondecreasing periods."""

    periods: tuple[int, ...]

    def __post_init__(self) -> None:
        p = tuple(int(m) for m in self.periods)
        object.__setattr__(self, "periods", p)
        if any(m < 2 for m in p):
            raise PlanarActionsError(f"periods must be >= 2, got {p}")
        if list(p) != sorted(p):
            raise PlanarActionsError(f"periods must be nondecreasing, got {p}")

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``"0;2,3,7"`` (the leading ``0;`` is optional)."""
        text = text.strip().strip("()")
        if ";" in text:
            genus, _, text = text.partition(";")
            if genus.strip() != "0":
                raise PlanarActionsError("only planar signatures (quotient genus 0) are supported")
        try:
            periods = tuple(int(x) for x in text.split(",") if x.strip())
        except ValueError:
            raise PlanarActionsError(f"cannot parse signature {text!r}") from None
        return cls(periods)

    def __str__(self) -> str:
        return "0;" + ",".join(map(str, self.periods))

    def __len__(self) -> int:
        return len(self.periods)

    @property
    def r(self) -> int:
        return len(self.periods)

    @property
    def blocks(self) -> tuple[int, ...]:
        """Boundaries ``0 = r_0 < r_1 < ... < r_l = r`` of the equal-period runs."""
        p = self.periods
        bounds = [0]
        for i in range(1, len(p)):
            if p[i] != p[i - 1]:
                bounds.append(i)
        bounds.append(len(p))
        return tuple(bounds)

    @property
    def swap_positions(self) -> tuple[int, ...]:
        """1-based ``i`` with ``m_i == m_{i+1}``, i.e. the legal braid swaps."""
        p = self.periods
        return tuple(i + 1 for i in range(len(p) - 1) if p[i] == p[i + 1])

    def is_hyperbolic(self) -> bool:
        return is_hyperbolic(self.periods)


def is_hyperbolic(periods: Iterable[int]) -> bool:
    """``2 + sum 1/m_i < r``, strict."""
    periods = list(periods)
    return 2 + sum(Fraction(1, m) for m in periods) < len(periods)


def is_admissible(sig: Signature) -> bool:
    return sig.r >= 3 and sig.is_hyperbolic()


def hurwitz_bound(g: int) -> int:
    if g < 2:
        raise GenusTooSmall(f"the Hurwitz bound needs genus >= 2, got {g}")
    return 84 * (g - 1)


def genus_of(sig: Signature | Iterable[int], n: int) -> Fraction:
    """Solve ``2 - 2g = n (2 - sum(1 - 1/m_i))`` for g."""
    periods = sig.periods if isinstance(sig, Signature) else tuple(sig)
    total = sum(1 - Fraction(1, m) for m in periods)
    return 1 + Fraction(n) * (total - 2) / 2


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def solve_signatures(g: int, n: int) -> list[Signature]:
    """All admissible planar signatures for a group of order ``n`` on genus ``g``.

    Periods run over the divisors of ``n`` that are at least 2. With
    ``S = 2 + (2g - 2)/n`` the target of ``sum(1 - 1/m_i)``, every term lies in
    ``[1/2, 1)`` so ``S < r <= 2S``.
    """
    if g < 2:
        raise GenusTooSmall(f"genus must be >= 2, got {g}")
    if n < 2 or n > hurwitz_bound(g):
        return []
    target = 2 + Fraction(2 * g - 2, n)
    ds = [d for d in divisors(n) if d >= 2]
    out: list[Signature] = []

    def rec(start: int, left: int, remaining: Fraction, prefix: list[int]) -> None:
        if left == 0:
            if remaining == 0:
                out.append(Signature(tuple(prefix)))
            return
        for j in range(start, len(ds)):
            d = ds[j]
            term = 1 - Fraction(1, d)
            # terms are nondecreasing from here on and each stays below 1
            if left * term > remaining:
                break
            if remaining >= left:
                return
            prefix.append(d)
            rec(j, left - 1, remaining - term, prefix)
            prefix.pop()

    r_lo = int(target) + 1          # r > S
    r_hi = int(2 * target)          # r <= 2S
    for r in range(max(r_lo, 3), r_hi + 1):
        rec(0, r, target, [])
    out = [s for s in out if s.is_hyperbolic() and genus_of(s, n) == g]
    return sorted(out, key=lambda s: s.periods)
