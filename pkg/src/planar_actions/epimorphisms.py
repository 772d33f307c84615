"""Order-preserving epimorphisms from a planar signature group onto G.

An epimorphism is stored as its generating vector ``(y_1, ..., y_r)`` with
``y_i`` the image of the i-th elliptic generator. A vector is valid when each
``y_i`` has order exactly ``m_i``, the product ``y_1 ... y_r`` is the identity
and the entries generate G.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .group_engine import GroupTable, is_generating
from .signatures import Signature

DEFAULT_EPI_CAP = 5_000_000


@dataclass(frozen=True)
class GenVector:
    entries: tuple[int, ...]
    signature: Signature

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def is_valid_vector(G: GroupTable, sig: Signature, v) -> bool:
    """Post-hoc check of the three defining conditions."""
    v = tuple(v)
    if len(v) != sig.r:
        return False
    if any(G.orders[y] != m for y, m in zip(v, sig.periods)):
        return False
    x = 0
    for y in v:
        x = G.mul[x][y]
    if x != 0:
        return False
    return is_generating(G, v)


class _SubgroupLattice:
    """Memoized joins ``<H, x>`` of subgroups given as integer bitmasks."""

    def __init__(self, G: GroupTable) -> None:
        self.G = G
        self.full = (1 << G.order) - 1
        self.gens: dict[int, tuple[int, ...]] = {1: ()}
        self.members: dict[int, list[int]] = {1: [0]}
        self._join: dict[tuple[int, int], int] = {}

    def join(self, h: int, x: int) -> int:
        if (h >> x) & 1:
            return h
        key = (h, x)
        out = self._join.get(key)
        if out is None:
            gens = self.gens[h] + (x,)
            mul = self.G.mul
            elems = list(self.members[h])
            mask = h
            i = 0
            # every element of <H, x> is reached from H by right products of generators
            while i < len(elems):
                row = mul[elems[i]]
                for g in gens:
                    y = row[g]
                    if not (mask >> y) & 1:
                        mask |= 1 << y
                        elems.append(y)
                i += 1
            if mask not in self.gens:
                self.gens[mask] = gens
                self.members[mask] = elems
            out = self._join[key] = mask
        return out

    def join_set(self, h: int, xs) -> int:
        for x in xs:
            h = self.join(h, x)
            if h == self.full:
                break
        return h


def _search(G: GroupTable, sig: Signature) -> Iterator[tuple[int, ...]]:
    periods = sig.periods
    r = len(periods)
    n = G.order
    if r < 2 or any(n % m for m in periods):
        return
    classes = {m: G.elements_of_order(m) for m in set(periods)}
    if any(not classes[m] for m in periods):
        return
    mul, inv, orders = G.mul, G.inverses, G.orders
    lat = _SubgroupLattice(G)
    full = lat.full
    last_period = periods[-1]
    # suffix[i]: union of the order classes still available from position i on
    suffix: list[list[int]] = [[] for _ in range(r + 1)]
    for i in range(r - 1, -1, -1):
        suffix[i] = sorted(set(suffix[i + 1]) | set(classes[periods[i]]))
    reachable: dict[tuple[int, int], bool] = {}

    def can_reach(h: int, i: int) -> bool:
        key = (h, i)
        ok = reachable.get(key)
        if ok is None:
            ok = reachable[key] = lat.join_set(h, suffix[i]) == full
        return ok

    prefix = [0] * r

    def rec(i: int, prod: int, h: int) -> Iterator[tuple[int, ...]]:
        if i == r - 2:
            row = mul[prod]
            for y in classes[periods[i]]:
                z = inv[row[y]]
                if orders[z] != last_period:
                    continue
                if lat.join(h, y) != full:
                    continue
                prefix[i] = y
                prefix[r - 1] = z
                yield tuple(prefix)
            return
        if not can_reach(h, i):
            return
        row = mul[prod]
        for y in classes[periods[i]]:
            prefix[i] = y
            yield from rec(i + 1, row[y], lat.join(h, y))

    yield from rec(0, 0, 1)


def iter_epimorphisms(G: GroupTable, sig: Signature) -> Iterator[tuple[int, ...]]:
    """Yield the generating vectors in lexicographic order."""
    return _search(G, sig)


def enumerate_epimorphisms(G: GroupTable, sig: Signature) -> list[GenVector]:
    """The complete set Epi(sig, G), sorted lexicographically."""
    return [GenVector(v, sig) for v in _search(G, sig)]


def epimorphism_array(G: GroupTable, sig: Signature, cap: int | None = None) -> np.ndarray:
    """Epi(sig, G) as an ``(|E|, r)`` integer array with lexicographically sorted rows.

    Raises OverflowError when more than ``cap`` vectors exist.
    """
    rows = []
    for v in _search(G, sig):
        rows.append(v)
        if cap is not None and len(rows) > cap:
            raise OverflowError(f"more than {cap} epimorphisms")
    if not rows:
        return np.zeros((0, sig.r), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def count_epimorphisms(G: GroupTable, sig: Signature) -> int:
    return sum(1 for _ in _search(G, sig))
