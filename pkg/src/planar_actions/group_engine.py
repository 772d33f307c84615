"""Finite groups as explicit multiplication tables.

Elements are dense indices ``0..n-1`` and the identity is always ``0``.
Permutations follow the left-to-right convention: the product ``a*b`` of two
permutation image arrays first applies ``a`` and then ``b``, so
``(a*b)[x] == b[a[x]]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ClosureTooLarge, InvalidPermutation, NotAGroup

DEFAULT_ORDER_CAP = 2048


class GroupTable:
    """A validated finite group.

    Instances are treated as immutable. ``table`` is a read-only numpy array,
    ``mul`` the same data as nested lists for fast scalar lookups.
    """

    __slots__ = (
        "order", "table", "mul", "identity", "inverses", "orders", "label",
        "gens", "_aut_cache",
    )

    def __init__(self, table: np.ndarray, inverses: Sequence[int],
                 orders: Sequence[int], label: str = "",
                 gens: Sequence[int] = ()) -> None:
        table = np.ascontiguousarray(table, dtype=np.int32)
        table.setflags(write=False)
        self.order = int(table.shape[0])
        self.table = table
        self.mul = table.tolist()
        self.identity = 0
        self.inverses = tuple(int(x) for x in inverses)
        self.orders = tuple(int(x) for x in orders)
        self.label = label
        self.gens = tuple(int(x) for x in gens)
        self._aut_cache = None

    def __repr__(self) -> str:
        return f"GroupTable(order={self.order}, label={self.label!r})"

    def __len__(self) -> int:
        return self.order

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @property
    def is_cyclic(self) -> bool:
        return self.order in self.orders

    def elements_of_order(self, m: int) -> list[int]:
        return [a for a, o in enumerate(self.orders) if o == m]

    def order_statistics(self) -> tuple[tuple[int, int], ...]:
        """Sorted ``(element order, count)`` pairs; an isomorphism invariant."""
        counts: dict[int, int] = {}
        for o in self.orders:
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))


@dataclass(frozen=True)
class Automorphism:
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def __len__(self) -> int:
        return len(self.map)


# --------------------------------------------------------------------------
# construction


def _element_orders(mul: list[list[int]], identity: int) -> list[int]:
    n = len(mul)
    orders = [0] * n
    for a in range(n):
        if orders[a]:
            continue
        # walk the cyclic subgroup once and fill in every power's order
        powers = [identity]
        x = a
        while x != identity:
            powers.append(x)
            x = mul[x][a]
        k = len(powers)
        for i in range(1, k):
            if not orders[powers[i]]:
                orders[powers[i]] = k // _gcd(i, k)
        orders[identity] = 1
    return orders


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _first_associativity_failure(t: np.ndarray) -> tuple[int, int, int] | None:
    # (a*b)*c vs a*(b*c), one slab per a
    for a in range(t.shape[0]):
        left = t[t[a]]          # left[b, c] = (a*b)*c
        right = t[a][t]         # right[b, c] = a*(b*c)
        bad = np.argwhere(left != right)
        if bad.size:
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def from_multiplication_table(raw, label: str = "", gens: Sequence[int] = (),
                              check_associativity: bool = True) -> GroupTable:
    """Validate an n x n table and return a GroupTable with identity 0.

    Raises NotAGroup naming the first offending element or triple.
    """
    t = np.asarray(raw)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroup(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        raise NotAGroup("table entries must be integers")
    if t.min() < 0 or t.max() >= n:
        raise NotAGroup(f"table entries must lie in 0..{n - 1}")
    t = t.astype(np.int64)

    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)]
    if not ids:
        raise NotAGroup("no two-sided identity element")
    e = ids[0]

    inverses = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        cand = np.flatnonzero(t[a] == e)
        for b in cand:
            if t[b, a] == e:
                inverses[a] = b
                break
        if inverses[a] < 0:
            raise NotAGroup(f"element {a} has no inverse")

    if check_associativity:
        bad = _first_associativity_failure(t)
        if bad is not None:
            a, b, c = bad
            raise NotAGroup(f"associativity fails for triple ({a}, {b}, {c})")

    if e != 0:
        # relabel so that the identity sits at index 0
        perm = ar.copy()
        perm[0], perm[e] = e, 0          # perm[new] = old
        new_of_old = np.argsort(perm)
        t = new_of_old[t[np.ix_(perm, perm)]]
        inverses = new_of_old[inverses[perm]]
        gens = [int(new_of_old[g]) for g in gens]

    mul = t.tolist()
    orders = _element_orders(mul, 0)
    return GroupTable(t, inverses.tolist(), orders, label=label, gens=gens)


def _check_permutation(p, degree: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise InvalidPermutation(f"{list(p)} is not a permutation of 0..{degree - 1}")
    return p


def close_permutations(degree: int, gens: Sequence[Sequence[int]],
                       cap: int = DEFAULT_ORDER_CAP):
    """Breadth-first closure of permutation generators.

    Returns ``(elements, right, gen_index)`` where ``elements`` lists the
    group in discovery order (identity first), ``right[j][i]`` is the index
    of ``elements[i] * gens[j]`` and ``gen_index[j]`` is the index of
    ``gens[j]`` itself.
    """
    if degree < 1:
        raise InvalidPermutation("degree must be at least 1")
    perms = [_check_permutation(g, degree) for g in gens]
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    right = [[] for _ in perms]
    queue = 0
    while queue < len(elements):
        x = elements[queue]
        for j, g in enumerate(perms):
            y = tuple(g[i] for i in x)   # apply x, then g
            k = index.get(y)
            if k is None:
                if len(elements) >= cap:
                    raise ClosureTooLarge(f"closure exceeds order cap {cap}")
                k = len(elements)
                index[y] = k
                elements.append(y)
            right[j].append(k)
        queue += 1
    gen_index = [index[g] for g in perms]
    return elements, right, gen_index


def table_from_right_actions(n: int, right: Sequence[Sequence[int]]) -> np.ndarray:
    """Full table from the right-regular action of a generating set.

    Every element ``b`` other than the identity is reached in a BFS tree as
    ``b = parent * g``; then column ``b`` equals column ``parent`` pushed
    through right multiplication by ``g``.
    """
    r = [np.asarray(col, dtype=np.int64) for col in right]
    t = np.empty((n, n), dtype=np.int64)
    t[:, 0] = np.arange(n)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        p = queue.popleft()
        for j, rj in enumerate(r):
            b = int(rj[p])
            if not seen[b]:
                seen[b] = True
                t[:, b] = rj[t[:, p]]
                queue.append(b)
    return t


def from_permutation_generators(degree: int, gens: Sequence[Sequence[int]],
                                label: str = "", cap: int = DEFAULT_ORDER_CAP,
                                check_associativity: bool = True) -> GroupTable:
    """Close permutation generators and build the full multiplication table.

    Indices follow discovery order with the identity at 0.
    """
    elements, right, gen_index = close_permutations(degree, gens, cap)
    t = table_from_right_actions(len(elements), right)
    # composition of permutations is associative; the check is kept optional
    return from_multiplication_table(t, label=label, gens=gen_index,
                                     check_associativity=check_associativity)


# --------------------------------------------------------------------------
# arithmetic


def multiply(G: GroupTable, a: int, b: int) -> int:
    return G.mul[a][b]


def inverse(G: GroupTable, a: int) -> int:
    return G.inverses[a]


def conjugate(G: GroupTable, a: int, b: int) -> int:
    """Return ``b * a * b^-1``."""
    return G.mul[G.mul[b][a]][G.inverses[b]]


def element_order(G: GroupTable, a: int) -> int:
    return G.orders[a]


def power(G: GroupTable, a: int, k: int) -> int:
    if k < 0:
        a, k = G.inverses[a], -k
    x = 0
    for _ in range(k % G.orders[a]):
        x = G.mul[x][a]
    return x


def word(G: GroupTable, letters: Iterable[int]) -> int:
    x = 0
    for a in letters:
        x = G.mul[x][a]
    return x


def closure(G: GroupTable, gens: Iterable[int], start: Iterable[int] = (0,)) -> list[int]:
    """Elements of the subgroup generated by ``gens`` in BFS order."""
    gens = [g for g in dict.fromkeys(gens) if g != 0]
    mul = G.mul
    seen = set(start)
    seen.add(0)
    out = list(dict.fromkeys([0, *start]))
    i = 0
    while i < len(out):
        x = out[i]
        row = mul[x]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                out.append(y)
        i += 1
    return out


def generated_subgroup(G: GroupTable, S: Iterable[int]) -> frozenset[int]:
    return frozenset(closure(G, S))


def is_generating(G: GroupTable, S: Iterable[int]) -> bool:
    return len(closure(G, S)) == G.order


# --------------------------------------------------------------------------
# automorphisms and isomorphisms


def generating_tuple(G: GroupTable) -> tuple[int, ...]:
    """A small generating tuple chosen greedily by subgroup growth.

    Ties go to the lowest index.
    """
    chosen: list[int] = []
    current = {0}
    while len(current) < G.order:
        best, best_set = -1, None
        for x in range(G.order):
            if x in current:
                continue
            s = closure(G, [*chosen, x])
            if best_set is None or len(s) > len(best_set):
                best, best_set = x, s
                if len(s) == G.order:
                    break
        chosen.append(best)
        current = set(best_set)
    return tuple(chosen)


class _Stages:
    """BFS layout of a group over a generating tuple, split per generator.

    Stage ``j`` lists the elements of ``<t_0..t_j>`` that are new relative to
    ``<t_0..t_{j-1}>`` as ``(element, parent, generator position)`` triples,
    parents always preceding children.
    """

    def __init__(self, G: GroupTable, tup: Sequence[int]) -> None:
        self.tup = tuple(tup)
        mul = G.mul
        seen = {0}
        members = [0]
        self.steps: list[list[tuple[int, int, int]]] = []
        self.members: list[np.ndarray] = []
        for j in range(len(tup)):
            steps = []
            queue = list(members)
            i = 0
            while i < len(queue):
                x = queue[i]
                for k in range(j + 1):
                    y = mul[x][tup[k]]
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
                        members.append(y)
                        steps.append((y, x, k))
                i += 1
            self.steps.append(steps)
            self.members.append(np.array(members, dtype=np.int64))


def _homomorphism_search(G: GroupTable, H: GroupTable, first_only: bool):
    """Backtrack over images of a generating tuple of G inside H."""
    n = G.order
    if n != H.order:
        return []
    if n == 1:
        return [(0,)]
    tup = generating_tuple(G)
    stages = _Stages(G, tup)
    tg = G.table
    th = H.table
    hmul = H.mul
    by_order: dict[int, list[int]] = {}
    for a, o in enumerate(H.orders):
        by_order.setdefault(o, []).append(a)
    candidates = [by_order.get(G.orders[t], []) for t in tup]
    right_cols = [tg[:, t] for t in tup]
    results: list[tuple[int, ...]] = []
    images = [0] * len(tup)
    phi = [-1] * n
    phi[0] = 0

    def consistent(j: int) -> bool:
        m = stages.members[j]
        pm = np.asarray(phi, dtype=np.int64)
        img = pm[m]
        if len(np.unique(img)) != len(m):
            return False
        for k in range(j + 1):
            if not np.array_equal(pm[right_cols[k][m]], th[img, images[k]]):
                return False
        return True

    def extend(j: int) -> bool:
        for y, x, k in stages.steps[j]:
            phi[y] = hmul[phi[x]][images[k]]
        return consistent(j)

    def rec(j: int) -> bool:
        if j == len(tup):
            results.append(tuple(phi))
            return first_only
        used = {phi[x] for x in stages.members[j - 1]} if j else {0}
        for c in candidates[j]:
            if c in used:
                continue
            images[j] = c
            if extend(j) and rec(j + 1):
                return True
        for y, _, _ in stages.steps[j]:
            phi[y] = -1
        return False

    rec(0)
    return results


def automorphisms(G: GroupTable) -> list[Automorphism]:
    """The full automorphism group, sorted lexicographically by map."""
    if G._aut_cache is None:
        maps = sorted(_homomorphism_search(G, G, first_only=False))
        G._aut_cache = tuple(Automorphism(m) for m in maps)
    return list(G._aut_cache)


def find_isomorphism(G: GroupTable, H: GroupTable) -> Automorphism | None:
    """An isomorphism G -> H as an index map, or None."""
    if G.order != H.order or G.order_statistics() != H.order_statistics():
        return None
    if G.is_abelian != H.is_abelian:
        return None
    found = _homomorphism_search(G, H, first_only=True)
    return Automorphism(found[0]) if found else None


def is_isomorphic(G: GroupTable, H: GroupTable) -> bool:
    return find_isomorphism(G, H) is not None


def is_automorphism(G: GroupTable, m: Sequence[int]) -> bool:
    m = np.asarray(m)
    if m.shape != (G.order,) or not np.array_equal(np.sort(m), np.arange(G.order)):
        return False
    return bool(np.array_equal(m[G.table], G.table[np.ix_(m, m)]))


def element_words(G: GroupTable, names: Sequence[str] | None = None) -> list[str]:
    """Shortest words in ``G.gens`` for every element (``"1"`` for identity)."""
    gens = G.gens
    if names is None:
        names = [chr(ord("a") + i) for i in range(len(gens))]
    words: list[str | None] = [None] * G.order
    words[0] = "1"
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g, name in zip(gens, names):
            y = G.mul[x][g]
            if words[y] is None:
                words[y] = name if x == 0 else f"{words[x]}*{name}"
                queue.append(y)
    return [w if w is not None else f"#{i}" for i, w in enumerate(words)]
