"""Action of Aut(G) and of the orientation-preserving automorphisms of the
signature group on generating vectors, and the resulting orbit partitions.

Moves on a vector ``(y_1, ..., y_r)`` (positions are 1-based):

* ``alpha(s, t)``, the pure-braid generators. Positions outside ``[s, t]``
  are fixed, ``y_s -> (y_s y_t) y_s (y_s y_t)^-1``, ``y_t -> y_s y_t y_s^-1``
  and each ``y_i`` strictly between is conjugated by ``[y_s, y_t]``.
* ``gamma(i)``, the half twist ``(y_i, y_{i+1}) -> (y_i y_{i+1} y_i^-1, y_i)``,
  legal only when ``m_i == m_{i+1}``.
* an automorphism of G, applied entrywise.

All moves are bijections of the finite set E of valid vectors, so each
generates a finite cyclic group and its inverse is one of its powers. Orbits
of the generated group are therefore the weakly connected components of the
graph whose edges are ``v -> move(v)``; no inverse moves are needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .epimorphisms import GenVector
from .errors import IllegalGamma, IndexOutOfRange, OrbitEscape
from .group_engine import Automorphism, GroupTable, automorphisms
from .signatures import Signature

_EDGE_BATCH = 4_000_000


# --------------------------------------------------------------------------
# single-vector moves


def _entries(v) -> tuple[int, ...]:
    return tuple(v.entries) if isinstance(v, GenVector) else tuple(v)


def _rewrap(v, entries: tuple[int, ...]):
    return GenVector(entries, v.signature) if isinstance(v, GenVector) else entries


def apply_alpha(G: GroupTable, v, s: int, t: int):
    y = _entries(v)
    r = len(y)
    if not 1 <= s < t <= r:
        raise IndexOutOfRange(f"alpha needs 1 <= s < t <= {r}, got ({s}, {t})")
    mul, inv = G.mul, G.inverses
    ys, yt = y[s - 1], y[t - 1]
    st = mul[ys][yt]
    comm = mul[st][mul[inv[ys]][inv[yt]]]
    out = list(y)
    out[s - 1] = mul[mul[st][ys]][inv[st]]
    out[t - 1] = mul[st][inv[ys]]
    for i in range(s, t - 1):
        out[i] = mul[mul[comm][y[i]]][inv[comm]]
    return _rewrap(v, tuple(out))


def apply_gamma(G: GroupTable, v, i: int, sig: Signature | None = None):
    y = _entries(v)
    r = len(y)
    if not 1 <= i < r:
        raise IndexOutOfRange(f"gamma needs 1 <= i < {r}, got {i}")
    if sig is None and isinstance(v, GenVector):
        sig = v.signature
    if sig is not None:
        same = sig.periods[i - 1] == sig.periods[i]
    else:
        same = G.orders[y[i - 1]] == G.orders[y[i]]
    if not same:
        raise IllegalGamma(f"positions {i} and {i + 1} carry different periods")
    mul, inv = G.mul, G.inverses
    a, b = y[i - 1], y[i]
    out = list(y)
    out[i - 1] = mul[mul[a][b]][inv[a]]
    out[i] = a
    return _rewrap(v, tuple(out))


def apply_aut(a: Automorphism | Sequence[int], v):
    m = a.map if isinstance(a, Automorphism) else a
    return _rewrap(v, tuple(m[x] for x in _entries(v)))


def conjugate_vector(G: GroupTable, v, g: int):
    """Entrywise ``g y g^-1``."""
    mul, gi = G.mul, G.inverses[g]
    return _rewrap(v, tuple(mul[mul[g][y]][gi] for y in _entries(v)))


@dataclass(frozen=True)
class MoveSet:
    alphas: tuple[tuple[int, int], ...]
    gammas: tuple[int, ...]
    auts: tuple[Automorphism, ...] = field(repr=False)


def move_set(G: GroupTable, sig: Signature) -> MoveSet:
    r = sig.r
    alphas = tuple((s, t) for s in range(1, r + 1) for t in range(s + 1, r + 1))
    return MoveSet(alphas, sig.swap_positions, tuple(automorphisms(G)))


# --------------------------------------------------------------------------
# vectorized moves over the whole set E


def alpha_rows(T: np.ndarray, inv: np.ndarray, E: np.ndarray, s: int, t: int) -> np.ndarray:
    ys, yt = E[:, s - 1], E[:, t - 1]
    st = T[ys, yt]
    st_inv = inv[st]
    comm = T[st, T[inv[ys], inv[yt]]]
    comm_inv = inv[comm]
    out = E.copy()
    out[:, s - 1] = T[T[st, ys], st_inv]
    out[:, t - 1] = T[st, inv[ys]]
    for i in range(s, t - 1):
        out[:, i] = T[T[comm, E[:, i]], comm_inv]
    return out


def gamma_rows(T: np.ndarray, inv: np.ndarray, E: np.ndarray, i: int) -> np.ndarray:
    a, b = E[:, i - 1], E[:, i]
    out = E.copy()
    out[:, i - 1] = T[T[a, b], inv[a]]
    out[:, i] = a
    return out


class VectorIndex:
    """Maps vectors back to their row in the sorted array E."""

    def __init__(self, E: np.ndarray, n: int) -> None:
        self.E = E
        self.n = n
        r = E.shape[1]
        self._packed = n > 0 and r > 0 and n ** r < 2 ** 62
        if self._packed:
            self._weights = np.array([n ** (r - 1 - j) for j in range(r)], dtype=np.int64)
            self.codes = E @ self._weights
            if len(self.codes) > 1 and np.any(np.diff(self.codes) <= 0):
                raise ValueError("E must be sorted lexicographically without repeats")
        else:
            self._lookup = {tuple(row): k for k, row in enumerate(E.tolist())}

    def __call__(self, rows: np.ndarray, move: str = "") -> np.ndarray:
        if self._packed:
            codes = rows @ self._weights
            idx = np.searchsorted(self.codes, codes)
            idx = np.minimum(idx, len(self.codes) - 1)
            bad = self.codes[idx] != codes
        else:
            idx = np.array([self._lookup.get(tuple(r), -1) for r in rows.tolist()],
                           dtype=np.int64)
            bad = idx < 0
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise OrbitEscape(f"move {move} sent a vector of E to {rows[k].tolist()} outside E")
        return idx


def _as_array(E) -> np.ndarray:
    if isinstance(E, np.ndarray):
        return E.astype(np.int64, copy=False)
    rows = [_entries(v) for v in E]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def alpha_permutations(G: GroupTable, E: np.ndarray, index: VectorIndex) -> list[np.ndarray]:
    T = G.table.astype(np.int64)
    inv = np.asarray(G.inverses, dtype=np.int64)
    r = E.shape[1]
    return [index(alpha_rows(T, inv, E, s, t), f"alpha({s},{t})")
            for s in range(1, r + 1) for t in range(s + 1, r + 1)]


def gamma_permutations(G: GroupTable, E: np.ndarray, sig: Signature,
                       index: VectorIndex) -> list[np.ndarray]:
    T = G.table.astype(np.int64)
    inv = np.asarray(G.inverses, dtype=np.int64)
    return [index(gamma_rows(T, inv, E, i), f"gamma({i})") for i in sig.swap_positions]


def aut_permutations(G: GroupTable, E: np.ndarray, index: VectorIndex,
                     auts: Iterable[Automorphism] | None = None) -> list[np.ndarray]:
    if auts is None:
        auts = automorphisms(G)
    maps = [np.asarray(a.map if isinstance(a, Automorphism) else a, dtype=np.int64)
            for a in auts]
    # the identity automorphism contributes only self-loops
    ident = np.arange(G.order)
    return [index(m[E], "aut") for m in maps if not np.array_equal(m, ident)]


# --------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class OrbitPartition:
    """Orbit partition of a sorted vector set.

    ``class_of[k]`` is the class id of row ``k``; class ids follow the order
    of their representatives, which are the lexicographic minima.
    """

    class_of: np.ndarray
    representatives: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]
    rep_index: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.sizes)

    @property
    def count(self) -> int:
        return len(self.sizes)

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.sizes]
        for k, c in enumerate(self.class_of.tolist()):
            out[c].append(k)
        return out

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.classes()}


class OrbitBuilder:
    """Incremental union of permutation graphs over ``N`` points."""

    def __init__(self, N: int) -> None:
        self.N = N
        self.labels = np.arange(N, dtype=np.int64)
        self._pending: list[np.ndarray] = []
        self._pending_size = 0

    def add(self, perm: np.ndarray) -> None:
        self._pending.append(perm)
        self._pending_size += len(perm)
        if self._pending_size >= _EDGE_BATCH:
            self.flush()

    def flush(self) -> None:
        if not self._pending or self.N == 0:
            self._pending.clear()
            self._pending_size = 0
            return
        lab = self.labels
        src = np.concatenate([lab] * len(self._pending))
        dst = np.concatenate([lab[p] for p in self._pending])
        self._pending.clear()
        self._pending_size = 0
        graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)),
                           shape=(self.N, self.N))
        _, comp = connected_components(graph, directed=True, connection="weak")
        comp_of = comp[lab]
        minrep = np.full(comp.max() + 1, self.N, dtype=np.int64)
        np.minimum.at(minrep, comp_of, np.arange(self.N))
        self.labels = minrep[comp_of]

    def partition(self, E: np.ndarray) -> OrbitPartition:
        self.flush()
        reps, class_of = np.unique(self.labels, return_inverse=True)
        sizes = np.bincount(class_of, minlength=len(reps))
        return OrbitPartition(
            class_of=class_of.astype(np.int64),
            representatives=tuple(tuple(E[k].tolist()) for k in reps),
            sizes=tuple(int(x) for x in sizes),
            rep_index=tuple(int(k) for k in reps),
        )


def orbits(E, perms: Iterable[np.ndarray]) -> OrbitPartition:
    E = _as_array(E)
    builder = OrbitBuilder(len(E))
    for p in perms:
        builder.add(p)
    return builder.partition(E)


def _prepare(G: GroupTable, E) -> tuple[np.ndarray, VectorIndex]:
    E = _as_array(E)
    return E, VectorIndex(E, G.order)


def _empty() -> OrbitPartition:
    return OrbitPartition(np.zeros(0, dtype=np.int64), (), ())


def strong_classes(G: GroupTable, E) -> OrbitPartition:
    """Orbits of E under Aut(G) alone."""
    E, index = _prepare(G, E)
    if len(E) == 0:
        return _empty()
    return orbits(E, aut_permutations(G, E, index))


def vertical_classes(G: GroupTable, E) -> OrbitPartition:
    """Orbits of E under the pure-braid moves alone."""
    E, index = _prepare(G, E)
    if len(E) == 0:
        return _empty()
    return orbits(E, alpha_permutations(G, E, index))


def equivalence_classes(G: GroupTable, sig: Signature, E, *, alphas: bool = True,
                        gammas: bool = True, auts: bool = True,
                        convention: str | None = None) -> OrbitPartition:
    """Orbits under Aut(G) together with the alpha and gamma moves.

    ``convention`` selects how generators are fed to the orbit engine:
    ``None`` uses the plain union of generators; ``"alpha_then_aut"`` and
    ``"aut_then_alpha"`` use every composite of an automorphism with a braid
    move (or the identity) in the stated order.
    """
    E, index = _prepare(G, E)
    if len(E) == 0:
        return _empty()
    moves: list[np.ndarray] = []
    if alphas:
        moves += alpha_permutations(G, E, index)
    if gammas:
        moves += gamma_permutations(G, E, sig, index)
    aut_perms = aut_permutations(G, E, index) if auts else []
    if convention is None:
        return orbits(E, [*moves, *aut_perms])
    if convention not in ("alpha_then_aut", "aut_then_alpha"):
        raise ValueError(f"unknown convention {convention!r}")
    ident = np.arange(len(E))
    composites = []
    for q in [ident, *aut_perms]:
        for p in [ident, *moves]:
            composites.append(q[p] if convention == "alpha_then_aut" else p[q])
    return orbits(E, composites)


def simultaneous_conjugacy_classes(G: GroupTable, E) -> OrbitPartition:
    """Orbits of E under entrywise conjugation by every element of G."""
    E, index = _prepare(G, E)
    if len(E) == 0:
        return _empty()
    T = G.table.astype(np.int64)
    inv = np.asarray(G.inverses, dtype=np.int64)
    perms = [index(T[T[g, E], inv[g]], "conjugation") for g in range(1, G.order)]
    return orbits(E, perms)
