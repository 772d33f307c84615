"""Candidate groups of a given order.

Two sources feed the census: built-in families realized directly as tables
and an optional JSON catalog of permutation groups exported from an external
algebra system. A group spec is written as a short string::

    cyclic:8  dihedral:5  dicyclic:2  abelian:2,4  symmetric:4  alternating:5
    dihedral:3xcyclic:2   (direct product)
    external:54:6         (catalog entry of order 54 with id 6)
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import group_engine as ge
from .errors import CatalogError, OrderMismatch, ParseError, UnsupportedSpec
from .group_engine import DEFAULT_ORDER_CAP, GroupTable

CATALOG_VERSION = 1

_KINDS = ("cyclic", "dihedral", "dicyclic", "abelian", "symmetric",
          "alternating", "direct_product", "external")


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: tuple[int, ...] = ()
    factors: tuple["GroupSpec", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise UnsupportedSpec(f"unknown group kind {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "direct_product":
            return "x".join(f.label for f in self.factors)
        if self.kind == "external":
            return f"external:{self.params[0]}:{self.params[1]}"
        return f"{self.kind}:" + ",".join(map(str, self.params))

    def __str__(self) -> str:
        return self.label

    @property
    def order(self) -> int:
        k, p = self.kind, self.params
        if k == "cyclic":
            return p[0]
        if k == "dihedral":
            return 2 * p[0]
        if k == "dicyclic":
            return 4 * p[0]
        if k == "abelian":
            return math.prod(p)
        if k == "symmetric":
            return math.factorial(p[0])
        if k == "alternating":
            return max(1, math.factorial(p[0]) // 2)
        if k == "direct_product":
            return math.prod(f.order for f in self.factors)
        return p[0]


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", (n,))


def dihedral(n: int) -> GroupSpec:
    return GroupSpec("dihedral", (n,))


def dicyclic(m: int) -> GroupSpec:
    return GroupSpec("dicyclic", (m,))


def abelian(factors: Sequence[int]) -> GroupSpec:
    return GroupSpec("abelian", tuple(factors))


def symmetric(k: int) -> GroupSpec:
    return GroupSpec("symmetric", (k,))


def alternating(k: int) -> GroupSpec:
    return GroupSpec("alternating", (k,))


def direct_product(a: GroupSpec, b: GroupSpec) -> GroupSpec:
    return GroupSpec("direct_product", factors=(a, b))


def external(order: int, ident: int) -> GroupSpec:
    return GroupSpec("external", (order, ident))


_PRODUCT_SPLIT = re.compile(r"(?<=\d)x(?=[a-z])")


def parse_spec(text: str) -> GroupSpec:
    """Parse the string form shown in the module docstring."""
    text = text.strip()
    parts = _PRODUCT_SPLIT.split(text)
    if len(parts) > 1:
        spec = parse_spec(parts[0])
        for p in parts[1:]:
            spec = direct_product(spec, parse_spec(p))
        return spec
    m = re.fullmatch(r"([a-z_]+):([0-9,:]+)", text)
    if not m:
        raise UnsupportedSpec(f"cannot parse group spec {text!r}")
    kind, rest = m.groups()
    try:
        if kind == "external":
            order, ident = (int(x) for x in rest.split(":"))
            return external(order, ident)
        params = tuple(int(x) for x in rest.split(","))
    except ValueError:
        raise UnsupportedSpec(f"cannot parse group spec {text!r}") from None
    if kind not in _KINDS or kind == "direct_product":
        raise UnsupportedSpec(f"unknown group kind {kind!r}")
    if kind != "abelian" and len(params) != 1:
        raise UnsupportedSpec(f"{kind} takes exactly one parameter")
    return GroupSpec(kind, params)


# --------------------------------------------------------------------------
# realization


def _cyclic_table(n: int) -> np.ndarray:
    a = np.arange(n)
    return (a[:, None] + a[None, :]) % n


def _dihedral_table(n: int) -> np.ndarray:
    # element k + n*s stands for g^k h^s, with h g h = g^-1
    idx = np.arange(2 * n)
    k, s = idx % n, idx // n
    k1, s1 = k[:, None], s[:, None]
    k2, s2 = k[None, :], s[None, :]
    kk = (k1 + np.where(s1 == 1, -k2, k2)) % n
    ss = (s1 + s2) % 2
    return kk + n * ss


def _dicyclic_table(m: int) -> np.ndarray:
    # element k + 2m*s stands for a^k x^s, x^2 = a^m, x a x^-1 = a^-1
    n2 = 2 * m
    idx = np.arange(2 * n2)
    k, s = idx % n2, idx // n2
    k1, s1 = k[:, None], s[:, None]
    k2, s2 = k[None, :], s[None, :]
    kk = np.where(s1 == 0, k1 + k2, np.where(s2 == 0, k1 - k2, k1 - k2 + m)) % n2
    ss = (s1 + s2) % 2
    return kk + n2 * ss


def _product_table(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    na, nb = a.shape[0], b.shape[0]
    return (a[:, None, :, None] * nb + b[None, :, None, :]).reshape(na * nb, na * nb)


def _symmetric_gens(k: int) -> list[list[int]]:
    if k <= 1:
        return []
    if k == 2:
        return [[1, 0]]
    cycle = [*range(1, k), 0]
    swap = [1, 0, *range(2, k)]
    return [cycle, swap]


def _alternating_gens(k: int) -> list[list[int]]:
    if k <= 2:
        return []
    three = [1, 2, 0, *range(3, k)]
    if k == 3:
        return [three]
    if k % 2:
        long = [*range(1, k), 0]
    else:
        long = [0, *range(2, k), 1]
    return [three, long]


def realize(spec: GroupSpec, cap: int = DEFAULT_ORDER_CAP,
            catalog: "Catalog | None" = None) -> GroupTable:
    """Build the GroupTable described by ``spec`` deterministically."""
    k, p = spec.kind, spec.params
    if any(x < 1 for x in p):
        raise UnsupportedSpec(f"{spec}: parameters must be positive")
    if k == "external":
        if catalog is None:
            raise UnsupportedSpec(f"{spec}: no external catalog loaded")
        return catalog.get(p[0], p[1]).table
    if spec.order > cap:
        raise UnsupportedSpec(f"{spec}: order {spec.order} exceeds cap {cap}")
    label = spec.label
    if k == "cyclic":
        return ge.from_multiplication_table(_cyclic_table(p[0]), label,
                                            gens=[1] if p[0] > 1 else [])
    if k == "dihedral":
        n = p[0]
        return ge.from_multiplication_table(_dihedral_table(n), label,
                                            gens=[1, n] if n > 1 else [1])
    if k == "dicyclic":
        m = p[0]
        return ge.from_multiplication_table(_dicyclic_table(m), label, gens=[1, 2 * m])
    if k == "abelian":
        if any(x < 2 for x in p) or any(p[i + 1] % p[i] for i in range(len(p) - 1)):
            raise UnsupportedSpec(f"{spec}: invariant factors must be >= 2 and divide the next")
        t = _cyclic_table(p[0])
        gens = [1]
        for f in p[1:]:
            gens = [g * f for g in gens] + [1]
            t = _product_table(t, _cyclic_table(f))
        return ge.from_multiplication_table(t, label, gens=gens)
    if k == "symmetric":
        return ge.from_permutation_generators(max(p[0], 1), _symmetric_gens(p[0]), label, cap)
    if k == "alternating":
        return ge.from_permutation_generators(max(p[0], 1), _alternating_gens(p[0]), label, cap)
    if k == "direct_product":
        a, b = (realize(f, cap, catalog) for f in spec.factors)
        nb = b.order
        gens = [g * nb for g in a.gens] + list(b.gens)
        return ge.from_multiplication_table(_product_table(a.table, b.table), label, gens=gens)
    raise UnsupportedSpec(str(spec))


# --------------------------------------------------------------------------
# external catalog files


@dataclass(frozen=True)
class CatalogEntry:
    order: int
    id: int
    name: str
    table: GroupTable


@dataclass
class Catalog:
    entries: list[CatalogEntry] = field(default_factory=list)
    complete_orders: frozenset[int] = frozenset()
    path: str | None = None

    def __iter__(self) -> Iterator[tuple[int, int, GroupTable]]:
        for e in self.entries:
            yield e.order, e.id, e.table

    def __len__(self) -> int:
        return len(self.entries)

    def of_order(self, n: int) -> list[CatalogEntry]:
        return sorted((e for e in self.entries if e.order == n), key=lambda e: e.id)

    def get(self, order: int, ident: int) -> CatalogEntry:
        for e in self.entries:
            if e.order == order and e.id == ident:
                return e
        raise CatalogError(f"no catalog group with order {order} and id {ident}")


def _require(record: dict, key: str, kind, where: str):
    if key not in record:
        raise ParseError(f"missing key {key!r}", where)
    value = record[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ParseError(f"{key!r} must be an integer", where)
    if kind is not int and not isinstance(value, kind):
        raise ParseError(f"{key!r} has wrong type", where)
    return value


def parse_catalog(data: dict, cap: int = DEFAULT_ORDER_CAP, source: str | None = None) -> Catalog:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    if data.get("version") != CATALOG_VERSION:
        raise ParseError(f"unsupported catalog version {data.get('version')!r}")
    complete = data.get("complete_orders", [])
    if not isinstance(complete, list) or not all(isinstance(x, int) for x in complete):
        raise ParseError("'complete_orders' must be a list of integers")
    groups = data.get("groups", [])
    if not isinstance(groups, list):
        raise ParseError("'groups' must be a list")
    entries: list[CatalogEntry] = []
    seen: set[tuple[int, int]] = set()
    for i, rec in enumerate(groups):
        where = f"groups[{i}]"
        if not isinstance(rec, dict):
            raise ParseError("record must be an object", where)
        order = _require(rec, "order", int, where)
        ident = _require(rec, "id", int, where)
        name = rec.get("name", "")
        degree = _require(rec, "degree", int, where)
        gens = _require(rec, "generators", list, where)
        if (order, ident) in seen:
            raise ParseError(f"duplicate group ({order}, {ident})", where)
        seen.add((order, ident))
        try:
            table = ge.from_permutation_generators(
                degree, gens, label=f"external:{order}:{ident}", cap=max(cap, order))
        except CatalogError:
            raise
        except Exception as exc:  # InvalidPermutation, ClosureTooLarge
            raise ParseError(str(exc), where) from exc
        if table.order != order:
            raise OrderMismatch(order, table.order, where)
        entries.append(CatalogEntry(order, ident, str(name), table))
    return Catalog(entries, frozenset(complete), source)


def load_catalog_file(path: str | Path, cap: int = DEFAULT_ORDER_CAP) -> Catalog:
    """Read and validate a group-catalog JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:line {exc.lineno} col {exc.colno}") from exc
    return parse_catalog(data, cap, str(path))


def catalog_to_json(groups: Sequence[dict], complete_orders: Sequence[int] = ()) -> str:
    return json.dumps({"version": CATALOG_VERSION, "complete_orders": sorted(complete_orders),
                       "groups": list(groups)}, sort_keys=True, indent=1)


# --------------------------------------------------------------------------
# groups of a given order


@dataclass(frozen=True)
class CatalogGroup:
    source: str          # "builtin" or "external"
    id: int
    label: str
    table: GroupTable
    name: str = ""

    @property
    def order(self) -> int:
        return self.table.order


@dataclass
class GroupList:
    order: int
    groups: list[CatalogGroup]
    complete: bool

    def __iter__(self):
        return iter(self.groups)

    def __len__(self) -> int:
        return len(self.groups)


def _invariant_factor_lists(n: int) -> list[tuple[int, ...]]:
    """All invariant-factor decompositions d1 | d2 | ... with product n."""
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, prefix: tuple[int, ...]) -> None:
        if remaining == 1:
            out.append(prefix)
            return
        lo = prefix[-1] if prefix else 2
        for d in range(lo, remaining + 1):
            if remaining % d or (prefix and d % prefix[-1]):
                continue
            # the final factor must be a multiple of d
            rest = remaining // d
            if rest != 1 and rest % d:
                continue
            rec(rest, prefix + (d,))

    rec(n, ())
    return sorted(out, key=lambda t: (len(t), t))


def _nonabelian_families(max_order: int) -> list[GroupSpec]:
    specs = []
    for k in range(3, max_order // 2 + 1):
        specs.append(dihedral(k))
    for m in range(2, max_order // 4 + 1):
        specs.append(dicyclic(m))
    k = 3
    while math.factorial(k) <= max_order:
        specs.append(symmetric(k))
        k += 1
    k = 4
    while math.factorial(k) // 2 <= max_order:
        specs.append(alternating(k))
        k += 1
    return specs


def builtin_specs(n: int) -> list[GroupSpec]:
    """Built-in candidate specs of order ``n`` before isomorphism dedup."""
    if n == 1:
        return [cyclic(1)]
    specs: list[GroupSpec] = [cyclic(n)]
    specs += [abelian(f) for f in _invariant_factor_lists(n) if len(f) > 1]
    basic = _nonabelian_families(n)
    specs += [s for s in basic if s.order == n]
    for b in basic:
        d = b.order
        if d >= n or n % d:
            continue
        for f in _invariant_factor_lists(n // d):
            specs.append(direct_product(b, cyclic(f[0]) if len(f) == 1 else abelian(f)))
    return specs


def _cheap_invariants(G: GroupTable) -> tuple:
    t = G.table
    commuting = int(np.count_nonzero(t == t.T))
    center = int(np.count_nonzero(np.all(t == t.T, axis=1)))
    squares = len(set(t[np.arange(G.order), np.arange(G.order)].tolist()))
    return G.order_statistics(), commuting, center, squares


def _dedup(tables: list[GroupTable], against: Sequence[GroupTable] = ()) -> list[GroupTable]:
    kept: list[GroupTable] = []
    inv_cache: dict[int, tuple] = {}

    def inv(G: GroupTable) -> tuple:
        key = id(G)
        if key not in inv_cache:
            inv_cache[key] = _cheap_invariants(G)
        return inv_cache[key]

    for G in tables:
        pool = [*against, *kept]
        if any(inv(H) == inv(G) and ge.is_isomorphic(G, H) for H in pool):
            continue
        kept.append(G)
    return kept


_BUILTIN_CACHE: dict[tuple, list[tuple[int, GroupTable]]] = {}


def builtin_groups(n: int, cap: int = DEFAULT_ORDER_CAP,
                   kinds: frozenset[str] | None = None) -> list[tuple[int, GroupTable]]:
    """Pairwise non-isomorphic built-in groups of order ``n``.

    Each group comes with its id, the 1-based position of its spec in
    ``builtin_specs(n)``, so ids do not depend on the ``kinds`` filter.
    """
    key = (n, cap, kinds)
    if key not in _BUILTIN_CACHE:
        numbered = [(i, s) for i, s in enumerate(builtin_specs(n), start=1)
                    if s.order <= cap and (kinds is None or s.kind in kinds)]
        realized = [(i, realize(s, cap)) for i, s in numbered]
        kept = _dedup([G for _, G in realized])
        kept_ids = {id(G) for G in kept}
        _BUILTIN_CACHE[key] = [(i, G) for i, G in realized if id(G) in kept_ids]
    return list(_BUILTIN_CACHE[key])


def groups_of_order(n: int, catalog: Catalog | None = None, builtins: bool = True,
                    cap: int = DEFAULT_ORDER_CAP,
                    kinds: frozenset[str] | None = None) -> GroupList:
    """Candidate groups of order ``n`` ordered by (source, id, label).

    Built-ins isomorphic to an external entry of the same order are dropped
    in favour of the catalog entry. ``complete`` is only set when the
    external catalog asserts coverage of ``n``; built-in families never claim
    completeness.
    """
    if n < 1:
        raise ValueError("group order must be positive")
    ext = catalog.of_order(n) if catalog is not None else []
    ext_tables = [e.table for e in ext]
    out: list[CatalogGroup] = []
    if builtins and n <= cap:
        pairs = builtin_groups(n, cap, kinds)
        kept = {id(G) for G in _dedup([G for _, G in pairs], against=ext_tables)}
        out += [CatalogGroup("builtin", i, G.label, G) for i, G in pairs if id(G) in kept]
    for e in ext:
        out.append(CatalogGroup("external", e.id, e.table.label, e.table, e.name))
    out.sort(key=lambda g: (g.source, g.id, g.label))
    complete = catalog is not None and n in catalog.complete_orders
    return GroupList(n, out, complete)


def resolve_group(text: str, catalog: Catalog | None = None,
                  cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """Resolve a CLI group argument: a built-in spec or ``order:id``."""
    if re.fullmatch(r"\d+:\d+", text.strip()):
        order, ident = (int(x) for x in text.split(":"))
        if catalog is None:
            raise UnsupportedSpec(f"group {text} needs --catalog")
        return catalog.get(order, ident).table
    return realize(parse_spec(text), cap, catalog)
