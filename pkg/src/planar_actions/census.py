"""Census pipeline: genus -> signatures -> groups -> epi/sequi/equiv rows.

Census files are canonical JSON (sorted keys, sorted rows, integers only) so
identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import braid_action as ba
from .catalog import Catalog, CatalogGroup, groups_of_order, parse_spec, realize
from .epimorphisms import DEFAULT_EPI_CAP, count_epimorphisms, epimorphism_array, is_valid_vector
from .errors import PlanarActionsError, SchemaError
from .group_engine import GroupTable, element_words
from .signatures import Signature, genus_of, hurwitz_bound, solve_signatures

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

STATUS_OK = "ok"
STATUS_EMPTY = "empty"
STATUS_CAP = "epi_cap_exceeded"


@dataclass
class CensusRow:
    genus: int
    signature: list[int]
    group: dict
    epi: int
    sequi: int | None
    equiv: int | None
    representatives: list[list[int]] = field(default_factory=list)
    complete: bool = False
    status: str = STATUS_OK
    words: list[list[str]] | None = None

    @property
    def key(self) -> tuple:
        g = self.group
        return (self.genus, tuple(self.signature), g["order"], g["source"], g["id"])

    @property
    def sort_key(self) -> tuple:
        g = self.group
        return (self.genus, g["order"], tuple(self.signature), g["source"], g["id"])

    def to_json(self) -> dict:
        d = asdict(self)
        if d["words"] is None:
            del d["words"]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "CensusRow":
        try:
            return cls(
                genus=int(d["genus"]),
                signature=[int(m) for m in d["signature"]],
                group=dict(d["group"]),
                epi=int(d["epi"]),
                sequi=None if d.get("sequi") is None else int(d["sequi"]),
                equiv=None if d.get("equiv") is None else int(d["equiv"]),
                representatives=[list(map(int, v)) for v in d.get("representatives", [])],
                complete=bool(d.get("complete", False)),
                status=str(d.get("status", STATUS_OK)),
                words=d.get("words"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed census row: {exc}") from exc


@dataclass(frozen=True)
class CensusOptions:
    include_empty: bool = False
    epi_cap: int = DEFAULT_EPI_CAP
    builtins: bool = True
    kinds: frozenset[str] | None = None   # restrict built-in group families
    words: bool = False


def _group_info(cg: CatalogGroup) -> dict:
    G = cg.table
    return {
        "order": G.order,
        "source": cg.source,
        "id": cg.id,
        "label": cg.label,
        "name": cg.name,
        "abelian": G.is_abelian,
        "cyclic": G.is_cyclic,
    }


def classify_row(G: GroupTable, sig: Signature, genus: int, info: dict, complete: bool,
                 options: CensusOptions = CensusOptions()) -> CensusRow | None:
    """Counts and representatives for one (signature, group) pair."""
    try:
        E = epimorphism_array(G, sig, cap=options.epi_cap)
    except OverflowError:
        epi = count_epimorphisms(G, sig)
        log.warning("%s on %s: %d epimorphisms exceed cap %d; classes not computed",
                    info["label"], sig, epi, options.epi_cap)
        return CensusRow(genus, list(sig.periods), info, epi, None, None, [], complete, STATUS_CAP)
    if len(E) == 0:
        if not options.include_empty:
            return None
        return CensusRow(genus, list(sig.periods), info, 0, 0, 0, [], complete, STATUS_EMPTY)
    strong = ba.strong_classes(G, E)
    equiv = ba.equivalence_classes(G, sig, E)
    reps = [list(v) for v in equiv.representatives]
    words = None
    if options.words and G.gens:
        names = element_words(G)
        words = [[names[y] for y in v] for v in reps]
    return CensusRow(genus, list(sig.periods), info, int(len(E)), strong.count, equiv.count,
                     reps, complete, STATUS_OK, words)


def census_cell(genus: int, order: int, catalog: Catalog | None,
                options: CensusOptions = CensusOptions()) -> list[CensusRow]:
    """All rows for one (genus, group order) pair."""
    sigs = solve_signatures(genus, order)
    if not sigs:
        return []
    groups = groups_of_order(order, catalog, builtins=options.builtins, kinds=options.kinds)
    rows: list[CensusRow] = []
    for cg in groups:
        info = _group_info(cg)
        for sig in sigs:
            row = classify_row(cg.table, sig, genus, info, groups.complete, options)
            if row is not None:
                rows.append(row)
    return rows


def _cell_job(args) -> list[CensusRow]:
    return census_cell(*args)


def run_census(genus_min: int, genus_max: int | None = None, catalog: Catalog | None = None,
               options: CensusOptions = CensusOptions(), jobs: int = 1,
               orders: Iterable[int] | None = None) -> list[CensusRow]:
    """Rows for every genus in range, sorted by (genus, order, signature, group)."""
    if genus_max is None:
        genus_max = genus_min
    if genus_min < 2:
        raise PlanarActionsError("census genus must be >= 2")
    wanted = None if orders is None else set(orders)
    cells = [(g, n, catalog, options)
             for g in range(genus_min, genus_max + 1)
             for n in range(2, hurwitz_bound(g) + 1)
             if wanted is None or n in wanted]
    rows: list[CensusRow] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_cell_job, cells, chunksize=4):
                rows.extend(part)
    else:
        for cell in cells:
            rows.extend(census_cell(*cell))
    rows.sort(key=lambda r: r.sort_key)
    return rows


# --------------------------------------------------------------------------
# serialization


def dumps(rows: Sequence[CensusRow]) -> str:
    doc = {"version": SCHEMA_VERSION,
           "rows": [r.to_json() for r in sorted(rows, key=lambda r: r.sort_key)]}
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def emit(rows: Sequence[CensusRow], path: str | Path) -> None:
    Path(path).write_text(dumps(rows), encoding="utf-8")


def loads(text: str) -> list[CensusRow]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported census schema version "
                          f"{doc.get('version') if isinstance(doc, dict) else None!r}")
    return [CensusRow.from_json(d) for d in doc.get("rows", [])]


def load(path: str | Path) -> list[CensusRow]:
    return loads(Path(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# verification


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[tuple] = field(default_factory=list)
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class VerifyReport:
    checks: dict[str, CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed_rows(self, name: str) -> list[tuple]:
        return self.checks[name].failures

    def lines(self) -> list[str]:
        out = []
        for c in self.checks.values():
            status = "PASS" if c.passed else "FAIL"
            extra = f", {c.skipped} skipped" if c.skipped else ""
            out.append(f"{status} {c.name}: {c.checked} rows checked{extra}")
            for key in c.failures[:20]:
                out.append(f"    offending row {key}")
        return out


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _rebuild_group(info: dict, catalog: Catalog | None) -> GroupTable | None:
    try:
        if info.get("source") == "external":
            if catalog is None:
                return None
            return catalog.get(info["order"], info["id"]).table
        return realize(parse_spec(info["label"]))
    except PlanarActionsError:
        return None


_CHECKS = ("riemann_hurwitz", "count_order", "cyclic_phi", "abelian_vertical",
           "distinct_triangle", "representatives")


def verify_rows(rows: Sequence[CensusRow], catalog: Catalog | None = None,
                deep: bool = True) -> VerifyReport:
    """Independent consistency checks on census rows.

    ``deep`` rebuilds each group to re-validate representatives and the
    triviality of the pure-braid action on abelian groups.
    """
    checks = {name: CheckResult(name) for name in _CHECKS}
    for row in rows:
        key = row.key
        n = row.group["order"]
        try:
            sig = Signature(tuple(row.signature))
        except PlanarActionsError:
            checks["riemann_hurwitz"].checked += 1
            checks["riemann_hurwitz"].failures.append(key)
            continue

        c = checks["riemann_hurwitz"]
        c.checked += 1
        if not (row.genus >= 2 and sig.r >= 3 and sig.is_hyperbolic()
                and genus_of(sig, n) == row.genus and n <= hurwitz_bound(row.genus)
                and all(n % m == 0 for m in sig.periods)):
            c.failures.append(key)

        c = checks["count_order"]
        c.checked += 1
        if row.status == STATUS_EMPTY:
            if (row.epi, row.sequi, row.equiv) != (0, 0, 0):
                c.failures.append(key)
        elif row.epi < 1:
            c.failures.append(key)
        elif row.status == STATUS_OK:
            if row.sequi is None or row.equiv is None or not (1 <= row.equiv <= row.sequi <= row.epi):
                c.failures.append(key)

        counted = row.status == STATUS_OK
        if row.group.get("cyclic"):
            c = checks["cyclic_phi"]
            if counted:
                c.checked += 1
                if row.sequi * totient(n) != row.epi:
                    c.failures.append(key)
            elif row.status == STATUS_CAP:
                c.checked += 1
                if row.epi % totient(n):
                    c.failures.append(key)

        if sig.r == 3 and len(set(sig.periods)) == 3 and counted:
            c = checks["distinct_triangle"]
            c.checked += 1
            if row.equiv != row.sequi:
                c.failures.append(key)

        if not deep or not counted:
            continue
        G = _rebuild_group(row.group, catalog)
        c = checks["representatives"]
        if G is None or G.order != n:
            c.skipped += 1
            if row.group.get("abelian"):
                checks["abelian_vertical"].skipped += 1
            continue
        c.checked += 1
        reps = [tuple(v) for v in row.representatives]
        if len(reps) != row.equiv or len(set(reps)) != len(reps) \
                or not all(is_valid_vector(G, sig, v) for v in reps):
            c.failures.append(key)
        if row.group.get("abelian"):
            c = checks["abelian_vertical"]
            c.checked += 1
            E = epimorphism_array(G, sig)
            if len(E) != row.epi or ba.vertical_classes(G, E).count != len(E):
                c.failures.append(key)
    return VerifyReport(checks)


# --------------------------------------------------------------------------
# diff


@dataclass
class DiffReport:
    added: list[dict]
    removed: list[dict]
    changed: list[dict]

    @property
    def empty(self) -> bool:
        return not (self.added or self.removed or self.changed)

    def lines(self) -> list[str]:
        out = []
        for d in self.removed:
            out.append(f"- {d['key']}")
        for d in self.added:
            out.append(f"+ {d['key']}")
        for d in self.changed:
            fields = ", ".join(f"{k}: {a} -> {b}" for k, (a, b) in d["fields"].items())
            out.append(f"~ {d['key']} {fields}")
        return out


def _key_text(key: tuple) -> str:
    genus, periods, order, source, ident = key
    return f"g={genus} sig=0;{','.join(map(str, periods))} order={order} group={source}:{ident}"


def diff_rows(rows_a: Sequence[CensusRow], rows_b: Sequence[CensusRow]) -> DiffReport:
    a = {r.key: r for r in rows_a}
    b = {r.key: r for r in rows_b}
    removed = [{"key": _key_text(k)} for k in sorted(a.keys() - b.keys())]
    added = [{"key": _key_text(k)} for k in sorted(b.keys() - a.keys())]
    changed = []
    for k in sorted(a.keys() & b.keys()):
        fields = {}
        for name in ("epi", "sequi", "equiv"):
            va, vb = getattr(a[k], name), getattr(b[k], name)
            if va != vb:
                fields[name] = (va, vb)
        if fields:
            changed.append({"key": _key_text(k), "fields": fields})
    return DiffReport(added, removed, changed)


def diff(path_a: str | Path, path_b: str | Path) -> DiffReport:
    return diff_rows(load(path_a), load(path_b))
