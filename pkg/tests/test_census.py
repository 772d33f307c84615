import dataclasses
import json

import pytest

from planar_actions import census
from planar_actions.catalog import load_catalog_file
from planar_actions.errors import SchemaError

from oracles import phi


@pytest.fixture(scope="module")
def genus2():
    return census.run_census(2)


def _find(rows, periods, label):
    hits = [r for r in rows if tuple(r.signature) == periods and r.group["label"] == label]
    assert len(hits) == 1
    return hits[0]


def test_order_two_row(genus2):
    rows = [r for r in genus2 if r.group["order"] == 2]
    assert len(rows) == 1
    r = rows[0]
    assert r.signature == [2] * 6 and r.group["label"] == "cyclic:2"
    assert (r.epi, r.sequi, r.equiv) == (1, 1, 1)


def test_z8_row(genus2):
    r = _find(genus2, (2, 8, 8), "cyclic:8")
    assert (r.epi, r.sequi, r.equiv) == (4, 1, 1)
    assert r.representatives == [[4, 1, 3]]


def test_rows_sorted_and_consistent(genus2):
    assert genus2 == sorted(genus2, key=lambda r: r.sort_key)
    for r in genus2:
        assert 1 <= r.equiv <= r.sequi <= r.epi
        assert len(r.representatives) == r.equiv
        if r.group["cyclic"]:
            assert r.sequi * phi(r.group["order"]) == r.epi


@pytest.mark.parametrize("n", [3, 4, 5])
def test_dihedral_row_merges_classes(n):
    rows = census.census_cell(n - 1, 2 * n, None)
    r = _find(rows, (2, 2, n, n), f"dihedral:{n}")
    assert r.equiv < r.sequi


def test_verify_passes_on_fresh_rows(genus2):
    report = census.verify_rows(census.loads(census.dumps(genus2)))
    assert report.ok, report.lines()
    assert report.checks["representatives"].checked == len(genus2)


def test_verify_flags_tampered_rows(genus2):
    z8 = _find(genus2, (2, 8, 8), "cyclic:8")
    bad_equiv = dataclasses.replace(z8, equiv=z8.sequi + 1)
    report = census.verify_rows([bad_equiv])
    assert not report.ok
    assert report.failed_rows("count_order") == [bad_equiv.key]

    bad_phi = dataclasses.replace(z8, epi=5)
    report = census.verify_rows([bad_phi], deep=False)
    assert report.failed_rows("cyclic_phi") == [bad_phi.key]


def test_verify_flags_rh_violation(genus2):
    z8 = _find(genus2, (2, 8, 8), "cyclic:8")
    wrong = dataclasses.replace(z8, genus=3)
    assert census.verify_rows([wrong], deep=False).failed_rows("riemann_hurwitz") == [wrong.key]


def test_emit_self_diff_is_empty(tmp_path, genus2):
    p = tmp_path / "a.json"
    census.emit(genus2, p)
    assert census.diff(p, p).empty
    assert census.load(p) == genus2


def test_diff_reports_single_change(tmp_path, genus2):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    census.emit(genus2, a)
    doc = json.loads(a.read_text())
    doc["rows"][3]["equiv"] += 1
    b.write_text(json.dumps(doc))
    report = census.diff(a, b)
    assert not report.added and not report.removed
    assert len(report.changed) == 1 and set(report.changed[0]["fields"]) == {"equiv"}


def test_diff_catalog_adds_rows(tmp_path):
    recs = [{"order": 5, "id": 1, "name": "C5", "degree": 5, "generators": [[1, 2, 3, 4, 0]]}]
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"version": 1, "complete_orders": [5], "groups": recs}))
    cat = load_catalog_file(path)
    small = census.run_census(2, catalog=None, options=census.CensusOptions(builtins=False))
    large = census.run_census(2, catalog=cat, options=census.CensusOptions(builtins=False))
    assert small == []
    report = census.diff_rows(small, large)
    assert len(report.added) == len(large) > 0 and not report.removed
    assert all(r.complete and r.group["source"] == "external" for r in large)


def test_schema_mismatch(tmp_path):
    p = tmp_path / "old.json"
    p.write_text(json.dumps({"version": 0, "rows": []}))
    with pytest.raises(SchemaError):
        census.load(p)
    with pytest.raises(SchemaError):
        census.loads("not json")
    with pytest.raises(SchemaError):
        census.loads(json.dumps({"version": 1, "rows": [{"genus": 2}]}))


def test_include_empty_rows():
    rows = census.census_cell(2, 4, None, census.CensusOptions(include_empty=True))
    empty = [r for r in rows if r.status == census.STATUS_EMPTY]
    assert empty and all((r.epi, r.sequi, r.equiv) == (0, 0, 0) for r in empty)
    assert census.verify_rows(rows).ok
    assert len(census.census_cell(2, 4, None)) == len(rows) - len(empty)


def test_cap_exceeded_status_keeps_row():
    rows = census.census_cell(2, 3, None, census.CensusOptions(epi_cap=2))
    [r] = [r for r in rows if r.signature == [3, 3, 3, 3]]
    assert r.status == census.STATUS_CAP and r.epi == 6 and r.sequi is None
    assert census.verify_rows(rows).ok


def test_words_decoration():
    rows = census.census_cell(2, 8, None, census.CensusOptions(words=True))
    for r in rows:
        assert r.words is not None and len(r.words) == len(r.representatives)
    text = census.dumps(rows)
    assert census.dumps(census.loads(text)) == text


def test_parallel_matches_serial():
    opts = census.CensusOptions(kinds=frozenset({"cyclic"}))
    assert census.run_census(2, 3, options=opts, jobs=2) == census.run_census(2, 3, options=opts)


def test_totient_matches_oracle():
    assert [census.totient(n) for n in range(1, 60)] == [phi(n) for n in range(1, 60)]


def _gf8_times_x(v):
    v <<= 1
    return v ^ 0b1011 if v & 8 else v


def test_genus_seven_partial_catalog(tmp_path):
    # affine group of GF(8) and the holomorph of Z9, as a non-complete catalog
    recs = [
        {"order": 56, "id": 11, "name": "AGL(1,8)", "degree": 8,
         "generators": [[i ^ 1 for i in range(8)], [_gf8_times_x(i) for i in range(8)]]},
        {"order": 54, "id": 6, "name": "Hol(Z9)", "degree": 9,
         "generators": [[(i + 1) % 9 for i in range(9)], [(2 * i) % 9 for i in range(9)]]},
    ]
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"version": 1, "complete_orders": [], "groups": recs}))
    cat = load_catalog_file(path)
    opts = census.CensusOptions(builtins=False)
    rows = {(r.group["order"], tuple(r.signature)): r
            for n in (54, 56) for r in census.census_cell(7, n, cat, opts)}
    agl = rows[(56, (2, 7, 7))]
    assert (agl.epi, agl.sequi, agl.equiv) == (336, 2, 1)
    hol = rows[(54, (2, 6, 9))]
    assert (hol.epi, hol.sequi, hol.equiv) == (108, 2, 2)
    assert not agl.complete
    assert census.verify_rows(list(rows.values()), cat).ok
