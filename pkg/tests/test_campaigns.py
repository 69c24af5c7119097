import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from bfk.campaigns import (
    RunConfig,
    _delta_identity_row,
    _int_matmul,
    _probe_rows,
    cached_inverse_limit,
    catalog_groups,
    emit_csv,
    emit_json,
    exit_code,
    recheck,
    run_campaign,
)
from bfk.groups import parse_descriptor
from bfk.limits import coefficient_system

CATALOG_81 = [
    (1, "cyclic:1"),
    (3, "cyclic:3"),
    (9, "cyclic:9"),
    (9, "elab:3:2"),
    (27, "cyclic:27"),
    (27, "elab:3:3"),
    (27, "prod:cyclic:9,cyclic:3"),
    (27, "xsp:3"),
    (81, "cyclic:81"),
    (81, "elab:3:4"),
    (81, "prod:cyclic:27,cyclic:3"),
    (81, "prod:cyclic:9,cyclic:3,cyclic:3"),
    (81, "prod:cyclic:9,cyclic:9"),
    (81, "prod:xsp:3,cyclic:3"),
]


def load_schema():
    text = (resources.files("bfk") / "schemas" / "report.schema.json").read_text()
    return json.loads(text)


def test_catalog_is_frozen_at_the_default_bound():
    assert catalog_groups(3, 81) == CATALOG_81


def test_catalog_descriptors_parse_to_the_listed_orders():
    for order, desc in catalog_groups(3, 81):
        assert parse_descriptor(desc, 3).order == order


def test_catalog_at_another_prime():
    assert catalog_groups(5, 25) == [
        (1, "cyclic:1"), (5, "cyclic:5"), (25, "cyclic:25"), (25, "elab:5:2")]


def test_run_config_rejects_bad_values():
    with pytest.raises(ValueError):
        RunConfig(p=2)
    with pytest.raises(ValueError):
        RunConfig(p=9)
    with pytest.raises(ValueError):
        RunConfig(max_order=10)
    with pytest.raises(ValueError):
        RunConfig(max_order=0)
    with pytest.raises(ValueError):
        RunConfig(klass="Y")
    with pytest.raises(ValueError):
        RunConfig(functor="Q")
    with pytest.raises(ValueError):
        RunConfig(jobs=0)
    with pytest.raises(ValueError):
        RunConfig(fmt="xml")


def test_run_config_echo_hides_scheduling_fields():
    cfg = RunConfig(cache_dir="/tmp/x", jobs=4, fmt="csv", seed=9)
    assert cfg.config_block() == {
        "p": 3, "max_order": 81, "class": "X", "functor": "Kdual", "seed": 9}


def test_custom_class_is_a_library_only_route():
    cfg = RunConfig(klass="custom")
    with pytest.raises(ValueError):
        run_campaign("main", cfg)


def test_unknown_campaign_rejected():
    with pytest.raises(ValueError):
        run_campaign("bogus", RunConfig())


def test_induction_campaign_small_bound_all_verified():
    doc = run_campaign("induction", RunConfig(max_order=27))
    assert exit_code(doc) == 0
    assert len(doc["rows"]) == 26
    assert all(r["status"] == "verified" for r in doc["rows"])
    assert all(recheck(r) for r in doc["rows"])
    jsonschema.validate(doc, load_schema())


def test_bounds_below_scoped_groups_skip_with_exit_three():
    doc = run_campaign("induction", RunConfig(max_order=3))
    assert exit_code(doc) == 3
    skipped = {(r["claim"], r["group"]) for r in doc["rows"]
               if r["status"] == "skipped"}
    assert skipped == {
        ("induction-difference-is-scaled-delta", "xsp:3"),
        ("induction-eps-generates-rank-two-kernel", "elab:3:2")}
    assert all(recheck(r) for r in doc["rows"])


def test_exact_campaign_small_bound_all_verified():
    doc = run_campaign("exact", RunConfig(max_order=27))
    assert exit_code(doc) == 0
    assert all(r["status"] == "verified" and recheck(r) for r in doc["rows"])


def test_main_campaign_small_bound_all_verified():
    doc = run_campaign("main", RunConfig(max_order=9))
    assert exit_code(doc) == 0
    assert all(r["status"] == "verified" and recheck(r) for r in doc["rows"])
    claims = {r["claim"] for r in doc["rows"]}
    assert "unit-iso-x3" in claims
    assert "unit-retraction-scales-by-order" in claims
    jsonschema.validate(doc, load_schema())


def test_probe_rows_record_kernel_invariants_as_data():
    rows = _probe_rows("prod:xsp:3,cyclic:3", RunConfig(max_order=81))
    by_claim = {r["claim"]: r for r in rows}
    fin = by_claim["counit-kernel-finite"]
    assert fin["status"] == "verified"
    assert fin["witness"]["invariants"] == [3] * 27
    assert fin["witness"]["trivial"] is False
    sur = by_claim["counit-surjective"]
    assert sur["status"] == "verified"
    assert all(recheck(r) for r in rows)


def test_injected_delta_mismatch_is_refuted_with_checkable_witness():
    row = _delta_identity_row(RunConfig(), factor=4)
    assert row["status"] == "refuted"
    assert recheck(row)
    tampered = dict(row, witness=dict(row["witness"],
                                      right=row["witness"]["left"]))
    assert not recheck(tampered)
    doc = {"rows": [row]}
    assert exit_code(doc) == 2


def test_recheck_membership_failure_from_recorded_data_alone():
    row = {"status": "refuted",
           "witness": {"kind": "membership-failure", "vector": [1, 0],
                       "basis": [[2, 0]], "ambient": 2}}
    assert recheck(row)
    inside = {"status": "refuted",
              "witness": {"kind": "membership-failure", "vector": [2, 0],
                          "basis": [[2, 0]], "ambient": 2}}
    assert not recheck(inside)


def test_recheck_rejects_unknown_kinds_and_malformed_rows():
    assert not recheck({"status": "verified", "witness": {"kind": "mystery"}})
    assert not recheck({"status": "verified", "witness": {}})
    assert not recheck({"status": "verified"})


def test_reports_are_byte_identical_across_runs():
    cfg = RunConfig(max_order=27, seed=5)
    a = emit_json(run_campaign("appendix", cfg))
    b = emit_json(run_campaign("appendix", cfg))
    assert a == b


def test_parallel_run_matches_serial_run():
    serial = emit_json(run_campaign("appendix", RunConfig(max_order=27)))
    parallel = emit_json(run_campaign("appendix",
                                      RunConfig(max_order=27, jobs=2)))
    assert serial == parallel


def test_rows_sorted_by_claim_then_group():
    doc = run_campaign("exact", RunConfig(max_order=27))
    keys = [(r["claim"], r["group"]) for r in doc["rows"]]
    assert keys == sorted(keys)


def test_csv_emission_shape():
    doc = run_campaign("induction", RunConfig(max_order=9))
    lines = emit_csv(doc).splitlines()
    assert lines[0] == "campaign,claim,group,status,witness,wall_time"
    assert len(lines) == len(doc["rows"]) + 1
    assert all(line.endswith(",") for line in lines[1:])  # wall_time empty


def test_limit_disk_cache_round_trip(tmp_path):
    cache = str(tmp_path)
    G1 = parse_descriptor("xsp:3", 3)
    lim1 = cached_inverse_limit(G1, "X3", "Kdual", cache)
    files = list(tmp_path.glob("*.limit.json"))
    assert len(files) == 1
    # a fresh group object forces the disk path rather than the memo
    G2 = parse_descriptor("xsp:3", 3)
    lim2 = cached_inverse_limit(G2, "X3", "Kdual", cache)
    assert lim2.rank == lim1.rank == 5
    assert np.array_equal(np.asarray(lim2.basis, dtype=object),
                          np.asarray(lim1.basis, dtype=object))


def test_limit_disk_cache_recovers_from_corruption(tmp_path):
    cache = str(tmp_path)
    G1 = parse_descriptor("elab:3:2", 3)
    lim1 = cached_inverse_limit(G1, "E", "B", cache)
    path = next(tmp_path.glob("*.limit.json"))
    path.write_text("{not json")
    G2 = parse_descriptor("elab:3:2", 3)
    lim2 = cached_inverse_limit(G2, "E", "B", cache)
    assert lim2.rank == lim1.rank
    assert json.loads(path.read_text())["format"] == "bfk-limit-basis"


def test_int_matmul_is_exact_in_both_regimes():
    small = _int_matmul(np.array([[2, 1]], dtype=object),
                        np.array([[3], [4]], dtype=object))
    assert int(small[0, 0]) == 10
    big = _int_matmul(np.array([[2 ** 40]], dtype=object),
                      np.array([[2 ** 40]], dtype=object))
    assert int(big[0, 0]) == 2 ** 80


def test_main_worker_unit_matrix_matches_systems(tmp_path):
    # the cached limit and a freshly built system agree on shape
    G = parse_descriptor("xsp:3", 3)
    lim = cached_inverse_limit(G, "X3", "Kdual", str(tmp_path))
    system = coefficient_system(G, "X3", "Kdual")
    assert lim.basis.shape == (system.total, lim.rank)
