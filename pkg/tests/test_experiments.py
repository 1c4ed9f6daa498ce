"""Enumeration, table reproduction, verification suites and the suite executor."""

import json
import random

import jsonschema
import pytest

from conftest import load_schema
from subshift_escape.config import Settings, get_settings
from subshift_escape.errors import CapExceeded, ConfigurationError, HypothesisViolation
from subshift_escape.experiments.enumeration import (
    automorphism_count,
    canonical_form,
    enumerate_canonical_collections,
    is_restricted_growth,
    orbit_size,
    random_collection,
    random_mixed_collection,
    raw_collection_count,
)
from subshift_escape.experiments.executor import (
    SuiteExecutor,
    SuiteRequest,
    _run_request,
    execute_many,
    load_suite_config,
)
from subshift_escape.experiments.reports import (
    FailureRecord,
    Status,
    VerificationReport,
    normalize,
    to_csv_text,
    to_json_text,
)
from subshift_escape.experiments.suites import (
    counterexample_instances,
    min_period_hypothesis,
    replay_failure,
    verify_gen_period,
    verify_lemma1_uniqueness,
    verify_lemma2_bracket,
    verify_min_period,
    verify_oracles,
    verify_p2_theorem,
    verify_r_order,
)
from subshift_escape.experiments.tables import (
    TABLE_IDS,
    classify_cell,
    first_expressible,
    matches_truncated,
    parse_cell,
    reproduce_table,
    symbols_needed,
    table_definition,
)
from subshift_escape.words import has_zero_cross_correlations


class TestEnumeration:
    def test_single_words_of_length_two(self):
        collections = list(enumerate_canonical_collections(2, 2, 1))
        assert [c.texts() for c in collections] == [["00"], ["01"]]

    @pytest.mark.parametrize("q, p, t", [(2, 2, 1), (3, 2, 1), (3, 2, 2), (2, 3, 2), (4, 2, 2)])
    def test_orbits_cover_every_collection(self, q, p, t):
        canonical = [tuple(w.symbols for w in c) for c in enumerate_canonical_collections(q, p, t)]
        assert sum(orbit_size(words, q) for words in canonical) == raw_collection_count(q, p, t)
        assert all(canonical_form(words) == words for words in canonical)

    def test_restricted_growth(self):
        assert is_restricted_growth((0, 1, 0, 2))
        assert not is_restricted_growth((0, 2, 1))

    def test_canonical_form_and_automorphisms(self):
        assert canonical_form(((1, 1), (2, 2))) == ((0, 0), (1, 1))
        assert automorphism_count(((0, 0), (1, 1))) == 2
        assert orbit_size(((0, 0), (1, 1)), 3) == 3

    def test_cap(self):
        with pytest.raises(CapExceeded):
            list(enumerate_canonical_collections(4, 4, 2, cap=1000))

    def test_random_collections(self):
        rng = random.Random(11)
        for _ in range(20):
            collection = random_collection(5, 3, 2, rng, zero_cross=True)
            assert collection.t == 2 and collection.p == 3
            assert has_zero_cross_correlations(collection)
            mixed = random_mixed_collection(3, 4, 3, rng)
            assert mixed.t == 3


class TestTables:
    def test_parse_cell_maps_base_letters_first(self):
        base, hole = parse_cell("aa", "ba", 3)
        assert base.texts() == ["00"]
        assert hole.texts() == ["10"]

    def test_symbols_needed_counts_base_and_hole_together(self):
        assert symbols_needed("aa", "bc") == 3
        assert symbols_needed("ab", "ba") == 2
        assert symbols_needed(None, "abbbb,bbbba,bbbbb") == 2

    def test_first_expressible_skips_alternatives_that_do_not_fit(self):
        alternative, base, hole = first_expressible("ab", ["cd", "ac", "cb"], 3)
        assert alternative == "ac"
        assert base.texts() == ["01"] and hole.texts() == ["02"]
        assert first_expressible("aa", ["bc"], 2) is None

    def test_unknown_table(self):
        with pytest.raises(ValueError):
            table_definition("6")

    def test_every_table_has_rows_and_columns(self):
        for table_id in TABLE_IDS:
            definition = table_definition(table_id)
            assert definition["rows"] and definition["columns"]

    def test_table_one(self):
        rows = reproduce_table("1")
        assert len(rows) == 36
        counts = {status: sum(1 for r in rows if r.status is status) for status in Status}
        assert counts[Status.PASS] == 33
        assert counts[Status.IMPOSSIBLE] == 3
        assert all(r.q == 2 for r in rows if r.status is Status.IMPOSSIBLE)
        g4 = next(r for r in rows if r.column == "G4" and r.q == 3)
        assert g4.collection == "ab,ac"

    def test_truncated_cells_pass_and_keep_their_order(self):
        rows = {r.column: r for r in reproduce_table("3") if r.q == 2}
        assert rows["G5"].status is Status.PASS
        assert rows["G6"].status is Status.PASS
        assert rows["G5"].computed > rows["G6"].computed
        assert rows["G4"].note == "printed value truncated to 3 decimals"

    def test_rows_validate_against_the_schema(self):
        schema = load_schema("table_row")
        for row in reproduce_table("1"):
            jsonschema.validate(instance=normalize(row.to_json()), schema=schema)


class TestClassifyCell:
    @staticmethod
    def cell(**overrides):
        base = {"table_id": "2", "column": "G1", "q": 4, "base": None, "holes": ["aaa,bbb"],
                "collection": "aaa,bbb", "expected": 0.0252, "computed": 0.02521}
        return {**base, **overrides}

    def test_pass(self):
        row = classify_cell(self.cell(), 5e-4, {})
        assert row.status is Status.PASS
        assert row.abs_error == pytest.approx(1e-5)

    def test_fail_and_erratum_candidate(self):
        row = classify_cell(self.cell(computed=0.2), 5e-4, {})
        assert row.status is Status.FAIL
        assert row.note == "erratum candidate"

    def test_annotated_erratum(self):
        row = classify_cell(self.cell(column="G11", q=5, expected=0.160, computed=0.016), 5e-4,
                            {("G11", 5): "printed 0.160"})
        assert row.status is Status.ERRATUM
        assert row.note == "printed 0.160"

    def test_truncated_printed_value(self):
        row = classify_cell(self.cell(expected=0.072, computed=0.0725314), 5e-4, {})
        assert row.status is Status.PASS
        assert "truncated to 3" in row.note

    def test_explicit_decimals_override_the_repr(self):
        assert classify_cell(self.cell(expected=0.070, computed=0.0712), 5e-4, {}).status is Status.PASS
        row = classify_cell(self.cell(expected=0.070, computed=0.0712, decimals=3), 5e-4, {})
        assert row.status is Status.FAIL

    def test_rounding_up_is_not_truncation(self):
        assert not matches_truncated(0.073, 0.0725314)
        assert matches_truncated(0.0725, 0.07253)

    def test_impossible(self):
        row = classify_cell(self.cell(impossible=True, computed=None, collection=None), 5e-4, {})
        assert row.status is Status.IMPOSSIBLE

    def test_ellipsis_that_is_computable(self):
        row = classify_cell(self.cell(expected=None), 5e-4, {})
        assert row.status is Status.FAIL
        assert "ellipsis" in row.note

    def test_computation_error(self):
        row = classify_cell(self.cell(error="EmptySurvivorSet: nothing survives", computed=None), 5e-4, {})
        assert row.status is Status.FAIL
        assert row.note.startswith("EmptySurvivorSet")


class TestReports:
    def test_timing_is_optional(self):
        report = VerificationReport(theorem="demo", description="d", universe="u", wall_time=1.5)
        assert "wall_time" in report.to_json()
        assert "wall_time" not in report.to_json(timing=False)
        assert report.passed

    def test_failures_and_csv(self):
        report = VerificationReport(theorem="demo", description="d", universe="u")
        report.fail("compare", {"q": 3, "first": [[0, 0]]}, "wrong order")
        assert not report.passed
        text = to_csv_text(report.csv_rows())
        assert text.splitlines()[0].startswith("theorem,")
        assert "wrong order" in text

    def test_json_text_is_stable(self):
        payload = {"b": 1 / 3, "a": [1, 2]}
        assert to_json_text(payload) == to_json_text(json.loads(to_json_text(payload)))

    def test_report_schema(self):
        schema = load_schema("verification_report")
        report = verify_lemma2_bracket(samples=5, seed=3)
        jsonschema.validate(instance=normalize(report.to_json()), schema=schema)
        jsonschema.validate(instance=normalize(report.to_json(timing=False)), schema=schema)


class TestSuites:
    def test_p2_theorem(self):
        report = verify_p2_theorem(q_max=5)
        assert report.passed, report.failures
        assert report.instances_tested > 0

    def test_p2_needs_an_orderable_alphabet(self):
        with pytest.raises(ValueError):
            verify_p2_theorem(q_max=2)

    def test_lemma_suites(self):
        assert verify_lemma2_bracket(samples=20, seed=1).passed
        assert verify_lemma1_uniqueness(samples=20, seed=2).passed

    def test_correlation_determinant_is_positive_beyond_four(self):
        instance = {"q": 3, "first": [[0, 0], [1, 1]]}
        assert replay_failure({"kind": "delta_positive", "instance": instance}) is None
        report = verify_lemma1_uniqueness(samples=10, seed=12)
        assert report.instances_tested == 10
        assert not report.observations

    def test_oracles(self):
        report = verify_oracles(samples=25, seed=3, n_max=8, include_tables=False)
        assert report.passed, report.failures
        assert report.instances_tested == 25

    def test_gen_period(self):
        report = verify_gen_period(t=3, p=3, samples=5, seed=4)
        assert report.passed, report.failures

    def test_r_order_below_threshold(self):
        with pytest.raises(HypothesisViolation):
            verify_r_order(p=3, q=10, samples=1)

    def test_r_order_exploratory_records_observations_only(self):
        report = verify_r_order(p=3, q=10, samples=5, seed=5, exploratory=True)
        assert report.passed
        assert report.parameters["exploratory"]

    def test_min_period_range(self):
        assert min_period_hypothesis(2, 2, 2)
        assert min_period_hypothesis(3, 2, 5)
        assert not min_period_hypothesis(3, 2, 4)
        with pytest.raises(HypothesisViolation):
            verify_min_period(p=3, q=4)

    def test_min_period_sampled(self):
        report = verify_min_period(p=3, q=5, samples=10, seed=6)
        assert report.passed, report.failures
        assert report.instances_tested == 10

    def test_same_seed_same_report(self):
        first = verify_lemma2_bracket(samples=10, seed=9).to_json(timing=False)
        second = verify_lemma2_bracket(samples=10, seed=9).to_json(timing=False)
        assert to_json_text(first) == to_json_text(second)

    def test_counterexample_instances_replay(self):
        cases = counterexample_instances()
        assert len(cases) > 10
        for kind, instance in cases:
            if kind in ("measure", "perron_value"):
                assert replay_failure({"kind": kind, "instance": instance}) is None

    def test_replay_reports_a_reason(self):
        record = FailureRecord("compare", {"q": 3, "first": [[0, 0], [1, 1]], "second": [[0, 1], [2, 0]],
                                           "allowed": ["GREATER"]}, "")
        assert "expected GREATER, got LESS" in replay_failure(record)

    def test_replay_unknown_kind(self):
        with pytest.raises(ValueError):
            replay_failure({"kind": "nonsense", "instance": {}})


class TestExecutor:
    def test_unknown_suite(self):
        with pytest.raises(ConfigurationError):
            SuiteExecutor().execute(SuiteRequest("nonsense"))

    def test_unknown_parameter(self):
        with pytest.raises(ConfigurationError):
            SuiteExecutor().execute(SuiteRequest("lemma2", {"colour": "red"}))

    def test_domain_errors_propagate(self):
        with pytest.raises(HypothesisViolation):
            SuiteExecutor().execute(SuiteRequest("min-period", {"p": 3, "q": 4}))

    def test_execute_many_keeps_order(self):
        reports = execute_many([
            SuiteRequest("lemma2", {"samples": 3, "seed": 1}),
            SuiteRequest("lemma1", {"samples": 3, "seed": 1}),
        ])
        assert [r.theorem for r in reports] == ["lemma2", "lemma1"]

    def test_workers_receive_settings_explicitly(self):
        tight = Settings(root_tol=1e-10)
        report = _run_request(SuiteRequest("lemma2", {"samples": 2, "seed": 1}), tight)
        assert report.theorem == "lemma2"
        assert get_settings() == tight

    def test_execute_many_installs_settings_for_the_pool(self):
        tight = Settings(root_tol=1e-10)
        reports = execute_many(
            [
                SuiteRequest("lemma2", {"samples": 2, "seed": 1}),
                SuiteRequest("lemma1", {"samples": 2, "seed": 1}),
            ],
            jobs=2,
            settings=tight,
        )
        assert [r.theorem for r in reports] == ["lemma2", "lemma1"]
        assert get_settings().root_tol == 1e-10

    def test_load_config(self, tmp_path):
        path = tmp_path / "experiments.json"
        path.write_text(json.dumps({
            "suites": [{"suite": "lemma2", "params": {"samples": 4, "seed": 2}}],
            "settings": {"root_tol": 1e-10},
            "output": {"directory": str(tmp_path / "out"), "format": "csv"},
        }))
        config = load_suite_config(path)
        assert config.requests == [SuiteRequest("lemma2", {"samples": 4, "seed": 2})]
        assert config.settings.root_tol == 1e-10
        assert config.settings.table_tol == get_settings().table_tol
        assert config.output_format == "csv"

    @pytest.mark.parametrize("content", [
        "not json",
        json.dumps({"runs": []}),
        json.dumps({"suites": [{"params": {}}]}),
        json.dumps({"suites": [], "settings": {"colour": 1}}),
        json.dumps({"suites": [], "output": {"format": "xml"}}),
    ])
    def test_bad_config(self, tmp_path, content):
        path = tmp_path / "experiments.json"
        path.write_text(content)
        with pytest.raises(ConfigurationError):
            load_suite_config(path)

    def test_missing_config(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_suite_config(tmp_path / "missing.json")
