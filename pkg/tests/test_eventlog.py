from __future__ import annotations

import pytest

from rulemine.eventlog import (
    CsvColumns,
    EmptyLogError,
    EventLog,
    LogError,
    LogRowError,
    LogSchemaError,
    XesParseError,
    alphabet,
    check_activity,
    parse_csv,
    parse_xes,
    serialize_csv,
)

from conftest import L1_TRACES, log_of

L1_ALPHABET = {
    "A-created",
    "Doc-checked",
    "Hist-checked",
    "A-rejected",
    "A-accepted",
    "A-canceled",
}


class TestParseCsv:
    def test_table_of_13_rows_yields_l1(self, l1_csv):
        log = parse_csv(l1_csv)
        assert log.traces == L1_TRACES
        assert log.trace_count == 5
        assert log.event_count == 13
        assert set(log.alphabet) == L1_ALPHABET

    def test_header_only_is_empty_log_error(self):
        with pytest.raises(EmptyLogError):
            parse_csv("case:concept:name,concept:name\n")

    def test_timestamps_override_file_order(self):
        content = (
            "case:concept:name,concept:name,time:timestamp\n"
            "1,second,2024-03-01T10:00:00\n"
            "1,first,2024-03-01T09:00:00\n"
        )
        log = parse_csv(content)
        assert log.traces == (("first", "second"),)

    def test_missing_mapped_column_names_it(self):
        with pytest.raises(LogSchemaError) as exc:
            parse_csv("case,act\n1,a\n", CsvColumns(case="case", activity="activity"))
        assert exc.value.column == "activity"

    def test_unparsable_timestamp_reports_line(self):
        content = (
            "case:concept:name,concept:name,time:timestamp\n"
            "1,a,2024-03-01T09:00:00\n"
            "1,b,not-a-time\n"
        )
        with pytest.raises(LogRowError) as exc:
            parse_csv(content)
        assert exc.value.line == 3

    def test_custom_columns(self):
        log = parse_csv("Case,Task\n7,x\n7,y\n", CsvColumns(case="Case", activity="Task", timestamp=None))
        assert log.traces == (("x", "y"),)

    def test_deterministic(self, l1_csv):
        assert parse_csv(l1_csv) == parse_csv(l1_csv)

    def test_accepts_bytes(self, l1_csv):
        assert parse_csv(l1_csv.encode("utf-8")).traces == L1_TRACES

    def test_zulu_timestamp(self):
        content = (
            "case:concept:name,concept:name,time:timestamp\n"
            "1,a,2024-03-01T09:00:00Z\n"
        )
        assert parse_csv(content).traces == (("a",),)


class TestParseXes:
    def test_minimal_single_trace(self):
        xes = (
            "<log><trace>"
            '<event><string key="concept:name" value="a"/></event>'
            '<event><string key="concept:name" value="b"/></event>'
            "</trace></log>"
        )
        assert parse_xes(xes).traces == (("a", "b"),)

    def test_l1_xes_equals_csv_parse(self, l1_xes, l1_csv):
        assert parse_xes(l1_xes) == parse_csv(l1_csv)

    def test_event_without_concept_name_is_skipped_with_warning(self):
        xes = (
            "<log><trace>"
            '<event><string key="concept:name" value="a"/></event>'
            '<event><string key="org:resource" value="r"/></event>'
            "</trace></log>"
        )
        with pytest.warns(UserWarning) as record:
            log = parse_xes(xes)
        assert log.traces == (("a",),)
        assert len(record) == 1

    def test_malformed_xml_reports_byte_offset(self):
        with pytest.raises(XesParseError) as exc:
            parse_xes("<log><trace></log>")
        assert exc.value.byte_offset > 0

    def test_zero_traces_is_empty_log_error(self):
        with pytest.raises(EmptyLogError):
            parse_xes("<log/>")

    def test_namespaced_tags(self):
        xes = (
            '<log xmlns="http://www.xes-standard.org/"><trace>'
            '<event><string key="concept:name" value="a"/></event>'
            "</trace></log>"
        )
        assert parse_xes(xes).traces == (("a",),)


class TestAlphabet:
    def test_l1_alphabet(self, l1_log):
        assert set(alphabet(l1_log)) == L1_ALPHABET

    def test_empty_log(self):
        assert alphabet(EventLog(())) == frozenset()

    def test_duplicates_collapse(self):
        assert alphabet(log_of(["a"], ["a", "a"])) == frozenset({"a"})


class TestInvariants:
    def test_csv_round_trip(self, l1_log):
        assert parse_csv(serialize_csv(l1_log)).traces == l1_log.traces

    def test_l1_edge_count_precursor(self, l1_log):
        assert sum(len(t) + 1 for t in l1_log.traces) == 18

    def test_projection_may_leave_empty_traces(self, l1_log):
        projected = l1_log.project({"A-canceled"})
        assert projected.trace_count == 5
        assert () in projected.traces


class TestActivityLabels:
    def test_trimmed(self):
        assert check_activity("  pay  ") == "pay"

    @pytest.mark.parametrize("bad", ["", "   ", "x▷y", "□"])
    def test_rejected(self, bad):
        with pytest.raises(LogError):
            check_activity(bad)
