from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rulemine.declare import Rule, Template, rule_to_record
from rulemine.evaluation import (
    EvalCase,
    Granularity,
    load_cases,
    run_suite,
    score,
)
from rulemine.llm import ScriptedClient

ALPHABET = frozenset({"a", "b", "c", "d", "e", "f"})

R_AB = Rule(Template.RESPONSE, ("a", "b"))
R_CD = Rule(Template.PRECEDENCE, ("c", "d"))
R_EF = Rule(Template.NOT_CO_EXISTENCE, ("e", "f"))
R_AM = Rule(Template.AT_MOST_1, ("a",))


def case(truth, text="text", granularity=Granularity.S2S) -> EvalCase:
    return EvalCase(text, frozenset(truth), granularity, ALPHABET)


class TestScore:
    def test_perfect_extraction(self):
        cases = [case({R_AB}), case({R_CD}), case({R_EF})]
        report = score(cases, [{R_AB}, {R_CD}, {R_EF}], [0, 0, 0], [False] * 3)
        assert report.recall == 1
        assert report.precision == 1
        assert report.error_rate == 0
        assert report.failure_rate == 0

    def test_one_hit_one_miss_one_hallucination(self):
        cases = [case({R_AB, R_CD})]
        report = score(cases, [{R_AB, R_EF}], [0], [False])
        assert report.recall == Fraction(1, 2)
        assert report.precision == Fraction(1, 2)

    def test_error_and_failure_fractions(self):
        cases = [case({R_AB}) for _ in range(10)]
        cycles = [1, 2] + [0] * 8
        failures = [True] + [False] * 9
        report = score(cases, [set()] * 10, cycles, failures)
        assert report.error_rate == Fraction(2, 10)
        assert report.failure_rate == Fraction(1, 10)

    def test_micro_average_two_cases(self):
        # hand-computed: hits 2, ground truth 4, extracted 4
        cases = [case({R_AB, R_CD}), case({R_EF, R_AM})]
        extracted = [{R_AB, Rule(Template.RESPONSE, ("a", "c"))}, {R_EF, R_CD}]
        report = score(cases, extracted, [0, 0], [False, False])
        assert report.recall == Fraction(1, 2)
        assert report.precision == Fraction(1, 2)

    def test_misaligned_lengths_rejected(self):
        with pytest.raises(ValueError):
            score([case({R_AB})], [], [], [])

    def test_zero_extractions_give_zero_precision(self):
        report = score([case({R_AB})], [set()], [0], [False])
        assert report.precision == 0
        assert report.recall == 0

    @given(st.permutations(range(4)))
    def test_permutation_invariance(self, order):
        cases = [case({R_AB}), case({R_CD}), case({R_EF}), case({R_AM})]
        extracted = [{R_AB}, set(), {R_EF, R_AB}, {R_AM}]
        cycles = [0, 3, 0, 1]
        failures = [False, True, False, False]
        base = score(cases, extracted, cycles, failures)
        shuffled = score(
            [cases[i] for i in order],
            [extracted[i] for i in order],
            [cycles[i] for i in order],
            [failures[i] for i in order],
        )
        assert (base.recall, base.precision, base.error_rate, base.failure_rate) == (
            shuffled.recall,
            shuffled.precision,
            shuffled.error_rate,
            shuffled.failure_rate,
        )


def oracle_responses(cases) -> list[str]:
    return [
        json.dumps({"constraints": [rule_to_record(r) for r in sorted(c.ground_truth, key=str)]})
        for c in cases
    ]


class TestRunSuite:
    def test_oracle_client_scores_perfectly(self):
        cases = [case({R_AB}), case({R_CD, R_EF})]
        client = ScriptedClient(oracle_responses(cases))
        report = run_suite(cases, client)
        assert report.recall == 1
        assert report.precision == 1
        assert report.error_rate == 0
        assert report.failure_rate == 0

    def test_always_malformed_exhausts_every_case(self):
        cases = [case({R_AB}), case({R_CD})]
        bad = '{"constraints": [{"template": "Nope", "activities": ["a"]}]}'
        client = ScriptedClient([bad] * 20)
        report = run_suite(cases, client)
        assert report.failure_rate == 1
        assert report.recall == 0
        assert report.error_rate == 1
        assert len(client.calls) == 20  # ten per case

    def test_clarification_counts_as_empty_not_failed(self):
        cases = [case({R_AB})]
        client = ScriptedClient(["Which activity do you mean?"])
        report = run_suite(cases, client)
        assert report.failure_rate == 0
        assert report.recall == 0
        assert report.per_case[0].extracted == frozenset()

    def test_client_error_marks_case_failed_but_suite_continues(self):
        cases = [case({R_AB}), case({R_CD})]
        client = ScriptedClient(oracle_responses(cases)[:1])  # exhausts on case 2
        report = run_suite(cases, client)
        assert report.failure_rate == Fraction(1, 2)
        assert report.per_case[0].hits == 1
        assert report.per_case[1].failed

    def test_paragraph_truth_is_union_of_sentence_truths(self):
        sentence_cases = [case({R_AB}), case({R_CD}), case({R_EF})]
        par = EvalCase(
            " ".join(c.input_text for c in sentence_cases),
            frozenset().union(*(c.ground_truth for c in sentence_cases)),
            Granularity.PAR,
            ALPHABET,
        )
        client = ScriptedClient(oracle_responses([par]))
        report = run_suite([par], client)
        assert report.recall == 1
        assert len(par.ground_truth) == 3


class TestCaseFixtures:
    def test_load_round_trip(self):
        doc = {
            "cases": [
                {
                    "granularity": "s2s",
                    "text": "whenever a happens b follows",
                    "alphabet": sorted(ALPHABET),
                    "ground_truth": {"constraints": [rule_to_record(R_AB)]},
                }
            ]
        }
        cases = load_cases(json.dumps(doc))
        assert cases == [case({R_AB}, text="whenever a happens b follows")]

    def test_ground_truth_outside_alphabet_rejected(self):
        doc = {
            "cases": [
                {
                    "granularity": "s2s",
                    "text": "t",
                    "alphabet": ["a"],
                    "ground_truth": {"constraints": [rule_to_record(R_AB)]},
                }
            ]
        }
        with pytest.raises(ValueError):
            load_cases(json.dumps(doc))

    def test_malformed_document_rejected(self):
        with pytest.raises(ValueError):
            load_cases("[]")
