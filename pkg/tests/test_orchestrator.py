from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rulemine.declare import Rule, Template
from rulemine.eventlog import EventLog
from rulemine.llm import (
    Clarification,
    ClientError,
    Conversation,
    CycleFailure,
    CycleSuccess,
    ExtractedRules,
    Invalid,
    Message,
    PromptError,
    PromptVariant,
    Role,
    ScriptedClient,
    activities_report,
    build_prompt,
    parse_outcome,
    run_cycle,
    task_description,
    validate,
)

ALPHABET = frozenset({"a", "b", "c"})

GOOD_JSON = '{"constraints": [{"template": "Response", "activities": ["a", "b"]}]}'
BAD_TEMPLATE_JSON = '{"constraints": [{"template": "Respond", "activities": ["a", "b"]}]}'


def conversation(**kwargs) -> Conversation:
    return Conversation(alphabet=ALPHABET, **kwargs)


class TestBuildPrompt:
    def test_fresh_conversation_has_no_rules_report(self):
        conv = conversation()
        msg = Message(Role.DOMAIN_EXPERT, "describe the process")
        prompt = build_prompt(conv, msg)
        assert [m.role for m in prompt] == [Role.SERVICE, Role.SERVICE, Role.DOMAIN_EXPERT]
        assert prompt[0].text == task_description(PromptVariant.INTERACTIVE)
        assert prompt[1].text == activities_report(ALPHABET)
        assert prompt[2] is msg

    def test_selected_rules_insert_report_before_history(self):
        conv = conversation(selected_rules={Rule(Template.AT_MOST_1, ("a",))})
        conv.history = [
            Message(Role.DOMAIN_EXPERT, "earlier"),
            Message(Role.ASSISTANT, "reply"),
        ]
        prompt = build_prompt(conv, Message(Role.DOMAIN_EXPERT, "now"))
        assert prompt[2].role is Role.SERVICE
        assert "the user has selected the following rules" in prompt[2].text
        assert "AtMost1(a)" in prompt[2].text
        assert prompt[3:5] == conv.history
        assert prompt[5].text == "now"

    def test_service_error_message_goes_last(self):
        conv = conversation()
        conv.history = [Message(Role.DOMAIN_EXPERT, "x"), Message(Role.ASSISTANT, "y")]
        err = Message(Role.SERVICE, "problem report")
        prompt = build_prompt(conv, err)
        assert prompt[-1] is err
        assert prompt[2:4] == conv.history

    def test_empty_alphabet_rejected(self):
        conv = Conversation(alphabet=frozenset())
        with pytest.raises(PromptError):
            build_prompt(conv, Message(Role.DOMAIN_EXPERT, "hi"))

    def test_prefix_is_stable(self):
        conv = conversation()
        first = build_prompt(conv, Message(Role.DOMAIN_EXPERT, "one"))
        conv.history += [Message(Role.DOMAIN_EXPERT, "one"), Message(Role.ASSISTANT, "r")]
        second = build_prompt(conv, Message(Role.DOMAIN_EXPERT, "two"))
        assert first[0] == second[0]
        assert first[1] == second[1]

    def test_assistant_cannot_author_new_message(self):
        with pytest.raises(ValueError):
            build_prompt(conversation(), Message(Role.ASSISTANT, "nope"))


class TestParseOutcome:
    def test_bare_json(self):
        outcome = parse_outcome(GOOD_JSON)
        assert isinstance(outcome, ExtractedRules)
        assert outcome.candidates == ({"template": "Response", "activities": ["a", "b"]},)

    def test_fenced_json(self):
        outcome = parse_outcome("```json\n" + GOOD_JSON + "\n```")
        assert isinstance(outcome, ExtractedRules)

    def test_json_embedded_in_prose(self):
        outcome = parse_outcome("Here are the constraints:\n" + GOOD_JSON + "\nRegards")
        assert isinstance(outcome, ExtractedRules)

    def test_question_is_clarification(self):
        text = "Which of the two objection activities do you mean?"
        assert parse_outcome(text) == Clarification(text)

    def test_truncated_json_is_clarification(self):
        text = '{"constraints": ['
        assert parse_outcome(text) == Clarification(text)

    def test_empty_is_invalid(self):
        assert parse_outcome("") == Invalid(("empty response",))
        assert parse_outcome("   \n") == Invalid(("empty response",))

    def test_object_without_constraints_is_clarification(self):
        assert isinstance(parse_outcome('{"rules": []}'), Clarification)


class TestValidate:
    def test_unknown_template_with_index(self):
        rules, diags = validate([{"template": "Respond", "activities": ["a", "b"]}], ALPHABET)
        assert not rules
        assert diags == ["constraint 0: unknown template 'Respond'"]

    def test_arity_mismatch(self):
        _, diags = validate([{"template": "AtMost1", "activities": ["a", "b"]}], ALPHABET)
        assert len(diags) == 1 and "takes 1" in diags[0]

    def test_unknown_activity(self):
        _, diags = validate(
            [{"template": "Response", "activities": ["a", "Unblock Claim 2"]}], ALPHABET
        )
        assert len(diags) == 1
        assert "'Unblock Claim 2' is not in the event log" in diags[0]

    def test_duplicate_activities_in_binary_rule(self):
        _, diags = validate([{"template": "Response", "activities": ["a", "a"]}], ALPHABET)
        assert len(diags) == 1 and "must differ" in diags[0]

    def test_all_diagnostics_collected(self):
        records = [
            {"template": "Respond", "activities": ["a", "b"]},
            {"template": "Response", "activities": ["a", "z"]},
            {"template": "AtLeast1", "activities": ["b"]},
        ]
        rules, diags = validate(records, ALPHABET)
        assert not rules  # any diagnostic rejects the whole batch
        assert len(diags) == 2
        assert diags[0].startswith("constraint 0")
        assert diags[1].startswith("constraint 1")

    def test_valid_records_build_rules(self):
        records = json.loads(GOOD_JSON)["constraints"]
        rules, diags = validate(records, ALPHABET)
        assert not diags
        assert rules == [Rule(Template.RESPONSE, ("a", "b"))]


TEMPLATE_STRATEGY = st.sampled_from(list(Template))


@given(
    st.lists(
        st.tuples(TEMPLATE_STRATEGY, st.permutations(sorted(ALPHABET))),
        max_size=4,
    )
)
def test_validate_accepts_exactly_the_interchange_language(items):
    records = [
        {"template": t.value, "activities": list(perm[: t.arity])}
        for t, perm in items
    ]
    rules, diags = validate(records, ALPHABET)
    assert not diags
    assert [r.template.value for r in rules] == [t.value for t, _ in items]

    if records:
        mutated = [dict(r) for r in records]
        mutated[0]["template"] = "NoSuchTemplate"
        rules2, diags2 = validate(mutated, ALPHABET)
        assert not rules2 and diags2


class TestRunCycle:
    def test_malformed_then_valid_is_one_error_cycle(self):
        client = ScriptedClient([BAD_TEMPLATE_JSON, GOOD_JSON])
        conv = conversation()
        outcome = run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "desc"))
        assert isinstance(outcome, CycleSuccess)
        assert outcome.error_cycles == 1
        assert outcome.rules == (Rule(Template.RESPONSE, ("a", "b")),)
        assert len(client.calls) == 2
        # the retry prompt ends with a service-role diagnostic
        retry_prompt = client.calls[1]
        assert retry_prompt[-1].role is Role.SERVICE
        assert "unknown template" in retry_prompt[-1].text

    def test_always_malformed_fails_after_exactly_ten_invocations(self):
        client = ScriptedClient([BAD_TEMPLATE_JSON] * 10)
        conv = conversation()
        outcome = run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "desc"))
        assert isinstance(outcome, CycleFailure)
        assert outcome.error_cycles == 10
        assert len(client.calls) == 10
        assert len(outcome.transcript) == 10

    def test_clarification_returns_immediately(self):
        client = ScriptedClient(["Could you name the exact activity?"])
        conv = conversation()
        outcome = run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "vague"))
        assert isinstance(outcome, Clarification)
        assert len(client.calls) == 1
        assert conv.attempts_remaining == conv.max_attempts - 1
        # no validation error message was ever sent
        assert all(m.role is not Role.SERVICE for m in conv.history)

    def test_history_grows_by_two_per_invocation(self):
        client = ScriptedClient([GOOD_JSON])
        conv = conversation()
        run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "desc"))
        assert [m.role for m in conv.history] == [Role.DOMAIN_EXPERT, Role.ASSISTANT]
        assert conv.history[1].text == GOOD_JSON

    def test_client_error_leaves_history_consistent(self):
        client = ScriptedClient([])  # exhausted immediately
        conv = conversation()
        with pytest.raises(ClientError):
            run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "desc"))
        assert conv.history == []

    def test_stats_computed_when_log_given(self):
        log = EventLog((("a", "b"), ("a",)))
        client = ScriptedClient([GOOD_JSON])
        conv = conversation()
        outcome = run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "d"), log=log)
        assert isinstance(outcome, CycleSuccess)
        assert outcome.stats is not None
        assert outcome.stats[0].activated == 2
        assert outcome.stats[0].satisfied == 1

    def test_empty_response_counts_as_error_cycle(self):
        client = ScriptedClient(["", GOOD_JSON])
        conv = conversation()
        outcome = run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "d"))
        assert isinstance(outcome, CycleSuccess)
        assert outcome.error_cycles == 1

    def test_expert_message_resets_attempts(self):
        conv = conversation()
        conv.attempts_remaining = 0
        client = ScriptedClient([GOOD_JSON])
        outcome = run_cycle(conv, client, Message(Role.DOMAIN_EXPERT, "d"))
        assert isinstance(outcome, CycleSuccess)


class TestPromptVariants:
    def test_interactive_mentions_clarification(self):
        text = task_description(PromptVariant.INTERACTIVE)
        assert "clarification" in text.lower()
        assert "# Examples" in text

    def test_few_shot_drops_clarification_keeps_examples(self):
        text = task_description(PromptVariant.FEW_SHOT)
        assert "clarification" not in text.lower()
        assert "# Examples" in text

    def test_zero_shot_drops_examples_too(self):
        text = task_description(PromptVariant.ZERO_SHOT)
        assert "clarification" not in text.lower()
        assert "# Examples" not in text

    def test_activities_report_sorted_and_prefixed(self):
        report = activities_report({"b", "a"})
        assert "Please only use these activities" in report
        assert report.index("- a") < report.index("- b")
