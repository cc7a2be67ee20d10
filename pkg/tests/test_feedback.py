from __future__ import annotations

import pytest

from conftest import profile
from oracles import jaccard
from privcheck.feedback import (
    NoRoundsError,
    Recommendation,
    RecommendationCode,
    RoundResult,
    Smiley,
    WrongRoundCountError,
    awareness_index,
    build_report,
    friend_list_bonus,
    overall_score,
    public_item_penalty,
    recommendations,
    smiley,
)
from privcheck.snapshot import AudienceSpec


def result(item="i1", points=10000, selected=(), viewers=(), wrong=(), missed=()):
    return RoundResult(
        item=item,
        points=points,
        wrong_picks=tuple(wrong),
        missed_viewers=tuple(missed),
        selected=frozenset(selected),
        displayed_viewers=frozenset(viewers),
    )


def five_rounds(points=(10000,) * 5):
    return [
        result(item=f"i{k + 1}", points=p, selected={"c1"}, viewers={"c1"})
        for k, p in enumerate(points)
    ]


class TestFriendListBonus:
    def test_no_lists_no_bonus(self):
        assert friend_list_bonus(profile()) == 0

    def test_only_lists_that_are_defined_and_used_count(self):
        snapshot = profile(
            lists={"a": ["c1"], "b": ["c2"], "c": ["c3"]},
            audiences=[
                AudienceSpec.for_lists(["a"]),
                AudienceSpec.custom(allow=["b"]),
            ]
            + [AudienceSpec.contacts()] * 5,
        )
        assert friend_list_bonus(snapshot) == 2000  # "c" defined but never used

    def test_empty_list_does_not_count_even_if_referenced(self):
        snapshot = profile(
            lists={"ghost": []},
            audiences=[AudienceSpec.for_lists(["ghost"])] + [AudienceSpec.contacts()] * 6,
        )
        assert friend_list_bonus(snapshot) == 0

    def test_capped_at_five_thousand(self):
        names = [f"l{k}" for k in range(7)]
        snapshot = profile(
            lists={name: [f"c{k + 1}"] for k, name in enumerate(names)},
            audiences=[AudienceSpec.for_lists([name]) for name in names]
            + [AudienceSpec.contacts()] * 2,
        )
        assert friend_list_bonus(snapshot) == 5000


class TestPublicItemPenalty:
    def test_no_public_items(self):
        assert public_item_penalty(profile()) == 0

    def test_three_public_items(self):
        snapshot = profile(
            audiences=[AudienceSpec.public()] * 3 + [AudienceSpec.contacts()] * 7
        )
        assert public_item_penalty(snapshot) == 600

    def test_uncapped(self):
        snapshot = profile(
            audiences=[AudienceSpec.public()] * 100 + [AudienceSpec.contacts()] * 7
        )
        assert public_item_penalty(snapshot) == 20000


class TestOverallScore:
    def test_perfect_game_with_five_used_lists(self):
        lists = {f"l{k}": [f"c{k + 1}"] for k in range(5)}
        snapshot = profile(
            lists=lists,
            audiences=[AudienceSpec.for_lists([name]) for name in lists]
            + [AudienceSpec.contacts()] * 2,
        )
        base, bonus, penalty, total = overall_score(five_rounds(), snapshot)
        assert (base, bonus, penalty, total) == (50000, 5000, 0, 55000)

    def test_total_floored_at_zero(self):
        snapshot = profile(
            audiences=[AudienceSpec.public()] * 2 + [AudienceSpec.contacts()] * 7
        )
        base, bonus, penalty, total = overall_score(five_rounds((0,) * 5), snapshot)
        assert (base, bonus, penalty, total) == (0, 0, 400, 0)

    def test_mixed_decomposition(self):
        snapshot = profile(
            lists={"a": ["c1"], "b": ["c2"]},
            audiences=[
                AudienceSpec.for_lists(["a"]),
                AudienceSpec.custom(allow=["b"]),
                AudienceSpec.public(),
                AudienceSpec.public(),
                AudienceSpec.public(),
            ]
            + [AudienceSpec.contacts()] * 7,
        )
        base, bonus, penalty, total = overall_score(
            five_rounds((9000, 6000, 0, 8200, 10000)), snapshot
        )
        assert base == 33200
        assert bonus == 2000
        assert penalty == 600
        assert total == 34600

    def test_wrong_round_count(self):
        with pytest.raises(WrongRoundCountError):
            overall_score(five_rounds()[:4], profile())


class TestSmiley:
    @pytest.mark.parametrize(
        "total,expected",
        [
            (0, Smiley.SAD),
            (14999, Smiley.SAD),
            (15000, Smiley.NEUTRAL),
            (20000, Smiley.NEUTRAL),
            (32500, Smiley.NEUTRAL),
            (32501, Smiley.HAPPY),
            (55000, Smiley.HAPPY),
        ],
    )
    def test_thresholds(self, total, expected):
        assert smiley(total) is expected


class TestAwarenessIndex:
    def test_perfect_match_is_one(self):
        rounds = [result(selected={"a", "b"}, viewers={"a", "b"})] * 3
        assert awareness_index(rounds) == 1.0

    def test_partial_overlap(self):
        rounds = [result(selected={"a", "b", "x"}, viewers={"a", "b", "c"})]
        assert awareness_index(rounds) == 0.5
        assert awareness_index(rounds) == jaccard({"a", "b", "x"}, {"a", "b", "c"})

    def test_empty_selection_is_zero(self):
        rounds = [result(selected=set(), viewers={"a", "b", "c", "d"})]
        assert awareness_index(rounds) == 0.0

    def test_both_empty_counts_as_match(self):
        rounds = [result(selected=set(), viewers=set())]
        assert awareness_index(rounds) == 1.0

    def test_mean_over_rounds(self):
        rounds = [
            result(selected={"a"}, viewers={"a"}),
            result(selected=set(), viewers={"a"}),
        ]
        assert awareness_index(rounds) == 0.5

    def test_requires_rounds(self):
        with pytest.raises(NoRoundsError):
            awareness_index([])

    def test_always_within_unit_interval(self):
        rounds = [
            result(selected={"a", "b"}, viewers={"c"}),
            result(selected={"c"}, viewers={"c", "d", "e"}),
        ]
        assert 0.0 <= awareness_index(rounds) <= 1.0


class TestRecommendations:
    def test_public_items_listed_first(self):
        snapshot = profile(
            audiences=[AudienceSpec.public()] * 3 + [AudienceSpec.contacts()] * 7
        )
        recs = recommendations(snapshot, five_rounds())
        codes = [r.code for r in recs]
        assert codes[0] is RecommendationCode.REVIEW_PUBLIC_ITEMS
        assert RecommendationCode.CREATE_FRIEND_LISTS in codes
        assert recs[0].evidence == ("i1", "i2", "i3")

    def test_quiet_profile_gets_no_advice(self):
        lists = {f"l{k}": [f"c{k + 1}"] for k in range(5)}
        snapshot = profile(
            lists=lists,
            audiences=[AudienceSpec.for_lists([name]) for name in lists]
            + [AudienceSpec.for_lists(["l0"])] * 2,
        )
        rounds = five_rounds()
        assert recommendations(snapshot, rounds) == []

    def test_low_awareness_triggers_friendship_advice(self):
        lists = {f"l{k}": [f"c{k + 1}"] for k in range(5)}
        snapshot = profile(
            lists=lists,
            audiences=[AudienceSpec.for_lists([name]) for name in lists]
            + [AudienceSpec.for_lists(["l0"])] * 2,
        )
        rounds = [
            result(item=f"i{k + 1}", selected={"x"}, viewers={"c1"}) for k in range(5)
        ]
        recs = recommendations(snapshot, rounds)
        assert [r.code for r in recs] == [RecommendationCode.RECONSIDER_FRIENDSHIP_SEMANTICS]

    def test_broad_sharing_triggers_targeting_advice(self):
        snapshot = profile(
            lists={"a": ["c1"], "b": ["c2"]},
            audiences=[AudienceSpec.contacts()] * 6 + [AudienceSpec.for_lists(["a"])] * 2,
        )
        recs = recommendations(snapshot, five_rounds())
        assert RecommendationCode.USE_TARGETED_SHARING in [r.code for r in recs]

    def test_evidence_ids_resolve(self):
        snapshot = profile(
            audiences=[AudienceSpec.public()] * 2 + [AudienceSpec.contacts()] * 7
        )
        known = set(snapshot.items_by_id) | set(snapshot.lists_by_id)
        for rec in recommendations(snapshot, five_rounds()):
            assert set(rec.evidence) <= known

    def test_deterministic(self):
        snapshot = profile(
            audiences=[AudienceSpec.public()] * 2 + [AudienceSpec.contacts()] * 7
        )
        first = recommendations(snapshot, five_rounds())
        second = recommendations(snapshot, five_rounds())
        assert first == second


class TestGameReport:
    def test_report_resums_exactly(self):
        snapshot = profile(
            lists={"a": ["c1"]},
            audiences=[AudienceSpec.for_lists(["a"])]
            + [AudienceSpec.public()]
            + [AudienceSpec.contacts()] * 7,
        )
        report = build_report(five_rounds((9000, 0, 10000, 7400, 200)), snapshot)
        assert report.base_score == sum(r.points for r in report.round_results)
        assert report.total == max(
            0, report.base_score + report.list_bonus - report.public_penalty
        )
        assert report.smiley is smiley(report.total)

    def test_share_text_carries_total(self):
        snapshot = profile(lists={"a": ["c1"]}, audiences=[AudienceSpec.contacts()] * 7)
        report = build_report(five_rounds(), snapshot)
        assert f"{report.total}" in report.share_text()
        assert "PrivCheck" in report.share_text()

    def test_json_dict_round_trips_fields(self):
        report = build_report(five_rounds(), profile())
        doc = report.to_json_dict()
        assert doc["total"] == report.total
        assert len(doc["rounds"]) == 5
        assert doc["smiley"] in ("sad", "neutral", "happy")
        assert 0.0 <= doc["awareness_index"] <= 1.0
