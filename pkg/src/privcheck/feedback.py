"""Result aggregation: overall score, smiley, awareness index, recommendations.

The final screen decomposes the score into the five round scores, a bonus
for defined-and-used friend lists (1000 each, capped at five) and a
penalty of 200 per publicly shared item, then classifies the clamped
total with a smiley and derives rule-based recommendations from the
profile and the player's selections.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence

from .errors import DomainError
from .snapshot import AudienceMode, ItemId, PersonId, ProfileSnapshot

LIST_BONUS_POINTS = 1000
LIST_BONUS_CAP = 5
PUBLIC_ITEM_PENALTY = 200

SMILEY_SAD_BELOW = 15000
SMILEY_HAPPY_ABOVE = 32500

ROUNDS_PER_GAME = 5

# Recommendation triggers.
MIN_DEFINED_LISTS = 2
BROAD_AUDIENCE_SHARE = 0.5
LOW_AWARENESS_THRESHOLD = 0.5

SHARE_MESSAGE_TEMPLATE = "I scored {total} points on PrivCheck — can you beat me?"


class WrongRoundCountError(DomainError):
    code = "wrong_round_count"


class NoRoundsError(DomainError):
    code = "no_rounds"


class Smiley(str, Enum):
    SAD = "sad"
    NEUTRAL = "neutral"
    HAPPY = "happy"


class RecommendationCode(str, Enum):
    CREATE_FRIEND_LISTS = "create_friend_lists"
    USE_TARGETED_SHARING = "use_targeted_sharing"
    REVIEW_PUBLIC_ITEMS = "review_public_items"
    RECONSIDER_FRIENDSHIP_SEMANTICS = "reconsider_friendship_semantics"


# Display order is by severity: exposed items trump structural advice.
_SEVERITY_ORDER = (
    RecommendationCode.REVIEW_PUBLIC_ITEMS,
    RecommendationCode.CREATE_FRIEND_LISTS,
    RecommendationCode.USE_TARGETED_SHARING,
    RecommendationCode.RECONSIDER_FRIENDSHIP_SEMANTICS,
)


@dataclass(frozen=True)
class RoundResult:
    item: ItemId
    points: int
    wrong_picks: tuple[PersonId, ...]
    missed_viewers: tuple[PersonId, ...]
    selected: frozenset[PersonId]
    displayed_viewers: frozenset[PersonId]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "item": self.item,
            "points": self.points,
            "wrong_picks": list(self.wrong_picks),
            "missed_viewers": list(self.missed_viewers),
            "selected": sorted(self.selected),
            "displayed_viewers": sorted(self.displayed_viewers),
        }


@dataclass(frozen=True)
class Recommendation:
    code: RecommendationCode
    rationale: str
    evidence: tuple[str, ...] = ()

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "code": self.code.value,
            "rationale": self.rationale,
            "evidence": list(self.evidence),
        }


@dataclass(frozen=True)
class GameReport:
    round_results: tuple[RoundResult, ...]
    base_score: int
    list_bonus: int
    public_penalty: int
    total: int
    smiley: Smiley
    awareness_index: float
    recommendations: tuple[Recommendation, ...]

    def share_text(self) -> str:
        return SHARE_MESSAGE_TEMPLATE.format(total=self.total)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "rounds": [r.to_json_dict() for r in self.round_results],
            "base_score": self.base_score,
            "list_bonus": self.list_bonus,
            "public_penalty": self.public_penalty,
            "total": self.total,
            "smiley": self.smiley.value,
            "awareness_index": self.awareness_index,
            "recommendations": [r.to_json_dict() for r in self.recommendations],
            "share_text": self.share_text(),
        }


def _used_list_ids(snapshot: ProfileSnapshot) -> set[str]:
    used: set[str] = set()
    known = set(snapshot.lists_by_id)
    for item in snapshot.items:
        used.update(item.audience.lists & known)
        used.update(item.audience.allow & known)
    return used


def friend_list_bonus(snapshot: ProfileSnapshot) -> int:
    """1000 points per friend list that is both defined and used, up to five.

    Defined means the list has at least one member; used means at least
    one item's audience targets it (list mode or custom allow).
    """
    used = _used_list_ids(snapshot)
    counted = sum(1 for fl in snapshot.friend_lists if fl.members and fl.id in used)
    return LIST_BONUS_POINTS * min(LIST_BONUS_CAP, counted)


def public_item_penalty(snapshot: ProfileSnapshot) -> int:
    """200 points per publicly shared item, over the whole profile, uncapped."""
    public = sum(1 for item in snapshot.items if item.audience.mode is AudienceMode.PUBLIC)
    return PUBLIC_ITEM_PENALTY * public


def overall_score(
    rounds: Sequence[RoundResult], snapshot: ProfileSnapshot
) -> tuple[int, int, int, int]:
    """(base, bonus, penalty, total) with total clamped at zero."""
    if len(rounds) != ROUNDS_PER_GAME:
        raise WrongRoundCountError(
            f"expected {ROUNDS_PER_GAME} round results, got {len(rounds)}"
        )
    base = sum(r.points for r in rounds)
    bonus = friend_list_bonus(snapshot)
    penalty = public_item_penalty(snapshot)
    total = max(0, base + bonus - penalty)
    return base, bonus, penalty, total


def smiley(total: int) -> Smiley:
    if total < SMILEY_SAD_BELOW:
        return Smiley.SAD
    if total > SMILEY_HAPPY_ABOVE:
        return Smiley.HAPPY
    return Smiley.NEUTRAL


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def awareness_index(rounds: Sequence[RoundResult]) -> float:
    """Mean per-round Jaccard overlap of selections and displayed viewers.

    1.0 means the player's perception matched the actual visibility of
    every played item exactly; 0.0 means no overlap at all.
    """
    if not rounds:
        raise NoRoundsError("awareness index needs at least one round")
    return sum(_jaccard(r.selected, r.displayed_viewers) for r in rounds) / len(rounds)


def recommendations(
    snapshot: ProfileSnapshot, rounds: Sequence[RoundResult]
) -> list[Recommendation]:
    """Rule-based advice, ordered by severity (exposed public items first)."""
    fired: dict[RecommendationCode, Recommendation] = {}

    public_items = tuple(
        item.id for item in snapshot.items if item.audience.mode is AudienceMode.PUBLIC
    )
    if public_items:
        fired[RecommendationCode.REVIEW_PUBLIC_ITEMS] = Recommendation(
            code=RecommendationCode.REVIEW_PUBLIC_ITEMS,
            rationale=(
                f"{len(public_items)} of your items are visible to absolutely everyone, "
                "strangers included. Check whether each of them really should be public."
            ),
            evidence=public_items,
        )

    defined_lists = [fl for fl in snapshot.friend_lists if fl.members]
    if len(defined_lists) < MIN_DEFINED_LISTS:
        fired[RecommendationCode.CREATE_FRIEND_LISTS] = Recommendation(
            code=RecommendationCode.CREATE_FRIEND_LISTS,
            rationale=(
                "Friend lists let you share an item with exactly the people it is "
                "meant for. Group your contacts (family, close friends, colleagues) "
                "into named lists."
            ),
            evidence=tuple(fl.id for fl in defined_lists),
        )

    if snapshot.items:
        broad = tuple(
            item.id
            for item in snapshot.items
            if item.audience.mode in (AudienceMode.PUBLIC, AudienceMode.CONTACTS)
        )
        if len(broad) / len(snapshot.items) > BROAD_AUDIENCE_SHARE:
            fired[RecommendationCode.USE_TARGETED_SHARING] = Recommendation(
                code=RecommendationCode.USE_TARGETED_SHARING,
                rationale=(
                    "Most of your items go to all contacts or the public. Use list or "
                    "custom audiences to share each item with the people it concerns."
                ),
                evidence=broad,
            )

    index = awareness_index(rounds) if rounds else 1.0
    if index < LOW_AWARENESS_THRESHOLD:
        weak_rounds = tuple(
            r.item for r in rounds if _jaccard(r.selected, r.displayed_viewers) < LOW_AWARENESS_THRESHOLD
        )
        fired[RecommendationCode.RECONSIDER_FRIENDSHIP_SEMANTICS] = Recommendation(
            code=RecommendationCode.RECONSIDER_FRIENDSHIP_SEMANTICS,
            rationale=(
                "Your guesses rarely matched who can actually see your items. An online "
                "\"friend\" is often a much looser tie than a friend offline; review who "
                "is in your contact list and what you share with all of them."
            ),
            evidence=weak_rounds,
        )

    return [fired[code] for code in _SEVERITY_ORDER if code in fired]


def build_report(
    rounds: Sequence[RoundResult], snapshot: ProfileSnapshot
) -> GameReport:
    base, bonus, penalty, total = overall_score(rounds, snapshot)
    return GameReport(
        round_results=tuple(rounds),
        base_score=base,
        list_bonus=bonus,
        public_penalty=penalty,
        total=total,
        smiley=smiley(total),
        awareness_index=awareness_index(rounds),
        recommendations=tuple(recommendations(snapshot, rounds)),
    )
