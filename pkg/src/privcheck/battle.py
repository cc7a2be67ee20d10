"""Pairwise sensitivity ranking.

Items are compared head-to-head ("which of these two is more personal to
you?") across a fixed number of rounds. Each choice updates Elo ratings;
the final ordering by rating is the item sensitivity ranking used to pick
the game items.

Rating update for a decided pair, with K = 32:

    expected = 1 / (1 + 10^((r_other - r_self) / 400))
    winner' = winner + K * (1 - expected_winner)
    loser'  = loser  + K * (0 - expected_loser)
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Any, Iterable, Sequence

from .errors import DomainError
from .snapshot import ItemId

INITIAL_RATING = 1000.0
K_FACTOR = 32.0
BATTLE_ROUNDS = 10
MIN_BATTLE_ITEMS = 5


class TooFewItemsError(DomainError):
    code = "too_few_items"


class NotInCurrentPairError(DomainError):
    code = "not_in_current_pair"


class BattleFinishedError(DomainError):
    code = "battle_finished"


class BattleUnfinishedError(DomainError):
    code = "battle_unfinished"


class NotEnoughEligibleError(DomainError):
    code = "not_enough_eligible"


@dataclass(frozen=True)
class BattlePlan:
    """Ratings plus the pairing schedule; advanced one choice at a time."""

    ratings: dict[ItemId, float]
    schedule: tuple[frozenset[ItemId], ...]
    cursor: int = 0
    history: tuple[tuple[frozenset[ItemId], ItemId], ...] = ()

    @property
    def finished(self) -> bool:
        return self.cursor >= len(self.schedule)

    def current_pair(self) -> tuple[ItemId, ItemId]:
        """The pair under comparison, in a stable (sorted) presentation order."""
        if self.finished:
            raise BattleFinishedError("all scheduled comparisons are done")
        a, b = sorted(self.schedule[self.cursor])
        return a, b


@dataclass(frozen=True)
class SensitivityRanking:
    ordered: tuple[ItemId, ...]
    ratings: dict[ItemId, float]


def expected_score(rating_a: float, rating_b: float) -> float:
    """Win probability of a against b under the Elo logistic model."""
    return 1.0 / (1.0 + 10.0 ** ((rating_b - rating_a) / 400.0))


def new_battle_plan(items: Sequence[ItemId], seed: int) -> BattlePlan:
    """Build the pairing schedule for a set of items.

    Schedules min(10, C(n, 2)) distinct unordered pairs, chosen greedily
    so appearance counts stay as even as possible: each pick takes a
    random pair among those whose members have battled least so far.
    Whenever the round budget allows (2 * rounds >= n) this guarantees
    every item appears at least once, and it keeps any single item from
    hoarding comparisons, which measurably improves how often the
    final ranking surfaces the genuinely most sensitive items.
    Deterministic for a given seed.
    """
    items = list(items)
    if len(items) < MIN_BATTLE_ITEMS:
        raise TooFewItemsError(
            f"need at least {MIN_BATTLE_ITEMS} items to rank, got {len(items)}",
            details={"item_count": len(items)},
        )
    if len(set(items)) != len(items):
        raise TooFewItemsError("battle items must be distinct")

    n = len(items)
    rounds = min(BATTLE_ROUNDS, n * (n - 1) // 2)

    rng = random.Random(seed)
    unused = [
        frozenset((items[i], items[j])) for i in range(n) for j in range(i + 1, n)
    ]
    appearances = {item: 0 for item in items}
    chosen: list[frozenset[ItemId]] = []
    for _ in range(rounds):
        best_cost: tuple[int, int] | None = None
        pool: list[frozenset[ItemId]] = []
        for pair in unused:
            a, b = pair
            cost = (appearances[a] + appearances[b], max(appearances[a], appearances[b]))
            if best_cost is None or cost < best_cost:
                best_cost, pool = cost, [pair]
            elif cost == best_cost:
                pool.append(pair)
        pick = pool[rng.randrange(len(pool))]
        unused.remove(pick)
        chosen.append(pick)
        for member in pick:
            appearances[member] += 1

    rng.shuffle(chosen)
    return BattlePlan(
        ratings={item: INITIAL_RATING for item in items},
        schedule=tuple(chosen),
    )


def record_choice(plan: BattlePlan, winner: ItemId) -> BattlePlan:
    """Apply one decided comparison and advance the schedule cursor."""
    if plan.finished:
        raise BattleFinishedError("all scheduled comparisons are done")
    pair = plan.schedule[plan.cursor]
    if winner not in pair:
        raise NotInCurrentPairError(
            f"item {winner!r} is not part of the current pair",
            details={"pair": sorted(pair)},
        )
    (loser,) = pair - {winner}

    ratings = dict(plan.ratings)
    e_winner = expected_score(ratings[winner], ratings[loser])
    e_loser = expected_score(ratings[loser], ratings[winner])
    ratings[winner] = ratings[winner] + K_FACTOR * (1.0 - e_winner)
    ratings[loser] = ratings[loser] + K_FACTOR * (0.0 - e_loser)

    return replace(
        plan,
        ratings=ratings,
        cursor=plan.cursor + 1,
        history=plan.history + ((pair, winner),),
    )


def final_ranking(plan: BattlePlan) -> SensitivityRanking:
    """Order items by rating, descending.

    Ties break toward the item with the more recent win (the freshest
    user judgment), then lexicographically by id so the order is total.
    """
    if not plan.finished:
        raise BattleUnfinishedError(
            f"{len(plan.schedule) - plan.cursor} comparisons still open"
        )

    last_win: dict[ItemId, int] = {}
    for idx, (_, winner) in enumerate(plan.history):
        last_win[winner] = idx

    ordered = sorted(
        plan.ratings,
        key=lambda item: (-plan.ratings[item], -last_win.get(item, -1), item),
    )
    return SensitivityRanking(ordered=tuple(ordered), ratings=dict(plan.ratings))


def select_game_items(
    ranking: SensitivityRanking, eligible: Iterable[ItemId], k: int = 5
) -> list[ItemId]:
    """The k most sensitive items that can actually be played, in rank order."""
    eligible_set = set(eligible)
    picked = [item for item in ranking.ordered if item in eligible_set][:k]
    if len(picked) < k:
        raise NotEnoughEligibleError(
            f"need {k} eligible game items, only {len(picked)} available",
            details={"needed": k, "available": len(picked)},
        )
    return picked


def plan_to_dict(plan: BattlePlan) -> dict[str, Any]:
    return {
        "ratings": {item: plan.ratings[item] for item in sorted(plan.ratings)},
        "schedule": [sorted(pair) for pair in plan.schedule],
        "cursor": plan.cursor,
        "history": [[sorted(pair), winner] for pair, winner in plan.history],
    }


def plan_from_dict(data: dict[str, Any]) -> BattlePlan:
    return BattlePlan(
        ratings={k: float(v) for k, v in data["ratings"].items()},
        schedule=tuple(frozenset(pair) for pair in data["schedule"]),
        cursor=int(data["cursor"]),
        history=tuple((frozenset(pair), winner) for pair, winner in data["history"]),
    )
