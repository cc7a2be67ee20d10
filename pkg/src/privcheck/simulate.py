"""Scripted and Monte-Carlo players driving the real session engine.

A simulated player forms a perceived viewer set for each round by taking
the true viewer status of every gallery tile and flipping it
independently with probability epsilon, then selects exactly what it
perceives. epsilon = 0 reproduces perfect play; epsilon = 1 inverts every
judgment. The mock clock advances a fixed reaction time before each pick,
so scores follow directly from the player parameters.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .feedback import GameReport
from .session import MockClock, SessionService, SessionStore, derive_seed
from .snapshot import AudienceMode, ItemId, ProfileSnapshot, resolve_visibility

# Long enough to decay any remaining score: 10000 / 200 = 50 seconds.
TIMEOUT_SECONDS = 55.0


class BattlePolicy(str, Enum):
    TRUE_ORDER = "true_order"
    RANDOM = "random"


@dataclass(frozen=True)
class PlayerPolicy:
    perception_error: float = 0.0
    reaction_seconds_per_pick: float = 0.5
    battle_policy: BattlePolicy = BattlePolicy.TRUE_ORDER

    def __post_init__(self):
        if not 0.0 <= self.perception_error <= 1.0:
            raise ValueError("perception_error must be within [0, 1]")
        if self.reaction_seconds_per_pick < 0:
            raise ValueError("reaction_seconds_per_pick must be non-negative")


@dataclass(frozen=True)
class Stats:
    mean: float
    p50: float
    p95: float

    def to_json_dict(self) -> dict[str, float]:
        return {"mean": self.mean, "p50": self.p50, "p95": self.p95}


@dataclass(frozen=True)
class SimulationSummary:
    sessions: int
    score: Stats
    awareness: Stats
    smiley_distribution: dict[str, int]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "sessions": self.sessions,
            "score": self.score.to_json_dict(),
            "awareness": self.awareness.to_json_dict(),
            "smiley_distribution": dict(sorted(self.smiley_distribution.items())),
        }


# Canonical "true sensitivity" for scripted battles: the tighter the
# audience, the more personal the item is taken to be.
_RESTRICTIVENESS = {
    AudienceMode.ONLY_ME: 0,
    AudienceMode.CUSTOM: 1,
    AudienceMode.LISTS: 2,
    AudienceMode.CONTACTS: 3,
    AudienceMode.PUBLIC: 4,
}


def true_sensitivity_key(snapshot: ProfileSnapshot, item_id: ItemId) -> tuple[int, str]:
    item = snapshot.items_by_id[item_id]
    return (_RESTRICTIVENESS[item.audience.mode], item_id)


def _pick_winner(
    snapshot: ProfileSnapshot,
    policy: PlayerPolicy,
    rng: random.Random,
    a: ItemId,
    b: ItemId,
) -> ItemId:
    if policy.battle_policy is BattlePolicy.RANDOM:
        return rng.choice([a, b])
    return min([a, b], key=lambda i: true_sensitivity_key(snapshot, i))


class _Recorder:
    """Optional command log; replaying it reproduces the session exactly."""

    def __init__(self):
        self.commands: list[dict[str, Any]] = []

    def log(self, op: str, **kwargs) -> None:
        self.commands.append({"op": op, **kwargs})


def run_session(
    snapshot: ProfileSnapshot,
    policy: PlayerPolicy,
    seed: int,
    recorder: _Recorder | None = None,
) -> GameReport:
    """Play one full session against a fresh engine with a mock clock."""
    clock = MockClock()
    service = SessionService(clock=clock, store=SessionStore(ttl_seconds=math.inf))
    token, _ = service.create_session(snapshot, seed=seed)
    rng = random.Random(derive_seed(seed, "player"))

    def advance():
        service.advance(token)
        if recorder:
            recorder.log("advance")

    def tick(seconds: float):
        clock.advance(seconds)
        if recorder:
            recorder.log("tick", seconds=seconds)

    advance()  # motivation -> briefing
    advance()  # briefing -> item battle

    while True:
        pair = service.battle_pair(token)
        winner = _pick_winner(
            snapshot, policy, rng, pair["item_a"]["id"], pair["item_b"]["id"]
        )
        outcome = service.battle_choice(token, winner)
        if recorder:
            recorder.log("battle", winner=winner)
        if outcome["done"]:
            break

    advance()  # briefing -> game round 1

    while service.state_view(token)["step"].startswith("game_"):
        view = service.round_view(token)
        item = snapshot.items_by_id[view["item"]["id"]]
        viewer_set = resolve_visibility(item, snapshot)

        picks = []
        for entry in view["gallery"]:
            truth = entry["person_id"] in viewer_set.persons
            perceived = truth != (rng.random() < policy.perception_error)
            if perceived:
                picks.append(entry["person_id"])

        resolved = False
        for person in picks:
            tick(policy.reaction_seconds_per_pick)
            outcome = service.round_select(token, person)
            if recorder:
                recorder.log("select", person=person)
            if outcome["outcome"] in ("won_round", "lost_round"):
                resolved = True
                break

        if not resolved:
            # Wrong or missing perception left the round open; run it out.
            tick(TIMEOUT_SECONDS)
            service.state_view(token)

    advance()  # briefing -> score & feedback
    return service.result(token)


def record_transcript(
    snapshot: ProfileSnapshot, policy: PlayerPolicy, seed: int
) -> dict[str, Any]:
    """Play once and return a replayable {seed, commands} transcript."""
    recorder = _Recorder()
    run_session(snapshot, policy, seed, recorder=recorder)
    return {"seed": seed, "commands": recorder.commands}


def run_sessions(
    snapshot: ProfileSnapshot, policy: PlayerPolicy, sessions: int, seed: int
) -> list[GameReport]:
    master = random.Random(seed)
    session_seeds = [master.getrandbits(63) for _ in range(sessions)]
    return [run_session(snapshot, policy, s) for s in session_seeds]


def _percentile(values: list[float], q: float) -> float:
    """Nearest-rank percentile on a sorted copy; exact for small samples."""
    ordered = sorted(values)
    rank = max(1, math.ceil(q / 100.0 * len(ordered)))
    return ordered[rank - 1]


def summarize(reports: list[GameReport]) -> SimulationSummary:
    totals = [float(r.total) for r in reports]
    awareness = [r.awareness_index for r in reports]
    smileys: dict[str, int] = {}
    for r in reports:
        smileys[r.smiley.value] = smileys.get(r.smiley.value, 0) + 1
    return SimulationSummary(
        sessions=len(reports),
        score=Stats(
            mean=sum(totals) / len(totals),
            p50=_percentile(totals, 50),
            p95=_percentile(totals, 95),
        ),
        awareness=Stats(
            mean=sum(awareness) / len(awareness),
            p50=_percentile(awareness, 50),
            p95=_percentile(awareness, 95),
        ),
        smiley_distribution=smileys,
    )


def simulate(
    snapshot: ProfileSnapshot, policy: PlayerPolicy, sessions: int, seed: int
) -> SimulationSummary:
    if sessions < 1:
        raise ValueError("sessions must be positive")
    return summarize(run_sessions(snapshot, policy, sessions, seed))


def replay_transcript(
    snapshot: ProfileSnapshot, transcript: dict[str, Any]
) -> GameReport:
    """Re-run a recorded command list; any state mismatch raises."""
    clock = MockClock()
    service = SessionService(clock=clock, store=SessionStore(ttl_seconds=math.inf))
    token, _ = service.create_session(snapshot, seed=int(transcript["seed"]))
    for command in transcript["commands"]:
        op = command["op"]
        if op == "advance":
            service.advance(token)
        elif op == "battle":
            service.battle_choice(token, command["winner"])
        elif op == "tick":
            clock.advance(float(command["seconds"]))
            service.state_view(token)
        elif op == "select":
            service.round_select(token, command["person"])
        else:
            raise ValueError(f"unknown transcript op {op!r}")
    return service.result(token)
