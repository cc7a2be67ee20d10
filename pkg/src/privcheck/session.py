"""Session state machine driving the four-step flow.

A session walks: motivation -> briefing -> item battle (10 comparisons)
-> briefing -> game rounds 1..5 -> briefing -> score & feedback ->
finished. Briefings are explicit states that need an advance call; battle
choices and round completions move the flow on their own.

The service is transport-independent: the HTTP API and the CLI drive the
same methods, so recorded command transcripts replay identically on
either. Time comes from an injected monotonic clock, never the wall
clock, which keeps scoring deterministic under test.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from hashlib import sha256
from pathlib import Path
from typing import Any, Callable

from . import battle as battle_mod
from . import feedback as feedback_mod
from . import rounds as rounds_mod
from .errors import DomainError
from .feedback import GameReport, RoundResult
from .rounds import RoundState, RoundStatus, SelectionOutcome, ScoringParams
from .snapshot import ItemId, ProfileSnapshot, ValidationReport, validate_snapshot
from .snapshot import eligible_game_items

DEFAULT_TTL_SECONDS = 30 * 60
DEFAULT_CAPACITY = 1000

ROUNDS_PER_GAME = rounds_mod.DEFAULT_PARAMS.rounds_per_game


class UnknownSessionError(DomainError):
    code = "unknown_session"


class InvalidSnapshotError(DomainError):
    code = "invalid_snapshot"

    def __init__(self, report: ValidationReport):
        super().__init__(
            "snapshot does not meet the game's minimum requirements",
            details={"report": report.to_json_dict()},
        )
        self.report = report


class IllegalTransitionError(DomainError):
    code = "illegal_transition"


class WrongStepError(DomainError):
    code = "wrong_step"


class StepKind(str, Enum):
    MOTIVATION = "motivation"
    BRIEFING = "briefing"
    ITEM_BATTLE = "item_battle"
    GAME = "game"
    SCORE_FEEDBACK = "score_feedback"
    FINISHED = "finished"


@dataclass(frozen=True)
class Step:
    kind: StepKind
    briefing_of: StepKind | None = None
    round_no: int | None = None

    def label(self) -> str:
        if self.kind is StepKind.BRIEFING:
            return f"briefing_{self.briefing_of.value}"
        if self.kind is StepKind.GAME:
            return f"game_{self.round_no}"
        return self.kind.value


MOTIVATION = Step(StepKind.MOTIVATION)
BRIEFING_BATTLE = Step(StepKind.BRIEFING, briefing_of=StepKind.ITEM_BATTLE)
BRIEFING_GAME = Step(StepKind.BRIEFING, briefing_of=StepKind.GAME)
BRIEFING_FEEDBACK = Step(StepKind.BRIEFING, briefing_of=StepKind.SCORE_FEEDBACK)
ITEM_BATTLE = Step(StepKind.ITEM_BATTLE)
SCORE_FEEDBACK = Step(StepKind.SCORE_FEEDBACK)
FINISHED = Step(StepKind.FINISHED)


def game_step(round_no: int) -> Step:
    return Step(StepKind.GAME, round_no=round_no)


class Clock:
    """Monotonic time source; injected so tests and replays control it."""

    def now(self) -> float:
        raise NotImplementedError


class RealClock(Clock):
    def now(self) -> float:
        return time.monotonic()


class MockClock(Clock):
    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("clock cannot go backwards")
        self._now += seconds


def derive_seed(seed: int, tag: str) -> int:
    """Stable sub-seed derivation; independent of PYTHONHASHSEED."""
    digest = sha256(f"{seed}:{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class SessionState:
    token: str
    snapshot: ProfileSnapshot
    seed: int
    step: Step = MOTIVATION
    battle_plan: battle_mod.BattlePlan | None = None
    ranking: battle_mod.SensitivityRanking | None = None
    selected_items: list[ItemId] | None = None
    rounds_done: list[RoundResult] = field(default_factory=list)
    active_round: RoundState | None = None
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    last_touched: float = 0.0


class SessionStore:
    """Token-keyed session map with TTL, capacity, and optional persistence.

    Persistence is an append-only JSONL file: each mutation appends the
    session's full state, and the latest record per token wins on reload.
    """

    def __init__(
        self,
        ttl_seconds: float = DEFAULT_TTL_SECONDS,
        capacity: int = DEFAULT_CAPACITY,
        persist_path: str | Path | None = None,
    ):
        self.ttl_seconds = ttl_seconds
        self.capacity = capacity
        self.persist_path = Path(persist_path) if persist_path else None
        self._map_lock = threading.RLock()
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}

    def purge_expired(self, now: float) -> None:
        with self._map_lock:
            dead = [
                token
                for token, state in self._sessions.items()
                if state.last_touched + self.ttl_seconds < now
            ]
            for token in dead:
                self._sessions.pop(token, None)
                self._locks.pop(token, None)
            if dead:
                # Profile data must not outlive its session: drop expired
                # tokens' records from the persistence file as well.
                self._compact(set(self._sessions))

    def _compact(self, live_tokens: set[str]) -> None:
        if self.persist_path is None or not self.persist_path.exists():
            return
        latest: dict[str, str] = {}
        with open(self.persist_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                token = json.loads(line)["token"]
                if token in live_tokens:
                    latest[token] = line
        tmp = self.persist_path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            for line in latest.values():
                fh.write(line + "\n")
        tmp.replace(self.persist_path)

    def add(self, state: SessionState, now: float) -> None:
        with self._map_lock:
            self.purge_expired(now)
            while len(self._sessions) >= self.capacity:
                oldest = min(self._sessions, key=lambda t: self._sessions[t].last_touched)
                self._sessions.pop(oldest)
                self._locks.pop(oldest, None)
            state.last_touched = now
            self._sessions[state.token] = state
            self._locks[state.token] = threading.Lock()

    def get(self, token: str, now: float) -> SessionState:
        with self._map_lock:
            self.purge_expired(now)
            state = self._sessions.get(token)
            if state is None:
                raise UnknownSessionError("no such session (missing or expired)")
            state.last_touched = now
            return state

    def lock_for(self, token: str) -> threading.Lock:
        with self._map_lock:
            lock = self._locks.get(token)
            if lock is None:
                raise UnknownSessionError("no such session (missing or expired)")
            return lock

    def persist(self, state: SessionState, now: float) -> None:
        if self.persist_path is None:
            return
        record = {"token": state.token, "clock": now, "state": session_to_dict(state)}
        with self._map_lock:
            with open(self.persist_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")

    def load_persisted(self, now: float) -> int:
        """Rebuild sessions from the persistence file; returns the count.

        Round clocks are rebased so elapsed time is preserved across the
        rebuild: a round that had run 12s resumes with 12s on the clock.
        """
        if self.persist_path is None or not self.persist_path.exists():
            return 0
        latest: dict[str, dict] = {}
        with open(self.persist_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                latest[record["token"]] = record
        with self._map_lock:
            for record in latest.values():
                state = session_from_dict(record["state"])
                shift = now - record["clock"]
                if state.active_round is not None:
                    state.active_round = rounds_mod.round_from_dict(
                        {
                            **rounds_mod.round_to_dict(state.active_round),
                            "started_at": state.active_round.started_at + shift,
                        }
                    )
                state.last_touched = now
                self._sessions[state.token] = state
                self._locks[state.token] = threading.Lock()
        return len(latest)


class SessionService:
    """All game commands, addressed by session token."""

    def __init__(
        self,
        clock: Clock | None = None,
        store: SessionStore | None = None,
        params: ScoringParams | None = None,
    ):
        self.clock = clock or RealClock()
        self.store = store or SessionStore()
        self.params = params or rounds_mod.DEFAULT_PARAMS

    # -- lifecycle ---------------------------------------------------------

    def create_session(self, snapshot: ProfileSnapshot, seed: int | None = None) -> tuple[str, Step]:
        report = validate_snapshot(snapshot)
        if not report.ok:
            raise InvalidSnapshotError(report)
        if seed is None:
            seed = secrets.randbits(63)
        token = secrets.token_urlsafe(32)
        state = SessionState(token=token, snapshot=snapshot, seed=seed)
        self.store.add(state, self.clock.now())
        self.store.persist(state, self.clock.now())
        return token, state.step

    def _locked(self, token: str) -> tuple[SessionState, threading.Lock]:
        state = self.store.get(token, self.clock.now())
        return state, self.store.lock_for(token)

    # -- timeout settlement ------------------------------------------------

    def _settle_timeout(self, state: SessionState) -> None:
        if state.step.kind is not StepKind.GAME or state.active_round is None:
            return
        if state.active_round.status is not RoundStatus.IN_PROGRESS:
            return
        now = self.clock.now()
        settled = rounds_mod.settle_timeout(state.active_round, now)
        if settled.status is RoundStatus.LOST:
            state.active_round = settled
            self._finish_round(state)

    def _finish_round(self, state: SessionState) -> None:
        finished = state.active_round
        assert finished is not None and finished.status is not RoundStatus.IN_PROGRESS
        state.rounds_done.append(_round_result(finished))
        round_no = state.step.round_no or 0
        if round_no < ROUNDS_PER_GAME:
            state.step = game_step(round_no + 1)
            state.active_round = self._build_round(state, round_no + 1)
        else:
            state.step = BRIEFING_FEEDBACK
            state.active_round = None

    def _build_round(self, state: SessionState, round_no: int) -> RoundState:
        assert state.selected_items is not None
        item = state.snapshot.items_by_id[state.selected_items[round_no - 1]]
        return rounds_mod.new_round(
            item,
            state.snapshot,
            derive_seed(state.seed, f"round:{round_no}"),
            started_at=self.clock.now(),
            params=self.params,
        )

    # -- flow --------------------------------------------------------------

    def state_view(self, token: str) -> dict[str, Any]:
        state, lock = self._locked(token)
        with lock:
            self._settle_timeout(state)
            plan = state.battle_plan
            return {
                "step": state.step.label(),
                "progress": {
                    "battles_done": plan.cursor if plan else 0,
                    "battles_total": len(plan.schedule) if plan else 0,
                    "rounds_done": len(state.rounds_done),
                    "rounds_total": ROUNDS_PER_GAME,
                },
            }

    def advance(self, token: str) -> Step:
        state, lock = self._locked(token)
        with lock:
            self._settle_timeout(state)
            step = state.step
            if step == MOTIVATION:
                state.step = BRIEFING_BATTLE
            elif step == BRIEFING_BATTLE:
                state.battle_plan = battle_mod.new_battle_plan(
                    [item.id for item in state.snapshot.items],
                    derive_seed(state.seed, "battle"),
                )
                state.step = ITEM_BATTLE
            elif step == BRIEFING_GAME:
                state.step = game_step(1)
                state.active_round = self._build_round(state, 1)
            elif step == BRIEFING_FEEDBACK:
                state.step = SCORE_FEEDBACK
            elif step == SCORE_FEEDBACK:
                state.step = FINISHED
            else:
                raise IllegalTransitionError(
                    f"cannot advance from step {step.label()!r}",
                    details={"step": step.label()},
                )
            self.store.persist(state, self.clock.now())
            return state.step

    # -- item battle -------------------------------------------------------

    def battle_pair(self, token: str) -> dict[str, Any]:
        state, lock = self._locked(token)
        with lock:
            if state.step != ITEM_BATTLE or state.battle_plan is None:
                raise WrongStepError("session is not in the comparison step")
            a, b = state.battle_plan.current_pair()
            items = state.snapshot.items_by_id
            return {
                "round_no": state.battle_plan.cursor + 1,
                "rounds_total": len(state.battle_plan.schedule),
                "item_a": items[a].to_public_dict(),
                "item_b": items[b].to_public_dict(),
            }

    def battle_choice(self, token: str, winner: ItemId) -> dict[str, Any]:
        state, lock = self._locked(token)
        with lock:
            if state.step != ITEM_BATTLE or state.battle_plan is None:
                raise WrongStepError("session is not in the comparison step")
            state.battle_plan = battle_mod.record_choice(state.battle_plan, winner)
            if state.battle_plan.finished:
                state.ranking = battle_mod.final_ranking(state.battle_plan)
                state.selected_items = battle_mod.select_game_items(
                    state.ranking,
                    eligible_game_items(state.snapshot),
                    k=ROUNDS_PER_GAME,
                )
                state.step = BRIEFING_GAME
                self.store.persist(state, self.clock.now())
                return {"done": True, "step": state.step.label()}
            self.store.persist(state, self.clock.now())
            a, b = state.battle_plan.current_pair()
            items = state.snapshot.items_by_id
            return {
                "done": False,
                "next": {
                    "round_no": state.battle_plan.cursor + 1,
                    "rounds_total": len(state.battle_plan.schedule),
                    "item_a": items[a].to_public_dict(),
                    "item_b": items[b].to_public_dict(),
                },
            }

    # -- game rounds -------------------------------------------------------

    def round_view(self, token: str) -> dict[str, Any]:
        state, lock = self._locked(token)
        with lock:
            self._settle_timeout(state)
            if state.step.kind is not StepKind.GAME or state.active_round is None:
                raise WrongStepError("session is not in a game round")
            r = state.active_round
            items = state.snapshot.items_by_id
            return {
                "round_no": state.step.round_no,
                "rounds_total": ROUNDS_PER_GAME,
                "item": items[r.item].to_public_dict(),
                "gallery": [e.to_client_dict() for e in r.gallery],
                "score": rounds_mod.current_score(r, self.clock.now()),
                "hearts": r.hearts,
            }

    def round_select(self, token: str, person: str) -> dict[str, Any]:
        state, lock = self._locked(token)
        with lock:
            if state.step.kind is not StepKind.GAME or state.active_round is None:
                raise WrongStepError("session is not in a game round")
            now = self.clock.now()
            r = state.active_round
            if r.status is not RoundStatus.IN_PROGRESS:
                raise WrongStepError("round is already decided")

            next_state, outcome = rounds_mod.select_person(r, person, now)
            state.active_round = next_state

            if outcome is SelectionOutcome.WON_ROUND:
                score = next_state.final_points or 0
            elif outcome is SelectionOutcome.LOST_ROUND:
                score = 0
            else:
                score = rounds_mod.current_score(next_state, now)
            hearts = next_state.hearts

            if next_state.status is not RoundStatus.IN_PROGRESS:
                self._finish_round(state)
            self.store.persist(state, self.clock.now())

            green = outcome in (SelectionOutcome.CORRECT, SelectionOutcome.WON_ROUND)
            return {
                "outcome": outcome.value,
                "score": score,
                "hearts": hearts,
                "frame": "green" if green else "red",
            }

    # -- results -----------------------------------------------------------

    def result(self, token: str) -> GameReport:
        state, lock = self._locked(token)
        with lock:
            if state.step not in (SCORE_FEEDBACK, FINISHED):
                raise WrongStepError(
                    "results are available once the game step is complete",
                    details={"step": state.step.label()},
                )
            report = feedback_mod.build_report(state.rounds_done, state.snapshot)
            state.step = FINISHED
            self.store.persist(state, self.clock.now())
            return report


def _round_result(state: RoundState) -> RoundResult:
    viewers = state.viewer_ids
    selected = frozenset(state.selected)
    points = state.final_points if state.final_points is not None else 0
    return RoundResult(
        item=state.item,
        points=points if state.status is RoundStatus.WON else 0,
        wrong_picks=tuple(p for p in state.selected if p not in viewers),
        missed_viewers=tuple(sorted(viewers - selected)),
        selected=selected,
        displayed_viewers=viewers,
    )


# -- session serialization (persistence) -----------------------------------


def session_to_dict(state: SessionState) -> dict[str, Any]:
    return {
        "token": state.token,
        "seed": state.seed,
        "created_at": state.created_at,
        "step": {
            "kind": state.step.kind.value,
            "briefing_of": state.step.briefing_of.value if state.step.briefing_of else None,
            "round_no": state.step.round_no,
        },
        "snapshot": state.snapshot.to_json_dict(),
        "battle_plan": battle_mod.plan_to_dict(state.battle_plan) if state.battle_plan else None,
        "ranking": (
            {"ordered": list(state.ranking.ordered), "ratings": state.ranking.ratings}
            if state.ranking
            else None
        ),
        "selected_items": state.selected_items,
        "rounds_done": [r.to_json_dict() for r in state.rounds_done],
        "active_round": rounds_mod.round_to_dict(state.active_round) if state.active_round else None,
    }


def session_from_dict(data: dict[str, Any]) -> SessionState:
    from .snapshot import load_snapshot

    step_raw = data["step"]
    step = Step(
        kind=StepKind(step_raw["kind"]),
        briefing_of=StepKind(step_raw["briefing_of"]) if step_raw["briefing_of"] else None,
        round_no=step_raw["round_no"],
    )
    ranking = None
    if data["ranking"]:
        ranking = battle_mod.SensitivityRanking(
            ordered=tuple(data["ranking"]["ordered"]),
            ratings={k: float(v) for k, v in data["ranking"]["ratings"].items()},
        )
    return SessionState(
        token=data["token"],
        snapshot=load_snapshot(json.dumps(data["snapshot"])),
        seed=int(data["seed"]),
        step=step,
        battle_plan=battle_mod.plan_from_dict(data["battle_plan"]) if data["battle_plan"] else None,
        ranking=ranking,
        selected_items=list(data["selected_items"]) if data["selected_items"] else None,
        rounds_done=[_round_result_from_dict(r) for r in data["rounds_done"]],
        active_round=rounds_mod.round_from_dict(data["active_round"]) if data["active_round"] else None,
        created_at=data["created_at"],
    )


def _round_result_from_dict(data: dict[str, Any]) -> RoundResult:
    return RoundResult(
        item=data["item"],
        points=int(data["points"]),
        wrong_picks=tuple(data["wrong_picks"]),
        missed_viewers=tuple(data["missed_viewers"]),
        selected=frozenset(data["selected"]),
        displayed_viewers=frozenset(data["displayed_viewers"]),
    )
