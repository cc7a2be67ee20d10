"""Timed guessing rounds: gallery composition, scoring, selection handling.

One round shows a single shared item next to a gallery of 20 profile
tiles. The player must select everyone who can actually see the item.
The score starts at 10000, decays by 200 per elapsed second, and each
wrong pick costs 1000 points plus one of five hearts. The round is won
when every displayed viewer is selected, and lost when the hearts or the
score run out.

All clocks are injected monotonic readings (seconds); nothing here ever
looks at the wall clock.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from .errors import DomainError
from .snapshot import (
    AudienceMode,
    PersonId,
    ProfileSnapshot,
    SharedItem,
    resolve_visibility,
)


class IneligibleItemError(DomainError):
    code = "ineligible_item"


class RoundOverError(DomainError):
    code = "round_over"


class AlreadySelectedError(DomainError):
    code = "already_selected"


class NotInGalleryError(DomainError):
    code = "not_in_gallery"


class RoundStatus(str, Enum):
    IN_PROGRESS = "in_progress"
    WON = "won"
    LOST = "lost"


class SelectionOutcome(str, Enum):
    CORRECT = "correct"
    WRONG = "wrong"
    WON_ROUND = "won_round"
    LOST_ROUND = "lost_round"


@dataclass(frozen=True)
class ScoringParams:
    start_score: int = 10000
    time_decay_per_second: int = 200
    wrong_penalty: int = 1000
    hearts: int = 5
    rounds_per_game: int = 5
    gallery_size: int = 20

    def __post_init__(self):
        for name, value in vars(self).items():
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")


DEFAULT_PARAMS = ScoringParams()

# Restricted-audience galleries lean on contacts: 16 contact tiles with at
# most 12 true viewers among them, so typical profiles keep several
# non-viewer contacts as plausible distractors.
BROAD_CONTACT_SLOTS = 10
RESTRICTED_CONTACT_SLOTS = 16
RESTRICTED_VIEWER_CAP = 12


@dataclass(frozen=True)
class GalleryEntry:
    person: PersonId
    display_name: str
    avatar_ref: str | None = None
    is_viewer: bool = False

    def to_client_dict(self) -> dict[str, Any]:
        """Client projection; never exposes the viewer flag."""
        out: dict[str, Any] = {"person_id": self.person, "display_name": self.display_name}
        if self.avatar_ref is not None:
            out["avatar_ref"] = self.avatar_ref
        return out


@dataclass(frozen=True)
class RoundState:
    item: str
    gallery: tuple[GalleryEntry, ...]
    started_at: float
    selected: tuple[PersonId, ...] = ()
    wrong_count: int = 0
    status: RoundStatus = RoundStatus.IN_PROGRESS
    final_points: int | None = None
    params: ScoringParams = field(default=DEFAULT_PARAMS)

    @property
    def hearts(self) -> int:
        return self.params.hearts - self.wrong_count

    @property
    def viewer_ids(self) -> frozenset[PersonId]:
        return frozenset(e.person for e in self.gallery if e.is_viewer)


def compose_gallery(
    item: SharedItem,
    snapshot: ProfileSnapshot,
    seed: int,
    params: ScoringParams = DEFAULT_PARAMS,
) -> tuple[GalleryEntry, ...]:
    """Compose the 20-person gallery for one item, deterministically per seed.

    Composition depends on the audience rule:

    * public / all-contacts: 10 contacts + 10 strangers, both sampled
      uniformly (an even split keeps broad audiences challenging).
    * list / custom audiences: 16 contacts + 4 strangers. The contact
      slots take min(#contact viewers, 12) viewers first and fill the
      rest with non-viewer contacts; if non-viewers run out the slots
      fall back to further viewers.
    * Whenever the profile has fewer contacts than contact slots, the
      shortfall is backfilled with strangers.

    Viewer flags come from resolve_visibility, so for a public item every
    tile, strangers included, is a viewer.
    """
    viewer_set = resolve_visibility(item, snapshot)
    contact_viewers = [p for p in snapshot.contacts if p.id in viewer_set.persons]
    if not contact_viewers:
        raise IneligibleItemError(
            f"item {item.id!r} is visible to no contact; round would be unwinnable"
        )

    rng = random.Random(seed)
    broad = item.audience.mode in (AudienceMode.PUBLIC, AudienceMode.CONTACTS)
    contact_slots = BROAD_CONTACT_SLOTS if broad else RESTRICTED_CONTACT_SLOTS
    take_contacts = min(contact_slots, len(snapshot.contacts))

    if broad:
        chosen_contacts = rng.sample(snapshot.contacts, take_contacts)
    else:
        non_viewers = [p for p in snapshot.contacts if p.id not in viewer_set.persons]
        viewer_take = min(len(contact_viewers), RESTRICTED_VIEWER_CAP, take_contacts)
        chosen_viewers = rng.sample(contact_viewers, viewer_take)
        filler_take = min(len(non_viewers), take_contacts - viewer_take)
        chosen_fillers = rng.sample(non_viewers, filler_take)
        chosen_contacts = chosen_viewers + chosen_fillers
        short = take_contacts - len(chosen_contacts)
        if short > 0:
            leftovers = [p for p in contact_viewers if p not in chosen_viewers]
            chosen_contacts += rng.sample(leftovers, short)

    stranger_take = params.gallery_size - len(chosen_contacts)
    if stranger_take > len(snapshot.strangers):
        raise IneligibleItemError(
            f"stranger pool too small to fill the gallery for item {item.id!r}"
            f" (need {stranger_take}, have {len(snapshot.strangers)})"
        )
    chosen_strangers = rng.sample(snapshot.strangers, stranger_take)

    tiles = chosen_contacts + chosen_strangers
    rng.shuffle(tiles)
    return tuple(
        GalleryEntry(
            person=p.id,
            display_name=p.display_name,
            avatar_ref=p.avatar_ref,
            is_viewer=viewer_set.includes_everyone or p.id in viewer_set.persons,
        )
        for p in tiles
    )


def new_round(
    item: SharedItem,
    snapshot: ProfileSnapshot,
    seed: int,
    started_at: float,
    params: ScoringParams = DEFAULT_PARAMS,
) -> RoundState:
    gallery = compose_gallery(item, snapshot, seed, params)
    return RoundState(item=item.id, gallery=gallery, started_at=started_at, params=params)


def current_score(state: RoundState, now: float, params: ScoringParams | None = None) -> int:
    """Live score: start minus whole-second decay minus wrong-pick penalties.

    Decay uses floor(elapsed seconds), keeping scores integral and tolerant
    of sub-second clock jitter. Never negative.
    """
    if state.status is not RoundStatus.IN_PROGRESS:
        raise RoundOverError("round is already decided")
    p = params or state.params
    elapsed = max(0.0, now - state.started_at)
    decayed = p.time_decay_per_second * math.floor(elapsed)
    return max(0, p.start_score - decayed - p.wrong_penalty * state.wrong_count)


def round_status(state: RoundState, now: float) -> RoundStatus:
    """The effective status at `now`: a zero score loses even without a click."""
    if state.status is RoundStatus.IN_PROGRESS and current_score(state, now) <= 0:
        return RoundStatus.LOST
    return state.status


def settle_timeout(state: RoundState, now: float) -> RoundState:
    """Materialize a time-out loss, if one has occurred; otherwise unchanged."""
    if state.status is RoundStatus.IN_PROGRESS and current_score(state, now) <= 0:
        return replace(state, status=RoundStatus.LOST, final_points=0)
    return state


def select_person(
    state: RoundState, person: PersonId, now: float
) -> tuple[RoundState, SelectionOutcome]:
    """Apply one gallery pick and report what it did.

    Correct picks accumulate toward the win (all displayed viewers
    selected); the winning pick freezes the score at its current value.
    Wrong picks cost a heart and 1000 points, stay marked, and cannot be
    picked again. Exhausted hearts or an exhausted score lose the round
    with 0 points. A pick that arrives after the score already decayed to
    zero settles the time-out loss instead of counting.
    """
    if state.status is not RoundStatus.IN_PROGRESS:
        raise RoundOverError("round is already decided")
    if current_score(state, now) <= 0:
        return replace(state, status=RoundStatus.LOST, final_points=0), SelectionOutcome.LOST_ROUND

    entries = {e.person: e for e in state.gallery}
    entry = entries.get(person)
    if entry is None:
        raise NotInGalleryError(f"person {person!r} is not shown in this round")
    if person in state.selected:
        raise AlreadySelectedError(f"person {person!r} was already picked")

    picked = state.selected + (person,)
    if entry.is_viewer:
        next_state = replace(state, selected=picked)
        if state.viewer_ids <= set(picked):
            points = current_score(next_state, now)
            return (
                replace(next_state, status=RoundStatus.WON, final_points=points),
                SelectionOutcome.WON_ROUND,
            )
        return next_state, SelectionOutcome.CORRECT

    next_state = replace(state, selected=picked, wrong_count=state.wrong_count + 1)
    if next_state.hearts <= 0 or current_score(next_state, now) <= 0:
        return (
            replace(next_state, status=RoundStatus.LOST, final_points=0),
            SelectionOutcome.LOST_ROUND,
        )
    return next_state, SelectionOutcome.WRONG


def round_to_dict(state: RoundState) -> dict[str, Any]:
    return {
        "item": state.item,
        "gallery": [
            {
                "person": e.person,
                "display_name": e.display_name,
                "avatar_ref": e.avatar_ref,
                "is_viewer": e.is_viewer,
            }
            for e in state.gallery
        ],
        "started_at": state.started_at,
        "selected": list(state.selected),
        "wrong_count": state.wrong_count,
        "status": state.status.value,
        "final_points": state.final_points,
    }


def round_from_dict(data: dict[str, Any], params: ScoringParams = DEFAULT_PARAMS) -> RoundState:
    return RoundState(
        item=data["item"],
        gallery=tuple(
            GalleryEntry(
                person=e["person"],
                display_name=e["display_name"],
                avatar_ref=e.get("avatar_ref"),
                is_viewer=bool(e["is_viewer"]),
            )
            for e in data["gallery"]
        ),
        started_at=float(data["started_at"]),
        selected=tuple(data["selected"]),
        wrong_count=int(data["wrong_count"]),
        status=RoundStatus(data["status"]),
        final_points=data["final_points"],
        params=params,
    )
