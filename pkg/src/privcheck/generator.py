"""Synthetic profile snapshots for demos, tests, and simulation sweeps.

Generation is fully deterministic per seed; the same arguments always
produce byte-identical files. Every generable snapshot passes validation
whenever the requested parameters make that possible at all.
"""

from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from importlib import resources
from pathlib import Path

from .errors import DomainError
from .snapshot import (
    AudienceSpec,
    FriendList,
    ItemKind,
    MIN_GALLERY_POOL,
    MIN_NON_PUBLIC_ITEMS,
    MIN_STRANGERS,
    Person,
    PersonKind,
    ProfileSnapshot,
    SharedItem,
    load_snapshot,
)

_FIRST_NAMES = [
    "Ada", "Bruno", "Carmen", "Dmitri", "Esther", "Felix", "Greta", "Hugo",
    "Ines", "Jasper", "Klara", "Lorenzo", "Maud", "Nils", "Olive", "Pascal",
    "Rhea", "Stefan", "Thea", "Ulrik", "Violet", "Wilhelm", "Yara", "Zeno",
]
_LAST_NAMES = [
    "Albrecht", "Bianchi", "Cormier", "Dahl", "Eriksen", "Ferrara", "Gruber",
    "Hartmann", "Ilyes", "Jonsson", "Keller", "Lombardi", "Meyer", "Nilsen",
    "Oberman", "Petrova", "Reinholt", "Schuster", "Torres", "Ullmann",
    "Vasquez", "Winter", "Ybarra", "Zimmer",
]
_LIST_NAMES = [
    "Family", "Close Friends", "Colleagues", "Book Club", "Teammates",
    "Neighbours", "Study Group", "Old Classmates", "Hiking Crew", "Cousins",
]
_STATUS_TEXTS = [
    "Back from the best trip ever.",
    "Does anyone have a good dentist recommendation?",
    "New personal record at the gym today!",
    "Thinking about a career change...",
    "Dinner was a disaster, send pizza.",
    "Finally finished that book everyone keeps recommending.",
]
_PICTURE_REFS = [
    "birthday_cake.jpg", "mountain_view.jpg", "graduation.jpg",
    "new_apartment.jpg", "concert_night.jpg", "road_trip.jpg",
]

_BASE_TIMESTAMP = datetime(2025, 1, 1, tzinfo=timezone.utc)


class InfeasibleParametersError(DomainError):
    code = "infeasible_parameters"


def default_stranger_pool() -> tuple[Person, ...]:
    """The bundled pool of 40 synthetic strangers."""
    raw = resources.files("privcheck").joinpath("data/strangers.json").read_text("utf-8")
    doc = json.loads(raw)
    return tuple(
        Person(
            id=entry["id"],
            display_name=entry["display_name"],
            kind=PersonKind.STRANGER,
            avatar_ref=entry.get("avatar_ref"),
        )
        for entry in doc["strangers"]
    )


def load_demo_snapshot() -> ProfileSnapshot:
    raw = resources.files("privcheck").joinpath("data/demo_profile.json").read_bytes()
    return load_snapshot(raw)


def demo_snapshot_bytes() -> bytes:
    return resources.files("privcheck").joinpath("data/demo_profile.json").read_bytes()


def with_stranger_pool(
    snapshot: ProfileSnapshot, pool: tuple[Person, ...] | None = None
) -> ProfileSnapshot:
    """Top up a snapshot's strangers from a pool until galleries can fill.

    Snapshots authored by hand often carry no strangers at all; the
    bundled pool makes them playable. Ids already present in the snapshot
    are skipped. Returns the snapshot unchanged when it is already
    sufficient.
    """
    pool = pool if pool is not None else default_stranger_pool()
    have = len(snapshot.strangers)
    need_total = max(MIN_STRANGERS, MIN_GALLERY_POOL - len(snapshot.contacts))
    if have >= need_total:
        return snapshot
    taken = set(snapshot.persons_by_id)
    extra = [p for p in pool if p.id not in taken]
    return ProfileSnapshot(
        owner=snapshot.owner,
        contacts=snapshot.contacts,
        friend_lists=snapshot.friend_lists,
        items=snapshot.items,
        strangers=snapshot.strangers + tuple(extra),
    )


def _person_name(rng: random.Random, taken: set[str]) -> str:
    for _ in range(100):
        name = f"{rng.choice(_FIRST_NAMES)} {rng.choice(_LAST_NAMES)}"
        if name not in taken:
            taken.add(name)
            return name
    name = f"{rng.choice(_FIRST_NAMES)} {rng.choice(_LAST_NAMES)} {len(taken)}"
    taken.add(name)
    return name


def generate_snapshot(
    contacts: int,
    items: int,
    lists: int,
    public_fraction: float,
    seed: int,
) -> ProfileSnapshot:
    """Build a schema-valid snapshot with the requested shape.

    Raises InfeasibleParametersError when no valid snapshot of that shape
    exists (fewer than 7 non-public items, or no contacts to see them).
    """
    if contacts < 1:
        raise InfeasibleParametersError("at least one contact is required")
    if not 0.0 <= public_fraction <= 1.0:
        raise InfeasibleParametersError("public_fraction must be within [0, 1]")
    public_count = int(items * public_fraction + 0.5)
    non_public = items - public_count
    if non_public < MIN_NON_PUBLIC_ITEMS:
        raise InfeasibleParametersError(
            f"these parameters yield {non_public} non-public items; "
            f"at least {MIN_NON_PUBLIC_ITEMS} are required",
            details={"non_public": non_public},
        )
    if lists < 0:
        raise InfeasibleParametersError("lists must be non-negative")

    rng = random.Random(seed)
    taken_names: set[str] = set()

    owner = Person(id="owner", display_name=_person_name(rng, taken_names), kind=PersonKind.CONTACT)
    contact_persons = tuple(
        Person(
            id=f"c{i + 1:03d}",
            display_name=_person_name(rng, taken_names),
            kind=PersonKind.CONTACT,
        )
        for i in range(contacts)
    )

    friend_lists = []
    for i in range(lists):
        size = rng.randint(1, max(1, min(len(contact_persons), 4)))
        members = rng.sample([p.id for p in contact_persons], size)
        friend_lists.append(
            FriendList(
                id=f"l{i + 1:02d}",
                name=_LIST_NAMES[i % len(_LIST_NAMES)],
                members=frozenset(members),
            )
        )

    audiences: list[AudienceSpec] = [AudienceSpec.public() for _ in range(public_count)]
    # One diary-style item at most, so at least five items stay playable.
    only_me_count = 1 if non_public >= MIN_NON_PUBLIC_ITEMS + 1 else 0
    audience_cycle = 0
    for _ in range(non_public - only_me_count):
        if friend_lists and audience_cycle % 3 == 1:
            chosen = rng.sample(friend_lists, min(len(friend_lists), rng.randint(1, 2)))
            audiences.append(AudienceSpec.for_lists([fl.id for fl in chosen]))
        elif friend_lists and audience_cycle % 3 == 2:
            fl = rng.choice(friend_lists)
            extra = rng.choice(contact_persons).id
            expansion = set(fl.members) | {extra}
            deny = [rng.choice(sorted(expansion))] if len(expansion) >= 2 else []
            audiences.append(AudienceSpec.custom(allow=[fl.id, extra], deny=deny))
        else:
            audiences.append(AudienceSpec.contacts())
        audience_cycle += 1
    audiences.extend(AudienceSpec.only_me() for _ in range(only_me_count))
    rng.shuffle(audiences)

    shared_items = []
    ts = _BASE_TIMESTAMP
    for i, audience in enumerate(audiences):
        ts = ts + timedelta(minutes=rng.randint(30, 2880))
        if i % 2 == 0:
            kind = ItemKind.PICTURE
            content = _PICTURE_REFS[rng.randrange(len(_PICTURE_REFS))]
        else:
            kind = ItemKind.STATUS_MESSAGE
            content = _STATUS_TEXTS[rng.randrange(len(_STATUS_TEXTS))]
        shared_items.append(
            SharedItem(
                id=f"i{i + 1:03d}",
                kind=kind,
                content_ref=content,
                audience=audience,
                shared_at=ts,
            )
        )

    return ProfileSnapshot(
        owner=owner,
        contacts=contact_persons,
        friend_lists=tuple(friend_lists),
        items=tuple(shared_items),
        strangers=default_stranger_pool(),
    )


def snapshot_to_bytes(snapshot: ProfileSnapshot) -> bytes:
    """Canonical serialization: stable key order, two-space indent."""
    return (json.dumps(snapshot.to_json_dict(), indent=2, sort_keys=True) + "\n").encode("utf-8")


def write_snapshot(snapshot: ProfileSnapshot, path: str | Path) -> None:
    Path(path).write_bytes(snapshot_to_bytes(snapshot))
