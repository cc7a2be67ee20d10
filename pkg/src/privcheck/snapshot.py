"""Social-graph profile snapshot: domain types, ingestion, validation, visibility.

A snapshot is the self-contained, read-only input document for one game:
the profile owner, their contacts, named friend lists, shared items with
per-item audience rules, and a pool of strangers used to pad galleries.
Everything here is immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from functools import cached_property
from typing import Any, IO, Union

from .errors import DomainError

PersonId = str
ItemId = str
ListId = str

SCHEMA_VERSION = 1

# Validation thresholds. A profile below these cannot produce a full,
# winnable game: 7 non-public items feed the ranking step, and the
# gallery draws 20 distinct persons per round (see rounds.ScoringParams).
MIN_NON_PUBLIC_ITEMS = 7
MIN_STRANGERS = 10
MIN_GALLERY_POOL = 20
MIN_ELIGIBLE_ITEMS = 5


class SnapshotParseError(DomainError):
    code = "parse_error"


class SnapshotSchemaError(DomainError):
    code = "schema_error"


class SnapshotReferenceError(DomainError):
    """An id inside the document does not resolve to any declared entity."""

    code = "reference_error"


class UnknownItemError(DomainError):
    code = "unknown_item"


class PersonKind(str, Enum):
    CONTACT = "contact"
    STRANGER = "stranger"


class AudienceMode(str, Enum):
    PUBLIC = "public"
    CONTACTS = "contacts"
    ONLY_ME = "only_me"
    LISTS = "lists"
    CUSTOM = "custom"


class ItemKind(str, Enum):
    PICTURE = "picture"
    STATUS_MESSAGE = "status_message"


@dataclass(frozen=True)
class Person:
    id: PersonId
    display_name: str
    kind: PersonKind
    avatar_ref: str | None = None


@dataclass(frozen=True)
class FriendList:
    id: ListId
    name: str
    members: frozenset[PersonId]


@dataclass(frozen=True)
class AudienceSpec:
    """Per-item visibility rule.

    ``lists`` is used by LISTS mode. CUSTOM mode expands ``allow`` (a mix
    of person and list ids) and then removes ``deny``; deny always wins.
    """

    mode: AudienceMode
    lists: frozenset[ListId] = frozenset()
    allow: frozenset[str] = frozenset()
    deny: frozenset[PersonId] = frozenset()

    @classmethod
    def public(cls) -> "AudienceSpec":
        return cls(AudienceMode.PUBLIC)

    @classmethod
    def contacts(cls) -> "AudienceSpec":
        return cls(AudienceMode.CONTACTS)

    @classmethod
    def only_me(cls) -> "AudienceSpec":
        return cls(AudienceMode.ONLY_ME)

    @classmethod
    def for_lists(cls, lists) -> "AudienceSpec":
        return cls(AudienceMode.LISTS, lists=frozenset(lists))

    @classmethod
    def custom(cls, allow, deny=()) -> "AudienceSpec":
        return cls(AudienceMode.CUSTOM, allow=frozenset(allow), deny=frozenset(deny))

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"mode": self.mode.value}
        if self.mode is AudienceMode.LISTS:
            out["lists"] = sorted(self.lists)
        if self.mode is AudienceMode.CUSTOM:
            out["allow"] = sorted(self.allow)
            out["deny"] = sorted(self.deny)
        return out


@dataclass(frozen=True)
class SharedItem:
    id: ItemId
    kind: ItemKind
    content_ref: str
    audience: AudienceSpec
    shared_at: datetime

    def to_public_dict(self) -> dict[str, Any]:
        """Client-facing projection: content only, never the audience rule."""
        return {
            "id": self.id,
            "kind": self.kind.value,
            "content_ref": self.content_ref,
            "shared_at": _render_timestamp(self.shared_at),
        }


@dataclass(frozen=True)
class ViewerSet:
    """Actual visibility of one item: who can see it.

    The owner always sees their own items and is deliberately excluded
    from ``persons``. ``includes_everyone`` is set only for public items.
    """

    persons: frozenset[PersonId]
    includes_everyone: bool = False


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    subjects: tuple[str, ...] = ()

    def to_json_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "subjects": list(self.subjects)}


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    non_public_item_count: int
    violations: tuple[Finding, ...] = ()

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "non_public_item_count": self.non_public_item_count,
            "violations": [v.to_json_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class ProfileSnapshot:
    owner: Person
    contacts: tuple[Person, ...]
    friend_lists: tuple[FriendList, ...]
    items: tuple[SharedItem, ...]
    strangers: tuple[Person, ...]

    @cached_property
    def contact_ids(self) -> frozenset[PersonId]:
        return frozenset(p.id for p in self.contacts)

    @cached_property
    def stranger_ids(self) -> frozenset[PersonId]:
        return frozenset(p.id for p in self.strangers)

    @cached_property
    def persons_by_id(self) -> dict[PersonId, Person]:
        index = {self.owner.id: self.owner}
        for p in self.contacts:
            index[p.id] = p
        for p in self.strangers:
            index[p.id] = p
        return index

    @cached_property
    def lists_by_id(self) -> dict[ListId, FriendList]:
        return {fl.id: fl for fl in self.friend_lists}

    @cached_property
    def items_by_id(self) -> dict[ItemId, SharedItem]:
        return {item.id: item for item in self.items}

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "owner": _person_to_dict(self.owner),
            "contacts": [_person_to_dict(p) for p in self.contacts],
            "friend_lists": [
                {"id": fl.id, "name": fl.name, "members": sorted(fl.members)}
                for fl in self.friend_lists
            ],
            "items": [
                {
                    "id": item.id,
                    "kind": item.kind.value,
                    "content_ref": item.content_ref,
                    "shared_at": _render_timestamp(item.shared_at),
                    "audience": item.audience.to_json_dict(),
                }
                for item in self.items
            ],
            "strangers": [_person_to_dict(p) for p in self.strangers],
        }


def _person_to_dict(p: Person) -> dict[str, Any]:
    out: dict[str, Any] = {"id": p.id, "display_name": p.display_name}
    if p.avatar_ref is not None:
        out["avatar_ref"] = p.avatar_ref
    return out


def _render_timestamp(ts: datetime) -> str:
    return ts.isoformat().replace("+00:00", "Z")


def _parse_timestamp(raw: Any, where: str) -> datetime:
    if not isinstance(raw, str):
        raise SnapshotSchemaError(f"{where}: shared_at must be an ISO-8601 string")
    try:
        return datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise SnapshotSchemaError(f"{where}: bad timestamp {raw!r}: {exc}") from exc


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise SnapshotSchemaError(f"{where}: missing required field {key!r}")
    return obj[key]


def _parse_person(obj: Any, kind: PersonKind, where: str) -> Person:
    if not isinstance(obj, dict):
        raise SnapshotSchemaError(f"{where}: expected an object")
    pid = _require(obj, "id", where)
    name = _require(obj, "display_name", where)
    if not isinstance(pid, str) or not pid:
        raise SnapshotSchemaError(f"{where}: id must be a non-empty string")
    if not isinstance(name, str) or not name:
        raise SnapshotSchemaError(f"{where}: display_name must be a non-empty string")
    avatar = obj.get("avatar_ref")
    if avatar is not None and not isinstance(avatar, str):
        raise SnapshotSchemaError(f"{where}: avatar_ref must be a string when present")
    return Person(id=pid, display_name=name, kind=kind, avatar_ref=avatar)


def _parse_id_array(obj: dict, key: str, where: str) -> list[str]:
    raw = obj.get(key, [])
    if not isinstance(raw, list) or not all(isinstance(x, str) and x for x in raw):
        raise SnapshotSchemaError(f"{where}: {key} must be an array of non-empty strings")
    return raw


def _parse_audience(obj: Any, where: str) -> AudienceSpec:
    if not isinstance(obj, dict):
        raise SnapshotSchemaError(f"{where}: audience must be an object")
    raw_mode = _require(obj, "mode", where)
    try:
        mode = AudienceMode(raw_mode)
    except ValueError:
        raise SnapshotSchemaError(f"{where}: unknown audience mode {raw_mode!r}") from None
    return AudienceSpec(
        mode=mode,
        lists=frozenset(_parse_id_array(obj, "lists", where)),
        allow=frozenset(_parse_id_array(obj, "allow", where)),
        deny=frozenset(_parse_id_array(obj, "deny", where)),
    )


def load_snapshot(raw: Union[bytes, str, IO]) -> ProfileSnapshot:
    """Parse and link a snapshot document.

    Ingestion is read-only: the input is never modified and no state is
    kept beyond the returned value. Structural problems raise
    SnapshotParseError (malformed JSON), SnapshotSchemaError (missing or
    mistyped fields, duplicate ids), or SnapshotReferenceError (an id that
    resolves to nothing). Semantic shortfalls (too few items, stranger in
    a friend list, ...) are left to validate_snapshot.
    """
    if hasattr(raw, "read"):
        raw = raw.read()
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SnapshotParseError(f"snapshot is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SnapshotParseError(f"malformed snapshot JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SnapshotSchemaError("snapshot document must be a JSON object")

    version = _require(doc, "schema_version", "document")
    if version != SCHEMA_VERSION:
        raise SnapshotSchemaError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")

    owner = _parse_person(_require(doc, "owner", "document"), PersonKind.CONTACT, "owner")

    for key in ("contacts", "friend_lists", "items", "strangers"):
        if not isinstance(_require(doc, key, "document"), list):
            raise SnapshotSchemaError(f"document: {key} must be an array")

    contacts = tuple(
        _parse_person(o, PersonKind.CONTACT, f"contacts[{i}]") for i, o in enumerate(doc["contacts"])
    )
    strangers = tuple(
        _parse_person(o, PersonKind.STRANGER, f"strangers[{i}]") for i, o in enumerate(doc["strangers"])
    )

    seen_persons: set[str] = set()
    for p in (owner, *contacts, *strangers):
        if p.id in seen_persons:
            raise SnapshotSchemaError(f"duplicate person id {p.id!r}")
        seen_persons.add(p.id)

    friend_lists = []
    seen_lists: set[str] = set()
    for i, o in enumerate(doc["friend_lists"]):
        where = f"friend_lists[{i}]"
        if not isinstance(o, dict):
            raise SnapshotSchemaError(f"{where}: expected an object")
        lid = _require(o, "id", where)
        name = _require(o, "name", where)
        if not isinstance(lid, str) or not lid:
            raise SnapshotSchemaError(f"{where}: id must be a non-empty string")
        if lid in seen_lists:
            raise SnapshotSchemaError(f"duplicate friend list id {lid!r}")
        seen_lists.add(lid)
        members = _parse_id_array(o, "members", where)
        for m in members:
            if m not in seen_persons:
                raise SnapshotReferenceError(f"{where}: member {m!r} is not a person in this snapshot")
        friend_lists.append(FriendList(id=lid, name=str(name), members=frozenset(members)))

    items = []
    seen_items: set[str] = set()
    for i, o in enumerate(doc["items"]):
        where = f"items[{i}]"
        if not isinstance(o, dict):
            raise SnapshotSchemaError(f"{where}: expected an object")
        iid = _require(o, "id", where)
        if not isinstance(iid, str) or not iid:
            raise SnapshotSchemaError(f"{where}: id must be a non-empty string")
        if iid in seen_items:
            raise SnapshotSchemaError(f"duplicate item id {iid!r}")
        seen_items.add(iid)
        raw_kind = _require(o, "kind", where)
        try:
            kind = ItemKind(raw_kind)
        except ValueError:
            raise SnapshotSchemaError(f"{where}: unknown item kind {raw_kind!r}") from None
        audience = _parse_audience(_require(o, "audience", where), where)
        _check_audience_references(audience, seen_persons, seen_lists, where)
        items.append(
            SharedItem(
                id=iid,
                kind=kind,
                content_ref=str(_require(o, "content_ref", where)),
                audience=audience,
                shared_at=_parse_timestamp(_require(o, "shared_at", where), where),
            )
        )

    return ProfileSnapshot(
        owner=owner,
        contacts=contacts,
        friend_lists=tuple(friend_lists),
        items=tuple(items),
        strangers=strangers,
    )


def _check_audience_references(
    audience: AudienceSpec, persons: set[str], lists: set[str], where: str
) -> None:
    for lid in audience.lists:
        if lid not in lists:
            raise SnapshotReferenceError(f"{where}: audience references unknown list {lid!r}")
    for ref in audience.allow:
        if ref not in persons and ref not in lists:
            raise SnapshotReferenceError(f"{where}: audience allows unknown id {ref!r}")
    for pid in audience.deny:
        if pid not in persons:
            raise SnapshotReferenceError(f"{where}: audience denies unknown person {pid!r}")


def load_snapshot_file(path) -> ProfileSnapshot:
    try:
        with open(path, "rb") as fh:
            return load_snapshot(fh)
    except OSError as exc:
        raise SnapshotParseError(f"cannot read snapshot file {path}: {exc}") from exc


def validate_snapshot(snapshot: ProfileSnapshot) -> ValidationReport:
    """Check the semantic invariants; findings are data, never exceptions.

    ok is true iff there are no violations, which includes the minimum of
    seven non-public shared items required for a full game.
    """
    violations: list[Finding] = []
    contact_ids = snapshot.contact_ids
    stranger_ids = snapshot.stranger_ids

    non_public = sum(1 for item in snapshot.items if item.audience.mode is not AudienceMode.PUBLIC)
    if non_public < MIN_NON_PUBLIC_ITEMS:
        violations.append(
            Finding(
                code="too_few_non_public_items",
                message=(
                    f"profile has {non_public} non-public shared items; "
                    f"minimum {MIN_NON_PUBLIC_ITEMS} required"
                ),
            )
        )

    if snapshot.owner.id in contact_ids:
        violations.append(
            Finding(
                code="owner_in_contacts",
                message="owner must not appear in the contact list",
                subjects=(snapshot.owner.id,),
            )
        )

    overlap = contact_ids & stranger_ids
    if overlap:
        violations.append(
            Finding(
                code="contact_stranger_overlap",
                message="contacts and strangers must be disjoint",
                subjects=tuple(sorted(overlap)),
            )
        )

    known_persons = set(snapshot.persons_by_id)
    known_lists = set(snapshot.lists_by_id)
    if len(known_persons) < 1 + len(snapshot.contacts) + len(snapshot.strangers):
        violations.append(
            Finding(code="duplicate_person_id", message="person ids are not unique")
        )

    for fl in snapshot.friend_lists:
        bad = sorted(m for m in fl.members if m not in contact_ids)
        if bad:
            violations.append(
                Finding(
                    code="list_member_not_contact",
                    message=f"friend list {fl.id!r} has members that are not contacts",
                    subjects=tuple(bad),
                )
            )

    for item in snapshot.items:
        a = item.audience
        dangling = sorted(
            [lid for lid in a.lists if lid not in known_lists]
            + [ref for ref in a.allow if ref not in known_persons and ref not in known_lists]
            + [pid for pid in a.deny if pid not in known_persons]
        )
        if dangling:
            violations.append(
                Finding(
                    code="unresolved_audience_reference",
                    message=f"item {item.id!r} audience references unknown ids",
                    subjects=tuple(dangling),
                )
            )

    if len(snapshot.strangers) < MIN_STRANGERS:
        violations.append(
            Finding(
                code="too_few_strangers",
                message=(
                    f"stranger pool has {len(snapshot.strangers)} entries; "
                    f"minimum {MIN_STRANGERS} required to fill galleries"
                ),
            )
        )

    pool = len(snapshot.contacts) + len(snapshot.strangers)
    if pool < MIN_GALLERY_POOL:
        violations.append(
            Finding(
                code="gallery_pool_too_small",
                message=(
                    f"contacts plus strangers total {pool} persons; "
                    f"{MIN_GALLERY_POOL} distinct persons are needed per round"
                ),
            )
        )

    # Only items someone displayed could actually see make a playable round.
    if not violations:
        eligible = len(eligible_game_items(snapshot))
        if eligible < MIN_ELIGIBLE_ITEMS:
            violations.append(
                Finding(
                    code="too_few_eligible_items",
                    message=(
                        f"only {eligible} items are visible to at least one contact; "
                        f"{MIN_ELIGIBLE_ITEMS} required for a full game"
                    ),
                )
            )

    return ValidationReport(
        ok=not violations,
        non_public_item_count=non_public,
        violations=tuple(violations),
    )


def resolve_visibility(item: SharedItem, snapshot: ProfileSnapshot) -> ViewerSet:
    """Resolve an item's audience rule to the set of persons who can see it.

    PUBLIC covers every contact and stranger (flagged includes_everyone),
    CONTACTS covers exactly the contacts, ONLY_ME nobody, LISTS the union
    of the referenced lists' members, and CUSTOM the expansion of allow
    (person ids plus list members) minus deny. The owner is never part of
    the result.
    """
    stored = snapshot.items_by_id.get(item.id)
    if stored is None or stored is not item and stored != item:
        raise UnknownItemError(f"item {item.id!r} is not part of this snapshot")

    mode = item.audience.mode
    if mode is AudienceMode.PUBLIC:
        return ViewerSet(
            persons=snapshot.contact_ids | snapshot.stranger_ids,
            includes_everyone=True,
        )
    if mode is AudienceMode.CONTACTS:
        return ViewerSet(persons=snapshot.contact_ids)
    if mode is AudienceMode.ONLY_ME:
        return ViewerSet(persons=frozenset())
    if mode is AudienceMode.LISTS:
        persons: set[PersonId] = set()
        for lid in item.audience.lists:
            fl = snapshot.lists_by_id.get(lid)
            if fl is not None:
                persons.update(fl.members)
        persons.discard(snapshot.owner.id)
        return ViewerSet(persons=frozenset(persons))

    # CUSTOM: expand allow (persons and lists), then deny wins.
    persons = set()
    for ref in item.audience.allow:
        fl = snapshot.lists_by_id.get(ref)
        if fl is not None:
            persons.update(fl.members)
        elif ref in snapshot.persons_by_id:
            persons.add(ref)
    persons -= set(item.audience.deny)
    persons.discard(snapshot.owner.id)
    return ViewerSet(persons=frozenset(persons))


def eligible_game_items(snapshot: ProfileSnapshot) -> list[ItemId]:
    """Items whose viewer set contains at least one contact, in snapshot order.

    Rounds built from anything else could never be won, because galleries
    are anchored on contact viewers.
    """
    eligible = []
    for item in snapshot.items:
        viewer_set = resolve_visibility(item, snapshot)
        if viewer_set.persons & snapshot.contact_ids:
            eligible.append(item.id)
    return eligible
