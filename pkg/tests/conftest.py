from __future__ import annotations

from datetime import datetime, timezone

import pytest

from privcheck.generator import load_demo_snapshot
from privcheck.snapshot import (
    AudienceSpec,
    FriendList,
    ItemKind,
    Person,
    PersonKind,
    ProfileSnapshot,
    SharedItem,
)

_TS = datetime(2025, 5, 1, 12, 0, tzinfo=timezone.utc)


def profile(
    *,
    contacts: int = 12,
    strangers: int = 12,
    lists: dict[str, list[str]] | None = None,
    audiences: list[AudienceSpec] | None = None,
) -> ProfileSnapshot:
    """Compact builder for hand-shaped snapshots in tests."""
    contact_persons = tuple(
        Person(id=f"c{i + 1}", display_name=f"Contact {i + 1}", kind=PersonKind.CONTACT)
        for i in range(contacts)
    )
    stranger_persons = tuple(
        Person(id=f"s{i + 1}", display_name=f"Stranger {i + 1}", kind=PersonKind.STRANGER)
        for i in range(strangers)
    )
    friend_lists = tuple(
        FriendList(id=list_id, name=list_id.title(), members=frozenset(members))
        for list_id, members in (lists or {}).items()
    )
    audiences = audiences if audiences is not None else [AudienceSpec.contacts()] * 7
    items = tuple(
        SharedItem(
            id=f"i{i + 1}",
            kind=ItemKind.PICTURE if i % 2 == 0 else ItemKind.STATUS_MESSAGE,
            content_ref=f"content-{i + 1}",
            audience=audience,
            shared_at=_TS,
        )
        for i, audience in enumerate(audiences)
    )
    return ProfileSnapshot(
        owner=Person(id="owner", display_name="Owner", kind=PersonKind.CONTACT),
        contacts=contact_persons,
        friend_lists=friend_lists,
        items=items,
        strangers=stranger_persons,
    )


@pytest.fixture
def demo_snapshot() -> ProfileSnapshot:
    return load_demo_snapshot()
