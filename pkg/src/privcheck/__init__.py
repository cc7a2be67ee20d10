"""privcheck: a privacy-awareness game over a social-graph profile snapshot.

Players rank their shared items by sensitivity through pairwise
comparisons, then try to identify, under time pressure, exactly who can
see each sensitive item. The gap between perceived and actual visibility
becomes a score, a smiley, an awareness index, and a set of personalized
recommendations.
"""

from .snapshot import (
    AudienceMode,
    AudienceSpec,
    FriendList,
    ItemKind,
    Person,
    PersonKind,
    ProfileSnapshot,
    SharedItem,
    ValidationReport,
    ViewerSet,
    eligible_game_items,
    load_snapshot,
    load_snapshot_file,
    resolve_visibility,
    validate_snapshot,
)

__version__ = "0.1.0"

__all__ = [
    "AudienceMode",
    "AudienceSpec",
    "FriendList",
    "ItemKind",
    "Person",
    "PersonKind",
    "ProfileSnapshot",
    "SharedItem",
    "ValidationReport",
    "ViewerSet",
    "eligible_game_items",
    "load_snapshot",
    "load_snapshot_file",
    "resolve_visibility",
    "validate_snapshot",
    "__version__",
]
