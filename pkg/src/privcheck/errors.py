"""Shared error base for domain failures.

Every domain error carries a stable machine-readable ``code`` plus an
optional ``details`` mapping so transports (HTTP, CLI) can render
``{code, message, details}`` uniformly.
"""

from __future__ import annotations

from typing import Any


class DomainError(Exception):
    """Base for all typed domain failures."""

    code: str = "domain_error"

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.details = details or {}

    @property
    def message(self) -> str:
        return str(self)

    def to_payload(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}
