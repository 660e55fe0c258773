"""Tiny result types used by the check operations."""

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome plus, on failure, a witness that replays the violation."""

    ok: bool
    witness: Any = None
    note: str = ""

    def __bool__(self):
        return self.ok


PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class CheckStatus:
    """Tri-state check outcome: pass, fail (with witness), or not-applicable."""

    status: str
    witness: Any = None
    note: str = ""

    def __bool__(self):
        return self.status == PASS

    @property
    def failed(self):
        return self.status == FAIL
