"""Resolution-bounded outcomes of existence searches."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

__all__ = ["VerdictKind", "Verdict"]


class VerdictKind(str, Enum):
    WITNESS = "WitnessFound"
    VIOLATION = "ViolationFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    """``details`` holds the witness parameters or the violation location;
    ``searched`` records the parameter box the search covered."""

    kind: VerdictKind
    details: dict[str, Any] = field(default_factory=dict)
    searched: dict[str, Any] = field(default_factory=dict)

    @property
    def witness_found(self) -> bool:
        return self.kind is VerdictKind.WITNESS

    @property
    def violation_found(self) -> bool:
        return self.kind is VerdictKind.VIOLATION

    def __getitem__(self, key):
        return self.details[key]

    def to_json(self) -> dict:
        def plain(x):
            if isinstance(x, (list, tuple)):
                return [plain(y) for y in x]
            if hasattr(x, "tolist"):
                return x.tolist()
            return x

        return {
            "verdict": self.kind.value,
            "details": {k: plain(v) for k, v in self.details.items()},
            "searched": {k: plain(v) for k, v in self.searched.items()},
        }
