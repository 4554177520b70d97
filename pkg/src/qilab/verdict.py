"""Uniform result record for every check in the package."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification: a verdict plus reportable details.

    ``details`` must hold only JSON-friendly values (numbers, strings, bools,
    lists, dicts) so reports serialize deterministically.
    """

    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1
