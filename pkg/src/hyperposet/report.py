"""Check results shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    degree: int | None = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [self.name, status]
        if not self.passed and self.degree is not None:
            parts.append(f"degree={self.degree}")
        if self.detail:
            parts.append(self.detail)
        return "\t".join(parts)


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
