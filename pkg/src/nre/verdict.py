"""Containment verdicts shared by the decision procedures and the oracle."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import GraphDb


@dataclass(frozen=True)
class Verdict:
    outcome: str  # "contained", "not_contained" or "unknown"
    counterexample: GraphDb | None = None
    pair: tuple | None = None
    witness: str | None = None  # the marked word the search found
    shape: object = None  # the Semipath / KBranchTree behind the counterexample
    bounded: bool = False
    note: str = ""

    @property
    def contained(self) -> bool:
        return self.outcome == "contained"

    @property
    def not_contained(self) -> bool:
        return self.outcome == "not_contained"

    def describe(self) -> str:
        if self.outcome == "contained":
            return "CONTAINED (up to bound)" if self.bounded else "CONTAINED"
        if self.outcome == "unknown":
            return "UNKNOWN"
        return "NOT CONTAINED"


CONTAINED, NOT_CONTAINED, UNKNOWN = "contained", "not_contained", "unknown"
