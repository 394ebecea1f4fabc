"""Verification outcome records and their text/machine renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any

from hardycov.exact import Enclosure, format_rational

HOLDS = "holds"
VIOLATED = "violated"
VERIFIED = "verified"
INCONCLUSIVE = "inconclusive"


def _render(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Enclosure):
        return {"lower": format_rational(value.lower), "upper": format_rational(value.upper)}
    if isinstance(value, dict):
        return {str(k): _render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_render(v) for v in value]
    if hasattr(value, "to_record"):
        return value.to_record()
    return value


class _Record:
    kind = "record"

    def to_record(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        for f in fields(self):  # type: ignore[arg-type]
            out[f.name] = _render(getattr(self, f.name))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=False, separators=(",", ":"))

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_record().items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value, separators=(",", ":"))
            lines.append(f"{key}={value}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Report(_Record):
    """Generic check outcome: two sides, a status and any witness data."""

    check: str
    status: str
    lhs: Any = None
    rhs: Any = None
    details: dict[str, Any] = field(default_factory=dict)

    kind = "report"

    @property
    def ok(self) -> bool:
        return self.status in (HOLDS, VERIFIED)


@dataclass(frozen=True)
class CovReport(_Record):
    """Outcome of ``s * sum_{n>=1} |a_[ns]| <= sum_n |a_n|`` for one (a, s)."""

    lhs: Fraction
    rhs: Fraction
    holds: bool
    slack: Fraction
    n_terms: int
    s: Fraction | None = None
    seq: Any = None

    kind = "cov"

    def __post_init__(self) -> None:
        if self.holds != (self.lhs <= self.rhs):
            raise ValueError("holds must agree with lhs <= rhs")
        if self.slack != self.rhs - self.lhs:
            raise ValueError("slack must equal rhs - lhs")


@dataclass(frozen=True)
class HardyReport(_Record):
    lhs_power_sum: Fraction
    rhs_power_sum: Fraction
    holds: bool
    M: int
    tail_bound: Fraction
    p: int = 2

    kind = "hardy"

    def __post_init__(self) -> None:
        if self.holds != (self.lhs_power_sum <= self.rhs_power_sum):
            raise ValueError("holds must agree with lhs <= rhs")
        if self.tail_bound < 0:
            raise ValueError("tail bound must be nonnegative")
