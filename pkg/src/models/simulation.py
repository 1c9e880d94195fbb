from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class TrialRecord:
    """
    Outcome of one Monte Carlo trial.

    A failed trial keeps `status="failed"` and the error text; it still counts
    towards `trials` but never as a rejection.
    """

    scenario: str
    trial: int
    status: str = "running"
    d_max: Optional[int] = None
    p95_degree: Optional[int] = None
    p_values: dict[str, float] = field(default_factory=dict)
    sigma11: dict[str, float] = field(default_factory=dict)
    sigma22: dict[str, float] = field(default_factory=dict)
    error_message: Optional[str] = None

    def mark_completed(self, status: str, error_message: Optional[str] = None) -> None:
        self.status = status
        self.error_message = error_message

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "trial": self.trial,
            "status": self.status,
            "d_max": self.d_max,
            "p95_degree": self.p95_degree,
            "p_values": dict(self.p_values),
            "sigma11": dict(self.sigma11),
            "sigma22": dict(self.sigma22),
            "error_message": self.error_message,
        }


@dataclass(frozen=True)
class PowerRow:
    scenario: str
    statistic: str
    weight: str
    rejections: int
    trials: int
    median_dmax: float

    @property
    def rate(self) -> float:
        return self.rejections / self.trials if self.trials else 0.0


@dataclass
class PowerTable:
    rows: list[PowerRow] = field(default_factory=list)
    records: list[TrialRecord] = field(default_factory=list)

    def row(self, statistic: str, weight: str, scenario: Optional[str] = None) -> PowerRow:
        for r in self.rows:
            if r.statistic == statistic and r.weight == weight and (scenario is None or r.scenario == scenario):
                return r
        raise KeyError(f"No row for {statistic}/{weight}")

    def extend(self, other: "PowerTable") -> None:
        self.rows.extend(other.rows)
        self.records.extend(other.records)
