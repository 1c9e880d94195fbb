from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

import numpy as np


@dataclass(frozen=True, eq=False)
class WeightSums:
    """
    S1 = sum of squared weights; S2 = sum over nodes of s_i^2 minus S1
    (ordered pairs of distinct edges sharing a node); S3 = (sum of weights)^2.
    """

    s1: float
    s2: float
    s3: float
    total_weight: float
    node_sums: np.ndarray

    def to_dict(self) -> dict[str, Any]:
        return {"S1": self.s1, "S2": self.s2, "S3": self.s3, "total_weight": self.total_weight}


@dataclass(frozen=True)
class ObservedCounts:
    r1w: float
    r2w: float
    r0: int
    r1: int
    r2: int
    p: float
    q: float

    @property
    def r_diff(self) -> float:
        return self.r1w - self.r2w

    @property
    def r_w(self) -> float:
        return self.q * self.r1w + self.p * self.r2w

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out.update(r_diff=self.r_diff, r_w=self.r_w)
        return out


@dataclass(frozen=True)
class MomentSet:
    """Permutation-null moments of (R1w, R2w) and of the two derived combinations."""

    n1: int
    n2: int
    mu1w: float
    mu2w: float
    sigma11: float
    sigma22: float
    sigma12: float
    e_diff: float
    var_diff: float
    e_w: float
    var_w: float
    p: float
    q: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class StatValues:
    z_diff: float
    z_w: float
    s_r: float
    m_r: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
