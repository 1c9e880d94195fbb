"""
Simulation Schemas.

A SimConfig is a JSON document describing two sampling distributions, the
graph and weights to use, and how many Monte Carlo trials to run.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


# ============================================================================
# Distributions
# ============================================================================

class ScaleBlock(BaseModel):
    """A run of `size` consecutive coordinates sharing one standard deviation."""
    size: int = Field(..., ge=1)
    scale: float = Field(..., gt=0)


class DistributionSpec(BaseModel):
    """
    One sampling distribution.

    The location offset has L2 norm `mean_shift`, spread equally over all
    coordinates. For `lognormal` the offset and scales apply to the underlying
    normal. For `mvt`, `noncentrality` adds to the offset and all coordinates
    of an observation share one chi-squared draw.
    """
    family: Literal["gaussian", "lognormal", "mvt"] = "gaussian"
    dim: int = Field(..., ge=1, description="Dimension d")
    mean_shift: float = Field(default=0.0, ge=0, description="L2 norm of the location offset")
    scale: float = Field(default=1.0, gt=0, description="Common standard-deviation factor")
    scale_blocks: Optional[List[ScaleBlock]] = Field(
        default=None, description="Block-diagonal standard deviations (overrides `scale`)"
    )
    df: Optional[float] = Field(default=None, gt=0, description="Degrees of freedom (mvt)")
    noncentrality: float = Field(default=0.0, ge=0, description="Extra offset norm (mvt)")

    @model_validator(mode="after")
    def _check_family_fields(self):
        if self.family == "mvt" and self.df is None:
            raise ValueError("mvt requires df")
        if self.scale_blocks is not None:
            total = sum(block.size for block in self.scale_blocks)
            if total != self.dim:
                raise ValueError(f"scale_blocks cover {total} coordinates, dim is {self.dim}")
        return self


# ============================================================================
# Graph / study
# ============================================================================

class GraphSpec(BaseModel):
    kind: Literal["kmst", "knn"] = "kmst"
    k: int = Field(default=5, ge=1)
    metric: Literal["l1", "l2"] = "l2"


DEFAULT_SWEEP = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.0]


class SimConfig(BaseModel):
    """Monte Carlo power / calibration study."""
    name: str = Field(default="scenario", min_length=1)
    sample_x: DistributionSpec
    sample_y: DistributionSpec
    n1: int = Field(default=100, ge=2)
    n2: int = Field(default=100, ge=2)
    graph: GraphSpec = Field(default_factory=GraphSpec)
    weights: List[Literal["w1", "w2", "w3"]] = Field(default_factory=lambda: ["w1", "w3"])
    statistics: List[Literal["s", "m", "sr", "mr"]] = Field(
        default_factory=lambda: ["s", "m", "sr", "mr"], min_length=1
    )
    nperm: int = Field(default=1000, ge=1)
    alpha: float = Field(default=0.05, gt=0, lt=1)
    trials: int = Field(default=100, ge=1)
    seed: int = 1
    inject_gamma: Optional[float] = Field(default=None, ge=0, le=1)
    inject_sample: Literal["x", "y"] = "y"
    sweep_gammas: List[float] = Field(default_factory=lambda: list(DEFAULT_SWEEP))

    @field_validator("sweep_gammas")
    @classmethod
    def _check_gammas(cls, value: List[float]) -> List[float]:
        bad = [g for g in value if not 0.0 <= g <= 1.0]
        if bad:
            raise ValueError(f"gammas must lie in [0, 1]: {bad}")
        return value

    @model_validator(mode="after")
    def _check_dims(self):
        if self.sample_x.dim != self.sample_y.dim:
            raise ValueError(
                f"sample_x and sample_y dimensions differ ({self.sample_x.dim} vs {self.sample_y.dim})"
            )
        return self
