"""
Run Schemas.

Effective configuration of a `test` / `diagnose` invocation after merging
command-line flags over settings. Echoed verbatim into every output.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class RunConfig(BaseModel):
    command: Literal["test", "diagnose"]
    data: Optional[str] = None
    dist: Optional[str] = None
    edges: Optional[str] = None
    labels: Optional[str] = None
    header: bool = False
    metric: Literal["l1", "l2"] = "l2"
    graph: Literal["kmst", "knn", "edgelist"] = "kmst"
    k: Optional[int] = Field(default=5, ge=1)
    weight: Literal["w1", "w2", "w3", "none"] = "w1"
    stat: List[Literal["sr", "mr", "s", "m", "z_diff", "z_w"]] = Field(
        default_factory=lambda: ["sr", "mr"], min_length=1
    )
    nperm: int = Field(default=10_000, ge=1)
    alpha: float = Field(default=0.05, gt=0, lt=1)
    seed: int = 1
    threads: Optional[int] = Field(default=None, ge=0)
    exhaustive: bool = False
    influence: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_inputs(self):
        sources = [name for name in ("data", "dist") if getattr(self, name)]
        if len(sources) > 1:
            raise ValueError("give either --data or --dist, not both")
        if self.graph == "edgelist":
            if not self.edges:
                raise ValueError("--graph edgelist requires --edges")
        else:
            if not sources:
                raise ValueError(f"--graph {self.graph} requires --data or --dist")
            if self.k is None:
                raise ValueError(f"--graph {self.graph} requires --k")
        if self.command == "test" and not self.labels:
            raise ValueError("test requires --labels")
        if self.influence and self.graph != "edgelist" and not sources:
            raise ValueError("--influence needs the data or distances to rebuild the graph")
        return self
