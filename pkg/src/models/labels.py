from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class LabelVector:
    """
    Sample membership per node: 0 for sample X, 1 for sample Y.

    Edge types follow from the labels: J=1 when both ends are in X, J=2 when
    both are in Y, 0 otherwise.
    """

    values: np.ndarray

    @classmethod
    def from_values(
        cls,
        values: Iterable[int] | np.ndarray,
        *,
        node_count: Optional[int] = None,
        require_both: bool = True,
    ) -> "LabelVector":
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("Labels must be a non-empty 1-D sequence.")
        if not np.all(np.isin(arr, (0, 1))):
            raise InvalidInputError("Labels must be 0 (sample X) or 1 (sample Y).")
        if node_count is not None and arr.size != node_count:
            raise InvalidInputError(
                f"Label length {arr.size} does not match graph node count {node_count}."
            )
        labels = cls(values=arr.astype(np.int8))
        labels.values.setflags(write=False)
        if require_both:
            labels.require_two_per_sample()
        return labels

    @classmethod
    def from_sample_x(cls, node_count: int, sample_x: Iterable[int], **kwargs) -> "LabelVector":
        arr = np.ones(node_count, dtype=np.int8)
        arr[list(sample_x)] = 0
        return cls.from_values(arr, **kwargs)

    @property
    def n1(self) -> int:
        return int(np.count_nonzero(self.values == 0))

    @property
    def n2(self) -> int:
        return int(np.count_nonzero(self.values == 1))

    @property
    def N(self) -> int:
        return int(self.values.size)

    def require_two_per_sample(self) -> None:
        if self.n1 < 2:
            raise InvalidInputError("n1 < 2: sample X needs at least two observations.")
        if self.n2 < 2:
            raise InvalidInputError("n2 < 2: sample Y needs at least two observations.")

    def swapped(self) -> "LabelVector":
        return LabelVector.from_values(1 - self.values, require_both=False)

    def without(self, node: int) -> "LabelVector":
        return LabelVector.from_values(np.delete(self.values, node), require_both=False)
