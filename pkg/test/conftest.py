import numpy as np
import pytest

from src.models.graph import SimilarityGraph


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Each test sees default settings unless it sets RGTEST_* itself."""
    import os

    for key in list(os.environ):
        if key.upper().startswith("RGTEST_"):
            monkeypatch.delenv(key, raising=False)

    from src.app.config import get_settings

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def path4() -> SimilarityGraph:
    """0 - 1 - 2 - 3"""
    return SimilarityGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def path3() -> SimilarityGraph:
    return SimilarityGraph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def star() -> SimilarityGraph:
    """K_{1,3} centred on node 0."""
    return SimilarityGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def cycle4() -> SimilarityGraph:
    return SimilarityGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def single_edge() -> SimilarityGraph:
    return SimilarityGraph.from_edges(2, [(0, 1)])


@pytest.fixture
def random_graph_factory():
    """Random connected graphs: a random tree plus extra random edges."""

    def make(n: int, extra: int, seed: int) -> SimilarityGraph:
        rng = np.random.default_rng(seed)
        edges = {(int(rng.integers(0, i)), i) for i in range(1, n)}
        while len(edges) < n - 1 + extra:
            i, j = sorted(int(v) for v in rng.choice(n, size=2, replace=False))
            edges.add((i, j))
        return SimilarityGraph.from_edges(n, sorted(edges))

    return make


@pytest.fixture
def write_csv(tmp_path):
    def write(name: str, rows, header=None) -> str:
        path = tmp_path / name
        lines = []
        if header is not None:
            lines.append(",".join(header))
        for row in rows:
            if np.ndim(row) == 0:
                lines.append(repr(float(row)) if isinstance(row, float) else str(row))
            else:
                lines.append(",".join(repr(float(v)) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    return write
