import numpy as np
import pytest

from src.errors import InvalidInputError
from src.models.inference import StatisticKind
from src.services import graph_core
from src.services.inference import GAP_KINDS, asym_critical_value, critical_gap, critical_gaps, exact_null
from src.services.weighting import assign_weights


@pytest.fixture
def weighted_kmst():
    rng = np.random.default_rng(12)
    G = graph_core.kmst(graph_core.distance_matrix(rng.standard_normal((24, 5))), 3)
    return assign_weights(G, "w1")


def test_gap_rows_cover_every_alpha_and_statistic(weighted_kmst):
    alphas = [0.1, 0.05]
    gaps = critical_gaps(weighted_kmst, 12, alphas, 300, seed=3, threads=1)

    assert [(g.alpha, g.statistic) for g in gaps] == [(a, k) for a in alphas for k in GAP_KINDS]
    for g in gaps:
        assert g.asymptotic == pytest.approx(asym_critical_value(g.statistic, g.alpha))
        assert g.gap == pytest.approx(g.asymptotic - g.permutation)
        assert np.isfinite(g.permutation)


def test_permutation_critical_values_are_monotone_in_alpha(weighted_kmst):
    gaps = critical_gap(weighted_kmst, 12, 0.1, 400, seed=9, threads=1)
    tighter = critical_gap(weighted_kmst, 12, 0.01, 400, seed=9, threads=1)
    for kind in GAP_KINDS:
        assert tighter[kind].permutation >= gaps[kind].permutation
    assert gaps[StatisticKind.SR].permutation >= 0.0


def test_gaps_are_reproducible(weighted_kmst):
    a = critical_gaps(weighted_kmst, 10, [0.05], 300, seed=4, threads=1)
    b = critical_gaps(weighted_kmst, 10, [0.05], 300, seed=4, threads=3)
    assert [g.permutation for g in a] == [g.permutation for g in b]


def test_exhaustive_critical_value_is_an_attained_null_value(random_graph_factory):
    Gw = assign_weights(random_graph_factory(n=10, extra=7, seed=6), "w1")
    gaps = critical_gap(Gw, 5, 0.05, 0, seed=0, exhaustive=True)
    null = exact_null(Gw, 5).distributions

    sr = gaps[StatisticKind.SR].permutation
    assert np.any(np.isclose(null[StatisticKind.SR], sr))
    assert np.mean(null[StatisticKind.SR] > sr) <= 0.05


def test_gap_row_serialization(weighted_kmst):
    row = critical_gap(weighted_kmst, 12, 0.05, 100, seed=1, threads=1)[StatisticKind.MR].to_dict()
    assert row["statistic"] == "M_R"
    assert set(row) == {"statistic", "alpha", "asymptotic", "permutation", "gap"}


def test_bad_alpha(weighted_kmst):
    with pytest.raises(InvalidInputError):
        critical_gaps(weighted_kmst, 12, [0.05, 1.2], 100, seed=1)
