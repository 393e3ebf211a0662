import numpy as np
import pytest

from rrs.embedkit import ModelSimilarity
from rrs.errors import EmptyBatchError, UnknownSeriesError
from rrs.report import (
    emit_plot_data,
    emit_rank_report,
    quadrant_table,
    render_markdown_summary,
    write_plot_csv,
)
from rrs.scoring import PairScore, batch_context, finalize_scores


def _score(pid, rrs_value=0.9, mean_sem=0.95, struct=0.9, quadrant="I"):
    return PairScore(pair_id=pid,
                     per_model=[ModelSimilarity("m0", mean_sem, 0, 0, 0, 0)],
                     mean_sem=mean_sem, struct_sim=struct, cross_var=0.0,
                     agree=1.0, rrs=rrs_value, quadrant=quadrant)


def test_rank_report_orders_and_bands():
    scores = [_score("a", 0.80), _score("b", 0.99), _score("c", 0.95)]
    rows = emit_rank_report(scores, top_k=3)
    assert [r["pair_id"] for r in rows] == ["b", "c", "a"]
    assert [r["band"] for r in rows] == ["very high", "high", "low"]
    assert [r["rank"] for r in rows] == [1, 2, 3]


def test_rank_report_tie_breaks_by_pair_id():
    scores = [_score("zz", 0.9), _score("aa", 0.9)]
    rows = emit_rank_report(scores, top_k=2)
    assert [r["pair_id"] for r in rows] == ["aa", "zz"]


def test_rank_report_top_k_clamps():
    rows = emit_rank_report([_score("a"), _score("b")], top_k=10)
    assert len(rows) == 2


def test_rank_report_empty_rejected():
    with pytest.raises(EmptyBatchError):
        emit_rank_report([], top_k=1)


def test_hist_all_ones_mass_in_last_bin():
    scores = [_score(f"p{i}", struct=1.0) for i in range(7)]
    series = emit_plot_data(scores, "lts_hist")
    assert series.y[-1] == 7
    assert sum(series.y) == 7
    assert all(c == 0 for c in series.y[:-1])


def test_hist_bin_counts_sum_to_batch_size():
    rng = np.random.default_rng(5)
    scores = [_score(f"p{i}", struct=float(v)) for i, v in enumerate(rng.random(40))]
    series = emit_plot_data(scores, "lts_hist")
    assert sum(series.y) == 40
    assert len(series.y) == 20


def test_hist_summary_stats_match_engineered_batch():
    # five values with median 0.93 and mean 0.82 exactly
    values = [0.93, 0.95, 0.96, 0.93, 0.33]
    assert float(np.median(values)) == pytest.approx(0.93)
    assert float(np.mean(values)) == pytest.approx(0.82)
    scores = [_score(f"p{i}", struct=v) for i, v in enumerate(values)]
    series = emit_plot_data(scores, "lts_hist")
    assert series.metadata["median"] == pytest.approx(0.93)
    assert series.metadata["mean"] == pytest.approx(0.82)


def test_scatter_one_point_per_pair():
    scores = [_score(f"p{i}") for i in range(9)]
    series = emit_plot_data(scores, "sem_struct_scatter")
    assert len(series.x) == len(series.y) == 9


def test_multisignal_bars_shape():
    scores = [_score(f"p{i}") for i in range(4)]
    series = emit_plot_data(scores, "multisignal_bars")
    assert series.metadata["series_names"] == ["mean_sem", "struct_sim", "agree"]
    assert len(series.y) == 3
    assert all(len(col) == 4 for col in series.y)


def test_model_consistency_series():
    scores = [
        PairScore(pair_id="a",
                  per_model=[ModelSimilarity("m1", 0.9, 0, 0, 0, 0),
                             ModelSimilarity("m0", 0.8, 0, 0, 0, 0)],
                  mean_sem=0.85, struct_sim=0.9),
    ]
    series = emit_plot_data(scores, "model_consistency")
    assert series.metadata["series_names"] == ["m0", "m1"]
    assert series.y[0] == [0.8] and series.y[1] == [0.9]


def test_unknown_series_rejected():
    with pytest.raises(UnknownSeriesError):
        emit_plot_data([_score("a")], "nope")


def test_reports_deterministic_byte_for_byte(tmp_path):
    scores = [_score(f"p{i}", rrs_value=0.9 - i * 0.01) for i in range(6)]
    finalize_scores(scores)
    ctx = batch_context(scores)
    first = render_markdown_summary(scores, ctx)
    second = render_markdown_summary(scores, ctx)
    assert first == second
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_plot_csv(emit_plot_data(scores, "lts_hist"), p1)
    write_plot_csv(emit_plot_data(scores, "lts_hist"), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_quadrant_table_shape():
    scores = [_score("a", quadrant="I"), _score("b", quadrant="IV"),
              _score("c", quadrant="I")]
    rows = quadrant_table(scores)
    assert [r["quadrant"] for r in rows] == ["I", "II", "III", "IV"]
    assert [r["pairs"] for r in rows] == [2, 0, 0, 1]
    assert sum(r["pairs"] for r in rows) == 3
