from pathlib import Path
import sys

import pytest


REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from kpsumm import DomainError, StrategyConfig, Summarizer
from kpsumm.constants import ENV_STOPWORDS
from kpsumm.corpus import Cluster, make_document
from kpsumm.metrics import MetricId

TEXTS = (
    "The senate passed the budget. Senators debated the veto for hours.",
    "The governor threatened a veto. Lawmakers said the budget would pass.",
    "The house voted to override the veto. The budget took effect.",
)
REFERENCE = "The senate passed the budget and the house overrode the veto."


def _cluster(query=None, references=(REFERENCE,)):
    docs = tuple(make_document(f"d{i}", text, order_key=i) for i, text in enumerate(TEXTS))
    return Cluster("c1", docs, query=query, references=references)


def test_default_summarizer_loads_packaged_stopwords(monkeypatch):
    monkeypatch.delenv(ENV_STOPWORDS, raising=False)

    summarizer = Summarizer()

    assert summarizer.config.strategy == "waterfall"
    assert "the" in summarizer.config.stopwords


def test_stopwords_path_overrides_config(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("budget\n", encoding="utf-8")

    summarizer = Summarizer(StrategyConfig(stopwords=frozenset({"x"})), stopwords_path=path)

    assert summarizer.config.stopwords == frozenset({"budget"})
    assert Summarizer(StrategyConfig(stopwords=frozenset({"x"}))).config.stopwords == frozenset({"x"})


def test_from_options_uses_cli_names():
    summarizer = Summarizer.from_options(strategy="single-layer", distance="frac133", budget_words=40)

    assert summarizer.config.strategy == "single_layer"
    assert summarizer.config.budget_words == 40
    assert summarizer.label == "single-layer"
    assert summarizer.metric_label == "frac133"
    assert "single-layer" in repr(summarizer)


def test_metric_labels_of_baselines():
    assert Summarizer.from_options(strategy="centroid", distance="manhattan").metric_label == "cosine"
    assert Summarizer.from_options(strategy="mmr").metric_label == "cosine"
    mixed = Summarizer.from_options(strategy="mmr", mmr_sim2=MetricId("euclidean"))
    assert mixed.metric_label == "cosine/euclidean"


def test_summarize_and_evaluate():
    summarizer = Summarizer.from_options(budget_words=20)
    cluster = _cluster()

    score = summarizer.evaluate(cluster)

    assert score.label == "c1"
    assert 0 < score.summary.total_words <= 20
    assert 0.0 < score.r1 <= 1.0
    assert 0.0 <= score.r2 <= 1.0
    row = summarizer.report_row(score)
    assert (row.cluster_id, row.strategy, row.metric) == ("c1", "waterfall", "cosine")


def test_evaluate_trials_labels_each_trial():
    summarizer = Summarizer.from_options(budget_words=20, seed=5)

    scores = summarizer.evaluate_trials(_cluster(), 4)

    assert [s.label for s in scores] == ["c1/trial1", "c1/trial2", "c1/trial3", "c1/trial4"]


def test_keyphrases_are_fused_over_the_cluster():
    keyphrases = Summarizer.from_options().keyphrases(_cluster())

    assert "veto" in keyphrases.texts
    assert keyphrases.phrases[0].doc_count == 3


def test_mmr_without_query_is_a_domain_error():
    with pytest.raises(DomainError):
        Summarizer.from_options(strategy="mmr").summarize(_cluster())
