"""Sliding-window segmentation, token counting, and label aggregation."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from govnet.isdetect import (
    DEFAULT_TOKEN_BUDGET,
    RegexTokenizer,
    Segment,
    SentenceRecord,
    aggregate_predictions,
    default_tokenizer,
    segment_email,
)


def records(counts, email_id="<e@x>"):
    return [
        SentenceRecord(email_id=email_id, index=i, text=f"s{i}", token_count=c)
        for i, c in enumerate(counts)
    ]


def test_tokenizer_wordpiece_estimate():
    tok = RegexTokenizer()
    # "We must vote." -> tokens [We, must, vote, .] -> ceil(4 * 1.3) = 6
    assert tok.tokens("We must vote.") == ["We", "must", "vote", "."]
    assert tok.count("We must vote.") == 6
    assert tok.count("word") == math.ceil(1.3)
    assert tok.count("") == 1  # floor of one token for empty text
    assert default_tokenizer().count("a, b") == math.ceil(3 * 1.3)


def test_single_window_when_everything_fits():
    segs = segment_email(records([10, 20, 30]), token_budget=100)
    assert len(segs) == 1
    assert segs[0].start == 0 and len(segs[0]) == 3
    assert segs[0].total_tokens == 60


def test_windows_advance_one_sentence():
    segs = segment_email(records([60, 60, 60]), token_budget=100)
    assert [(s.start, s.end) for s in segs] == [(0, 0), (1, 1), (2, 2)]


def test_maximal_run_per_start():
    segs = segment_email(records([40, 40, 40, 40]), token_budget=100)
    # starts 0..2 each cover two sentences; start 3 would be contained in 2's.
    assert [(s.start, s.end) for s in segs] == [(0, 1), (1, 2), (2, 3)]


def test_over_budget_sentence_is_singleton():
    segs = segment_email(records([10, 500, 10]), token_budget=100)
    assert [(s.start, s.end) for s in segs] == [(0, 0), (1, 1), (2, 2)]
    assert segs[1].total_tokens == 500


def test_trailing_contained_windows_dropped():
    segs = segment_email(records([10, 10, 10]), token_budget=100)
    assert [(s.start, s.end) for s in segs] == [(0, 2)]


def test_empty_input_and_bad_budget():
    assert segment_email([]) == []
    with pytest.raises(ValueError):
        segment_email(records([5]), token_budget=0)


def test_default_budget_is_256():
    assert DEFAULT_TOKEN_BUDGET == 256


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(min_value=1, max_value=300), min_size=1, max_size=40),
    st.integers(min_value=1, max_value=256),
)
def test_segment_properties(counts, budget):
    recs = records(counts)
    segs = segment_email(recs, token_budget=budget)
    covered = set()
    for seg in segs:
        covered.update(seg.indices)
        if len(seg) > 1:
            assert seg.total_tokens <= budget
    assert covered == set(range(len(counts)))
    starts = [s.start for s in segs]
    assert starts == list(range(len(starts)))  # consecutive, advancing by one
    ends = [s.end for s in segs]
    assert all(b >= a for a, b in zip(ends, ends[1:]))
    if len(ends) > 1:
        assert ends[-1] > ends[-2]  # trailing contained windows are dropped
    for seg in segs:
        nxt = seg.end + 1
        if nxt < len(counts) and counts[seg.start] <= budget:
            # each in-budget window is maximal: one more sentence would not fit
            assert seg.total_tokens + counts[nxt] > budget
        if counts[seg.start] > budget:
            assert len(seg) == 1  # over-budget sentence stands alone


def test_aggregate_predictions_or_logic():
    recs = records([60, 60, 60])
    segs = segment_email(recs, token_budget=120)
    assert [(s.start, s.end) for s in segs] == [(0, 1), (1, 2)]
    segs[0].predictions = [True, False]
    segs[1].predictions = [False, False]
    labels = aggregate_predictions(segs, {"<e@x>": 3})
    assert labels == {("<e@x>", 0): True, ("<e@x>", 1): False, ("<e@x>", 2): False}
    segs[1].predictions = [True, True]
    labels = aggregate_predictions(segs)
    assert labels[("<e@x>", 1)] is True  # OR across overlapping windows


def test_aggregate_predictions_errors():
    segs = segment_email(records([5, 5]), token_budget=100)
    with pytest.raises(ValueError):
        aggregate_predictions(segs)  # no predictions set
    segs[0].predictions = [True]
    with pytest.raises(ValueError):
        aggregate_predictions(segs)  # wrong length
    segs[0].predictions = [True, False]
    with pytest.raises(ValueError):
        aggregate_predictions(segs, {"<e@x>": 3})  # sentence 2 uncovered


def test_aggregation_matches_hand_labels_on_email_fixture():
    rng = np.random.default_rng(5)
    segments = []
    expected = {}
    for e in range(20):
        email_id = f"<m{e}@x>"
        counts = rng.integers(20, 120, size=rng.integers(2, 8))
        segs = segment_email(records(list(counts), email_id), token_budget=200)
        truth = {i: False for i in range(len(counts))}
        for seg in segs:
            preds = [bool(rng.random() < 0.3) for _ in seg.records]
            seg.predictions = preds
            for rec, p in zip(seg.records, preds):
                truth[rec.index] = truth[rec.index] or p
        segments.extend(segs)
        for i, label in truth.items():
            expected[(email_id, i)] = label
    got = aggregate_predictions(segments)
    assert got == expected


def test_training_segment_roundtrip(tmp_path):
    from govnet.isdetect import load_training_segments, write_training_segments

    recs = records([10, 20, 30])
    for r, label in zip(recs, (False, True, False)):
        r.gold_label = label
    segments = segment_email(recs, token_budget=35)
    path = write_training_segments(segments, tmp_path / "train.jsonl")
    loaded = load_training_segments(path)
    assert [s.texts for s in loaded] == [s.texts for s in segments]
    assert [s.labels for s in loaded] == [s.labels for s in segments]
    assert [s.start for s in loaded] == [s.start for s in segments]
    assert all(s.email_id == "<e@x>" for s in loaded)


def test_training_segment_export_rejects_unlabeled(tmp_path):
    from govnet.isdetect import write_training_segments

    segments = segment_email(records([10, 20]), token_budget=35)
    with pytest.raises(ValueError, match="unlabeled"):
        write_training_segments(segments, tmp_path / "train.jsonl")
