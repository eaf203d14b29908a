"""
Tests for entity-level scoring and diff reports
"""

from collections import Counter

import pytest

from conftest import LABELS, random_spans
from ner_corpus_toolkit import (
    AlignmentError,
    Corpus,
    EntitySpan,
    Scheme,
    Sentence,
    convert_corpus,
    diff_report,
    encode_tags,
    f_measure,
    score,
    score_sequences,
)
from ner_corpus_toolkit.evaluation import OVERALL, implied_gold_count
from ner_corpus_toolkit.utils import format_percent


def corpus_from_spans(span_lists, lengths, scheme=Scheme.BIO):
    sentences = [
        Sentence.from_pairs([f"t{i}" for i in range(n)], encode_tags(spans, n, scheme))
        for spans, n in zip(span_lists, lengths)
    ]
    return Corpus(tuple(sentences), scheme)


def random_pair(rng, sentences=8):
    lengths = [rng.randint(1, 15) for _ in range(sentences)]
    gold = [random_spans(rng, n) for n in lengths]
    predicted = []
    for spans, n in zip(gold, lengths):
        # keep some gold spans so intersections are non-trivial
        predicted.append(spans if rng.random() < 0.4 else random_spans(rng, n))
    return lengths, gold, predicted


def oracle_counts(gold, predicted):
    gold_c, pred_c, correct_c = Counter(), Counter(), Counter()
    for index, (g, p) in enumerate(zip(gold, predicted)):
        g_set = {(index, s.start, s.end, s.label) for s in g}
        p_set = {(index, s.start, s.end, s.label) for s in p}
        gold_c.update(x[3] for x in g_set)
        pred_c.update(x[3] for x in p_set)
        correct_c.update(x[3] for x in g_set & p_set)
    return gold_c, pred_c, correct_c


class TestFMeasure:
    """Harmonic mean anchors"""

    @pytest.mark.unit
    def test_reported_rates(self):
        assert f_measure(82.09, 73.43) == pytest.approx(77.52, abs=0.005)
        assert f_measure(76.75, 76.45) == pytest.approx(76.60, abs=0.005)

    @pytest.mark.unit
    def test_degenerate(self):
        assert f_measure(0, 0) == 0.0

    @pytest.mark.unit
    def test_half_up_presentation(self):
        assert format_percent(77.525) == "77.53"
        assert format_percent(50) == "50.00"

    @pytest.mark.unit
    def test_implied_gold_counts_agree(self):
        first = implied_gold_count(13423, 9961, 73.74)
        second = implied_gold_count(13283, 10007, 74.47)
        assert 100.0 * 9961 / 13423 == pytest.approx(74.21, abs=0.005)
        assert first == pytest.approx(13594, abs=0.5)
        assert second == pytest.approx(13592, abs=0.5)
        assert first == pytest.approx(second, rel=1e-4)


class TestScore:
    """Exact-match span scoring in BIO"""

    @pytest.mark.unit
    def test_identity_is_perfect(self, bio_corpus):
        report = score(bio_corpus, bio_corpus)
        for label_score in (*report.labels, report.overall):
            assert (label_score.precision, label_score.recall, label_score.f1) == (100.0, 100.0, 100.0)
        assert report.scored_in == "BIO"

    @pytest.mark.unit
    def test_half_correct(self):
        gold = corpus_from_spans([[EntitySpan(0, 2, "problem"), EntitySpan(4, 5, "test")]], [5])
        predicted = corpus_from_spans([[EntitySpan(0, 2, "problem"), EntitySpan(3, 5, "test")]], [5])
        report = score(gold, predicted)
        overall = report.overall
        assert overall.label == OVERALL
        assert (overall.correct_count, overall.predicted_count, overall.gold_count) == (1, 2, 2)
        assert format_percent(overall.f1) == "50.00"
        assert report.label("test").correct_count == 0
        assert report.label("problem").f1 == 100.0

    @pytest.mark.unit
    def test_no_predicted_entities(self, bio_corpus):
        empty = bio_corpus.replace_sentences(s.with_tags(["O"] * len(s)) for s in bio_corpus)
        overall = score(bio_corpus, empty).overall
        assert (overall.precision, overall.recall, overall.f1) == (0.0, 0.0, 0.0)

    @pytest.mark.unit
    def test_matches_span_set_oracle(self, rng):
        for _ in range(500):
            lengths, gold, predicted = random_pair(rng)
            report = score(corpus_from_spans(gold, lengths), corpus_from_spans(predicted, lengths))
            gold_c, pred_c, correct_c = oracle_counts(gold, predicted)
            for label in LABELS:
                row = report.label(label)
                counts = (row.gold_count, row.predicted_count, row.correct_count) if row else (0, 0, 0)
                assert counts == (gold_c[label], pred_c[label], correct_c[label])
            overall = report.overall
            assert overall.gold_count == sum(gold_c.values())
            assert overall.correct_count == sum(correct_c.values())
            assert overall.f1 == pytest.approx(f_measure(overall.precision, overall.recall))

    @pytest.mark.unit
    def test_prediction_scheme_does_not_matter(self, rng):
        for _ in range(50):
            lengths, gold, predicted = random_pair(rng)
            gold_corpus = corpus_from_spans(gold, lengths)
            bioes = corpus_from_spans(predicted, lengths, Scheme.BIOES)
            direct = score(gold_corpus, bioes)
            via_bio = score(gold_corpus, convert_corpus(bioes, Scheme.BIO))
            assert direct.to_dict() == via_bio.to_dict()

    @pytest.mark.unit
    def test_swapping_sides_swaps_precision_and_recall(self, rng):
        lengths, gold, predicted = random_pair(rng, sentences=20)
        g, p = corpus_from_spans(gold, lengths), corpus_from_spans(predicted, lengths)
        forward, backward = score(g, p).overall, score(p, g).overall
        assert forward.precision == backward.recall
        assert forward.recall == backward.precision

    @pytest.mark.unit
    def test_misaligned_names_first_divergent_sentence(self):
        gold = corpus_from_spans([[], []], [3, 4])
        predicted = corpus_from_spans([[], []], [3, 5])
        with pytest.raises(AlignmentError) as exc_info:
            score(gold, predicted)
        assert exc_info.value.sentence_index == 1
        assert "sentence 1" in str(exc_info.value)

    @pytest.mark.unit
    def test_sentence_count_mismatch(self, bio_corpus):
        with pytest.raises(AlignmentError):
            score(bio_corpus, Corpus(bio_corpus.sentences[:1], Scheme.BIO))

    @pytest.mark.unit
    def test_score_sequences_with_ill_formed_predictions(self):
        report = score_sequences([["B-x", "I-x", "O"]], [["I-x", "I-x", "O"]], Scheme.BIO)
        assert report.overall.correct_count == 1

    @pytest.mark.unit
    def test_report_formats(self, bio_corpus):
        report = score(bio_corpus, bio_corpus)
        lines = report.to_key_value().splitlines()
        assert lines[-1].startswith("label=ALL precision=100.00 recall=100.00 f1=100.00")
        assert len(lines) == 3
        table = report.to_table()
        assert "problem" in table and table.rstrip().endswith("(scored in BIO)")


class TestDiffReport:
    """Correct-phrase comparison of two systems"""

    @pytest.mark.unit
    def test_same_system_has_zero_deltas(self, bio_corpus):
        report = diff_report(bio_corpus, bio_corpus, bio_corpus)
        assert all(row.delta == 0 for row in report.rows)
        assert report.overall.label == OVERALL

    @pytest.mark.unit
    def test_gold_against_empty(self, bio_corpus):
        empty = bio_corpus.replace_sentences(s.with_tags(["O"] * len(s)) for s in bio_corpus)
        report = diff_report(bio_corpus, empty, bio_corpus)
        assert [row.label for row in report.rows] == ["problem", "test", OVERALL]
        assert [row.delta for row in report.rows] == [2, 1, 3]
        assert report.row("problem").gold == 2

    @pytest.mark.unit
    def test_deltas_match_recount(self, rng):
        for _ in range(100):
            lengths, gold, predicted_a = random_pair(rng)
            predicted_b = [random_spans(rng, n) if rng.random() < 0.5 else g for g, n in zip(gold, lengths)]
            report = diff_report(
                corpus_from_spans(gold, lengths),
                corpus_from_spans(predicted_a, lengths),
                corpus_from_spans(predicted_b, lengths),
            )
            _, _, correct_a = oracle_counts(gold, predicted_a)
            _, _, correct_b = oracle_counts(gold, predicted_b)
            for row in report.rows[:-1]:
                assert row.delta == correct_b[row.label] - correct_a[row.label]
            assert report.overall.delta == sum(correct_b.values()) - sum(correct_a.values())

    @pytest.mark.unit
    def test_misaligned_system(self, bio_corpus):
        with pytest.raises(AlignmentError, match="system B"):
            diff_report(bio_corpus, bio_corpus, Corpus(bio_corpus.sentences[:1], Scheme.BIO))
