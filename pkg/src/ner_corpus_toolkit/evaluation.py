"""
Entity-level evaluation

Both sides are converted to BIO (repairing under the chosen policy) and decoded to
spans; a predicted span is correct only on an exact (sentence, start, end, label)
match. Rates are percentages kept at full precision and rounded half-up to two
decimals only when printed.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .corpus import Corpus, Scheme
from .exceptions import AlignmentError
from .schemes import RepairPolicy, convert, convert_corpus, decode_spans
from .utils import format_percent

OVERALL = "ALL"


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean of two percentages; 0 when both are 0"""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class LabelScore:
    label: str
    gold_count: int
    predicted_count: int
    correct_count: int

    @property
    def precision(self) -> float:
        return 100.0 * self.correct_count / self.predicted_count if self.predicted_count else 0.0

    @property
    def recall(self) -> float:
        return 100.0 * self.correct_count / self.gold_count if self.gold_count else 0.0

    @property
    def f1(self) -> float:
        return f_measure(self.precision, self.recall)

    def to_key_value(self) -> str:
        return (
            f"label={self.label} precision={format_percent(self.precision)} "
            f"recall={format_percent(self.recall)} f1={format_percent(self.f1)} "
            f"gold={self.gold_count} predicted={self.predicted_count} correct={self.correct_count}"
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "precision": float(format_percent(self.precision)),
            "recall": float(format_percent(self.recall)),
            "f1": float(format_percent(self.f1)),
            "gold": self.gold_count,
            "predicted": self.predicted_count,
            "correct": self.correct_count,
        }


@dataclass(frozen=True)
class ScoreReport:
    overall: LabelScore
    labels: Tuple[LabelScore, ...] = ()
    scored_in: str = Scheme.BIO.value

    @property
    def f1(self) -> float:
        return self.overall.f1

    def label(self, name: str) -> Optional[LabelScore]:
        for score in self.labels:
            if score.label == name:
                return score
        return None

    def to_table(self) -> str:
        rows = [("label", "precision", "recall", "f1", "gold", "predicted", "correct")]
        for s in (*self.labels, self.overall):
            rows.append(
                (s.label, format_percent(s.precision), format_percent(s.recall), format_percent(s.f1),
                 str(s.gold_count), str(s.predicted_count), str(s.correct_count))
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = [
            "  ".join(cell.ljust(w) if i == 0 else cell.rjust(w) for i, (cell, w) in enumerate(zip(row, widths)))
            for row in rows
        ]
        lines.insert(1, "-" * len(lines[0]))
        lines.append(f"(scored in {self.scored_in})")
        return "\n".join(lines) + "\n"

    def to_key_value(self) -> str:
        return "".join(s.to_key_value() + "\n" for s in (*self.labels, self.overall))

    def to_dict(self) -> Dict[str, object]:
        return {
            "scored_in": self.scored_in,
            "overall": self.overall.to_dict(),
            "labels": [s.to_dict() for s in self.labels],
        }


def _check_alignment(gold: Sequence[Sequence[str]], predicted: Sequence[Sequence[str]], what: str = "predicted"):
    if len(gold) != len(predicted):
        first = min(len(gold), len(predicted))
        raise AlignmentError(
            f"gold has {len(gold)} sentences, {what} has {len(predicted)}", sentence_index=first
        )
    for i, (g, p) in enumerate(zip(gold, predicted)):
        if len(g) != len(p):
            raise AlignmentError(f"gold has {len(g)} tokens, {what} has {len(p)}", sentence_index=i)


def _bio_spans(tags: Sequence[str], scheme: Scheme, policy: RepairPolicy):
    return set(decode_spans(convert(tags, scheme, Scheme.BIO, policy), Scheme.BIO, policy))


def _counts(
    gold: Sequence[Sequence[str]], predicted: Sequence[Sequence[str]],
    gold_scheme: Scheme, predicted_scheme: Scheme, policy: RepairPolicy,
) -> Tuple[Counter, Counter, Counter]:
    gold_counts, predicted_counts, correct_counts = Counter(), Counter(), Counter()
    for g_tags, p_tags in zip(gold, predicted):
        g_spans = _bio_spans(g_tags, gold_scheme, policy)
        p_spans = _bio_spans(p_tags, predicted_scheme, policy)
        gold_counts.update(s.label for s in g_spans)
        predicted_counts.update(s.label for s in p_spans)
        correct_counts.update(s.label for s in g_spans & p_spans)
    return gold_counts, predicted_counts, correct_counts


def _report(gold_counts: Counter, predicted_counts: Counter, correct_counts: Counter,
            labels: Iterable[str] = ()) -> ScoreReport:
    names = sorted(set(labels) | set(gold_counts) | set(predicted_counts))
    per_label = tuple(
        LabelScore(name, gold_counts[name], predicted_counts[name], correct_counts[name]) for name in names
    )
    overall = LabelScore(
        OVERALL, sum(gold_counts.values()), sum(predicted_counts.values()), sum(correct_counts.values())
    )
    return ScoreReport(overall, per_label)


def score_sequences(
    gold: Sequence[Sequence[str]],
    predicted: Sequence[Sequence[str]],
    gold_scheme: Union[Scheme, str],
    predicted_scheme: Union[Scheme, str, None] = None,
    policy: Union[RepairPolicy, str] = RepairPolicy.CONLL,
) -> ScoreReport:
    """Score aligned tag sequences (the building block of ``score``)"""
    gold_scheme = Scheme.parse(gold_scheme)
    predicted_scheme = Scheme.parse(predicted_scheme or gold_scheme)
    policy = RepairPolicy.parse(policy)
    _check_alignment(gold, predicted)
    return _report(*_counts(gold, predicted, gold_scheme, predicted_scheme, policy))


def score(gold: Corpus, predicted: Corpus, policy: Union[RepairPolicy, str] = RepairPolicy.CONLL) -> ScoreReport:
    """Entity-level P/R/F1 overall and per label, computed in BIO"""
    return _report(
        *_counts_for_corpora(gold, predicted, RepairPolicy.parse(policy)),
        labels=gold.label_set | predicted.label_set,
    )


def _counts_for_corpora(gold: Corpus, predicted: Corpus, policy: RepairPolicy, what: str = "predicted"):
    gold_tags = [s.tags for s in gold.sentences]
    predicted_tags = [s.tags for s in predicted.sentences]
    _check_alignment(gold_tags, predicted_tags, what)
    return _counts(gold_tags, predicted_tags, gold.scheme, predicted.scheme, policy)


@dataclass(frozen=True)
class DiffRow:
    label: str
    correct_a: int
    correct_b: int
    predicted_a: int
    predicted_b: int
    gold: int

    @property
    def delta(self) -> int:
        return self.correct_b - self.correct_a


@dataclass(frozen=True)
class DiffReport:
    rows: Tuple[DiffRow, ...] = field(default_factory=tuple)

    @property
    def overall(self) -> DiffRow:
        return self.rows[-1]

    def row(self, label: str) -> Optional[DiffRow]:
        return next((r for r in self.rows if r.label == label), None)

    def to_table(self) -> str:
        header = ("label", "correct_a", "correct_b", "delta", "predicted_a", "predicted_b", "gold")
        rows = [header] + [
            (r.label, str(r.correct_a), str(r.correct_b), f"{r.delta:+d}", str(r.predicted_a),
             str(r.predicted_b), str(r.gold))
            for r in self.rows
        ]
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        lines = [
            "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
            for row in rows
        ]
        lines.insert(1, "-" * len(lines[0]))
        return "\n".join(lines) + "\n"

    def to_key_value(self) -> str:
        return "".join(
            f"label={r.label} correct_a={r.correct_a} correct_b={r.correct_b} delta={r.delta} "
            f"predicted_a={r.predicted_a} predicted_b={r.predicted_b} gold={r.gold}\n"
            for r in self.rows
        )


def diff_report(
    gold: Corpus, predicted_a: Corpus, predicted_b: Corpus, policy: Union[RepairPolicy, str] = RepairPolicy.CONLL
) -> DiffReport:
    """Correct-phrase counts of two systems per label (lexicographic), then ALL"""
    policy = RepairPolicy.parse(policy)
    gold_a, pred_a, correct_a = _counts_for_corpora(gold, predicted_a, policy, "system A")
    _, pred_b, correct_b = _counts_for_corpora(gold, predicted_b, policy, "system B")
    labels = sorted(gold.label_set | set(gold_a) | set(pred_a) | set(pred_b))
    rows = [
        DiffRow(name, correct_a[name], correct_b[name], pred_a[name], pred_b[name], gold_a[name])
        for name in labels
    ]
    rows.append(
        DiffRow(
            OVERALL, sum(correct_a.values()), sum(correct_b.values()),
            sum(pred_a.values()), sum(pred_b.values()), sum(gold_a.values()),
        )
    )
    return DiffReport(tuple(rows))


def implied_gold_count(predicted: int, correct: int, f1: float) -> float:
    """Gold-span count implied by predicted/correct counts and a reported F1 (percent)

    precision P = 100*correct/predicted, recall R = F1*P/(2P - F1), gold = 100*correct/R.
    """
    precision = 100.0 * correct / predicted
    recall = f1 * precision / (2 * precision - f1)
    return 100.0 * correct / recall


@dataclass(frozen=True)
class SchemeComparison:
    scheme: str
    report: ScoreReport

    @property
    def f1(self) -> float:
        return self.report.f1


def compare_schemes(
    train: Corpus,
    test: Corpus,
    model_type: str = "perceptron",
    epochs: int = 5,
    seed: int = 12,
    policy: Union[RepairPolicy, str] = RepairPolicy.CONLL,
    schemes: Sequence[Scheme] = (Scheme.BIO, Scheme.IO, Scheme.BIOES),
    logger=None,
) -> List[SchemeComparison]:
    """Train the baseline under each scheme and score every run in BIO"""
    from .factory import train_tagger
    from .taggers import tag_corpus

    results = []
    for scheme in schemes:
        converted = convert_corpus(train, scheme, policy)
        model = train_tagger(converted, model_type, epochs=epochs, seed=seed, logger=logger)
        predicted = tag_corpus(model, [s.surfaces for s in test.sentences])
        results.append(SchemeComparison(scheme.value, score(test, predicted, policy)))
    return results


def format_scheme_comparison(results: Sequence[SchemeComparison]) -> str:
    lines = [f"{'scheme':<6}  {'f1':>6}  {'predicted':>9}  {'correct':>7}  {'gold':>6}"]
    for r in results:
        o = r.report.overall
        lines.append(
            f"{r.scheme:<6}  {format_percent(o.f1):>6}  {o.predicted_count:>9}  {o.correct_count:>7}  {o.gold_count:>6}"
        )
    return "\n".join(lines) + "\n"
