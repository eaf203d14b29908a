"""
Tests for transformation-based rule learning, application, rule files and tuning
"""

import random

import pytest

from ner_corpus_toolkit import (
    AlignmentError,
    BrillConfig,
    BrillRule,
    ConfigError,
    RuleParseError,
    Scheme,
    apply_rules,
    learn_rules,
    parse_rules,
    serialize_rules,
    train_unigram,
    tune_min_score,
)
from ner_corpus_toolkit.brill import (
    TEMPLATES,
    apply_rules_to_corpus,
    format_rule_summary,
    summarize_rules_by_label,
    template,
    truncate_rules,
)
from ner_corpus_toolkit.synthetic import generate_corpus

BEFORE = ("has", "reports", "with", "denies", "notes")
AFTER = (".", "today", "again", "now")


def pain_corpus(errors: int = 50, correct_pain: int = 0):
    """``errors`` sentences where "pain" is tagged O but gold is S-problem

    Contexts rotate so that only the surface of "pain" separates the errors
    from correctly tagged O tokens.
    """
    surfaces, current, gold = [], [], []
    for k in range(errors):
        surfaces.append([BEFORE[k % len(BEFORE)], "pain", AFTER[k % len(AFTER)]])
        current.append(["O", "O", "O"])
        gold.append(["O", "S-problem", "O"])
    for k in range(correct_pain):
        surfaces.append(["no", "pain", AFTER[k % len(AFTER)]])
        current.append(["O", "O", "O"])
        gold.append(["O", "O", "O"])
    for before in BEFORE:
        for after in AFTER:
            for filler in (["{b}", "no", "fever", "{a}"], ["patient", "{b}", "stable", "{a}"]):
                words = [w.format(b=before, a=after) for w in filler]
                surfaces.append(words)
                current.append(["O"] * len(words))
                gold.append(["O"] * len(words))
    return surfaces, current, gold


def count_errors(current, gold):
    return sum(c != g for tags, truth in zip(current, gold) for c, g in zip(tags, truth))


def brute_force_candidates(surfaces, current, gold):
    """(score, accuracy, body, rule) of every instantiable rule with at least one good change"""
    to_tags = {tag for tags in gold for tag in tags}
    keys = set()
    for words, tags in zip(surfaces, current):
        for i in range(len(tags)):
            for tmpl in TEMPLATES:
                binding = tuple(slot.value(i, words, tags) for slot in tmpl.slots)
                keys.update((tmpl.template_id, binding, tags[i], to) for to in to_tags if to != tags[i])

    out = []
    for tid, binding, from_tag, to_tag in keys:
        rule = BrillRule(tuple(zip(template(tid).slot_names, binding)), from_tag, to_tag)
        good = bad = 0
        for words, tags, truth in zip(surfaces, current, gold):
            tags = list(tags)
            for i in range(len(tags)):
                if rule.matches(i, words, tags):
                    if truth[i] == to_tag:
                        good += 1
                    elif truth[i] == from_tag:
                        bad += 1
                    tags[i] = to_tag
        if good:
            out.append((good - bad, good / (good + bad), rule.body(), rule))
    return out


def brute_force_best(surfaces, current, gold, min_acc=0.0, min_score=1):
    eligible = [c for c in brute_force_candidates(surfaces, current, gold) if c[1] >= min_acc and c[0] >= min_score]
    if not eligible:
        return None
    return min(eligible, key=lambda c: (-c[0], -c[1], c[2]))


def noisy_corpus(rng: random.Random, sentences: int = 12):
    vocab = ("a", "b", "c", "d", "e")
    tags = ("O", "B-x", "I-x", "B-y")
    surfaces, current, gold = [], [], []
    for _ in range(sentences):
        n = rng.randint(1, 6)
        words = [rng.choice(vocab) for _ in range(n)]
        truth = [rng.choice(tags) for _ in range(n)]
        noisy = [rng.choice(tags) if rng.random() < 0.3 else t for t in truth]
        surfaces.append(words)
        current.append(noisy)
        gold.append(truth)
    return surfaces, current, gold


@pytest.fixture(scope="module")
def unigram_errors():
    """Unigram output on the demo corpus against its gold tags"""
    corpus = generate_corpus(200, seed=12, split="train")
    model = train_unigram(generate_corpus(100, seed=5, split="train"))
    surfaces = [s.surfaces for s in corpus]
    return surfaces, [model.tag(s) for s in surfaces], [s.tags for s in corpus]


class TestApplyRules:
    """In-place sweep semantics"""

    @pytest.mark.unit
    def test_empty_rule_list_is_identity(self):
        assert apply_rules(["a", "b"], ["O", "B-x"], []) == ["O", "B-x"]

    @pytest.mark.unit
    def test_sweep_reads_rewritten_tags(self):
        rule = BrillRule((("tag[-1]", "I-problem"),), "O", "I-problem")
        tags = ["I-problem", "O", "O"]
        assert apply_rules(["a", "b", "c"], tags, [rule]) == ["I-problem", "I-problem", "I-problem"]
        assert tags == ["I-problem", "O", "O"]

    @pytest.mark.unit
    def test_begin_tag_condition_fires_once(self):
        rule = BrillRule((("tag[-1]", "B-problem"),), "O", "I-problem")
        assert apply_rules(["a", "b", "c"], ["B-problem", "O", "O"], [rule]) == ["B-problem", "I-problem", "O"]

    @pytest.mark.unit
    def test_rules_apply_in_order(self):
        first = BrillRule((("word[0]", "pain"),), "O", "B-problem")
        second = BrillRule((("tag[-1]", "B-problem"),), "O", "I-problem")
        assert apply_rules(["pain", "x"], ["O", "O"], [first, second]) == ["B-problem", "I-problem"]
        assert apply_rules(["pain", "x"], ["O", "O"], [second, first]) == ["B-problem", "O"]

    @pytest.mark.unit
    def test_boundary_symbols(self):
        rule = BrillRule((("tag[+1]", "<EOS>"),), "O", "S-x")
        assert apply_rules(["a", "b"], ["O", "O"], [rule]) == ["O", "S-x"]

    @pytest.mark.unit
    def test_rule_must_change_tag(self):
        with pytest.raises(ValueError):
            BrillRule((("word[0]", "a"),), "O", "O")
        with pytest.raises(ValueError):
            BrillRule((("word[+2]", "a"),), "O", "B-x")


class TestLearnRules:
    """Greedy error-driven learning"""

    @pytest.mark.unit
    def test_systematic_error_gives_surface_rule(self):
        surfaces, current, gold = pain_corpus()
        rules = learn_rules(surfaces, current, gold, BrillConfig(min_acc=0.99, min_score=5))
        assert rules[0].conditions == (("word[0]", "pain"),)
        assert (rules[0].from_tag, rules[0].to_tag) == ("O", "S-problem")
        assert (rules[0].score, rules[0].accuracy) == (50, 1.0)
        assert rules[0].body() == brute_force_best(surfaces, current, gold, 0.99)[2]

    @pytest.mark.unit
    def test_first_rule_for_any_min_score_up_to_error_count(self):
        surfaces, current, gold = pain_corpus()
        for min_score in (1, 25, 50):
            rules = learn_rules(surfaces, current, gold, BrillConfig(min_score=min_score))
            assert rules[0].conditions == (("word[0]", "pain"),)
        assert learn_rules(surfaces, current, gold, BrillConfig(min_score=51)) == []

    @pytest.mark.unit
    def test_low_accuracy_candidate_is_discarded(self):
        surfaces, current, gold = pain_corpus(errors=98, correct_pain=2)
        strict = learn_rules(surfaces, current, gold, BrillConfig(min_acc=0.99, min_score=5))
        assert all(rule.conditions != (("word[0]", "pain"),) for rule in strict)
        lenient = learn_rules(surfaces, current, gold, BrillConfig(min_acc=0.98, min_score=5))
        assert lenient[0].conditions == (("word[0]", "pain"),)
        assert (lenient[0].score, lenient[0].accuracy) == (96, 0.98)

    @pytest.mark.unit
    def test_no_errors_no_rules(self, bio_corpus):
        tags = [s.tags for s in bio_corpus]
        assert learn_rules([s.surfaces for s in bio_corpus], tags, tags) == []

    @pytest.mark.unit
    def test_first_rule_matches_exhaustive_enumeration(self):
        rng = random.Random(31)
        for _ in range(8):
            surfaces, current, gold = noisy_corpus(rng)
            best = brute_force_best(surfaces, current, gold, min_acc=0.0)
            rules = learn_rules(surfaces, current, gold, BrillConfig(min_acc=0.0, min_score=1, max_rules=1))
            if best is None:
                assert rules == []
                continue
            assert (rules[0].score, rules[0].accuracy, rules[0].body()) == best[:3]

    @pytest.mark.unit
    def test_cascading_candidate_is_scored_exactly(self):
        surfaces = [["x", "y", "z"]] * 4
        current = [["I-problem", "O", "O"]] * 4
        gold = [["I-problem", "I-problem", "I-problem"]] * 4
        rules = learn_rules(surfaces, current, gold, BrillConfig(min_score=1))
        assert count_errors([apply_rules(s, c, rules) for s, c in zip(surfaces, current)], gold) == 0
        assert sum(rule.score for rule in rules) == 8

    @pytest.mark.unit
    def test_errors_drop_by_each_rule_score(self, unigram_errors):
        surfaces, current, gold = unigram_errors
        rules = learn_rules(surfaces, current, gold, BrillConfig(min_acc=0.99, min_score=2))
        assert rules
        tags = [list(t) for t in current]
        errors = count_errors(tags, gold)
        for rule in rules:
            assert rule.accuracy >= 0.99
            assert rule.score >= 2
            tags = [apply_rules(s, t, [rule]) for s, t in zip(surfaces, tags)]
            after = count_errors(tags, gold)
            assert errors - after == rule.score
            errors = after

    @pytest.mark.unit
    def test_min_score_only_moves_stopping_point(self, unigram_errors):
        surfaces, current, gold = unigram_errors
        full = learn_rules(surfaces, current, gold, BrillConfig(min_acc=0.99, min_score=1, max_rules=10000))
        for min_score in (2, 3, 5):
            cfg = BrillConfig(min_acc=0.99, min_score=min_score, max_rules=10000)
            rules = learn_rules(surfaces, current, gold, cfg)
            assert rules == truncate_rules(full, min_score)

    @pytest.mark.unit
    def test_max_rules_cap(self, unigram_errors):
        surfaces, current, gold = unigram_errors
        assert len(learn_rules(surfaces, current, gold, BrillConfig(min_score=1, max_rules=2))) <= 2

    @pytest.mark.unit
    def test_alignment_mismatch(self):
        with pytest.raises(AlignmentError) as exc_info:
            learn_rules([["a"], ["b", "c"]], [["O"], ["O", "O"]], [["O"], ["O"]])
        assert exc_info.value.sentence_index == 1

    @pytest.mark.unit
    def test_config_validation(self):
        with pytest.raises(ConfigError):
            BrillConfig(min_score=0)
        with pytest.raises(ConfigError):
            BrillConfig(min_acc=1.5)


class TestRuleFiles:
    """Rule serialization"""

    @pytest.mark.unit
    def test_line_format(self):
        rule = BrillRule((("word[0]", "pain"), ("tag[-1]", "O")), "O", "S-problem", 12, 0.992)
        assert rule.serialize() == "FROM O TO S-problem IF word[0]=pain AND tag[-1]=O ; score=12 acc=0.992"
        assert rule.template_id == 8

    @pytest.mark.unit
    def test_values_with_spaces_are_quoted(self):
        rule = BrillRule((("word[-1]", "a b"), ("word[0]", "c")), "O", "B-x", 3, 1.0)
        assert "word[-1]='a b'" in rule.serialize()
        assert parse_rules(rule.serialize()) == [rule]

    @pytest.mark.unit
    def test_comments_and_blank_lines(self):
        text = "# learned rules\n\nFROM O TO B-x IF word[0]=a ; score=3 acc=1.0\n"
        assert len(parse_rules(text)) == 1

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "line",
        [
            "FROM O TO B-x IF word[0]=a",
            "FROM O INTO B-x IF word[0]=a ; score=3 acc=1.0",
            "FROM O TO B-x IF word[0]=a AND ; score=3 acc=1.0",
            "FROM O TO B-x IF word[0]=a OR tag[-1]=O ; score=3 acc=1.0",
            "FROM O TO B-x IF word[9]=a ; score=3 acc=1.0",
            "FROM O TO B-x IF word[0]=a ; score=three acc=1.0",
            "FROM O TO O IF word[0]=a ; score=3 acc=1.0",
        ],
    )
    def test_parse_errors(self, line):
        with pytest.raises(RuleParseError):
            parse_rules(f"# header\n{line}\n")

    @pytest.mark.unit
    def test_parse_error_reports_line(self):
        with pytest.raises(RuleParseError) as exc_info:
            parse_rules("FROM O TO B-x IF word[0]=a ; score=3 acc=1.0\nFROM O\n")
        assert exc_info.value.line_number == 2

    @pytest.mark.unit
    def test_round_trip_preserves_behavior(self, unigram_errors):
        surfaces, current, gold = unigram_errors
        rules = learn_rules(surfaces, current, gold, BrillConfig(min_score=2))
        restored = parse_rules(serialize_rules(rules))
        assert restored == rules
        held_out = generate_corpus(1000, seed=3, split="test")
        model = train_unigram(generate_corpus(100, seed=5, split="train"))
        for sentence in held_out:
            tags = model.tag(sentence.surfaces)
            assert apply_rules(sentence.surfaces, tags, restored) == apply_rules(sentence.surfaces, tags, rules)


class TestTuneMinScore:
    """Half-split tuning of min_score"""

    @pytest.mark.unit
    def test_ties_go_to_largest_candidate(self, bio_corpus):
        result = tune_min_score(bio_corpus, bio_corpus, bio_corpus, bio_corpus)
        assert result.best_min_score == 5
        assert result.rules == ()
        assert set(result.f1_by_score.values()) == {100.0}

    @pytest.mark.unit
    def test_empty_candidates(self, bio_corpus):
        with pytest.raises(ConfigError):
            tune_min_score(bio_corpus, bio_corpus, bio_corpus, bio_corpus, candidates=[])

    @pytest.mark.unit
    def test_picks_best_f1_and_truncated_rules(self):
        gold = generate_corpus(300, seed=12, split="train")
        model = train_unigram(generate_corpus(80, seed=5, split="train"))
        initial = gold.replace_sentences(s.with_tags(model.tag(s.surfaces)) for s in gold)
        learning, evaluation = gold.split_halves()
        initial_learning, initial_evaluation = initial.split_halves()

        result = tune_min_score(learning, evaluation, initial_learning, initial_evaluation)
        best = max(result.f1_by_score.values())
        assert result.best_f1 == best
        assert result.best_min_score == max(c for c, f1 in result.f1_by_score.items() if f1 == best)
        assert all(rule.score >= result.best_min_score for rule in result.rules)

        all_rules = learn_rules(
            [s.surfaces for s in learning], [s.tags for s in initial_learning], [s.tags for s in learning],
            BrillConfig(min_score=2),
        )
        assert list(result.rules) == truncate_rules(all_rules, result.best_min_score)

    @pytest.mark.unit
    def test_apply_to_corpus_keeps_metadata(self, bio_corpus):
        rule = BrillRule((("word[0]", "She"),), "O", "B-problem")
        corrected = apply_rules_to_corpus(bio_corpus, [rule])
        assert corrected[0].tags[0] == "B-problem"
        assert corrected.label_set == bio_corpus.label_set
        assert corrected.scheme is Scheme.BIO


class TestRuleSummary:
    """Rule counts per target label"""

    @pytest.mark.unit
    def test_summary(self):
        rules = [
            BrillRule((("word[0]", "a"),), "O", "B-x", 5, 1.0),
            BrillRule((("word[0]", "b"),), "O", "I-x", 3, 1.0),
            BrillRule((("word[0]", "c"),), "B-x", "O", 2, 1.0),
        ]
        summary = summarize_rules_by_label(rules)
        assert [(s.label, s.rule_count, s.total_score) for s in summary] == [("O", 1, 2), ("x", 2, 8)]
        assert format_rule_summary(summary).splitlines()[0].split() == ["label", "rules", "score"]
