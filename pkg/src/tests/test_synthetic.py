"""
Tests for the synthetic demo corpus
"""

import pytest

from ner_corpus_toolkit import BrillConfig, learn_rules, tag_corpus, train_perceptron
from ner_corpus_toolkit.synthetic import (
    HELD_OUT_PHRASES,
    PHRASES,
    SHORTHAND,
    TEMPLATES,
    generate_corpus,
    generate_raw,
    generate_sentence,
    vocabulary,
)

SHORTHAND_CODES = {code for code, _ in SHORTHAND}


def unseen_words():
    seen = {w for t in TEMPLATES for w in t.split()}
    seen.update(w for pool in PHRASES.values() for phrase in pool for w in phrase.split())
    return {w for pool in HELD_OUT_PHRASES.values() for phrase in pool for w in phrase.split()} - seen


def shorthand_positions(corpus):
    for i, sentence in enumerate(corpus.sentences):
        for j, surface in enumerate(sentence.surfaces):
            if surface in SHORTHAND_CODES:
                yield i, j


class TestGeneratedSplits:
    """Vocabulary and determinism of the generated splits"""

    @pytest.mark.unit
    def test_sentences_depend_only_on_arguments(self):
        assert generate_sentence(12, "test", 7) == generate_sentence(12, "test", 7)
        assert generate_corpus(30, seed=3) == generate_corpus(30, seed=3)

    @pytest.mark.unit
    def test_held_out_words_never_in_training(self):
        train_words = {w for s in generate_corpus(600, seed=12) for w in s.surfaces}
        assert unseen_words()
        assert not train_words & unseen_words()

    @pytest.mark.unit
    def test_held_out_words_reach_test_and_raw(self):
        test_words = {w for s in generate_corpus(300, seed=12, split="test") for w in s.surfaces}
        raw_words = {w for sentence in generate_raw(300, seed=12) for w in sentence}
        assert test_words & unseen_words()
        assert raw_words & unseen_words()

    @pytest.mark.unit
    def test_vocabulary_covers_every_split(self):
        words = set(vocabulary())
        for split in ("train", "test", "raw"):
            for i in range(200):
                assert set(generate_sentence(12, split, i)[0]) <= words


class TestShorthand:
    """Shorthand labels follow the (code, next word) pair"""

    @pytest.mark.unit
    def test_tags_follow_pair_table(self):
        corpus = generate_corpus(600, seed=12)
        positions = list(shorthand_positions(corpus))
        assert positions
        pairs = set()
        for i, j in positions:
            sentence = corpus[i]
            pair = (sentence.surfaces[j], sentence.surfaces[j + 1])
            pairs.add(pair)
            assert sentence.tags[j] == f"B-{SHORTHAND[pair]}"
            assert sentence.tags[j + 1] == "O"
        assert pairs == set(SHORTHAND)

    @pytest.mark.unit
    def test_no_code_decides_the_label_alone(self):
        for code in SHORTHAND_CODES:
            assert len({label for (c, _), label in SHORTHAND.items() if c == code}) == 2
        for cue in {cue for _, cue in SHORTHAND}:
            assert len({label for (_, c), label in SHORTHAND.items() if c == cue}) == 2

    @pytest.mark.integration
    def test_perceptron_errs_and_rules_correct(self):
        train = generate_corpus(600, seed=12)
        surfaces = [s.surfaces for s in train.sentences]
        predicted = tag_corpus(train_perceptron(train, epochs=3, seed=12), surfaces)

        def shorthand_errors(tags_per_sentence):
            return sum(tags_per_sentence[i][j] != train[i].tags[j] for i, j in shorthand_positions(train))

        initial = [list(s.tags) for s in predicted.sentences]
        assert shorthand_errors(initial) > 0

        gold = [s.tags for s in train.sentences]
        rules = learn_rules(surfaces, [list(tags) for tags in initial], gold, BrillConfig(min_score=2))
        assert rules
        corrected = [list(tags) for tags in initial]
        for rule in rules:
            for sentence_surfaces, tags in zip(surfaces, corrected):
                rule.apply(sentence_surfaces, tags)
        assert shorthand_errors(corrected) < shorthand_errors(initial)
