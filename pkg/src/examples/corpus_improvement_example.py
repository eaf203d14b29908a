#!/usr/bin/env python3
"""
NER Corpus Toolkit example

Generates the synthetic clinical corpus, then walks through the building blocks
the pipeline chains together: scheme conversion, augmentation, a consensus silver
corpus, Brill rule learning and entity-level scoring.
"""

import sys
import tempfile
from pathlib import Path

# Add the library to path (when using as standalone)
sys.path.insert(0, str(Path(__file__).parent.parent))

from ner_corpus_toolkit import (
    AugmentConfig,
    BrillConfig,
    ConsensusConfig,
    Scheme,
    augment_corpus,
    build_silver_corpus,
    configure_for_development,
    convert_corpus,
    learn_rules,
    score,
    tag_corpus,
    train_perceptron,
    train_unigram,
)
from ner_corpus_toolkit.augment import load_lexicon
from ner_corpus_toolkit.brill import apply_rules_to_corpus
from ner_corpus_toolkit.corpus import load_conll, load_raw
from ner_corpus_toolkit.synthetic import generate_demo
from ner_corpus_toolkit.utils import format_percent


def main():
    print("NER Corpus Toolkit - walkthrough")
    print("=" * 50)
    configure_for_development()

    with tempfile.TemporaryDirectory() as tmp:
        files = generate_demo(tmp, train_sentences=400, test_sentences=100, raw_sentences=200)
        train = load_conll(files.train)
        test = load_conll(files.test)
        surfaces = [s.surfaces for s in test]

        print("\n1. Scheme conversion")
        bioes = convert_corpus(train, Scheme.BIOES)
        print(f"   {train[0].tags} -> {bioes[0].tags}")

        print("\n2. Augmentation")
        augmented = augment_corpus(bioes, AugmentConfig(p=0.3, seed=7), load_lexicon(files.lexicon))
        print(f"   {len(bioes)} -> {len(augmented)} sentences")

        print("\n3. Consensus silver corpus")
        models = [train_unigram(augmented), train_perceptron(augmented, epochs=3)]
        silver = build_silver_corpus(
            load_raw(files.raw), [[m.tag(s) for s in load_raw(files.raw)] for m in models], ConsensusConfig()
        )
        print(f"   kept {len(silver)} raw sentences with agreed entities")

        print("\n4. Brill rules over unigram output")
        unigram = train_unigram(augmented)
        initial = tag_corpus(unigram, [s.surfaces for s in bioes])
        rules = learn_rules(
            [s.surfaces for s in bioes], [s.tags for s in initial], [s.tags for s in bioes], BrillConfig(min_score=3)
        )
        for rule in rules[:5]:
            print(f"   {rule.serialize()}")

        print("\n5. Scoring (always in BIO)")
        before = score(test, tag_corpus(unigram, surfaces))
        after = score(test, apply_rules_to_corpus(tag_corpus(unigram, surfaces), rules))
        print(f"   unigram f1={format_percent(before.f1)}, with rules f1={format_percent(after.f1)}")

    print("\nDone.")


if __name__ == "__main__":
    main()
