"""
Pytest configuration and fixtures for NER Corpus Toolkit tests

Shared corpora, seeded tag-sequence generators and a mock external logger.
"""

import random
import sys
from pathlib import Path
from typing import List, Tuple

import pytest

# Add the library to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from ner_corpus_toolkit import (
    Corpus,
    EntitySpan,
    Scheme,
    Sentence,
    ValidationResultBuilder,
    configure_for_testing,
    read_conll,
    reset_logging_config,
)
from ner_corpus_toolkit.schemes import encode_tags
from ner_corpus_toolkit.synthetic import generate_corpus

LABELS = ("problem", "test", "treatment")


@pytest.fixture(scope="session", autouse=True)
def setup_testing_environment():
    """Setup testing environment with silent logging"""
    configure_for_testing()
    yield
    reset_logging_config()


@pytest.fixture
def bio_text() -> str:
    """Two short clinical sentences in BIO"""
    return (
        "She\tO\nhad\tO\nchest\tB-problem\npain\tI-problem\n.\tO\n\n"
        "CT\tB-test\nshowed\tO\nno\tO\nfracture\tB-problem\n\n"
    )


@pytest.fixture
def bio_corpus(bio_text) -> Corpus:
    return read_conll(bio_text)


@pytest.fixture
def synthetic_train() -> Corpus:
    """Deterministic 200-sentence BIO corpus from the demo generator"""
    return generate_corpus(200, seed=12, split="train")


@pytest.fixture
def synthetic_test() -> Corpus:
    return generate_corpus(120, seed=12, split="test")


def random_spans(rng: random.Random, length: int, labels=LABELS) -> List[EntitySpan]:
    """Sorted, non-overlapping random spans over ``length`` tokens"""
    spans = []
    position = 0
    while position < length:
        if rng.random() < 0.4:
            end = min(length, position + rng.randint(1, 4))
            spans.append(EntitySpan(position, end, rng.choice(labels)))
            position = end
        else:
            position += 1
    return spans


def random_tags(rng: random.Random, length: int, scheme: Scheme, labels=LABELS) -> List[str]:
    """Possibly ill-formed tags using only prefixes legal for ``scheme``"""
    prefixes = sorted(scheme.prefixes)
    out = []
    for _ in range(length):
        if rng.random() < 0.4:
            out.append("O")
        else:
            out.append(f"{rng.choice(prefixes)}-{rng.choice(labels)}")
    return out


def random_tagged_corpus(rng: random.Random, sentences: int, scheme: Scheme = Scheme.BIO) -> Corpus:
    out = []
    for _ in range(sentences):
        length = rng.randint(1, 12)
        tags = encode_tags(random_spans(rng, length), length, scheme)
        out.append(Sentence.from_pairs([f"w{rng.randint(0, 30)}" for _ in range(length)], tags))
    return Corpus(tuple(out), scheme)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240612)


@pytest.fixture
def mock_logger():
    """Mock logger for testing"""

    class MockLogger:
        def __init__(self):
            self.messages: List[Tuple[str, str]] = []

        def info(self, msg):
            self.messages.append(("INFO", msg))

        def warning(self, msg):
            self.messages.append(("WARNING", msg))

        def error(self, msg):
            self.messages.append(("ERROR", msg))

        def debug(self, msg):
            self.messages.append(("DEBUG", msg))

        def get_messages(self):
            return self.messages

        def clear(self):
            self.messages.clear()

    return MockLogger()


@pytest.fixture
def validation_result_builder():
    """Fresh ValidationResultBuilder for testing"""
    return ValidationResultBuilder()
