"""
Data augmentation for tagged corpora

Three techniques, each deciding per token (or per segment) with a Bernoulli(p) draw:

- LWTR: replace a token's surface with one sampled from the surfaces seen under the
  same full tag in the training data
- SR: replace a token with a synonym phrase from a lexicon, expanding its tag over
  multi-token phrases
- SIS: permute surfaces inside each entity span and each maximal run of O tokens

Randomness comes from ``RandomStream``s derived from (seed, sentence ordinal,
technique, copy), so output does not depend on processing order.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core import BaseComponent, log_stage_start_end
from .corpus import OUTSIDE, Corpus, Scheme, Sentence, Token, infer_scheme, split_tag
from .exceptions import AugmentationError, ConfigError, IllFormedSequenceError, LexiconParseError
from .schemes import RepairPolicy, decode_spans

_UINT64 = 2**64


class Technique(IntEnum):
    LWTR = 1
    SR = 2
    SIS = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: Union[str, int, "Technique"]) -> "Technique":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls(value)
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ConfigError(f"unknown augmentation technique {value!r}; expected lwtr, sr or sis") from None


class RandomStream:
    """numpy Generator seeded from SeedSequence([seed mod 2**64, *keys])"""

    def __init__(self, seed: int, *keys: int):
        entropy = [int(seed) % _UINT64, *(int(k) for k in keys)]
        self.keys = tuple(entropy)
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    @classmethod
    def derive(cls, seed: int, ordinal: int, technique: int, copy: int) -> "RandomStream":
        return cls(seed, ordinal, int(technique), copy)

    def bernoulli(self, p: float, size: int) -> np.ndarray:
        """``size`` independent Bernoulli(p) draws as a boolean array"""
        return self.generator.binomial(1, p, size).astype(bool)

    def integer(self, high: int) -> int:
        return int(self.generator.integers(high))

    def choice(self, probabilities: np.ndarray) -> int:
        return int(self.generator.choice(len(probabilities), p=probabilities))

    def permutation(self, n: int) -> List[int]:
        return [int(i) for i in self.generator.permutation(n)]


class LabelTokenDistribution:
    """Surface counts per full tag ("B-problem" and "I-problem" are distinct keys)"""

    def __init__(self, counts: Dict[str, Dict[str, int]]):
        self._counts = {tag: Counter(c) for tag, c in counts.items() if c}
        self._tables: Dict[str, Tuple[List[str], np.ndarray]] = {}

    @property
    def tags(self) -> List[str]:
        return sorted(self._counts)

    def __contains__(self, tag: str) -> bool:
        return tag in self._counts

    def count(self, tag: str, surface: str) -> int:
        return self._counts.get(tag, Counter())[surface]

    def total(self, tag: str) -> int:
        return sum(self._counts.get(tag, Counter()).values())

    def probability(self, tag: str, surface: str) -> float:
        total = self.total(tag)
        return self.count(tag, surface) / total if total else 0.0

    def _table(self, tag: str) -> Tuple[List[str], np.ndarray]:
        if tag not in self._tables:
            counts = self._counts[tag]
            surfaces = sorted(counts)
            weights = np.array([counts[s] for s in surfaces], dtype=float)
            self._tables[tag] = (surfaces, weights / weights.sum())
        return self._tables[tag]

    def sample(self, tag: str, rng: RandomStream) -> str:
        surfaces, probabilities = self._table(tag)
        return surfaces[rng.choice(probabilities)]

    def to_dict(self) -> Dict[str, Dict[str, int]]:
        return {tag: dict(sorted(self._counts[tag].items())) for tag in self.tags}


def build_label_token_distribution(corpus: Corpus) -> LabelTokenDistribution:
    counts: Dict[str, Counter] = defaultdict(Counter)
    for sentence in corpus.sentences:
        for token in sentence.tokens:
            counts[token.tag][token.surface] += 1
    return LabelTokenDistribution(counts)


@dataclass(frozen=True)
class SynonymLexicon:
    """Lowercased headword -> ordered synonym phrases (each a tuple of tokens)"""

    entries: Dict[str, Tuple[Tuple[str, ...], ...]] = field(default_factory=dict)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def synonyms(self, word: str) -> Tuple[Tuple[str, ...], ...]:
        return self.entries.get(word.lower(), ())


def parse_lexicon(data: Union[bytes, str]) -> SynonymLexicon:
    """``headword<TAB>synonym phrase`` per line; duplicate pairs collapse, order kept"""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    entries: Dict[str, List[Tuple[str, ...]]] = {}
    for line_number, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if "\t" not in line:
            raise LexiconParseError("expected 'headword<TAB>phrase'", line_number)
        headword, phrase_text = line.split("\t", 1)
        headword = headword.strip().lower()
        phrase = tuple(phrase_text.split())
        if not headword or any(ch.isspace() for ch in headword):
            raise LexiconParseError(f"headword must be a single token, got {headword!r}", line_number)
        if not phrase:
            raise LexiconParseError(f"empty synonym phrase for {headword!r}", line_number)
        phrases = entries.setdefault(headword, [])
        if phrase not in phrases:
            phrases.append(phrase)
    return SynonymLexicon({h: tuple(p) for h, p in entries.items()})


def load_lexicon(path: Union[str, Path]) -> SynonymLexicon:
    return parse_lexicon(Path(path).read_bytes())


@dataclass(frozen=True)
class AugmentConfig:
    p: float = 0.3
    techniques: Tuple[Technique, ...] = (Technique.LWTR, Technique.SR, Technique.SIS)
    copies_per_technique: int = 1
    seed: int = 12

    def __post_init__(self):
        techniques = tuple(Technique.parse(t) for t in self.techniques)
        object.__setattr__(self, "techniques", techniques)
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must be in [0, 1], got {self.p}")
        if not techniques:
            raise ConfigError("at least one augmentation technique is required")
        if len(set(techniques)) != len(techniques):
            raise ConfigError(f"duplicate techniques in {[t.label for t in techniques]}")
        if self.copies_per_technique < 1:
            raise ConfigError(f"copies_per_technique must be >= 1, got {self.copies_per_technique}")


def lwtr(sentence: Sentence, dist: LabelTokenDistribution, p: float, rng: RandomStream) -> Sentence:
    """Label-wise token replacement; tags and length unchanged"""
    for tag in sentence.tags:
        if tag not in dist:
            raise AugmentationError(
                f"tag {tag!r} has no entry in the label-wise token distribution; "
                "build it from a corpus that contains every tag"
            )
    mask = rng.bernoulli(p, len(sentence))
    tokens = [
        Token(dist.sample(token.tag, rng), token.tag) if replace else token
        for token, replace in zip(sentence.tokens, mask)
    ]
    return Sentence(tuple(tokens))


def expand_tag(tag: str, length: int) -> List[str]:
    """Tags for a ``length``-token phrase replacing one token tagged ``tag``"""
    if length == 1:
        return [tag]
    prefix, label = split_tag(tag)
    if prefix == OUTSIDE:
        return [OUTSIDE] * length
    if prefix == "B":
        return [f"B-{label}"] + [f"I-{label}"] * (length - 1)
    if prefix == "I":
        return [f"I-{label}"] * length
    if prefix == "E":
        return [f"I-{label}"] * (length - 1) + [f"E-{label}"]
    return [f"B-{label}"] + [f"I-{label}"] * (length - 2) + [f"E-{label}"]


def synonym_replace(sentence: Sentence, lex: SynonymLexicon, p: float, rng: RandomStream) -> Sentence:
    """Synonym replacement; span count and labels preserved, length may change"""
    mask = rng.bernoulli(p, len(sentence))
    tokens: List[Token] = []
    for token, replace in zip(sentence.tokens, mask):
        phrases = lex.synonyms(token.surface) if replace else ()
        if not phrases:
            tokens.append(token)
            continue
        phrase = phrases[rng.integer(len(phrases))]
        tokens.extend(Token(s, t) for s, t in zip(phrase, expand_tag(token.tag, len(phrase))))
    return Sentence(tuple(tokens))


def segments_of(tags: Sequence[str], scheme: Scheme) -> List[Tuple[int, int]]:
    """Entity spans plus maximal O runs, as (start, end) covering the whole sentence"""
    try:
        spans = decode_spans(tags, scheme, RepairPolicy.STRICT)
    except IllFormedSequenceError as e:
        raise AugmentationError(f"cannot shuffle an ill-formed tag sequence (repair first): {e}") from e
    segments = []
    position = 0
    for start, end, _ in spans:
        if start > position:
            segments.append((position, start))
        segments.append((start, end))
        position = end
    if position < len(tags):
        segments.append((position, len(tags)))
    return segments


def shuffle_within_segments(
    sentence: Sentence, p: float, rng: RandomStream, scheme: Optional[Scheme] = None
) -> Sentence:
    """Permute surfaces inside segments; the tag sequence is left byte-identical"""
    tags = sentence.tags
    scheme = Scheme.parse(scheme) if scheme is not None else infer_scheme(tags)
    segments = segments_of(tags, scheme)
    mask = rng.bernoulli(p, len(segments))
    surfaces = sentence.surfaces
    for (start, end), shuffle in zip(segments, mask):
        if shuffle and end - start > 1:
            order = rng.permutation(end - start)
            chunk = surfaces[start:end]
            surfaces[start:end] = [chunk[i] for i in order]
    return Sentence.from_pairs(surfaces, tags)


class Augmenter(BaseComponent):
    """Corpus-level augmentation: originals, then technique-major copies"""

    def __init__(
        self,
        cfg: AugmentConfig,
        lexicon: Optional[SynonymLexicon] = None,
        dist: Optional[LabelTokenDistribution] = None,
        logger=None,
        silent: bool = False,
    ):
        super().__init__(logger, "Augmenter", silent)
        self.cfg = cfg
        self.lexicon = lexicon if lexicon is not None else SynonymLexicon()
        self.dist = dist

    def _transform(self, technique: Technique, sentence: Sentence, rng: RandomStream, corpus: Corpus,
                   dist: LabelTokenDistribution) -> Sentence:
        if technique is Technique.LWTR:
            return lwtr(sentence, dist, self.cfg.p, rng)
        if technique is Technique.SR:
            return synonym_replace(sentence, self.lexicon, self.cfg.p, rng)
        return shuffle_within_segments(sentence, self.cfg.p, rng, corpus.scheme)

    @log_stage_start_end
    def augment(self, corpus: Corpus) -> Corpus:
        dist = self.dist if self.dist is not None else build_label_token_distribution(corpus)
        if Technique.SR in self.cfg.techniques and not len(self.lexicon):
            self.log_warning("synonym replacement requested with an empty lexicon; SR copies equal the originals")

        sentences = list(corpus.sentences)
        for technique in self.cfg.techniques:
            for copy in range(self.cfg.copies_per_technique):
                for ordinal, sentence in enumerate(corpus.sentences):
                    rng = RandomStream.derive(self.cfg.seed, ordinal, technique, copy)
                    try:
                        sentences.append(self._transform(technique, sentence, rng, corpus, dist))
                    except AugmentationError as e:
                        raise AugmentationError(f"{technique.label}, sentence {ordinal}: {e}") from e
            self.log_debug(f"{technique.label}: {self.cfg.copies_per_technique} copies of {len(corpus)} sentences")

        result = Corpus(tuple(sentences), corpus.scheme)
        self.log_info(
            f"augmented {len(corpus)} -> {len(result)} sentences, "
            f"{corpus.token_count} -> {result.token_count} tokens"
        )
        return result


def augment_corpus(
    corpus: Corpus,
    cfg: AugmentConfig,
    lex: Optional[SynonymLexicon] = None,
    dist: Optional[LabelTokenDistribution] = None,
    logger=None,
) -> Corpus:
    """Original sentences followed by one transformed copy of each, per technique and copy

    Technique blocks follow the configured order.
    """
    return Augmenter(cfg, lex, dist, logger=logger).augment(corpus)
