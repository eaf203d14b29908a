"""
Consensus silver corpora

Unlabeled sentences are tagged by n >= 2 models; a span is kept only when every
model predicts exactly the same (start, end, label). Sentences without any
agreed span are dropped unless ``drop_all_o`` is off.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from .core import BaseComponent, log_stage_start_end
from .corpus import Corpus, EntitySpan, Scheme, Sentence
from .exceptions import AlignmentError, ConfigError
from .schemes import RepairPolicy, decode_spans, encode_tags


@dataclass(frozen=True)
class ConsensusConfig:
    scheme: Scheme = Scheme.BIOES
    policy: RepairPolicy = RepairPolicy.CONLL
    drop_all_o: bool = True
    min_sources: int = 2

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        object.__setattr__(self, "policy", RepairPolicy.parse(self.policy))
        if self.min_sources < 2:
            raise ConfigError(f"consensus needs at least 2 sources, got min_sources={self.min_sources}")


def consensus_spans(
    predictions: Sequence[Sequence[str]],
    scheme: Union[Scheme, str],
    policy: Union[RepairPolicy, str] = RepairPolicy.CONLL,
    length: Optional[int] = None,
) -> List[EntitySpan]:
    """Spans present in every prediction, after repair under ``policy``"""
    if len(predictions) < 2:
        raise ConfigError(f"consensus needs at least 2 predictions, got {len(predictions)}")
    length = len(predictions[0]) if length is None else length
    for index, tags in enumerate(predictions):
        if len(tags) != length:
            raise AlignmentError(f"prediction {index} has {len(tags)} tags for {length} tokens")

    agreed = set(decode_spans(predictions[0], scheme, policy))
    for tags in predictions[1:]:
        agreed &= set(decode_spans(tags, scheme, policy))
    return sorted(agreed)


def consensus_tags(
    surfaces: Sequence[str],
    predictions: Sequence[Sequence[str]],
    scheme: Union[Scheme, str],
    policy: Union[RepairPolicy, str] = RepairPolicy.CONLL,
    output_scheme: Optional[Union[Scheme, str]] = None,
) -> List[str]:
    """Tags encoding the agreed spans in the working scheme; O elsewhere"""
    spans = consensus_spans(predictions, scheme, policy, len(surfaces))
    return encode_tags(spans, len(surfaces), output_scheme or scheme)


class ConsensusBuilder(BaseComponent):
    """Builds a silver corpus from aligned predictions over unlabeled sentences"""

    def __init__(self, cfg: ConsensusConfig = None, logger=None, silent: bool = False):
        super().__init__(logger, "ConsensusBuilder", silent)
        self.cfg = cfg or ConsensusConfig()

    @log_stage_start_end
    def build(
        self,
        raw: Sequence[Sequence[str]],
        predictions: Sequence[Sequence[Sequence[str]]],
        source_schemes: Optional[Sequence[Union[Scheme, str]]] = None,
    ) -> Corpus:
        """``predictions[m][i]`` is model m's tag sequence for raw sentence i"""
        if len(predictions) < self.cfg.min_sources:
            raise ConfigError(f"consensus needs at least {self.cfg.min_sources} sources, got {len(predictions)}")
        for m, source in enumerate(predictions):
            if len(source) != len(raw):
                raise AlignmentError(f"source {m} has {len(source)} sentences, raw text has {len(raw)}")
        schemes = [Scheme.parse(s) for s in (source_schemes or [self.cfg.scheme] * len(predictions))]

        sentences = []
        dropped = 0
        for i, surfaces in enumerate(raw):
            agreed = None
            for m, source in enumerate(predictions):
                tags = source[i]
                if len(tags) != len(surfaces):
                    raise AlignmentError(
                        f"source {m} has {len(tags)} tags for {len(surfaces)} tokens", sentence_index=i
                    )
                spans = set(decode_spans(tags, schemes[m], self.cfg.policy))
                agreed = spans if agreed is None else agreed & spans
            if not agreed and self.cfg.drop_all_o:
                dropped += 1
                continue
            tags = encode_tags(sorted(agreed), len(surfaces), self.cfg.scheme)
            sentences.append(Sentence.from_pairs(list(surfaces), tags))

        self.log_info(f"silver corpus: kept {len(sentences)} of {len(raw)} sentences ({dropped} without consensus)")
        return Corpus(tuple(sentences), self.cfg.scheme)


def build_silver_corpus(
    raw: Sequence[Sequence[str]],
    predictions: Sequence[Sequence[Sequence[str]]],
    cfg: ConsensusConfig = None,
    logger=None,
) -> Corpus:
    return ConsensusBuilder(cfg, logger=logger).build(raw, predictions)


def build_silver_corpus_from_models(raw: Sequence[Sequence[str]], models, cfg: ConsensusConfig = None, logger=None) -> Corpus:
    """Tag ``raw`` with each model and intersect; model schemes may differ"""
    raw = [list(s) for s in raw if len(s)]
    predictions = [[model.tag(surfaces) for surfaces in raw] for model in models]
    return ConsensusBuilder(cfg, logger=logger).build(raw, predictions, [m.scheme for m in models])


def build_silver_corpus_from_predictions(
    predicted: Sequence[Corpus], raw: Optional[Sequence[Sequence[str]]] = None,
    cfg: ConsensusConfig = None, logger=None,
) -> Corpus:
    """Intersect prediction corpora; each must carry the surfaces of ``raw`` (or of the first corpus)"""
    if not predicted:
        raise ConfigError("no prediction corpora given")
    reference = [list(s) for s in raw] if raw is not None else [s.surfaces for s in predicted[0].sentences]
    for m, corpus in enumerate(predicted):
        if len(corpus) != len(reference):
            raise AlignmentError(f"prediction file {m} has {len(corpus)} sentences, expected {len(reference)}")
        for i, (sentence, surfaces) in enumerate(zip(corpus.sentences, reference)):
            if sentence.surfaces != surfaces:
                raise AlignmentError(f"prediction file {m} is not token-aligned with the raw text", sentence_index=i)
    return ConsensusBuilder(cfg, logger=logger).build(
        reference, [[s.tags for s in c.sentences] for c in predicted], [c.scheme for c in predicted]
    )
