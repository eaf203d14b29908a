"""
Tag scheme conversion through entity spans

Every conversion decodes tags to ``EntitySpan``s and re-encodes them, so BIO, IO and
BIOES only differ in ``decode_spans`` / ``encode_tags``. Ill-formed input is handled
by a ``RepairPolicy``:

- STRICT: raise ``IllFormedSequenceError`` at the first ill-formed position
- CONLL: a stray or label-changing continuation starts a new entity; an unclosed
  BIOES entity is closed at the last token it covers
- DISCARD: ill-formed runs produce no span
"""

from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

from .corpus import OUTSIDE, Corpus, EntitySpan, Scheme, split_tag
from .exceptions import IllFormedSequenceError, SpanError
from .logging_adapter import get_logger


class RepairPolicy(str, Enum):
    STRICT = "STRICT"
    CONLL = "CONLL"
    DISCARD = "DISCARD"

    @classmethod
    def parse(cls, value: Union[str, "RepairPolicy"]) -> "RepairPolicy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown repair policy {value!r}; expected STRICT, CONLL or DISCARD") from None


def _parse_tags(tags: Sequence[str], scheme: Scheme) -> List[Tuple[str, Optional[str]]]:
    parsed = []
    for i, tag in enumerate(tags):
        pair = split_tag(tag)
        if pair is None:
            raise IllFormedSequenceError(i, tag, "malformed tag")
        if pair[0] != OUTSIDE and pair[0] not in scheme.prefixes:
            raise IllFormedSequenceError(i, tag, f"prefix illegal for {scheme.value}")
        parsed.append(pair)
    return parsed


def _decode_io(parsed) -> List[EntitySpan]:
    spans = []
    start, label = None, None
    for i, (prefix, lab) in enumerate(parsed):
        if prefix == OUTSIDE or lab != label:
            if start is not None:
                spans.append(EntitySpan(start, i, label))
            start, label = (None, None) if prefix == OUTSIDE else (i, lab)
    if start is not None:
        spans.append(EntitySpan(start, len(parsed), label))
    return spans


def _decode_bio(parsed, tags, policy: RepairPolicy) -> List[EntitySpan]:
    spans = []
    start, label = None, None

    def close(end):
        nonlocal start, label
        if start is not None:
            spans.append(EntitySpan(start, end, label))
        start, label = None, None

    for i, (prefix, lab) in enumerate(parsed):
        if prefix == OUTSIDE:
            close(i)
        elif prefix == "B":
            close(i)
            start, label = i, lab
        elif start is not None and lab == label:
            continue
        else:
            if policy is RepairPolicy.STRICT:
                reason = "continuation without beginning" if start is None else "label change inside entity"
                raise IllFormedSequenceError(i, tags[i], reason)
            close(i)
            if policy is RepairPolicy.CONLL:
                start, label = i, lab
            # DISCARD: stay outside, so the rest of the stray run is skipped too
    close(len(parsed))
    return spans


def _decode_bioes(parsed, tags, policy: RepairPolicy) -> List[EntitySpan]:
    spans = []
    start, label = None, None

    def unclosed(i):
        # open entity interrupted at position i (or by the end of the sentence)
        nonlocal start, label
        if start is None:
            return
        if policy is RepairPolicy.STRICT:
            at = min(i, len(parsed) - 1)
            raise IllFormedSequenceError(at, tags[at], "entity not closed by E-")
        if policy is RepairPolicy.CONLL:
            spans.append(EntitySpan(start, i, label))
        start, label = None, None

    for i, (prefix, lab) in enumerate(parsed):
        if prefix == OUTSIDE:
            unclosed(i)
        elif prefix == "B":
            unclosed(i)
            start, label = i, lab
        elif prefix == "S":
            unclosed(i)
            spans.append(EntitySpan(i, i + 1, lab))
        elif prefix == "I":
            if start is not None and lab == label:
                continue
            if policy is RepairPolicy.STRICT:
                reason = "continuation without beginning" if start is None else "label change inside entity"
                raise IllFormedSequenceError(i, tags[i], reason)
            if policy is RepairPolicy.CONLL:
                if start is not None:
                    spans.append(EntitySpan(start, i, label))
                start, label = i, lab
            else:
                start, label = None, None
        else:  # E
            if start is not None and lab == label:
                spans.append(EntitySpan(start, i + 1, label))
                start, label = None, None
                continue
            if policy is RepairPolicy.STRICT:
                reason = "end without beginning" if start is None else "label change inside entity"
                raise IllFormedSequenceError(i, tags[i], reason)
            if policy is RepairPolicy.CONLL:
                if start is not None:
                    spans.append(EntitySpan(start, i, label))
                spans.append(EntitySpan(i, i + 1, lab))
            start, label = None, None
    unclosed(len(parsed))
    return spans


def decode_spans(
    tags: Sequence[str], scheme: Union[Scheme, str], policy: Union[RepairPolicy, str] = RepairPolicy.CONLL
) -> List[EntitySpan]:
    """Entity spans of a tag sequence, sorted and non-overlapping"""
    scheme = Scheme.parse(scheme)
    policy = RepairPolicy.parse(policy)
    parsed = _parse_tags(tags, scheme)
    if scheme is Scheme.IO:
        return _decode_io(parsed)
    if scheme is Scheme.BIO:
        return _decode_bio(parsed, tags, policy)
    return _decode_bioes(parsed, tags, policy)


def check_spans(spans: Sequence[EntitySpan], length: int):
    """Raise SpanError unless spans are in range, sorted and non-overlapping"""
    previous_end = 0
    for span in spans:
        start, end, label = span
        if not label:
            raise SpanError(f"span {tuple(span)} has an empty label")
        if not 0 <= start < end <= length:
            raise SpanError(f"span {tuple(span)} out of range for length {length}")
        if start < previous_end:
            raise SpanError(f"span {tuple(span)} overlaps or precedes the previous span")
        previous_end = end


def encode_tags(spans: Sequence[EntitySpan], length: int, scheme: Union[Scheme, str]) -> List[str]:
    """Tag sequence of the given length; positions outside every span get O"""
    scheme = Scheme.parse(scheme)
    check_spans(spans, length)
    tags = [OUTSIDE] * length
    for start, end, label in spans:
        if scheme is Scheme.IO:
            tags[start:end] = [f"I-{label}"] * (end - start)
        elif scheme is Scheme.BIO:
            tags[start:end] = [f"B-{label}"] + [f"I-{label}"] * (end - start - 1)
        elif end - start == 1:
            tags[start] = f"S-{label}"
        else:
            tags[start:end] = [f"B-{label}"] + [f"I-{label}"] * (end - start - 2) + [f"E-{label}"]
    return tags


def convert(
    tags: Sequence[str],
    source: Union[Scheme, str],
    target: Union[Scheme, str],
    policy: Union[RepairPolicy, str] = RepairPolicy.CONLL,
) -> List[str]:
    return encode_tags(decode_spans(tags, source, policy), len(tags), target)


def repair(
    tags: Sequence[str], scheme: Union[Scheme, str], policy: Union[RepairPolicy, str] = RepairPolicy.CONLL
) -> List[str]:
    """Well-formed equivalent of ``tags``; idempotent, unchanged when already valid"""
    return convert(tags, scheme, scheme, policy)


def is_well_formed(tags: Sequence[str], scheme: Union[Scheme, str]) -> bool:
    try:
        decode_spans(tags, scheme, RepairPolicy.STRICT)
    except IllFormedSequenceError:
        return False
    return True


def convert_corpus(
    corpus: Corpus,
    target: Union[Scheme, str],
    policy: Union[RepairPolicy, str] = RepairPolicy.CONLL,
    logger=None,
) -> Corpus:
    """Convert every sentence; label set and document markers are kept"""
    target = Scheme.parse(target)
    log = get_logger(logger, "schemes")
    sentences = []
    changed = 0
    for index, sentence in enumerate(corpus.sentences):
        try:
            tags = convert(sentence.tags, corpus.scheme, target, policy)
        except IllFormedSequenceError as e:
            raise IllFormedSequenceError(e.index, e.tag, f"sentence {index}: {e.reason}") from e
        if tags != sentence.tags:
            changed += 1
        sentences.append(sentence.with_tags(tags))
    log.debug(f"converted {corpus.scheme.value} -> {target.value}: {changed}/{len(corpus)} sentences changed")
    return Corpus(tuple(sentences), target, corpus.label_set, corpus.document_starts)


def repair_corpus(corpus: Corpus, policy: Union[RepairPolicy, str] = RepairPolicy.CONLL) -> Corpus:
    return convert_corpus(corpus, corpus.scheme, policy)
