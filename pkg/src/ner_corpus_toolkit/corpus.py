"""
Tagged corpus types and the CoNLL-style file format

File format: one ``surface<TAB>tag`` line per token (any run of spaces or tabs is
accepted on read; the first field is the surface, the last the tag), a blank line
after each sentence, ``-DOCSTART-`` lines as document boundaries. UTF-8, LF on
write, CR tolerated on read.
"""

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .core import BaseComponent, LocationContext, RuleEngine
from .exceptions import ConllParseError, CorpusValidationError
from .results import ValidationResult, ValidationResultBuilder

DOCSTART = "-DOCSTART-"
OUTSIDE = "O"

_TAG_RE = re.compile(r"^([BIES])-(.+)$")
# columns are separated by runs of spaces or tabs; other whitespace belongs to the surface
_FIELD_SEP_RE = re.compile(r"[ \t]+")


class Scheme(str, Enum):
    """Tagging scheme"""

    BIO = "BIO"
    IO = "IO"
    BIOES = "BIOES"

    @property
    def prefixes(self) -> FrozenSet[str]:
        return _SCHEME_PREFIXES[self]

    @classmethod
    def parse(cls, value: Union[str, "Scheme"]) -> "Scheme":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown scheme {value!r}; expected one of BIO, IO, BIOES") from None


_SCHEME_PREFIXES = {
    Scheme.IO: frozenset("I"),
    Scheme.BIO: frozenset("BI"),
    Scheme.BIOES: frozenset("BIES"),
}


def split_tag(tag: str) -> Optional[Tuple[str, Optional[str]]]:
    """("B", "problem") for "B-problem", ("O", None) for "O", None when malformed"""
    if tag == OUTSIDE:
        return OUTSIDE, None
    match = _TAG_RE.match(tag)
    if not match:
        return None
    return match.group(1), match.group(2)


def infer_scheme(tags: Iterable[str]) -> Scheme:
    """Smallest scheme whose prefix set covers every observed prefix (IO < BIO < BIOES)"""
    seen = set()
    for tag in tags:
        parsed = split_tag(tag)
        if parsed and parsed[0] != OUTSIDE:
            seen.add(parsed[0])
    for scheme in (Scheme.IO, Scheme.BIO, Scheme.BIOES):
        if seen <= scheme.prefixes:
            return scheme
    return Scheme.BIOES


@dataclass(frozen=True)
class Token:
    surface: str
    tag: str

    def __post_init__(self):
        surface = self.surface
        if not surface or surface != surface.strip() or any(ch in " \t\r\n" for ch in surface):
            raise ValueError(f"token surface must be non-empty, no separators or edge spaces: {surface!r}")


@dataclass(frozen=True)
class Sentence:
    tokens: Tuple[Token, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")

    @classmethod
    def from_pairs(cls, surfaces: Sequence[str], tags: Sequence[str]) -> "Sentence":
        if len(surfaces) != len(tags):
            raise ValueError(f"{len(surfaces)} surfaces but {len(tags)} tags")
        return cls(tuple(Token(s, t) for s, t in zip(surfaces, tags)))

    @property
    def surfaces(self) -> List[str]:
        return [t.surface for t in self.tokens]

    @property
    def tags(self) -> List[str]:
        return [t.tag for t in self.tokens]

    def with_tags(self, tags: Sequence[str]) -> "Sentence":
        return Sentence.from_pairs(self.surfaces, tags)

    def __len__(self) -> int:
        return len(self.tokens)


class EntitySpan(NamedTuple):
    """Half-open token range [start, end) carrying an entity label"""

    start: int
    end: int
    label: str


def labels_of(sentences: Iterable[Sentence]) -> FrozenSet[str]:
    labels = set()
    for sentence in sentences:
        for token in sentence.tokens:
            parsed = split_tag(token.tag)
            if parsed and parsed[1] is not None:
                labels.add(parsed[1])
    return frozenset(labels)


@dataclass(frozen=True)
class Corpus:
    """Immutable sequence of sentences under one scheme

    ``label_set`` defaults to the labels observed in the tags. ``document_starts``
    holds the index of the sentence following each ``-DOCSTART-`` marker.
    """

    sentences: Tuple[Sentence, ...] = ()
    scheme: Scheme = Scheme.BIO
    label_set: Optional[FrozenSet[str]] = None
    document_starts: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        object.__setattr__(self, "document_starts", tuple(self.document_starts))
        if self.label_set is None:
            object.__setattr__(self, "label_set", labels_of(self.sentences))
        else:
            object.__setattr__(self, "label_set", frozenset(self.label_set))

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __getitem__(self, index):
        return self.sentences[index]

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def replace_sentences(self, sentences: Iterable[Sentence], scheme: Optional[Scheme] = None) -> "Corpus":
        """New corpus with other sentences; labels re-inferred, document markers dropped"""
        return Corpus(tuple(sentences), scheme or self.scheme)

    def concat(self, *others: "Corpus") -> "Corpus":
        for other in others:
            if other.scheme != self.scheme:
                raise ValueError(f"cannot concatenate {other.scheme.value} corpus onto {self.scheme.value}")
        sentences = list(self.sentences)
        labels = set(self.label_set)
        for other in others:
            sentences.extend(other.sentences)
            labels |= other.label_set
        return Corpus(tuple(sentences), self.scheme, frozenset(labels))

    def split_halves(self) -> Tuple["Corpus", "Corpus"]:
        """First ceil(n/2) sentences and the rest"""
        middle = (len(self.sentences) + 1) // 2
        return (
            Corpus(self.sentences[:middle], self.scheme),
            Corpus(self.sentences[middle:], self.scheme),
        )


class CorpusValidator(BaseComponent):
    """Checks tag-level invariants of a corpus (not sequence well-formedness)"""

    def __init__(self, logger=None, silent: bool = False):
        super().__init__(logger, "CorpusValidator", silent)
        self.rule_engine = RuleEngine()
        self._register_rules()

    def _register_rules(self):
        self.rule_engine.register_rule(
            "malformed_tag", self._check_malformed_tags,
            "Tag must be O or PREFIX-label",
        )
        self.rule_engine.register_rule(
            "illegal_prefix", self._check_prefixes,
            "Tag prefix must be legal for the scheme",
        )
        self.rule_engine.register_rule(
            "unknown_label", self._check_labels,
            "Tag label must be in the corpus label set",
        )

    @staticmethod
    def _violation(kind: str, message: str, context: LocationContext, position: int, tag: str, **extra) -> Dict:
        return {
            "type": kind,
            "message": f"sentence {context.sentence_index}, token {position}: {message}",
            "path": context.at(position).get_path(),
            "sentence": context.sentence_index,
            "position": position,
            "tag": tag,
            **extra,
        }

    def _check_malformed_tags(self, data, context: LocationContext) -> List[Dict]:
        sentence, _ = data
        return [
            self._violation("malformed_tag", f"malformed tag {tag!r}", context, i, tag)
            for i, tag in enumerate(sentence.tags)
            if split_tag(tag) is None
        ]

    def _check_prefixes(self, data, context: LocationContext) -> List[Dict]:
        sentence, corpus = data
        out = []
        for i, tag in enumerate(sentence.tags):
            parsed = split_tag(tag)
            if parsed and parsed[0] != OUTSIDE and parsed[0] not in corpus.scheme.prefixes:
                out.append(
                    self._violation(
                        "illegal_prefix",
                        f"illegal prefix {parsed[0]} for {corpus.scheme.value} in {tag!r}",
                        context, i, tag, scheme=corpus.scheme.value,
                    )
                )
        return out

    def _check_labels(self, data, context: LocationContext) -> List[Dict]:
        sentence, corpus = data
        out = []
        for i, tag in enumerate(sentence.tags):
            parsed = split_tag(tag)
            if parsed and parsed[1] is not None and parsed[1] not in corpus.label_set:
                out.append(self._violation("unknown_label", f"unknown label {parsed[1]!r}", context, i, tag))
        return out

    def validate(self, corpus: Corpus, source: str = "") -> ValidationResult:
        builder = ValidationResultBuilder()
        for index, sentence in enumerate(corpus.sentences):
            context = LocationContext(sentence_index=index, source=source)
            builder.extend(self.rule_engine.apply_rules((sentence, corpus), context))

        if not corpus.sentences:
            builder.add_info("empty_corpus", "corpus contains no sentences", path=source or None)

        builder.set_metadata(
            {
                "scheme": corpus.scheme.value,
                "sentences": len(corpus),
                "tokens": corpus.token_count,
                "labels": sorted(corpus.label_set),
            }
        )
        result = builder.build()
        if result.errors:
            self.log_warning(f"{len(result.errors)} violation(s) in {source or 'corpus'}")
        else:
            self.log_debug(f"{source or 'corpus'} is valid ({len(corpus)} sentences)")
        return result


def validate(corpus: Corpus) -> List[Dict]:
    """Every tag-level invariant violation with its location; empty iff valid"""
    return CorpusValidator(silent=True).validate(corpus).errors


def _decode_text(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_number = data[: e.start].count(b"\n") + 1
        raise ConllParseError("input is not valid UTF-8", line_number) from e


def _iter_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    """(line number, fields); blank lines give an empty field list"""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for line_number, line in enumerate(lines, 1):
        stripped = line.strip(" \t\r")
        yield line_number, _FIELD_SEP_RE.split(stripped) if stripped else []


def read_conll(data: Union[bytes, str], scheme: Optional[Union[Scheme, str]] = None) -> Corpus:
    """Parse CoNLL-style text into a validated Corpus"""
    text = _decode_text(data)
    sentences: List[Sentence] = []
    document_starts: List[int] = []
    current: List[Token] = []

    def close():
        if current:
            sentences.append(Sentence(tuple(current)))
            current.clear()

    for line_number, fields in _iter_lines(text):
        if not fields:
            close()
            continue
        if fields[0] == DOCSTART:
            close()
            document_starts.append(len(sentences))
            continue
        if len(fields) < 2:
            raise ConllParseError(f"expected '<surface> <tag>', got {len(fields)} field(s)", line_number)
        current.append(Token(fields[0], fields[-1]))
    close()

    if scheme is None:
        scheme = infer_scheme(t.tag for s in sentences for t in s.tokens)
    corpus = Corpus(tuple(sentences), Scheme.parse(scheme), document_starts=tuple(document_starts))

    violations = validate(corpus)
    if violations:
        raise CorpusValidationError(violations)
    return corpus


def write_conll(corpus: Corpus) -> bytes:
    """Canonical form: TAB separator, LF newlines, blank line after each sentence"""
    starts = Counter(corpus.document_starts)
    parts: List[str] = []
    for index, sentence in enumerate(corpus.sentences):
        parts.extend(f"{DOCSTART}\tO\n\n" for _ in range(starts.get(index, 0)))
        parts.extend(f"{t.surface}\t{t.tag}\n" for t in sentence.tokens)
        parts.append("\n")
    parts.extend(f"{DOCSTART}\tO\n\n" for _ in range(starts.get(len(corpus.sentences), 0)))
    return "".join(parts).encode("utf-8")


def read_raw(data: Union[bytes, str]) -> List[List[str]]:
    """Unlabeled pool: one token per line (extra columns ignored), blank-line separated"""
    text = _decode_text(data)
    sentences: List[List[str]] = []
    current: List[str] = []
    for _, fields in _iter_lines(text):
        if not fields or fields[0] == DOCSTART:
            if current:
                sentences.append(current)
                current = []
            continue
        current.append(fields[0])
    if current:
        sentences.append(current)
    return sentences


def write_raw(sentences: Iterable[Sequence[str]]) -> bytes:
    return "".join("".join(f"{s}\n" for s in sentence) + "\n" for sentence in sentences).encode("utf-8")


def load_conll(path: Union[str, Path], scheme: Optional[Union[Scheme, str]] = None) -> Corpus:
    return read_conll(Path(path).read_bytes(), scheme)


def save_conll(corpus: Corpus, path: Union[str, Path]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_conll(corpus))


def load_raw(path: Union[str, Path]) -> List[List[str]]:
    return read_raw(Path(path).read_bytes())


def corpus_stats(corpus: Corpus, policy=None) -> Dict[str, object]:
    """Sentence, token and entity-span counts (spans decoded under ``policy``)"""
    from .schemes import RepairPolicy, decode_spans

    policy = policy or RepairPolicy.CONLL
    per_label: Counter = Counter()
    for sentence in corpus.sentences:
        per_label.update(span.label for span in decode_spans(sentence.tags, corpus.scheme, policy))
    return {
        "scheme": corpus.scheme.value,
        "sentences": len(corpus),
        "tokens": corpus.token_count,
        "entities": sum(per_label.values()),
        "entities_per_label": {label: per_label[label] for label in sorted(corpus.label_set | set(per_label))},
        "documents": len(corpus.document_starts),
    }
