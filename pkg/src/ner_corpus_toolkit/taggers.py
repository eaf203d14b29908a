"""
Baseline sequence taggers

Two lightweight model families: a unigram lookup table and a greedy averaged
perceptron. Both emit only tags seen in training, so their output prefixes are
legal for the training scheme; sequences may still be ill-formed and should go
through ``schemes.repair`` before span decoding.

Model files are YAML documents followed by a ``checksum: <sha256>`` line covering
every byte before it.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import yaml

from .augment import RandomStream
from .core import BaseComponent, log_stage_start_end
from .corpus import OUTSIDE, Corpus, Scheme
from .exceptions import ModelLoadError, TrainingError
from .utils import sha256_hex

MODEL_FORMAT = "ner-corpus-toolkit/model"
MODEL_VERSION = 1

BOS = ("<BOS>", "<BOS2>")
EOS = ("<EOS>", "<EOS2>")
START_TAGS = ("<START>", "<START2>")

FEATURE_TEMPLATES = ("bias", "w", "lw", "w-1", "w-2", "w+1", "w+2", "t-1", "t-2+t-1", "suf3", "shape")

_SafeLoader = getattr(yaml, "CSafeLoader", yaml.SafeLoader)


def word_shape(surface: str) -> str:
    """Character classes with repeats collapsed: "Aspirin" -> "Xx", "10mg" -> "dx" """
    shape = []
    for ch in surface:
        if ch.isupper():
            code = "X"
        elif ch.islower():
            code = "x"
        elif ch.isdigit():
            code = "d"
        else:
            code = ch
        if not shape or shape[-1] != code:
            shape.append(code)
    return "".join(shape)


def pad(surfaces: Sequence[str]) -> List[str]:
    """Surfaces with two boundary symbols on each side"""
    return [BOS[1], BOS[0], *surfaces, EOS[0], EOS[1]]


def extract_features(context: Sequence[str], i: int, prev: str, prev2: str) -> List[str]:
    """Features of token ``i``; ``context`` is the padded sentence"""
    j = i + 2
    word = context[j]
    return [
        "bias",
        f"w={word}",
        f"lw={word.lower()}",
        f"w-1={context[j - 1]}",
        f"w-2={context[j - 2]}",
        f"w+1={context[j + 1]}",
        f"w+2={context[j + 2]}",
        f"t-1={prev}",
        f"t-2+t-1={prev2}+{prev}",
        f"suf3={word[-3:].lower()}",
        f"shape={word_shape(word)}",
    ]


@dataclass(frozen=True)
class UnigramModel:
    """surface -> most frequent training tag; unseen surfaces get ``fallback``"""

    table: Dict[str, str]
    fallback: str = OUTSIDE
    scheme: Scheme = Scheme.BIO

    def tag(self, surfaces: Sequence[str]) -> List[str]:
        return [self.table.get(s, self.fallback) for s in surfaces]


@dataclass(frozen=True)
class PerceptronModel:
    """Averaged weights: feature -> {tag: weight}; zero weights are not stored"""

    weights: Dict[str, Dict[str, float]]
    tags: Tuple[str, ...]
    epochs: int
    seed: int
    scheme: Scheme = Scheme.BIO
    templates: Tuple[str, ...] = field(default=FEATURE_TEMPLATES)

    def best_tag(self, features: Sequence[str]) -> str:
        scores = dict.fromkeys(self.tags, 0.0)
        for feature in features:
            for tag, weight in self.weights.get(feature, {}).items():
                scores[tag] += weight
        # ties go to O, then to the larger tag string
        return max(self.tags, key=lambda t: (scores[t], t == OUTSIDE, t))

    def tag(self, surfaces: Sequence[str]) -> List[str]:
        prev, prev2 = START_TAGS
        context = pad(surfaces)
        out = []
        for i in range(len(surfaces)):
            guess = self.best_tag(extract_features(context, i, prev, prev2))
            out.append(guess)
            prev2, prev = prev, guess
        return out


Model = Union[UnigramModel, PerceptronModel]


def _require_tokens(corpus: Corpus):
    if not corpus.sentences:
        raise TrainingError("cannot train on an empty corpus")


def train_unigram(corpus: Corpus) -> UnigramModel:
    """Argmax tag per surface; count ties go to the lexicographically smallest tag"""
    _require_tokens(corpus)
    counts: Dict[str, Counter] = defaultdict(Counter)
    for sentence in corpus.sentences:
        for token in sentence.tokens:
            counts[token.surface][token.tag] += 1
    table = {
        surface: min(tag_counts, key=lambda t: (-tag_counts[t], t))
        for surface, tag_counts in sorted(counts.items())
    }
    return UnigramModel(table, OUTSIDE, corpus.scheme)


class _AveragedWeights:
    """Perceptron weights with lazy averaging (totals updated on change only)"""

    def __init__(self, tags: Sequence[str]):
        self.tags = tuple(tags)
        self.weights: Dict[str, Dict[str, float]] = {}
        self._totals: Dict[Tuple[str, str], float] = defaultdict(float)
        self._stamps: Dict[Tuple[str, str], int] = defaultdict(int)
        self.instances = 0

    def predict(self, features: Sequence[str]) -> str:
        scores = dict.fromkeys(self.tags, 0.0)
        for feature in features:
            for tag, weight in self.weights.get(feature, {}).items():
                scores[tag] += weight
        return max(self.tags, key=lambda t: (scores[t], t == OUTSIDE, t))

    def _bump(self, feature: str, tag: str, delta: float):
        row = self.weights.setdefault(feature, {})
        key = (feature, tag)
        weight = row.get(tag, 0.0)
        self._totals[key] += (self.instances - self._stamps[key]) * weight
        self._stamps[key] = self.instances
        row[tag] = weight + delta

    def update(self, truth: str, guess: str, features: Sequence[str]):
        self.instances += 1
        if truth == guess:
            return
        for feature in features:
            self._bump(feature, truth, 1.0)
            self._bump(feature, guess, -1.0)

    def averaged(self) -> Dict[str, Dict[str, float]]:
        result: Dict[str, Dict[str, float]] = {}
        for feature in sorted(self.weights):
            row = {}
            for tag in sorted(self.weights[feature]):
                key = (feature, tag)
                total = self._totals[key] + (self.instances - self._stamps[key]) * self.weights[feature][tag]
                average = total / self.instances if self.instances else 0.0
                if average != 0.0:
                    row[tag] = average
            if row:
                result[feature] = row
        return result


class PerceptronTrainer(BaseComponent):
    """Greedy left-to-right averaged perceptron training"""

    def __init__(self, epochs: int = 5, seed: int = 12, logger=None, silent: bool = False):
        super().__init__(logger, "PerceptronTrainer", silent)
        if epochs < 1:
            raise TrainingError(f"epochs must be >= 1, got {epochs}")
        self.epochs = epochs
        self.seed = seed

    @log_stage_start_end
    def train(self, corpus: Corpus) -> PerceptronModel:
        _require_tokens(corpus)
        tags = sorted({t.tag for s in corpus.sentences for t in s.tokens})
        model = _AveragedWeights(tags)
        sentences = corpus.sentences

        for epoch in range(self.epochs):
            order = RandomStream(self.seed, epoch).permutation(len(sentences))
            correct = total = 0
            for index in order:
                sentence = sentences[index]
                context = pad(sentence.surfaces)
                prev, prev2 = START_TAGS
                for i, gold in enumerate(sentence.tags):
                    features = extract_features(context, i, prev, prev2)
                    guess = model.predict(features)
                    model.update(gold, guess, features)
                    correct += guess == gold
                    total += 1
                    prev2, prev = prev, guess
            self.log_debug(f"epoch {epoch + 1}/{self.epochs}: training accuracy {correct / total:.4f}")

        return PerceptronModel(model.averaged(), tuple(tags), self.epochs, self.seed, corpus.scheme)


def train_perceptron(corpus: Corpus, epochs: int = 5, seed: int = 12, logger=None) -> PerceptronModel:
    return PerceptronTrainer(epochs, seed, logger=logger).train(corpus)


def tag(model: Model, surfaces: Sequence[str]) -> List[str]:
    """One tag per input token"""
    return model.tag(list(surfaces))


def tag_corpus(model: Model, sentences: Sequence[Sequence[str]]) -> Corpus:
    """Tag raw token lists into a corpus under the model's scheme"""
    from .corpus import Sentence

    tagged = [Sentence.from_pairs(list(s), model.tag(list(s))) for s in sentences if len(s)]
    return Corpus(tuple(tagged), model.scheme)


def _model_body(model: Model) -> Dict:
    body = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "scheme": model.scheme.value}
    if isinstance(model, UnigramModel):
        body.update(model_type="unigram", fallback=model.fallback, table=dict(model.table))
    else:
        body.update(
            model_type="perceptron",
            tags=list(model.tags),
            epochs=model.epochs,
            seed=model.seed,
            templates=list(model.templates),
            weights={f: dict(row) for f, row in model.weights.items()},
        )
    return body


def save_model(model: Model) -> bytes:
    body = yaml.dump(
        _model_body(model),
        Dumper=yaml.SafeDumper,
        sort_keys=True,
        allow_unicode=True,
        default_flow_style=False,
        width=4096,
    ).encode("utf-8")
    return body + f"checksum: {sha256_hex(body)}\n".encode("ascii")


def load_model(data: bytes) -> Model:
    """Verify checksum, format and version, then rebuild the model"""
    if not data.endswith(b"\n"):
        raise ModelLoadError("model stream is truncated")
    cut = data.rfind(b"\n", 0, len(data) - 1) + 1
    trailer = data[cut:].decode("ascii", errors="replace").strip()
    body = data[:cut]
    if not trailer.startswith("checksum: "):
        raise ModelLoadError("model stream has no checksum line (truncated?)")
    if trailer[len("checksum: "):] != sha256_hex(body):
        raise ModelLoadError("model checksum mismatch (corrupt or truncated stream)")

    try:
        doc = yaml.load(body.decode("utf-8"), Loader=_SafeLoader)
    except (yaml.YAMLError, UnicodeDecodeError) as e:
        raise ModelLoadError(f"model body is not valid YAML: {e}") from e
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelLoadError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise ModelLoadError(f"unsupported model version {doc.get('version')!r} (expected {MODEL_VERSION})")

    try:
        scheme = Scheme.parse(doc["scheme"])
        if doc["model_type"] == "unigram":
            return UnigramModel(dict(doc["table"]), doc["fallback"], scheme)
        if doc["model_type"] == "perceptron":
            return PerceptronModel(
                {f: {t: float(w) for t, w in row.items()} for f, row in doc["weights"].items()},
                tuple(doc["tags"]),
                int(doc["epochs"]),
                int(doc["seed"]),
                scheme,
                tuple(doc["templates"]),
            )
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ModelLoadError(f"model document is incomplete: {e}") from e
    raise ModelLoadError(f"unknown model_type {doc.get('model_type')!r}")


def save_model_file(model: Model, path: Union[str, Path]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(save_model(model))


def load_model_file(path: Union[str, Path]) -> Model:
    return load_model(Path(path).read_bytes())


def training_accuracy(model: Model, corpus: Corpus) -> float:
    total = correct = 0
    for sentence in corpus.sentences:
        predicted = model.tag(sentence.surfaces)
        correct += sum(p == g for p, g in zip(predicted, sentence.tags))
        total += len(sentence)
    return correct / total if total else 0.0
