"""
Transformation-based error-driven learning over entity tags

A rule rewrites ``from_tag`` to ``to_tag`` where its conditions hold. Rules are
applied in list order, each as one left-to-right sweep that reads the tags as
already modified earlier in the same sweep, so a rule conditioned on the previous
tag can cascade.

Learning is greedy: at every step the candidate with the highest
``good - bad`` (then accuracy, then smallest serialization) whose accuracy is at
least ``min_acc`` is adopted while its score reaches ``min_score``. Candidate
scores are computed under the same in-place sweep used by ``apply_rules``, so the
learning-set error count drops by exactly the score of every adopted rule.

Rule file lines::

    FROM <tag> TO <tag> IF <slot>=<value> [AND <slot>=<value>] ; score=<int> acc=<decimal>
"""

import shlex
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .core import BaseComponent, log_stage_start_end
from .corpus import OUTSIDE, Corpus, split_tag
from .exceptions import AlignmentError, ConfigError, RuleParseError
from .schemes import RepairPolicy, repair

BOS = "<BOS>"
EOS = "<EOS>"


@dataclass(frozen=True)
class Slot:
    kind: str  # "tag" or "word"
    offset: int

    @property
    def name(self) -> str:
        return f"{self.kind}[{self.offset:+d}]" if self.offset else f"{self.kind}[0]"

    @property
    def reads_left_tag(self) -> bool:
        return self.kind == "tag" and self.offset < 0

    def value(self, i: int, surfaces: Sequence[str], tags: Sequence[str]) -> str:
        j = i + self.offset
        if j < 0:
            return BOS
        if j >= len(tags):
            return EOS
        return tags[j] if self.kind == "tag" else surfaces[j]


@dataclass(frozen=True)
class RuleTemplate:
    template_id: int
    name: str
    slots: Tuple[Slot, ...]

    @property
    def slot_names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.slots)

    @property
    def left_indices(self) -> Tuple[int, ...]:
        return tuple(k for k, s in enumerate(self.slots) if s.reads_left_tag)

    @property
    def other_indices(self) -> Tuple[int, ...]:
        return tuple(k for k, s in enumerate(self.slots) if not s.reads_left_tag)


def _tag(offset: int) -> Slot:
    return Slot("tag", offset)


def _word(offset: int) -> Slot:
    return Slot("word", offset)


TEMPLATES: Tuple[RuleTemplate, ...] = (
    RuleTemplate(1, "prev-tag", (_tag(-1),)),
    RuleTemplate(2, "next-tag", (_tag(1),)),
    RuleTemplate(3, "prev-two-tags", (_tag(-2), _tag(-1))),
    RuleTemplate(4, "next-two-tags", (_tag(1), _tag(2))),
    RuleTemplate(5, "word", (_word(0),)),
    RuleTemplate(6, "prev-word", (_word(-1),)),
    RuleTemplate(7, "next-word", (_word(1),)),
    RuleTemplate(8, "word+prev-tag", (_word(0), _tag(-1))),
    RuleTemplate(9, "word+next-tag", (_word(0), _tag(1))),
    RuleTemplate(10, "prev-tag+next-tag", (_tag(-1), _tag(1))),
    RuleTemplate(11, "prev-word+word", (_word(-1), _word(0))),
    RuleTemplate(12, "word+next-word", (_word(0), _word(1))),
)

_TEMPLATE_BY_SLOTS = {t.slot_names: t for t in TEMPLATES}


def template(template_id: int) -> RuleTemplate:
    return TEMPLATES[template_id - 1]


@dataclass(frozen=True)
class BrillRule:
    conditions: Tuple[Tuple[str, str], ...]
    from_tag: str
    to_tag: str
    score: int = 0
    accuracy: float = 1.0
    template_id: int = 0

    def __post_init__(self):
        if self.from_tag == self.to_tag:
            raise ValueError(f"rule must change the tag, got {self.from_tag} -> {self.to_tag}")
        names = tuple(name for name, _ in self.conditions)
        tmpl = _TEMPLATE_BY_SLOTS.get(names)
        if tmpl is None:
            raise ValueError(f"no template has slots {names}")
        if self.template_id and self.template_id != tmpl.template_id:
            raise ValueError(f"slots {names} belong to template {tmpl.template_id}, not {self.template_id}")
        object.__setattr__(self, "template_id", tmpl.template_id)

    @property
    def template(self) -> RuleTemplate:
        return template(self.template_id)

    def matches(self, i: int, surfaces: Sequence[str], tags: Sequence[str]) -> bool:
        if tags[i] != self.from_tag:
            return False
        for slot, (_, value) in zip(self.template.slots, self.conditions):
            if slot.value(i, surfaces, tags) != value:
                return False
        return True

    def apply(self, surfaces: Sequence[str], tags: List[str]) -> int:
        """One in-place left-to-right sweep; returns the number of changed positions"""
        changed = 0
        for i in range(len(tags)):
            if self.matches(i, surfaces, tags):
                tags[i] = self.to_tag
                changed += 1
        return changed

    def body(self) -> str:
        conditions = " AND ".join(f"{name}={shlex.quote(value)}" for name, value in self.conditions)
        return f"FROM {shlex.quote(self.from_tag)} TO {shlex.quote(self.to_tag)} IF {conditions}"

    def serialize(self) -> str:
        return f"{self.body()} ; score={self.score} acc={self.accuracy!r}"

    def __str__(self) -> str:
        return self.serialize()


def parse_rule(line: str, line_number: int = 0) -> BrillRule:
    if " ; " not in line:
        raise RuleParseError("missing ' ; score=... acc=...' trailer", line_number)
    body, meta = line.rsplit(" ; ", 1)
    try:
        words = shlex.split(body)
    except ValueError as e:
        raise RuleParseError(f"bad quoting: {e}", line_number) from e
    if len(words) < 6 or words[0] != "FROM" or words[2] != "TO" or words[4] != "IF":
        raise RuleParseError("expected 'FROM <tag> TO <tag> IF <slot>=<value> ...'", line_number)

    conditions = []
    for k, word in enumerate(words[5:]):
        if k % 2 == 1:
            if word != "AND":
                raise RuleParseError(f"expected AND, got {word!r}", line_number)
            continue
        if "=" not in word:
            raise RuleParseError(f"expected <slot>=<value>, got {word!r}", line_number)
        conditions.append(tuple(word.split("=", 1)))
    if len(words[5:]) % 2 == 0:
        raise RuleParseError("dangling AND", line_number)

    fields = dict(item.split("=", 1) for item in meta.split() if "=" in item)
    try:
        score = int(fields["score"])
        accuracy = float(fields["acc"])
    except (KeyError, ValueError) as e:
        raise RuleParseError(f"bad score/acc trailer {meta!r}", line_number) from e

    try:
        return BrillRule(tuple(conditions), words[1], words[3], score, accuracy)
    except ValueError as e:
        raise RuleParseError(str(e), line_number) from e


def serialize_rules(rules: Iterable[BrillRule]) -> str:
    return "".join(rule.serialize() + "\n" for rule in rules)


def parse_rules(text: Union[str, bytes]) -> List[BrillRule]:
    """Rules in file order; blank lines and ``#`` comments are skipped"""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rules = []
    for line_number, line in enumerate(text.split("\n"), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rules.append(parse_rule(line, line_number))
    return rules


def save_rules(rules: Iterable[BrillRule], path: Union[str, Path]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_rules(rules), encoding="utf-8")


def load_rules(path: Union[str, Path]) -> List[BrillRule]:
    return parse_rules(Path(path).read_bytes())


def apply_rules(surfaces: Sequence[str], tags: Sequence[str], rules: Sequence[BrillRule]) -> List[str]:
    """Apply rules in order; output length equals input length"""
    out = list(tags)
    for rule in rules:
        rule.apply(surfaces, out)
    return out


def apply_rules_to_corpus(corpus: Corpus, rules: Sequence[BrillRule]) -> Corpus:
    sentences = [s.with_tags(apply_rules(s.surfaces, s.tags, rules)) for s in corpus.sentences]
    return Corpus(tuple(sentences), corpus.scheme, corpus.label_set, corpus.document_starts)


@dataclass(frozen=True)
class BrillConfig:
    min_acc: float = 0.99
    min_score: int = 5
    max_rules: int = 250

    def __post_init__(self):
        if not 0.0 <= self.min_acc <= 1.0:
            raise ConfigError(f"min_acc must be in [0, 1], got {self.min_acc}")
        if self.min_score < 1:
            raise ConfigError(f"min_score must be >= 1, got {self.min_score}")
        if self.max_rules < 1:
            raise ConfigError(f"max_rules must be >= 1, got {self.max_rules}")


# (template id, slot values, from, to)
CandidateKey = Tuple[int, Tuple[str, ...], str, str]


def _is_cascade_sensitive(tmpl: RuleTemplate, binding: Tuple[str, ...], from_tag: str, to_tag: str) -> bool:
    # a left-tag condition only sees earlier rewrites when it tests for from or to
    return any(binding[k] in (from_tag, to_tag) for k in tmpl.left_indices)


def _rule_for(key: CandidateKey, good: int, bad: int) -> BrillRule:
    tid, binding, from_tag, to_tag = key
    conditions = tuple(zip(template(tid).slot_names, binding))
    return BrillRule(conditions, from_tag, to_tag, good - bad, good / (good + bad), tid)


class _LearningState:
    """Tags under learning plus per-sentence candidate counts kept up to date incrementally"""

    def __init__(self, surfaces: Sequence[Sequence[str]], tags: Sequence[Sequence[str]],
                 gold: Sequence[Sequence[str]]):
        self.surfaces = [list(s) for s in surfaces]
        self.tags = [list(t) for t in tags]
        self.gold = [list(g) for g in gold]
        self.good: Counter = Counter()       # (tid, binding, from, to) at error positions
        self.bad: Counter = Counter()        # (tid, binding, tag) at correct positions
        self.relaxed: Counter = Counter()    # (tid, non-left binding, from, to) at error positions
        self.sites: Dict[Tuple, Set[int]] = defaultdict(set)  # (tid, non-left binding, tag) -> sentences
        self._contrib: List[Tuple[Counter, Counter, Counter, Set]] = []
        for sid in range(len(self.tags)):
            contrib = self._count(sid)
            self._contrib.append(contrib)
            self._add(sid, contrib, 1)

    @property
    def errors(self) -> int:
        return sum(c != g for tags, gold in zip(self.tags, self.gold) for c, g in zip(tags, gold))

    def _count(self, sid: int):
        surfaces, tags, gold = self.surfaces[sid], self.tags[sid], self.gold[sid]
        good, bad, relaxed, sites = Counter(), Counter(), Counter(), set()
        for i, (current, truth) in enumerate(zip(tags, gold)):
            for tmpl in TEMPLATES:
                binding = tuple(slot.value(i, surfaces, tags) for slot in tmpl.slots)
                other = tuple(binding[k] for k in tmpl.other_indices)
                sites.add((tmpl.template_id, other, current))
                if current != truth:
                    good[(tmpl.template_id, binding, current, truth)] += 1
                    relaxed[(tmpl.template_id, other, current, truth)] += 1
                else:
                    bad[(tmpl.template_id, binding, current)] += 1
        return good, bad, relaxed, sites

    def _add(self, sid: int, contrib, sign: int):
        good, bad, relaxed, sites = contrib
        for total, part in ((self.good, good), (self.bad, bad), (self.relaxed, relaxed)):
            for key, count in part.items():
                value = total[key] + sign * count
                if value:
                    total[key] = value
                else:
                    del total[key]
        for key in sites:
            if sign > 0:
                self.sites[key].add(sid)
            else:
                members = self.sites[key]
                members.discard(sid)
                if not members:
                    del self.sites[key]

    def _site_sentences(self, key: CandidateKey) -> List[int]:
        tid, binding, from_tag, _ = key
        other = tuple(binding[k] for k in template(tid).other_indices)
        return sorted(self.sites.get((tid, other, from_tag), ()))

    def simulate(self, key: CandidateKey) -> Tuple[int, int]:
        """Exact (good, bad) of one in-place sweep of the candidate"""
        rule = _rule_for(key, 1, 0)
        good = bad = 0
        for sid in self._site_sentences(key):
            tags = list(self.tags[sid])
            gold = self.gold[sid]
            for i in range(len(tags)):
                if rule.matches(i, self.surfaces[sid], tags):
                    if gold[i] == rule.to_tag:
                        good += 1
                    elif gold[i] == rule.from_tag:
                        bad += 1
                    tags[i] = rule.to_tag
        return good, bad

    def _sensitive_candidates(self, min_score: int) -> List[Tuple[int, CandidateKey]]:
        """(bound, key) for every cascade-sensitive candidate that could reach ``min_score``

        The first rewrite of a sweep in any sentence is a static match, so every
        binding worth simulating occurs at some position currently tagged ``from``.
        """
        seen: Dict[Tuple, Set[Tuple[str, ...]]] = defaultdict(set)
        static = [(tid, binding, tag) for tid, binding, tag, _ in self.good]
        static.extend(self.bad)
        for tid, binding, tag in static:
            tmpl = template(tid)
            if tmpl.left_indices:
                seen[(tid, tuple(binding[k] for k in tmpl.other_indices), tag)].add(binding)

        out = []
        for (tid, other, from_tag, to_tag), bound in self.relaxed.items():
            tmpl = template(tid)
            if bound < min_score or not tmpl.left_indices:
                continue
            for binding in seen.get((tid, other, from_tag), ()):
                if _is_cascade_sensitive(tmpl, binding, from_tag, to_tag):
                    out.append((bound, (tid, binding, from_tag, to_tag)))
        return out

    def best_rule(self, cfg: BrillConfig) -> Optional[BrillRule]:
        best: Optional[Tuple[int, float, CandidateKey, int, int]] = None
        best_body: Optional[str] = None

        def consider(key, good, bad):
            nonlocal best, best_body
            score = good - bad
            if score < cfg.min_score:
                return
            accuracy = good / (good + bad)
            if accuracy < cfg.min_acc:
                return
            if best is not None:
                if (score, accuracy) < best[:2]:
                    return
                if (score, accuracy) == best[:2]:
                    body = _rule_for(key, good, bad).body()
                    if best_body is None:
                        best_body = _rule_for(best[2], best[3], best[4]).body()
                    if body >= best_body:
                        return
                    best, best_body = (score, accuracy, key, good, bad), body
                    return
            best, best_body = (score, accuracy, key, good, bad), None

        for key, good in self.good.items():
            tid, binding, from_tag, to_tag = key
            if not _is_cascade_sensitive(template(tid), binding, from_tag, to_tag):
                consider(key, good, self.bad.get((tid, binding, from_tag), 0))

        # a sweep can only rewrite sites, so the relaxed error count bounds the score
        sensitive = self._sensitive_candidates(cfg.min_score)
        sensitive.sort(key=lambda item: (-item[0], item[1]))
        for bound, key in sensitive:
            if best is not None and bound < best[0]:
                break
            good, bad = self.simulate(key)
            if good:
                consider(key, good, bad)

        if best is None:
            return None
        return _rule_for(best[2], best[3], best[4])

    def apply(self, rule: BrillRule) -> int:
        key = (rule.template_id, tuple(v for _, v in rule.conditions), rule.from_tag, rule.to_tag)
        changed = 0
        for sid in self._site_sentences(key):
            tags = list(self.tags[sid])
            if not rule.apply(self.surfaces[sid], tags):
                continue
            changed += 1
            self._add(sid, self._contrib[sid], -1)
            self.tags[sid] = tags
            self._contrib[sid] = self._count(sid)
            self._add(sid, self._contrib[sid], 1)
        return changed


def _check_alignment(surfaces, current, gold):
    if not len(surfaces) == len(current) == len(gold):
        raise AlignmentError(
            f"{len(surfaces)} token sentences, {len(current)} tagged, {len(gold)} gold sentences"
        )
    for i, (s, c, g) in enumerate(zip(surfaces, current, gold)):
        if not len(s) == len(c) == len(g):
            raise AlignmentError(f"{len(s)} tokens, {len(c)} current tags, {len(g)} gold tags", sentence_index=i)


class BrillLearner(BaseComponent):
    """Greedy transformation-based rule learner"""

    def __init__(self, cfg: BrillConfig = None, logger=None, silent: bool = False):
        super().__init__(logger, "BrillLearner", silent)
        self.cfg = cfg or BrillConfig()

    @log_stage_start_end
    def learn(
        self,
        surfaces: Sequence[Sequence[str]],
        current: Sequence[Sequence[str]],
        gold: Sequence[Sequence[str]],
    ) -> List[BrillRule]:
        _check_alignment(surfaces, current, gold)
        state = _LearningState(surfaces, current, gold)
        self.log_info(f"learning from {len(state.tags)} sentences with {state.errors} tag errors")

        rules: List[BrillRule] = []
        while len(rules) < self.cfg.max_rules:
            rule = state.best_rule(self.cfg)
            if rule is None:
                break
            errors_before = state.errors
            state.apply(rule)
            rules.append(rule)
            self.log_debug(f"rule {len(rules)}: {rule} (errors {errors_before} -> {state.errors})")

        self.log_info(f"learned {len(rules)} rules; {state.errors} tag errors remain")
        return rules


def learn_rules(
    surfaces: Sequence[Sequence[str]],
    current: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    cfg: BrillConfig = None,
    logger=None,
) -> List[BrillRule]:
    """Ordered rules correcting ``current`` towards ``gold``"""
    return BrillLearner(cfg, logger=logger).learn(surfaces, current, gold)


def learn_rules_from_corpora(initial: Corpus, gold: Corpus, cfg: BrillConfig = None, logger=None) -> List[BrillRule]:
    for i, (a, b) in enumerate(zip(initial.sentences, gold.sentences)):
        if a.surfaces != b.surfaces:
            raise AlignmentError("initial tagging and gold differ in surfaces", sentence_index=i)
    return learn_rules(
        [s.surfaces for s in gold.sentences],
        [s.tags for s in initial.sentences],
        [s.tags for s in gold.sentences],
        cfg,
        logger,
    )


@dataclass(frozen=True)
class TuneResult:
    best_min_score: int
    rules: Tuple[BrillRule, ...]
    f1_by_score: Dict[int, float] = field(default_factory=dict)
    baseline_f1: float = 0.0

    @property
    def best_f1(self) -> float:
        return self.f1_by_score[self.best_min_score]


def truncate_rules(rules: Sequence[BrillRule], min_score: int) -> List[BrillRule]:
    """Rules up to (excluding) the first one scoring below ``min_score``"""
    out = []
    for rule in rules:
        if rule.score < min_score:
            break
        out.append(rule)
    return out


def tune_min_score(
    learning: Corpus,
    evaluation: Corpus,
    initial_learning: Corpus,
    initial_evaluation: Corpus,
    candidates: Sequence[int] = (2, 3, 4, 5),
    min_acc: float = 0.99,
    max_rules: int = 250,
    policy: Union[RepairPolicy, str] = RepairPolicy.CONLL,
    logger=None,
) -> TuneResult:
    """Learn on one half, score each candidate min_score on the other (F1 in BIO)

    Rules are learned once at the smallest candidate; the list for a larger
    min_score is its truncation. The highest F1 wins, ties going to the larger
    min_score.
    """
    from .evaluation import score

    candidates = sorted(set(int(c) for c in candidates))
    if not candidates:
        raise ConfigError("tune_min_score needs at least one candidate min_score")
    cfg = BrillConfig(min_acc=min_acc, min_score=candidates[0], max_rules=max_rules)
    all_rules = learn_rules_from_corpora(initial_learning, learning, cfg, logger)

    def f1_with(rules: Sequence[BrillRule]) -> float:
        corrected = apply_rules_to_corpus(initial_evaluation, rules)
        repaired = corrected.replace_sentences(
            s.with_tags(repair(s.tags, corrected.scheme, policy)) for s in corrected.sentences
        )
        return score(evaluation, repaired, policy).f1

    f1_by_score = {c: f1_with(truncate_rules(all_rules, c)) for c in candidates}
    best = max(candidates, key=lambda c: (f1_by_score[c], c))
    return TuneResult(best, tuple(truncate_rules(all_rules, best)), f1_by_score, f1_with([]))


@dataclass(frozen=True)
class LabelRuleSummary:
    label: str
    rule_count: int
    total_score: int


def summarize_rules_by_label(rules: Iterable[BrillRule]) -> List[LabelRuleSummary]:
    """Rule counts and summed scores grouped by the label of each rule's target tag"""
    counts: Counter = Counter()
    scores: Counter = Counter()
    for rule in rules:
        parsed = split_tag(rule.to_tag)
        label = parsed[1] if parsed and parsed[1] is not None else OUTSIDE
        counts[label] += 1
        scores[label] += rule.score
    return [LabelRuleSummary(label, counts[label], scores[label]) for label in sorted(counts)]


def format_rule_summary(summary: Sequence[LabelRuleSummary]) -> str:
    width = max([len("label")] + [len(s.label) for s in summary])
    lines = [f"{'label':<{width}}  {'rules':>5}  {'score':>6}"]
    lines.extend(f"{s.label:<{width}}  {s.rule_count:>5}  {s.total_score:>6}" for s in summary)
    return "\n".join(lines) + "\n"
