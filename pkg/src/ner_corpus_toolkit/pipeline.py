"""
Staged experiment runner

Stages, each retraining from scratch and scoring on the test corpus in BIO:

- M0: baseline on the training file as given
- M1: training file converted to the working scheme
- M2: plus augmented copies
- M3: plus a consensus silver corpus built from the unlabeled pool
- M4: M3's test predictions corrected by Brill rules tuned on the two halves
  of the training file

Every intermediate corpus, model and rule file is written under the output
directory in the same formats the standalone commands read. ``summary.txt`` and
``summary.yaml`` hold no timings, so equal inputs and seed give equal bytes.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import yaml

from .augment import AugmentConfig, Augmenter, load_lexicon
from .brill import (
    TuneResult,
    apply_rules_to_corpus,
    format_rule_summary,
    save_rules,
    summarize_rules_by_label,
    tune_min_score,
)
from .core import BaseComponent, StageMetrics
from .corpus import Corpus, Scheme, corpus_stats, load_conll, load_raw, save_conll
from .evaluation import ScoreReport, compare_schemes, format_scheme_comparison, score
from .exceptions import ConfigError, PipelineStageError
from .factory import TaggerType, train_tagger
from .parsers import ConfigParser
from .results import ValidationResult, ValidationResultBuilder
from .schemas.pipeline import PATH_KEYS, PIPELINE_CONFIG_SPEC
from .schemes import RepairPolicy, convert_corpus, repair_corpus
from .semisup import ConsensusConfig, build_silver_corpus_from_models
from .taggers import Model, save_model_file, tag_corpus
from .utils import format_percent, get_name_suggestions

STAGES: Tuple[Tuple[str, str], ...] = (
    ("M0", "original data"),
    ("M1", "corpus annotation"),
    ("M2", "+ data augmentation"),
    ("M3", "+ semi-supervised"),
    ("M4", "+ transformation-based"),
)


@dataclass(frozen=True)
class PipelineConfig:
    train: Path
    test: Path
    raw: Path
    lexicon: Optional[Path] = None
    scheme: Scheme = Scheme.BIOES
    original_scheme: Optional[Scheme] = None
    model: str = TaggerType.PERCEPTRON
    epochs: int = 5
    augment_techniques: Tuple[str, ...] = ("lwtr", "sr", "sis")
    augment_p: float = 0.3
    augment_copies: int = 1
    consensus_sources: str = "families"
    keep_all_o: bool = False
    repair: RepairPolicy = RepairPolicy.CONLL
    brill_min_acc: float = 0.99
    brill_scores: Tuple[int, ...] = (2, 3, 4, 5)
    brill_max_rules: int = 250
    compare_schemes: bool = False
    seed: int = 12
    out: Path = Path("pipeline_out")

    @property
    def output_policy(self) -> RepairPolicy:
        """Policy for repairing model output; STRICT cannot repair, so CONLL stands in"""
        return RepairPolicy.CONLL if self.repair is RepairPolicy.STRICT else self.repair

    def to_dict(self) -> Dict[str, Any]:
        return {
            "train": str(self.train),
            "test": str(self.test),
            "raw": str(self.raw),
            "lexicon": str(self.lexicon) if self.lexicon else None,
            "scheme": self.scheme.value,
            "original_scheme": self.original_scheme.value if self.original_scheme else None,
            "model": self.model,
            "epochs": self.epochs,
            "augment_techniques": list(self.augment_techniques),
            "augment_p": self.augment_p,
            "augment_copies": self.augment_copies,
            "consensus_sources": self.consensus_sources,
            "keep_all_o": self.keep_all_o,
            "repair": self.repair.value,
            "brill_min_acc": self.brill_min_acc,
            "brill_scores": list(self.brill_scores),
            "brill_max_rules": self.brill_max_rules,
            "compare_schemes": self.compare_schemes,
            "seed": self.seed,
            "out": str(self.out),
        }


def validate_pipeline_mapping(
    raw: Dict[str, Any], base_dir: Union[str, Path] = ".", check_files: bool = True
) -> Tuple[Dict[str, Any], ValidationResult]:
    """Coerce and validate a raw config mapping

    Returns the typed values (defaults filled, paths resolved against ``base_dir``)
    and the validation result. Unknown keys are warnings.
    """
    builder = ValidationResultBuilder()
    known = {p.name for p in PIPELINE_CONFIG_SPEC.parameters}
    values = PIPELINE_CONFIG_SPEC.get_defaults()

    for key in raw:
        if key not in known:
            suggestions = get_name_suggestions(key, known)
            extra = {"suggestion": f"did you mean {suggestions[0]!r}?"} if suggestions else {}
            builder.add_warning("unknown_config_key", f"unknown config key {key!r} is ignored", path=key, **extra)

    for param in PIPELINE_CONFIG_SPEC.parameters:
        if param.name not in raw:
            continue
        try:
            values[param.name] = param.coerce(raw[param.name])
        except ValueError as e:
            builder.add_error(
                "invalid_parameter_type", f"{param.name}: {e}", path=param.name, parameter=param.name
            )
            values[param.name] = None

    coerced_badly = {e["parameter"] for e in builder.errors}
    for error in PIPELINE_CONFIG_SPEC.validate_parameters(values, allow_unknown=True):
        if error.get("parameter") not in coerced_badly:
            builder.errors.append({**error, "severity": "error"})

    base = Path(base_dir)
    for key in PATH_KEYS:
        if isinstance(values.get(key), str):
            path = Path(values[key])
            values[key] = path if path.is_absolute() else base / path

    if check_files:
        for key in ("train", "test", "raw", "lexicon"):
            path = values.get(key)
            if isinstance(path, Path) and not path.is_file():
                builder.add_error("file_not_found", f"{key}: file not found: {path}", path=key, parameter=key)

    return values, builder.build()


def build_pipeline_config(values: Dict[str, Any]) -> PipelineConfig:
    return PipelineConfig(
        train=values["train"],
        test=values["test"],
        raw=values["raw"],
        lexicon=values.get("lexicon"),
        scheme=Scheme.parse(values["scheme"]),
        original_scheme=Scheme.parse(values["original_scheme"]) if values.get("original_scheme") else None,
        model=values["model"],
        epochs=values["epochs"],
        augment_techniques=tuple(values["augment_techniques"]),
        augment_p=float(values["augment_p"]),
        augment_copies=values["augment_copies"],
        consensus_sources=values["consensus_sources"],
        keep_all_o=values["keep_all_o"],
        repair=RepairPolicy.parse(values["repair"]),
        brill_min_acc=float(values["brill_min_acc"]),
        brill_scores=tuple(values["brill_scores"]),
        brill_max_rules=values["brill_max_rules"],
        compare_schemes=values["compare_schemes"],
        seed=values["seed"],
        out=Path(values["out"]),
    )


def load_pipeline_config(
    path: Union[str, Path], out: Optional[Union[str, Path]] = None, logger=None, check_files: bool = True
) -> PipelineConfig:
    """Read, validate and type a config file; errors raise ConfigError carrying the result"""
    path = Path(path)
    raw = ConfigParser(logger).parse_file(path)
    if out is not None:
        raw["out"] = str(Path(out).resolve())
    values, result = validate_pipeline_mapping(raw, path.parent, check_files)
    for warning in result.warnings:
        message = warning["message"]
        if warning.get("suggestion"):
            message += f" ({warning['suggestion']})"
        ConfigParser(logger).logger_adapter.warning(f"{path}: {message}")
    if not result.is_valid:
        details = "; ".join(e["message"] for e in result.errors)
        raise ConfigError(f"invalid pipeline config {path}: {details}", result)
    return build_pipeline_config(values)


@dataclass(frozen=True)
class StageReport:
    stage: str
    description: str
    scheme: str
    sentences: int
    tokens: int
    report: ScoreReport

    def to_dict(self) -> Dict[str, Any]:
        overall = self.report.overall
        return {
            "stage": self.stage,
            "description": self.description,
            "scheme": self.scheme,
            "train_sentences": self.sentences,
            "train_tokens": self.tokens,
            "precision": float(format_percent(overall.precision)),
            "recall": float(format_percent(overall.recall)),
            "f1": float(format_percent(overall.f1)),
            "predicted": overall.predicted_count,
            "correct": overall.correct_count,
            "gold": overall.gold_count,
        }


@dataclass
class PipelineReport:
    config: PipelineConfig
    stages: List[StageReport] = field(default_factory=list)
    tuning: Optional[TuneResult] = None
    rules_applied: int = 0
    silver_sentences: int = 0
    comparison: Optional[list] = None

    def stage(self, name: str) -> Optional[StageReport]:
        return next((s for s in self.stages if s.stage == name), None)

    def to_table(self) -> str:
        header = ("stage", "description", "scheme", "sentences", "tokens", "precision", "recall", "f1")
        rows = [header]
        for s in self.stages:
            o = s.report.overall
            rows.append(
                (s.stage, s.description, s.scheme, str(s.sentences), str(s.tokens),
                 format_percent(o.precision), format_percent(o.recall), format_percent(o.f1))
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = [
            "  ".join(c.ljust(w) if i < 3 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
            for row in rows
        ]
        lines.insert(1, "-" * len(lines[0]))
        if self.tuning is not None:
            lines.append("")
            lines.append(f"brill tuning on held-out half (min_acc={self.config.brill_min_acc!r}):")
            lines.append(f"  no rules: f1={format_percent(self.tuning.baseline_f1)}")
            for min_score in sorted(self.tuning.f1_by_score):
                lines.append(f"  min_score={min_score}: f1={format_percent(self.tuning.f1_by_score[min_score])}")
            lines.append(f"  chosen min_score={self.tuning.best_min_score}, rules applied={self.rules_applied}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "config": self.config.to_dict(),
            "stages": [s.to_dict() for s in self.stages],
            "silver_sentences": self.silver_sentences,
        }
        if self.tuning is not None:
            data["brill"] = {
                "baseline_f1": float(format_percent(self.tuning.baseline_f1)),
                "f1_by_min_score": {
                    k: float(format_percent(v)) for k, v in sorted(self.tuning.f1_by_score.items())
                },
                "best_min_score": self.tuning.best_min_score,
                "rules_learned": len(self.tuning.rules),
                "rules_applied": self.rules_applied,
            }
        if self.comparison is not None:
            data["scheme_comparison"] = [
                {"scheme": c.scheme, "f1": float(format_percent(c.f1)),
                 "predicted": c.report.overall.predicted_count, "correct": c.report.overall.correct_count}
                for c in self.comparison
            ]
        return data

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, allow_unicode=True, default_flow_style=False)


class PipelineRunner(BaseComponent):
    """Runs the M0..M4 ladder for one PipelineConfig"""

    def __init__(self, cfg: PipelineConfig, logger=None, silent: bool = False):
        super().__init__(logger, "PipelineRunner", silent)
        self.cfg = cfg
        self._logger = logger
        self._silent = silent

    def plan(self) -> List[str]:
        cfg = self.cfg
        family = f"{cfg.model}, {cfg.epochs} epochs" if cfg.model == TaggerType.PERCEPTRON else cfg.model
        sources = (
            "unigram + perceptron trained on the M2 corpus" if cfg.consensus_sources == "families"
            else "the M1 and M2 models"
        )
        lines = [
            f"M0 original data: train {family} on {cfg.train} as given, score on {cfg.test}",
            f"M1 corpus annotation: convert {cfg.train} to {cfg.scheme.value} ({cfg.repair.value}), retrain, score",
            f"M2 + data augmentation: {','.join(cfg.augment_techniques)} p={cfg.augment_p!r} "
            f"copies={cfg.augment_copies} seed={cfg.seed}, retrain, score",
            f"M3 + semi-supervised: tag {cfg.raw} with {sources}, keep consensus spans"
            f"{' (all-O sentences kept)' if cfg.keep_all_o else ''}, concatenate, retrain, score",
            f"M4 + transformation-based: tune min_score over {list(cfg.brill_scores)} on the training halves, "
            f"apply rules to M3 test predictions, repair, score",
        ]
        if cfg.compare_schemes:
            lines.append("scheme comparison: train under BIO, IO and BIOES, score each in BIO")
        lines.append(f"outputs under {cfg.out}")
        return lines

    def _stage(self, name: str, func: Callable):
        metrics = StageMetrics(name)
        metrics.start()
        self.log_info(f"stage {name} started")
        try:
            result = func()
        except PipelineStageError:
            raise
        except Exception as e:
            self.log_error(f"stage {name} failed: {e}")
            raise PipelineStageError(name, e) from e
        metrics.stop()
        self.log_info(f"stage {name} finished in {metrics.get_duration():.2f}s")
        return result

    def _train(self, corpus: Corpus, model_type: Optional[str] = None) -> Model:
        return train_tagger(
            corpus, model_type or self.cfg.model, epochs=self.cfg.epochs, seed=self.cfg.seed,
            logger=self._logger, silent=self._silent,
        )

    def _predict(self, model: Model, surfaces: Sequence[Sequence[str]]) -> Corpus:
        return repair_corpus(tag_corpus(model, surfaces), self.cfg.output_policy)

    def _evaluate(self, stage: str, train: Corpus, model: Model, test: Corpus, out_dir: Path) -> Tuple[StageReport, Corpus]:
        predicted = self._predict(model, [s.surfaces for s in test.sentences])
        save_model_file(model, out_dir / "model.yaml")
        save_conll(predicted, out_dir / "test.pred.conll")
        report = score(test, predicted, self.cfg.output_policy)
        description = dict(STAGES)[stage]
        self.log_info(
            f"{stage} {description}: {len(train)} sentences, {train.token_count} tokens, "
            f"f1={format_percent(report.f1)}"
        )
        return StageReport(stage, description, train.scheme.value, len(train), train.token_count, report), predicted

    def run(self) -> PipelineReport:
        cfg = self.cfg
        out = cfg.out
        out.mkdir(parents=True, exist_ok=True)
        report = PipelineReport(cfg)

        original, test = self._stage(
            "load", lambda: (load_conll(cfg.train, cfg.original_scheme), load_conll(cfg.test))
        )
        self.log_info(f"train: {corpus_stats(original)['entities']} entities; test: {len(test)} sentences")

        def m0():
            model = self._train(original)
            return self._evaluate("M0", original, model, test, out / "m0")

        stage, _ = self._stage("M0", m0)
        report.stages.append(stage)

        def m1():
            converted = convert_corpus(original, cfg.scheme, cfg.repair, logger=self._logger)
            save_conll(converted, out / "m1" / "train.conll")
            model = self._train(converted)
            return converted, model, self._evaluate("M1", converted, model, test, out / "m1")[0]

        working, m1_model, stage = self._stage("M1", m1)
        report.stages.append(stage)

        def m2():
            lexicon = load_lexicon(cfg.lexicon) if cfg.lexicon else None
            augment_cfg = AugmentConfig(cfg.augment_p, cfg.augment_techniques, cfg.augment_copies, cfg.seed)
            augmented = Augmenter(augment_cfg, lexicon, logger=self._logger, silent=self._silent).augment(working)
            save_conll(augmented, out / "m2" / "train.conll")
            model = self._train(augmented)
            return augmented, model, self._evaluate("M2", augmented, model, test, out / "m2")[0]

        augmented, m2_model, stage = self._stage("M2", m2)
        report.stages.append(stage)

        def m3():
            raw = load_raw(cfg.raw)
            if cfg.consensus_sources == "stages":
                sources = [m1_model, m2_model]
            else:
                sources = [self._train(augmented, TaggerType.UNIGRAM), self._train(augmented, TaggerType.PERCEPTRON)]
            consensus_cfg = ConsensusConfig(cfg.scheme, cfg.output_policy, drop_all_o=not cfg.keep_all_o)
            silver = build_silver_corpus_from_models(raw, sources, consensus_cfg, logger=self._logger)
            save_conll(silver, out / "m3" / "silver.conll")
            combined = augmented.concat(silver)
            save_conll(combined, out / "m3" / "train.conll")
            model = self._train(combined)
            stage_report, predicted = self._evaluate("M3", combined, model, test, out / "m3")
            return silver, combined, model, stage_report, predicted

        silver, combined, m3_model, stage, m3_predicted = self._stage("M3", m3)
        report.silver_sentences = len(silver)
        report.stages.append(stage)

        def m4():
            learning, evaluation = working.split_halves()
            tuning = tune_min_score(
                learning,
                evaluation,
                self._predict(m3_model, [s.surfaces for s in learning.sentences]),
                self._predict(m3_model, [s.surfaces for s in evaluation.sentences]),
                candidates=cfg.brill_scores,
                min_acc=cfg.brill_min_acc,
                max_rules=cfg.brill_max_rules,
                policy=cfg.output_policy,
                logger=self._logger,
            )
            # rules that lower held-out F1 are not applied
            rules = list(tuning.rules) if tuning.best_f1 >= tuning.baseline_f1 else []
            save_rules(tuning.rules, out / "m4" / "rules.txt")
            (out / "m4" / "rules_by_label.txt").write_text(
                format_rule_summary(summarize_rules_by_label(tuning.rules)), encoding="utf-8"
            )
            corrected = repair_corpus(apply_rules_to_corpus(m3_predicted, rules), cfg.output_policy)
            save_conll(corrected, out / "m4" / "test.pred.conll")
            result = score(test, corrected, cfg.output_policy)
            self.log_info(
                f"M4: min_score={tuning.best_min_score}, {len(rules)} of {len(tuning.rules)} rules applied, "
                f"f1={format_percent(result.f1)}"
            )
            stage_report = StageReport(
                "M4", dict(STAGES)["M4"], combined.scheme.value, len(combined), combined.token_count, result
            )
            return tuning, len(rules), stage_report

        report.tuning, report.rules_applied, stage = self._stage("M4", m4)
        report.stages.append(stage)

        if cfg.compare_schemes:
            report.comparison = self._stage(
                "compare-schemes",
                lambda: compare_schemes(
                    original, test, cfg.model, cfg.epochs, cfg.seed, cfg.output_policy, logger=self._logger
                ),
            )
            (out / "compare_schemes.txt").write_text(format_scheme_comparison(report.comparison), encoding="utf-8")

        (out / "summary.txt").write_text(report.to_table(), encoding="utf-8")
        (out / "summary.yaml").write_text(report.to_yaml(), encoding="utf-8")
        self.log_info(f"pipeline finished; summary written to {out / 'summary.txt'}")
        return report


def run_pipeline(cfg: PipelineConfig, logger=None, silent: bool = False) -> PipelineReport:
    return PipelineRunner(cfg, logger=logger, silent=silent).run()
