"""
Command-line entry point (``ner-toolkit``)

Subcommands and their flags come from ``schemas.operations.OPERATION_REGISTRY``.
Flag values are read as text by argparse and then coerced and range-checked by
the same ParameterSpecs that validate pipeline config files.

Exit codes: 0 success, 1 input error (bad flags, unreadable or invalid input),
2 internal error.
"""

import argparse
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence

import yaml

from . import __version__
from .augment import AugmentConfig, augment_corpus, build_label_token_distribution, load_lexicon
from .brill import (
    BrillConfig,
    apply_rules_to_corpus,
    format_rule_summary,
    learn_rules_from_corpora,
    load_rules,
    serialize_rules,
    summarize_rules_by_label,
    tune_min_score,
)
from .config import configure_logging
from .core import SummaryGenerator
from .corpus import Corpus, corpus_stats, read_conll, read_raw, write_conll
from .evaluation import compare_schemes, diff_report, format_scheme_comparison, score
from .exceptions import ConfigError, NerToolkitError, PipelineStageError
from .factory import train_tagger, validate_corpus_bytes
from .pipeline import PipelineRunner, load_pipeline_config
from .results import ValidationResultBuilder
from .schemas.operations import OPERATION_REGISTRY, OperationRegistry, OperationSpec, ParameterType
from .schemes import convert_corpus, repair_corpus
from .semisup import ConsensusConfig, build_silver_corpus_from_predictions
from .synthetic import generate_demo
from .taggers import load_model_file, save_model_file, tag_corpus
from .utils import format_percent, read_input, write_output

PROG = "ner-toolkit"
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


class UsageError(Exception):
    """Bad command line; argparse has already printed the usage text"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Seed for all randomness (default 12)")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=argparse.SUPPRESS,
                        help="Console log level (default WARNING)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="Disable logging")
    return common


def _add_operation(subparsers, spec: OperationSpec, common: argparse.ArgumentParser):
    sub = subparsers.add_parser(
        spec.name,
        help=spec.description,
        description=spec.description,
        epilog="examples:\n  " + "\n  ".join(spec.examples) if spec.examples else None,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )
    for param in spec.parameters:
        flags = [param.short_flag, param.flag] if param.short_flag else [param.flag]
        kwargs: Dict[str, Any] = {"dest": param.name, "help": param.description or None, "default": None}
        if param.param_type == ParameterType.BOOLEAN:
            kwargs["action"] = "store_true"
        else:
            kwargs["metavar"] = param.param_type.value.upper() if not param.choices else "{" + ",".join(
                str(c) for c in param.choices) + "}"
            if param.repeatable:
                kwargs["action"] = "append"
            if param.required and param.default is None:
                kwargs["required"] = True
        sub.add_argument(*flags, **kwargs)
    return sub


def build_parser(registry: OperationRegistry = OPERATION_REGISTRY) -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _ArgumentParser(
        prog=PROG,
        description="NER corpus toolkit: tag schemes, augmentation, consensus corpora, Brill rules, scoring",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
    subparsers.required = True
    for name in registry.get_all_operation_names():
        _add_operation(subparsers, registry.get_operation(name), common)
    return parser


def operation_parameters(
    spec: OperationSpec, namespace: argparse.Namespace, registry: OperationRegistry = OPERATION_REGISTRY
) -> Dict[str, Any]:
    """Typed parameter values for one subcommand; invalid values raise ConfigError"""
    builder = ValidationResultBuilder()
    values: Dict[str, Any] = {}
    for param in spec.parameters:
        raw = getattr(namespace, param.name, None)
        if param.param_type == ParameterType.BOOLEAN:
            values[param.name] = bool(raw) or bool(param.default)
            continue
        if raw is None:
            values[param.name] = param.default
            continue
        try:
            values[param.name] = param.coerce(raw)
        except ValueError as e:
            builder.add_error("invalid_parameter_type", f"{param.flag}: {e}", path=param.name, parameter=param.name)

    for error in registry.validate_operation(spec.name, values):
        if not any(e.get("parameter") == error.get("parameter") for e in builder.errors):
            builder.errors.append(error)
    result = builder.build()
    if not result.is_valid:
        raise ConfigError("; ".join(e["message"] for e in result.errors), result)
    return values


@dataclass
class CommandContext:
    seed: int
    logger: Any


def _load(path: str, scheme: Optional[str] = None) -> Corpus:
    return read_conll(read_input(path), scheme)


def _repaired(corpus: Corpus, policy: Optional[str]) -> Corpus:
    return repair_corpus(corpus, policy) if policy else corpus


def _report_stream(out: Optional[str]):
    """Where secondary text goes: stdout when the main output is a file, stderr otherwise"""
    return sys.stderr if out is None or out == "-" else sys.stdout


def cmd_convert(p: Dict[str, Any], ctx: CommandContext) -> int:
    corpus = _load(p["input"], p["from"])
    write_output(write_conll(convert_corpus(corpus, p["to"], p["repair"], logger=ctx.logger)), p["out"])
    return 0


def cmd_validate(p: Dict[str, Any], ctx: CommandContext) -> int:
    result = validate_corpus_bytes(read_input(p["input"]), p["scheme"], p["input"], logger=ctx.logger)
    print(SummaryGenerator.generate_detailed_summary(result))
    return 0 if result.is_valid else 1


def cmd_stats(p: Dict[str, Any], ctx: CommandContext) -> int:
    stats = corpus_stats(_load(p["input"], p["scheme"]), p["repair"])
    print(yaml.safe_dump(stats, sort_keys=False, default_flow_style=False), end="")
    return 0


def cmd_generate_demo(p: Dict[str, Any], ctx: CommandContext) -> int:
    files = generate_demo(p["out"], p["train_sentences"], p["test_sentences"], p["raw_sentences"], ctx.seed, ctx.logger)
    print(f"demo data written; run: {PROG} pipeline -c {files.config}")
    return 0


def cmd_augment(p: Dict[str, Any], ctx: CommandContext) -> int:
    corpus = _load(p["input"])
    lexicon = load_lexicon(p["lexicon"]) if p["lexicon"] else None
    dist = build_label_token_distribution(_load(p["dist"])) if p["dist"] else None
    cfg = AugmentConfig(p["p"], tuple(p["techniques"]), p["copies"], ctx.seed)
    write_output(write_conll(augment_corpus(corpus, cfg, lexicon, dist, logger=ctx.logger)), p["out"])
    return 0


def cmd_train(p: Dict[str, Any], ctx: CommandContext) -> int:
    model = train_tagger(_load(p["input"], p["scheme"]), p["model"], p["epochs"], ctx.seed, ctx.logger)
    save_model_file(model, p["out"])
    return 0


def cmd_tag(p: Dict[str, Any], ctx: CommandContext) -> int:
    model = load_model_file(p["model"])
    predicted = tag_corpus(model, read_raw(read_input(p["input"])))
    write_output(write_conll(_repaired(predicted, p["repair"])), p["out"])
    return 0


def cmd_consensus(p: Dict[str, Any], ctx: CommandContext) -> int:
    predictions = [_load(path) for path in p["pred"]]
    raw = read_raw(read_input(p["raw"])) if p["raw"] else None
    cfg = ConsensusConfig(p["scheme"] or predictions[0].scheme, p["repair"], drop_all_o=not p["keep_all_o"])
    silver = build_silver_corpus_from_predictions(predictions, raw, cfg, logger=ctx.logger)
    write_output(write_conll(silver), p["out"])
    return 0


def cmd_brill_learn(p: Dict[str, Any], ctx: CommandContext) -> int:
    cfg = BrillConfig(p["min_acc"], p["min_score"], p["max_rules"])
    rules = learn_rules_from_corpora(_load(p["input"]), _load(p["gold"]), cfg, logger=ctx.logger)
    write_output(serialize_rules(rules), p["out"])
    if p["summary"]:
        print(format_rule_summary(summarize_rules_by_label(rules)), end="", file=_report_stream(p["out"]))
    return 0


def cmd_brill_apply(p: Dict[str, Any], ctx: CommandContext) -> int:
    corpus = apply_rules_to_corpus(_load(p["input"]), load_rules(p["rules"]))
    write_output(write_conll(_repaired(corpus, p["repair"])), p["out"])
    return 0


def cmd_brill_tune(p: Dict[str, Any], ctx: CommandContext) -> int:
    initial = _load(p["input"])
    gold = _load(p["gold"])
    learning, evaluation = gold.split_halves()
    initial_learning, initial_evaluation = initial.split_halves()
    result = tune_min_score(
        learning, evaluation, initial_learning, initial_evaluation,
        candidates=p["scores"], min_acc=p["min_acc"], max_rules=p["max_rules"], policy=p["repair"],
        logger=ctx.logger,
    )
    write_output(serialize_rules(result.rules), p["out"])
    stream = _report_stream(p["out"])
    print(f"no rules: f1={format_percent(result.baseline_f1)}", file=stream)
    for min_score in sorted(result.f1_by_score):
        print(f"min_score={min_score}: f1={format_percent(result.f1_by_score[min_score])}", file=stream)
    print(f"best min_score={result.best_min_score} ({len(result.rules)} rules)", file=stream)
    return 0


def cmd_score(p: Dict[str, Any], ctx: CommandContext) -> int:
    report = score(_load(p["gold"]), _load(p["input"]), p["repair"])
    write_output(report.to_table() + "\n" + report.to_key_value(), p["out"])
    return 0


def cmd_diff(p: Dict[str, Any], ctx: CommandContext) -> int:
    report = diff_report(_load(p["gold"]), _load(p["pred_a"]), _load(p["pred_b"]), p["repair"])
    write_output(report.to_table(), p["out"])
    return 0


def cmd_compare_schemes(p: Dict[str, Any], ctx: CommandContext) -> int:
    results = compare_schemes(
        _load(p["train"]), _load(p["test"]), p["model"], p["epochs"], ctx.seed, p["repair"], logger=ctx.logger
    )
    write_output(format_scheme_comparison(results), p["out"])
    return 0


def cmd_pipeline(p: Dict[str, Any], ctx: CommandContext) -> int:
    cfg = load_pipeline_config(p["config"], out=p["out"], logger=ctx.logger, check_files=not p["dry_run"])
    runner = PipelineRunner(cfg, logger=ctx.logger)
    if p["dry_run"]:
        print("\n".join(runner.plan()))
        return 0
    report = runner.run()
    print(report.to_table(), end="")
    return 0


COMMANDS: Dict[str, Callable[[Dict[str, Any], CommandContext], int]] = {
    "convert": cmd_convert,
    "validate": cmd_validate,
    "stats": cmd_stats,
    "generate-demo": cmd_generate_demo,
    "augment": cmd_augment,
    "train": cmd_train,
    "tag": cmd_tag,
    "consensus": cmd_consensus,
    "brill-learn": cmd_brill_learn,
    "brill-apply": cmd_brill_apply,
    "brill-tune": cmd_brill_tune,
    "score": cmd_score,
    "diff": cmd_diff,
    "compare-schemes": cmd_compare_schemes,
    "pipeline": cmd_pipeline,
}


def _is_input_error(error: BaseException) -> bool:
    if isinstance(error, PipelineStageError):
        return _is_input_error(error.cause)
    return isinstance(error, (NerToolkitError, OSError))


def main(argv: Optional[Sequence[str]] = None, logger=None) -> int:
    try:
        namespace = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1

    configure_logging(
        level=getattr(namespace, "log_level", "WARNING"),
        silent=getattr(namespace, "quiet", False),
    )
    ctx = CommandContext(seed=getattr(namespace, "seed", 12), logger=logger)

    try:
        spec = OPERATION_REGISTRY.get_operation(namespace.command)
        return COMMANDS[namespace.command](operation_parameters(spec, namespace), ctx)
    except Exception as e:
        code = 1 if _is_input_error(e) else 2
        kind = "error" if code == 1 else "internal error"
        print(f"{PROG}: {kind}: {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
