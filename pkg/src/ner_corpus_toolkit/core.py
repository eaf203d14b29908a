"""
Base classes and common utilities shared by toolkit components

Every long-running component (readers, augmenters, trainers, learners, the pipeline)
derives from BaseComponent so logging behaves the same everywhere.
"""

import functools
import time
from abc import ABC
from typing import Any, Callable, Dict, List, Optional

from .logging_adapter import SilentLoggerAdapter, get_logger
from .results import (
    ValidationResult,
    ValidationResultBuilder,
    ValidationSeverity,
    create_exception_result,
)


class ComponentLogger:
    """Prefixing logger built on the logging adapter system"""

    def __init__(self, logger=None, prefix: str = "", silent: bool = False):
        self.prefix = prefix
        self.logger_adapter = get_logger(logger, prefix, silent)
        self._original_logger = logger

    def _format(self, message: str) -> str:
        return f"[{self.prefix}] {message}" if self.prefix else message

    def log_info(self, message: str):
        self.logger_adapter.info(self._format(message))

    def log_warning(self, message: str):
        self.logger_adapter.warning(self._format(message))

    def log_error(self, message: str):
        self.logger_adapter.error(self._format(message))

    def log_debug(self, message: str):
        self.logger_adapter.debug(self._format(message))

    def is_logging_enabled(self) -> bool:
        return not isinstance(self.logger_adapter, SilentLoggerAdapter)

    def has_external_logger(self) -> bool:
        return self._original_logger is not None


class ErrorHandler:
    """Common error handling utilities"""

    @staticmethod
    def safe_call(
        func: Callable[[], ValidationResult],
        error_context: str,
        default_result: ValidationResult = None,
    ) -> ValidationResult:
        """Call a validation function, converting any exception into a result"""
        try:
            return func()
        except Exception as e:
            if default_result is not None:
                return default_result
            return create_exception_result(e, context=error_context)


class BaseComponent(ABC):
    """Abstract base class for toolkit components with smart logging"""

    def __init__(self, logger=None, prefix: str = "", silent: bool = False):
        self.component_logger = ComponentLogger(logger, prefix, silent)
        self.error_handler = ErrorHandler()
        self.component = prefix

    def log_info(self, message: str):
        self.component_logger.log_info(message)

    def log_warning(self, message: str):
        self.component_logger.log_warning(message)

    def log_error(self, message: str):
        self.component_logger.log_error(message)

    def log_debug(self, message: str):
        self.component_logger.log_debug(message)

    def is_logging_enabled(self) -> bool:
        return self.component_logger.is_logging_enabled()

    def get_logger_info(self) -> dict:
        return {
            "has_external_logger": self.component_logger.has_external_logger(),
            "logging_enabled": self.is_logging_enabled(),
            "component": self.component,
            "logger_type": type(self.component_logger.logger_adapter).__name__,
        }


class LocationContext:
    """Location of a token inside a corpus, for violation paths"""

    def __init__(self, sentence_index: int = -1, position: int = -1, source: str = ""):
        self.sentence_index = sentence_index
        self.position = position
        self.source = source

    def get_path(self) -> str:
        parts = []
        if self.source:
            parts.append(self.source)
        if self.sentence_index >= 0:
            parts.append(f"sentences[{self.sentence_index}]")
        if self.position >= 0:
            parts.append(f"tokens[{self.position}]")
        return ".".join(parts)

    def at(self, position: int) -> "LocationContext":
        return LocationContext(self.sentence_index, position, self.source)


class StageMetrics:
    """Track timing of one unit of work"""

    def __init__(self, name: str = ""):
        self.name = name
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None

    def start(self):
        self.start_time = time.perf_counter()

    def stop(self):
        self.end_time = time.perf_counter()

    def get_duration(self) -> float:
        if self.start_time is not None and self.end_time is not None:
            return self.end_time - self.start_time
        return 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "duration_seconds": self.get_duration()}


class RuleEngine:
    """Engine for applying named validation rules consistently"""

    def __init__(self):
        self.rules: Dict[str, Callable] = {}
        self.rule_metadata: Dict[str, Dict[str, Any]] = {}

    def register_rule(
        self,
        name: str,
        rule_func: Callable,
        description: str = "",
        severity: ValidationSeverity = ValidationSeverity.ERROR,
    ):
        self.rules[name] = rule_func
        self.rule_metadata[name] = {"description": description, "severity": severity}

    def apply_rules(self, data: Any, context: LocationContext) -> ValidationResult:
        """Apply every registered rule to one item"""
        builder = ValidationResultBuilder()

        for rule_name, rule_func in self.rules.items():
            metadata = self.rule_metadata[rule_name]
            try:
                for item in rule_func(data, context) or []:
                    severity = item.get("severity", metadata["severity"].value)
                    item.setdefault("severity", severity)
                    if severity in (ValidationSeverity.ERROR.value, ValidationSeverity.CRITICAL.value):
                        builder.errors.append(item)
                    elif severity == ValidationSeverity.WARNING.value:
                        builder.warnings.append(item)
                    else:
                        builder.info.append(item)
            except Exception as e:
                builder.add_error(
                    "rule_execution_error",
                    f'Validation rule "{rule_name}" failed: {e}',
                    path=context.get_path(),
                    rule=rule_name,
                )

        return builder.build()


class SummaryGenerator:
    """Human-readable validation summaries"""

    @staticmethod
    def generate_detailed_summary(result: ValidationResult, limit: int = 10) -> str:
        lines = ["=" * 70, "VALIDATION SUMMARY", "=" * 70]
        lines.append(f"Status: {'✅ VALID' if result.is_valid else '❌ INVALID'}")
        lines.append("")
        lines.append(f"Errors: {len(result.errors)}")
        lines.append(f"Warnings: {len(result.warnings)}")
        lines.append("")

        if result.errors:
            lines.append("ERROR BREAKDOWN:")
            for error_type, count in sorted(result.get_error_summary().items()):
                lines.append(f"  - {error_type}: {count}")
            lines.append("")
            lines.append("DETAILED ERRORS:")
            for i, error in enumerate(result.errors[:limit], 1):
                lines.append(f"  {i}. [{error.get('path', 'unknown')}] {error.get('message')}")
            if len(result.errors) > limit:
                lines.append(f"  ... and {len(result.errors) - limit} more errors")
            lines.append("")

        for warning in result.warnings[:limit]:
            lines.append(f"  ⚠️  {warning.get('message')}")

        suggestions = result.get_suggestions()
        if suggestions:
            lines.append("SUGGESTIONS:")
            for suggestion in suggestions[:5]:
                lines.append(f"  💡 {suggestion}")
            lines.append("")

        lines.append("=" * 70)
        return "\n".join(lines)


def log_stage_start_end(func: Callable) -> Callable:
    """Decorator to log start, end and duration of a component method"""

    @functools.wraps(func)
    def wrapper(self, *args, **kwargs):
        metrics = StageMetrics(func.__name__)
        metrics.start()
        if hasattr(self, "log_info"):
            self.log_info(f"Starting {func.__name__}")
        try:
            result = func(self, *args, **kwargs)
        except Exception as e:
            if hasattr(self, "log_error"):
                self.log_error(f"{func.__name__} failed: {e}")
            raise
        metrics.stop()
        if hasattr(self, "log_info"):
            self.log_info(f"{func.__name__} completed in {metrics.get_duration():.2f}s")
        return result

    return wrapper
