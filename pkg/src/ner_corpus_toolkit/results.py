"""
Validation results for corpora and configurations

A violation is a plain dict with at least ``type``, ``message`` and ``severity``;
corpus violations also carry ``path`` ("sentences[3].tokens[1]"), ``sentence``,
``position`` and ``tag``. Configuration violations carry ``path`` = the key name.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Set


class ValidationSeverity(Enum):
    """Severity levels for validation messages"""

    CRITICAL = "critical"
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass
class ValidationResult:
    """Result of validating a corpus or a configuration"""

    is_valid: bool
    errors: List[Dict[str, Any]] = field(default_factory=list)
    warnings: List[Dict[str, Any]] = field(default_factory=list)
    info: List[Dict[str, Any]] = field(default_factory=list)

    metadata: Optional[Dict[str, Any]] = None

    def get_all_messages(self) -> List[Dict[str, Any]]:
        return self.errors + self.warnings + self.info

    def get_affected_sentences(self) -> Set[int]:
        return {m["sentence"] for m in self.get_all_messages() if "sentence" in m}

    def get_error_summary(self) -> Dict[str, int]:
        """Error counts by type"""
        return dict(Counter(e.get("type", "unknown") for e in self.errors))

    def get_suggestions(self) -> List[str]:
        return [m["suggestion"] for m in self.get_all_messages() if m.get("suggestion")]

    def __str__(self) -> str:
        status = "✅ VALID" if self.is_valid else "❌ INVALID"
        return f"ValidationResult({status}, Errors: {len(self.errors)}, Warnings: {len(self.warnings)})"

    def __bool__(self) -> bool:
        return self.is_valid


class ValidationResultBuilder:
    """Builder pattern for creating ValidationResult objects"""

    def __init__(self):
        self.errors: List[Dict[str, Any]] = []
        self.warnings: List[Dict[str, Any]] = []
        self.info: List[Dict[str, Any]] = []
        self.metadata: Optional[Dict[str, Any]] = None

    @staticmethod
    def _message(kind: str, message: str, severity: str, path: Optional[str], **kwargs):
        entry = {"type": kind, "message": message, "severity": severity, "path": path, **kwargs}
        # Remove None values
        return {k: v for k, v in entry.items() if v is not None}

    def add_error(
        self,
        error_type: str,
        message: str,
        path: str = None,
        severity: str = ValidationSeverity.ERROR.value,
        **kwargs,
    ) -> "ValidationResultBuilder":
        self.errors.append(self._message(error_type, message, severity, path, **kwargs))
        return self

    def add_warning(
        self, warning_type: str, message: str, path: str = None, **kwargs
    ) -> "ValidationResultBuilder":
        self.warnings.append(
            self._message(warning_type, message, ValidationSeverity.WARNING.value, path, **kwargs)
        )
        return self

    def add_info(
        self, info_type: str, message: str, path: str = None, **kwargs
    ) -> "ValidationResultBuilder":
        self.info.append(
            self._message(info_type, message, ValidationSeverity.INFO.value, path, **kwargs)
        )
        return self

    def extend(self, result: ValidationResult) -> "ValidationResultBuilder":
        self.errors.extend(result.errors)
        self.warnings.extend(result.warnings)
        self.info.extend(result.info)
        return self

    def set_metadata(self, metadata: Dict[str, Any]) -> "ValidationResultBuilder":
        self.metadata = metadata
        return self

    def build(self) -> ValidationResult:
        return ValidationResult(
            is_valid=len(self.errors) == 0,
            errors=self.errors,
            warnings=self.warnings,
            info=self.info,
            metadata=self.metadata,
        )


def create_success_result(info_message: str = None) -> ValidationResult:
    builder = ValidationResultBuilder()
    if info_message:
        builder.add_info("validation_success", info_message)
    return builder.build()


def create_error_result(error_type: str, message: str, path: str = None, **kwargs) -> ValidationResult:
    return ValidationResultBuilder().add_error(error_type, message, path, **kwargs).build()


def create_exception_result(exception: Exception, path: str = None, context: str = None) -> ValidationResult:
    """Create a CRITICAL validation result from an exception"""
    error_message = f"{context}: {exception}" if context else str(exception)
    return create_error_result(
        "validation_exception",
        error_message,
        path=path,
        exception=type(exception).__name__,
        severity=ValidationSeverity.CRITICAL.value,
    )
