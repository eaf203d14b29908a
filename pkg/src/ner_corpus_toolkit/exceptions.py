"""
Exception hierarchy for the NER Corpus Toolkit

Input problems derive from ``ValueError`` so callers that only catch ``ValueError``
keep working; the CLI maps every ``NerToolkitError`` to exit code 1.
"""

from typing import Any, Dict, List, Optional


class NerToolkitError(Exception):
    """Base class for all toolkit errors"""


class ConllParseError(NerToolkitError, ValueError):
    """A CoNLL line could not be parsed"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class CorpusValidationError(NerToolkitError, ValueError):
    """A corpus violates tag-grammar invariants"""

    def __init__(self, violations: List[Dict[str, Any]]):
        self.violations = violations
        shown = "; ".join(v["message"] for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"{len(violations)} corpus violation(s): {shown}{more}")


class IllFormedSequenceError(NerToolkitError, ValueError):
    """A tag sequence is ill-formed under the STRICT repair policy"""

    def __init__(self, index: int, tag: str, reason: str = "ill-formed tag"):
        super().__init__(f"{reason} at index {index}: {tag!r}")
        self.index = index
        self.tag = tag
        self.reason = reason


class SpanError(NerToolkitError, ValueError):
    """Entity spans are out of range, unsorted or overlapping"""


class AlignmentError(NerToolkitError, ValueError):
    """Two corpora (or prediction sources) are not token-aligned"""

    def __init__(self, message: str, sentence_index: Optional[int] = None):
        if sentence_index is not None:
            message = f"sentence {sentence_index}: {message}"
        super().__init__(message)
        self.sentence_index = sentence_index


class AugmentationError(NerToolkitError, ValueError):
    """An augmentation precondition does not hold"""


class LexiconParseError(NerToolkitError, ValueError):
    """A synonym lexicon line is malformed"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class TrainingError(NerToolkitError, ValueError):
    """A tagger cannot be trained with the given inputs"""


class ModelLoadError(NerToolkitError, ValueError):
    """A model file is corrupt, truncated or of an unsupported version"""


class RuleParseError(NerToolkitError, ValueError):
    """A Brill rule line is malformed"""

    def __init__(self, message: str, line_number: int = 0):
        prefix = f"line {line_number}: " if line_number else ""
        super().__init__(f"{prefix}{message}")
        self.line_number = line_number


class ConfigError(NerToolkitError, ValueError):
    """Pipeline or command configuration is invalid"""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class PipelineStageError(NerToolkitError):
    """A pipeline stage failed; partial outputs are kept on disk"""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage} failed: {cause}")
        self.stage = stage
        self.cause = cause
