"""Parameter schemas for CLI operations and pipeline config files"""

from .operations import (
    OPERATION_REGISTRY,
    OperationRegistry,
    OperationSpec,
    ParameterSpec,
    ParameterType,
    parse_csv,
)
from .pipeline import PIPELINE_CONFIG_SPEC

__all__ = [
    "OPERATION_REGISTRY",
    "OperationRegistry",
    "OperationSpec",
    "ParameterSpec",
    "ParameterType",
    "PIPELINE_CONFIG_SPEC",
    "parse_csv",
]
