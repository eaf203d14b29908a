"""
Pipeline configuration schema

Declares every key of a pipeline config file as a ParameterSpec, so config files are
validated by the same machinery as CLI flags.
"""

from typing import Any, Dict, List

from .operations import (
    MODEL_CHOICES,
    REPAIR_CHOICES,
    SCHEME_CHOICES,
    TECHNIQUE_CHOICES,
    OperationSpec,
    ParameterSpec,
    ParameterType,
)

CONSENSUS_SOURCE_CHOICES = ["families", "stages"]

PATH_KEYS = ("train", "test", "raw", "lexicon", "out")


def _distinct_items(value: Any, path: str, name: str) -> List[Dict[str, Any]]:
    if len(set(value)) != len(value):
        return [
            {
                "type": "duplicate_list_item",
                "message": f"{name}: items must be distinct, got {value}",
                "path": path,
                "parameter": name,
            }
        ]
    return []


PIPELINE_CONFIG_SPEC = OperationSpec(
    name="pipeline-config",
    category="pipeline",
    description="Keys accepted in a pipeline config file",
    parameters=[
        ParameterSpec("train", ParameterType.PATH, required=True, description="Gold training corpus"),
        ParameterSpec("test", ParameterType.PATH, required=True, description="Gold test corpus"),
        ParameterSpec("raw", ParameterType.PATH, required=True, description="Unlabeled token pool"),
        ParameterSpec("lexicon", ParameterType.PATH, description="Synonym lexicon (optional)"),
        ParameterSpec("scheme", ParameterType.CHOICE, default="BIOES", choices=SCHEME_CHOICES,
                      description="Working scheme for stages M1..M4"),
        ParameterSpec("original_scheme", ParameterType.CHOICE, choices=SCHEME_CHOICES,
                      description="Scheme of the training file (default: inferred)"),
        ParameterSpec("model", ParameterType.CHOICE, default="perceptron", choices=MODEL_CHOICES),
        ParameterSpec("epochs", ParameterType.INTEGER, default=5, min_value=1),
        ParameterSpec("augment_techniques", ParameterType.LIST, default=["lwtr", "sr", "sis"],
                      choices=TECHNIQUE_CHOICES, required=True, validator=_distinct_items),
        ParameterSpec("augment_p", ParameterType.FLOAT, default=0.3, min_value=0.0, max_value=1.0),
        ParameterSpec("augment_copies", ParameterType.INTEGER, default=1, min_value=1),
        ParameterSpec("consensus_sources", ParameterType.CHOICE, default="families",
                      choices=CONSENSUS_SOURCE_CHOICES),
        ParameterSpec("keep_all_o", ParameterType.BOOLEAN, default=False),
        ParameterSpec("repair", ParameterType.CHOICE, default="CONLL", choices=REPAIR_CHOICES),
        ParameterSpec("brill_min_acc", ParameterType.FLOAT, default=0.99, min_value=0.0, max_value=1.0),
        ParameterSpec("brill_scores", ParameterType.LIST, default=[2, 3, 4, 5],
                      item_type=ParameterType.INTEGER, min_value=1, required=True,
                      validator=_distinct_items),
        ParameterSpec("brill_max_rules", ParameterType.INTEGER, default=250, min_value=1),
        ParameterSpec("compare_schemes", ParameterType.BOOLEAN, default=False),
        ParameterSpec("seed", ParameterType.INTEGER, default=12, min_value=0),
        ParameterSpec("out", ParameterType.PATH, default="pipeline_out", description="Output directory"),
    ],
)
