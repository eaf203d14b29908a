"""
Centralized operation registry with parameter metadata

Every CLI subcommand is declared here once; the argparse tree in ``cli.py`` is built
from these specs, and ``ParameterSpec.validate`` range-checks the parsed values so
flag checking lives in one place instead of being repeated per command.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

SCHEME_CHOICES = ["BIO", "IO", "BIOES"]
REPAIR_CHOICES = ["STRICT", "CONLL", "DISCARD"]
TECHNIQUE_CHOICES = ["lwtr", "sr", "sis"]
MODEL_CHOICES = ["unigram", "perceptron"]


class ParameterType(Enum):
    """Parameter data types"""

    STRING = "string"
    INTEGER = "integer"
    FLOAT = "float"
    BOOLEAN = "boolean"
    LIST = "list"
    CHOICE = "choice"
    PATH = "path"


_TRUE_WORDS = {"true", "yes", "on", "1"}
_FALSE_WORDS = {"false", "no", "off", "0"}


def parse_csv(text: str) -> List[str]:
    """Split a comma separated flag value, dropping empty items"""
    return [item.strip() for item in str(text).split(",") if item.strip()]


@dataclass
class ParameterSpec:
    """Specification for one parameter of an operation or configuration file"""

    name: str
    param_type: ParameterType
    required: bool = False
    default: Any = None
    min_value: Optional[Union[int, float]] = None
    max_value: Optional[Union[int, float]] = None
    choices: Optional[List[Any]] = None
    description: str = ""
    validator: Optional[Callable] = None
    item_type: ParameterType = ParameterType.STRING
    short_flag: Optional[str] = None
    repeatable: bool = False

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")

    def coerce(self, value: Any) -> Any:
        """Convert a textual value (CLI or key = value file) to the declared type"""
        if self.repeatable and isinstance(value, (list, tuple)):
            return [self._coerce_scalar(v, self.param_type) for v in value]
        if value is None or not isinstance(value, str):
            if self.param_type == ParameterType.LIST and isinstance(value, (list, tuple)):
                return [self._coerce_scalar(v, self.item_type) for v in value]
            return value
        if self.param_type == ParameterType.LIST:
            return [self._coerce_scalar(v, self.item_type) for v in parse_csv(value)]
        return self._coerce_scalar(value, self.param_type)

    @staticmethod
    def _coerce_scalar(value: Any, param_type: ParameterType) -> Any:
        if not isinstance(value, str):
            return value
        text = value.strip()
        if param_type == ParameterType.INTEGER:
            return int(text)
        if param_type == ParameterType.FLOAT:
            return float(text)
        if param_type == ParameterType.BOOLEAN:
            lowered = text.lower()
            if lowered in _TRUE_WORDS:
                return True
            if lowered in _FALSE_WORDS:
                return False
            raise ValueError(f"not a boolean: {value!r}")
        return text

    def _type_error(self, expected: str, value: Any, path: str) -> Dict[str, Any]:
        return {
            "type": "invalid_parameter_type",
            "message": f"{self.name}: must be {expected}, got {type(value).__name__}",
            "path": path,
            "parameter": self.name,
            "expected_type": expected,
            "actual_type": type(value).__name__,
        }

    def validate(self, value: Any, path: str) -> List[Dict[str, Any]]:
        """Validate one value; returns a list of error dicts (empty when valid)"""
        errors = []

        if self.required and value is None:
            errors.append(
                {
                    "type": "missing_required_parameter",
                    "message": f"{self.name}: required parameter is missing",
                    "path": path,
                    "parameter": self.name,
                }
            )
            return errors

        if value is None:
            return errors

        if self.repeatable and isinstance(value, (list, tuple)):
            single = replace(self, repeatable=False, validator=None)
            for item in value:
                errors.extend(single.validate(item, path))
            if self.validator and not errors:
                errors.extend(self.validator(value, path, self.name) or [])
            return errors

        if self.param_type == ParameterType.INTEGER:
            if isinstance(value, bool) or not isinstance(value, int):
                return [self._type_error("integer", value, path)]
        elif self.param_type == ParameterType.FLOAT:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return [self._type_error("number", value, path)]
        elif self.param_type in (ParameterType.STRING, ParameterType.PATH, ParameterType.CHOICE):
            if not isinstance(value, str):
                return [self._type_error("string", value, path)]
        elif self.param_type == ParameterType.BOOLEAN:
            if not isinstance(value, bool):
                return [self._type_error("boolean", value, path)]
        elif self.param_type == ParameterType.LIST:
            if not isinstance(value, (list, tuple)):
                return [self._type_error("list", value, path)]
            if self.required and not value:
                errors.append(
                    {
                        "type": "empty_parameter_list",
                        "message": f"{self.name}: must not be empty",
                        "path": path,
                        "parameter": self.name,
                    }
                )

        values = list(value) if self.param_type == ParameterType.LIST else [value]

        for item in values:
            if isinstance(item, (int, float)) and not isinstance(item, bool):
                if self.min_value is not None and item < self.min_value:
                    errors.append(
                        {
                            "type": "parameter_below_minimum",
                            "message": f"{self.name}: must be >= {self.min_value}, got {item}",
                            "path": path,
                            "parameter": self.name,
                            "min_value": self.min_value,
                            "actual_value": item,
                        }
                    )
                if self.max_value is not None and item > self.max_value:
                    errors.append(
                        {
                            "type": "parameter_above_maximum",
                            "message": f"{self.name}: must be <= {self.max_value}, got {item}",
                            "path": path,
                            "parameter": self.name,
                            "max_value": self.max_value,
                            "actual_value": item,
                        }
                    )

            if self.choices and item not in self.choices:
                errors.append(
                    {
                        "type": "invalid_parameter_choice",
                        "message": f"{self.name}: must be one of {self.choices}, got {item}",
                        "path": path,
                        "parameter": self.name,
                        "valid_choices": self.choices,
                        "actual_value": item,
                    }
                )

        if self.validator and not errors:
            try:
                custom_errors = self.validator(value, path, self.name)
                if custom_errors:
                    errors.extend(custom_errors)
            except Exception as e:
                errors.append(
                    {
                        "type": "parameter_validation_error",
                        "message": f"{self.name}: validation error - {e}",
                        "path": path,
                        "parameter": self.name,
                        "exception": str(e),
                    }
                )

        return errors


@dataclass
class OperationSpec:
    """Specification for a toolkit operation (one CLI subcommand)"""

    name: str
    category: str
    description: str
    parameters: List[ParameterSpec]
    examples: List[str] = field(default_factory=list)

    def get_required_parameters(self) -> List[ParameterSpec]:
        return [p for p in self.parameters if p.required]

    def get_defaults(self) -> Dict[str, Any]:
        return {p.name: p.default for p in self.parameters}

    def validate_parameters(
        self, parameters: Dict[str, Any], path: str = "", allow_unknown: bool = False
    ) -> List[Dict[str, Any]]:
        """Validate all parameters for this operation"""
        errors = []

        known_param_names = {p.name for p in self.parameters}
        if not allow_unknown:
            for param_name in parameters.keys():
                if param_name not in known_param_names:
                    errors.append(
                        {
                            "type": "unknown_parameter",
                            "message": f'{self.name}: unknown parameter "{param_name}"',
                            "path": path or param_name,
                            "operation": self.name,
                            "parameter": param_name,
                            "valid_parameters": sorted(known_param_names),
                        }
                    )

        for param_spec in self.parameters:
            value = parameters.get(param_spec.name)
            errors.extend(param_spec.validate(value, path or param_spec.name))

        return errors


def _p(name: str, param_type: ParameterType, **kwargs) -> ParameterSpec:
    return ParameterSpec(name, param_type, **kwargs)


def _input(description: str = "Input CoNLL file", required: bool = True) -> ParameterSpec:
    return _p("input", ParameterType.PATH, required=required, short_flag="-i", description=description)


def _out(description: str = "Output file (default: standard output)", required: bool = False) -> ParameterSpec:
    return _p("out", ParameterType.PATH, required=required, short_flag="-o", description=description)


def _repair(default: Optional[str] = "CONLL") -> ParameterSpec:
    return _p(
        "repair",
        ParameterType.CHOICE,
        default=default,
        choices=REPAIR_CHOICES,
        description="Repair policy for ill-formed tag sequences",
    )


def _scheme(name: str = "scheme", description: str = "Tag scheme (default: inferred)") -> ParameterSpec:
    return _p(name, ParameterType.CHOICE, choices=SCHEME_CHOICES, description=description)


class OperationRegistry:
    """Registry of every toolkit operation with its parameters"""

    def __init__(self):
        self.operations: Dict[str, OperationSpec] = {}
        self.categories: Dict[str, List[str]] = {}
        self._initialize_operations()

    def _initialize_operations(self):
        self._add_corpus_operations()
        self._add_augment_operations()
        self._add_model_operations()
        self._add_brill_operations()
        self._add_evaluation_operations()
        self._add_pipeline_operations()

    def _add_corpus_operations(self):
        self.register_operation(
            OperationSpec(
                name="convert",
                category="corpus",
                description="Convert a corpus between BIO, IO and BIOES",
                parameters=[
                    _input(),
                    _out(),
                    _scheme("from", "Source scheme (default: inferred)"),
                    _p("to", ParameterType.CHOICE, required=True, choices=SCHEME_CHOICES,
                       description="Target scheme"),
                    _repair(),
                ],
                examples=["ner-toolkit convert -i train.bio --from BIO --to BIOES -o train.bioes"],
            )
        )
        self.register_operation(
            OperationSpec(
                name="validate",
                category="corpus",
                description="Check a corpus against the tag grammar of its scheme",
                parameters=[_input(), _scheme()],
            )
        )
        self.register_operation(
            OperationSpec(
                name="stats",
                category="corpus",
                description="Sentence, token and entity counts of a corpus",
                parameters=[_input(), _scheme(), _repair()],
            )
        )
        self.register_operation(
            OperationSpec(
                name="generate-demo",
                category="corpus",
                description="Write the bundled synthetic clinical corpus, lexicon and pipeline config",
                parameters=[
                    _out("Output directory", required=True),
                    _p("train_sentences", ParameterType.INTEGER, default=2000, min_value=1),
                    _p("test_sentences", ParameterType.INTEGER, default=500, min_value=1),
                    _p("raw_sentences", ParameterType.INTEGER, default=1000, min_value=1),
                ],
            )
        )

    def _add_augment_operations(self):
        self.register_operation(
            OperationSpec(
                name="augment",
                category="augment",
                description="Augment a corpus with token replacement, synonyms and segment shuffling",
                parameters=[
                    _input(),
                    _out(),
                    _p("techniques", ParameterType.LIST, default=["lwtr", "sr", "sis"],
                       choices=TECHNIQUE_CHOICES, required=True,
                       description="Comma separated subset of lwtr,sr,sis"),
                    _p("p", ParameterType.FLOAT, default=0.3, min_value=0.0, max_value=1.0,
                       description="Per-token / per-segment replacement probability"),
                    _p("copies", ParameterType.INTEGER, default=1, min_value=1,
                       description="Augmented copies per technique"),
                    _p("lexicon", ParameterType.PATH, description="Synonym lexicon file (headword<TAB>phrase)"),
                    _p("dist", ParameterType.PATH,
                       description="Corpus to build the label-wise token distribution from (default: input)"),
                ],
                examples=["ner-toolkit augment -i train.conll --techniques lwtr,sis --p 0.3 --seed 7"],
            )
        )

    def _add_model_operations(self):
        self.register_operation(
            OperationSpec(
                name="train",
                category="model",
                description="Train a baseline tagger",
                parameters=[
                    _input(),
                    _out("Model file", required=True),
                    _p("model", ParameterType.CHOICE, default="perceptron", choices=MODEL_CHOICES),
                    _p("epochs", ParameterType.INTEGER, default=5, min_value=1),
                    _scheme(),
                ],
            )
        )
        self.register_operation(
            OperationSpec(
                name="tag",
                category="model",
                description="Tag tokens (first column of the input) with a trained model",
                parameters=[
                    _input("Raw or CoNLL file; only the first column is read"),
                    _out(),
                    _p("model", ParameterType.PATH, required=True, description="Model file"),
                    _repair(default=None),
                ],
            )
        )
        self.register_operation(
            OperationSpec(
                name="consensus",
                category="semisup",
                description="Build a silver corpus from the span-level intersection of predictions",
                parameters=[
                    _p("pred", ParameterType.PATH, required=True, repeatable=True,
                       description="Prediction file (repeat for every model, at least two)"),
                    _p("raw", ParameterType.PATH, description="Raw token file the predictions were made on"),
                    _out(),
                    _p("keep_all_o", ParameterType.BOOLEAN, default=False,
                       description="Keep sentences without consensus entities"),
                    _scheme("scheme", "Working scheme of the output (default: inferred from predictions)"),
                    _repair(),
                ],
            )
        )

    def _add_brill_operations(self):
        self.register_operation(
            OperationSpec(
                name="brill-learn",
                category="brill",
                description="Learn transformation rules correcting an initial tagging",
                parameters=[
                    _input("Initial tagger output (CoNLL)"),
                    _p("gold", ParameterType.PATH, required=True, description="Gold corpus"),
                    _out("Rule file (default: standard output)"),
                    _p("min_acc", ParameterType.FLOAT, default=0.99, min_value=0.0, max_value=1.0),
                    _p("min_score", ParameterType.INTEGER, default=5, min_value=1),
                    _p("max_rules", ParameterType.INTEGER, default=250, min_value=1),
                    _p("templates", ParameterType.CHOICE, default="default", choices=["default"]),
                    _p("summary", ParameterType.BOOLEAN, default=False,
                       description="Print learned rules grouped by target label"),
                ],
            )
        )
        self.register_operation(
            OperationSpec(
                name="brill-apply",
                category="brill",
                description="Apply a rule file to a tagged corpus",
                parameters=[
                    _input(),
                    _out(),
                    _p("rules", ParameterType.PATH, required=True, description="Rule file"),
                    _repair(default=None),
                ],
            )
        )
        self.register_operation(
            OperationSpec(
                name="brill-tune",
                category="brill",
                description="Choose min_score by learning on one half and scoring the other",
                parameters=[
                    _input("Initial tagger output over the gold corpus"),
                    _p("gold", ParameterType.PATH, required=True, description="Gold corpus"),
                    _out("Rule file for the chosen min_score"),
                    _p("scores", ParameterType.LIST, default=[2, 3, 4, 5], item_type=ParameterType.INTEGER,
                       required=True, min_value=1),
                    _p("min_acc", ParameterType.FLOAT, default=0.99, min_value=0.0, max_value=1.0),
                    _p("max_rules", ParameterType.INTEGER, default=250, min_value=1),
                    _repair(),
                ],
            )
        )

    def _add_evaluation_operations(self):
        self.register_operation(
            OperationSpec(
                name="score",
                category="eval",
                description="Entity-level precision, recall and F1 (scored in BIO)",
                parameters=[
                    _input("Predicted corpus"),
                    _p("gold", ParameterType.PATH, required=True, description="Gold corpus"),
                    _out(),
                    _repair(),
                ],
            )
        )
        self.register_operation(
            OperationSpec(
                name="diff",
                category="eval",
                description="Compare correct-phrase counts of two systems per label",
                parameters=[
                    _p("gold", ParameterType.PATH, required=True),
                    _p("pred_a", ParameterType.PATH, required=True),
                    _p("pred_b", ParameterType.PATH, required=True),
                    _out(),
                    _repair(),
                ],
            )
        )
        self.register_operation(
            OperationSpec(
                name="compare-schemes",
                category="eval",
                description="Train under BIO, IO and BIOES and score each in BIO",
                parameters=[
                    _p("train", ParameterType.PATH, required=True),
                    _p("test", ParameterType.PATH, required=True),
                    _out(),
                    _p("model", ParameterType.CHOICE, default="perceptron", choices=MODEL_CHOICES),
                    _p("epochs", ParameterType.INTEGER, default=5, min_value=1),
                    _repair(),
                ],
            )
        )

    def _add_pipeline_operations(self):
        self.register_operation(
            OperationSpec(
                name="pipeline",
                category="pipeline",
                description="Run the M0..M4 experiment ladder from a config file",
                parameters=[
                    _p("config", ParameterType.PATH, required=True, short_flag="-c"),
                    _p("dry_run", ParameterType.BOOLEAN, default=False,
                       description="Print planned stages and exit"),
                    _out("Output directory (overrides the config's out key)"),
                ],
            )
        )

    def register_operation(self, operation_spec: OperationSpec):
        self.operations[operation_spec.name] = operation_spec
        self.categories.setdefault(operation_spec.category, []).append(operation_spec.name)

    @lru_cache(maxsize=128)
    def get_operation_cached(self, name: str) -> Optional[OperationSpec]:
        return self.operations.get(name)

    def get_operation(self, name: str) -> Optional[OperationSpec]:
        return self.get_operation_cached(name)

    def validate_operation(self, operation_name: str, parameters: Dict[str, Any], path: str = "") -> List[Dict[str, Any]]:
        """Validate an operation and its parameters"""
        operation_spec = self.get_operation(operation_name)
        if not operation_spec:
            return [
                {
                    "type": "invalid_operation_type",
                    "message": f'Invalid operation "{operation_name}"',
                    "path": path,
                    "invalid_value": operation_name,
                    "valid_values": list(self.operations.keys()),
                    "suggestion": self._suggestion_text(operation_name),
                }
            ]

        errors = operation_spec.validate_parameters(parameters, path)

        # consensus needs two sources for an intersection to mean anything
        if operation_name == "consensus":
            preds = parameters.get("pred") or []
            if isinstance(preds, (list, tuple)) and 0 < len(preds) < 2:
                errors.append(
                    {
                        "type": "too_few_prediction_sources",
                        "message": f"consensus: needs at least 2 --pred files, got {len(preds)}",
                        "path": path or "pred",
                        "operation": operation_name,
                    }
                )

        return errors

    def _suggestion_text(self, name: str) -> Optional[str]:
        suggestions = self.get_operation_suggestions(name)
        return f"Did you mean: {', '.join(suggestions)}?" if suggestions else None

    def get_all_operation_names(self) -> List[str]:
        return list(self.operations.keys())

    def get_operation_suggestions(self, partial_name: str, max_suggestions: int = 5) -> List[str]:
        """Operation names matching a partial name: prefix matches first, then substrings"""
        if not partial_name:
            return []

        partial_lower = partial_name.lower()
        suggestions = [op for op in self.operations if op.lower().startswith(partial_lower)]

        if len(suggestions) < max_suggestions:
            for op_name in self.operations:
                if partial_lower in op_name.lower() and op_name not in suggestions:
                    suggestions.append(op_name)
                    if len(suggestions) >= max_suggestions:
                        break

        return suggestions[:max_suggestions]

    def get_operation_help(self, operation_name: str) -> Optional[Dict[str, Any]]:
        operation_spec = self.get_operation(operation_name)
        if not operation_spec:
            return None

        return {
            "name": operation_spec.name,
            "category": operation_spec.category,
            "description": operation_spec.description,
            "parameters": [
                {
                    "name": param.name,
                    "flag": param.flag,
                    "type": param.param_type.value,
                    "required": param.required,
                    "default": param.default,
                    "description": param.description,
                    "min_value": param.min_value,
                    "max_value": param.max_value,
                    "choices": param.choices,
                }
                for param in operation_spec.parameters
            ],
            "examples": operation_spec.examples,
        }

    @lru_cache(maxsize=64)
    def get_operations_by_category_cached(self, category: str) -> Tuple[str, ...]:
        return tuple(self.categories.get(category, []))

    def get_operations_by_category(self, category: str) -> List[str]:
        return list(self.get_operations_by_category_cached(category))

    def get_all_categories(self) -> List[str]:
        return list(self.categories.keys())


# Global registry instance
OPERATION_REGISTRY = OperationRegistry()
