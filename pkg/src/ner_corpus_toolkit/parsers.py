"""
Config file parsing

Two flat formats are accepted: ``key = value`` text (``#`` comments, blank lines
ignored, no nesting) and a YAML document whose root is a flat mapping. Parsing
only turns text into a raw dict; typing and range checks are done against
``schemas.pipeline.PIPELINE_CONFIG_SPEC``.
"""

import re
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from .exceptions import ConfigError
from .logging_adapter import get_logger

_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
YAML_EXTENSIONS = {".yaml", ".yml"}


class ConfigParser:
    """Reads pipeline config files into flat dictionaries"""

    def __init__(self, logger=None, silent: bool = False):
        self.logger_adapter = get_logger(logger, "ConfigParser", silent)

    def parse_file(self, file_path: Union[str, Path]) -> Dict[str, Any]:
        """Parse a config file, choosing the format by extension"""
        file_path = Path(file_path)

        if not file_path.exists():
            error_msg = f"config file not found: {file_path}"
            self.logger_adapter.error(error_msg)
            raise ConfigError(error_msg)

        self.logger_adapter.debug(f"Parsing config file: {file_path}")
        text = file_path.read_text(encoding="utf-8")

        if self.is_yaml_file(file_path):
            content = self.parse_yaml_string(text, source=str(file_path))
        else:
            content = self.parse_key_value_string(text, source=str(file_path))

        self.logger_adapter.info(f"Parsed {len(content)} config keys from {file_path}")
        return content

    def parse_key_value_string(self, text: str, source: str = "<string>") -> Dict[str, str]:
        """Parse ``key = value`` lines; values stay strings"""
        content: Dict[str, str] = {}
        for line_number, raw_line in enumerate(text.splitlines(), 1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{line_number}: expected 'key = value', got {raw_line!r}")

            key, value = (part.strip() for part in line.split("=", 1))
            if not _KEY_RE.match(key):
                raise ConfigError(f"{source}:{line_number}: invalid key {key!r}")
            if key in content:
                raise ConfigError(f"{source}:{line_number}: duplicate key {key!r}")
            # trailing comment
            if " #" in value:
                value = value.split(" #", 1)[0].rstrip()
            content[key] = value
        return content

    def parse_yaml_string(self, text: str, source: str = "<string>") -> Dict[str, Any]:
        """Parse a YAML document holding a flat mapping"""
        try:
            content = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(f"YAML parsing error in {source}: {e}") from e

        if content is None:
            self.logger_adapter.warning(f"config contains no data: {source}")
            return {}

        if not isinstance(content, dict):
            raise ConfigError(f"config must contain a mapping at root level: {source}")

        for key, value in content.items():
            if isinstance(value, dict):
                raise ConfigError(f"{source}: nested section {key!r} is not supported")

        return {str(k): v for k, v in content.items()}

    @staticmethod
    def is_yaml_file(file_path: Union[str, Path]) -> bool:
        return Path(file_path).suffix.lower() in YAML_EXTENSIONS
