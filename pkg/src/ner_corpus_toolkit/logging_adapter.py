"""
Logging Adapter for the NER Corpus Toolkit

Provides flexible logging that works with:
- Standard Python logging
- Host-application loggers (anything exposing info/warning/error/debug)
- Standalone console logging
- Silent mode for batch runs and tests
"""

import datetime
import logging
import sys
from abc import ABC, abstractmethod
from typing import Any, Optional


class LoggerAdapter(ABC):
    """Abstract logger adapter for different logging backends"""

    @abstractmethod
    def info(self, message: str, *args, **kwargs):
        pass

    @abstractmethod
    def warning(self, message: str, *args, **kwargs):
        pass

    @abstractmethod
    def error(self, message: str, *args, **kwargs):
        pass

    @abstractmethod
    def debug(self, message: str, *args, **kwargs):
        pass


class StandardLoggerAdapter(LoggerAdapter):
    """Adapter for standard Python logging"""

    def __init__(self, logger: logging.Logger):
        self.logger = logger

    def info(self, message: str, *args, **kwargs):
        self.logger.info(message, *args, **kwargs)

    def warning(self, message: str, *args, **kwargs):
        self.logger.warning(message, *args, **kwargs)

    def error(self, message: str, *args, **kwargs):
        self.logger.error(message, *args, **kwargs)

    def debug(self, message: str, *args, **kwargs):
        self.logger.debug(message, *args, **kwargs)


class ExternalLoggerAdapter(LoggerAdapter):
    """Adapter for duck-typed host loggers (notebook loggers, experiment runners)"""

    def __init__(self, external_logger):
        self.logger = external_logger

    def _emit(self, method: str, message: str):
        if hasattr(self.logger, method):
            getattr(self.logger, method)(message)
        elif method == "warning" and hasattr(self.logger, "warn"):
            self.logger.warn(message)
        elif hasattr(self.logger, "getLogger"):
            getattr(self.logger.getLogger(), method)(message)

    def info(self, message: str, *args, **kwargs):
        self._emit("info", message)

    def warning(self, message: str, *args, **kwargs):
        self._emit("warning", message)

    def error(self, message: str, *args, **kwargs):
        self._emit("error", message)

    def debug(self, message: str, *args, **kwargs):
        self._emit("debug", message)


class SilentLoggerAdapter(LoggerAdapter):
    """Silent logger for batch use without logging overhead"""

    def info(self, message: str, *args, **kwargs):
        pass

    def warning(self, message: str, *args, **kwargs):
        pass

    def error(self, message: str, *args, **kwargs):
        pass

    def debug(self, message: str, *args, **kwargs):
        pass


class ConsoleLoggerAdapter(LoggerAdapter):
    """Simple stderr logger for standalone usage"""

    LEVELS = {"DEBUG": 0, "INFO": 1, "WARNING": 2, "ERROR": 3}
    PREFIXES = {"INFO": "ℹ️ ", "WARNING": "⚠️ ", "ERROR": "❌", "DEBUG": "🔍"}

    def __init__(self, level: str = "WARNING", component: str = ""):
        self.level = level.upper()
        self.min_level = self.LEVELS.get(self.level, 2)
        self.component = component

    def _log(self, level: str, message: str):
        if self.LEVELS.get(level, 1) >= self.min_level:
            timestamp = datetime.datetime.now().strftime("%H:%M:%S")
            print(
                f"{self.PREFIXES.get(level, '•')} [{timestamp}] [ner-toolkit] {message}",
                file=sys.stderr,
            )

    def info(self, message: str, *args, **kwargs):
        self._log("INFO", message)

    def warning(self, message: str, *args, **kwargs):
        self._log("WARNING", message)

    def error(self, message: str, *args, **kwargs):
        self._log("ERROR", message)

    def debug(self, message: str, *args, **kwargs):
        self._log("DEBUG", message)


_DEFAULTS = {
    "standalone_level": "WARNING",
    "silent_mode": False,
    "force_console": False,
    "debug_mode": False,
}


class LoggerFactory:
    """Factory to create appropriate logger adapters based on context"""

    _default_config = dict(_DEFAULTS)

    @classmethod
    def configure(cls, **config):
        """
        Configure default logging behavior for the toolkit

        Args:
            standalone_level: Level for console logging ("DEBUG", "INFO", "WARNING", "ERROR")
            silent_mode: Disable all logging completely
            force_console: Use console logging even when an external logger is passed
            debug_mode: Enable debug logging
        """
        cls._default_config.update(config)

    @classmethod
    def _console_level(cls) -> str:
        if cls._default_config["debug_mode"]:
            return "DEBUG"
        return cls._default_config["standalone_level"]

    @classmethod
    def create_logger(
        cls, logger: Optional[Any] = None, component: str = "", silent: bool = False
    ) -> LoggerAdapter:
        """
        Create appropriate logger adapter based on context

        Priority:
            1. Silent mode (if requested or configured)
            2. Forced console (debugging)
            3. External logger
            4. Default standalone console logger
        """
        if silent or cls._default_config["silent_mode"]:
            return SilentLoggerAdapter()

        if cls._default_config["force_console"]:
            return ConsoleLoggerAdapter(cls._console_level(), component)

        if logger is not None:
            return cls._adapt_external_logger(logger, component)

        return ConsoleLoggerAdapter(cls._console_level(), component)

    @classmethod
    def _adapt_external_logger(cls, logger: Any, component: str) -> LoggerAdapter:
        # Standard Python logger (has handlers attribute)
        if isinstance(logger, logging.Logger):
            return StandardLoggerAdapter(logger)
        if hasattr(logger, "info") or hasattr(logger, "getLogger"):
            return ExternalLoggerAdapter(logger)
        return ConsoleLoggerAdapter(cls._console_level(), component)

    @classmethod
    def reset_config(cls):
        """Reset logging configuration to defaults"""
        cls._default_config = dict(_DEFAULTS)

    @classmethod
    def get_config(cls) -> dict:
        """Get current logging configuration"""
        return cls._default_config.copy()


def get_logger(
    logger: Optional[Any] = None, component: str = "ner-toolkit", silent: bool = False
) -> LoggerAdapter:
    """Convenience function to get a logger adapter"""
    return LoggerFactory.create_logger(logger, component, silent)
