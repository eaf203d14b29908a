"""
Configuration module for the NER Corpus Toolkit

Provides easy configuration of toolkit-wide settings, especially logging behavior.
Pipeline run settings live in ``schemas.pipeline`` and ``pipeline.PipelineConfig``.
"""

from .logging_adapter import LoggerFactory, get_logger


def configure_logging(
    level: str = "WARNING", silent: bool = False, force_console: bool = False, debug: bool = False
):
    """
    Configure toolkit-wide logging behavior

    Args:
        level: Logging level for standalone usage ("DEBUG", "INFO", "WARNING", "ERROR")
        silent: Disable all logging completely
        force_console: Force console logging even when an external logger is provided
        debug: Enable debug logging (overrides level to DEBUG)

    Examples:
        # Show pipeline stage progress
        configure_logging(level="INFO")

        # Completely silent (no logging overhead)
        configure_logging(silent=True)
    """
    LoggerFactory.configure(
        standalone_level=level.upper(),
        silent_mode=silent,
        force_console=force_console,
        debug_mode=debug,
    )


def get_library_logger(component: str = "ner-toolkit"):
    """
    Get a toolkit logger for direct use outside of components

    Example:
        logger = get_library_logger("my-experiment")
        logger.info("Custom logging message")
    """
    return get_logger(component=component)


def reset_logging_config():
    """Reset logging configuration to toolkit defaults"""
    LoggerFactory.reset_config()


def get_logging_config() -> dict:
    """Get current logging configuration"""
    return LoggerFactory.get_config()


def configure_for_production():
    """Errors only, minimal overhead"""
    configure_logging(level="ERROR", silent=False)


def configure_for_development():
    """Debug mode, verbose output"""
    configure_logging(debug=True, force_console=True)


def configure_for_testing():
    """Silent mode to keep test output clean"""
    configure_logging(silent=True)


def configure_for_standalone():
    """Warnings and errors only"""
    configure_logging(level="WARNING")


class LoggingContext:
    """Context manager for temporary logging configuration"""

    def __init__(self, **config):
        self.config = config
        self.original_config = None

    def __enter__(self):
        self.original_config = get_logging_config()
        configure_logging(**self.config)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        LoggerFactory.configure(**self.original_config)
