"""
Tests for the logging adapters, component logging and validation helpers
"""

import logging

import pytest

from ner_corpus_toolkit import configure_for_testing
from ner_corpus_toolkit.config import (
    LoggingContext,
    configure_for_production,
    get_library_logger,
    get_logging_config,
)
from ner_corpus_toolkit.core import LocationContext, StageMetrics, SummaryGenerator
from ner_corpus_toolkit.factory import quick_validate, validate_corpus_bytes, validate_corpus_file
from ner_corpus_toolkit.logging_adapter import (
    ConsoleLoggerAdapter,
    ExternalLoggerAdapter,
    LoggerFactory,
    SilentLoggerAdapter,
    StandardLoggerAdapter,
)
from ner_corpus_toolkit.taggers import PerceptronTrainer


@pytest.fixture
def logging_enabled():
    with LoggingContext(silent=False, level="WARNING"):
        yield


class TestLoggerFactory:
    """Adapter selection"""

    @pytest.mark.unit
    def test_silent_mode_wins(self, mock_logger):
        assert isinstance(LoggerFactory.create_logger(mock_logger), SilentLoggerAdapter)

    @pytest.mark.unit
    def test_adapter_per_logger_kind(self, logging_enabled, mock_logger):
        assert isinstance(LoggerFactory.create_logger(mock_logger), ExternalLoggerAdapter)
        assert isinstance(LoggerFactory.create_logger(logging.getLogger("x")), StandardLoggerAdapter)
        assert isinstance(LoggerFactory.create_logger(), ConsoleLoggerAdapter)
        assert isinstance(LoggerFactory.create_logger(mock_logger, silent=True), SilentLoggerAdapter)

    @pytest.mark.unit
    def test_forced_console(self, mock_logger):
        with LoggingContext(silent=False, force_console=True, debug=True):
            adapter = LoggerFactory.create_logger(mock_logger)
            assert isinstance(adapter, ConsoleLoggerAdapter)
            assert adapter.level == "DEBUG"

    @pytest.mark.unit
    def test_context_restores_configuration(self):
        before = get_logging_config()
        with LoggingContext(silent=False, level="INFO"):
            assert get_logging_config()["standalone_level"] == "INFO"
        assert get_logging_config() == before

    @pytest.mark.unit
    def test_presets(self):
        try:
            configure_for_production()
            assert get_logging_config()["standalone_level"] == "ERROR"
        finally:
            configure_for_testing()
        assert get_logging_config()["silent_mode"] is True

    @pytest.mark.unit
    def test_console_respects_level(self, capsys):
        adapter = ConsoleLoggerAdapter("WARNING")
        adapter.info("hidden")
        adapter.warning("shown")
        err = capsys.readouterr().err
        assert "shown" in err and "hidden" not in err
        assert "[ner-toolkit]" in err

    @pytest.mark.unit
    def test_external_logger_with_warn_only(self):
        class LegacyLogger:
            def __init__(self):
                self.seen = []

            def info(self, msg):
                self.seen.append(msg)

            def warn(self, msg):
                self.seen.append(f"warn:{msg}")

        legacy = LegacyLogger()
        ExternalLoggerAdapter(legacy).warning("careful")
        assert legacy.seen == ["warn:careful"]

    @pytest.mark.unit
    def test_library_logger(self, logging_enabled, capsys):
        get_library_logger("experiment").warning("from a script")
        assert "from a script" in capsys.readouterr().err


class TestComponentLogging:
    """Components report through whatever logger they are given"""

    @pytest.mark.unit
    def test_trainer_logs_stage_start_and_end(self, logging_enabled, mock_logger, synthetic_train):
        PerceptronTrainer(epochs=2, seed=1, logger=mock_logger).train(synthetic_train)
        messages = [m for _, m in mock_logger.get_messages()]
        assert messages[0] == "[PerceptronTrainer] Starting train"
        assert messages[-1].startswith("[PerceptronTrainer] train completed in")
        assert sum("epoch" in m for m in messages) == 2

    @pytest.mark.unit
    def test_silent_component(self, mock_logger, synthetic_train):
        trainer = PerceptronTrainer(epochs=1, logger=mock_logger)
        trainer.train(synthetic_train)
        assert mock_logger.get_messages() == []
        info = trainer.get_logger_info()
        assert info["logger_type"] == "SilentLoggerAdapter"
        assert info["has_external_logger"] is True

    @pytest.mark.unit
    def test_failures_are_logged_and_raised(self, logging_enabled, mock_logger):
        from ner_corpus_toolkit import Corpus, TrainingError

        with pytest.raises(TrainingError):
            PerceptronTrainer(epochs=1, logger=mock_logger).train(Corpus())
        assert mock_logger.get_messages()[-1][0] == "ERROR"


class TestCoreHelpers:
    """Location paths, stage timing and summaries"""

    @pytest.mark.unit
    def test_location_paths(self):
        assert LocationContext(2, 5).get_path() == "sentences[2].tokens[5]"
        assert LocationContext(0, source="dev.conll").at(1).get_path() == "dev.conll.sentences[0].tokens[1]"
        assert LocationContext().get_path() == ""

    @pytest.mark.unit
    def test_stage_metrics(self):
        metrics = StageMetrics("M0")
        assert metrics.get_duration() == 0.0
        metrics.start()
        metrics.stop()
        assert metrics.to_dict()["name"] == "M0"
        assert metrics.get_duration() >= 0.0

    @pytest.mark.unit
    def test_detailed_summary(self):
        result = validate_corpus_bytes(b"a\tB-x\nb\tI-x\n", "IO", "bad.conll")
        summary = SummaryGenerator.generate_detailed_summary(result)
        assert "INVALID" in summary
        assert "ERROR BREAKDOWN" in summary


class TestValidationHelpers:
    """Corpus validation entry points"""

    @pytest.mark.unit
    def test_valid_bytes(self, bio_text):
        result = validate_corpus_bytes(bio_text.encode("utf-8"), "BIO")
        assert result.is_valid
        assert result.metadata["sentences"] == 2

    @pytest.mark.unit
    def test_parse_failure_is_critical(self):
        result = validate_corpus_bytes(b"lonely\n")
        assert not result.is_valid
        assert result.errors[0]["severity"] == "critical"
        assert result.errors[0]["exception"] == "ConllParseError"

    @pytest.mark.unit
    def test_file_helpers(self, tmp_path, bio_text):
        good = tmp_path / "good.conll"
        good.write_text(bio_text, encoding="utf-8")
        assert validate_corpus_file(good).is_valid
        assert quick_validate(good)
        assert quick_validate(good.read_bytes(), "BIO")
        assert not quick_validate(tmp_path / "missing.conll")
        assert not validate_corpus_file(tmp_path / "missing.conll").is_valid
