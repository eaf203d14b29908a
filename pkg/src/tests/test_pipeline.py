"""
Tests for pipeline config validation and the M0..M4 run
"""

import time
from pathlib import Path

import pytest

from ner_corpus_toolkit import ConfigError, PipelineStageError, Scheme
from ner_corpus_toolkit.corpus import load_conll
from ner_corpus_toolkit.parsers import ConfigParser
from ner_corpus_toolkit.pipeline import (
    PipelineRunner,
    build_pipeline_config,
    load_pipeline_config,
    run_pipeline,
    validate_pipeline_mapping,
)
from ner_corpus_toolkit.schemes import RepairPolicy
from ner_corpus_toolkit.synthetic import generate_demo

FAST_CONFIG = (
    "train = train.conll\n"
    "test = test.conll\n"
    "raw = raw.txt\n"
    "lexicon = lexicon.tsv\n"
    "scheme = BIOES\n"
    "epochs = 2\n"
    "augment_techniques = lwtr,sr,sis\n"
    "brill_scores = 2,3\n"
    "brill_max_rules = 40\n"
    "seed = 12\n"
)


@pytest.fixture(scope="module")
def demo_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("demo")
    generate_demo(out, train_sentences=150, test_sentences=60, raw_sentences=80, seed=12)
    (out / "fast.conf").write_text(FAST_CONFIG, encoding="utf-8")
    return out


@pytest.fixture(scope="module")
def pipeline_run(demo_dir):
    cfg = load_pipeline_config(demo_dir / "fast.conf", out=demo_dir / "run")
    report = run_pipeline(cfg, silent=True)
    return cfg, report


class TestPipelineConfig:
    """Config file parsing and validation"""

    @pytest.mark.unit
    def test_key_value_parsing(self):
        parsed = ConfigParser(silent=True).parse_key_value_string("# c\n\nseed = 7  # note\nscheme=BIO\n")
        assert parsed == {"seed": "7", "scheme": "BIO"}

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["seed 7\n", "seed = 1\nseed = 2\n", "1seed = 3\n"])
    def test_key_value_errors(self, text):
        with pytest.raises(ConfigError, match="<string>:"):
            ConfigParser(silent=True).parse_key_value_string(text)

    @pytest.mark.unit
    def test_defaults_and_coercion(self, tmp_path):
        values, result = validate_pipeline_mapping(
            {"train": "a", "test": "b", "raw": "c", "epochs": "3", "keep_all_o": "yes"},
            tmp_path,
            check_files=False,
        )
        assert result.is_valid
        cfg = build_pipeline_config(values)
        assert (cfg.epochs, cfg.keep_all_o, cfg.scheme) == (3, True, Scheme.BIOES)
        assert cfg.brill_scores == (2, 3, 4, 5)
        assert cfg.train == tmp_path / "a"

    @pytest.mark.unit
    def test_unknown_key_is_a_warning(self, tmp_path):
        _, result = validate_pipeline_mapping(
            {"train": "a", "test": "b", "raw": "c", "epoch": "3"}, tmp_path, check_files=False
        )
        assert result.is_valid
        assert result.warnings[0]["type"] == "unknown_config_key"
        assert "epochs" in result.warnings[0]["suggestion"]

    @pytest.mark.unit
    def test_bad_values_are_errors(self, tmp_path):
        _, result = validate_pipeline_mapping(
            {"train": "a", "test": "b", "raw": "c", "epochs": "many", "augment_p": "1.5",
             "brill_scores": "2,2", "augment_techniques": "lwtr,eda"},
            tmp_path,
            check_files=False,
        )
        assert not result.is_valid
        assert {e["parameter"] for e in result.errors} == {
            "epochs", "augment_p", "brill_scores", "augment_techniques"
        }

    @pytest.mark.unit
    def test_missing_required_key(self, tmp_path):
        _, result = validate_pipeline_mapping({"train": "a", "test": "b"}, tmp_path, check_files=False)
        assert [e["parameter"] for e in result.errors] == ["raw"]

    @pytest.mark.unit
    def test_missing_file_raises(self, tmp_path):
        path = tmp_path / "p.conf"
        path.write_text("train = nowhere.conll\ntest = t.conll\nraw = r.txt\n", encoding="utf-8")
        with pytest.raises(ConfigError) as exc_info:
            load_pipeline_config(path)
        assert not exc_info.value.result.is_valid
        assert "nowhere.conll" in str(exc_info.value)

    @pytest.mark.unit
    def test_yaml_config(self, tmp_path):
        path = tmp_path / "p.yaml"
        path.write_text("train: a\ntest: b\nraw: c\nbrill_scores: [3, 4]\nrepair: STRICT\n", encoding="utf-8")
        cfg = load_pipeline_config(path, check_files=False)
        assert cfg.brill_scores == (3, 4)
        assert cfg.output_policy is RepairPolicy.CONLL

    @pytest.mark.unit
    def test_nested_yaml_rejected(self, tmp_path):
        path = tmp_path / "p.yaml"
        path.write_text("train: a\nbrill:\n  scores: [2]\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="nested"):
            load_pipeline_config(path, check_files=False)

    @pytest.mark.unit
    def test_out_override(self, demo_dir, tmp_path):
        cfg = load_pipeline_config(demo_dir / "pipeline.conf", out=tmp_path / "elsewhere")
        assert cfg.out == (tmp_path / "elsewhere").resolve()
        assert cfg.lexicon == demo_dir / "lexicon.tsv"


class TestPipelinePlan:
    """Dry-run planning"""

    @pytest.mark.unit
    def test_plan_names_every_stage(self, demo_dir):
        cfg = load_pipeline_config(demo_dir / "fast.conf", out=demo_dir / "unused")
        lines = PipelineRunner(cfg, silent=True).plan()
        assert [line.split()[0] for line in lines[:5]] == ["M0", "M1", "M2", "M3", "M4"]
        assert lines[-1].startswith("outputs under")
        assert not (demo_dir / "unused").exists()


@pytest.mark.slow
@pytest.mark.integration
class TestPipelineRun:
    """End-to-end run over the generated demo data"""

    def test_all_stages_reported(self, pipeline_run):
        _, report = pipeline_run
        assert [s.stage for s in report.stages] == ["M0", "M1", "M2", "M3", "M4"]
        assert report.stage("M0").scheme == "BIO"
        assert {report.stage(name).scheme for name in ("M1", "M2", "M3", "M4")} == {"BIOES"}

    def test_training_size_never_shrinks(self, pipeline_run):
        _, report = pipeline_run
        tokens = [report.stage(name).tokens for name in ("M1", "M2", "M3")]
        assert tokens == sorted(tokens)
        assert report.stage("M2").sentences == 4 * report.stage("M1").sentences
        assert report.stage("M3").sentences == report.stage("M2").sentences + report.silver_sentences
        assert report.stage("M4").tokens == report.stage("M3").tokens

    def test_rules_only_applied_when_they_help(self, pipeline_run):
        _, report = pipeline_run
        tuning = report.tuning
        assert set(tuning.f1_by_score) == {2, 3}
        if report.rules_applied:
            assert tuning.best_f1 >= tuning.baseline_f1
            assert report.rules_applied == len(tuning.rules)

    def test_outputs_written(self, pipeline_run):
        cfg, _ = pipeline_run
        out = cfg.out
        for name in ("m0", "m1", "m2", "m3"):
            assert (out / name / "model.yaml").is_file()
            assert (out / name / "test.pred.conll").is_file()
        assert (out / "m4" / "rules.txt").is_file()
        assert (out / "summary.txt").read_text(encoding="utf-8").startswith("stage")
        silver = load_conll(out / "m3" / "silver.conll")
        assert silver.scheme is Scheme.BIOES

    def test_same_inputs_same_summary(self, pipeline_run):
        cfg, _ = pipeline_run
        first = (cfg.out / "summary.yaml").read_bytes()
        run_pipeline(cfg, silent=True)
        assert (cfg.out / "summary.yaml").read_bytes() == first

    def test_missing_input_fails_in_load_stage(self, demo_dir, tmp_path):
        cfg = load_pipeline_config(demo_dir / "fast.conf", out=tmp_path / "run")
        broken = build_pipeline_config({**cfg.to_dict(), "train": tmp_path / "gone.conll",
                                        "test": cfg.test, "raw": cfg.raw, "out": tmp_path / "run"})
        with pytest.raises(PipelineStageError) as exc_info:
            run_pipeline(broken, silent=True)
        assert exc_info.value.stage == "load"


@pytest.mark.slow
@pytest.mark.integration
class TestDemoLadder:
    """The bundled demo at its default size leaves room for every stage"""

    def test_default_demo_run(self, tmp_path):
        files = generate_demo(tmp_path / "demo")
        cfg = load_pipeline_config(files.config, out=tmp_path / "run")
        started = time.perf_counter()
        report = run_pipeline(cfg, silent=True)
        elapsed = time.perf_counter() - started

        assert report.stage("M0").report.f1 < 100.0
        assert report.tuning.rules
        assert (cfg.out / "m4" / "rules.txt").read_text(encoding="utf-8").strip()
        assert report.tuning.best_f1 >= report.tuning.baseline_f1
        assert report.rules_applied == len(report.tuning.rules)
        assert elapsed < 300
