"""
Unit tests for report rendering, metrics export, settings and logging
"""
import json
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from core.exact_linalg import fraction_matrix
from core.expression_parser import parse_scalar
from utils.config import Settings, settings as active_settings
from utils.logger import setup_logger
from utils.metrics import record_check, write_metrics
from utils.reporting import render, to_jsonable


@pytest.fixture
def report():
    return {
        "system": "B2",
        "gram": fraction_matrix([[3, 1], [1, "3/2"]]),
        "unity": Fraction(1, 2),
        "points": [{"index": 0, "passed": True}, {"index": 1, "passed": False}],
        "nested": {"parameter": parse_scalar("2*t+1", ["t"]), "flag": np.bool_(True)},
    }


class TestRender:
    """Test to_jsonable and render"""

    def test_exact_values_become_strings(self):
        assert to_jsonable(Fraction(-3, 4)) == "-3/4"
        assert to_jsonable(np.int64(5)) == 5
        assert to_jsonable(np.array([1.5, 2.0])) == [1.5, 2.0]

    def test_json(self, report):
        data = json.loads(render(report, "json"))
        assert data["gram"] == [["3", "1"], ["1", "3/2"]]
        assert data["unity"] == "1/2"
        assert data["nested"]["flag"] is True
        assert parse_scalar(data["nested"]["parameter"], ["t"]) == parse_scalar("2*t+1", ["t"])

    def test_json_is_deterministic(self, report):
        assert render(report, "json") == render(report, "json")

    def test_text(self, report):
        text = render(report, "text")
        assert text.splitlines()[0] == "system: B2"
        assert "gram:" in text
        assert "3/2" in text
        assert "nested:" in text and "  flag: True" in text

    def test_text_records_table(self, report):
        """Lists of records are printed as a table with a header row"""
        lines = render(report, "text").splitlines()
        start = lines.index("points:")
        assert "index" in lines[start + 1] and "passed" in lines[start + 1]


class TestMetrics:
    """Test the Prometheus textfile export"""

    def test_write_metrics(self, tmp_path):
        record_check("vee", True)
        record_check("vee", False)
        path = tmp_path / "out" / "metrics.prom"
        write_metrics(path)
        text = path.read_text()
        assert 'vee_insight_checks_total{check="vee",outcome="pass"}' in text
        assert 'vee_insight_checks_total{check="vee",outcome="fail"}' in text


class TestSettings:
    """Test Settings validation"""

    def test_defaults(self):
        settings = Settings()
        assert settings.default_grid == 64
        assert settings.hierarchy_coordinate_bound == 2

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("VEE_INSIGHT_SAMPLE_POINTS", "7")
        assert Settings().sample_points == 7

    def test_grid_must_be_power_of_two(self):
        with pytest.raises(ValidationError):
            Settings(default_grid=48)

    def test_amplitude_fraction_range(self):
        with pytest.raises(ValidationError):
            Settings(loop_amplitude_fraction=1.5)


class TestLogger:
    """Test setup_logger sinks"""

    def test_json_file_sink(self, tmp_path, monkeypatch):
        monkeypatch.setattr(active_settings, "log_format_json", True)
        path = tmp_path / "logs" / "vee.log"
        log = setup_logger(level="INFO", log_file=str(path))
        log.info("planes enumerated")
        log.remove()
        record = json.loads(path.read_text().splitlines()[0])
        assert record["record"]["message"] == "planes enumerated"
        assert record["record"]["level"]["name"] == "INFO"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
