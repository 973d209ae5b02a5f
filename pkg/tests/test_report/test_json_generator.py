"""Unit tests for JSON report generator."""

import json

import numpy as np
import pytest

from rmatrix.report.json_generator import JSONReportGenerator


@pytest.mark.unit
class TestJSONReportGenerator:
    """Unit tests for JSONReportGenerator class."""

    def test_generator_initialization(self, sample_results):
        """Test JSONReportGenerator initialization."""
        generator = JSONReportGenerator(sample_results)
        assert generator.results == sample_results

    def test_generate_json_to_file(self, sample_results, temp_dir):
        """Test generating JSON to a file."""
        output_path = temp_dir / "report.json"
        JSONReportGenerator(sample_results).generate(output_path)

        assert output_path.exists()
        with open(output_path, 'r', encoding='utf-8') as f:
            data = json.load(f)

        assert data == sample_results
        assert output_path.read_text(encoding='utf-8').endswith("}\n")

    def test_no_temporary_files_left(self, sample_results, temp_dir):
        """Test that the atomic write leaves only the report."""
        output_path = temp_dir / "report.json"
        JSONReportGenerator(sample_results).generate(output_path)

        assert [p.name for p in temp_dir.iterdir()] == ["report.json"]

    def test_sorted_and_deterministic(self, sample_results):
        """Test that keys are sorted and output is stable."""
        first = JSONReportGenerator(sample_results).get_json_string()
        second = JSONReportGenerator(dict(reversed(list(sample_results.items())))).get_json_string()

        assert first == second
        assert first.index('"checks"') < first.index('"metadata"') < first.index('"summary"')

    def test_compact_output(self, sample_results):
        """Test non-pretty output is a single line."""
        compact = JSONReportGenerator(sample_results).get_json_string(pretty=False)
        assert "\n" not in compact

    def test_numpy_values(self):
        """Test numpy scalars and arrays serialise as builtins."""
        results = {"value": np.float64(0.5), "count": np.int64(3), "matrix": np.eye(2)}
        data = json.loads(JSONReportGenerator(results).get_json_string())

        assert data == {"value": 0.5, "count": 3, "matrix": [[1.0, 0.0], [0.0, 1.0]]}
