"""Unit tests for Markdown report generator."""

import pytest

from rmatrix.report.md_generator import EXPLANATIONS, MarkdownReportGenerator


@pytest.mark.unit
class TestMarkdownReportGenerator:
    """Unit tests for MarkdownReportGenerator class."""

    def test_generator_initialization(self, sample_results):
        """Test MarkdownReportGenerator initialization."""
        generator = MarkdownReportGenerator(sample_results)
        assert generator.results == sample_results
        assert generator.metadata == sample_results['metadata']
        assert generator.summary == sample_results['summary']
        assert generator.checks == sample_results['checks']

    def test_generate_markdown_content(self, sample_results):
        """Test header, metadata and summary sections."""
        markdown = MarkdownReportGenerator(sample_results).get_markdown()

        assert "# rmatrix Report: `verify`" in markdown
        assert "**Algebra:** sl3-split" in markdown
        assert "## 🔴 Summary" in markdown
        assert "- **Failed:** 1" in markdown
        assert "- **mcybe_residual:** 1.500e-16" in markdown
        assert markdown.endswith("*Generated by rmatrix*\n")

    def test_markdown_includes_explanation(self, sample_results):
        """Test that the command explanation is included."""
        markdown = MarkdownReportGenerator(sample_results).get_markdown()

        assert "📚 What is this?" in markdown
        assert EXPLANATIONS["verify"] in markdown

    def test_every_command_explained(self):
        """Test that each CLI command has an explanation."""
        expected = {"verify", "verify-bialgebra", "flow", "factorise", "compare", "toda"}
        assert expected <= set(EXPLANATIONS)

    def test_checks_table(self, sample_results):
        """Test the checks table and the failed list."""
        markdown = MarkdownReportGenerator(sample_results).get_markdown()

        assert "| Check | Value | Tolerance | Status |" in markdown
        assert "| mcybe_residual | 1.500e-16 | 1.000e-10 | ✅ |" in markdown
        assert "| jacobi_residual_R | 2.500e-01 | 1.000e-10 | 🔴 |" in markdown
        assert "- `jacobi_residual_R` (worst basis pair (0, 3))" in markdown

    def test_conventions_section(self, sample_results):
        """Test that conventions are listed when present."""
        sample_results['metadata']['conventions'] = {"R_plus": "(R + I)/2"}
        markdown = MarkdownReportGenerator(sample_results).get_markdown()

        assert "## Conventions" in markdown
        assert "- **R_plus:** (R + I)/2" in markdown

    def test_no_checks(self):
        """Test a report without checks."""
        results = {"metadata": {"command": "init"}, "summary": {"passed": True}, "checks": []}
        markdown = MarkdownReportGenerator(results).get_markdown()

        assert "## ✅ Summary" in markdown
        assert "## Checks" not in markdown
        assert "📚 What is this?" not in markdown

    def test_generate_to_file(self, sample_results, temp_dir):
        """Test generating markdown to a file."""
        output_path = temp_dir / "report.md"
        MarkdownReportGenerator(sample_results).generate(output_path)

        assert output_path.exists()
        assert "# rmatrix Report" in output_path.read_text(encoding="utf-8")

    def test_format_values(self):
        """Test value formatting."""
        assert MarkdownReportGenerator._format(0.000123) == "1.230e-04"
        assert MarkdownReportGenerator._format(True) == "True"
        assert MarkdownReportGenerator._format(None) == "None"
        assert MarkdownReportGenerator._format("triangular") == "triangular"
        assert MarkdownReportGenerator._format(3) == "3"
