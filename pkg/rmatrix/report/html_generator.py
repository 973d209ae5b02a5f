"""HTML report generator for rmatrix."""

from pathlib import Path
from typing import Any
import logging

try:
    from jinja2 import Environment, BaseLoader, TemplateNotFound, select_autoescape
except ImportError:
    raise ImportError(
        "jinja2 is required for HTML report generation. Install with: pip install jinja2"
    )

from rmatrix.report.html_template import CHECKS_SECTION, CONVENTIONS_SECTION, HTML_TEMPLATE
from rmatrix.report.md_generator import EXPLANATIONS
from rmatrix.utils.file_utils import write_text_atomic

logger = logging.getLogger(__name__)


class MemoryLoader(BaseLoader):
    """Loads templates from memory (strings)."""

    def __init__(self, templates: dict[str, str]):
        self.templates = templates

    def get_source(
        self, environment: Environment, template: str
    ) -> tuple[str, str | None, Any]:
        """Get template source from memory."""
        if template in self.templates:
            source = self.templates[template]
            return source, None, lambda: True
        raise TemplateNotFound(template)


class HtmlReportGenerator:
    """Generates HTML reports from run results."""

    def __init__(self, results: dict[str, Any]):
        """Initialize HTML report generator.

        Args:
            results: Run results dictionary
        """
        self.results = results
        self.templates = {
            "main.html": HTML_TEMPLATE,
            "checks_section.html": CHECKS_SECTION,
            "conventions_section.html": CONVENTIONS_SECTION,
        }
        self.env = Environment(
            loader=MemoryLoader(self.templates),
            autoescape=select_autoescape(default=True),
        )
        self.env.filters["sci"] = self._sci_filter

    def generate(self, output_path: Path | str) -> None:
        """Generate HTML report to file.

        Args:
            output_path: Path to output HTML file
        """
        output_path = Path(output_path)
        write_text_atomic(output_path, self.get_html_string())
        logger.info(f"HTML report generated: {output_path}")

    def get_html_string(self) -> str:
        """Get HTML report as string.

        Returns:
            Complete HTML report as string
        """
        template = self.env.get_template("main.html")
        metadata = self.results.get("metadata", {})
        context = {
            "metadata": metadata,
            "summary": self.results.get("summary", {}),
            "checks": self.results.get("checks", []),
            "explanation": EXPLANATIONS.get(metadata.get("command", "")),
        }
        return template.render(**context)

    @staticmethod
    def _sci_filter(value: Any) -> str:
        """Format floats in scientific notation, leave everything else alone."""
        if isinstance(value, float) and not isinstance(value, bool):
            return f"{value:.3e}"
        return "" if value is None else str(value)
