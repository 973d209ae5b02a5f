"""Markdown Report Generator

Generates concise Markdown summaries from run results.
"""

from pathlib import Path
from typing import Any
import logging

from rmatrix.utils.file_utils import write_text_atomic

logger = logging.getLogger(__name__)

# One paragraph per command, shown under "What is this?"
EXPLANATIONS: dict[str, str] = {
    "verify": (
        "Checks that R turns the second bracket [X,Y]_R = 1/2([RX,Y] + [X,RY]) into a "
        "Lie bracket. The modified classical Yang-Baxter equation is scanned over every "
        "pair of basis elements, and the Jacobi identity of [.,.]_R is checked on every triple."
    ),
    "verify-bialgebra": (
        "Checks a tensor r-matrix: ad-invariance of its symmetric part, the cocycle "
        "condition of its coboundary, the Schouten bracket of its skew part and the "
        "<r,r> bracket. Together these decide whether r is triangular, quasi-triangular "
        "or factorisable."
    ),
    "flow": (
        "Integrates the Lax equation dL/dt = [L, M(L)] with fixed-step Runge-Kutta and "
        "monitors the spectral invariants, which the flow must conserve."
    ),
    "factorise": (
        "Factorises a group element as g = g_plus g_minus^-1 and reports the reassembly residual."
    ),
    "compare": (
        "Solves the same Lax equation twice, once by integration and once by "
        "factorising exp(t grad H), and reports how far the two answers differ."
    ),
    "toda": (
        "Runs one of the Toda lattice constructions and checks it against its "
        "independent oracle (Flaschka equations, orbit formula or dense commutator)."
    ),
}


class MarkdownReportGenerator:
    """Generates Markdown summary reports from run results."""

    def __init__(self, results: dict[str, Any]):
        """Initialize generator.

        Args:
            results: Complete run results
        """
        self.results = results
        self.metadata = results.get('metadata', {})
        self.summary = results.get('summary', {})
        self.checks = results.get('checks', [])

    def generate(self, output_path: Path | str) -> None:
        """Generate Markdown report and save to file.

        Args:
            output_path: Path where to save the Markdown report
        """
        output_path = Path(output_path)
        write_text_atomic(output_path, self.get_markdown())
        logger.info(f"Markdown report generated: {output_path}")

    def get_markdown(self) -> str:
        """Generate Markdown content.

        Returns:
            Markdown string
        """
        lines = []
        command = self.metadata.get('command', 'unknown')

        lines.append(f"# rmatrix Report: `{command}`")
        lines.append("")
        for key in ('algebra', 'r_matrix', 'system', 'variant', 'seed'):
            if key in self.metadata:
                lines.append(f"**{key.replace('_', ' ').title()}:** {self.metadata[key]}")
        lines.append("")

        passed = self.summary.get('passed', False)
        lines.append(f"## {self._status_emoji(passed)} Summary")
        lines.append("")
        lines.append(f"- **Checks:** {self.summary.get('checks_total', len(self.checks))}")
        lines.append(f"- **Failed:** {self.summary.get('checks_failed', 0)}")
        for key, value in sorted(self.summary.items()):
            if key in ('passed', 'checks_total', 'checks_failed'):
                continue
            lines.append(f"- **{key}:** {self._format(value)}")
        lines.append("")

        if command in EXPLANATIONS:
            lines.append("**📚 What is this?**")
            lines.append("")
            lines.append(EXPLANATIONS[command])
            lines.append("")

        self._add_checks_table(lines)
        self._add_conventions(lines)

        lines.append("---")
        lines.append("*Generated by rmatrix*")
        return "\n".join(lines) + "\n"

    def _add_checks_table(self, lines: list[str]) -> None:
        if not self.checks:
            return
        lines.append("## Checks")
        lines.append("")
        lines.append("| Check | Value | Tolerance | Status |")
        lines.append("|-------|-------|-----------|--------|")
        for check in self.checks:
            lines.append(
                f"| {check.get('name', '?')} | {self._format(check.get('value'))} | "
                f"{self._format(check.get('tolerance'))} | {self._status_emoji(check.get('passed', False))} |"
            )
        lines.append("")

        failed = [c for c in self.checks if not c.get('passed', False)]
        if failed:
            lines.append("**🔴 Failed checks:**")
            lines.append("")
            for check in failed:
                detail = check.get('detail')
                suffix = f" ({detail})" if detail else ""
                lines.append(f"- `{check.get('name')}`{suffix}")
            lines.append("")

    def _add_conventions(self, lines: list[str]) -> None:
        conventions = self.metadata.get('conventions')
        if not conventions:
            return
        lines.append("## Conventions")
        lines.append("")
        for key, value in sorted(conventions.items()):
            lines.append(f"- **{key}:** {value}")
        lines.append("")

    @staticmethod
    def _format(value: Any) -> str:
        if isinstance(value, bool) or value is None:
            return str(value)
        if isinstance(value, float):
            return f"{value:.3e}"
        return str(value)

    @staticmethod
    def _status_emoji(passed: bool) -> str:
        return "✅" if passed else "🔴"
