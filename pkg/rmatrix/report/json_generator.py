"""JSON Report Generator

Generates machine-readable JSON reports from run results. Keys are sorted
and no timestamp is added, so a fixed seed reproduces the file byte for
byte.
"""

import json
from pathlib import Path
from typing import Any
import logging

import numpy as np

from rmatrix.utils.file_utils import write_text_atomic

logger = logging.getLogger(__name__)


def _to_builtin(value: Any) -> Any:
    """json.dump fallback for numpy scalars and arrays."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return str(value)


class JSONReportGenerator:
    """Generates JSON reports from run results."""

    def __init__(self, results: dict[str, Any]):
        """Initialize generator.

        Args:
            results: Complete run results
        """
        self.results = results

    def generate(self, output_path: Path | str) -> None:
        """Generate JSON report and save it atomically.

        Args:
            output_path: Path where to save the JSON report
        """
        output_path = Path(output_path)
        write_text_atomic(output_path, self.get_json_string() + "\n")
        logger.info(f"JSON report generated: {output_path}")

    def get_json_string(self, pretty: bool = True) -> str:
        """Get JSON report as string.

        Args:
            pretty: Whether to pretty-print the JSON

        Returns:
            JSON string
        """
        indent = 2 if pretty else None
        return json.dumps(self.results, indent=indent, sort_keys=True, default=_to_builtin)
