"""Trajectory CSV writer.

Toda runs are written in Flaschka columns
    t, a_1..a_(N+1), b_1..b_N, H1, H2, eig_1..eig_(N+1)
other runs as the flattened Lax matrix followed by the conserved ledger.
"""

from pathlib import Path
from typing import Any, Literal
import csv
import io
import logging

import numpy as np

from rmatrix.dynamics.lax_flows import Trajectory
from rmatrix.utils.file_utils import write_text_atomic

logger = logging.getLogger(__name__)

Layout = Literal["toda", "matrix"]


class TrajectoryCSVWriter:
    """Writes a Trajectory as CSV for offline plotting."""

    def __init__(self, trajectory: Trajectory, layout: Layout = "matrix", precision: int = 15):
        self.trajectory = trajectory
        self.layout = layout
        self.precision = precision

    def columns(self) -> list[str]:
        if self.layout == "matrix":
            return self.trajectory.columns()
        sites = self.trajectory.algebra.matrix_size
        return [
            "t",
            *[f"a_{i + 1}" for i in range(sites)],
            *[f"b_{i + 1}" for i in range(sites - 1)],
            "H1",
            "H2",
            *[f"eig_{i + 1}" for i in range(sites)],
        ]

    def rows(self) -> list[list[float]]:
        if self.layout == "matrix":
            return self.trajectory.to_rows()

        traj = self.trajectory
        H1, H2 = traj.conserved.get("H1", []), traj.conserved.get("H2", [])
        rows = []
        for index, (t, L) in enumerate(zip(traj.times, traj.states)):
            rows.append([
                t,
                *np.diag(L).tolist(),
                *np.diag(L, -1).tolist(),
                H1[index],
                H2[index],
                *np.real(traj.eigenvalues[index]).tolist(),
            ])
        return rows

    def get_csv_string(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns())
        for row in self.rows():
            writer.writerow([self._format(value) for value in row])
        return buffer.getvalue()

    def generate(self, output_path: Path | str) -> None:
        output_path = Path(output_path)
        write_text_atomic(output_path, self.get_csv_string())
        logger.info(f"Trajectory CSV written: {output_path} ({len(self.trajectory)} rows)")

    def _format(self, value: Any) -> str:
        return f"{float(value):.{self.precision}g}"
