"""
Momentum-ladder trajectories as long-format CSV (t, m, re_c, im_c, population).
"""
import io
from typing import Any, Mapping

import numpy as np
import pandas as pd

from app.ladder import TRAJECTORY_COLUMNS, trajectory_frame
from app.models.pulse import LadderTrajectory
from app.repositories.base import CsvRepository


class TrajectoryCsvRepository(CsvRepository[LadderTrajectory]):
    def serialize(self, entity: LadderTrajectory, header: Mapping[str, Any]) -> str:
        trajectory_header = {
            **header,
            "steps": entity.steps,
            "max_norm_error": f"{entity.max_norm_error:.3e}",
        }
        body = trajectory_frame(entity).to_csv(index=False, float_format="%.17g")
        return self.with_header(body, trajectory_header)

    def deserialize(self, text: str) -> LadderTrajectory:
        header, body = self.split_header(text)
        frame = pd.read_csv(io.StringIO(body), float_precision="round_trip")
        if list(frame.columns) != TRAJECTORY_COLUMNS:
            raise ValueError(f"expected columns {TRAJECTORY_COLUMNS}, got {list(frame.columns)}")
        rungs = np.unique(frame["m"].to_numpy())
        times = frame["t"].to_numpy()[:: len(rungs)]
        amplitudes = (frame["re_c"].to_numpy() + 1j * frame["im_c"].to_numpy()).reshape(len(times), len(rungs))
        return LadderTrajectory(
            times=times,
            amplitudes=amplitudes,
            m_min=int(rungs[0]),
            max_norm_error=float(header.get("max_norm_error", 0.0)),
            steps=int(header.get("steps", 0)),
        )
