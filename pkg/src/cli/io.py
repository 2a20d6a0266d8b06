"""CSV emission and run manifests."""

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src import __version__
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

MANIFEST_PATTERN = "manifest_{run_id}.json"


def prepare_output_dir(path: str) -> str:
    """Create ``path`` if needed and make sure it is writable; raises OSError otherwise."""
    os.makedirs(path, exist_ok=True)
    if not os.access(path, os.W_OK):
        raise PermissionError(f"output directory is not writable: {path}")
    return path


def write_csv(rows: Sequence[Dict[str, Any]], path: str,
              columns: Optional[List[str]] = None) -> str:
    """Write rows as comma-separated values with a header and LF line endings.

    Every numeric cell must be finite.
    """
    frame = pd.DataFrame(list(rows), columns=columns)
    numeric = frame.select_dtypes(include=[np.number])
    if not numeric.empty and not np.isfinite(numeric.to_numpy(dtype=float)).all():
        raise DomainError(f"refusing to write non-finite values to {path}")

    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_json(data: Dict, path: str) -> str:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def make_run_id(command: str, config: Dict, seeds: Sequence[int]) -> str:
    """Stable identifier of a run: equal inputs give equal ids."""
    payload = json.dumps({"command": command, "config": config, "seeds": list(seeds)},
                         sort_keys=True, default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class RunManifest:
    """Provenance of one command invocation."""
    command: str
    config: Dict[str, Any]
    seeds: List[int]
    version: str = __version__
    wall_clock_s: float = 0.0
    outputs: List[str] = field(default_factory=list)

    @property
    def run_id(self) -> str:
        return make_run_id(self.command, self.config, self.seeds)

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization."""
        data = asdict(self)
        data["run_id"] = self.run_id
        return data

    @property
    def file_name(self) -> str:
        return MANIFEST_PATTERN.format(run_id=self.run_id)

    def write(self, out_dir: str) -> str:
        """Write next to the outputs; runs sharing a directory keep separate manifests."""
        path = write_json(self.to_dict(), os.path.join(out_dir, self.file_name))
        logger.info(f"Run {self.run_id} manifest written to {path}")
        return path
