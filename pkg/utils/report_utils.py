"""
Report Writing Utilities
JSON, CSV, text and sparse-triplet writers for run outputs, plus the run manifest
recorded next to every output directory
"""

import csv
import json
import logging
import platform
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import psutil
import scipy

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def to_jsonable(value: Any) -> Any:
    """Plain JSON types for numpy scalars/arrays, complex numbers, tuples and paths"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': float(value.real), 'im': float(value.imag)}
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Path):
        return str(value)
    return value


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path: PathLike, data: Any) -> Path:
    path = _prepare(path)
    path.write_text(json.dumps(to_jsonable(data), indent=2) + '\n', encoding='utf-8')
    logger.debug(f"🔍 Wrote {path}")
    return path


def write_text(path: PathLike, text: str) -> Path:
    path = _prepare(path)
    path.write_text(text, encoding='utf-8')
    logger.debug(f"🔍 Wrote {path}")
    return path


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    Write a CSV file

    Args:
        path: output file
        header: column names
        rows: sequences matching the header

    Returns:
        The written path
    """
    path = _prepare(path)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
            count += 1
    logger.debug(f"🔍 Wrote {count} rows to {path}")
    return path


def _csv_cell(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    return value


def write_triplets(path: PathLike, rows: Sequence[int], cols: Sequence[int], values: Sequence[float]) -> Path:
    """Coordinate format, one `row col value` line per stored entry"""
    path = _prepare(path)
    with path.open('w', encoding='utf-8') as handle:
        for r, c, v in zip(rows, cols, values):
            handle.write(f"{int(r)} {int(c)} {float(v)!r}\n")
    logger.debug(f"🔍 Wrote {len(values)} triplets to {path}")
    return path


def read_triplets(path: PathLike):
    """Inverse of write_triplets: (rows, cols, values) arrays"""
    data = np.loadtxt(path, ndmin=2)
    if data.size == 0:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int), np.zeros(0)
    return data[:, 0].astype(int), data[:, 1].astype(int), data[:, 2]


def memory_snapshot() -> Dict[str, float]:
    """Resident and virtual memory of this process in MiB"""
    info = psutil.Process().memory_info()
    return {
        'rss_mb': round(info.rss / 2 ** 20, 1),
        'vms_mb': round(info.vms / 2 ** 20, 1),
    }


def library_versions() -> Dict[str, str]:
    return {
        'python': platform.python_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
    }


@dataclass
class RunManifest:
    """What ran, with which configuration, how long it took and what it wrote"""
    command: str
    argv: List[str] = field(default_factory=lambda: list(sys.argv))
    config: Dict[str, Any] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    status: str = 'running'
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    wall_seconds: Optional[float] = None
    peak_rss_mb: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)
    _clock: float = field(default_factory=time.perf_counter, repr=False)

    def checkpoint(self) -> None:
        """Sample memory; the manifest keeps the maximum"""
        self.peak_rss_mb = max(self.peak_rss_mb, memory_snapshot()['rss_mb'])

    def add_output(self, path: PathLike) -> None:
        self.outputs.append(str(path))

    def finish(self, status: str = 'ok') -> 'RunManifest':
        self.checkpoint()
        self.status = status
        self.wall_seconds = round(time.perf_counter() - self._clock, 3)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'argv': self.argv,
            'status': self.status,
            'started_at': self.started_at,
            'wall_seconds': self.wall_seconds,
            'peak_rss_mb': self.peak_rss_mb,
            'versions': library_versions(),
            'config': self.config,
            'outputs': self.outputs,
            'details': self.details,
        }

    def write(self, out_dir: PathLike) -> Path:
        path = write_json(Path(out_dir) / 'manifest.json', self.to_dict())
        logger.info(f"📊 Manifest written to {path} ({self.status}, {self.wall_seconds}s, "
                    f"peak {self.peak_rss_mb} MiB)")
        return path
