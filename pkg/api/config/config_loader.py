"""
Reference data loader
Loads the embedded reference tables (JSON, one file per table) and verifies
each against its recorded sha256 checksum before use
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..errors import ReferenceDataError

logger = logging.getLogger(__name__)

TABLE_IDS = ('OBJ', 'T1', 'T2', 'T3', 'T4', 'T5', 'T6', 'T7', 'T8')


class ConfigLoader:
    """
    Cached loader for the reference tables shipped in config/reference
    """

    def __init__(self, reference_dir: Optional[Path] = None):
        self.reference_dir = Path(reference_dir) if reference_dir else Path(__file__).parent / 'reference'
        self._cache: Dict[str, Dict[str, Any]] = {}
        self._checksums: Optional[Dict[str, str]] = None

    def _table_file(self, table_id: str) -> Path:
        return self.reference_dir / f"{table_id}.json"

    def checksums(self) -> Dict[str, str]:
        if self._checksums is None:
            path = self.reference_dir / 'checksums.json'
            try:
                self._checksums = json.loads(path.read_text(encoding='utf-8'))
            except FileNotFoundError:
                raise ReferenceDataError(f"Checksum file not found: {path}") from None
            except json.JSONDecodeError as e:
                raise ReferenceDataError(f"Invalid JSON in checksum file {path}: {e}") from None
        return self._checksums

    def file_digest(self, table_id: str) -> str:
        path = self._table_file(table_id)
        try:
            return hashlib.sha256(path.read_bytes()).hexdigest()
        except FileNotFoundError:
            raise ReferenceDataError(f"Reference table not found: {path}") from None

    def load_table(self, table_id: str, verify: bool = True) -> Dict[str, Any]:
        """
        Load one reference table

        Args:
            table_id: one of OBJ, T1..T8
            verify: check the file against its recorded checksum

        Returns:
            Parsed table
        """
        if table_id in self._cache:
            return self._cache[table_id]
        if table_id not in TABLE_IDS:
            raise ReferenceDataError(f"Unknown reference table: {table_id}")
        if verify:
            problem = self.checksum_problem(table_id)
            if problem:
                raise ReferenceDataError(problem)
        path = self._table_file(table_id)
        try:
            table = json.loads(path.read_text(encoding='utf-8'))
        except json.JSONDecodeError as e:
            raise ReferenceDataError(f"Invalid JSON in reference table {path}: {e}") from None
        self._cache[table_id] = table
        return table

    def checksum_problem(self, table_id: str) -> Optional[str]:
        """None when the table matches its checksum, otherwise a located description"""
        expected = self.checksums().get(table_id)
        if expected is None:
            return f"No checksum recorded for {table_id}"
        actual = self.file_digest(table_id)
        if actual != expected:
            return (f"Checksum mismatch for {self._table_file(table_id).name}: "
                    f"expected {expected[:12]}..., got {actual[:12]}...")
        return None

    def verify_checksums(self) -> List[str]:
        """Problems across every table; empty when all tables are intact"""
        problems = []
        for table_id in TABLE_IDS:
            try:
                problem = self.checksum_problem(table_id)
            except ReferenceDataError as e:
                problem = str(e)
            if problem:
                problems.append(problem)
        return problems

    def reload(self) -> None:
        self._cache.clear()
        self._checksums = None


# Global loader instance
config_loader = ConfigLoader()


def get_reference_table(table_id: str) -> Dict[str, Any]:
    return config_loader.load_table(table_id)


def get_reference_objective() -> str:
    return config_loader.load_table('OBJ')['polynomial']
