import os
import json
import hashlib
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Dict, Any, Iterable, List, Optional, Sequence
from .logger import setup_logger
from .utils import VERSION

# Initialize logger
logger = setup_logger('eppa')


@dataclass
class RunRecord:
    """One command invocation: what was asked, on which input, and what came out."""
    command: List[str]
    input_digest: Optional[str] = None
    seed: Optional[int] = None
    outputs: Dict[str, Any] = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec='seconds'))
    version: str = VERSION

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def input_digest(text: str) -> str:
    """SHA-256 hex digest of an input file's text."""
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


class StorageService:
    """
    Local file storage for witnesses, label tables and result logs.
    JSON documents are written whole; result logs are append-only JSON lines.
    """

    def _ensure_local_dir(self, filepath: str):
        """Ensure the local directory exists for a file path."""
        directory = os.path.dirname(filepath)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
            logger.debug(f"Created local directory: {directory}")

    def save_text(self, content: str, filename: str, encoding: str = 'utf-8') -> None:
        try:
            self._ensure_local_dir(filename)
            with open(filename, 'w', encoding=encoding) as f:
                f.write(content)
            logger.debug(f"Successfully saved {filename}")
        except OSError as e:
            logger.error(f"Failed to save {filename}: {str(e)}")
            raise

    def save_json(self, data: Any, filename: str, encoding: str = 'utf-8') -> None:
        """
        Save JSON data to a local file.

        Args:
            data: The data to save
            filename: The filename (e.g., 'var/witness.graph.labels.json')
            encoding: Text encoding
        """
        self.save_text(json.dumps(data, indent=2, ensure_ascii=False) + '\n', filename, encoding)

    def load_json(self, filename: str, encoding: str = 'utf-8') -> Any:
        """
        Load JSON data from a local file.

        Raises:
            FileNotFoundError: If the file doesn't exist
        """
        try:
            with open(filename, 'r', encoding=encoding) as f:
                content = f.read()
            logger.debug(f"Successfully loaded {filename}")
            return json.loads(content)
        except FileNotFoundError:
            raise FileNotFoundError(f"File not found: {filename}")

    def append_records(self, records: Iterable[Dict[str, Any]], filename: str, encoding: str = 'utf-8') -> int:
        """
        Append records to a JSON-lines file, one compact object per line with sorted keys.

        Returns:
            Number of records written
        """
        lines = [json.dumps(record, sort_keys=True, ensure_ascii=False) for record in records]
        try:
            self._ensure_local_dir(filename)
            with open(filename, 'a', encoding=encoding) as f:
                for line in lines:
                    f.write(line + '\n')
        except OSError as e:
            logger.error(f"Failed to append to {filename}: {str(e)}")
            raise
        logger.debug(f"Appended {len(lines)} record(s) to {filename}")
        return len(lines)

    def load_records(self, filename: str, encoding: str = 'utf-8') -> List[Dict[str, Any]]:
        with open(filename, 'r', encoding=encoding) as f:
            return [json.loads(line) for line in f if line.strip()]


def get_storage_service() -> StorageService:
    return StorageService()


def write_results(records: Sequence[RunRecord], filename: str) -> int:
    """Append run records to the JSON-lines results log."""
    return get_storage_service().append_records((r.to_dict() for r in records), filename)
